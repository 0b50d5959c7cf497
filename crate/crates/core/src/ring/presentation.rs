use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::algebra::DegreeZeroAlgebra;
use crate::linalg::{Field, Scalar};
use crate::Error;

/// A negative-degree free generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

impl Generator {
    pub fn is_odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }
}

/// `b_{a0} · g_1^{e_1} ⋯ g_n^{e_n}` with generators in declaration order.
/// Orders by exponent vector, then by A⁰ index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub exps: Vec<u32>,
    pub a0: usize,
}

/// A homogeneous element: a finite combination of normal monomials of one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElement {
    degree: i64,
    terms: BTreeMap<Monomial, Scalar>,
}

impl RingElement {
    pub fn zero(degree: i64) -> RingElement {
        RingElement { degree, terms: BTreeMap::new() }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x += &c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// `self + c·other`; degrees must agree unless one side is zero.
    pub fn add_scaled(&mut self, c: &Scalar, other: &RingElement) {
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            self.degree = other.degree;
        }
        assert_eq!(self.degree, other.degree, "adding ring elements of different degrees");
        for (m, x) in &other.terms {
            self.add_term(m.clone(), c * x);
        }
    }

    pub fn add(&self, other: &RingElement) -> RingElement {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &RingElement) -> RingElement {
        self.combine(other, true)
    }

    fn combine(&self, other: &RingElement, negate: bool) -> RingElement {
        let mut out = self.clone();
        if other.is_zero() {
            return out;
        }
        if out.is_zero() {
            out.degree = other.degree;
        }
        assert_eq!(out.degree, other.degree, "adding ring elements of different degrees");
        for (m, x) in &other.terms {
            out.add_term(m.clone(), x.clone().signed(negate));
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> RingElement {
        let mut out = RingElement::zero(self.degree);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), c * x);
        }
        out
    }

    pub fn neg(&self) -> RingElement {
        let terms = self.terms.iter().map(|(m, x)| (m.clone(), -x)).collect();
        RingElement { degree: self.degree, terms }
    }

    pub fn signed(self, odd: bool) -> RingElement {
        if odd {
            self.neg()
        } else {
            self
        }
    }
}

/// A strongly commutative nonpositive DG ring, free over a finite-dimensional `A⁰` on negative generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgRing {
    field: Field,
    a0: DegreeZeroAlgebra,
    gens: Vec<Generator>,
    diffs: Vec<RingElement>,
}

/// First violated identity of a presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DegreeZero(String),
    GeneratorDegree(String),
    DifferentialDegree(String),
    DifferentialSquare(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DegreeZero(s) => write!(f, "degree-zero algebra: {s}"),
            Violation::GeneratorDegree(g) => write!(f, "generator {g} must have negative degree"),
            Violation::DifferentialDegree(g) => write!(f, "d({g}) has the wrong degree"),
            Violation::DifferentialSquare(g) => write!(f, "d(d({g})) is not zero"),
        }
    }
}

impl DgRing {
    /// Builds a ring without checking; see [`DgRing::verify`].
    pub fn new_unchecked(a0: DegreeZeroAlgebra, gens: Vec<Generator>, diffs: Vec<RingElement>) -> DgRing {
        assert_eq!(gens.len(), diffs.len());
        DgRing { field: a0.field().clone(), a0, gens, diffs }
    }

    /// Builds and verifies a ring.
    pub fn new(a0: DegreeZeroAlgebra, gens: Vec<Generator>, diffs: Vec<RingElement>) -> Result<DgRing, Error> {
        if gens.len() != diffs.len() {
            return Err(Error::InvalidInput("one differential per generator required".into()));
        }
        let r = DgRing::new_unchecked(a0, gens, diffs);
        r.verify().map_err(|v| Error::Verification(v.to_string()))?;
        Ok(r)
    }

    /// The algebra `A⁰` as a DG ring concentrated in degree 0.
    pub fn from_algebra(a0: DegreeZeroAlgebra) -> DgRing {
        DgRing::new_unchecked(a0, Vec::new(), Vec::new())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degree_zero(&self) -> &DegreeZeroAlgebra {
        &self.a0
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn differential_of(&self, g: usize) -> &RingElement {
        &self.diffs[g]
    }

    pub fn is_zero_ring(&self) -> bool {
        self.a0.dim() == 0
    }

    pub fn monomial_degree(&self, m: &Monomial) -> i64 {
        m.exps.iter().zip(&self.gens).map(|(&e, g)| e as i64 * g.degree).sum()
    }

    pub fn one(&self) -> RingElement {
        self.scalar(&self.field.one())
    }

    pub fn scalar(&self, c: &Scalar) -> RingElement {
        let mut r = RingElement::zero(0);
        if self.a0.dim() > 0 {
            r.add_term(self.unit_monomial(0), c.clone());
        }
        r
    }

    fn unit_monomial(&self, a0: usize) -> Monomial {
        Monomial { exps: vec![0; self.gens.len()], a0 }
    }

    /// The degree-zero element with the given `A⁰` coordinates.
    pub fn from_a0(&self, v: &[Scalar]) -> RingElement {
        let mut r = RingElement::zero(0);
        for (i, c) in v.iter().enumerate() {
            r.add_term(self.unit_monomial(i), c.clone());
        }
        r
    }

    /// `A⁰` coordinates of a degree-zero element.
    pub fn to_a0(&self, x: &RingElement) -> Vec<Scalar> {
        assert_eq!(x.degree, 0);
        let mut v = vec![self.field.zero(); self.a0.dim()];
        for (m, c) in &x.terms {
            v[m.a0] = c.clone();
        }
        v
    }

    pub fn a0_basis(&self, i: usize) -> RingElement {
        self.monomial(self.unit_monomial(i), self.field.one())
    }

    pub fn generator(&self, g: usize) -> RingElement {
        let mut exps = vec![0; self.gens.len()];
        exps[g] = 1;
        self.monomial(Monomial { exps, a0: 0 }, self.field.one())
    }

    pub fn monomial(&self, m: Monomial, c: Scalar) -> RingElement {
        let mut r = RingElement::zero(self.monomial_degree(&m));
        if self.a0.dim() > 0 {
            r.add_term(m, c);
        }
        r
    }

    /// Exponent-vector product with its Koszul sign; `None` when an odd generator repeats.
    fn mul_exps(&self, a: &[u32], b: &[u32]) -> Option<(bool, Vec<u32>)> {
        let mut sign = false;
        let mut odd_after = 0u32;
        for i in (0..self.gens.len()).rev() {
            if self.gens[i].is_odd() {
                if a[i] + b[i] > 1 {
                    return None;
                }
                // b's g_i moves left past a's odd generators of larger index.
                if b[i] == 1 && odd_after % 2 == 1 {
                    sign = !sign;
                }
                odd_after += a[i];
            }
        }
        Some((sign, a.iter().zip(b).map(|(x, y)| x + y).collect()))
    }

    pub fn mul(&self, x: &RingElement, y: &RingElement) -> RingElement {
        let mut out = RingElement::zero(x.degree + y.degree);
        for (mx, cx) in &x.terms {
            for (my, cy) in &y.terms {
                let Some((neg, exps)) = self.mul_exps(&mx.exps, &my.exps) else {
                    continue;
                };
                let c = (cx * cy).signed(neg);
                for (k, s) in self.a0.product_coords(mx.a0, my.a0).iter().enumerate() {
                    if !s.is_zero() {
                        out.add_term(Monomial { exps: exps.clone(), a0: k }, &c * s);
                    }
                }
            }
        }
        out
    }

    pub fn d(&self, x: &RingElement) -> RingElement {
        let mut out = RingElement::zero(x.degree + 1);
        for (m, c) in &x.terms {
            let factors: Vec<usize> = m.exps.iter().enumerate().flat_map(|(g, &e)| core::iter::repeat_n(g, e as usize)).collect();
            let mut prefix_exps = vec![0u32; self.gens.len()];
            let mut prefix_deg = 0i64;
            for (k, &g) in factors.iter().enumerate() {
                let mut suffix_exps = vec![0u32; self.gens.len()];
                for &h in &factors[k + 1..] {
                    suffix_exps[h] += 1;
                }
                let prefix = self.monomial(Monomial { exps: prefix_exps.clone(), a0: m.a0 }, c.clone());
                let suffix = self.monomial(Monomial { exps: suffix_exps, a0: 0 }, self.field.one());
                let term = self.mul(&self.mul(&prefix, &self.diffs[g]), &suffix);
                out.add_scaled(&self.field.one().signed(prefix_deg.rem_euclid(2) == 1), &term);
                prefix_exps[g] += 1;
                prefix_deg += self.gens[g].degree;
            }
        }
        out
    }

    /// Basis of `A^i`: exponent vectors of total degree `i` in lexicographic order, then `A⁰` index.
    pub fn degree_basis(&self, i: i64) -> Vec<Monomial> {
        if i > 0 || self.a0.dim() == 0 {
            return Vec::new();
        }
        let mut exps_list = Vec::new();
        let mut cur = vec![0u32; self.gens.len()];
        self.enumerate_exps(0, -i, &mut cur, &mut exps_list);
        exps_list.sort();
        let mut out = Vec::new();
        for e in exps_list {
            for a0 in 0..self.a0.dim() {
                out.push(Monomial { exps: e.clone(), a0 });
            }
        }
        out
    }

    fn enumerate_exps(&self, g: usize, remaining: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if g == self.gens.len() {
            if remaining == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let step = -self.gens[g].degree;
        let max = if self.gens[g].is_odd() { 1 } else { u32::MAX };
        let mut e = 0u32;
        while e <= max && e as i64 * step <= remaining {
            cur[g] = e;
            self.enumerate_exps(g + 1, remaining - e as i64 * step, cur, out);
            e += 1;
        }
        cur[g] = 0;
    }

    pub fn degree_dim(&self, i: i64) -> usize {
        self.degree_basis(i).len()
    }

    /// Coordinates of a homogeneous element in the degree basis.
    pub fn to_vector(&self, x: &RingElement, basis: &[Monomial]) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); basis.len()];
        for (m, c) in &x.terms {
            let k = basis.binary_search(m).expect("monomial outside the degree basis");
            v[k] = c.clone();
        }
        v
    }

    pub fn from_vector(&self, degree: i64, basis: &[Monomial], v: &[Scalar]) -> RingElement {
        let mut r = RingElement::zero(degree);
        for (m, c) in basis.iter().zip(v) {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    /// Checks the degree-zero algebra, generator degrees, homogeneity of `d` and `d² = 0` on generators.
    pub fn verify(&self) -> Result<(), Violation> {
        self.a0.verify().map_err(Violation::DegreeZero)?;
        for (g, dg) in self.gens.iter().zip(&self.diffs) {
            if g.degree >= 0 {
                return Err(Violation::GeneratorDegree(g.name.clone()));
            }
            let homogeneous = dg.terms.keys().all(|m| self.monomial_degree(m) == g.degree + 1);
            if (!dg.is_zero() && dg.degree != g.degree + 1) || !homogeneous {
                return Err(Violation::DifferentialDegree(g.name.clone()));
            }
        }
        for (g, dg) in self.gens.iter().zip(&self.diffs) {
            if !self.d(dg).is_zero() {
                return Err(Violation::DifferentialSquare(g.name.clone()));
            }
        }
        Ok(())
    }

    /// Text form `coeff*gen^k*…*a0symbol`, terms joined by ` + `.
    pub fn format_element(&self, x: &RingElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in &x.terms {
            let mut factors = vec![c.to_string()];
            for (g, &e) in m.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.gens[g].name.clone()),
                    _ => factors.push(format!("{}^{}", self.gens[g].name, e)),
                }
            }
            if m.a0 != 0 {
                factors.push(self.a0.symbols()[m.a0].clone());
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    pub(crate) fn koszul_x3(f: &Field) -> DgRing {
        let a0 = DegreeZeroAlgebra::truncated(f, "x", 3).unwrap();
        let dx = {
            let mut r = RingElement::zero(0);
            r.add_term(Monomial { exps: vec![0], a0: 1 }, f.one());
            r
        };
        DgRing::new(a0, vec![Generator { name: "e".into(), degree: -1 }], vec![dx]).unwrap()
    }

    fn exterior2(f: &Field, dx: bool) -> DgRing {
        // K[x,y]/(x^2,xy,y^2) or K, with e1, e2 of degree -1
        let a0 = if dx {
            DegreeZeroAlgebra::monomial_quotient(f, &["x", "y"], &[vec![2, 0], vec![1, 1], vec![0, 2]]).unwrap()
        } else {
            DegreeZeroAlgebra::base(f)
        };
        let gens = vec![Generator { name: "e1".into(), degree: -1 }, Generator { name: "e2".into(), degree: -1 }];
        let r = DgRing::new_unchecked(a0.clone(), gens.clone(), vec![RingElement::zero(0), RingElement::zero(0)]);
        if !dx {
            return r;
        }
        let diffs = vec![r.a0_basis(1), r.a0_basis(2)];
        DgRing::new(a0, gens, diffs).unwrap()
    }

    #[test]
    fn odd_square_vanishes_and_even_is_polynomial() {
        let f = gf(3);
        let b = koszul_x3(&f);
        let e = b.generator(0);
        assert!(b.mul(&e, &e).is_zero());
        let kt = DgRing::new(
            DegreeZeroAlgebra::base(&f),
            vec![Generator { name: "t".into(), degree: -2 }],
            vec![RingElement::zero(-1)],
        )
        .unwrap();
        let t = kt.generator(0);
        let t2 = kt.mul(&t, &t);
        assert_eq!(t2.degree(), -4);
        assert_eq!(kt.format_element(&t2), "1*t^2");
    }

    #[test]
    fn odd_generators_anticommute() {
        let f = Field::Rational;
        let r = exterior2(&f, false);
        let (e1, e2) = (r.generator(0), r.generator(1));
        assert_eq!(r.mul(&e1, &e2), r.mul(&e2, &e1).neg());
        assert!(!r.mul(&e1, &e2).is_zero());
    }

    #[test]
    fn leibniz_on_product_of_odd_generators() {
        let f = Field::Rational;
        let r = exterior2(&f, true);
        let (e1, e2) = (r.generator(0), r.generator(1));
        let x = r.a0_basis(1);
        let y = r.a0_basis(2);
        let expected = r.mul(&x, &e2).sub(&r.mul(&e1, &y));
        assert_eq!(r.d(&r.mul(&e1, &e2)), expected);
    }

    #[test]
    fn d_is_zero_on_degree_zero() {
        let f = gf(5);
        let b = koszul_x3(&f);
        let x = b.a0_basis(1);
        assert!(b.d(&b.mul(&x, &x)).is_zero());
        assert_eq!(b.d(&b.generator(0)), x);
    }

    #[test]
    fn verify_reports_bad_square() {
        let f = Field::Rational;
        let a0 = DegreeZeroAlgebra::truncated(&f, "x", 3).unwrap();
        let gens = vec![Generator { name: "e".into(), degree: -1 }, Generator { name: "f".into(), degree: -2 }];
        let tmp = DgRing::new_unchecked(a0.clone(), gens.clone(), vec![RingElement::zero(0), RingElement::zero(-1)]);
        let diffs = vec![tmp.a0_basis(1), tmp.generator(0)];
        let bad = DgRing::new_unchecked(a0, gens, diffs);
        assert_eq!(bad.verify(), Err(Violation::DifferentialSquare("f".into())));
    }

    #[test]
    fn degree_bases() {
        let f = Field::Rational;
        let kt = DgRing::new(
            DegreeZeroAlgebra::base(&f),
            vec![Generator { name: "t".into(), degree: -2 }],
            vec![RingElement::zero(-1)],
        )
        .unwrap();
        assert_eq!(kt.degree_basis(-4), vec![Monomial { exps: vec![2], a0: 0 }]);
        assert!(kt.degree_basis(-3).is_empty());
        assert!(kt.degree_basis(1).is_empty());
        let b = koszul_x3(&f);
        assert_eq!(b.degree_dim(-1), 3);
        assert_eq!(b.degree_dim(0), 3);
        assert_eq!(b.degree_dim(-2), 0);
    }
}
