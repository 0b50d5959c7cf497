//! Commutative nonpositive DG rings and their constructions.

mod algebra;
mod hom;
mod presentation;

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

pub use algebra::{DegreeZeroAlgebra, Quotient, Splitting};
pub use hom::DgRingHom;
pub use presentation::{DgRing, Generator, Monomial, RingElement, Violation};

use crate::linalg::{is_zero_vec, Echelon, Field, Matrix, Scalar};
use crate::Error;

/// The Koszul DG ring: one odd generator `e_i` of degree −1 per element, with `d(e_i) = a_i`.
pub fn koszul(a0: &DegreeZeroAlgebra, seq: &[Vec<Scalar>]) -> Result<DgRing, Error> {
    let gens: Vec<Generator> = (0..seq.len())
        .map(|i| Generator { name: if seq.len() == 1 { "e".into() } else { format!("e{}", i + 1) }, degree: -1 })
        .collect();
    let tmp = DgRing::new_unchecked(a0.clone(), gens.clone(), seq.iter().map(|_| RingElement::zero(0)).collect());
    let diffs = seq.iter().map(|a| tmp.from_a0(a)).collect();
    DgRing::new(a0.clone(), gens, diffs)
}

/// Pushes an element through a quotient of `A⁰`, keeping generators.
fn push_through(target: &DgRing, projection: &Matrix, x: &RingElement) -> RingElement {
    let mut out = RingElement::zero(x.degree());
    for (m, c) in x.terms() {
        for k in 0..projection.rows() {
            let p = projection.get(k, m.a0);
            if !p.is_zero() {
                let term = target.monomial(Monomial { exps: m.exps.clone(), a0: k }, c * p);
                out.add_scaled(&target.field().one(), &term);
            }
        }
    }
    out
}

/// Replaces `A⁰` by `A⁰/I` for an ideal `I` containing `d(A^{-1})`-compatible data; generators are kept.
pub fn quotient_degree_zero(a: &Arc<DgRing>, ideal: &[Vec<Scalar>]) -> (Arc<DgRing>, DgRingHom) {
    let q = a.degree_zero().quotient(ideal);
    let tmp = DgRing::new_unchecked(q.algebra.clone(), a.generators().to_vec(), a.generators().iter().map(|g| RingElement::zero(g.degree + 1)).collect());
    let diffs = (0..a.generators().len()).map(|g| push_through(&tmp, &q.projection, a.differential_of(g))).collect();
    let ring = Arc::new(DgRing::new_unchecked(q.algebra.clone(), a.generators().to_vec(), diffs));
    let a0_images = (0..a.degree_zero().dim()).map(|i| push_through(&ring, &q.projection, &a.a0_basis(i))).collect();
    let gen_images = (0..a.generators().len()).map(|g| ring.generator(g)).collect();
    let hom = DgRingHom::new_unchecked(a.clone(), ring.clone(), a0_images, gen_images);
    (ring, hom)
}

/// Localization at `s ∈ A⁰`: the quotient of `A⁰` by the stable kernel of multiplication by `s`.
pub fn localize(a: &Arc<DgRing>, s: &[Scalar]) -> (Arc<DgRing>, DgRingHom) {
    let a0 = a.degree_zero();
    let ideal = a0.mult_matrix(s).stable_kernel().unwrap();
    quotient_degree_zero(a, &ideal)
}

/// `d(A^{-1}) ⊂ A⁰`, an ideal.
pub fn degree_zero_boundaries(a: &DgRing) -> Vec<Vec<Scalar>> {
    let mut ech = Echelon::new(a.degree_zero().dim());
    let mut out = Vec::new();
    for m in a.degree_basis(-1) {
        let x = a.monomial(m, a.field().one());
        let v = a.to_a0(&a.d(&x));
        if ech.insert(&v) {
            out.push(v);
        }
    }
    out
}

/// `H⁰(A)` as an algebra with the projection from `A⁰`.
pub fn h0_algebra(a: &DgRing) -> Quotient {
    a.degree_zero().quotient(&degree_zero_boundaries(a))
}

/// `bar A = H⁰(A)` as a DG ring, with the canonical map `π: A → bar A`.
pub fn reduction_ring(a: &Arc<DgRing>) -> (Arc<DgRing>, DgRingHom) {
    let q = h0_algebra(a);
    let bar = Arc::new(DgRing::from_algebra(q.algebra.clone()));
    let a0_images = (0..a.degree_zero().dim()).map(|i| bar.from_a0(&q.projection.column(i))).collect();
    let gen_images = a.generators().iter().map(|g| RingElement::zero(g.degree)).collect();
    let pi = DgRingHom::new_unchecked(a.clone(), bar.clone(), a0_images, gen_images);
    (bar, pi)
}

/// The residue field of a ring with local `H⁰`, as a DG ring with its canonical map.
pub fn residue_field(a: &Arc<DgRing>) -> Result<(Arc<DgRing>, DgRingHom), Error> {
    let a0 = a.degree_zero();
    let mut ideal = degree_zero_boundaries(a);
    ideal.extend(a0.radical());
    let q = a0.quotient(&ideal);
    if q.algebra.dim() == 0 {
        return Err(Error::Precondition("H⁰ is zero; no residue field".into()));
    }
    if q.algebra.primitive_idempotents().idempotents.len() != 1 {
        return Err(Error::Unsupported("H⁰ is not local".into()));
    }
    let k = Arc::new(DgRing::from_algebra(q.algebra.clone()));
    let a0_images = (0..a0.dim()).map(|i| k.from_a0(&q.projection.column(i))).collect();
    let gen_images = a.generators().iter().map(|g| RingElement::zero(g.degree)).collect();
    Ok((k.clone(), DgRingHom::new_unchecked(a.clone(), k, a0_images, gen_images)))
}

/// `A ⊗_K B` with both inclusions. Clashing generator names get `_l` / `_r` suffixes.
pub fn tensor_rings(a: &Arc<DgRing>, b: &Arc<DgRing>) -> Result<(Arc<DgRing>, DgRingHom, DgRingHom), Error> {
    if a.field() != b.field() {
        return Err(Error::InvalidInput("tensor product of rings over different fields".into()));
    }
    let a0 = DegreeZeroAlgebra::tensor(a.degree_zero(), b.degree_zero())?;
    let nb = b.degree_zero().dim();
    let na_g = a.generators().len();
    let clash = |name: &str, other: &DgRing| other.generator_index(name).is_some();
    let mut gens = Vec::new();
    for g in a.generators() {
        let name = if clash(&g.name, b) { format!("{}_l", g.name) } else { g.name.clone() };
        gens.push(Generator { name, degree: g.degree });
    }
    for g in b.generators() {
        let name = if clash(&g.name, a) { format!("{}_r", g.name) } else { g.name.clone() };
        gens.push(Generator { name, degree: g.degree });
    }
    let tmp = DgRing::new_unchecked(a0.clone(), gens.clone(), gens.iter().map(|g| RingElement::zero(g.degree + 1)).collect());
    let embed = |x: &RingElement, left: bool| -> RingElement {
        let mut out = RingElement::zero(x.degree());
        for (m, c) in x.terms() {
            let mut exps = alloc::vec![0u32; gens.len()];
            let (off, idx) = if left { (0, m.a0 * nb) } else { (na_g, m.a0) };
            for (g, &e) in m.exps.iter().enumerate() {
                exps[off + g] = e;
            }
            out.add_scaled(&tmp.field().one(), &tmp.monomial(Monomial { exps, a0: idx }, c.clone()));
        }
        out
    };
    let mut diffs = Vec::new();
    for g in 0..a.generators().len() {
        diffs.push(embed(a.differential_of(g), true));
    }
    for g in 0..b.generators().len() {
        diffs.push(embed(b.differential_of(g), false));
    }
    let ring = Arc::new(DgRing::new(a0, gens.clone(), diffs)?);
    let i1 = DgRingHom::new_unchecked(
        a.clone(),
        ring.clone(),
        (0..a.degree_zero().dim()).map(|i| embed(&a.a0_basis(i), true)).collect(),
        (0..na_g).map(|g| ring.generator(g)).collect(),
    );
    let i2 = DgRingHom::new_unchecked(
        b.clone(),
        ring.clone(),
        (0..nb).map(|j| embed(&b.a0_basis(j), false)).collect(),
        (0..b.generators().len()).map(|g| ring.generator(na_g + g)).collect(),
    );
    Ok((ring, i1, i2))
}

/// Multiplication `B ⊗_K B → B` for `be` built by [`tensor_rings`] from `(b, b)`.
pub fn multiplication_hom(b: &Arc<DgRing>, be: &Arc<DgRing>) -> DgRingHom {
    let n = b.degree_zero().dim();
    let mut a0_images = Vec::new();
    for i in 0..n {
        for j in 0..n {
            a0_images.push(b.mul(&b.a0_basis(i), &b.a0_basis(j)));
        }
    }
    let ng = b.generators().len();
    let gen_images = (0..2 * ng).map(|g| b.generator(g % ng)).collect();
    DgRingHom::new_unchecked(be.clone(), b.clone(), a0_images, gen_images)
}

/// Orthogonal idempotents of `H⁰(A)` summing to one, with representatives in `A⁰`.
#[derive(Clone, Debug)]
pub struct IdempotentCover {
    /// Representatives in `A⁰` (idempotent already in `A⁰`).
    pub representatives: Vec<Vec<Scalar>>,
    /// Classes in `H⁰(A)`.
    pub classes: Vec<Vec<Scalar>>,
    pub idempotent: bool,
    pub orthogonal: bool,
    pub sums_to_one: bool,
    /// Whether each factor was certified local.
    pub complete: bool,
}

/// One connected component `A_i = A_{e_i}` with its canonical map.
#[derive(Clone, Debug)]
pub struct Component {
    pub ring: Arc<DgRing>,
    pub hom: DgRingHom,
}

/// Splits `A` along the primitive idempotents of `H⁰(A)`.
pub fn connected_components(a: &Arc<DgRing>) -> (IdempotentCover, Vec<Component>) {
    let field = a.field();
    let a0 = a.degree_zero();
    let h0 = h0_algebra(a);
    let split = a0.primitive_idempotents();
    let mut reps = Vec::new();
    let mut classes = Vec::new();
    for e in split.idempotents {
        let c = h0.projection.mul_vec(&e);
        if !is_zero_vec(&c) {
            reps.push(e);
            classes.push(c);
        }
    }
    let h = &h0.algebra;
    let idempotent = classes.iter().all(|c| &h.mul(c, c) == c);
    let orthogonal = classes
        .iter()
        .enumerate()
        .all(|(i, c)| classes.iter().enumerate().all(|(j, d)| i == j || is_zero_vec(&h.mul(c, d))));
    let mut sum = crate::linalg::zero_vec(field, h.dim());
    for c in &classes {
        sum = sum.iter().zip(c).map(|(x, y)| x + y).collect();
    }
    let sums_to_one = sum == h.unit();
    let components = reps
        .iter()
        .map(|e| {
            let (ring, hom) = localize(a, e);
            Component { ring, hom }
        })
        .collect();
    let cover = IdempotentCover { representatives: reps, classes, idempotent, orthogonal, sums_to_one, complete: split.complete };
    (cover, components)
}

/// Whether `H⁰(A)` is local (a single component).
pub fn is_local(a: &Arc<DgRing>) -> bool {
    let (cover, _) = connected_components(a);
    cover.representatives.len() == 1
}

/// Parses a field name: `Q` or `GF(p)`.
pub fn parse_field(s: &str) -> Result<Field, Error> {
    let t = s.trim();
    if t == "Q" || t == "QQ" {
        return Ok(Field::Rational);
    }
    if let Some(p) = t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
        let p: u32 = p.trim().parse().map_err(|_| Error::Parse(format!("bad field `{t}`")))?;
        return Field::prime(p);
    }
    Err(Error::Parse(format!("unknown field `{}`", t)))
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn gf(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    /// `K[t]` with `t` of degree −2.
    pub fn poly_t(f: &Field) -> Arc<DgRing> {
        Arc::new(
            DgRing::new(DegreeZeroAlgebra::base(f), alloc::vec![Generator { name: "t".into(), degree: -2 }], alloc::vec![RingElement::zero(-1)])
                .unwrap(),
        )
    }

    /// Koszul complex of `K[x]/(x³)` on `x`.
    pub fn koszul_x3(f: &Field) -> Arc<DgRing> {
        let a0 = DegreeZeroAlgebra::truncated(f, "x", 3).unwrap();
        Arc::new(koszul(&a0, &[a0.basis_vec(1)]).unwrap())
    }

    /// `K[x]/(x² − x)` concentrated in degree 0.
    pub fn split2(f: &Field) -> Arc<DgRing> {
        let a0 = DegreeZeroAlgebra::quotient_univariate(f, "x", &[f.zero(), f.int(-1), f.one()]).unwrap();
        Arc::new(DgRing::from_algebra(a0))
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn koszul_cohomology_shape() {
        let f = gf(3);
        let b = koszul_x3(&f);
        let h0 = h0_algebra(&b);
        assert_eq!(h0.algebra.dim(), 1);
        // d on degree -1 is multiplication by x: rank 2 of 3
        assert_eq!(degree_zero_boundaries(&b).len(), 2);
        let empty = koszul(&DegreeZeroAlgebra::base(&f), &[]).unwrap();
        assert!(empty.generators().is_empty());
        let zero = koszul(&DegreeZeroAlgebra::base(&f), &[alloc::vec![f.zero()]]).unwrap();
        assert!(zero.differential_of(0).is_zero());
    }

    #[test]
    fn localize_examples() {
        let f = gf(2);
        let a = split2(&f);
        let (one, _) = localize(&a, &a.degree_zero().unit());
        assert_eq!(one.degree_zero().dim(), 2);
        let (ax, lam) = localize(&a, &a.degree_zero().basis_vec(1));
        assert_eq!(ax.degree_zero().dim(), 1);
        lam.verify().unwrap();
        let b = koszul_x3(&f);
        let (z, _) = localize(&b, &b.degree_zero().basis_vec(1));
        assert!(z.is_zero_ring());
    }

    #[test]
    fn components_of_split_algebras() {
        let f = gf(5);
        let a = split2(&f);
        let (cover, comps) = connected_components(&a);
        assert_eq!(comps.len(), 2);
        assert!(cover.idempotent && cover.orthogonal && cover.sums_to_one && cover.complete);
        let a0 = DegreeZeroAlgebra::quotient_univariate(&f, "x", &[f.zero(), f.int(-1), f.zero(), f.one()]).unwrap();
        let (_, comps) = connected_components(&Arc::new(DgRing::from_algebra(a0)));
        assert_eq!(comps.len(), 3);
        assert!(is_local(&koszul_x3(&f)));
    }

    #[test]
    fn tensor_ring_dimensions() {
        let f = gf(2);
        let ext = Arc::new(
            DgRing::new(DegreeZeroAlgebra::base(&f), alloc::vec![Generator { name: "e".into(), degree: -1 }], alloc::vec![RingElement::zero(0)])
                .unwrap(),
        );
        let (ee, i1, i2) = tensor_rings(&ext, &ext).unwrap();
        assert_eq!(ee.generators().len(), 2);
        assert_eq!((ee.degree_dim(0), ee.degree_dim(-1), ee.degree_dim(-2)), (1, 2, 1));
        i1.verify().unwrap();
        i2.verify().unwrap();
        multiplication_hom(&ext, &ee).verify().unwrap();
        let b = koszul_x3(&f);
        let (be, _, _) = tensor_rings(&b, &b).unwrap();
        assert_eq!(be.degree_dim(0), 9);
        multiplication_hom(&b, &be).verify().unwrap();
        let k = Arc::new(DgRing::from_algebra(DegreeZeroAlgebra::base(&f)));
        let (kb, _, _) = tensor_rings(&k, &b).unwrap();
        assert_eq!(kb.degree_dim(0), 3);
        assert_eq!(kb.degree_dim(-1), 3);
    }

    #[test]
    fn reduction_map_is_a_hom() {
        let f = Field::Rational;
        let b = koszul_x3(&f);
        let (bar, pi) = reduction_ring(&b);
        assert_eq!(bar.degree_zero().dim(), 1);
        pi.verify().unwrap();
        let (k, r) = residue_field(&b).unwrap();
        assert_eq!(k.degree_zero().dim(), 1);
        r.verify().unwrap();
    }
}
