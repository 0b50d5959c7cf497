//! Element syntax used in problem files and on the command line.
//!
//! ```text
//! element := "0" | term ("+" term)*
//! term    := ["-"] [coeff "*"] factor ("*" factor)*
//! factor  := gen ["^" k] | a0symbol | basisname
//! ```
//!
//! The coefficient uses the field's literal syntax (`3`, `-1/2`). A factor is matched against the
//! `A⁰` basis symbols first, then generators, then module basis names. Factors multiply left to right.

use std::collections::BTreeMap;

use dgcalc_core::linalg::{Field, Scalar};
use dgcalc_core::module::{BasisElement, FreeElement};
use dgcalc_core::ring::{DgRing, RingElement};

enum Factor {
    A0(usize),
    Gen(usize, u32),
    Basis(usize),
}

fn factor(ring: &DgRing, basis: &[BasisElement], s: &str) -> Result<Factor, String> {
    if let Some(i) = ring.degree_zero().symbol_index(s) {
        return Ok(Factor::A0(i));
    }
    let (name, power) = match s.split_once('^') {
        Some((n, k)) => (n.trim(), k.trim().parse::<u32>().map_err(|_| format!("bad exponent in `{s}`"))?),
        None => (s, 1),
    };
    if let Some(g) = ring.generator_index(name) {
        return Ok(Factor::Gen(g, power));
    }
    if let Some(k) = basis.iter().position(|b| b.name == s) {
        return Ok(Factor::Basis(k));
    }
    Err(format!("unknown symbol `{s}`"))
}

fn coefficient(field: &Field, s: &str) -> Option<Scalar> {
    let t = s.trim();
    if t.is_empty() || !t.chars().all(|c| c.is_ascii_digit() || "-/ ".contains(c)) {
        return None;
    }
    field.parse(t).ok()
}

/// One parsed term: scalar times ring monomial, optionally attached to a basis element.
fn term(ring: &DgRing, basis: &[BasisElement], s: &str) -> Result<(RingElement, Option<usize>), String> {
    let field = ring.field();
    let (neg, body) = match s.trim().strip_prefix('-') {
        Some(rest) if coefficient(field, rest.split('*').next().unwrap_or("")).is_none() => (true, rest.trim()),
        _ => (false, s.trim()),
    };
    if body.is_empty() {
        return Err("empty term".into());
    }
    let parts: Vec<&str> = body.split('*').map(str::trim).collect();
    let (mut c, rest) = match coefficient(field, parts[0]) {
        Some(c) => (c, &parts[1..]),
        None => (field.one(), &parts[..]),
    };
    if neg {
        c = -&c;
    }
    let mut x = ring.scalar(&c);
    let mut slot = None;
    for p in rest {
        if p.is_empty() {
            return Err(format!("empty factor in `{s}`"));
        }
        match factor(ring, basis, p)? {
            Factor::A0(i) => x = ring.mul(&x, &ring.a0_basis(i)),
            Factor::Gen(g, k) => {
                for _ in 0..k {
                    x = ring.mul(&x, &ring.generator(g));
                }
            }
            Factor::Basis(k) => {
                if slot.replace(k).is_some() {
                    return Err(format!("term `{s}` names two basis elements"));
                }
            }
        }
    }
    Ok((x, slot))
}

fn terms(s: &str) -> Vec<&str> {
    let t = s.trim();
    if t == "0" {
        return Vec::new();
    }
    t.split('+').collect()
}

fn accumulate(acc: &mut Option<RingElement>, x: RingElement, s: &str) -> Result<(), String> {
    if x.is_zero() {
        return Ok(());
    }
    match acc {
        None => *acc = Some(x),
        Some(a) if a.degree() == x.degree() => *a = a.add(&x),
        Some(a) => return Err(format!("`{s}` mixes degrees {} and {}", a.degree(), x.degree())),
    }
    Ok(())
}

/// Parses a homogeneous ring element. Its degree comes from its terms; `zero_degree` is used when it vanishes.
pub fn ring_element(ring: &DgRing, s: &str, zero_degree: i64) -> Result<RingElement, String> {
    let mut acc = None;
    for t in terms(s) {
        let (x, slot) = term(ring, &[], t)?;
        if slot.is_some() {
            return Err(format!("unexpected basis element in `{t}`"));
        }
        accumulate(&mut acc, x, s)?;
    }
    Ok(acc.unwrap_or_else(|| RingElement::zero(zero_degree)))
}

/// Parses an element of `A⁰` to coordinates.
pub fn a0_element(ring: &DgRing, s: &str) -> Result<Vec<Scalar>, String> {
    let x = ring_element(ring, s, 0)?;
    if x.degree() != 0 {
        return Err(format!("`{s}` is not of degree 0"));
    }
    Ok(ring.to_a0(&x))
}

/// Parses `Σ r_l · b_l` for the differential of a basis element of degree `degree`.
/// Each coefficient takes its degree from its terms, or `degree + 1 − |b_l|` when it vanishes.
pub fn free_element(ring: &DgRing, basis: &[BasisElement], s: &str, degree: i64) -> Result<FreeElement, String> {
    let mut acc: BTreeMap<usize, Option<RingElement>> = BTreeMap::new();
    for t in terms(s) {
        let (x, slot) = term(ring, basis, t)?;
        let k = slot.ok_or_else(|| format!("term `{t}` names no basis element"))?;
        accumulate(acc.entry(k).or_default(), x, s)?;
    }
    Ok(acc
        .into_iter()
        .map(|(k, c)| (k, c.unwrap_or_else(|| RingElement::zero(degree + 1 - basis[k].degree))))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use dgcalc_core::ring::{koszul, DegreeZeroAlgebra};

    fn koszul_x3() -> DgRing {
        let f = Field::Rational;
        let a0 = DegreeZeroAlgebra::truncated(&f, "x", 3).unwrap();
        koszul(&a0, &[a0.basis_vec(1)]).unwrap()
    }

    #[test]
    fn parses_ring_elements() {
        let a = koszul_x3();
        let e = a.generators()[0].name.clone();
        let x = ring_element(&a, &format!("2*{e}*x + -1*{e}*x^2"), -1).unwrap();
        assert_eq!(x.degree(), -1);
        assert_eq!(a.format_element(&x), format!("2*{e}*x + -1*{e}*x^2"));
        assert!(ring_element(&a, "0", -3).unwrap().is_zero());
        assert_eq!(ring_element(&a, "x*x", 0).unwrap(), ring_element(&a, "x^2", 0).unwrap());
        assert_eq!(ring_element(&a, "-x", 0).unwrap(), ring_element(&a, "-1*x", 0).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        let a = koszul_x3();
        let e = a.generators()[0].name.clone();
        assert!(ring_element(&a, "y", 0).unwrap_err().contains("unknown symbol"));
        assert!(ring_element(&a, &format!("x + {e}"), 0).unwrap_err().contains("mixes degrees"));
        assert!(ring_element(&a, "x + ", 0).is_err());
    }

    #[test]
    fn parses_module_elements() {
        let a = koszul_x3();
        let basis = vec![BasisElement { name: "u".into(), degree: 0 }, BasisElement { name: "v".into(), degree: -1 }];
        let d = free_element(&a, &basis, "x*u", -1).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[&0].degree(), 0);
        assert!(free_element(&a, &basis, "x", -1).is_err());
        assert!(free_element(&a, &basis, "0", -1).unwrap().is_empty());
    }
}
