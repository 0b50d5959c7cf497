use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::{Actor, Bounds, DgModule, Extent};
use crate::linalg::{Matrix, Scalar};
use crate::ring::{DgRing, DgRingHom, Monomial, RingElement};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub name: String,
    pub degree: i64,
}

/// `Σ c_k · b_k`, keyed by basis index.
pub type FreeElement = BTreeMap<usize, RingElement>;

/// A semi-free module `⊕ A·b_k` with a finite basis and `d(b_k) = Σ c_kl · b_l`.
#[derive(Clone, Debug)]
pub struct SemiFreeModule {
    ring: Arc<DgRing>,
    basis: Vec<BasisElement>,
    diff: Vec<FreeElement>,
}

/// Coordinates of one degree: for each basis element, the ring monomials that multiply it.
pub(crate) struct Piece {
    pub offsets: Vec<usize>,
    pub bases: Vec<Vec<Monomial>>,
    pub dim: usize,
}

impl Piece {
    pub fn entries(&self) -> impl Iterator<Item = (usize, &Monomial)> {
        self.bases.iter().enumerate().flat_map(|(k, b)| b.iter().map(move |m| (k, m)))
    }
}

/// Lowest degree of a nonzero ring element, or `None` if the ring is unbounded below.
pub fn ring_lower_bound(ring: &DgRing) -> Option<i64> {
    if ring.is_zero_ring() {
        return Some(0);
    }
    let mut lo = 0;
    for g in ring.generators() {
        if !g.is_odd() {
            return None;
        }
        lo += g.degree;
    }
    Some(lo)
}

impl SemiFreeModule {
    pub fn new_unchecked(ring: Arc<DgRing>, basis: Vec<BasisElement>, diff: Vec<FreeElement>) -> SemiFreeModule {
        assert_eq!(basis.len(), diff.len());
        let mut diff = diff;
        for d in diff.iter_mut() {
            d.retain(|_, c| !c.is_zero());
        }
        SemiFreeModule { ring, basis, diff }
    }

    pub fn new(ring: Arc<DgRing>, basis: Vec<BasisElement>, diff: Vec<FreeElement>) -> Result<SemiFreeModule, Error> {
        if basis.len() != diff.len() {
            return Err(Error::InvalidInput("one differential per basis element is required".into()));
        }
        let m = SemiFreeModule::new_unchecked(ring, basis, diff);
        m.verify()?;
        Ok(m)
    }

    /// Free module on basis elements of the given degrees, with zero differential.
    pub fn free(ring: Arc<DgRing>, degrees: &[i64]) -> SemiFreeModule {
        let basis = degrees
            .iter()
            .enumerate()
            .map(|(k, &d)| BasisElement { name: if degrees.len() == 1 { "1".into() } else { format!("b{}", k + 1) }, degree: d })
            .collect();
        SemiFreeModule { ring, basis, diff: vec![FreeElement::new(); degrees.len()] }
    }

    /// The ring as a module over itself.
    pub fn ring_module(ring: Arc<DgRing>) -> SemiFreeModule {
        SemiFreeModule::free(ring, &[0])
    }

    pub fn verify(&self) -> Result<(), Error> {
        for (k, d) in self.diff.iter().enumerate() {
            for (&l, c) in d {
                if l >= self.basis.len() {
                    return Err(Error::InvalidInput(format!("differential of {} refers to an unknown basis element", self.basis[k].name)));
                }
                if c.degree() + self.basis[l].degree != self.basis[k].degree + 1 {
                    return Err(Error::Verification(format!("differential of {} has the wrong degree", self.basis[k].name)));
                }
            }
            if !self.apply_d(d).values().all(RingElement::is_zero) {
                return Err(Error::Verification(format!("d² ≠ 0 on {}", self.basis[k].name)));
            }
        }
        Ok(())
    }

    pub fn ring_arc(&self) -> &Arc<DgRing> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn differential_of(&self, k: usize) -> &FreeElement {
        &self.diff[k]
    }

    /// `d(Σ c_k b_k) = Σ d(c_k) b_k + (−1)^{|c_k|} c_k d(b_k)`.
    pub fn apply_d(&self, x: &FreeElement) -> FreeElement {
        let one = self.ring.field().one();
        let mut out = FreeElement::new();
        for (&k, c) in x {
            add_into(&mut out, k, &one, &self.ring.d(c));
            let sign = one.clone().signed(c.degree().rem_euclid(2) == 1);
            for (&l, e) in &self.diff[k] {
                add_into(&mut out, l, &sign, &self.ring.mul(c, e));
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// `a · Σ c_k b_k`.
    pub fn mul_element(&self, a: &RingElement, x: &FreeElement) -> FreeElement {
        let mut out = FreeElement::new();
        for (&k, c) in x {
            let p = self.ring.mul(a, c);
            if !p.is_zero() {
                out.insert(k, p);
            }
        }
        out
    }

    pub fn generator_element(&self, k: usize) -> FreeElement {
        let mut x = FreeElement::new();
        x.insert(k, self.ring.one());
        x
    }

    pub(crate) fn piece(&self, i: i64) -> Piece {
        let mut offsets = Vec::with_capacity(self.basis.len());
        let mut bases = Vec::with_capacity(self.basis.len());
        let mut dim = 0;
        for b in &self.basis {
            offsets.push(dim);
            let mb = self.ring.degree_basis(i - b.degree);
            dim += mb.len();
            bases.push(mb);
        }
        Piece { offsets, bases, dim }
    }

    pub fn to_vector(&self, i: i64, x: &FreeElement) -> Vec<Scalar> {
        self.to_vector_in(&self.piece(i), x)
    }

    pub(crate) fn to_vector_in(&self, piece: &Piece, x: &FreeElement) -> Vec<Scalar> {
        let mut v = vec![self.ring.field().zero(); piece.dim];
        for (&k, c) in x {
            if c.is_zero() {
                continue;
            }
            let coords = self.ring.to_vector(c, &piece.bases[k]);
            for (j, s) in coords.into_iter().enumerate() {
                v[piece.offsets[k] + j] = s;
            }
        }
        v
    }

    pub fn from_vector(&self, i: i64, v: &[Scalar]) -> FreeElement {
        self.vector_in_piece(&self.piece(i), i, v)
    }

    pub(crate) fn vector_in_piece(&self, piece: &Piece, i: i64, v: &[Scalar]) -> FreeElement {
        let mut out = FreeElement::new();
        for (k, b) in self.basis.iter().enumerate() {
            let n = piece.bases[k].len();
            let s = piece.offsets[k];
            let c = self.ring.from_vector(i - b.degree, &piece.bases[k], &v[s..s + n]);
            if !c.is_zero() {
                out.insert(k, c);
            }
        }
        out
    }

    /// `P[k]`: basis `b[k]` in degree `|b| − k`, `d(b[k]) = Σ (−1)^{k(1+|c|)} c · b_l[k]`.
    pub fn shift(&self, k: i64) -> SemiFreeModule {
        let basis = self.basis.iter().map(|b| BasisElement { name: b.name.clone(), degree: b.degree - k }).collect();
        let diff = self
            .diff
            .iter()
            .map(|d| d.iter().map(|(&l, c)| (l, c.clone().signed((k * (1 + c.degree())).rem_euclid(2) == 1))).collect())
            .collect();
        SemiFreeModule { ring: self.ring.clone(), basis, diff }
    }

    pub fn direct_sum(parts: &[&Arc<SemiFreeModule>]) -> SemiFreeModule {
        let ring = parts[0].ring.clone();
        let mut basis = Vec::new();
        let mut diff = Vec::new();
        for p in parts {
            let off = basis.len();
            basis.extend(p.basis.iter().cloned());
            diff.extend(p.diff.iter().map(|d| d.iter().map(|(&l, c)| (l + off, c.clone())).collect::<FreeElement>()));
        }
        SemiFreeModule { ring, basis, diff }
    }

    /// `B ⊗_A P` along `f: A → B`.
    pub fn base_change(&self, f: &DgRingHom) -> SemiFreeModule {
        let diff = self.diff.iter().map(|d| d.iter().map(|(&l, c)| (l, f.apply(c))).collect()).collect();
        SemiFreeModule::new_unchecked(f.target().clone(), self.basis.clone(), diff)
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.basis.iter().map(|b| b.degree).max()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.basis.iter().map(|b| b.degree).min()
    }

    /// Renders an element as `c*b_k + …`.
    pub fn format_element(&self, x: &FreeElement) -> String {
        let mut parts = Vec::new();
        for (&k, c) in x {
            parts.push(format!("({})*{}", self.ring.format_element(c), self.basis[k].name));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn add_into(out: &mut FreeElement, k: usize, c: &Scalar, x: &RingElement) {
    if x.is_zero() {
        return;
    }
    match out.get_mut(&k) {
        Some(e) => e.add_scaled(c, x),
        None => {
            out.insert(k, x.scale(c));
        }
    }
}

impl DgModule for SemiFreeModule {
    fn ring(&self) -> &Arc<DgRing> {
        &self.ring
    }

    fn extent(&self) -> Extent {
        if self.basis.is_empty() || self.ring.is_zero_ring() {
            return Extent::everywhere(Bounds::EMPTY);
        }
        let hi = self.max_degree();
        let lo = match (self.min_degree(), ring_lower_bound(&self.ring)) {
            (Some(m), Some(r)) => Some(m + r),
            _ => None,
        };
        Extent::everywhere(Bounds { lo, hi })
    }

    fn dim(&self, i: i64) -> usize {
        self.basis.iter().map(|b| self.ring.degree_dim(i - b.degree)).sum()
    }

    fn differential(&self, i: i64) -> Matrix {
        let src = self.piece(i);
        let tgt = self.piece(i + 1);
        let field = self.ring.field();
        let cols: Vec<Vec<Scalar>> = src
            .entries()
            .map(|(k, m)| {
                let mut x = FreeElement::new();
                x.insert(k, self.ring.monomial(m.clone(), field.one()));
                self.to_vector_in(&tgt, &self.apply_d(&x))
            })
            .collect();
        Matrix::from_columns(field, tgt.dim, &cols)
    }

    fn action(&self, actor: Actor, i: i64) -> Matrix {
        let a = super::actor_element(&self.ring, actor);
        let src = self.piece(i);
        let tgt = self.piece(i + a.degree());
        let field = self.ring.field();
        let cols: Vec<Vec<Scalar>> = src
            .entries()
            .map(|(k, m)| {
                let mut x = FreeElement::new();
                x.insert(k, self.ring.mul(&a, &self.ring.monomial(m.clone(), field.one())));
                self.to_vector_in(&tgt, &x)
            })
            .collect();
        Matrix::from_columns(field, tgt.dim, &cols)
    }
}
