use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{act_element, actor_element, Actor, Bounds, DgModule, Extent, Module, SemiFreeModule};
use crate::linalg::{unit_vec, Matrix, Scalar, Subquotient};
use crate::ring::{DgRing, DgRingHom};
use crate::Error;

/// The largest interval on which `e` is computable that contains its known window.
pub fn effective_known(e: &Extent) -> Bounds {
    if e.support.is_empty() {
        return Bounds::ALL;
    }
    let lo = match (e.known.lo, e.support.lo) {
        (Some(k), Some(s)) if s >= k => None,
        (k, _) => k,
    };
    let hi = match (e.known.hi, e.support.hi) {
        (Some(k), Some(s)) if s <= k => None,
        (k, _) => k,
    };
    Bounds { lo, hi }
}

/// `M[k]`: `(M[k])^i = M^{i+k}`, `d = (−1)^k d_M`, `a·m[k] = (−1)^{|a|k} (a·m)[k]`.
#[derive(Clone)]
pub struct Shifted {
    inner: Module,
    k: i64,
}

impl Shifted {
    pub fn new(inner: Module, k: i64) -> Shifted {
        Shifted { inner, k }
    }
}

impl DgModule for Shifted {
    fn ring(&self) -> &Arc<DgRing> {
        self.inner.ring()
    }
    fn extent(&self) -> Extent {
        self.inner.extent().shift(-self.k)
    }
    fn dim(&self, i: i64) -> usize {
        self.inner.dim(i + self.k)
    }
    fn differential(&self, i: i64) -> Matrix {
        self.inner.differential(i + self.k).signed(self.k.rem_euclid(2) == 1)
    }
    fn action(&self, actor: Actor, i: i64) -> Matrix {
        let odd = (actor.degree(self.ring()) * self.k).rem_euclid(2) == 1;
        self.inner.action(actor, i + self.k).signed(odd)
    }
}

#[derive(Clone)]
pub struct DirectSum {
    parts: Vec<Module>,
}

impl DirectSum {
    pub fn new(parts: Vec<Module>) -> DirectSum {
        assert!(!parts.is_empty());
        DirectSum { parts }
    }

    pub fn parts(&self) -> &[Module] {
        &self.parts
    }
}

impl DgModule for DirectSum {
    fn ring(&self) -> &Arc<DgRing> {
        self.parts[0].ring()
    }
    fn extent(&self) -> Extent {
        let mut support = Bounds::EMPTY;
        let mut known = Bounds::ALL;
        for p in &self.parts {
            let e = p.extent();
            support = support.hull(&e.support);
            known = known.intersect(&effective_known(&e));
        }
        Extent { support, known }
    }
    fn dim(&self, i: i64) -> usize {
        self.parts.iter().map(|p| p.dim(i)).sum()
    }
    fn differential(&self, i: i64) -> Matrix {
        let blocks: Vec<Matrix> = self.parts.iter().map(|p| p.differential(i)).collect();
        Matrix::block_diag(self.ring().field(), &blocks.iter().collect::<Vec<_>>())
    }
    fn action(&self, actor: Actor, i: i64) -> Matrix {
        let blocks: Vec<Matrix> = self.parts.iter().map(|p| p.action(actor, i)).collect();
        Matrix::block_diag(self.ring().field(), &blocks.iter().collect::<Vec<_>>())
    }
}

/// Restriction of scalars along `f: A → B` of a `B`-module.
#[derive(Clone)]
pub struct Restricted {
    f: Arc<DgRingHom>,
    inner: Module,
}

impl Restricted {
    pub fn new(f: Arc<DgRingHom>, inner: Module) -> Result<Restricted, Error> {
        if inner.ring() != f.target() {
            return Err(Error::InvalidInput("restriction along a map into a different ring".into()));
        }
        Ok(Restricted { f, inner })
    }
}

impl DgModule for Restricted {
    fn ring(&self) -> &Arc<DgRing> {
        self.f.source()
    }
    fn extent(&self) -> Extent {
        self.inner.extent()
    }
    fn dim(&self, i: i64) -> usize {
        self.inner.dim(i)
    }
    fn differential(&self, i: i64) -> Matrix {
        self.inner.differential(i)
    }
    fn action(&self, actor: Actor, i: i64) -> Matrix {
        let x = self.f.apply(&actor_element(self.f.source(), actor));
        act_element(self.inner.inner(), &x, i)
    }
}

/// `A' ⊗_A M = M / I·M` for a map `q: A → A'` that is a quotient on `A⁰` with kernel `I`
/// and sends generators to the corresponding generators.
pub struct QuotientBaseChange {
    q: Arc<DgRingHom>,
    inner: Module,
    ideal: Vec<Vec<Scalar>>,
    lifts: Vec<Vec<Scalar>>,
}

impl QuotientBaseChange {
    pub fn new(q: Arc<DgRingHom>, inner: Module) -> Result<QuotientBaseChange, Error> {
        let (s, t) = (q.source(), q.target());
        if inner.ring() != s {
            return Err(Error::InvalidInput("base change of a module over a different ring".into()));
        }
        if s.generators().len() != t.generators().len() || (0..s.generators().len()).any(|g| *q.generator_image(g) != t.generator(g)) {
            return Err(Error::Unsupported("base change needs generators mapped to generators".into()));
        }
        let n = s.degree_zero().dim();
        let cols: Vec<Vec<Scalar>> = (0..n).map(|i| t.to_a0(q.a0_image(i))).collect();
        let qm = Matrix::from_columns(s.field(), t.degree_zero().dim(), &cols);
        let ideal = qm.kernel();
        let mut lifts = Vec::new();
        for k in 0..t.degree_zero().dim() {
            let e = unit_vec(s.field(), t.degree_zero().dim(), k);
            lifts.push(qm.solve(&e)?.ok_or_else(|| Error::Unsupported("degree-zero part is not surjective".into()))?);
        }
        Ok(QuotientBaseChange { q, inner, ideal, lifts })
    }

    fn quotient(&self, i: i64) -> Subquotient {
        let n = self.inner.dim(i);
        let field = self.inner.ring().field();
        let src = self.inner.ring();
        let mut sub = Vec::new();
        for v in &self.ideal {
            let m = act_element(self.inner.inner(), &src.from_a0(v), i);
            sub.extend(m.columns());
        }
        let total: Vec<Vec<Scalar>> = (0..n).map(|j| unit_vec(field, n, j)).collect();
        Subquotient::new(field, n, &total, &sub)
    }

    fn descend(&self, m: &Matrix, i: i64, t: i64) -> Matrix {
        let (qs, qt) = (self.quotient(i), self.quotient(t));
        let cols: Vec<Vec<Scalar>> = qs.reps.iter().map(|r| qt.reduce(&m.mul_vec(r)).expect("quotient map")).collect();
        Matrix::from_columns(self.q.target().field(), qt.dim(), &cols)
    }
}

impl DgModule for QuotientBaseChange {
    fn ring(&self) -> &Arc<DgRing> {
        self.q.target()
    }
    fn extent(&self) -> Extent {
        self.inner.extent()
    }
    fn dim(&self, i: i64) -> usize {
        self.quotient(i).dim()
    }
    fn differential(&self, i: i64) -> Matrix {
        self.descend(&self.inner.differential(i), i, i + 1)
    }
    fn action(&self, actor: Actor, i: i64) -> Matrix {
        let src = self.inner.ring();
        let (m, t) = match actor {
            Actor::Basis(k) => (act_element(self.inner.inner(), &src.from_a0(&self.lifts[k]), i), i),
            Actor::Gen(g) => (self.inner.action(Actor::Gen(g), i), i + src.generators()[g].degree),
        };
        self.descend(&m, i, t)
    }
}

/// `Hom_K(X, V)` for `V = ⊕ K[−v]` over the listed degrees `v`, with zero differential on `V`.
/// `(a·f)(x) = (−1)^{|a||f|} f(a·x)` and `D f = −(−1)^{|f|} f ∘ d_X`.
#[derive(Clone)]
pub struct KDual {
    inner: Module,
    coeffs: Vec<i64>,
}

impl KDual {
    pub fn new(inner: Module, coeffs: Vec<i64>) -> KDual {
        KDual { inner, coeffs }
    }

    pub fn inner(&self) -> &Module {
        &self.inner
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coeffs
    }

    /// Offsets of the blocks `(X^{v−j})^*` inside `Hom^j`.
    fn offsets(&self, j: i64) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.coeffs.len());
        let mut acc = 0;
        for &v in &self.coeffs {
            off.push(acc);
            acc += self.inner.dim(v - j);
        }
        off
    }

    /// Assembles `Hom^j → Hom^{j+δ}` from per-block maps `(X^{v−j})^* → (X^{v−j−δ})^*`.
    fn blockwise(&self, j: i64, delta: i64, block: impl Fn(i64) -> Matrix) -> Matrix {
        let (so, to) = (self.offsets(j), self.offsets(j + delta));
        let mut m = Matrix::zeros(self.ring().field(), self.dim(j + delta), self.dim(j));
        for (c, &v) in self.coeffs.iter().enumerate() {
            m.set_block(to[c], so[c], &block(v));
        }
        m
    }
}

impl DgModule for KDual {
    fn ring(&self) -> &Arc<DgRing> {
        self.inner.ring()
    }

    fn extent(&self) -> Extent {
        let e = self.inner.extent();
        if self.coeffs.is_empty() || e.support.is_empty() {
            return Extent::everywhere(Bounds::EMPTY);
        }
        let vmin = *self.coeffs.iter().min().unwrap();
        let vmax = *self.coeffs.iter().max().unwrap();
        let support = Bounds { lo: e.support.hi.map(|h| vmin - h), hi: e.support.lo.map(|l| vmax - l) };
        let k = effective_known(&e);
        let known = Bounds { lo: k.hi.map(|h| vmax - h), hi: k.lo.map(|l| vmin - l) };
        Extent { support, known }
    }

    fn dim(&self, j: i64) -> usize {
        self.coeffs.iter().map(|&v| self.inner.dim(v - j)).sum()
    }

    fn differential(&self, j: i64) -> Matrix {
        let odd = j.rem_euclid(2) == 0;
        self.blockwise(j, 1, |v| self.inner.differential(v - j - 1).transpose().signed(odd))
    }

    fn action(&self, actor: Actor, j: i64) -> Matrix {
        let delta = actor.degree(self.ring());
        let odd = (delta * j).rem_euclid(2) == 1;
        self.blockwise(j, delta, |v| self.inner.action(actor, v - j - delta).transpose().signed(odd))
    }
}

/// `Hom_K(A, V)`, the coinduced module on a graded vector space.
#[derive(Clone)]
pub struct CoinducedModule {
    dual: KDual,
}

impl CoinducedModule {
    pub fn new(ring: Arc<DgRing>, coeffs: Vec<i64>) -> CoinducedModule {
        CoinducedModule { dual: KDual::new(Module::semifree(SemiFreeModule::ring_module(ring)), coeffs) }
    }

    pub fn coefficients(&self) -> &[i64] {
        self.dual.coefficients()
    }

    /// A representative of `Hom_K(A, V)[k] ≅ Hom_K(A, V[k])`.
    pub fn shift(&self, k: i64) -> CoinducedModule {
        let coeffs = self.coefficients().iter().map(|v| v - k).collect();
        CoinducedModule::new(self.dual.ring().clone(), coeffs)
    }

    pub fn as_dual(&self) -> &KDual {
        &self.dual
    }

    pub fn describe(&self) -> alloc::string::String {
        format!("Hom_K(A, V) with V in degrees {:?}", self.coefficients())
    }
}

impl DgModule for CoinducedModule {
    fn ring(&self) -> &Arc<DgRing> {
        self.dual.ring()
    }
    fn extent(&self) -> Extent {
        self.dual.extent()
    }
    fn dim(&self, i: i64) -> usize {
        self.dual.dim(i)
    }
    fn differential(&self, i: i64) -> Matrix {
        self.dual.differential(i)
    }
    fn action(&self, actor: Actor, i: i64) -> Matrix {
        self.dual.action(actor, i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{verify_module, SemiFreeModule};
    use crate::ring::fixtures::{gf, koszul_x3, poly_t, split2};
    use crate::linalg::Field;
    use crate::ring::localize;

    #[test]
    fn dual_of_polynomial_ring() {
        let a = poly_t(&gf(5));
        let c = CoinducedModule::new(a, alloc::vec![0]);
        let dims: Vec<usize> = (0..=4).map(|i| c.dim(i)).collect();
        assert_eq!(dims, alloc::vec![1, 0, 1, 0, 1]);
        assert_eq!(c.extent().support, Bounds { lo: Some(0), hi: None });
        verify_module(&c, -1, 6).unwrap();
    }

    #[test]
    fn dual_signs_over_koszul_and_rationals() {
        for f in [gf(2), gf(3), Field::Rational] {
            let b = koszul_x3(&f);
            let c = CoinducedModule::new(b.clone(), alloc::vec![0, 2]);
            verify_module(&c, -3, 4).unwrap();
            let s = Shifted::new(Module::Coinduced(Arc::new(c.clone())), 3);
            verify_module(&s, -6, 2).unwrap();
            let free = Module::semifree(SemiFreeModule::free(b, &[0, -1]));
            let d = KDual::new(free.shift(1), alloc::vec![1]);
            verify_module(&d, -2, 5).unwrap();
        }
    }

    #[test]
    fn sums_restrictions_and_localizations() {
        let f = gf(3);
        let a = split2(&f);
        let m = Module::semifree(SemiFreeModule::ring_module(a.clone()));
        let sum = DirectSum::new(alloc::vec![m.clone(), m.shift(1)]);
        assert_eq!((sum.dim(0), sum.dim(-1)), (2, 2));
        verify_module(&sum, -2, 1).unwrap();
        let (ax, lam) = localize(&a, &a.degree_zero().basis_vec(1));
        let lam = Arc::new(lam);
        let loc = QuotientBaseChange::new(lam.clone(), m).unwrap();
        assert_eq!(loc.dim(0), 1);
        verify_module(&loc, -1, 1).unwrap();
        let back = Restricted::new(lam, Module::semifree(SemiFreeModule::ring_module(ax))).unwrap();
        verify_module(&back, -1, 1).unwrap();
    }
}
