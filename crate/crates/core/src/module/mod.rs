//! DG modules: representations, elementary functors, maps and cohomology.

mod functors;
mod lazy;
mod maps;
mod semifree;
mod windowed;

pub(crate) use functors::subquotient_module;

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

pub use functors::{cone, cone_semifree, hom_complex, smart_truncate_ge, smart_truncate_le, tensor, tensor_k, tensor_right};
pub use lazy::{CoinducedModule, DirectSum, KDual, QuotientBaseChange, Restricted, Shifted};
pub use maps::{cohomology, is_quasi_iso, ChainMap, CohomologyTable, Homotopy, QisVerdict, SemiFreeMap};
pub use semifree::{ring_lower_bound, BasisElement, FreeElement, SemiFreeModule};
pub use windowed::{Boundary, WindowedModule};

use crate::linalg::Matrix;
use crate::ring::{DgRing, Monomial, RingElement};
use crate::Error;

/// Something that acts: an `A⁰` basis element or a negative generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Actor {
    Basis(usize),
    Gen(usize),
}

impl Actor {
    pub fn degree(self, ring: &DgRing) -> i64 {
        match self {
            Actor::Basis(_) => 0,
            Actor::Gen(g) => ring.generators()[g].degree,
        }
    }

    /// All actors of a ring: `A⁰` basis first, then generators.
    pub fn all(ring: &DgRing) -> Vec<Actor> {
        (0..ring.degree_zero().dim())
            .map(Actor::Basis)
            .chain((0..ring.generators().len()).map(Actor::Gen))
            .collect()
    }

    pub fn index(self, ring: &DgRing) -> usize {
        match self {
            Actor::Basis(i) => i,
            Actor::Gen(g) => ring.degree_zero().dim() + g,
        }
    }
}

/// A possibly unbounded integer interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl Bounds {
    pub const ALL: Bounds = Bounds { lo: None, hi: None };
    pub const EMPTY: Bounds = Bounds { lo: Some(1), hi: Some(0) };

    pub fn new(lo: i64, hi: i64) -> Bounds {
        Bounds { lo: Some(lo), hi: Some(hi) }
    }

    pub fn contains(&self, i: i64) -> bool {
        self.lo.is_none_or(|l| i >= l) && self.hi.is_none_or(|h| i <= h)
    }

    pub fn is_empty(&self) -> bool {
        matches!((self.lo, self.hi), (Some(l), Some(h)) if l > h)
    }

    pub fn shift(&self, k: i64) -> Bounds {
        Bounds { lo: self.lo.map(|l| l + k), hi: self.hi.map(|h| h + k) }
    }

    pub fn intersect(&self, o: &Bounds) -> Bounds {
        let lo = match (self.lo, o.lo) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        let hi = match (self.hi, o.hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Bounds { lo, hi }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, o: &Bounds) -> Bounds {
        if self.is_empty() {
            return *o;
        }
        if o.is_empty() {
            return *self;
        }
        let lo = match (self.lo, o.lo) {
            (Some(a), Some(b)) => Some(a.min(b)),
            _ => None,
        };
        let hi = match (self.hi, o.hi) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        Bounds { lo, hi }
    }
}

/// Where a module may be nonzero, and where its pieces are exactly known.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Extent {
    /// `M^i = 0` outside this interval.
    pub support: Bounds,
    /// Pieces, differentials and actions are exact inside this interval.
    pub known: Bounds,
}

impl Extent {
    pub fn everywhere(support: Bounds) -> Extent {
        Extent { support, known: Bounds::ALL }
    }

    pub fn computable(&self, i: i64) -> bool {
        self.known.contains(i) || !self.support.contains(i)
    }

    /// Cohomology at `i` needs `i − 1`, `i`, `i + 1`.
    pub fn cohomology_trusted(&self, i: i64) -> bool {
        self.computable(i - 1) && self.computable(i) && self.computable(i + 1)
    }

    pub fn shift(&self, k: i64) -> Extent {
        Extent { support: self.support.shift(k), known: self.known.shift(k) }
    }
}

/// A DG module over a nonpositive DG ring, presented degreewise.
/// Matrices act on column vectors: `differential(i)` is `dim(i+1) × dim(i)`.
pub trait DgModule: Send + Sync {
    fn ring(&self) -> &Arc<DgRing>;
    fn extent(&self) -> Extent;
    fn dim(&self, i: i64) -> usize;
    fn differential(&self, i: i64) -> Matrix;
    /// `M^i → M^{i + deg(actor)}`.
    fn action(&self, actor: Actor, i: i64) -> Matrix;
}

/// Shared handle to a module in any representation.
#[derive(Clone)]
pub enum Module {
    SemiFree(Arc<SemiFreeModule>),
    Windowed(Arc<WindowedModule>),
    Coinduced(Arc<CoinducedModule>),
    Lazy(Arc<dyn DgModule>),
}

impl core::fmt::Debug for Module {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Module::SemiFree(p) => write!(f, "SemiFree(rank {})", p.rank()),
            Module::Windowed(w) => write!(f, "Windowed[{}, {}]", w.lo(), w.hi()),
            Module::Coinduced(c) => write!(f, "Coinduced({:?})", c.coefficients()),
            Module::Lazy(_) => write!(f, "Lazy"),
        }
    }
}

impl Module {
    pub fn inner(&self) -> &dyn DgModule {
        match self {
            Module::SemiFree(m) => m.as_ref(),
            Module::Windowed(m) => m.as_ref(),
            Module::Coinduced(m) => m.as_ref(),
            Module::Lazy(m) => m.as_ref(),
        }
    }

    pub fn semifree(m: SemiFreeModule) -> Module {
        Module::SemiFree(Arc::new(m))
    }

    pub fn windowed(m: WindowedModule) -> Module {
        Module::Windowed(Arc::new(m))
    }

    pub fn lazy<M: DgModule + 'static>(m: M) -> Module {
        Module::Lazy(Arc::new(m))
    }

    pub fn as_semifree(&self) -> Option<&Arc<SemiFreeModule>> {
        match self {
            Module::SemiFree(p) => Some(p),
            _ => None,
        }
    }

    /// `M[k]`, keeping the representation where one is available.
    pub fn shift(&self, k: i64) -> Module {
        if k == 0 {
            return self.clone();
        }
        match self {
            Module::SemiFree(p) => Module::semifree(p.shift(k)),
            Module::Coinduced(c) => Module::Coinduced(Arc::new(c.shift(k))),
            _ => Module::lazy(Shifted::new(self.clone(), k)),
        }
    }

    /// Direct sum, semi-free when all parts are.
    pub fn sum(parts: &[Module]) -> Result<Module, Error> {
        let first = parts.first().ok_or_else(|| Error::InvalidInput("empty direct sum".into()))?;
        if parts.iter().any(|p| p.ring() != first.ring()) {
            return Err(Error::InvalidInput("direct sum over different rings".into()));
        }
        if parts.len() == 1 {
            return Ok(first.clone());
        }
        let free: Option<Vec<&Arc<SemiFreeModule>>> = parts.iter().map(Module::as_semifree).collect();
        Ok(match free {
            Some(ps) => Module::semifree(SemiFreeModule::direct_sum(&ps)),
            None => Module::lazy(DirectSum::new(parts.to_vec())),
        })
    }

    /// Explicit matrices on `[lo, hi]`; every degree there must be computable.
    pub fn realize(&self, lo: i64, hi: i64) -> Result<WindowedModule, Error> {
        realize(self.inner(), lo, hi)
    }
}

impl DgModule for Module {
    fn ring(&self) -> &Arc<DgRing> {
        self.inner().ring()
    }
    fn extent(&self) -> Extent {
        self.inner().extent()
    }
    fn dim(&self, i: i64) -> usize {
        self.inner().dim(i)
    }
    fn differential(&self, i: i64) -> Matrix {
        self.inner().differential(i)
    }
    fn action(&self, actor: Actor, i: i64) -> Matrix {
        self.inner().action(actor, i)
    }
}

/// Action of a monomial `b · g^e` on `M^i`.
pub fn act_monomial(m: &dyn DgModule, mono: &Monomial, i: i64) -> Matrix {
    let ring = m.ring();
    let mut deg = i;
    let mut mat = Matrix::identity(ring.field(), m.dim(i));
    for g in (0..mono.exps.len()).rev() {
        for _ in 0..mono.exps[g] {
            let a = m.action(Actor::Gen(g), deg);
            mat = a.mul(&mat);
            deg += ring.generators()[g].degree;
        }
    }
    if mono.a0 != 0 {
        mat = m.action(Actor::Basis(mono.a0), deg).mul(&mat);
    }
    mat
}

/// Action of a homogeneous ring element on `M^i`.
pub fn act_element(m: &dyn DgModule, x: &RingElement, i: i64) -> Matrix {
    let ring = m.ring();
    let mut out = Matrix::zeros(ring.field(), m.dim(i + x.degree()), m.dim(i));
    for (mono, c) in x.terms() {
        out = out.add(&act_monomial(m, mono, i).scale(c));
    }
    out
}

/// Action of an actor as a ring element (needed for checks against ring relations).
pub fn actor_element(ring: &DgRing, a: Actor) -> RingElement {
    match a {
        Actor::Basis(i) => ring.a0_basis(i),
        Actor::Gen(g) => ring.generator(g),
    }
}

pub fn realize(m: &dyn DgModule, lo: i64, hi: i64) -> Result<WindowedModule, Error> {
    if lo > hi {
        return Err(Error::InvalidInput(format!("empty window [{lo}, {hi}]")));
    }
    let ext = m.extent();
    if let Some(i) = (lo..=hi).find(|&i| !ext.computable(i)) {
        return Err(Error::WindowUnderflow(format!("degree {i} is not computable for this module")));
    }
    WindowedModule::from_module(m, lo, hi)
}

/// Largest sub-window of `[lo, hi]` containing `anchor` on which `m` is computable.
pub fn computable_window(m: &dyn DgModule, lo: i64, hi: i64) -> Option<(i64, i64)> {
    let ext = m.extent();
    let mut l = lo;
    while l <= hi && !ext.computable(l) {
        l += 1;
    }
    if l > hi {
        return None;
    }
    let mut h = l;
    while h < hi && ext.computable(h + 1) {
        h += 1;
    }
    Some((l, h))
}

/// Checks `d² = 0` and all relations between actions and the ring on a realized window.
pub fn verify_module(m: &dyn DgModule, lo: i64, hi: i64) -> Result<(), String> {
    let ring = m.ring().clone();
    let field = ring.field().clone();
    let ext = m.extent();
    let ok = |i: i64| (lo..=hi).contains(&i) && ext.computable(i);
    let a0 = ring.degree_zero();
    for i in lo..=hi {
        if !ok(i) {
            continue;
        }
        if ok(i + 1) && ok(i + 2) && !m.differential(i + 1).mul(&m.differential(i)).is_zero() {
            return Err(format!("d² ≠ 0 at degree {i}"));
        }
        let n = m.dim(i);
        if a0.dim() > 0 && m.action(Actor::Basis(0), i) != Matrix::identity(&field, n) {
            return Err(format!("unit does not act as identity at degree {i}"));
        }
        for x in 0..a0.dim() {
            let ax = m.action(Actor::Basis(x), i);
            for y in 0..a0.dim() {
                let lhs = m.action(Actor::Basis(x), i).mul(&m.action(Actor::Basis(y), i));
                let mut rhs = Matrix::zeros(&field, n, n);
                for (k, c) in a0.product_coords(x, y).iter().enumerate() {
                    if !c.is_zero() {
                        rhs = rhs.add(&m.action(Actor::Basis(k), i).scale(c));
                    }
                }
                if lhs != rhs {
                    return Err(format!("A⁰ action not associative at degree {i}"));
                }
            }
            if ok(i + 1) && m.differential(i).mul(&ax) != m.action(Actor::Basis(x), i + 1).mul(&m.differential(i)) {
                return Err(format!("d does not commute with A⁰ at degree {i}"));
            }
        }
        for (g, gen) in ring.generators().iter().enumerate() {
            let t = i + gen.degree;
            if !ok(t) {
                continue;
            }
            let ag = m.action(Actor::Gen(g), i);
            for x in 0..a0.dim() {
                if m.action(Actor::Gen(g), i).mul(&m.action(Actor::Basis(x), i)) != m.action(Actor::Basis(x), t).mul(&ag) {
                    return Err(format!("{} does not commute with A⁰ at degree {i}", gen.name));
                }
            }
            for (h, hgen) in ring.generators().iter().enumerate() {
                let u = t + hgen.degree;
                if !ok(u) || h < g {
                    continue;
                }
                let gh = m.action(Actor::Gen(h), t).mul(&ag);
                let hg = m.action(Actor::Gen(g), i + hgen.degree).mul(&m.action(Actor::Gen(h), i));
                let sign = (gen.degree * hgen.degree).rem_euclid(2) == 1;
                if h == g {
                    if gen.is_odd() && !gh.is_zero() {
                        return Err(format!("{} does not square to zero at degree {i}", gen.name));
                    }
                } else if gh != hg.signed(sign) {
                    return Err(format!("{} and {} do not graded-commute at degree {i}", gen.name, hgen.name));
                }
            }
            // d(g m) = d(g) m + (−1)^{|g|} g d(m)
            if ok(t + 1) && ok(i + 1) {
                let lhs = m.differential(t).mul(&ag);
                let dg = act_element(m, ring.differential_of(g), i);
                let rhs = dg.add(&m.action(Actor::Gen(g), i + 1).mul(&m.differential(i)).signed(gen.is_odd()));
                if lhs != rhs {
                    return Err(format!("Leibniz rule fails for {} at degree {i}", gen.name));
                }
            }
        }
    }
    Ok(())
}
