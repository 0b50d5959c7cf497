use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::lazy::effective_known;
use super::{act_element, Actor, Bounds, Boundary, ChainMap, DgModule, Extent, FreeElement, Module, SemiFreeMap, SemiFreeModule, WindowedModule};
use crate::linalg::{Matrix, Scalar, Subquotient};
use crate::ring::DgRing;
use crate::Error;

pub(crate) fn same_ring(a: &Arc<DgRing>, b: &Arc<DgRing>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn sign(field: &crate::linalg::Field, odd: bool) -> Scalar {
    field.one().signed(odd)
}

/// `Hom_A(P, N)` for semi-free `P`: `Hom^j = ⊕_k N^{j + |b_k|}` via `f ↦ (f(b_k))_k`.
/// `(D f)(b_k) = d f(b_k) − (−1)^j f(d b_k)` and `(a·f)(b_k) = a·f(b_k)`.
pub struct HomComplex {
    p: Arc<SemiFreeModule>,
    n: Module,
}

impl HomComplex {
    fn offsets(&self, j: i64) -> Vec<usize> {
        let mut acc = 0;
        self.p
            .basis()
            .iter()
            .map(|b| {
                let o = acc;
                acc += self.n.dim(j + b.degree);
                o
            })
            .collect()
    }
}

pub fn hom_complex(p: &Arc<SemiFreeModule>, n: &Module) -> Result<Module, Error> {
    if !same_ring(p.ring_arc(), n.ring()) {
        return Err(Error::InvalidInput("Hom between modules over different rings".into()));
    }
    Ok(Module::lazy(HomComplex { p: p.clone(), n: n.clone() }))
}

impl DgModule for HomComplex {
    fn ring(&self) -> &Arc<DgRing> {
        self.n.ring()
    }

    fn extent(&self) -> Extent {
        let e = self.n.extent();
        let (Some(bmin), Some(bmax)) = (self.p.min_degree(), self.p.max_degree()) else {
            return Extent::everywhere(Bounds::EMPTY);
        };
        if e.support.is_empty() {
            return Extent::everywhere(Bounds::EMPTY);
        }
        let support = Bounds { lo: e.support.lo.map(|l| l - bmax), hi: e.support.hi.map(|h| h - bmin) };
        let k = effective_known(&e);
        let known = Bounds { lo: k.lo.map(|l| l - bmin), hi: k.hi.map(|h| h - bmax) };
        Extent { support, known }
    }

    fn dim(&self, j: i64) -> usize {
        self.p.basis().iter().map(|b| self.n.dim(j + b.degree)).sum()
    }

    fn differential(&self, j: i64) -> Matrix {
        let field = self.ring().field();
        let (so, to) = (self.offsets(j), self.offsets(j + 1));
        let mut m = Matrix::zeros(field, self.dim(j + 1), self.dim(j));
        for (k, b) in self.p.basis().iter().enumerate() {
            m.set_block(to[k], so[k], &self.n.differential(j + b.degree));
            for (&l, c) in self.p.differential_of(k) {
                let s = sign(field, (1 + j + c.degree() * j).rem_euclid(2) == 1);
                let blk = act_element(self.n.inner(), c, j + self.p.basis()[l].degree).scale(&s);
                let cur = m.block(to[k], blk.rows(), so[l], blk.cols());
                m.set_block(to[k], so[l], &cur.add(&blk));
            }
        }
        m
    }

    fn action(&self, actor: Actor, j: i64) -> Matrix {
        let delta = actor.degree(self.ring());
        let (so, to) = (self.offsets(j), self.offsets(j + delta));
        let mut m = Matrix::zeros(self.ring().field(), self.dim(j + delta), self.dim(j));
        for (k, b) in self.p.basis().iter().enumerate() {
            m.set_block(to[k], so[k], &self.n.action(actor, j + b.degree));
        }
        m
    }
}

/// `P ⊗_A N` (semi-free on the left): degree `i` is `⊕_k b_k ⊗ N^{i − |b_k|}`.
pub struct TensorLeft {
    p: Arc<SemiFreeModule>,
    n: Module,
}

/// `N ⊗_A P` (semi-free on the right): degree `i` is `⊕_k N^{i − |b_k|} ⊗ b_k`.
pub struct TensorRight {
    p: Arc<SemiFreeModule>,
    n: Module,
}

pub fn tensor(p: &Arc<SemiFreeModule>, n: &Module) -> Result<Module, Error> {
    if !same_ring(p.ring_arc(), n.ring()) {
        return Err(Error::InvalidInput("tensor product of modules over different rings".into()));
    }
    Ok(Module::lazy(TensorLeft { p: p.clone(), n: n.clone() }))
}

pub fn tensor_right(n: &Module, p: &Arc<SemiFreeModule>) -> Result<Module, Error> {
    if !same_ring(p.ring_arc(), n.ring()) {
        return Err(Error::InvalidInput("tensor product of modules over different rings".into()));
    }
    Ok(Module::lazy(TensorRight { p: p.clone(), n: n.clone() }))
}

fn tensor_offsets(p: &SemiFreeModule, n: &Module, i: i64) -> Vec<usize> {
    let mut acc = 0;
    p.basis()
        .iter()
        .map(|b| {
            let o = acc;
            acc += n.dim(i - b.degree);
            o
        })
        .collect()
}

fn tensor_extent(p: &SemiFreeModule, n: &Module) -> Extent {
    let e = n.extent();
    let (Some(bmin), Some(bmax)) = (p.min_degree(), p.max_degree()) else {
        return Extent::everywhere(Bounds::EMPTY);
    };
    if e.support.is_empty() {
        return Extent::everywhere(Bounds::EMPTY);
    }
    let support = Bounds { lo: e.support.lo.map(|l| l + bmin), hi: e.support.hi.map(|h| h + bmax) };
    let k = effective_known(&e);
    let known = Bounds { lo: k.lo.map(|l| l + bmax), hi: k.hi.map(|h| h + bmin) };
    Extent { support, known }
}

impl DgModule for TensorLeft {
    fn ring(&self) -> &Arc<DgRing> {
        self.n.ring()
    }
    fn extent(&self) -> Extent {
        tensor_extent(&self.p, &self.n)
    }
    fn dim(&self, i: i64) -> usize {
        self.p.basis().iter().map(|b| self.n.dim(i - b.degree)).sum()
    }
    /// `d(b_k ⊗ n) = Σ (−1)^{|c||b_l|} b_l ⊗ c·n + (−1)^{|b_k|} b_k ⊗ d n`.
    fn differential(&self, i: i64) -> Matrix {
        let field = self.ring().field();
        let (so, to) = (tensor_offsets(&self.p, &self.n, i), tensor_offsets(&self.p, &self.n, i + 1));
        let mut m = Matrix::zeros(field, self.dim(i + 1), self.dim(i));
        for (k, b) in self.p.basis().iter().enumerate() {
            let blk = self.n.differential(i - b.degree).signed(b.degree.rem_euclid(2) == 1);
            m.set_block(to[k], so[k], &blk);
            for (&l, c) in self.p.differential_of(k) {
                let bl = self.p.basis()[l].degree;
                let blk = act_element(self.n.inner(), c, i - b.degree).signed((c.degree() * bl).rem_euclid(2) == 1);
                let cur = m.block(to[l], blk.rows(), so[k], blk.cols());
                m.set_block(to[l], so[k], &cur.add(&blk));
            }
        }
        m
    }
    /// `a(b_k ⊗ n) = (−1)^{|a||b_k|} b_k ⊗ a·n`.
    fn action(&self, actor: Actor, i: i64) -> Matrix {
        let delta = actor.degree(self.ring());
        let (so, to) = (tensor_offsets(&self.p, &self.n, i), tensor_offsets(&self.p, &self.n, i + delta));
        let mut m = Matrix::zeros(self.ring().field(), self.dim(i + delta), self.dim(i));
        for (k, b) in self.p.basis().iter().enumerate() {
            let blk = self.n.action(actor, i - b.degree).signed((delta * b.degree).rem_euclid(2) == 1);
            m.set_block(to[k], so[k], &blk);
        }
        m
    }
}

impl DgModule for TensorRight {
    fn ring(&self) -> &Arc<DgRing> {
        self.n.ring()
    }
    fn extent(&self) -> Extent {
        tensor_extent(&self.p, &self.n)
    }
    fn dim(&self, i: i64) -> usize {
        self.p.basis().iter().map(|b| self.n.dim(i - b.degree)).sum()
    }
    /// `d(n ⊗ b_k) = d n ⊗ b_k + (−1)^{|n|} Σ (−1)^{|n||c|} c·n ⊗ b_l`.
    fn differential(&self, i: i64) -> Matrix {
        let field = self.ring().field();
        let (so, to) = (tensor_offsets(&self.p, &self.n, i), tensor_offsets(&self.p, &self.n, i + 1));
        let mut m = Matrix::zeros(field, self.dim(i + 1), self.dim(i));
        for (k, b) in self.p.basis().iter().enumerate() {
            let deg_n = i - b.degree;
            m.set_block(to[k], so[k], &self.n.differential(deg_n));
            for (&l, c) in self.p.differential_of(k) {
                let odd = (deg_n + deg_n * c.degree()).rem_euclid(2) == 1;
                let blk = act_element(self.n.inner(), c, deg_n).signed(odd);
                let cur = m.block(to[l], blk.rows(), so[k], blk.cols());
                m.set_block(to[l], so[k], &cur.add(&blk));
            }
        }
        m
    }
    fn action(&self, actor: Actor, i: i64) -> Matrix {
        let delta = actor.degree(self.ring());
        let (so, to) = (tensor_offsets(&self.p, &self.n, i), tensor_offsets(&self.p, &self.n, i + delta));
        let mut m = Matrix::zeros(self.ring().field(), self.dim(i + delta), self.dim(i));
        for (k, b) in self.p.basis().iter().enumerate() {
            m.set_block(to[k], so[k], &self.n.action(actor, i - b.degree));
        }
        m
    }
}

/// `M ⊗_K N` over a ring `C = A ⊗_K B` built by `tensor_rings(A, B)`.
/// Degree `i` is `⊕_p M^p ⊗ N^{i−p}` with Kronecker coordinates.
pub struct TensorK {
    ring: Arc<DgRing>,
    m: Module,
    n: Module,
    na0: usize,
    nb0: usize,
    na_gens: usize,
}

pub fn tensor_k(m: &Module, n: &Module, ring: &Arc<DgRing>) -> Result<Module, Error> {
    let (a, b) = (m.ring(), n.ring());
    let (em, en) = (m.extent(), n.extent());
    if effective_known(&em) != Bounds::ALL || effective_known(&en) != Bounds::ALL {
        return Err(Error::Unsupported("tensor over K needs fully computable factors".into()));
    }
    let finite = em.support.is_empty()
        || en.support.is_empty()
        || ((em.support.lo.is_some() || en.support.hi.is_some()) && (em.support.hi.is_some() || en.support.lo.is_some()));
    if !finite {
        return Err(Error::Unsupported("tensor over K would have infinite-dimensional pieces".into()));
    }
    let na0 = a.degree_zero().dim();
    let nb0 = b.degree_zero().dim();
    if ring.degree_zero().dim() != na0 * nb0 || ring.generators().len() != a.generators().len() + b.generators().len() {
        return Err(Error::InvalidInput("ring is not the tensor product of the factor rings".into()));
    }
    Ok(Module::lazy(TensorK { ring: ring.clone(), m: m.clone(), n: n.clone(), na0, nb0, na_gens: a.generators().len() }))
}

fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(a.field(), a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            out.set_block(i * b.rows(), j * b.cols(), &b.scale(x));
        }
    }
    out
}

impl TensorK {
    fn range(&self, i: i64) -> Vec<i64> {
        let (em, en) = (self.m.extent().support, self.n.extent().support);
        if em.is_empty() || en.is_empty() {
            return Vec::new();
        }
        let lo = match (em.lo, en.hi) {
            (Some(a), Some(b)) => a.max(i - b),
            (Some(a), None) => a,
            (None, Some(b)) => i - b,
            _ => unreachable!(),
        };
        let hi = match (em.hi, en.lo) {
            (Some(a), Some(b)) => a.min(i - b),
            (Some(a), None) => a,
            (None, Some(b)) => i - b,
            _ => unreachable!(),
        };
        (lo..=hi).collect()
    }

    fn offsets(&self, i: i64) -> Vec<(i64, usize)> {
        let mut acc = 0;
        self.range(i)
            .into_iter()
            .map(|p| {
                let o = acc;
                acc += self.m.dim(p) * self.n.dim(i - p);
                (p, o)
            })
            .collect()
    }

    fn find(offs: &[(i64, usize)], p: i64) -> Option<usize> {
        offs.iter().find(|(q, _)| *q == p).map(|(_, o)| *o)
    }

    fn assemble(&self, i: i64, delta: i64, block: impl Fn(i64) -> Vec<(i64, Matrix)>) -> Matrix {
        let (so, to) = (self.offsets(i), self.offsets(i + delta));
        let mut out = Matrix::zeros(self.ring.field(), self.dim(i + delta), self.dim(i));
        for &(p, s) in &so {
            for (q, blk) in block(p) {
                if let Some(t) = Self::find(&to, q) {
                    if blk.rows() > 0 && blk.cols() > 0 {
                        let cur = out.block(t, blk.rows(), s, blk.cols());
                        out.set_block(t, s, &cur.add(&blk));
                    }
                }
            }
        }
        out
    }
}

impl DgModule for TensorK {
    fn ring(&self) -> &Arc<DgRing> {
        &self.ring
    }
    fn extent(&self) -> Extent {
        let (em, en) = (self.m.extent().support, self.n.extent().support);
        if em.is_empty() || en.is_empty() {
            return Extent::everywhere(Bounds::EMPTY);
        }
        let add = |a: Option<i64>, b: Option<i64>| a.zip(b).map(|(x, y)| x + y);
        Extent::everywhere(Bounds { lo: add(em.lo, en.lo), hi: add(em.hi, en.hi) })
    }
    fn dim(&self, i: i64) -> usize {
        self.range(i).into_iter().map(|p| self.m.dim(p) * self.n.dim(i - p)).sum()
    }
    fn differential(&self, i: i64) -> Matrix {
        let field = self.ring.field().clone();
        self.assemble(i, 1, |p| {
            let q = i - p;
            let idn = Matrix::identity(&field, self.n.dim(q));
            let idm = Matrix::identity(&field, self.m.dim(p));
            alloc::vec![
                (p + 1, kron(&self.m.differential(p), &idn)),
                (p, kron(&idm, &self.n.differential(q)).signed(p.rem_euclid(2) == 1)),
            ]
        })
    }
    fn action(&self, actor: Actor, i: i64) -> Matrix {
        let field = self.ring.field().clone();
        let delta = actor.degree(&self.ring);
        self.assemble(i, delta, |p| {
            let q = i - p;
            match actor {
                Actor::Basis(x) => {
                    let (a, b) = (x / self.nb0, x % self.nb0);
                    debug_assert!(a < self.na0);
                    alloc::vec![(p, kron(&self.m.action(Actor::Basis(a), p), &self.n.action(Actor::Basis(b), q)))]
                }
                Actor::Gen(g) if g < self.na_gens => {
                    alloc::vec![(p + delta, kron(&self.m.action(Actor::Gen(g), p), &Matrix::identity(&field, self.n.dim(q))))]
                }
                Actor::Gen(g) => {
                    let h = Actor::Gen(g - self.na_gens);
                    let blk = kron(&Matrix::identity(&field, self.m.dim(p)), &self.n.action(h, q));
                    alloc::vec![(p, blk.signed((delta * p).rem_euclid(2) == 1))]
                }
            }
        })
    }
}

/// The mapping cone `Y ⊕ X[1]` of a chain map `φ: X → Y`:
/// `d(y, x) = (d y + φ x, −d x)`, `a(y, x) = (a y, (−1)^{|a|} a x)`.
struct ConeModule {
    map: Arc<ChainMap>,
    lo: i64,
    hi: i64,
}

impl ConeModule {
    fn parts(&self) -> (&WindowedModule, &WindowedModule) {
        (self.map.source(), self.map.target())
    }
}

impl DgModule for ConeModule {
    fn ring(&self) -> &Arc<DgRing> {
        self.map.target().ring()
    }
    fn extent(&self) -> Extent {
        Extent { support: Bounds::ALL, known: Bounds::new(self.lo, self.hi) }
    }
    fn dim(&self, i: i64) -> usize {
        let (x, y) = self.parts();
        y.dim(i) + x.dim(i + 1)
    }
    fn differential(&self, i: i64) -> Matrix {
        let (x, y) = self.parts();
        let field = y.ring().field();
        let mut m = Matrix::zeros(field, self.dim(i + 1), self.dim(i));
        let ny1 = y.dim(i + 1);
        m.set_block(0, 0, &y.differential(i));
        m.set_block(0, y.dim(i), &self.map.component(i + 1));
        m.set_block(ny1, y.dim(i), &x.differential(i + 1).neg());
        m
    }
    fn action(&self, actor: Actor, i: i64) -> Matrix {
        let (x, y) = self.parts();
        let delta = actor.degree(y.ring());
        let ya = y.action(actor, i);
        let xa = x.action(actor, i + 1).signed(delta.rem_euclid(2) == 1);
        Matrix::block_diag(y.ring().field(), &[&ya, &xa])
    }
}

/// Cone of a chain map between realized modules, realized on every degree where it is exact.
pub fn cone(map: &Arc<ChainMap>) -> Result<WindowedModule, Error> {
    let (x, y) = (map.source(), map.target());
    let (lo, hi) = (map.lo(), map.hi());
    let c_lo = if y.below() == Boundary::ExactlyZero && y.lo() >= lo { lo - 1 } else { lo };
    let c_hi = if x.above() == Boundary::ExactlyZero && x.hi() <= hi { hi } else { hi - 1 };
    if c_lo > c_hi {
        return Err(Error::WindowUnderflow("chain map window too small for a cone".into()));
    }
    let cm = ConeModule { map: map.clone(), lo: c_lo, hi: c_hi };
    let mut w = WindowedModule::from_module(&cm, c_lo, c_hi)?;
    let zero_below = c_lo == lo - 1 && x.below() == Boundary::ExactlyZero && x.lo() >= lo;
    let zero_above = c_hi == hi && y.above() == Boundary::ExactlyZero && y.hi() <= hi;
    w.set_boundaries(
        if zero_below { Boundary::ExactlyZero } else { Boundary::Truncated },
        if zero_above { Boundary::ExactlyZero } else { Boundary::Truncated },
    );
    Ok(w)
}

/// Cone `Q ⊕ P[1]` of a map of semi-free modules; basis of `Q` first.
pub fn cone_semifree(f: &SemiFreeMap) -> Result<SemiFreeModule, Error> {
    let q = f.target().as_semifree().ok_or_else(|| Error::InvalidInput("semi-free cone needs a semi-free target".into()))?;
    let p = f.source();
    let ps = p.shift(1);
    let off = q.rank();
    let mut basis = q.basis().to_vec();
    let mut diff: Vec<FreeElement> = (0..q.rank()).map(|k| q.differential_of(k).clone()).collect();
    for (k, b) in ps.basis().iter().enumerate() {
        let mut nb = b.clone();
        nb.name = format!("{}[1]", b.name);
        basis.push(nb);
        let mut d: FreeElement = ps.differential_of(k).iter().map(|(&l, c)| (l + off, c.clone())).collect();
        let img = q.from_vector(p.basis()[k].degree, f.image(k));
        for (l, c) in img {
            d.insert(l, c);
        }
        diff.push(d);
    }
    SemiFreeModule::new(q.ring_arc().clone(), basis, diff)
}

/// Rebuilds a windowed module from subquotients of its pieces on `[lo, hi]`.
pub(crate) fn subquotient_module(
    w: &WindowedModule,
    lo: i64,
    hi: i64,
    sqs: &[Subquotient],
    below: Boundary,
    above: Boundary,
) -> Result<WindowedModule, Error> {
    let ring = w.ring().clone();
    let field = ring.field().clone();
    let at = |i: i64| &sqs[(i - lo) as usize];
    let push = |m: &Matrix, i: i64, t: i64| -> Matrix {
        if t < lo || t > hi {
            return Matrix::zeros(&field, 0, at(i).dim());
        }
        let cols: Vec<Vec<Scalar>> = at(i).reps.iter().map(|r| at(t).reduce(&m.mul_vec(r)).expect("subquotient is not stable")).collect();
        Matrix::from_columns(&field, at(t).dim(), &cols)
    };
    let dims = (lo..=hi).map(|i| at(i).dim()).collect();
    let diffs = (lo..=hi).map(|i| push(&w.differential(i), i, i + 1)).collect();
    let actions = Actor::all(&ring)
        .into_iter()
        .map(|a| (lo..=hi).map(|i| push(&w.action(a, i), i, i + a.degree(&ring))).collect())
        .collect();
    WindowedModule::new(ring, lo, hi, dims, diffs, actions, below, above)
}

fn whole(field: &crate::linalg::Field, n: usize) -> Vec<Vec<Scalar>> {
    (0..n).map(|j| crate::linalg::unit_vec(field, n, j)).collect()
}

/// `τ^{≤n} M`: `M^i` for `i < n`, `Z^n` in degree `n`, zero above.
pub fn smart_truncate_le(w: &WindowedModule, n: i64) -> Result<WindowedModule, Error> {
    let e = w.extent();
    if !(e.computable(n) && e.computable(n + 1)) || n < w.lo() {
        return Err(Error::WindowUnderflow(format!("cannot truncate at {n} within [{}, {}]", w.lo(), w.hi())));
    }
    let field = w.ring().field().clone();
    let hi = n.min(w.hi());
    let sqs: Vec<Subquotient> = (w.lo()..=hi)
        .map(|i| {
            let d = w.dim(i);
            let total = if i == n { w.differential(n).kernel() } else { whole(&field, d) };
            Subquotient::new(&field, d, &total, &[])
        })
        .collect();
    subquotient_module(w, w.lo(), hi, &sqs, w.below(), Boundary::ExactlyZero)
}

/// `τ^{≥n} M`: zero below, `M^n / B^n` in degree `n`, `M^i` above.
pub fn smart_truncate_ge(w: &WindowedModule, n: i64) -> Result<WindowedModule, Error> {
    let e = w.extent();
    if !(e.computable(n) && e.computable(n - 1)) || n > w.hi() {
        return Err(Error::WindowUnderflow(format!("cannot truncate at {n} within [{}, {}]", w.lo(), w.hi())));
    }
    let field = w.ring().field().clone();
    let lo = n.max(w.lo());
    let sqs: Vec<Subquotient> = (lo..=w.hi())
        .map(|i| {
            let d = w.dim(i);
            let zeros = if i == n { w.differential(n - 1).columns() } else { Vec::new() };
            Subquotient::new(&field, d, &whole(&field, d), &zeros)
        })
        .collect();
    subquotient_module(w, lo, w.hi(), &sqs, Boundary::ExactlyZero, w.above())
}
