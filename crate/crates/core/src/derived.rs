//! Derived functors, canonical morphisms, restriction and coinduction, and Čech complexes.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{zero_vec, Echelon, Matrix, Scalar, Solver, Subquotient};
use crate::module::{
    act_element, cohomology, hom_complex, is_quasi_iso, subquotient_module, tensor, tensor_right, Actor, BasisElement, Boundary,
    Bounds, ChainMap, CoinducedModule, DgModule, FreeElement, KDual, Module, QisVerdict, QuotientBaseChange, Restricted,
    SemiFreeMap, SemiFreeModule, WindowedModule,
};
use crate::resolve::{degree_zero_is_local, minimize, semifree_resolution};
use crate::ring::{connected_components, h0_algebra, localize, DgRing, DgRingHom};
use crate::Error;

/// One factor `A_e` of `A`, with the canonical map `A → A_e` (absent when `A⁰` is already local).
#[derive(Clone)]
pub struct Piece {
    pub ring: Arc<DgRing>,
    pub hom: Option<Arc<DgRingHom>>,
}

/// The factors of `A` along the primitive idempotents of `A⁰` that survive in `H⁰(A)`.
pub fn pieces(a: &Arc<DgRing>) -> Vec<Piece> {
    if degree_zero_is_local(a) {
        return vec![Piece { ring: a.clone(), hom: None }];
    }
    connected_components(a).1.into_iter().map(|c| Piece { ring: c.ring, hom: Some(Arc::new(c.hom)) }).collect()
}

impl Piece {
    /// `A_e ⊗_A M`.
    pub fn localize(&self, m: &Module) -> Result<Module, Error> {
        let Some(h) = &self.hom else { return Ok(m.clone()) };
        Ok(match m {
            Module::SemiFree(p) => Module::semifree(p.base_change(h)),
            Module::Coinduced(c) => Module::Coinduced(Arc::new(CoinducedModule::new(self.ring.clone(), c.coefficients().to_vec()))),
            _ => Module::lazy(QuotientBaseChange::new(h.clone(), m.clone())?),
        })
    }

    /// `M` regarded as an `A`-module.
    pub fn restrict(&self, m: Module) -> Result<Module, Error> {
        match &self.hom {
            None => Ok(m),
            Some(h) => Ok(Module::lazy(Restricted::new(h.clone(), m)?)),
        }
    }
}

/// A semi-free replacement `π: P → M`.
#[derive(Clone)]
pub struct Replacement {
    pub p: Arc<SemiFreeModule>,
    pub map: SemiFreeMap,
    /// `π` induces isomorphisms on `H^i` for `i ≥` this bound; `None` means all degrees.
    pub certified_from: Option<i64>,
    /// `P` is finite and replaces `M` in the whole certified range (input semi-free, or a perfect witness).
    pub finite: bool,
    /// Minimal generator counts in the trusted degrees, highest first (empty when not minimized).
    pub betti: Vec<(i64, usize)>,
    pub minimal: bool,
    pub cutoff: Option<i64>,
}

fn sub_semifree(p: &SemiFreeModule, keep: &[usize]) -> SemiFreeModule {
    let index: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(n, &o)| (o, n)).collect();
    let basis: Vec<BasisElement> = keep.iter().map(|&k| p.basis()[k].clone()).collect();
    let diff: Vec<FreeElement> = keep
        .iter()
        .map(|&k| p.differential_of(k).iter().map(|(l, c)| (index[l], c.clone())).collect())
        .collect();
    SemiFreeModule::new_unchecked(p.ring_arc().clone(), basis, diff)
}

/// Resolves `M` down to `cutoff`, minimizes over a local `A⁰`, and cuts out a finite witness when the
/// minimal generators vanish in degree `cutoff + 1`.
pub fn replace(m: &Module, cutoff: i64) -> Result<Replacement, Error> {
    let local = degree_zero_is_local(m.ring());
    if let Module::SemiFree(p) = m {
        let cert = semifree_resolution(m, cutoff)?;
        if !local || p.rank() == 0 {
            return Ok(Replacement { p: p.clone(), map: cert.map, certified_from: None, finite: true, betti: Vec::new(), minimal: false, cutoff: None });
        }
        let cert = minimize(&cert)?;
        return Ok(Replacement { p: cert.p.clone(), betti: cert.betti(), map: cert.map, certified_from: None, finite: true, minimal: true, cutoff: None });
    }
    let mut cert = semifree_resolution(m, cutoff)?;
    if local {
        cert = minimize(&cert)?;
    }
    let top = cert.top().unwrap_or(cutoff);
    let betti: Vec<(i64, usize)> = if local { cert.betti_window(cutoff + 1, top.max(cutoff + 1)) } else { Vec::new() };
    let target = m.clone();
    let images: Vec<Vec<Scalar>> = (0..cert.p.rank()).map(|k| cert.map.image(k).to_vec()).collect();
    if local && !cert.p.basis().iter().any(|b| b.degree == cutoff + 1) {
        let keep: Vec<usize> = (0..cert.p.rank()).filter(|&k| cert.p.basis()[k].degree >= cutoff + 2).collect();
        let p = Arc::new(sub_semifree(&cert.p, &keep));
        let map = SemiFreeMap::new(p.clone(), target.clone(), keep.iter().map(|&k| images[k].clone()).collect())?;
        let hi = top.max(cutoff + 2) + 1;
        // A gap in the Betti numbers does not force finiteness; keep the witness only if it checks out.
        if is_quasi_iso(&map.realize(cutoff + 1, hi)?).holds {
            return Ok(Replacement { p, map, certified_from: Some(cutoff + 2), finite: true, betti, minimal: true, cutoff: Some(cutoff) });
        }
    }
    let map = SemiFreeMap::new_unchecked(cert.p.clone(), target, images)?;
    Ok(Replacement { p: cert.p.clone(), map, certified_from: Some(cutoff + 1), finite: false, betti, minimal: local, cutoff: Some(cutoff) })
}

/// A derived-functor value: a representative complex and the degrees where its cohomology is the right one.
#[derive(Clone)]
pub struct Derived {
    pub module: Module,
    pub trusted: Bounds,
    /// Replacements of the first argument, one per factor of the ring.
    pub replacements: Vec<(Piece, Replacement)>,
    /// `true` when no truncation is involved.
    pub exact: bool,
}

impl Derived {
    fn exact(module: Module) -> Derived {
        Derived { module, trusted: Bounds::ALL, replacements: Vec::new(), exact: true }
    }

    /// Realizes on `[lo − 1, hi + 1]` so that cohomology is determined on `[lo, hi]`.
    pub fn realize(&self, lo: i64, hi: i64) -> Result<WindowedModule, Error> {
        if !self.trusted.contains(lo) || !self.trusted.contains(hi) {
            return Err(Error::WindowUnderflow(format!("derived value is only certified on {:?}", self.trusted)));
        }
        self.module.realize(lo - 1, hi + 1)
    }

    /// `dim H^i` on `[lo, hi]`.
    pub fn cohomology_dims(&self, lo: i64, hi: i64) -> Result<Vec<(i64, usize)>, Error> {
        let h = cohomology(&self.realize(lo, hi)?);
        (lo..=hi)
            .map(|i| h.dim(i).map(|d| (i, d)).ok_or_else(|| Error::WindowUnderflow(format!("cohomology untrusted at degree {i}"))))
            .collect()
    }
}

fn support_lo(m: &Module) -> Option<i64> {
    let s = m.extent().support;
    if s.is_empty() {
        Some(0)
    } else {
        s.lo
    }
}

fn support_hi(m: &Module) -> Option<i64> {
    let s = m.extent().support;
    if s.is_empty() {
        Some(0)
    } else {
        s.hi
    }
}

/// `RHom_A(M, N)`, certified on `[lo, hi]`. Coinduced targets use `Hom_A(M, Hom_K(A, V)) ≅ Hom_K(M, V)`.
pub fn rhom(m: &Module, n: &Module, lo: i64, hi: i64) -> Result<Derived, Error> {
    if m.ring() != n.ring() {
        return Err(Error::InvalidInput("RHom between modules over different rings".into()));
    }
    if let Module::Coinduced(c) = n {
        return Ok(Derived::exact(Module::lazy(KDual::new(m.clone(), c.coefficients().to_vec()))));
    }
    if let Module::SemiFree(p) = m {
        return Ok(Derived::exact(hom_complex(p, n)?));
    }
    let t = support_lo(n);
    let cutoff = match t {
        Some(t) => t - hi - 2,
        None => lo.min(0) - 2,
    };
    let mut parts = Vec::new();
    let mut reps = Vec::new();
    let mut exact = true;
    for piece in pieces(m.ring()) {
        let me = piece.localize(m)?;
        let ne = piece.localize(n)?;
        let r = replace(&me, cutoff)?;
        if !r.finite {
            if t.is_none() {
                return Err(Error::Precondition("RHom into a module unbounded below needs a perfect source within the window".into()));
            }
            exact = false;
        }
        parts.push(piece.restrict(hom_complex(&r.p, &ne)?)?);
        reps.push((piece, r));
    }
    let module = if parts.is_empty() { Module::semifree(SemiFreeModule::free(m.ring().clone(), &[])) } else { Module::sum(&parts)? };
    let trusted = if exact { Bounds::ALL } else { Bounds { lo: None, hi: Some(t.unwrap() - cutoff - 1) } };
    Ok(Derived { module, trusted, replacements: reps, exact })
}

/// `M ⊗^L_A N`, certified on `[lo, hi]`.
pub fn dtensor(m: &Module, n: &Module, lo: i64, hi: i64) -> Result<Derived, Error> {
    if m.ring() != n.ring() {
        return Err(Error::InvalidInput("tensor product of modules over different rings".into()));
    }
    if let Module::SemiFree(p) = m {
        return Ok(Derived::exact(tensor(p, n)?));
    }
    if let Module::SemiFree(q) = n {
        return Ok(Derived::exact(tensor_right(m, q)?));
    }
    let _ = hi;
    let s = support_hi(n).ok_or_else(|| Error::Precondition("derived tensor needs the second factor bounded above".into()))?;
    let cutoff = lo - s - 2;
    let mut parts = Vec::new();
    let mut reps = Vec::new();
    let mut exact = true;
    for piece in pieces(m.ring()) {
        let me = piece.localize(m)?;
        let ne = piece.localize(n)?;
        let r = replace(&me, cutoff)?;
        exact &= r.finite;
        parts.push(piece.restrict(tensor(&r.p, &ne)?)?);
        reps.push((piece, r));
    }
    let module = if parts.is_empty() { Module::semifree(SemiFreeModule::free(m.ring().clone(), &[])) } else { Module::sum(&parts)? };
    let trusted = if exact { Bounds::ALL } else { Bounds { lo: Some(cutoff + s + 1), hi: None } };
    Ok(Derived { module, trusted, replacements: reps, exact })
}

/// `ψ: Hom_A(L, M) ⊗_A N → Hom_A(L, M ⊗_A N)`, `ψ(α ⊗ n)(l) = (−1)^{|n||l|} α(l) ⊗ n`, realized on `[lo, hi]`.
pub fn psi(l: &Arc<SemiFreeModule>, m: &Module, n: &Arc<SemiFreeModule>, lo: i64, hi: i64) -> Result<ChainMap, Error> {
    let field = m.ring().field().clone();
    let source = tensor_right(&hom_complex(l, m)?, n)?;
    let target = hom_complex(l, &tensor_right(m, n)?)?;
    let (ws, wt) = (Arc::new(source.realize(lo, hi)?), Arc::new(target.realize(lo, hi)?));
    let mut maps = Vec::new();
    for i in lo..=hi {
        let mut mat = Matrix::zeros(&field, wt.dim(i), ws.dim(i));
        // source offsets: outer over n-basis (q), inner over l-basis (k)
        let mut src = BTreeMap::new();
        let mut off = 0;
        for (q, bq) in n.basis().iter().enumerate() {
            for (k, bk) in l.basis().iter().enumerate() {
                let d = m.dim(i - bq.degree + bk.degree);
                src.insert((q, k), off);
                off += d;
            }
        }
        let mut off = 0;
        for (k, bk) in l.basis().iter().enumerate() {
            for (q, bq) in n.basis().iter().enumerate() {
                let d = m.dim(i + bk.degree - bq.degree);
                let sign = field.one().signed((bq.degree * bk.degree).rem_euclid(2) == 1);
                let so = src[&(q, k)];
                for x in 0..d {
                    mat.set(off + x, so + x, sign.clone());
                }
                off += d;
            }
        }
        maps.push(mat);
    }
    ChainMap::new(ws, wt, lo, hi, maps)
}

/// The unit `A → RHom_A(M, M)`, `a ↦ a·id`, as a map out of the free module of rank one.
pub fn adjunction_unit(m: &Module, lo: i64, hi: i64) -> Result<(SemiFreeMap, Derived), Error> {
    let ring = m.ring().clone();
    let free = Arc::new(SemiFreeModule::ring_module(ring.clone()));
    let d = rhom(m, m, lo, hi)?;
    let z = match m {
        Module::Coinduced(c) => {
            let coeffs = c.coefficients();
            let unit = free.to_vector(0, &free.generator_element(0));
            let mut z = Vec::new();
            for (cv, &v) in coeffs.iter().enumerate() {
                for (cw, &w) in coeffs.iter().enumerate() {
                    let block = free.dim(w - v);
                    if cv == cw {
                        z.extend(unit.iter().cloned());
                    } else {
                        z.extend(zero_vec(ring.field(), block));
                    }
                }
            }
            z
        }
        Module::SemiFree(p) => (0..p.rank()).flat_map(|k| p.to_vector(p.basis()[k].degree, &p.generator_element(k))).collect(),
        _ => d.replacements.iter().flat_map(|(_, r)| r.map.as_hom_element()).collect(),
    };
    let unit = SemiFreeMap::new(free, d.module.clone(), vec![z])?;
    Ok((unit, d))
}

/// Checks a map out of a semi-free module on `[lo, hi]`.
pub fn check_quasi_iso(f: &SemiFreeMap, lo: i64, hi: i64) -> Result<QisVerdict, Error> {
    let chain = f.realize(lo - 1, hi + 1)?;
    let mut v = is_quasi_iso(&chain);
    v.checked.retain(|i| (lo..=hi).contains(i));
    v.complete = v.checked.len() as i64 == hi - lo + 1;
    if let Some(i) = v.failing {
        if !(lo..=hi).contains(&i) {
            v.failing = None;
            v.holds = true;
        }
    }
    Ok(v)
}

/// Checks a chain map between realized modules on `[lo, hi]` (windows must extend one step beyond).
pub fn check_chain_quasi_iso(f: &ChainMap, lo: i64, hi: i64) -> QisVerdict {
    let hs = cohomology(f.source());
    let ht = cohomology(f.target());
    let mut checked = Vec::new();
    for i in lo..=hi {
        let Some(m) = f.induced(&hs, &ht, i) else { continue };
        checked.push(i);
        if !(m.rows() == m.cols() && m.rank() == m.rows()) {
            let complete = false;
            return QisVerdict { holds: false, checked, complete, failing: Some(i) };
        }
    }
    let complete = checked.len() as i64 == hi - lo + 1;
    QisVerdict { holds: true, checked, complete, failing: None }
}

/// Outcome of a biduality test.
pub struct Biduality {
    pub verdict: QisVerdict,
    pub window: (i64, i64),
}

/// The evaluation `M → RHom(RHom(M, R), R)` tested on `[lo, hi]`.
pub fn biduality(m: &Module, r: &Module, lo: i64, hi: i64) -> Result<Biduality, Error> {
    if let Module::Coinduced(c) = r {
        let coeffs = c.coefficients().to_vec();
        let dual = Module::lazy(KDual::new(m.clone(), coeffs.clone()));
        let dd = Module::lazy(KDual::new(dual, coeffs.clone()));
        let ws = Arc::new(m.realize(lo - 1, hi + 1)?);
        let wt = Arc::new(dd.realize(lo - 1, hi + 1)?);
        let field = m.ring().field().clone();
        let maps = (lo - 1..=hi + 1)
            .map(|j| {
                let mut mat = Matrix::zeros(&field, wt.dim(j), ws.dim(j));
                let n = m.dim(j);
                let mut off = 0;
                for &v in &coeffs {
                    let s = v - j;
                    for &w in &coeffs {
                        let block = m.dim(w - s);
                        if w == v {
                            let sign = field.one().signed((j * (v + 1)).rem_euclid(2) == 1);
                            for x in 0..n {
                                mat.set(off + x, x, sign.clone());
                            }
                        }
                        off += block;
                    }
                }
                mat
            })
            .collect();
        let chain = ChainMap::new(ws, wt, lo - 1, hi + 1, maps)?;
        return Ok(Biduality { verdict: check_chain_quasi_iso(&chain, lo, hi), window: (lo, hi) });
    }
    biduality_by_resolution(m, r, lo, hi)
}

fn biduality_by_resolution(m: &Module, r: &Module, lo: i64, hi: i64) -> Result<Biduality, Error> {
    if !degree_zero_is_local(m.ring()) {
        return Err(Error::Unsupported("biduality against a non-coinduced module needs a local degree-zero algebra".into()));
    }
    let field = m.ring().field().clone();
    let (t, s) = match (support_lo(r), support_hi(r)) {
        (Some(t), Some(s)) => (t, s),
        _ => return Err(Error::Precondition("biduality needs R with bounded cohomology".into())),
    };
    let (a, b) = match (support_lo(m), support_hi(m)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Precondition("biduality needs M bounded".into())),
    };
    // P → M, then τ^{≤n} Hom(P, R) ≃ RHom(M, R) when n ≥ s − a and n ≤ t − c₁ − 1.
    let n = s - a;
    let c1 = (t - n - 1).min(lo - 2);
    let rep = replace(m, c1)?;
    let p = rep.p.clone();
    let h = hom_complex(&p, r)?;
    let bottom = t - b - (hi - lo) - 4;
    let hw = h.realize(bottom.min(n) - 1, n + 1)?;
    let sqs: Vec<Subquotient> = (hw.lo()..=n)
        .map(|i| {
            let d = hw.dim(i);
            let total: Vec<Vec<Scalar>> =
                if i == n { hw.differential(n).kernel() } else { (0..d).map(|j| crate::linalg::unit_vec(&field, d, j)).collect() };
            Subquotient::new(&field, d, &total, &[])
        })
        .collect();
    let tau = Arc::new(subquotient_module(&hw, hw.lo(), n, &sqs, Boundary::Truncated, Boundary::ExactlyZero)?);
    let c2 = t - hi - 3;
    if c2 <= tau.lo() {
        return Err(Error::WindowUnderflow("dual window too small for the requested range".into()));
    }
    let qrep = replace(&Module::Windowed(tau.clone()), c2)?;
    let q = qrep.p.clone();
    // ρ(q_l) in Hom(P, R) coordinates.
    let rho: Vec<Vec<Scalar>> = (0..q.rank())
        .map(|l| {
            let deg = q.basis()[l].degree;
            let sq = &sqs[(deg - hw.lo()) as usize];
            let coords = qrep.map.image(l);
            let mut v = zero_vec(&field, hw.dim(deg));
            for (c, rep) in coords.iter().zip(&sq.reps) {
                crate::linalg::axpy(&mut v, c, rep);
            }
            v
        })
        .collect();
    let target = hom_complex(&q, r)?;
    let images: Vec<Vec<Scalar>> = p
        .basis()
        .iter()
        .enumerate()
        .map(|(k, bk)| {
            let mut out = Vec::new();
            for (l, bl) in q.basis().iter().enumerate() {
                let mut off = 0;
                for (kk, bkk) in p.basis().iter().enumerate() {
                    let dim = r.dim(bl.degree + bkk.degree);
                    if kk == k {
                        let sign = field.one().signed((bk.degree * bl.degree).rem_euclid(2) == 1);
                        out.extend(rho[l][off..off + dim].iter().map(|x| x * &sign));
                    }
                    off += dim;
                }
            }
            out
        })
        .collect();
    let ev = SemiFreeMap::new(p, target, images)?;
    Ok(Biduality { verdict: check_quasi_iso(&ev, lo, hi)?, window: (lo, hi) })
}

/// Restriction of scalars along `f: A → B`.
pub fn restrict(f: &Arc<DgRingHom>, m: &Module) -> Result<Module, Error> {
    Ok(Module::lazy(Restricted::new(f.clone(), m.clone())?))
}

/// Which sign the `B`-action on `Hom_{A⁰}(B, N)` carries.
fn coinduce_sign(delta: i64, y_degree: i64, phi_degree: i64) -> bool {
    let _ = phi_degree;
    (delta * y_degree).rem_euclid(2) == 1
}

/// `RHom_A(B, R_A)` as a `B`-module through the first argument.
pub fn coinduce(f: &Arc<DgRingHom>, r: &Module) -> Result<Module, Error> {
    let (a, b) = (f.source(), f.target());
    if r.ring() != a {
        return Err(Error::InvalidInput("coinduction of a module over a different ring".into()));
    }
    if let Module::Coinduced(c) = r {
        return Ok(Module::Coinduced(Arc::new(CoinducedModule::new(b.clone(), c.coefficients().to_vec()))));
    }
    if !a.generators().is_empty() {
        return Err(Error::Unsupported("coinduction needs a coinduced target or a source ring concentrated in degree 0".into()));
    }
    let field = a.field().clone();
    let bm = Module::semifree(SemiFreeModule::ring_module(b.clone()));
    let (blo, bhi) = match (support_lo(&bm), support_hi(&bm)) {
        (Some(l), Some(h)) => (l, h),
        _ => return Err(Error::Unsupported("coinduction needs B with finitely many nonzero degrees".into())),
    };
    let (rlo, rhi) = match (support_lo(r), support_hi(r)) {
        (Some(l), Some(h)) => (l, h),
        _ => return Err(Error::Precondition("coinduction needs a bounded R".into())),
    };
    let rw = r.realize(rlo - 1, rhi + 1)?;
    let bw = bm.realize(blo - 1, bhi + 1)?;
    // B must be degreewise free over A⁰ so that it is K-projective over A.
    let a0 = a.degree_zero();
    let rad = a0.radical();
    for i in blo..=bhi {
        let n = bw.dim(i);
        let mut ech = Echelon::new(n);
        for x in &rad {
            for c in act_element(&bw, &f.apply(&a.from_a0(x)), i).columns() {
                ech.insert(&c);
            }
        }
        let top = n - ech.dim();
        let simple = a0.dim() - rad.len();
        if simple == 0 || !top.is_multiple_of(simple) || top / simple * a0.dim() != n {
            return Err(Error::Unsupported(format!("B is not free over A⁰ in degree {i}")));
        }
    }
    let a_act = |w: &WindowedModule, x: usize, i: i64, through: bool| -> Matrix {
        if through {
            act_element(w, &f.apply(&a.a0_basis(x)), i)
        } else {
            w.action(Actor::Basis(x), i)
        }
    };
    // S_{i,j} = Hom_{A⁰}(B^i, R^{i+j}) inside vec(q × p) matrices (column-major).
    let mut spaces: BTreeMap<(i64, i64), Matrix> = BTreeMap::new();
    let (jlo, jhi) = (rlo - bhi, rhi - blo);
    for j in jlo - 1..=jhi + 1 {
        for i in blo..=bhi {
            let (p, q) = (bw.dim(i), rw.dim(i + j));
            let mut rows: Vec<Matrix> = Vec::new();
            for x in 0..a0.dim() {
                let xb = a_act(&bw, x, i, true);
                let xr = a_act(&rw, x, i + j, false);
                rows.push(kron(&xb.transpose(), &Matrix::identity(&field, q)).sub(&kron(&Matrix::identity(&field, p), &xr)));
            }
            let big = Matrix::vstack(&field, p * q, &rows.iter().collect::<Vec<_>>());
            let basis = big.kernel();
            spaces.insert((i, j), Matrix::from_columns(&field, p * q, &basis));
        }
    }
    let dim_at = |j: i64| -> usize { (blo..=bhi).map(|i| spaces.get(&(i, j)).map_or(0, Matrix::cols)).sum() };
    let offsets = |j: i64| -> BTreeMap<i64, usize> {
        let mut acc = 0;
        (blo..=bhi)
            .map(|i| {
                let o = acc;
                acc += spaces.get(&(i, j)).map_or(0, Matrix::cols);
                (i, o)
            })
            .collect()
    };
    // Expresses a q × p matrix in the basis of S_{i,j}.
    let coords = |i: i64, j: i64, m: &Matrix| -> Vec<Scalar> {
        let s = &spaces[&(i, j)];
        let v: Vec<Scalar> = (0..m.cols()).flat_map(|c| m.column(c)).collect();
        Solver::new(s).solve(&v).expect("map is A⁰-linear")
    };
    let unvec = |i: i64, j: i64, col: usize| -> Matrix {
        let s = &spaces[&(i, j)];
        let (p, q) = (bw.dim(i), rw.dim(i + j));
        let v = s.column(col);
        let cols: Vec<Vec<Scalar>> = (0..p).map(|c| v[c * q..(c + 1) * q].to_vec()).collect();
        Matrix::from_columns(&field, q, &cols)
    };
    let (lo, hi) = (jlo, jhi);
    let dims: Vec<usize> = (lo..=hi).map(dim_at).collect();
    let mut diffs = Vec::new();
    for j in lo..=hi {
        let (so, to) = (offsets(j), offsets(j + 1));
        let mut m = Matrix::zeros(&field, dim_at(j + 1), dim_at(j));
        for i in blo..=bhi {
            for col in 0..spaces[&(i, j)].cols() {
                let phi = unvec(i, j, col);
                let a = rw.differential(i + j).mul(&phi);
                for (x, c) in coords(i, j + 1, &a).into_iter().enumerate() {
                    m.add_to(to[&i] + x, so[&i] + col, &c);
                }
                if i > blo {
                    let sign = field.one().signed(j.rem_euclid(2) == 0);
                    let bmat = phi.mul(&bw.differential(i - 1)).scale(&sign);
                    for (x, c) in coords(i - 1, j + 1, &bmat).into_iter().enumerate() {
                        m.add_to(to[&(i - 1)] + x, so[&i] + col, &c);
                    }
                }
            }
        }
        diffs.push(m);
    }
    let actors = Actor::all(b);
    let mut actions = Vec::new();
    for act in &actors {
        let delta = act.degree(b);
        let mut per = Vec::new();
        for j in lo..=hi {
            let t = j + delta;
            let (so, to) = (offsets(j), offsets(t));
            let mut m = Matrix::zeros(&field, if (lo..=hi).contains(&t) { dim_at(t) } else { 0 }, dim_at(j));
            if (lo..=hi).contains(&t) {
                for i in blo..=bhi {
                    let y = i - delta;
                    if y < blo || y > bhi {
                        continue;
                    }
                    for col in 0..spaces[&(i, j)].cols() {
                        let phi = unvec(i, j, col);
                        let sign = field.one().signed(coinduce_sign(delta, y, j));
                        let img = phi.mul(&bw.action(*act, y)).scale(&sign);
                        for (x, c) in coords(y, t, &img).into_iter().enumerate() {
                            m.add_to(to[&y] + x, so[&i] + col, &c);
                        }
                    }
                }
            }
            per.push(m);
        }
        actions.push(per);
    }
    Ok(Module::windowed(WindowedModule::new(b.clone(), lo, hi, dims, diffs, actions, Boundary::ExactlyZero, Boundary::ExactlyZero)?))
}

fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let field = a.field().clone();
    let mut m = Matrix::zeros(&field, a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if !a.get(i, j).is_zero() {
                m.set_block(i * b.rows(), j * b.cols(), &b.scale(a.get(i, j)));
            }
        }
    }
    m
}

/// A Čech complex `C(M; a)` with its augmentation.
pub struct CechComplex {
    /// The covering sequence in `A⁰` coordinates.
    pub cover: Vec<Vec<Scalar>>,
    /// Index tuples per Čech degree, lexicographic.
    pub tuples: Vec<Vec<Vec<usize>>>,
    /// Dimension of each localized `A⁰`, keyed by tuple.
    pub localized_dims: BTreeMap<Vec<usize>, usize>,
    pub module: Arc<WindowedModule>,
    pub augmentation: ChainMap,
}

/// Checks that the classes of `cover` generate the unit ideal of `H⁰(A)`; returns the ideal on failure.
pub fn check_cover(a: &DgRing, cover: &[Vec<Scalar>]) -> Result<(), Error> {
    let h0 = h0_algebra(a);
    let classes: Vec<Vec<Scalar>> = cover.iter().map(|c| h0.projection.mul_vec(c)).collect();
    let ideal = h0.algebra.ideal_span(&classes);
    if ideal.len() != h0.algebra.dim() {
        let shown: Vec<String> = ideal.iter().map(|v| format!("{v:?}")).collect();
        return Err(Error::Precondition(format!(
            "not a covering sequence: the ideal generated has dimension {} < {} (basis {})",
            ideal.len(),
            h0.algebra.dim(),
            shown.join(", ")
        )));
    }
    Ok(())
}

fn increasing_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for t in increasing_tuples(n, len - 1) {
        let start = t.last().map_or(0, |&x| x + 1);
        for x in start..n {
            let mut u = t.clone();
            u.push(x);
            out.push(u);
        }
    }
    out
}

/// `C(M; a) = C(A⁰; a) ⊗_{A⁰} M` on the realized window `[lo, hi]` of `M`, with `c_M(m) = Σ_i 1_i ⊗ m`.
pub fn cech(m: &Module, cover: &[Vec<Scalar>], lo: i64, hi: i64) -> Result<CechComplex, Error> {
    let ring = m.ring().clone();
    let field = ring.field().clone();
    check_cover(&ring, cover)?;
    let a0 = ring.degree_zero();
    let n = cover.len();
    let w = Arc::new(m.realize(lo, hi)?);
    let tuples: Vec<Vec<Vec<usize>>> = (1..=n).map(|len| increasing_tuples(n, len)).collect();
    // For each tuple: the ideal killed by localization, and the subquotient of each M^i.
    let mut ideals: BTreeMap<Vec<usize>, Vec<Vec<Scalar>>> = BTreeMap::new();
    let mut localized_dims = BTreeMap::new();
    for t in tuples.iter().flatten() {
        let mut s = a0.unit();
        for &i in t {
            s = a0.mul(&s, &cover[i]);
        }
        let (loc, _) = localize(&ring, &s);
        localized_dims.insert(t.clone(), loc.degree_zero().dim());
        ideals.insert(t.clone(), a0.mult_matrix(&s).stable_kernel()?);
    }
    let quot = |t: &Vec<usize>, i: i64| -> Subquotient {
        let d = w.dim(i);
        let mut sub = Vec::new();
        for v in &ideals[t] {
            sub.extend(act_element(w.as_ref(), &ring.from_a0(v), i).columns());
        }
        let total: Vec<Vec<Scalar>> = (0..d).map(|j| crate::linalg::unit_vec(&field, d, j)).collect();
        Subquotient::new(&field, d, &total, &sub)
    };
    let mut sq: BTreeMap<(Vec<usize>, i64), Subquotient> = BTreeMap::new();
    for t in tuples.iter().flatten() {
        for i in lo..=hi {
            sq.insert((t.clone(), i), quot(t, i));
        }
    }
    // Below a truncated window, total degree k needs M^{k−p} for every p < n.
    let clo = if w.below() == Boundary::ExactlyZero { lo } else { lo + n as i64 - 1 };
    if clo > hi {
        return Err(Error::WindowUnderflow(format!("window {lo}:{hi} is too short for a cover of length {n}")));
    }
    let chi = hi + n as i64 - 1;
    // Blocks of total degree k: (p, tuple, i = k − p) with tuple of length p + 1.
    let blocks = |k: i64| -> Vec<(usize, Vec<usize>, i64, usize)> {
        let mut out = Vec::new();
        for (p, ts) in tuples.iter().enumerate() {
            let i = k - p as i64;
            if i < lo || i > hi {
                continue;
            }
            for t in ts {
                out.push((p, t.clone(), i, sq[&(t.clone(), i)].dim()));
            }
        }
        out
    };
    let offsets = |k: i64| -> BTreeMap<Vec<usize>, usize> {
        let mut acc = 0;
        blocks(k)
            .into_iter()
            .map(|(_, t, _, d)| {
                let o = acc;
                acc += d;
                (t, o)
            })
            .collect()
    };
    let dim_at = |k: i64| -> usize { blocks(k).iter().map(|b| b.3).sum() };
    let descend = |m: &Matrix, s: &Subquotient, t: &Subquotient| -> Matrix {
        let cols: Vec<Vec<Scalar>> = s.reps.iter().map(|r| t.reduce(&m.mul_vec(r)).expect("localization is compatible")).collect();
        Matrix::from_columns(&field, t.dim(), &cols)
    };
    let mut dims = Vec::new();
    let mut diffs = Vec::new();
    for k in clo..=chi {
        dims.push(dim_at(k));
        let (so, to) = (offsets(k), offsets(k + 1));
        let mut mat = Matrix::zeros(&field, if k < chi { dim_at(k + 1) } else { 0 }, dim_at(k));
        if k < chi {
            for (p, t, i, _) in blocks(k) {
                let sign = field.one().signed(p % 2 == 1);
                if i < hi {
                    let blk = descend(&w.differential(i), &sq[&(t.clone(), i)], &sq[&(t.clone(), i + 1)]).scale(&sign);
                    mat.set_block(to[&t], so[&t], &blk);
                }
                // Čech part into tuples of length p + 2 containing t.
                if p + 1 < n {
                    for u in &tuples[p + 1] {
                        let Some(pos) = (0..u.len()).find(|&r| {
                            let mut v = u.clone();
                            v.remove(r);
                            v == t
                        }) else {
                            continue;
                        };
                        let ident = Matrix::identity(&field, w.dim(i));
                        let blk = descend(&ident, &sq[&(t.clone(), i)], &sq[&(u.clone(), i)]).scale(&field.one().signed(pos % 2 == 1));
                        let cur = mat.block(to[u], blk.rows(), so[&t], blk.cols());
                        mat.set_block(to[u], so[&t], &cur.add(&blk));
                    }
                }
            }
        }
        diffs.push(mat);
    }
    let mut actions = Vec::new();
    for act in Actor::all(&ring) {
        let delta = act.degree(&ring);
        let mut per = Vec::new();
        for k in clo..=chi {
            let t_deg = k + delta;
            let inside = (clo..=chi).contains(&t_deg);
            let (so, to) = (offsets(k), offsets(t_deg));
            let mut mat = Matrix::zeros(&field, if inside { dim_at(t_deg) } else { 0 }, dim_at(k));
            if inside {
                for (p, t, i, _) in blocks(k) {
                    if i + delta < lo {
                        continue;
                    }
                    let sign = field.one().signed((delta * p as i64).rem_euclid(2) == 1);
                    let blk = descend(&w.action(act, i), &sq[&(t.clone(), i)], &sq[&(t.clone(), i + delta)]).scale(&sign);
                    mat.set_block(to[&t], so[&t], &blk);
                }
            }
            per.push(mat);
        }
        actions.push(per);
    }
    let module = Arc::new(WindowedModule::new(ring.clone(), clo, chi, dims, diffs, actions, w.below(), w.above())?);
    let maps = (clo..=hi)
        .map(|i| {
            let to = offsets(i);
            let mut mat = Matrix::zeros(&field, module.dim(i), w.dim(i));
            for t in &tuples[0] {
                let blk = descend(&Matrix::identity(&field, w.dim(i)), &sq[&(t.clone(), i)], &sq[&(t.clone(), i)]);
                let q = &sq[&(t.clone(), i)];
                let proj = {
                    let cols: Vec<Vec<Scalar>> = (0..w.dim(i))
                        .map(|j| q.reduce(&crate::linalg::unit_vec(&field, w.dim(i), j)).expect("quotient"))
                        .collect();
                    Matrix::from_columns(&field, q.dim(), &cols)
                };
                let _ = blk;
                mat.set_block(to[t], 0, &proj);
            }
            mat
        })
        .collect();
    let augmentation = ChainMap::new(w, module.clone(), clo, hi, maps)?;
    Ok(CechComplex { cover: cover.to_vec(), tuples, localized_dims, module, augmentation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Field;
    use crate::module::{CoinducedModule, SemiFreeModule};
    use crate::ring::fixtures::{gf, koszul_x3, poly_t, split2};
    use crate::ring::{DegreeZeroAlgebra, DgRing};

    fn residue(ring: &Arc<DgRing>) -> Module {
        let a0 = ring.degree_zero();
        let q = a0.quotient(&a0.radical());
        let f = ring.field();
        let acts = (0..a0.dim()).map(|x| Matrix::from_rows(f, vec![vec![q.projection.get(0, x).clone()]]).unwrap()).collect();
        Module::windowed(WindowedModule::concentrated(ring.clone(), 0, acts).unwrap())
    }

    fn dims(d: &Derived, lo: i64, hi: i64) -> Vec<usize> {
        d.cohomology_dims(lo, hi).unwrap().into_iter().map(|x| x.1).collect()
    }

    #[test]
    fn rhom_of_dualizing_module_over_polynomial_ring() {
        for f in [gf(2), Field::Rational] {
            let a = poly_t(&f);
            let r = Module::Coinduced(Arc::new(CoinducedModule::new(a.clone(), vec![0])));
            let d = rhom(&r, &r, -6, 0).unwrap();
            assert_eq!(dims(&d, -6, 0), vec![1, 0, 1, 0, 1, 0, 1]);
            let (unit, _) = adjunction_unit(&r, -6, 0).unwrap();
            assert!(check_quasi_iso(&unit, -6, 0).unwrap().holds);
            let k = residue(&a);
            let d = rhom(&k, &r, -4, 4).unwrap();
            assert_eq!(dims(&d, -4, 4), vec![0, 0, 0, 0, 1, 0, 0, 0, 0]);
        }
    }

    #[test]
    fn dtensor_of_residue_field_over_dual_numbers() {
        let f = gf(3);
        let a = Arc::new(DgRing::from_algebra(DegreeZeroAlgebra::truncated(&f, "x", 2).unwrap()));
        let k = residue(&a);
        let d = dtensor(&k, &k, -5, 0).unwrap();
        assert_eq!(dims(&d, -5, 0), vec![1; 6]);
    }

    #[test]
    fn units_and_psi() {
        let f = gf(5);
        let b = koszul_x3(&f);
        let a = Module::semifree(SemiFreeModule::ring_module(b.clone()));
        let (u, _) = adjunction_unit(&a, -3, 1).unwrap();
        assert!(check_quasi_iso(&u, -3, 1).unwrap().holds);
        let two = Module::sum(&[a.clone(), a.clone()]).unwrap();
        let (u, _) = adjunction_unit(&two, -3, 1).unwrap();
        assert!(!check_quasi_iso(&u, -3, 1).unwrap().holds);
        let l = Arc::new(SemiFreeModule::free(b.clone(), &[0, -1]));
        let n = Arc::new(SemiFreeModule::free(b.clone(), &[1]));
        let m = Module::Coinduced(Arc::new(CoinducedModule::new(b.clone(), vec![0])));
        let chain = psi(&l, &m, &n, -3, 3).unwrap();
        assert!(check_chain_quasi_iso(&chain, -2, 2).holds);
    }

    #[test]
    fn biduality_over_koszul_and_non_gorenstein() {
        let f = gf(3);
        let b = koszul_x3(&f);
        let r = Module::Coinduced(Arc::new(CoinducedModule::new(b.clone(), vec![0])));
        let k = residue(&b);
        assert!(biduality(&k, &r, -3, 3).unwrap().verdict.holds);
        let a0 = DegreeZeroAlgebra::monomial_quotient(&f, &["x", "y"], &[vec![2, 0], vec![1, 1], vec![0, 2]]).unwrap();
        let a = Arc::new(DgRing::from_algebra(a0));
        let ra = Module::semifree(SemiFreeModule::ring_module(a.clone()));
        let ka = residue(&a);
        assert!(!biduality(&ka, &ra, -1, 1).unwrap().verdict.holds);
        let free = Module::semifree(SemiFreeModule::ring_module(a.clone()));
        assert!(biduality(&free, &ra, -1, 1).unwrap().verdict.holds);
    }

    #[test]
    fn cech_on_split_rings() {
        let f = gf(5);
        let a = split2(&f);
        let m = Module::semifree(SemiFreeModule::ring_module(a.clone()));
        let e = connected_components(&a).0.representatives;
        let c = cech(&m, &e, -1, 1).unwrap();
        assert_eq!(c.localized_dims[&vec![0, 1]], 0);
        assert!(check_chain_quasi_iso(&c.augmentation, 0, 0).holds);
        let one = vec![a.degree_zero().unit()];
        let c = cech(&m, &one, -1, 1).unwrap();
        assert_eq!(c.module.dim(0), 2);
        let three = DegreeZeroAlgebra::product(&f, &[DegreeZeroAlgebra::base(&f), DegreeZeroAlgebra::base(&f), DegreeZeroAlgebra::base(&f)]).unwrap();
        let a3 = Arc::new(DgRing::from_algebra(three));
        let m3 = Module::semifree(SemiFreeModule::ring_module(a3.clone()));
        let (o, z) = (f.one(), f.zero());
        // basis 1, e₂, e₃: the cover is e₁ + e₂ = 1 − e₃ and e₂ + e₃
        let m1 = -&o;
        let cover = vec![vec![o.clone(), z.clone(), m1.clone()], vec![z.clone(), o.clone(), o.clone()]];
        let c = cech(&m3, &cover, -1, 1).unwrap();
        assert_eq!(c.module.dim(0), 4);
        assert_eq!(c.module.dim(1), 1);
        let h = cohomology(&c.module);
        assert_eq!(h.dim(0), Some(3));
        assert_eq!(h.dim(1), Some(0));
        assert!(check_chain_quasi_iso(&c.augmentation, 0, 1).holds);
        let bad = cech(&m3, &[vec![o.clone(), m1.clone(), m1.clone()]], -1, 1);
        assert!(matches!(bad, Err(Error::Precondition(_))));
    }

    #[test]
    fn coinduction_from_gorenstein_degree_zero() {
        let f = gf(3);
        let b = koszul_x3(&f);
        let a0 = Arc::new(DgRing::from_algebra(b.degree_zero().clone()));
        let inc = Arc::new(DgRingHom::new(a0.clone(), b.clone(), (0..3).map(|i| b.a0_basis(i)).collect(), Vec::new()).unwrap());
        let r = Module::semifree(SemiFreeModule::ring_module(a0.clone()).shift(1));
        let c = coinduce(&inc, &r).unwrap();
        let w = c.realize(-3, 3).unwrap();
        let h = cohomology(&w);
        assert_eq!(h.dim(-1), Some(1));
        assert_eq!(h.dim(0), Some(1));
        let k = Arc::new(DgRing::from_algebra(DegreeZeroAlgebra::base(&f)));
        let unit = Arc::new(DgRingHom::new(k.clone(), b.clone(), vec![b.one()], Vec::new()).unwrap());
        let rk = Module::Coinduced(Arc::new(CoinducedModule::new(k, vec![0])));
        let cb = coinduce(&unit, &rk).unwrap();
        let h = cohomology(&cb.realize(-1, 2).unwrap());
        assert_eq!((h.dim(0), h.dim(1)), (Some(1), Some(1)));
    }
}
