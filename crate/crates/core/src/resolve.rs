//! Semi-free resolutions, minimal models, reduction to `H⁰` and lifting.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{Echelon, Matrix, Scalar, Subquotient};
use crate::module::{
    act_element, cohomology, Actor, BasisElement, Boundary, DgModule, FreeElement, Module, SemiFreeMap, SemiFreeModule,
    WindowedModule,
};
use crate::ring::{h0_algebra, reduction_ring, DgRing, DgRingHom};
use crate::Error;

/// A semi-free module `P` with a map `π: P → M` that is a quasi-isomorphism in degrees `≥ cutoff + 1`.
#[derive(Clone)]
pub struct ResolutionCertificate {
    pub p: Arc<SemiFreeModule>,
    pub map: SemiFreeMap,
    /// `None` when `π` is an isomorphism of semi-free modules (no truncation).
    pub cutoff: Option<i64>,
}

impl ResolutionCertificate {
    /// Number of basis elements per degree, highest degree first.
    pub fn betti(&self) -> Vec<(i64, usize)> {
        let mut t: BTreeMap<i64, usize> = BTreeMap::new();
        for b in self.p.basis() {
            *t.entry(b.degree).or_default() += 1;
        }
        t.into_iter().rev().collect()
    }

    /// Betti numbers for every degree from the top down to `lo`, zeros included.
    pub fn betti_window(&self, lo: i64, hi: i64) -> Vec<(i64, usize)> {
        (lo..=hi).rev().map(|i| (i, self.p.basis().iter().filter(|b| b.degree == i).count())).collect()
    }

    pub fn semifree_length(&self) -> usize {
        self.betti().len()
    }

    /// Lowest degree in which `π` is certified to induce an isomorphism.
    pub fn certified_from(&self) -> Option<i64> {
        self.cutoff.map(|c| c + 1)
    }

    pub fn is_exact(&self) -> bool {
        self.cutoff.is_none()
    }

    /// Highest degree of a basis element (the top of `H(M)`).
    pub fn top(&self) -> Option<i64> {
        self.p.max_degree()
    }
}

fn identity_certificate(p: &Arc<SemiFreeModule>) -> Result<ResolutionCertificate, Error> {
    let images = (0..p.rank()).map(|k| p.to_vector(p.basis()[k].degree, &p.generator_element(k))).collect();
    let map = SemiFreeMap::new_unchecked(p.clone(), Module::SemiFree(p.clone()), images)?;
    Ok(ResolutionCertificate { p: p.clone(), map, cutoff: None })
}

fn a0_multiples(m: &dyn DgModule, i: i64, v: &[Scalar]) -> Vec<Vec<Scalar>> {
    (1..m.ring().degree_zero().dim()).map(|x| m.action(Actor::Basis(x), i).mul_vec(v)).collect()
}

/// Top-down resolution: at each degree `n` from `sup` down to `cutoff`, adjoin generators killing
/// `ker(H^{n+1}(P) → H^{n+1}(M))`, then generators surjecting onto `H^n(M)`.
pub fn semifree_resolution(m: &Module, cutoff: i64) -> Result<ResolutionCertificate, Error> {
    if let Module::SemiFree(p) = m {
        return identity_certificate(p);
    }
    let ring = m.ring().clone();
    let field = ring.field().clone();
    let ext = m.extent();
    let top = if ext.support.is_empty() {
        cutoff - 1
    } else {
        ext.support.hi.ok_or_else(|| Error::Precondition("H(M) is not known to be bounded above; M must lie in D⁻(A)".into()))?
    };
    let lo = cutoff - 1;
    let w = Arc::new(m.realize(lo.min(top), top.max(lo))?);
    let target = Module::Windowed(w.clone());
    let mut basis: Vec<BasisElement> = Vec::new();
    let mut diff: Vec<FreeElement> = Vec::new();
    let mut images: Vec<Vec<Scalar>> = Vec::new();
    let mut counter = 0usize;
    let mut fresh = |n: i64| {
        counter += 1;
        BasisElement { name: format!("g{counter}"), degree: n }
    };
    for n in (cutoff..=top).rev() {
        // Kill the kernel on H^{n+1}.
        if n < top {
            let p = SemiFreeModule::new_unchecked(ring.clone(), basis.clone(), diff.clone());
            let f = SemiFreeMap::new_unchecked(Arc::new(p.clone()), target.clone(), images.clone())?;
            let z = p.differential(n + 1).kernel();
            if !z.is_empty() {
                let np = p.dim(n + 1);
                let fz = f.matrix(n + 1).mul(&Matrix::from_columns(&field, np, &z));
                let dm = w.differential(n);
                let t = Matrix::hstack(&field, fz.rows(), &[&fz, &dm.neg()]);
                let mut ech = Echelon::new(np);
                for c in p.differential(n).columns() {
                    ech.insert(&c);
                }
                let zmat = Matrix::from_columns(&field, np, &z);
                for sol in t.kernel() {
                    let alpha = &sol[..z.len()];
                    let pre = sol[z.len()..].to_vec();
                    let zv = zmat.mul_vec(alpha);
                    if ech.insert(&zv) {
                        for mv in a0_multiples(&p, n + 1, &zv) {
                            ech.insert(&mv);
                        }
                        basis.push(fresh(n));
                        diff.push(p.from_vector(n + 1, &zv));
                        images.push(pre);
                    }
                }
            }
        }
        // Surject onto H^n.
        let p = SemiFreeModule::new_unchecked(ring.clone(), basis.clone(), diff.clone());
        let f = SemiFreeMap::new_unchecked(Arc::new(p.clone()), target.clone(), images.clone())?;
        let nm = w.dim(n);
        let mut ech = Echelon::new(nm);
        for c in w.differential(n - 1).columns() {
            ech.insert(&c);
        }
        let fm = f.matrix(n);
        for z in p.differential(n).kernel() {
            ech.insert(&fm.mul_vec(&z));
        }
        for y in w.differential(n).kernel() {
            if ech.insert(&y) {
                for mv in a0_multiples(w.as_ref(), n, &y) {
                    ech.insert(&mv);
                }
                basis.push(fresh(n));
                diff.push(FreeElement::new());
                images.push(y);
            }
        }
    }
    let p = Arc::new(SemiFreeModule::new(ring, basis, diff)?);
    let map = SemiFreeMap::new_unchecked(p.clone(), target, images)?;
    let cert = ResolutionCertificate { p, map, cutoff: Some(cutoff) };
    verify_resolution(&cert)?;
    Ok(cert)
}

/// Checks that `π` is a chain map, bijective on `H^i` for `i > cutoff` and surjective at the cutoff.
pub fn verify_resolution(cert: &ResolutionCertificate) -> Result<(), Error> {
    let Some(cutoff) = cert.cutoff else {
        return cert.map.verify();
    };
    cert.map.verify()?;
    let target = cert.map.target();
    let top = target.extent().support.hi.unwrap_or(cutoff).max(cert.top().unwrap_or(cutoff)).max(cutoff);
    let chain = cert.map.realize(cutoff - 1, top)?;
    let (hs, ht) = (cohomology(chain.source()), cohomology(chain.target()));
    for i in cutoff..=top {
        let Some(m) = chain.induced(&hs, &ht, i) else {
            return Err(Error::Verification(format!("resolution cohomology untrusted at degree {i}")));
        };
        let ok = if i == cutoff { m.rank() == m.rows() } else { m.rows() == m.cols() && m.rank() == m.rows() };
        if !ok {
            return Err(Error::Verification(format!("resolution map fails on cohomology at degree {i}")));
        }
    }
    Ok(())
}

/// Whether `A⁰` is a local algebra.
pub fn degree_zero_is_local(ring: &DgRing) -> bool {
    let s = ring.degree_zero().primitive_idempotents();
    s.idempotents.len() == 1
}

/// Gaussian cancellation of unit coefficients between basis elements of adjacent degrees.
/// Writing `d(b_k) = u·b_l + Σ_{j≠l} c_j b_j` with `u` a unit, the quotient by `A b_k + A d(b_k)` is
/// semi-free on the remaining basis, and `π' = π ∘ s` with `s(b_m) = b_m − (−1)^{|α_m|} α_m u⁻¹ b_k`
/// where `α_m` is the coefficient of `b_l` in `d(b_m)`.
pub fn minimize(cert: &ResolutionCertificate) -> Result<ResolutionCertificate, Error> {
    let ring = cert.p.ring_arc().clone();
    if !degree_zero_is_local(&ring) {
        return Err(Error::Unsupported("minimal models need a local degree-zero algebra; split into components first".into()));
    }
    let a0 = ring.degree_zero();
    let target = cert.map.target().clone();
    let one = ring.field().one();
    let mut basis = cert.p.basis().to_vec();
    let mut diff: Vec<FreeElement> = (0..basis.len()).map(|k| cert.p.differential_of(k).clone()).collect();
    let mut images: Vec<Vec<Scalar>> = (0..basis.len()).map(|k| cert.map.image(k).to_vec()).collect();
    loop {
        let mut pair = None;
        'search: for (k, d) in diff.iter().enumerate() {
            for (&l, c) in d {
                if c.degree() == 0 && a0.is_unit(&ring.to_a0(c)) {
                    pair = Some((k, l, ring.to_a0(c)));
                    break 'search;
                }
            }
        }
        let Some((k, l, u)) = pair else { break };
        let uinv = ring.from_a0(&a0.inverse(&u).expect("unit"));
        let dk = diff[k].clone();
        let deg_k = basis[k].degree;
        for m in 0..basis.len() {
            if m == k || m == l {
                continue;
            }
            let Some(alpha) = diff[m].get(&l).cloned() else {
                diff[m].remove(&k);
                continue;
            };
            diff[m].remove(&l);
            diff[m].remove(&k);
            let au = ring.mul(&alpha, &uinv);
            for (&j, c) in &dk {
                if j == l {
                    continue;
                }
                let t = ring.mul(&au, c);
                match diff[m].get_mut(&j) {
                    Some(e) => e.add_scaled(&-&one, &t),
                    None => {
                        diff[m].insert(j, t.neg());
                    }
                }
            }
            diff[m].retain(|_, c| !c.is_zero());
            let corr = act_element(target.inner(), &au, deg_k).mul_vec(&images[k]);
            let sign = one.clone().signed(alpha.degree().rem_euclid(2) == 1);
            for (x, y) in images[m].iter_mut().zip(corr) {
                *x -= &(&sign * &y);
            }
        }
        let keep: Vec<usize> = (0..basis.len()).filter(|&j| j != k && j != l).collect();
        let index: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        basis = keep.iter().map(|&j| basis[j].clone()).collect();
        images = keep.iter().map(|&j| images[j].clone()).collect();
        diff = keep.iter().map(|&j| diff[j].iter().map(|(o, c)| (index[o], c.clone())).collect()).collect();
    }
    let p = Arc::new(SemiFreeModule::new(ring, basis, diff)?);
    let map = SemiFreeMap::new_unchecked(p.clone(), target, images)?;
    let out = ResolutionCertificate { p, map, cutoff: cert.cutoff };
    verify_resolution(&out)?;
    Ok(out)
}

/// `bar A ⊗_A P` for a resolution `P` of `M`, realized over `bar A = H⁰(A)` on `[cutoff, top]`.
pub struct Reduction {
    pub ring: Arc<DgRing>,
    pub projection: DgRingHom,
    pub module: SemiFreeModule,
    pub window: WindowedModule,
    pub certificate: ResolutionCertificate,
}

pub fn reduce_resolution(cert: &ResolutionCertificate) -> Result<Reduction, Error> {
    let (bar, pi) = reduction_ring(cert.p.ring_arc());
    let module = cert.p.base_change(&pi);
    let top = cert.top().unwrap_or(0);
    let lo = cert.cutoff.unwrap_or_else(|| cert.p.min_degree().unwrap_or(0));
    let (lo, hi) = (lo.min(top), top);
    let mut window = Module::semifree(module.clone()).realize(lo, hi)?;
    if cert.cutoff.is_some() {
        window.set_boundaries(Boundary::Truncated, window.above());
    }
    Ok(Reduction { ring: bar, projection: pi, module, window, certificate: cert.clone() })
}

pub fn reduce(m: &Module, cutoff: i64) -> Result<Reduction, Error> {
    reduce_resolution(&semifree_resolution(m, cutoff)?)
}

/// Lifts a basis of `H⁰(M)` over `H⁰(A)` to `φ: A^r → M` and certifies it on `[lo, hi]`.
pub fn lift_free(m: &Module, lo: i64, hi: i64) -> Result<SemiFreeMap, Error> {
    let ring = m.ring().clone();
    let w = Arc::new(m.realize(lo.min(-1), hi.max(1))?);
    let h = cohomology(&w);
    let dim_h0 = h.dim(0).ok_or_else(|| Error::WindowUnderflow("H⁰(M) not trusted in the window".into()))?;
    let dim_bar = h0_algebra(&ring).algebra.dim();
    let mut ech = Echelon::new(w.dim(0));
    for c in w.differential(-1).columns() {
        ech.insert(&c);
    }
    let mut gens = Vec::new();
    for y in w.differential(0).kernel() {
        if ech.insert(&y) {
            for mv in a0_multiples(w.as_ref(), 0, &y) {
                ech.insert(&mv);
            }
            gens.push(y);
        }
    }
    let r = gens.len();
    if dim_bar == 0 || dim_h0 != r * dim_bar {
        return Err(Error::Precondition(format!("H⁰(M) of dimension {dim_h0} is not free over H⁰(A)")));
    }
    let free = Arc::new(SemiFreeModule::free(ring, &vec![0; r]));
    let phi = SemiFreeMap::new(free, Module::Windowed(w.clone()), gens)?;
    let chain = phi.realize(w.lo(), w.hi())?;
    let v = crate::module::is_quasi_iso(&chain);
    if !v.holds {
        return Err(Error::Verification(format!("lifted map is not a quasi-isomorphism at degree {}", v.failing.unwrap_or(0))));
    }
    Ok(phi)
}

/// The summand of `A^r` cut out by an exact lift of an idempotent matrix over `H⁰(A)`,
/// realized on `[lo, hi]`. `e[i][j]` are `H⁰(A)` coordinates.
pub fn lift_projective(ring: &Arc<DgRing>, e: &[Vec<Vec<Scalar>>], lo: i64, hi: i64) -> Result<WindowedModule, Error> {
    let r = e.len();
    let field = ring.field().clone();
    let h0 = h0_algebra(ring);
    let hb = &h0.algebra;
    let a0 = ring.degree_zero();
    let matmul = |alg: &crate::ring::DegreeZeroAlgebra, x: &[Vec<Vec<Scalar>>], y: &[Vec<Vec<Scalar>>]| -> Vec<Vec<Vec<Scalar>>> {
        (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let mut acc = crate::linalg::zero_vec(&field, alg.dim());
                        for k in 0..r {
                            crate::linalg::axpy(&mut acc, &field.one(), &alg.mul(&x[i][k], &y[k][j]));
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    };
    if e.iter().any(|row| row.len() != r) {
        return Err(Error::InvalidInput("idempotent must be a square matrix".into()));
    }
    if matmul(hb, e, e) != e {
        return Err(Error::InvalidInput("matrix is not idempotent over H⁰(A)".into()));
    }
    let mut x: Vec<Vec<Vec<Scalar>>> = e.iter().map(|row| row.iter().map(|c| h0.lift(c)).collect()).collect();
    let lin = |a: &Vec<Vec<Vec<Scalar>>>, b: &Vec<Vec<Vec<Scalar>>>, ca: i64, cb: i64| -> Vec<Vec<Vec<Scalar>>> {
        a.iter()
            .zip(b)
            .map(|(ra, rb)| {
                ra.iter().zip(rb).map(|(u, v)| u.iter().zip(v).map(|(p, q)| &(p * &field.int(ca)) + &(q * &field.int(cb))).collect()).collect()
            })
            .collect()
    };
    let mut exact = false;
    for _ in 0..64 {
        let x2 = matmul(a0, &x, &x);
        if x2 == x {
            exact = true;
            break;
        }
        let x3 = matmul(a0, &x2, &x);
        x = lin(&x2, &x3, 3, -2);
    }
    if !exact {
        return Err(Error::Unsupported("idempotent does not lift exactly to A⁰".into()));
    }
    let free = Module::semifree(SemiFreeModule::free(ring.clone(), &vec![0; r]));
    let w = free.realize(lo, hi)?;
    let mut sqs = Vec::new();
    for i in lo..=hi {
        let blocks: Vec<Vec<Matrix>> =
            (0..r).map(|a| (0..r).map(|b| act_element(free.inner(), &ring.from_a0(&x[a][b]), i)).collect()).collect();
        let n = free.dim(i) / r.max(1);
        let mut big = Matrix::zeros(&field, free.dim(i), free.dim(i));
        for (a, row) in blocks.iter().enumerate() {
            for (b, block) in row.iter().enumerate() {
                big.set_block(a * n, b * n, block);
            }
        }
        sqs.push(Subquotient::new(&field, free.dim(i), &big.columns(), &[]));
    }
    crate::module::subquotient_module(&w, lo, hi, &sqs, w.below(), w.above())
}

/// Names the Betti table entries for reports.
pub fn format_betti(b: &[(i64, usize)]) -> String {
    let parts: Vec<String> = b.iter().map(|(d, n)| format!("{d}:{n}")).collect();
    parts.join(" ")
}
