//! The squaring operation over a field base: `Sq(M) = RHom_{B ⊗_K B}(B, M ⊗_K M)`.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::derived::{check_quasi_iso, replace};
use crate::linalg::{Field, Matrix, Scalar, Subquotient};
use crate::module::{
    cohomology, hom_complex, smart_truncate_le, tensor_k, ChainMap, DgModule, Module, QisVerdict, Restricted, SemiFreeMap,
    SemiFreeModule, WindowedModule,
};
use crate::resolve::{degree_zero_is_local, minimize, semifree_resolution, ResolutionCertificate};
use crate::ring::{multiplication_hom, tensor_rings, DgRing, DgRingHom};
use crate::Error;

/// `B`, `Bᵉ = B ⊗_K B`, the multiplication `μ: Bᵉ → B`, and a resolution of `B` over `Bᵉ`.
pub struct EnvelopingData {
    pub b: Arc<DgRing>,
    pub be: Arc<DgRing>,
    pub left: Arc<DgRingHom>,
    pub right: Arc<DgRingHom>,
    pub mu: Arc<DgRingHom>,
    pub diagonal: ResolutionCertificate,
    pub cutoff: i64,
}

pub fn enveloping(b: &Arc<DgRing>, cutoff: i64) -> Result<EnvelopingData, Error> {
    let (be, left, right) = tensor_rings(b, b)?;
    let mu = Arc::new(multiplication_hom(b, &be));
    let diag = Module::lazy(Restricted::new(mu.clone(), Module::semifree(SemiFreeModule::ring_module(b.clone())))?);
    let mut diagonal = semifree_resolution(&diag, cutoff)?;
    if degree_zero_is_local(&be) {
        diagonal = minimize(&diagonal)?;
    }
    Ok(EnvelopingData { b: b.clone(), be, left: Arc::new(left), right: Arc::new(right), mu, diagonal, cutoff })
}

fn support_lo(m: &Module) -> Option<i64> {
    let s = m.extent().support;
    if s.is_empty() {
        Some(0)
    } else {
        s.lo
    }
}

/// Diagonal cutoff needed for `Sq(M)` to be right on `[·, hi]` (one guard degree above).
pub fn required_cutoff(m: &Module, hi: i64) -> Result<i64, Error> {
    let t = support_lo(m).ok_or_else(|| Error::Precondition("squaring needs M bounded below".into()))?;
    Ok(2 * t - hi - 3)
}

pub struct SquareResult {
    pub module: Module,
    pub window: (i64, i64),
    pub cutoff: i64,
    pub dims: Vec<(i64, usize)>,
    pub m_dims: Vec<(i64, usize)>,
    /// `M ⊗_K M` over `Bᵉ`.
    pub mm: Module,
}

impl SquareResult {
    pub fn dims_match(&self) -> bool {
        self.dims == self.m_dims
    }
}

fn dims(m: &Module, lo: i64, hi: i64) -> Result<Vec<(i64, usize)>, Error> {
    let h = cohomology(&m.realize(lo - 1, hi + 1)?);
    (lo..=hi).map(|i| h.dim(i).map(|d| (i, d)).ok_or_else(|| Error::WindowUnderflow(format!("degree {i} untrusted")))).collect()
}

/// `Sq(M) = Hom_{Bᵉ}(P, M ⊗_K M)` with `B` acting through the left factor.
pub fn square(env: &EnvelopingData, m: &Module, lo: i64, hi: i64) -> Result<SquareResult, Error> {
    if m.ring() != &env.b {
        return Err(Error::InvalidInput("module is not over the squared ring".into()));
    }
    let need = required_cutoff(m, hi)?;
    if env.cutoff > need {
        return Err(Error::WindowUnderflow(format!("diagonal resolution reaches {} but degree {hi} needs guard depth {need}", env.cutoff)));
    }
    let mm = tensor_k(m, m, &env.be)?;
    let h = hom_complex(&env.diagonal.p, &mm)?;
    let module = Module::lazy(Restricted::new(env.left.clone(), h)?);
    Ok(SquareResult { dims: dims(&module, lo, hi)?, m_dims: dims(m, lo, hi)?, module, window: (lo, hi), cutoff: env.cutoff, mm })
}

/// `Sq(φ) = Hom(P, φ ⊗ φ)` on a realization `w` of `Sq(M)`; `phi(p)` is the component `M^p → M^p`.
pub fn square_map(env: &EnvelopingData, sq: &SquareResult, m: &Module, phi: &dyn Fn(i64) -> Matrix, w: &Arc<WindowedModule>) -> Result<ChainMap, Error> {
    let field = m.ring().field().clone();
    let s = m.extent().support;
    let (mlo, mhi) = match (s.lo, s.hi) {
        _ if s.is_empty() => (0, -1),
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Precondition("Sq on morphisms needs M bounded".into())),
    };
    let tensor_phi = |i: i64| -> Matrix {
        let blocks: Vec<Matrix> = (mlo..=mhi)
            .filter(|&p| m.dim(p) > 0 && m.dim(i - p) > 0)
            .map(|p| {
                let (a, b) = (phi(p), phi(i - p));
                let mut out = Matrix::zeros(&field, a.rows() * b.rows(), a.cols() * b.cols());
                for r in 0..a.rows() {
                    for c in 0..a.cols() {
                        if !a.get(r, c).is_zero() {
                            out.set_block(r * b.rows(), c * b.cols(), &b.scale(a.get(r, c)));
                        }
                    }
                }
                out
            })
            .collect();
        Matrix::block_diag(&field, &blocks.iter().collect::<Vec<_>>())
    };
    let p = &env.diagonal.p;
    let maps = (w.lo()..=w.hi())
        .map(|j| {
            let blocks: Vec<Matrix> = p.basis().iter().map(|b| tensor_phi(j + b.degree)).collect();
            let out = Matrix::block_diag(&field, &blocks.iter().collect::<Vec<_>>());
            debug_assert_eq!(out.rows(), sq.module.dim(j));
            out
        })
        .collect();
    ChainMap::new(w.clone(), w.clone(), w.lo(), w.hi(), maps)
}

pub enum RigidityOutcome {
    /// `ρ: M → Sq(M)` represented on a semi-free resolution `Q → M`.
    Found { witness: SemiFreeMap, verdict: QisVerdict, tried: usize },
    DimsMatchNoWitnessFound { tried: usize },
    DimsMismatch,
}

pub struct RigidityReport {
    pub outcome: RigidityOutcome,
    pub square: SquareResult,
    pub seed: u64,
    pub budget: usize,
    /// Ranks of each `A⁰` basis element acting on `H^i`, for `M` and for `Sq(M)`.
    pub action_ranks: Vec<(i64, Vec<usize>, Vec<usize>)>,
}

fn random_scalar(field: &Field, rng: &mut ChaCha8Rng) -> Scalar {
    match field.characteristic() {
        0 => field.int((rng.next_u64() % 7) as i64 - 3),
        p => field.int((rng.next_u64() % p as u64) as i64),
    }
}

fn action_ranks(m: &Module, ring: &DgRing, lo: i64, hi: i64) -> Result<Vec<Vec<usize>>, Error> {
    let h = cohomology(&m.realize(lo - 1, hi + 1)?);
    Ok((lo..=hi).map(|i| (0..ring.degree_zero().dim()).map(|x| h.action(i, x).map_or(0, Matrix::rank)).collect()).collect())
}

/// Compares `H(M)` with `H(Sq(M))` and searches `H⁰ Hom(Q, Sq(M))` for a quasi-isomorphism.
pub fn rigidity_consistency(env: &EnvelopingData, m: &Module, lo: i64, hi: i64, seed: u64, budget: usize) -> Result<RigidityReport, Error> {
    let square = square(env, m, lo, hi)?;
    let field = m.ring().field().clone();
    let am = action_ranks(m, &env.b, lo, hi)?;
    let asq = action_ranks(&square.module, &env.b, lo, hi)?;
    let action_ranks: Vec<(i64, Vec<usize>, Vec<usize>)> = (lo..=hi).zip(am).zip(asq).map(|((i, a), b)| (i, a, b)).collect();
    if !square.dims_match() || action_ranks.iter().any(|(_, a, b)| a != b) {
        return Ok(RigidityReport { outcome: RigidityOutcome::DimsMismatch, square, seed, budget, action_ranks });
    }
    let t = support_lo(&square.module).unwrap_or(lo);
    let rep = replace(m, t.min(lo) - 3)?;
    let q = rep.p.clone();
    let hom = hom_complex(&q, &square.module)?;
    let hw = hom.realize(-1, 1)?;
    let h = cohomology(&hw);
    let reps: Vec<Vec<Scalar>> = h.piece(0).map(|s| s.reps.clone()).unwrap_or_default();
    let mut tried = 0;
    let attempt = |z: Vec<Scalar>| -> Result<Option<(SemiFreeMap, QisVerdict)>, Error> {
        let f = SemiFreeMap::from_hom_element(q.clone(), square.module.clone(), &z)?;
        let v = check_quasi_iso(&f, lo, hi)?;
        Ok(v.holds.then_some((f, v)))
    };
    let mut candidates: Vec<Vec<Scalar>> = reps.clone();
    if reps.is_empty() {
        candidates.push(crate::linalg::zero_vec(&field, hw.dim(0)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        if reps.is_empty() {
            break;
        }
        let mut z = crate::linalg::zero_vec(&field, hw.dim(0));
        for r in &reps {
            crate::linalg::axpy(&mut z, &random_scalar(&field, &mut rng), r);
        }
        candidates.push(z);
    }
    for z in candidates {
        tried += 1;
        if let Some((witness, verdict)) = attempt(z)? {
            return Ok(RigidityReport { outcome: RigidityOutcome::Found { witness, verdict, tried }, square, seed, budget, action_ranks });
        }
    }
    Ok(RigidityReport { outcome: RigidityOutcome::DimsMatchNoWitnessFound { tried }, square, seed, budget, action_ranks })
}

fn scaled_identity<'a>(m: &'a Module, b: &Scalar) -> impl Fn(i64) -> Matrix + 'a {
    let b = b.clone();
    move |p| Matrix::identity(m.ring().field(), m.dim(p)).scale(&b)
}

/// A realization of `Sq(M)` covering `[lo, hi]`, its truncation `τ^{≤hi}` and a resolution of that.
struct SquareFrame {
    w: Arc<WindowedModule>,
    /// `Q → W` through `τ^{≤hi} W`.
    resolution: SemiFreeMap,
}

fn square_frame(sq: &SquareResult, lo: i64, hi: i64) -> Result<SquareFrame, Error> {
    let field = sq.module.ring().field().clone();
    let w = Arc::new(sq.module.realize(lo - 1, hi + 1)?);
    let tau = Arc::new(smart_truncate_le(&w, hi)?);
    let maps = (tau.lo()..=tau.hi())
        .map(|i| {
            if i < hi {
                Matrix::identity(&field, w.dim(i))
            } else {
                let z = w.differential(hi).kernel();
                let sq = Subquotient::new(&field, w.dim(i), &z, &[]);
                Matrix::from_columns(&field, w.dim(i), &sq.reps)
            }
        })
        .collect();
    let incl = ChainMap::new(tau.clone(), w.clone(), tau.lo(), tau.hi(), maps)?;
    let cert = semifree_resolution(&Module::Windowed(tau.clone()), lo)?;
    let resolution = cert.map.then(&incl)?;
    Ok(SquareFrame { w, resolution })
}

pub struct QuadraticVerdict {
    pub holds: bool,
    pub b: Scalar,
    pub window: (i64, i64),
}

/// Checks `Sq(b·φ) ≃ b²·Sq(φ)` after precomposing with a resolution of `Sq(M)`.
pub fn quadratic_check(env: &EnvelopingData, m: &Module, phi: &dyn Fn(i64) -> Matrix, b: &Scalar, lo: i64, hi: i64) -> Result<QuadraticVerdict, Error> {
    let sq = square(env, m, lo, hi)?;
    let frame = square_frame(&sq, lo, hi)?;
    let bphi = |p: i64| phi(p).scale(b);
    let lhs = square_map(env, &sq, m, &bphi, &frame.w)?;
    let rhs = square_map(env, &sq, m, phi, &frame.w)?.scale(&(b * b));
    let diff = lhs.sub(&rhs)?;
    let f = frame.resolution.then(&diff)?;
    Ok(QuadraticVerdict { holds: f.is_nullhomotopic()?, b: b.clone(), window: (lo, hi) })
}

/// Scalars `b ≠ 0` for which `b·id` is an automorphism of `(M, ρ)`: `Sq(b·id) ∘ ρ ≃ ρ ∘ b·id`.
pub fn rigid_automorphisms(env: &EnvelopingData, m: &Module, rho: &SemiFreeMap, lo: i64, hi: i64) -> Result<Vec<Scalar>, Error> {
    let field = m.ring().field().clone();
    let elements: Vec<Scalar> = match field.characteristic() {
        0 => return Err(Error::Unsupported("exhaustion needs a finite field".into())),
        p => (1..p as i64).map(|n| field.int(n)).collect(),
    };
    let sq = square(env, m, lo, hi)?;
    let qlo = rho.source().min_degree().unwrap_or(lo).min(lo);
    let w = Arc::new(sq.module.realize(qlo - 2, hi + 1)?);
    let base = rho.then(&ChainMap::identity(&w))?;
    let mut out = Vec::new();
    for b in elements {
        let sqb = square_map(env, &sq, m, &scaled_identity(m, &b), &w)?;
        let d = base.then(&sqb)?.sub(&base.scale(&b));
        if d.is_nullhomotopic()? {
            out.push(b);
        }
    }
    Ok(out)
}

/// `Hom_K(B, K)` as a `B`-module.
pub fn k_dual_of_ring(b: &Arc<DgRing>) -> Module {
    Module::Coinduced(Arc::new(crate::module::CoinducedModule::new(b.clone(), vec![0])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::fixtures::{gf, koszul_x3};
    use crate::ring::DegreeZeroAlgebra;

    fn exterior(f: &Field) -> Arc<DgRing> {
        let base = DegreeZeroAlgebra::base(f);
        Arc::new(crate::ring::DgRing::new(base, vec![crate::ring::Generator { name: "e".into(), degree: -1 }], vec![crate::ring::RingElement::zero(0)]).unwrap())
    }

    #[test]
    fn enveloping_dimensions() {
        let f = gf(2);
        let b = exterior(&f);
        let env = enveloping(&b, -4).unwrap();
        let be = Module::semifree(SemiFreeModule::ring_module(env.be.clone()));
        assert_eq!((be.dim(0), be.dim(-1), be.dim(-2)), (1, 2, 1));
        let k = koszul_x3(&f);
        assert_eq!(enveloping(&k, -1).unwrap().be.degree_zero().dim(), 9);
    }

    #[test]
    fn square_of_dual_over_exterior_algebra() {
        for p in [2, 5] {
            let f = gf(p);
            let b = exterior(&f);
            let r = k_dual_of_ring(&b);
            let cut = required_cutoff(&r, 3).unwrap();
            let env = enveloping(&b, cut).unwrap();
            let rep = rigidity_consistency(&env, &r, -1, 3, 7, 8).unwrap();
            assert_eq!(rep.square.dims, vec![(-1, 0), (0, 1), (1, 1), (2, 0), (3, 0)]);
            let RigidityOutcome::Found { witness, .. } = rep.outcome else { panic!("no rigidifying class") };
            let auts = rigid_automorphisms(&env, &r, &witness, -1, 3).unwrap();
            assert_eq!(auts, vec![f.one()]);
            let id = |q: i64| Matrix::identity(&f, r.dim(q));
            for n in 0..p as i64 {
                assert!(quadratic_check(&env, &r, &id, &f.int(n), -1, 3).unwrap().holds);
            }
        }
    }

    #[test]
    fn mismatch_for_rank_two_free() {
        let f = gf(5);
        let b = exterior(&f);
        let m = Module::semifree(SemiFreeModule::free(b.clone(), &[0, 0]));
        let env = enveloping(&b, required_cutoff(&m, 2).unwrap()).unwrap();
        let rep = rigidity_consistency(&env, &m, -2, 2, 1, 4).unwrap();
        assert!(matches!(rep.outcome, RigidityOutcome::DimsMismatch));
    }
}
