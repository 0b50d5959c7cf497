//! Decision procedures with certificates: perfect, tilting, dualizing, Gorenstein and Cohen-Macaulay.
//!
//! Every verdict is qualified by the window it was measured in. The Picard group of each local
//! component of `H⁰(A)` is trivial in this setting, so invertible objects are classified by one
//! shift per component.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::derived::{adjunction_unit, check_chain_quasi_iso, check_quasi_iso, dtensor, pieces, replace, rhom, Derived, Piece, Replacement};
use crate::linalg::{Matrix, Scalar};
use crate::module::{cohomology, hom_complex, tensor, ChainMap, DgModule, Module, QisVerdict, SemiFreeMap, SemiFreeModule, WindowedModule};
use crate::resolve::reduce;
use crate::ring::{DgRing, DgRingHom};
use crate::Error;

/// Cohomology dimensions on `[lo, hi]`; fails if any degree is untrusted.
pub fn cohomology_dims(m: &Module, lo: i64, hi: i64) -> Result<Vec<(i64, usize)>, Error> {
    let w = m.realize(lo - 1, hi + 1)?;
    let h = cohomology(&w);
    (lo..=hi)
        .map(|i| h.dim(i).map(|d| (i, d)).ok_or_else(|| Error::WindowUnderflow(format!("cohomology untrusted at degree {i}"))))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PerfectOutcome {
    Perfect,
    Inconclusive,
}

/// The part of a perfectness verdict coming from one connected component.
#[derive(Clone)]
pub struct ComponentPerfect {
    pub index: usize,
    pub piece: Piece,
    pub replacement: Replacement,
    /// Quasi-isomorphism check of the witness, present when the component is perfect.
    pub witness_check: Option<QisVerdict>,
}

impl ComponentPerfect {
    /// Degrees `(lowest, highest)` of the witness generators.
    pub fn generation_interval(&self) -> Option<(i64, i64)> {
        let p = &self.replacement.p;
        Some((p.min_degree()?, p.max_degree()?))
    }
}

#[derive(Clone)]
pub struct PerfectVerdict {
    pub outcome: PerfectOutcome,
    pub cutoff: i64,
    pub components: Vec<ComponentPerfect>,
}

impl PerfectVerdict {
    /// The semi-free witness over `A` itself, available when `A⁰` is local.
    pub fn global_witness(&self) -> Option<&Arc<SemiFreeModule>> {
        match (&self.outcome, self.components.as_slice()) {
            (PerfectOutcome::Perfect, [c]) if c.piece.hom.is_none() => Some(&c.replacement.p),
            _ => None,
        }
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

/// Decides perfectness component by component from minimal resolutions down to `cutoff`.
pub fn is_perfect(m: &Module, cutoff: i64) -> Result<PerfectVerdict, Error> {
    let top = support_hi(m).ok_or_else(|| Error::Precondition("perfectness needs H(M) bounded above".into()))?;
    if cutoff >= top {
        return Err(Error::Precondition(format!("cutoff {cutoff} must lie below the top degree {top}")));
    }
    let mut components = Vec::new();
    let mut all = true;
    for (index, piece) in pieces(m.ring()).into_iter().enumerate() {
        let me = piece.localize(m)?;
        let replacement = replace(&me, cutoff)?;
        let witness_check = if replacement.finite {
            let lo = replacement.certified_from.unwrap_or(cutoff + 2);
            Some(check_quasi_iso(&replacement.map, lo, top.max(lo))?)
        } else {
            None
        };
        all &= witness_check.as_ref().is_some_and(|v| v.holds);
        components.push(ComponentPerfect { index, piece, replacement, witness_check });
    }
    let outcome = if all { PerfectOutcome::Perfect } else { PerfectOutcome::Inconclusive };
    Ok(PerfectVerdict { outcome, cutoff, components })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TiltingFailure {
    NotPerfect,
    /// `A → RHom(P, P)` is not a quasi-isomorphism; the first failing degree.
    AdjunctionFails(Option<i64>),
    /// A component whose minimal model does not have exactly one generator.
    NotRankOne { component: usize, generators: usize },
    RoundTripFails { component: usize },
}

#[derive(Clone)]
pub struct TiltingCertificate {
    pub tilting: bool,
    pub failure: Option<TiltingFailure>,
    pub window: (i64, i64),
    pub perfect: PerfectVerdict,
    pub unit: Option<QisVerdict>,
    /// `P ≅ ⊕ A_e[k_e]`: one shift per component.
    pub shifts: Vec<i64>,
    /// The same shifts read off `H⁰(A) ⊗^L_A P`.
    pub reduction_shifts: Vec<i64>,
    pub quasi_inverse: Option<Derived>,
    /// `P ⊗ RHom(P, A) → A` per component.
    pub round_trip: Vec<QisVerdict>,
}

/// The evaluation `W ⊗ Hom(W, A_e) → A_e`, `w ⊗ φ ↦ (−1)^{|w||φ|} φ(w)`, realized on `[lo, hi]`.
pub fn evaluation(w: &Arc<SemiFreeModule>, lo: i64, hi: i64) -> Result<ChainMap, Error> {
    let ring = w.ring_arc().clone();
    let field = ring.field().clone();
    let a = Module::semifree(SemiFreeModule::ring_module(ring.clone()));
    let q = hom_complex(w, &a)?;
    let src = tensor(w, &q)?;
    let ws = Arc::new(src.realize(lo, hi)?);
    let wt = Arc::new(a.realize(lo, hi)?);
    let maps = (lo..=hi)
        .map(|i| {
            let mut mat = Matrix::zeros(&field, wt.dim(i), ws.dim(i));
            let mut off = 0;
            for (k, bk) in w.basis().iter().enumerate() {
                let j = i - bk.degree;
                let sign = field.one().signed((bk.degree * j).rem_euclid(2) == 1);
                // block k of Hom^j(W, A) = ⊕_l A^{j+|b_l|}
                let mut inner = 0;
                for (l, bl) in w.basis().iter().enumerate() {
                    let d = a.dim(j + bl.degree);
                    if l == k {
                        for x in 0..d {
                            mat.set(x, off + inner + x, sign.clone());
                        }
                    }
                    inner += d;
                }
                off += q.dim(j);
            }
            mat
        })
        .collect();
    ChainMap::new(ws, wt, lo, hi, maps)
}

fn reduction_shift(m: &Module, cutoff: i64) -> Result<Option<i64>, Error> {
    let red = reduce(m, cutoff)?;
    let h = cohomology(&red.window);
    let nonzero: Vec<i64> = h.trusted_degrees().into_iter().filter(|&i| h.dim(i).unwrap_or(0) > 0).collect();
    Ok(match nonzero.as_slice() {
        [d] => Some(-d),
        _ => None,
    })
}

/// Tests whether `P` is tilting on `[lo, hi]`, resolving down to `cutoff`.
pub fn is_tilting(p: &Module, lo: i64, hi: i64, cutoff: i64) -> Result<TiltingCertificate, Error> {
    let perfect = is_perfect(p, cutoff)?;
    let mut cert = TiltingCertificate {
        tilting: false,
        failure: None,
        window: (lo, hi),
        perfect: perfect.clone(),
        unit: None,
        shifts: Vec::new(),
        reduction_shifts: Vec::new(),
        quasi_inverse: None,
        round_trip: Vec::new(),
    };
    if perfect.outcome != PerfectOutcome::Perfect {
        cert.failure = Some(TiltingFailure::NotPerfect);
        return Ok(cert);
    }
    let (unit, _) = adjunction_unit(p, lo, hi)?;
    let v = check_quasi_iso(&unit, lo, hi)?;
    let holds = v.holds;
    let failing = v.failing;
    cert.unit = Some(v);
    if !holds {
        cert.failure = Some(TiltingFailure::AdjunctionFails(failing));
        return Ok(cert);
    }
    for c in &perfect.components {
        let w = &c.replacement.p;
        if w.rank() != 1 {
            cert.failure = Some(TiltingFailure::NotRankOne { component: c.index, generators: w.rank() });
            return Ok(cert);
        }
        cert.shifts.push(-w.basis()[0].degree);
        let me = c.piece.localize(p)?;
        cert.reduction_shifts.push(reduction_shift(&me, cutoff)?.unwrap_or(i64::MIN));
        let ev = evaluation(w, lo - 1, hi + 1)?;
        let rt = check_chain_quasi_iso(&ev, lo, hi);
        let ok = rt.holds;
        cert.round_trip.push(rt);
        if !ok {
            cert.failure = Some(TiltingFailure::RoundTripFails { component: c.index });
            return Ok(cert);
        }
    }
    let a = Module::semifree(SemiFreeModule::ring_module(p.ring().clone()));
    cert.quasi_inverse = Some(rhom(p, &a, lo, hi)?);
    cert.tilting = true;
    Ok(cert)
}

/// A simple `H⁰(A)`-module regarded as a DG `A`-module in degree 0, one per residue field of a component.
pub fn simple_modules(a: &Arc<DgRing>) -> Result<Vec<(usize, Module)>, Error> {
    let mut out = Vec::new();
    for (index, piece) in pieces(a).into_iter().enumerate() {
        let r = &piece.ring;
        let a0 = r.degree_zero();
        let q = a0.quotient(&a0.radical());
        let acts = (0..a0.dim()).map(|x| q.algebra.mult_matrix(&q.projection.mul_vec(&a0.basis_vec(x)))).collect();
        let k = Module::windowed(WindowedModule::concentrated(r.clone(), 0, acts)?);
        out.push((index, piece.restrict(k)?));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConditionStatus {
    Holds,
    Fails(String),
    Inconclusive(String),
}

impl ConditionStatus {
    pub fn holds(&self) -> bool {
        matches!(self, ConditionStatus::Holds)
    }
}

/// `RHom(S, R)` for one simple module `S`.
#[derive(Clone, Debug)]
pub struct Probe {
    pub component: usize,
    pub residue_dim: usize,
    pub dims: Vec<(i64, usize)>,
    /// Degrees where `H(RHom(S, R))` is nonzero inside the window.
    pub concentration: Option<(i64, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DualizingOutcome {
    DualizingInWindow,
    NotDualizing,
    Inconclusive,
}

#[derive(Clone)]
pub struct DualizingCertificate {
    pub outcome: DualizingOutcome,
    pub window: (i64, i64),
    /// Condition (i): `dim H^i(R)` over the window.
    pub finiteness: Vec<(i64, usize)>,
    pub probes: Vec<Probe>,
    /// Condition (ii): finite injective dimension relative to bounded modules with finite cohomology, probed by simples.
    pub injective: ConditionStatus,
    /// Condition (iii): `A → RHom(R, R)`.
    pub unit: QisVerdict,
    pub homothety: ConditionStatus,
}

impl DualizingCertificate {
    pub const QUALIFICATION: &'static str =
        "finite injective dimension certified against simple probes only; verdict holds within the window";
}

/// Tests the three conditions for `R` to be dualizing, on `[lo, hi]`.
pub fn is_dualizing(r: &Module, lo: i64, hi: i64) -> Result<DualizingCertificate, Error> {
    let finiteness = cohomology_dims(r, lo, hi)?;
    let mut probes = Vec::new();
    let mut injective = ConditionStatus::Holds;
    for (component, s) in simple_modules(r.ring())? {
        let residue_dim = s.dim(0);
        let d = rhom(&s, r, lo, hi)?;
        let (plo, phi) = (d.trusted.lo.map_or(lo, |b| b.max(lo)), d.trusted.hi.map_or(hi, |b| b.min(hi)));
        let dims = d.cohomology_dims(plo, phi)?;
        let total: usize = dims.iter().map(|x| x.1).sum();
        let nonzero: Vec<i64> = dims.iter().filter(|x| x.1 > 0).map(|x| x.0).collect();
        let concentration = nonzero.first().map(|&a| (a, *nonzero.last().unwrap()));
        // RHom(S, R) is RHom over the residue field into a dualizing complex of that field, hence a shifted copy of it.
        if total > residue_dim || nonzero.len() > 1 {
            if injective.holds() || matches!(injective, ConditionStatus::Inconclusive(_)) {
                injective = ConditionStatus::Fails(format!(
                    "RHom(S_{component}, R) has total cohomology {total} > {residue_dim} in [{plo}, {phi}]"
                ));
            }
        } else if total < residue_dim && injective.holds() {
            injective = ConditionStatus::Inconclusive(format!(
                "RHom(S_{component}, R) has no cohomology of dimension {residue_dim} in [{plo}, {phi}]"
            ));
        }
        probes.push(Probe { component, residue_dim, dims, concentration });
    }
    let (u, _) = adjunction_unit(r, lo, hi)?;
    let unit = check_quasi_iso(&u, lo, hi)?;
    let homothety = if unit.holds {
        ConditionStatus::Holds
    } else {
        ConditionStatus::Fails(format!("A → RHom(R, R) is not bijective on H^{}", unit.failing.unwrap_or(lo)))
    };
    let outcome = if matches!(injective, ConditionStatus::Fails(_)) || !homothety.holds() {
        DualizingOutcome::NotDualizing
    } else if injective.holds() {
        DualizingOutcome::DualizingInWindow
    } else {
        DualizingOutcome::Inconclusive
    };
    Ok(DualizingCertificate { outcome, window: (lo, hi), finiteness, probes, injective, unit, homothety })
}

#[derive(Clone)]
pub enum GorensteinVerdict {
    /// `H(A)` does not vanish at the bottom of the window, so it is not certified bounded.
    CohomologyUnbounded { degree: i64 },
    Checked(DualizingCertificate),
}

impl GorensteinVerdict {
    pub fn is_gorenstein(&self) -> bool {
        matches!(self, GorensteinVerdict::Checked(c) if c.outcome == DualizingOutcome::DualizingInWindow)
    }
}

/// `A` is Gorenstein when `H(A)` is bounded and `A` is dualizing over itself.
pub fn is_gorenstein(a: &Arc<DgRing>, lo: i64, hi: i64) -> Result<GorensteinVerdict, Error> {
    let m = Module::semifree(SemiFreeModule::ring_module(a.clone()));
    if crate::module::ring_lower_bound(a).is_none() {
        let dims = cohomology_dims(&m, lo, 0)?;
        if dims.first().is_some_and(|x| x.1 > 0) {
            return Ok(GorensteinVerdict::CohomologyUnbounded { degree: lo });
        }
    }
    Ok(GorensteinVerdict::Checked(is_dualizing(&m, lo, hi)?))
}

/// Looks for `z ∈ Z⁰(N)` with `A → N, 1 ↦ z` a quasi-isomorphism on `[lo, hi]`.
pub fn find_generator(n: &Module, lo: i64, hi: i64) -> Result<Option<(SemiFreeMap, QisVerdict)>, Error> {
    let free = Arc::new(SemiFreeModule::ring_module(n.ring().clone()));
    let w = n.realize(-1, 1)?;
    let h = cohomology(&w);
    let Some(piece) = h.piece(0) else { return Ok(None) };
    let reps = piece.reps.clone();
    let mut candidates = reps.clone();
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            candidates.push(reps[i].iter().zip(&reps[j]).map(|(a, b)| a + b).collect());
        }
    }
    for z in candidates {
        let f = SemiFreeMap::new(free.clone(), n.clone(), vec![z])?;
        let v = check_quasi_iso(&f, lo, hi)?;
        if v.holds {
            return Ok(Some((f, v)));
        }
    }
    Ok(None)
}

/// Cohen-Macaulay test: `RHom(M, R)` concentrated in degree 0.
#[derive(Clone)]
pub struct CmVerdict {
    pub cm: bool,
    pub window: (i64, i64),
    pub dims: Vec<(i64, usize)>,
    /// `dim H⁰(RHom(M, R))` and the `A⁰` action matrices on it.
    pub dual_dim: usize,
    pub dual_actions: Vec<Matrix>,
}

pub fn is_cm(m: &Module, r: &Module, lo: i64, hi: i64) -> Result<CmVerdict, Error> {
    if lo > 0 || hi < 0 {
        return Err(Error::Precondition("the window must contain degree 0".into()));
    }
    let d = rhom(m, r, lo, hi)?;
    let (plo, phi) = (d.trusted.lo.map_or(lo, |b| b.max(lo)), d.trusted.hi.map_or(hi, |b| b.min(hi)));
    if plo > 0 || phi < 0 {
        return Err(Error::WindowUnderflow("degree 0 is not certified".into()));
    }
    let w = d.module.realize(plo - 1, phi + 1)?;
    let h = cohomology(&w);
    let dims: Vec<(i64, usize)> =
        (plo..=phi).map(|i| h.dim(i).map(|x| (i, x)).ok_or_else(|| Error::WindowUnderflow(format!("degree {i}")))).collect::<Result<_, _>>()?;
    let cm = dims.iter().all(|&(i, x)| i == 0 || x == 0);
    let dual_dim = h.dim(0).unwrap_or(0);
    let dual_actions = (0..m.ring().degree_zero().dim()).filter_map(|x| h.action(0, x).cloned()).collect();
    Ok(CmVerdict { cm, window: (plo, phi), dims, dual_dim, dual_actions })
}

/// Compares two dualizing modules through the tilting module `P = RHom(R, R')`.
pub struct DualizingComparison {
    pub tilting: TiltingCertificate,
    /// `H(P ⊗^L R)` against `H(R')` over the window.
    pub tensor_dims: Vec<(i64, usize)>,
    pub target_dims: Vec<(i64, usize)>,
    pub matches: bool,
}

pub fn compare_dualizing(r: &Module, r2: &Module, lo: i64, hi: i64, cutoff: i64) -> Result<DualizingComparison, Error> {
    let p = rhom(r, r2, lo, hi)?;
    if !p.exact {
        return Err(Error::Unsupported("comparison needs RHom(R, R') without truncation".into()));
    }
    let tilting = is_tilting(&p.module, lo.min(-1), 0, cutoff)?;
    let (tensor_dims, target_dims) = match tilting.perfect.global_witness() {
        Some(w) if tilting.tilting => {
            let t = dtensor(&Module::SemiFree(w.clone()), r, lo, hi)?;
            (t.cohomology_dims(lo, hi)?, cohomology_dims(r2, lo, hi)?)
        }
        _ => (Vec::new(), Vec::new()),
    };
    let matches = tilting.tilting && !tensor_dims.is_empty() && tensor_dims == target_dims;
    Ok(DualizingComparison { tilting, tensor_dims, target_dims, matches })
}

/// `dim H⁰` of the morphism space `M → N` over `B` and over `A` after restriction along `f`.
pub fn restriction_morphism_dims(f: &Arc<DgRingHom>, m: &Module, n: &Module) -> Result<(usize, usize), Error> {
    let over_b = rhom(m, n, 0, 0)?.cohomology_dims(0, 0)?[0].1;
    let rm = crate::derived::restrict(f, m)?;
    let rn = crate::derived::restrict(f, n)?;
    let over_a = rhom(&rm, &rn, 0, 0)?.cohomology_dims(0, 0)?[0].1;
    Ok((over_b, over_a))
}

/// Scalars of the field for exhaustive sweeps (all of them for a prime field, `None` for ℚ).
pub fn field_elements(field: &crate::linalg::Field) -> Option<Vec<Scalar>> {
    match field.characteristic() {
        0 => None,
        p => Some((0..p as i64).map(|n| field.int(n)).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Field;
    use crate::module::CoinducedModule;
    use crate::ring::fixtures::{gf, koszul_x3, poly_t, split2};
    use crate::ring::{h0_algebra, DegreeZeroAlgebra};

    fn bar(a: &Arc<DgRing>) -> Module {
        let h = h0_algebra(a);
        let acts = (0..a.degree_zero().dim()).map(|x| h.algebra.mult_matrix(&h.projection.mul_vec(&a.degree_zero().basis_vec(x)))).collect();
        Module::windowed(WindowedModule::concentrated(a.clone(), 0, acts).unwrap())
    }

    #[test]
    fn bar_a_over_polynomial_ring_is_perfect() {
        for f in [gf(2), Field::Rational] {
            let a = poly_t(&f);
            let v = is_perfect(&bar(&a), -12).unwrap();
            assert_eq!(v.outcome, PerfectOutcome::Perfect);
            let w = v.global_witness().unwrap();
            let degs: Vec<i64> = w.basis().iter().map(|b| b.degree).collect();
            assert_eq!(degs, vec![0, -3]);
        }
    }

    #[test]
    fn residue_field_of_dual_numbers_is_inconclusive() {
        let f = gf(3);
        let a = Arc::new(DgRing::from_algebra(DegreeZeroAlgebra::truncated(&f, "x", 2).unwrap()));
        let (_, k) = simple_modules(&a).unwrap().remove(0);
        let v = is_perfect(&k, -11).unwrap();
        assert_eq!(v.outcome, PerfectOutcome::Inconclusive);
        let betti = &v.components[0].replacement.betti;
        assert_eq!(betti.len(), 11);
        assert!(betti.iter().all(|&(_, n)| n == 1));
        assert_eq!(betti.first().unwrap().0, 0);
        assert_eq!(betti.last().unwrap().0, -10);
    }

    #[test]
    fn tilting_over_split_ring() {
        let f = gf(5);
        let a = split2(&f);
        let comps = crate::ring::connected_components(&a).1;
        let p1 = Module::semifree(SemiFreeModule::ring_module(comps[0].ring.clone()).shift(2));
        let p2 = Module::semifree(SemiFreeModule::ring_module(comps[1].ring.clone()).shift(-1));
        let h1 = Arc::new(comps[0].hom.clone());
        let h2 = Arc::new(comps[1].hom.clone());
        let p = Module::sum(&[crate::derived::restrict(&h1, &p1).unwrap(), crate::derived::restrict(&h2, &p2).unwrap()]).unwrap();
        let c = is_tilting(&p, -4, 4, -6).unwrap();
        assert!(c.tilting, "{:?}", c.failure);
        assert_eq!(c.shifts, vec![2, -1]);
        assert_eq!(c.reduction_shifts, c.shifts);
        let free = Module::semifree(SemiFreeModule::ring_module(a.clone()));
        let two = Module::sum(&[free.clone(), free.clone()]).unwrap();
        let c = is_tilting(&two, -2, 2, -4).unwrap();
        assert!(matches!(c.failure, Some(TiltingFailure::AdjunctionFails(_))));
        let c = is_tilting(&free.shift(3), -2, 2, -6).unwrap();
        assert_eq!(c.shifts, vec![3, 3]);
    }

    #[test]
    fn dualizing_examples() {
        let f = gf(3);
        let a = poly_t(&f);
        let r = Module::Coinduced(Arc::new(CoinducedModule::new(a.clone(), vec![0])));
        let c = is_dualizing(&r, -8, 8).unwrap();
        assert_eq!(c.outcome, DualizingOutcome::DualizingInWindow);
        let b = koszul_x3(&f);
        let rb = Module::Coinduced(Arc::new(CoinducedModule::new(b.clone(), vec![0])));
        assert_eq!(is_dualizing(&rb, -4, 4).unwrap().outcome, DualizingOutcome::DualizingInWindow);
        let g = is_gorenstein(&b, -4, 4).unwrap();
        assert!(g.is_gorenstein());
        assert!(matches!(is_gorenstein(&a, -8, 8).unwrap(), GorensteinVerdict::CohomologyUnbounded { .. }));
        let a0 = DegreeZeroAlgebra::monomial_quotient(&f, &["x", "y"], &[vec![2, 0], vec![1, 1], vec![0, 2]]).unwrap();
        let ng = Arc::new(DgRing::from_algebra(a0));
        let v = is_gorenstein(&ng, -3, 3).unwrap();
        assert!(!v.is_gorenstein());
        let free = Module::semifree(SemiFreeModule::ring_module(b.clone()));
        let sum = Module::sum(&[free.clone(), free.shift(1)]).unwrap();
        let c = is_dualizing(&sum, -3, 3).unwrap();
        assert!(!c.homothety.holds());
    }

    #[test]
    fn cm_and_comparison() {
        let f = gf(5);
        let b = koszul_x3(&f);
        let rb = Module::Coinduced(Arc::new(CoinducedModule::new(b.clone(), vec![0])));
        let v = is_cm(&bar(&b), &rb, -3, 3).unwrap();
        assert!(v.cm);
        assert_eq!(v.dual_dim, 1);
        assert!(!is_cm(&rb, &rb, -3, 3).unwrap().cm);
        let a = poly_t(&f);
        let r = Module::Coinduced(Arc::new(CoinducedModule::new(a.clone(), vec![0])));
        let c = compare_dualizing(&r, &r.shift(2), -8, 0, -12).unwrap();
        assert!(c.tilting.tilting);
        assert_eq!(c.tilting.shifts, vec![2]);
        assert!(c.matches);
        let c = compare_dualizing(&rb, &rb, -3, 0, -8).unwrap();
        assert_eq!(c.tilting.shifts, vec![0]);
    }
}
