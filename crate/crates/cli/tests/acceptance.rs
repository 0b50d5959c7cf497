//! Acceptance criteria, one test each. Every test prints a single `[PASS]` or `[FAIL]` line and
//! must finish within 60 seconds. All comparisons are exact.

use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use dgcalc::problem::Problem;
use dgcalc::{run, Command, Settings};
use dgcalc_core::classify::{
    cohomology_dims, field_elements, find_generator, is_cm, is_dualizing, is_gorenstein, is_perfect, is_tilting, restriction_morphism_dims,
    simple_modules, DualizingOutcome, PerfectOutcome, TiltingFailure,
};
use dgcalc_core::derived::{biduality, cech, check_chain_quasi_iso, coinduce, psi, restrict, rhom};
use dgcalc_core::linalg::{axpy, Field, Matrix, Scalar};
use dgcalc_core::module::{cohomology, cone, hom_complex, CoinducedModule, DgModule, Module, SemiFreeMap, SemiFreeModule, Shifted};
use dgcalc_core::ring::{connected_components, h0_algebra, DgRing, DgRingHom, RingElement};
use dgcalc_core::sample::{bar_module, exterior, koszul_truncated, polynomial, random_degrees, random_scalar, random_semifree, split, split_polynomial};
use dgcalc_core::squaring::{enveloping, k_dual_of_ring, quadratic_check, required_cutoff, rigid_automorphisms, rigidity_consistency, RigidityOutcome};
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const LIMIT: Duration = Duration::from_secs(60);

type Check = Result<(), String>;

fn criterion(n: u32, title: &str, body: impl FnOnce() -> Check) {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let outcome = outcome.and_then(|()| if elapsed <= LIMIT { Ok(()) } else { Err(format!("took {:.1} s", elapsed.as_secs_f64())) });
    let line = match &outcome {
        Ok(()) => format!("criterion {n:>2} [PASS] {title} ({:.2} s)\n", elapsed.as_secs_f64()),
        Err(why) => format!("criterion {n:>2} [FAIL] {title}: {why}\n"),
    };
    // Written to the raw handle so the line shows even when the harness captures output.
    let _ = std::io::stderr().write_all(line.as_bytes());
    if let Err(why) = outcome {
        panic!("criterion {n} failed: {why}");
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: Result<T, dgcalc_core::Error>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn gf(p: u32) -> Field {
    Field::prime(p).unwrap()
}

fn free(ring: &Arc<DgRing>) -> Module {
    Module::semifree(SemiFreeModule::ring_module(ring.clone()))
}

fn settings(lo: i64, hi: i64, cutoff: i64) -> Settings {
    Settings { window: (lo, hi), cutoff, seed: 0, budget: 8 }
}

fn polynomial_problem(field: &str) -> Problem {
    Problem::parse(&format!("field = \"{field}\"\n[ring]\ngenerators = [{{ name = \"t\", degree = -2 }}]\n")).unwrap()
}

/// `dim H^i` of a ring with zero differential, read off its graded pieces.
fn graded_dims(ring: &DgRing, lo: i64, hi: i64) -> Vec<(i64, usize)> {
    (lo..=hi).map(|i| (i, ring.degree_dim(i))).collect()
}

/// `(dim ann(x), dim A⁰/(x))` for the Koszul complex on one element `x`: its `H^{-1}` and `H^0`.
fn koszul_oracle(ring: &DgRing) -> (usize, usize) {
    let a0 = ring.degree_zero();
    let x = ring.to_a0(ring.differential_of(0));
    let r = a0.mult_matrix(&x).rank();
    (a0.dim() - r, a0.dim() - r)
}

#[test]
fn criterion_01_polynomial_suite() {
    criterion(1, "K[t] with |t| = -2 over GF(2) and Q", || {
        for name in ["GF(2)", "Q"] {
            let problem = polynomial_problem(name);
            let a = problem.primary_ring().clone();
            // (a) zero differential, so H(A) is A: one dimension at each even degree.
            let h = ok(cohomology_dims(&free(&a), -8, 0))?;
            let oracle: Vec<(i64, usize)> = (-8..=0).map(|i| (i, usize::from(i % 2 == 0))).collect();
            ensure(h == oracle && graded_dims(&a, -8, 0) == oracle, || format!("{name}: H(A) = {h:?}"))?;
            // (b) bar A is the cone of t: generators in degrees 0 and -3.
            let rep = run(&problem, &Command::Perfect { object: "barA".into() }, settings(-8, 0, -12)).map_err(|e| e.to_string())?;
            ensure(rep.verdict == "Perfect", || format!("{name}: perfect barA gave {}", rep.verdict))?;
            let v = ok(is_perfect(&problem.object("barA").unwrap(), -12))?;
            let w = v.global_witness().ok_or("no global witness")?;
            let mut degs: Vec<i64> = w.basis().iter().map(|b| b.degree).collect();
            degs.sort_unstable();
            ensure(degs == vec![-3, 0], || format!("{name}: witness degrees {degs:?}"))?;
            ensure(v.components[0].witness_check.as_ref().is_some_and(|c| c.holds && c.complete), || "witness not verified".into())?;
            // (c) R = Hom_K(A, K) is dualizing and RHom(R, R) has the cohomology of A.
            let rep = run(&problem, &Command::Dualizing { object: "R".into() }, settings(-8, 8, -12)).map_err(|e| e.to_string())?;
            ensure(rep.verdict == "DualizingInWindow", || format!("{name}: dualizing R gave {}", rep.verdict))?;
            let r = problem.object("R").unwrap();
            let c = ok(is_dualizing(&r, -8, 8))?;
            ensure(c.outcome == DualizingOutcome::DualizingInWindow && c.unit.holds, || "dualizing certificate incomplete".into())?;
            let d = ok(rhom(&r, &r, -8, 0))?;
            ensure(d.trusted.contains(-8) && d.trusted.contains(0), || format!("trusted bounds {:?}", d.trusted))?;
            let hr = ok(d.cohomology_dims(-8, 0))?;
            ensure(hr == oracle, || format!("{name}: H(RHom(R, R)) = {hr:?}"))?;
        }
        Ok(())
    });
}

#[test]
fn criterion_02_koszul_suite() {
    criterion(2, "Koszul complex of K[x]/(x^3) on x", || {
        for f in [gf(5), Field::Rational] {
            let b = ok(koszul_truncated(&f, 3))?;
            let (hm1, h0) = koszul_oracle(&b);
            ensure((hm1, h0) == (1, 1), || format!("oracle gives {:?}", (hm1, h0)))?;
            let h = ok(cohomology_dims(&free(&b), -3, 0))?;
            ensure(h == vec![(-3, 0), (-2, 0), (-1, hm1), (0, h0)], || format!("H(B) = {h:?}"))?;
            let rb = k_dual_of_ring(&b);
            let c = ok(is_dualizing(&rb, -4, 4))?;
            ensure(c.outcome == DualizingOutcome::DualizingInWindow, || format!("R_B: {:?}", c.outcome))?;
            let cm = ok(is_cm(&ok(bar_module(&b))?, &rb, -3, 3))?;
            ensure(cm.cm && cm.dual_dim == 1, || format!("bar B: cm {} dual dim {}", cm.cm, cm.dual_dim))?;
            let g = ok(is_gorenstein(&b, -4, 4))?;
            ensure(g.is_gorenstein(), || "B is not certified Gorenstein".into())?;
            // A⁰ = K[x]/(x^3) is Gorenstein, so coinduce(A⁰ → B, A⁰[1]) is dualizing and should be B itself.
            let a0 = Arc::new(DgRing::from_algebra(b.degree_zero().clone()));
            let inc = Arc::new(ok(DgRingHom::new(a0.clone(), b.clone(), (0..3).map(|i| b.a0_basis(i)).collect(), Vec::new()))?);
            let n = ok(coinduce(&inc, &free(&a0).shift(1)))?;
            let (_, v) = ok(find_generator(&n, -3, 3))?.ok_or("no generator B → coinduce(A⁰[1])")?;
            ensure(v.holds && v.complete, || format!("generator check {v:?}"))?;
        }
        Ok(())
    });
}

#[test]
fn criterion_03_cech() {
    criterion(3, "Cech complexes over split rings", || {
        let f = gf(5);
        let a3 = ok(split(&f, 3))?;
        let (o, z, m1) = (f.one(), f.zero(), -&f.one());
        // basis 1, e2, e3: the cover 1 - e3 = e1 + e2 and e2 + e3
        let cover3 = vec![vec![o.clone(), z.clone(), m1.clone()], vec![z.clone(), o.clone(), o.clone()]];
        let c = ok(cech(&free(&a3), &cover3, -1, 1))?;
        let h = cohomology(&c.module);
        ensure(h.dim(0) == Some(3) && h.dim(1) == Some(0), || format!("H(C) = {:?}, {:?}", h.dim(0), h.dim(1)))?;
        ensure(check_chain_quasi_iso(&c.augmentation, 0, 1).holds, || "augmentation of the instance fails".into())?;
        let cover2 = vec![vec![o.clone(), m1.clone()], vec![z.clone(), o.clone()]];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rings = [ok(split(&f, 2))?, a3.clone(), ok(split_polynomial(&f, 2))?, ok(split_polynomial(&f, 3))?];
        let mut count = 0;
        for k in 0..24 {
            let ring = &rings[k % rings.len()];
            let cover = if ring.degree_zero().dim() == 2 { &cover2 } else { &cover3 };
            let p = ok(random_semifree(ring, &random_degrees(-2, 0, 3, &mut rng), &mut rng))?;
            let c = ok(cech(&Module::semifree(p), cover, -7, 2))?;
            let v = check_chain_quasi_iso(&c.augmentation, -4, 1);
            ensure(v.holds && v.complete, || format!("random module {k}: {v:?}"))?;
            count += 1;
        }
        ensure(count >= 20, || "too few random modules".into())
    });
}

#[test]
fn criterion_04_perfectness() {
    criterion(4, "perfectness contrast", || {
        for f in [gf(3), Field::Rational] {
            let a = Arc::new(DgRing::from_algebra(ok(dgcalc_core::ring::DegreeZeroAlgebra::truncated(&f, "x", 2))?));
            let (_, k) = ok(simple_modules(&a))?.remove(0);
            let v = ok(is_perfect(&k, -11))?;
            ensure(v.outcome == PerfectOutcome::Inconclusive, || "K over K[x]/(x^2) was not inconclusive".into())?;
            // The minimal resolution is periodic: ... -x-> A -x-> A -> K, one generator per degree.
            let hand: Vec<(i64, usize)> = (0..=10).map(|i| (-i, 1)).collect();
            let betti = &v.components[0].replacement.betti;
            ensure(betti == &hand, || format!("Betti table {betti:?}"))?;
        }
        let f = gf(5);
        let rings = [ok(koszul_truncated(&f, 3))?, polynomial(&f, -2), exterior(&f), ok(split_polynomial(&f, 2))?];
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for k in 0..24 {
            let ring = &rings[k % rings.len()];
            let p = ok(random_semifree(ring, &random_degrees(-3, 1, 4, &mut rng), &mut rng))?;
            let lo = p.min_degree().unwrap_or(0);
            let v = ok(is_perfect(&Module::semifree(p), lo - 4))?;
            ensure(v.outcome == PerfectOutcome::Perfect, || format!("random module {k} not perfect"))?;
            for c in &v.components {
                ensure(c.replacement.finite, || format!("random module {k}: infinite witness"))?;
                ensure(c.witness_check.as_ref().is_some_and(|w| w.holds), || format!("random module {k}: witness unverified"))?;
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_05_tilting() {
    criterion(5, "tilting over K x K", || {
        let f = gf(5);
        let a = ok(split(&f, 2))?;
        let comps = connected_components(&a).1;
        let p1 = Module::semifree(SemiFreeModule::ring_module(comps[0].ring.clone()).shift(2));
        let p2 = Module::semifree(SemiFreeModule::ring_module(comps[1].ring.clone()).shift(-1));
        let p = ok(Module::sum(&[ok(restrict(&Arc::new(comps[0].hom.clone()), &p1))?, ok(restrict(&Arc::new(comps[1].hom.clone()), &p2))?]))?;
        let c = ok(is_tilting(&p, -4, 4, -6))?;
        ensure(c.tilting, || format!("P not tilting: {:?}", c.failure))?;
        ensure(c.shifts == vec![2, -1], || format!("shifts {:?}", c.shifts))?;
        ensure(c.reduction_shifts == c.shifts, || format!("reduction shifts {:?}", c.reduction_shifts))?;
        ensure(c.quasi_inverse.is_some() && !c.round_trip.is_empty() && c.round_trip.iter().all(|v| v.holds), || "quasi-inverse unverified".into())?;
        let two = ok(Module::sum(&[free(&a), free(&a)]))?;
        let c = ok(is_tilting(&two, -2, 2, -4))?;
        ensure(matches!(c.failure, Some(TiltingFailure::AdjunctionFails(_))), || format!("A + A: {:?}", c.failure))?;
        // The same P through the problem-file path.
        let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../problems/split2.toml")).map_err(|e| e.to_string())?;
        let problem = Problem::parse(&text).map_err(|e| e.to_string())?;
        let rep = run(&problem, &Command::Tilting { object: "P".into() }, settings(-4, 4, -6)).map_err(|e| e.to_string())?;
        ensure(rep.verdict == "Tilting", || format!("file P: {}", rep.verdict))
    });
}

fn random_cycle_map(p: &Arc<SemiFreeModule>, target: Module, rng: &mut ChaCha8Rng) -> Result<SemiFreeMap, String> {
    let hom = ok(hom_complex(p, &target))?;
    let f = p.ring_arc().field().clone();
    let mut z = vec![f.zero(); hom.dim(0)];
    for c in hom.differential(0).kernel() {
        axpy(&mut z, &random_scalar(&f, rng), &c);
    }
    ok(SemiFreeMap::from_hom_element(p.clone(), target, &z))
}

#[test]
fn criterion_06_psi() {
    criterion(6, "psi(L, M, N) is a quasi-isomorphism", || {
        let f = gf(5);
        let b = ok(koszul_truncated(&f, 3))?;
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for k in 0..20 {
            let l = Arc::new(ok(random_semifree(&b, &random_degrees(-2, 1, 3, &mut rng), &mut rng))?);
            let v = ok(is_perfect(&Module::SemiFree(l.clone()), l.min_degree().unwrap_or(0) - 4))?;
            ensure(v.outcome == PerfectOutcome::Perfect, || format!("L {k} not certified perfect"))?;
            let m = Module::semifree(ok(random_semifree(&b, &random_degrees(-2, 1, 3, &mut rng), &mut rng))?);
            let n = Arc::new(ok(random_semifree(&b, &random_degrees(-2, 1, 3, &mut rng), &mut rng))?);
            let chain = ok(psi(&l, &m, &n, -4, 4))?;
            let v = check_chain_quasi_iso(&chain, -3, 3);
            ensure(v.holds && v.complete, || format!("case {k}: {v:?}"))?;
        }
        Ok(())
    });
}

#[test]
fn criterion_07_biduality() {
    criterion(7, "biduality with respect to R_B", || {
        let f = gf(5);
        let b = ok(koszul_truncated(&f, 3))?;
        let rb = Module::Coinduced(Arc::new(CoinducedModule::new(b.clone(), vec![0])));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 0..20 {
            let m = Module::semifree(ok(random_semifree(&b, &random_degrees(-2, 1, 3, &mut rng), &mut rng))?);
            let v = ok(biduality(&m, &rb, -4, 2))?.verdict;
            ensure(v.holds, || format!("case {k}: {v:?}"))?;
        }
        Ok(())
    });
}

#[test]
fn criterion_08_squaring() {
    criterion(8, "squaring and rigidity", || {
        for p in [2u32, 5] {
            let f = gf(p);
            for b in [exterior(&f), ok(koszul_truncated(&f, 3))?] {
                let r = k_dual_of_ring(&b);
                let (lo, hi) = (-1, 3);
                let env = ok(enveloping(&b, ok(required_cutoff(&r, hi))?))?;
                let rep = ok(rigidity_consistency(&env, &r, lo, hi, 11, 8))?;
                // Adjunction oracle: H^i(Hom_K(B, K)) is dual to H^{-i}(B).
                let hb = ok(cohomology_dims(&free(&b), -hi, -lo))?;
                let oracle: Vec<(i64, usize)> = (lo..=hi).map(|i| (i, hb.iter().find(|x| x.0 == -i).map_or(0, |x| x.1))).collect();
                ensure(rep.square.dims == oracle, || format!("GF({p}): H(Sq) = {:?}, oracle {oracle:?}", rep.square.dims))?;
                ensure(rep.square.m_dims == oracle, || format!("GF({p}): H(R) = {:?}", rep.square.m_dims))?;
                let RigidityOutcome::Found { witness, .. } = rep.outcome else { return Err(format!("GF({p}): no rigidifying map")) };
                let auts = ok(rigid_automorphisms(&env, &r, &witness, lo, hi))?;
                ensure(auts == vec![f.one()], || format!("GF({p}): rigid automorphisms {auts:?}"))?;
                if p == 5 {
                    let id = |q: i64| Matrix::identity(&f, r.dim(q));
                    for s in field_elements(&f).ok_or("finite field")? {
                        let v = ok(quadratic_check(&env, &r, &id, &s, lo, hi))?;
                        ensure(v.holds, || format!("quadratic law fails for b = {s}"))?;
                    }
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_09_restriction() {
    criterion(9, "restriction along B^e -> B", || {
        let f = gf(5);
        let b = ok(koszul_truncated(&f, 3))?;
        let env = ok(enveloping(&b, -4))?;
        // μ is surjective on H⁰: the images of the A⁰ basis of B^e span H⁰(B).
        let h0 = h0_algebra(&b);
        let be0 = env.be.degree_zero();
        let cols: Vec<Vec<Scalar>> = (0..be0.dim()).map(|i| h0.projection.mul_vec(&b.to_a0(&env.mu.apply(&env.be.a0_basis(i))))).collect();
        let image = Matrix::from_columns(&f, h0.algebra.dim(), &cols);
        ensure(image.rank() == h0.algebra.dim(), || "μ is not surjective on H⁰".into())?;
        let bar = ok(bar_module(&b))?;
        let rb = k_dual_of_ring(&b);
        ensure(ok(is_cm(&bar, &rb, -3, 3))?.cm, || "bar B is not CM".into())?;
        let dims = ok(restriction_morphism_dims(&env.mu, &bar, &bar))?;
        // End(K) in degree 0 is K.
        ensure(dims == (1, 1), || format!("morphism dimensions {dims:?}"))
    });
}

fn invariant(name: &str, test: impl Fn(u64, u8) -> Result<(), TestCaseError>) -> Check {
    // A fresh runner each time: a reused one counts earlier successes and skips the cases.
    let mut runner = TestRunner::new(Config { cases: 200, failure_persistence: None, ..Config::default() });
    let cases = std::cell::Cell::new(0u32);
    runner
        .run(&(proptest::num::u64::ANY, proptest::num::u8::ANY), |(seed, pick)| {
            cases.set(cases.get() + 1);
            test(seed, pick)
        })
        .map_err(|e| format!("{name}: {e}"))?;
    ensure(cases.get() >= 200, || format!("{name}: only {} cases ran", cases.get()))
}

fn any_field(pick: u8) -> Field {
    match pick % 3 {
        0 => gf(2),
        1 => gf(5),
        _ => Field::Rational,
    }
}

fn random_element(ring: &DgRing, degree: i64, rng: &mut ChaCha8Rng) -> RingElement {
    let basis = ring.degree_basis(degree);
    let v: Vec<Scalar> = basis.iter().map(|_| random_scalar(ring.field(), rng)).collect();
    ring.from_vector(degree, &basis, &v)
}

fn degree(rng: &mut ChaCha8Rng) -> i64 {
    -((rand_chacha::rand_core::RngCore::next_u64(rng) % 4) as i64)
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

#[test]
fn criterion_10_invariant_suites() {
    criterion(10, "invariant suites, 200 cases each", || {
        let rings = |f: &Field| vec![koszul_truncated(f, 3).unwrap(), polynomial(f, -2), exterior(f)];
        invariant("d^2 = 0 and Leibniz", |seed, pick| {
            let f = any_field(pick);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for ring in rings(&f) {
                let (dx, dy) = (degree(&mut rng), degree(&mut rng));
                let (x, y) = (random_element(&ring, dx, &mut rng), random_element(&ring, dy, &mut rng));
                if !ring.d(&ring.d(&x)).is_zero() {
                    return Err(fail("d^2 != 0".into()));
                }
                let lhs = ring.d(&ring.mul(&x, &y));
                let rhs = ring.mul(&ring.d(&x), &y).add(&ring.mul(&x, &ring.d(&y)).signed(dx.rem_euclid(2) == 1));
                if lhs != rhs {
                    return Err(fail("Leibniz rule fails".into()));
                }
            }
            Ok(())
        })?;
        invariant("graded commutativity", |seed, pick| {
            let f = any_field(pick);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for ring in rings(&f) {
                let (dx, dy) = (degree(&mut rng), degree(&mut rng));
                let (x, y) = (random_element(&ring, dx, &mut rng), random_element(&ring, dy, &mut rng));
                if ring.mul(&x, &y) != ring.mul(&y, &x).signed((dx * dy).rem_euclid(2) == 1) {
                    return Err(fail("xy != ±yx".into()));
                }
                if dx.rem_euclid(2) == 1 && !ring.mul(&x, &x).is_zero() {
                    return Err(fail("odd square nonzero".into()));
                }
            }
            Ok(())
        })?;
        invariant("shift composition", |seed, pick| {
            let f = any_field(pick);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ring = koszul_truncated(&f, 3).unwrap();
            let m = Module::semifree(random_semifree(&ring, &random_degrees(-2, 1, 3, &mut rng), &mut rng).unwrap());
            let (a, b) = (degree(&mut rng) + 2, degree(&mut rng) + 1);
            let twice = Module::lazy(Shifted::new(Module::lazy(Shifted::new(m.clone(), a)), b));
            let once = Module::lazy(Shifted::new(m.clone(), a + b));
            for i in -6..=6 {
                if twice.dim(i) != once.dim(i) || twice.differential(i) != once.differential(i) || m.shift(a).shift(b).dim(i) != m.shift(a + b).dim(i) {
                    return Err(fail(format!("[{a}][{b}] != [{}] at {i}", a + b)));
                }
            }
            Ok(())
        })?;
        invariant("cone long exact sequence", |seed, pick| {
            let f = any_field(pick);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ring = koszul_truncated(&f, 3).unwrap();
            let p = Arc::new(random_semifree(&ring, &random_degrees(-2, 1, 3, &mut rng), &mut rng).unwrap());
            let q = Module::semifree(random_semifree(&ring, &random_degrees(-2, 1, 3, &mut rng), &mut rng).unwrap());
            let map = random_cycle_map(&p, q, &mut rng).map_err(fail)?;
            let chain = Arc::new(map.realize(-6, 4).unwrap());
            let c = cone(&chain).unwrap();
            let (hp, hq, hc) = (cohomology(chain.source()), cohomology(chain.target()), cohomology(&c));
            for i in -4..=2 {
                let rank = |j: i64| chain.induced(&hp, &hq, j).map(|m| m.rank()).unwrap();
                let expected = hq.dim(i).unwrap() - rank(i) + hp.dim(i + 1).unwrap() - rank(i + 1);
                if hc.dim(i).unwrap() != expected {
                    return Err(fail(format!("rank identity fails at {i}")));
                }
            }
            Ok(())
        })?;
        invariant("cohomology splits along components", |seed, pick| {
            let f = any_field(pick);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 2 + (pick as usize / 3) % 2;
            let ring = split_polynomial(&f, n).unwrap();
            let p = random_semifree(&ring, &random_degrees(-3, 0, 3, &mut rng), &mut rng).unwrap();
            let (_, comps) = connected_components(&ring);
            let whole = cohomology(&Module::semifree(p.clone()).realize(-6, 1).unwrap());
            let parts: Vec<_> = comps.iter().map(|c| cohomology(&Module::semifree(p.base_change(&c.hom)).realize(-6, 1).unwrap())).collect();
            for i in -5..=0 {
                let sum: usize = parts.iter().map(|h| h.dim(i).unwrap()).sum();
                if whole.dim(i).unwrap() != sum {
                    return Err(fail(format!("H^{i} does not split")));
                }
            }
            Ok(())
        })?;
        invariant("component orthogonality", |seed, pick| {
            let f = any_field(pick);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ring = split_polynomial(&f, 2 + (pick as usize / 3) % 2).unwrap();
            let (cover, comps) = connected_components(&ring);
            let a0 = ring.degree_zero();
            for (i, ei) in cover.representatives.iter().enumerate() {
                for (j, ej) in cover.representatives.iter().enumerate() {
                    let prod = a0.mul(ei, ej);
                    let good = if i == j { &prod == ei } else { prod.iter().all(Scalar::is_zero) };
                    if !good {
                        return Err(fail(format!("e{i} e{j} wrong")));
                    }
                }
            }
            let p = Arc::new(random_semifree(&ring, &random_degrees(-2, 0, 2, &mut rng), &mut rng).unwrap());
            let q = Arc::new(random_semifree(&ring, &random_degrees(-2, 0, 2, &mut rng), &mut rng).unwrap());
            let whole = cohomology(&hom_complex(&p, &Module::SemiFree(q.clone())).unwrap().realize(-3, 3).unwrap());
            let mut sum = [0usize; 5];
            for c in &comps {
                let (pe, qe) = (Arc::new(p.base_change(&c.hom)), Module::semifree(q.base_change(&c.hom)));
                let h = cohomology(&hom_complex(&pe, &qe).unwrap().realize(-3, 3).unwrap());
                for (k, i) in (-2..=2).enumerate() {
                    sum[k] += h.dim(i).unwrap();
                }
            }
            for (k, i) in (-2..=2).enumerate() {
                if whole.dim(i).unwrap() != sum[k] {
                    return Err(fail(format!("Hom^{i} does not split")));
                }
            }
            Ok(())
        })
    });
}
