//! Standard example rings and modules, and seeded random semi-free modules.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::linalg::{axpy, zero_vec, Field, Scalar};
use crate::module::{BasisElement, DgModule, Module, SemiFreeModule, WindowedModule};
use crate::ring::{h0_algebra, koszul, DegreeZeroAlgebra, DgRing, Generator, RingElement};
use crate::Error;

/// `K[t]` with `t` in degree `degree` and zero differential.
pub fn polynomial(f: &Field, degree: i64) -> Arc<DgRing> {
    Arc::new(DgRing::new(DegreeZeroAlgebra::base(f), vec![Generator { name: "t".into(), degree }], vec![RingElement::zero(degree + 1)]).expect("free graded ring"))
}

/// `K⟨e⟩` with `e` in degree −1 and zero differential.
pub fn exterior(f: &Field) -> Arc<DgRing> {
    Arc::new(DgRing::new(DegreeZeroAlgebra::base(f), vec![Generator { name: "e".into(), degree: -1 }], vec![RingElement::zero(0)]).expect("exterior ring"))
}

/// Koszul complex of `K[x]/(x^n)` on `x`.
pub fn koszul_truncated(f: &Field, n: usize) -> Result<Arc<DgRing>, Error> {
    let a0 = DegreeZeroAlgebra::truncated(f, "x", n)?;
    let x = a0.basis_vec(1);
    Ok(Arc::new(koszul(&a0, &[x])?))
}

/// `K × ⋯ × K` (`n` factors) in degree 0.
pub fn split(f: &Field, n: usize) -> Result<Arc<DgRing>, Error> {
    let factors: Vec<DegreeZeroAlgebra> = (0..n).map(|_| DegreeZeroAlgebra::base(f)).collect();
    Ok(Arc::new(DgRing::from_algebra(DegreeZeroAlgebra::product(f, &factors)?)))
}

/// `(K × ⋯ × K)[t]` with `t` in degree −2: a DG ring with non-local `A⁰` and unbounded cohomology.
pub fn split_polynomial(f: &Field, n: usize) -> Result<Arc<DgRing>, Error> {
    let s = split(f, n)?;
    let (r, _, _) = crate::ring::tensor_rings(&s, &polynomial(f, -2))?;
    Ok(r)
}

/// `H⁰(A)` as a DG `A`-module in degree 0.
pub fn bar_module(a: &Arc<DgRing>) -> Result<Module, Error> {
    let h = h0_algebra(a);
    let a0 = a.degree_zero();
    let acts = (0..a0.dim()).map(|x| h.algebra.mult_matrix(&h.projection.mul_vec(&a0.basis_vec(x)))).collect();
    Ok(Module::windowed(WindowedModule::concentrated(a.clone(), 0, acts)?))
}

/// A uniformly random field element (from `[-3, 3]` over ℚ).
pub fn random_scalar<R: RngCore>(f: &Field, rng: &mut R) -> Scalar {
    match f.characteristic() {
        0 => f.int((rng.next_u64() % 7) as i64 - 3),
        p => f.int((rng.next_u64() % p as u64) as i64),
    }
}

/// A finite semi-free module with generators in the given degrees. Generators are added from the top
/// down and each differential is a random cycle of the module built so far.
pub fn random_semifree<R: RngCore>(ring: &Arc<DgRing>, degrees: &[i64], rng: &mut R) -> Result<SemiFreeModule, Error> {
    let field = ring.field().clone();
    let mut sorted = degrees.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut basis = Vec::new();
    let mut diff = Vec::new();
    for (k, &n) in sorted.iter().enumerate() {
        let p = SemiFreeModule::new_unchecked(ring.clone(), basis.clone(), diff.clone());
        let cycles = p.differential(n + 1).kernel();
        let mut v = zero_vec(&field, p.dim(n + 1));
        for c in &cycles {
            axpy(&mut v, &random_scalar(&field, rng), c);
        }
        basis.push(BasisElement { name: format!("b{}", k + 1), degree: n });
        diff.push(p.from_vector(n + 1, &v));
    }
    SemiFreeModule::new(ring.clone(), basis, diff)
}

/// Between one and `max` generator degrees drawn from `[lo, hi]`.
pub fn random_degrees<R: RngCore>(lo: i64, hi: i64, max: usize, rng: &mut R) -> Vec<i64> {
    let n = 1 + (rng.next_u64() % max as u64) as usize;
    let span = (hi - lo + 1) as u64;
    (0..n).map(|_| lo + (rng.next_u64() % span) as i64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_modules_square_to_zero() {
        let f = Field::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for ring in [koszul_truncated(&f, 3).unwrap(), polynomial(&f, -2), split_polynomial(&f, 2).unwrap()] {
            for _ in 0..10 {
                let degs = random_degrees(-3, 1, 4, &mut rng);
                let p = random_semifree(&ring, &degs, &mut rng).unwrap();
                assert_eq!(p.rank(), degs.len());
                p.verify().unwrap();
            }
        }
    }
}
