//! Dense univariate polynomials, coefficients listed from the constant term up.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Field, Scalar};

pub type Poly = Vec<Scalar>;

pub fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Scalar::is_zero) {
        p.pop();
    }
    p
}

pub fn degree(p: &[Scalar]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn eval(p: &[Scalar], x: &Scalar) -> Scalar {
    let mut acc = x.field().zero();
    for c in p.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

pub fn mul(a: &[Scalar], b: &[Scalar], field: &Field) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    trim(out)
}

pub fn sub(a: &[Scalar], b: &[Scalar], field: &Field) -> Poly {
    let n = a.len().max(b.len());
    let z = field.zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &[Scalar], b: &[Scalar], field: &Field) -> (Poly, Poly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = b[db].inv().unwrap();
    let mut r = trim(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![field.zero(); r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] * &lead_inv;
        for (i, bi) in b.iter().enumerate().take(db + 1) {
            let t = &c * bi;
            r[dr - db + i] -= &t;
        }
        q[dr - db] = c;
        r = trim(r);
    }
    (trim(q), r)
}

pub fn monic(p: Poly) -> Poly {
    match degree(&p) {
        None => Vec::new(),
        Some(d) => {
            let inv = p[d].inv().unwrap();
            trim(p.iter().map(|c| c * &inv).collect())
        }
    }
}

pub fn gcd(a: &[Scalar], b: &[Scalar], field: &Field) -> Poly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while degree(&b).is_some() {
        let (_, r) = divrem(&a, &b, field);
        a = b;
        b = r;
    }
    monic(a)
}

fn powmod(base: &[Scalar], mut e: u64, m: &[Scalar], field: &Field) -> Poly {
    let mut acc = vec![field.one()];
    let mut b = divrem(base, m, field).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = divrem(&mul(&acc, &b, field), m, field).1;
        }
        b = divrem(&mul(&b, &b, field), m, field).1;
        e >>= 1;
    }
    divrem(&acc, m, field).1
}

/// Distinct roots in the base field, sorted deterministically. `None` if the search was abandoned.
pub fn roots(p: &[Scalar], field: &Field) -> Option<Vec<Scalar>> {
    let p = trim(p.to_vec());
    degree(&p)?;
    match field {
        Field::Prime(q) => Some(prime_roots(&p, *q, field)),
        Field::Rational => rational_roots(&p),
    }
}

fn prime_roots(p: &[Scalar], q: u32, field: &Field) -> Vec<Scalar> {
    if q <= 4096 {
        return (0..q as i64).map(|a| field.int(a)).filter(|a| eval(p, a).is_zero()).collect();
    }
    let x = vec![field.zero(), field.one()];
    let xq = powmod(&x, q as u64, p, field);
    let g = gcd(&sub(&xq, &x, field), p, field);
    let mut out = Vec::new();
    split_linear(g, q, field, &mut out);
    out.sort_by_key(|r| r.residue());
    out
}

/// Splits a monic product of distinct linear factors.
fn split_linear(g: Poly, q: u32, field: &Field, out: &mut Vec<Scalar>) {
    match degree(&g) {
        None | Some(0) => {}
        Some(1) => out.push(-&g[0]),
        Some(d) => {
            for a in 0..q as i64 {
                let shifted = vec![field.int(a), field.one()];
                let h = powmod(&shifted, (q as u64 - 1) / 2, &g, field);
                let h = gcd(&sub(&h, &[field.one()], field), &g, field);
                let dh = degree(&h).unwrap_or(0);
                if dh > 0 && dh < d {
                    let (rest, _) = divrem(&g, &h, field);
                    split_linear(h, q, field, out);
                    split_linear(monic(rest), q, field, out);
                    return;
                }
            }
        }
    }
}

const DIVISOR_LIMIT: u64 = 1_000_000_000_000;

fn rational_roots(p: &[Scalar]) -> Option<Vec<Scalar>> {
    let rats: Vec<&BigRational> = p.iter().map(|c| c.as_rational().unwrap()).collect();
    let l = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = rats.iter().map(|r| (*r * BigRational::from_integer(l.clone())).to_integer()).collect();
    let mut out = Vec::new();
    let start = ints.iter().position(|c| !c.is_zero()).unwrap();
    if start > 0 {
        out.push(Scalar::Rat(BigRational::zero()));
    }
    let ints = &ints[start..];
    if ints.len() > 1 {
        let a0 = ints[0].abs().to_u64().filter(|&v| v <= DIVISOR_LIMIT)?;
        let an = ints[ints.len() - 1].abs().to_u64().filter(|&v| v <= DIVISOR_LIMIT)?;
        for num in divisors(a0) {
            for den in divisors(an) {
                for sign in [1i64, -1] {
                    let r = BigRational::new(BigInt::from(num) * sign, BigInt::from(den));
                    let s = Scalar::Rat(r);
                    if !out.contains(&s) && eval(p, &s).is_zero() {
                        out.push(s);
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| a.as_rational().cmp(&b.as_rational()));
    Some(out)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(f: &Field, c: &[i64]) -> Poly {
        c.iter().map(|&x| f.int(x)).collect()
    }

    #[test]
    fn roots_over_small_prime() {
        let f = Field::prime(5).unwrap();
        // x^3 - x
        let r = roots(&poly(&f, &[0, -1, 0, 1]), &f).unwrap();
        assert_eq!(r, vec![f.int(0), f.int(1), f.int(4)]);
    }

    #[test]
    fn roots_over_large_prime() {
        let f = Field::prime(1_000_003).unwrap();
        // (x - 2)(x - 7)(x^2 + 1), and -1 is a non-residue mod 1000003
        let p = mul(&mul(&poly(&f, &[-2, 1]), &poly(&f, &[-7, 1]), &f), &poly(&f, &[1, 0, 1]), &f);
        let r = roots(&p, &f).unwrap();
        assert_eq!(r, vec![f.int(2), f.int(7)]);
    }

    #[test]
    fn rational_roots_found() {
        let q = Field::Rational;
        // (2x - 1)(x + 3) x = 2x^3 + 5x^2 - 3x
        let r = roots(&poly(&q, &[0, -3, 5, 2]), &q).unwrap();
        assert_eq!(r, vec![q.int(-3), q.int(0), q.frac(1, 2).unwrap()]);
        assert!(roots(&poly(&q, &[1, 0, 1]), &q).unwrap().is_empty());
    }

    #[test]
    fn division_identity() {
        let q = Field::Rational;
        let a = poly(&q, &[1, 2, 3, 4]);
        let b = poly(&q, &[1, 1]);
        let (d, r) = divrem(&a, &b, &q);
        let back = sub(&mul(&d, &b, &q), &sub(&[], &r, &q), &q);
        assert_eq!(back, a);
        assert_eq!(gcd(&poly(&q, &[-1, 0, 1]), &poly(&q, &[1, 1]), &q), poly(&q, &[1, 1]));
    }
}
