//! Random elements for property checks and sampling-based verifiers.

use num_bigint::BigInt;
use rand::Rng;

use super::{CoeffRing, NottSeries, TruncSeries, UnitSeries};

fn random_coeff<R: Rng + ?Sized>(ring: CoeffRing, rng: &mut R) -> BigInt {
    match ring {
        CoeffRing::PrimeField(p) => BigInt::from(rng.gen_range(0..p.get())),
        CoeffRing::Integers => BigInt::from(rng.gen_range(-5i64..=5)),
    }
}

/// Uniform (over F_p) series with every coefficient random.
pub fn series<R: Rng + ?Sized>(ring: CoeffRing, trunc: usize, rng: &mut R) -> TruncSeries {
    let coeffs = (0..=trunc).map(|_| random_coeff(ring, rng)).collect();
    TruncSeries::new(ring, coeffs).expect("non-empty")
}

/// Random element of H^n: `1 + a_n x^n + ...`.
pub fn unit_in<R: Rng + ?Sized>(ring: CoeffRing, trunc: usize, n: usize, rng: &mut R) -> UnitSeries {
    let coeffs = (0..=trunc)
        .map(|k| match k {
            0 => BigInt::from(1),
            k if k < n => BigInt::from(0),
            _ => random_coeff(ring, rng),
        })
        .collect();
    UnitSeries::new(TruncSeries::new(ring, coeffs).expect("non-empty")).expect("constant term 1")
}

/// Random `x + b_m x^m + ...`, i.e. an element of N^{m-1}.
pub fn nott_from<R: Rng + ?Sized>(ring: CoeffRing, trunc: usize, m: usize, rng: &mut R) -> NottSeries {
    let coeffs = (0..=trunc)
        .map(|k| match k {
            0 => BigInt::from(0),
            1 => BigInt::from(1),
            k if k < m => BigInt::from(0),
            _ => random_coeff(ring, rng),
        })
        .collect();
    NottSeries::new(TruncSeries::new(ring, coeffs).expect("non-empty")).expect("x + ...")
}
