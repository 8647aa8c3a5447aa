//! Coefficient-level kernels shared by the F_p and ℤ representations.
//!
//! Every slice handed to these functions has the same length `N + 1`; results
//! are truncated to that length.

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub(crate) trait Scalars {
    type E: Clone + PartialEq;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    /// `acc += a * b`
    fn mul_add(&self, acc: &mut Self::E, a: &Self::E, b: &Self::E);
}

/// Residues mod a prime below 2^31, so `acc + a * b` never overflows a `u64`.
pub(crate) struct Fp(pub u64);

impl Scalars for Fp {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.0
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.0 - b) % self.0
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.0 - a) % self.0
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn mul_add(&self, acc: &mut u64, a: &u64, b: &u64) {
        *acc = (*acc + a * b) % self.0;
    }
}

pub(crate) struct Zz;

impl Scalars for Zz {
    type E = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn mul_add(&self, acc: &mut BigInt, a: &BigInt, b: &BigInt) {
        if !a.is_zero() && !b.is_zero() {
            *acc += a * b;
        }
    }
}

pub(crate) fn add<S: Scalars>(s: &S, a: &[S::E], b: &[S::E]) -> Vec<S::E> {
    a.iter().zip(b).map(|(x, y)| s.add(x, y)).collect()
}

pub(crate) fn sub<S: Scalars>(s: &S, a: &[S::E], b: &[S::E]) -> Vec<S::E> {
    a.iter().zip(b).map(|(x, y)| s.sub(x, y)).collect()
}

pub(crate) fn neg<S: Scalars>(s: &S, a: &[S::E]) -> Vec<S::E> {
    a.iter().map(|x| s.neg(x)).collect()
}

/// Truncated Cauchy product.
pub(crate) fn mul<S: Scalars>(s: &S, a: &[S::E], b: &[S::E]) -> Vec<S::E> {
    let len = a.len();
    let mut out = vec![s.zero(); len];
    for (i, ai) in a.iter().enumerate() {
        if s.is_zero(ai) {
            continue;
        }
        for (j, bj) in b[..len - i].iter().enumerate() {
            s.mul_add(&mut out[i + j], ai, bj);
        }
    }
    out
}

/// Inverse of a series with constant term 1:
/// `c_0 = 1`, `c_k = -sum_{i=1..k} h_i c_{k-i}`.
pub(crate) fn inv_unit<S: Scalars>(s: &S, h: &[S::E]) -> Vec<S::E> {
    let len = h.len();
    let mut c = vec![s.zero(); len];
    c[0] = s.one();
    for k in 1..len {
        let mut acc = s.zero();
        for i in 1..=k {
            s.mul_add(&mut acc, &h[i], &c[k - i]);
        }
        c[k] = s.neg(&acc);
    }
    c
}

/// `f(g)` by Horner evaluation; requires `g_0 = 0`.
pub(crate) fn compose<S: Scalars>(s: &S, f: &[S::E], g: &[S::E]) -> Vec<S::E> {
    let len = f.len();
    let mut acc = vec![s.zero(); len];
    for fk in f.iter().rev() {
        acc = mul(s, &acc, g);
        acc[0] = s.add(&acc[0], fk);
    }
    acc
}

/// Compositional inverse of `g = x + ...`, solved one degree at a time from
/// `g(inv) = x`: with `inv` known below degree k, `[x^k] g(inv) = inv_k + (terms in
/// lower coefficients)`, so `inv_k` is minus the degree-k coefficient computed with
/// `inv_k = 0`.
pub(crate) fn comp_inverse<S: Scalars>(s: &S, g: &[S::E]) -> Vec<S::E> {
    let len = g.len();
    let mut inv = vec![s.zero(); len];
    if len > 1 {
        inv[1] = s.one();
    }
    for k in 2..len {
        let c = compose(s, g, &inv);
        inv[k] = s.neg(&c[k]);
    }
    inv
}
