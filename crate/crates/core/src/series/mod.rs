//! Truncated formal power series over a prime field F_p or over ℤ.
//!
//! A [`TruncSeries`] keeps coefficients `c_0..=c_N` exactly; `N` is fixed at
//! construction and arithmetic between series of different rings or truncations
//! is an error. Use [`TruncSeries::project`] to lower the truncation explicitly.
//!
//! [`UnitSeries`] (constant term 1) and [`NottSeries`] (`x + ...`) are the two
//! groups the Riordan group is built from: units under multiplication and
//! Nottingham series under substitution.

pub(crate) mod kernel;
pub mod random;

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use kernel::{Fp, Zz};

/// A prime in `[2, 2^31)`, checked by trial division.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 || p >= 1 << 31 {
            return Err(Error::NotPrime(p));
        }
        let mut d = 2;
        while d * d <= p {
            if p % d == 0 {
                return Err(Error::NotPrime(p));
            }
            d += 1;
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoeffRing {
    PrimeField(Prime),
    Integers,
}

impl CoeffRing {
    pub fn prime_field(p: u64) -> Result<Self> {
        Prime::new(p).map(CoeffRing::PrimeField)
    }

    pub fn characteristic(self) -> Option<u64> {
        match self {
            CoeffRing::PrimeField(p) => Some(p.get()),
            CoeffRing::Integers => None,
        }
    }

    /// Canonical representative of `c` in this ring.
    pub fn reduce(self, c: &BigInt) -> BigInt {
        match self {
            CoeffRing::PrimeField(p) => BigInt::from(reduce_mod(c, p.get())),
            CoeffRing::Integers => c.clone(),
        }
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffRing::PrimeField(p) => write!(f, "Fp:{p}"),
            CoeffRing::Integers => f.write_str("Z"),
        }
    }
}

impl FromStr for CoeffRing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Z" {
            return Ok(CoeffRing::Integers);
        }
        let p = s
            .strip_prefix("Fp:")
            .ok_or_else(|| Error::Literal(format!("unknown ring `{s}` (expected Fp:<p> or Z)")))?;
        let p = p
            .trim()
            .parse::<u64>()
            .map_err(|_| Error::Literal(format!("bad prime `{p}`")))?;
        CoeffRing::prime_field(p)
    }
}

fn reduce_mod(c: &BigInt, p: u64) -> u64 {
    let r = c % BigInt::from(p);
    let r = if r.is_negative() { r + p } else { r };
    r.to_u64().expect("residue fits in u64")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Coeffs {
    Fp(Vec<u64>),
    Int(Vec<BigInt>),
}

/// A power series `c_0 + c_1 x + ... + c_N x^N + O(x^{N+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    ring: CoeffRing,
    coeffs: Coeffs,
}

macro_rules! binary_kernel {
    ($self:ident, $other:ident, $kernel:path) => {{
        $self.check_compatible($other)?;
        let coeffs = match (&$self.coeffs, &$other.coeffs) {
            (Coeffs::Fp(a), Coeffs::Fp(b)) => Coeffs::Fp($kernel(&$self.fp(), a, b)),
            (Coeffs::Int(a), Coeffs::Int(b)) => Coeffs::Int($kernel(&Zz, a, b)),
            _ => unreachable!("rings were checked"),
        };
        Ok(TruncSeries { ring: $self.ring, coeffs })
    }};
}

impl TruncSeries {
    /// Builds `c_0 + ... + c_N x^N` with `N = coeffs.len() - 1`, reducing over F_p.
    pub fn new(ring: CoeffRing, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Empty);
        }
        let coeffs = match ring {
            CoeffRing::PrimeField(p) => {
                Coeffs::Fp(coeffs.iter().map(|c| reduce_mod(c, p.get())).collect())
            }
            CoeffRing::Integers => Coeffs::Int(coeffs),
        };
        Ok(TruncSeries { ring, coeffs })
    }

    pub fn from_i64(ring: CoeffRing, coeffs: &[i64]) -> Result<Self> {
        Self::new(ring, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The series `c_0 + c_1 x + ...` padded with zeros (or cut) to truncation `trunc`.
    pub fn from_i64_padded(ring: CoeffRing, trunc: usize, coeffs: &[i64]) -> Self {
        let mut v: Vec<BigInt> = coeffs.iter().take(trunc + 1).map(|&c| BigInt::from(c)).collect();
        v.resize(trunc + 1, BigInt::zero());
        Self::new(ring, v).expect("non-empty")
    }

    pub fn zero(ring: CoeffRing, trunc: usize) -> Self {
        Self::from_i64_padded(ring, trunc, &[])
    }

    pub fn one(ring: CoeffRing, trunc: usize) -> Self {
        Self::from_i64_padded(ring, trunc, &[1])
    }

    /// `c x^degree` (the zero series when `degree > trunc`).
    pub fn monomial(ring: CoeffRing, trunc: usize, degree: usize, c: i64) -> Self {
        let mut v = vec![0i64; trunc + 1];
        if degree <= trunc {
            v[degree] = c;
        }
        Self::from_i64_padded(ring, trunc, &v)
    }

    pub(crate) fn from_residues(p: Prime, coeffs: Vec<u64>) -> Self {
        debug_assert!(!coeffs.is_empty() && coeffs.iter().all(|&c| c < p.get()));
        TruncSeries { ring: CoeffRing::PrimeField(p), coeffs: Coeffs::Fp(coeffs) }
    }

    /// Coefficients over F_p as canonical residues; `None` over ℤ.
    pub fn residues(&self) -> Option<&[u64]> {
        match &self.coeffs {
            Coeffs::Fp(v) => Some(v),
            Coeffs::Int(_) => None,
        }
    }

    #[inline]
    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    #[inline]
    pub fn trunc(&self) -> usize {
        self.len() - 1
    }

    fn len(&self) -> usize {
        match &self.coeffs {
            Coeffs::Fp(v) => v.len(),
            Coeffs::Int(v) => v.len(),
        }
    }

    fn fp(&self) -> Fp {
        Fp(self.ring.characteristic().expect("prime field"))
    }

    /// `[x^m] f`. Asking past the truncation is an error, never a silent zero.
    pub fn coeff(&self, m: usize) -> Result<BigInt> {
        if m > self.trunc() {
            return Err(Error::OutOfRange { index: m, trunc: self.trunc() });
        }
        Ok(match &self.coeffs {
            Coeffs::Fp(v) => BigInt::from(v[m]),
            Coeffs::Int(v) => v[m].clone(),
        })
    }

    pub fn coeffs(&self) -> Vec<BigInt> {
        match &self.coeffs {
            Coeffs::Fp(v) => v.iter().map(|&c| BigInt::from(c)).collect(),
            Coeffs::Int(v) => v.clone(),
        }
    }

    pub(crate) fn coeff_is_zero(&self, m: usize) -> bool {
        match &self.coeffs {
            Coeffs::Fp(v) => v[m] == 0,
            Coeffs::Int(v) => v[m].is_zero(),
        }
    }

    pub(crate) fn coeff_is_one(&self, m: usize) -> bool {
        match &self.coeffs {
            Coeffs::Fp(v) => v[m] == 1,
            Coeffs::Int(v) => v[m].is_one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        (0..self.len()).all(|m| self.coeff_is_zero(m))
    }

    /// Lowest degree `>= from` with a nonzero coefficient.
    pub fn first_nonzero_from(&self, from: usize) -> Option<usize> {
        (from..self.len()).find(|&m| !self.coeff_is_zero(m))
    }

    /// Drops every coefficient above degree `m`.
    pub fn project(&self, m: usize) -> Result<Self> {
        if m > self.trunc() {
            return Err(Error::OutOfRange { index: m, trunc: self.trunc() });
        }
        let coeffs = match &self.coeffs {
            Coeffs::Fp(v) => Coeffs::Fp(v[..=m].to_vec()),
            Coeffs::Int(v) => Coeffs::Int(v[..=m].to_vec()),
        };
        Ok(TruncSeries { ring: self.ring, coeffs })
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch { left: self.ring, right: other.ring });
        }
        if self.trunc() != other.trunc() {
            return Err(Error::TruncMismatch { left: self.trunc(), right: other.trunc() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        binary_kernel!(self, other, kernel::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        binary_kernel!(self, other, kernel::sub)
    }

    pub fn neg(&self) -> Self {
        let coeffs = match &self.coeffs {
            Coeffs::Fp(a) => Coeffs::Fp(kernel::neg(&self.fp(), a)),
            Coeffs::Int(a) => Coeffs::Int(kernel::neg(&Zz, a)),
        };
        TruncSeries { ring: self.ring, coeffs }
    }

    /// Cauchy product truncated at `N`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        binary_kernel!(self, other, kernel::mul)
    }

    /// Substitution `self(g) = sum c_i g^i`. Since `g(0) = 0`, degree k of the
    /// result only sees coefficients up to degree k of both inputs.
    pub fn compose(&self, g: &TruncSeries) -> Result<Self> {
        self.check_compatible(g)?;
        if !g.coeff_is_zero(0) {
            return Err(Error::NonzeroConstant);
        }
        binary_kernel!(self, g, kernel::compose)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = TruncSeries::one(self.ring, self.trunc());
        for _ in 0..k {
            acc = acc.mul(self).expect("same ring and trunc");
        }
        acc
    }
}

impl fmt::Display for TruncSeries {
    /// `ring=<ring>; trunc=<N>; coeffs=<c0>,...,<cN>`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ring={}; trunc={}; coeffs=", self.ring, self.trunc())?;
        let cs: Vec<String> = self.coeffs().iter().map(|c| c.to_string()).collect();
        f.write_str(&cs.join(","))
    }
}

impl FromStr for TruncSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut ring = None;
        let mut trunc = None;
        let mut coeffs = None;
        for field in s.trim().split(';') {
            let field = field.trim();
            if field.is_empty() {
                continue;
            }
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Literal(format!("expected key=value, got `{field}`")))?;
            match key.trim() {
                "ring" => ring = Some(value.parse::<CoeffRing>()?),
                "trunc" => {
                    trunc = Some(value.trim().parse::<usize>().map_err(|_| {
                        Error::Literal(format!("bad truncation `{}`", value.trim()))
                    })?)
                }
                "coeffs" => coeffs = Some(value.to_string()),
                other => return Err(Error::Literal(format!("unknown key `{other}`"))),
            }
        }
        let ring = ring.ok_or_else(|| Error::Literal("missing ring".into()))?;
        let trunc = trunc.ok_or_else(|| Error::Literal("missing trunc".into()))?;
        let coeffs = coeffs.ok_or_else(|| Error::Literal("missing coeffs".into()))?;
        let parsed = coeffs
            .split(',')
            .map(|c| {
                let c = c.trim();
                if !c.bytes().all(|b| b.is_ascii_digit() || b == b'-') {
                    return Err(Error::Literal(format!("bad coefficient `{c}`")));
                }
                let v = c
                    .parse::<BigInt>()
                    .map_err(|_| Error::Literal(format!("bad coefficient `{c}`")))?;
                if v.is_negative() && ring != CoeffRing::Integers {
                    return Err(Error::Literal(format!(
                        "negative coefficient `{c}` is only allowed over Z"
                    )));
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        if parsed.len() != trunc + 1 {
            return Err(Error::Literal(format!(
                "trunc={trunc} needs {} coefficients, got {}",
                trunc + 1,
                parsed.len()
            )));
        }
        TruncSeries::new(ring, parsed)
    }
}

/// A series with constant term 1, i.e. an element of H(K).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnitSeries(TruncSeries);

impl UnitSeries {
    pub fn new(s: TruncSeries) -> Result<Self> {
        if !s.coeff_is_one(0) {
            return Err(Error::NotUnit);
        }
        Ok(UnitSeries(s))
    }

    pub fn from_i64(ring: CoeffRing, coeffs: &[i64]) -> Result<Self> {
        Self::new(TruncSeries::from_i64(ring, coeffs)?)
    }

    pub fn one(ring: CoeffRing, trunc: usize) -> Self {
        UnitSeries(TruncSeries::one(ring, trunc))
    }

    pub fn as_series(&self) -> &TruncSeries {
        &self.0
    }

    pub fn into_series(self) -> TruncSeries {
        self.0
    }

    pub fn mul(&self, other: &UnitSeries) -> Result<UnitSeries> {
        Ok(UnitSeries(self.0.mul(&other.0)?))
    }

    /// Multiplicative inverse via the convolution recurrence.
    pub fn inv(&self) -> UnitSeries {
        let coeffs = match &self.0.coeffs {
            Coeffs::Fp(a) => Coeffs::Fp(kernel::inv_unit(&self.0.fp(), a)),
            Coeffs::Int(a) => Coeffs::Int(kernel::inv_unit(&Zz, a)),
        };
        UnitSeries(TruncSeries { ring: self.0.ring, coeffs })
    }

    /// `h(g)`, again a unit series.
    pub fn compose(&self, g: &NottSeries) -> Result<UnitSeries> {
        Ok(UnitSeries(self.0.compose(&g.0)?))
    }

    /// `h(g) * h^{-1}`.
    pub fn twist(&self, g: &NottSeries) -> Result<UnitSeries> {
        self.compose(g)?.mul(&self.inv())
    }

    /// Membership in H^n: `c_1 = ... = c_{n-1} = 0` (checked within the truncation).
    pub fn in_h(&self, n: usize) -> bool {
        (1..n.min(self.0.len())).all(|m| self.0.coeff_is_zero(m))
    }

    /// Largest `n` with `self ∈ H^n` as seen at this truncation; `None` for `1`.
    pub fn order(&self) -> Option<usize> {
        self.0.first_nonzero_from(1)
    }

    pub fn project(&self, m: usize) -> Result<UnitSeries> {
        Ok(UnitSeries(self.0.project(m)?))
    }
}

impl Deref for UnitSeries {
    type Target = TruncSeries;

    fn deref(&self) -> &TruncSeries {
        &self.0
    }
}

impl fmt::Display for UnitSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A series `x + b_2 x^2 + ...`, i.e. an element of the Nottingham group N(K).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NottSeries(TruncSeries);

impl NottSeries {
    pub fn new(s: TruncSeries) -> Result<Self> {
        if s.trunc() < 1 || !s.coeff_is_zero(0) || !s.coeff_is_one(1) {
            return Err(Error::NotNottingham);
        }
        Ok(NottSeries(s))
    }

    pub fn from_i64(ring: CoeffRing, coeffs: &[i64]) -> Result<Self> {
        Self::new(TruncSeries::from_i64(ring, coeffs)?)
    }

    /// The identity substitution `x`.
    pub fn identity(ring: CoeffRing, trunc: usize) -> Result<Self> {
        if trunc < 1 {
            return Err(Error::NotNottingham);
        }
        Ok(NottSeries(TruncSeries::monomial(ring, trunc, 1, 1)))
    }

    pub fn as_series(&self) -> &TruncSeries {
        &self.0
    }

    pub fn into_series(self) -> TruncSeries {
        self.0
    }

    /// `self ∘ other = self(other)`.
    pub fn compose(&self, other: &NottSeries) -> Result<NottSeries> {
        Ok(NottSeries(self.0.compose(&other.0)?))
    }

    pub fn comp_inverse(&self) -> NottSeries {
        let coeffs = match &self.0.coeffs {
            Coeffs::Fp(a) => Coeffs::Fp(kernel::comp_inverse(&self.0.fp(), a)),
            Coeffs::Int(a) => Coeffs::Int(kernel::comp_inverse(&Zz, a)),
        };
        NottSeries(TruncSeries { ring: self.0.ring, coeffs })
    }

    /// Membership in N^n: `c_2 = ... = c_n = 0` (checked within the truncation).
    pub fn in_n(&self, n: usize) -> bool {
        (2..(n + 1).min(self.0.len())).all(|m| self.0.coeff_is_zero(m))
    }

    /// Degree `m` of the first nonzero coefficient past `x`; `None` for `x`.
    pub fn order(&self) -> Option<usize> {
        self.0.first_nonzero_from(2)
    }

    pub fn project(&self, m: usize) -> Result<NottSeries> {
        NottSeries::new(self.0.project(m)?)
    }
}

impl Deref for NottSeries {
    type Target = TruncSeries;

    fn deref(&self) -> &TruncSeries {
        &self.0
    }
}

impl fmt::Display for NottSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests;
