//! Admissibility of a pair `(I, J)`: the conditions under which `H(I) ⋊ N(J)` is
//! closed under the group law.
//!
//! 1. for `j ∈ J` and `1 <= n <= j + 1` with `C(j+1, n) ≢ 0 (mod p)`:
//!    `j + n·j' ∈ J` for every `j' ∈ J`;
//! 2. `I + I ⊆ I`;
//! 3. for `i ∈ I` and `1 <= n <= i` with `C(i, n) ≢ 0 (mod p)`:
//!    `i + n·j ∈ I` for every `j ∈ J`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::IndexSet;
use crate::error::{precondition, Result};
use crate::riordan::RiordanElem;
use crate::series::{NottSeries, Prime, TruncSeries, UnitSeries};

pub const DEFAULT_BOUND: u64 = 1000;

/// `C(a, b) mod p` by Lucas' theorem.
pub fn binom_mod_p(a: u64, b: u64, p: u64) -> Result<u64> {
    if b > a {
        return precondition(format!("C({a}, {b}) needs b <= a"));
    }
    Prime::new(p)?;
    let (mut a, mut b, mut acc) = (a, b, 1u128);
    let p128 = p as u128;
    while b > 0 {
        let (ad, bd) = (a % p, b % p);
        if bd > ad {
            return Ok(0);
        }
        acc = acc * small_binom(ad, bd, p) % p128;
        a /= p;
        b /= p;
    }
    Ok(acc as u64)
}

/// `C(a, b) mod p` for `b <= a < p`.
fn small_binom(a: u64, b: u64, p: u64) -> u128 {
    let p = p as u128;
    let (mut num, mut den) = (1u128, 1u128);
    for t in 0..b as u128 {
        num = num * (a as u128 - t) % p;
        den = den * (t + 1) % p;
    }
    num * pow_mod(den, p - 2, p) % p
}

fn pow_mod(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Lucas: `C(a, b) ≢ 0 (mod p)` iff every base-p digit of `b` is at most the
/// matching digit of `a`.
fn binom_nonzero(mut a: u64, mut b: u64, p: u64) -> bool {
    while b > 0 {
        if b % p > a % p {
            return false;
        }
        a /= p;
        b /= p;
    }
    true
}

/// A concrete failure of one of the three conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Condition 1: `j + n·j2 ∉ J`.
    J { j: u64, n: u64, j2: u64, target: u64 },
    /// Condition 2: `i + i2 ∉ I`.
    Sum { i: u64, i2: u64, target: u64 },
    /// Condition 3: `i + n·j ∉ I`.
    I { i: u64, n: u64, j: u64, target: u64 },
}

impl Witness {
    pub fn condition(&self) -> u8 {
        match self {
            Witness::J { .. } => 1,
            Witness::Sum { .. } => 2,
            Witness::I { .. } => 3,
        }
    }

    pub fn target(&self) -> u64 {
        match *self {
            Witness::J { target, .. } | Witness::Sum { target, .. } | Witness::I { target, .. } => target,
        }
    }

    /// Checks the witness from scratch against `(I, J)`.
    pub fn reverify(&self, i_set: &IndexSet, j_set: &IndexSet, p: u64) -> bool {
        match *self {
            Witness::J { j, n, j2, target } => {
                j_set.contains(j)
                    && j_set.contains(j2)
                    && (1..=j + 1).contains(&n)
                    && binom_mod_p(j + 1, n, p).is_ok_and(|c| c != 0)
                    && target == j + n * j2
                    && !j_set.contains(target)
            }
            Witness::Sum { i, i2, target } => {
                i_set.contains(i) && i_set.contains(i2) && target == i + i2 && !i_set.contains(target)
            }
            Witness::I { i, n, j, target } => {
                i_set.contains(i)
                    && j_set.contains(j)
                    && (1..=i).contains(&n)
                    && binom_mod_p(i, n, p).is_ok_and(|c| c != 0)
                    && target == i + n * j
                    && !i_set.contains(target)
            }
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Witness::J { j, n, j2, target } => {
                write!(f, "condition 1: j={j} n={n} j'={j2} gives {target} not in J")
            }
            Witness::Sum { i, i2, target } => write!(f, "condition 2: i={i} i'={i2} gives {target} not in I"),
            Witness::I { i, n, j, target } => write!(f, "condition 3: i={i} n={n} j={j} gives {target} not in I"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumsetReport {
    /// Every sum with both summands below this was checked.
    pub checked_to: u64,
    pub witness: Option<Witness>,
}

impl SumsetReport {
    pub fn closed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Decides `I + I ⊆ I` exactly.
///
/// If `i + i' ∉ I` with `i >= T + m`, then `(i - m) + i' ∉ I` as well, so a
/// failure exists iff one exists with both summands below `T + m`. The scan
/// covers `i <= i'` with `i + i' <= max(bound, 2(T + m))`.
pub fn sumset_closed(i_set: &IndexSet, bound: u64) -> SumsetReport {
    let limit = bound.max(2 * (i_set.threshold() + i_set.period()));
    let members: Vec<u64> = i_set.members_upto(limit).collect();
    for (k, &a) in members.iter().enumerate() {
        for &b in &members[k..] {
            if a + b > limit {
                break;
            }
            if !i_set.contains(a + b) {
                return SumsetReport { checked_to: limit, witness: Some(Witness::Sum { i: a, i2: b, target: a + b }) };
            }
        }
    }
    SumsetReport { checked_to: limit, witness: None }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// No violation of conditions 1 and 3 with target at most the bound, and
    /// condition 2 holds outright.
    PassUpTo(u64),
    Violation(Witness),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub p: u64,
    pub bound: u64,
    /// Range over which condition 2 was decided (see [`sumset_closed`]).
    pub sumset_checked_to: u64,
    pub verdict: Verdict,
}

impl AdmissibilityReport {
    pub fn passed(&self) -> bool {
        matches!(self.verdict, Verdict::PassUpTo(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.verdict {
            Verdict::Violation(w) => Some(w),
            Verdict::PassUpTo(_) => None,
        }
    }
}

impl fmt::Display for AdmissibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.verdict {
            Verdict::PassUpTo(b) => write!(
                f,
                "pass up to bound {b} (condition 2 decided, sums checked to {})",
                self.sumset_checked_to
            ),
            Verdict::Violation(w) => write!(f, "violation: {w}"),
        }
    }
}

/// Checks the three conditions in order 1, 2, 3, each scanned in ascending
/// order, and returns the first violation found.
pub fn admissible_check(i_set: &IndexSet, j_set: &IndexSet, p: u64, bound: u64) -> Result<AdmissibilityReport> {
    Prime::new(p)?;
    if bound == 0 {
        return precondition("bound must be positive");
    }
    let report = |verdict| AdmissibilityReport { p, bound, sumset_checked_to: 0, verdict };
    let js: Vec<u64> = j_set.members_upto(bound).collect();
    let is: Vec<u64> = i_set.members_upto(bound).collect();

    for &j in &js {
        for n in (1..=j + 1).filter(|&n| binom_nonzero(j + 1, n, p)) {
            for &j2 in js.iter().take_while(|&&j2| j + n * j2 <= bound) {
                let target = j + n * j2;
                if !j_set.contains(target) {
                    return Ok(report(Verdict::Violation(Witness::J { j, n, j2, target })));
                }
            }
        }
    }

    let sums = sumset_closed(i_set, bound);
    if let Some(w) = sums.witness {
        return Ok(AdmissibilityReport { sumset_checked_to: sums.checked_to, ..report(Verdict::Violation(w)) });
    }

    for &i in &is {
        for n in (1..=i).filter(|&n| binom_nonzero(i, n, p)) {
            for &j in js.iter().take_while(|&&j| i + n * j <= bound) {
                let target = i + n * j;
                if !i_set.contains(target) {
                    return Ok(AdmissibilityReport {
                        sumset_checked_to: sums.checked_to,
                        ..report(Verdict::Violation(Witness::I { i, n, j, target }))
                    });
                }
            }
        }
    }
    Ok(AdmissibilityReport { sumset_checked_to: sums.checked_to, ..report(Verdict::PassUpTo(bound)) })
}

/// Where a sampled product or inverse left `R(I, J)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Escape {
    /// `"product"` or `"inverse"`.
    pub operation: &'static str,
    /// `'h'` or `'g'`.
    pub part: char,
    /// Degree of the offending nonzero coefficient.
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrosscheckReport {
    pub trunc: usize,
    pub samples: usize,
    pub escape: Option<Escape>,
}

impl CrosscheckReport {
    pub fn closed(&self) -> bool {
        self.escape.is_none()
    }
}

fn random_member<R: Rng>(i_set: &IndexSet, j_set: &IndexSet, p: Prime, trunc: usize, rng: &mut R) -> RiordanElem {
    let pick = |rng: &mut R, allowed: bool| if allowed { rng.gen_range(0..p.get()) } else { 0 };
    let mut h = vec![0u64; trunc];
    h[0] = 1;
    for (d, c) in h.iter_mut().enumerate().skip(1) {
        *c = pick(rng, i_set.contains(d as u64));
    }
    let mut g = vec![0u64; trunc];
    g[1] = 1;
    for (d, c) in g.iter_mut().enumerate().skip(2) {
        *c = pick(rng, j_set.contains(d as u64 - 1));
    }
    let h = UnitSeries::new(TruncSeries::from_residues(p, h)).expect("constant term 1");
    let g = NottSeries::new(TruncSeries::from_residues(p, g)).expect("x + O(x^2)");
    RiordanElem::new(h, g).expect("same ring and truncation")
}

fn escape_of(e: &RiordanElem, i_set: &IndexSet, j_set: &IndexSet, operation: &'static str) -> Option<Escape> {
    let trunc = e.trunc();
    if let Some(degree) = (1..trunc).find(|&d| !e.h().coeff_is_zero(d) && !i_set.contains(d as u64)) {
        return Some(Escape { operation, part: 'h', degree });
    }
    (2..trunc)
        .find(|&d| !e.g().coeff_is_zero(d) && !j_set.contains(d as u64 - 1))
        .map(|degree| Escape { operation, part: 'g', degree })
}

/// Samples random elements of `R(I, J)` truncated at `trunc` and checks that
/// products and inverses keep their supports inside `I` and `J + 1`.
pub fn group_closure_crosscheck(
    i_set: &IndexSet,
    j_set: &IndexSet,
    p: u64,
    trunc: usize,
    samples: usize,
    seed: u64,
) -> Result<CrosscheckReport> {
    let prime = Prime::new(p)?;
    if trunc < 2 {
        return precondition("truncation must be at least 2");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let a = random_member(i_set, j_set, prime, trunc, &mut rng);
        let b = random_member(i_set, j_set, prime, trunc, &mut rng);
        let escape = escape_of(&a.rmul(&b)?, i_set, j_set, "product").or_else(|| escape_of(&a.rinv(), i_set, j_set, "inverse"));
        if escape.is_some() {
            return Ok(CrosscheckReport { trunc, samples, escape });
        }
    }
    Ok(CrosscheckReport { trunc, samples, escape: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    /// Pascal's rule over the integers, reduced at the end.
    fn binom_oracle(a: u64, b: u64, p: u64) -> u64 {
        let mut row = vec![BigInt::from(1)];
        for _ in 0..a {
            let mut next = vec![BigInt::from(1); row.len() + 1];
            for k in 1..row.len() {
                next[k] = &row[k - 1] + &row[k];
            }
            row = next;
        }
        let c: BigInt = &row[b as usize] % BigInt::from(p);
        u64::try_from(c).unwrap()
    }

    #[test]
    fn lucas_matches_pascal() {
        for p in [2u64, 3, 5, 7] {
            for a in 0..40 {
                for b in 0..=a {
                    assert_eq!(binom_mod_p(a, b, p).unwrap(), binom_oracle(a, b, p), "C({a},{b}) mod {p}");
                }
            }
        }
        assert!(binom_mod_p(3, 4, 5).is_err());
        assert!(binom_mod_p(3, 1, 4).is_err());
    }

    #[test]
    fn sumset_decides_closure() {
        assert!(sumset_closed(&IndexSet::multiples(3), 10).closed());
        let odd = IndexSet::multiples_minus(2, 1).unwrap();
        assert_eq!(sumset_closed(&odd, 10).witness, Some(Witness::Sum { i: 1, i2: 1, target: 2 }));
        // a failure only visible past the requested bound is still found
        let s = IndexSet::parse_expr(">=20 | {7}").unwrap();
        let r = sumset_closed(&s, 5);
        assert_eq!(r.witness, Some(Witness::Sum { i: 7, i2: 7, target: 14 }));
        assert!(r.checked_to >= 2 * (s.threshold() + s.period()));
    }

    #[test]
    fn standard_pairs_are_admissible() {
        for p in [2u64, 3, 5] {
            let i = IndexSet::multiples(p);
            let j = IndexSet::multiples_minus(p, 1).unwrap();
            let r = admissible_check(&i, &j, p, 300).unwrap();
            assert!(r.passed(), "p={p}: {r}");
            assert!(admissible_check(&IndexSet::naturals(), &IndexSet::naturals(), p, 300).unwrap().passed());
        }
    }

    #[test]
    fn even_i_with_all_j_fails_condition_three() {
        let r = admissible_check(&IndexSet::multiples(2), &IndexSet::naturals(), 3, 100).unwrap();
        let w = r.witness().unwrap().clone();
        assert_eq!(w, Witness::I { i: 2, n: 1, j: 1, target: 3 });
        assert_eq!(w.condition(), 3);
        assert!(w.reverify(&IndexSet::multiples(2), &IndexSet::naturals(), 3));
        assert!(!w.reverify(&IndexSet::naturals(), &IndexSet::naturals(), 3));
    }

    #[test]
    fn witnesses_reverify() {
        let cases = [
            (IndexSet::empty(), IndexSet::finite(&[1]).unwrap(), 3),
            (IndexSet::empty(), IndexSet::multiples_minus(2, 1).unwrap(), 3),
            (IndexSet::multiples_minus(2, 1).unwrap(), IndexSet::empty(), 5),
            (IndexSet::multiples(5), IndexSet::multiples(2), 3),
        ];
        for (i, j, p) in cases {
            let r = admissible_check(&i, &j, p, 200).unwrap();
            let w = r.witness().unwrap_or_else(|| panic!("{i} / {j} should fail"));
            assert!(w.reverify(&i, &j, p), "{w}");
        }
    }

    #[test]
    fn crosscheck_agrees_with_the_conditions() {
        let (i, j) = (IndexSet::multiples(3), IndexSet::multiples_minus(3, 1).unwrap());
        assert!(group_closure_crosscheck(&i, &j, 3, 16, 100, 7).unwrap().closed());
        let r = group_closure_crosscheck(&IndexSet::multiples(2), &IndexSet::naturals(), 3, 12, 100, 7).unwrap();
        assert!(!r.closed());
    }
}
