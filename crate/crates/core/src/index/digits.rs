//! The digit-reversal weight `W` and the sets `J(ξ)`.
//!
//! For `m = Σ m_n p^n` in base p, `W(m) = Σ m_n p^(-n-1)`. For `j ∈ pℕ - 1`
//! put `w(j) = W(j + 1)`, and `J(ξ) = {j ∈ pℕ - 1 : w(j) < ξ}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::IndexSet;
use crate::error::{precondition, Result};
use crate::series::Prime;

/// `W(m)`, exact.
pub fn w_value(m: u64, p: u64) -> Result<BigRational> {
    Prime::new(p)?;
    if m == 0 {
        return precondition("W is defined on positive integers");
    }
    Ok(w_raw(m, p))
}

fn w_raw(mut m: u64, p: u64) -> BigRational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    while m > 0 {
        den *= p;
        num = num * p + m % p;
        m /= p;
    }
    BigRational::new(num, den)
}

/// Exponent `e` with `ξ = D / p^e` in lowest terms, for `0 <= ξ <= 1/p`.
fn xi_exponent(xi: &BigRational, p: u64) -> Result<u32> {
    let top = BigRational::new(BigInt::one(), BigInt::from(p));
    if xi < &BigRational::zero() || xi > &top {
        return precondition(format!("ξ = {xi} is outside [0, 1/{p}]"));
    }
    let mut den = xi.denom().clone();
    let mut e = 0u32;
    while den > BigInt::one() {
        let (q, r) = den.div_rem(&BigInt::from(p));
        if !r.is_zero() {
            return precondition(format!("ξ = {xi} has no finite base-{p} expansion"));
        }
        den = q;
        e += 1;
    }
    Ok(e.max(1))
}

/// `J(ξ)` as an eventually periodic set.
///
/// With `ξ = D / p^e`, the comparison `w(j) < ξ` is decided by the first `e`
/// base-p digits of `j + 1`, so `J(ξ)` is periodic with period `p^e`.
pub fn jxi(xi: &BigRational, p: u64) -> Result<IndexSet> {
    Prime::new(p)?;
    let e = xi_exponent(xi, p)?;
    let period = p
        .checked_pow(e)
        .filter(|&m| m <= 1 << 24)
        .ok_or_else(|| crate::Error::Precondition(format!("period {p}^{e} is too large")))?;
    let members: Vec<bool> = (0..period)
        .map(|c| c % p == 0 && &w_raw(c, p) < xi)
        .collect();
    Ok(IndexSet::from_fn(0, period, |j| members[((j + 1) % period) as usize]))
}

/// First `j <= bound` where `set` disagrees with the defining condition of
/// `J(ξ)` evaluated digit by digit.
pub fn jxi_scan_mismatch(set: &IndexSet, xi: &BigRational, p: u64, bound: u64) -> Result<Option<u64>> {
    Prime::new(p)?;
    Ok((1..=bound).find(|&j| {
        let direct = (j + 1) % p == 0 && &w_raw(j + 1, p) < xi;
        direct != set.contains(j)
    }))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergencePoint {
    pub n: u64,
    pub count: u64,
    pub estimate: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub limit: BigRational,
    /// `p · period / M`, with period `s·p^e`.
    pub error_bound: f64,
    pub points: Vec<ConvergencePoint>,
}

impl ConvergenceReport {
    pub fn final_error(&self) -> f64 {
        let last = self.points.last().expect("at least one point");
        (last.estimate - self.limit.to_f64().unwrap_or(f64::NAN)).abs()
    }

    pub fn within_bound(&self) -> bool {
        self.final_error() <= self.error_bound
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,count,estimate\n");
        for pt in &self.points {
            out.push_str(&format!("{},{},{:.8}\n", pt.n, pt.count, pt.estimate));
        }
        out
    }
}

/// Counts `J(ξ) ∩ sℕ ∩ [1, n]` by direct digit scan on a log-spaced grid up to
/// `max_n` and compares with the exact density `ξ / s`.
pub fn density_convergence(p: u64, s: u64, xi: &BigRational, max_n: u64) -> Result<ConvergenceReport> {
    Prime::new(p)?;
    if s == 0 || s % p == 0 {
        return precondition(format!("s = {s} must be positive and prime to p = {p}"));
    }
    if max_n == 0 {
        return precondition("M must be positive");
    }
    let e = xi_exponent(xi, p)?;
    let grid = super::log_grid(max_n);
    let mut points = Vec::with_capacity(grid.len());
    let mut count = 0u64;
    let mut next = grid.iter().copied().peekable();
    for j in 1..=max_n {
        if j % s == 0 && (j + 1) % p == 0 && &w_raw(j + 1, p) < xi {
            count += 1;
        }
        if next.peek() == Some(&j) {
            next.next();
            points.push(ConvergencePoint { n: j, count, estimate: count as f64 / j as f64 });
        }
    }
    let period = s as f64 * (p as f64).powi(e as i32);
    Ok(ConvergenceReport {
        limit: xi / BigRational::from_integer(BigInt::from(s)),
        error_bound: p as f64 * period / max_n as f64,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn w_reverses_digits() {
        // 5 = 12 in base 3, reversed 0.21 = 2/3 + 1/9
        assert_eq!(w_value(5, 3).unwrap(), q(7, 9));
        assert_eq!(w_value(1, 2).unwrap(), q(1, 2));
        assert_eq!(w_value(8, 2).unwrap(), q(1, 16));
        assert!(w_value(0, 3).is_err());
        assert!(w_value(4, 4).is_err());
    }

    #[test]
    fn w_is_a_bijection_onto_p_adic_fractions() {
        for p in [2u64, 3, 5] {
            let mut seen = std::collections::HashSet::new();
            for m in 1..500 {
                let w = w_value(m, p).unwrap();
                assert!(w > q(0, 1) && w < q(1, 1));
                if m % p != 0 {
                    assert!(seen.insert(w));
                }
            }
        }
    }

    #[test]
    fn j_of_one_over_p() {
        for p in [2u64, 3, 5, 7] {
            let j = jxi(&q(1, p as i64), p).unwrap();
            assert_eq!(j, IndexSet::multiples_minus(p, 1).unwrap());
            assert_eq!(j.density(), q(1, p as i64));
        }
        assert_eq!(jxi(&q(1, 9), 3).unwrap(), IndexSet::multiples_minus(9, 1).unwrap());
        assert!(jxi(&q(0, 1), 3).unwrap().is_empty());
    }

    #[test]
    fn j_of_xi_matches_scan_and_has_density_xi() {
        let xis = [(3u64, q(1, 3)), (3, q(2, 9)), (3, q(5, 27)), (2, q(3, 8)), (5, q(7, 125))];
        for (p, xi) in xis {
            let set = jxi(&xi, p).unwrap();
            assert_eq!(jxi_scan_mismatch(&set, &xi, p, 3000).unwrap(), None, "p={p} ξ={xi}");
            assert_eq!(set.density(), xi, "p={p}");
        }
    }

    #[test]
    fn xi_range_and_expansion_are_checked() {
        assert!(jxi(&q(1, 2), 3).is_err());
        assert!(jxi(&q(-1, 9), 3).is_err());
        assert!(jxi(&q(1, 5), 3).is_err());
    }

    #[test]
    fn density_converges_with_coprime_step() {
        let r = density_convergence(3, 2, &q(2, 9), 100_000).unwrap();
        assert_eq!(r.limit, q(1, 9));
        assert!(r.within_bound(), "error {} vs bound {}", r.final_error(), r.error_bound);
        assert_eq!(r.points.last().unwrap().n, 100_000);
        assert!(density_convergence(3, 3, &q(1, 3), 100).is_err());
        assert!(r.to_csv().starts_with("n,count,estimate\n"));
    }
}
