//! Index-subgroups `R(I, J)` of `R(F_p)`.
//!
//! `H(I)` allows nonzero coefficients of `h` only at degrees `i ∈ I`, and `N(J)`
//! allows nonzero coefficients of `g` only at degrees `j + 1` with `j ∈ J`. Index
//! sets are eventually periodic, which keeps densities exact and the sumset
//! condition decidable.

mod admissible;
mod digits;
mod dimension;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::error::{Error, Result};

pub use admissible::{
    admissible_check, binom_mod_p, group_closure_crosscheck, sumset_closed, AdmissibilityReport,
    CrosscheckReport, SumsetReport, Verdict, Witness, DEFAULT_BOUND,
};
pub use digits::{density_convergence, jxi, jxi_scan_mismatch, w_value, ConvergencePoint, ConvergenceReport};
pub use dimension::{
    classify_pair, hausdorff_dim, hausdorff_dim_checked, log_grid, spectrum_sample, Classification,
    DimensionReport, DimensionRow, Family, Filtration, JCase, SpectrumReport,
};

/// An eventually periodic subset of ℕ = {1, 2, ...}.
///
/// Below the threshold `T` membership is listed explicitly; from `T` on, `n` is a
/// member iff `n mod period` is one of the residues. Values are kept in canonical
/// form (minimal period, then minimal threshold), so derived equality is set
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexSet {
    threshold: u64,
    exceptional: Vec<u64>,
    period: u64,
    residues: Vec<u64>,
}

impl IndexSet {
    pub fn new(threshold: u64, exceptional: &[u64], period: u64, residues: &[u64]) -> Result<Self> {
        if period == 0 {
            return Err(Error::Literal("period must be positive".into()));
        }
        if let Some(&e) = exceptional.iter().find(|&&e| e == 0 || e >= threshold) {
            return Err(Error::Literal(format!("exceptional element {e} is outside [1, {threshold})")));
        }
        if let Some(&r) = residues.iter().find(|&&r| r >= period) {
            return Err(Error::Literal(format!("residue {r} is not below the period {period}")));
        }
        let exc: BTreeSet<u64> = exceptional.iter().copied().collect();
        let res: BTreeSet<u64> = residues.iter().copied().collect();
        Ok(Self::canonical(threshold, exc.into_iter().collect(), period, res.into_iter().collect()))
    }

    /// Builds the set whose members are the `n >= 1` with `member(n)`, assuming
    /// `member` is `period`-periodic from `threshold` on.
    pub fn from_fn(threshold: u64, period: u64, member: impl Fn(u64) -> bool) -> Self {
        assert!(period > 0, "period must be positive");
        let exceptional = (1..threshold).filter(|&n| member(n)).collect();
        let residues = (0..period)
            .filter(|&r| {
                let n = threshold + (r + period - threshold % period) % period;
                member(n.max(period + r))
            })
            .collect();
        Self::canonical(threshold, exceptional, period, residues)
    }

    fn canonical(threshold: u64, exceptional: Vec<u64>, period: u64, residues: Vec<u64>) -> Self {
        let mut set = IndexSet { threshold, exceptional, period, residues };
        set.shrink_period();
        set.shrink_threshold();
        set
    }

    fn shrink_period(&mut self) {
        let m = self.period;
        let mut mark = vec![false; m as usize];
        for &r in &self.residues {
            mark[r as usize] = true;
        }
        for d in (1..=m).filter(|d| m % d == 0) {
            if (0..m).all(|r| mark[r as usize] == mark[((r + d) % m) as usize]) {
                self.period = d;
                self.residues = (0..d).filter(|&r| mark[r as usize]).collect();
                return;
            }
        }
    }

    fn shrink_threshold(&mut self) {
        while self.threshold > 0 {
            let n = self.threshold - 1;
            let periodic = self.residues.binary_search(&(n % self.period)).is_ok();
            let listed = self.exceptional.last() == Some(&n);
            if n != 0 && periodic != listed {
                break;
            }
            if listed {
                self.exceptional.pop();
            }
            self.threshold = n;
        }
    }

    pub fn empty() -> Self {
        Self::from_fn(0, 1, |_| false)
    }

    /// ℕ itself.
    pub fn naturals() -> Self {
        Self::from_fn(0, 1, |_| true)
    }

    /// `sℕ = {s, 2s, ...}`.
    pub fn multiples(s: u64) -> Self {
        Self::from_fn(0, s, |n| n % s == 0)
    }

    /// `sℕ - c = {s - c, 2s - c, ...}` for `0 <= c < s`.
    pub fn multiples_minus(s: u64, c: u64) -> Result<Self> {
        if c >= s {
            return Err(Error::Literal(format!("need 0 <= c < s in sN-c, got s = {s}, c = {c}")));
        }
        Ok(Self::from_fn(0, s, |n| (n + c) % s == 0))
    }

    /// `{n : n >= t}`.
    pub fn from_threshold(t: u64) -> Self {
        Self::from_fn(t, 1, |n| n >= t)
    }

    pub fn finite(members: &[u64]) -> Result<Self> {
        let t = members.iter().max().map_or(0, |m| m + 1);
        Self::new(t, members, 1, &[])
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn exceptional(&self) -> &[u64] {
        &self.exceptional
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn contains(&self, n: u64) -> bool {
        if n == 0 {
            false
        } else if n < self.threshold {
            self.exceptional.binary_search(&n).is_ok()
        } else {
            self.residues.binary_search(&(n % self.period)).is_ok()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.exceptional.is_empty() && self.residues.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.residues.is_empty()
    }

    /// Exact density `|residues| / period` (lower and upper density agree).
    pub fn density(&self) -> BigRational {
        BigRational::new(BigInt::from(self.residues.len()), BigInt::from(self.period))
    }

    /// `|S ∩ [1, x]|`.
    pub fn count_upto(&self, x: u64) -> u64 {
        let below = self.exceptional.iter().take_while(|&&e| e <= x).count() as u64;
        if x < self.threshold.max(1) {
            return below;
        }
        let start = self.threshold.max(1);
        below + self.periodic_count(x) - self.periodic_count(start - 1)
    }

    /// Number of `n` in `[0, x]` whose residue is listed.
    fn periodic_count(&self, x: u64) -> u64 {
        let m = self.period;
        let full = (x + 1) / m;
        let rest = (x + 1) % m;
        full * self.residues.len() as u64 + self.residues.iter().take_while(|&&r| r < rest).count() as u64
    }

    /// Members in `[1, x]`, ascending.
    pub fn members_upto(&self, x: u64) -> impl Iterator<Item = u64> + '_ {
        (1..=x).filter(move |&n| self.contains(n))
    }

    /// The smallest member, if any.
    pub fn min(&self) -> Option<u64> {
        self.members_upto(self.threshold + self.period).next()
    }

    fn combine(&self, other: &IndexSet, op: impl Fn(bool, bool) -> bool) -> IndexSet {
        let t = self.threshold.max(other.threshold);
        let m = self.period.lcm(&other.period);
        IndexSet::from_fn(t, m, |n| op(self.contains(n), other.contains(n)))
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        self.combine(other, |a, b| a && !b)
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.difference(other).is_empty()
    }

    /// `gcd` of all members; `None` for the empty set.
    pub fn gcd(&self) -> Option<u64> {
        // two members per residue class beyond the threshold are enough
        let g = self.members_upto(self.threshold + 2 * self.period).fold(0u64, |g, n| g.gcd(&n));
        (g > 0).then_some(g)
    }

    /// Parses either the literal form or a shorthand expression: terms `N`,
    /// `<s>N`, `<s>N-<c>`, `<s>N+<c>`, `>=<t>`, `{a,b,...}` and `empty`, joined
    /// by `&` (intersection, binds tighter) and `|` (union).
    pub fn parse_expr(s: &str) -> Result<IndexSet> {
        let s = s.trim();
        if s.contains('=') && s.contains(';') {
            return s.parse();
        }
        let mut acc = IndexSet::empty();
        for alt in s.split('|') {
            let mut meet: Option<IndexSet> = None;
            for term in alt.split('&') {
                let t = parse_term(term.trim())?;
                meet = Some(match meet {
                    None => t,
                    Some(m) => m.intersection(&t),
                });
            }
            acc = acc.union(&meet.expect("split yields at least one term"));
        }
        Ok(acc)
    }
}

fn parse_u64(s: &str, what: &str) -> Result<u64> {
    s.trim().parse().map_err(|_| Error::Literal(format!("bad {what} `{s}`")))
}

fn parse_list(s: &str, what: &str) -> Result<Vec<u64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| parse_u64(x, what)).collect()
}

fn parse_term(term: &str) -> Result<IndexSet> {
    let bad = || Error::Literal(format!("unrecognised index-set term `{term}`"));
    if term == "empty" || term == "{}" {
        return Ok(IndexSet::empty());
    }
    if let Some(inner) = term.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
        return IndexSet::finite(&parse_list(inner, "member")?);
    }
    if let Some(t) = term.strip_prefix(">=") {
        return Ok(IndexSet::from_threshold(parse_u64(t, "threshold")?));
    }
    let (head, tail) = term.split_once('N').ok_or_else(bad)?;
    let s = if head.is_empty() { 1 } else { parse_u64(head, "multiplier")? };
    if s == 0 {
        return Err(bad());
    }
    let tail = tail.trim();
    if tail.is_empty() {
        Ok(IndexSet::multiples(s))
    } else if let Some(c) = tail.strip_prefix('-') {
        IndexSet::multiples_minus(s, parse_u64(c, "offset")?)
    } else if let Some(c) = tail.strip_prefix('+') {
        let c = parse_u64(c, "offset")?;
        Ok(IndexSet::from_fn(c + 1, s, move |n| n >= s + c && n % s == c % s))
    } else {
        Err(bad())
    }
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for IndexSet {
    /// `T=<t>; except=<n1,...>; period=<m>; residues=<r1,...>`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "T={}; except={}; period={}; residues={}",
            self.threshold,
            join(&self.exceptional),
            self.period,
            join(&self.residues)
        )
    }
}

impl FromStr for IndexSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (mut t, mut except, mut period, mut residues) = (None, None, None, None);
        for field in s.trim().split(';') {
            let field = field.trim();
            if field.is_empty() {
                continue;
            }
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Literal(format!("expected key=value, got `{field}`")))?;
            match key.trim() {
                "T" => t = Some(parse_u64(value, "threshold")?),
                "except" => except = Some(parse_list(value, "exceptional element")?),
                "period" => period = Some(parse_u64(value, "period")?),
                "residues" => residues = Some(parse_list(value, "residue")?),
                other => return Err(Error::Literal(format!("unknown key `{other}`"))),
            }
        }
        let missing = |k: &str| Error::Literal(format!("missing {k}"));
        IndexSet::new(
            t.ok_or_else(|| missing("T"))?,
            &except.ok_or_else(|| missing("except"))?,
            period.ok_or_else(|| missing("period"))?,
            &residues.ok_or_else(|| missing("residues"))?,
        )
    }
}
