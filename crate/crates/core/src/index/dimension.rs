//! Filtrations, Hausdorff dimensions of `R(I, J)`, the classification of
//! admissible pairs and the spectrum families.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::admissible::{admissible_check, group_closure_crosscheck, AdmissibilityReport, CrosscheckReport};
use super::{jxi, IndexSet};
use crate::error::{precondition, Error, Result};
use crate::series::Prime;

fn q(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A filtration `G^σ_n = H^{σ(n)} ⋊ N^n` of `R(F_p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Filtration {
    /// `σ(n) = n`.
    Identity,
    /// `σ(n) = ⌈n/2⌉`.
    CeilHalf,
    /// `σ(n)` listed for `n = 1, 2, ...`.
    Table(Vec<usize>),
}

impl Filtration {
    pub fn eval(&self, n: usize) -> Option<usize> {
        match self {
            _ if n == 0 => None,
            Filtration::Identity => Some(n),
            Filtration::CeilHalf => Some(n.div_ceil(2)),
            Filtration::Table(t) => t.get(n - 1).copied(),
        }
    }

    /// Asymptotic slope `α` with `σ(n) ~ αn`, when known in closed form.
    pub fn slope(&self) -> Option<BigRational> {
        match self {
            Filtration::Identity => Some(q(1, 1)),
            Filtration::CeilHalf => Some(q(1, 2)),
            Filtration::Table(_) => None,
        }
    }

    /// Checks `σ(1) = 1`, monotonicity and subadditivity on `[1, upto]`.
    pub fn validate(&self, upto: usize) -> Result<()> {
        let t = match self {
            Filtration::Identity | Filtration::CeilHalf => return Ok(()),
            Filtration::Table(t) => t,
        };
        if t.len() < upto {
            return precondition(format!("table has {} entries, need {upto}", t.len()));
        }
        if t.first() != Some(&1) {
            return precondition("σ(1) must be 1");
        }
        if let Some(k) = (1..upto).find(|&k| t[k] < t[k - 1]) {
            return precondition(format!("σ decreases at n = {}", k + 1));
        }
        for a in 1..upto {
            for b in a..=upto - a {
                if t[a + b - 1] > t[a - 1] + t[b - 1] {
                    return precondition(format!("σ({}) > σ({a}) + σ({b})", a + b));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Filtration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Filtration::Identity => f.write_str("identity"),
            Filtration::CeilHalf => f.write_str("ceilhalf"),
            Filtration::Table(t) => {
                let v: Vec<String> = t.iter().map(usize::to_string).collect();
                write!(f, "table:{}", v.join(","))
            }
        }
    }
}

impl FromStr for Filtration {
    type Err = Error;

    /// `identity`, `ceil-half`, or `table:1,1,2,...`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "identity" | "id" => Ok(Filtration::Identity),
            "ceil-half" | "ceilhalf" => Ok(Filtration::CeilHalf),
            other => {
                let body = other
                    .strip_prefix("table:")
                    .ok_or_else(|| Error::Literal(format!("unknown filtration `{other}`")))?;
                let t = body
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|x| !x.is_empty())
                    .map(|x| x.parse().map_err(|_| Error::Literal(format!("bad table entry `{x}`"))))
                    .collect::<Result<Vec<usize>>>()?;
                if t.is_empty() {
                    return Err(Error::Literal("empty filtration table".into()));
                }
                Ok(Filtration::Table(t))
            }
        }
    }
}

/// `2, 5, 10, 20, 50, ...` up to `max`, with `max` itself appended.
pub fn log_grid(max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut scale = 1u64;
    'outer: loop {
        for k in [1u64, 2, 5] {
            let n = k.saturating_mul(scale);
            if n > max {
                break 'outer;
            }
            if n >= 2 {
                out.push(n);
            }
        }
        scale = match scale.checked_mul(10) {
            Some(s) => s,
            None => break,
        };
    }
    if out.last() != Some(&max) && max >= 2 {
        out.push(max);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionRow {
    pub n: u64,
    pub sigma: u64,
    /// `|I ∩ [1, σ(n))| + |J ∩ [1, n)|`.
    pub count: u64,
    /// `(σ(n) - 1) + (n - 1)`, the base-p logarithm of `|G : G^σ_n|`.
    pub denominator: u64,
    pub estimate: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionReport {
    pub filtration: Filtration,
    /// `α/(1+α)·dens(I) + 1/(1+α)·dens(J)` when `σ(n) ~ αn`.
    pub exact: Option<BigRational>,
    pub rows: Vec<DimensionRow>,
    /// Bound on `|estimate - exact|` at the last row.
    pub error_bound: Option<f64>,
}

impl DimensionReport {
    pub fn final_error(&self) -> Option<f64> {
        let exact = self.exact.as_ref()?.to_f64()?;
        Some((self.rows.last()?.estimate - exact).abs())
    }

    pub fn agrees(&self) -> Option<bool> {
        Some(self.final_error()? <= self.error_bound?)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,numerator_count,denominator,estimate\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{:.8}\n", r.n, r.count, r.denominator, r.estimate));
        }
        match &self.exact {
            Some(e) => out.push_str(&format!("exact={}/{}\n", e.numer(), e.denom())),
            None => out.push_str("exact=none\n"),
        }
        out
    }
}

/// Hausdorff dimension of `R(I, J)` in `R(F_p)` with respect to `σ`: the exact
/// value where `σ` has a known slope, and the finite-level ratios
/// `log_p |R(I,J) G_n / G_n| / log_p |G : G_n|` on a log grid up to `max_n`.
///
/// Admissibility is not checked here; see [`hausdorff_dim_checked`].
pub fn hausdorff_dim(i_set: &IndexSet, j_set: &IndexSet, sigma: &Filtration, max_n: u64) -> Result<DimensionReport> {
    if max_n < 2 {
        return precondition("need max_n >= 2");
    }
    let max_n = match sigma {
        Filtration::Table(t) => max_n.min(t.len() as u64),
        _ => max_n,
    };
    sigma.validate(max_n as usize)?;
    let slope = sigma.slope();
    let exact = slope
        .as_ref()
        .map(|a| (a * i_set.density() + j_set.density()) / (a + BigRational::one()));

    let mut rows = Vec::new();
    for n in log_grid(max_n) {
        let s = sigma.eval(n as usize).expect("validated") as u64;
        let (x, y) = (s - 1, n - 1);
        if x + y == 0 {
            continue;
        }
        let count = i_set.count_upto(x) + j_set.count_upto(y);
        rows.push(DimensionRow { n, sigma: s, count, denominator: x + y, estimate: count as f64 / (x + y) as f64 });
    }
    if rows.is_empty() {
        return precondition("no grid point with a nontrivial quotient");
    }

    // |count_S(x) - dens(S)·x| <= T + m for each set, and the weights x/(x+y)
    // differ from α/(1+α) by |x - αy|/(x+y).
    let error_bound = slope.map(|a| {
        let last = rows.last().expect("nonempty");
        let (x, y) = (BigRational::from_integer((last.sigma - 1).into()), BigRational::from_integer((last.n - 1).into()));
        let skew = (x - a * y).abs();
        let slack = i_set.threshold() + i_set.period() + j_set.threshold() + j_set.period();
        let b = (skew + BigRational::from_integer(slack.into())) / BigRational::from_integer(last.denominator.into());
        b.to_f64().unwrap_or(f64::INFINITY)
    });
    Ok(DimensionReport { filtration: sigma.clone(), exact, rows, error_bound })
}

/// [`hausdorff_dim`] after an admissibility check up to `bound`.
pub fn hausdorff_dim_checked(
    i_set: &IndexSet,
    j_set: &IndexSet,
    p: u64,
    sigma: &Filtration,
    max_n: u64,
    bound: u64,
) -> Result<DimensionReport> {
    let report = admissible_check(i_set, j_set, p, bound)?;
    if let Some(w) = report.witness() {
        return precondition(format!("(I, J) is not admissible: {w}"));
    }
    hausdorff_dim(i_set, j_set, sigma, max_n)
}

/// Shape of `J` when `I = sp^r ℕ` up to finitely many elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JCase {
    /// `J ⊆ (pℕ - 1) ∩ sℕ`.
    I,
    /// `J` is a cofinite subset of `s·u ℕ`.
    II { s0: u64, u: u64 },
    /// `J ⊆ s1 ℕ ∩ (p^v ℕ ∪ (pℕ - 1))` with density `(1 + t)/(s·u·p^v)`.
    III { s0: u64, s1: u64, v: u32, u: u64, t: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    /// `I` is empty.
    EmptyI,
    /// `gcd(I) = s·p^r` with `p ∤ s`.
    Periodic { s: u64, r: u32, case: JCase },
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::EmptyI => "(1)",
            Classification::Periodic { case: JCase::I, .. } => "(2)(i)",
            Classification::Periodic { case: JCase::II { .. }, .. } => "(2)(ii)",
            Classification::Periodic { case: JCase::III { .. }, .. } => "(2)(iii)",
        }
    }

    /// `dens(J)` as predicted by the case, where it is determined.
    pub fn predicted_density(&self, p: u64) -> Option<BigRational> {
        match *self {
            Classification::Periodic { s, case: JCase::II { u, .. }, .. } => Some(q(1, s * u)),
            Classification::Periodic { s, case: JCase::III { u, v, t, .. }, .. } => {
                Some(q(1 + t, s * u * p.pow(v)))
            }
            _ => None,
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::EmptyI => write!(f, "case (1): I empty"),
            Classification::Periodic { s, r, case } => {
                write!(f, "case {}: s={s} r={r}", self.label())?;
                match case {
                    JCase::I => Ok(()),
                    JCase::II { s0, u } => write!(f, " s0={s0} u={u}"),
                    JCase::III { s0, s1, v, u, t } => write!(f, " s0={s0} s1={s1} v={v} u={u} t={t}"),
                }
            }
        }
    }
}

fn structural<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Structural(msg.into()))
}

/// Places an admissible pair in the case list of the characterization of
/// admissible pairs.
pub fn classify_pair(i_set: &IndexSet, j_set: &IndexSet, p: u64) -> Result<Classification> {
    Prime::new(p)?;
    let Some(qi) = i_set.gcd() else {
        return Ok(Classification::EmptyI);
    };
    let (mut s, mut r) = (qi, 0u32);
    while s % p == 0 {
        s /= p;
        r += 1;
    }
    if i_set.density() != q(1, qi) {
        return structural(format!("I is not cofinite in {qi}ℕ"));
    }
    let s_mult = IndexSet::multiples(s);
    if !j_set.is_subset(&s_mult) {
        return structural(format!("J is not contained in {s}ℕ"));
    }
    let minus = IndexSet::multiples_minus(p, 1)?;
    if j_set.is_subset(&minus) {
        return Ok(Classification::Periodic { s, r, case: JCase::I });
    }
    let s0 = j_set.difference(&minus).gcd().expect("J has an element outside pℕ - 1");
    if j_set.is_subset(&IndexSet::multiples(s0)) {
        if s0 % s != 0 {
            return structural(format!("s0 = {s0} is not a multiple of s = {s}"));
        }
        if j_set.density() != q(1, s0) {
            return structural(format!("J is not cofinite in {s0}ℕ"));
        }
        return Ok(Classification::Periodic { s, r, case: JCase::II { s0, u: s0 / s } });
    }
    let (mut s1, mut v) = (s0, 0u32);
    while s1 % p == 0 {
        s1 /= p;
        v += 1;
    }
    if v == 0 {
        return structural(format!("J is neither in {s0}ℕ nor shaped by a power of p"));
    }
    let shape = IndexSet::multiples(s1).intersection(&IndexSet::multiples(p.pow(v)).union(&minus));
    if !j_set.is_subset(&shape) {
        return structural("J is not contained in s1ℕ ∩ (p^vℕ ∪ (pℕ - 1))");
    }
    if s1 % s != 0 {
        return structural(format!("s1 = {s1} is not a multiple of s = {s}"));
    }
    let u = s1 / s;
    let scaled = j_set.density() * BigRational::from_integer(BigInt::from(s * u * p.pow(v))) - BigRational::one();
    if !scaled.is_integer() || scaled < BigRational::one() || scaled > q(p.pow(v - 1), 1) {
        return structural(format!("density {} does not fit (1+t)/(s·u·p^v)", j_set.density()));
    }
    let t = scaled.to_integer().to_u64().expect("checked range");
    Ok(Classification::Periodic { s, r, case: JCase::III { s0, s1, v, u, t } })
}

/// The explicit families of admissible pairs that realise spectrum values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `I = pℕ`, `J = J(ξ)`.
    Interval { xi: BigRational },
    /// `I = pℕ`, `J = p^r ℕ ∪ (pℕ - 1)`.
    PPower { r: u32 },
    /// `I = ℕ`, `J = p^r ℕ ∪ (pℕ - 1)`.
    HalfPlus { r: u32 },
    /// `I = sℕ`, `J = J(ξ) ∩ sℕ` with `s < p`.
    Band { s: u64, xi: BigRational },
    /// `I = s p^r ℕ`, `J = s u ℕ`.
    Lattice { s: u64, r: u32, u: u64 },
}

impl Family {
    pub fn pair(&self, p: u64) -> Result<(IndexSet, IndexSet)> {
        Prime::new(p)?;
        let pp = |r: u32| {
            p.checked_pow(r)
                .filter(|&m| m <= 1 << 24)
                .ok_or_else(|| Error::Precondition(format!("{p}^{r} is too large")))
        };
        let mixed = |r: u32| -> Result<IndexSet> {
            if r == 0 {
                return precondition("r must be at least 1");
            }
            Ok(IndexSet::multiples(pp(r)?).union(&IndexSet::multiples_minus(p, 1)?))
        };
        match self {
            Family::Interval { xi } => Ok((IndexSet::multiples(p), jxi(xi, p)?)),
            Family::PPower { r } => Ok((IndexSet::multiples(p), mixed(*r)?)),
            Family::HalfPlus { r } => Ok((IndexSet::naturals(), mixed(*r)?)),
            Family::Band { s, xi } => {
                if *s == 0 || *s >= p {
                    return precondition(format!("need 1 <= s < p, got s = {s}"));
                }
                let s_mult = IndexSet::multiples(*s);
                Ok((s_mult.clone(), jxi(xi, p)?.intersection(&s_mult)))
            }
            Family::Lattice { s, r, u } => {
                if *s == 0 || *u == 0 {
                    return precondition("s and u must be positive");
                }
                let step = s.checked_mul(pp(*r)?).ok_or_else(|| Error::Precondition("s·p^r overflows".into()))?;
                Ok((IndexSet::multiples(step), IndexSet::multiples(s * u)))
            }
        }
    }

    /// The dimension predicted in closed form (identity filtration).
    pub fn closed_form(&self, p: u64) -> BigRational {
        let half = q(1, 2);
        match self {
            Family::Interval { xi } => q(1, 2 * p) + xi * &half,
            Family::PPower { r } => q(1, p) + q(1, 2 * p.pow(*r)),
            Family::HalfPlus { r } => half + q(1, 2 * p) + q(1, 2 * p.pow(*r)),
            Family::Band { s, xi } => q(1, 2 * s) + xi / BigRational::from_integer(BigInt::from(2 * s)),
            Family::Lattice { s, r, u } => q(1, 2 * s * p.pow(*r)) + q(1, 2 * s * u),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Interval { xi } => write!(f, "interval:{xi}"),
            Family::PPower { r } => write!(f, "ppower:{r}"),
            Family::HalfPlus { r } => write!(f, "halfplus:{r}"),
            Family::Band { s, xi } => write!(f, "band:{s}:{xi}"),
            Family::Lattice { s, r, u } => write!(f, "lattice:{s}:{r}:{u}"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// `interval:<ξ>`, `ppower:<r>`, `halfplus:<r>`, `band:<s>:<ξ>` or
    /// `lattice:<s>:<r>:<u>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Literal(format!("unknown family `{s}`"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        let int = |x: &str| x.parse::<u64>().map_err(|_| bad());
        let rat = |x: &str| x.parse::<BigRational>().map_err(|_| bad());
        match parts.as_slice() {
            ["interval", xi] => Ok(Family::Interval { xi: rat(xi)? }),
            ["ppower", r] => Ok(Family::PPower { r: int(r)? as u32 }),
            ["halfplus", r] => Ok(Family::HalfPlus { r: int(r)? as u32 }),
            ["band", s, xi] => Ok(Family::Band { s: int(s)?, xi: rat(xi)? }),
            ["lattice", s, r, u] => Ok(Family::Lattice { s: int(s)?, r: int(r)? as u32, u: int(u)? }),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub family: Family,
    pub i_set: IndexSet,
    pub j_set: IndexSet,
    pub closed_form: BigRational,
    pub dimension: BigRational,
    pub admissibility: AdmissibilityReport,
    pub crosscheck: CrosscheckReport,
}

impl SpectrumReport {
    pub fn pass(&self) -> bool {
        self.closed_form == self.dimension && self.admissibility.passed() && self.crosscheck.closed()
    }
}

/// Builds the family's pair, verifies admissibility (up to `bound`) and group
/// closure by sampling, and compares the exact dimension with the closed form.
pub fn spectrum_sample(p: u64, family: &Family, bound: u64, seed: u64) -> Result<SpectrumReport> {
    let (i_set, j_set) = family.pair(p)?;
    let admissibility = admissible_check(&i_set, &j_set, p, bound)?;
    let crosscheck = group_closure_crosscheck(&i_set, &j_set, p, 20, 200, seed)?;
    let dimension = (i_set.density() + j_set.density()) / BigRational::from_integer(BigInt::from(2));
    let closed_form = family.closed_form(p);
    Ok(SpectrumReport { family: family.clone(), i_set, j_set, closed_form, dimension, admissibility, crosscheck })
}
