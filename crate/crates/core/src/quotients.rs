//! The finite p-groups `R(F_p)/R^n` as explicit coefficient tuples.
//!
//! An element of level `n` is the coset of `(h, g)` modulo `R^n = H^n ⋊ N^n`,
//! which is determined by `(a_1, ..., a_{n-1}, b_2, ..., b_n)`. Tuples are packed
//! into a `u64` code, most significant digit first, so numeric order on codes is
//! lexicographic order on tuples.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{precondition, Error, Result};
use crate::index::Filtration;
use crate::riordan::RiordanElem;
use crate::series::kernel::{self, Fp};
use crate::series::{CoeffRing, NottSeries, Prime, TruncSeries, UnitSeries};

/// Default cap on the number of elements any enumeration may touch.
pub const DEFAULT_MAX_ELEMS: u64 = 1 << 20;

/// A packed coset tuple.
pub type Code = u64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientGroup {
    p: Prime,
    level: usize,
    cap: u64,
    order: u64,
    /// `place[k] = p^{D-1-k}` for tuple position `k`
    place: Vec<u64>,
}

impl QuotientGroup {
    pub fn new(p: u64, level: usize) -> Result<Self> {
        Self::with_cap(p, level, DEFAULT_MAX_ELEMS)
    }

    /// Same as [`QuotientGroup::new`] with an explicit enumeration cap.
    pub fn with_cap(p: u64, level: usize, cap: u64) -> Result<Self> {
        let p = Prime::new(p)?;
        if level < 2 {
            return precondition(format!("quotient level must be at least 2, got {level}"));
        }
        let digits = 2 * (level - 1);
        let order = (p.get() as u128).checked_pow(digits as u32).filter(|&o| o <= u64::MAX as u128);
        let order = order.ok_or(Error::TooLarge { requested: u128::MAX, cap })? as u64;
        let mut place = vec![1u64; digits];
        for k in (0..digits.saturating_sub(1)).rev() {
            place[k] = place[k + 1] * p.get();
        }
        Ok(QuotientGroup { p, level, cap, order, place })
    }

    pub fn p(&self) -> u64 {
        self.p.get()
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// `p^{2(n-1)}`.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn ring(&self) -> CoeffRing {
        CoeffRing::PrimeField(self.p)
    }

    fn digits(&self) -> usize {
        self.place.len()
    }

    fn check_cap(&self, requested: u64) -> Result<()> {
        if requested > self.cap {
            return Err(Error::TooLarge { requested: requested as u128, cap: self.cap });
        }
        Ok(())
    }

    pub fn identity(&self) -> Code {
        0
    }

    /// `(a_1, ..., a_{n-1}, b_2, ..., b_n)` for a code.
    pub fn tuple(&self, code: Code) -> Vec<u64> {
        self.place.iter().map(|&w| code / w % self.p()).collect()
    }

    pub fn encode(&self, tuple: &[u64]) -> Result<Code> {
        if tuple.len() != self.digits() {
            return precondition(format!(
                "level {} tuples have {} entries, got {}",
                self.level,
                self.digits(),
                tuple.len()
            ));
        }
        if let Some(&bad) = tuple.iter().find(|&&t| t >= self.p()) {
            return precondition(format!("tuple entry {bad} is not a residue mod {}", self.p));
        }
        Ok(tuple.iter().zip(&self.place).map(|(t, w)| t * w).sum())
    }

    /// The coset tuple of `a`; coefficients above the level are ignored.
    pub fn canonicalize(&self, a: &RiordanElem) -> Result<Vec<u64>> {
        if a.ring() != self.ring() {
            return Err(Error::RingMismatch { left: self.ring(), right: a.ring() });
        }
        if a.trunc() < self.level {
            return Err(Error::OutOfRange { index: self.level, trunc: a.trunc() });
        }
        let h = a.h().residues().expect("prime field");
        let g = a.g().residues().expect("prime field");
        Ok(h[1..self.level].iter().chain(&g[2..=self.level]).copied().collect())
    }

    pub fn code_of(&self, a: &RiordanElem) -> Result<Code> {
        self.encode(&self.canonicalize(a)?)
    }

    /// The representative `(1 + a_1 x + ... + a_{n-1} x^{n-1}, x + b_2 x^2 + ... + b_n x^n)`
    /// at truncation `n`.
    pub fn lift(&self, code: Code) -> RiordanElem {
        let (h, g) = self.halves(code);
        let h = UnitSeries::new(TruncSeries::from_residues(self.p, h)).expect("constant term 1");
        let g = NottSeries::new(TruncSeries::from_residues(self.p, g)).expect("x + ...");
        RiordanElem::new(h, g).expect("shared ring and truncation")
    }

    fn halves(&self, code: Code) -> (Vec<u64>, Vec<u64>) {
        let n = self.level;
        let t = self.tuple(code);
        let mut h = vec![0u64; n + 1];
        let mut g = vec![0u64; n + 1];
        h[0] = 1;
        g[1] = 1;
        h[1..n].copy_from_slice(&t[..n - 1]);
        g[2..=n].copy_from_slice(&t[n - 1..]);
        (h, g)
    }

    fn pack(&self, h: &[u64], g: &[u64]) -> Code {
        let n = self.level;
        h[1..n].iter().chain(&g[2..=n]).zip(&self.place).map(|(t, w)| t * w).sum()
    }

    pub fn mul(&self, x: Code, y: Code) -> Code {
        let f = Fp(self.p());
        let (h1, g1) = self.halves(x);
        let (h2, g2) = self.halves(y);
        let h = kernel::mul(&f, &h1, &kernel::compose(&f, &h2, &g1));
        let g = kernel::compose(&f, &g2, &g1);
        self.pack(&h, &g)
    }

    pub fn inv(&self, x: Code) -> Code {
        let f = Fp(self.p());
        let (h, g) = self.halves(x);
        let gi = kernel::comp_inverse(&f, &g);
        let hi = kernel::compose(&f, &kernel::inv_unit(&f, &h), &gi);
        self.pack(&hi, &gi)
    }

    /// `x^{-1} y^{-1} x y`.
    pub fn commutator(&self, x: Code, y: Code) -> Code {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    /// `c^{-1} x c`.
    pub fn conjugate(&self, x: Code, c: Code) -> Code {
        self.mul(self.mul(self.inv(c), x), c)
    }

    /// Tuple positions left free by the image of `H^m ⋊ N^k`: `a_m..a_{n-1}` and
    /// `b_{k+1}..b_n`.
    fn free_positions(&self, m: usize, k: usize) -> Vec<usize> {
        let n = self.level;
        let a = (m.max(1)..n).map(|i| i - 1);
        let b = (k.max(1) + 1..=n).map(|j| n - 1 + j - 2);
        a.chain(b).collect()
    }

    /// Order of the image of `H^m ⋊ N^k`, by counting free tuple positions.
    pub fn image_order(&self, m: usize, k: usize) -> u64 {
        self.p().pow(self.free_positions(m, k).len() as u32)
    }

    /// The image of `H^m ⋊ N^k` (`m, k >= 1`), generated by the elements with a
    /// single free coordinate equal to 1.
    pub fn image_of(&self, m: usize, k: usize) -> Result<Subgroup> {
        let gens: Vec<Code> = self.free_positions(m, k).iter().map(|&pos| self.place[pos]).collect();
        let sub = self.closure(&gens)?;
        let expected = self.image_order(m, k);
        let free: HashSet<usize> = self.free_positions(m, k).into_iter().collect();
        let inside = sub.elements.iter().all(|&c| {
            self.tuple(c).iter().enumerate().all(|(pos, &d)| d == 0 || free.contains(&pos))
        });
        if sub.order() != expected || !inside {
            return Err(Error::Structural(format!(
                "image of H^{m} ⋊ N^{k} at level {}: closure has order {}, expected {expected}",
                self.level,
                sub.order()
            )));
        }
        Ok(sub)
    }

    /// The whole quotient.
    pub fn full(&self) -> Result<Subgroup> {
        self.check_cap(self.order)?;
        self.image_of(1, 1)
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup { group: self.clone(), elements: vec![0], generators: Vec::new() }
    }

    /// Smallest subgroup containing `gens`, by breadth-first search on right
    /// multiplication. Generators equal to the identity are dropped.
    pub fn closure(&self, gens: &[Code]) -> Result<Subgroup> {
        let mut builder = Builder::new(self);
        for &s in gens {
            builder.extend(s)?;
        }
        builder.finish()
    }

    /// Subgroup handle for a set already known to be a subgroup; generators are
    /// picked greedily in ascending order and the result is checked against `elements`.
    pub fn from_elements(&self, elements: &[Code]) -> Result<Subgroup> {
        let target: HashSet<Code> = elements.iter().copied().collect();
        let mut sorted: Vec<Code> = target.iter().copied().collect();
        sorted.sort_unstable();
        let mut builder = Builder::new(self);
        for c in sorted {
            if !builder.seen.contains(&c) {
                builder.extend(c)?;
            }
        }
        let sub = builder.finish()?;
        if sub.order() as usize != target.len() {
            return Err(Error::Structural(format!(
                "element set of size {} is not a subgroup (it generates {} elements)",
                target.len(),
                sub.order()
            )));
        }
        Ok(sub)
    }
}

struct Builder<'a> {
    group: &'a QuotientGroup,
    seen: HashSet<Code>,
    order: Vec<Code>,
    gens: Vec<Code>,
}

impl<'a> Builder<'a> {
    fn new(group: &'a QuotientGroup) -> Self {
        Builder { group, seen: HashSet::from([0]), order: vec![0], gens: Vec::new() }
    }

    /// Adds `s` to the generators and restores closure: old elements only need
    /// multiplying by `s`, new elements by every generator.
    fn extend(&mut self, s: Code) -> Result<()> {
        if s == 0 || self.gens.contains(&s) {
            return Ok(());
        }
        self.gens.push(s);
        let mut queue: Vec<Code> = Vec::new();
        for &x in &self.order {
            let y = self.group.mul(x, s);
            if self.seen.insert(y) {
                queue.push(y);
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &t in &self.gens {
                let y = self.group.mul(x, t);
                if self.seen.insert(y) {
                    queue.push(y);
                }
            }
            if self.seen.len() as u64 > self.group.cap {
                return Err(Error::TooLarge { requested: self.seen.len() as u128, cap: self.group.cap });
            }
        }
        self.order.extend(queue);
        Ok(())
    }

    fn finish(self) -> Result<Subgroup> {
        let mut elements = self.order;
        elements.sort_unstable();
        let sub = Subgroup { group: self.group.clone(), elements, generators: self.gens };
        sub.verify()?;
        Ok(sub)
    }
}

/// A subgroup of a [`QuotientGroup`]: sorted element codes plus generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    group: QuotientGroup,
    elements: Vec<Code>,
    generators: Vec<Code>,
}

impl Subgroup {
    pub fn group(&self) -> &QuotientGroup {
        &self.group
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    /// Ascending codes.
    pub fn elements(&self) -> &[Code] {
        &self.elements
    }

    pub fn generators(&self) -> &[Code] {
        &self.generators
    }

    pub fn contains(&self, c: Code) -> bool {
        self.elements.binary_search(&c).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.group == other.group && self.elements.iter().all(|&c| other.contains(c))
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// Identity present and every element times every generator stays inside.
    /// In a finite group this makes the set the subgroup its generators span.
    pub fn verify(&self) -> Result<()> {
        if !self.contains(0) {
            return Err(Error::Structural("subgroup lacks the identity".into()));
        }
        for &g in &self.generators {
            if let Some(&x) = self.elements.iter().find(|&&x| !self.contains(self.group.mul(x, g))) {
                return Err(Error::Structural(format!("not closed: {x} * {g} escapes")));
            }
        }
        Ok(())
    }

    /// Whether conjugation by each of `by` maps the generators back inside.
    pub fn is_normalized_by(&self, by: &[Code]) -> bool {
        by.iter().all(|&c| self.generators.iter().all(|&s| self.contains(self.group.conjugate(s, c))))
    }
}

/// `[A, B]`: the normal closure in `<A, B>` of the commutators of generators.
pub fn commutator_subgroup(a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
    if a.group != b.group {
        return precondition("subgroups live in different quotients");
    }
    commutator_of_gens(&a.group, &a.generators, &b.generators)
}

fn commutator_of_gens(group: &QuotientGroup, a: &[Code], b: &[Code]) -> Result<Subgroup> {
    let mut builder = Builder::new(group);
    for &x in a {
        for &y in b {
            builder.extend(group.commutator(x, y))?;
        }
    }
    let conjugators: Vec<Code> = a.iter().chain(b).copied().collect();
    let mut done = 0;
    // every generator, including ones added along the way, gets conjugated once
    while done < builder.gens.len() {
        let s = builder.gens[done];
        done += 1;
        for &c in &conjugators {
            let t = group.conjugate(s, c);
            if !builder.seen.contains(&t) {
                builder.extend(t)?;
            }
        }
    }
    builder.finish()
}

/// `[γ_1 = G, γ_2, ..., γ_depth]` with `γ_{i+1} = [G, γ_i]`.
pub fn lower_central_series(group: &QuotientGroup, depth: usize) -> Result<Vec<Subgroup>> {
    let mut series = vec![group.full()?];
    series.extend(lcs_tail(group, depth)?);
    Ok(series)
}

/// `γ_2, ..., γ_depth`, using only generators of `G` so the whole quotient is
/// never enumerated.
fn lcs_tail(group: &QuotientGroup, depth: usize) -> Result<Vec<Subgroup>> {
    if depth < 2 {
        return precondition(format!("depth must be at least 2, got {depth}"));
    }
    let g: Vec<Code> = group.free_positions(1, 1).iter().map(|&pos| group.place[pos]).collect();
    let mut series: Vec<Subgroup> = Vec::new();
    while series.len() + 1 < depth {
        let prev = series.last().map_or(g.as_slice(), |s| s.generators());
        let next = commutator_of_gens(group, &g, prev)?;
        series.push(next);
    }
    Ok(series)
}

/// `τ_i = i + floor((i - 2)/(p - 1))` for `i >= 2`.
pub fn tau(i: usize, p: u64) -> usize {
    assert!(i >= 2, "τ is defined from i = 2");
    i + (i - 2) / (p as usize - 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcsRow {
    pub i: usize,
    pub tau: usize,
    pub brute_order: u64,
    pub formula_order: u64,
    pub pass: bool,
}

/// Compares each brute-force `γ_i` (`2 <= i <= depth`) with the image of
/// `H^{τ_i} ⋊ N^{τ_i + 1}`.
pub fn verify_lcs_formula(group: &QuotientGroup, depth: usize) -> Result<Vec<LcsRow>> {
    if group.p() == 2 {
        return Err(Error::UnsupportedPrime(2));
    }
    let gammas = lcs_tail(group, depth)?;
    let mut rows = Vec::new();
    for (idx, gamma) in gammas.iter().enumerate() {
        let i = idx + 2;
        let t = tau(i, group.p());
        let image = group.image_of(t, t + 1)?;
        rows.push(LcsRow {
            i,
            tau: t,
            brute_order: gamma.order(),
            formula_order: image.order(),
            pass: gamma.elements == image.elements,
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WidthRow {
    pub i: usize,
    pub gamma_order: u64,
    /// `log_p |γ_i / γ_{i+1}|`
    pub width: u32,
    /// Truncation rather than the group decides this value.
    pub boundary: bool,
    /// Exceeds the bound 4.
    pub over_bound: bool,
}

/// Widths `log_p |γ_i/γ_{i+1}|` for `i = 1..depth-1`.
///
/// A row is boundary-flagged when `τ_{i+1} + 1` exceeds the level. For `p = 2`,
/// where `τ` does not apply, it is flagged when `γ_{i+1}` is already trivial.
pub fn width_report(group: &QuotientGroup, depth: usize) -> Result<Vec<WidthRow>> {
    let tail = lcs_tail(group, depth)?;
    let p = group.p();
    let orders: Vec<u64> = std::iter::once(group.order()).chain(tail.iter().map(Subgroup::order)).collect();
    let rows = orders
        .windows(2)
        .enumerate()
        .map(|(idx, pair)| {
            let i = idx + 1;
            let width = log_p(pair[0] / pair[1], p);
            let boundary = if p == 2 {
                pair[1] == 1
            } else {
                tau(i + 1, p) + 1 > group.level()
            };
            WidthRow { i, gamma_order: pair[0], width, boundary, over_bound: width > 4 }
        })
        .collect();
    Ok(rows)
}

fn log_p(mut x: u64, p: u64) -> u32 {
    let mut k = 0;
    while x > 1 {
        debug_assert_eq!(x % p, 0);
        x /= p;
        k += 1;
    }
    k
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerationReport {
    pub generates: bool,
    pub closure_order: u64,
    pub group_order: u64,
}

/// Whether the candidates generate the whole quotient.
pub fn generation_check(group: &QuotientGroup, candidates: &[RiordanElem]) -> Result<GenerationReport> {
    let codes = candidates.iter().map(|a| group.code_of(a)).collect::<Result<Vec<_>>>()?;
    let closure = group.closure(&codes)?;
    Ok(GenerationReport {
        generates: closure.order() == group.order(),
        closure_order: closure.order(),
        group_order: group.order(),
    })
}

/// First pair `(1, g1), (1, g2)` in ascending code order whose closure is the
/// whole image of `{1} ⋊ N`.
pub fn nottingham_generating_pair(group: &QuotientGroup) -> Result<Option<(RiordanElem, RiordanElem)>> {
    let target = group.image_of(group.level(), 1)?;
    let candidates: Vec<Code> = target.elements().iter().copied().filter(|&c| c != 0).collect();
    for (k, &x) in candidates.iter().enumerate() {
        for &y in &candidates[k + 1..] {
            if group.closure(&[x, y])?.order() == target.order() {
                return Ok(Some((group.lift(x), group.lift(y))));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HmReport {
    pub closure_order: u64,
    pub image_order: u64,
    pub equal: bool,
}

/// Closure of `{(twist(1 + x, g), x)}` over `g = x + b_m x^m + ... + b_{M-1} x^{M-1}`
/// against the image of `H^m` in the level-`M` quotient.
pub fn hm_generation_check(group: &QuotientGroup, m: usize) -> Result<HmReport> {
    let (p, level) = (group.p(), group.level());
    if !(2 <= m && m < level) {
        return precondition(format!("need 2 <= m < M, got m = {m}, M = {level}"));
    }
    let ring = group.ring();
    let one_plus_x = UnitSeries::new(TruncSeries::from_i64_padded(ring, level, &[1, 1]))?;
    let x = NottSeries::identity(ring, level)?;
    let free = level - m;
    group.check_cap(p.pow(free as u32))?;
    let mut gens = Vec::new();
    for idx in 0..p.pow(free as u32) {
        let mut coeffs = vec![0u64; level + 1];
        coeffs[1] = 1;
        let mut rest = idx;
        for c in coeffs[m..level].iter_mut() {
            *c = rest % p;
            rest /= p;
        }
        let g = NottSeries::new(TruncSeries::from_residues(group.p, coeffs))?;
        let t = one_plus_x.twist(&g)?;
        gens.push(group.code_of(&RiordanElem::new(t, x.clone())?)?);
    }
    let closure = group.closure(&gens)?;
    let image = group.image_of(m, level)?;
    Ok(HmReport {
        closure_order: closure.order(),
        image_order: image.order(),
        equal: closure.elements == image.elements,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerReport {
    pub pairs_checked: u64,
    pub failures: u64,
    pub exhaustive: bool,
    pub surjective: bool,
}

impl TowerReport {
    pub fn pass(&self) -> bool {
        self.failures == 0 && self.surjective
    }
}

/// Projection from the level `n + 1` quotient to level `n` (tuple truncation).
pub fn project(upper: &QuotientGroup, lower: &QuotientGroup, code: Code) -> Code {
    let t = upper.tuple(code);
    let n = upper.level() - 1;
    let a = &t[..n - 1];
    let b = &t[n..2 * n - 1];
    let lowered: Vec<u64> = a.iter().chain(b).copied().collect();
    lower.encode(&lowered).expect("truncated tuple fits")
}

/// Checks that projection from level `n + 1` onto `lower` (level `n`) is a
/// surjective homomorphism: every pair when `samples` is `None`, else that many
/// random pairs.
pub fn tower_consistency(lower: &QuotientGroup, samples: Option<u64>, seed: u64) -> Result<TowerReport> {
    let level = lower.level();
    let upper = QuotientGroup::with_cap(lower.p(), level + 1, lower.cap())?;
    let phi = |c| project(&upper, lower, c);
    let check = |x: Code, y: Code| phi(upper.mul(x, y)) == lower.mul(phi(x), phi(y));
    let mut failures = 0;
    let (pairs_checked, surjective) = match samples {
        None => {
            let pairs = (upper.order() as u128) * (upper.order() as u128);
            if pairs > upper.cap() as u128 {
                return Err(Error::TooLarge { requested: pairs, cap: upper.cap() });
            }
            let mut hit = vec![false; lower.order() as usize];
            for x in 0..upper.order() {
                hit[phi(x) as usize] = true;
                for y in 0..upper.order() {
                    failures += u64::from(!check(x, y));
                }
            }
            (upper.order() * upper.order(), hit.iter().all(|&h| h))
        }
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..n {
                let x = rng.gen_range(0..upper.order());
                let y = rng.gen_range(0..upper.order());
                failures += u64::from(!check(x, y));
            }
            // zero-padding the tuple is a section of the projection
            let surjective = (0..n).all(|_| {
                let c = rng.gen_range(0..lower.order());
                let mut t = lower.tuple(c);
                t.insert(level - 1, 0);
                t.push(0);
                phi(upper.encode(&t).expect("padded tuple fits")) == c
            });
            (n, surjective)
        }
    };
    Ok(TowerReport { pairs_checked, failures, exhaustive: samples.is_none(), surjective })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaReport {
    pub commutator_order: u64,
    pub target_order: u64,
    pub contained: bool,
}

/// `[G^σ_i, G^σ_j] ⊆ G^σ_{i+j}` in the level-`M` quotient, where
/// `G^σ_n = H^{σ(n)} ⋊ N^n`.
pub fn sigma_filtration_check(group: &QuotientGroup, sigma: &Filtration, i: usize, j: usize) -> Result<SigmaReport> {
    let level = group.level();
    if i == 0 || j == 0 || i + j >= level {
        return precondition(format!("need i, j >= 1 and i + j < M, got i = {i}, j = {j}, M = {level}"));
    }
    sigma.validate(level)?;
    let s = |n: usize| sigma.eval(n).expect("validated range");
    let gi = group.image_of(s(i), i)?;
    let gj = group.image_of(s(j), j)?;
    let comm = commutator_subgroup(&gi, &gj)?;
    let target = group.image_of(s(i + j), i + j)?;
    Ok(SigmaReport {
        commutator_order: comm.order(),
        target_order: target.order(),
        contained: comm.is_subset_of(&target),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitReport {
    pub lhs_order: u64,
    pub rhs_order: u64,
    pub l_order: u64,
    pub equal: bool,
}

/// Both sides of `[H_1 ⋊ G_1, H_2 ⋊ G_2] = L ⋊ [G_1, G_2]` with
/// `H_k = H^{m_k}`, `G_k = N^{n_k}` in the level-`n` quotient.
///
/// The left side comes from the commutator engine. On the right, `L` is the
/// closure of the twists `h_2(g_1) h_2^{-1}` and `h_1(g_2) h_1^{-1}` over all
/// coset representatives, and `[G_1, G_2]` is computed inside `{1} ⋊ N`.
pub fn semidirect_split_check(
    group: &QuotientGroup,
    (m1, n1): (usize, usize),
    (m2, n2): (usize, usize),
) -> Result<SplitReport> {
    let n = group.level();
    let lhs = commutator_subgroup(&group.image_of(m1, n1)?, &group.image_of(m2, n2)?)?;

    let h_part = |m: usize| -> Result<Vec<UnitSeries>> {
        group.image_of(m, n)?.elements().iter().map(|&c| Ok(group.lift(c).h().clone())).collect()
    };
    let g_part = |k: usize| -> Result<Vec<NottSeries>> {
        group.image_of(n, k)?.elements().iter().map(|&c| Ok(group.lift(c).g().clone())).collect()
    };
    let (h1, h2, g1, g2) = (h_part(m1)?, h_part(m2)?, g_part(n1)?, g_part(n2)?);
    let x = NottSeries::identity(group.ring(), n)?;
    let mut twists = Vec::new();
    for (hs, gs) in [(&h2, &g1), (&h1, &g2)] {
        for h in hs {
            for g in gs {
                twists.push(group.code_of(&RiordanElem::new(h.twist(g)?, x.clone())?)?);
            }
        }
    }
    let l = group.closure(&twists)?;
    let gg = commutator_subgroup(&group.image_of(n, n1)?, &group.image_of(n, n2)?)?;
    let mut rhs: Vec<Code> = Vec::with_capacity((l.order() * gg.order()) as usize);
    for &a in l.elements() {
        for &b in gg.elements() {
            rhs.push(group.mul(a, b));
        }
    }
    rhs.sort_unstable();
    rhs.dedup();
    Ok(SplitReport {
        lhs_order: lhs.order(),
        rhs_order: rhs.len() as u64,
        l_order: l.order(),
        equal: lhs.elements == rhs,
    })
}

/// Named subgroup summaries in the CLI report format.
pub fn subgroup_line(name: &str, sub: &Subgroup) -> String {
    format!(
        "level={} p={} subgroup={name} order={} generators={}",
        sub.group.level(),
        sub.group.p(),
        sub.order(),
        sub.generators().len()
    )
}
