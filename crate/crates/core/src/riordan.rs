//! Riordan pairs `(h, g)` with the semidirect law
//! `(h1, g1)(h2, g2) = (h1 * h2(g1), g2(g1))`, the congruence subgroups
//! `R^{m,n} = H^m ⋊ N^n`, and the lower-triangular arrays `a_ij = [x^i] h g^j`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{precondition, Error, Result};
use crate::series::{random, CoeffRing, NottSeries, TruncSeries, UnitSeries};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RiordanElem {
    h: UnitSeries,
    g: NottSeries,
}

impl RiordanElem {
    pub fn new(h: UnitSeries, g: NottSeries) -> Result<Self> {
        if h.ring() != g.ring() {
            return Err(Error::RingMismatch { left: h.ring(), right: g.ring() });
        }
        if h.trunc() != g.trunc() {
            return Err(Error::TruncMismatch { left: h.trunc(), right: g.trunc() });
        }
        Ok(RiordanElem { h, g })
    }

    /// `(1, x)`.
    pub fn identity(ring: CoeffRing, trunc: usize) -> Result<Self> {
        Ok(RiordanElem { h: UnitSeries::one(ring, trunc), g: NottSeries::identity(ring, trunc)? })
    }

    /// Both halves from plain coefficient lists.
    pub fn from_i64(ring: CoeffRing, h: &[i64], g: &[i64]) -> Result<Self> {
        Self::new(UnitSeries::from_i64(ring, h)?, NottSeries::from_i64(ring, g)?)
    }

    /// Random element of `R^{m,n}`.
    pub fn random_in<R: Rng + ?Sized>(
        ring: CoeffRing,
        trunc: usize,
        m: usize,
        n: usize,
        rng: &mut R,
    ) -> Self {
        let h = random::unit_in(ring, trunc, m, rng);
        let g = random::nott_from(ring, trunc, n + 1, rng);
        RiordanElem { h, g }
    }

    #[inline]
    pub fn h(&self) -> &UnitSeries {
        &self.h
    }

    #[inline]
    pub fn g(&self) -> &NottSeries {
        &self.g
    }

    pub fn ring(&self) -> CoeffRing {
        self.h.ring()
    }

    pub fn trunc(&self) -> usize {
        self.h.trunc()
    }

    pub fn is_identity(&self) -> bool {
        self.h.order().is_none() && self.g.order().is_none()
    }

    /// The Nottingham half composes in the order `g2(g1)`: substitution `h -> h(g)`
    /// reverses products, and this is the order that makes the law associative and
    /// `A(h, g)` multiplicative.
    pub fn rmul(&self, other: &RiordanElem) -> Result<RiordanElem> {
        let h = self.h.mul(&other.h.compose(&self.g)?)?;
        let g = other.g.compose(&self.g)?;
        Ok(RiordanElem { h, g })
    }

    /// `(h^{-1}(ḡ), ḡ)` with `ḡ` the compositional inverse of `g`.
    pub fn rinv(&self) -> RiordanElem {
        let g = self.g.comp_inverse();
        let h = self.h.inv().compose(&g).expect("same ring and trunc");
        RiordanElem { h, g }
    }

    pub fn pow(&self, k: usize) -> RiordanElem {
        let mut acc = RiordanElem::identity(self.ring(), self.trunc()).expect("trunc >= 1");
        for _ in 0..k {
            acc = acc.rmul(self).expect("same ring and trunc");
        }
        acc
    }

    /// `a^{-1} b^{-1} a b`.
    pub fn commutator(&self, other: &RiordanElem) -> Result<RiordanElem> {
        self.rinv().rmul(&other.rinv())?.rmul(self)?.rmul(other)
    }

    pub fn project(&self, m: usize) -> Result<RiordanElem> {
        Ok(RiordanElem { h: self.h.project(m)?, g: self.g.project(m)? })
    }

    /// Membership in `R^{m,n} = H^m ⋊ N^n`, read off the leading coefficients.
    pub fn in_subgroup(&self, m: usize, n: usize) -> bool {
        self.h.in_h(m) && self.g.in_n(n)
    }

    /// Membership in `R^n = H^n ⋊ N^n`. The same answer comes from the band test
    /// [`RiordanMatrix::band_is_zero`] on the array of size `n + 1`.
    pub fn band_membership(&self, n: usize) -> Result<bool> {
        if n > self.trunc() {
            return Err(Error::OutOfRange { index: n, trunc: self.trunc() });
        }
        Ok(self.in_subgroup(n, n))
    }

    /// The `m × m` corner of `A(h, g)`.
    pub fn to_matrix(&self, m: usize) -> Result<RiordanMatrix> {
        if m == 0 || m - 1 > self.trunc() {
            return Err(Error::OutOfRange { index: m.saturating_sub(1), trunc: self.trunc() });
        }
        let ring = self.ring();
        let mut entries = vec![vec![BigInt::zero(); m]; m];
        let mut column = self.h.as_series().clone();
        for j in 0..m {
            for (i, row) in entries.iter_mut().enumerate().skip(j) {
                row[j] = column.coeff(i)?;
            }
            column = column.mul(self.g.as_series())?;
        }
        Ok(RiordanMatrix { ring, entries })
    }
}

/// Whether `outer^{-1} inner outer` stays in `R^{m1,n1}`, for `outer ∈ R^{m2,n2}`
/// and `inner ∈ R^{m1,n1}`. Under `m2 + n1 >= m1 >= m2` and `n1 >= n2` the answer
/// is always yes.
pub fn conj_in_subgroup(
    outer: &RiordanElem,
    inner: &RiordanElem,
    (m1, n1): (usize, usize),
    (m2, n2): (usize, usize),
) -> Result<bool> {
    if !(m2 + n1 >= m1 && m1 >= m2 && n1 >= n2) {
        return precondition(format!(
            "need m2 + n1 >= m1 >= m2 and n1 >= n2, got (m1,n1,m2,n2) = ({m1},{n1},{m2},{n2})"
        ));
    }
    if !outer.in_subgroup(m2, n2) {
        return precondition(format!("outer element is not in R^{{{m2},{n2}}}"));
    }
    if !inner.in_subgroup(m1, n1) {
        return precondition(format!("inner element is not in R^{{{m1},{n1}}}"));
    }
    Ok(outer.rinv().rmul(inner)?.rmul(outer)?.in_subgroup(m1, n1))
}

impl fmt::Display for RiordanElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "riordan")?;
        writeln!(f, "{}", self.h)?;
        write!(f, "{}", self.g)
    }
}

impl FromStr for RiordanElem {
    type Err = Error;

    /// A `riordan` header line followed by the series lines for `h` and `g`.
    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        match lines.next() {
            Some("riordan") => {}
            other => {
                return Err(Error::Literal(format!(
                    "expected header `riordan`, got `{}`",
                    other.unwrap_or("")
                )))
            }
        }
        let mut next = |what: &str| {
            lines.next().ok_or_else(|| Error::Literal(format!("missing {what} line")))
        };
        let h: TruncSeries = next("h")?.parse()?;
        let g: TruncSeries = next("g")?.parse()?;
        if let Some(extra) = lines.next() {
            return Err(Error::Literal(format!("unexpected trailing line `{extra}`")));
        }
        RiordanElem::new(UnitSeries::new(h)?, NottSeries::new(g)?)
    }
}

/// A finite corner of a Riordan array, 0-indexed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiordanMatrix {
    ring: CoeffRing,
    entries: Vec<Vec<BigInt>>,
}

impl RiordanMatrix {
    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    pub fn mul(&self, other: &RiordanMatrix) -> Result<RiordanMatrix> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch { left: self.ring, right: other.ring });
        }
        if self.size() != other.size() {
            return Err(Error::TruncMismatch { left: self.size(), right: other.size() });
        }
        let m = self.size();
        let mut entries = vec![vec![BigInt::zero(); m]; m];
        // both factors are lower triangular
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, out) in row.iter_mut().enumerate().take(i + 1) {
                let mut acc = BigInt::zero();
                for k in j..=i {
                    acc += &self.entries[i][k] * &other.entries[k][j];
                }
                *out = self.ring.reduce(&acc);
            }
        }
        Ok(RiordanMatrix { ring: self.ring, entries })
    }

    /// The leading `m × m` corner.
    pub fn truncate(&self, m: usize) -> Result<RiordanMatrix> {
        if m == 0 || m > self.size() {
            return Err(Error::OutOfRange { index: m, trunc: self.size() });
        }
        let entries = self.entries[..m].iter().map(|row| row[..m].to_vec()).collect();
        Ok(RiordanMatrix { ring: self.ring, entries })
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, c)| if i == j { c.is_one() } else { c.is_zero() })
        })
    }

    /// Zero band below the diagonal: `a_ij = 0` whenever `0 < i - j < n`.
    /// On the array of size `n + 1` this holds exactly for elements of `R^n`.
    pub fn band_is_zero(&self, n: usize) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().take(i).enumerate().all(|(j, c)| i - j >= n || c.is_zero()))
    }

    /// One row per line, the full square with zeros above the diagonal.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> CoeffRing {
        CoeffRing::prime_field(p).unwrap()
    }

    fn pascal(p: u64, trunc: usize) -> RiordanElem {
        let ring = fp(p);
        let one_minus_x = UnitSeries::new(TruncSeries::from_i64_padded(ring, trunc, &[1, -1])).unwrap();
        let h = one_minus_x.inv();
        let g = NottSeries::new(TruncSeries::monomial(ring, trunc, 1, 1).mul(&h).unwrap()).unwrap();
        RiordanElem::new(h, g).unwrap()
    }

    #[test]
    fn product_over_f3() {
        let a = RiordanElem::from_i64(fp(3), &[1, 1, 0, 0, 0], &[0, 1, 1, 0, 0]).unwrap();
        let sq = a.rmul(&a).unwrap();
        assert_eq!(sq, RiordanElem::from_i64(fp(3), &[1, 2, 2, 1, 0], &[0, 1, 2, 2, 1]).unwrap());
    }

    #[test]
    fn law_specialisations() {
        let ring = fp(5);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = NottSeries::identity(ring, 8).unwrap();
        let one = UnitSeries::one(ring, 8);
        let h1 = random::unit_in(ring, 8, 1, &mut rng);
        let h2 = random::unit_in(ring, 8, 1, &mut rng);
        let g1 = random::nott_from(ring, 8, 2, &mut rng);

        let a = RiordanElem::new(one.clone(), g1.clone()).unwrap();
        let b = RiordanElem::new(h2.clone(), x.clone()).unwrap();
        assert_eq!(a.rmul(&b).unwrap(), RiordanElem::new(h2.compose(&g1).unwrap(), g1).unwrap());

        let c = RiordanElem::new(h1.clone(), x.clone()).unwrap();
        assert_eq!(c.rmul(&b).unwrap(), RiordanElem::new(h1.mul(&h2).unwrap(), x.clone()).unwrap());
        assert_eq!(c.rinv(), RiordanElem::new(h1.inv(), x).unwrap());
    }

    #[test]
    fn inverse_both_sides() {
        let ring = fp(5);
        let e = RiordanElem::identity(ring, 12).unwrap();
        assert_eq!(e.rinv(), e);
        let mut rng = ChaCha8Rng::seed_from_u64(500);
        for _ in 0..500 {
            let a = RiordanElem::random_in(ring, 12, 1, 1, &mut rng);
            assert!(a.rmul(&a.rinv()).unwrap().is_identity());
            assert!(a.rinv().rmul(&a).unwrap().is_identity());
        }
    }

    #[test]
    fn pascal_array_mod_5() {
        let m = 8;
        let mut table = vec![vec![0u64; m]; m];
        for i in 0..m {
            table[i][0] = 1;
            for j in 1..=i {
                table[i][j] = (table[i - 1][j - 1] + table[i - 1][j]) % 5;
            }
        }
        let a = pascal(5, m - 1).to_matrix(m).unwrap();
        for i in 0..m {
            for j in 0..m {
                assert_eq!(*a.entry(i, j), BigInt::from(table[i][j]), "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn identity_array_and_size_errors() {
        let e = RiordanElem::identity(fp(3), 6).unwrap();
        assert!(e.to_matrix(7).unwrap().is_identity());
        assert!(e.to_matrix(8).is_err());
        assert!(e.to_matrix(0).is_err());
    }

    #[test]
    fn matrix_is_a_homomorphism() {
        let ring = fp(3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let a = RiordanElem::random_in(ring, 11, 1, 1, &mut rng);
            let b = RiordanElem::random_in(ring, 11, 1, 1, &mut rng);
            let lhs = a.rmul(&b).unwrap().to_matrix(12).unwrap();
            let rhs = a.to_matrix(12).unwrap().mul(&b.to_matrix(12).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn matrix_over_integers_has_unit_diagonal() {
        let a = RiordanElem::from_i64(CoeffRing::Integers, &[1, -2, 3, 0], &[0, 1, 4, -1]).unwrap();
        let m = a.to_matrix(4).unwrap();
        for i in 0..4 {
            assert!(m.entry(i, i).is_one());
            for j in i + 1..4 {
                assert!(m.entry(i, j).is_zero());
            }
        }
        assert_eq!(*m.entry(2, 1), BigInt::from(2));
    }

    #[test]
    fn band_examples() {
        let ring = fp(3);
        let a = RiordanElem::from_i64(ring, &[1, 0, 1, 0, 0], &[0, 1, 0, 1, 0]).unwrap();
        assert!(a.band_membership(2).unwrap());
        assert!(!a.band_membership(3).unwrap());
        assert!(a.band_membership(5).is_err());
        let e = RiordanElem::identity(ring, 6).unwrap();
        assert!((1..=6).all(|n| e.band_membership(n).unwrap()));
    }

    #[test]
    fn band_test_agrees_with_matrix() {
        let ring = fp(3);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut hits = 0;
        for _ in 0..500 {
            let n = rng.gen_range(1..=6);
            let m = rng.gen_range(1..=n + 1);
            let k = rng.gen_range(1..=n + 1);
            let a = RiordanElem::random_in(ring, 6, m, k, &mut rng);
            let series = a.band_membership(n).unwrap();
            hits += series as usize;
            assert_eq!(series, a.to_matrix(n + 1).unwrap().band_is_zero(n), "{a}");
        }
        assert!(hits > 50);
    }

    #[test]
    fn band_below_the_diagonal_only_reaches_one_level_lower() {
        // Zeros in the region j < i < n alone pin down H^n ⋊ N^{n-1}.
        let ring = fp(3);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..300 {
            let n = rng.gen_range(2..=6);
            let a = RiordanElem::random_in(ring, 6, n - 1 + rng.gen_range(0..2), n - 2 + rng.gen_range(0..3), &mut rng);
            let mat = a.to_matrix(n + 1).unwrap();
            let corner = (0..n).all(|i| (0..i).all(|j| mat.entry(i, j).is_zero()));
            assert_eq!(corner, a.in_subgroup(n, n - 1));
        }
    }

    #[test]
    fn truncating_the_array_matches_smaller_array() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..50 {
            let a = RiordanElem::random_in(fp(5), 9, 1, 1, &mut rng);
            for m in 1..10 {
                assert_eq!(a.to_matrix(10).unwrap().truncate(m).unwrap(), a.to_matrix(m).unwrap());
            }
        }
    }

    #[test]
    fn distinct_elements_give_distinct_arrays() {
        let ring = fp(2);
        let trunc = 3;
        let mut seen = std::collections::HashMap::new();
        for bits in 0u32..1 << (2 * trunc - 1) {
            let h: Vec<i64> = (0..=trunc).map(|k| if k == 0 { 1 } else { ((bits >> (k - 1)) & 1) as i64 }).collect();
            let g: Vec<i64> = (0..=trunc)
                .map(|k| match k {
                    0 => 0,
                    1 => 1,
                    k => ((bits >> (trunc + k - 2)) & 1) as i64,
                })
                .collect();
            let a = RiordanElem::from_i64(ring, &h, &g).unwrap();
            let csv = a.to_matrix(trunc + 1).unwrap().to_csv();
            assert!(seen.insert(csv, a).is_none());
        }
        assert_eq!(seen.len(), 32);
    }

    #[test]
    fn conjugation_stays_inside() {
        let ring = fp(3);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let e = RiordanElem::identity(ring, 10).unwrap();
        for ((m1, n1), (m2, n2)) in [((3, 3), (2, 2)), ((2, 2), (1, 1))] {
            for _ in 0..300 {
                let outer = RiordanElem::random_in(ring, 10, m2, n2, &mut rng);
                let inner = RiordanElem::random_in(ring, 10, m1, n1, &mut rng);
                assert!(conj_in_subgroup(&outer, &inner, (m1, n1), (m2, n2)).unwrap());
                assert!(conj_in_subgroup(&e, &inner, (m1, n1), (m2, n2)).unwrap());
            }
        }
        let a = RiordanElem::random_in(ring, 10, 4, 1, &mut rng);
        assert!(matches!(conj_in_subgroup(&a, &a, (4, 1), (1, 1)), Err(Error::Precondition(_))));
    }

    #[test]
    fn h_part_is_normalised() {
        let ring = fp(5);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let outer = RiordanElem::random_in(ring, 10, 1, 1, &mut rng);
            let h = RiordanElem::new(random::unit_in(ring, 10, 1, &mut rng), NottSeries::identity(ring, 10).unwrap()).unwrap();
            let conj = outer.rinv().rmul(&h).unwrap().rmul(&outer).unwrap();
            assert!(conj.g().order().is_none());
        }
    }

    #[test]
    fn literal_round_trip() {
        let a = RiordanElem::from_i64(CoeffRing::Integers, &[1, -1, 2], &[0, 1, 3]).unwrap();
        let text = a.to_string();
        assert!(text.starts_with("riordan\n"));
        assert_eq!(text.parse::<RiordanElem>().unwrap(), a);
        assert!("ring=Z; trunc=1; coeffs=1,0\nring=Z; trunc=1; coeffs=0,1".parse::<RiordanElem>().is_err());
        assert!("riordan\nring=Z; trunc=1; coeffs=1,0".parse::<RiordanElem>().is_err());
        assert!("riordan\nring=Z; trunc=1; coeffs=1,0\nring=Z; trunc=2; coeffs=0,1,0"
            .parse::<RiordanElem>()
            .is_err());
    }

    #[test]
    fn csv_layout() {
        let csv = pascal(5, 3).to_matrix(4).unwrap().to_csv();
        assert_eq!(csv, "1,0,0,0\n1,1,0,0\n1,2,1,0\n1,3,3,1\n");
    }

    fn ring_strategy() -> impl Strategy<Value = CoeffRing> {
        prop_oneof![Just(fp(2)), Just(fp(3)), Just(fp(5))]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn group_axioms(ring in ring_strategy(), trunc in 1usize..=12, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = RiordanElem::random_in(ring, trunc, 1, 1, &mut rng);
            let b = RiordanElem::random_in(ring, trunc, 1, 1, &mut rng);
            let c = RiordanElem::random_in(ring, trunc, 1, 1, &mut rng);
            let e = RiordanElem::identity(ring, trunc).unwrap();
            prop_assert_eq!(a.rmul(&b).unwrap().rmul(&c).unwrap(), a.rmul(&b.rmul(&c).unwrap()).unwrap());
            prop_assert_eq!(a.rmul(&e).unwrap(), a.clone());
            prop_assert_eq!(e.rmul(&a).unwrap(), a.clone());
            prop_assert!(a.rmul(&a.rinv()).unwrap().is_identity());
        }

        #[test]
        fn projection_is_a_homomorphism(trunc in 2usize..=12, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = rng.gen_range(1..trunc);
            let a = RiordanElem::random_in(fp(3), trunc, 1, 1, &mut rng);
            let b = RiordanElem::random_in(fp(3), trunc, 1, 1, &mut rng);
            prop_assert_eq!(
                a.rmul(&b).unwrap().project(m).unwrap(),
                a.project(m).unwrap().rmul(&b.project(m).unwrap()).unwrap()
            );
        }
    }
}
