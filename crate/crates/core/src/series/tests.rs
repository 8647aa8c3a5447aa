use super::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn z() -> CoeffRing {
    CoeffRing::Integers
}

fn fp(p: u64) -> CoeffRing {
    CoeffRing::prime_field(p).unwrap()
}

fn s(ring: CoeffRing, c: &[i64]) -> TruncSeries {
    TruncSeries::from_i64(ring, c).unwrap()
}

fn ints(series: &TruncSeries) -> Vec<i64> {
    series.coeffs().iter().map(|c| c.try_into().unwrap()).collect()
}

/// Binomial coefficient over ℤ by the multiplicative formula.
fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn prime_validation() {
    assert!(Prime::new(2).is_ok());
    assert!(Prime::new(7919).is_ok());
    assert_eq!(Prime::new(1), Err(Error::NotPrime(1)));
    assert_eq!(Prime::new(9), Err(Error::NotPrime(9)));
    assert_eq!(Prime::new(1 << 31), Err(Error::NotPrime(1 << 31)));
}

#[test]
fn fp_coefficients_are_reduced() {
    let a = s(fp(5), &[7, -1, 10]);
    assert_eq!(ints(&a), vec![2, 4, 0]);
}

#[test]
fn mul_examples() {
    let prod = s(z(), &[1, 1, 0, 0, 0]).mul(&s(z(), &[1, -1, 0, 0, 0])).unwrap();
    assert_eq!(ints(&prod), vec![1, 0, -1, 0, 0]);

    // hand convolution: (1 + x)(1 + x + x^2 + ...) = 1 + 2x + 2x^2 + ...
    let prod = s(z(), &[1, 1, 0, 0, 0, 0]).mul(&s(z(), &[1; 6])).unwrap();
    assert_eq!(ints(&prod), vec![1, 2, 2, 2, 2, 2]);

    let h = s(fp(3), &[1, 2, 0, 1]);
    assert_eq!(h.mul(&TruncSeries::one(fp(3), 3)).unwrap(), h);
}

#[test]
fn mismatched_operands_are_rejected() {
    let a = s(z(), &[1, 1]);
    assert_eq!(
        a.mul(&s(z(), &[1, 1, 1])),
        Err(Error::TruncMismatch { left: 1, right: 2 })
    );
    assert!(matches!(a.mul(&s(fp(3), &[1, 1])), Err(Error::RingMismatch { .. })));
}

#[test]
fn inverse_of_one_plus_x_alternates() {
    let h = UnitSeries::from_i64(z(), &[1, 1, 0, 0, 0, 0, 0]).unwrap();
    assert_eq!(ints(&h.inv()), vec![1, -1, 1, -1, 1, -1, 1]);
    assert_eq!(h.inv().coeff(5).unwrap(), BigInt::from(-1));
    let one = UnitSeries::one(fp(7), 5);
    assert_eq!(one.inv(), one);
}

/// Degree-by-degree exhaustive search: the unique residue at degree k that kills
/// `[x^k] h * c`.
fn brute_force_inverse(h: &TruncSeries, p: u64) -> Vec<i64> {
    let n = h.trunc();
    let hc: Vec<i64> = ints(h);
    let mut c = vec![0i64; n + 1];
    c[0] = 1;
    for k in 1..=n {
        let hits: Vec<i64> = (0..p as i64)
            .filter(|&cand| {
                let mut acc = 0i64;
                for i in 0..=k {
                    let ci = if i == k { cand } else { c[i] };
                    acc += hc[k - i] * ci;
                }
                acc.rem_euclid(p as i64) == 0
            })
            .collect();
        assert_eq!(hits.len(), 1);
        c[k] = hits[0];
    }
    c
}

#[test]
fn inverse_over_f5_matches_search() {
    let h = UnitSeries::from_i64(fp(5), &[1, 0, 0, 2, 0, 0, 0, 0]).unwrap();
    let oracle = brute_force_inverse(&h, 5);
    assert_eq!(oracle, vec![1, 0, 0, 3, 0, 0, 4, 0]);
    assert_eq!(ints(&h.inv()), oracle);
}

#[test]
fn inverse_of_deep_unit_stays_deep() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..8 {
        let h = random::unit_in(fp(5), 12, n, &mut rng);
        let inv = h.inv();
        assert!(inv.in_h(n));
        // degree-n coefficient of the inverse is -a_n
        let an = h.coeff(n).unwrap();
        assert_eq!(inv.coeff(n).unwrap(), fp(5).reduce(&-an));
    }
}

#[test]
fn compose_binomial_substitution() {
    // (1 + x^i)((x + x^{j+1})) = 1 + sum_n C(i, n) x^{nj + i}
    let p = 3;
    let (i, j, trunc) = (3usize, 2usize, 9usize);
    let f = TruncSeries::monomial(fp(p), trunc, i, 1).add(&TruncSeries::one(fp(p), trunc)).unwrap();
    let g = NottSeries::new(
        TruncSeries::monomial(fp(p), trunc, 1, 1)
            .add(&TruncSeries::monomial(fp(p), trunc, j + 1, 1))
            .unwrap(),
    )
    .unwrap();
    let mut oracle = vec![0i64; trunc + 1];
    oracle[0] = 1;
    for n in 0..=i {
        let deg = n * j + i;
        if deg <= trunc {
            oracle[deg] = (oracle[deg] + binomial(i as u64, n as u64) as i64) % p as i64;
        }
    }
    assert_eq!(oracle, vec![1, 0, 0, 1, 0, 0, 0, 0, 0, 1]);
    assert_eq!(ints(&f.compose(&g).unwrap()), oracle);
}

#[test]
fn compose_with_identity_and_bad_inner() {
    let f = s(z(), &[3, -1, 4, 1, -5]);
    let x = NottSeries::identity(z(), 4).unwrap();
    assert_eq!(f.compose(&x).unwrap(), f);
    assert_eq!(f.compose(&s(z(), &[1, 1, 0, 0, 0])), Err(Error::NonzeroConstant));
}

#[test]
fn compose_degree_m_plus_n_minus_one() {
    let ring = fp(5);
    let mut rng = ChaCha8Rng::seed_from_u64(2021);
    for _ in 0..100 {
        let n = rng.gen_range(1..8);
        let m = rng.gen_range(2..8);
        let h = random::unit_in(ring, 20, n, &mut rng);
        let g = random::nott_from(ring, 20, m, &mut rng);
        let hg = h.compose(&g).unwrap();
        let k = m + n - 1;
        let expected = BigInt::from(n) * h.coeff(n).unwrap() * g.coeff(m).unwrap() + h.coeff(k).unwrap();
        assert_eq!(hg.coeff(k).unwrap(), ring.reduce(&expected));
    }
}

#[test]
fn catalan_compositional_inverse() {
    let g = NottSeries::from_i64(z(), &[0, 1, 1, 0, 0, 0]).unwrap();
    // (-1)^{k-1} Catalan(k-1)
    let oracle: Vec<i64> = (0..=5u64)
        .map(|k| match k {
            0 => 0,
            k => {
                let c = binomial(2 * (k - 1), k - 1) / k;
                if k % 2 == 1 { c as i64 } else { -(c as i64) }
            }
        })
        .collect();
    assert_eq!(oracle, vec![0, 1, -1, 2, -5, 14]);
    assert_eq!(ints(&g.comp_inverse()), oracle);
    let x = NottSeries::identity(z(), 5).unwrap();
    assert_eq!(x.comp_inverse(), x);
}

#[test]
fn comp_inverse_is_two_sided() {
    let ring = fp(3);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let x = NottSeries::identity(ring, 16).unwrap();
    for _ in 0..100 {
        let g = random::nott_from(ring, 16, 2, &mut rng);
        let inv = g.comp_inverse();
        assert_eq!(inv.compose(&g).unwrap(), x);
        assert_eq!(g.compose(&inv).unwrap(), x);
    }
}

#[test]
fn twist_examples() {
    let ring = fp(5);
    let h = UnitSeries::from_i64(ring, &[1, 0, 1, 0, 0, 0, 0, 0, 0]).unwrap();
    let x = NottSeries::identity(ring, 8).unwrap();
    assert_eq!(h.twist(&x).unwrap(), UnitSeries::one(ring, 8));

    let g = NottSeries::from_i64(ring, &[0, 1, 0, 1, 0, 0, 0, 0, 0]).unwrap();
    let t = h.twist(&g).unwrap();
    // n = 2, m = 3: degree 4 carries n a_n b_m = 2
    assert_eq!(t.coeff(4).unwrap(), BigInt::from(2));
    assert!(t.in_h(4));

    // n = p kills the leading twist coefficient
    for p in [3u64, 5, 7] {
        let ring = fp(p);
        let m = 3;
        let trunc = m + p as usize + 2;
        let h = UnitSeries::new(
            TruncSeries::one(ring, trunc).add(&TruncSeries::monomial(ring, trunc, p as usize, 1)).unwrap(),
        )
        .unwrap();
        let g = NottSeries::new(
            TruncSeries::monomial(ring, trunc, 1, 1)
                .add(&TruncSeries::monomial(ring, trunc, m, 1))
                .unwrap(),
        )
        .unwrap();
        let t = h.twist(&g).unwrap();
        assert_eq!(t.coeff(m + p as usize - 1).unwrap(), BigInt::from(0));
    }
}

#[test]
fn coeff_access() {
    let f = s(z(), &[1, 0, 3]);
    assert_eq!(f.coeff(2).unwrap(), BigInt::from(3));
    assert_eq!(f.coeff(3), Err(Error::OutOfRange { index: 3, trunc: 2 }));
    let h = UnitSeries::from_i64(fp(3), &[1, 2, 2]).unwrap();
    assert_eq!(h.coeff(0).unwrap(), BigInt::from(1));
}

#[test]
fn constructors_enforce_invariants() {
    assert_eq!(UnitSeries::from_i64(z(), &[2, 1]), Err(Error::NotUnit));
    assert_eq!(UnitSeries::from_i64(z(), &[]), Err(Error::Empty));
    assert_eq!(NottSeries::from_i64(z(), &[0, 2, 1]), Err(Error::NotNottingham));
    assert_eq!(NottSeries::from_i64(z(), &[0]), Err(Error::NotNottingham));
    assert_eq!(NottSeries::from_i64(z(), &[]), Err(Error::Empty));
    assert!(NottSeries::identity(z(), 0).is_err());
}

#[test]
fn literal_round_trip_and_errors() {
    let lit = "ring=Z; trunc=3; coeffs=1,-2,0,7";
    let f: TruncSeries = lit.parse().unwrap();
    assert_eq!(f.to_string(), lit);
    let g: TruncSeries = "ring=Fp:5; trunc=2; coeffs=1,6,10".parse().unwrap();
    assert_eq!(g.to_string(), "ring=Fp:5; trunc=2; coeffs=1,1,0");
    assert!("ring=Fp:5; trunc=2; coeffs=1,-1,0".parse::<TruncSeries>().is_err());
    assert!("ring=Fp:6; trunc=1; coeffs=1,0".parse::<TruncSeries>().is_err());
    assert!("ring=Z; trunc=3; coeffs=1,0".parse::<TruncSeries>().is_err());
    assert!("ring=Z; coeffs=1,0".parse::<TruncSeries>().is_err());
    assert!("ring=Z; trunc=1; coeffs=1,0x1".parse::<TruncSeries>().is_err());
}

#[test]
fn generation_identities_over_z() {
    // 1 + (a+1)x = (1 + x)(1 + a x - a x^2 + a x^3 - ...), and
    // 1 - a x = (1 + a x + a^2 x^2 + ...)^{-1}
    let n = 12;
    for a in [-3i64, -1, 0, 2, 5] {
        let lhs = TruncSeries::from_i64_padded(z(), n, &[1, a + 1]);
        let tail: Vec<i64> = (0..=n)
            .map(|k| match k {
                0 => 1,
                k if k % 2 == 1 => a,
                _ => -a,
            })
            .collect();
        let rhs = TruncSeries::from_i64_padded(z(), n, &[1, 1])
            .mul(&TruncSeries::from_i64(z(), &tail).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);

        let geometric: Vec<i64> = (0..=n as u32).map(|k| a.pow(k)).collect();
        let inv = UnitSeries::from_i64(z(), &geometric).unwrap().inv();
        assert_eq!(*inv.as_series(), TruncSeries::from_i64_padded(z(), n, &[1, -a]));
    }
}

fn ring_strategy() -> impl Strategy<Value = CoeffRing> {
    prop_oneof![Just(fp(2)), Just(fp(3)), Just(fp(5))]
}

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(ring in ring_strategy(), trunc in 0usize..=24, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let a = random::series(ring, trunc, &mut rng);
        let b = random::series(ring, trunc, &mut rng);
        let c = random::series(ring, trunc, &mut rng);
        prop_assert_eq!(a.mul(&b)?.mul(&c)?, a.mul(&b.mul(&c)?)?);
        prop_assert_eq!(a.mul(&b.add(&c)?)?, a.mul(&b)?.add(&a.mul(&c)?)?);
        prop_assert_eq!(a.mul(&b)?, b.mul(&a)?);
        prop_assert!(a.add(&a.neg())?.is_zero());
    }

    #[test]
    fn inverse_is_involution(ring in ring_strategy(), trunc in 0usize..=24, seed in any::<u64>()) {
        let h = random::unit_in(ring, trunc, 1, &mut seeded(seed));
        prop_assert_eq!(h.inv().inv(), h.clone());
        prop_assert_eq!(h.mul(&h.inv())?, UnitSeries::one(ring, trunc));
    }

    #[test]
    fn compose_is_associative(ring in ring_strategy(), trunc in 1usize..=16, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let f = random::series(ring, trunc, &mut rng);
        let g = random::nott_from(ring, trunc, 2, &mut rng);
        let k = random::nott_from(ring, trunc, 2, &mut rng);
        let lhs = f.compose(&g)?.compose(&k)?;
        let rhs = f.compose(g.compose(&k)?.as_series())?;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn truncation_commutes(ring in ring_strategy(), trunc in 2usize..=16, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let m = rng.gen_range(1..=trunc);
        let a = random::series(ring, trunc, &mut rng);
        let h = random::unit_in(ring, trunc, 1, &mut rng);
        let g = random::nott_from(ring, trunc, 2, &mut rng);
        prop_assert_eq!(a.mul(&h)?.project(m)?, a.project(m)?.mul(&h.as_series().project(m)?)?);
        prop_assert_eq!(h.inv().project(m)?, h.project(m)?.inv());
        prop_assert_eq!(a.compose(&g)?.project(m)?, a.project(m)?.compose(&g.as_series().project(m)?)?);
        prop_assert_eq!(g.comp_inverse().project(m)?, g.project(m)?.comp_inverse());
    }
}

#[test]
fn compose_low_degrees_are_untouched() {
    for p in [3u64, 5] {
        let ring = fp(p);
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        for _ in 0..100 {
            let n = rng.gen_range(1..8);
            let m = rng.gen_range(2..8);
            let h = random::unit_in(ring, 20, n, &mut rng);
            let g = random::nott_from(ring, 20, m, &mut rng);
            let hg = h.compose(&g).unwrap();
            for k in n..m + n - 1 {
                assert_eq!(hg.coeff(k).unwrap(), h.coeff(k).unwrap());
            }
            // the twist starts at degree m + n - 1 with coefficient n a_n b_m
            let t = h.twist(&g).unwrap();
            assert!(t.in_h(m + n - 1));
            let lead = BigInt::from(n) * h.coeff(n).unwrap() * g.coeff(m).unwrap();
            assert_eq!(t.coeff(m + n - 1).unwrap(), ring.reduce(&lead));
            assert_eq!(t.in_h(m + n), ring.reduce(&lead) == BigInt::from(0));
        }
    }
}
