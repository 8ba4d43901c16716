use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use totally_padic::capacity::{
    bound_value, capacity_ring_of_integers, check_adelic_set, equidistribution_t, finite_degree_lower_bound,
    transfinite_diameter, AdelicSetSpec, BoundKind, BoundSpec, DiameterMethod,
};
use totally_padic::{LocalFieldSpec, LogSum};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Minimal `sum_{i != j} v(z_i - z_j)` over `n` distinct elements of `O`, by
/// optimizing over how many points land in each of the `q` residue classes.
fn partition_dp(n: usize, q: usize, memo: &mut Vec<Option<u64>>) -> u64 {
    if n <= 1 {
        return 0;
    }
    if let Some(v) = memo[n] {
        return v;
    }
    // knapsack over classes: best[m] = min cost of placing m points in the classes so far
    let inf = u64::MAX / 4;
    let mut best = vec![inf; n + 1];
    best[0] = 0;
    for _ in 0..q {
        let mut next = vec![inf; n + 1];
        for m in 0..=n {
            if best[m] == inf {
                continue;
            }
            for k in 0..=(n - m) {
                if k == n {
                    // all points in one class is never optimal and would recurse on n
                    continue;
                }
                let c = if k <= 1 { 0 } else { (k * (k - 1)) as u64 + partition_dp(k, q, memo) };
                next[m + k] = next[m + k].min(best[m] + c);
            }
        }
        best = next;
    }
    memo[n] = Some(best[n]);
    best[n]
}

fn val_capped(mut x: i64, p: i64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    while x % p == 0 && v < cap {
        x /= p;
        v += 1;
    }
    v
}

/// Exhaustive minimum over `n` distinct residues modulo `p^depth`, with
/// valuations capped at `depth` and the first point fixed at 0.
fn exhaustive_min(p: i64, n: usize, depth: u32) -> u64 {
    let m = p.pow(depth);
    fn go(p: i64, m: i64, n: usize, depth: u32, chosen: &mut Vec<i64>, sum: u64, best: &mut u64) {
        if sum >= *best {
            return;
        }
        if chosen.len() == n {
            *best = sum;
            return;
        }
        let start = chosen.last().map_or(0, |&z| z + 1);
        for z in start..m {
            let add: u64 = chosen.iter().map(|&y| 2 * val_capped(z - y, p, depth) as u64).sum();
            chosen.push(z);
            go(p, m, n, depth, chosen, sum + add, best);
            chosen.pop();
        }
    }
    let mut best = u64::MAX;
    go(p, m, n, depth, &mut vec![0], 0, &mut best);
    best
}

fn t_coefficient(n: usize, place: &LocalFieldSpec) -> BigRational {
    transfinite_diameter(place, n, DiameterMethod::EquidistributionFormula).unwrap().coefficient
}

#[test]
fn recursion_matches_optimal_partition() {
    for q in [2usize, 3, 4, 5, 7, 9] {
        let mut memo = vec![None; 61];
        for n in 1..=60usize {
            let t = equidistribution_t(n as u64, &BigInt::from(q));
            assert_eq!(t, BigInt::from(partition_dp(n, q, &mut memo)), "n = {n}, q = {q}");
        }
    }
}

#[test]
fn brute_force_matches_formula() {
    for (p, f) in [(2u64, 1u32), (3, 1), (2, 2)] {
        let place = LocalFieldSpec::unramified(p, f).unwrap();
        for n in 2..=6usize {
            let formula = t_coefficient(n, &place);
            let brute = transfinite_diameter(&place, n, DiameterMethod::BruteForce { depth: 3 })
                .unwrap()
                .coefficient;
            assert_eq!(formula, brute, "n = {n} at {p}^{f}");
            if f == 1 {
                let pairs = BigInt::from(n * (n - 1));
                let independent = -BigRational::new(BigInt::from(exhaustive_min(p as i64, n, 3)), pairs);
                assert_eq!(formula, independent, "n = {n} at {p}");
            }
        }
    }
}

#[test]
fn minus_log_diameter_grows_along_prime_powers() {
    for (p, f) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1)] {
        let place = LocalFieldSpec::unramified(p, f).unwrap();
        let q = BigInt::from(p).pow(f);
        // d_q = 1: q points in distinct residue classes
        let mut prev = -BigRational::one();
        let mut n = q.clone();
        while n < BigInt::from(1u64 << 18) {
            let k = t_coefficient(n.to_string().parse().unwrap(), &place);
            // log d_n = coefficient * log p; more negative means larger -log d_n
            assert!(-&k > prev, "not increasing at n = {n}");
            prev = -k;
            n *= &q;
        }
        let cap = -capacity_ring_of_integers(&place).coefficient(p);
        assert!(prev < cap);
    }
}

#[test]
fn gap_is_log_n_over_n_minus_one_at_powers_of_two() {
    let place = LocalFieldSpec::unramified(2, 1).unwrap();
    let gamma = capacity_ring_of_integers(&place);
    for k in 1..=20u32 {
        let n = 1usize << k;
        let d = transfinite_diameter(&place, n, DiameterMethod::EquidistributionFormula).unwrap();
        let gap = &d.log_value() - &gamma;
        assert_eq!(gap, LogSum::log_of(rat(1, (n - 1) as i64), n as u64), "n = 2^{k}");
        assert_eq!(gap.coefficient(2), rat(k as i64, (n - 1) as i64));
    }
}

#[test]
fn capacities_are_negative_and_adelic_product_is_one() {
    let places = vec![
        LocalFieldSpec::unramified(2, 1).unwrap(),
        LocalFieldSpec::unramified(3, 2).unwrap(),
        LocalFieldSpec::new(5, 2, 1, 5, BigRational::one()).unwrap(),
        LocalFieldSpec::new(7, 1, 3, 49, rat(1, 2)).unwrap(),
    ];
    for pl in &places {
        assert_eq!(capacity_ring_of_integers(pl).signum(), -1);
    }
    let exact = check_adelic_set(&AdelicSetSpec::standard(places.clone(), BigRational::zero())).unwrap();
    assert!(exact.log_part.is_zero() && exact.hypothesis_ok && exact.galois_stable);
    let loose = check_adelic_set(&AdelicSetSpec::standard(places.clone(), rat(1, 1000))).unwrap();
    assert!(loose.hypothesis_ok && loose.log_capacity_product() > 0.0);
    let tight = check_adelic_set(&AdelicSetSpec::standard(places.clone(), rat(-1, 1000))).unwrap();
    assert!(!tight.hypothesis_ok);
    let mut wrong = AdelicSetSpec::standard(places, BigRational::zero());
    wrong.log_radius.add_term(rat(1, 7), 11);
    assert!(check_adelic_set(&wrong).is_err());
}

fn arb_place() -> impl Strategy<Value = LocalFieldSpec> {
    (
        prop::sample::select(vec![2u64, 3, 5, 7, 11]),
        1u32..4,
        1u32..4,
        0u32..3,
        1i64..5,
    )
        .prop_map(|(p, e, f, r, w)| LocalFieldSpec::new(p, e, f, p.pow(r.max(1).min(2)), rat(1, w)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn upper_is_twice_lower(places in proptest::collection::vec(arb_place(), 1..5)) {
        let lower = bound_value(&BoundSpec { places: places.clone(), kind: BoundKind::LowerIntegers }).unwrap();
        let upper = bound_value(&BoundSpec { places: places.clone(), kind: BoundKind::Upper }).unwrap();
        prop_assert_eq!(&upper.exact, &lower.exact.scale(&rat(2, 1)));
        prop_assert_eq!(lower.exact.signum(), 1);
    }

    #[test]
    fn finite_degree_bound_stays_below_limit(
        places in proptest::collection::vec(arb_place(), 1..4),
        n in 2usize..400,
    ) {
        let lower = bound_value(&BoundSpec { places: places.clone(), kind: BoundKind::LowerIntegers }).unwrap();
        let finite = finite_degree_lower_bound(n, &places).unwrap();
        prop_assert_eq!((&lower.exact - &finite).signum(), 1);
    }
}
