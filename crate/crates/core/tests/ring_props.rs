mod common;

use common::m;
use proptest::prelude::*;
use zswlab::ring::{
    quadratic_nonresidues, quadratic_residues, restricted_sumset, sumset, units, ResidueSet,
};

const PRIMES: [u32; 6] = [3, 5, 7, 11, 13, 17];

fn odd_primes_to(limit: u32) -> Vec<u32> {
    (3..=limit)
        .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
        .collect()
}

#[test]
fn residues_and_nonresidues_split_units() {
    for p in odd_primes_to(61) {
        let p = m(p);
        let q = quadratic_residues(p).unwrap();
        let nq = quadratic_nonresidues(p).unwrap();
        assert_eq!(q.len(), nq.len());
        assert_eq!(q.union(&nq).unwrap(), units(p));
        assert!(q.intersection(&nq).unwrap().is_empty());
    }
}

#[test]
fn minus_one_is_a_residue_iff_one_mod_four() {
    // Primes above 61 exceed the bitset width, so this covers the whole range.
    for p in odd_primes_to(61) {
        let q = quadratic_residues(m(p)).unwrap();
        assert_eq!(q.contains(p - 1), p % 4 == 1, "p = {p}");
    }
}

#[test]
fn units_lie_in_restricted_residue_sums() {
    for p in odd_primes_to(61).into_iter().filter(|&p| p >= 7) {
        let p = m(p);
        let q = quadratic_residues(p).unwrap();
        assert!(units(p).is_subset(&sumset(&q, &q).unwrap()));
    }
}

fn subset(p: u32) -> impl Strategy<Value = ResidueSet> {
    (1u64..(1 << p)).prop_map(move |bits| {
        ResidueSet::from_residues(m(p), (0..p).filter(|i| bits >> i & 1 == 1)).unwrap()
    })
}

fn prime_and_two_subsets() -> impl Strategy<Value = (ResidueSet, ResidueSet)> {
    prop::sample::select(PRIMES.to_vec()).prop_flat_map(|p| (subset(p), subset(p)))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 2000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn cauchy_davenport((x, y) in prime_and_two_subsets()) {
        let p = x.modulus().n() as usize;
        let s = sumset(&x, &y).unwrap();
        prop_assert!(s.len() >= (x.len() + y.len() - 1).min(p));
    }

    #[test]
    fn erdos_heilbronn((x, _) in prime_and_two_subsets()) {
        let p = x.modulus().n() as usize;
        let r = restricted_sumset(&x);
        if x.len() >= 2 {
            prop_assert!(r.len() >= (2 * x.len() - 3).min(p));
        } else {
            prop_assert!(r.is_empty());
        }
    }

    #[test]
    fn sumset_matches_pairwise_sums((x, y) in prime_and_two_subsets()) {
        let p = x.modulus();
        let mut naive = ResidueSet::empty(p);
        for a in x.iter() {
            for b in y.iter() {
                naive.insert(p.add(a, b)).unwrap();
            }
        }
        prop_assert_eq!(sumset(&x, &y).unwrap(), naive);
    }

    #[test]
    fn restricted_sumset_matches_distinct_pairs((x, _) in prime_and_two_subsets()) {
        let p = x.modulus();
        let mut naive = ResidueSet::empty(p);
        for a in x.iter() {
            for b in x.iter().filter(|&b| b != a) {
                naive.insert(p.add(a, b)).unwrap();
            }
        }
        prop_assert_eq!(restricted_sumset(&x), naive);
    }

    #[test]
    fn field_arithmetic(p in prop::sample::select(PRIMES.to_vec()), a in 0u32..64, b in 0u32..64) {
        let p = m(p);
        let (a, b) = (a % p.n(), b % p.n());
        prop_assert_eq!(p.add(a, b) as u64, (a as u64 + b as u64) % p.n() as u64);
        prop_assert_eq!(p.add(p.sub(a, b), b), a);
        prop_assert_eq!(p.add(a, p.neg(a)), 0);
        prop_assert_eq!(p.mul(a, b) as u64, a as u64 * b as u64 % p.n() as u64);
        if a != 0 {
            prop_assert_eq!(p.mul(a, p.inv(a).unwrap()), 1);
        }
    }
}
