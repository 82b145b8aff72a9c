mod common;

use common::{all_sequences, brute_qualifies, m, weight_pairs};
use proptest::prelude::*;
use zswlab::{
    check_certificate, find_zero_sum_subsequence, is_ab_zero_sum, CertificateDefect, Modulus,
    Sequence, SubseqMode, WeightPair,
};

fn modes(p: Modulus, len: usize) -> Vec<SubseqMode> {
    let mut out = vec![SubseqMode::AnyNonempty, SubseqMode::Contiguous];
    if len >= p.n() as usize {
        out.push(SubseqMode::ExactLength(p.n() as usize));
    }
    out.push(SubseqMode::ExactLength(len.min(3)));
    out
}

fn agree(terms: &[u32], w: &WeightPair, mode: SubseqMode) {
    let s = Sequence::new(w.modulus(), terms.to_vec()).unwrap();
    let found = find_zero_sum_subsequence(&s, w, mode).unwrap();
    let expected = brute_qualifies(terms, w, mode);
    assert_eq!(found.is_some(), expected, "{terms:?} mod {} {mode:?}", w.modulus().n());
    if let Some(cert) = found {
        assert_eq!(check_certificate(&s, w, &cert, mode), Ok(()), "{terms:?} {mode:?}");
    }
}

/// Every sequence of length ≤ `max_len`, every listed weight pair, every mode.
fn exhaust(p: u32, max_len: usize, pair_filter: &[&str]) {
    let p = m(p);
    for (name, w) in weight_pairs(p) {
        if !pair_filter.contains(&name) {
            continue;
        }
        for len in 1..=max_len {
            for terms in all_sequences(p.n(), len) {
                for mode in modes(p, len) {
                    agree(&terms, &w, mode);
                }
            }
        }
    }
}

#[test]
fn oracle_z5_all_pairs_up_to_six() {
    exhaust(5, 6, &["(Q,1)", "(Q,0)", "(Q,Q)", "(U,1)"]);
}

#[test]
fn oracle_z7_residue_weights_up_to_six() {
    exhaust(7, 6, &["(Q,1)", "(Q,0)"]);
}

#[test]
fn oracle_z7_wide_weights_up_to_four() {
    exhaust(7, 4, &["(Q,Q)", "(U,1)"]);
}

#[test]
fn full_cover_agrees_with_exact_length_mode() {
    let p = m(7);
    for (_, w) in weight_pairs(p) {
        for terms in all_sequences(7, 3) {
            let s = Sequence::new(p, terms.clone()).unwrap();
            let whole = is_ab_zero_sum(&s, &w).unwrap();
            assert_eq!(whole.is_some(), brute_qualifies(&terms, &w, SubseqMode::ExactLength(3)));
            if let Some(c) = whole {
                assert_eq!(c.indices, vec![0, 1, 2]);
            }
        }
    }
}

fn sequence_and_pair() -> impl Strategy<Value = (Vec<u32>, usize, usize)> {
    (prop::sample::select(vec![5u32, 7, 11, 13]), 1usize..=10, 0usize..4, 0usize..3).prop_flat_map(
        |(p, len, pair, mode)| (prop::collection::vec(0..p, len), Just(pair), Just(mode)),
    )
}

fn pick_modulus(terms: &[u32]) -> u32 {
    [5u32, 7, 11, 13].into_iter().find(|&p| terms.iter().all(|&t| t < p)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 3000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn tampered_certificates_are_rejected((terms, pair, mode) in sequence_and_pair()) {
        let p = m(pick_modulus(&terms));
        let (_, w) = weight_pairs(p).swap_remove(pair);
        let mode = [SubseqMode::AnyNonempty, SubseqMode::Contiguous, SubseqMode::ExactLength(2)][mode];
        if let SubseqMode::ExactLength(l) = mode {
            prop_assume!(l <= terms.len());
        }
        let s = Sequence::new(p, terms.clone()).unwrap();
        let Some(cert) = find_zero_sum_subsequence(&s, &w, mode).unwrap() else {
            return Ok(());
        };
        prop_assert_eq!(check_certificate(&s, &w, &cert, mode), Ok(()));

        let json = serde_json::to_string(&cert).unwrap();
        let back = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(check_certificate(&s, &w, &back, mode), Ok(()));

        let mut outside = cert.clone();
        outside.a[0] = 0;
        prop_assert_eq!(
            check_certificate(&s, &w, &outside, mode),
            Err(CertificateDefect::WeightNotInA)
        );

        // Another weight on a nonzero term changes the weighted sum.
        if let Some(k) = cert.indices.iter().position(|&i| terms[i] != 0) {
            if let Some(other) = w.a().iter().find(|&a| a != cert.a[k]) {
                let mut moved = cert.clone();
                moved.a[k] = other;
                prop_assert!(check_certificate(&s, &w, &moved, mode).is_err());
            }
        }

        let mut other = terms.clone();
        other.push(1);
        let other = Sequence::new(p, other).unwrap();
        prop_assert_eq!(
            check_certificate(&other, &w, &cert, mode),
            Err(CertificateDefect::ParentHashMismatch)
        );
    }
}
