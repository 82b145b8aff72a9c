mod common;

use common::{brute_qualifies, m};
use zswlab::ring::quadratic_residues;
use zswlab::witness::{bad_pair, c_lower_witness, d_lower_witness, e_lower_witness, LowerBoundClaim};
use zswlab::{compute_constant, ConstantKind, SearchConfig, SubseqMode, WeightPair};

fn claims(p: u32) -> Vec<LowerBoundClaim> {
    let p = m(p);
    vec![
        c_lower_witness(p).unwrap(),
        d_lower_witness(p).unwrap(),
        e_lower_witness(p, &WeightPair::qp_ones(p).unwrap()).unwrap(),
    ]
}

#[test]
fn bad_pair_is_bad_in_either_order() {
    for p in [3, 5, 7, 11, 13, 17, 19, 23] {
        let pm = m(p);
        let (x, y) = bad_pair(pm).unwrap();
        let plain = WeightPair::qp_plain(pm).unwrap();
        for pair in [[x, y], [y, x]] {
            assert!(!brute_qualifies(&pair, &plain, SubseqMode::AnyNonempty), "{pair:?} mod {p}");
        }
    }
}

#[test]
fn claims_validate_and_survive_serialization() {
    for p in [5, 7, 11, 13] {
        for claim in claims(p) {
            assert!(claim.validate().unwrap());
            let back: LowerBoundClaim = serde_json::from_str(&serde_json::to_string(&claim).unwrap()).unwrap();
            assert_eq!(back, claim);
            // Plain enumeration of length-p subsequences is out of reach beyond 7.
            if claim.kind != ConstantKind::E || p <= 7 {
                let w = claim.weights().unwrap();
                assert!(!brute_qualifies(claim.witness.terms(), &w, claim.kind.mode(m(p))));
            }
        }
    }
}

#[test]
fn bounds_never_exceed_computed_constants() {
    for p in [5, 7, 11, 13] {
        let w = WeightPair::qp_ones(m(p)).unwrap();
        for claim in claims(p) {
            let value = compute_constant(claim.kind, &w, &SearchConfig::default()).unwrap().value;
            assert!(claim.bound <= value, "{} mod {p}: bound {} > {value}", claim.kind, claim.bound);
            match claim.kind {
                ConstantKind::C | ConstantKind::E => assert_eq!(claim.bound, value),
                ConstantKind::D if p % 4 == 3 => assert_eq!(claim.bound, value),
                ConstantKind::D => {}
            }
        }
    }
}

#[test]
fn residue_weighted_e_witness_mod_5() {
    let p = m(5);
    let q = quadratic_residues(p).unwrap();
    let claim = e_lower_witness(p, &WeightPair::new(q, q).unwrap()).unwrap();
    assert_eq!(claim.witness.len(), 6);
    assert_eq!(claim.bound, 7);
}
