#![allow(dead_code)]

use zswlab::ring::{quadratic_residues, units, ResidueSet};
use zswlab::{Modulus, SubseqMode, WeightPair};

pub fn m(p: u32) -> Modulus {
    Modulus::prime(p).unwrap()
}

pub fn set(p: Modulus, xs: &[u32]) -> ResidueSet {
    ResidueSet::from_residues(p, xs.iter().copied()).unwrap()
}

/// The weight pairs exercised by the property suites.
pub fn weight_pairs(p: Modulus) -> Vec<(&'static str, WeightPair)> {
    let q = quadratic_residues(p).unwrap();
    vec![
        ("(Q,1)", WeightPair::new(q, set(p, &[1])).unwrap()),
        ("(Q,0)", WeightPair::new(q, set(p, &[0])).unwrap()),
        ("(Q,Q)", WeightPair::new(q, q).unwrap()),
        ("(U,1)", WeightPair::new(units(p), set(p, &[1])).unwrap()),
    ]
}

fn subset_qualifies(chosen: &[u32], w: &WeightPair) -> bool {
    let n = w.modulus().n() as u64;
    let pairs: Vec<(u64, u64)> = w
        .a()
        .iter()
        .flat_map(|a| w.b().iter().map(move |b| (a as u64, b as u64)))
        .collect();
    let k = chosen.len();
    let mut idx = vec![0usize; k];
    loop {
        let mut sum = 0u64;
        let mut trace = 0u64;
        for (i, &x) in chosen.iter().enumerate() {
            let (a, b) = pairs[idx[i]];
            sum += a * x as u64;
            trace += b * a;
        }
        if sum.is_multiple_of(n) && trace.is_multiple_of(n) {
            return true;
        }
        let mut pos = 0;
        loop {
            if pos == k {
                return false;
            }
            idx[pos] += 1;
            if idx[pos] < pairs.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Direct enumeration of subsequences and weight tuples.
pub fn brute_qualifies(terms: &[u32], w: &WeightPair, mode: SubseqMode) -> bool {
    let k = terms.len();
    match mode {
        SubseqMode::Contiguous => (0..k).any(|i| (i + 1..=k).any(|j| subset_qualifies(&terms[i..j], w))),
        SubseqMode::AnyNonempty | SubseqMode::ExactLength(_) => (1u32..1 << k).any(|mask| {
            if let SubseqMode::ExactLength(len) = mode {
                if mask.count_ones() as usize != len {
                    return false;
                }
            }
            let chosen: Vec<u32> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| terms[i]).collect();
            subset_qualifies(&chosen, w)
        }),
    }
}

/// All sequences of length `len` over `Z_n`, in lexicographic order.
pub fn all_sequences(n: u32, len: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = (n as u64).pow(len as u32);
    (0..total).map(move |mut code| {
        let mut v = vec![0; len];
        for slot in v.iter_mut().rev() {
            *slot = (code % n as u64) as u32;
            code /= n as u64;
        }
        v
    })
}

/// All nondecreasing sequences of length `len` over `Z_n`.
pub fn all_multisets(n: u32, len: usize) -> Vec<Vec<u32>> {
    fn go(n: u32, len: usize, start: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            go(n, len, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, len, 0, &mut Vec::new(), &mut out);
    out
}
