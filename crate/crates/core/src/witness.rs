//! Explicit extremal sequences for the lower bounds on `C`, `D` and `E`.

use serde::{Deserialize, Serialize};

use crate::engine::{step_set, PairGrid, Sequence};
use crate::error::{Error, Result};
use crate::ring::{quadratic_residues, units, Modulus, Residue, ResidueSet, WeightPair};
use crate::search::{validate_witness, ConstantKind};

/// Where a witness came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    /// Written down directly from a closed-form construction.
    PaperConstruction,
    /// Found by exhaustive search.
    Search,
}

/// A sequence of length `bound − 1` with no qualifying subsequence,
/// proving the constant is at least `bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBoundClaim {
    pub kind: ConstantKind,
    pub n: u32,
    pub a: Vec<Residue>,
    pub b: Vec<Residue>,
    pub bound: usize,
    pub witness: Sequence,
    pub provenance: Provenance,
    /// Number of candidate subsequences ruled out (all of them).
    pub checked_subsequence_count: u128,
}

impl LowerBoundClaim {
    fn new(
        kind: ConstantKind,
        w: &WeightPair,
        witness: Sequence,
        provenance: Provenance,
    ) -> Result<Self> {
        let claim = LowerBoundClaim {
            kind,
            n: w.modulus().n(),
            a: w.a().to_vec(),
            b: w.b().to_vec(),
            bound: witness.len() + 1,
            checked_subsequence_count: candidate_count(kind, witness.len(), w.modulus()),
            witness,
            provenance,
        };
        if !claim.validate()? {
            return Err(Error::NoSolution(format!(
                "constructed sequence {:?} has a qualifying subsequence",
                claim.witness
            )));
        }
        Ok(claim)
    }

    pub fn weights(&self) -> Result<WeightPair> {
        let m = Modulus::new(self.n)?;
        WeightPair::new(
            ResidueSet::from_residues(m, self.a.iter().copied())?,
            ResidueSet::from_residues(m, self.b.iter().copied())?,
        )
    }

    /// Re-run the witness check from the stored fields.
    pub fn validate(&self) -> Result<bool> {
        if self.witness.len() + 1 != self.bound || self.witness.modulus().n() != self.n {
            return Ok(false);
        }
        validate_witness(&self.witness, self.kind, &self.weights()?)
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// How many subsequences of a length-`len` sequence the mode of `kind`
/// considers.
pub fn candidate_count(kind: ConstantKind, len: usize, m: Modulus) -> u128 {
    match kind {
        ConstantKind::C => (len * (len + 1) / 2) as u128,
        ConstantKind::D => (1u128 << len) - 1,
        ConstantKind::E => binomial(len, m.n() as usize),
    }
}

/// Units `(1, y)` with no `a, b ∈ Q_p` giving `a + b y = 0`, `y` least.
pub fn bad_pair(p: Modulus) -> Result<(Residue, Residue)> {
    p.require_odd_prime()?;
    let q = quadratic_residues(p)?;
    let x = 1;
    units(p)
        .iter()
        .find(|&y| {
            q.iter()
                .all(|a| q.iter().all(|b| p.add(p.mul(a, x), p.mul(b, y)) != 0))
        })
        .map(|y| (x, y))
        .ok_or_else(|| Error::NotFound(format!("no bad pair mod {}", p.n())))
}

/// `(0, x, 0, y, 0)` for `p ≡ 1 (mod 4)`, `(0, 0, x, 0, 0, y, 0, 0)` otherwise.
pub fn c_lower_witness(p: Modulus) -> Result<LowerBoundClaim> {
    let (x, y) = bad_pair(p)?;
    let terms = if p.is_one_mod_four() {
        vec![0, x, 0, y, 0]
    } else {
        vec![0, 0, x, 0, 0, y, 0, 0]
    };
    LowerBoundClaim::new(
        ConstantKind::C,
        &WeightPair::qp_ones(p)?,
        Sequence::new(p, terms)?,
        Provenance::PaperConstruction,
    )
}

/// `(x, y, 0)` for `p ≡ 1 (mod 4)`, `(x, y, 0, 0)` otherwise.
pub fn d_lower_witness(p: Modulus) -> Result<LowerBoundClaim> {
    let (x, y) = bad_pair(p)?;
    let mut terms = vec![x, y, 0];
    if !p.is_one_mod_four() {
        terms.push(0);
    }
    LowerBoundClaim::new(
        ConstantKind::D,
        &WeightPair::qp_ones(p)?,
        Sequence::new(p, terms)?,
        Provenance::PaperConstruction,
    )
}

pub const E_SEARCH_BUDGET: u64 = 1_000_000_000;

/// Lexicographically least longest sorted sequence with no qualifying
/// length-`p` subsequence, by depth-first search.
pub fn e_lower_witness(p: Modulus, w: &WeightPair) -> Result<LowerBoundClaim> {
    e_lower_witness_with_budget(p, w, E_SEARCH_BUDGET)
}

pub fn e_lower_witness_with_budget(
    p: Modulus,
    w: &WeightPair,
    budget: u64,
) -> Result<LowerBoundClaim> {
    p.require_odd_prime()?;
    if w.modulus() != p {
        return Err(Error::ModulusMismatch(w.modulus().n(), p.n()));
    }
    let mut dfs = Dfs::new(w, budget);
    // Translating a sorted sequence by −min keeps it sorted and bad.
    let first: Vec<Residue> = if w.b_is_ones() { vec![0] } else { (0..p.n()).collect() };
    let mut root = vec![PairGrid::empty(p); p.n() as usize];
    root[0] = PairGrid::origin(p);
    for x in first {
        if dfs.descend(&root, x)? {
            break;
        }
    }
    let best = dfs.best.ok_or_else(|| Error::NotFound("no bad sequence".into()))?;
    LowerBoundClaim::new(
        ConstantKind::E,
        w,
        Sequence::new(p, best)?,
        Provenance::Search,
    )
}

struct Dfs {
    n: usize,
    /// No bad sequence is longer than `2n − 2`.
    max_len: usize,
    steps: Vec<Vec<(Residue, Residue)>>,
    neg_steps: Vec<Vec<(Residue, Residue)>>,
    path: Vec<Residue>,
    best: Option<Vec<Residue>>,
    nodes: u64,
    budget: u64,
}

impl Dfs {
    fn new(w: &WeightPair, budget: u64) -> Self {
        let m = w.modulus();
        let n = m.n() as usize;
        let steps: Vec<_> = (0..m.n()).map(|x| step_set(x, w)).collect();
        let neg_steps = steps
            .iter()
            .map(|s| s.iter().map(|&(u, v)| (m.neg(u), m.neg(v))).collect())
            .collect();
        Dfs {
            n,
            max_len: 2 * n - 2,
            steps,
            neg_steps,
            path: Vec::new(),
            best: None,
            nodes: 0,
            budget,
        }
    }

    /// Visit `path + x` given the parent's layers (`layers[c]`: reachable
    /// pairs over `c`-element subsets, `c < n`). Returns `true` once the
    /// absolute maximum length is reached.
    fn descend(&mut self, layers: &[PairGrid], x: Residue) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::NotFound(format!(
                "search budget of {} nodes exhausted",
                self.budget
            )));
        }
        let n = self.n;
        if self.neg_steps[x as usize]
            .iter()
            .any(|&(u, v)| layers[n - 1].contains(u, v))
        {
            return Ok(false);
        }
        self.path.push(x);
        if self.best.as_ref().is_none_or(|b| self.path.len() > b.len()) {
            self.best = Some(self.path.clone());
        }
        if self.path.len() >= self.max_len {
            return Ok(true);
        }
        let mut next = layers.to_vec();
        for c in 1..n {
            next[c].or_stepped(&layers[c - 1], &self.steps[x as usize]);
        }
        for y in x..n as Residue {
            if self.descend(&next, y)? {
                return Ok(true);
            }
        }
        self.path.pop();
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u32) -> Modulus {
        Modulus::prime(p).unwrap()
    }

    #[test]
    fn bad_pairs() {
        assert_eq!(bad_pair(m(5)), Ok((1, 2)));
        let (x, y) = bad_pair(m(7)).unwrap();
        assert_eq!(x, 1);
        let q = quadratic_residues(m(7)).unwrap();
        assert!(!q.contains(m(7).neg(m(7).inv(y).unwrap())));
        assert_eq!(bad_pair(m(3)), Ok((1, 1)));
    }

    #[test]
    fn c_and_d_shapes() {
        let c13 = c_lower_witness(m(13)).unwrap();
        assert_eq!((c13.bound, c13.witness.len()), (6, 5));
        let c7 = c_lower_witness(m(7)).unwrap();
        assert_eq!((c7.bound, c7.witness.len()), (9, 8));
        assert_eq!(c7.provenance, Provenance::PaperConstruction);

        let d5 = d_lower_witness(m(5)).unwrap();
        assert_eq!(d5.witness.terms(), &[1, 2, 0]);
        assert_eq!(d5.bound, 4);
        assert_eq!(d_lower_witness(m(7)).unwrap().bound, 5);
        assert_eq!(d_lower_witness(m(11)).unwrap().bound, 5);
    }

    #[test]
    fn e_witness_lengths() {
        let q5 = WeightPair::qp_ones(m(5)).unwrap();
        let e = e_lower_witness(m(5), &q5).unwrap();
        assert_eq!((e.witness.len(), e.bound), (8, 9));
        assert_eq!(e.provenance, Provenance::Search);

        let q5q5 = WeightPair::new(
            quadratic_residues(m(5)).unwrap(),
            quadratic_residues(m(5)).unwrap(),
        )
        .unwrap();
        assert_eq!(e_lower_witness(m(5), &q5q5).unwrap().bound, 7);

        let q7 = WeightPair::qp_ones(m(7)).unwrap();
        assert_eq!(e_lower_witness(m(7), &q7).unwrap().bound, 9);
    }

    #[test]
    fn budget_exhaustion() {
        let q7 = WeightPair::qp_ones(m(7)).unwrap();
        assert!(matches!(
            e_lower_witness_with_budget(m(7), &q7, 10),
            Err(Error::NotFound(_))
        ));
    }

    #[test]
    fn claim_json_round_trip() {
        let c = c_lower_witness(m(5)).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.contains("\"checked_subsequence_count\":15"));
        assert!(json.contains("\"PAPER_CONSTRUCTION\""));
        let back: LowerBoundClaim = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
        assert!(back.validate().unwrap());

        let mut tampered = c.clone();
        tampered.bound += 1;
        assert!(!tampered.validate().unwrap());
    }

    #[test]
    fn candidate_counts() {
        let p = m(5);
        assert_eq!(candidate_count(ConstantKind::C, 4, p), 10);
        assert_eq!(candidate_count(ConstantKind::D, 4, p), 15);
        assert_eq!(candidate_count(ConstantKind::E, 8, p), 56);
        assert_eq!(candidate_count(ConstantKind::E, 4, p), 0);
    }
}
