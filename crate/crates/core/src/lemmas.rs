//! Constructive solvers for the quadratic-residue lemmas, and exhaustive
//! verifiers that check each statement over its whole domain at one prime.
//!
//! Every verified instance is checked twice: once through the constructive
//! solver (which follows the proof step by step) and once through an
//! independent existence test (pair-grid DP, bitset sumsets, or plain
//! enumeration of weight tuples).

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{
    check_certificate, full_cover_combo, full_cover_grid, is_ab_zero_sum, Certificate, Sequence,
    SubseqMode,
};
use crate::error::{Error, Result};
use crate::ring::{
    coset_of, dilate, quadratic_nonresidues, quadratic_residues, restricted_sumset, sumset, units,
    Coset, Modulus, Residue, ResidueSet, WeightPair,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LemmaId {
    /// `x_1 Q_p + x_2 Q_p + x_3 Q_p = Z_p` for units, `p ≥ 7`.
    Cm,
    /// Three nonzero terms make a `Q_p`-weighted zero-sum, `p ≥ 7`.
    Zs,
    /// A zero-sum combo with nonzero trace extends to `T + (0,0)`.
    Nss,
    /// Three nonzero terms: `T + (0,0,0)` is `(Q_p, 1)`-weighted zero-sum.
    ThreeZ,
    /// Erdős–Heilbronn lower bound for restricted sumsets.
    Eh,
    /// Pair solution avoiding a trace when `z ∈ Q_p ∔ Q_p`.
    Nspart,
    /// Pair solution avoiding a trace for every unit `z`, `p ≥ 11`.
    Ns,
    /// Sequence with a nonzero term plus a same-coset pair, `p ≥ 11`.
    Ns7,
    /// The `p = 7` version, needing two nonzero terms.
    NsPrime,
    /// Two zeros and three nonzero terms, `p ≡ 1 (mod 4)`.
    L2,
    /// Three distinct nonzero terms admit a combo with nonzero trace.
    Nsc,
    /// Same-coset pairs are `Q_p`-weighted zero-sums, `p ≡ 1 (mod 4)`.
    Ls,
    /// `(Q_p, 1)`-weighted zero-sums have length ≥ 3 when `p ≡ 3 (mod 4)`.
    Qp1,
    /// `(Q_p, B)`-weighted zero-sums have length ≥ 3 for `B ⊆ Q_p`.
    Qp2,
    /// Length-5 sequences over Z_5: `(Q_5, 1)` iff plain zero-sum.
    Q51,
    /// Cauchy–Davenport.
    Cd,
}

impl LemmaId {
    pub const ALL: [LemmaId; 16] = [
        LemmaId::Cm,
        LemmaId::Zs,
        LemmaId::Nss,
        LemmaId::ThreeZ,
        LemmaId::Eh,
        LemmaId::Nspart,
        LemmaId::Ns,
        LemmaId::Ns7,
        LemmaId::NsPrime,
        LemmaId::L2,
        LemmaId::Nsc,
        LemmaId::Ls,
        LemmaId::Qp1,
        LemmaId::Qp2,
        LemmaId::Q51,
        LemmaId::Cd,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            LemmaId::Cm => "CM",
            LemmaId::Zs => "ZS",
            LemmaId::Nss => "NSS",
            LemmaId::ThreeZ => "THREE_Z",
            LemmaId::Eh => "EH",
            LemmaId::Nspart => "NSPART",
            LemmaId::Ns => "NS",
            LemmaId::Ns7 => "NS7",
            LemmaId::NsPrime => "NS_PRIME",
            LemmaId::L2 => "L2",
            LemmaId::Nsc => "NSC",
            LemmaId::Ls => "LS",
            LemmaId::Qp1 => "QP1",
            LemmaId::Qp2 => "QP2",
            LemmaId::Q51 => "Q51",
            LemmaId::Cd => "CD",
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LemmaId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let up = s.to_ascii_uppercase().replace('-', "_");
        LemmaId::ALL
            .into_iter()
            .find(|id| id.name() == up)
            .ok_or_else(|| Error::InvalidMode(format!("unknown lemma id {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma_id: LemmaId,
    pub prime: u32,
    /// Human-readable description of the enumerated domain.
    pub domain: String,
    pub inputs_checked: u64,
    /// Inputs where the hypothesis did not hold (checked, nothing to prove).
    pub vacuous: u64,
    pub counterexamples: Vec<String>,
    pub wall_time_secs: f64,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Coefficients `c_i ∈ Q_p` applied to a sequence, with
/// `value = Σ c_i x_i` and `trace = Σ c_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedCombo {
    pub coefficients: Vec<Residue>,
    pub value: Residue,
    pub trace: Residue,
}

impl WeightedCombo {
    pub fn new(m: Modulus, terms: &[Residue], coefficients: Vec<Residue>) -> Self {
        let value = terms
            .iter()
            .zip(&coefficients)
            .fold(0, |acc, (&x, &c)| m.add(acc, m.mul(x, c)));
        let trace = coefficients.iter().fold(0, |acc, &c| m.add(acc, c));
        WeightedCombo {
            coefficients,
            value,
            trace,
        }
    }

    /// Recompute value and trace from scratch and check coefficients lie
    /// in `Q_p`.
    pub fn is_consistent(&self, terms: &[Residue], q: &ResidueSet) -> bool {
        let n = q.modulus().n() as u64;
        if terms.len() != self.coefficients.len() || !self.coefficients.iter().all(|&c| q.contains(c)) {
            return false;
        }
        let value: u64 = terms
            .iter()
            .zip(&self.coefficients)
            .map(|(&x, &c)| x as u64 * c as u64)
            .sum();
        let trace: u64 = self.coefficients.iter().map(|&c| c as u64).sum();
        value % n == self.value as u64 && trace % n == self.trace as u64
    }
}

fn qr(p: Modulus) -> ResidueSet {
    quadratic_residues(p).expect("odd prime checked by caller")
}

fn require_at_least_seven(p: Modulus) -> Result<()> {
    p.require_odd_prime()?;
    if p.n() < 7 {
        return Err(Error::PrimeTooSmall(p.n()));
    }
    Ok(())
}

/// Lexicographically least `(c_1, c_2, c_3) ∈ Q_p³` with
/// `c_1 x_1 + c_2 x_2 + c_3 x_3 = target`.
pub fn solve_three_cover(x: [Residue; 3], target: Residue, p: Modulus) -> Result<[Residue; 3]> {
    require_at_least_seven(p)?;
    if let Some(&bad) = x.iter().find(|&&v| !p.is_unit(v)) {
        return Err(Error::PreconditionViolated(format!("{bad} is not a unit")));
    }
    let target = p.check(target)?;
    let q = qr(p);
    for c1 in q.iter() {
        let s1 = p.mul(c1, x[0]);
        for c2 in q.iter() {
            let s2 = p.add(s1, p.mul(c2, x[1]));
            for c3 in q.iter() {
                if p.add(s2, p.mul(c3, x[2])) == target {
                    return Ok([c1, c2, c3]);
                }
            }
        }
    }
    Err(Error::NoSolution(format!(
        "{x:?}·Q_p misses {target} mod {}",
        p.n()
    )))
}

/// A `Q_p`-weighted zero-sum for a sequence with at least three nonzero
/// terms: weight 1 on everything except the first three nonzero terms,
/// which absorb `−(rest)` via [`solve_three_cover`].
pub fn qp_zero_sum_combo(s: &Sequence, p: Modulus) -> Result<WeightedCombo> {
    require_at_least_seven(p)?;
    if s.modulus() != p {
        return Err(Error::ModulusMismatch(s.modulus().n(), p.n()));
    }
    let terms = s.terms();
    let picks: Vec<usize> = terms
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, _)| i)
        .take(3)
        .collect();
    if picks.len() < 3 {
        return Err(Error::PreconditionViolated(format!(
            "{s:?} has fewer than three nonzero terms"
        )));
    }
    let rest = terms
        .iter()
        .enumerate()
        .filter(|(i, _)| !picks.contains(i))
        .fold(0, |acc, (_, &x)| p.add(acc, x));
    let c = solve_three_cover(
        [terms[picks[0]], terms[picks[1]], terms[picks[2]]],
        p.neg(rest),
        p,
    )?;
    let mut coefficients = vec![1; terms.len()];
    for (k, &i) in picks.iter().enumerate() {
        coefficients[i] = c[k];
    }
    let combo = WeightedCombo::new(p, terms, coefficients);
    debug_assert_eq!(combo.value, 0);
    Ok(combo)
}

/// `(c, c') ∈ Q_p²` with `c x + c' x' = z` and `c + c' ≠ t`.
///
/// `x ≠ x'` must lie in the same coset of `Q_p`. When they are nonresidues
/// everything is first dilated by the least nonresidue. The (dilated) `z`
/// must then lie in `Q_p ∔ Q_p`; it is split as `z = u + u'` with the least
/// such `u`, and of the two candidates `(u/x, u'/x')`, `(u'/x, u/x')`,
/// whose traces always differ, the least one with trace `≠ t` is returned.
pub fn solve_pair_avoiding_trace(
    x: Residue,
    x_prime: Residue,
    z: Residue,
    t: Residue,
    p: Modulus,
) -> Result<(Residue, Residue)> {
    p.require_odd_prime()?;
    let (x, x_prime, z, t) = (p.check(x)?, p.check(x_prime)?, p.check(z)?, p.check(t)?);
    if x == x_prime {
        return Err(Error::HypothesisUnmet("x = x'".into()));
    }
    let coset = coset_of(x, p)?;
    if coset == Coset::Zero || coset != coset_of(x_prime, p)? {
        return Err(Error::HypothesisUnmet(format!(
            "{x} and {x_prime} are not in the same coset of Q_p"
        )));
    }
    let q = qr(p);
    let scale = match coset {
        Coset::Np => quadratic_nonresidues(p)?.min().expect("N_p nonempty"),
        _ => 1,
    };
    let (sx, sx2, sz) = (p.mul(scale, x), p.mul(scale, x_prime), p.mul(scale, z));
    if !restricted_sumset(&q).contains(sz) {
        return Err(Error::HypothesisUnmet(format!(
            "{sz} is not in Q_p ∔ Q_p mod {}",
            p.n()
        )));
    }
    let u = q
        .iter()
        .find(|&u| {
            let rest = p.sub(sz, u);
            rest != u && q.contains(rest)
        })
        .expect("membership in the restricted sumset");
    let u2 = p.sub(sz, u);
    let inv = |v| p.inv(v).expect("unit");
    let first = (p.mul(u, inv(sx)), p.mul(u2, inv(sx2)));
    let second = (p.mul(u2, inv(sx)), p.mul(u, inv(sx2)));
    debug_assert_ne!(
        p.add(first.0, first.1),
        p.add(second.0, second.1),
        "candidate pairs must have distinct traces"
    );
    let mut candidates = [first, second];
    candidates.sort_unstable();
    let found = candidates
        .into_iter()
        .find(|&(c, c2)| p.add(c, c2) != t)
        .expect("distinct traces cannot both equal t");
    debug_assert!(q.contains(found.0) && q.contains(found.1));
    debug_assert_eq!(p.add(p.mul(found.0, x), p.mul(found.1, x_prime)), z);
    Ok(found)
}

/// Lexicographically least `Q_p` combo with value 0 and nonzero trace.
fn nonzero_trace_zero_combo(terms: &[Residue], p: Modulus) -> Option<WeightedCombo> {
    let w = WeightPair::qp_ones(p).ok()?;
    let grid = full_cover_grid(terms, &w);
    let t = (1..p.n()).find(|&t| grid.contains(0, t))?;
    let (a, _) = full_cover_combo(terms, &w, (0, t))?;
    Some(WeightedCombo::new(p, terms, a))
}

/// Certificate that `T + (0, …, 0)` (2 or 3 zeros appended) is a
/// `(Q_p, 1)`-weighted zero-sum sequence.
///
/// With two zeros, `combo` (or, when `None`, the least combo found) must
/// have value 0 and nonzero trace `c`. With three, `T` needs three nonzero
/// terms and the combo comes from [`qp_zero_sum_combo`]. Then `(c, 1, …, 1)`
/// is itself a `Q_p`-weighted zero-sum `(d, d_2, …)`, and the certificate is
/// `d·combo` on `T` followed by `d_2, …` on the zeros.
pub fn extend_with_zeros(
    t_seq: &Sequence,
    zeros: usize,
    p: Modulus,
    combo: Option<WeightedCombo>,
) -> Result<(Sequence, Certificate)> {
    require_at_least_seven(p)?;
    if t_seq.modulus() != p {
        return Err(Error::ModulusMismatch(t_seq.modulus().n(), p.n()));
    }
    let q = qr(p);
    let terms = t_seq.terms();
    let combo = match (zeros, combo) {
        (2, Some(c)) => c,
        (2, None) => nonzero_trace_zero_combo(terms, p).ok_or_else(|| {
            Error::HypothesisUnmet(format!(
                "{t_seq:?} has no Q_p zero-sum combo with nonzero trace"
            ))
        })?,
        (3, Some(c)) => c,
        (3, None) => {
            if t_seq.nonzero_count() < 3 {
                return Err(Error::HypothesisUnmet(format!(
                    "{t_seq:?} has fewer than three nonzero terms"
                )));
            }
            qp_zero_sum_combo(t_seq, p)?
        }
        (z, _) => {
            return Err(Error::PreconditionViolated(format!(
                "can only append 2 or 3 zeros, not {z}"
            )))
        }
    };
    if !combo.is_consistent(terms, &q) || combo.value != 0 {
        return Err(Error::HypothesisUnmet("combo is not a Q_p zero-sum".into()));
    }
    if zeros == 2 && combo.trace == 0 {
        return Err(Error::HypothesisUnmet("combo has zero trace".into()));
    }
    let mut outer_terms = vec![combo.trace];
    outer_terms.extend(std::iter::repeat_n(1, zeros));
    let outer = qp_zero_sum_combo(&Sequence::new(p, outer_terms)?, p)?;
    let d = outer.coefficients[0];

    let mut full_terms = terms.to_vec();
    full_terms.extend(std::iter::repeat_n(0, zeros));
    let full = Sequence::new(p, full_terms)?;
    let mut a: Vec<Residue> = combo.coefficients.iter().map(|&c| p.mul(d, c)).collect();
    a.extend_from_slice(&outer.coefficients[1..]);
    let cert = Certificate {
        n: p.n(),
        indices: (0..full.len()).collect(),
        b: vec![1; a.len()],
        a,
        parent_hash: full.digest(),
    };
    Ok((full, cert))
}

/// Combo for `S + (x, x')` with value 0 and nonzero trace, built as in the
/// sequence-plus-pair lemmas: pick `z` in `x_1 Q_p + ⋯ + x_n Q_p` (a unit
/// for `p ≥ 11`; a member of the coset of `x` for `p = 7`), realize it,
/// and close with [`solve_pair_avoiding_trace`] on `(x, x', −z, −t)`.
pub fn sequence_pair_combo(
    s: &Sequence,
    x: Residue,
    x_prime: Residue,
    p: Modulus,
) -> Result<WeightedCombo> {
    p.require_odd_prime()?;
    let q = qr(p);
    let terms = s.terms();
    let reach = terms.iter().try_fold(ResidueSet::singleton(p, 0)?, |acc, &v| {
        let dilated = if v == 0 {
            ResidueSet::singleton(p, 0)?
        } else {
            dilate(&q, v)?
        };
        sumset(&acc, &dilated)
    })?;
    let allowed = if p.n() == 7 {
        match coset_of(x, p)? {
            Coset::Qp => q,
            Coset::Np => quadratic_nonresidues(p)?,
            Coset::Zero => return Err(Error::HypothesisUnmet("x = 0".into())),
        }
    } else {
        units(p)
    };
    let z = reach
        .intersection(&allowed)?
        .min()
        .ok_or_else(|| Error::HypothesisUnmet(format!("no admissible z for {s:?}")))?;
    let plain = WeightPair::qp_plain(p)?;
    let (coeffs, _) = full_cover_combo(terms, &plain, (z, 0)).expect("z is reachable");
    let head = WeightedCombo::new(p, terms, coeffs);
    let (c, c2) = solve_pair_avoiding_trace(x, x_prime, p.neg(z), p.neg(head.trace), p)?;
    let mut all_terms = terms.to_vec();
    all_terms.extend([x, x_prime]);
    let mut coefficients = head.coefficients;
    coefficients.extend([c, c2]);
    Ok(WeightedCombo::new(p, &all_terms, coefficients))
}

/// `(a, b) ∈ Q_p²` with `a x + b y = 0` for `x, y` in the same coset,
/// `p ≡ 1 (mod 4)`: `(x⁻¹, −y⁻¹)` for residues; for nonresidues the same
/// formula after dilating by the least nonresidue.
pub fn same_coset_zero_pair(x: Residue, y: Residue, p: Modulus) -> Result<(Residue, Residue)> {
    p.require_odd_prime()?;
    if !p.is_one_mod_four() {
        return Err(Error::HypothesisUnmet("p ≢ 1 (mod 4)".into()));
    }
    let cx = coset_of(x, p)?;
    if cx == Coset::Zero || cx != coset_of(y, p)? {
        return Err(Error::HypothesisUnmet(format!(
            "{x} and {y} are not in the same coset of Q_p"
        )));
    }
    let c = match cx {
        Coset::Np => quadratic_nonresidues(p)?.min().expect("N_p nonempty"),
        _ => 1,
    };
    let (sx, sy) = (p.mul(c, x), p.mul(c, y));
    let a = p.inv(sx).expect("unit");
    let b = p.neg(p.inv(sy).expect("unit"));
    Ok((a, b))
}

enum Outcome {
    Pass,
    Vacuous,
    Fail(String),
}

fn run<I, F>(items: Vec<I>, check: F) -> (u64, u64, Vec<String>)
where
    I: Send + Sync,
    F: Fn(&I) -> Outcome + Send + Sync,
{
    let outcomes: Vec<Outcome> = items.par_iter().map(&check).collect();
    let mut vacuous = 0;
    let mut fails = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Pass => {}
            Outcome::Vacuous => vacuous += 1,
            Outcome::Fail(s) => fails.push(s),
        }
    }
    (items.len() as u64, vacuous, fails)
}

fn unsupported(id: LemmaId, p: u32, reason: &str) -> Error {
    Error::UnsupportedPrime {
        lemma: id.name().to_string(),
        prime: p,
        reason: reason.to_string(),
    }
}

fn check_hypothesis(id: LemmaId, p: Modulus) -> Result<()> {
    let n = p.n();
    let fail = |reason: &str| Err(unsupported(id, n, reason));
    match id {
        LemmaId::Cm | LemmaId::Zs | LemmaId::Nss | LemmaId::ThreeZ if n < 7 => fail("needs p ≥ 7"),
        LemmaId::Ns | LemmaId::Ns7 | LemmaId::Nsc if n < 11 => fail("needs p ≥ 11"),
        LemmaId::NsPrime if n != 7 => fail("only stated for p = 7"),
        LemmaId::Q51 if n != 5 => fail("only stated for p = 5"),
        LemmaId::L2 if n < 7 || n % 4 != 1 => fail("needs p ≥ 7 and p ≡ 1 (mod 4)"),
        LemmaId::Ls if n % 4 != 1 => fail("needs p ≡ 1 (mod 4)"),
        LemmaId::Qp1 | LemmaId::Qp2 if n % 4 != 3 => fail("needs p ≡ 3 (mod 4)"),
        LemmaId::Nspart if n < 5 => fail("Q_3 has no two distinct elements"),
        LemmaId::Cd if n > 13 => fail("exhaustive pair enumeration capped at p = 13"),
        LemmaId::Eh if n > 23 => fail("exhaustive subset enumeration capped at p = 23"),
        _ if n > 31 => fail("verifier domains are capped at p = 31"),
        _ => Ok(()),
    }
}

/// Multisets (sorted tuples) of `len` elements drawn from `values`.
fn multisets(values: &[Residue], len: usize) -> Vec<Vec<Residue>> {
    values
        .iter()
        .copied()
        .combinations_with_replacement(len)
        .collect()
}

fn all_residues(p: Modulus) -> Vec<Residue> {
    (0..p.n()).collect()
}

/// Plain enumeration: does some `c ∈ Q_p^k` give `Σ c_i x_i = 0` and
/// `Σ c_i ≠ 0`? Only for short sequences.
fn brute_nonzero_trace(terms: &[Residue], q: &ResidueSet) -> bool {
    let p = q.modulus();
    let qv = q.to_vec();
    (0..terms.len())
        .map(|_| qv.iter().copied())
        .multi_cartesian_product()
        .any(|c| {
            let combo = WeightedCombo::new(p, terms, c);
            combo.value == 0 && combo.trace != 0
        })
}

/// Plain enumeration of `(A, B)`-weights covering every term.
fn brute_ab_zero_sum(terms: &[Residue], w: &WeightPair) -> bool {
    let p = w.modulus();
    let choices: Vec<(Residue, Residue)> = w
        .a()
        .iter()
        .flat_map(|a| w.b().iter().map(move |b| (a, b)))
        .collect();
    (0..terms.len())
        .map(|_| choices.iter().copied())
        .multi_cartesian_product()
        .any(|ab| {
            let s = terms
                .iter()
                .zip(&ab)
                .fold(0, |acc, (&x, &(a, _))| p.add(acc, p.mul(a, x)));
            let t = ab.iter().fold(0, |acc, &(a, b)| p.add(acc, p.mul(b, a)));
            s == 0 && t == 0
        })
}

fn qp1_weights(p: Modulus) -> WeightPair {
    WeightPair::qp_ones(p).expect("odd prime")
}

/// Exhaustively check one statement at one prime.
pub fn verify_lemma(id: LemmaId, p: Modulus) -> Result<LemmaReport> {
    p.require_odd_prime()?;
    check_hypothesis(id, p)?;
    let started = Instant::now();
    let (domain, (checked, vacuous, counterexamples)) = match id {
        LemmaId::Cm => verify_cm(p),
        LemmaId::Zs => verify_zs(p),
        LemmaId::Nss => verify_nss(p),
        LemmaId::ThreeZ => verify_three_z(p),
        LemmaId::Eh => verify_eh(p),
        LemmaId::Cd => verify_cd(p),
        LemmaId::Nspart => verify_pair(p, false),
        LemmaId::Ns => verify_pair(p, true),
        LemmaId::Ns7 => verify_sequence_pair(p, 1, 3),
        LemmaId::NsPrime => verify_sequence_pair(p, 2, 4),
        LemmaId::L2 => verify_l2(p),
        LemmaId::Nsc => verify_nsc(p),
        LemmaId::Ls => verify_ls(p),
        LemmaId::Qp1 => verify_qp1(p),
        LemmaId::Qp2 => verify_qp2(p),
        LemmaId::Q51 => verify_q51(p),
    };
    Ok(LemmaReport {
        lemma_id: id,
        prime: p.n(),
        domain,
        inputs_checked: checked,
        vacuous,
        counterexamples,
        wall_time_secs: started.elapsed().as_secs_f64(),
    })
}

type Tally = (u64, u64, Vec<String>);

fn verify_cm(p: Modulus) -> (String, Tally) {
    let u: Vec<Residue> = units(p).to_vec();
    let q = qr(p);
    let items: Vec<(Residue, Residue, Residue, Residue)> = u
        .iter()
        .flat_map(|&a| u.iter().map(move |&b| (a, b)))
        .flat_map(|(a, b)| u.iter().map(move |&c| (a, b, c)))
        .flat_map(|(a, b, c)| (0..p.n()).map(move |t| (a, b, c, t)))
        .collect();
    let tally = run(items, |&(x1, x2, x3, t)| {
        let cover = [x1, x2, x3]
            .iter()
            .map(|&x| dilate(&q, x).unwrap())
            .reduce(|acc, d| sumset(&acc, &d).unwrap())
            .unwrap();
        if !cover.contains(t) {
            return Outcome::Fail(format!("{t} ∉ {x1}Q+{x2}Q+{x3}Q"));
        }
        match solve_three_cover([x1, x2, x3], t, p) {
            Ok(c) => {
                let combo = WeightedCombo::new(p, &[x1, x2, x3], c.to_vec());
                if combo.is_consistent(&[x1, x2, x3], &q) && combo.value == t {
                    Outcome::Pass
                } else {
                    Outcome::Fail(format!("solver returned bad {c:?} for {x1},{x2},{x3} → {t}"))
                }
            }
            Err(e) => Outcome::Fail(format!("({x1},{x2},{x3}) → {t}: {e}")),
        }
    });
    ("unit triples × targets".into(), tally)
}

fn sequences_with_nonzero(p: Modulus, lengths: std::ops::RangeInclusive<usize>, min_nonzero: usize) -> Vec<Vec<Residue>> {
    let vals = all_residues(p);
    lengths
        .flat_map(|k| multisets(&vals, k))
        .filter(|s| s.iter().filter(|&&x| x != 0).count() >= min_nonzero)
        .collect()
}

fn verify_zs(p: Modulus) -> (String, Tally) {
    let q = qr(p);
    let plain = WeightPair::qp_plain(p).unwrap();
    let items = sequences_with_nonzero(p, 3..=6, 3);
    let tally = run(items, |terms| {
        let s = Sequence::new(p, terms.clone()).unwrap();
        match qp_zero_sum_combo(&s, p) {
            Ok(c) if c.is_consistent(terms, &q) && c.value == 0 => {}
            Ok(c) => return Outcome::Fail(format!("{terms:?}: bad combo {c:?}")),
            Err(e) => return Outcome::Fail(format!("{terms:?}: {e}")),
        }
        if is_ab_zero_sum(&s, &plain).unwrap().is_none() {
            return Outcome::Fail(format!("{terms:?}: grid search finds no Q_p zero-sum"));
        }
        Outcome::Pass
    });
    ("multisets of length 3..=6 with ≥3 nonzero terms".into(), tally)
}

fn check_full_cover(seq: &Sequence, cert: &Certificate, w: &WeightPair) -> Option<String> {
    if cert.indices.len() != seq.len() {
        return Some(format!("{seq:?}: certificate does not cover every term"));
    }
    if let Err(d) = check_certificate(seq, w, cert, SubseqMode::ExactLength(seq.len())) {
        return Some(format!("{seq:?}: certificate rejected ({d:?})"));
    }
    if is_ab_zero_sum(seq, w).unwrap().is_none() {
        return Some(format!("{seq:?}: grid search disagrees"));
    }
    None
}

fn verify_nss(p: Modulus) -> (String, Tally) {
    let q = qr(p);
    let w = qp1_weights(p);
    let items: Vec<Vec<Residue>> = (1..=4).flat_map(|k| multisets(&all_residues(p), k)).collect();
    let tally = run(items, |terms| {
        let t_seq = Sequence::new(p, terms.clone()).unwrap();
        let hypothesis = nonzero_trace_zero_combo(terms, p);
        if cfg!(debug_assertions) && terms.len() <= 3
            && hypothesis.is_some() != brute_nonzero_trace(terms, &q) {
                return Outcome::Fail(format!("{terms:?}: grid and enumeration disagree"));
            }
        match (hypothesis, extend_with_zeros(&t_seq, 2, p, None)) {
            (None, Err(Error::HypothesisUnmet(_))) => Outcome::Vacuous,
            (None, other) => Outcome::Fail(format!("{terms:?}: expected HypothesisUnmet, got {other:?}")),
            (Some(_), Err(e)) => Outcome::Fail(format!("{terms:?}: {e}")),
            (Some(_), Ok((full, cert))) => match check_full_cover(&full, &cert, &w) {
                Some(f) => Outcome::Fail(f),
                None => Outcome::Pass,
            },
        }
    });
    ("multisets T of length 1..=4; T + (0,0)".into(), tally)
}

fn verify_three_z(p: Modulus) -> (String, Tally) {
    let w = qp1_weights(p);
    let items = sequences_with_nonzero(p, 3..=5, 3);
    let tally = run(items, |terms| {
        let t_seq = Sequence::new(p, terms.clone()).unwrap();
        match extend_with_zeros(&t_seq, 3, p, None) {
            Ok((full, cert)) => match check_full_cover(&full, &cert, &w) {
                Some(f) => Outcome::Fail(f),
                None => Outcome::Pass,
            },
            Err(e) => Outcome::Fail(format!("{terms:?}: {e}")),
        }
    });
    ("multisets T of length 3..=5 with ≥3 nonzero terms; T + (0,0,0)".into(), tally)
}

fn naive_restricted(members: &[Residue], p: Modulus) -> u64 {
    let mut out = 0u64;
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            out |= 1 << p.add(a, b);
        }
    }
    out
}

fn verify_eh(p: Modulus) -> (String, Tally) {
    let n = p.n();
    let items: Vec<u64> = (0u64..1 << n).filter(|b| b.count_ones() >= 2).collect();
    let tally = run(items, |&bits| {
        let x = ResidueSet::from_residues(p, (0..n).filter(|i| bits >> i & 1 == 1)).unwrap();
        let r = restricted_sumset(&x);
        if r.bits() != naive_restricted(&x.to_vec(), p) {
            return Outcome::Fail(format!("{x:?}: bitset and pairwise restricted sums differ"));
        }
        if r.len() == n as usize || r.len() + 3 >= 2 * x.len() {
            Outcome::Pass
        } else {
            Outcome::Fail(format!("{x:?}: |X ∔ X| = {}", r.len()))
        }
    });
    ("all subsets with |X| ≥ 2".into(), tally)
}

fn verify_cd(p: Modulus) -> (String, Tally) {
    let n = p.n();
    let full = 1u64 << n;
    // One work item per X; every nonempty Y is scanned inside.
    let items: Vec<u64> = (1..full).collect();
    let outcomes: Vec<(u64, Vec<String>)> = items
        .par_iter()
        .map(|&xb| {
            let x = ResidueSet::from_residues(p, (0..n).filter(|i| xb >> i & 1 == 1)).unwrap();
            let xs = x.to_vec();
            let mut fails = Vec::new();
            for yb in 1..full {
                let y = ResidueSet::from_residues(p, (0..n).filter(|i| yb >> i & 1 == 1)).unwrap();
                let s = sumset(&x, &y).unwrap();
                let mut naive = 0u64;
                for &a in &xs {
                    for b in y.iter() {
                        naive |= 1 << p.add(a, b);
                    }
                }
                let bound = (x.len() + y.len() - 1).min(n as usize);
                if s.bits() != naive || s.len() < bound {
                    fails.push(format!("X={x:?} Y={y:?}: |X+Y| = {}", s.len()));
                }
            }
            (full - 1, fails)
        })
        .collect();
    let mut checked = 0;
    let mut fails = Vec::new();
    for (c, f) in outcomes {
        checked += c;
        fails.extend(f);
    }
    ("all pairs of nonempty subsets".into(), (checked, 0, fails))
}

fn same_coset_pairs(p: Modulus) -> Vec<(Residue, Residue)> {
    let q = qr(p).to_vec();
    let nq = quadratic_nonresidues(p).unwrap().to_vec();
    let mut out = Vec::new();
    for set in [&q, &nq] {
        for &x in set.iter() {
            for &y in set.iter() {
                if x != y {
                    out.push((x, y));
                }
            }
        }
    }
    out
}

/// NSPART (`residues_only`: x, x' ∈ Q_p, z ∈ Q_p ∔ Q_p) or NS (both
/// cosets, z ∈ U(p)).
fn verify_pair(p: Modulus, all_units: bool) -> (String, Tally) {
    let q = qr(p);
    let (pairs, zs, domain) = if all_units {
        (
            same_coset_pairs(p),
            units(p).to_vec(),
            "t ∈ Z_p, z ∈ U(p), distinct same-coset x, x'",
        )
    } else {
        let qv = q.to_vec();
        let pairs = qv
            .iter()
            .flat_map(|&x| qv.iter().map(move |&y| (x, y)))
            .filter(|(x, y)| x != y)
            .collect();
        (
            pairs,
            restricted_sumset(&q).to_vec(),
            "t ∈ Z_p, z ∈ Q_p ∔ Q_p, distinct x, x' ∈ Q_p",
        )
    };
    let mut items = Vec::new();
    for &(x, x2) in &pairs {
        for &z in &zs {
            for t in 0..p.n() {
                items.push((x, x2, z, t));
            }
        }
    }
    let tally = run(items, |&(x, x2, z, t)| {
        let qv = q.to_vec();
        let exists = qv.iter().cartesian_product(&qv).any(|(&c, &c2)| {
            p.add(p.mul(c, x), p.mul(c2, x2)) == z && p.add(c, c2) != t
        });
        if !exists {
            return Outcome::Fail(format!("x={x} x'={x2} z={z} t={t}: no solution by enumeration"));
        }
        match solve_pair_avoiding_trace(x, x2, z, t, p) {
            Ok((c, c2))
                if q.contains(c)
                    && q.contains(c2)
                    && p.add(p.mul(c, x), p.mul(c2, x2)) == z
                    && p.add(c, c2) != t =>
            {
                Outcome::Pass
            }
            Ok(pair) => Outcome::Fail(format!("x={x} x'={x2} z={z} t={t}: bad pair {pair:?}")),
            Err(e) => Outcome::Fail(format!("x={x} x'={x2} z={z} t={t}: {e}")),
        }
    });
    (domain.into(), tally)
}

fn check_pair_combo(terms: &[Residue], x: Residue, x2: Residue, p: Modulus, q: &ResidueSet, w: &WeightPair) -> Outcome {
    let mut all = terms.to_vec();
    all.extend([x, x2]);
    let grid = full_cover_grid(&all, w);
    if !(1..p.n()).any(|t| grid.contains(0, t)) {
        return Outcome::Fail(format!("{terms:?} + ({x},{x2}): no nonzero-trace zero-sum by grid"));
    }
    let s = Sequence::new(p, terms.to_vec()).unwrap();
    match sequence_pair_combo(&s, x, x2, p) {
        Ok(c) if c.is_consistent(&all, q) && c.value == 0 && c.trace != 0 => Outcome::Pass,
        Ok(c) => Outcome::Fail(format!("{terms:?} + ({x},{x2}): bad combo {c:?}")),
        Err(e) => Outcome::Fail(format!("{terms:?} + ({x},{x2}): {e}")),
    }
}

fn verify_sequence_pair(p: Modulus, min_nonzero: usize, max_len: usize) -> (String, Tally) {
    let q = qr(p);
    let w = qp1_weights(p);
    let seqs = sequences_with_nonzero(p, min_nonzero..=max_len, min_nonzero);
    let pairs = same_coset_pairs(p);
    let items: Vec<(usize, usize)> = (0..seqs.len())
        .cartesian_product(0..pairs.len())
        .collect();
    let tally = run(items, |&(si, pi)| {
        let (x, x2) = pairs[pi];
        check_pair_combo(&seqs[si], x, x2, p, &q, &w)
    });
    (
        format!(
            "multisets S of length {min_nonzero}..={max_len} with ≥{min_nonzero} nonzero terms × distinct same-coset x, x'"
        ),
        tally,
    )
}

fn verify_l2(p: Modulus) -> (String, Tally) {
    let w = qp1_weights(p);
    let nonzero = units(p).to_vec();
    let items: Vec<Vec<Residue>> = (3..=5).flat_map(|k| multisets(&nonzero, k)).collect();
    let minus_one = p.neg(1);
    let tally = run(items, |terms| {
        let t_seq = Sequence::new(p, terms.clone()).unwrap();
        let combo = match qp_zero_sum_combo(&t_seq, p) {
            Ok(c) => c,
            Err(e) => return Outcome::Fail(format!("{terms:?}: {e}")),
        };
        let (full, cert) = if combo.trace != 0 {
            match extend_with_zeros(&t_seq, 2, p, Some(combo)) {
                Ok(r) => r,
                Err(e) => return Outcome::Fail(format!("{terms:?}: {e}")),
            }
        } else {
            // T is already (Q_p, 1); (0, 0) closes with weights (1, −1).
            let mut all = terms.clone();
            all.extend([0, 0]);
            let full = Sequence::new(p, all).unwrap();
            let mut a = combo.coefficients;
            a.extend([1, minus_one]);
            let cert = Certificate {
                n: p.n(),
                indices: (0..full.len()).collect(),
                b: vec![1; a.len()],
                a,
                parent_hash: full.digest(),
            };
            (full, cert)
        };
        match check_full_cover(&full, &cert, &w) {
            Some(f) => Outcome::Fail(f),
            None => Outcome::Pass,
        }
    });
    ("two zeros plus 3..=5 nonzero terms (multisets)".into(), tally)
}

fn verify_nsc(p: Modulus) -> (String, Tally) {
    let q = qr(p);
    let u = units(p).to_vec();
    let items: Vec<Vec<Residue>> = u.iter().copied().permutations(3).collect();
    let tally = run(items, |xs| {
        if !brute_nonzero_trace(xs, &q) {
            return Outcome::Fail(format!("{xs:?}: enumeration finds no combo"));
        }
        let cos: Vec<Coset> = xs.iter().map(|&x| coset_of(x, p).unwrap()).collect();
        let (i, j) = [(0, 1), (0, 2), (1, 2)]
            .into_iter()
            .find(|&(i, j)| cos[i] == cos[j])
            .expect("three units, two cosets");
        let k = 3 - i - j;
        let s = Sequence::new(p, vec![xs[k]]).unwrap();
        match sequence_pair_combo(&s, xs[i], xs[j], p) {
            Ok(c) => {
                // Reorder coefficients back to (x_1, x_2, x_3).
                let mut coeffs = [0; 3];
                coeffs[k] = c.coefficients[0];
                coeffs[i] = c.coefficients[1];
                coeffs[j] = c.coefficients[2];
                let combo = WeightedCombo::new(p, xs, coeffs.to_vec());
                if combo.is_consistent(xs, &q) && combo.value == 0 && combo.trace != 0 {
                    Outcome::Pass
                } else {
                    Outcome::Fail(format!("{xs:?}: bad combo {combo:?}"))
                }
            }
            Err(e) => Outcome::Fail(format!("{xs:?}: {e}")),
        }
    });
    ("ordered triples of distinct nonzero residues".into(), tally)
}

fn verify_ls(p: Modulus) -> (String, Tally) {
    let q = qr(p);
    let mut items = same_coset_pairs(p);
    items.extend(units(p).iter().map(|x| (x, x)));
    let tally = run(items, |&(x, y)| {
        let sum = sumset(&dilate(&q, x).unwrap(), &dilate(&q, y).unwrap()).unwrap();
        if !sum.contains(0) {
            return Outcome::Fail(format!("0 ∉ {x}Q + {y}Q"));
        }
        match same_coset_zero_pair(x, y, p) {
            Ok((a, b)) if q.contains(a) && q.contains(b) && p.add(p.mul(a, x), p.mul(b, y)) == 0 => {
                Outcome::Pass
            }
            Ok(pair) => Outcome::Fail(format!("({x},{y}): bad pair {pair:?}")),
            Err(e) => Outcome::Fail(format!("({x},{y}): {e}")),
        }
    });
    ("same-coset pairs (x, y), x = y allowed".into(), tally)
}

fn short_sequences(p: Modulus) -> Vec<Vec<Residue>> {
    let vals = all_residues(p);
    let mut out: Vec<Vec<Residue>> = vals.iter().map(|&x| vec![x]).collect();
    out.extend(vals.iter().flat_map(|&x| vals.iter().map(move |&y| vec![x, y])));
    out
}

fn verify_qp1(p: Modulus) -> (String, Tally) {
    let w = qp1_weights(p);
    let tally = run(short_sequences(p), |terms| {
        let s = Sequence::new(p, terms.clone()).unwrap();
        let grid = is_ab_zero_sum(&s, &w).unwrap().is_some();
        let brute = brute_ab_zero_sum(terms, &w);
        if grid || brute {
            Outcome::Fail(format!("{terms:?} is a (Q_p,1)-weighted zero-sum (grid={grid}, enum={brute})"))
        } else {
            Outcome::Pass
        }
    });
    ("all sequences of length 1 and 2".into(), tally)
}

fn verify_qp2(p: Modulus) -> (String, Tally) {
    let q = qr(p).to_vec();
    let seqs = short_sequences(p);
    let subsets: Vec<ResidueSet> = (1..=q.len())
        .flat_map(|k| q.iter().copied().combinations(k))
        .map(|b| ResidueSet::from_residues(p, b).unwrap())
        .collect();
    let items: Vec<(usize, usize)> = (0..subsets.len()).cartesian_product(0..seqs.len()).collect();
    let tally = run(items, |&(bi, si)| {
        let w = WeightPair::new(qr(p), subsets[bi]).unwrap();
        let terms = &seqs[si];
        let s = Sequence::new(p, terms.clone()).unwrap();
        let grid = is_ab_zero_sum(&s, &w).unwrap().is_some();
        let brute = brute_ab_zero_sum(terms, &w);
        if grid || brute {
            Outcome::Fail(format!("{terms:?} is (Q_p,{:?})-weighted zero-sum", subsets[bi]))
        } else {
            Outcome::Pass
        }
    });
    ("nonempty B ⊆ Q_p × sequences of length 1 and 2".into(), tally)
}

fn verify_q51(p: Modulus) -> (String, Tally) {
    let w = qp1_weights(p);
    let items: Vec<Vec<Residue>> = (0..5).map(|_| 0..5u32).multi_cartesian_product().collect();
    let tally = run(items, |terms| {
        let s = Sequence::new(p, terms.clone()).unwrap();
        let grid = is_ab_zero_sum(&s, &w).unwrap().is_some();
        let brute = brute_ab_zero_sum(terms, &w);
        let plain = terms.iter().sum::<u32>() % 5 == 0;
        if grid == plain && brute == plain {
            Outcome::Pass
        } else {
            Outcome::Fail(format!("{terms:?}: grid={grid} enum={brute} zero-sum={plain}"))
        }
    });
    ("all 5^5 sequences".into(), tally)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u32) -> Modulus {
        Modulus::prime(p).unwrap()
    }

    #[test]
    fn three_cover_examples() {
        assert_eq!(solve_three_cover([1, 1, 1], 0, m(7)), Ok([1, 2, 4]));
        for t in 0..7 {
            assert!(solve_three_cover([1, 1, 1], t, m(7)).is_ok());
        }
        assert_eq!(solve_three_cover([1, 1, 1], 0, m(5)), Err(Error::PrimeTooSmall(5)));
        assert_eq!(solve_three_cover([1, 2, 3], 0, m(3)), Err(Error::PrimeTooSmall(3)));
        assert!(matches!(
            solve_three_cover([0, 1, 1], 0, m(7)),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn zero_sum_combo_examples() {
        let q7 = qr(m(7));
        let s = Sequence::new(m(7), vec![1, 2, 3]).unwrap();
        let c = qp_zero_sum_combo(&s, m(7)).unwrap();
        assert_eq!(c.value, 0);
        assert!(c.is_consistent(s.terms(), &q7));

        let ones = Sequence::new(m(7), vec![1; 6]).unwrap();
        assert_eq!(qp_zero_sum_combo(&ones, m(7)).unwrap().value, 0);

        let two = Sequence::new(m(7), vec![1, 0, 2]).unwrap();
        assert!(matches!(
            qp_zero_sum_combo(&two, m(7)),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn pair_avoiding_trace_examples() {
        let p = m(11);
        let (c, c2) = solve_pair_avoiding_trace(1, 3, 1, 0, p).unwrap();
        assert_eq!((c, c2), (3, 3));
        let q = qr(p);
        assert!(q.contains(c) && q.contains(c2));

        let p7 = m(7);
        for t in 0..7 {
            let (c, c2) = solve_pair_avoiding_trace(1, 2, 3, t, p7).unwrap();
            assert_eq!(p7.add(c, p7.mul(c2, 2)), 3);
            assert_ne!(p7.add(c, c2), t);
        }
        assert!(matches!(
            solve_pair_avoiding_trace(2, 2, 3, 0, p7),
            Err(Error::HypothesisUnmet(_))
        ));
        // 1 ∈ Q_7 but 3 ∈ N_7.
        assert!(matches!(
            solve_pair_avoiding_trace(1, 3, 3, 0, p7),
            Err(Error::HypothesisUnmet(_))
        ));
        // 1 ∉ Q_7 ∔ Q_7 = {3, 5, 6}.
        assert!(matches!(
            solve_pair_avoiding_trace(1, 2, 1, 0, p7),
            Err(Error::HypothesisUnmet(_))
        ));
    }

    #[test]
    fn extend_with_zeros_examples() {
        let w11 = qp1_weights(m(11));
        let t = Sequence::new(m(11), vec![1, 2, 3]).unwrap();
        let (full, cert) = extend_with_zeros(&t, 3, m(11), None).unwrap();
        assert_eq!(full.terms(), &[1, 2, 3, 0, 0, 0]);
        assert_eq!(check_certificate(&full, &w11, &cert, SubseqMode::AnyNonempty), Ok(()));

        // Value and trace coincide on all-ones, so no nonzero-trace combo.
        let ones = Sequence::new(m(7), vec![1, 1, 1]).unwrap();
        assert!(matches!(
            extend_with_zeros(&ones, 2, m(7), None),
            Err(Error::HypothesisUnmet(_))
        ));

        let w13 = qp1_weights(m(13));
        let t = Sequence::new(m(13), vec![1, 4, 2, 5, 7]).unwrap();
        let (full, cert) = extend_with_zeros(&t, 2, m(13), None).unwrap();
        assert_eq!(check_certificate(&full, &w13, &cert, SubseqMode::AnyNonempty), Ok(()));

        assert!(matches!(
            extend_with_zeros(&t, 4, m(13), None),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn same_coset_pair_law() {
        let p = m(13);
        let q = qr(p);
        for x in q.iter() {
            for y in q.iter() {
                let (a, b) = same_coset_zero_pair(x, y, p).unwrap();
                assert_eq!((a, b), (p.inv(x).unwrap(), p.neg(p.inv(y).unwrap())));
                assert!(q.contains(a) && q.contains(b));
            }
        }
        assert!(same_coset_zero_pair(1, 2, m(7)).is_err());
    }

    #[test]
    fn lemma_ids_parse() {
        for id in LemmaId::ALL {
            assert_eq!(id.name().parse::<LemmaId>().unwrap(), id);
        }
        assert_eq!("three-z".parse::<LemmaId>().unwrap(), LemmaId::ThreeZ);
        assert_eq!(serde_json::to_string(&LemmaId::NsPrime).unwrap(), "\"NS_PRIME\"");
        assert!("nope".parse::<LemmaId>().is_err());
    }

    #[test]
    fn unsupported_primes() {
        assert!(matches!(verify_lemma(LemmaId::Cm, m(5)), Err(Error::UnsupportedPrime { .. })));
        assert!(matches!(verify_lemma(LemmaId::L2, m(7)), Err(Error::UnsupportedPrime { .. })));
        assert!(matches!(verify_lemma(LemmaId::Qp1, m(13)), Err(Error::UnsupportedPrime { .. })));
        assert!(matches!(verify_lemma(LemmaId::Q51, m(7)), Err(Error::UnsupportedPrime { .. })));
        assert!(matches!(verify_lemma(LemmaId::Ns, m(7)), Err(Error::UnsupportedPrime { .. })));
    }

    #[test]
    fn small_reports_pass() {
        for (id, p) in [(LemmaId::Q51, 5), (LemmaId::Qp1, 7), (LemmaId::Eh, 7), (LemmaId::Cm, 7)] {
            let r = verify_lemma(id, m(p)).unwrap();
            assert!(r.passed(), "{id} at {p}: {:?}", r.counterexamples);
            assert!(r.inputs_checked > 0);
        }
        assert_eq!(verify_lemma(LemmaId::Q51, m(5)).unwrap().inputs_checked, 3125);
        assert_eq!(verify_lemma(LemmaId::Eh, m(5)).unwrap().inputs_checked, 32 - 6);
    }
}
