//! Deciding `(A, B)`-weighted zero-sums and extracting certificates.
//!
//! All searches run a dynamic program over pair states `(s, t)` where
//! `s = Σ a_i x_i` and `t = Σ b_i a_i`. A [`PairGrid`] holds one bit per
//! state: row `s`, bit `t`. Suffix layers are kept so that weights can be
//! chosen front to back, smallest `(a, b)` first, while a completion to
//! `(0, 0)` still exists.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ring::{rotate, Modulus, Residue, WeightPair};

/// An ordered list of residues modulo a common `n`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSequence")]
pub struct Sequence {
    #[serde(rename = "n")]
    modulus: Modulus,
    terms: Vec<Residue>,
}

#[derive(Deserialize)]
struct RawSequence {
    n: u32,
    terms: Vec<u32>,
}

impl TryFrom<RawSequence> for Sequence {
    type Error = Error;
    fn try_from(raw: RawSequence) -> Result<Self> {
        Sequence::new(Modulus::new(raw.n)?, raw.terms)
    }
}

impl Sequence {
    pub fn new(modulus: Modulus, terms: Vec<u32>) -> Result<Self> {
        for &x in &terms {
            modulus.check(x)?;
        }
        Ok(Sequence { modulus, terms })
    }

    /// Reduces every term instead of rejecting out-of-range values.
    pub fn from_signed(modulus: Modulus, terms: &[i64]) -> Self {
        Sequence {
            modulus,
            terms: terms.iter().map(|&x| modulus.reduce(x)).collect(),
        }
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    #[inline]
    pub fn terms(&self) -> &[Residue] {
        &self.terms
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, x: Residue) -> Result<()> {
        self.terms.push(self.modulus.check(x)?);
        Ok(())
    }

    /// Concatenation `self + other`.
    pub fn concat(&self, other: &Sequence) -> Result<Sequence> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus.n(), other.modulus.n()));
        }
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Ok(Sequence {
            modulus: self.modulus,
            terms,
        })
    }

    /// `u·S`, term-wise.
    pub fn scale(&self, u: Residue) -> Sequence {
        let m = self.modulus;
        Sequence {
            modulus: m,
            terms: self.terms.iter().map(|&x| m.mul(u, x)).collect(),
        }
    }

    pub fn nonzero_count(&self) -> usize {
        self.terms.iter().filter(|&&x| x != 0).count()
    }

    /// Hex SHA-256 of the terms, each encoded as a little-endian `u32`.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for &x in &self.terms {
            h.update(x.to_le_bytes());
        }
        hex::encode(h.finalize())
    }
}

impl std::fmt::Debug for Sequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} mod {}", self.terms, self.modulus.n())
    }
}

/// `S + x`.
pub fn translate(s: &Sequence, x: Residue) -> Sequence {
    let m = s.modulus;
    Sequence {
        modulus: m,
        terms: s.terms.iter().map(|&t| m.add(t, x % m.n())).collect(),
    }
}

/// Which subsequences count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubseqMode {
    AnyNonempty,
    Contiguous,
    ExactLength(usize),
}

impl SubseqMode {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SubseqMode::ExactLength(0) => Err(Error::InvalidMode(
                "exact length must be at least 1".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// A qualifying subsequence together with its weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: u32,
    pub indices: Vec<usize>,
    pub a: Vec<Residue>,
    pub b: Vec<Residue>,
    pub parent_hash: String,
}

/// Reachable `(s, t)` pairs, one row per `s`.
#[derive(Clone, PartialEq, Eq)]
pub struct PairGrid {
    n: u32,
    mask: u64,
    rows: Vec<u64>,
}

impl PairGrid {
    pub fn empty(m: Modulus) -> Self {
        PairGrid {
            n: m.n(),
            mask: m.mask(),
            rows: vec![0; m.n() as usize],
        }
    }

    /// The grid holding only `(0, 0)`.
    pub fn origin(m: Modulus) -> Self {
        let mut g = Self::empty(m);
        g.rows[0] = 1;
        g
    }

    #[inline]
    pub fn contains(&self, s: Residue, t: Residue) -> bool {
        self.rows[s as usize] >> t & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, s: Residue, t: Residue) {
        self.rows[s as usize] |= 1 << t;
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn union_with(&mut self, other: &PairGrid) {
        for (r, o) in self.rows.iter_mut().zip(&other.rows) {
            *r |= o;
        }
    }

    /// `self ∪= other + (u, v)`.
    #[inline]
    pub fn or_shifted(&mut self, other: &PairGrid, u: Residue, v: Residue) {
        let n = self.n as usize;
        let u = u as usize;
        for (s, &row) in other.rows.iter().enumerate() {
            if row != 0 {
                let dst = if s + u >= n { s + u - n } else { s + u };
                self.rows[dst] |= rotate(row, v, self.n, self.mask);
            }
        }
    }

    /// `self ∪= other + steps`.
    pub fn or_stepped(&mut self, other: &PairGrid, steps: &[(Residue, Residue)]) {
        for &(u, v) in steps {
            self.or_shifted(other, u, v);
        }
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }
}

/// `{(a·x, b·a) : a ∈ A, b ∈ B}`, sorted and deduplicated.
pub fn step_set(x: Residue, w: &WeightPair) -> Vec<(Residue, Residue)> {
    let m = w.modulus();
    let mut steps: Vec<_> = w
        .a()
        .iter()
        .flat_map(|a| w.b().iter().map(move |b| (m.mul(a, x), m.mul(b, a))))
        .collect();
    steps.sort_unstable();
    steps.dedup();
    steps
}

/// Weight choices `(a, b)` in lexicographic residue order.
fn weight_choices(w: &WeightPair) -> Vec<(Residue, Residue)> {
    w.a()
        .iter()
        .flat_map(|a| w.b().iter().map(move |b| (a, b)))
        .collect()
}

/// Suffix layers: `R_k = {(0,0)}`, `R_i = R_{i+1} + step(x_i)`, i.e. `R_i`
/// holds the full-cover sums of `x_i, …, x_{k-1}`.
fn full_cover_suffixes(terms: &[Residue], w: &WeightPair) -> Vec<PairGrid> {
    let m = w.modulus();
    let mut layers = vec![PairGrid::origin(m)];
    for &x in terms.iter().rev() {
        let mut next = PairGrid::empty(m);
        next.or_stepped(layers.last().unwrap(), &step_set(x, w));
        layers.push(next);
    }
    layers.reverse();
    layers
}

/// All `(Σ a_i x_i, Σ b_i a_i)` reachable when every term is weighted.
pub fn full_cover_grid(terms: &[Residue], w: &WeightPair) -> PairGrid {
    let m = w.modulus();
    let mut acc = PairGrid::origin(m);
    for &x in terms {
        let mut next = PairGrid::empty(m);
        next.or_stepped(&acc, &step_set(x, w));
        acc = next;
    }
    acc
}

/// Lexicographically least weights `(a_i), (b_i)` covering every term with
/// `(Σ a_i x_i, Σ b_i a_i) = target`, if any exist.
pub fn full_cover_combo(
    terms: &[Residue],
    w: &WeightPair,
    target: (Residue, Residue),
) -> Option<(Vec<Residue>, Vec<Residue>)> {
    let m = w.modulus();
    let suffix = full_cover_suffixes(terms, w);
    if !suffix[0].contains(target.0, target.1) {
        return None;
    }
    let choices = weight_choices(w);
    // (s, t) is what the remaining terms still have to contribute.
    let (mut s, mut t) = target;
    let mut a_out = Vec::with_capacity(terms.len());
    let mut b_out = Vec::with_capacity(terms.len());
    for (i, &x) in terms.iter().enumerate() {
        let &(a, b) = choices
            .iter()
            .find(|&&(a, b)| suffix[i + 1].contains(m.sub(s, m.mul(a, x)), m.sub(t, m.mul(b, a))))
            .expect("suffix invariant: a completion exists");
        a_out.push(a);
        b_out.push(b);
        s = m.sub(s, m.mul(a, x));
        t = m.sub(t, m.mul(b, a));
    }
    debug_assert_eq!((s, t), (0, 0));
    Some((a_out, b_out))
}

/// Full-cover test: `Some` iff the whole of `S` is an `(A, B)`-weighted
/// zero-sum sequence.
pub fn is_ab_zero_sum(s: &Sequence, w: &WeightPair) -> Result<Option<Certificate>> {
    check_modulus(s, w)?;
    if s.is_empty() {
        return Err(Error::EmptySequence);
    }
    Ok(full_cover_combo(&s.terms, w, (0, 0)).map(|(a, b)| Certificate {
        n: s.modulus.n(),
        indices: (0..s.len()).collect(),
        a,
        b,
        parent_hash: s.digest(),
    }))
}

fn check_modulus(s: &Sequence, w: &WeightPair) -> Result<()> {
    if s.modulus != w.modulus() {
        return Err(Error::ModulusMismatch(s.modulus.n(), w.modulus().n()));
    }
    Ok(())
}

/// Exhaustive search for a qualifying subsequence under `mode`.
pub fn find_zero_sum_subsequence(
    s: &Sequence,
    w: &WeightPair,
    mode: SubseqMode,
) -> Result<Option<Certificate>> {
    check_modulus(s, w)?;
    mode.validate()?;
    let found = match mode {
        SubseqMode::Contiguous => find_contiguous(s, w),
        SubseqMode::AnyNonempty => find_any(s, w),
        SubseqMode::ExactLength(len) => {
            if len > s.len() {
                return Err(Error::LengthExceedsSequence {
                    length: len,
                    available: s.len(),
                });
            }
            find_exact(s, w, len)
        }
    };
    Ok(found.map(|(indices, a, b)| Certificate {
        n: s.modulus.n(),
        indices,
        a,
        b,
        parent_hash: s.digest(),
    }))
}

type Found = (Vec<usize>, Vec<Residue>, Vec<Residue>);

fn find_contiguous(s: &Sequence, w: &WeightPair) -> Option<Found> {
    let m = w.modulus();
    let steps: Vec<_> = s.terms.iter().map(|&x| step_set(x, w)).collect();
    for start in 0..s.len() {
        let mut acc = PairGrid::origin(m);
        for end in start..s.len() {
            let mut next = PairGrid::empty(m);
            next.or_stepped(&acc, &steps[end]);
            if next.contains(0, 0) {
                let window = &s.terms[start..=end];
                let (a, b) = full_cover_combo(window, w, (0, 0))
                    .expect("window grid contains the origin");
                return Some(((start..=end).collect(), a, b));
            }
            acc = next;
        }
    }
    None
}

fn find_any(s: &Sequence, w: &WeightPair) -> Option<Found> {
    let m = w.modulus();
    // with_empty[i]: sums over subsets of x_i..x_{k-1}, empty subset included.
    // nonempty[i]: the same over nonempty subsets only.
    let mut with_empty = vec![PairGrid::origin(m)];
    let mut nonempty = vec![PairGrid::empty(m)];
    for &x in s.terms.iter().rev() {
        let steps = step_set(x, w);
        let prev_all = with_empty.last().unwrap();
        let mut all = prev_all.clone();
        all.or_stepped(prev_all, &steps);
        let mut ne = nonempty.last().unwrap().clone();
        ne.or_stepped(prev_all, &steps);
        with_empty.push(all);
        nonempty.push(ne);
    }
    with_empty.reverse();
    nonempty.reverse();
    if !nonempty[0].contains(0, 0) {
        return None;
    }
    let choices = weight_choices(w);
    let (mut rem_s, mut rem_t) = (0, 0);
    let mut picked = Vec::new();
    for (i, &x) in s.terms.iter().enumerate() {
        // Take the term whenever some weight choice still completes.
        let take = choices.iter().find(|&&(a, b)| {
            with_empty[i + 1].contains(m.sub(rem_s, m.mul(a, x)), m.sub(rem_t, m.mul(b, a)))
        });
        if let Some(&(a, b)) = take {
            rem_s = m.sub(rem_s, m.mul(a, x));
            rem_t = m.sub(rem_t, m.mul(b, a));
            picked.push((i, a, b));
        } else if picked.is_empty() {
            debug_assert!(nonempty[i + 1].contains(0, 0));
        }
    }
    debug_assert_eq!((rem_s, rem_t), (0, 0));
    debug_assert!(!picked.is_empty());
    Some(unzip(picked))
}

fn find_exact(s: &Sequence, w: &WeightPair, len: usize) -> Option<Found> {
    let m = w.modulus();
    let k = s.len();
    // suffix[i][c]: sums over c-element subsets of x_i..x_{k-1}.
    let mut last = vec![PairGrid::empty(m); len + 1];
    last[0] = PairGrid::origin(m);
    let mut suffix: Vec<Vec<PairGrid>> = Vec::with_capacity(k + 1);
    suffix.push(last);
    for &x in s.terms.iter().rev() {
        let steps = step_set(x, w);
        let prev = suffix.last().unwrap();
        let mut next = prev.clone();
        for c in 1..=len {
            next[c].or_stepped(&prev[c - 1], &steps);
        }
        suffix.push(next);
    }
    suffix.reverse();
    if !suffix[0][len].contains(0, 0) {
        return None;
    }
    let choices = weight_choices(w);
    let (mut rem_s, mut rem_t, mut c) = (0, 0, len);
    let mut picked = Vec::with_capacity(len);
    for (i, &x) in s.terms.iter().enumerate() {
        if c == 0 {
            break;
        }
        let take = choices.iter().find(|&&(a, b)| {
            suffix[i + 1][c - 1].contains(m.sub(rem_s, m.mul(a, x)), m.sub(rem_t, m.mul(b, a)))
        });
        if let Some(&(a, b)) = take {
            rem_s = m.sub(rem_s, m.mul(a, x));
            rem_t = m.sub(rem_t, m.mul(b, a));
            c -= 1;
            picked.push((i, a, b));
        }
    }
    debug_assert_eq!((rem_s, rem_t, c), (0, 0, 0));
    Some(unzip(picked))
}

fn unzip(picked: Vec<(usize, Residue, Residue)>) -> Found {
    let mut out = (Vec::new(), Vec::new(), Vec::new());
    for (i, a, b) in picked {
        out.0.push(i);
        out.1.push(a);
        out.2.push(b);
    }
    out
}

/// Why a certificate was rejected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateDefect {
    ModulusMismatch,
    ParentHashMismatch,
    Empty,
    LengthMismatch,
    IndexOutOfRange,
    IndicesNotIncreasing,
    NotContiguous,
    WrongSubsequenceLength,
    WeightNotInA,
    WeightNotInB,
    WeightedSumNonzero,
    WeightTraceNonzero,
}

/// Recheck a certificate from scratch with plain integer arithmetic.
pub fn check_certificate(
    s: &Sequence,
    w: &WeightPair,
    c: &Certificate,
    mode: SubseqMode,
) -> std::result::Result<(), CertificateDefect> {
    use CertificateDefect::*;
    let n = s.modulus.n() as u64;
    if c.n as u64 != n || w.modulus().n() as u64 != n {
        return Err(ModulusMismatch);
    }
    if c.parent_hash != s.digest() {
        return Err(ParentHashMismatch);
    }
    if c.indices.is_empty() {
        return Err(Empty);
    }
    if c.indices.len() != c.a.len() || c.indices.len() != c.b.len() {
        return Err(LengthMismatch);
    }
    if c.indices.iter().any(|&i| i >= s.len()) {
        return Err(IndexOutOfRange);
    }
    if c.indices.windows(2).any(|p| p[0] >= p[1]) {
        return Err(IndicesNotIncreasing);
    }
    match mode {
        SubseqMode::Contiguous => {
            if c.indices.windows(2).any(|p| p[1] != p[0] + 1) {
                return Err(NotContiguous);
            }
        }
        SubseqMode::ExactLength(len) => {
            if c.indices.len() != len {
                return Err(WrongSubsequenceLength);
            }
        }
        SubseqMode::AnyNonempty => {}
    }
    if c.a.iter().any(|&a| a as u64 >= n || !w.a().contains(a)) {
        return Err(WeightNotInA);
    }
    if c.b.iter().any(|&b| b as u64 >= n || !w.b().contains(b)) {
        return Err(WeightNotInB);
    }
    let weighted: u64 = c
        .indices
        .iter()
        .zip(&c.a)
        .map(|(&i, &a)| a as u64 * s.terms[i] as u64)
        .sum();
    if !weighted.is_multiple_of(n) {
        return Err(WeightedSumNonzero);
    }
    let trace: u64 = c.b.iter().zip(&c.a).map(|(&b, &a)| b as u64 * a as u64).sum();
    if !trace.is_multiple_of(n) {
        return Err(WeightTraceNonzero);
    }
    Ok(())
}

pub fn certificate_is_valid(s: &Sequence, w: &WeightPair, c: &Certificate, mode: SubseqMode) -> bool {
    check_certificate(s, w, c, mode).is_ok()
}
