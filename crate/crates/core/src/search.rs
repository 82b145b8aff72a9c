//! Exact computation of the constants `C_{A,B}(n)`, `D_{A,B}(n)` and
//! `E_{A,B}(n)`.
//!
//! Goodness (having a qualifying subsequence) is monotone under appending a
//! term, so the bad sequences form a prefix-closed tree. The search walks it
//! level by level: level `k` holds one canonical representative per orbit
//! of bad length-`k` sequences, and the constant is the first empty level.
//!
//! Orbits come from two symmetries that preserve goodness:
//! - dilation `S ↦ u·S` by a unit `u` (always valid);
//! - translation `S ↦ S + x`, valid only when `B = {1}`.
//!
//! For `D` and `E` the term order is irrelevant and nodes are sorted
//! multisets. For `C` the order matters and nodes are plain sequences.
//! Every bad child of a bad node is canonicalized and deduplicated, so a
//! level is complete whenever its parent level is.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{find_zero_sum_subsequence, step_set, PairGrid, Sequence, SubseqMode};
use crate::error::{Error, Result};
use crate::ring::{units, Modulus, Residue, WeightPair};

/// Which constant to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConstantKind {
    /// Contiguous subsequences.
    C,
    /// Arbitrary nonempty subsequences.
    D,
    /// Subsequences of length exactly `n`.
    E,
}

impl ConstantKind {
    pub const ALL: [ConstantKind; 3] = [ConstantKind::C, ConstantKind::D, ConstantKind::E];

    pub fn mode(&self, m: Modulus) -> SubseqMode {
        match self {
            ConstantKind::C => SubseqMode::Contiguous,
            ConstantKind::D => SubseqMode::AnyNonempty,
            ConstantKind::E => SubseqMode::ExactLength(m.n() as usize),
        }
    }

    /// Upper bounds `C ≤ n²`, `D ≤ E ≤ 2n − 1`.
    pub fn default_cap(&self, m: Modulus) -> usize {
        let n = m.n() as usize;
        match self {
            ConstantKind::C => n * n,
            ConstantKind::D | ConstantKind::E => 2 * n - 1,
        }
    }

    fn is_multiset(&self) -> bool {
        !matches!(self, ConstantKind::C)
    }
}

impl std::fmt::Display for ConstantKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ConstantKind::C => "C",
            ConstantKind::D => "D",
            ConstantKind::E => "E",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for ConstantKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "C" | "c" => Ok(ConstantKind::C),
            "D" | "d" => Ok(ConstantKind::D),
            "E" | "e" => Ok(ConstantKind::E),
            _ => Err(Error::InvalidMode(format!("unknown constant kind {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Longest length searched; `None` means the kind's default bound.
    pub cap: Option<usize>,
    pub use_scaling_symmetry: bool,
    /// `None` means "on iff B = {1}". Translation is never used when
    /// `B ≠ {1}`, whatever this says.
    pub use_translation_symmetry: Option<bool>,
    pub shards: usize,
    pub checkpoint_interval: Duration,
    pub checkpoint_path: Option<PathBuf>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            cap: None,
            use_scaling_symmetry: true,
            use_translation_symmetry: None,
            shards: 1,
            checkpoint_interval: Duration::from_secs(60),
            checkpoint_path: None,
        }
    }
}

impl SearchConfig {
    /// No symmetry reduction at all (multiset ordering for D/E still applies).
    pub fn without_symmetry() -> Self {
        SearchConfig {
            use_scaling_symmetry: false,
            use_translation_symmetry: Some(false),
            ..Default::default()
        }
    }

    pub fn with_shards(mut self, shards: usize) -> Self {
        self.shards = shards;
        self
    }

    fn translation_enabled(&self, w: &WeightPair) -> bool {
        w.b_is_ones() && self.use_translation_symmetry.unwrap_or(true)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Children whose goodness was decided.
    pub nodes_explored: u64,
    /// Bad children dropped because another member of their orbit was kept.
    pub orbits_pruned: u64,
    /// Number of canonical bad sequences at each length, starting at 0.
    pub level_sizes: Vec<usize>,
    pub wall_time_secs: f64,
    /// Depth the search was resumed from, if it started from a checkpoint.
    pub resumed_from: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantResult {
    pub kind: ConstantKind,
    pub n: u32,
    pub a: Vec<Residue>,
    pub b: Vec<Residue>,
    pub value: usize,
    /// Lexicographically least canonical bad sequence of length `value − 1`.
    pub witness: Sequence,
    pub stats: SearchStats,
}

/// Whether `s` has a subsequence qualifying for `kind`.
pub fn is_good(s: &Sequence, kind: ConstantKind, w: &WeightPair) -> Result<bool> {
    let m = w.modulus();
    if let SubseqMode::ExactLength(len) = kind.mode(m) {
        if s.len() < len {
            return Ok(false);
        }
    }
    if s.is_empty() {
        return Ok(false);
    }
    Ok(find_zero_sum_subsequence(s, w, kind.mode(m))?.is_some())
}

/// `true` iff `s` has no qualifying subsequence, i.e. it proves the
/// constant exceeds `s.len()`.
pub fn validate_witness(s: &Sequence, kind: ConstantKind, w: &WeightPair) -> Result<bool> {
    Ok(!is_good(s, kind, w)?)
}

/// The symmetry group acting on search nodes.
struct Symmetry {
    n: usize,
    multipliers: Vec<u8>,
    translate: bool,
    multiset: bool,
    mul: Vec<u8>,
}

impl Symmetry {
    fn new(kind: ConstantKind, w: &WeightPair, cfg: &SearchConfig) -> Self {
        let m = w.modulus();
        let n = m.n() as usize;
        let multipliers = if cfg.use_scaling_symmetry {
            units(m).iter().map(|u| u as u8).collect()
        } else {
            vec![1]
        };
        let mut mul = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = ((a * b) % n) as u8;
            }
        }
        Symmetry {
            n,
            multipliers,
            translate: cfg.translation_enabled(w),
            multiset: kind.is_multiset(),
            mul,
        }
    }

    #[inline]
    fn image(&self, u: u8, x: u8, t: u8) -> u8 {
        let v = self.mul[u as usize * self.n + t as usize] as usize + x as usize;
        (if v >= self.n { v - self.n } else { v }) as u8
    }

    /// Canonical form of `node`, written into `out`. For multisets `node`
    /// need not be sorted.
    fn canonicalize_into(&self, node: &[u8], out: &mut Vec<u8>) {
        out.clear();
        if node.is_empty() {
            return;
        }
        if self.multiset {
            self.canonical_multiset(node, out);
        } else {
            self.canonical_ordered(node, out);
        }
    }

    fn canonical_ordered(&self, node: &[u8], out: &mut Vec<u8>) {
        let mut cand = Vec::with_capacity(node.len());
        let mut first = true;
        for &u in &self.multipliers {
            // With translation the least image always starts with 0.
            let x = if self.translate {
                let ut = self.mul[u as usize * self.n + node[0] as usize] as usize;
                ((self.n - ut) % self.n) as u8
            } else {
                0
            };
            cand.clear();
            cand.extend(node.iter().map(|&t| self.image(u, x, t)));
            if first || cand < *out {
                out.clear();
                out.extend_from_slice(&cand);
                first = false;
            }
        }
    }

    /// A sorted sequence is lexicographically least exactly when its count
    /// vector `(c_0, c_1, …)` is lexicographically greatest.
    fn canonical_multiset(&self, node: &[u8], out: &mut Vec<u8>) {
        let n = self.n;
        let mut counts = vec![0u16; n];
        for &t in node {
            counts[t as usize] += 1;
        }
        let top = *counts.iter().max().unwrap();
        let mut best = vec![0u16; n];
        let mut cand = vec![0u16; n];
        let mut have = false;
        let mut consider = |u: u8, x: u8, best: &mut Vec<u16>| {
            cand.iter_mut().for_each(|c| *c = 0);
            for (t, &c) in counts.iter().enumerate() {
                if c != 0 {
                    cand[self.image(u, x, t as u8) as usize] = c;
                }
            }
            if !have || cand > *best {
                best.copy_from_slice(&cand);
                have = true;
            }
        };
        for &u in &self.multipliers {
            if self.translate {
                // Only translations sending a most frequent term to 0.
                for (i, &c) in counts.iter().enumerate() {
                    if c == top {
                        let ui = self.mul[u as usize * n + i] as usize;
                        consider(u, ((n - ui) % n) as u8, &mut best);
                    }
                }
            } else {
                consider(u, 0, &mut best);
            }
        }
        for (t, &c) in best.iter().enumerate() {
            out.extend(std::iter::repeat_n(t as u8, c as usize));
        }
    }
}

/// The canonical representative of the orbit of `s` used by the search.
pub fn canonicalize(
    s: &Sequence,
    kind: ConstantKind,
    w: &WeightPair,
    cfg: &SearchConfig,
) -> Sequence {
    let sym = Symmetry::new(kind, w, cfg);
    let node: Vec<u8> = s.terms().iter().map(|&t| t as u8).collect();
    let mut out = Vec::new();
    sym.canonicalize_into(&node, &mut out);
    Sequence::new(s.modulus(), out.into_iter().map(u32::from).collect())
        .expect("canonical form stays in range")
}

/// Per-term data for the incremental goodness test.
struct Expander {
    kind: ConstantKind,
    m: Modulus,
    steps: Vec<Vec<(Residue, Residue)>>,
    /// `(−u, −v)` for every step `(u, v)` of each term.
    neg_steps: Vec<Vec<(Residue, Residue)>>,
    sym: Symmetry,
}

impl Expander {
    fn new(kind: ConstantKind, w: &WeightPair, cfg: &SearchConfig) -> Self {
        let m = w.modulus();
        let steps: Vec<_> = (0..m.n()).map(|x| step_set(x, w)).collect();
        let neg_steps = steps
            .iter()
            .map(|st| st.iter().map(|&(u, v)| (m.neg(u), m.neg(v))).collect())
            .collect();
        Expander {
            kind,
            m,
            steps,
            neg_steps,
            sym: Symmetry::new(kind, w, cfg),
        }
    }

    /// Grid `G` such that appending `x` makes the node good iff
    /// `(−u, −v) ∈ G` for some step `(u, v)` of `x`. `None` means no child
    /// can be good yet (E below length `n − 1`).
    fn completion_grid(&self, node: &[u8]) -> Option<PairGrid> {
        let m = self.m;
        match self.kind {
            ConstantKind::C => {
                // Union of all suffix full-cover grids, empty suffix included.
                let mut suffix = PairGrid::origin(m);
                let mut all = suffix.clone();
                for &x in node.iter().rev() {
                    let mut next = PairGrid::empty(m);
                    next.or_stepped(&suffix, &self.steps[x as usize]);
                    all.union_with(&next);
                    suffix = next;
                }
                Some(all)
            }
            ConstantKind::D => {
                let mut all = PairGrid::origin(m);
                for &x in node {
                    let prev = all.clone();
                    all.or_stepped(&prev, &self.steps[x as usize]);
                }
                Some(all)
            }
            ConstantKind::E => {
                let need = m.n() as usize - 1;
                if node.len() < need {
                    return None;
                }
                let mut layers = vec![PairGrid::empty(m); need + 1];
                layers[0] = PairGrid::origin(m);
                for (i, &x) in node.iter().enumerate() {
                    for c in (1..=need.min(i + 1)).rev() {
                        let (lo, hi) = layers.split_at_mut(c);
                        hi[0].or_stepped(&lo[c - 1], &self.steps[x as usize]);
                    }
                }
                layers.pop()
            }
        }
    }

    fn child_is_good(&self, grid: Option<&PairGrid>, x: usize) -> bool {
        match grid {
            None => false,
            Some(g) => self.neg_steps[x].iter().any(|&(u, v)| g.contains(u, v)),
        }
    }

    /// Canonical bad children of every node in `parents`, appended to `out`
    /// as fixed-width records.
    fn expand(&self, parents: &[u8], width: usize, out: &mut Vec<u8>) -> (u64, u64) {
        let n = self.m.n() as usize;
        let mut explored = 0u64;
        let mut bad = 0u64;
        let mut child = Vec::with_capacity(width + 1);
        let mut canon = Vec::with_capacity(width + 1);
        let records: Box<dyn Iterator<Item = &[u8]>> = if width == 0 {
            Box::new(std::iter::once(&parents[..0]))
        } else {
            Box::new(parents.chunks_exact(width))
        };
        for node in records {
            let grid = self.completion_grid(node);
            for x in 0..n {
                explored += 1;
                if self.child_is_good(grid.as_ref(), x) {
                    continue;
                }
                bad += 1;
                child.clear();
                child.extend_from_slice(node);
                child.push(x as u8);
                self.sym.canonicalize_into(&child, &mut canon);
                out.extend_from_slice(&canon);
            }
        }
        (explored, bad)
    }
}

/// Sort fixed-width records and drop duplicates.
fn sort_dedup(data: Vec<u8>, width: usize) -> Vec<u8> {
    if width == 0 {
        return if data.is_empty() { data } else { Vec::new() };
    }
    let mut recs: Vec<&[u8]> = data.chunks_exact(width).collect();
    recs.par_sort_unstable();
    recs.dedup();
    let mut out = Vec::with_capacity(recs.len() * width);
    for r in recs {
        out.extend_from_slice(r);
    }
    out
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    version: u32,
    kind: ConstantKind,
    n: u32,
    a: Vec<Residue>,
    b: Vec<Residue>,
    scaling: bool,
    translation: bool,
    depth: usize,
    /// Canonical bad sequences of length `depth`.
    frontier: Vec<Vec<u8>>,
    nodes_explored: u64,
    orbits_pruned: u64,
    level_sizes: Vec<usize>,
    /// `(nodes_explored, bad_children)` per shard for the last level.
    shard_stats: Vec<(u64, u64)>,
}

pub const CHECKPOINT_VERSION: u32 = 1;

/// Mutable state of a running search.
struct Frontier {
    depth: usize,
    /// `level_sizes[depth]` records of width `depth`.
    data: Vec<u8>,
    stats: SearchStats,
    shard_stats: Vec<(u64, u64)>,
}

fn write_checkpoint(
    path: &Path,
    kind: ConstantKind,
    w: &WeightPair,
    cfg: &SearchConfig,
    sym: &Symmetry,
    fr: &Frontier,
) -> Result<()> {
    debug_assert!(fr.depth > 0);
    let frontier = fr.data.chunks_exact(fr.depth).map(|c| c.to_vec()).collect();
    let ck = Checkpoint {
        version: CHECKPOINT_VERSION,
        kind,
        n: w.modulus().n(),
        a: w.a().to_vec(),
        b: w.b().to_vec(),
        scaling: cfg.use_scaling_symmetry,
        translation: sym.translate,
        depth: fr.depth,
        frontier,
        nodes_explored: fr.stats.nodes_explored,
        orbits_pruned: fr.stats.orbits_pruned,
        level_sizes: fr.stats.level_sizes.clone(),
        shard_stats: fr.shard_stats.clone(),
    };
    let tmp = path.with_extension("tmp");
    let body = serde_json::to_vec(&ck).map_err(|e| Error::Io(e.to_string()))?;
    fs::write(&tmp, body)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn read_checkpoint(
    path: &Path,
    kind: ConstantKind,
    w: &WeightPair,
    cfg: &SearchConfig,
    sym: &Symmetry,
) -> Result<Frontier> {
    let raw = fs::read(path)?;
    let ck: Checkpoint =
        serde_json::from_slice(&raw).map_err(|e| Error::CheckpointCorrupt(e.to_string()))?;
    if ck.version != CHECKPOINT_VERSION {
        return Err(Error::CheckpointCorrupt(format!(
            "unsupported version {}",
            ck.version
        )));
    }
    let scaling = cfg.use_scaling_symmetry;
    if ck.kind != kind
        || ck.n != w.modulus().n()
        || ck.a != w.a().to_vec()
        || ck.b != w.b().to_vec()
        || ck.scaling != scaling
        || ck.translation != sym.translate
    {
        return Err(Error::CheckpointMismatch(format!(
            "checkpoint is for {} n={} A={:?} B={:?}",
            ck.kind, ck.n, ck.a, ck.b
        )));
    }
    if ck.depth == 0 {
        return Err(Error::CheckpointCorrupt("checkpoint at depth 0".into()));
    }
    if ck.level_sizes.len() != ck.depth + 1 || ck.level_sizes[ck.depth] != ck.frontier.len() {
        return Err(Error::CheckpointCorrupt("level sizes disagree with frontier".into()));
    }
    let m = w.modulus();
    let mut data = Vec::with_capacity(ck.frontier.len() * ck.depth);
    let mut canon = Vec::new();
    for node in &ck.frontier {
        if node.len() != ck.depth || node.iter().any(|&t| t as u32 >= m.n()) {
            return Err(Error::CheckpointCorrupt("malformed frontier node".into()));
        }
        sym.canonicalize_into(node, &mut canon);
        if canon != *node {
            return Err(Error::CheckpointCorrupt(format!(
                "frontier node {node:?} is not canonical"
            )));
        }
        let seq = Sequence::new(m, node.iter().map(|&t| t as u32).collect())?;
        if is_good(&seq, kind, w)? {
            return Err(Error::CheckpointCorrupt(format!(
                "frontier node {node:?} is not bad"
            )));
        }
        data.extend_from_slice(node);
    }
    if ck.frontier.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::CheckpointCorrupt("frontier not sorted".into()));
    }
    Ok(Frontier {
        depth: ck.depth,
        data,
        stats: SearchStats {
            nodes_explored: ck.nodes_explored,
            orbits_pruned: ck.orbits_pruned,
            level_sizes: ck.level_sizes,
            wall_time_secs: 0.0,
            resumed_from: Some(ck.depth),
        },
        shard_stats: ck.shard_stats,
    })
}

/// Compute the constant exactly, with an extremal witness.
///
/// If `cfg.checkpoint_path` names an existing file, the search resumes from
/// it after re-verifying every stored node.
pub fn compute_constant(
    kind: ConstantKind,
    w: &WeightPair,
    cfg: &SearchConfig,
) -> Result<ConstantResult> {
    let started = Instant::now();
    let m = w.modulus();
    let cap = cfg.cap.unwrap_or_else(|| kind.default_cap(m));
    if cap == 0 {
        return Err(Error::InvalidMode("cap must be at least 1".into()));
    }
    let shards = cfg.shards.max(1);
    let expander = Expander::new(kind, w, cfg);

    let mut fr = match &cfg.checkpoint_path {
        Some(p) if p.exists() => read_checkpoint(p, kind, w, cfg, &expander.sym)?,
        _ => Frontier {
            depth: 0,
            data: Vec::new(),
            stats: SearchStats {
                level_sizes: vec![1],
                ..Default::default()
            },
            shard_stats: Vec::new(),
        },
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(shards)
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;
    let mut last_checkpoint = Instant::now();

    while fr.depth < cap {
        let width = fr.depth;
        let count = fr.stats.level_sizes[width];
        let per_shard = count.div_ceil(shards).max(1);
        let chunks: Vec<&[u8]> = if width == 0 {
            vec![&fr.data[..]]
        } else {
            fr.data.chunks(per_shard * width).collect()
        };
        let parts: Vec<(Vec<u8>, u64, u64)> = pool.install(|| {
            chunks
                .par_iter()
                .map(|chunk| {
                    let mut out = Vec::new();
                    let (explored, bad) = expander.expand(chunk, width, &mut out);
                    (out, explored, bad)
                })
                .collect()
        });
        let mut merged = Vec::new();
        let mut bad_total = 0u64;
        fr.shard_stats.clear();
        for (out, explored, bad) in parts {
            merged.extend_from_slice(&out);
            fr.stats.nodes_explored += explored;
            bad_total += bad;
            fr.shard_stats.push((explored, bad));
        }
        let next = pool.install(|| sort_dedup(merged, width + 1));
        let next_count = next.len() / (width + 1);
        fr.stats.orbits_pruned += bad_total - next_count as u64;

        if next_count == 0 {
            let value = width + 1;
            let witness_terms: Vec<u32> = fr.data[..width].iter().map(|&t| t as u32).collect();
            let witness = Sequence::new(m, witness_terms)?;
            assert!(
                validate_witness(&witness, kind, w)?,
                "search produced a good witness {witness:?}"
            );
            fr.stats.wall_time_secs = started.elapsed().as_secs_f64();
            return Ok(ConstantResult {
                kind,
                n: m.n(),
                a: w.a().to_vec(),
                b: w.b().to_vec(),
                value,
                witness,
                stats: fr.stats,
            });
        }
        fr.data = next;
        fr.depth += 1;
        fr.stats.level_sizes.push(next_count);

        if let Some(path) = &cfg.checkpoint_path {
            if last_checkpoint.elapsed() >= cfg.checkpoint_interval {
                write_checkpoint(path, kind, w, cfg, &expander.sym, &fr)?;
                last_checkpoint = Instant::now();
            }
        }
    }
    if let Some(path) = &cfg.checkpoint_path {
        write_checkpoint(path, kind, w, cfg, &expander.sym, &fr)?;
    }
    Err(Error::CapExceeded { cap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{quadratic_residues, ResidueSet};

    fn qp1(p: u32) -> WeightPair {
        WeightPair::qp_ones(Modulus::prime(p).unwrap()).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let m7 = Modulus::prime(7).unwrap();
        let w = WeightPair::qp_plain(m7).unwrap();
        let scaling_only = SearchConfig {
            use_translation_symmetry: Some(false),
            ..Default::default()
        };
        let a = canonicalize(&Sequence::new(m7, vec![2, 2, 4]).unwrap(), ConstantKind::D, &w, &scaling_only);
        let b = canonicalize(&Sequence::new(m7, vec![1, 1, 2]).unwrap(), ConstantKind::D, &w, &scaling_only);
        assert_eq!(a, b);
        assert_eq!(canonicalize(&a, ConstantKind::D, &w, &scaling_only), a);

        let m5 = Modulus::prime(5).unwrap();
        let w5 = qp1(5);
        let cfg = SearchConfig::default();
        let a = canonicalize(&Sequence::new(m5, vec![1, 2]).unwrap(), ConstantKind::D, &w5, &cfg);
        let b = canonicalize(&Sequence::new(m5, vec![3, 4]).unwrap(), ConstantKind::D, &w5, &cfg);
        assert_eq!(a, b);
        assert_eq!(a.terms(), &[0, 1]);
    }

    #[test]
    fn translation_is_off_unless_b_is_ones() {
        let m5 = Modulus::prime(5).unwrap();
        let w = WeightPair::new(
            quadratic_residues(m5).unwrap(),
            quadratic_residues(m5).unwrap(),
        )
        .unwrap();
        let cfg = SearchConfig {
            use_translation_symmetry: Some(true),
            ..Default::default()
        };
        let s = Sequence::new(m5, vec![3, 4]).unwrap();
        // Dilations fix 0 and {3,4} never reaches {0,x}.
        let c = canonicalize(&s, ConstantKind::D, &w, &cfg);
        assert!(!c.terms().contains(&0));
    }

    #[test]
    fn ordered_canonical_form_keeps_order() {
        let m5 = Modulus::prime(5).unwrap();
        let w = qp1(5);
        let s = Sequence::new(m5, vec![3, 1, 3]).unwrap();
        let c = canonicalize(&s, ConstantKind::C, &w, &SearchConfig::default());
        // translate by 2: (0, 3, 0); dilate by 2: (0, 1, 0)
        assert_eq!(c.terms(), &[0, 1, 0]);
    }

    #[test]
    fn is_good_examples() {
        let m7 = Modulus::prime(7).unwrap();
        let w = qp1(7);
        let zeros = Sequence::new(m7, vec![0; 7]).unwrap();
        assert!(is_good(&zeros, ConstantKind::E, &w).unwrap());
        let short = Sequence::new(m7, vec![0; 6]).unwrap();
        assert!(!is_good(&short, ConstantKind::E, &w).unwrap());
        assert!(!is_good(&Sequence::new(m7, vec![]).unwrap(), ConstantKind::D, &w).unwrap());
    }

    #[test]
    fn small_constants() {
        let cfg = SearchConfig::default();
        assert_eq!(compute_constant(ConstantKind::E, &qp1(3), &cfg).unwrap().value, 5);
        assert_eq!(compute_constant(ConstantKind::E, &qp1(5), &cfg).unwrap().value, 9);
        assert_eq!(compute_constant(ConstantKind::C, &qp1(5), &cfg).unwrap().value, 6);
        assert_eq!(compute_constant(ConstantKind::D, &qp1(7), &cfg).unwrap().value, 5);
    }

    #[test]
    fn cap_exceeded() {
        let cfg = SearchConfig {
            cap: Some(3),
            ..Default::default()
        };
        assert_eq!(
            compute_constant(ConstantKind::E, &qp1(5), &cfg),
            Err(Error::CapExceeded { cap: 3 })
        );
    }

    #[test]
    fn ones_weights_d_constant_of_z5() {
        // B = {1} forces the subsequence length to be a multiple of 5, so
        // this is the EGZ constant 2·5 − 1.
        let m5 = Modulus::new(5).unwrap();
        let ones = ResidueSet::singleton(m5, 1).unwrap();
        let w = WeightPair::new(ones, ones).unwrap();
        let r = compute_constant(ConstantKind::D, &w, &SearchConfig::default()).unwrap();
        assert_eq!(r.value, 9);
    }
}
