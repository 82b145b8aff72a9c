//! Command implementations and the exit-code contract.
//!
//! | code | meaning                                             |
//! |------|-----------------------------------------------------|
//! | 0    | success                                             |
//! | 1    | I/O failure                                         |
//! | 2    | bad flags, malformed input, unsupported prime       |
//! | 3    | search cap reached                                  |
//! | 4    | checkpoint corrupt or for a different search        |
//! | 5    | mismatch: table FAIL, counterexample, bad certificate, cache disagreement |

use std::path::PathBuf;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use zswlab::lemmas::{self, LemmaId, LemmaReport};
use zswlab::search::{validate_witness, SearchStats};
use zswlab::{
    check_certificate as check_one, compute_constant, find_zero_sum_subsequence, Certificate, ConstantKind,
    Error, Modulus, Residue, ResidueSet, SearchConfig, Sequence, SubseqMode, WeightPair,
    SOLVER_VERSION,
};

use crate::cache::{Cache, CacheEntry};
use crate::output::{emit, list_cell, set_text, Report, OUTPUT_SCHEMA_VERSION};
use crate::weights::parse_list;
use crate::{
    CheckCertificateArgs, ComputeArgs, FindArgs, ModulusArgs, OpenQuestionArgs, RunArgs,
    TableArgs, VerifyLemmaArgs, WeightArgs,
};

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
    fn mismatch(message: impl Into<String>) -> Self {
        Failure { code: 5, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } => 3,
            Error::CheckpointCorrupt(_) | Error::CheckpointMismatch(_) => 4,
            Error::Io(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

type Outcome = Result<u8, Failure>;

fn resolve_modulus(args: &ModulusArgs) -> Result<Modulus, Failure> {
    match (args.prime, args.modulus) {
        (Some(p), _) => Ok(Modulus::prime(p)?),
        (None, Some(n)) => Ok(Modulus::new(n)?),
        (None, None) => Err(Failure::usage("one of --prime or --modulus is required")),
    }
}

fn resolve_weights(args: &WeightArgs, m: Modulus) -> Result<WeightPair, Failure> {
    Ok(WeightPair::new(args.weights.resolve(m)?, args.b_weights.resolve(m)?)?)
}

/// Which sizes run without extra flags.
fn check_allowlist(kind: ConstantKind, n: u32, run: &RunArgs, checkpointed: bool) -> Result<(), Failure> {
    if n <= 11 {
        return Ok(());
    }
    let long = run.allow_long || run.allow_very_long;
    match (n, kind) {
        (13, ConstantKind::D | ConstantKind::E) if long => Ok(()),
        (13, ConstantKind::D | ConstantKind::E) => Err(Failure::usage(format!(
            "{kind} at n = 13 needs --allow-long"
        ))),
        _ if run.allow_very_long && checkpointed => Ok(()),
        _ if run.allow_very_long => Err(Failure::usage(format!(
            "{kind} at n = {n} needs a checkpoint (--checkpoint / --checkpoint-dir)"
        ))),
        _ => Err(Failure::usage(format!(
            "{kind} at n = {n} is beyond the default range; pass --allow-very-long with a checkpoint"
        ))),
    }
}

fn jobs(requested: Option<usize>) -> usize {
    requested
        .filter(|&j| j > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// A constant, freshly computed or read from the cache.
#[derive(Clone, Debug, Serialize)]
struct Obtained {
    value: usize,
    witness: Vec<Residue>,
    cached: bool,
    stats: SearchStats,
}

fn open_cache(run: &RunArgs) -> Result<Option<Cache>, Failure> {
    match (&run.cache, run.no_cache) {
        (Some(path), false) => Ok(Some(Cache::open(path)?)),
        _ => Ok(None),
    }
}

fn obtain(
    kind: ConstantKind,
    w: &WeightPair,
    run: &RunArgs,
    checkpoint: Option<PathBuf>,
    cache: &mut Option<Cache>,
) -> Result<Obtained, Failure> {
    let m = w.modulus();
    let (a, b) = (w.a().to_vec(), w.b().to_vec());
    let hit = match cache {
        Some(c) => c.lookup(m.n(), &a, &b, kind)?,
        None => None,
    };
    let hit = hit.filter(|e| {
        let ok = Sequence::new(m, e.witness.clone())
            .ok()
            .filter(|s| s.len() + 1 == e.value)
            .is_some_and(|s| validate_witness(&s, kind, w).unwrap_or(false));
        if !ok {
            eprintln!("warning: ignoring cache entry whose witness does not validate");
        }
        ok
    });
    if let Some(e) = &hit {
        if !run.recheck {
            return Ok(Obtained {
                value: e.value,
                witness: e.witness.clone(),
                cached: true,
                stats: e.stats.clone(),
            });
        }
    }

    check_allowlist(kind, m.n(), run, checkpoint.is_some())?;
    let cfg = SearchConfig {
        cap: run.cap,
        shards: jobs(run.jobs),
        checkpoint_interval: Duration::from_secs(run.checkpoint_interval),
        checkpoint_path: checkpoint,
        ..Default::default()
    };
    let r = compute_constant(kind, w, &cfg)?;
    let fresh = Obtained {
        value: r.value,
        witness: r.witness.terms().to_vec(),
        cached: false,
        stats: r.stats,
    };
    match (&hit, cache) {
        (Some(e), _) => {
            if e.value != fresh.value || e.witness != fresh.witness {
                return Err(Failure::mismatch(format!(
                    "cache says {kind} = {} with witness {:?}, recomputation gives {} with {:?}",
                    e.value, e.witness, fresh.value, fresh.witness
                )));
            }
        }
        (None, Some(c)) => c.append(&CacheEntry::new(
            m.n(),
            a,
            b,
            kind,
            fresh.value,
            fresh.witness.clone(),
            fresh.stats.clone(),
        ))?,
        (None, None) => {}
    }
    Ok(fresh)
}

#[derive(Serialize)]
struct ComputeReport {
    schema_version: u32,
    command: &'static str,
    solver_version: &'static str,
    kind: ConstantKind,
    n: u32,
    a: Vec<Residue>,
    b: Vec<Residue>,
    #[serde(flatten)]
    result: Obtained,
}

impl Report for ComputeReport {
    fn text(&self) -> String {
        let r = &self.result;
        format!(
            "{}_(A,B)({}) = {}   A = {}  B = {}{}\n\
             extremal sequence of length {}: {}\n\
             {} nodes explored, {} symmetric duplicates pruned, level sizes {:?}, {:.3}s\n",
            self.kind,
            self.n,
            r.value,
            set_text(&self.a),
            set_text(&self.b),
            if r.cached { "  (cached)" } else { "" },
            r.witness.len(),
            list_cell(&r.witness),
            r.stats.nodes_explored,
            r.stats.orbits_pruned,
            r.stats.level_sizes,
            r.stats.wall_time_secs
        )
    }
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["kind", "n", "a", "b", "value", "witness", "cached", "nodes_explored", "wall_time_secs"]
    }
    fn csv_rows(&self) -> Vec<Vec<String>> {
        let r = &self.result;
        vec![vec![
            self.kind.to_string(),
            self.n.to_string(),
            list_cell(&self.a),
            list_cell(&self.b),
            r.value.to_string(),
            list_cell(&r.witness),
            r.cached.to_string(),
            r.stats.nodes_explored.to_string(),
            format!("{:.3}", r.stats.wall_time_secs),
        ]]
    }
}

pub fn compute(args: ComputeArgs) -> Outcome {
    let m = resolve_modulus(&args.modulus)?;
    let w = resolve_weights(&args.weights, m)?;
    let mut cache = open_cache(&args.run)?;
    let result = obtain(args.kind, &w, &args.run, args.checkpoint.clone(), &mut cache)?;
    let report = ComputeReport {
        schema_version: OUTPUT_SCHEMA_VERSION,
        command: "compute",
        solver_version: SOLVER_VERSION,
        kind: args.kind,
        n: m.n(),
        a: w.a().to_vec(),
        b: w.b().to_vec(),
        result,
    };
    emit(&report, args.format)?;
    Ok(0)
}

/// Known value of a constant of `(Q_p, {1})`, as a set of allowed values.
fn expected(kind: ConstantKind, p: u32) -> Vec<usize> {
    let p_us = p as usize;
    match kind {
        ConstantKind::E if p == 5 => vec![9],
        ConstantKind::E => vec![p_us + 2],
        ConstantKind::C if p % 4 == 1 => vec![6],
        ConstantKind::C => vec![9],
        ConstantKind::D if p % 4 == 1 => vec![4, 5],
        ConstantKind::D => vec![5],
    }
}

#[derive(Serialize)]
struct TableRow {
    kind: ConstantKind,
    p: u32,
    value: usize,
    expected: Vec<usize>,
    status: &'static str,
    witness: Vec<Residue>,
    cached: bool,
    wall_time_secs: f64,
}

#[derive(Serialize)]
struct TableReport {
    schema_version: u32,
    command: &'static str,
    solver_version: &'static str,
    rows: Vec<TableRow>,
    all_passed: bool,
}

fn expected_text(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(usize::to_string).collect();
    parts.join(" or ")
}

impl Report for TableReport {
    fn text(&self) -> String {
        let mut s = format!("{:<5}{:>4}{:>7}{:>10}  {:<8}extremal sequence\n", "kind", "p", "value", "expected", "status");
        for r in &self.rows {
            s += &format!(
                "{:<5}{:>4}{:>7}{:>10}  {:<8}{}\n",
                r.kind.to_string(),
                r.p,
                r.value,
                expected_text(&r.expected),
                r.status,
                list_cell(&r.witness)
            );
        }
        s += if self.all_passed { "all rows PASS\n" } else { "some rows FAIL\n" };
        s
    }
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["kind", "p", "value", "expected", "status", "witness", "cached", "wall_time_secs"]
    }
    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.kind.to_string(),
                    r.p.to_string(),
                    r.value.to_string(),
                    expected_text(&r.expected),
                    r.status.to_string(),
                    list_cell(&r.witness),
                    r.cached.to_string(),
                    format!("{:.3}", r.wall_time_secs),
                ]
            })
            .collect()
    }
}

pub fn table(args: TableArgs) -> Outcome {
    let mut plan = Vec::new();
    for &p in &args.primes {
        let m = Modulus::prime(p)?;
        for &kind in &args.kind {
            let checkpoint = args
                .checkpoint_dir
                .as_ref()
                .map(|d| d.join(format!("{kind}-{p}.ckpt")));
            check_allowlist(kind, p, &args.run, checkpoint.is_some())?;
            plan.push((m, kind, checkpoint));
        }
    }
    let mut cache = open_cache(&args.run)?;
    let mut rows = Vec::new();
    for (m, kind, checkpoint) in plan {
        let w = WeightPair::qp_ones(m)?;
        let r = obtain(kind, &w, &args.run, checkpoint, &mut cache)?;
        let want = expected(kind, m.n());
        rows.push(TableRow {
            kind,
            p: m.n(),
            value: r.value,
            status: if want.contains(&r.value) { "PASS" } else { "FAIL" },
            expected: want,
            witness: r.witness,
            cached: r.cached,
            wall_time_secs: r.stats.wall_time_secs,
        });
    }
    let all_passed = rows.iter().all(|r| r.status == "PASS");
    emit(
        &TableReport {
            schema_version: OUTPUT_SCHEMA_VERSION,
            command: "table",
            solver_version: SOLVER_VERSION,
            rows,
            all_passed,
        },
        args.format,
    )?;
    Ok(if all_passed { 0 } else { 5 })
}

#[derive(Serialize)]
struct LemmaRow {
    status: &'static str,
    #[serde(flatten)]
    report: LemmaReport,
}

#[derive(Serialize)]
struct LemmaTable {
    schema_version: u32,
    command: &'static str,
    solver_version: &'static str,
    reports: Vec<LemmaRow>,
    /// `(lemma, prime)` pairs skipped under `--id all` because the statement does not apply.
    skipped: Vec<(LemmaId, u32)>,
    all_passed: bool,
}

impl Report for LemmaTable {
    fn text(&self) -> String {
        let mut s = format!("{:<10}{:>4}  {:<6}{:>10}{:>9}{:>8}{:>9}  domain\n", "lemma", "p", "status", "inputs", "vacuous", "counter", "secs");
        for r in &self.reports {
            let l = &r.report;
            s += &format!(
                "{:<10}{:>4}  {:<6}{:>10}{:>9}{:>8}{:>9.3}  {}\n",
                l.lemma_id.to_string(),
                l.prime,
                r.status,
                l.inputs_checked,
                l.vacuous,
                l.counterexamples.len(),
                l.wall_time_secs,
                l.domain
            );
            for c in l.counterexamples.iter().take(5) {
                s += &format!("    counterexample: {c}\n");
            }
        }
        if !self.skipped.is_empty() {
            let parts: Vec<String> = self.skipped.iter().map(|(id, p)| format!("{id}@{p}")).collect();
            s += &format!("skipped (hypothesis excludes the prime): {}\n", parts.join(" "));
        }
        s
    }
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["lemma", "p", "status", "inputs_checked", "vacuous", "counterexamples", "wall_time_secs", "domain"]
    }
    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.reports
            .iter()
            .map(|r| {
                let l = &r.report;
                vec![
                    l.lemma_id.to_string(),
                    l.prime.to_string(),
                    r.status.to_string(),
                    l.inputs_checked.to_string(),
                    l.vacuous.to_string(),
                    l.counterexamples.len().to_string(),
                    format!("{:.3}", l.wall_time_secs),
                    l.domain.clone(),
                ]
            })
            .collect()
    }
}

pub fn verify_lemma(args: VerifyLemmaArgs) -> Outcome {
    let all = args.id.iter().any(|s| s.eq_ignore_ascii_case("all"));
    let ids: Vec<LemmaId> = if all {
        LemmaId::ALL.to_vec()
    } else {
        args.id.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
    };
    let primes: Vec<Modulus> = args.prime.iter().map(|&p| Modulus::prime(p)).collect::<Result<_, _>>()?;
    let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs(args.jobs)).build_global();
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for &id in &ids {
        for &p in &primes {
            match lemmas::verify_lemma(id, p) {
                Ok(r) => reports.push(LemmaRow {
                    status: if r.passed() { "PASS" } else { "FAIL" },
                    report: r,
                }),
                Err(Error::UnsupportedPrime { .. }) if all => skipped.push((id, p.n())),
                Err(e) => return Err(e.into()),
            }
        }
    }
    let all_passed = reports.iter().all(|r| r.report.passed());
    emit(
        &LemmaTable {
            schema_version: OUTPUT_SCHEMA_VERSION,
            command: "verify-lemma",
            solver_version: SOLVER_VERSION,
            reports,
            skipped,
            all_passed,
        },
        args.format,
    )?;
    Ok(if all_passed { 0 } else { 5 })
}

/// A certificate with everything needed to re-check it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateBundle {
    pub schema_version: u32,
    pub sequence: Sequence,
    pub weights: BundleWeights,
    pub mode: SubseqMode,
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BundleWeights {
    pub a: Vec<Residue>,
    pub b: Vec<Residue>,
}

fn parse_mode(s: &str, m: Modulus) -> Result<SubseqMode, Failure> {
    let lower = s.trim().to_ascii_lowercase();
    let mode = match lower.as_str() {
        "any" | "d" => SubseqMode::AnyNonempty,
        "contiguous" | "c" => SubseqMode::Contiguous,
        "e" => SubseqMode::ExactLength(m.n() as usize),
        other => match other.strip_prefix("exact:") {
            Some(k) => SubseqMode::ExactLength(
                k.parse().map_err(|_| Failure::usage(format!("bad length in mode {s:?}")))?,
            ),
            None => return Err(Failure::usage(format!("unknown mode {s:?}"))),
        },
    };
    mode.validate()?;
    Ok(mode)
}

impl Report for CertificateBundle {
    fn text(&self) -> String {
        match &self.certificate {
            None => format!("no qualifying subsequence of {:?} ({:?})\n", self.sequence.terms(), self.mode),
            Some(c) => {
                let mut s = format!("qualifying subsequence of {:?} ({:?}):\n", self.sequence.terms(), self.mode);
                for ((&i, &a), &b) in c.indices.iter().zip(&c.a).zip(&c.b) {
                    s += &format!("  x[{i}] = {}  a = {a}  b = {b}\n", self.sequence.terms()[i]);
                }
                s += &format!("parent hash {}\n", c.parent_hash);
                s
            }
        }
    }
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["found", "indices", "a", "b", "parent_hash"]
    }
    fn csv_rows(&self) -> Vec<Vec<String>> {
        let row = match &self.certificate {
            None => vec!["false".into(), String::new(), String::new(), String::new(), self.sequence.digest()],
            Some(c) => vec![
                "true".into(),
                c.indices.iter().map(usize::to_string).collect::<Vec<_>>().join(" "),
                list_cell(&c.a),
                list_cell(&c.b),
                c.parent_hash.clone(),
            ],
        };
        vec![row]
    }
}

pub fn find(args: FindArgs) -> Outcome {
    let m = resolve_modulus(&args.modulus)?;
    let w = resolve_weights(&args.weights, m)?;
    let terms = parse_list(&args.sequence).map_err(Failure::usage)?;
    let s = Sequence::new(m, terms)?;
    let mode = parse_mode(&args.mode, m)?;
    let certificate = find_zero_sum_subsequence(&s, &w, mode)?;
    emit(
        &CertificateBundle {
            schema_version: OUTPUT_SCHEMA_VERSION,
            sequence: s,
            weights: BundleWeights { a: w.a().to_vec(), b: w.b().to_vec() },
            mode,
            certificate,
        },
        args.format,
    )?;
    Ok(0)
}

#[derive(Serialize)]
struct CheckRow {
    file: String,
    valid: bool,
    defect: Option<String>,
}

#[derive(Serialize)]
struct CheckReport {
    schema_version: u32,
    command: &'static str,
    results: Vec<CheckRow>,
    all_valid: bool,
}

impl Report for CheckReport {
    fn text(&self) -> String {
        self.results
            .iter()
            .map(|r| match &r.defect {
                None => format!("VALID    {}\n", r.file),
                Some(d) => format!("INVALID  {}: {d}\n", r.file),
            })
            .collect()
    }
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["file", "valid", "defect"]
    }
    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.results
            .iter()
            .map(|r| vec![r.file.clone(), r.valid.to_string(), r.defect.clone().unwrap_or_default()])
            .collect()
    }
}

fn check_bundle(b: &CertificateBundle) -> Result<Option<String>, Failure> {
    let m = b.sequence.modulus();
    let w = WeightPair::new(
        ResidueSet::from_residues(m, b.weights.a.iter().copied())?,
        ResidueSet::from_residues(m, b.weights.b.iter().copied())?,
    )?;
    b.mode.validate()?;
    Ok(match &b.certificate {
        None => Some("bundle carries no certificate".into()),
        Some(c) => check_one(&b.sequence, &w, c, b.mode)
            .err()
            .map(|d| format!("{d:?}")),
    })
}

fn check_certificate_files(args: &CheckCertificateArgs) -> Result<CheckReport, Failure> {
    let mut results = Vec::new();
    for path in &args.files {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        let bundle: CertificateBundle = serde_json::from_str(&raw)
            .map_err(|e| Failure::usage(format!("{}: malformed bundle: {e}", path.display())))?;
        let defect = check_bundle(&bundle)
            .map_err(|f| Failure::usage(format!("{}: {}", path.display(), f.message)))?;
        results.push(CheckRow {
            file: path.display().to_string(),
            valid: defect.is_none(),
            defect,
        });
    }
    let all_valid = results.iter().all(|r| r.valid);
    Ok(CheckReport {
        schema_version: OUTPUT_SCHEMA_VERSION,
        command: "check-certificate",
        results,
        all_valid,
    })
}

pub fn check_certificate(args: CheckCertificateArgs) -> Outcome {
    let report = check_certificate_files(&args)?;
    emit(&report, args.format)?;
    Ok(if report.all_valid { 0 } else { 5 })
}

#[derive(Serialize)]
struct OpenQuestionReport {
    schema_version: u32,
    command: &'static str,
    solver_version: &'static str,
    p: u32,
    value: usize,
    equals_four: bool,
    /// Longest sequence with no qualifying subsequence.
    witness: Vec<Residue>,
    /// Canonical bad sequences per length; the last entry is the final nonempty level.
    level_sizes: Vec<usize>,
    nodes_explored: u64,
    cached: bool,
}

impl Report for OpenQuestionReport {
    fn text(&self) -> String {
        format!(
            "D_(Q_{p},{{1}}) = {v} at p = {p}; {verdict}\n\
             lower bound: ({w}) of length {wl} has no (Q_p,{{1}})-weighted zero-sum subsequence\n\
             upper bound: exhaustive search left no sequence of length {v} without one \
             (canonical bad sequences per length: {ls:?})\n",
            p = self.p,
            v = self.value,
            verdict = if self.equals_four { "the value is 4" } else { "the value is 5" },
            w = list_cell(&self.witness),
            wl = self.witness.len(),
            ls = self.level_sizes,
        )
    }
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["p", "value", "equals_four", "witness", "nodes_explored", "cached"]
    }
    fn csv_rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.p.to_string(),
            self.value.to_string(),
            self.equals_four.to_string(),
            list_cell(&self.witness),
            self.nodes_explored.to_string(),
            self.cached.to_string(),
        ]]
    }
}

pub fn open_question(args: OpenQuestionArgs) -> Outcome {
    let m = Modulus::prime(args.prime)?;
    if args.prime % 4 != 1 {
        return Err(Failure::usage(format!(
            "{} ≢ 1 (mod 4); the question only concerns p ≡ 1 (mod 4)",
            args.prime
        )));
    }
    let w = WeightPair::qp_ones(m)?;
    let mut cache = open_cache(&args.run)?;
    let r = obtain(ConstantKind::D, &w, &args.run, args.checkpoint.clone(), &mut cache)?;
    if r.value != 4 && r.value != 5 {
        return Err(Failure::mismatch(format!(
            "D = {} lies outside {{4, 5}}",
            r.value
        )));
    }
    emit(
        &OpenQuestionReport {
            schema_version: OUTPUT_SCHEMA_VERSION,
            command: "open-question",
            solver_version: SOLVER_VERSION,
            p: args.prime,
            value: r.value,
            equals_four: r.value == 4,
            witness: r.witness,
            level_sizes: r.stats.level_sizes,
            nodes_explored: r.stats.nodes_explored,
            cached: r.cached,
        },
        args.format,
    )?;
    Ok(0)
}
