//! Command-line front end: analyze a presentation file, compare two files
//! after free stabilization, or run the built-in regressions.
//!
//! Reports are emitted as text or JSON with the top-level keys
//! `{input, group, pi2, pi3, certificates, timings}`.  Everything except
//! the timings is deterministic across runs on the same input.
//!
//! Exit codes: 0 on success, 1 on certificate failure or bad input, 2 when
//! coset enumeration exhausts its limits.

use crate::cert::Certificate;
use crate::chain::boundary_matrices;
use crate::decomp::{involution_pairs, is_rationally_free, rational_split_check, stable_compare};
use crate::group::{
    enumerate_group, find_isomorphism, parse_presentation, EnumerationError, FiniteGroup,
    ParseError, Presentation,
};
use crate::igstar::{ig_star, verify_half_lattice_model};
use crate::lattice::{find_equivariant_iso, CharacterVector, ZgLattice};
use crate::symsq::sym_square;
use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;
use thiserror::Error;

pub const DEFAULT_MAX_COSETS: usize = 100_000;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error in {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: ParseError,
    },
    #[error("{0}")]
    Enumeration(#[from] EnumerationError),
    #[error("the two presentations define non-isomorphic groups ({left} vs {right})")]
    GroupMismatch { left: String, right: String },
    #[error("second homotopy ranks {k_left} and {k_right} cannot be stabilized over order {order}")]
    IncompatibleRanks { k_left: usize, k_right: usize, order: usize },
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Enumeration(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct AnalyzeOptions {
    pub max_cosets: usize,
    pub skip_model: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { max_cosets: DEFAULT_MAX_COSETS, skip_model: false }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InputReport {
    pub name: String,
    pub generators: Vec<String>,
    pub relators: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupReport {
    pub order: usize,
    pub abelian: bool,
    pub elements: Vec<String>,
    /// Count of inverse pairs {g, g^-1} with g of order > 2.
    pub p: usize,
    pub involutions: Vec<String>,
    pub pair_representatives: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleReport {
    pub rank: usize,
    pub character: Vec<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Pi3Report {
    pub rank: usize,
    pub character: Vec<i64>,
    pub rationally_free: bool,
    pub multiplicity: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificatesReport {
    pub chain: Vec<Certificate>,
    pub rational_split: Certificate,
    pub split_a: Option<usize>,
    pub split_q: Option<usize>,
    /// FULL, NECESSARY-ONLY, NOT-APPLICABLE, or SKIPPED.
    pub model_mode: String,
    pub model: Vec<Certificate>,
    /// Index of the base lattice inside the adjoined model, when built.
    pub model_index: Option<String>,
    pub all_passed: bool,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct TimingsReport {
    pub enumerate_ms: u128,
    pub chain_ms: u128,
    pub sym_square_ms: u128,
    pub model_ms: u128,
    pub total_ms: u128,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub input: InputReport,
    pub group: GroupReport,
    pub pi2: ModuleReport,
    pub pi3: Pi3Report,
    pub certificates: CertificatesReport,
    pub timings: TimingsReport,
}

fn character_values(c: &CharacterVector) -> Vec<i64> {
    c.values()
        .iter()
        .map(|v| v.to_i64().expect("traces are bounded by the rank"))
        .collect()
}

fn group_report(pres: &Presentation, group: &Arc<FiniteGroup>) -> (InputReport, GroupReport) {
    let input = InputReport {
        name: String::new(),
        generators: pres.generators.clone(),
        relators: pres
            .relators
            .iter()
            .map(|w| w.display(&pres.generators).to_string())
            .collect(),
    };
    let inv = involution_pairs(group);
    let group_report = GroupReport {
        order: group.order(),
        abelian: group.is_abelian(),
        elements: group.elements().map(|g| group.element_name(g)).collect(),
        p: inv.p,
        involutions: inv.t.iter().map(|&t| group.element_name(t)).collect(),
        pair_representatives: inv.s.iter().map(|&s| group.element_name(s)).collect(),
    };
    (input, group_report)
}

/// Full analysis pipeline on presentation text.  `name` labels the input in
/// the report.
pub fn analyze_source(
    name: &str,
    source: &str,
    opts: &AnalyzeOptions,
) -> Result<AnalysisReport, PipelineError> {
    let total = Instant::now();
    let pres = parse_presentation(source)
        .map_err(|e| PipelineError::Parse { path: name.to_string(), source: e })?;

    let t = Instant::now();
    let group = Arc::new(enumerate_group(&pres, opts.max_cosets)?);
    let enumerate_ms = t.elapsed().as_millis();

    let t = Instant::now();
    let cc = boundary_matrices(&pres, &group);
    let exactness = cc.verify_exactness();
    let (pi2, _) = cc.pi2();
    let chain_ms = t.elapsed().as_millis();

    let t = Instant::now();
    let pi3 = sym_square(&pi2).lattice().clone();
    let freeness = is_rationally_free(&pi3);
    let split = rational_split_check(&pi3, pi2.rank(), &group);
    let sym_square_ms = t.elapsed().as_millis();

    let t = Instant::now();
    let n = group.order();
    let (model_mode, model_stages, model_index) = if opts.skip_model {
        ("SKIPPED".to_string(), Vec::new(), None)
    } else if pi2.rank() != n - 1 {
        let note = Certificate::pass(format!(
            "half-lattice model not applicable: second homotopy rank {} differs from {}",
            pi2.rank(),
            n - 1
        ));
        ("NOT-APPLICABLE".to_string(), vec![note], None)
    } else {
        let ig = ig_star(&group);
        let report = match find_equivariant_iso(&pi2, &ig.lattice) {
            Some(phi) => verify_half_lattice_model(&pi2, Some(&phi), &group),
            None => verify_half_lattice_model(&pi2, None, &group),
        };
        let index = report.model.as_ref().map(|m| m.adjoined.index.to_string());
        let mode = if report.mode == "NECESSARY-ONLY" && !report.passed {
            // The character-level necessary condition fails: the module is
            // genuinely not of the modelled shape, which is a verdict, not
            // a pipeline failure.
            "NOT-APPLICABLE".to_string()
        } else {
            report.mode.to_string()
        };
        (mode, report.stages, index)
    };
    let model_ms = t.elapsed().as_millis();

    let model_counts = model_mode == "FULL" || model_mode == "NECESSARY-ONLY";
    let all_passed = exactness.passed
        && split.certificate.passed
        && (!model_counts || model_stages.iter().all(|c| c.passed));

    let (mut input, group_info) = group_report(&pres, &group);
    input.name = name.to_string();
    Ok(AnalysisReport {
        input,
        group: group_info,
        pi2: ModuleReport { rank: pi2.rank(), character: character_values(&pi2.character()) },
        pi3: Pi3Report {
            rank: pi3.rank(),
            character: character_values(&pi3.character()),
            rationally_free: freeness.free,
            multiplicity: freeness.multiplicity,
        },
        certificates: CertificatesReport {
            chain: vec![exactness.zero_composite, exactness.h1_vanishes, exactness.pi2_rank],
            rational_split: split.certificate,
            split_a: split.a,
            split_q: split.q,
            model_mode,
            model: model_stages,
            model_index,
            all_passed,
        },
        timings: TimingsReport {
            enumerate_ms,
            chain_ms,
            sym_square_ms,
            model_ms,
            total_ms: total.elapsed().as_millis(),
        },
    })
}

pub fn analyze_file(path: &PathBuf, opts: &AnalyzeOptions) -> Result<AnalysisReport, PipelineError> {
    let text = std::fs::read_to_string(path).map_err(|e| PipelineError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    analyze_source(&path.display().to_string(), &text, opts)
}

fn render_certificate(c: &Certificate) -> String {
    if c.passed {
        format!("  [PASS] {}", c.claim)
    } else if let Some(w) = &c.witness {
        format!("  [FAIL] {} ({w})", c.claim)
    } else {
        format!("  [FAIL] {}", c.claim)
    }
}

pub fn render_analysis(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let push = |out: &mut String, s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    push(&mut out, format!("input: {}", r.input.name));
    push(
        &mut out,
        format!(
            "  generators: {}; relators: {}",
            r.input.generators.join(", "),
            r.input.relators.join(", ")
        ),
    );
    push(
        &mut out,
        format!(
            "group: order {}{}, p = {}, involutions = [{}]",
            r.group.order,
            if r.group.abelian { " (abelian)" } else { "" },
            r.group.p,
            r.group.involutions.join(", ")
        ),
    );
    push(&mut out, format!("pi2: rank {}, character {:?}", r.pi2.rank, r.pi2.character));
    let freeness = match r.pi3.multiplicity {
        Some(m) => format!("rationally free of multiplicity {m}"),
        None => "not rationally free".to_string(),
    };
    push(
        &mut out,
        format!("pi3: rank {}, character {:?}, {}", r.pi3.rank, r.pi3.character, freeness),
    );
    push(&mut out, "certificates:".to_string());
    for c in &r.certificates.chain {
        push(&mut out, render_certificate(c));
    }
    push(&mut out, render_certificate(&r.certificates.rational_split));
    push(&mut out, format!("  model: {}", r.certificates.model_mode));
    for c in &r.certificates.model {
        push(&mut out, render_certificate(c));
    }
    if let Some(i) = &r.certificates.model_index {
        push(&mut out, format!("  model index over the base: {i}"));
    }
    push(
        &mut out,
        format!("result: {}", if r.certificates.all_passed { "PASS" } else { "FAIL" }),
    );
    push(&mut out, format!("total time: {} ms", r.timings.total_ms));
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompareInputReport {
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComparePi2Report {
    pub left_rank: usize,
    pub right_rank: usize,
    pub a: usize,
    pub b: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComparePi3Report {
    pub left_rank: usize,
    pub right_rank: usize,
    pub q_left: usize,
    pub q_right: usize,
    pub vg_rank: usize,
    pub stabilized_left_rank: usize,
    pub stabilized_right_rank: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompareCertificatesReport {
    pub stabilization_consistent: Certificate,
    pub rank_equal: Certificate,
    pub character_equal: Certificate,
    pub all_passed: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompareReport {
    pub input: CompareInputReport,
    pub group: GroupReport,
    pub pi2: ComparePi2Report,
    pub pi3: ComparePi3Report,
    pub certificates: CompareCertificatesReport,
    pub timings: TimingsReport,
}

/// Stable comparison of two presentation sources: identifies the groups,
/// transports the second pipeline to the first group, picks minimal
/// stabilization exponents unless given, and compares.
pub fn compare_sources(
    left_name: &str,
    left_src: &str,
    right_name: &str,
    right_src: &str,
    a: Option<usize>,
    b: Option<usize>,
    opts: &AnalyzeOptions,
) -> Result<CompareReport, PipelineError> {
    let total = Instant::now();
    let parse = |name: &str, src: &str| {
        parse_presentation(src)
            .map_err(|e| PipelineError::Parse { path: name.to_string(), source: e })
    };
    let lp = parse(left_name, left_src)?;
    let rp = parse(right_name, right_src)?;

    let t = Instant::now();
    let lg = Arc::new(enumerate_group(&lp, opts.max_cosets)?);
    let rg = Arc::new(enumerate_group(&rp, opts.max_cosets)?);
    let enumerate_ms = t.elapsed().as_millis();

    let Some(psi) = find_isomorphism(&lg, &rg) else {
        return Err(PipelineError::GroupMismatch {
            left: format!("order {}", lg.order()),
            right: format!("order {}", rg.order()),
        });
    };

    let t = Instant::now();
    let (lpi2, _) = boundary_matrices(&lp, &lg).pi2();
    let (rpi2, _) = boundary_matrices(&rp, &rg).pi2();
    let chain_ms = t.elapsed().as_millis();

    let t = Instant::now();
    let lpi3 = sym_square(&lpi2).lattice().clone();
    let rpi3 = sym_square(&rpi2).lattice().clone();
    // View the right lattice over the left group through the isomorphism.
    let rpi3 = transport(&rpi3, &lg, &psi);
    let sym_square_ms = t.elapsed().as_millis();

    let n = lg.order();
    let (k_left, k_right) = (lpi2.rank(), rpi2.rank());
    let (a, b) = match (a, b) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            let (lo, hi) = (k_left.min(k_right), k_left.max(k_right));
            if (hi - lo) % n != 0 {
                return Err(PipelineError::IncompatibleRanks { k_left, k_right, order: n });
            }
            let extra = (hi - lo) / n;
            if k_left <= k_right {
                (extra, 0)
            } else {
                (0, extra)
            }
        }
    };

    let t = Instant::now();
    let report = stable_compare(&lpi3, k_left, &rpi3, k_right, a, b);
    let model_ms = t.elapsed().as_millis();

    let (mut input_left, group_info) = group_report(&lp, &lg);
    input_left.name = left_name.to_string();
    let all_passed = report.passed;
    Ok(CompareReport {
        input: CompareInputReport { left: left_name.to_string(), right: right_name.to_string() },
        group: group_info,
        pi2: ComparePi2Report { left_rank: k_left, right_rank: k_right, a, b },
        pi3: ComparePi3Report {
            left_rank: lpi3.rank(),
            right_rank: rpi3.rank(),
            q_left: report.exponents.q_left,
            q_right: report.exponents.q_right,
            vg_rank: report.vg_rank,
            stabilized_left_rank: report.left.rank(),
            stabilized_right_rank: report.right.rank(),
        },
        certificates: CompareCertificatesReport {
            stabilization_consistent: report.stabilization_consistent,
            rank_equal: report.rank_equal,
            character_equal: report.character_equal,
            all_passed,
        },
        timings: TimingsReport {
            enumerate_ms,
            chain_ms,
            sym_square_ms,
            model_ms,
            total_ms: total.elapsed().as_millis(),
        },
    })
}

fn transport(l: &ZgLattice, to: &Arc<FiniteGroup>, psi: &[usize]) -> ZgLattice {
    let actions = to.elements().map(|g| l.action(psi[g]).clone()).collect();
    ZgLattice::from_element_actions(to, l.rank(), actions)
}

pub fn render_compare(r: &CompareReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("compare: {} vs {}\n", r.input.left, r.input.right));
    out.push_str(&format!("group: common order {}\n", r.group.order));
    out.push_str(&format!(
        "pi2 ranks: {} and {}; stabilization a = {}, b = {}\n",
        r.pi2.left_rank, r.pi2.right_rank, r.pi2.a, r.pi2.b
    ));
    out.push_str(&format!(
        "pi3 ranks: {} and {}; free exponents q = {}, q' = {}; stabilized ranks {} and {}\n",
        r.pi3.left_rank,
        r.pi3.right_rank,
        r.pi3.q_left,
        r.pi3.q_right,
        r.pi3.stabilized_left_rank,
        r.pi3.stabilized_right_rank
    ));
    out.push_str(&render_certificate(&r.certificates.stabilization_consistent));
    out.push('\n');
    out.push_str(&render_certificate(&r.certificates.rank_equal));
    out.push('\n');
    out.push_str(&render_certificate(&r.certificates.character_equal));
    out.push('\n');
    out.push_str(&format!(
        "result: {}\n",
        if r.certificates.all_passed { "PASS" } else { "FAIL" }
    ));
    out
}

const FIXTURE_C3: &str = include_str!("../fixtures/c3.pres");
const FIXTURE_Q8: &str = include_str!("../fixtures/q8.pres");
const FIXTURE_TRIVIAL: &str = include_str!("../fixtures/trivial.pres");
const FIXTURE_EXPECTED: &str = include_str!("../fixtures/expected.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixtureExpectation {
    pub order: usize,
    pub pi2_rank: usize,
    pub pi3_rank: usize,
    pub pi2_character: Vec<i64>,
    pub pi3_character: Vec<i64>,
    pub rationally_free: bool,
    pub multiplicity: Option<usize>,
    pub p: usize,
    pub involution_count: usize,
    pub model_mode: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureResult {
    pub name: String,
    pub checks: Vec<Certificate>,
    pub passed: bool,
}

pub fn builtin_fixtures() -> Vec<(&'static str, &'static str)> {
    vec![("trivial", FIXTURE_TRIVIAL), ("c3", FIXTURE_C3), ("q8", FIXTURE_Q8)]
}

/// Runs the shipped presentations and checks the reports against the
/// expectations stored next to them.
pub fn run_fixtures(opts: &AnalyzeOptions) -> Result<Vec<FixtureResult>, PipelineError> {
    let expected: std::collections::BTreeMap<String, FixtureExpectation> =
        serde_json::from_str(FIXTURE_EXPECTED).expect("fixture expectations parse");
    let mut results = Vec::new();
    for (name, src) in builtin_fixtures() {
        let exp = &expected[name];
        let report = analyze_source(name, src, opts)?;
        let mut checks = Vec::new();
        let mut eq = |claim: &str, ok: bool, got: String| {
            checks.push(Certificate::of(format!("{name}: {claim}"), ok, got));
        };
        eq("group order", report.group.order == exp.order, format!("{}", report.group.order));
        eq("pi2 rank", report.pi2.rank == exp.pi2_rank, format!("{}", report.pi2.rank));
        eq("pi3 rank", report.pi3.rank == exp.pi3_rank, format!("{}", report.pi3.rank));
        eq(
            "pi2 character",
            report.pi2.character == exp.pi2_character,
            format!("{:?}", report.pi2.character),
        );
        eq(
            "pi3 character",
            report.pi3.character == exp.pi3_character,
            format!("{:?}", report.pi3.character),
        );
        eq(
            "rational freeness",
            report.pi3.rationally_free == exp.rationally_free
                && report.pi3.multiplicity == exp.multiplicity,
            format!("{:?} {:?}", report.pi3.rationally_free, report.pi3.multiplicity),
        );
        eq("pair count", report.group.p == exp.p, format!("{}", report.group.p));
        eq(
            "involution count",
            report.group.involutions.len() == exp.involution_count,
            format!("{}", report.group.involutions.len()),
        );
        eq(
            "model mode",
            report.certificates.model_mode == exp.model_mode,
            report.certificates.model_mode.clone(),
        );
        eq("all certificates", report.certificates.all_passed, String::new());
        let passed = checks.iter().all(|c| c.passed);
        results.push(FixtureResult { name: name.to_string(), checks, passed });
    }
    Ok(results)
}

#[derive(Parser, Debug)]
#[command(
    name = "pi3",
    about = "Exact computation of the third homotopy module of a finite presentation 2-complex"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Analyze one presentation file end to end.
    Analyze {
        path: PathBuf,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
        /// Coset limit for the enumeration.
        #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
        max_cosets: usize,
        /// Skip the half-lattice model certification.
        #[arg(long)]
        skip_model: bool,
    },
    /// Compare the third homotopy modules of two presentations after
    /// free stabilization.
    Compare {
        left: PathBuf,
        right: PathBuf,
        /// Copies of the free module added on the left (default: minimal).
        #[arg(long)]
        a: Option<usize>,
        /// Copies of the free module added on the right (default: minimal).
        #[arg(long)]
        b: Option<usize>,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
        max_cosets: usize,
    },
    /// Run the built-in regression fixtures.
    Fixtures {
        #[arg(long)]
        json: bool,
    },
}

/// Prints without panicking when the consumer closes the pipe early.
fn emit(s: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes());
    if !s.ends_with('\n') {
        let _ = out.write_all(b"\n");
    }
}

/// Entry point shared by the binary and the tests; returns the exit code.
pub fn run_cli(cli: Cli) -> i32 {
    match cli.command {
        Command::Analyze { path, json, max_cosets, skip_model } => {
            let opts = AnalyzeOptions { max_cosets, skip_model };
            match analyze_file(&path, &opts) {
                Ok(report) => {
                    if json {
                        emit(&serde_json::to_string_pretty(&report).unwrap());
                    } else {
                        emit(&render_analysis(&report));
                    }
                    i32::from(!report.certificates.all_passed)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Command::Compare { left, right, a, b, json, max_cosets } => {
            let opts = AnalyzeOptions { max_cosets, skip_model: true };
            let read = |p: &PathBuf| {
                std::fs::read_to_string(p).map_err(|e| PipelineError::Io {
                    path: p.display().to_string(),
                    message: e.to_string(),
                })
            };
            let result = read(&left).and_then(|ls| {
                read(&right).and_then(|rs| {
                    compare_sources(
                        &left.display().to_string(),
                        &ls,
                        &right.display().to_string(),
                        &rs,
                        a,
                        b,
                        &opts,
                    )
                })
            });
            match result {
                Ok(report) => {
                    if json {
                        emit(&serde_json::to_string_pretty(&report).unwrap());
                    } else {
                        emit(&render_compare(&report));
                    }
                    i32::from(!report.certificates.all_passed)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Command::Fixtures { json } => match run_fixtures(&AnalyzeOptions::default()) {
            Ok(results) => {
                let all = results.iter().all(|r| r.passed);
                if json {
                    emit(&serde_json::to_string_pretty(&results).unwrap());
                } else {
                    let mut out = String::new();
                    for r in &results {
                        for c in &r.checks {
                            out.push_str(&render_certificate(c));
                            out.push('\n');
                        }
                        out.push_str(&format!(
                            "fixture {}: {}\n",
                            r.name,
                            if r.passed { "PASS" } else { "FAIL" }
                        ));
                    }
                    emit(&out);
                }
                i32::from(!all)
            }
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
    }
}
