//! Command-line front end.
//!
//! Every subcommand prints one report (pretty JSON by default, `key: value`
//! lines with `--plain`). Exit status 0 means a definite verdict, 1 an input
//! error and 2 an exhausted budget.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::cst::{self, cst_search, mpc_from_cst, verify_cst_witness, CstOutcome, CstWitness};
use crate::deuber::{contains_mpc, generate_mpc, mpc_size, verify_mpc, MpcParams};
use crate::dynsets::{
    banach_density_estimate, orbit_hits, piecewise_syndetic_window, product_return_times, strauss_set,
    strauss_witness_holds, syndetic_gap, DynSystem, OrbitHits, Point, Target,
};
use crate::error::{Error, Result};
use crate::exactq::{format_rational, parse_rational, ratio, RationalMatrix};
use crate::ipcore::{find_divisible_subsequence, fs_enumerate, ip_term_scalar, zero_sum_mod, IpSpec};
use crate::rado::{
    self, columns_condition, default_options, empirical_pr, forcing_sweep, monochromatic_solution, progression_matrix,
    schur_matrix, solve_in_cell_budget, verify_certificate, Coloring, ColumnsCertificate, ColumnsVerdict,
    EmpiricalVerdict, SolveOptions,
};
use crate::window::SetWindow;

#[derive(Parser, Debug)]
#[command(name = "partreg", version, about = "Partition regularity toolkit")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Worker threads; results do not depend on this value.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Emit JSON reports (the default).
    #[arg(long, global = true, conflicts_with = "plain")]
    json: bool,
    /// Emit `key: value` lines instead of JSON.
    #[arg(long, global = true)]
    plain: bool,
    /// Node budget for exhaustive searches.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Add elapsed wall-clock time to the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Partition regularity of linear systems.
    #[command(subcommand)]
    Rado(RadoCmd),
    /// Deuber (m,p,c)-systems.
    #[command(subcommand)]
    Mpc(MpcCmd),
    /// Finite sums and divisibility.
    #[command(subcommand)]
    Fs(FsCmd),
    /// Return-time sets, density and syndeticity.
    #[command(subcommand)]
    Dyn(DynCmd),
    /// Central Sets Theorem witnesses.
    #[command(subcommand)]
    Cst(CstCmd),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Nontrivial {
    Auto,
    On,
    Off,
}

#[derive(Args, Debug)]
struct SolveFlags {
    /// Reject constant solutions: auto switches this on when constants solve.
    #[arg(long, value_enum, default_value = "auto")]
    nontrivial: Nontrivial,
    /// Require pairwise distinct values.
    #[arg(long)]
    distinct: bool,
}

#[derive(Subcommand, Debug)]
enum RadoCmd {
    /// Decide the columns condition and print a certificate.
    Check {
        #[arg(long)]
        matrix: String,
        /// Also write the certificate to this file.
        #[arg(long)]
        out: Option<String>,
    },
    /// Re-check a columns certificate.
    Verify {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        certificate: String,
    },
    /// Exhaustive colouring search on [1..N].
    Empirical {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        colors: u32,
        #[arg(long)]
        horizon: u64,
        #[command(flatten)]
        solve: SolveFlags,
        /// Also write the witness colouring to this file.
        #[arg(long)]
        out: Option<String>,
    },
    /// Check that a colouring has no monochromatic solution.
    VerifyColoring {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        coloring: String,
        #[command(flatten)]
        solve: SolveFlags,
    },
    /// Find a solution inside a set.
    Solve {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        set: String,
        #[command(flatten)]
        solve: SolveFlags,
    },
    /// Schur number: largest N with an r-colouring of [1..N] free of x+y=z.
    SchurNumber {
        #[arg(long)]
        colors: u32,
        #[arg(long, default_value_t = 30)]
        max: u64,
    },
    /// Van der Waerden number: least N forcing a monochromatic progression.
    VdwNumber {
        #[arg(long)]
        colors: u32,
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 60)]
        max: u64,
    },
}

#[derive(Args, Debug)]
struct MpcArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    c: u64,
}

impl MpcArgs {
    fn params(&self) -> Result<MpcParams> {
        MpcParams::new(self.m, self.p, self.c)
    }
}

#[derive(Subcommand, Debug)]
enum MpcCmd {
    /// Expand the system of a generator tuple.
    Gen {
        #[command(flatten)]
        params: MpcArgs,
        #[arg(long, value_delimiter = ',')]
        gens: Vec<u64>,
    },
    /// Check that a generated system lies in a set.
    Verify {
        #[arg(long)]
        set: String,
        #[command(flatten)]
        params: MpcArgs,
        #[arg(long, value_delimiter = ',')]
        gens: Vec<u64>,
    },
    /// Lexicographically least generator tuple whose system lies in a set.
    Find {
        #[arg(long)]
        set: String,
        #[command(flatten)]
        params: MpcArgs,
        #[arg(long)]
        bound: u64,
    },
}

#[derive(Subcommand, Debug)]
enum FsCmd {
    /// Finite sums of the first k terms.
    Enum {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        k: u32,
    },
    /// Ordered index sets whose sums are divisible by c.
    Divisible {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 64)]
        horizon: u32,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        n: u32,
    },
    /// A subfamily whose sum is divisible by n.
    Zerosum {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        values: Vec<i128>,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Subcommand, Debug)]
enum DynCmd {
    /// Return times of one orbit to a target.
    Orbit {
        #[arg(long)]
        system: String,
        /// Starting point; defaults to the origin.
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        target: String,
        #[arg(long)]
        horizon: u64,
    },
    /// Joint return times of two orbits.
    Product {
        #[arg(long)]
        system_a: String,
        #[arg(long)]
        system_b: String,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        #[arg(long)]
        target_a: String,
        #[arg(long)]
        target_b: String,
        #[arg(long)]
        horizon: u64,
    },
    /// Densest window of a given length.
    Density {
        #[arg(long)]
        set: String,
        #[arg(long)]
        window: u64,
    },
    /// Largest gap, counting the ends of the window.
    Gaps {
        #[arg(long)]
        set: String,
    },
    /// Longest interval covered by S ∪ (S−1) ∪ … ∪ (S−k).
    Pws {
        #[arg(long)]
        set: String,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        length: u64,
    },
    /// High-density set avoiding a residue class per witness.
    Strauss {
        #[arg(long)]
        epsilon: String,
        #[arg(long)]
        horizon: u64,
        /// Also write the set to this file.
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Args, Debug)]
struct SpecArgs {
    /// Generator rule; repeat for several IP-systems.
    #[arg(long = "spec", required = true)]
    specs: Vec<String>,
    /// Number of terms for named rules.
    #[arg(long = "spec-horizon", default_value_t = 64)]
    spec_horizon: u32,
}

impl SpecArgs {
    fn load(&self) -> Result<Vec<IpSpec>> {
        self.specs.iter().map(|s| IpSpec::parse(s, self.spec_horizon)).collect()
    }
}

#[derive(Subcommand, Debug)]
enum CstCmd {
    /// Search for a witness of the given depth.
    Search {
        #[arg(long)]
        set: String,
        #[command(flatten)]
        specs: SpecArgs,
        #[arg(long)]
        depth: usize,
        /// Also write the witness to this file.
        #[arg(long)]
        out: Option<String>,
    },
    /// Re-check a witness file.
    Verify {
        #[arg(long)]
        set: String,
        #[command(flatten)]
        specs: SpecArgs,
        #[arg(long)]
        witness: String,
    },
    /// Derive an (m,p,c)-system from nested witnesses.
    Mpc {
        #[arg(long)]
        set: String,
        #[command(flatten)]
        params: MpcArgs,
        /// Number of generator tuples in the derived family.
        #[arg(long, default_value_t = 1)]
        family: u32,
    },
}

/// Exit status, standard output and standard error of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one command line (`argv[0]` is the program name).
pub fn run<I, T>(argv: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    RunOutput { status: 0, stdout: text, stderr: String::new() }
                }
                _ => RunOutput { status: 1, stdout: String::new(), stderr: text },
            };
        }
    };
    let started = Instant::now();
    let name = command_name(&cli.command);
    let outcome = dispatch(&cli);
    let plain = cli.global.plain;
    match outcome {
        Ok(mut report) => {
            if cli.global.timing {
                report.insert("elapsed_ms".into(), json!(started.elapsed().as_millis() as u64));
            }
            RunOutput { status: 0, stdout: render(name, report, plain), stderr: String::new() }
        }
        Err(e @ Error::Budget(_)) => {
            let mut report = Map::new();
            report.insert("verdict".into(), json!("budget_exhausted"));
            report.insert("message".into(), json!(e.to_string()));
            RunOutput { status: 2, stdout: render(name, report, plain), stderr: format!("{e}\n") }
        }
        Err(e) => RunOutput { status: 1, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Rado(c) => match c {
            RadoCmd::Check { .. } => "rado check",
            RadoCmd::Verify { .. } => "rado verify",
            RadoCmd::Empirical { .. } => "rado empirical",
            RadoCmd::VerifyColoring { .. } => "rado verify-coloring",
            RadoCmd::Solve { .. } => "rado solve",
            RadoCmd::SchurNumber { .. } => "rado schur-number",
            RadoCmd::VdwNumber { .. } => "rado vdw-number",
        },
        Command::Mpc(c) => match c {
            MpcCmd::Gen { .. } => "mpc gen",
            MpcCmd::Verify { .. } => "mpc verify",
            MpcCmd::Find { .. } => "mpc find",
        },
        Command::Fs(c) => match c {
            FsCmd::Enum { .. } => "fs enum",
            FsCmd::Divisible { .. } => "fs divisible",
            FsCmd::Zerosum { .. } => "fs zerosum",
        },
        Command::Dyn(c) => match c {
            DynCmd::Orbit { .. } => "dyn orbit",
            DynCmd::Product { .. } => "dyn product",
            DynCmd::Density { .. } => "dyn density",
            DynCmd::Gaps { .. } => "dyn gaps",
            DynCmd::Pws { .. } => "dyn pws",
            DynCmd::Strauss { .. } => "dyn strauss",
        },
        Command::Cst(c) => match c {
            CstCmd::Search { .. } => "cst search",
            CstCmd::Verify { .. } => "cst verify",
            CstCmd::Mpc { .. } => "cst mpc",
        },
    }
}

fn render(name: &str, report: Map<String, Value>, plain: bool) -> String {
    let mut full = Map::new();
    full.insert("command".into(), json!(name));
    full.extend(report);
    if plain {
        full.iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}\n"),
                other => format!("{k}: {other}\n"),
            })
            .collect()
    } else {
        let mut text = serde_json::to_string_pretty(&Value::Object(full)).expect("reports serialize");
        text.push('\n');
        text
    }
}

type Report = Map<String, Value>;

fn report(value: Value) -> Report {
    match value {
        Value::Object(map) => map,
        _ => unreachable!("reports are objects"),
    }
}

fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::input(format!("cannot read {path}: {e}")))
}

fn write_file(path: &str, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::input(format!("cannot write {path}: {e}")))
}

fn load_matrix(path: &str) -> Result<RationalMatrix> {
    RationalMatrix::parse(&read_file(path)?)
}

fn parse_number<T: std::str::FromStr>(text: &str, what: &str) -> Result<T> {
    text.trim().parse().map_err(|_| Error::input(format!("bad {what} {text:?}")))
}

/// Set expressions: `all:N`, `odds:N`, `evens:N`, `mod:r,m,N`, `fs:RULE,k`,
/// `file:PATH` or a bare path.
pub fn load_set(expr: &str) -> Result<SetWindow> {
    let Some((kind, rest)) = expr.split_once(':') else {
        return SetWindow::parse(&read_file(expr)?);
    };
    match kind {
        "all" => SetWindow::full(parse_number(rest, "horizon")?),
        "odds" => SetWindow::odds(parse_number(rest, "horizon")?),
        "evens" => SetWindow::evens(parse_number(rest, "horizon")?),
        "mod" => {
            let parts: Vec<u64> = rest.split(',').map(|t| parse_number(t, "residue parameter")).collect::<Result<_>>()?;
            let [r, m, n] = parts[..] else {
                return Err(Error::input("mod takes r,m,N"));
            };
            SetWindow::residue(r, m, n)
        }
        "fs" => {
            let (rule, k) = rest
                .rsplit_once(',')
                .ok_or_else(|| Error::input("fs takes RULE,k"))?;
            let k: u32 = parse_number(k, "prefix length")?;
            fs_enumerate(&IpSpec::parse(rule, k)?, k)
        }
        "file" => SetWindow::parse(&read_file(rest)?),
        _ => SetWindow::parse(&read_file(expr)?),
    }
}

fn solve_options(a: &RationalMatrix, flags: &SolveFlags) -> SolveOptions {
    let nontrivial = match flags.nontrivial {
        Nontrivial::Auto => default_options(a).nontrivial,
        Nontrivial::On => true,
        Nontrivial::Off => false,
    };
    SolveOptions { nontrivial, distinct: flags.distinct }
}

fn options_json(mode: Nontrivial, opts: SolveOptions) -> Value {
    let mode = match mode {
        Nontrivial::Auto => "auto",
        Nontrivial::On => "on",
        Nontrivial::Off => "off",
    };
    json!({ "nontrivial_mode": mode, "nontrivial": opts.nontrivial, "distinct": opts.distinct })
}

/// Certificate JSON with 1-based column indices.
pub fn certificate_json(cert: &ColumnsCertificate) -> Value {
    let blocks: Vec<Vec<usize>> = cert.blocks.iter().map(|b| b.iter().map(|c| c + 1).collect()).collect();
    let coefficients: Vec<BTreeMap<String, String>> = cert
        .coefficients
        .iter()
        .map(|m| m.iter().map(|(c, q)| ((c + 1).to_string(), format_rational(q))).collect())
        .collect();
    json!({ "blocks": blocks, "coefficients": coefficients })
}

/// Inverse of [`certificate_json`]; a full `rado check` report is accepted too.
pub fn certificate_from_json(value: &Value) -> Result<ColumnsCertificate> {
    let value = value.get("certificate").unwrap_or(value);
    let bad = || Error::input("malformed certificate");
    let to_index = |n: u64| usize::try_from(n).ok().and_then(|n| n.checked_sub(1)).ok_or_else(bad);
    let blocks = value
        .get("blocks")
        .and_then(Value::as_array)
        .ok_or_else(bad)?
        .iter()
        .map(|b| {
            b.as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|c| c.as_u64().ok_or_else(bad).and_then(to_index))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let coefficients = value
        .get("coefficients")
        .and_then(Value::as_array)
        .ok_or_else(bad)?
        .iter()
        .map(|m| {
            m.as_object()
                .ok_or_else(bad)?
                .iter()
                .map(|(k, q)| {
                    let col = to_index(parse_number(k, "column index")?)?;
                    Ok((col, parse_rational(q.as_str().ok_or_else(bad)?)?))
                })
                .collect::<Result<BTreeMap<_, _>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ColumnsCertificate { blocks, coefficients })
}

fn coloring_json(c: &Coloring) -> Value {
    let cells: Vec<Vec<u64>> = c.cells();
    json!({ "horizon": c.horizon, "colors": c.color_count, "cells": cells, "assignment": c.colors })
}

fn window_json(s: &SetWindow) -> Value {
    json!({ "horizon": s.horizon(), "size": s.len(), "members": s.members() })
}

fn hits_json(h: &OrbitHits) -> Value {
    json!({ "horizon": h.set.horizon(), "size": h.set.len(), "members": h.set.members(), "boundary_hits": h.boundary_hits })
}

fn dispatch(cli: &Cli) -> Result<Report> {
    let g = &cli.global;
    match &cli.command {
        Command::Rado(cmd) => run_rado(cmd, g),
        Command::Mpc(cmd) => run_mpc(cmd, g),
        Command::Fs(cmd) => run_fs(cmd),
        Command::Dyn(cmd) => run_dyn(cmd),
        Command::Cst(cmd) => run_cst(cmd, g),
    }
}

fn run_rado(cmd: &RadoCmd, g: &Global) -> Result<Report> {
    let budget = g.budget.unwrap_or(rado::DEFAULT_BUDGET);
    match cmd {
        RadoCmd::Check { matrix, out } => {
            let a = load_matrix(matrix)?;
            let verdict = columns_condition(&a)?;
            let certificate = verdict.certificate().map(certificate_json).unwrap_or(Value::Null);
            if let Some(path) = out {
                let text = serde_json::to_string_pretty(&certificate).expect("certificate serializes");
                write_file(path, &format!("{text}\n"))?;
            }
            Ok(report(json!({
                "matrix": matrix,
                "partition_regular": verdict.is_regular(),
                "degenerate": matches!(verdict, ColumnsVerdict::Degenerate),
                "certificate": certificate,
            })))
        }
        RadoCmd::Verify { matrix, certificate } => {
            let a = load_matrix(matrix)?;
            let value: Value = serde_json::from_str(&read_file(certificate)?)
                .map_err(|e| Error::input(format!("certificate is not JSON: {e}")))?;
            let cert = certificate_from_json(&value)?;
            Ok(report(json!({ "matrix": matrix, "valid": verify_certificate(&a, &cert)? })))
        }
        RadoCmd::Empirical { matrix, colors, horizon, solve, out } => {
            let a = load_matrix(matrix)?;
            let opts = solve_options(&a, solve);
            let verdict = empirical_pr(&a, *colors, *horizon, opts, budget, g.threads)?;
            let (name, witness) = match &verdict {
                EmpiricalVerdict::Forced => ("forced", Value::Null),
                EmpiricalVerdict::Witness(c) => {
                    if let Some(path) = out {
                        write_file(path, &c.to_text())?;
                    }
                    ("witness", coloring_json(c))
                }
                EmpiricalVerdict::Inconclusive => ("inconclusive", Value::Null),
            };
            Ok(report(json!({
                "matrix": matrix,
                "colors": colors,
                "horizon": horizon,
                "options": options_json(solve.nontrivial, opts),
                "verdict": name,
                "witness": witness,
            })))
        }
        RadoCmd::VerifyColoring { matrix, coloring, solve } => {
            let a = load_matrix(matrix)?;
            let opts = solve_options(&a, solve);
            let c = Coloring::parse(&read_file(coloring)?)?;
            let solution = monochromatic_solution(&a, &c, opts)?;
            Ok(report(json!({
                "matrix": matrix,
                "options": options_json(solve.nontrivial, opts),
                "avoids_monochromatic_solutions": solution.is_none(),
                "monochromatic_solution": solution,
            })))
        }
        RadoCmd::Solve { matrix, set, solve } => {
            let a = load_matrix(matrix)?;
            let opts = solve_options(&a, solve);
            let s = load_set(set)?;
            let solution = solve_in_cell_budget(&a, &s, opts, budget)?;
            Ok(report(json!({
                "matrix": matrix,
                "set": set,
                "options": options_json(solve.nontrivial, opts),
                "verdict": if solution.is_some() { "found" } else { "absent" },
                "solution": solution,
            })))
        }
        RadoCmd::SchurNumber { colors, max } => {
            let a = schur_matrix();
            forcing_report(&a, *colors, *max, budget, g.threads, |forced| forced - 1, json!({ "equation": "x + y = z" }))
        }
        RadoCmd::VdwNumber { colors, length, max } => {
            let a = progression_matrix(*length)?;
            forcing_report(&a, *colors, *max, budget, g.threads, |forced| forced, json!({ "progression_length": length }))
        }
    }
}

/// Sweep report; `number` maps the first forced horizon to the reported
/// number under the convention of the problem.
fn forcing_report(
    a: &RationalMatrix,
    colors: u32,
    max: u64,
    budget: u64,
    threads: usize,
    number: impl Fn(u64) -> u64,
    problem: Value,
) -> Result<Report> {
    let opts = default_options(a);
    let sweep = forcing_sweep(a, colors, max, opts, budget, threads)?;
    let verified = match &sweep.witness {
        Some(c) => Some(monochromatic_solution(a, c, opts)?.is_none()),
        None => None,
    };
    let mut out = report(json!({
        "colors": colors,
        "max": max,
        "options": options_json(Nontrivial::Auto, opts),
        "number": sweep.forced_at.map(number),
        "forced_at": sweep.forced_at,
        "witness_at": sweep.witness_at,
        "witness": sweep.witness.as_ref().map(coloring_json),
        "witness_verified": verified,
    }));
    out.insert("problem".into(), problem);
    if sweep.forced_at.is_none() {
        out.insert("verdict".into(), json!("not_forced_within_max"));
    }
    Ok(out)
}

fn run_mpc(cmd: &MpcCmd, g: &Global) -> Result<Report> {
    match cmd {
        MpcCmd::Gen { params, gens } => {
            let p = params.params()?;
            let system = generate_mpc(p, gens)?;
            Ok(report(json!({
                "m": p.m, "p": p.p, "c": p.c,
                "generators": gens,
                "rows": mpc_size(p.m, p.p).to_string(),
                "values": system.values,
            })))
        }
        MpcCmd::Verify { set, params, gens } => {
            let s = load_set(set)?;
            let p = params.params()?;
            Ok(report(json!({
                "set": set, "m": p.m, "p": p.p, "c": p.c,
                "generators": gens,
                "contained": verify_mpc(&s, p, gens)?,
            })))
        }
        MpcCmd::Find { set, params, bound } => {
            let s = load_set(set)?;
            let p = params.params()?;
            let found = contains_mpc(&s, p, *bound, g.threads)?;
            let values = match &found {
                Some(t) => Some(generate_mpc(p, t)?.values),
                None => None,
            };
            Ok(report(json!({
                "set": set, "m": p.m, "p": p.p, "c": p.c, "bound": bound,
                "verdict": if found.is_some() { "found" } else { "absent" },
                "generators": found,
                "values": values,
            })))
        }
    }
}

fn run_fs(cmd: &FsCmd) -> Result<Report> {
    match cmd {
        FsCmd::Enum { spec, k } => {
            let ip = IpSpec::parse(spec, (*k).max(1))?;
            let s = fs_enumerate(&ip, *k)?;
            Ok(report(json!({ "spec": spec, "k": k, "sums": window_json(&s) })))
        }
        FsCmd::Divisible { spec, horizon, c, n } => {
            let ip = IpSpec::parse(spec, *horizon)?;
            let alphas = find_divisible_subsequence(&ip, *c, *n)?;
            let sums = alphas.iter().map(|a| ip_term_scalar(&ip, *a)).collect::<Result<Vec<_>>>()?;
            Ok(report(json!({ "spec": spec, "c": c, "n": n, "alphas": alphas, "sums": sums })))
        }
        FsCmd::Zerosum { values, n } => {
            let found = zero_sum_mod(values, *n)?;
            let sum: Option<i128> = found.as_ref().map(|idx| idx.iter().map(|&i| values[i - 1]).sum());
            Ok(report(json!({
                "values": values, "n": n,
                "verdict": if found.is_some() { "found" } else { "not_found" },
                "indices": found,
                "sum": sum,
            })))
        }
    }
}

fn run_dyn(cmd: &DynCmd) -> Result<Report> {
    let here = Path::new(".");
    match cmd {
        DynCmd::Orbit { system, point, target, horizon } => {
            let sys = DynSystem::parse(system, here)?;
            let x = match point {
                Some(p) => Point::parse(p, &sys)?,
                None => sys.origin(),
            };
            let hits = orbit_hits(&sys, &x, &Target::parse(target)?, *horizon)?;
            Ok(report(json!({ "system": system, "point": point, "target": target, "hits": hits_json(&hits) })))
        }
        DynCmd::Product { system_a, system_b, x, y, target_a, target_b, horizon } => {
            let a = DynSystem::parse(system_a, here)?;
            let b = DynSystem::parse(system_b, here)?;
            let xa = match x {
                Some(p) => Point::parse(p, &a)?,
                None => a.origin(),
            };
            let yb = match y {
                Some(p) => Point::parse(p, &b)?,
                None => b.origin(),
            };
            let hits = product_return_times(&a, &b, &xa, &yb, &Target::parse(target_a)?, &Target::parse(target_b)?, *horizon)?;
            Ok(report(json!({
                "system_a": system_a, "system_b": system_b, "x": x, "y": y,
                "target_a": target_a, "target_b": target_b,
                "hits": hits_json(&hits),
            })))
        }
        DynCmd::Density { set, window } => {
            let s = load_set(set)?;
            let d = banach_density_estimate(&s, *window)?;
            Ok(report(json!({ "set": set, "density": d })))
        }
        DynCmd::Gaps { set } => {
            let s = load_set(set)?;
            Ok(report(json!({ "set": set, "horizon": s.horizon(), "max_gap": syndetic_gap(&s) })))
        }
        DynCmd::Pws { set, k, length } => {
            let s = load_set(set)?;
            let r = piecewise_syndetic_window(&s, *k, *length)?;
            Ok(report(json!({ "set": set, "k": k, "length": length, "result": r })))
        }
        DynCmd::Strauss { epsilon, horizon, out } => {
            let eps = parse_rational(epsilon)?;
            let st = strauss_set(&eps, *horizon)?;
            if let Some(path) = out {
                write_file(path, &st.set.to_text())?;
            }
            let density = ratio(st.set.len() as i64, *horizon as i64);
            let checks: Vec<bool> = st.witnesses.iter().map(|w| strauss_witness_holds(&st.set, w)).collect();
            Ok(report(json!({
                "epsilon": format_rational(&eps),
                "horizon": horizon,
                "size": st.set.len(),
                "density": format_rational(&density),
                "density_at_least_one_minus_epsilon": density >= ratio(1, 1) - eps,
                "witnesses": st.witnesses,
                "witnesses_hold": checks.iter().all(|&b| b),
            })))
        }
    }
}

fn load_witness(path: &str) -> Result<CstWitness> {
    let value: Value =
        serde_json::from_str(&read_file(path)?).map_err(|e| Error::input(format!("witness is not JSON: {e}")))?;
    let value = value.get("witness").cloned().unwrap_or(value);
    serde_json::from_value(value).map_err(|e| Error::input(format!("malformed witness: {e}")))
}

fn run_cst(cmd: &CstCmd, g: &Global) -> Result<Report> {
    let budget = g.budget.unwrap_or(cst::DEFAULT_BUDGET);
    match cmd {
        CstCmd::Search { set, specs, depth, out } => {
            let s = load_set(set)?;
            let ips = specs.load()?;
            let outcome = cst_search(&s, &ips, *depth, budget)?;
            let (verdict, witness) = match &outcome {
                CstOutcome::Found(w) => ("found", Some(w)),
                CstOutcome::ProvenAbsent => ("proven_absent", None),
            };
            if let (Some(path), Some(w)) = (out, witness) {
                let text = serde_json::to_string_pretty(w).expect("witness serializes");
                write_file(path, &format!("{text}\n"))?;
            }
            let verified = match witness {
                Some(w) => Some(verify_cst_witness(&s, &ips, w)?),
                None => None,
            };
            Ok(report(json!({
                "set": set, "specs": specs.specs, "depth": depth,
                "verdict": verdict,
                "witness": witness,
                "witness_verified": verified,
            })))
        }
        CstCmd::Verify { set, specs, witness } => {
            let s = load_set(set)?;
            let ips = specs.load()?;
            let w = load_witness(witness)?;
            Ok(report(json!({ "set": set, "specs": specs.specs, "valid": verify_cst_witness(&s, &ips, &w)? })))
        }
        CstCmd::Mpc { set, params, family } => {
            let s = load_set(set)?;
            let p = params.params()?;
            let out = mpc_from_cst(&s, p, *family, budget)?;
            let verified = match &out {
                Some(f) => Some(verify_mpc(&s, p, &f.system.generators)?),
                None => None,
            };
            Ok(report(json!({
                "set": set, "m": p.m, "p": p.p, "c": p.c, "family_size": family,
                "verdict": if out.is_some() { "found" } else { "proven_absent" },
                "tuples": out.as_ref().map(|f| &f.tuples),
                "generators": out.as_ref().map(|f| &f.system.generators),
                "values": out.as_ref().map(|f| &f.system.values),
                "system_verified": verified,
            })))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> RunOutput {
        run(std::iter::once("partreg").chain(args.iter().copied()))
    }

    fn json_of(out: &RunOutput) -> Value {
        serde_json::from_str(&out.stdout).unwrap()
    }

    #[test]
    fn schur_number_report() {
        let out = run_args(&["rado", "schur-number", "--colors", "2", "--max", "10"]);
        assert_eq!(out.status, 0, "{}", out.stderr);
        let v = json_of(&out);
        assert_eq!(v["number"], 4);
        assert_eq!(v["forced_at"], 5);
        assert_eq!(v["witness"]["cells"], json!([[1, 4], [2, 3]]));
        assert_eq!(v["witness_verified"], true);
        assert_eq!(v["options"]["nontrivial_mode"], "auto");
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_args(&["rado", "bogus"]).status, 1);
        assert_eq!(run_args(&["mpc", "find", "--set", "all:5"]).status, 1);
        assert_eq!(run_args(&["--help"]).status, 0);
        let out = run_args(&["dyn", "gaps", "--set", "mod:1,0,5"]);
        assert_eq!(out.status, 1);
        assert!(out.stderr.contains("modulus"));
    }

    #[test]
    fn budget_exits_two() {
        let out = run_args(&["cst", "search", "--set", "odds:999", "--spec", "const:1", "--depth", "2", "--budget", "50"]);
        assert_eq!(out.status, 2);
        assert_eq!(json_of(&out)["verdict"], "budget_exhausted");
    }

    #[test]
    fn set_expressions() {
        assert_eq!(load_set("mod:1,4,10").unwrap().members(), &[1, 5, 9]);
        assert_eq!(load_set("fs:geom:1,2,3").unwrap().members(), &[1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(load_set("fs:list:2,3,2").unwrap().members(), &[2, 3, 5]);
        assert_eq!(load_set("evens:7").unwrap().members(), &[2, 4, 6]);
        assert!(load_set("nowhere/at/all").is_err());
    }

    #[test]
    fn plain_output() {
        let out = run_args(&["dyn", "gaps", "--set", "evens:100", "--plain"]);
        assert_eq!(out.stdout, "command: dyn gaps\nhorizon: 100\nmax_gap: 2\nset: evens:100\n");
    }

    #[test]
    fn mpc_find_report() {
        let out = run_args(&["mpc", "find", "--set", "all:25", "--m", "1", "--p", "1", "--c", "1", "--bound", "25"]);
        let v = json_of(&out);
        assert_eq!(v["generators"], json!([1, 2]));
        assert_eq!(v["values"], json!([1, 2, 3]));
        let out = run_args(&["mpc", "gen", "--m", "1", "--p", "1", "--c", "1", "--gens", "3,2"]);
        assert_eq!(out.status, 1);
        assert!(out.stderr.contains("not expandable"));
    }

    #[test]
    fn certificate_json_round_trip() {
        let a = RationalMatrix::from_integer_rows(&[vec![1, 2, -3, 4], vec![0, 1, -1, 2]]).unwrap();
        if let ColumnsVerdict::Regular(cert) = columns_condition(&a).unwrap() {
            let back = certificate_from_json(&certificate_json(&cert)).unwrap();
            assert_eq!(back, cert);
        }
        let a = schur_matrix();
        let cert = columns_condition(&a).unwrap().certificate().unwrap().clone();
        let v = certificate_json(&cert);
        assert_eq!(v["blocks"], json!([[1, 3], [2]]));
        assert_eq!(certificate_from_json(&v).unwrap(), cert);
    }
}
