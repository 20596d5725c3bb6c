//! Command-line front end: build/verify/decode the sieve codes, channel and
//! sketch checks, bounds, parameter sweeps, and redundancy tables.
//!
//! JSON artifacts are the machine interface and are byte-stable across
//! identical invocations: stable field order, no timestamps in the data.
//! Wall-clock timings go to stderr. Coloring tables are cached under the
//! directory named by `BURSTCODE_CACHE_DIR` when that variable is set.

mod output;
mod sweep;

use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use burstcode::bounds;
use burstcode::c1::{C1Code, C1Params, C1Syndrome};
use burstcode::c2::{C2Code, C2Params, C2Syndrome};
use burstcode::channel;
use burstcode::seq::{all_words, run_profile, Word};
use burstcode::sketch::BackendKind;
use burstcode::verify::{self, OpsBudget, DEFAULT_CAP};
use burstcode::Ratio;

use output::{emit, CodeBuildArtifact, MutationArtifact, VerifyArtifact};

#[derive(Parser)]
#[command(
    name = "burstcode",
    version,
    about = "codes correcting two bursts of deletions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the deletion ball of a word, one member per line.
    Ball {
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long, default_value_t = 1)]
        b: usize,
        word: String,
    },
    /// Exit 0 when the two words are confusable, 1 otherwise.
    Confusable {
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long, default_value_t = 1)]
        b: usize,
        x: String,
        y: String,
    },
    /// The two-b-burst-deletion sieve code.
    C1 {
        #[command(subcommand)]
        action: CodeAction,
    },
    /// The q-ary two-deletion sieve code (q > 2).
    C2 {
        #[command(subcommand)]
        action: CodeAction,
    },
    /// Size and redundancy bounds at one parameter point.
    Bounds {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Channel identities, sketch contracts, mutation sensitivity.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Run every point of a TOML sweep configuration.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Redundancy-vs-n table: sieve code, ψ baseline, and the bounds.
    Report {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        d: String,
        /// Comma-separated list of lengths.
        #[arg(long)]
        ns: String,
        #[arg(long, default_value = "constructive")]
        backend: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CodeParams {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    n: usize,
    /// Burst length; fixed to 1 for c2.
    #[arg(long, default_value_t = 2)]
    b: usize,
    /// Regularity parameter, e.g. `2` or `3/2`.
    #[arg(long)]
    d: String,
    /// Backend for the segment/run sketch roles.
    #[arg(long = "sketch-backend", default_value = "constructive")]
    backend: String,
    /// Override the window stride (default: the construction's own value).
    #[arg(long)]
    stride: Option<usize>,
    /// Target class, in the `class_id` format emitted by `build`; the
    /// largest class is used when absent.
    #[arg(long)]
    target: Option<String>,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
}

#[derive(Subcommand)]
enum CodeAction {
    /// Enumerate classes and report the best one.
    Build {
        #[command(flatten)]
        params: CodeParams,
        /// Include the codewords of the best class in the artifact.
        #[arg(long)]
        emit_members: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the best class (or all classes) exhaustively.
    Verify {
        #[command(flatten)]
        params: CodeParams,
        /// Check every class, not only the best one.
        #[arg(long)]
        all_classes: bool,
        /// Also sweep corrupted words outside every ball.
        #[arg(long)]
        negatives: bool,
        /// Sample this many decode items per class instead of sweeping all.
        #[arg(long)]
        sample: Option<usize>,
        /// Seed for `--sample` (recorded in the report).
        #[arg(long, default_value_t = 0xb0_05)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode one corrupted word against the best class.
    Decode {
        #[command(flatten)]
        params: CodeParams,
        word: String,
    },
}

#[derive(Subcommand)]
enum VerifyTarget {
    /// Two-stage/disjoint equivalence, ball-size sandwich, per-row deletion
    /// positions.
    Channel {
        #[arg(long, default_value_t = 3)]
        max_q: u32,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        #[arg(long, default_value_t = 3)]
        max_b: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive sketch-contract checks at the standard matrix.
    Sketches {
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Drop each sieve constraint and search for a confusable pair.
    Mutation {
        #[command(flatten)]
        params: CodeParams,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    let status = match run(cli) {
        Ok(status) => status,
        Err(err) => {
            eprintln!("error: {err:#}");
            2
        }
    };
    eprintln!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
    std::process::exit(status);
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os("BURSTCODE_CACHE_DIR").map(PathBuf::from)
}

fn parse_backend(s: &str) -> anyhow::Result<BackendKind> {
    Ok(BackendKind::from_str(s)?)
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Ball { q, t, b, word } => {
            let x = Word::parse(&word, q)?;
            for member in channel::ball(&x, t, b)? {
                println!("{member}");
            }
            Ok(0)
        }
        Command::Confusable { q, t, b, x, y } => {
            let xw = Word::parse(&x, q)?;
            let yw = Word::parse(&y, q)?;
            let confusable = channel::confusable(&xw, &yw, t, b)?;
            println!("{}", if confusable { "confusable" } else { "disjoint" });
            Ok(if confusable { 0 } else { 1 })
        }
        Command::C1 { action } => run_c1(action),
        Command::C2 { action } => run_c2(action),
        Command::Bounds { q, n, b, out } => {
            let report = bounds::bound_report(q, n, b)?;
            emit(&report, out.as_deref())?;
            Ok(0)
        }
        Command::Verify { target } => run_verify(target),
        Command::Sweep { config } => sweep::run(&config),
        Command::Report {
            q,
            b,
            d,
            ns,
            backend,
            cap,
            out,
        } => {
            let d: Ratio = d.parse()?;
            let backend = parse_backend(&backend)?;
            let ns: Vec<usize> = ns
                .split(',')
                .map(|s| s.trim().parse().context("bad length list"))
                .collect::<anyhow::Result<_>>()?;
            output::redundancy_table(
                q,
                b,
                d,
                &ns,
                backend,
                cap,
                cache_dir().as_deref(),
                out.as_deref(),
            )?;
            Ok(0)
        }
    }
}

fn build_c1(p: &CodeParams) -> anyhow::Result<Arc<C1Params>> {
    let d: Ratio = p.d.parse()?;
    let backend = parse_backend(&p.backend)?;
    Ok(C1Params::build(
        p.q,
        p.n,
        p.b,
        d,
        backend,
        p.stride,
        p.cap,
        cache_dir().as_deref(),
    )?)
}

fn build_c2(p: &CodeParams) -> anyhow::Result<Arc<C2Params>> {
    // --b is accepted for interface symmetry but c2 always works at b = 1
    let d: Ratio = p.d.parse()?;
    let backend = parse_backend(&p.backend)?;
    Ok(C2Params::build(
        p.q,
        p.n,
        d,
        backend,
        p.stride,
        p.cap,
        cache_dir().as_deref(),
    )?)
}

fn c1_class_id(syn: &C1Syndrome) -> String {
    format!(
        "eta={} f=({},{},{}) h0={} h1={}",
        syn.eta, syn.f.0, syn.f.1, syn.f.2, syn.h0, syn.h1
    )
}

fn c2_class_id(syn: &C2Syndrome) -> String {
    format!(
        "eta={} f0={} f1={} h0={} h1={}",
        syn.eta, syn.f0, syn.f1, syn.h0, syn.h1
    )
}

fn field<'a>(parts: &'a [&str], key: &str) -> anyhow::Result<&'a str> {
    parts
        .iter()
        .find_map(|p| p.strip_prefix(key))
        .with_context(|| format!("target is missing `{key}`"))
}

fn parse_c1_target(s: &str) -> anyhow::Result<C1Syndrome> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    let f_raw = field(&parts, "f=(")?.trim_end_matches(')');
    let f: Vec<u64> = f_raw
        .split(',')
        .map(|t| t.trim().parse().context("bad f component"))
        .collect::<anyhow::Result<_>>()?;
    if f.len() != 3 {
        anyhow::bail!("f needs three components");
    }
    Ok(C1Syndrome {
        eta: field(&parts, "eta=")?.parse()?,
        f: (f[0], f[1], f[2]),
        h0: field(&parts, "h0=")?.parse()?,
        h1: field(&parts, "h1=")?.parse()?,
    })
}

fn parse_c2_target(s: &str) -> anyhow::Result<C2Syndrome> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    Ok(C2Syndrome {
        eta: field(&parts, "eta=")?.parse()?,
        f0: field(&parts, "f0=")?.parse()?,
        f1: field(&parts, "f1=")?.parse()?,
        h0: field(&parts, "h0=")?.parse()?,
        h1: field(&parts, "h1=")?.parse()?,
    })
}

fn run_c1(action: CodeAction) -> anyhow::Result<i32> {
    match action {
        CodeAction::Build {
            params,
            emit_members,
            out,
        } => {
            let p = build_c1(&params)?;
            let (target, members) = p.best_class(params.cap)?;
            let artifact = CodeBuildArtifact {
                version: 1,
                code: "c1".into(),
                q: params.q,
                n: params.n,
                b: params.b,
                d: params.d.clone(),
                backend: params.backend.clone(),
                stride: p.stride,
                class_count: p.classes(params.cap)?.len(),
                best_class_id: c1_class_id(&target),
                best_class_size: members.len(),
                redundancy_bits: (params.n as f64) * (params.q as f64).log2()
                    - (members.len() as f64).log2(),
                syndrome_bits: p.syndrome_bits(),
                label_spaces: output::c1_label_spaces(&p),
                members: emit_members.then(|| members.iter().map(|w| w.to_string()).collect()),
            };
            emit(&artifact, out.as_deref())?;
            Ok(0)
        }
        CodeAction::Verify {
            params,
            all_classes,
            negatives,
            sample,
            seed,
            out,
        } => {
            let p = build_c1(&params)?;
            let budget = OpsBudget::new(params.cap);
            let classes = if all_classes {
                p.classes(params.cap)?
            } else if let Some(target) = &params.target {
                let syn = parse_c1_target(target)?;
                let code = C1Code::new(p.clone(), syn);
                vec![(syn, code.enumerate(params.cap)?)]
            } else {
                vec![p.best_class(params.cap)?]
            };
            let mut artifacts = Vec::new();
            let mut all_pass = true;
            for (syn, members) in classes {
                let code = C1Code::new(p.clone(), syn);
                let id = c1_class_id(&syn);
                let code_report = verify::verify_code(&members, 2, params.b, &id, &budget)?;
                let decode_report = match sample {
                    Some(k) => verify::verify_decoder_sampled(
                        &members,
                        params.n,
                        2,
                        params.b,
                        &id,
                        |y| code.decode(y),
                        k,
                        seed,
                    )?,
                    None => verify::verify_decoder(
                        &members,
                        params.q,
                        params.n,
                        2,
                        params.b,
                        &id,
                        |y| code.decode(y),
                        negatives,
                        &budget,
                    )?,
                };
                all_pass &= code_report.passed() && decode_report.passed();
                artifacts.push(VerifyArtifact {
                    class_id: id,
                    code: code_report,
                    decoder: decode_report,
                });
            }
            emit(&artifacts, out.as_deref())?;
            Ok(if all_pass { 0 } else { 1 })
        }
        CodeAction::Decode { params, word } => {
            let p = build_c1(&params)?;
            let target = match &params.target {
                Some(t) => parse_c1_target(t)?,
                None => p.best_class(params.cap)?.0,
            };
            let code = C1Code::new(p, target);
            let y = Word::parse(&word, params.q)?;
            let (decoded, branch) = code.decode(&y)?;
            println!("{decoded} ({branch:?})");
            Ok(0)
        }
    }
}

fn run_c2(action: CodeAction) -> anyhow::Result<i32> {
    match action {
        CodeAction::Build {
            params,
            emit_members,
            out,
        } => {
            let p = build_c2(&params)?;
            let (target, members) = p.best_class(params.cap)?;
            let artifact = CodeBuildArtifact {
                version: 1,
                code: "c2".into(),
                q: params.q,
                n: params.n,
                b: 1,
                d: params.d.clone(),
                backend: params.backend.clone(),
                stride: p.stride,
                class_count: p.classes(params.cap)?.len(),
                best_class_id: c2_class_id(&target),
                best_class_size: members.len(),
                redundancy_bits: (params.n as f64) * (params.q as f64).log2()
                    - (members.len() as f64).log2(),
                syndrome_bits: p.syndrome_bits(),
                label_spaces: output::c2_label_spaces(&p),
                members: emit_members.then(|| members.iter().map(|w| w.to_string()).collect()),
            };
            emit(&artifact, out.as_deref())?;
            Ok(0)
        }
        CodeAction::Verify {
            params,
            all_classes,
            negatives,
            sample,
            seed,
            out,
        } => {
            let p = build_c2(&params)?;
            let budget = OpsBudget::new(params.cap);
            let classes = if all_classes {
                p.classes(params.cap)?
            } else if let Some(target) = &params.target {
                let syn = parse_c2_target(target)?;
                let code = C2Code::new(p.clone(), syn);
                vec![(syn, code.enumerate(params.cap)?)]
            } else {
                vec![p.best_class(params.cap)?]
            };
            let mut artifacts = Vec::new();
            let mut all_pass = true;
            for (syn, members) in classes {
                let code = C2Code::new(p.clone(), syn);
                let id = c2_class_id(&syn);
                let code_report = verify::verify_code(&members, 2, 1, &id, &budget)?;
                let decode_report = match sample {
                    Some(k) => verify::verify_decoder_sampled(
                        &members,
                        params.n,
                        2,
                        1,
                        &id,
                        |y| code.decode(y),
                        k,
                        seed,
                    )?,
                    None => verify::verify_decoder(
                        &members,
                        params.q,
                        params.n,
                        2,
                        1,
                        &id,
                        |y| code.decode(y),
                        negatives,
                        &budget,
                    )?,
                };
                all_pass &= code_report.passed() && decode_report.passed();
                artifacts.push(VerifyArtifact {
                    class_id: id,
                    code: code_report,
                    decoder: decode_report,
                });
            }
            emit(&artifacts, out.as_deref())?;
            Ok(if all_pass { 0 } else { 1 })
        }
        CodeAction::Decode { params, word } => {
            let p = build_c2(&params)?;
            let target = match &params.target {
                Some(t) => parse_c2_target(t)?,
                None => p.best_class(params.cap)?.0,
            };
            let code = C2Code::new(p, target);
            let y = Word::parse(&word, params.q)?;
            let (decoded, branch) = code.decode(&y)?;
            println!("{decoded} ({branch:?})");
            Ok(0)
        }
    }
}

fn run_verify(target: VerifyTarget) -> anyhow::Result<i32> {
    match target {
        VerifyTarget::Channel {
            max_q,
            max_n,
            max_b,
            out,
        } => {
            let report = channel_identities(max_q, max_n, max_b)?;
            let pass = report.failures.is_empty();
            emit(&report, out.as_deref())?;
            Ok(if pass { 0 } else { 1 })
        }
        VerifyTarget::Sketches { cap, out } => {
            let report = output::sketch_matrix(cap, cache_dir().as_deref())?;
            let pass = report.iter().all(|r| r.violations == 0);
            emit(&report, out.as_deref())?;
            Ok(if pass { 0 } else { 1 })
        }
        VerifyTarget::Mutation { params, out } => {
            let p = build_c1(&params)?;
            let budget = OpsBudget::new(params.cap);
            let mut rows = Vec::new();
            for constraint in verify::ALL_C1_CONSTRAINTS {
                let witness = verify::c1_mutation_witness(&p, constraint, &budget)?;
                rows.push(MutationArtifact {
                    constraint: format!("{constraint:?}"),
                    witness: witness.map(|(a, b)| (a.to_string(), b.to_string())),
                });
            }
            emit(&rows, out.as_deref())?;
            Ok(0)
        }
    }
}

#[derive(serde::Serialize)]
struct ChannelReport {
    version: u32,
    points_checked: usize,
    sandwich_words: usize,
    failures: Vec<String>,
}

/// Observation-level identities: two-stage deletions match disjoint burst
/// patterns, per-row deletion columns obey the adjacency relation, and the
/// two-deletion ball size sits between `binom(r-1,2)` and `binom(r+1,2)`.
fn channel_identities(max_q: u32, max_n: usize, max_b: usize) -> anyhow::Result<ChannelReport> {
    let mut failures = Vec::new();
    let mut points = 0usize;
    for q in 2..=max_q {
        for b in 1..=max_b {
            for n in (2 * b + 1)..=max_n {
                points += 1;
                for x in all_words(q, n) {
                    let mut two_stage = std::collections::BTreeSet::new();
                    for i1 in 1..=(n - b + 1) {
                        for i2 in 1..=(n - 2 * b + 1) {
                            two_stage.insert(channel::two_stage_delete(&x, i1, i2, b)?);
                        }
                    }
                    if two_stage != channel::ball(&x, 2, b)? {
                        failures.push(format!("two-stage mismatch at q={q} b={b} x={x}"));
                    }
                }
            }
        }
    }
    // ball-size sandwich for binary words under two single deletions
    let binom2 = |r: usize| r * r.saturating_sub(1) / 2;
    let mut sandwich_words = 0usize;
    for n in 3..=12usize {
        for v in all_words(2, n) {
            sandwich_words += 1;
            let r = run_profile(&v)?.r();
            let size = channel::ball(&v, 2, 1)?.len();
            if !(binom2(r.saturating_sub(1)) <= size && size <= binom2(r + 1)) {
                failures.push(format!("sandwich violated at {v}: r={r} size={size}"));
            }
        }
    }
    failures.sort();
    Ok(ChannelReport {
        version: 1,
        points_checked: points,
        sandwich_words,
        failures,
    })
}
