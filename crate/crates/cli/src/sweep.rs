//! Parameter sweeps driven by a TOML document.
//!
//! ```toml
//! out_dir = "artifacts"
//! cap = 16777216
//! backend = "constructive"
//!
//! [[c1]]
//! q = 2
//! n = 10
//! b = 2
//! d = "2"
//!
//! [[c2]]
//! q = 3
//! n = 9
//! d = "3/2"
//! ```

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::Context;
use serde::Deserialize;

use burstcode::c1::{C1Code, C1Params};
use burstcode::c2::{C2Code, C2Params};
use burstcode::sketch::BackendKind;
use burstcode::verify::{self, OpsBudget, DEFAULT_CAP};
use burstcode::Ratio;

use crate::output::{emit, VerifyArtifact};

#[derive(Deserialize)]
struct SweepConfig {
    out_dir: PathBuf,
    #[serde(default = "default_cap")]
    cap: u64,
    #[serde(default = "default_backend")]
    backend: String,
    #[serde(default)]
    negatives: bool,
    #[serde(default)]
    c1: Vec<C1Point>,
    #[serde(default)]
    c2: Vec<C2Point>,
}

fn default_cap() -> u64 {
    DEFAULT_CAP
}

fn default_backend() -> String {
    "constructive".into()
}

#[derive(Deserialize)]
struct C1Point {
    q: u32,
    n: usize,
    b: usize,
    d: String,
    stride: Option<usize>,
}

#[derive(Deserialize)]
struct C2Point {
    q: u32,
    n: usize,
    d: String,
    stride: Option<usize>,
}

pub fn run(config_path: &Path) -> anyhow::Result<i32> {
    let text =
        std::fs::read_to_string(config_path).with_context(|| format!("reading {config_path:?}"))?;
    let config: SweepConfig = toml::from_str(&text).context("parsing sweep config")?;
    let backend = BackendKind::from_str(&config.backend)?;
    let cache = std::env::var_os("BURSTCODE_CACHE_DIR").map(PathBuf::from);
    std::fs::create_dir_all(&config.out_dir)?;
    let mut all_pass = true;

    for point in &config.c1 {
        let d: Ratio = point.d.parse()?;
        let params = C1Params::build(
            point.q,
            point.n,
            point.b,
            d,
            backend,
            point.stride,
            config.cap,
            cache.as_deref(),
        )?;
        let budget = OpsBudget::new(config.cap);
        let (target, members) = params.best_class(config.cap)?;
        let code = C1Code::new(params.clone(), target);
        let id = format!("{target:?}");
        let code_report = verify::verify_code(&members, 2, point.b, &id, &budget)?;
        let decode_report = verify::verify_decoder(
            &members,
            point.q,
            point.n,
            2,
            point.b,
            &id,
            |y| code.decode(y),
            config.negatives,
            &budget,
        )?;
        all_pass &= code_report.passed() && decode_report.passed();
        let artifact = VerifyArtifact {
            class_id: id,
            code: code_report,
            decoder: decode_report,
        };
        let file = config.out_dir.join(format!(
            "c1_q{}_n{}_b{}_d{}.json",
            point.q,
            point.n,
            point.b,
            point.d.replace('/', "-")
        ));
        emit(&artifact, Some(&file))?;
        eprintln!("wrote {}", file.display());
    }

    for point in &config.c2 {
        let d: Ratio = point.d.parse()?;
        let params = C2Params::build(
            point.q,
            point.n,
            d,
            backend,
            point.stride,
            config.cap,
            cache.as_deref(),
        )?;
        let budget = OpsBudget::new(config.cap);
        let (target, members) = params.best_class(config.cap)?;
        let code = C2Code::new(params.clone(), target);
        let id = format!("{target:?}");
        let code_report = verify::verify_code(&members, 2, 1, &id, &budget)?;
        let decode_report = verify::verify_decoder(
            &members,
            point.q,
            point.n,
            2,
            1,
            &id,
            |y| code.decode(y),
            config.negatives,
            &budget,
        )?;
        all_pass &= code_report.passed() && decode_report.passed();
        let artifact = VerifyArtifact {
            class_id: id,
            code: code_report,
            decoder: decode_report,
        };
        let file = config.out_dir.join(format!(
            "c2_q{}_n{}_d{}.json",
            point.q,
            point.n,
            point.d.replace('/', "-")
        ));
        emit(&artifact, Some(&file))?;
        eprintln!("wrote {}", file.display());
    }

    Ok(if all_pass { 0 } else { 1 })
}
