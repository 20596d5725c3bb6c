//! Artifact types and writers: deterministic JSON plus CSV tables.

use std::path::Path;
use std::sync::Arc;

use anyhow::Context;
use serde::Serialize;

use burstcode::bounds;
use burstcode::c1::C1Params;
use burstcode::c2::C2Params;
use burstcode::seq::{all_words, Word};
use burstcode::sketch::{
    BackendKind, ColoringSketch, DomainSpec, PsiSketch, RowwiseBurstSketch, Sketch,
    TenengoltsSketch, VtSketch, Xi1Sketch,
};
use burstcode::verify::{
    check_sketch_contract, OpsBudget, SketchContractReport, VerificationReport,
};
use burstcode::Ratio;

/// Write pretty JSON to stdout or a file.
pub fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> anyhow::Result<()> {
    let json = serde_json::to_string_pretty(value)?;
    match out {
        Some(path) => {
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent).ok();
            }
            std::fs::write(path, json + "\n").with_context(|| format!("writing {path:?}"))?;
        }
        None => println!("{json}"),
    }
    Ok(())
}

#[derive(Serialize)]
pub struct CodeBuildArtifact {
    pub version: u32,
    pub code: String,
    pub q: u32,
    pub n: usize,
    pub b: usize,
    pub d: String,
    pub backend: String,
    pub stride: usize,
    pub class_count: usize,
    pub best_class_id: String,
    pub best_class_size: usize,
    pub redundancy_bits: f64,
    pub syndrome_bits: f64,
    pub label_spaces: LabelSpaces,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<String>>,
}

#[derive(Serialize)]
pub struct LabelSpaces {
    pub eta: u64,
    pub segment_bound: u64,
    pub window_bound: u64,
    pub extra: Vec<(String, u64)>,
}

pub fn c1_label_spaces(p: &Arc<C1Params>) -> LabelSpaces {
    LabelSpaces {
        eta: p.eta_label_space(),
        segment_bound: p.seg_label_bound(),
        window_bound: p.window_label_bound(),
        extra: vec![("m_cols".into(), p.m_cols() as u64)],
    }
}

pub fn c2_label_spaces(p: &Arc<C2Params>) -> LabelSpaces {
    LabelSpaces {
        eta: p.eta_label_space(),
        segment_bound: p.n1(),
        window_bound: p.window_label_bound(),
        extra: vec![("prime".into(), p.q_prime())],
    }
}

#[derive(Serialize)]
pub struct VerifyArtifact {
    pub class_id: String,
    pub code: VerificationReport,
    pub decoder: VerificationReport,
}

#[derive(Serialize)]
pub struct MutationArtifact {
    pub constraint: String,
    pub witness: Option<(String, String)>,
}

/// The standard sketch-contract matrix: every backend at its configured
/// exhaustive sizes.
pub fn sketch_matrix(cap: u64, cache: Option<&Path>) -> anyhow::Result<Vec<SketchContractReport>> {
    let budget = OpsBudget::new(cap);
    let mut out = Vec::new();

    let vt = VtSketch::new(8)?;
    let domain: Vec<Word> = all_words(2, 8).collect();
    out.push(check_sketch_contract(&vt, &domain, 1, 1, true, &budget)?);

    let ten = TenengoltsSketch::new(3, 7)?;
    let domain: Vec<Word> = all_words(3, 7).collect();
    out.push(check_sketch_contract(&ten, &domain, 1, 1, true, &budget)?);

    let rowwise = RowwiseBurstSketch::new(2, 10, 2)?;
    let domain: Vec<Word> = all_words(2, 10).collect();
    out.push(check_sketch_contract(
        &rowwise, &domain, 1, 2, true, &budget,
    )?);

    let coloring = ColoringSketch::build(2, 8, 2, 1, DomainSpec::Full, cap, cache)?;
    let domain: Vec<Word> = all_words(2, 8).collect();
    out.push(check_sketch_contract(
        &coloring, &domain, 2, 1, true, &budget,
    )?);

    let row: Arc<dyn Sketch> = Arc::new(ColoringSketch::build(
        2,
        8,
        2,
        1,
        DomainSpec::Full,
        cap,
        cache,
    )?);
    let xi1 = Xi1Sketch::new(4, 8, row)?;
    let domain: Vec<Word> = all_words(4, 8).collect();
    out.push(check_sketch_contract(&xi1, &domain, 2, 1, false, &budget)?);

    let row6: Arc<dyn Sketch> = Arc::new(ColoringSketch::build(
        2,
        6,
        2,
        1,
        DomainSpec::Full,
        cap,
        cache,
    )?);
    let xi1_6 = Arc::new(Xi1Sketch::new(2, 6, row6)?);
    let psi = PsiSketch::new(2, 12, 2, xi1_6)?;
    let domain: Vec<Word> = all_words(2, 12).collect();
    out.push(check_sketch_contract(&psi, &domain, 2, 2, false, &budget)?);

    Ok(out)
}

#[derive(Serialize)]
struct ReportRow {
    n: usize,
    regular_words: usize,
    best_class_size: usize,
    c1_redundancy_bits: f64,
    c1_syndrome_bits: f64,
    psi_baseline_bits: f64,
    optimal_redundancy_upper_bits: Option<f64>,
    corollary_lower_bits: f64,
    corollary_upper_bits: f64,
}

/// Redundancy table: measured sieve redundancy against the ψ-only baseline
/// and the generic bounds.
#[allow(clippy::too_many_arguments)]
pub fn redundancy_table(
    q: u32,
    b: usize,
    d: Ratio,
    ns: &[usize],
    backend: BackendKind,
    cap: u64,
    cache: Option<&Path>,
    out: Option<&Path>,
) -> anyhow::Result<()> {
    let mut rows = Vec::new();
    for &n in ns {
        let params = C1Params::build(q, n, b, d, backend, None, cap, cache)?;
        let classes = params.classes(cap)?;
        let regular_words: usize = classes.iter().map(|(_, m)| m.len()).sum();
        let best = classes.iter().map(|(_, m)| m.len()).max().unwrap_or(0);
        let rows_len = n.div_ceil(b);
        let row_sketch: Arc<dyn Sketch> = Arc::new(ColoringSketch::build(
            2,
            rows_len,
            2,
            1,
            DomainSpec::Full,
            cap,
            cache,
        )?);
        let xi1 = Arc::new(Xi1Sketch::new(q, rows_len, row_sketch)?);
        let psi = PsiSketch::new(q, n, b, xi1)?;
        let lb_log2 = bounds::log2_biguint(&bounds::lower_bound(q, n, b)?);
        let optimal_upper = lb_log2
            .is_finite()
            .then(|| (n as f64) * (q as f64).log2() - lb_log2);
        let range = bounds::redundancy_range(q, n, b);
        rows.push(ReportRow {
            n,
            regular_words,
            best_class_size: best,
            c1_redundancy_bits: (n as f64) * (q as f64).log2() - (best as f64).log2(),
            c1_syndrome_bits: params.syndrome_bits(),
            psi_baseline_bits: (psi.label_space() as f64).log2(),
            optimal_redundancy_upper_bits: optimal_upper,
            corollary_lower_bits: range.lower_bits,
            corollary_upper_bits: range.upper_bits,
        });
    }
    match out {
        Some(path) => {
            let mut writer = csv::Writer::from_path(path)?;
            for row in &rows {
                writer.serialize(row)?;
            }
            writer.flush()?;
        }
        None => {
            let mut writer = csv::Writer::from_writer(std::io::stdout());
            for row in &rows {
                writer.serialize(row)?;
            }
            writer.flush()?;
        }
    }
    Ok(())
}
