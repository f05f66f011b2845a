//! File-based stages: analyze, estimate, sample and closed form.
//!
//! Each stage reads its inputs from disk and writes its outputs into a
//! directory, so stages compose through manifests and parameter files.
//! Outputs carry no timestamps; fixed seeds give byte-identical files.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::estimator::{default_initial_parameters, estimate, ChainTrace, EEConfig};
use crate::free_energy::{closed_form_parameters, TypeCensus};
use crate::graph::{BusType, LabeledGraph};
use crate::io::report::{write_closed_form_table, write_report, write_summary, write_trace};
use crate::io::{read_case, to_labeled_graph, write_edge_list, GraphManifest, ParameterFile, Provenance};
use crate::model::{ModelKind, ParameterVector};
use crate::sampler::{sample_chains, Ensemble, SampleOrigin, SamplerConfig};
use crate::stats::{observables, GridReport, ReportSummary};

/// A reference grid with its original bus numbering.
#[derive(Clone, Debug)]
pub struct Reference {
    pub name: String,
    pub graph: LabeledGraph,
    pub bus_ids: Vec<u64>,
}

/// Loads a MATPOWER case (`.m`) or a graph manifest (any other extension).
pub fn load_reference(path: &Path, include_out_of_service: bool) -> Result<Reference> {
    let name = path.file_stem().map_or_else(|| "grid".to_string(), |s| s.to_string_lossy().into_owned());
    if path.extension().is_some_and(|e| e == "m") {
        let cg = to_labeled_graph(&read_case(path)?, include_out_of_service)?;
        Ok(Reference { name, graph: cg.graph, bus_ids: cg.bus_ids })
    } else {
        let m = GraphManifest::read(path)?;
        let graph = m.graph()?;
        Ok(Reference { name, graph, bus_ids: m.bus_ids })
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

#[derive(Clone, Debug)]
pub struct AnalyzeOutput {
    pub report: GridReport,
    pub report_path: PathBuf,
    pub manifest_path: PathBuf,
}

/// Writes `<name>_report.csv` and `<name>_manifest.json`.
pub fn cmd_analyze(input: &Path, out_dir: &Path, include_out_of_service: bool) -> Result<AnalyzeOutput> {
    let reference = load_reference(input, include_out_of_service)?;
    fs::create_dir_all(out_dir)?;
    let report = GridReport::from_graph(&reference.graph);
    let report_path = out_dir.join(format!("{}_report.csv", reference.name));
    write_report(create(&report_path)?, &[(reference.name.clone(), report)])?;
    let manifest_path = out_dir.join(format!("{}_manifest.json", reference.name));
    let provenance = Provenance { source: Some(input.display().to_string()), ..Provenance::default() };
    GraphManifest::from_graph(&reference.graph, Some(&reference.bus_ids), provenance)?.write(&manifest_path)?;
    Ok(AnalyzeOutput { report, report_path, manifest_path })
}

#[derive(Clone, Debug)]
pub struct EstimateOutput {
    pub trace: ChainTrace,
    pub initial: ParameterVector,
    pub trace_path: PathBuf,
    pub parameters_path: PathBuf,
}

/// Writes `<name>_trace.csv` and `<name>_beta.json`. The chain starts from
/// the closed-form edge parameters with zero triangle coefficients.
pub fn cmd_estimate(input: &Path, out_dir: &Path, cfg: &EEConfig, include_out_of_service: bool) -> Result<EstimateOutput> {
    cfg.validate()?;
    let reference = load_reference(input, include_out_of_service)?;
    let initial = default_initial_parameters(&reference.graph);
    let trace = estimate(&reference.graph, cfg, &initial)?;
    fs::create_dir_all(out_dir)?;
    let trace_path = out_dir.join(format!("{}_trace.csv", reference.name));
    write_trace(create(&trace_path)?, &trace.records)?;
    let parameters_path = out_dir.join(format!("{}_beta.json", reference.name));
    ParameterFile::new(cfg.model, &trace.estimate).write(&parameters_path)?;
    Ok(EstimateOutput { trace, initial, trace_path, parameters_path })
}

/// Index of an ensemble directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleManifest {
    pub n: usize,
    pub bus_ids: Vec<u64>,
    pub types: Vec<BusType>,
    pub samples: Vec<String>,
    pub origins: Vec<SampleOrigin>,
    pub provenance: Provenance,
}

#[derive(Clone, Debug)]
pub struct SampleOutput {
    pub ensemble: Ensemble,
    pub reference: GridReport,
    pub summary: ReportSummary,
    pub out_dir: PathBuf,
}

/// Writes one edge list per sample under `samples/`, `ensemble.json`,
/// per-sample rows in `samples.csv` and reference/avg/std rows in
/// `summary.csv`.
pub fn cmd_sample(
    reference_path: &Path,
    parameters_path: &Path,
    out_dir: &Path,
    cfg: &SamplerConfig,
    chains: usize,
    include_out_of_service: bool,
) -> Result<SampleOutput> {
    cfg.validate()?;
    let reference = load_reference(reference_path, include_out_of_service)?;
    let beta = ParameterFile::read(parameters_path)?.parameters();
    let ensemble = sample_chains(&reference.graph, &beta, cfg, chains)?;
    let summary = ensemble.summary()?;
    let reference_report = GridReport::from_graph(&reference.graph);

    let sample_dir = out_dir.join("samples");
    fs::create_dir_all(&sample_dir)?;
    let mut names = Vec::with_capacity(ensemble.len());
    let mut rows = Vec::with_capacity(ensemble.len());
    for (k, (g, r)) in ensemble.samples.iter().zip(&ensemble.reports).enumerate() {
        let name = format!("sample_{k:05}");
        fs::write(sample_dir.join(format!("{name}.txt")), write_edge_list(g))?;
        names.push(format!("samples/{name}.txt"));
        rows.push((name, *r));
    }
    let index = EnsembleManifest {
        n: reference.graph.n(),
        bus_ids: reference.bus_ids.clone(),
        types: reference.graph.types().to_vec(),
        samples: names,
        origins: ensemble.origins.clone(),
        provenance: Provenance {
            source: Some(reference_path.display().to_string()),
            seed: Some(cfg.seed),
            beta: Some(beta),
        },
    };
    let mut json = serde_json::to_string_pretty(&index)?;
    json.push('\n');
    fs::write(out_dir.join("ensemble.json"), json)?;
    write_report(create(&out_dir.join("samples.csv"))?, &rows)?;
    write_summary(create(&out_dir.join("summary.csv"))?, Some(&reference_report), &summary)?;
    Ok(SampleOutput { ensemble, reference: reference_report, summary, out_dir: out_dir.to_path_buf() })
}

#[derive(Clone, Debug)]
pub struct ClosedFormOutput {
    pub targets: [f64; 6],
    pub census: TypeCensus,
    pub beta: [f64; 6],
    pub parameters_path: PathBuf,
    pub table_path: PathBuf,
}

/// Writes `<name>_closed_form.json` (edges-only parameter file) and
/// `<name>_closed_form.csv` (per-block comparison).
pub fn cmd_closed_form(input: &Path, out_dir: &Path, include_out_of_service: bool) -> Result<ClosedFormOutput> {
    let reference = load_reference(input, include_out_of_service)?;
    let census = TypeCensus::of(&reference.graph);
    let targets = observables(&reference.graph).edge_counts();
    let beta = closed_form_parameters(&targets, &census)?;
    fs::create_dir_all(out_dir)?;
    let parameters_path = out_dir.join(format!("{}_closed_form.json", reference.name));
    ParameterFile::new(ModelKind::Edges, &ParameterVector::from_edge_parameters(beta)).write(&parameters_path)?;
    let table_path = out_dir.join(format!("{}_closed_form.csv", reference.name));
    write_closed_form_table(create(&table_path)?, &targets, &census, &beta)?;
    Ok(ClosedFormOutput { targets, census, beta, parameters_path, table_path })
}
