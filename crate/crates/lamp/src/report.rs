//! Serializable forms of the reports written by the CLI.

use lamp_core::corpus::StageReport;
use lamp_core::dependence::ProfilePoint;
use lamp_core::estimators::{EntropyMethod, SweepResult};
use lamp_core::fitting::FitReport;
use lamp_core::graph::{ConditioningMethod, ConditioningReport};
use serde::Serialize;

use crate::error::Result;
use crate::io::{into_string, ModelDoc};

/// Provenance block embedded in every artifact: the subcommand and its
/// parsed arguments.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub args: serde_json::Value,
}

impl RunConfig {
    pub fn new<A: Serialize>(subcommand: &'static str, args: &A) -> Result<Self> {
        Ok(Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            args: serde_json::to_value(args)?,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditioningDoc {
    pub method: &'static str,
    pub excluded: usize,
    pub p_artificial: Option<f64>,
    pub n_before: usize,
    pub n_after: usize,
}

impl From<&ConditioningReport> for ConditioningDoc {
    fn from(r: &ConditioningReport) -> Self {
        Self {
            method: match r.method {
                ConditioningMethod::LargestScc => "largest_scc",
                ConditioningMethod::Induced => "induced",
            },
            excluded: r.excluded,
            p_artificial: r.p_artificial,
            n_before: r.n_before,
            n_after: r.n_after,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StageDoc {
    pub stage: &'static str,
    pub n_sequences: usize,
    #[serde(rename = "N")]
    pub total: usize,
    pub vocab: usize,
}

impl From<&StageReport> for StageDoc {
    fn from(r: &StageReport) -> Self {
        Self {
            stage: r.stage,
            n_sequences: r.n_sequences,
            total: r.total,
            vocab: r.vocab,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PreprocessingDoc {
    pub min_count: usize,
    pub rare_token: String,
    pub stages: Vec<StageDoc>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropyDoc {
    pub method: &'static str,
    pub bits_per_symbol: f64,
    pub conditioning: Option<ConditioningDoc>,
    pub kernel: Option<Vec<f64>>,
    pub state_count: usize,
}

impl EntropyDoc {
    pub fn new(
        method: EntropyMethod,
        bits_per_symbol: f64,
        conditioning: Option<&ConditioningReport>,
        kernel: Option<Vec<f64>>,
        state_count: usize,
    ) -> Self {
        Self {
            method: method.name(),
            bits_per_symbol,
            conditioning: conditioning.map(ConditioningDoc::from),
            kernel,
            state_count,
        }
    }
}

impl From<&lamp_core::estimators::EntropyReport> for EntropyDoc {
    fn from(r: &lamp_core::estimators::EntropyReport) -> Self {
        Self::new(
            r.method,
            r.bits_per_symbol,
            r.conditioning.as_ref(),
            r.kernel.clone(),
            r.state_count,
        )
    }
}

/// A single report, fields at the top level.
#[derive(Debug, Clone, Serialize)]
pub struct EntropyArtifact {
    #[serde(flatten)]
    pub report: EntropyDoc,
    pub preprocessing: Option<PreprocessingDoc>,
    pub run_config: RunConfig,
}

/// Every method at once.
#[derive(Debug, Clone, Serialize)]
pub struct EntropySuiteArtifact {
    pub reports: Vec<EntropyDoc>,
    pub preprocessing: Option<PreprocessingDoc>,
    pub run_config: RunConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelArtifact {
    #[serde(flatten)]
    pub model: ModelDoc,
    pub run_config: RunConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitArtifact {
    pub model: ModelDoc,
    pub log_likelihood_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub preprocessing: Option<PreprocessingDoc>,
    pub run_config: RunConfig,
}

impl FitArtifact {
    pub fn new(r: &FitReport, preprocessing: Option<PreprocessingDoc>, run_config: RunConfig) -> Self {
        Self {
            model: ModelDoc::from_model(&r.model),
            log_likelihood_trace: r.log_likelihood_trace.clone(),
            iterations: r.iterations,
            converged: r.converged,
            preprocessing,
            run_config,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PreprocessArtifact {
    pub stages: Vec<StageDoc>,
    pub replaced: usize,
    pub run_config: RunConfig,
}

/// Side file next to a non-JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct Sidecar<T: Serialize> {
    #[serde(flatten)]
    pub extra: T,
    pub preprocessing: Option<PreprocessingDoc>,
    pub run_config: RunConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub recommended_exponent: Option<u32>,
    pub rel_tol: f64,
    pub window: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct NoExtra {}

/// Columns `i, p, raw_bits, normalized`.
pub fn sweep_csv(s: &SweepResult) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["i", "p", "raw_bits", "normalized"])?;
    for (k, (&i, p)) in s.exponents.iter().zip(s.p_values()).enumerate() {
        w.write_record([
            i.to_string(),
            p.to_string(),
            s.raw[k].to_string(),
            s.normalized[k].to_string(),
        ])?;
    }
    into_string(w)
}

/// Columns `lag, cramers_v, degenerate_flag`.
pub fn profile_csv(points: &[ProfilePoint]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["lag", "cramers_v", "degenerate_flag"])?;
    for pt in points {
        w.write_record([
            pt.lag.to_string(),
            pt.cramers_v.to_string(),
            (pt.degenerate as u8).to_string(),
        ])?;
    }
    into_string(w)
}
