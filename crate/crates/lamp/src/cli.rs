//! Subcommands of the `lamp` binary.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use lamp_core::corpus::{self, Preprocessing, SequenceCorpus, DEFAULT_MIN_COUNT, LASTFM_MIN_COUNT};
use lamp_core::dependence::corpus_dependency_profile;
use lamp_core::estimators::{
    self, detect_plateau, fit_lamp_on_corpus, plugin_entropy_rate, EntropyMethod, ModelKind,
    DEFAULT_LAMP_MAX_EXPONENT, DEFAULT_MARKOV_MAX_EXPONENT, DEFAULT_PLATEAU_REL_TOL,
    DEFAULT_PLATEAU_WINDOW,
};
use lamp_core::fitting::{self, EmInit, EmOptions, DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE};
use lamp_core::graph::Conditioning;
use lamp_core::markov::{self, InitialState};
use lamp_core::rng::derive_seed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::{self, CorpusFormat, ModelDoc};
use crate::report::{
    EntropyArtifact, EntropyDoc, EntropySuiteArtifact, FitArtifact, ModelArtifact, NoExtra,
    PreprocessArtifact, PreprocessingDoc, RunConfig, Sidecar, StageDoc, SweepSummary,
};

/// Linear additive Markov processes: simulation, fitting, entropy
/// estimation and dependency profiles. Log verbosity is read from LAMP_LOG.
#[derive(Debug, Parser)]
#[command(name = "lamp", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate sequences from a Markov chain or LAMP to a Lines file.
    Simulate(SimulateArgs),
    /// Fit a LAMP by EM and write the model and the fit report.
    Fit(FitArgs),
    /// Entropy estimate of a corpus.
    Entropy(EntropyArgs),
    /// Induced-irreducibility entropy across p = 2^-i.
    Sweep(SweepArgs),
    /// Cramér's V between symbols at increasing lags.
    Profile(ProfileArgs),
    /// Dedupe, replace rare tokens and dedupe again.
    Preprocess(PreprocessArgs),
    /// Entropy rate of a model file.
    Rate(RateArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::Fit(_) => "fit",
            Command::Entropy(_) => "entropy",
            Command::Sweep(_) => "sweep",
            Command::Profile(_) => "profile",
            Command::Preprocess(_) => "preprocess",
            Command::Rate(_) => "rate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputFormat {
    Lines,
    Tsv,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InputArgs {
    /// Corpus file.
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = InputFormat::Lines)]
    pub format: InputFormat,
    /// 0-based column holding the sequence key (tsv).
    #[arg(long, default_value_t = 0)]
    pub group_col: usize,
    /// 0-based column holding the token (tsv).
    #[arg(long, default_value_t = 1)]
    pub item_col: usize,
    /// Skip the first row (tsv).
    #[arg(long)]
    pub tsv_header: bool,
}

impl InputArgs {
    fn load(&self) -> Result<SequenceCorpus> {
        if !self.input.is_file() {
            return Err(Error::Config(format!(
                "input file {} does not exist",
                self.input.display()
            )));
        }
        let format = match self.format {
            InputFormat::Lines => CorpusFormat::Lines,
            InputFormat::Tsv => CorpusFormat::ColumnTsv {
                group_col: self.group_col,
                item_col: self.item_col,
                header: self.tsv_header,
            },
        };
        io::read_corpus(&self.input, format)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CleaningArgs {
    /// Replace tokens seen fewer than this many times [default: 10].
    #[arg(long, conflicts_with = "lastfm")]
    pub min_count: Option<usize>,
    /// Use the Last.fm threshold of 50.
    #[arg(long)]
    pub lastfm: bool,
    #[arg(long, default_value = corpus::DEFAULT_RARE_TOKEN)]
    pub rare_token: String,
}

impl CleaningArgs {
    fn params(&self) -> Result<Preprocessing> {
        let min_count = if self.lastfm {
            LASTFM_MIN_COUNT
        } else {
            self.min_count.unwrap_or(DEFAULT_MIN_COUNT)
        };
        if min_count == 0 {
            return Err(Error::Config("--min-count must be at least 1".into()));
        }
        Ok(Preprocessing {
            min_count,
            rare_token: self.rare_token.clone(),
        })
    }

    fn apply(&self, c: &SequenceCorpus) -> Result<(SequenceCorpus, PreprocessingDoc)> {
        let params = self.params()?;
        let (cleaned, stages) = corpus::preprocess(c, &params)?;
        Ok((
            cleaned,
            PreprocessingDoc {
                min_count: params.min_count,
                rare_token: params.rare_token,
                stages: stages.iter().map(StageDoc::from).collect(),
            },
        ))
    }
}

/// Input corpus with optional cleaning.
#[derive(Debug, Clone, Args, Serialize)]
pub struct CorpusArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
    /// Run the cleaning pipeline before the analysis.
    #[arg(long)]
    pub preprocess: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub cleaning: CleaningArgs,
}

impl CorpusArgs {
    fn load(&self) -> Result<(SequenceCorpus, Option<PreprocessingDoc>)> {
        let raw = self.input.load()?;
        if !self.preprocess {
            return Ok((raw, None));
        }
        let (c, doc) = self.cleaning.apply(&raw)?;
        Ok((c, Some(doc)))
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EmArgs {
    /// LAMP order k.
    #[arg(short = 'k', long, default_value_t = 3)]
    pub order: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS)]
    pub max_iter: usize,
    /// Stop when the log-likelihood gain falls below this (bits).
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tol: f64,
    /// Start EM from random parameters drawn from this seed instead of the
    /// smoothed first-order fit.
    #[arg(long)]
    pub init_seed: Option<u64>,
}

impl EmArgs {
    fn options(&self, c: &SequenceCorpus) -> Result<EmOptions> {
        if self.order == 0 {
            return Err(Error::Config("-k must be at least 1".into()));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::Config("--tol must be non-negative".into()));
        }
        let init = match self.init_seed {
            Some(seed) => EmInit::random(c.vocabulary(), self.order, seed)?,
            None => EmInit::Default,
        };
        Ok(EmOptions {
            order: self.order,
            init,
            max_iterations: self.max_iter,
            tolerance: self.tol,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditioningChoice {
    LargestCc,
    Induced,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ConditioningArgs {
    #[arg(long, value_enum, default_value_t = ConditioningChoice::Induced)]
    pub conditioning: ConditioningChoice,
    /// Artificial-state probability for induced irreducibility.
    #[arg(long, default_value_t = estimators::DEFAULT_P_ARTIFICIAL, conflicts_with = "p_exponent")]
    pub p_artificial: f64,
    /// Shorthand for --p-artificial 2^-i.
    #[arg(long)]
    pub p_exponent: Option<u32>,
}

impl ConditioningArgs {
    fn conditioning(&self) -> Result<Conditioning> {
        let p = match self.p_exponent {
            Some(i) => estimators::p_for_exponent(i),
            None => self.p_artificial,
        };
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Config("p_artificial must lie in (0, 1)".into()));
        }
        Ok(match self.conditioning {
            ConditioningChoice::LargestCc => Conditioning::LargestCc,
            ConditioningChoice::Induced => Conditioning::Induced(p),
        })
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    /// Model JSON (optional "kernel") or dense matrix CSV.
    #[arg(long)]
    pub model: PathBuf,
    /// Length of each sequence.
    #[arg(long)]
    pub steps: usize,
    #[arg(long, default_value_t = 1)]
    pub sequences: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// "stationary" or the label of the first state.
    #[arg(long, default_value = "stationary")]
    pub init: String,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FitArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub em: EmArgs,
    /// Model JSON.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Fit report JSON [default: <output>.fit.json].
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodChoice {
    SequenceLevel,
    PathLevel,
    Stationary,
    Markov,
    Lamp,
    All,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EntropyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long, value_enum)]
    pub method: MethodChoice,
    #[command(flatten)]
    #[serde(flatten)]
    pub conditioning: ConditioningArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub em: EmArgs,
    /// Report JSON; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKindChoice {
    Markov,
    Lamp,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long, value_enum, default_value_t = ModelKindChoice::Markov)]
    pub model_kind: ModelKindChoice,
    #[command(flatten)]
    #[serde(flatten)]
    pub em: EmArgs,
    #[arg(long, default_value_t = 1)]
    pub i_min: u32,
    /// Largest exponent [default: 25 for markov, 50 for lamp].
    #[arg(long)]
    pub i_max: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_PLATEAU_REL_TOL)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = DEFAULT_PLATEAU_WINDOW)]
    pub window: usize,
    /// Sweep CSV.
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ProfileArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long, default_value_t = 20)]
    pub max_lag: usize,
    #[arg(long)]
    pub include_lag0: bool,
    /// Profile CSV.
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PreprocessArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub cleaning: CleaningArgs,
    /// Cleaned Lines file.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Stage report JSON [default: <output>.report.json].
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RateArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Report JSON; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Runs one subcommand. Whatever is printed to stdout is returned.
pub fn run(command: &Command) -> Result<String> {
    match command {
        Command::Simulate(a) => simulate(a),
        Command::Fit(a) => fit(a),
        Command::Entropy(a) => entropy(a),
        Command::Sweep(a) => sweep(a),
        Command::Profile(a) => profile(a),
        Command::Preprocess(a) => preprocess(a),
        Command::Rate(a) => rate(a),
    }
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn write_sidecar<T: Serialize>(
    output: &Path,
    extra: T,
    preprocessing: Option<PreprocessingDoc>,
    run_config: RunConfig,
) -> Result<()> {
    let doc = Sidecar {
        extra,
        preprocessing,
        run_config,
    };
    io::write_file(&with_suffix(output, ".run.json"), to_json(&doc)?)
}

fn read_model(path: &Path) -> Result<ModelDoc> {
    if !path.is_file() {
        return Err(Error::Config(format!("model file {} does not exist", path.display())));
    }
    io::read_model(path)
}

fn simulate(a: &SimulateArgs) -> Result<String> {
    let run_config = RunConfig::new("simulate", a)?;
    let doc = read_model(&a.model)?;
    let model = doc.model()?;
    let init = if a.init == "stationary" {
        InitialState::Stationary
    } else {
        let i = model.matrix().states().index_of(&a.init).ok_or_else(|| {
            Error::Config(format!("--init {:?} is neither \"stationary\" nor a state", a.init))
        })?;
        InitialState::State(i)
    };
    let mut sequences = Vec::with_capacity(a.sequences);
    for s in 0..a.sequences {
        let seed = derive_seed(a.seed, s as u64);
        let seq = match doc.kernel {
            Some(_) => model.simulate(init, a.steps, seed)?,
            None => markov::simulate_markov(model.matrix(), init, a.steps, seed)?,
        };
        sequences.push(seq);
    }
    let states = model.matrix().states();
    let mut out = String::new();
    for seq in &sequences {
        let tokens = states.decode(seq)?;
        out.push_str(&tokens.join(" "));
        out.push('\n');
    }
    io::write_file(&a.output, out)?;
    write_sidecar(&a.output, NoExtra {}, None, run_config)?;
    Ok(String::new())
}

fn fit(a: &FitArgs) -> Result<String> {
    let run_config = RunConfig::new("fit", a)?;
    let (c, preprocessing) = a.corpus.load()?;
    let report = fitting::fit_lamp_em(&c, &a.em.options(&c)?)?;
    let model = ModelArtifact {
        model: ModelDoc::from_model(&report.model),
        run_config: run_config.clone(),
    };
    io::write_file(&a.output, to_json(&model)?)?;
    let report_path = a
        .report
        .clone()
        .unwrap_or_else(|| with_suffix(&a.output, ".fit.json"));
    let artifact = FitArtifact::new(&report, preprocessing, run_config);
    io::write_file(&report_path, to_json(&artifact)?)?;
    Ok(String::new())
}

fn entropy(a: &EntropyArgs) -> Result<String> {
    let run_config = RunConfig::new("entropy", a)?;
    let conditioning = a.conditioning.conditioning()?;
    let (c, preprocessing) = a.corpus.load()?;
    let lamp_options = || a.em.options(&c);
    let text = match a.method {
        MethodChoice::All => {
            let mut reports = vec![
                EntropyDoc::from(&estimators::sequence_level_estimate(&c)?),
                EntropyDoc::from(&estimators::path_level_estimate(&c)?),
                EntropyDoc::from(&estimators::stationary_corpus_estimate(&c, conditioning)?),
            ];
            let p_induced = match conditioning {
                Conditioning::Induced(p) => p,
                Conditioning::LargestCc => estimators::DEFAULT_P_ARTIFICIAL,
            };
            let both = [Conditioning::LargestCc, Conditioning::Induced(p_induced)];
            let markov = fitting::fit_first_order(&c, 0.0)?.matrix;
            for (cond, method) in both.iter().zip([EntropyMethod::MarkovLargestCc, EntropyMethod::MarkovInduced]) {
                let (h, r) = plugin_entropy_rate(&markov, *cond)?;
                reports.push(EntropyDoc::new(method, h, Some(&r), None, r.n_after));
            }
            let fit = fit_lamp_on_corpus(&c, &lamp_options()?)?;
            let kernel = fit.model.kernel().weights().to_vec();
            for (cond, method) in both.iter().zip([EntropyMethod::LampLargestCc, EntropyMethod::LampInduced]) {
                let (h, r) = plugin_entropy_rate(fit.model.matrix(), *cond)?;
                reports.push(EntropyDoc::new(method, h, Some(&r), Some(kernel.clone()), r.n_after));
            }
            to_json(&EntropySuiteArtifact {
                reports,
                preprocessing,
                run_config,
            })?
        }
        method => {
            let report = match method {
                MethodChoice::SequenceLevel => estimators::sequence_level_estimate(&c)?,
                MethodChoice::PathLevel => estimators::path_level_estimate(&c)?,
                MethodChoice::Stationary => estimators::stationary_corpus_estimate(&c, conditioning)?,
                MethodChoice::Markov => estimators::markov_plugin_estimate(&c, conditioning)?,
                MethodChoice::Lamp => {
                    estimators::lamp_plugin_estimate_with(&c, &lamp_options()?, conditioning)?
                }
                MethodChoice::All => unreachable!(),
            };
            to_json(&EntropyArtifact {
                report: EntropyDoc::from(&report),
                preprocessing,
                run_config,
            })?
        }
    };
    emit(a.output.as_deref(), text)
}

fn emit(output: Option<&Path>, text: String) -> Result<String> {
    match output {
        Some(path) => {
            io::write_file(path, text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn sweep(a: &SweepArgs) -> Result<String> {
    let run_config = RunConfig::new("sweep", a)?;
    let i_max = a.i_max.unwrap_or(match a.model_kind {
        ModelKindChoice::Markov => DEFAULT_MARKOV_MAX_EXPONENT,
        ModelKindChoice::Lamp => DEFAULT_LAMP_MAX_EXPONENT,
    });
    if a.i_min == 0 || a.i_min > i_max {
        return Err(Error::Config("need 1 <= --i-min <= --i-max".into()));
    }
    if i_max > 1000 {
        return Err(Error::Config("--i-max must be at most 1000".into()));
    }
    if !(a.rel_tol > 0.0) || a.window == 0 {
        return Err(Error::Config("--rel-tol must be positive and --window at least 1".into()));
    }
    let (c, preprocessing) = a.corpus.load()?;
    let kind = match a.model_kind {
        ModelKindChoice::Markov => ModelKind::Markov,
        ModelKindChoice::Lamp => ModelKind::Lamp(a.em.options(&c)?),
    };
    let exponents: Vec<u32> = (a.i_min..=i_max).collect();
    let result = estimators::sweep_p_artificial(&c, &kind, &exponents)?;
    let recommended = detect_plateau(&result, a.rel_tol, a.window).exponent();
    let summary = SweepSummary {
        recommended_exponent: recommended,
        rel_tol: a.rel_tol,
        window: a.window,
    };
    io::write_file(&a.output, crate::report::sweep_csv(&result)?)?;
    let stdout = to_json(&serde_json::json!({ "recommended_exponent": recommended }))?;
    write_sidecar(&a.output, summary, preprocessing, run_config)?;
    Ok(stdout)
}

fn profile(a: &ProfileArgs) -> Result<String> {
    let run_config = RunConfig::new("profile", a)?;
    if a.max_lag == 0 {
        return Err(Error::Config("--max-lag must be at least 1".into()));
    }
    let (c, preprocessing) = a.corpus.load()?;
    let points = corpus_dependency_profile(&c, a.max_lag, a.include_lag0)?;
    io::write_file(&a.output, crate::report::profile_csv(&points)?)?;
    write_sidecar(&a.output, NoExtra {}, preprocessing, run_config)?;
    Ok(String::new())
}

fn preprocess(a: &PreprocessArgs) -> Result<String> {
    let run_config = RunConfig::new("preprocess", a)?;
    let raw = a.input.load()?;
    let params = a.cleaning.params()?;
    let (cleaned, stages) = corpus::preprocess(&raw, &params)?;
    let replaced = raw
        .vocabulary()
        .labels()
        .iter()
        .filter(|l| !cleaned.vocabulary().contains(l))
        .count();
    io::write_file(&a.output, io::format_lines(&cleaned))?;
    let report_path = a
        .report
        .clone()
        .unwrap_or_else(|| with_suffix(&a.output, ".report.json"));
    let artifact = PreprocessArtifact {
        stages: stages.iter().map(StageDoc::from).collect(),
        replaced,
        run_config,
    };
    io::write_file(&report_path, to_json(&artifact)?)?;
    Ok(String::new())
}

#[derive(Serialize)]
struct RateDoc {
    bits_per_symbol: f64,
    labels: Vec<String>,
    stationary: Vec<f64>,
    run_config: RunConfig,
}

fn rate(a: &RateArgs) -> Result<String> {
    let run_config = RunConfig::new("rate", a)?;
    let model = read_model(&a.model)?.model()?;
    let pi = markov::stationary_distribution(model.matrix())?;
    let doc = RateDoc {
        bits_per_symbol: markov::entropy_rate(model.matrix(), &pi)?,
        labels: model.matrix().states().labels().to_vec(),
        stationary: pi.probs().to_vec(),
        run_config,
    };
    emit(a.output.as_deref(), to_json(&doc)?)
}
