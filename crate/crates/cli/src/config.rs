//! Run configuration: what to rank, with which methods, and where the
//! artifacts go.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use swissrank_core::em::EmConfig;
use swissrank_core::RankMetric;

/// A ranking producer selectable on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    /// Log least-squares weights, one ranking per scale.
    Llsm,
    /// Eigenvalue-completion weights, one ranking per completion scale.
    Em,
    /// Official lexicographic ranking.
    Official,
    /// Sonneborn-Berger-first tie-break order.
    SonnebornBerger,
    /// Normalized Buchholz-first tie-break order.
    Buchholz,
    /// Sonneborn-Berger plus factored Buchholz.
    Mix,
    /// Pre-tournament seeding.
    Start,
}

impl MethodChoice {
    pub const ALL: [MethodChoice; 7] = [
        MethodChoice::Llsm,
        MethodChoice::Em,
        MethodChoice::Official,
        MethodChoice::SonnebornBerger,
        MethodChoice::Buchholz,
        MethodChoice::Mix,
        MethodChoice::Start,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MethodChoice::Llsm => "llsm",
            MethodChoice::Em => "em",
            MethodChoice::Official => "official",
            MethodChoice::SonnebornBerger => "sonneborn-berger",
            MethodChoice::Buchholz => "buchholz",
            MethodChoice::Mix => "mix",
            MethodChoice::Start => "start",
        }
    }
}

impl fmt::Display for MethodChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MethodChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let lower = s.trim().to_ascii_lowercase();
        MethodChoice::ALL
            .into_iter()
            .find(|m| m.name() == lower)
            .ok_or_else(|| format!("unknown method {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricChoice {
    Spearman,
    Tau,
}

impl MetricChoice {
    pub fn as_metric(self) -> RankMetric {
        match self {
            MetricChoice::Spearman => RankMetric::Spearman,
            MetricChoice::Tau => RankMetric::Tau,
        }
    }
}

impl fmt::Display for MetricChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricChoice::Spearman => f.write_str("spearman"),
            MetricChoice::Tau => f.write_str("tau"),
        }
    }
}

impl FromStr for MetricChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "spearman" => Ok(MetricChoice::Spearman),
            "tau" => Ok(MetricChoice::Tau),
            other => Err(format!("unknown metric {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormatChoice {
    Csv,
    Json,
}

impl fmt::Display for FormatChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatChoice::Csv => f.write_str("csv"),
            FormatChoice::Json => f.write_str("json"),
        }
    }
}

impl FromStr for FormatChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(FormatChoice::Csv),
            "json" => Ok(FormatChoice::Json),
            other => Err(format!("unknown format {other:?}")),
        }
    }
}

/// Completion solver settings exposed on the command line.
#[derive(Debug, Clone)]
pub struct EmSettings {
    pub sweep_cap: usize,
    pub eigen_tol: f64,
    pub coord_tol: f64,
    pub sweep_tol: f64,
}

impl Default for EmSettings {
    fn default() -> Self {
        let base = EmConfig::default();
        EmSettings {
            sweep_cap: base.sweep_cap,
            eigen_tol: base.eigen_tol,
            coord_tol: base.coord_tol,
            sweep_tol: base.sweep_tol,
        }
    }
}

impl EmSettings {
    pub fn to_config(&self) -> EmConfig {
        EmConfig {
            eigen_tol: self.eigen_tol,
            coord_tol: self.coord_tol,
            sweep_tol: self.sweep_tol,
            sweep_cap: self.sweep_cap,
            ..EmConfig::default()
        }
    }
}

/// Everything one `rank` invocation needs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: PathBuf,
    pub roster: Option<PathBuf>,
    /// Scale names for the least-squares rankings; built-in letters or
    /// names of loaded custom scales.
    pub scales: Vec<String>,
    pub methods: Vec<MethodChoice>,
    /// Scale names for the completion rankings.
    pub em_scales: Vec<String>,
    pub metrics: Vec<MetricChoice>,
    pub mds: bool,
    pub mds_dims: usize,
    pub out_dir: PathBuf,
    pub formats: Vec<FormatChoice>,
    pub custom_scales: Vec<PathBuf>,
    pub dump_pcm: bool,
    pub dump_completion: bool,
    pub em: EmSettings,
}

impl RunConfig {
    /// Minimal configuration with the documented defaults.
    pub fn new(input: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            input: input.into(),
            roster: None,
            scales: ["A", "B", "C", "D"].map(String::from).to_vec(),
            methods: vec![MethodChoice::Llsm, MethodChoice::Official],
            em_scales: vec!["C".into()],
            metrics: vec![MetricChoice::Spearman, MetricChoice::Tau],
            mds: false,
            mds_dims: 2,
            out_dir: out_dir.into(),
            formats: vec![FormatChoice::Csv, FormatChoice::Json],
            custom_scales: Vec::new(),
            dump_pcm: false,
            dump_completion: false,
            em: EmSettings::default(),
        }
    }

    pub fn wants_format(&self, f: FormatChoice) -> bool {
        self.formats.contains(&f)
    }
}
