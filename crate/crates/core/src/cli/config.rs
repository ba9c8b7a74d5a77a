use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::presets::{Preset, Study};
use crate::balance::{DEFAULT_SIZE_EXPONENT, TargetMode};
use crate::experiment::{
    grid_range, SeedProtocol, DEFAULT_GAMMA, DEFAULT_POLICY_BUFFER, DEFAULT_POLICY_FRACTION, DEFAULT_THRESHOLD,
};
use crate::netgen::DEFAULT_SWEEPS;

/// Directory used for output files when `--out` is not given.
pub const OUT_DIR_ENV: &str = "CONTAGION_OUT_DIR";

pub const DEFAULT_NODES: usize = 10_000;
pub const DEFAULT_TRIALS: usize = 1_000;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error(transparent)]
    Usage(#[from] clap::Error),

    #[error("unknown preset `{0}` (expected one of fig1 … fig9)")]
    UnknownPreset(String),

    #[error("cannot read config file {path}: {message}")]
    MalformedFile { path: PathBuf, message: String },

    #[error("--{field}: {message}")]
    OutOfRange { field: &'static str, message: String },
}

impl ConfigError {
    /// Process exit status for this diagnostic.
    pub fn exit_code(&self) -> i32 {
        match self {
            ConfigError::Usage(e) if !e.use_stderr() => 0,
            ConfigError::Usage(_) => 2,
            ConfigError::UnknownPreset(_) => 3,
            ConfigError::MalformedFile { .. } => 4,
            ConfigError::OutOfRange { .. } => 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    Er,
    Sf,
    ErRewired,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SheetKind {
    Uniform,
    PowerLaw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolKind {
    Random,
    MostConnected,
    Biggest,
}

impl From<ProtocolKind> for SeedProtocol {
    fn from(p: ProtocolKind) -> Self {
        match p {
            ProtocolKind::Random => SeedProtocol::Random,
            ProtocolKind::MostConnected => SeedProtocol::MostConnected,
            ProtocolKind::Biggest => SeedProtocol::Biggest,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyKind {
    None,
    TopDegree,
    TopAssets,
    Random,
}

impl PolicyKind {
    pub fn target_mode(&self) -> Option<TargetMode> {
        match self {
            PolicyKind::None => None,
            PolicyKind::TopDegree => Some(TargetMode::TopDegree),
            PolicyKind::TopAssets => Some(TargetMode::TopAssets),
            PolicyKind::Random => Some(TargetMode::Random),
        }
    }
}

/// Every knob of a run. The same struct backs command-line flags and the
/// TOML config file; unset fields fall through to the next layer.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Parser)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
#[command(name = "contagion", version, about = "Default-cascade Monte Carlo on interbank networks")]
pub struct Settings {
    /// Figure preset: fig1 … fig9.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,

    /// TOML file with the same keys as the long flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Number of banks.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,

    /// Trials per grid point.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,

    /// Network family (inferred from --gamma / --coupling-J when absent).
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyKind>,

    /// Balance-sheet scheme (power-law when --alpha is given).
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sheets: Option<SheetKind>,

    /// Degree tail exponent of scale-free networks.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,

    /// Asset-size tail exponent of power-law balance sheets.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,

    /// Rewiring coupling J (negative: disassortative).
    #[arg(long = "coupling-J", allow_negative_numbers = true)]
    #[serde(rename = "coupling-J", skip_serializing_if = "Option::is_none")]
    pub coupling_j: Option<f64>,

    /// Rewiring proposals per edge.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rewire_sweeps: Option<usize>,

    /// Which bank fails first.
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub protocol: Option<ProtocolKind>,

    /// Capital-buffer policy applied before the cascade.
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub policy: Option<PolicyKind>,

    /// Share of banks the policy targets.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub policy_fraction: Option<f64>,

    /// Raised capital-buffer fraction for targeted banks.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub policy_buffer: Option<f64>,

    /// Mean-degree grid as min:max:step.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_grid: Option<String>,

    /// Contagion threshold on the defaulted fraction.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,

    /// Master seed; generated and reported when absent.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,

    /// Worker threads (default: available parallelism).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,

    /// Output file (default: $CONTAGION_OUT_DIR/<preset>.<format>).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,

    /// Output format.
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, [$($field:ident),* $(,)?]) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field.clone(); } )*
    };
}

impl Settings {
    /// Fields of `top` replace fields of `self` where set.
    pub fn overlay(&mut self, top: &Settings) {
        overlay!(
            self,
            top,
            [
                preset,
                nodes,
                trials,
                family,
                sheets,
                gamma,
                alpha,
                coupling_j,
                rewire_sweeps,
                protocol,
                policy,
                policy_fraction,
                policy_buffer,
                z_grid,
                threshold,
                seed,
                threads,
                out,
                format,
            ]
        );
    }

    pub fn from_toml_file(path: &Path) -> Result<Self, ConfigError> {
        let malformed = |message: String| ConfigError::MalformedFile {
            path: path.to_owned(),
            message,
        };
        let text = std::fs::read_to_string(path).map_err(|e| malformed(e.to_string()))?;
        toml::from_str(&text).map_err(|e| malformed(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("settings serialize to TOML")
    }

    fn structural_overrides(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.family.is_some() {
            v.push("family");
        }
        if self.sheets.is_some() {
            v.push("sheets");
        }
        if self.protocol.is_some() {
            v.push("protocol");
        }
        if self.policy.is_some() {
            v.push("policy");
        }
        if self.coupling_j.is_some() {
            v.push("coupling-J");
        }
        v
    }
}

/// Fully resolved run: the settings that produced it (with every scalar knob
/// filled in) and the study they expand to.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub settings: Settings,
    pub preset: Option<Preset>,
    pub study: Study,
    pub master_seed: u64,
    pub out: PathBuf,
    pub format: OutputFormat,
    pub threads: Option<usize>,
    pub warnings: Vec<String>,
}

impl RunConfig {
    /// Writes the resolved settings so that `parse_config(["--config", path])`
    /// reproduces this run.
    pub fn write_toml(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.settings.to_toml())
    }
}

/// Parses command-line arguments (including the program name) into a run.
///
/// Precedence: flags, then `--config` file, then preset, then defaults.
pub fn parse_config<I, T>(args: I) -> Result<RunConfig, ConfigError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let flags = Settings::try_parse_from(args)?;
    let mut merged = match &flags.config {
        Some(path) => Settings::from_toml_file(path)?,
        None => Settings::default(),
    };
    merged.overlay(&flags);
    resolve(merged)
}

/// Resolves layered settings into a run.
pub fn resolve(given: Settings) -> Result<RunConfig, ConfigError> {
    let mut warnings = Vec::new();
    let preset = match &given.preset {
        Some(name) => Some(Preset::from_name(name).ok_or_else(|| ConfigError::UnknownPreset(name.clone()))?),
        None => None,
    };

    let mut s = Settings::default();
    if let Some(p) = preset {
        let (nodes, trials) = p.scale();
        s.nodes = Some(nodes);
        s.trials = Some(trials);
    }
    s.overlay(&given);
    s.config = None;

    let nodes = *s.nodes.get_or_insert(DEFAULT_NODES);
    let trials = *s.trials.get_or_insert(DEFAULT_TRIALS);
    let gamma = *s.gamma.get_or_insert(DEFAULT_GAMMA);
    let alpha = *s.alpha.get_or_insert(DEFAULT_SIZE_EXPONENT);
    let sweeps = *s.rewire_sweeps.get_or_insert(DEFAULT_SWEEPS);
    let fraction = *s.policy_fraction.get_or_insert(DEFAULT_POLICY_FRACTION);
    let buffer = *s.policy_buffer.get_or_insert(DEFAULT_POLICY_BUFFER);
    let threshold = *s.threshold.get_or_insert(DEFAULT_THRESHOLD);
    let format = *s.format.get_or_insert(OutputFormat::Csv);
    let grid_text = s.z_grid.get_or_insert_with(|| "0.5:12:0.5".to_string()).clone();
    let grid = parse_grid(&grid_text)?;

    let range = |field: &'static str, message: String| ConfigError::OutOfRange { field, message };
    if nodes < 2 {
        return Err(range("nodes", format!("need at least 2 banks, got {nodes}")));
    }
    if trials == 0 {
        return Err(range("trials", "need at least 1 trial".into()));
    }
    if !(gamma > 2.0) {
        return Err(range("gamma", format!("tail exponent must exceed 2, got {gamma}")));
    }
    if !(alpha > 2.0) {
        return Err(range("alpha", format!("size exponent must exceed 2, got {alpha}")));
    }
    if sweeps == 0 {
        return Err(range("rewire-sweeps", "need at least 1 sweep".into()));
    }
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(range("policy-fraction", format!("must lie in (0, 1], got {fraction}")));
    }
    if !(buffer > 0.0 && buffer < 1.0) {
        return Err(range("policy-buffer", format!("must lie in (0, 1), got {buffer}")));
    }
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(range("threshold", format!("must lie in (0, 1), got {threshold}")));
    }
    if let Some(j) = s.coupling_j {
        if !j.is_finite() {
            return Err(range("coupling-J", format!("must be finite, got {j}")));
        }
    }
    if s.threads == Some(0) {
        return Err(range("threads", "need at least 1 thread".into()));
    }

    let master_seed = match s.seed {
        Some(seed) => seed,
        None => {
            let seed = rand::random::<u64>() >> 11;
            warnings.push(format!("no master seed given; generated {seed}"));
            s.seed = Some(seed);
            seed
        }
    };

    if preset.is_some() {
        let overridden = s.structural_overrides();
        if !overridden.is_empty() {
            warnings.push(format!(
                "{} applied to every series of the preset",
                overridden.join(", ")
            ));
        }
    }

    let study = super::presets::build_study(preset, &s, grid, master_seed);

    let out = match &s.out {
        Some(p) => p.clone(),
        None => {
            let dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
            let stem = preset.map(|p| p.name()).unwrap_or("sweep");
            let path = dir.join(format!("{stem}.{}", format.extension()));
            s.out = Some(path.clone());
            path
        }
    };

    Ok(RunConfig {
        threads: s.threads,
        settings: s,
        preset,
        study,
        master_seed,
        out,
        format,
        warnings,
    })
}

/// Parses `min:max:step` (or a single value) into an inclusive grid.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, ConfigError> {
    let bad = |message: String| ConfigError::OutOfRange {
        field: "z-grid",
        message,
    };
    let parts: Result<Vec<f64>, _> = text.split(':').map(|p| p.trim().parse::<f64>()).collect();
    let parts = parts.map_err(|_| bad(format!("expected min:max:step, got `{text}`")))?;
    if parts.iter().any(|v| !v.is_finite()) {
        return Err(bad(format!("non-finite value in `{text}`")));
    }
    match parts.as_slice() {
        [z] if *z >= 0.0 => Ok(vec![*z]),
        [min, max, step] if *min >= 0.0 && *max >= *min && *step > 0.0 => Ok(grid_range(*min, *max, *step)),
        _ => Err(bad(format!("expected min:max:step with 0 <= min <= max and step > 0, got `{text}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig, ConfigError> {
        parse_config(std::iter::once("contagion").chain(args.iter().copied()))
    }

    #[test]
    fn flags_override_preset() {
        let cfg = parse(&["--preset", "fig1", "--nodes", "2000", "--trials", "200", "--seed", "5"]).unwrap();
        let spec = &cfg.study.series[0].spec;
        assert_eq!((spec.nodes, spec.trials, spec.master_seed), (2000, 200, 5));
        assert_eq!(spec.grid.len(), 24);
    }

    #[test]
    fn preset_scale_applies_without_overrides() {
        let cfg = parse(&["--preset", "fig6", "--seed", "1"]).unwrap();
        assert_eq!(cfg.study.series[0].spec.nodes, 1000);
        assert_eq!(cfg.study.series[0].spec.trials, 10_000);
    }

    #[test]
    fn missing_seed_is_generated_and_stored() {
        let cfg = parse(&["--preset", "fig1"]).unwrap();
        assert_eq!(cfg.settings.seed, Some(cfg.master_seed));
        assert!(cfg.warnings.iter().any(|w| w.contains("generated")));
    }

    #[test]
    fn distinct_diagnostics() {
        let unknown = parse(&["--preset", "fig10"]).unwrap_err();
        assert!(matches!(unknown, ConfigError::UnknownPreset(_)));
        assert_eq!(unknown.exit_code(), 3);

        let range = parse(&["--threshold", "1.5", "--seed", "1"]).unwrap_err();
        assert!(matches!(range, ConfigError::OutOfRange { field: "threshold", .. }));
        assert_eq!(range.exit_code(), 5);

        let grid = parse(&["--z-grid", "3:1:0.5", "--seed", "1"]).unwrap_err();
        assert!(matches!(grid, ConfigError::OutOfRange { field: "z-grid", .. }));

        let missing = parse(&["--config", "/nonexistent/run.toml"]).unwrap_err();
        assert_eq!(missing.exit_code(), 4);

        let usage = parse(&["--nodes", "many"]).unwrap_err();
        assert_eq!(usage.exit_code(), 2);
    }

    #[test]
    fn malformed_file_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.toml");
        std::fs::write(&path, "nodes = \"lots\"\n").unwrap();
        let err = parse(&["--config", path.to_str().unwrap()]).unwrap_err();
        assert!(matches!(err, ConfigError::MalformedFile { .. }));

        std::fs::write(&path, "colour = 3\n").unwrap();
        assert!(matches!(
            parse(&["--config", path.to_str().unwrap()]).unwrap_err(),
            ConfigError::MalformedFile { .. }
        ));
    }

    #[test]
    fn file_sits_between_flags_and_preset() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "preset = \"fig1\"\nnodes = 500\ntrials = 7\nseed = 3\n").unwrap();
        let cfg = parse(&["--config", path.to_str().unwrap(), "--trials", "9"]).unwrap();
        let spec = &cfg.study.series[0].spec;
        assert_eq!((spec.nodes, spec.trials, spec.master_seed), (500, 9, 3));
    }

    #[test]
    fn resolved_config_round_trips_through_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("resolved.toml");
        let first = parse(&["--preset", "fig9", "--nodes", "300", "--z-grid", "1:3:1", "--coupling-J", "-0.5"]).unwrap();
        first.write_toml(&path).unwrap();
        let second = parse(&["--config", path.to_str().unwrap()]).unwrap();
        assert_eq!(second.study, first.study);
        assert_eq!(second.master_seed, first.master_seed);
        assert_eq!(second.out, first.out);
        assert_eq!(second.settings, first.settings);
    }

    #[test]
    fn negative_coupling_flag() {
        let cfg = parse(&["--coupling-J", "-1", "--seed", "2"]).unwrap();
        assert_eq!(cfg.study.series[0].spec.family.coupling(), Some(-1.0));
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("4").unwrap(), vec![4.0]);
        assert_eq!(parse_grid("1:2:0.5").unwrap(), vec![1.0, 1.5, 2.0]);
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("a:b:c").is_err());
        assert!(parse_grid("1:2:0").is_err());
    }
}
