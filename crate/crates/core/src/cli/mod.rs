//! Command-line front end: layered configuration, figure presets, and
//! CSV/JSON output.

mod config;
mod output;
mod presets;

pub use config::{
    parse_config, parse_grid, resolve, ConfigError, FamilyKind, OutputFormat, PolicyKind, ProtocolKind, RunConfig,
    Settings, SheetKind, DEFAULT_NODES, DEFAULT_TRIALS, OUT_DIR_ENV,
};
pub use output::{format_sig, write_csv, write_json, RecordedSpec, RunRecord, CSV_HEADER};
pub use presets::{Preset, RatioSpec, Series, Study};

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::error::Result;
use crate::experiment::{aggregate, ratio_rows, run_grid_point, GridPointResult, RatioRow, SweepTable};

/// Exit status when some grid points could not be simulated.
pub const EXIT_PARTIAL: i32 = 7;
pub const EXIT_IO: i32 = 6;
pub const EXIT_FAILURE: i32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct StudyResult {
    /// One table per series, in study order.
    pub tables: Vec<SweepTable>,
    pub ratios: Vec<(RatioSpec, Vec<RatioRow>)>,
}

impl StudyResult {
    pub fn failed_points(&self) -> usize {
        self.tables.iter().map(SweepTable::failed_points).sum()
    }
}

/// Runs every series of `study`, reporting each finished grid point to `log`.
pub fn run_study(study: &Study, mut log: impl FnMut(&str)) -> Result<StudyResult> {
    let mut tables = Vec::with_capacity(study.series.len());
    for series in &study.series {
        let spec = &series.spec;
        spec.validate()?;
        let mut points = Vec::with_capacity(spec.grid.len());
        for (gi, &z) in spec.grid.iter().enumerate() {
            let started = Instant::now();
            let records = run_grid_point(spec, gi, z);
            let status = match &records {
                Ok(r) => {
                    let hits = r.iter().filter(|t| t.contagion).count();
                    format!("p={}", format_sig(hits as f64 / r.len() as f64))
                }
                Err(e) => format!("failed: {e}"),
            };
            log(&format!(
                "[{}] z={} {} ({} trials, {:.1}s)",
                series.label,
                format_sig(z),
                status,
                spec.trials,
                started.elapsed().as_secs_f64()
            ));
            points.push(GridPointResult { z, records });
        }
        tables.push(aggregate(spec, &points));
    }
    let ratios = study
        .ratios
        .iter()
        .map(|r| (*r, ratio_rows(&tables[r.numerator], &tables[r.denominator])))
        .collect();
    Ok(StudyResult { tables, ratios })
}

/// `results.csv` -> `results.run.json`.
pub fn run_record_path(out: &Path) -> PathBuf {
    out.with_extension("run.json")
}

/// Full command-line run; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match parse_config(args) {
        Ok(cfg) => cfg,
        Err(ConfigError::Usage(e)) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    for w in &cfg.warnings {
        eprintln!("warning: {w}");
    }
    eprintln!("master seed: {}", cfg.master_seed);

    let started_at = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let clock = Instant::now();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cfg.threads {
        pool = pool.num_threads(t);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return EXIT_FAILURE;
        }
    };
    let result = match pool.install(|| run_study(&cfg.study, |line| eprintln!("{line}"))) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAILURE;
        }
    };

    let mut warnings = cfg.warnings.clone();
    let failed = result.failed_points();
    if failed > 0 {
        warnings.push(format!("{failed} grid point(s) could not be simulated; see the error column"));
    }
    let record = RunRecord {
        spec: RecordedSpec {
            settings: cfg.settings.clone(),
            study: cfg.study.clone(),
        },
        master_seed: cfg.master_seed,
        version: env!("CARGO_PKG_VERSION"),
        started_at,
        duration_seconds: clock.elapsed().as_secs_f64(),
        warnings,
    };

    if let Err(e) = write_outputs(&cfg, &result, &record) {
        eprintln!("error: cannot write {}: {e}", cfg.out.display());
        return EXIT_IO;
    }
    eprintln!("wrote {}", cfg.out.display());
    if failed > 0 {
        eprintln!("warning: {failed} grid point(s) failed");
        return EXIT_PARTIAL;
    }
    0
}

fn write_outputs(cfg: &RunConfig, result: &StudyResult, record: &RunRecord) -> std::io::Result<()> {
    if let Some(dir) = cfg.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let file = BufWriter::new(File::create(&cfg.out)?);
    match cfg.format {
        OutputFormat::Csv => write_csv(&cfg.study, result, file)?,
        OutputFormat::Json => write_json(&cfg.study, result, file)?,
    }
    let meta = BufWriter::new(File::create(run_record_path(&cfg.out))?);
    serde_json::to_writer_pretty(meta, record)?;
    Ok(())
}
