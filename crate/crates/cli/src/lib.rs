//! Config-driven runner for the `gemqm` models.
//!
//! A run reads one JSON config, executes it once per case and writes CSV
//! artifacts, a deterministic `report.json` and a `manifest.json` with
//! hashes and a timestamp into the output directory.

pub mod config;
pub mod error;
pub mod io;
pub mod report;
pub mod run;

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};
use crate::report::{ArtifactHash, Manifest, Report, SCHEMA_VERSION};
pub use crate::run::Profile;

#[derive(Debug, Clone)]
pub struct Options {
    pub config: PathBuf,
    pub out_dir: PathBuf,
    /// Worker threads; `None` uses the default pool.
    pub jobs: Option<usize>,
    pub profile: Profile,
}

/// Reads a config file into a JSON document.
pub fn load(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

/// SHA-256 of the canonical serialization (object keys sorted).
pub fn config_hash(doc: &Value) -> String {
    hex::encode(Sha256::digest(serde_json::to_vec(doc).expect("json")))
}

/// Runs every case of the config and writes the report and manifest.
pub fn run(opts: &Options) -> CliResult<Report> {
    let doc = load(&opts.config)?;
    let base = opts.config.parent().map(Path::to_path_buf).unwrap_or_default();
    run_document(&doc, &base, opts)
}

pub fn run_document(doc: &Value, base: &Path, opts: &Options) -> CliResult<Report> {
    let top = config::parse(doc, base)?;
    let mut stripped = doc.clone();
    if let Some(obj) = stripped.as_object_mut() {
        obj.remove("cases");
    }
    let mut cases = Vec::new();
    if top.cases.is_empty() {
        cases.push(("run".to_string(), stripped.clone(), top.clone(), String::new()));
    } else {
        for c in &top.cases {
            let mut d = stripped.clone();
            for (k, v) in &c.set {
                config::set_path(&mut d, k, v.clone())?;
            }
            let cfg = config::parse(&d, base)
                .map_err(|e| match e {
                    CliError::Validation(m) => CliError::Validation(format!("case `{}`: {m}", c.name)),
                    other => other,
                })?;
            if cfg.mode != top.mode {
                return Err(CliError::Validation(format!("case `{}` changes the mode", c.name)));
            }
            cases.push((c.name.clone(), d, cfg, c.name.clone()));
        }
    }
    fs::create_dir_all(&opts.out_dir).map_err(|e| CliError::io(format!("creating {}", opts.out_dir.display()), e))?;

    let exec = || -> CliResult<Vec<report::CaseReport>> {
        cases
            .into_iter()
            .map(|(name, d, cfg, sub)| {
                run::run_case(&run::Case { name, cfg, doc: d, base, out_dir: &opts.out_dir, sub, profile: opts.profile })
            })
            .collect()
    };
    let case_reports = with_jobs(opts.jobs, exec)??;

    let hash = config_hash(doc);
    let report = Report {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        mode: top.mode,
        config_hash: hash.clone(),
        tolerance_profile: opts.profile.name().to_string(),
        cases: case_reports,
    };
    io::emit_report_json(&opts.out_dir.join("report.json"), &report)?;

    let mut artifacts = Vec::new();
    let mut rels: Vec<String> = report.cases.iter().flat_map(|c| c.artifacts.iter().cloned()).collect();
    rels.push("report.json".to_string());
    for rel in rels {
        let path = opts.out_dir.join(&rel);
        let bytes = fs::read(&path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
        artifacts.push(ArtifactHash { path: rel, sha256: hex::encode(Sha256::digest(&bytes)), bytes: bytes.len() as u64 });
    }
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        config_hash: hash,
        config: doc.clone(),
        artifacts,
        report: report.clone(),
    };
    io::emit_report_json(&opts.out_dir.join("manifest.json"), &manifest)?;
    Ok(report)
}

#[cfg(feature = "parallel")]
fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Validation(format!("--jobs {n}: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn with_jobs<T: Send>(_jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    Ok(f())
}
