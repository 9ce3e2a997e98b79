//! CSV and JSON artifacts.
//!
//! Waveforms are written as `t,re,im,abs` and lattices as `z,t,re,im,abs`,
//! preceded by one `#` comment line with the units and, for waveforms, the
//! exact grid origin and step. Numbers carry 17 significant digits, so a
//! waveform read back with [`read_waveform_csv`] is bit-identical.

use std::fs;
use std::path::Path;

use gemqm::grid::{Lattice, Waveform};
use gemqm::Complex64;
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn writer(path: &Path, comment: &str) -> CliResult<csv::Writer<fs::File>> {
    use std::io::Write;
    let mut f = fs::File::create(path).map_err(|e| CliError::io(format!("creating {}", path.display()), e))?;
    writeln!(f, "# {comment}").map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
    Ok(csv::Writer::from_writer(f))
}

fn csv_err(path: &Path, e: csv::Error) -> CliError {
    CliError::io(format!("writing {}", path.display()), e.into())
}

/// Writes `t,re,im,abs`. `units` describes the time normalization.
pub fn emit_waveform_csv(path: &Path, w: &Waveform, units: &str) -> CliResult<()> {
    let mut wr = writer(path, &format!("{units}; t0={} dt={}", num(w.t0), num(w.dt)))?;
    wr.write_record(["t", "re", "im", "abs"]).map_err(|e| csv_err(path, e))?;
    for (i, v) in w.samples.iter().enumerate() {
        wr.write_record([num(w.time(i)), num(v.re), num(v.im), num(v.norm())]).map_err(|e| csv_err(path, e))?;
    }
    wr.flush().map_err(|e| CliError::io(format!("writing {}", path.display()), e))
}

/// Writes `z,t,re,im,abs`, rows ordered by `z` then `t`.
pub fn emit_grid_csv(path: &Path, g: &Lattice, units: &str) -> CliResult<()> {
    let mut wr = writer(path, units)?;
    wr.write_record(["z", "t", "re", "im", "abs"]).map_err(|e| csv_err(path, e))?;
    for iz in 0..g.nz() {
        for it in 0..g.nt() {
            let v = g.get(iz, it);
            wr.write_record([num(g.z[iz]), num(g.t[it]), num(v.re), num(v.im), num(v.norm())])
                .map_err(|e| csv_err(path, e))?;
        }
    }
    wr.flush().map_err(|e| CliError::io(format!("writing {}", path.display()), e))
}

/// Writes a table with the given header; used for sweeps.
pub fn emit_table_csv(path: &Path, comment: &str, header: &[String], rows: &[Vec<f64>]) -> CliResult<()> {
    let mut wr = writer(path, comment)?;
    wr.write_record(header).map_err(|e| csv_err(path, e))?;
    for r in rows {
        wr.write_record(r.iter().map(|&x| num(x))).map_err(|e| csv_err(path, e))?;
    }
    wr.flush().map_err(|e| CliError::io(format!("writing {}", path.display()), e))
}

pub fn emit_report_json<T: Serialize>(path: &Path, report: &T) -> CliResult<()> {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    fs::write(path, s).map_err(|e| CliError::io(format!("writing {}", path.display()), e))
}

fn header_value(comment: &str, key: &str) -> Option<f64> {
    comment.split_whitespace().find_map(|tok| tok.strip_prefix(key)?.parse().ok())
}

/// Reads a `t,re,im,abs` file. The grid comes from the `t0=`/`dt=` header
/// when present, otherwise from the first two times.
pub fn read_waveform_csv(path: &Path) -> CliResult<Waveform> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    let bad = |msg: String| CliError::Validation(format!("{}: {msg}", path.display()));
    let comment = text.lines().find(|l| l.starts_with('#')).unwrap_or("");
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes());
    let head = rd.headers().map_err(|e| bad(e.to_string()))?.clone();
    let col = |name: &str| head.iter().position(|h| h == name).ok_or_else(|| bad(format!("missing column `{name}`")));
    let (ct, cr, ci) = (col("t")?, col("re")?, col("im")?);
    let mut times = Vec::new();
    let mut samples = Vec::new();
    for (k, rec) in rd.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let f = |c: usize| -> CliResult<f64> {
            rec.get(c).unwrap_or("").parse().map_err(|_| bad(format!("row {}: bad number in column {c}", k + 1)))
        };
        times.push(f(ct)?);
        samples.push(Complex64::new(f(cr)?, f(ci)?));
    }
    if samples.len() < 2 {
        return Err(bad("need at least two samples".into()));
    }
    let t0 = header_value(comment, "t0=").unwrap_or(times[0]);
    let dt = header_value(comment, "dt=").unwrap_or(times[1] - times[0]);
    for (i, &t) in times.iter().enumerate() {
        if (t - (t0 + i as f64 * dt)).abs() > 1e-9 * (1.0 + t.abs()) {
            return Err(bad(format!("row {}: time {t} is off the uniform grid", i + 1)));
        }
    }
    Waveform::new(t0, dt, samples).map_err(|e| bad(e.to_string()))
}
