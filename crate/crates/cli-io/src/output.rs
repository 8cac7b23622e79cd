use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use siec_experiments::{ScanPoint, ScanRecord, C64};

use crate::CliError;

/// Bumped whenever a file layout below changes.
pub const SCHEMA_VERSION: u32 = 1;

/// Column order of `records.csv`.
pub const RECORD_COLUMNS: [&str; 20] = [
    "model",
    "t_l",
    "t_r",
    "delta",
    "length",
    "cut_lo",
    "cut_hi",
    "source",
    "fermi_rule",
    "s",
    "s2",
    "gap",
    "min_r",
    "im_residual",
    "p_min",
    "p_max",
    "l_c_pred",
    "error",
    "warning",
    "tag",
];

/// Column order of `entropy.csv`.
pub const ENTROPY_COLUMNS: [&str; 8] = ["L", "parity", "S", "S2", "p_min", "p_max", "im_residual", "source"];

/// Column order of `gbz_L{n}.csv`.
pub const GBZ_COLUMNS: [&str; 6] = ["m", "k", "re_z", "im_z", "abs_z", "regime"];

/// Column order of `sweep.csv`.
pub const SWEEP_COLUMNS: [&str; 9] =
    ["ratio", "delta", "t_l", "t_r", "s_min", "l_star", "l_c_pred", "failures", "error"];

/// Seventeen significant digits, `NaN` for a missing value.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

pub fn fmt_opt_f64(x: Option<f64>) -> String {
    x.map_or_else(|| "NaN".into(), fmt_f64)
}

fn fmt_opt_usize(x: Option<usize>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

/// `[re, im]`.
pub fn complex_json(z: C64) -> Value {
    json!([z.re, z.im])
}

/// CSV text with a header row.
pub fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

pub fn record_row(r: &ScanRecord) -> Vec<String> {
    vec![
        r.model.clone(),
        fmt_opt_f64(r.t_l),
        fmt_opt_f64(r.t_r),
        fmt_f64(r.delta),
        r.length.to_string(),
        fmt_opt_usize(r.cut_lo),
        fmt_opt_usize(r.cut_hi),
        r.source.clone(),
        r.fermi_rule.clone().unwrap_or_default(),
        fmt_opt_f64(r.s),
        fmt_opt_f64(r.s2),
        fmt_opt_f64(r.gap),
        fmt_opt_f64(r.min_r),
        fmt_opt_f64(r.im_residual),
        fmt_opt_f64(r.p_min),
        fmt_opt_f64(r.p_max),
        fmt_opt_f64(r.l_c_pred),
        r.error.clone().unwrap_or_default(),
        r.warning.clone().unwrap_or_default(),
        r.tag.clone(),
    ]
}

pub fn records_csv(records: &[ScanRecord]) -> Result<String, CliError> {
    csv_text(&RECORD_COLUMNS, &records.iter().map(record_row).collect::<Vec<_>>())
}

/// Inverse of [`records_csv`]: `NaN` and empty cells read back as `None`.
pub fn parse_records_csv(text: &str) -> Result<Vec<ScanRecord>, CliError> {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(String::from).collect();
    if header != RECORD_COLUMNS {
        return Err(CliError::Parse(format!("unexpected records header {header:?}")));
    }
    let mut out = Vec::new();
    for (line, row) in reader.records().enumerate() {
        let row = row?;
        let cell = |i: usize| row.get(i).unwrap_or("");
        let ctx = |i: usize| format!("row {}, column {}", line + 1, RECORD_COLUMNS[i]);
        let opt_f = |i: usize| -> Result<Option<f64>, CliError> {
            match cell(i) {
                "" | "NaN" => Ok(None),
                s => parse_f64(s).map(Some).map_err(|e| CliError::Parse(format!("{}: {e}", ctx(i)))),
            }
        };
        let opt_u = |i: usize| -> Result<Option<usize>, CliError> {
            match cell(i) {
                "" => Ok(None),
                s => s.parse().map(Some).map_err(|e| CliError::Parse(format!("{}: {e}", ctx(i)))),
            }
        };
        let opt_s = |i: usize| Some(cell(i).to_string()).filter(|s| !s.is_empty());
        out.push(ScanRecord {
            model: cell(0).into(),
            t_l: opt_f(1)?,
            t_r: opt_f(2)?,
            delta: opt_f(3)?.ok_or_else(|| CliError::Parse(format!("{}: missing", ctx(3))))?,
            length: opt_u(4)?.ok_or_else(|| CliError::Parse(format!("{}: missing", ctx(4))))?,
            cut_lo: opt_u(5)?,
            cut_hi: opt_u(6)?,
            source: cell(7).into(),
            fermi_rule: opt_s(8),
            s: opt_f(9)?,
            s2: opt_f(10)?,
            gap: opt_f(11)?,
            min_r: opt_f(12)?,
            im_residual: opt_f(13)?,
            p_min: opt_f(14)?,
            p_max: opt_f(15)?,
            l_c_pred: opt_f(16)?,
            error: opt_s(17),
            warning: opt_s(18),
            tag: cell(19).into(),
        });
    }
    Ok(out)
}

fn parse_f64(s: &str) -> Result<f64, std::num::ParseFloatError> {
    match s {
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => s.parse(),
    }
}

pub fn entropy_row(r: &ScanRecord) -> Vec<String> {
    vec![
        r.length.to_string(),
        r.parity().into(),
        fmt_opt_f64(r.s),
        fmt_opt_f64(r.s2),
        fmt_opt_f64(r.p_min),
        fmt_opt_f64(r.p_max),
        fmt_opt_f64(r.im_residual),
        r.source.clone(),
    ]
}

/// Per-size spectra: energies and entanglement spectrum as `[re, im]` pairs.
pub fn spectra_json(point: &ScanPoint) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "length": point.record.length,
        "energies": point.energies.iter().map(|&z| complex_json(z)).collect::<Vec<_>>(),
        "p_spectrum": point.p_spectrum.iter().map(|&z| complex_json(z)).collect::<Vec<_>>(),
    })
}

pub fn spectra_file_name(length: usize) -> String {
    format!("spectra_L{length}.json")
}

/// Whole-file writes into one run directory.
pub struct RunDir {
    root: PathBuf,
    written: Vec<PathBuf>,
}

impl RunDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(|e| CliError::Io(format!("cannot create {}: {e}", root.display())))?;
        Ok(Self { root: root.to_path_buf(), written: Vec::new() })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        let path = self.root.join(name);
        fs::write(&path, contents).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        self.written.push(path.clone());
        Ok(path)
    }

    pub fn write_json(&mut self, name: &str, value: &Value) -> Result<PathBuf, CliError> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
        text.push('\n');
        self.write(name, &text)
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    /// File names written so far, relative to the run directory.
    pub fn names(&self) -> Vec<String> {
        self.written.iter().filter_map(|p| p.file_name()).map(|n| n.to_string_lossy().into_owned()).collect()
    }
}

/// Writes `records.csv`, optional per-size spectra, and `meta.json`.
pub fn write_records(
    points: &[ScanPoint],
    dir: &Path,
    emit_spectra: bool,
    meta: Value,
) -> Result<Vec<PathBuf>, CliError> {
    if points.is_empty() {
        return Err(CliError::Computation("no records to write".into()));
    }
    let mut run = RunDir::create(dir)?;
    let records: Vec<ScanRecord> = points.iter().map(|p| p.record.clone()).collect();
    run.write("records.csv", &records_csv(&records)?)?;
    if emit_spectra {
        for p in points {
            run.write_json(&spectra_file_name(p.record.length), &spectra_json(p))?;
        }
    }
    let meta = with_files(meta, &run, "records.csv", &RECORD_COLUMNS);
    run.write_json("meta.json", &meta)?;
    Ok(run.written().to_vec())
}

/// Adds the written file list and the primary table's columns to `meta`.
pub fn with_files(mut meta: Value, run: &RunDir, table: &str, columns: &[&str]) -> Value {
    if let Value::Object(m) = &mut meta {
        let mut files = run.names();
        files.push("meta.json".into());
        m.insert("files".into(), json!(files));
        m.insert("columns".into(), json!({ table: columns }));
    }
    meta
}
