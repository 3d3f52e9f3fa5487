//! Report emission: CSV tables for curves, JSON for scalar reports.
//! Deterministic byte-for-byte for a fixed configuration, modulo an
//! optional timestamp line.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use casimir_te::material::Cavity;
use casimir_te::units::radps_to_ev;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Material/cavity identification printed into every report.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub preset: &'static str,
    pub omega_p_ev: f64,
    pub gamma_ev: f64,
    pub gap_m: f64,
    pub thouless_radps: f64,
    pub tol: f64,
}

impl Provenance {
    pub fn new(cavity: &Cavity, preset_gold: bool, tol: f64) -> Self {
        Provenance {
            preset: if preset_gold { "gold" } else { "custom" },
            omega_p_ev: radps_to_ev(cavity.material.omega_p()),
            gamma_ev: radps_to_ev(cavity.material.gamma()),
            gap_m: cavity.gap(),
            thouless_radps: cavity.thouless(),
            tol,
        }
    }
}

/// One tabular report: named columns plus identification of the quantity.
pub struct Table {
    pub quantity: &'static str,
    pub unit: &'static str,
    pub channel: String,
    pub columns: Vec<&'static str>,
    /// One row per grid point; `None` renders as an empty CSV cell / JSON null.
    pub rows: Vec<Vec<Option<f64>>>,
}

pub struct Emitter {
    pub out_dir: PathBuf,
    pub format: Format,
    /// Unix seconds; `None` when the timestamp line is disabled.
    pub timestamp: Option<u64>,
    pub provenance: Provenance,
}

impl Emitter {
    pub fn new(out_dir: &Path, format: Format, no_timestamp: bool, prov: Provenance) -> Self {
        let timestamp = if no_timestamp {
            None
        } else {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .ok()
                .map(|d| d.as_secs())
        };
        Emitter { out_dir: out_dir.to_path_buf(), format, timestamp, provenance: prov }
    }

    /// Write one table as `<stem>.csv` or `<stem>.json`; returns the path.
    pub fn write_table(&self, stem: &str, t: &Table) -> std::io::Result<PathBuf> {
        match self.format {
            Format::Csv => self.write_csv(stem, t),
            Format::Json => {
                let body = serde_json::json!({
                    "quantity": t.quantity,
                    "unit": t.unit,
                    "channel": t.channel,
                    "provenance": self.provenance,
                    "generated_unix": self.timestamp,
                    "columns": t.columns,
                    "rows": t.rows,
                });
                self.write_json(stem, &body)
            }
        }
    }

    fn write_csv(&self, stem: &str, t: &Table) -> std::io::Result<PathBuf> {
        let path = self.out_dir.join(format!("{stem}.csv"));
        let mut w = BufWriter::new(File::create(&path)?);
        let p = &self.provenance;
        write!(
            w,
            "# quantity = {}, unit = {}, channel = {}\n\
             # preset = {}, omega_p_ev = {}, gamma_ev = {}, gap_m = {:e}, \
             thouless_radps = {:e}, tol = {:e}\n",
            t.quantity, t.unit, t.channel, p.preset, p.omega_p_ev, p.gamma_ev, p.gap_m,
            p.thouless_radps, p.tol
        )?;
        if let Some(ts) = self.timestamp {
            write!(w, "# generated_unix = {ts}\n")?;
        }
        write!(w, "{}\n", t.columns.join(","))?;
        for row in &t.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Some(v) => format!("{v:e}"),
                    None => String::new(),
                })
                .collect();
            write!(w, "{}\n", cells.join(","))?;
        }
        w.flush()?;
        Ok(path)
    }

    /// Write a scalar report as JSON regardless of the table format,
    /// wrapping it with provenance and the optional timestamp.
    pub fn write_report(&self, stem: &str, body: serde_json::Value) -> std::io::Result<PathBuf> {
        let wrapped = serde_json::json!({
            "provenance": self.provenance,
            "generated_unix": self.timestamp,
            "report": body,
        });
        self.write_json(stem, &wrapped)
    }

    fn write_json(&self, stem: &str, body: &serde_json::Value) -> std::io::Result<PathBuf> {
        let path = self.out_dir.join(format!("{stem}.json"));
        let mut w = BufWriter::new(File::create(&path)?);
        serde_json::to_writer_pretty(&mut w, body)?;
        w.write_all(b"\n")?;
        w.flush()?;
        Ok(path)
    }
}
