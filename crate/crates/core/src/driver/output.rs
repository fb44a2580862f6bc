//! CSV writers and readers for run output.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::basis::legendre;
use crate::config::SimConfig;
use crate::diagnostics::{DiagnosticsRecord, FieldHistory, SpectrumGrid};
use crate::driver::run::{FourierSample, RunContext, Sink};
use crate::error::IoError;
use crate::maxwell::current_density_raw;
use crate::state::{FieldComponent, StateLayout, StateVector};

pub const TIMESERIES_FILE: &str = "timeseries.csv";
pub const FOURIER_FILE: &str = "fourier.csv";
pub const HISTORY_FILE: &str = "ey_history.csv";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::File {
        path: path.to_path_buf(),
        source,
    }
}

fn format_err(path: &Path, message: impl Into<String>) -> IoError {
    IoError::Format {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn timeseries_header(species: &[String]) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    h.extend(species.iter().map(|s| format!("N_{s}")));
    h.extend(
        [
            "E_kin",
            "E_EB",
            "E_tot",
            "dE_tot_rel",
            "cum_jump_dissipation",
            "gamma",
            "div_E_residual",
            "div_B_residual",
            "newton_iters",
        ]
        .map(String::from),
    );
    h
}

pub fn timeseries_row(r: &DiagnosticsRecord) -> Vec<String> {
    let mut row = vec![num(r.t)];
    row.extend(r.particle_numbers.iter().map(|&n| num(n)));
    row.extend(
        [
            r.e_kin,
            r.e_em,
            r.e_tot,
            r.de_tot_rel,
            r.cum_jump_dissipation,
            r.gamma,
            r.div_e_residual,
            r.div_b_residual,
        ]
        .map(num),
    );
    row.push(r.newton_iters.to_string());
    row
}

fn create(path: &Path) -> Result<BufWriter<File>, IoError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(io_err(dir))?;
        }
    }
    Ok(BufWriter::new(File::create(path).map_err(io_err(path))?))
}

fn write_line(w: &mut impl Write, path: &Path, cells: &[String]) -> Result<(), IoError> {
    writeln!(w, "{}", cells.join(",")).map_err(io_err(path))
}

/// Writes a complete time series; an empty series gives a header-only file.
pub fn write_timeseries(path: &Path, species: &[String], records: &[DiagnosticsRecord]) -> Result<(), IoError> {
    let mut w = create(path)?;
    write_line(&mut w, path, &timeseries_header(species))?;
    for r in records {
        write_line(&mut w, path, &timeseries_row(r))?;
    }
    w.flush().map_err(io_err(path))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub meta: Vec<Value>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// Reads a numeric CSV with optional leading `# {json}` metadata lines.
pub fn read_table(path: &Path) -> Result<Table, IoError> {
    let f = File::open(path).map_err(io_err(path))?;
    let mut meta = Vec::new();
    let mut header = None;
    let mut rows = Vec::new();
    for (n, line) in BufReader::new(f).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if let Some(rest) = line.strip_prefix('#') {
            let v = serde_json::from_str(rest.trim())
                .map_err(|e| format_err(path, format!("line {}: {e}", n + 1)))?;
            meta.push(v);
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        match &header {
            None => header = Some(cells.iter().map(|s| s.to_string()).collect::<Vec<_>>()),
            Some(h) => {
                if cells.len() != h.len() {
                    return Err(format_err(path, format!("line {}: expected {} columns", n + 1, h.len())));
                }
                let row = cells
                    .iter()
                    .map(|c| c.parse::<f64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| format_err(path, format!("line {}: {e}", n + 1)))?;
                rows.push(row);
            }
        }
    }
    Ok(Table {
        meta,
        header: header.ok_or_else(|| format_err(path, "missing header row"))?,
        rows,
    })
}

pub fn layout_metadata(layout: &StateLayout) -> Value {
    let mesh = layout.mesh();
    json!({
        "cells": mesh.cells,
        "lengths": mesh.lengths,
        "dg_degree": mesh.dg_degree,
        "species": layout.species().iter().map(|s| json!({
            "name": s.name,
            "hermite_orders": s.hermite_orders,
        })).collect::<Vec<_>>(),
        "total_len": layout.total_len(),
    })
}

fn center_weights(layout: &StateLayout) -> Vec<f64> {
    let mesh = layout.mesh();
    (0..layout.n_modes())
        .map(|l| {
            let t = mesh.mode_tuple(l);
            (0..3).map(|a| legendre(t[a], 0.0)).product()
        })
        .collect()
}

pub fn snapshot_header() -> Vec<String> {
    ["ix", "iy", "iz", "x", "y", "z", "E_x", "E_y", "E_z", "B_x", "B_y", "B_z", "J_x", "J_y", "J_z"]
        .map(String::from)
        .to_vec()
}

/// Cell-centre fields and currents with a JSON metadata line.
pub fn write_field_snapshot(path: &Path, state: &StateVector, t: f64, config_hash: &str) -> Result<(), IoError> {
    let layout = state.layout();
    let mesh = layout.mesh();
    let nm = layout.n_modes();
    let w_c = center_weights(layout);
    let j = current_density_raw(layout, state.data());
    let mut w = create(path)?;
    let meta = json!({ "config_hash": config_hash, "t": t, "layout": layout_metadata(layout) });
    writeln!(w, "# {meta}").map_err(io_err(path))?;
    write_line(&mut w, path, &snapshot_header())?;
    for cell in 0..layout.n_cells() {
        let idx = mesh.cell_tuple(cell);
        let x = mesh.cell_center(cell);
        let mut row: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
        row.extend(x.iter().map(|&v| num(v)));
        for c in FieldComponent::ALL {
            let v: f64 = (0..nm).map(|l| w_c[l] * state.field(c, cell, l)).sum();
            row.push(num(v));
        }
        for a in 0..3 {
            let v: f64 = (0..nm).map(|l| w_c[l] * j[(cell * nm + l) * 3 + a]).sum();
            row.push(num(v));
        }
        write_line(&mut w, path, &row)?;
    }
    w.flush().map_err(io_err(path))
}

/// Full state vector, one coefficient per row in layout order.
pub fn write_coefficients(path: &Path, state: &StateVector, t: f64, config_hash: &str) -> Result<(), IoError> {
    let mut w = create(path)?;
    let meta = json!({ "config_hash": config_hash, "t": t, "layout": layout_metadata(state.layout()) });
    writeln!(w, "# {meta}").map_err(io_err(path))?;
    writeln!(w, "value").map_err(io_err(path))?;
    for &v in state.data() {
        writeln!(w, "{}", num(v)).map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

pub fn read_coefficients(path: &Path) -> Result<(Value, Vec<f64>), IoError> {
    let table = read_table(path)?;
    if table.header != ["value"] {
        return Err(format_err(path, "expected a single `value` column"));
    }
    let meta = table.meta.into_iter().next().unwrap_or(Value::Null);
    Ok((meta, table.rows.into_iter().map(|r| r[0]).collect()))
}

pub fn write_fourier(path: &Path, samples: &[FourierSample], modes: &[i64]) -> Result<(), IoError> {
    let mut w = create(path)?;
    write_line(&mut w, path, &fourier_header(modes))?;
    for s in samples {
        write_line(&mut w, path, &fourier_row(s))?;
    }
    w.flush().map_err(io_err(path))
}

fn fourier_header(modes: &[i64]) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    for k in modes {
        h.extend([format!("Bz_re_{k}"), format!("Bz_im_{k}"), format!("Bz_abs_{k}")]);
    }
    h
}

fn fourier_row(s: &FourierSample) -> Vec<String> {
    let mut row = vec![num(s.t)];
    for (_, c) in &s.modes {
        row.extend([num(c.re), num(c.im), num(c.norm())]);
    }
    row
}

/// `E_y` history: metadata line with domain length and centres, then `t, Ey_0..`.
pub fn write_field_history(path: &Path, history: &FieldHistory, length: f64) -> Result<(), IoError> {
    let mut w = create(path)?;
    writeln!(w, "# {}", json!({ "length": length, "centers": history.centers })).map_err(io_err(path))?;
    let mut h = vec!["t".to_string()];
    h.extend((0..history.centers.len()).map(|i| format!("Ey_{i}")));
    write_line(&mut w, path, &h)?;
    for (t, vals) in history.times.iter().zip(&history.values) {
        let mut row = vec![num(*t)];
        row.extend(vals.iter().map(|&v| num(v)));
        write_line(&mut w, path, &row)?;
    }
    w.flush().map_err(io_err(path))
}

pub fn read_field_history(path: &Path) -> Result<(FieldHistory, f64), IoError> {
    let table = read_table(path)?;
    let meta = table.meta.first().ok_or_else(|| format_err(path, "missing metadata line"))?;
    let length = meta["length"].as_f64().ok_or_else(|| format_err(path, "missing `length`"))?;
    let centers: Vec<f64> = meta["centers"]
        .as_array()
        .ok_or_else(|| format_err(path, "missing `centers`"))?
        .iter()
        .filter_map(Value::as_f64)
        .collect();
    let mut history = FieldHistory {
        centers,
        ..Default::default()
    };
    for r in table.rows {
        history.push(r[0], r[1..].to_vec());
    }
    Ok((history, length))
}

/// `omega,k,magnitude` triples.
pub fn write_spectrum(path: &Path, s: &SpectrumGrid) -> Result<(), IoError> {
    let mut w = create(path)?;
    writeln!(w, "omega,k,magnitude").map_err(io_err(path))?;
    for (j, row) in s.magnitude.iter().enumerate() {
        for (i, m) in row.iter().enumerate() {
            writeln!(w, "{},{},{}", num(s.omegas[j]), num(s.wavenumbers[i]), num(*m)).map_err(io_err(path))?;
        }
    }
    w.flush().map_err(io_err(path))
}

pub fn snapshot_name(prefix: &str, t: f64) -> String {
    format!("{prefix}_{t:012.6}.csv")
}

/// Streams every output file into one directory as the run progresses.
pub struct CsvSink {
    dir: PathBuf,
    hash: String,
    timeseries: BufWriter<File>,
    fourier: BufWriter<File>,
    history: Option<(FieldHistory, f64)>,
    last_snapshot: Option<f64>,
}

impl CsvSink {
    pub fn create(dir: &Path, config: &SimConfig) -> Result<Self, IoError> {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let names: Vec<String> = config.species.iter().map(|s| s.name.clone()).collect();
        let ts_path = dir.join(TIMESERIES_FILE);
        let mut timeseries = create(&ts_path)?;
        write_line(&mut timeseries, &ts_path, &timeseries_header(&names))?;
        let f_path = dir.join(FOURIER_FILE);
        let mut fourier = create(&f_path)?;
        write_line(&mut fourier, &f_path, &fourier_header(&config.output.fourier_modes))?;
        for (w, p) in [(&mut timeseries, &ts_path), (&mut fourier, &f_path)] {
            w.flush().map_err(io_err(p))?;
        }
        fs::write(dir.join("config.toml"), config.to_toml()).map_err(io_err(dir))?;
        Ok(CsvSink {
            dir: dir.to_path_buf(),
            hash: config.hash(),
            timeseries,
            fourier,
            history: config
                .output
                .field_history
                .then(|| (FieldHistory::default(), config.mesh.lengths[0])),
            last_snapshot: None,
        })
    }

    fn snapshot(&mut self, ctx: &RunContext, state: &StateVector, t: f64) -> Result<(), IoError> {
        if self.last_snapshot == Some(t) {
            return Ok(());
        }
        self.last_snapshot = Some(t);
        write_field_snapshot(&self.dir.join(snapshot_name("fields", t)), state, t, &self.hash)?;
        if ctx.config.output.coefficients {
            write_coefficients(&self.dir.join(snapshot_name("coeffs", t)), state, t, &self.hash)?;
        }
        Ok(())
    }
}

impl Sink for CsvSink {
    fn on_record(&mut self, ctx: &RunContext, state: &StateVector, rec: &DiagnosticsRecord) -> Result<(), IoError> {
        let p = self.dir.join(TIMESERIES_FILE);
        write_line(&mut self.timeseries, &p, &timeseries_row(rec))?;
        self.timeseries.flush().map_err(io_err(&p))?;
        let p = self.dir.join(FOURIER_FILE);
        let modes = &ctx.config.output.fourier_modes;
        let bz = crate::diagnostics::cell_center_values(state, FieldComponent::Bz.index());
        let mesh = state.layout().mesh();
        let centers: Vec<f64> = (0..mesh.n_cells()).map(|c| mesh.cell_center(c)[0]).collect();
        let sample = FourierSample {
            t: rec.t,
            modes: modes
                .iter()
                .map(|&k| (k, crate::diagnostics::fourier_mode(&bz, &centers, mesh.lengths[0], k)))
                .collect(),
        };
        write_line(&mut self.fourier, &p, &fourier_row(&sample))?;
        self.fourier.flush().map_err(io_err(&p))?;
        if let Some((h, _)) = &mut self.history {
            if ctx.on_history_grid(rec.t) {
                if h.centers.is_empty() {
                    h.centers = centers;
                }
                h.push(rec.t, crate::diagnostics::cell_center_values(state, FieldComponent::Ey.index()));
            }
        }
        Ok(())
    }

    fn on_snapshot(&mut self, ctx: &RunContext, state: &StateVector, t: f64) -> Result<(), IoError> {
        self.snapshot(ctx, state, t)
    }

    fn on_finish(&mut self, ctx: &RunContext, state: &StateVector, t: f64) -> Result<(), IoError> {
        self.snapshot(ctx, state, t)?;
        if let Some((h, length)) = &self.history {
            write_field_history(&self.dir.join(HISTORY_FILE), h, *length)?;
        }
        Ok(())
    }
}
