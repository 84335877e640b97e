//! CSV curves and JSON two-photon matrices.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use entswitch_core::correlations::{
    Entanglement, MeasurementWindow, TwoPhotonDensityMatrix, TWO_PHOTON_BASIS,
};
use entswitch_core::dressed::{DressedSpectrum, Resonance};
use entswitch_core::protocol::{SweepRecord, SwitchRecord};

use crate::error::CliError;

pub const SWEEP_HEADER: [&str; 4] = ["omega_over_g", "mean_n", "concurrence", "type"];
pub const SWITCH_HEADER: [&str; 4] = ["t0_ps", "omega_over_g", "concurrence", "type"];

/// Tolerance on Hermiticity and unit trace when loading a matrix.
pub const LOAD_TOLERANCE: f64 = 1e-9;

/// Fixed-point decimal with 12 significant digits.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{:.11}", if x == 0.0 { 0.0 } else { x });
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (11 - exponent).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // Rounding up across a power of ten leaves one digit too many.
    let digits = s.chars().filter(|c| c.is_ascii_digit()).collect::<String>();
    let significant = digits.trim_start_matches('0').len();
    if significant > 12 && decimals > 0 {
        format!("{x:.prec$}", prec = decimals - 1)
    } else {
        s
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> CliError + '_ {
    move |e| CliError::Format { path: path.to_path_buf(), message: e.to_string() }
}

fn write_csv<const N: usize>(path: &Path, header: [&str; N], rows: &[[String; N]]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(header).map_err(csv_err(path))?;
    for row in rows {
        w.write_record(row).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

fn check_range(name: &str, x: f64, lo: f64, hi: f64) -> Result<(), CliError> {
    if !(x >= lo && x <= hi) {
        return Err(CliError::InvalidOutput(format!("{name} = {x} outside [{lo}, {hi}]")));
    }
    Ok(())
}

/// One row per record, sorted by Ω, with Ω in units of `g`.
pub fn emit_sweep_csv(path: &Path, records: &[SweepRecord], g: f64) -> Result<(), CliError> {
    let mut sorted: Vec<&SweepRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.omega.total_cmp(&b.omega));
    let mut rows = Vec::with_capacity(sorted.len());
    for r in sorted {
        check_range("concurrence", r.concurrence, 0.0, 1.0)?;
        check_range("mean_n", r.mean_n, 0.0, f64::INFINITY)?;
        rows.push([
            format_sig12(r.omega / g),
            format_sig12(r.mean_n),
            format_sig12(r.concurrence),
            r.ent_type.to_string(),
        ]);
    }
    write_csv(path, SWEEP_HEADER, &rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub omega_over_g: f64,
    pub mean_n: f64,
    pub concurrence: f64,
    pub ent_type: Entanglement,
}

pub fn read_sweep_csv(path: &Path) -> Result<Vec<SweepRow>, CliError> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let header = r.headers().map_err(csv_err(path))?;
    if header.iter().ne(SWEEP_HEADER) {
        return Err(CliError::Format {
            path: path.to_path_buf(),
            message: format!("unexpected header {:?}", header.iter().collect::<Vec<_>>()),
        });
    }
    let bad = |message: String| CliError::Format { path: path.to_path_buf(), message };
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err(path))?;
        let num = |i: usize| -> Result<f64, CliError> {
            rec[i].parse().map_err(|_| bad(format!("malformed number {:?}", &rec[i])))
        };
        out.push(SweepRow {
            omega_over_g: num(0)?,
            mean_n: num(1)?,
            concurrence: num(2)?,
            ent_type: rec[3].parse().map_err(bad)?,
        });
    }
    Ok(out)
}

/// One row per window start; `omega_over_g` is the drive active at `t0`.
pub fn emit_switch_csv(
    path: &Path,
    records: &[SwitchRecord],
    omega_over_g: impl Fn(f64) -> f64,
) -> Result<(), CliError> {
    let mut rows = Vec::with_capacity(records.len());
    for r in records {
        check_range("concurrence", r.concurrence, 0.0, 1.0)?;
        rows.push([
            format_sig12(r.t0),
            format_sig12(omega_over_g(r.t0)),
            format_sig12(r.concurrence),
            r.ent_type.to_string(),
        ]);
    }
    write_csv(path, SWITCH_HEADER, &rows)
}

/// Dressed energies in units of `g`.
pub fn emit_energies_csv(path: &Path, spectra: &[DressedSpectrum], g: f64) -> Result<(), CliError> {
    let rows: Vec<[String; 5]> = spectra
        .iter()
        .map(|s| {
            [
                format_sig12(s.omega / g),
                format_sig12(s.e_u / g),
                format_sig12(s.e_m / g),
                format_sig12(s.e_n / g),
                format_sig12(s.e_l / g),
            ]
        })
        .collect();
    write_csv(path, ["omega_over_g", "e_u", "e_m", "e_n", "e_l"], &rows)
}

pub fn emit_resonances_csv(path: &Path, table: &[Resonance], g: f64) -> Result<(), CliError> {
    let rows: Vec<[String; 4]> = table
        .iter()
        .map(|r| {
            [
                r.photons.to_string(),
                r.pair.upper.to_string(),
                r.pair.lower.to_string(),
                format_sig12(r.omega / g),
            ]
        })
        .collect();
    write_csv(path, ["photons", "upper", "lower", "omega_over_g"], &rows)
}

#[derive(Debug, Serialize, Deserialize)]
struct WindowJson {
    t0: f64,
    dt: f64,
    tau: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct Rho2pJson {
    basis: Vec<String>,
    real: Vec<Vec<f64>>,
    imag: Vec<Vec<f64>>,
    window: Option<WindowJson>,
}

pub fn emit_rho2p(rho: &TwoPhotonDensityMatrix, path: &Path) -> Result<(), CliError> {
    let part = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
        rho.entries.rows().into_iter().map(|row| row.iter().map(f).collect()).collect()
    };
    let doc = Rho2pJson {
        basis: TWO_PHOTON_BASIS.iter().map(|s| s.to_string()).collect(),
        real: part(|z| z.re),
        imag: part(|z| z.im),
        window: rho.window.map(|w| WindowJson { t0: w.t0, dt: w.dt, tau: w.tau }),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("matrix serializes");
    text.push('\n');
    let mut f = fs::File::create(path).map_err(io_err(path))?;
    f.write_all(text.as_bytes()).map_err(io_err(path))
}

/// Reads a matrix written by [`emit_rho2p`], checking basis order,
/// Hermiticity and unit trace.
pub fn load_rho2p(path: &Path) -> Result<TwoPhotonDensityMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let bad = |message: String| CliError::Format { path: PathBuf::from(path), message };
    let doc: Rho2pJson = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    if doc.basis.iter().map(String::as_str).ne(TWO_PHOTON_BASIS) {
        return Err(bad(format!("basis must be {TWO_PHOTON_BASIS:?}, got {:?}", doc.basis)));
    }
    let square = |m: &Vec<Vec<f64>>| m.len() == 4 && m.iter().all(|r| r.len() == 4);
    if !square(&doc.real) || !square(&doc.imag) {
        return Err(bad("real and imag must be 4x4".into()));
    }
    let entries = Array2::from_shape_fn((4, 4), |(i, j)| C64::new(doc.real[i][j], doc.imag[i][j]));
    let window = match doc.window {
        None => None,
        Some(w) => Some(MeasurementWindow::new(w.t0, w.dt, w.tau).map_err(|e| bad(e.to_string()))?),
    };
    let rho = TwoPhotonDensityMatrix { entries, window };
    let dev = rho.hermiticity_deviation();
    if dev > LOAD_TOLERANCE {
        return Err(bad(format!("matrix is not Hermitian (deviation {dev:.3e})")));
    }
    let tr = rho.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > LOAD_TOLERANCE {
        return Err(bad(format!("trace is {tr}, expected 1")));
    }
    Ok(rho)
}
