//! Deterministic CSV emission: UTF-8, comma-separated, one header row,
//! `.` decimal point, floats at 9 significant digits.

use std::io::Write;
use std::path::Path;

use super::{SweepResult, SweepRow};
use crate::error::Result;
use crate::modeswitch::LookupRow;

fn fmt(x: f64) -> String {
    format!("{x:.8e}")
}

fn sweep_line(row: &SweepRow) -> String {
    let status = if row.feasible { "ok" } else { "infeasible" };
    format!(
        "{},{},{},{},{},{},{},{}\n",
        fmt(row.sweep_value),
        row.mode_label,
        row.estimator,
        fmt(row.mean_xi),
        fmt(row.se_xi),
        fmt(row.mean_p_t),
        fmt(row.mean_capacity),
        status
    )
}

/// Write a sweep result; columns are the swept variable, mode,
/// estimator, mean/standard-error efficiency, mean transmit power, mean
/// capacity and a feasibility status.
pub fn write_sweep_csv(result: &SweepResult, path: &Path) -> Result<()> {
    let mut out = std::fs::File::create(path)?;
    writeln!(
        out,
        "{},mode,estimator,mean_xi_bpj,se_xi_bpj,mean_p_t_w,mean_capacity_bps,status",
        result.sweep_name
    )?;
    for row in &result.rows {
        out.write_all(sweep_line(row).as_bytes())?;
    }
    Ok(())
}

/// Write an ergodic mode map (one row per grid cell).
pub fn write_mode_map_csv(rows: &[LookupRow<f64>], path: &Path) -> Result<()> {
    let mut out = std::fs::File::create(path)?;
    writeln!(out, "speed_kmh,distance_km,scheme,m_a,k_a,n_a,p_t_w,xi_bpj")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            fmt(row.speed_kmh),
            fmt(row.distance_km),
            row.mode.scheme_str(),
            row.mode.m_a,
            row.mode.k_a,
            row.mode.n_a[0],
            fmt(row.op.p_t_w),
            fmt(row.op.xi_bpj),
        )?;
    }
    Ok(())
}

/// Write one solved operating point.
pub fn write_single_csv(row: &LookupRow<f64>, path: &Path) -> Result<()> {
    let mut out = std::fs::File::create(path)?;
    writeln!(
        out,
        "speed_kmh,distance_km,mode,scheme,m_a,k_a,n_a,w_hz,p_t_w,capacity_bps,total_power_w,xi_bpj"
    )?;
    writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        fmt(row.speed_kmh),
        fmt(row.distance_km),
        row.mode.label(),
        row.mode.scheme_str(),
        row.mode.m_a,
        row.mode.k_a,
        row.mode.n_a[0],
        fmt(row.op.w_hz),
        fmt(row.op.p_t_w),
        fmt(row.op.capacity_bps),
        fmt(row.op.total_power_w),
        fmt(row.op.xi_bpj),
    )?;
    Ok(())
}
