//! Monte Carlo sweeps, configuration and file emission.

mod config;
mod csv;
mod plot;

pub use config::{load_config, parse_config, RunConfig};
pub use csv::{write_mode_map_csv, write_single_csv, write_sweep_csv};
pub use plot::emit_plot;

use rayon::prelude::*;

use crate::channel::{draw_channel_set, Scenario};
use crate::error::{Error, Result};
use crate::linkcap::{precode_for_mode, Mode};
use crate::modeswitch::{
    build_lookup_table, instant_capacity_profile, solve_mode_ergodic, Estimator, LookupRow,
    ModeCatalog,
};
use crate::optimizer::{operating_point_at, solve_operating_point};

/// One aggregated sweep cell.
#[derive(Debug, Clone)]
pub struct SweepRow {
    /// Value of the swept variable (speed in km/h for the speed sweeps).
    pub sweep_value: f64,
    pub mode_label: String,
    pub estimator: &'static str,
    /// Mean achieved efficiency, bits/J.
    pub mean_xi: f64,
    /// Standard error of the mean efficiency.
    pub se_xi: f64,
    /// Mean solved transmit power, W.
    pub mean_p_t: f64,
    /// Mean realized capacity at the solved power, bits/s.
    pub mean_capacity: f64,
    pub feasible: bool,
}

/// Rows of one sweep, in deterministic emission order.
#[derive(Debug, Clone)]
pub struct SweepResult {
    /// Name of the swept variable (CSV header of the first column).
    pub sweep_name: &'static str,
    pub rows: Vec<SweepRow>,
}

fn scenario_at(cfg: &RunConfig, distance_km: f64, speed_kmh: f64) -> Scenario<f64> {
    Scenario {
        distances_km: vec![distance_km; cfg.k],
        speed_kmh,
        ..cfg.scenario.clone()
    }
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Per-trial outcome of one (mode, estimator) pair.
#[derive(Clone, Copy)]
struct TrialPoint {
    xi: f64,
    p_t: f64,
    capacity: f64,
}

/// Solve each feasible mode under each requested estimator on `trials`
/// channel drops per speed, reporting the achieved efficiency (realized
/// delayed-knowledge capacity at the solved transmit power over the
/// total consumed power).
fn sweep_speeds_with(
    cfg: &RunConfig,
    speeds: &[f64],
    distance_km: f64,
    modes: &ModeCatalog,
    estimators: &[Estimator],
) -> Result<SweepResult> {
    if speeds.is_empty() {
        return Err(Error::Domain("speed sweep needs at least one speed".into()));
    }
    if cfg.trials == 0 {
        return Err(Error::Config("trials must be >= 1".into()));
    }
    let mut rows = Vec::new();
    for &speed in speeds {
        let scenario = scenario_at(cfg, distance_km, speed);
        scenario.validate()?;
        let feasible: Vec<&Mode> = modes
            .modes
            .iter()
            .filter(|m| m.validate(cfg.m, cfg.n, cfg.k).is_ok())
            .collect();

        // trial-major evaluation; per-trial derived seeds keep the
        // aggregation independent of worker scheduling
        let per_trial: Vec<Vec<TrialPoint>> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| -> Result<Vec<TrialPoint>> {
                let set = draw_channel_set(&scenario, cfg.m, cfg.n, cfg.seed ^ t as u64)?;
                let mut out = Vec::with_capacity(feasible.len() * estimators.len());
                for mode in &feasible {
                    let pre = precode_for_mode(&set, mode)?;
                    let realized = instant_capacity_profile(
                        &set,
                        mode,
                        &pre,
                        Estimator::Optimal,
                        scenario.w_max_hz,
                        scenario.noise_density_w_per_hz,
                    )?;
                    for &est in estimators {
                        let profile = instant_capacity_profile(
                            &set,
                            mode,
                            &pre,
                            est,
                            scenario.w_max_hz,
                            scenario.noise_density_w_per_hz,
                        )?;
                        let op = solve_operating_point(
                            mode,
                            &profile.concave_fn(),
                            &cfg.power,
                            &scenario,
                        )?;
                        let achieved = operating_point_at(
                            &realized.concave_fn(),
                            op.p_t_w,
                            scenario.w_max_hz,
                            mode.m_a,
                            &cfg.power,
                        );
                        out.push(TrialPoint {
                            xi: achieved.xi_bpj,
                            p_t: op.p_t_w,
                            capacity: achieved.capacity_bps,
                        });
                    }
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;

        for mode in &modes.modes {
            let fi = feasible.iter().position(|m| *m == mode);
            for (ei, est) in estimators.iter().enumerate() {
                match fi {
                    Some(fi) => {
                        let idx = fi * estimators.len() + ei;
                        let xis: Vec<f64> = per_trial.iter().map(|t| t[idx].xi).collect();
                        let ps: Vec<f64> = per_trial.iter().map(|t| t[idx].p_t).collect();
                        let caps: Vec<f64> = per_trial.iter().map(|t| t[idx].capacity).collect();
                        let (mean_xi, se_xi) = mean_and_se(&xis);
                        rows.push(SweepRow {
                            sweep_value: speed,
                            mode_label: mode.label(),
                            estimator: est.as_str(),
                            mean_xi,
                            se_xi,
                            mean_p_t: mean_and_se(&ps).0,
                            mean_capacity: mean_and_se(&caps).0,
                            feasible: true,
                        });
                    }
                    None => rows.push(SweepRow {
                        sweep_value: speed,
                        mode_label: mode.label(),
                        estimator: est.as_str(),
                        mean_xi: 0.0,
                        se_xi: 0.0,
                        mean_p_t: 0.0,
                        mean_capacity: 0.0,
                        feasible: false,
                    }),
                }
            }
        }
    }
    Ok(SweepResult {
        sweep_name: "speed_kmh",
        rows,
    })
}

/// Mean achieved efficiency of every mode across speeds under the
/// configured estimator.
pub fn run_speed_sweep(
    cfg: &RunConfig,
    speeds_kmh: &[f64],
    distance_km: f64,
    modes: &ModeCatalog,
) -> Result<SweepResult> {
    sweep_speeds_with(cfg, speeds_kmh, distance_km, modes, &[cfg.estimator])
}

/// The same sweep with all four estimators side by side.
pub fn run_estimator_comparison(
    cfg: &RunConfig,
    speeds_kmh: &[f64],
    distance_km: f64,
    modes: &ModeCatalog,
) -> Result<SweepResult> {
    sweep_speeds_with(
        cfg,
        speeds_kmh,
        distance_km,
        modes,
        &[
            Estimator::Zhang,
            Estimator::Lower,
            Estimator::Upper,
            Estimator::Optimal,
        ],
    )
}

/// Ergodic mode map over a (speed, distance) grid, speed-major.
pub fn run_mode_map(
    cfg: &RunConfig,
    speeds_kmh: &[f64],
    distances_km: &[f64],
    modes: &ModeCatalog,
) -> Result<Vec<LookupRow<f64>>> {
    if speeds_kmh.is_empty() || distances_km.is_empty() {
        return Err(Error::Domain(
            "mode map needs nonempty speed and distance grids".into(),
        ));
    }
    let mut grid = Vec::with_capacity(speeds_kmh.len() * distances_km.len());
    for &s in speeds_kmh {
        for &d in distances_km {
            grid.push((s, d));
        }
    }
    let scenario = scenario_at(cfg, distances_km[0], speeds_kmh[0]);
    build_lookup_table(modes, &grid, &cfg.power, &scenario)
}

/// Deterministic ergodic operating point of one mode at one
/// (distance, speed) cell.
pub fn run_single(
    cfg: &RunConfig,
    mode: &Mode,
    distance_km: f64,
    speed_kmh: f64,
) -> Result<LookupRow<f64>> {
    mode.validate(cfg.m, cfg.n, cfg.k)?;
    let scenario = scenario_at(cfg, distance_km, speed_kmh);
    let op = solve_mode_ergodic(mode, &scenario, &cfg.power, distance_km, speed_kmh)?;
    Ok(LookupRow {
        speed_kmh,
        distance_km,
        mode: mode.clone(),
        op,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modeswitch::{enumerate_modes, CatalogSource};

    fn tiny_cfg() -> RunConfig {
        RunConfig {
            trials: 8,
            ..RunConfig::default()
        }
    }

    #[test]
    fn sweep_row_bookkeeping() {
        let cfg = tiny_cfg();
        let modes = enumerate_modes(6, 2, 3, CatalogSource::Canonical).unwrap();
        let result = run_speed_sweep(&cfg, &[3.0, 120.0], 1.0, &modes).unwrap();
        assert_eq!(result.rows.len(), 2 * 7);
        assert!(result.rows.iter().all(|r| r.feasible));
        assert!(result.rows.iter().all(|r| r.mean_xi.is_finite()));
    }

    #[test]
    fn estimator_comparison_row_count() {
        let cfg = tiny_cfg();
        let modes = ModeCatalog::from_modes(vec![Mode::bd(6, 3, 2)], 6, 2, 3).unwrap();
        let result = run_estimator_comparison(&cfg, &[30.0], 1.0, &modes).unwrap();
        assert_eq!(result.rows.len(), 4);
        let names: Vec<&str> = result.rows.iter().map(|r| r.estimator).collect();
        assert_eq!(names, vec!["zhang", "lower", "upper", "optimal"]);
    }

    #[test]
    fn sweep_is_seed_deterministic() {
        let cfg = tiny_cfg();
        let modes = ModeCatalog::from_modes(vec![Mode::svd(2, 2)], 6, 2, 3).unwrap();
        let a = run_speed_sweep(&cfg, &[30.0], 1.0, &modes).unwrap();
        let b = run_speed_sweep(&cfg, &[30.0], 1.0, &modes).unwrap();
        assert_eq!(a.rows[0].mean_xi.to_bits(), b.rows[0].mean_xi.to_bits());
        assert_eq!(a.rows[0].se_xi.to_bits(), b.rows[0].se_xi.to_bits());
    }

    #[test]
    fn infeasible_mode_emits_skip_row() {
        let mut cfg = tiny_cfg();
        cfg.m = 4;
        let modes = ModeCatalog {
            modes: vec![Mode::svd(2, 2), Mode::svd(6, 2)],
            source: CatalogSource::UserSupplied,
        };
        let result = run_speed_sweep(&cfg, &[3.0], 1.0, &modes).unwrap();
        assert_eq!(result.rows.len(), 2);
        assert!(result.rows[0].feasible);
        assert!(!result.rows[1].feasible);
    }

    #[test]
    fn mode_map_grid_order() {
        let cfg = tiny_cfg();
        let modes = enumerate_modes(6, 2, 3, CatalogSource::Canonical).unwrap();
        let rows = run_mode_map(&cfg, &[3.0, 120.0], &[0.5, 1.0], &modes).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!((rows[0].speed_kmh, rows[0].distance_km), (3.0, 0.5));
        assert_eq!((rows[1].speed_kmh, rows[1].distance_km), (3.0, 1.0));
        assert_eq!((rows[2].speed_kmh, rows[2].distance_km), (120.0, 0.5));
    }

    #[test]
    fn single_solves_ergodic_point() {
        let cfg = tiny_cfg();
        let row = run_single(&cfg, &Mode::svd(2, 2), 1.0, 30.0).unwrap();
        assert!(row.op.xi_bpj > 0.0);
        assert_eq!(row.op.w_hz, cfg.scenario.w_max_hz);
    }
}
