//! Monte Carlo checks of the estimators against realized capacities and
//! of the offline switching against per-drop decisions.

use rayon::prelude::*;

use bitjoule::channel::{draw_channel_set, Scenario};
use bitjoule::ergodic::ergodic_bd_lower;
use bitjoule::linkcap::{
    bd_capacity_delayed, estimate_bd_lower, estimate_bd_upper, estimate_svd, precode_for_mode,
    svd_capacity, Mode,
};
use bitjoule::modeswitch::{
    enumerate_modes, select_mode_ergodic, select_mode_instant, CatalogSource, Estimator,
};
use bitjoule::power::PowerModel;

const W: f64 = 5e6;

fn scenario(distance: f64, speed: f64, k: usize) -> Scenario<f64> {
    let mut sc = Scenario::homogeneous(distance, k);
    sc.speed_kmh = speed;
    sc
}

/// The delayed-value single-user estimate is unbiased in the mean when
/// the receiver has at least as many antennas as the transmitter.
#[test]
fn svd_estimate_tracks_realized_mean() {
    let sc = scenario(1.0, 60.0, 1);
    let n0 = sc.noise_density_w_per_hz;
    let mode = Mode::svd(2, 2);
    let p_t = 10.0;
    let sums: Vec<(f64, f64)> = (0..10_000u64)
        .into_par_iter()
        .map(|t| {
            let set = draw_channel_set(&sc, 2, 2, 100_000 + t).unwrap();
            let pre = precode_for_mode(&set, &mode).unwrap();
            let h_cur = set.links[0].scaled_current(2, 2);
            let h_del = set.links[0].scaled_delayed(2, 2);
            let realized = svd_capacity(&h_cur, &pre.precoders[0], p_t, W, n0, 2).unwrap();
            let estimated = estimate_svd(&h_del, p_t, W, n0, 2).unwrap();
            (realized, estimated)
        })
        .collect();
    let mean_real = sums.iter().map(|s| s.0).sum::<f64>() / sums.len() as f64;
    let mean_est = sums.iter().map(|s| s.1).sum::<f64>() / sums.len() as f64;
    let rel = (mean_real - mean_est).abs() / mean_est;
    assert!(
        rel < 0.02,
        "realized {mean_real}, estimated {mean_est} (rel {rel:.4})"
    );
}

/// Realized block-diagonalization rate falls between the lower and upper
/// estimates in the mean.
#[test]
fn bd_estimates_bracket_realized_mean() {
    let sc = scenario(1.0, 30.0, 3);
    let n0 = sc.noise_density_w_per_hz;
    let mode = Mode::bd(6, 3, 2);
    let p_t = 10.0;
    let triples: Vec<(f64, f64, f64)> = (0..1000u64)
        .into_par_iter()
        .map(|t| {
            let set = draw_channel_set(&sc, 6, 2, 200_000 + t).unwrap();
            let pre = precode_for_mode(&set, &mode).unwrap();
            let links: Vec<_> = set.links.iter().take(3).collect();
            let stats: Vec<_> = set.links.iter().take(3).map(|l| l.stats()).collect();
            let lower = estimate_bd_lower(&pre, p_t, W, n0, &mode, &stats).unwrap();
            let upper = estimate_bd_upper(&pre, p_t, W, n0, &mode, &stats).unwrap();
            let realized = bd_capacity_delayed(&links, &pre, p_t, W, n0, &mode).unwrap();
            (lower, realized, upper)
        })
        .collect();
    let n = triples.len() as f64;
    let mean = |pick: fn(&(f64, f64, f64)) -> f64| {
        let m = triples.iter().map(pick).sum::<f64>() / n;
        let var = triples
            .iter()
            .map(|t| (pick(t) - m) * (pick(t) - m))
            .sum::<f64>()
            / (n - 1.0);
        (m, (var / n).sqrt())
    };
    let (m_low, s_low) = mean(|t| t.0);
    let (m_real, s_real) = mean(|t| t.1);
    let (m_upp, s_upp) = mean(|t| t.2);
    assert!(
        m_real >= m_low - 2.0 * (s_low + s_real),
        "realized mean {m_real} below lower mean {m_low}"
    );
    assert!(
        m_real <= m_upp + 2.0 * (s_upp + s_real),
        "realized mean {m_real} above upper mean {m_upp}"
    );
}

/// The closed-form ergodic lower bound lands near the Monte Carlo mean
/// of the realized delayed-knowledge rate at low speed.
#[test]
fn ergodic_lower_close_to_monte_carlo() {
    let sc = scenario(1.0, 3.0, 3);
    let n0 = sc.noise_density_w_per_hz;
    let mode = Mode::bd(6, 3, 2);
    let p_t = 10.0;
    let mean: f64 = (0..1000u64)
        .into_par_iter()
        .map(|t| {
            let set = draw_channel_set(&sc, 6, 2, 300_000 + t).unwrap();
            let pre = precode_for_mode(&set, &mode).unwrap();
            let links: Vec<_> = set.links.iter().take(3).collect();
            bd_capacity_delayed(&links, &pre, p_t, W, n0, &mode).unwrap()
        })
        .sum::<f64>()
        / 1000.0;
    let set = draw_channel_set(&sc, 6, 2, 1).unwrap();
    let stats: Vec<_> = set.links.iter().take(3).map(|l| l.stats()).collect();
    let approx = ergodic_bd_lower(&mode, &stats, p_t, W, n0).unwrap();
    let rel = (approx - mean).abs() / mean;
    assert!(
        rel < 0.10,
        "ergodic lower {approx} vs MC mean {mean} (rel {rel:.4})"
    );
}

/// The offline ergodic decision matches the most frequent per-drop
/// decision in the majority of tested (speed, distance) cells.
#[test]
fn ergodic_switching_tracks_modal_instant_decision() {
    let catalog = enumerate_modes(6, 2, 3, CatalogSource::Canonical).unwrap();
    let pm = PowerModel::default();
    let cells = [
        (3.0, 0.5),
        (3.0, 1.0),
        (30.0, 1.0),
        (120.0, 1.0),
        (120.0, 1.5),
        (120.0, 2.5),
    ];
    let mut agree = 0usize;
    for (ci, &(speed, distance)) in cells.iter().enumerate() {
        let sc = scenario(distance, speed, 3);
        let ergodic = select_mode_ergodic(&catalog, &sc, &pm, distance, speed).unwrap();
        let picks: Vec<Mode> = (0..200u64)
            .into_par_iter()
            .map(|t| {
                let set = draw_channel_set(&sc, 6, 2, (ci as u64) * 1000 + t).unwrap();
                select_mode_instant(&catalog, &set, &pm, &sc, Estimator::Upper)
                    .unwrap()
                    .mode
            })
            .collect();
        let modal = catalog
            .modes
            .iter()
            .max_by_key(|m| picks.iter().filter(|p| p == m).count())
            .unwrap();
        let count = picks.iter().filter(|p| *p == modal).count();
        println!(
            "cell v={speed} d={distance}: ergodic {} vs modal instant {} ({count}/200)",
            ergodic.mode.label(),
            modal.label()
        );
        if ergodic.mode == *modal {
            agree += 1;
        }
    }
    assert!(
        agree >= 4,
        "ergodic matched modal instant in only {agree}/6 cells"
    );
}
