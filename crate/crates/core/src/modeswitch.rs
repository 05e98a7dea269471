//! Candidate mode enumeration and the two switching procedures.
//!
//! Switching compares the per-mode operating points solved at full
//! bandwidth and picks the most energy-efficient mode. The instant
//! procedure works from one drawn channel set through the transmitter's
//! capacity estimators; the ergodic procedure is fully deterministic and
//! uses the closed-form ergodic estimates (upper bound for block
//! diagonalization), which is what makes offline lookup tables possible.

use crate::channel::{doppler_params, large_scale_gain, ChannelSet, LinkStats, Scenario, UserLink};
use crate::ergodic::{ergodic_bd_upper, ergodic_su};
use crate::error::{Error, Result};
use crate::linkcap::{
    precode_for_mode, profile_bd_estimate, profile_bd_realized, profile_svd_estimate,
    profile_svd_realized, BdEstimate, Mode, PrecodeResult, RateProfile, Scheme,
};
use crate::numerics::ConcaveFn;
use crate::optimizer::{solve_operating_point, OperatingPoint};
use crate::power::PowerModel;
use crate::real::Real;

/// How a candidate list was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogSource {
    /// The canonical seven-mode list (four single-user, three
    /// block-diagonalization modes), feasibility-filtered.
    Canonical,
    /// Every feasible mode for the system dimensions.
    Exhaustive,
    UserSupplied,
}

/// A nonempty list of candidate modes.
#[derive(Debug, Clone)]
pub struct ModeCatalog {
    pub modes: Vec<Mode>,
    pub source: CatalogSource,
}

impl ModeCatalog {
    /// Wrap a user-provided list, validating every mode against the
    /// system dimensions.
    pub fn from_modes(modes: Vec<Mode>, m: usize, n: usize, k: usize) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::Config("mode catalog must not be empty".into()));
        }
        for mode in &modes {
            mode.validate(m, n, k)?;
        }
        Ok(Self {
            modes,
            source: CatalogSource::UserSupplied,
        })
    }
}

/// Enumerate candidate modes for a system with `m` transmit antennas,
/// `n` antennas per user and `k` users.
pub fn enumerate_modes(m: usize, n: usize, k: usize, source: CatalogSource) -> Result<ModeCatalog> {
    if m == 0 || n == 0 || k == 0 {
        return Err(Error::Domain("system dimensions must be >= 1".into()));
    }
    let mut modes = Vec::new();
    match source {
        CatalogSource::Canonical => {
            for m_a in [1usize, 2, 4, 6] {
                if m_a <= m {
                    modes.push(Mode::svd(m_a, n));
                }
            }
            for (m_a, k_a) in [(4usize, 2usize), (6, 2), (6, 3)] {
                if m_a <= m && k_a <= k && m_a >= k_a * n {
                    modes.push(Mode::bd(m_a, k_a, n));
                }
            }
        }
        CatalogSource::Exhaustive => {
            for m_a in 1..=m {
                modes.push(Mode::svd(m_a, n));
            }
            for k_a in 2..=k {
                for m_a in (k_a * n)..=m {
                    modes.push(Mode::bd(m_a, k_a, n));
                }
            }
        }
        CatalogSource::UserSupplied => {
            return Err(Error::Config(
                "build user-supplied catalogs with ModeCatalog::from_modes".into(),
            ));
        }
    }
    if modes.is_empty() {
        return Err(Error::InfeasibleMode(format!(
            "no feasible modes for system ({m}, {n}, {k})"
        )));
    }
    Ok(ModeCatalog { modes, source })
}

/// Which capacity estimate drives the transmit-power solve.
///
/// Single-user modes always use the direct delayed-value estimate; the
/// choice distinguishes the block-diagonalization estimators. `Optimal`
/// solves against the realized delayed-knowledge capacity itself (a
/// genie baseline).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimator {
    Zhang,
    Lower,
    Upper,
    Optimal,
}

impl Estimator {
    pub fn as_str(self) -> &'static str {
        match self {
            Estimator::Zhang => "zhang",
            Estimator::Lower => "lower",
            Estimator::Upper => "upper",
            Estimator::Optimal => "optimal",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "zhang" => Ok(Estimator::Zhang),
            "lower" => Ok(Estimator::Lower),
            "upper" => Ok(Estimator::Upper),
            "optimal" => Ok(Estimator::Optimal),
            other => Err(Error::Config(format!(
                "unknown estimator '{other}' (expected zhang|lower|upper|optimal)"
            ))),
        }
    }
}

/// The switching outcome: the chosen mode and its operating point, the
/// efficiency of every feasible candidate, and the candidates that were
/// skipped with the reason.
#[derive(Debug, Clone)]
pub struct SwitchDecision<T> {
    pub mode: Mode,
    pub op: OperatingPoint<T>,
    pub per_mode_xi: Vec<(Mode, T)>,
    pub skipped: Vec<(Mode, String)>,
}

/// Capacity-versus-power profile of one mode on one channel drop, under
/// the chosen estimator.
pub fn instant_capacity_profile<T: Real>(
    set: &ChannelSet<T>,
    mode: &Mode,
    pre: &PrecodeResult<T>,
    estimator: Estimator,
    w: T,
    n0: T,
) -> Result<RateProfile<T>> {
    match mode.scheme {
        Scheme::Svd => {
            let link = &set.links[mode.user_indices[0]];
            let n_s = mode.n_streams();
            match estimator {
                Estimator::Optimal => {
                    let h = link.scaled_current(mode.n_a[0], mode.m_a);
                    profile_svd_realized(&h, &pre.precoders[0], w, n0, n_s)
                }
                _ => {
                    let h = link.scaled_delayed(mode.n_a[0], mode.m_a);
                    profile_svd_estimate(&h, w, n0, n_s)
                }
            }
        }
        Scheme::Bd => match estimator {
            Estimator::Optimal => {
                let links: Vec<&UserLink<T>> =
                    mode.user_indices.iter().map(|&u| &set.links[u]).collect();
                profile_bd_realized(&links, pre, w, n0, mode)
            }
            _ => {
                let stats: Vec<LinkStats<T>> = mode
                    .user_indices
                    .iter()
                    .map(|&u| set.links[u].stats())
                    .collect();
                let which = match estimator {
                    Estimator::Zhang => BdEstimate::Zhang,
                    Estimator::Lower => BdEstimate::Lower,
                    _ => BdEstimate::Upper,
                };
                profile_bd_estimate(pre, w, n0, mode, &stats, which)
            }
        },
    }
}

/// Solve one mode's operating point from a channel drop.
pub fn solve_mode_instant<T: Real>(
    set: &ChannelSet<T>,
    mode: &Mode,
    pm: &PowerModel<T>,
    scenario: &Scenario<T>,
    estimator: Estimator,
) -> Result<OperatingPoint<T>> {
    let pre = precode_for_mode(set, mode)?;
    let profile = instant_capacity_profile(
        set,
        mode,
        &pre,
        estimator,
        scenario.w_max_hz,
        scenario.noise_density_w_per_hz,
    )?;
    let capacity = profile.concave_fn();
    solve_operating_point(mode, &capacity, pm, scenario)
}

/// Solve one mode's ergodic operating point (no channel draws).
pub fn solve_mode_ergodic<T: Real>(
    mode: &Mode,
    scenario: &Scenario<T>,
    pm: &PowerModel<T>,
    distance_km: T,
    speed_kmh: T,
) -> Result<OperatingPoint<T>> {
    let zeta = large_scale_gain(distance_km, scenario)?;
    let (_, eps_sq) = doppler_params(speed_kmh, scenario);
    let stats = LinkStats { zeta, eps_sq };
    let w = scenario.w_max_hz;
    let n0 = scenario.noise_density_w_per_hz;
    match mode.scheme {
        Scheme::Svd => {
            ergodic_su(mode, &stats, T::one(), w, n0)?;
            let mode_c = mode.clone();
            let f = ConcaveFn::from_eval(move |p: T| {
                ergodic_su(&mode_c, &stats, p, w, n0).expect("mode validated")
            });
            solve_operating_point(mode, &f, pm, scenario)
        }
        Scheme::Bd => {
            let all = vec![stats; mode.k_a];
            ergodic_bd_upper(mode, &all, T::one(), w, n0)?;
            let mode_c = mode.clone();
            let f = ConcaveFn::from_eval(move |p: T| {
                ergodic_bd_upper(&mode_c, &all, p, w, n0).expect("mode validated")
            });
            solve_operating_point(mode, &f, pm, scenario)
        }
    }
}

fn better<T: Real>(xi: T, mode: &Mode, best_xi: T, best: &Mode) -> bool {
    if xi > best_xi {
        return true;
    }
    if xi < best_xi {
        return false;
    }
    // exact tie: fewer active antennas, then fewer users
    (mode.m_a, mode.k_a) < (best.m_a, best.k_a)
}

fn pick_best<T: Real>(
    evaluated: Vec<(Mode, OperatingPoint<T>)>,
    skipped: Vec<(Mode, String)>,
) -> Result<SwitchDecision<T>> {
    let mut best: Option<(Mode, OperatingPoint<T>)> = None;
    let mut per_mode_xi = Vec::with_capacity(evaluated.len());
    for (mode, op) in evaluated {
        per_mode_xi.push((mode.clone(), op.xi_bpj));
        match &best {
            None => best = Some((mode, op)),
            Some((bm, bop)) => {
                if better(op.xi_bpj, &mode, bop.xi_bpj, bm) {
                    best = Some((mode, op));
                }
            }
        }
    }
    let (mode, op) = best.ok_or_else(|| {
        Error::InfeasibleMode(format!(
            "no feasible mode in catalog ({} skipped)",
            skipped.len()
        ))
    })?;
    Ok(SwitchDecision {
        mode,
        op,
        per_mode_xi,
        skipped,
    })
}

/// Instant-knowledge mode switching over one channel drop.
pub fn select_mode_instant<T: Real>(
    catalog: &ModeCatalog,
    set: &ChannelSet<T>,
    pm: &PowerModel<T>,
    scenario: &Scenario<T>,
    estimator: Estimator,
) -> Result<SwitchDecision<T>> {
    let mut evaluated = Vec::new();
    let mut skipped = Vec::new();
    for mode in &catalog.modes {
        if let Err(e) = mode.validate(set.m, set.n, set.links.len()) {
            skipped.push((mode.clone(), e.to_string()));
            continue;
        }
        match solve_mode_instant(set, mode, pm, scenario, estimator) {
            Ok(op) => evaluated.push((mode.clone(), op)),
            Err(e) => skipped.push((mode.clone(), e.to_string())),
        }
    }
    pick_best(evaluated, skipped)
}

/// Ergodic mode switching for homogeneous users at one
/// (distance, speed) cell. Deterministic.
pub fn select_mode_ergodic<T: Real>(
    catalog: &ModeCatalog,
    scenario: &Scenario<T>,
    pm: &PowerModel<T>,
    distance_km: T,
    speed_kmh: T,
) -> Result<SwitchDecision<T>> {
    let mut evaluated = Vec::new();
    let mut skipped = Vec::new();
    for mode in &catalog.modes {
        match solve_mode_ergodic(mode, scenario, pm, distance_km, speed_kmh) {
            Ok(op) => evaluated.push((mode.clone(), op)),
            Err(e) => skipped.push((mode.clone(), e.to_string())),
        }
    }
    pick_best(evaluated, skipped)
}

/// One lookup-table entry.
#[derive(Debug, Clone)]
pub struct LookupRow<T> {
    pub speed_kmh: T,
    pub distance_km: T,
    pub mode: Mode,
    pub op: OperatingPoint<T>,
}

/// Ergodic decisions over a (speed, distance) grid, in grid order.
pub fn build_lookup_table<T: Real>(
    catalog: &ModeCatalog,
    grid: &[(T, T)],
    pm: &PowerModel<T>,
    scenario: &Scenario<T>,
) -> Result<Vec<LookupRow<T>>> {
    if grid.is_empty() {
        return Err(Error::Domain("lookup grid must not be empty".into()));
    }
    let mut rows = Vec::with_capacity(grid.len());
    for &(speed, distance) in grid {
        let decision = select_mode_ergodic(catalog, scenario, pm, distance, speed)?;
        rows.push(LookupRow {
            speed_kmh: speed,
            distance_km: distance,
            mode: decision.mode,
            op: decision.op,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::draw_channel_set;

    #[test]
    fn canonical_catalog_for_standard_system() {
        let cat = enumerate_modes(6, 2, 3, CatalogSource::Canonical).unwrap();
        let labels: Vec<String> = cat.modes.iter().map(|m| m.label()).collect();
        assert_eq!(
            labels,
            vec![
                "SIMO",
                "SU-MIMO(2,2)",
                "SU-MIMO(4,2)",
                "SU-MIMO(6,2)",
                "MU-MIMO(4,2,2)",
                "MU-MIMO(6,2,2)",
                "MU-MIMO(6,2,3)",
            ]
        );
    }

    #[test]
    fn exhaustive_catalog_sizes() {
        let single = enumerate_modes(1, 1, 1, CatalogSource::Exhaustive).unwrap();
        assert_eq!(single.modes.len(), 1);
        assert_eq!(single.modes[0], Mode::svd(1, 1));

        let small = enumerate_modes(4, 2, 2, CatalogSource::Exhaustive).unwrap();
        assert_eq!(small.modes.len(), 5); // four single-user + one BD
    }

    #[test]
    fn single_mode_catalog_returned_directly() {
        let cat = ModeCatalog::from_modes(vec![Mode::svd(2, 2)], 6, 2, 3).unwrap();
        let sc = Scenario::<f64>::homogeneous(1.0, 3);
        let pm = PowerModel::default();
        let set = draw_channel_set(&sc, 6, 2, 1).unwrap();
        let d = select_mode_instant(&cat, &set, &pm, &sc, Estimator::Upper).unwrap();
        assert_eq!(d.mode, Mode::svd(2, 2));
        assert_eq!(d.per_mode_xi.len(), 1);
    }

    #[test]
    fn per_mode_xi_counts_feasible_modes() {
        let cat = enumerate_modes(6, 2, 3, CatalogSource::Canonical).unwrap();
        let sc = Scenario::<f64>::homogeneous(1.0, 3);
        let pm = PowerModel::default();
        let set = draw_channel_set(&sc, 6, 2, 2).unwrap();
        let d = select_mode_instant(&cat, &set, &pm, &sc, Estimator::Upper).unwrap();
        assert_eq!(d.per_mode_xi.len(), 7);
        assert!(d.skipped.is_empty());
        let best = d
            .per_mode_xi
            .iter()
            .map(|(_, xi)| *xi)
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(d.op.xi_bpj, best);
    }

    #[test]
    fn infeasible_modes_are_skipped_not_fatal() {
        let cat = ModeCatalog {
            modes: vec![Mode::svd(8, 2), Mode::svd(2, 2)],
            source: CatalogSource::UserSupplied,
        };
        let sc = Scenario::<f64>::homogeneous(1.0, 3);
        let pm = PowerModel::default();
        let set = draw_channel_set(&sc, 6, 2, 3).unwrap();
        let d = select_mode_instant(&cat, &set, &pm, &sc, Estimator::Lower).unwrap();
        assert_eq!(d.mode, Mode::svd(2, 2));
        assert_eq!(d.skipped.len(), 1);
    }

    #[test]
    fn perfect_csit_decision_matches_realized_oracle() {
        // one user, zero speed: the estimates coincide with the realized
        // capacities, so the decision must match a brute-force argmax of
        // the realized efficiencies
        let mut sc = Scenario::<f64>::homogeneous(1.0, 1);
        sc.speed_kmh = 0.0;
        let pm = PowerModel::default();
        let cat = enumerate_modes(6, 2, 1, CatalogSource::Exhaustive).unwrap();
        for seed in 0..5 {
            let set = draw_channel_set(&sc, 6, 2, seed).unwrap();
            let d = select_mode_instant(&cat, &set, &pm, &sc, Estimator::Lower).unwrap();

            let mut best: Option<(Mode, f64)> = None;
            for mode in &cat.modes {
                let op = solve_mode_instant(&set, mode, &pm, &sc, Estimator::Optimal).unwrap();
                match &best {
                    None => best = Some((mode.clone(), op.xi_bpj)),
                    Some((_, bxi)) if op.xi_bpj > *bxi => best = Some((mode.clone(), op.xi_bpj)),
                    _ => {}
                }
            }
            assert_eq!(d.mode, best.unwrap().0, "seed {seed}");
        }
    }

    #[test]
    fn ergodic_decision_is_deterministic() {
        let cat = enumerate_modes(6, 2, 3, CatalogSource::Canonical).unwrap();
        let sc = Scenario::<f64>::default();
        let pm = PowerModel::default();
        let a = select_mode_ergodic(&cat, &sc, &pm, 1.0, 30.0).unwrap();
        let b = select_mode_ergodic(&cat, &sc, &pm, 1.0, 30.0).unwrap();
        assert_eq!(a.mode, b.mode);
        assert_eq!(a.op.xi_bpj.to_bits(), b.op.xi_bpj.to_bits());
        for ((_, x), (_, y)) in a.per_mode_xi.iter().zip(&b.per_mode_xi) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn low_speed_prefers_three_user_bd() {
        let cat = enumerate_modes(6, 2, 3, CatalogSource::Canonical).unwrap();
        let sc = Scenario::<f64>::default();
        let pm = PowerModel::default();
        let d = select_mode_ergodic(&cat, &sc, &pm, 1.0, 3.0).unwrap();
        assert_eq!(d.mode.scheme, Scheme::Bd, "chose {}", d.mode.label());
        assert_eq!(d.mode.k_a, 3, "chose {}", d.mode.label());
    }

    #[test]
    fn lookup_table_matches_pointwise_decisions() {
        let cat = enumerate_modes(6, 2, 3, CatalogSource::Canonical).unwrap();
        let sc = Scenario::<f64>::default();
        let pm = PowerModel::default();
        let grid = vec![(3.0, 1.0), (120.0, 1.0)];
        let rows = build_lookup_table(&cat, &grid, &pm, &sc).unwrap();
        assert_eq!(rows.len(), 2);
        for (row, &(speed, dist)) in rows.iter().zip(&grid) {
            let d = select_mode_ergodic(&cat, &sc, &pm, dist, speed).unwrap();
            assert_eq!(row.mode, d.mode);
            assert_eq!(row.speed_kmh, speed);
            assert_eq!(row.distance_km, dist);
        }
    }
}
