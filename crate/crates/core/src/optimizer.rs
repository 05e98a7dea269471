//! Per-mode optimal bandwidth and transmit power.
//!
//! With the capacity strictly concave and increasing in either variable,
//! both optima are instances of the ratio fixed point solved by
//! [`maximize_ratio`]: bandwidth against the bandwidth-proportional
//! power terms, transmit power against the conversion efficiency and the
//! static-plus-dynamic overhead,
//!
//! ```text
//! P_t* = R(P_t*) / R'(P_t*) - eta (P_sta + P_dyn).
//! ```
//!
//! The efficiency itself is monotone in bandwidth once transmit power is
//! free to scale, so operating points are solved at the full available
//! bandwidth and only the transmit power fixed point runs per mode.

use crate::channel::Scenario;
use crate::error::{Error, Result};
use crate::linkcap::Mode;
use crate::numerics::{maximize_ratio, ConcaveFn, SolverConfig};
use crate::power::PowerModel;
use crate::real::Real;

/// The solved optimum for one mode: bandwidth, transmit power, the
/// capacity estimate used in the solve, total consumed power and the
/// resulting bits-per-Joule efficiency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint<T> {
    pub w_hz: T,
    pub p_t_w: T,
    pub capacity_bps: T,
    pub total_power_w: T,
    pub xi_bpj: T,
}

fn power_solver_config<T: Real>() -> SolverConfig<T> {
    SolverConfig {
        bracket_hi: T::lit(1e4),
        ..SolverConfig::default()
    }
}

/// Optimal bandwidth at fixed transmit power, clamped to `w_max`.
///
/// The ratio coefficients are the bandwidth-proportional power slope
/// `a = m_a p_sp_bw + p_ac_bw` and the bandwidth-independent floor
/// `b = p_t / eta + p_sta + m_a p_cir`. A capacity growing linearly in
/// bandwidth has no interior optimum; the efficiency is then increasing
/// and the full bandwidth is returned.
pub fn optimal_bandwidth_fixed_pt<T: Real>(
    r_of_w: &ConcaveFn<'_, T>,
    p_t: T,
    m_a: usize,
    pm: &PowerModel<T>,
    w_max: T,
) -> Result<T> {
    if !w_max.is_finite() || w_max <= T::zero() {
        return Err(Error::Domain("w_max must be > 0".into()));
    }
    let a = T::of_usize(m_a) * pm.p_sp_bw_w_per_hz + pm.p_ac_bw_w_per_hz;
    let b = p_t / pm.eta + pm.p_sta_w + T::of_usize(m_a) * pm.p_cir_w;
    if a == T::zero() {
        // No bandwidth cost at all: more bandwidth never hurts.
        return Ok(w_max);
    }
    let cfg = SolverConfig {
        bracket_hi: w_max,
        ..SolverConfig::default()
    };
    match maximize_ratio(r_of_w, a, b, &cfg) {
        Ok((w_star, _)) => Ok(w_star.min(w_max)),
        Err(Error::NoOptimum) => Ok(w_max),
        Err(e) => Err(e),
    }
}

/// Optimal transmit power at fixed bandwidth via the fixed point
/// `P* = R/R' - eta (P_sta + P_dyn)`.
///
/// A capacity that is nonpositive everywhere (a clamped estimate) yields
/// `P* = 0`.
pub fn optimal_power_fixed_pt<T: Real>(
    r_of_pt: &ConcaveFn<'_, T>,
    w: T,
    m_a: usize,
    pm: &PowerModel<T>,
) -> Result<T> {
    let cfg = power_solver_config::<T>();
    if capacity_nonpositive(r_of_pt, cfg.bracket_hi) {
        return Ok(T::zero());
    }
    let a = T::one() / pm.eta;
    let b = pm.overhead(m_a, w);
    let (p_star, _) = maximize_ratio(r_of_pt, a, b, &cfg)?;
    Ok(p_star)
}

fn capacity_nonpositive<T: Real>(f: &ConcaveFn<'_, T>, hi: T) -> bool {
    if f.eval(T::zero()) > T::zero() {
        return false;
    }
    let lo = hi * T::lit(1e-7);
    let step = (hi / lo).ln() / T::lit(15.0);
    for i in 0..16 {
        let x = lo * (step * T::of_usize(i)).exp();
        if f.eval(x) > T::zero() {
            return false;
        }
    }
    true
}

/// Deterministic grid-plus-golden-section search of the efficiency, used
/// when the bound estimate driving a solve is not concave (the
/// rate-loss-difference estimate can lose concavity under strong
/// interference).
fn grid_search_power<T: Real>(
    capacity: &ConcaveFn<'_, T>,
    w: T,
    m_a: usize,
    pm: &PowerModel<T>,
) -> T {
    let xi = |p: T| capacity.eval(p).max(T::zero()) / pm.total_power(p, m_a, w);
    let lo = T::lit(1e-3);
    let hi = T::lit(1e4);
    let n = 512usize;
    let step = (hi / lo).ln() / T::of_usize(n - 1);
    let mut best_idx = 0usize;
    let mut best = xi(T::zero());
    let mut best_p = T::zero();
    for i in 0..n {
        let p = lo * (step * T::of_usize(i)).exp();
        let v = xi(p);
        if v > best {
            best = v;
            best_p = p;
            best_idx = i;
        }
    }
    if best_p == T::zero() {
        return T::zero();
    }
    // golden-section refinement between the grid neighbors
    let mut a = if best_idx == 0 {
        T::zero()
    } else {
        lo * (step * T::of_usize(best_idx - 1)).exp()
    };
    let mut b = lo * (step * T::of_usize((best_idx + 1).min(n - 1))).exp();
    let inv_phi = T::lit(0.618_033_988_749_894_8);
    let mut x1 = b - (b - a) * inv_phi;
    let mut x2 = a + (b - a) * inv_phi;
    let mut f1 = xi(x1);
    let mut f2 = xi(x2);
    for _ in 0..96 {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - (b - a) * inv_phi;
            f1 = xi(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + (b - a) * inv_phi;
            f2 = xi(x2);
        }
    }
    let mid = (a + b) / T::lit(2.0);
    if xi(mid) >= best {
        mid
    } else {
        best_p
    }
}

/// Solve one mode's operating point at the full available bandwidth.
///
/// The capacity argument is any of the instantaneous or ergodic
/// estimators bound to `W = w_max`. Nonpositive capacity at the solution
/// degenerates to a zero-power, zero-efficiency point.
pub fn solve_operating_point<T: Real>(
    mode: &Mode,
    capacity: &ConcaveFn<'_, T>,
    pm: &PowerModel<T>,
    scenario: &Scenario<T>,
) -> Result<OperatingPoint<T>> {
    scenario.validate()?;
    mode.check_internal()?;
    let w = scenario.w_max_hz;
    let p_t = match optimal_power_fixed_pt(capacity, w, mode.m_a, pm) {
        Ok(p) => p,
        Err(Error::NotConcave(_)) | Err(Error::NoOptimum) => {
            grid_search_power(capacity, w, mode.m_a, pm)
        }
        Err(e) => return Err(e),
    };
    Ok(operating_point_at(capacity, p_t, w, mode.m_a, pm))
}

/// Assemble the consistent (capacity, total power, efficiency) triple at
/// a given transmit power, clamping nonpositive capacity to the
/// zero-power point.
pub fn operating_point_at<T: Real>(
    capacity: &ConcaveFn<'_, T>,
    p_t: T,
    w: T,
    m_a: usize,
    pm: &PowerModel<T>,
) -> OperatingPoint<T> {
    let cap = capacity.eval(p_t);
    if !cap.is_finite() || cap <= T::zero() {
        let total = pm.total_power(T::zero(), m_a, w);
        return OperatingPoint {
            w_hz: w,
            p_t_w: T::zero(),
            capacity_bps: T::zero(),
            total_power_w: total,
            xi_bpj: T::zero(),
        };
    }
    let total = pm.total_power(p_t, m_a, w);
    OperatingPoint {
        w_hz: w,
        p_t_w: p_t,
        capacity_bps: cap,
        total_power_w: total,
        xi_bpj: cap / total,
    }
}
