//! Three-part base-station power model.
//!
//! Total consumption splits into power-conversion (transmit power over
//! the conversion efficiency), dynamic power (circuit power per active
//! antenna plus bandwidth-dependent signal-processing terms) and a
//! static floor:
//!
//! ```text
//! P_total = P_t / eta + M_a P_cir + p_ac_bw W + M_a p_sp_bw W + P_sta
//! ```

use crate::real::Real;

/// The five constants of the power model. Defaults follow a macro-cell
/// parameterization: `eta = 0.38`, `P_cir = 66.4 W`, `p_sp_bw = 3.32 uW/Hz`,
/// `p_ac_bw = 1.82 uW/Hz`, `P_sta = 36.4 W`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerModel<T> {
    /// Power conversion efficiency (amplifier, feeder, cooling), in (0, 1].
    pub eta: T,
    /// Circuit power per active transmit antenna, watts.
    pub p_cir_w: T,
    /// Signal-processing power per Hz per active antenna, W/Hz.
    pub p_sp_bw_w_per_hz: T,
    /// Bandwidth-proportional power independent of antenna count, W/Hz.
    pub p_ac_bw_w_per_hz: T,
    /// Static power floor, watts.
    pub p_sta_w: T,
}

impl<T: Real> Default for PowerModel<T> {
    fn default() -> Self {
        Self {
            eta: T::lit(0.38),
            p_cir_w: T::lit(66.4),
            p_sp_bw_w_per_hz: T::lit(3.32e-6),
            p_ac_bw_w_per_hz: T::lit(1.82e-6),
            p_sta_w: T::lit(36.4),
        }
    }
}

impl<T: Real> PowerModel<T> {
    /// Transmit-power-independent consumption that scales with the active
    /// antenna count and bandwidth.
    pub fn dynamic_power(&self, m_a: usize, w_hz: T) -> T {
        let ma = T::of_usize(m_a);
        ma * self.p_cir_w + self.p_ac_bw_w_per_hz * w_hz + ma * self.p_sp_bw_w_per_hz * w_hz
    }

    /// Total consumed power for transmit power `p_t_w`, `m_a` active
    /// antennas and bandwidth `w_hz`.
    pub fn total_power(&self, p_t_w: T, m_a: usize, w_hz: T) -> T {
        p_t_w / self.eta + self.dynamic_power(m_a, w_hz) + self.p_sta_w
    }

    /// Overhead seen by the transmit-power optimization: everything except
    /// the power-conversion part.
    pub fn overhead(&self, m_a: usize, w_hz: T) -> T {
        self.dynamic_power(m_a, w_hz) + self.p_sta_w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn dynamic_power_defaults() {
        let pm = PowerModel::<f64>::default();
        // 6 * 66.4 + 1.82e-6 * 5e6 + 6 * 3.32e-6 * 5e6 = 398.4 + 9.1 + 99.6
        assert_relative_eq!(pm.dynamic_power(6, 5e6), 507.1, max_relative = 1e-12);
        assert_relative_eq!(pm.dynamic_power(1, 0.0), 66.4, max_relative = 1e-12);
    }

    #[test]
    fn total_power_defaults() {
        let pm = PowerModel::<f64>::default();
        assert_relative_eq!(
            pm.total_power(10.0, 6, 5e6),
            569.8157894736842,
            epsilon = 1e-3
        );
        assert_relative_eq!(pm.total_power(0.0, 6, 5e6), 543.5, max_relative = 1e-12);
        assert_relative_eq!(
            pm.total_power(10.0, 1, 5e6),
            154.8157894736842,
            epsilon = 1e-3
        );
    }

    #[test]
    fn transmit_term_separates_exactly() {
        let pm = PowerModel::<f64>::default();
        for &p in &[0.5, 7.25, 123.0] {
            let delta = pm.total_power(p, 4, 3e6) - pm.total_power(0.0, 4, 3e6);
            assert_relative_eq!(delta, p / pm.eta, max_relative = 1e-12);
        }
    }

    proptest::proptest! {
        // affine in w at fixed antenna count: dyn(2w) - dyn(w) = dyn(w) - dyn(0)
        #[test]
        fn affine_in_bandwidth(w in 0.0f64..1e7, m_a in 1usize..8) {
            let pm = PowerModel::<f64>::default();
            let d0 = pm.dynamic_power(m_a, 0.0);
            let d1 = pm.dynamic_power(m_a, w);
            let d2 = pm.dynamic_power(m_a, 2.0 * w);
            proptest::prop_assert!(((d2 - d1) - (d1 - d0)).abs() <= 1e-9 * d2.abs().max(1.0));
        }

        // second differences in p_t vanish exactly
        #[test]
        fn affine_in_transmit_power(p in 0.0f64..1e4) {
            let pm = PowerModel::<f64>::default();
            let f = |p: f64| pm.total_power(p, 3, 5e6);
            let second = f(p + 2.0) - 2.0 * f(p + 1.0) + f(p);
            proptest::prop_assert!(second.abs() < 1e-9);
        }
    }
}
