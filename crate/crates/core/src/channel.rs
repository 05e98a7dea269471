//! Large-scale gains and Doppler-correlated (current, delayed) channel pairs.
//!
//! Each user's small-scale channel is spatially white complex Gaussian.
//! The transmitter only knows a `D`-symbol-old copy; current and delayed
//! matrices are related through the Doppler correlation
//!
//! ```text
//! H_hat[n] = rho * H_hat[n - D] + E[n],   rho = J0(2 pi f_d tau)
//! ```
//!
//! with the error matrix `E` independent of the delayed channel and of
//! per-entry variance `1 - rho^2`, so the current channel keeps unit
//! per-entry variance.

use nalgebra::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::numerics::j0_unchecked;
use crate::real::Real;
use crate::CMatrix;

pub const SPEED_OF_LIGHT_M_PER_S: f64 = 2.997_924_58e8;

/// Everything needed to instantiate channels and Doppler for a cell:
/// user distances, shared speed, carrier, feedback delay, noise density
/// and the dB pathloss law.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<T> {
    /// One distance per user, kilometers.
    pub distances_km: Vec<T>,
    /// Shared user speed, km/h (users are homogeneous).
    pub speed_kmh: T,
    /// Carrier frequency, Hz.
    pub carrier_hz: T,
    /// Delay between channel estimation and use, seconds.
    pub delay_s: T,
    /// Noise power density, W/Hz (-174 dBm/Hz by default).
    pub noise_density_w_per_hz: T,
    /// Available bandwidth, Hz.
    pub w_max_hz: T,
    /// Pathloss intercept, dB at 1 km.
    pub pathloss_db_intercept: T,
    /// Pathloss slope, dB per decade of distance.
    pub pathloss_db_slope: T,
    /// Fixed shadowing multiplier applied to the power gain.
    pub shadow_multiplier: T,
}

impl<T: Real> Default for Scenario<T> {
    fn default() -> Self {
        Self {
            distances_km: vec![T::one(); 3],
            speed_kmh: T::lit(3.0),
            carrier_hz: T::lit(2e9),
            delay_s: T::lit(1e-3),
            // -174 dBm/Hz expressed in W/Hz
            noise_density_w_per_hz: T::lit(10f64.powf(-20.4)),
            w_max_hz: T::lit(5e6),
            pathloss_db_intercept: T::lit(128.1),
            pathloss_db_slope: T::lit(37.6),
            shadow_multiplier: T::one(),
        }
    }
}

impl<T: Real> Scenario<T> {
    /// Default scenario with `k` users all at `distance_km`.
    pub fn homogeneous(distance_km: T, k: usize) -> Self {
        Self {
            distances_km: vec![distance_km; k],
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.distances_km.is_empty() {
            return Err(Error::Domain("scenario needs at least one user".into()));
        }
        for &d in &self.distances_km {
            if !d.is_finite() || d <= T::zero() {
                return Err(Error::Domain(format!("distance must be > 0, got {d:?}")));
            }
        }
        let positives = [
            ("carrier_hz", self.carrier_hz),
            ("noise_density_w_per_hz", self.noise_density_w_per_hz),
            ("w_max_hz", self.w_max_hz),
            ("shadow_multiplier", self.shadow_multiplier),
        ];
        for (name, v) in positives {
            if !v.is_finite() || v <= T::zero() {
                return Err(Error::Domain(format!("{name} must be > 0, got {v:?}")));
            }
        }
        let nonnegatives = [("speed_kmh", self.speed_kmh), ("delay_s", self.delay_s)];
        for (name, v) in nonnegatives {
            if !v.is_finite() || v < T::zero() {
                return Err(Error::Domain(format!("{name} must be >= 0, got {v:?}")));
            }
        }
        if !self.pathloss_db_intercept.is_finite() || !self.pathloss_db_slope.is_finite() {
            return Err(Error::Domain("pathloss law must be finite".into()));
        }
        Ok(())
    }

    /// Noise power over the full bandwidth, `N0 * W_max`, watts.
    pub fn noise_power_w(&self) -> T {
        self.noise_density_w_per_hz * self.w_max_hz
    }
}

/// One user's channel state: large-scale power gain, Doppler correlation
/// and the unscaled (current, delayed) small-scale pair.
#[derive(Debug, Clone, PartialEq)]
pub struct UserLink<T> {
    /// Large-scale power gain.
    pub zeta: T,
    /// Correlation between the current channel and the delayed copy.
    pub rho: T,
    /// Channel error variance, `1 - rho^2`.
    pub eps_sq: T,
    /// Delayed small-scale channel, N x M.
    pub h_delayed: CMatrix<T>,
    /// Current small-scale channel, N x M.
    pub h_current: CMatrix<T>,
}

impl<T: Real> UserLink<T> {
    /// Amplitude scaling applied to the small-scale channel.
    #[inline]
    pub fn amplitude(&self) -> T {
        self.zeta.sqrt()
    }

    /// Large-scale parameters consumed by the capacity estimators.
    pub fn stats(&self) -> LinkStats<T> {
        LinkStats {
            zeta: self.zeta,
            eps_sq: self.eps_sq,
        }
    }

    /// `sqrt(zeta) * H_hat[n]`, restricted to the first `n_a` receive and
    /// `m_a` transmit antennas.
    pub fn scaled_current(&self, n_a: usize, m_a: usize) -> CMatrix<T> {
        scale(
            &self.h_current.view((0, 0), (n_a, m_a)).into_owned(),
            self.amplitude(),
        )
    }

    /// `sqrt(zeta) * H_hat[n - D]`, restricted to the first `n_a` receive
    /// and `m_a` transmit antennas.
    pub fn scaled_delayed(&self, n_a: usize, m_a: usize) -> CMatrix<T> {
        scale(
            &self.h_delayed.view((0, 0), (n_a, m_a)).into_owned(),
            self.amplitude(),
        )
    }

    /// Scaled channel error `sqrt(zeta) * (H_hat[n] - rho H_hat[n - D])`.
    pub fn scaled_error(&self, n_a: usize, m_a: usize) -> CMatrix<T> {
        let cur = self.h_current.view((0, 0), (n_a, m_a)).into_owned();
        let del = self.h_delayed.view((0, 0), (n_a, m_a)).into_owned();
        let rho = Complex::new(self.rho, T::zero());
        scale(&(cur - del * rho), self.amplitude())
    }
}

/// Per-user large-scale gain and channel error variance, the only link
/// state the closed-form estimators need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkStats<T> {
    pub zeta: T,
    pub eps_sq: T,
}

fn scale<T: Real>(m: &CMatrix<T>, s: T) -> CMatrix<T> {
    m * Complex::new(s, T::zero())
}

/// Channel realizations for all users of one drop.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet<T> {
    pub links: Vec<UserLink<T>>,
    /// Base-station antennas.
    pub m: usize,
    /// Antennas per user.
    pub n: usize,
}

/// Large-scale power gain of the dB pathloss law at distance `d_km`.
pub fn large_scale_gain<T: Real>(d_km: T, scenario: &Scenario<T>) -> Result<T> {
    if !d_km.is_finite() || d_km <= T::zero() {
        return Err(Error::Domain(format!("distance must be > 0, got {d_km:?}")));
    }
    let db = scenario.pathloss_db_intercept + scenario.pathloss_db_slope * d_km.log10();
    Ok(scenario.shadow_multiplier * T::lit(10.0).powf(-db / T::lit(10.0)))
}

/// Doppler correlation and error variance for a given speed:
/// `rho = J0(2 pi f_d tau)`, `eps_sq = 1 - rho^2` with
/// `f_d = (speed / 3.6) * f_c / c`.
pub fn doppler_params<T: Real>(speed_kmh: T, scenario: &Scenario<T>) -> (T, T) {
    let f_d = speed_kmh / T::lit(3.6) * scenario.carrier_hz / T::lit(SPEED_OF_LIGHT_M_PER_S);
    let x = T::two_pi() * f_d * scenario.delay_s;
    let rho = j0_unchecked(x);
    (rho, T::one() - rho * rho)
}

/// Draw one correlated (delayed, current) pair of `n x m` matrices.
///
/// Entries of the delayed channel are i.i.d. circularly-symmetric complex
/// Gaussian with unit variance, generated as `(g1 + i g2) / sqrt(2)`; the
/// current channel adds an independent error of per-entry variance
/// `eps_sq`. Gaussians are drawn in `f64` row-major (delayed matrix first)
/// and converted, so the stream is identical across scalar types.
fn draw_link<T: Real>(
    rng: &mut ChaCha8Rng,
    zeta: T,
    rho: T,
    eps_sq: T,
    n: usize,
    m: usize,
) -> UserLink<T> {
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let mut gaussian = |scale: f64| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex::new(T::lit(re * scale), T::lit(im * scale))
    };
    let h_delayed = CMatrix::<T>::from_fn(n, m, |_, _| gaussian(half));
    let eps_amp = eps_sq.to_f64().unwrap_or(0.0).sqrt();
    let rho_c = Complex::new(rho, T::zero());
    let error = CMatrix::<T>::from_fn(n, m, |_, _| gaussian(half * eps_amp));
    let h_current = &h_delayed * rho_c + error;
    UserLink {
        zeta,
        rho,
        eps_sq,
        h_delayed,
        h_current,
    }
}

/// Draw channels for every scenario user. Deterministic given
/// `(seed, scenario, m, n)`.
pub fn draw_channel_set<T: Real>(
    scenario: &Scenario<T>,
    m: usize,
    n: usize,
    rng_seed: u64,
) -> Result<ChannelSet<T>> {
    scenario.validate()?;
    if m == 0 || n == 0 {
        return Err(Error::Domain("antenna counts must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let (rho, eps_sq) = doppler_params(scenario.speed_kmh, scenario);
    let mut links = Vec::with_capacity(scenario.distances_km.len());
    for &d in &scenario.distances_km {
        let zeta = large_scale_gain(d, scenario)?;
        links.push(draw_link(&mut rng, zeta, rho, eps_sq, n, m));
    }
    Ok(ChannelSet { links, m, n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn pathloss_reference_points() {
        let sc = Scenario::<f64>::default();
        assert_relative_eq!(
            large_scale_gain(1.0, &sc).unwrap(),
            1.5488e-13,
            max_relative = 1e-4
        );
        // 10^(-(128.1 + 37.6 log10 0.5) / 10) = 10^(-11.678127...)
        assert_relative_eq!(
            large_scale_gain(0.5, &sc).unwrap(),
            2.0983e-12,
            max_relative = 1e-4
        );
        assert!(large_scale_gain(0.0, &sc).is_err());
        assert!(large_scale_gain(-1.0, &sc).is_err());
    }

    #[test]
    fn doppler_reference_points() {
        let sc = Scenario::<f64>::default();
        let (rho, eps) = doppler_params(0.0, &sc);
        assert_eq!(rho, 1.0);
        assert_eq!(eps, 0.0);

        let (rho, eps) = doppler_params(3.0, &sc);
        assert_relative_eq!(rho, 0.999695, epsilon = 1e-5);
        assert_relative_eq!(eps, 6.092e-4, epsilon = 1e-5);

        let (rho, eps) = doppler_params(120.0, &sc);
        assert_relative_eq!(rho, 0.56884, epsilon = 1e-3);
        assert_relative_eq!(eps, 0.67642, epsilon = 1e-3);
    }

    #[test]
    fn zero_speed_pair_is_identical() {
        let sc = Scenario::<f64> {
            speed_kmh: 0.0,
            ..Scenario::default()
        };
        let set = draw_channel_set(&sc, 4, 2, 7).unwrap();
        for link in &set.links {
            assert_eq!(link.h_current, link.h_delayed);
            assert_eq!(link.eps_sq, 0.0);
        }
    }

    #[test]
    fn seeds_reproduce_bitwise() {
        let sc = Scenario::<f64>::homogeneous(0.8, 3);
        let a = draw_channel_set(&sc, 6, 2, 42).unwrap();
        let b = draw_channel_set(&sc, 6, 2, 42).unwrap();
        assert_eq!(a, b);
        let c = draw_channel_set(&sc, 6, 2, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn eps_identity_holds_exactly() {
        for speed in [0.0, 3.0, 30.0, 120.0, 250.0] {
            let sc = Scenario::<f64> {
                speed_kmh: speed,
                ..Scenario::default()
            };
            let set = draw_channel_set(&sc, 6, 2, 1).unwrap();
            for link in &set.links {
                assert!((link.eps_sq + link.rho * link.rho - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn forced_zero_rho_decorrelates() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut cross = Complex::new(0.0f64, 0.0);
        let mut count = 0usize;
        for _ in 0..10_000 {
            let link = draw_link::<f64>(&mut rng, 1.0, 0.0, 1.0, 2, 2);
            for (c, d) in link.h_current.iter().zip(link.h_delayed.iter()) {
                cross += c * d.conj();
                count += 1;
            }
        }
        let corr = cross / count as f64;
        assert!(corr.norm() < 0.03, "|corr| = {}", corr.norm());
    }

    #[test]
    fn empirical_statistics_at_120_kmh() {
        let sc = Scenario::<f64>::default();
        let (rho, eps_sq) = doppler_params(120.0, &sc);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut cross = Complex::new(0.0f64, 0.0);
        let mut var = 0.0f64;
        let mut count = 0usize;
        for _ in 0..100_000 {
            let link = draw_link::<f64>(&mut rng, 1.0, rho, eps_sq, 1, 2);
            for (c, d) in link.h_current.iter().zip(link.h_delayed.iter()) {
                cross += c * d.conj();
                var += c.norm_sqr();
                count += 1;
            }
        }
        let corr = (cross / count as f64).re;
        assert!((corr - 0.5688).abs() < 0.01, "corr = {corr}");
        let var = var / count as f64;
        assert!((var - 1.0).abs() < 0.02, "var = {var}");
    }

    #[test]
    fn f32_draw_matches_f64_stream() {
        let sc64 = Scenario::<f64>::homogeneous(1.0, 1);
        let sc32 = Scenario::<f32>::homogeneous(1.0, 1);
        let a = draw_channel_set::<f64>(&sc64, 2, 2, 9).unwrap();
        let b = draw_channel_set::<f32>(&sc32, 2, 2, 9).unwrap();
        for (x, y) in a.links[0].h_delayed.iter().zip(b.links[0].h_delayed.iter()) {
            assert_relative_eq!(x.re, y.re as f64, epsilon = 1e-6);
            assert_relative_eq!(x.im, y.im as f64, epsilon = 1e-6);
        }
    }

    proptest::proptest! {
        // gain(2d) / gain(d) is pinned by the slope law
        #[test]
        fn slope_law_ratio(d in 0.05f64..5.0) {
            let sc = Scenario::<f64>::default();
            let g1 = large_scale_gain(d, &sc).unwrap();
            let g2 = large_scale_gain(2.0 * d, &sc).unwrap();
            let expect = 2.0f64.powf(-3.76);
            proptest::prop_assert!((g2 / g1 - expect).abs() < 1e-9);
        }
    }
}
