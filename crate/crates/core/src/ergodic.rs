//! Closed-form ergodic-capacity approximations.
//!
//! Offline mode selection needs the average rate of each mode without
//! drawing channels. The workhorse is the large-dimension spectral
//! efficiency of an isotropic-input Gaussian channel,
//!
//! ```text
//! C_iso(beta, gamma) / N = log2[1 + gamma - F] + beta log2[1 + gamma/beta - F]
//!                          - beta (log2 e / gamma) F,
//! F = F(beta, gamma/beta),
//! F(x, y) = 1/4 [sqrt(1 + y (1+sqrt x)^2) - sqrt(1 + y (1-sqrt x)^2)]^2
//! ```
//!
//! applied per user with the antenna ratio reduced by the other users'
//! streams and the effective SNR deflated by the interference the aged
//! precoders leak.

use crate::channel::LinkStats;
use crate::error::{Error, Result};
use crate::linkcap::{bd_rate_loss_bound, Mode, Scheme};
use crate::real::{log2_e, Real};

/// Correction term of the asymptotic spectral efficiency. Evaluated in
/// the cancellation-free form `4 x y^2 / (s_plus + s_minus)^2`.
pub fn f_correction<T: Real>(x: T, y: T) -> T {
    let sx = x.sqrt();
    let one = T::one();
    let s_plus = (one + y * (one + sx) * (one + sx)).sqrt();
    let s_minus = (one + y * (one - sx) * (one - sx)).sqrt();
    let sum = s_plus + s_minus;
    T::lit(4.0) * x * y * y / (sum * sum)
}

/// Asymptotic spectral efficiency (bits/s/Hz) of an `n_rx`-stream
/// isotropic-input channel with antenna ratio `beta` and total SNR
/// `gamma`. Continuously extended to zero at `gamma = 0`.
pub fn c_iso<T: Real>(beta: T, gamma: T, n_rx: usize) -> T {
    if gamma < T::lit(1e-10) {
        return T::zero();
    }
    let y = gamma / beta;
    let f = f_correction(beta, y);
    let l2e = log2_e::<T>();
    let braces = (gamma - f).ln_1p() * l2e + beta * (y - f).ln_1p() * l2e - beta * l2e / gamma * f;
    T::of_usize(n_rx) * braces
}

/// Ergodic single-user rate estimate. For `m_a >= n_a` the antenna ratio
/// is `m_a / n_a`; otherwise the roles swap so the stream count follows
/// the smaller dimension.
pub fn ergodic_su<T: Real>(mode: &Mode, stats: &LinkStats<T>, p_t: T, w: T, n0: T) -> Result<T> {
    mode.check_internal()?;
    if mode.scheme != Scheme::Svd {
        return Err(Error::Domain("ergodic_su needs a single-user mode".into()));
    }
    let gamma = p_t * stats.zeta / (n0 * w);
    let (m_a, n_a) = (mode.m_a, mode.n_a[0]);
    let value = if m_a >= n_a {
        let beta = T::of_usize(m_a) / T::of_usize(n_a);
        c_iso(beta, beta * gamma, n_a)
    } else {
        let beta = T::of_usize(n_a) / T::of_usize(m_a);
        c_iso(beta, beta * gamma, m_a)
    };
    Ok(w * value)
}

/// Transmit antennas left for user `k` after zero-forcing the others.
fn reduced_tx(mode: &Mode, k: usize) -> usize {
    let others: usize = (0..mode.k_a).filter(|&i| i != k).map(|i| mode.n_a[i]).sum();
    mode.m_a - others
}

fn check_bd<T: Real>(mode: &Mode, stats: &[LinkStats<T>]) -> Result<()> {
    mode.check_internal()?;
    if mode.scheme != Scheme::Bd {
        return Err(Error::Domain("ergodic BD estimate needs a BD mode".into()));
    }
    if stats.len() != mode.k_a {
        return Err(Error::Domain(format!(
            "expected {} user stats, got {}",
            mode.k_a,
            stats.len()
        )));
    }
    for k in 0..mode.k_a {
        if reduced_tx(mode, k) < mode.n_a[k] {
            return Err(Error::InfeasibleMode(format!(
                "user {k} keeps {} effective transmit antennas for {} receive antennas",
                reduced_tx(mode, k),
                mode.n_a[k]
            )));
        }
    }
    Ok(())
}

/// Lower-bound ergodic rate of block diagonalization: per user the
/// reduced antenna ratio with the interference-inflated SNR.
///
/// Equal power splits `P_t` over all `N_s` streams, so the SNR entering
/// a user's reduced channel carries that user's share `n_a_k / N_s` of
/// the transmit power; the interference floor keeps the full per-stream
/// leakage of the other users.
pub fn ergodic_bd_lower<T: Real>(
    mode: &Mode,
    stats: &[LinkStats<T>],
    p_t: T,
    w: T,
    n0: T,
) -> Result<T> {
    check_bd(mode, stats)?;
    let n_s = T::of_usize(mode.n_streams());
    let n0w = n0 * w;
    let mut acc = T::zero();
    for (k, stat) in stats.iter().enumerate() {
        let beta = T::of_usize(reduced_tx(mode, k)) / T::of_usize(mode.n_a[k]);
        let others: usize = (0..mode.k_a).filter(|&i| i != k).map(|i| mode.n_a[i]).sum();
        let interference = T::of_usize(others) * p_t * stat.zeta / n_s * stat.eps_sq;
        let share = T::of_usize(mode.n_a[k]) / n_s;
        let gamma_hat = share * p_t * stat.zeta / (n0w + interference);
        acc += c_iso(beta, beta * gamma_hat, mode.n_a[k]);
    }
    Ok(w * acc)
}

/// Upper-bound ergodic rate: the lower bound plus
/// `W sum_k (N_a_k / M_a_k) log2 e` exactly.
pub fn ergodic_bd_upper<T: Real>(
    mode: &Mode,
    stats: &[LinkStats<T>],
    p_t: T,
    w: T,
    n0: T,
) -> Result<T> {
    let lower = ergodic_bd_lower(mode, stats, p_t, w, n0)?;
    let mut gap = T::zero();
    for k in 0..mode.k_a {
        gap += T::of_usize(mode.n_a[k]) / T::of_usize(reduced_tx(mode, k));
    }
    Ok(lower + w * log2_e::<T>() * gap)
}

/// Ergodic counterpart of the rate-loss-bound estimate: the uninflated
/// SNR inside the spectral efficiency, minus the rate-loss bound.
pub fn ergodic_bd_zhang<T: Real>(
    mode: &Mode,
    stats: &[LinkStats<T>],
    p_t: T,
    w: T,
    n0: T,
) -> Result<T> {
    check_bd(mode, stats)?;
    let n_s = T::of_usize(mode.n_streams());
    let n0w = n0 * w;
    let mut acc = T::zero();
    for (k, stat) in stats.iter().enumerate() {
        let beta = T::of_usize(reduced_tx(mode, k)) / T::of_usize(mode.n_a[k]);
        let share = T::of_usize(mode.n_a[k]) / n_s;
        let gamma = share * p_t * stat.zeta / n0w;
        acc += c_iso(beta, beta * gamma, mode.n_a[k]);
    }
    Ok(w * acc - bd_rate_loss_bound(mode, stats, p_t, w, n0)?)
}
