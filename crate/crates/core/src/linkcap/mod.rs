//! Precoder construction and instantaneous capacity evaluation.
//!
//! Two transmission schemes are supported. Single-user transmission
//! projects onto the right singular vectors of the (delayed) channel;
//! multi-user block diagonalization places each user's precoder in the
//! null space of every other active user's delayed channel, so residual
//! inter-user interference comes only from the channel aging between
//! estimation and use.
//!
//! Capacities are information-theoretic, in bits, with the transmit
//! power split equally over all spatial streams. Alongside the realized
//! capacities (perfect and delayed transmitter knowledge) the module
//! provides the transmitter-side estimators used to solve for the
//! optimal transmit power before transmission: the direct delayed-value
//! estimate for the single-user scheme and three block-diagonalization
//! estimators (a rate-loss-bound difference plus tighter lower/upper
//! bounds built on the interference-inflated noise floor).

pub mod algebra;

use nalgebra::Complex;

use crate::channel::{ChannelSet, LinkStats, UserLink};
use crate::error::{Error, Result};
use crate::numerics::ConcaveFn;
use crate::real::{log2_e, Real};
use crate::CMatrix;

use algebra::{
    gram, hermitian_eigenvalues_desc, log2_det_hermitian_pd, right_null_basis,
    right_singular_vectors, singular_values, stream_gains,
};

/// Transmission scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Single-user transmission along right singular vectors.
    Svd,
    /// Multi-user block diagonalization.
    Bd,
}

/// A transmission mode: scheme, active transmit antennas, active users
/// and per-user receive antenna counts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mode {
    pub scheme: Scheme,
    pub m_a: usize,
    pub k_a: usize,
    pub n_a: Vec<usize>,
    /// Which scenario users are active, in order.
    pub user_indices: Vec<usize>,
}

impl Mode {
    /// Single-user mode with `m_a` transmit and `n_a` receive antennas,
    /// serving user 0.
    pub fn svd(m_a: usize, n_a: usize) -> Self {
        Self {
            scheme: Scheme::Svd,
            m_a,
            k_a: 1,
            n_a: vec![n_a],
            user_indices: vec![0],
        }
    }

    /// Block-diagonalization mode with `k_a` users, each with
    /// `n_per_user` receive antennas, serving the first `k_a` users.
    pub fn bd(m_a: usize, k_a: usize, n_per_user: usize) -> Self {
        Self {
            scheme: Scheme::Bd,
            m_a,
            k_a,
            n_a: vec![n_per_user; k_a],
            user_indices: (0..k_a).collect(),
        }
    }

    /// Spatial streams: `min(m_a, n_a)` for the single-user scheme, the
    /// total receive antenna count under block diagonalization.
    pub fn n_streams(&self) -> usize {
        match self.scheme {
            Scheme::Svd => self.m_a.min(self.n_a[0]),
            Scheme::Bd => self.n_a.iter().sum(),
        }
    }

    /// Scheme-level consistency, independent of any system bounds.
    pub fn check_internal(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InfeasibleMode(msg));
        if self.m_a == 0 {
            return fail("m_a must be >= 1".into());
        }
        if self.n_a.len() != self.k_a || self.user_indices.len() != self.k_a {
            return fail("per-user lists must match k_a".into());
        }
        if self.n_a.contains(&0) {
            return fail("receive antenna counts must be >= 1".into());
        }
        match self.scheme {
            Scheme::Svd if self.k_a != 1 => {
                fail("single-user scheme needs exactly one user".into())
            }
            Scheme::Bd if self.k_a < 2 => {
                fail("block diagonalization needs at least two users".into())
            }
            Scheme::Bd if self.m_a < self.n_a.iter().sum::<usize>() => fail(format!(
                "m_a = {} cannot serve {} total receive antennas",
                self.m_a,
                self.n_a.iter().sum::<usize>()
            )),
            _ => Ok(()),
        }
    }

    /// Check the mode against a system with `m` transmit antennas, `n`
    /// antennas per user and `k` users.
    pub fn validate(&self, m: usize, n: usize, k: usize) -> Result<()> {
        self.check_internal()?;
        let fail = |msg: String| Err(Error::InfeasibleMode(msg));
        if self.m_a > m {
            return fail(format!("m_a = {} outside 1..={m}", self.m_a));
        }
        if self.n_a.iter().any(|&na| na > n) {
            return fail(format!("receive antenna counts must be in 1..={n}"));
        }
        let mut seen = vec![false; k];
        for &u in &self.user_indices {
            if u >= k || seen[u] {
                return fail(format!("user index {u} invalid for {k} users"));
            }
            seen[u] = true;
        }
        Ok(())
    }

    /// Human-readable label following the usual convention.
    pub fn label(&self) -> String {
        match self.scheme {
            Scheme::Svd if self.m_a == 1 => "SIMO".to_string(),
            Scheme::Svd => format!("SU-MIMO({},{})", self.m_a, self.n_a[0]),
            Scheme::Bd => format!("MU-MIMO({},{},{})", self.m_a, self.n_a[0], self.k_a),
        }
    }

    pub fn scheme_str(&self) -> &'static str {
        match self.scheme {
            Scheme::Svd => "svd",
            Scheme::Bd => "bd",
        }
    }
}

/// Precoders built from delayed channel knowledge, plus the delayed
/// effective channels `H_k[n-D] T_k` the estimators work from.
#[derive(Debug, Clone)]
pub struct PrecodeResult<T> {
    /// One precoding matrix per active user (`m_a x n_a_k`).
    pub precoders: Vec<CMatrix<T>>,
    /// `H_k[n-D] T_k`, per active user.
    pub eff_delayed: Vec<CMatrix<T>>,
}

// ---------------------------------------------------------------------------
// Precoder construction
// ---------------------------------------------------------------------------

/// Right-singular-vector precoder from the delayed scaled channel.
pub fn svd_precode<T: Real>(h_delayed_scaled: &CMatrix<T>, n_s: usize) -> Result<PrecodeResult<T>> {
    let (n, m) = h_delayed_scaled.shape();
    if n_s == 0 || n_s > n.min(m) {
        return Err(Error::Domain(format!(
            "n_s = {n_s} outside 1..={} for a {n}x{m} channel",
            n.min(m)
        )));
    }
    let sv = singular_values(h_delayed_scaled);
    if sv[0] == T::zero() {
        return Err(Error::Domain(
            "all-zero channel has no singular directions".into(),
        ));
    }
    let v = right_singular_vectors(h_delayed_scaled, n_s)?;
    let eff = h_delayed_scaled * &v;
    Ok(PrecodeResult {
        precoders: vec![v],
        eff_delayed: vec![eff],
    })
}

/// Block-diagonalization precoders from the delayed scaled channels.
///
/// For each user the other users' channels are stacked and the precoder
/// is drawn from the stack's right null space, rotated onto the top
/// singular vectors of the user's effective channel inside that space.
pub fn bd_precode<T: Real>(delayed_scaled: &[CMatrix<T>], mode: &Mode) -> Result<PrecodeResult<T>> {
    if mode.scheme != Scheme::Bd {
        return Err(Error::Domain(
            "bd_precode needs a block-diagonalization mode".into(),
        ));
    }
    if delayed_scaled.len() != mode.k_a {
        return Err(Error::Domain(format!(
            "expected {} user channels, got {}",
            mode.k_a,
            delayed_scaled.len()
        )));
    }
    for (k, h) in delayed_scaled.iter().enumerate() {
        if h.shape() != (mode.n_a[k], mode.m_a) {
            return Err(Error::Domain(format!(
                "user {k} channel is {:?}, expected ({}, {})",
                h.shape(),
                mode.n_a[k],
                mode.m_a
            )));
        }
    }

    let mut precoders = Vec::with_capacity(mode.k_a);
    let mut eff_delayed = Vec::with_capacity(mode.k_a);
    for k in 0..mode.k_a {
        let other_rows: usize = (0..mode.k_a).filter(|&i| i != k).map(|i| mode.n_a[i]).sum();
        let mut stack = CMatrix::<T>::zeros(other_rows, mode.m_a);
        let mut row = 0;
        for (i, h) in delayed_scaled.iter().enumerate() {
            if i == k {
                continue;
            }
            stack.rows_mut(row, mode.n_a[i]).copy_from(h);
            row += mode.n_a[i];
        }
        let null = right_null_basis(&stack)?;
        if null.ncols() < mode.n_a[k] {
            return Err(Error::InfeasibleMode(format!(
                "null space dimension {} < {} receive antennas for user {k}",
                null.ncols(),
                mode.n_a[k]
            )));
        }
        let inside = &delayed_scaled[k] * &null;
        let rotation = right_singular_vectors(&inside, mode.n_a[k])?;
        let t_k = &null * rotation;
        eff_delayed.push(&delayed_scaled[k] * &t_k);
        precoders.push(t_k);
    }
    Ok(PrecodeResult {
        precoders,
        eff_delayed,
    })
}

/// Build the mode's precoders from a drawn channel set (delayed CSIT).
pub fn precode_for_mode<T: Real>(set: &ChannelSet<T>, mode: &Mode) -> Result<PrecodeResult<T>> {
    mode.validate(set.m, set.n, set.links.len())?;
    match mode.scheme {
        Scheme::Svd => {
            let link = &set.links[mode.user_indices[0]];
            let h = link.scaled_delayed(mode.n_a[0], mode.m_a);
            svd_precode(&h, mode.n_streams())
        }
        Scheme::Bd => {
            let delayed: Vec<CMatrix<T>> = mode
                .user_indices
                .iter()
                .zip(&mode.n_a)
                .map(|(&u, &na)| set.links[u].scaled_delayed(na, mode.m_a))
                .collect();
            bd_precode(&delayed, mode)
        }
    }
}

// ---------------------------------------------------------------------------
// Rate profiles: every capacity here is W * [sum log2(1 + a P) - sum
// log2(1 + b P)] + offset once the channel matrices are fixed, which
// gives the optimizer closed-form values and derivatives in P.
// ---------------------------------------------------------------------------

/// Capacity as a function of transmit power with all channel-dependent
/// coefficients precomputed.
#[derive(Debug, Clone)]
pub struct RateProfile<T> {
    w_hz: T,
    /// Coefficients of increasing log terms, 1/W.
    pos: Vec<T>,
    /// Coefficients of decreasing log terms, 1/W.
    neg: Vec<T>,
    /// Additive constant, bits/s.
    offset: T,
}

impl<T: Real> RateProfile<T> {
    fn new(w_hz: T) -> Self {
        Self {
            w_hz,
            pos: Vec::new(),
            neg: Vec::new(),
            offset: T::zero(),
        }
    }

    /// Rate in bits/s at transmit power `p_t` watts.
    pub fn eval(&self, p_t: T) -> T {
        let mut nats = T::zero();
        for &a in &self.pos {
            nats += (a * p_t).ln_1p();
        }
        for &b in &self.neg {
            nats -= (b * p_t).ln_1p();
        }
        self.w_hz * log2_e::<T>() * nats + self.offset
    }

    /// d(rate)/d(p_t).
    pub fn deriv(&self, p_t: T) -> T {
        let mut acc = T::zero();
        for &a in &self.pos {
            acc += a / (T::one() + a * p_t);
        }
        for &b in &self.neg {
            acc -= b / (T::one() + b * p_t);
        }
        self.w_hz * log2_e::<T>() * acc
    }

    /// View as the solver's function-with-derivative.
    pub fn concave_fn(&self) -> ConcaveFn<'_, T> {
        ConcaveFn::new(move |p| self.eval(p), move |p| self.deriv(p))
    }
}

fn check_power_bandwidth<T: Real>(p_t: T, w: T, n0: T) -> Result<()> {
    if !w.is_finite() || w <= T::zero() {
        return Err(Error::Domain(format!("bandwidth must be > 0, got {w:?}")));
    }
    if !p_t.is_finite() || p_t < T::zero() {
        return Err(Error::Domain(format!(
            "transmit power must be >= 0, got {p_t:?}"
        )));
    }
    if !n0.is_finite() || n0 <= T::zero() {
        return Err(Error::Domain(format!(
            "noise density must be > 0, got {n0:?}"
        )));
    }
    Ok(())
}

/// Profile of `W sum_i log2(1 + P g_i / (N_s N0 W))` from per-stream
/// gains.
fn profile_from_gains<T: Real>(w: T, n0: T, n_s: usize, gains: &[T]) -> RateProfile<T> {
    let mut p = RateProfile::new(w);
    let denom = T::of_usize(n_s) * n0 * w;
    p.pos.extend(gains.iter().map(|&g| g / denom));
    p
}

/// Realized single-user rate profile: the current channel projected on
/// the (delayed) precoder.
pub fn profile_svd_realized<T: Real>(
    h_current_scaled: &CMatrix<T>,
    v: &CMatrix<T>,
    w: T,
    n0: T,
    n_s: usize,
) -> Result<RateProfile<T>> {
    if v.nrows() != h_current_scaled.ncols() || v.ncols() != n_s {
        return Err(Error::Domain(format!(
            "precoder is {:?}, expected ({}, {n_s})",
            v.shape(),
            h_current_scaled.ncols()
        )));
    }
    let gains = stream_gains(&(h_current_scaled * v));
    Ok(profile_from_gains(w, n0, n_s, &gains))
}

/// Transmitter-side single-user estimate: singular values of the delayed
/// channel itself.
pub fn profile_svd_estimate<T: Real>(
    h_delayed_scaled: &CMatrix<T>,
    w: T,
    n0: T,
    n_s: usize,
) -> Result<RateProfile<T>> {
    let (n, m) = h_delayed_scaled.shape();
    if n_s == 0 || n_s > n.min(m) {
        return Err(Error::Domain(format!(
            "n_s = {n_s} invalid for {n}x{m} channel"
        )));
    }
    let gains: Vec<T> = stream_gains(h_delayed_scaled)
        .into_iter()
        .take(n_s)
        .collect();
    Ok(profile_from_gains(w, n0, n_s, &gains))
}

/// Which block-diagonalization estimator to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BdEstimate {
    /// Delayed-value rate minus the rate-loss upper bound; may go
    /// negative at high interference.
    Zhang,
    /// Interference-inflated-noise lower bound.
    Lower,
    /// Lower bound plus the constant per-user gap.
    Upper,
}

/// Per-user interference coefficient `sum_{i != k} N_a_i zeta_k eps_k^2
/// / (N_s N0 W)`, 1/W.
fn interference_coeff<T: Real>(mode: &Mode, stats: &[LinkStats<T>], k: usize, n0w: T) -> T {
    let others: usize = (0..mode.k_a).filter(|&i| i != k).map(|i| mode.n_a[i]).sum();
    T::of_usize(others) * stats[k].zeta * stats[k].eps_sq / (T::of_usize(mode.n_streams()) * n0w)
}

/// Block-diagonalization estimator profiles from the delayed effective
/// channels and the users' large-scale statistics.
pub fn profile_bd_estimate<T: Real>(
    pre: &PrecodeResult<T>,
    w: T,
    n0: T,
    mode: &Mode,
    stats: &[LinkStats<T>],
    which: BdEstimate,
) -> Result<RateProfile<T>> {
    if mode.scheme != Scheme::Bd {
        return Err(Error::Domain(
            "block-diagonalization estimator needs a BD mode".into(),
        ));
    }
    if pre.eff_delayed.len() != mode.k_a || stats.len() != mode.k_a {
        return Err(Error::Domain("per-user inputs must match k_a".into()));
    }
    if !w.is_finite() || w <= T::zero() || !n0.is_finite() || n0 <= T::zero() {
        return Err(Error::Domain("need w > 0 and n0 > 0".into()));
    }
    let n_s = mode.n_streams();
    let denom = T::of_usize(n_s) * n0 * w;
    let n0w = n0 * w;
    let mut profile = RateProfile::new(w);
    for k in 0..mode.k_a {
        let gains = stream_gains(&pre.eff_delayed[k]);
        let c_k = interference_coeff(mode, stats, k, n0w);
        match which {
            BdEstimate::Zhang => {
                profile.pos.extend(gains.iter().map(|&g| g / denom));
                profile.neg.extend(std::iter::repeat_n(c_k, mode.n_a[k]));
            }
            BdEstimate::Lower | BdEstimate::Upper => {
                profile.pos.extend(gains.iter().map(|&g| c_k + g / denom));
                profile.neg.extend(std::iter::repeat_n(c_k, mode.n_a[k]));
            }
        }
    }
    if which == BdEstimate::Upper {
        let mut gap = T::zero();
        for k in 0..mode.k_a {
            gap += T::of_usize(mode.n_a[k]) / T::of_usize(mode.m_a);
        }
        profile.offset = w * log2_e::<T>() * gap;
    }
    Ok(profile)
}

/// Realized delayed-CSIT rate profile via the eigenvalues of the
/// interference and signal-plus-interference Gram matrices.
pub fn profile_bd_realized<T: Real>(
    links: &[&UserLink<T>],
    pre: &PrecodeResult<T>,
    w: T,
    n0: T,
    mode: &Mode,
) -> Result<RateProfile<T>> {
    if mode.scheme != Scheme::Bd {
        return Err(Error::Domain("realized BD profile needs a BD mode".into()));
    }
    if links.len() != mode.k_a || pre.precoders.len() != mode.k_a {
        return Err(Error::Domain("per-user inputs must match k_a".into()));
    }
    let n_s = mode.n_streams();
    let denom = T::of_usize(n_s) * n0 * w;
    let mut profile = RateProfile::new(w);
    for (k, link) in links.iter().enumerate() {
        let interference = interference_matrix(link, pre, mode, k);
        let h_eff = link.scaled_current(mode.n_a[k], mode.m_a) * &pre.precoders[k];
        let total = &interference + gram(&h_eff);
        for c in hermitian_eigenvalues_desc(&total) {
            profile.pos.push(c / denom);
        }
        for g in hermitian_eigenvalues_desc(&interference) {
            profile.neg.push(g / denom);
        }
    }
    Ok(profile)
}

/// `B_k B_k^H` with `B_k` the scaled channel error projected on the
/// other users' precoders.
fn interference_matrix<T: Real>(
    link: &UserLink<T>,
    pre: &PrecodeResult<T>,
    mode: &Mode,
    k: usize,
) -> CMatrix<T> {
    let err = link.scaled_error(mode.n_a[k], mode.m_a);
    let other_cols: usize = (0..mode.k_a).filter(|&i| i != k).map(|i| mode.n_a[i]).sum();
    let mut stacked = CMatrix::<T>::zeros(mode.m_a, other_cols);
    let mut col = 0;
    for i in 0..mode.k_a {
        if i == k {
            continue;
        }
        stacked
            .columns_mut(col, mode.n_a[i])
            .copy_from(&pre.precoders[i]);
        col += mode.n_a[i];
    }
    gram(&(err * stacked))
}

// ---------------------------------------------------------------------------
// Capacity operations
// ---------------------------------------------------------------------------

/// Single-user capacity with the precoder `v` built from delayed
/// knowledge: `W sum_i log2(1 + P lambda_i^2 / (N_s N0 W))` with
/// `lambda_i` the singular values of `H[n] v`.
pub fn svd_capacity<T: Real>(
    h_current_scaled: &CMatrix<T>,
    v: &CMatrix<T>,
    p_t: T,
    w: T,
    n0: T,
    n_s: usize,
) -> Result<T> {
    check_power_bandwidth(p_t, w, n0)?;
    Ok(profile_svd_realized(h_current_scaled, v, w, n0, n_s)?.eval(p_t))
}

/// Transmitter-side single-user capacity estimate from the delayed
/// channel's singular values.
pub fn estimate_svd<T: Real>(
    h_delayed_scaled: &CMatrix<T>,
    p_t: T,
    w: T,
    n0: T,
    n_s: usize,
) -> Result<T> {
    check_power_bandwidth(p_t, w, n0)?;
    Ok(profile_svd_estimate(h_delayed_scaled, w, n0, n_s)?.eval(p_t))
}

/// Block-diagonalization sum rate with interference-free effective
/// channels (perfect-knowledge semantics: precoders built from the same
/// channels passed here).
pub fn bd_capacity_perfect<T: Real>(
    current_scaled: &[CMatrix<T>],
    pre: &PrecodeResult<T>,
    p_t: T,
    w: T,
    n0: T,
    n_s: usize,
) -> Result<T> {
    check_power_bandwidth(p_t, w, n0)?;
    if current_scaled.len() != pre.precoders.len() {
        return Err(Error::Domain("channel/precoder counts differ".into()));
    }
    let denom = T::of_usize(n_s) * n0 * w;
    let mut nats = T::zero();
    for (h, t) in current_scaled.iter().zip(&pre.precoders) {
        if h.ncols() != t.nrows() {
            return Err(Error::Domain(format!(
                "channel {:?} incompatible with precoder {:?}",
                h.shape(),
                t.shape()
            )));
        }
        for g in stream_gains(&(h * t)) {
            nats += (p_t * g / denom).ln_1p();
        }
    }
    Ok(w * log2_e::<T>() * nats)
}

/// Realized sum rate under delayed knowledge: per user, the log-det gain
/// of the desired signal over the inter-user interference-plus-noise
/// covariance. Evaluated as `log2 det(R + S) - log2 det(R)` with both
/// factors Hermitian positive definite.
pub fn bd_capacity_delayed<T: Real>(
    links: &[&UserLink<T>],
    pre: &PrecodeResult<T>,
    p_t: T,
    w: T,
    n0: T,
    mode: &Mode,
) -> Result<T> {
    check_power_bandwidth(p_t, w, n0)?;
    if mode.scheme != Scheme::Bd {
        return Err(Error::Domain("bd_capacity_delayed needs a BD mode".into()));
    }
    if links.len() != mode.k_a || pre.precoders.len() != mode.k_a {
        return Err(Error::Domain("per-user inputs must match k_a".into()));
    }
    let n_s = mode.n_streams();
    let p_per_stream = p_t / T::of_usize(n_s);
    let mut bits_per_hz = T::zero();
    for (k, link) in links.iter().enumerate() {
        let n_k = mode.n_a[k];
        let noise = CMatrix::<T>::identity(n_k, n_k) * Complex::new(n0 * w, T::zero());
        let r = interference_matrix(link, pre, mode, k) * Complex::new(p_per_stream, T::zero())
            + &noise;
        let h_eff = link.scaled_current(n_k, mode.m_a) * &pre.precoders[k];
        let s = gram(&h_eff) * Complex::new(p_per_stream, T::zero());
        bits_per_hz += log2_det_hermitian_pd(&(&r + s))? - log2_det_hermitian_pd(&r)?;
    }
    Ok(w * bits_per_hz)
}

/// Rate-loss upper bound of block diagonalization under delayed
/// knowledge: `W sum_k N_a_k log2(1 + sum_{i!=k} N_a_i P zeta_k eps_k^2
/// / (N0 W N_s))`.
pub fn bd_rate_loss_bound<T: Real>(
    mode: &Mode,
    stats: &[LinkStats<T>],
    p_t: T,
    w: T,
    n0: T,
) -> Result<T> {
    check_power_bandwidth(p_t, w, n0)?;
    if mode.scheme != Scheme::Bd || stats.len() != mode.k_a {
        return Err(Error::Domain(
            "rate-loss bound needs a BD mode with matching stats".into(),
        ));
    }
    let n0w = n0 * w;
    let mut nats = T::zero();
    for k in 0..mode.k_a {
        let c_k = interference_coeff(mode, stats, k, n0w);
        nats += T::of_usize(mode.n_a[k]) * (c_k * p_t).ln_1p();
    }
    Ok(w * log2_e::<T>() * nats)
}

/// Delayed-value estimate minus the rate-loss bound. Unclamped: may be
/// negative at high interference; the optimizer treats nonpositive
/// capacity as zero efficiency.
pub fn estimate_bd_zhang<T: Real>(
    pre: &PrecodeResult<T>,
    p_t: T,
    w: T,
    n0: T,
    mode: &Mode,
    stats: &[LinkStats<T>],
) -> Result<T> {
    check_power_bandwidth(p_t, w, n0)?;
    Ok(profile_bd_estimate(pre, w, n0, mode, stats, BdEstimate::Zhang)?.eval(p_t))
}

/// Lower-bound estimate with the inter-user interference folded into the
/// noise floor.
pub fn estimate_bd_lower<T: Real>(
    pre: &PrecodeResult<T>,
    p_t: T,
    w: T,
    n0: T,
    mode: &Mode,
    stats: &[LinkStats<T>],
) -> Result<T> {
    check_power_bandwidth(p_t, w, n0)?;
    Ok(profile_bd_estimate(pre, w, n0, mode, stats, BdEstimate::Lower)?.eval(p_t))
}

/// Upper-bound estimate: the lower bound plus `W sum_k (N_a_k / M_a)
/// log2 e` exactly.
pub fn estimate_bd_upper<T: Real>(
    pre: &PrecodeResult<T>,
    p_t: T,
    w: T,
    n0: T,
    mode: &Mode,
    stats: &[LinkStats<T>],
) -> Result<T> {
    check_power_bandwidth(p_t, w, n0)?;
    Ok(profile_bd_estimate(pre, w, n0, mode, stats, BdEstimate::Upper)?.eval(p_t))
}
