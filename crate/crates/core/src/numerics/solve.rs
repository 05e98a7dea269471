//! Ratio maximization for strictly concave, increasing numerators.
//!
//! Every optimality condition in this crate reduces to maximizing
//! `f(x) / (a x + b)` over `x >= 0` where `f` is nonnegative, strictly
//! concave and increasing. The stationarity condition is the fixed point
//! `x* = f(x*)/f'(x*) - b/a`, equivalently the root of
//!
//! ```text
//! psi(x) = f(x) - f'(x) (x + b/a)
//! ```
//!
//! `psi` is strictly increasing when `f` is strictly concave, so a sign
//! change brackets the unique root and bisection can always back up the
//! Newton iteration.

use crate::error::{Error, Result};
use crate::real::{machine_epsilon, Real};

/// A nonnegative, strictly concave, increasing function of one variable
/// together with its first derivative.
///
/// The derivative is supplied analytically where available; the
/// [`ConcaveFn::from_eval`] constructor falls back to a central
/// difference with step `1e-6 * max(1, x)`.
pub struct ConcaveFn<'a, T> {
    eval: Box<dyn Fn(T) -> T + Send + Sync + 'a>,
    deriv: Box<dyn Fn(T) -> T + Send + Sync + 'a>,
}

impl<'a, T: Real> ConcaveFn<'a, T> {
    pub fn new(
        eval: impl Fn(T) -> T + Send + Sync + 'a,
        deriv: impl Fn(T) -> T + Send + Sync + 'a,
    ) -> Self {
        Self {
            eval: Box::new(eval),
            deriv: Box::new(deriv),
        }
    }

    /// Build from the function alone; the derivative is a central
    /// difference clamped to the `x >= 0` domain.
    pub fn from_eval(eval: impl Fn(T) -> T + Send + Sync + Clone + 'a) -> Self {
        let eval2 = eval.clone();
        let deriv = move |x: T| {
            let h = T::lit(1e-6) * T::one().max(x.abs());
            let lo = (x - h).max(T::zero());
            let hi = x + h;
            (eval2(hi) - eval2(lo)) / (hi - lo)
        };
        Self {
            eval: Box::new(eval),
            deriv: Box::new(deriv),
        }
    }

    #[inline]
    pub fn eval(&self, x: T) -> T {
        (self.eval)(x)
    }

    #[inline]
    pub fn deriv(&self, x: T) -> T {
        (self.deriv)(x)
    }
}

/// Solver knobs for [`maximize_ratio`].
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig<T> {
    /// Relative tolerance on the stationarity residual: convergence is
    /// declared once `|psi(x)| <= rel_tol * f(x)`.
    pub rel_tol: T,
    pub max_iters: usize,
    /// Initial upper end of the root bracket, in the variable's units.
    /// Doubled up to 60 times before giving up.
    pub bracket_hi: T,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-10),
            max_iters: 100,
            bracket_hi: T::lit(1e6),
        }
    }
}

const BRACKET_DOUBLINGS: usize = 60;
const GRID_POINTS: usize = 64;

/// Sample `f` on a 64-point log grid and reject callers whose function is
/// not increasing with nonincreasing chord slopes (concavity).
fn check_concave_increasing<T: Real>(f: &ConcaveFn<'_, T>, hi: T) -> Result<()> {
    let lo = hi * T::lit(1e-9);
    let ratio = (hi / lo).ln() / T::of_usize(GRID_POINTS - 1);
    let mut xs = Vec::with_capacity(GRID_POINTS);
    for i in 0..GRID_POINTS {
        xs.push(lo * (ratio * T::of_usize(i)).exp());
    }
    let ys: Vec<T> = xs.iter().map(|&x| f.eval(x)).collect();

    let f0 = f.eval(T::zero());
    if !f0.is_finite() || f0 < -T::lit(1e-12) * ys[GRID_POINTS - 1].abs() {
        return Err(Error::NotConcave(format!(
            "f(0) must be nonnegative, got {f0:?}"
        )));
    }

    let scale = ys
        .iter()
        .fold(T::zero(), |acc, y| acc.max(y.abs()))
        .max(T::lit(1e-300));
    // Sampled values carry roundoff of order eps * scale; chord slopes
    // inherit it divided by the local grid step.
    let eps = machine_epsilon::<T>();
    let value_noise = eps * T::lit(16.0) * scale;
    let slope_slack = T::lit(1e-7);
    let mut prev: Option<(T, T)> = None; // (slope, slope noise)
    for i in 0..GRID_POINTS - 1 {
        if !ys[i].is_finite() || !ys[i + 1].is_finite() {
            return Err(Error::NotConcave("non-finite sample".into()));
        }
        let dx = xs[i + 1] - xs[i];
        let slope = (ys[i + 1] - ys[i]) / dx;
        let noise = value_noise / dx;
        if slope <= T::zero() && (ys[i + 1] - ys[i]).abs() > value_noise.max(T::lit(1e-13) * scale)
        {
            return Err(Error::NotConcave(format!(
                "not increasing near x = {:?}",
                xs[i]
            )));
        }
        if let Some((prev_slope, prev_noise)) = prev {
            let slack = slope_slack * (prev_slope.abs() + slope.abs()) + prev_noise + noise;
            if slope > prev_slope + slack {
                return Err(Error::NotConcave(format!(
                    "chord slopes increase near x = {:?}",
                    xs[i]
                )));
            }
        }
        prev = Some((slope, noise));
    }
    Ok(())
}

/// Maximize `f(x) / (a x + b)` over `x >= 0`.
///
/// Returns `(x_star, ratio_star)`. The boundary `x* = 0` is returned when
/// the ratio is already nonincreasing at the origin.
pub fn maximize_ratio<T: Real>(
    f: &ConcaveFn<'_, T>,
    a: T,
    b: T,
    cfg: &SolverConfig<T>,
) -> Result<(T, T)> {
    if !a.is_finite() || a <= T::zero() || !b.is_finite() || b <= T::zero() {
        return Err(Error::Domain(format!(
            "maximize_ratio needs a > 0 and b > 0, got a = {a:?}, b = {b:?}"
        )));
    }
    check_concave_increasing(f, cfg.bracket_hi)?;

    let shift = b / a;
    let psi = |x: T| f.eval(x) - f.deriv(x) * (x + shift);

    // psi(0) >= 0 means the ratio is nonincreasing from the start.
    let psi0 = psi(T::zero());
    if psi0 >= T::zero() {
        return Ok((T::zero(), f.eval(T::zero()) / b));
    }

    let mut hi = cfg.bracket_hi;
    let mut found = false;
    for _ in 0..=BRACKET_DOUBLINGS {
        if psi(hi) > T::zero() {
            found = true;
            break;
        }
        hi *= T::lit(2.0);
    }
    if !found {
        return Err(Error::NoOptimum);
    }
    let mut lo = T::zero();

    let tol = cfg.rel_tol.max(machine_epsilon::<T>() * T::lit(8.0));
    let mut x = (lo + hi) / T::lit(2.0);
    for _ in 0..cfg.max_iters {
        let px = psi(x);
        let fx = f.eval(x);
        if px.abs() <= tol * fx.abs().max(T::lit(1e-300)) {
            return Ok((x, fx / (a * x + b)));
        }
        if px < T::zero() {
            lo = x;
        } else {
            hi = x;
        }

        // Newton on psi; psi'(x) = -f''(x) (x + b/a) with f'' from a
        // central difference of the (analytic) first derivative.
        let h = T::lit(1e-6) * T::one().max(x.abs());
        let dlo = (x - h).max(T::zero());
        let f2 = (f.deriv(x + h) - f.deriv(dlo)) / (x + h - dlo);
        let dpsi = -f2 * (x + shift);
        let newton = if dpsi.is_finite() && dpsi != T::zero() {
            Some(x - px / dpsi)
        } else {
            None
        };
        x = match newton {
            Some(nx) if nx.is_finite() && nx > lo && nx < hi => nx,
            _ => (lo + hi) / T::lit(2.0),
        };

        // Bracket collapsed to machine resolution: accept the midpoint.
        if hi - lo <= machine_epsilon::<T>() * T::lit(4.0) * hi.abs() {
            let fx = f.eval(x);
            return Ok((x, fx / (a * x + b)));
        }
    }
    Err(Error::Numerical(
        "maximize_ratio did not converge within max_iters".into(),
    ))
}
