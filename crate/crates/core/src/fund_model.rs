//! The geometric Brownian motion fund, the law of its running maximum and
//! grid-path simulation used as the Monte Carlo oracle.
//!
//! The log fund value follows `mu*t + sigma*W_t`. All closed forms in the
//! model modules reduce to functionals of the running maximum
//! `M_t = max_{0<=s<=t} (mu*s + sigma*W_s)`, whose density is
//!
//! ```text
//! g(y; t, m) = 2/(sqrt(2 pi t) sigma) exp(-(y - m t)^2 / (2 sigma^2 t))
//!            - exp(2 m y / sigma^2) m / sigma^2 * erfc((y + m t) / (sqrt(2 t) sigma))
//! ```
//!
//! The drift argument is explicit because the withdrawal functionals evaluate
//! the same density under exponentially tilted drifts (`m + sigma^2`,
//! `m + 2 sigma^2`).

use crate::error::{Error, Result};
use crate::numerics::special::{erfc_raw, normal_pdf, phi};
use crate::numerics::{integrate_semi_infinite, QuadratureSpec, RngStream, DEFAULT_ABS_TOL, DEFAULT_REL_TOL};

/// Annual log-drift and log-volatility of the fund.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundParams {
    mu: f64,
    sigma: f64,
}

impl FundParams {
    /// `mu` must be finite and `sigma` strictly positive (every closed form
    /// divides by `sigma`).
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::domain(format!("mu must be finite, got {mu}")));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::domain(format!("sigma must be strictly positive, got {sigma}")));
        }
        Ok(FundParams { mu, sigma })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// The exponential growth rate of the mean: `mu + sigma^2 / 2`.
    pub fn growth_rate(&self) -> f64 {
        self.mu + 0.5 * self.sigma * self.sigma
    }
}

/// One simulated path, reduced to the two statistics every functional needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSample {
    /// Terminal log value `mu*t + sigma*W_t`.
    pub terminal_log: f64,
    /// Grid maximum of the log value over `[0, t]`; at least `max(0, terminal_log)`.
    pub running_max: f64,
    /// Horizon in years.
    pub horizon: f64,
}

/// `E[exp(mu*t + sigma*W_t)] = exp((mu + sigma^2/2) t)`.
pub fn growth_factor_moment(params: &FundParams, t: f64) -> Result<f64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::domain(format!("horizon must be nonnegative, got {t}")));
    }
    Ok((params.growth_rate() * t).exp())
}

/// Unchecked running-max density, overflow-safe for large `y`.
pub(crate) fn density_raw(y: f64, t: f64, drift: f64, sigma: f64) -> f64 {
    let s2 = sigma * sigma;
    let gauss_exp = -(y - drift * t).powi(2) / (2.0 * s2 * t);
    let term1 = 2.0 / ((2.0 * std::f64::consts::PI * t).sqrt() * sigma) * gauss_exp.exp();
    let z = (y + drift * t) / ((2.0 * t).sqrt() * sigma);
    if z > 20.0 {
        // erfc(z) ~ exp(-z^2)/(z sqrt(pi)) (1 - u/2 + 3u^2/4 - 15u^3/8), u = 1/z^2;
        // the exponentials recombine into the same Gaussian as term1, which
        // avoids the inf * 0 product of the direct formula.
        let u = 1.0 / (z * z);
        let series = 1.0 + u * (-0.5 + u * (0.75 - 1.875 * u));
        let term2 = drift / s2 * gauss_exp.exp() / (z * std::f64::consts::PI.sqrt()) * series;
        term1 - term2
    } else {
        let term2 = (2.0 * drift * y / s2).exp() * drift / s2 * erfc_raw(z);
        term1 - term2
    }
}

/// Density of the running maximum `M_t` at `y >= 0`, evaluated under the
/// given drift (the volatility comes from `params`).
pub fn running_max_density(y: f64, t: f64, drift: f64, params: &FundParams) -> Result<f64> {
    if !(y.is_finite() && y >= 0.0) {
        return Err(Error::domain(format!(
            "running maximum is almost surely nonnegative; density undefined at y = {y}"
        )));
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::domain(format!("horizon must be positive, got {t}")));
    }
    if !drift.is_finite() {
        return Err(Error::domain(format!("drift must be finite, got {drift}")));
    }
    Ok(density_raw(y, t, drift, params.sigma))
}

/// Truncation point `Y` such that the mass of `(1 + linear_slack + y) * g(y)`
/// beyond `Y` is certified below `abs_tol / 10`.
///
/// Uses `g(y) <= 2 phi_{mt, sigma^2 t}(y)` (the reflection term is
/// nonnegative for positive drift) plus, for negative drift, an explicit
/// exponential envelope `2|m|/sigma^2 * exp(2 m y / sigma^2)`.
pub(crate) fn truncation_for(t: f64, drift: f64, sigma: f64, linear_slack: f64, abs_tol: f64) -> f64 {
    let sd = sigma * t.sqrt();
    let mt = drift * t;
    let c = 1.0 + linear_slack.max(0.0);
    let target = abs_tol / 10.0;

    let bound = |y: f64| -> f64 {
        let z = (y - mt) / sd;
        // tail mass and first-moment tail of the N(mt, sd^2) envelope
        let tail0 = phi(-z);
        let tail1 = mt * tail0 + sd * normal_pdf(z);
        let mut b = 2.0 * (c * tail0 + tail1.max(0.0));
        if drift < 0.0 {
            // reflection term flips sign for negative drift; cover it with
            // the exponential envelope 2|m|/sigma^2 * exp(-k y), k = 2|m|/sigma^2
            let k = -2.0 * drift / (sigma * sigma);
            b += k * (-k * y).exp() * ((c + y) / k + 1.0 / (k * k));
        }
        b
    };

    let mut y = (mt + 6.0 * sd).max(1.0);
    let step = sd.max(0.25);
    let mut iter = 0;
    while bound(y) > target && iter < 400 {
        y += step;
        iter += 1;
    }
    y
}

/// `P[M_t >= level]`, by quadrature of the running-max density. Levels at or
/// below zero have probability one.
pub fn running_max_tail_prob(level: f64, t: f64, drift: f64, params: &FundParams) -> Result<f64> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::domain(format!("horizon must be positive, got {t}")));
    }
    if !level.is_finite() {
        return Err(Error::domain(format!("level must be finite, got {level}")));
    }
    if level <= 0.0 {
        return Ok(1.0);
    }
    let sigma = params.sigma;
    let trunc = truncation_for(t, drift, sigma, 0.0, DEFAULT_ABS_TOL).max(level);
    let spec = QuadratureSpec::new(DEFAULT_ABS_TOL, DEFAULT_REL_TOL, trunc)?;
    let mass = integrate_semi_infinite(|y| density_raw(y, t, drift, sigma), level, &spec)?;
    Ok(mass.clamp(0.0, 1.0))
}

/// Euler path of `mu*s + sigma*W_s` on a uniform grid with its grid maximum.
///
/// The grid maximum underestimates the continuous maximum with bias
/// `O(sqrt(t / steps))`; tests that compare against closed forms carry an
/// explicit discretisation allowance for this.
pub fn simulate_path_with_max(params: &FundParams, t: f64, steps: u32, stream: RngStream) -> Result<PathSample> {
    if steps == 0 {
        return Err(Error::domain("path simulation needs at least one step".to_string()));
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::domain(format!("horizon must be positive, got {t}")));
    }
    let dt = t / steps as f64;
    let vol = params.sigma * dt.sqrt();
    let drift = params.mu * dt;
    let mut src = stream.normals();
    let mut x = 0.0f64;
    let mut max = 0.0f64;
    for _ in 0..steps {
        x += drift + vol * src.sample_standard_normal();
        if x > max {
            max = x;
        }
    }
    Ok(PathSample { terminal_log: x, running_max: max, horizon: t })
}

/// Closed-form tail `P[M_t >= level]` from the reflection principle; kept as
/// an independent cross-check of the quadrature route (and used by the
/// barrier solver tests).
#[doc(hidden)]
pub fn running_max_tail_prob_reflection(level: f64, t: f64, drift: f64, params: &FundParams) -> f64 {
    if level <= 0.0 {
        return 1.0;
    }
    let sd = params.sigma * t.sqrt();
    let s2 = params.sigma * params.sigma;
    phi(-(level - drift * t) / sd) + (2.0 * drift * level / s2).exp() * phi(-(level + drift * t) / sd)
}
