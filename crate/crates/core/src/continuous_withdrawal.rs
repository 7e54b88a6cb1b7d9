//! Continuous profit skimming: the reflected fund value, the debt account,
//! credibility and profitability conditions, the constrained barrier
//! optimiser and the expected-value functionals.
//!
//! With `M_t` the running maximum of the log fund value and
//! `c = ln(1 + b)`, the contributor keeps
//! `R_t(b) = exp(terminal_log - (M_t - c)^+)` and the debt account holds
//! `D_t(b) = (1 + b)(M_t - c)^+`. Expectations reduce to integrals against
//! the running-max density, evaluated under the exponentially tilted drift
//! `mu + sigma^2` for the retained part (`mu + 2 sigma^2` for the second
//! moment).

use crate::error::{Error, Result};
use crate::fund_model::{
    density_raw, running_max_tail_prob, simulate_path_with_max, truncation_for, FundParams, PathSample,
};
use crate::numerics::{find_root, integrate, integrate_semi_infinite, QuadratureSpec, DEFAULT_ABS_TOL, DEFAULT_REL_TOL};

/// Required repayment probability, liquidity cap and horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CredibilityConstraint {
    p: f64,
    alpha_cap: f64,
    horizon: f64,
}

impl CredibilityConstraint {
    pub fn new(p: f64, alpha_cap: f64, horizon: f64) -> Result<Self> {
        if !(p.is_finite() && p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!("repayment probability must lie in (0,1), got {p}")));
        }
        if !(alpha_cap.is_finite() && alpha_cap > 0.0) {
            return Err(Error::domain(format!("liquidity cap must be positive, got {alpha_cap}")));
        }
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::domain(format!("horizon must be positive, got {horizon}")));
        }
        Ok(CredibilityConstraint { p, alpha_cap, horizon })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn alpha_cap(&self) -> f64 {
        self.alpha_cap
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }
}

/// Output of the constrained barrier optimisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierSolution {
    /// Quantile level with running-max tail probability `p`.
    pub p_tilde: f64,
    /// Largest credible barrier at the liquidity cap; `None` when infeasible.
    pub b_star: Option<f64>,
    /// Whether the admissible set is nonempty, i.e. `alpha_cap >= e^{1 - p_tilde}`.
    pub feasible: bool,
    /// Minimal liquidity cap `e^{1 - p_tilde}` for which a barrier exists.
    pub min_alpha: f64,
}

/// Retained value and debt account of one path, in growth-factor units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WithdrawalOutcome {
    pub retained: f64,
    pub debt_account: f64,
}

/// Apply the skimming identity to one simulated path.
pub fn withdrawal_outcome(path: &PathSample, b: f64) -> Result<WithdrawalOutcome> {
    let c = check_barrier(b)?;
    let overshoot = (path.running_max - c).max(0.0);
    Ok(WithdrawalOutcome {
        retained: (path.terminal_log - overshoot).exp(),
        debt_account: (1.0 + b) * overshoot,
    })
}

fn check_barrier(b: f64) -> Result<f64> {
    if !(b.is_finite() && b > -1.0) {
        return Err(Error::domain(format!("barrier must satisfy b > -1, got {b}")));
    }
    Ok(b.ln_1p())
}

fn check_horizon(t: f64) -> Result<()> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::domain(format!("horizon must be positive, got {t}")));
    }
    Ok(())
}

/// `P[alpha * D_t(b) >= 1]` in deficit-normalised units: the running maximum
/// must reach `ln(1 + b) + 1 / (alpha (1 + b))`.
pub fn credibility_prob(params: &FundParams, b: f64, alpha: f64, t: f64) -> Result<f64> {
    let c = check_barrier(b)?;
    check_horizon(t)?;
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::domain(format!("alpha must be strictly positive, got {alpha}")));
    }
    let level = c + 1.0 / (alpha * (1.0 + b));
    running_max_tail_prob(level, t, params.mu(), params)
}

/// The quantile level `p_tilde` with `P[M_t >= p_tilde] = p`.
pub fn solve_p_tilde(params: &FundParams, p: f64, t: f64) -> Result<f64> {
    if !(p.is_finite() && p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("probability must lie in (0,1), got {p}")));
    }
    check_horizon(t)?;
    let mut hi = params.mu().abs() * t + params.sigma() * t.sqrt();
    let mut tries = 0;
    while running_max_tail_prob(hi, t, params.mu(), params)? > p {
        hi *= 2.0;
        tries += 1;
        if tries > 60 {
            return Err(Error::Search("running-max quantile bracket failed to close".to_string()));
        }
    }
    let f = |level: f64| running_max_tail_prob(level, t, params.mu(), params).unwrap_or(f64::NAN) - p;
    find_root(f, 0.0, hi, 1e-12)
}

/// `Delta(b) = 1 / ((1 + b)(p_tilde - ln(1 + b)))`, the minimal multiplier
/// that makes barrier `b` credible.
pub fn minimal_credible_alpha(b: f64, p_tilde: f64) -> Result<f64> {
    let c = check_barrier(b)?;
    if !(c < p_tilde) {
        return Err(Error::domain(format!(
            "barrier ln(1+b) = {c} must stay below p_tilde = {p_tilde}"
        )));
    }
    Ok(1.0 / ((1.0 + b) * (p_tilde - c)))
}

/// Solve the constrained optimisation: the loss-minimising pair is
/// `(b*, alpha_cap)` with `Delta(b*) = alpha_cap`, provided the cap clears
/// `e^{1 - p_tilde}`. Infeasibility is a result, not an error.
pub fn optimal_barrier(constraint: &CredibilityConstraint, params: &FundParams) -> Result<BarrierSolution> {
    let p_tilde = solve_p_tilde(params, constraint.p, constraint.horizon)?;
    let min_alpha = (1.0 - p_tilde).exp();
    if constraint.alpha_cap < min_alpha {
        return Ok(BarrierSolution { p_tilde, b_star: None, feasible: false, min_alpha });
    }
    // root of (1+b)(p_tilde - ln(1+b)) = 1/alpha on [e^{p_tilde - 1} - 1, e^{p_tilde} - 1)
    let lo = (p_tilde - 1.0).exp() - 1.0;
    let hi = p_tilde.exp() - 1.0;
    let inv_cap = 1.0 / constraint.alpha_cap;
    let g = |b: f64| (1.0 + b) * (p_tilde - b.ln_1p()) - inv_cap;
    let b_star = find_root(g, lo, hi - 1e-14, 1e-12)?;
    Ok(BarrierSolution { p_tilde, b_star: Some(b_star), feasible: true, min_alpha })
}

/// Expected retained growth factor
/// `V_t(b) = e^{(mu + s^2/2) t} { int_0^c g(y; t, mu + s^2) dy
///         + (1 + b) int_c^inf e^{-y} g(y; t, mu + s^2) dy }`.
///
/// For `b <= 0` the first integral is empty (the running maximum is
/// nonnegative) and the prefactor `1 + b` stays on the tail integral.
pub fn expected_retained(b: f64, params: &FundParams, t: f64) -> Result<f64> {
    let c = check_barrier(b)?;
    check_horizon(t)?;
    let sigma = params.sigma();
    let drift = params.mu() + sigma * sigma;
    let prefactor = (params.growth_rate() * t).exp();
    let head = if c > 0.0 {
        integrate(|y| density_raw(y, t, drift, sigma), 0.0, c, DEFAULT_ABS_TOL, DEFAULT_REL_TOL)?
    } else {
        0.0
    };
    let lower = c.max(0.0);
    let trunc = truncation_for(t, drift, sigma, 0.0, DEFAULT_ABS_TOL).max(lower);
    let spec = QuadratureSpec::new(DEFAULT_ABS_TOL, DEFAULT_REL_TOL, trunc)?;
    let tail = integrate_semi_infinite(|y| (-y).exp() * density_raw(y, t, drift, sigma), lower, &spec)?;
    Ok(prefactor * (head + (1.0 + b) * tail))
}

/// Expected debt account
/// `U_t(b) = (1 + b) int_{max(c,0)}^inf (y - c) g(y; t, mu) dy`.
pub fn expected_debt(b: f64, params: &FundParams, t: f64) -> Result<f64> {
    let c = check_barrier(b)?;
    check_horizon(t)?;
    let sigma = params.sigma();
    let drift = params.mu();
    let lower = c.max(0.0);
    let trunc = truncation_for(t, drift, sigma, c.abs(), DEFAULT_ABS_TOL).max(lower);
    let spec = QuadratureSpec::new(DEFAULT_ABS_TOL, DEFAULT_REL_TOL, trunc)?;
    let mass = integrate_semi_infinite(|y| (y - c) * density_raw(y, t, drift, sigma), lower, &spec)?;
    Ok(((1.0 + b) * mass).max(0.0))
}

/// Normalised loss of the contributor, `L(b, alpha) = alpha - alpha V_t(b) - 1`.
pub fn normalized_loss(b: f64, alpha: f64, params: &FundParams, t: f64) -> Result<f64> {
    if alpha == 0.0 {
        // degenerate no-investment case: only the direct payment remains
        return Ok(-1.0);
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::domain(format!("alpha must be nonnegative, got {alpha}")));
    }
    let v = expected_retained(b, params, t)?;
    Ok(alpha - alpha * v - 1.0)
}

/// Entire loss including the expected debt surplus,
/// `L_e(b, alpha) = alpha - alpha V_t(b) - alpha U_t(b)`.
pub fn entire_loss(b: f64, alpha: f64, params: &FundParams, t: f64) -> Result<f64> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::domain(format!("alpha must be nonnegative, got {alpha}")));
    }
    let v = expected_retained(b, params, t)?;
    let u = expected_debt(b, params, t)?;
    Ok(alpha - alpha * v - alpha * u)
}

/// Profitability condition: the funded route beats paying the deficit
/// directly iff `alpha (1 - V_t(b)) < 1`.
pub fn profitability_check(b: f64, alpha: f64, params: &FundParams, t: f64) -> Result<bool> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::domain(format!("alpha must be nonnegative, got {alpha}")));
    }
    if alpha == 0.0 {
        return Ok(true);
    }
    let v = expected_retained(b, params, t)?;
    Ok(alpha * (1.0 - v) < 1.0)
}

fn second_moment_retained(b: f64, params: &FundParams) -> Result<f64> {
    let c = check_barrier(b)?;
    let sigma = params.sigma();
    let drift = params.mu() + 2.0 * sigma * sigma;
    let prefactor = (2.0 * params.mu() + 2.0 * sigma * sigma).exp();
    let head = if c > 0.0 {
        integrate(|y| density_raw(y, 1.0, drift, sigma), 0.0, c, DEFAULT_ABS_TOL, DEFAULT_REL_TOL)?
    } else {
        0.0
    };
    let lower = c.max(0.0);
    let trunc = truncation_for(1.0, drift, sigma, 0.0, DEFAULT_ABS_TOL).max(lower);
    let spec = QuadratureSpec::new(DEFAULT_ABS_TOL, DEFAULT_REL_TOL, trunc)?;
    let tail = integrate_semi_infinite(|y| (-2.0 * y).exp() * density_raw(y, 1.0, drift, sigma), lower, &spec)?;
    Ok(prefactor * (head + (1.0 + b) * (1.0 + b) * tail))
}

/// Mean-variance objective `V(b) - lambda E[R_1(b)^2]` over a one-year
/// horizon.
pub fn mean_variance_objective(b: f64, lambda: f64, params: &FundParams) -> Result<f64> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::domain(format!("weight lambda must be nonnegative, got {lambda}")));
    }
    let v = expected_retained(b, params, 1.0)?;
    if lambda == 0.0 {
        return Ok(v);
    }
    Ok(v - lambda * second_moment_retained(b, params)?)
}

/// Derivative of the mean-variance objective in `b`; positive whenever
/// `2 lambda (1 + b) <= 1`.
pub fn mean_variance_derivative(b: f64, lambda: f64, params: &FundParams) -> Result<f64> {
    let c = check_barrier(b)?;
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::domain(format!("weight lambda must be nonnegative, got {lambda}")));
    }
    let sigma = params.sigma();
    let lower = c.max(0.0);

    let drift1 = params.mu() + sigma * sigma;
    let trunc1 = truncation_for(1.0, drift1, sigma, 0.0, DEFAULT_ABS_TOL).max(lower);
    let spec1 = QuadratureSpec::new(DEFAULT_ABS_TOL, DEFAULT_REL_TOL, trunc1)?;
    let first = params.growth_rate().exp()
        * integrate_semi_infinite(|y| (-y).exp() * density_raw(y, 1.0, drift1, sigma), lower, &spec1)?;

    let drift2 = params.mu() + 2.0 * sigma * sigma;
    let trunc2 = truncation_for(1.0, drift2, sigma, 0.0, DEFAULT_ABS_TOL).max(lower);
    let spec2 = QuadratureSpec::new(DEFAULT_ABS_TOL, DEFAULT_REL_TOL, trunc2)?;
    let second = (2.0 * params.mu() + 2.0 * sigma * sigma).exp()
        * integrate_semi_infinite(|y| (-2.0 * y).exp() * density_raw(y, 1.0, drift2, sigma), lower, &spec2)?;

    Ok(first - 2.0 * lambda * (1.0 + b) * second)
}

/// Monte Carlo estimate of `(V_t(b), U_t(b))` from simulated grid paths;
/// used by the oracle tests to cross-check the quadrature route.
#[doc(hidden)]
pub fn simulate_withdrawal_moments(
    b: f64,
    params: &FundParams,
    t: f64,
    steps: u32,
    paths: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    check_barrier(b)?;
    let partials = crate::mc::map_chunks(paths as usize, |range| {
        let mut retained = 0.0;
        let mut debt = 0.0;
        for i in range {
            let path = simulate_path_with_max(params, t, steps, crate::numerics::RngStream::new(seed, i as u64))
                .expect("validated parameters");
            let out = withdrawal_outcome(&path, b).expect("validated barrier");
            retained += out.retained;
            debt += out.debt_account;
        }
        (retained, debt)
    });
    let (mut retained, mut debt) = (0.0, 0.0);
    for (r, d) in partials {
        retained += r;
        debt += d;
    }
    Ok((retained / paths as f64, debt / paths as f64))
}
