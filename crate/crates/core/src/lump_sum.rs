//! Annual payback-first analytics and the payback-above-a-return variant,
//! all in closed form.
//!
//! One year of the scheme invests `alpha * (C_j - C_0)` and settles at year
//! end; everything reduces to Black-Scholes-style expectations of the single
//! normal increment `W_{j+1} - W_j`. Currency results scale linearly in the
//! deficit, so the formulas are evaluated in deficit-normalised units and
//! scaled on the way out.

use crate::error::{Error, Result};
use crate::fund_model::FundParams;
use crate::numerics::special::phi;
use crate::numerics::std_normal_quantile;

/// One year's baseline and required contribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeficitStep {
    c0: f64,
    cj: f64,
}

impl DeficitStep {
    /// Requires `cj > c0 > 0`.
    pub fn new(c0: f64, cj: f64) -> Result<Self> {
        if !(c0.is_finite() && cj.is_finite() && c0 > 0.0 && cj > c0) {
            return Err(Error::domain(format!(
                "deficit step needs cj > c0 > 0, got c0 = {c0}, cj = {cj}"
            )));
        }
        Ok(DeficitStep { c0, cj })
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn cj(&self) -> f64 {
        self.cj
    }

    /// The deficit `C_j - C_0` covered by the state.
    pub fn deficit(&self) -> f64 {
        self.cj - self.c0
    }
}

/// Investment multiplier and return barrier of the payback variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierPolicy {
    alpha: f64,
    b: f64,
}

impl BarrierPolicy {
    /// Requires `alpha > 0` and `b >= -1`; the expected-value formulas
    /// additionally need `b > -1` and check it at the call site.
    pub fn new(alpha: f64, b: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::domain(format!("alpha must be strictly positive, got {alpha}")));
        }
        if !(b.is_finite() && b >= -1.0) {
            return Err(Error::domain(format!("barrier must satisfy b >= -1, got {b}")));
        }
        Ok(BarrierPolicy { alpha, b })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::domain(format!("alpha must be strictly positive, got {alpha}")));
    }
    Ok(())
}

/// Probability that the year's deficit is fully paid back:
/// `Phi((mu + ln alpha) / sigma)`. Strictly increasing in `alpha`.
pub fn full_payback_prob(params: &FundParams, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(phi((params.mu() + alpha.ln()) / params.sigma()))
}

/// Expected loss of the state for one year,
/// `(C_j - C_0) * { Phi(-(mu + ln a)/s) - a e^{mu + s^2/2} Phi(-(mu + s^2 + ln a)/s) }`.
pub fn expected_state_loss(params: &FundParams, alpha: f64, step: &DeficitStep) -> Result<f64> {
    check_alpha(alpha)?;
    let mu = params.mu();
    let s = params.sigma();
    let la = alpha.ln();
    let unit = phi(-(mu + la) / s) - alpha * params.growth_rate().exp() * phi(-(mu + s * s + la) / s);
    Ok(step.deficit() * unit)
}

/// Expected gain of the contributor after settling,
/// `(C_j - C_0) * { a e^{mu + s^2/2} Phi((mu + s^2 + ln a)/s) - Phi((mu + ln a)/s) }`.
pub fn expected_pc_gain(params: &FundParams, alpha: f64, step: &DeficitStep) -> Result<f64> {
    check_alpha(alpha)?;
    let mu = params.mu();
    let s = params.sigma();
    let la = alpha.ln();
    let unit = alpha * params.growth_rate().exp() * phi((mu + s * s + la) / s) - phi((mu + la) / s);
    Ok(step.deficit() * unit)
}

/// Expected fund position when the full deficit is always paid back:
/// `(C_j - C_0) * (alpha e^{mu + sigma^2/2} - 1)`.
pub fn expected_fund_after_forced_payback(params: &FundParams, alpha: f64, step: &DeficitStep) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(step.deficit() * (alpha * params.growth_rate().exp() - 1.0))
}

/// Expected gain net of the extra investment `(alpha - 1)(C_j - C_0)`.
pub fn expected_net_gain_vs_extra_investment(
    params: &FundParams,
    alpha: f64,
    step: &DeficitStep,
) -> Result<f64> {
    let gain = expected_pc_gain(params, alpha, step)?;
    Ok(gain - (alpha - 1.0) * step.deficit())
}

/// The multiplier that achieves a required payback probability:
/// `alpha = exp(sigma * Phi^-1(p) - mu)`.
pub fn alpha_for_payback_prob(params: &FundParams, p: f64) -> Result<f64> {
    let q = std_normal_quantile(p)?;
    Ok((params.sigma() * q - params.mu()).exp())
}

/// Probability of full repayment in the barrier variant:
/// `Phi((mu - ln(1 + b + 1/alpha)) / sigma)`.
pub fn barrier_payback_prob(params: &FundParams, policy: &BarrierPolicy) -> Result<f64> {
    let arg = 1.0 + policy.b + 1.0 / policy.alpha;
    if !(arg > 0.0) {
        return Err(Error::domain(format!(
            "barrier payback probability needs 1 + b + 1/alpha > 0, got {arg}"
        )));
    }
    Ok(phi((params.mu() - arg.ln()) / params.sigma()))
}

fn barrier_expected_debt_unit(params: &FundParams, policy: &BarrierPolicy) -> Result<f64> {
    if !(policy.b > -1.0) {
        return Err(Error::domain(format!(
            "expected barrier debt needs b > -1, got {}",
            policy.b
        )));
    }
    let mu = params.mu();
    let s = params.sigma();
    let c = policy.b.ln_1p();
    let unit = params.growth_rate().exp() * phi((mu + s * s - c) / s) - (1.0 + policy.b) * phi((mu - c) / s);
    Ok(policy.alpha * unit)
}

/// Expected transfer to the debt account,
/// `E[D_1] = a d { e^{mu + s^2/2} Phi((mu + s^2 - ln(1+b))/s) - (1+b) Phi((mu - ln(1+b))/s) }`.
pub fn barrier_expected_debt(params: &FundParams, policy: &BarrierPolicy, step: &DeficitStep) -> Result<f64> {
    Ok(step.deficit() * barrier_expected_debt_unit(params, policy)?)
}

/// Expected value retained by the contributor. Taken as the complement
/// `E[R_1] = a d e^{mu + s^2/2} - E[D_1]`, which pins down the sign
/// convention of the two Phi terms.
pub fn barrier_expected_retained(params: &FundParams, policy: &BarrierPolicy, step: &DeficitStep) -> Result<f64> {
    let debt_unit = barrier_expected_debt_unit(params, policy)?;
    Ok(step.deficit() * (policy.alpha * params.growth_rate().exp() - debt_unit))
}
