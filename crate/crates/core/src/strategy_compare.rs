//! Head-to-head of lump-sum repayment, continuous withdrawal and paying the
//! deficit directly: loss curves over the horizon, their gap, the
//! indifference curve in the barrier, the decision rule and the state's
//! default probability for the lump-sum route.

use crate::continuous_withdrawal::{expected_retained, optimal_barrier, CredibilityConstraint};
use crate::error::{Error, Result};
use crate::fund_model::FundParams;
use crate::numerics::special::phi;
use crate::numerics::find_root;

/// The three possible recommendations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyLabel {
    Payg,
    Continuous,
    LumpSum,
}

impl std::fmt::Display for StrategyLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StrategyLabel::Payg => "PAYG",
            StrategyLabel::Continuous => "C",
            StrategyLabel::LumpSum => "LS",
        };
        f.write_str(s)
    }
}

/// Decision plus every intermediate value needed to audit it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyDecision {
    pub label: StrategyLabel,
    pub l_d: f64,
    /// Continuous-withdrawal loss at the optimal barrier; `None` when the
    /// credibility constraint is infeasible at this liquidity cap.
    pub l_c: Option<f64>,
    pub lambda_gap: Option<f64>,
    pub b_star: Option<f64>,
    /// False when the cap is below `e^{1 - p_tilde}` and the funded routes
    /// are ruled out by credibility alone.
    pub feasible: bool,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::domain(format!("alpha must be strictly positive, got {alpha}")));
    }
    Ok(())
}

/// Loss of the lump-sum route over `t` years:
/// `L_d(t) = alpha - alpha e^{(mu + sigma^2/2) t} + 1`.
pub fn lump_sum_loss(t: f64, alpha: f64, params: &FundParams) -> Result<f64> {
    check_alpha(alpha)?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::domain(format!("horizon must be nonnegative, got {t}")));
    }
    Ok(alpha - alpha * (params.growth_rate() * t).exp() + 1.0)
}

/// Loss of the continuous-withdrawal route,
/// `L_c(t, b) = alpha - alpha V_t(b) - 1`.
pub fn continuous_loss(t: f64, b: f64, alpha: f64, params: &FundParams) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(alpha - alpha * expected_retained(b, params, t)? - 1.0)
}

/// Gap between the two losses, `Lambda(t, b) = L_c(t, b) - L_d(t)`.
///
/// At `t = 0` the retained factor collapses to `min(1, 1 + b)`, giving the
/// closed form `-2` for `b >= 0` and `-alpha b - 2` below.
pub fn lambda_gap(t: f64, b: f64, alpha: f64, params: &FundParams) -> Result<f64> {
    check_alpha(alpha)?;
    if !(b.is_finite() && b > -1.0) {
        return Err(Error::domain(format!("barrier must satisfy b > -1, got {b}")));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::domain(format!("horizon must be nonnegative, got {t}")));
    }
    if t == 0.0 {
        return Ok(if b >= 0.0 { -2.0 } else { -alpha * b - 2.0 });
    }
    Ok(continuous_loss(t, b, alpha, params)? - lump_sum_loss(t, alpha, params)?)
}

/// The barrier at which the two strategies break even: the root of
/// `Lambda(t, .) = 0`.
///
/// The initial bracket is `[-2/alpha + eps, e^{p_tilde} - 1 - eps]` with
/// `p_tilde` taken at `p = 0.5`; since the gap at the upper end can still be
/// positive for long horizons, the upper edge is extended geometrically
/// until the sign changes. `None` means the gap is already negative at the
/// lower edge, i.e. there is no crossing in the admissible region.
pub fn beta_curve(t: f64, alpha: f64, params: &FundParams) -> Result<Option<f64>> {
    check_alpha(alpha)?;
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::domain(format!("horizon must be positive, got {t}")));
    }
    let p_tilde = crate::continuous_withdrawal::solve_p_tilde(params, 0.5, t)?;
    let lo = (-2.0 / alpha + 1e-6).max(-1.0 + 1e-9);
    let mut hi = p_tilde.exp() - 1.0 - 1e-6;
    if hi <= lo {
        hi = lo + 0.1;
    }
    let gap = |b: f64| lambda_gap(t, b, alpha, params).unwrap_or(f64::NAN);
    if gap(lo) < 0.0 {
        return Ok(None);
    }
    let mut tries = 0;
    while gap(hi) > 0.0 {
        hi = 2.0 * (1.0 + hi) - 1.0;
        tries += 1;
        if tries > 60 {
            return Err(Error::Search(format!(
                "loss gap stayed positive up to b = {hi} at t = {t}, alpha = {alpha}"
            )));
        }
    }
    Ok(Some(find_root(gap, lo, hi, 1e-10)?))
}

/// Apply the decision rule at `(t, alpha)` with required repayment
/// probability `p` and the cell's `alpha` as the liquidity cap.
///
/// Order of the rules: an infeasible credibility constraint falls back to
/// paying directly; otherwise PAYG wins when both losses are nonnegative;
/// otherwise the sign of the gap picks lump sum (positive) or continuous
/// withdrawal (nonpositive).
pub fn recommend_strategy(t: f64, alpha: f64, p: f64, params: &FundParams) -> Result<StrategyDecision> {
    let l_d = lump_sum_loss(t, alpha, params)?;
    let constraint = CredibilityConstraint::new(p, alpha, t)?;
    let solution = optimal_barrier(&constraint, params)?;
    if !solution.feasible {
        return Ok(StrategyDecision {
            label: StrategyLabel::Payg,
            l_d,
            l_c: None,
            lambda_gap: None,
            b_star: None,
            feasible: false,
        });
    }
    let b_star = solution.b_star.expect("feasible solution carries a barrier");
    let l_c = continuous_loss(t, b_star, alpha, params)?;
    let gap = l_c - l_d;
    let label = if l_d >= 0.0 && l_c >= 0.0 {
        StrategyLabel::Payg
    } else if gap > 0.0 {
        StrategyLabel::LumpSum
    } else {
        StrategyLabel::Continuous
    };
    Ok(StrategyDecision {
        label,
        l_d,
        l_c: Some(l_c),
        lambda_gap: Some(gap),
        b_star: Some(b_star),
        feasible: true,
    })
}

/// Probability that the state is not fully repaid on the lump-sum route:
/// `P[alpha e^{mu t + sigma W_t} < 1 + alpha] = Phi((ln((1+alpha)/alpha) - mu t) / (sigma sqrt(t)))`.
pub fn lump_sum_default_prob(t: f64, alpha: f64, params: &FundParams) -> Result<f64> {
    check_alpha(alpha)?;
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::domain(format!("horizon must be positive, got {t}")));
    }
    let z = (((1.0 + alpha) / alpha).ln() - params.mu() * t) / (params.sigma() * t.sqrt());
    Ok(phi(z))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn standard() -> FundParams {
        FundParams::new(0.04, 0.2).unwrap()
    }

    #[test]
    fn lump_sum_loss_examples() {
        let p = standard();
        assert!((lump_sum_loss(10.0, 10.0, &p).unwrap() - -7.2211).abs() < 1e-4);
        assert!((lump_sum_loss(1.0, 10.0, &p).unwrap() - 0.3816).abs() < 1e-4);
        // alpha cancels at t = 0
        assert_eq!(lump_sum_loss(0.0, 3.0, &p).unwrap(), 1.0);
        assert_eq!(lump_sum_loss(0.0, 10.0, &p).unwrap(), 1.0);
    }

    #[test]
    fn continuous_loss_examples() {
        let p = standard();
        assert!((continuous_loss(1.0, 0.06574, 10.0, &p).unwrap() - -0.2603).abs() < 5e-4);
        assert!((continuous_loss(10.0, 0.8707, 10.0, &p).unwrap() - -3.5291).abs() < 5e-3);
        // large barrier: no skimming, L_c -> L_d - 2
        let lc = continuous_loss(1.0, 1e6, 10.0, &p).unwrap();
        let ld = lump_sum_loss(1.0, 10.0, &p).unwrap();
        assert!((lc - (ld - 2.0)).abs() < 1e-5);
    }

    #[test]
    fn gap_construction_and_t_zero() {
        let p = standard();
        // two independently computed sides
        for (t, b, a) in [(1.0, 0.06574, 10.0), (10.0, 0.8707, 10.0), (2.0, -0.1, 4.0)] {
            let gap = lambda_gap(t, b, a, &p).unwrap();
            let direct = a * (p.growth_rate() * t).exp()
                - a * crate::continuous_withdrawal::expected_retained(b, &p, t).unwrap()
                - 2.0;
            assert!((gap - direct).abs() < 1e-12, "gap mismatch at t={t}, b={b}");
        }
        assert_eq!(lambda_gap(0.0, 0.1, 10.0, &p).unwrap(), -2.0);
        assert_eq!(lambda_gap(0.0, -0.1, 10.0, &p).unwrap(), 1.0 - 2.0);
        assert!((lambda_gap(10.0, 0.8707, 10.0, &p).unwrap() - 3.6921).abs() < 5e-3);
    }

    #[test]
    fn gap_monotone_in_t_and_b() {
        let p = standard();
        let mut prev = f64::NEG_INFINITY;
        for &t in &[0.5, 1.0, 2.0, 4.0, 8.0] {
            let g = lambda_gap(t, 0.1, 10.0, &p).unwrap();
            assert!(g > prev, "gap not increasing in t at {t}");
            prev = g;
        }
        let mut prev = f64::INFINITY;
        for i in 0..12 {
            let b = -0.3 + 0.1 * i as f64;
            let g = lambda_gap(2.0, b, 10.0, &p).unwrap();
            assert!(g < prev, "gap not decreasing in b at {b}");
            prev = g;
        }
    }

    #[test]
    fn beta_curve_defining_property() {
        let p = standard();
        for &t in &[1.0, 5.0, 10.0] {
            let beta = beta_curve(t, 10.0, &p).unwrap().expect("crossing exists");
            let residual = lambda_gap(t, beta, 10.0, &p).unwrap();
            assert!(residual.abs() < 1e-8, "Lambda(t, beta(t)) = {residual} at t={t}");
            // local sign pattern around the root
            assert!(lambda_gap(t, beta - 1e-3, 10.0, &p).unwrap() > 0.0);
            assert!(lambda_gap(t, beta + 1e-3, 10.0, &p).unwrap() < 0.0);
        }
        let b1 = beta_curve(1.0, 10.0, &p).unwrap().unwrap();
        let b10 = beta_curve(10.0, 10.0, &p).unwrap().unwrap();
        assert!(b1 < b10, "beta must increase with the horizon: {b1} vs {b10}");
        // frozen reference points
        assert!((b1 - -0.0139405257777).abs() < 1e-6);
        assert!((b10 - 2.28142696389).abs() < 1e-4);
    }

    #[test]
    fn beta_inverse_lookup() {
        // the horizon at which beta(t) = 0.06574 is t = 1.60943529; the gap
        // vanishes there by construction
        let p = standard();
        let t_star = 1.60943528877;
        let residual = lambda_gap(t_star, 0.06574, 10.0, &p).unwrap();
        assert!(residual.abs() < 1e-6, "got {residual}");
        let beta = beta_curve(t_star, 10.0, &p).unwrap().unwrap();
        assert!((beta - 0.06574).abs() < 1e-6);
    }

    #[test]
    fn recommendation_reference_cells() {
        let p = standard();
        let d = recommend_strategy(1.0, 3.0, 0.5, &p).unwrap();
        assert_eq!(d.label, StrategyLabel::Payg);
        let d = recommend_strategy(4.0, 8.0, 0.5, &p).unwrap();
        assert_eq!(d.label, StrategyLabel::LumpSum);
        let d = recommend_strategy(10.0, 2.0, 0.5, &p).unwrap();
        assert_eq!(d.label, StrategyLabel::Continuous);
        // infeasible cap forces PAYG with the infeasibility noted
        let d = recommend_strategy(1.0, 1.0, 0.5, &p).unwrap();
        assert_eq!(d.label, StrategyLabel::Payg);
        assert!(!d.feasible);
        assert!(d.l_c.is_none());
    }

    #[test]
    fn default_prob_examples() {
        let p = standard();
        assert!((lump_sum_default_prob(10.0, 2.0, &p).unwrap() - 0.50).abs() < 5e-3);
        assert!((lump_sum_default_prob(10.0, 2.0, &p).unwrap() - 0.503447255101).abs() < 1e-9);
        // the printed reference grid rounds this cell to 0.99; the formula
        // value is 0.99945
        assert!((lump_sum_default_prob(1.0, 1.0, &p).unwrap() - 0.999451).abs() < 1e-5);
        // alpha -> infinity: ln((1+a)/a) -> 0
        let v = lump_sum_default_prob(10.0, 1e9, &p).unwrap();
        assert!((v - 0.263544628433).abs() < 1e-6);
        let mut prev = 1.0;
        for &t in &[1.0, 2.0, 4.0, 8.0, 16.0] {
            let v = lump_sum_default_prob(t, 3.0, &p).unwrap();
            assert!(v < prev, "default probability not decreasing in t");
            prev = v;
        }
    }
}
