//! Evaluation of the scalar subcommands into reports.

use paygfund::continuous_withdrawal::{
    credibility_prob, entire_loss, expected_debt, expected_retained, normalized_loss, optimal_barrier,
    profitability_check, CredibilityConstraint,
};
use paygfund::credit_variant_b::{alpha_star_expected_full_payback, simulate_variant_b, CreditSchedule};
use paygfund::lump_sum::{
    alpha_for_payback_prob, barrier_expected_debt, barrier_expected_retained, barrier_payback_prob,
    expected_fund_after_forced_payback, expected_net_gain_vs_extra_investment, expected_pc_gain, expected_state_loss,
    full_payback_prob, BarrierPolicy, DeficitStep,
};
use paygfund::strategy_compare::{beta_curve, lump_sum_default_prob, recommend_strategy};

use crate::config::RunConfig;
use crate::report::{EvaluationReport, Provenance, ValueKind};

type Output = paygfund::Result<EvaluationReport>;

pub fn variant_a(config: &RunConfig) -> Output {
    let step = DeficitStep::new(config.c0, config.c0 + config.deficit)?;
    let fund = &config.fund;
    let a = config.alpha;
    let mut r = EvaluationReport::new("variant-a", Provenance::ClosedForm);
    r.push_num("P1", full_payback_prob(fund, a)?, ValueKind::Probability);
    r.push_num("E_L1", expected_state_loss(fund, a, &step)?, ValueKind::Currency);
    r.push_num("E_G1", expected_pc_gain(fund, a, &step)?, ValueKind::Currency);
    r.push_num("E_B1", expected_fund_after_forced_payback(fund, a, &step)?, ValueKind::Currency);
    r.push_num("E_GA1", expected_net_gain_vs_extra_investment(fund, a, &step)?, ValueKind::Currency);
    r.push_num("alpha_for_p", alpha_for_payback_prob(fund, config.p)?, ValueKind::Real);
    Ok(r)
}

pub fn barrier(config: &RunConfig) -> Output {
    let step = DeficitStep::new(config.c0, config.c0 + config.deficit)?;
    let policy = BarrierPolicy::new(config.alpha, config.b)?;
    let fund = &config.fund;
    let mut r = EvaluationReport::new("barrier", Provenance::ClosedForm);
    r.push_num("payback_prob", barrier_payback_prob(fund, &policy)?, ValueKind::Probability);
    if config.b > -1.0 {
        r.push_num("E_D1", barrier_expected_debt(fund, &policy, &step)?, ValueKind::Currency);
        r.push_num("E_R1", barrier_expected_retained(fund, &policy, &step)?, ValueKind::Currency);
    }
    Ok(r)
}

pub fn variant_b(config: &RunConfig) -> Output {
    let schedule = CreditSchedule::constant(config.c0, config.c0 + config.deficit, config.horizon)?;
    let fund = &config.fund;
    let result = simulate_variant_b(&schedule, config.alpha, fund, config.samples, config.seed)?;
    let mut r = EvaluationReport::new(
        "variant-b",
        Provenance::MonteCarlo { seed: result.seed, samples: result.samples },
    );
    r.push_num("P_shortfall", result.p_shortfall, ValueKind::Probability);
    r.push_num("E_shortfall", result.e_shortfall, ValueKind::Currency);
    r.push_num("E_final_net_fund", result.e_final_net_fund, ValueKind::Currency);
    r.push_num("C_total", schedule.total_credit(), ValueKind::Currency);
    r.push_num("alpha_star", alpha_star_expected_full_payback(&schedule, fund)?, ValueKind::Real);
    Ok(r)
}

pub fn continuous(config: &RunConfig) -> Output {
    let fund = &config.fund;
    let (b, a, t) = (config.b, config.alpha, config.t);
    let mut r = EvaluationReport::new("continuous", Provenance::ClosedForm);
    r.push_num("V", expected_retained(b, fund, t)?, ValueKind::Real);
    r.push_num("U", expected_debt(b, fund, t)?, ValueKind::Real);
    r.push_num("L", normalized_loss(b, a, fund, t)?, ValueKind::Real);
    r.push_num("L_e", entire_loss(b, a, fund, t)?, ValueKind::Real);
    r.push_num("credibility_prob", credibility_prob(fund, b, a, t)?, ValueKind::Probability);
    r.push_num(
        "profitable",
        if profitability_check(b, a, fund, t)? { 1.0 } else { 0.0 },
        ValueKind::Flag,
    );
    Ok(r)
}

pub fn optimize(config: &RunConfig) -> Output {
    let fund = &config.fund;
    let constraint = CredibilityConstraint::new(config.p, config.alpha, config.t)?;
    let solution = optimal_barrier(&constraint, fund)?;
    let mut r = EvaluationReport::new("optimize", Provenance::ClosedForm);
    r.push_num("p_tilde", solution.p_tilde, ValueKind::Real);
    r.push_num("min_alpha", solution.min_alpha, ValueKind::Real);
    r.push_num("feasible", if solution.feasible { 1.0 } else { 0.0 }, ValueKind::Flag);
    if let Some(b_star) = solution.b_star {
        let loss = normalized_loss(b_star, config.alpha, fund, config.t)?;
        let debt = expected_debt(b_star, fund, config.t)?;
        r.push_num("b_star", b_star, ValueKind::Real);
        r.push_num("L", loss, ValueKind::Real);
        r.push_num("U", debt, ValueKind::Real);
        if let Some(euro) = config.deficit_euro {
            // deficit measured in euro: net payment, the state's expected
            // excess return, and the contributor's total expected gain
            r.push_num("expected_net_payment_euro", euro * (1.0 + loss), ValueKind::Currency);
            r.push_num(
                "state_expected_excess_return_euro",
                euro * (config.alpha * debt - 1.0),
                ValueKind::Currency,
            );
            r.push_num(
                "total_expected_gain_euro",
                euro * (-loss) + euro * (config.alpha * debt - 1.0),
                ValueKind::Currency,
            );
        }
    }
    Ok(r)
}

pub fn compare(config: &RunConfig) -> Output {
    let fund = &config.fund;
    let decision = recommend_strategy(config.t, config.alpha, config.p, fund)?;
    let mut r = EvaluationReport::new("compare", Provenance::ClosedForm);
    r.push_num("L_d", decision.l_d, ValueKind::Real);
    if let Some(l_c) = decision.l_c {
        r.push_num("L_c", l_c, ValueKind::Real);
    }
    if let Some(gap) = decision.lambda_gap {
        r.push_num("Lambda", gap, ValueKind::Real);
    }
    if let Some(b_star) = decision.b_star {
        r.push_num("b_star", b_star, ValueKind::Real);
    }
    if let Some(beta) = beta_curve(config.t, config.alpha, fund)? {
        r.push_num("beta_t", beta, ValueKind::Real);
    }
    r.push_num("default_prob", lump_sum_default_prob(config.t, config.alpha, fund)?, ValueKind::Probability);
    r.push_num("feasible", if decision.feasible { 1.0 } else { 0.0 }, ValueKind::Flag);
    r.push_text("strategy", &decision.label.to_string());
    Ok(r)
}
