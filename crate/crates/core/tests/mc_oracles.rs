//! Monte Carlo oracles for the closed forms: one-period draws against the
//! lump-sum formulas, multi-year accumulation against the expected fund
//! value, and a path histogram against the running-max density.

use paygfund::credit_variant_b::{expected_fund_value, simulate_variant_b, CreditSchedule};
use paygfund::fund_model::{running_max_density, simulate_path_with_max, FundParams};
use paygfund::lump_sum::{
    barrier_expected_debt, barrier_expected_retained, barrier_payback_prob, expected_fund_after_forced_payback,
    expected_pc_gain, expected_state_loss, full_payback_prob, BarrierPolicy, DeficitStep,
};
use paygfund::mc::map_chunks;
use paygfund::numerics::RngStream;

fn standard() -> FundParams {
    FundParams::new(0.04, 0.2).unwrap()
}

struct MeanVar {
    mean: f64,
    se: f64,
}

/// Mean and standard error of `f(z)` over `n` one-period standard normal draws.
fn one_period_stat<F: Fn(f64) -> f64 + Sync + Send>(n: u64, seed: u64, f: F) -> MeanVar {
    let partials = map_chunks(n as usize, |range| {
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for i in range {
            let z = RngStream::new(seed, i as u64).normals().sample_standard_normal();
            let v = f(z);
            sum += v;
            sum_sq += v * v;
        }
        (sum, sum_sq)
    });
    let (sum, sum_sq) = partials.into_iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let mean = sum / n as f64;
    let var = (sum_sq / n as f64 - mean * mean).max(0.0);
    MeanVar { mean, se: (var / n as f64).sqrt() }
}

#[test]
fn one_period_closed_forms_match_simulation() {
    let params = standard();
    let step = DeficitStep::new(1.0, 1.1).unwrap();
    let d = step.deficit();
    let n = 1_000_000u64;
    let growth = |z: f64| (params.mu() + params.sigma() * z).exp();

    for &alpha in &[0.8, 1.0, 1.25, 2.0] {
        let payback = one_period_stat(n, 100 + f64::to_bits(alpha) % 1000, |z| {
            if alpha * growth(z) >= 1.0 {
                1.0
            } else {
                0.0
            }
        });
        let want = full_payback_prob(&params, alpha).unwrap();
        assert!(
            (payback.mean - want).abs() <= 3.0 * payback.se.max(1e-9),
            "payback prob at alpha={alpha}: mc {} vs closed {want} (se {})",
            payback.mean,
            payback.se
        );

        let loss = one_period_stat(n, 200, |z| d * (1.0 - alpha * growth(z)).max(0.0));
        let want = expected_state_loss(&params, alpha, &step).unwrap();
        assert!(
            (loss.mean - want).abs() <= 3.0 * loss.se.max(1e-9),
            "state loss at alpha={alpha}: mc {} vs closed {want}",
            loss.mean
        );

        let gain = one_period_stat(n, 300, |z| d * (alpha * growth(z) - 1.0).max(0.0));
        let want = expected_pc_gain(&params, alpha, &step).unwrap();
        assert!(
            (gain.mean - want).abs() <= 3.0 * gain.se.max(1e-9),
            "pc gain at alpha={alpha}: mc {} vs closed {want}",
            gain.mean
        );

        let forced = one_period_stat(n, 400, |z| d * (alpha * growth(z) - 1.0));
        let want = expected_fund_after_forced_payback(&params, alpha, &step).unwrap();
        assert!(
            (forced.mean - want).abs() <= 3.0 * forced.se.max(1e-9),
            "forced payback at alpha={alpha}: mc {} vs closed {want}",
            forced.mean
        );
    }
}

#[test]
fn barrier_closed_forms_match_simulation() {
    let params = standard();
    let step = DeficitStep::new(1.0, 1.1).unwrap();
    let d = step.deficit();
    let n = 1_000_000u64;
    let growth = |z: f64| (params.mu() + params.sigma() * z).exp();

    let grid_b = [0.02, 0.0, -0.5, -0.75, -0.9, -0.95, -1.0];
    let grid_a = [0.8, 0.9, 1.0, 1.25, 2.0, 10.0];
    for &b in &grid_b {
        for &alpha in &grid_a {
            let policy = BarrierPolicy::new(alpha, b).unwrap();
            let prob = one_period_stat(n, 500, |z| {
                let debt = alpha * d * (growth(z) - (1.0 + b)).max(0.0);
                if debt >= d {
                    1.0
                } else {
                    0.0
                }
            });
            let want = barrier_payback_prob(&params, &policy).unwrap();
            // near-degenerate cells have a vanishing plug-in s.e.; floor it
            // with the binomial s.e. at the closed-form probability
            let se_floor = (want * (1.0 - want) / n as f64).sqrt();
            assert!(
                (prob.mean - want).abs() <= 3.0 * prob.se.max(se_floor).max(1e-9),
                "barrier payback at ({alpha}, {b}): mc {} vs closed {want}",
                prob.mean
            );
            if b > -1.0 {
                let debt = one_period_stat(n, 600, |z| alpha * d * (growth(z) - (1.0 + b)).max(0.0));
                let want = barrier_expected_debt(&params, &policy, &step).unwrap();
                assert!(
                    (debt.mean - want).abs() <= 3.0 * debt.se.max(1e-9),
                    "barrier debt at ({alpha}, {b}): mc {} vs closed {want}",
                    debt.mean
                );
                let retained = one_period_stat(n, 700, |z| alpha * d * growth(z).min(1.0 + b));
                let want = barrier_expected_retained(&params, &policy, &step).unwrap();
                assert!(
                    (retained.mean - want).abs() <= 3.0 * retained.se.max(1e-9),
                    "barrier retained at ({alpha}, {b}): mc {} vs closed {want}",
                    retained.mean
                );
            }
        }
    }
}

#[test]
fn variant_b_mean_matches_closed_form() {
    let params = standard();
    let schedule = CreditSchedule::constant(1.0, 1.1, 10).unwrap();
    let n = 100_000u64;
    for &alpha in &[1.0, 1.1, 1.25] {
        // empirical mean of F_T, reconstructed from the positive parts
        let r = simulate_variant_b(&schedule, alpha, &params, n, 42).unwrap();
        let mean_ft = r.e_final_net_fund - r.e_shortfall + schedule.total_credit();
        let want = expected_fund_value(&schedule, alpha, 10, &params).unwrap();
        // crude s.e. bound: sd(F_T) < alpha * 1.6 at these parameters
        let se = alpha * 1.6 / (n as f64).sqrt();
        assert!(
            (mean_ft - want).abs() <= 3.0 * se,
            "variant B mean at alpha={alpha}: mc {mean_ft} vs closed {want}"
        );
    }
}

#[test]
fn running_max_density_matches_path_histogram() {
    // kernel-free bin estimate of the density of M_1 at y = 0.2 from one
    // million 1000-step paths
    let params = standard();
    let paths = 1_000_000u64;
    let steps = 1000u32;
    let y = 0.2;
    let half_width = 0.02;
    let partials = map_chunks(paths as usize, |range| {
        let mut hits = 0u64;
        for i in range {
            let s = simulate_path_with_max(&params, 1.0, steps, RngStream::new(900, i as u64)).unwrap();
            if (s.running_max - y).abs() <= half_width {
                hits += 1;
            }
        }
        hits
    });
    let hits: u64 = partials.into_iter().sum();
    let p_hat = hits as f64 / paths as f64;
    let density_hat = p_hat / (2.0 * half_width);
    let se = (p_hat * (1.0 - p_hat) / paths as f64).sqrt() / (2.0 * half_width);

    let want = running_max_density(y, 1.0, params.mu(), &params).unwrap();
    // the grid maximum sits below the true maximum by about
    // 0.583 * sigma * sqrt(t / steps); the bin estimate inherits that shift
    // through the local slope, and the bin width contributes curvature error
    let shift = 0.583 * params.sigma() * (1.0 / steps as f64).sqrt();
    let slope = (running_max_density(y + 1e-4, 1.0, params.mu(), &params).unwrap()
        - running_max_density(y - 1e-4, 1.0, params.mu(), &params).unwrap())
        / 2e-4;
    let allowance = slope.abs() * shift + 0.05 * want * half_width;
    assert!(
        (density_hat - want).abs() <= 3.0 * se + allowance,
        "density at {y}: histogram {density_hat} vs closed {want} (se {se}, allowance {allowance})"
    );
}
