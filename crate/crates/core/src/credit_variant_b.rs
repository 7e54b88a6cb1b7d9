//! Multi-year zero-interest credit: fund accumulation, the multiplier that
//! repays the credit in expectation, and Monte Carlo shortfall statistics at
//! the horizon.
//!
//! The contribution `alpha * (C_j - C_0)` is invested at time `j - 1` and
//! grows for `T + 1 - j` years, so the k-th term of `E[F_T]` carries the
//! factor `exp((mu + sigma^2/2) k)`. The whole credit
//! `C_total = sum (C_j - C_0)` is due at time `T`.

use crate::error::{Error, Result};
use crate::fund_model::FundParams;
use crate::mc::map_chunks;
use crate::numerics::{find_root, RngStream};

/// The deficit years covered by the state credit.
#[derive(Debug, Clone, PartialEq)]
pub struct CreditSchedule {
    c0: f64,
    required: Vec<f64>,
}

impl CreditSchedule {
    /// `required` holds `C_1..C_T`; every entry must exceed `c0 > 0`.
    pub fn new(c0: f64, required: Vec<f64>) -> Result<Self> {
        if !(c0.is_finite() && c0 > 0.0) {
            return Err(Error::domain(format!("baseline contribution must be positive, got {c0}")));
        }
        if required.is_empty() {
            return Err(Error::domain("credit schedule needs at least one year".to_string()));
        }
        for (j, &cj) in required.iter().enumerate() {
            if !(cj.is_finite() && cj > c0) {
                return Err(Error::domain(format!(
                    "required contribution C_{} = {cj} must exceed C_0 = {c0}",
                    j + 1
                )));
            }
        }
        Ok(CreditSchedule { c0, required })
    }

    /// Constant-deficit schedule with `C_j = cbar` for `T` years.
    pub fn constant(c0: f64, cbar: f64, horizon: u32) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::domain("horizon must be at least one year".to_string()));
        }
        CreditSchedule::new(c0, vec![cbar; horizon as usize])
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn horizon(&self) -> usize {
        self.required.len()
    }

    /// Deficits `C_j - C_0` in year order.
    pub fn deficits(&self) -> impl Iterator<Item = f64> + '_ {
        self.required.iter().map(move |cj| cj - self.c0)
    }

    /// Total credit `C_total = sum_j (C_j - C_0)`.
    pub fn total_credit(&self) -> f64 {
        self.deficits().sum()
    }
}

/// Result of one Monte Carlo evaluation of the credit scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariantBResult {
    /// `P[F_T <= C_total]`.
    pub p_shortfall: f64,
    /// `E[(C_total - F_T)^+]`.
    pub e_shortfall: f64,
    /// `E[(F_T - C_total)^+]`.
    pub e_final_net_fund: f64,
    pub samples: u64,
    pub seed: u64,
}

/// `E[F_j] = alpha * sum_{k=1}^{j} (C_{j-k+1} - C_0) e^{(mu + sigma^2/2) k}`.
pub fn expected_fund_value(schedule: &CreditSchedule, alpha: f64, j: usize, params: &FundParams) -> Result<f64> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::domain(format!("alpha must be strictly positive, got {alpha}")));
    }
    if j == 0 || j > schedule.horizon() {
        return Err(Error::domain(format!(
            "year {j} outside the schedule horizon 1..={}",
            schedule.horizon()
        )));
    }
    let s = params.growth_rate();
    let mut sum = 0.0;
    for k in 1..=j {
        let deficit = schedule.required[j - k] - schedule.c0;
        sum += deficit * (s * k as f64).exp();
    }
    Ok(alpha * sum)
}

/// The multiplier for which the credit is repaid in expectation at `T`:
/// `alpha* = sum (C_j - C_0) / sum (C_j - C_0) e^{(mu + sigma^2/2)(T + 1 - j)}`.
pub fn alpha_star_expected_full_payback(schedule: &CreditSchedule, params: &FundParams) -> Result<f64> {
    let s = params.growth_rate();
    let t = schedule.horizon();
    let mut denom = 0.0;
    for (j, deficit) in schedule.deficits().enumerate() {
        denom += deficit * (s * (t - j) as f64).exp();
    }
    Ok(schedule.total_credit() / denom)
}

/// Deficit-weighted growth factor of one realisation at `alpha = 1`:
/// invest each deficit at the start of its year and roll everything to `T`.
fn realisation_unit_fund(schedule: &CreditSchedule, params: &FundParams, stream: RngStream) -> f64 {
    let mut src = stream.normals();
    let mut fund = 0.0f64;
    for deficit in schedule.deficits() {
        let z = src.sample_standard_normal();
        fund = (fund + deficit) * (params.mu() + params.sigma() * z).exp();
    }
    fund
}

#[derive(Default, Clone, Copy)]
struct ShortfallSums {
    shortfalls: u64,
    shortfall_mass: f64,
    surplus_mass: f64,
}

/// Monte Carlo estimate of the shortfall statistics at the horizon.
///
/// Realisation `i` draws its annual increments from stream `(seed, i)`, so
/// the result is deterministic in `(seed, samples)` and independent of the
/// number of worker threads.
pub fn simulate_variant_b(
    schedule: &CreditSchedule,
    alpha: f64,
    params: &FundParams,
    samples: u64,
    seed: u64,
) -> Result<VariantBResult> {
    if samples == 0 {
        return Err(Error::domain("at least one realisation is required".to_string()));
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::domain(format!("alpha must be strictly positive, got {alpha}")));
    }
    let c_total = schedule.total_credit();
    let partials = map_chunks(samples as usize, |range| {
        let mut acc = ShortfallSums::default();
        for i in range {
            let fund = alpha * realisation_unit_fund(schedule, params, RngStream::new(seed, i as u64));
            let diff = fund - c_total;
            if diff <= 0.0 {
                acc.shortfalls += 1;
            }
            // exactly one of the positive parts is nonzero per sample
            acc.shortfall_mass += (-diff).max(0.0);
            acc.surplus_mass += diff.max(0.0);
        }
        acc
    });
    let mut total = ShortfallSums::default();
    for p in partials {
        total.shortfalls += p.shortfalls;
        total.shortfall_mass += p.shortfall_mass;
        total.surplus_mass += p.surplus_mass;
    }
    let n = samples as f64;
    Ok(VariantBResult {
        p_shortfall: total.shortfalls as f64 / n,
        e_shortfall: total.shortfall_mass / n,
        e_final_net_fund: total.surplus_mass / n,
        samples,
        seed,
    })
}

/// Find the multiplier whose expected shortfall equals `target`.
///
/// Uses common random numbers: the unit fund values are drawn once and the
/// expected shortfall becomes a deterministic, monotone function of `alpha`,
/// so the search is an ordinary bracketed root find.
pub fn break_even_alpha(
    schedule: &CreditSchedule,
    params: &FundParams,
    target_expected_loss: f64,
    samples: u64,
    seed: u64,
) -> Result<f64> {
    if samples == 0 {
        return Err(Error::domain("at least one realisation is required".to_string()));
    }
    if !(target_expected_loss > 0.0) {
        return Err(Error::domain(format!(
            "target expected loss must be positive, got {target_expected_loss}"
        )));
    }
    let c_total = schedule.total_credit();
    if target_expected_loss >= c_total {
        return Err(Error::Search(format!(
            "target {target_expected_loss} is not below the total credit {c_total}"
        )));
    }
    let units: Vec<f64> = map_chunks(samples as usize, |range| {
        range
            .map(|i| realisation_unit_fund(schedule, params, RngStream::new(seed, i as u64)))
            .collect::<Vec<f64>>()
    })
    .into_iter()
    .flatten()
    .collect();

    let shortfall_at = |alpha: f64| -> f64 {
        let sum: f64 = units.iter().map(|&u| (c_total - alpha * u).max(0.0)).sum();
        sum / samples as f64
    };

    let mut hi = 1.0;
    let mut tries = 0;
    while shortfall_at(hi) > target_expected_loss {
        hi *= 2.0;
        tries += 1;
        if tries > 60 {
            return Err(Error::Search(format!(
                "expected shortfall stayed above target {target_expected_loss} up to alpha = {hi}"
            )));
        }
    }
    find_root(|alpha| shortfall_at(alpha) - target_expected_loss, 1e-9, hi, 1e-9)
}
