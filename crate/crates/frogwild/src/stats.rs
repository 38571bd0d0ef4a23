//! Statistical test helpers used by the verification suite.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Two-sided z for a 99% confidence interval.
pub const Z_99: f64 = 2.575829303548901;

/// Expected counts below this are pooled into a single bin before the
/// goodness-of-fit statistic is formed.
const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, Copy)]
pub struct Chi2Outcome {
    pub statistic: f64,
    pub degrees_of_freedom: f64,
    pub p_value: f64,
}

impl Chi2Outcome {
    pub fn passes(&self, alpha: f64) -> bool {
        self.p_value >= alpha
    }
}

/// Pearson goodness-of-fit of observed counts against a fixed distribution.
/// Bins with expected count < 5 are pooled.
pub fn chi2_gof(observed: &[u64], expected_probs: &[f64]) -> Chi2Outcome {
    assert_eq!(observed.len(), expected_probs.len());
    let total: u64 = observed.iter().sum();
    assert!(total > 0, "no observations");
    let n = total as f64;

    let mut statistic = 0.0;
    let mut bins = 0usize;
    let mut pooled_obs = 0.0;
    let mut pooled_exp = 0.0;
    for (&obs, &p) in observed.iter().zip(expected_probs) {
        let expected = n * p;
        if expected < MIN_EXPECTED {
            pooled_obs += obs as f64;
            pooled_exp += expected;
            continue;
        }
        statistic += (obs as f64 - expected).powi(2) / expected;
        bins += 1;
    }
    if pooled_exp > 0.0 {
        statistic += (pooled_obs - pooled_exp).powi(2) / pooled_exp;
        bins += 1;
    }
    finish(statistic, bins as f64 - 1.0)
}

/// Two-sample chi-square: are two histograms draws from the same
/// distribution? Bins empty in both samples are skipped. Sample sizes may
/// differ; counts are rescaled per Press et al.'s `chstwo`.
pub fn chi2_two_sample(a: &[u64], b: &[u64]) -> Chi2Outcome {
    assert_eq!(a.len(), b.len());
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    assert!(na > 0 && nb > 0, "empty sample");
    let ratio_ab = (na as f64 / nb as f64).sqrt();

    let mut statistic = 0.0;
    let mut bins = 0usize;
    for (&xa, &xb) in a.iter().zip(b) {
        if xa == 0 && xb == 0 {
            continue;
        }
        let fa = xa as f64;
        let fb = xb as f64;
        let diff = fa / ratio_ab - fb * ratio_ab;
        statistic += diff * diff / (fa + fb);
        bins += 1;
    }
    let df = if na == nb { bins as f64 - 1.0 } else { bins as f64 };
    finish(statistic, df)
}

fn finish(statistic: f64, df: f64) -> Chi2Outcome {
    let p_value = if df <= 0.0 {
        1.0
    } else {
        1.0 - ChiSquared::new(df).expect("positive df").cdf(statistic)
    };
    Chi2Outcome {
        statistic,
        degrees_of_freedom: df,
        p_value,
    }
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    assert!(trials > 0);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    (
        ((center - half) / denom).max(0.0),
        ((center + half) / denom).min(1.0),
    )
}
