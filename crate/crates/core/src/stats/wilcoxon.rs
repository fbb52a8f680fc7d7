use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

pub const DEFAULT_EXACT_LIMIT: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    NormalApproximation,
}

impl Method {
    pub fn id(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::NormalApproximation => "normal-approximation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonOptions {
    /// Largest n·m for which the exact null distribution is used.
    pub exact_limit: usize,
}

impl Default for WilcoxonOptions {
    fn default() -> Self {
        WilcoxonOptions {
            exact_limit: DEFAULT_EXACT_LIMIT,
        }
    }
}

/// Two-sided Wilcoxon rank-sum (Mann–Whitney) test result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// Pairs with x > y plus one half per tied pair.
    pub w: f64,
    pub p_value: f64,
    pub method: Method,
    pub n: usize,
    pub m: usize,
    pub ties: bool,
    /// Set when the exact test was requested by size but ties forced the
    /// approximation.
    pub notice: Option<String>,
}

fn check(sample: &[f64], name: &str) -> Result<()> {
    if sample.is_empty() {
        return Err(Error::Input(format!("sample {name} is empty")));
    }
    if let Some(v) = sample.iter().find(|v| !v.is_finite()) {
        return Err(Error::Input(format!("sample {name} contains non-finite value {v}")));
    }
    Ok(())
}

/// Mann–Whitney count for the first sample, and whether the pooled sample
/// contains ties.
pub fn w_statistic(x: &[f64], y: &[f64]) -> (f64, bool) {
    let mut w = 0.0;
    for &a in x {
        for &b in y {
            if a > b {
                w += 1.0;
            } else if a == b {
                w += 0.5;
            }
        }
    }
    let mut all: Vec<f64> = x.iter().chain(y).copied().collect();
    all.sort_by(f64::total_cmp);
    (w, all.windows(2).any(|p| p[0] == p[1]))
}

/// Number of arrangements of n first-sample and m second-sample values that
/// give each Mann–Whitney count u = 0..=n·m.
pub fn null_counts(n: usize, m: usize) -> Vec<f64> {
    let top = n * m;
    // counts[a][u] holds the distribution for a first-sample values against
    // the second-sample values processed so far.
    let mut counts = vec![vec![0.0f64; top + 1]; n + 1];
    for row in counts.iter_mut() {
        row[0] = 1.0;
    }
    for b in 1..=m {
        // Adding a second-sample value that is larger than everything else
        // leaves u unchanged; placing the largest first-sample value above
        // all b second-sample values adds b.
        for a in 1..=n {
            let (lower, upper) = counts.split_at_mut(a);
            let prev = &lower[a - 1];
            let cur = &mut upper[0];
            let reach = a * b;
            for u in (b..=reach).rev() {
                cur[u] += prev[u - b];
            }
        }
    }
    counts.swap_remove(n)
}

fn exact_p(w: f64, n: usize, m: usize) -> f64 {
    let counts = null_counts(n, m);
    let total: f64 = counts.iter().sum();
    let u = w.round() as usize;
    let lower: f64 = counts[..=u].iter().sum();
    let upper: f64 = counts[u..].iter().sum();
    (2.0 * lower.min(upper) / total).min(1.0)
}

fn normal_p(x: &[f64], y: &[f64], w: f64) -> f64 {
    let (n, m) = (x.len() as f64, y.len() as f64);
    let total = n + m;
    let mut all: Vec<f64> = x.iter().chain(y).copied().collect();
    all.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < all.len() {
        let mut j = i + 1;
        while j < all.len() && all[j] == all[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        i = j;
    }
    let variance = n * m / 12.0 * ((total + 1.0) - tie_term / (total * (total - 1.0)));
    if variance <= 0.0 {
        return 1.0;
    }
    let centered = w - n * m / 2.0;
    let correction = if centered == 0.0 { 0.0 } else { 0.5 * centered.signum() };
    let z = (centered - correction) / variance.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    (2.0 * normal.cdf(z).min(normal.sf(z))).min(1.0)
}

pub fn wilcoxon_rank_sum(x: &[f64], y: &[f64]) -> Result<WilcoxonResult> {
    wilcoxon_rank_sum_with(x, y, &WilcoxonOptions::default())
}

pub fn wilcoxon_rank_sum_with(x: &[f64], y: &[f64], options: &WilcoxonOptions) -> Result<WilcoxonResult> {
    check(x, "x")?;
    check(y, "y")?;
    let (n, m) = (x.len(), y.len());
    let (w, ties) = w_statistic(x, y);
    let small = n * m <= options.exact_limit;
    let (method, p_value, notice) = if small && !ties {
        (Method::Exact, exact_p(w, n, m), None)
    } else {
        let notice = (small && ties)
            .then(|| "ties present: exact test replaced by the normal approximation".to_string());
        if let Some(msg) = &notice {
            log::info!("{msg} (n={n}, m={m})");
        }
        (Method::NormalApproximation, normal_p(x, y, w), notice)
    };
    Ok(WilcoxonResult {
        w,
        p_value: p_value.clamp(0.0, 1.0),
        method,
        n,
        m,
        ties,
        notice,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separated_triples() {
        let r = wilcoxon_rank_sum(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        assert_eq!(r.w, 0.0);
        assert_eq!(r.method, Method::Exact);
        assert!((r.p_value - 0.1).abs() < 1e-15);
    }

    #[test]
    fn singletons() {
        let r = wilcoxon_rank_sum(&[1.0], &[2.0]).unwrap();
        assert_eq!(r.w, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn null_counts_sum_to_binomial() {
        let c = null_counts(3, 3);
        assert_eq!(c, vec![1.0, 1.0, 2.0, 3.0, 3.0, 3.0, 3.0, 2.0, 1.0, 1.0]);
        let c = null_counts(2, 5);
        assert_eq!(c.iter().sum::<f64>(), 21.0);
    }

    #[test]
    fn ties_force_approximation() {
        let r = wilcoxon_rank_sum(&[1.0, 2.0, 2.0], &[2.0, 3.0, 4.0]).unwrap();
        assert_eq!(r.method, Method::NormalApproximation);
        assert!(r.notice.is_some());
        assert_eq!(r.w, 1.0);
    }

    #[test]
    fn all_tied_gives_one() {
        let r = wilcoxon_rank_sum(&[5.0, 5.0], &[5.0, 5.0, 5.0]).unwrap();
        assert_eq!(r.p_value, 1.0);
        assert_eq!(r.w, 3.0);
    }

    #[test]
    fn input_errors() {
        assert!(matches!(wilcoxon_rank_sum(&[], &[1.0]), Err(Error::Input(_))));
        assert!(matches!(wilcoxon_rank_sum(&[f64::NAN], &[1.0]), Err(Error::Input(_))));
    }
}
