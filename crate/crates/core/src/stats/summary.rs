use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub n: usize,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub iqr: f64,
}

/// Sample quantile interpolating between order statistics at position
/// 1 + (n − 1)·p (1-based).
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn summarize(values: &[f64]) -> Result<SummaryStats> {
    if values.is_empty() {
        return Err(Error::Input("cannot summarize an empty sample".into()));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Input(format!("non-finite value {v}")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile(&sorted, 0.25);
    let q3 = quantile(&sorted, 0.75);
    Ok(SummaryStats {
        n: sorted.len(),
        median: quantile(&sorted, 0.5),
        q1,
        q3,
        iqr: (q3 - q1).max(0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_values() {
        let s = summarize(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!((s.q1 - 1.75).abs() < 1e-15);
        assert!((s.q3 - 3.25).abs() < 1e-15);
        assert!((s.iqr - 1.5).abs() < 1e-15);
        assert!((s.median - 2.5).abs() < 1e-15);
    }

    #[test]
    fn constant_and_single() {
        assert_eq!(summarize(&[7.0; 5]).unwrap().iqr, 0.0);
        let s = summarize(&[3.0]).unwrap();
        assert_eq!((s.q1, s.median, s.q3), (3.0, 3.0, 3.0));
    }

    #[test]
    fn errors() {
        assert!(matches!(summarize(&[]), Err(Error::Input(_))));
        assert!(matches!(summarize(&[1.0, f64::INFINITY]), Err(Error::Input(_))));
    }
}
