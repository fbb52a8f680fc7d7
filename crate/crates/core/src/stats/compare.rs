use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::summary::{summarize, SummaryStats};
use super::wilcoxon::{wilcoxon_rank_sum_with, WilcoxonOptions, WilcoxonResult};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::multivariate::{dimension_label, Decomposition};

/// Named unions of group labels, usable wherever a group name is expected.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grouping {
    #[serde(default)]
    pub pools: BTreeMap<String, Vec<String>>,
}

impl Grouping {
    pub fn with_pool(mut self, name: &str, members: &[&str]) -> Self {
        self.pools
            .insert(name.to_string(), members.iter().map(|s| s.to_string()).collect());
        self
    }

    /// Row indices belonging to `name`, a group label or a pool.
    pub fn members(&self, name: &str, row_groups: &[String]) -> Result<Vec<usize>> {
        let known: BTreeSet<&str> = row_groups.iter().map(String::as_str).collect();
        let labels: Vec<&str> = match self.pools.get(name) {
            Some(pool) => pool.iter().map(String::as_str).collect(),
            None => vec![name],
        };
        for label in &labels {
            if !known.contains(label) {
                return Err(Error::UnknownGroup(label.to_string()));
            }
        }
        Ok(row_groups
            .iter()
            .enumerate()
            .filter(|(_, g)| labels.contains(&g.as_str()))
            .map(|(i, _)| i)
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPair {
    pub a: String,
    pub b: String,
}

impl GroupPair {
    pub fn new(a: &str, b: &str) -> Self {
        GroupPair {
            a: a.to_string(),
            b: b.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupComparison {
    pub dimension: String,
    pub group_a: String,
    pub group_b: String,
    pub wilcoxon: WilcoxonResult,
    pub summary_a: SummaryStats,
    pub summary_b: SummaryStats,
    /// The group with the higher median, or "none" on a tie.
    pub direction: String,
}

/// Compares two samples on one dimension.
pub fn compare_samples(
    dimension: &str,
    pair: &GroupPair,
    a: &[f64],
    b: &[f64],
    options: &WilcoxonOptions,
) -> Result<GroupComparison> {
    let wilcoxon = wilcoxon_rank_sum_with(a, b, options)?;
    let summary_a = summarize(a)?;
    let summary_b = summarize(b)?;
    let direction = if summary_a.median > summary_b.median {
        pair.a.clone()
    } else if summary_b.median > summary_a.median {
        pair.b.clone()
    } else {
        "none".to_string()
    };
    Ok(GroupComparison {
        dimension: dimension.to_string(),
        group_a: pair.a.clone(),
        group_b: pair.b.clone(),
        wilcoxon,
        summary_a,
        summary_b,
        direction,
    })
}

/// One comparison per pair per dimension, ordered by dimension then pair.
pub fn compare_groups(
    model: &dyn Decomposition,
    grouping: &Grouping,
    pairs: &[GroupPair],
    dimensions: &[usize],
    options: &WilcoxonOptions,
) -> Result<Vec<GroupComparison>> {
    compare_score_columns(model.scores(), model.groups(), grouping, pairs, dimensions, options)
}

/// Same as [`compare_groups`] over a bare score table whose rows carry
/// `row_groups` labels.
pub fn compare_score_columns(
    scores: &Matrix,
    row_groups: &[String],
    grouping: &Grouping,
    pairs: &[GroupPair],
    dimensions: &[usize],
    options: &WilcoxonOptions,
) -> Result<Vec<GroupComparison>> {
    if row_groups.len() != scores.rows() {
        return Err(Error::Input(format!(
            "{} group labels for {} score rows",
            row_groups.len(),
            scores.rows()
        )));
    }
    let mut out = Vec::with_capacity(pairs.len() * dimensions.len());
    for &d in dimensions {
        if d >= scores.cols() {
            return Err(Error::Input(format!(
                "dimension {} requested but the model has {}",
                d + 1,
                scores.cols()
            )));
        }
        let column = scores.column(d);
        for pair in pairs {
            let pick = |name: &str| -> Result<Vec<f64>> {
                let rows = grouping.members(name, row_groups)?;
                if rows.is_empty() {
                    return Err(Error::UnknownGroup(name.to_string()));
                }
                Ok(rows.iter().map(|&i| column[i]).collect())
            };
            let (a, b) = (pick(&pair.a)?, pick(&pair.b)?);
            out.push(compare_samples(&dimension_label(d), pair, &a, &b, options)?);
        }
    }
    Ok(out)
}

/// CSV export of comparisons.
pub fn comparison_csv(rows: &[GroupComparison]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "dimension", "group_a", "group_b", "n_a", "n_b", "W", "p", "method", "direction", "iqr_a",
        "iqr_b",
    ])?;
    for c in rows {
        w.write_record([
            c.dimension.clone(),
            c.group_a.clone(),
            c.group_b.clone(),
            c.wilcoxon.n.to_string(),
            c.wilcoxon.m.to_string(),
            format!("{}", c.wilcoxon.w),
            format!("{:.6e}", c.wilcoxon.p_value),
            c.wilcoxon.method.id().to_string(),
            c.direction.clone(),
            format!("{:.6}", c.summary_a.iqr),
            format!("{:.6}", c.summary_b.iqr),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// p-value for human-readable reports: four decimals, floored at <0.0001.
pub fn format_p(p: f64) -> String {
    if p < 0.0001 {
        "<0.0001".to_string()
    } else {
        format!("{p:.4}")
    }
}
