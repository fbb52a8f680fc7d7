use serde::Serialize;

use super::correlation::{correlation_of_standardized, standardize, CorrelationMatrix};
use super::eigen::{invert, symmetric_eigen};
use super::pca::canonicalize_signs;
use super::rotation::{rotate, Rotation};
use crate::error::{Error, Result};
use crate::lexical::FeatureMatrix;
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FactorOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for FactorOptions {
    fn default() -> Self {
        FactorOptions {
            tolerance: 1e-6,
            max_iterations: 100,
        }
    }
}

/// Result of iterated principal-axis factoring plus rotation.
#[derive(Debug, Clone)]
pub struct FactorModel {
    pub features: Vec<String>,
    pub doc_ids: Vec<String>,
    pub groups: Vec<String>,
    pub k: usize,
    pub rotation: Rotation,
    /// Rotated loadings (pattern loadings under promax), factors ordered by
    /// descending sum of squared loadings.
    pub loadings: Matrix,
    /// Factor correlations; identity unless the rotation is oblique.
    pub phi: Matrix,
    pub communalities: Vec<f64>,
    /// Features whose communality exceeded 1 and was clamped.
    pub heywood: Vec<String>,
    pub scores: Matrix,
    pub iterations: usize,
    pub correlation: CorrelationMatrix,
}

impl FactorModel {
    /// Sum of squared loadings per factor divided by the number of features.
    pub fn proportions(&self) -> Vec<f64> {
        let p = self.features.len() as f64;
        (0..self.k)
            .map(|j| self.loadings.column(j).iter().map(|v| v * v).sum::<f64>() / p)
            .collect()
    }

    pub fn cumulative_variance(&self) -> f64 {
        self.communalities.iter().sum::<f64>() / self.features.len() as f64
    }

    pub fn score_column(&self, dim: usize) -> Vec<f64> {
        self.scores.column(dim)
    }
}

fn squared_multiple_correlations(r: &Matrix) -> (Vec<f64>, bool) {
    let p = r.rows();
    match invert(r) {
        Ok(inv) => ((0..p).map(|i| (1.0 - 1.0 / inv[(i, i)]).clamp(0.0, 1.0)).collect(), true),
        // Singular R: fall back to the largest absolute correlation of each row.
        Err(_) => (
            (0..p)
                .map(|i| (0..p).filter(|&j| j != i).map(|j| r[(i, j)].abs()).fold(0.0, f64::max))
                .collect(),
            false,
        ),
    }
}

fn extract(r: &Matrix, h2: &[f64], k: usize) -> Result<Matrix> {
    let mut reduced = r.clone();
    for (i, &h) in h2.iter().enumerate() {
        reduced[(i, i)] = h;
    }
    let eig = symmetric_eigen(&reduced)?;
    Ok(Matrix::from_fn(r.rows(), k, |i, j| {
        eig.vectors[(i, j)] * eig.values[j].max(0.0).sqrt()
    }))
}

fn row_ss(m: &Matrix) -> Vec<f64> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|v| v * v).sum()).collect()
}

/// Iterated principal-axis factoring on the correlation matrix, then rotation
/// and regression-method factor scores.
pub fn factor_analysis(matrix: &FeatureMatrix, k: usize, rotation: Rotation) -> Result<FactorModel> {
    factor_analysis_with(matrix, k, rotation, FactorOptions::default())
}

pub fn factor_analysis_with(
    matrix: &FeatureMatrix,
    k: usize,
    rotation: Rotation,
    options: FactorOptions,
) -> Result<FactorModel> {
    let p = matrix.n_features();
    if k == 0 || k >= p {
        return Err(Error::Input(format!("factor count must be in 1..{p}, got {k}")));
    }
    if matrix.n_docs() < 3 {
        return Err(Error::Analysis(format!(
            "factor analysis needs at least 3 texts, got {}",
            matrix.n_docs()
        )));
    }
    let z = standardize(matrix)?;
    let corr = correlation_of_standardized(&z);
    let r = &corr.values;

    let (mut h2, invertible) = squared_multiple_correlations(r);
    if !invertible {
        log::warn!("correlation matrix is singular; communalities start from max |r|");
    }
    let mut heywood = vec![false; p];
    let mut unrotated = extract(r, &h2, k)?;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < options.max_iterations {
        iterations += 1;
        let mut next = row_ss(&unrotated);
        for (i, h) in next.iter_mut().enumerate() {
            if *h > 1.0 {
                heywood[i] = true;
                *h = 1.0;
            }
        }
        let delta = next
            .iter()
            .zip(&h2)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        h2 = next;
        unrotated = extract(r, &h2, k)?;
        if delta < options.tolerance {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "principal-axis factoring did not converge in {} iterations",
            options.max_iterations
        )));
    }

    let mut communalities = row_ss(&unrotated);
    for (i, h) in communalities.iter_mut().enumerate() {
        if *h > 1.0 + 1e-6 {
            heywood[i] = true;
            *h = 1.0;
        }
    }
    let heywood: Vec<String> = heywood
        .iter()
        .zip(&matrix.features)
        .filter(|(&flag, _)| flag)
        .map(|(_, f)| f.clone())
        .collect();
    if !heywood.is_empty() {
        log::warn!("Heywood case: communality clamped to 1 for {}", heywood.join(", "));
    }

    let rotated = rotate(&unrotated, rotation)?;
    let mut order: Vec<usize> = (0..k).collect();
    let ss: Vec<f64> = (0..k)
        .map(|j| rotated.pattern.column(j).iter().map(|v| v * v).sum())
        .collect();
    order.sort_by(|&a, &b| ss[b].total_cmp(&ss[a]));
    let mut loadings = rotated.pattern.select_columns(&order);
    let mut phi = Matrix::from_fn(k, k, |i, j| rotated.phi[(order[i], order[j])]);

    let structure = loadings.matmul(&phi);
    let weights = invert(r)
        .map_err(|_| Error::Numerical("correlation matrix is singular; factor scores are undefined".into()))?
        .matmul(&structure);
    let mut scores = z.values.matmul(&weights);

    let flipped = canonicalize_signs(&mut loadings, &mut [&mut scores]);
    for i in 0..k {
        for j in 0..k {
            if flipped[i] != flipped[j] {
                phi[(i, j)] = -phi[(i, j)];
            }
        }
    }

    Ok(FactorModel {
        features: matrix.features.clone(),
        doc_ids: matrix.doc_ids.clone(),
        groups: matrix.groups.clone(),
        k,
        rotation,
        loadings,
        phi,
        communalities,
        heywood,
        scores,
        iterations,
        correlation: corr,
    })
}
