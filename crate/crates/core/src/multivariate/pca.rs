use super::correlation::{correlation_of_standardized, standardize, CorrelationMatrix};
use super::eigen::symmetric_eigen;
use crate::error::{Error, Result};
use crate::lexical::FeatureMatrix;
use crate::matrix::Matrix;

/// Principal components of the correlation matrix.
///
/// `loadings` holds unit eigenvectors as columns; `structure_loadings` rescales
/// them by the square root of the eigenvalue for display. Scores are the
/// standardized data projected onto the eigenvectors, so each score column has
/// variance equal to its eigenvalue.
#[derive(Debug, Clone)]
pub struct PcaModel {
    pub features: Vec<String>,
    pub doc_ids: Vec<String>,
    pub groups: Vec<String>,
    pub eigenvalues: Vec<f64>,
    pub loadings: Matrix,
    pub scores: Matrix,
    pub explained: Vec<f64>,
    pub correlation: CorrelationMatrix,
}

impl PcaModel {
    pub fn n_dims(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn structure_loadings(&self) -> Matrix {
        Matrix::from_fn(self.loadings.rows(), self.loadings.cols(), |i, j| {
            self.loadings[(i, j)] * self.eigenvalues[j].max(0.0).sqrt()
        })
    }

    pub fn score_column(&self, dim: usize) -> Vec<f64> {
        self.scores.column(dim)
    }
}

/// Flips each column so that its largest-magnitude entry is positive; the same
/// flip is applied to the matching column of `paired`. Near-ties in magnitude
/// resolve to the lowest row index. Returns which columns were flipped.
pub(crate) fn canonicalize_signs(loadings: &mut Matrix, paired: &mut [&mut Matrix]) -> Vec<bool> {
    let mut flipped = vec![false; loadings.cols()];
    for j in 0..loadings.cols() {
        let col = loadings.column(j);
        let max = col.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let Some(lead) = col.iter().position(|v| v.abs() >= max - 1e-12) else {
            continue;
        };
        if col[lead] < 0.0 {
            flipped[j] = true;
            for i in 0..loadings.rows() {
                loadings[(i, j)] = -loadings[(i, j)];
            }
            for m in paired.iter_mut() {
                for i in 0..m.rows() {
                    m[(i, j)] = -m[(i, j)];
                }
            }
        }
    }
    flipped
}

pub fn pca(matrix: &FeatureMatrix) -> Result<PcaModel> {
    if matrix.n_docs() < 3 {
        return Err(Error::Analysis(format!("PCA needs at least 3 texts, got {}", matrix.n_docs())));
    }
    let z = standardize(matrix)?;
    let corr = correlation_of_standardized(&z);
    let eig = symmetric_eigen(&corr.values)?;
    let p = matrix.n_features();
    // Round-off can leave tiny negative eigenvalues on singular matrices.
    let eigenvalues: Vec<f64> = eig.values.iter().map(|&v| v.max(0.0)).collect();
    let mut loadings = eig.vectors;
    let mut scores = z.values.matmul(&loadings);
    canonicalize_signs(&mut loadings, &mut [&mut scores]);
    let explained = eigenvalues.iter().map(|v| v / p as f64).collect();
    Ok(PcaModel {
        features: matrix.features.clone(),
        doc_ids: matrix.doc_ids.clone(),
        groups: matrix.groups.clone(),
        eigenvalues,
        loadings,
        scores,
        explained,
        correlation: corr,
    })
}
