//! Correlation-matrix PCA and rotated principal-axis factor analysis.
//!
//! Group labels travel with the models but never enter the decomposition.

mod correlation;
mod eigen;
mod export;
mod factor;
mod pca;
mod rotation;

use serde::Serialize;

use crate::matrix::Matrix;

pub use correlation::{correlation, standardize, CorrelationMatrix};
pub use eigen::{invert, symmetric_eigen, SymmetricEigen};
pub use export::{model_files, OutputFile};
pub use factor::{factor_analysis, factor_analysis_with, FactorModel, FactorOptions};
pub use pca::{pca, PcaModel};
pub use rotation::Rotation;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceReport {
    pub proportions: Vec<f64>,
    pub cumulative: Vec<f64>,
}

impl VarianceReport {
    pub fn from_proportions(proportions: Vec<f64>) -> Self {
        let mut acc = 0.0;
        let cumulative = proportions
            .iter()
            .map(|p| {
                acc += p;
                acc.min(1.0)
            })
            .collect();
        VarianceReport { proportions, cumulative }
    }
}

/// Common view over PCA and factor models used by comparison and reporting.
pub trait Decomposition {
    fn kind(&self) -> &'static str;
    fn features(&self) -> &[String];
    fn doc_ids(&self) -> &[String];
    fn groups(&self) -> &[String];
    fn scores(&self) -> &Matrix;
    fn n_dims(&self) -> usize;
    /// Loadings on the scale shown to readers: eigenvector × √eigenvalue for
    /// PCA, rotated loadings for factor models.
    fn display_loadings(&self) -> Matrix;
    fn variance_report(&self) -> VarianceReport;
}

impl Decomposition for PcaModel {
    fn kind(&self) -> &'static str {
        "pca"
    }
    fn features(&self) -> &[String] {
        &self.features
    }
    fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }
    fn groups(&self) -> &[String] {
        &self.groups
    }
    fn scores(&self) -> &Matrix {
        &self.scores
    }
    fn n_dims(&self) -> usize {
        self.eigenvalues.len()
    }
    fn display_loadings(&self) -> Matrix {
        self.structure_loadings()
    }
    fn variance_report(&self) -> VarianceReport {
        VarianceReport::from_proportions(self.explained.clone())
    }
}

impl Decomposition for FactorModel {
    fn kind(&self) -> &'static str {
        "factor"
    }
    fn features(&self) -> &[String] {
        &self.features
    }
    fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }
    fn groups(&self) -> &[String] {
        &self.groups
    }
    fn scores(&self) -> &Matrix {
        &self.scores
    }
    fn n_dims(&self) -> usize {
        self.k
    }
    fn display_loadings(&self) -> Matrix {
        self.loadings.clone()
    }
    fn variance_report(&self) -> VarianceReport {
        let mut report = VarianceReport::from_proportions(self.proportions());
        // Under an oblique rotation the per-factor shares overlap; the total is
        // still the mean communality.
        if let Some(last) = report.cumulative.last_mut() {
            *last = self.cumulative_variance().min(1.0);
        }
        report
    }
}

/// Per-dimension and cumulative variance proportions of a model.
pub fn variance_report(model: &dyn Decomposition) -> VarianceReport {
    model.variance_report()
}

pub fn dimension_label(index: usize) -> String {
    format!("D{}", index + 1)
}
