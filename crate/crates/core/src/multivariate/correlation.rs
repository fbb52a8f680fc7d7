use crate::error::{Error, Result};
use crate::lexical::{FeatureMatrix, RateUnit};
use crate::matrix::Matrix;

/// Symmetric Pearson correlation matrix with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub features: Vec<String>,
    pub values: Matrix,
}

fn column_moments(values: &Matrix, j: usize) -> (f64, f64) {
    let n = values.rows() as f64;
    let mean = (0..values.rows()).map(|i| values[(i, j)]).sum::<f64>() / n;
    let ss: f64 = (0..values.rows()).map(|i| (values[(i, j)] - mean).powi(2)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

/// Centers each column and scales it to unit sample standard deviation.
pub fn standardize(matrix: &FeatureMatrix) -> Result<FeatureMatrix> {
    let n = matrix.n_docs();
    if n < 2 {
        return Err(Error::Analysis(format!("standardizing needs at least 2 texts, got {n}")));
    }
    let mut z = Matrix::zeros(n, matrix.n_features());
    for (j, name) in matrix.features.iter().enumerate() {
        let (mean, sd) = column_moments(&matrix.values, j);
        let max_abs = matrix.values.column(j).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !(sd > 1e-12 * (1.0 + max_abs)) {
            return Err(Error::Analysis(format!("feature `{name}` has zero variance")));
        }
        for i in 0..n {
            z[(i, j)] = (matrix.values[(i, j)] - mean) / sd;
        }
    }
    FeatureMatrix::new(
        matrix.doc_ids.clone(),
        matrix.groups.clone(),
        matrix.features.clone(),
        z,
        RateUnit::Standardized,
    )
}

pub(crate) fn correlation_of_standardized(z: &FeatureMatrix) -> CorrelationMatrix {
    let n = z.n_docs();
    let p = z.n_features();
    let mut r = z.values.transpose().matmul(&z.values);
    for i in 0..p {
        for j in 0..p {
            r[(i, j)] /= (n - 1) as f64;
        }
    }
    for i in 0..p {
        r[(i, i)] = 1.0;
        for j in (i + 1)..p {
            let v = (0.5 * (r[(i, j)] + r[(j, i)])).clamp(-1.0, 1.0);
            r[(i, j)] = v;
            r[(j, i)] = v;
        }
    }
    CorrelationMatrix {
        features: z.features.clone(),
        values: r,
    }
}

/// Pearson correlation of every feature pair.
pub fn correlation(matrix: &FeatureMatrix) -> Result<CorrelationMatrix> {
    if matrix.n_docs() < 3 {
        return Err(Error::Analysis(format!(
            "correlation needs at least 3 texts, got {}",
            matrix.n_docs()
        )));
    }
    Ok(correlation_of_standardized(&standardize(matrix)?))
}
