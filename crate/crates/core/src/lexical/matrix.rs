use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RateUnit {
    PerThousand,
    PerHundred,
    Standardized,
}

/// Texts × features table. Rows follow corpus (manifest) order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub doc_ids: Vec<String>,
    pub groups: Vec<String>,
    pub features: Vec<String>,
    pub values: Matrix,
    pub unit: RateUnit,
}

impl FeatureMatrix {
    pub fn new(
        doc_ids: Vec<String>,
        groups: Vec<String>,
        features: Vec<String>,
        values: Matrix,
        unit: RateUnit,
    ) -> Result<Self> {
        if doc_ids.len() != values.rows() || groups.len() != values.rows() || features.len() != values.cols() {
            return Err(Error::Validation(format!(
                "feature matrix shape {}x{} does not match {} ids / {} features",
                values.rows(),
                values.cols(),
                doc_ids.len(),
                features.len()
            )));
        }
        if !values.is_finite() {
            return Err(Error::Validation("feature matrix contains non-finite values".into()));
        }
        if unit != RateUnit::Standardized && values.as_slice().iter().any(|&v| v < 0.0) {
            return Err(Error::Validation("relative frequencies must be non-negative".into()));
        }
        Ok(FeatureMatrix {
            doc_ids,
            groups,
            features,
            values,
            unit,
        })
    }

    pub fn n_docs(&self) -> usize {
        self.values.rows()
    }

    pub fn n_features(&self) -> usize {
        self.values.cols()
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.features.iter().position(|f| f == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        self.feature_index(name).map(|j| self.values.column(j))
    }

    /// Keeps the named features, in the given order.
    pub fn select_features(&self, names: &[String]) -> Result<FeatureMatrix> {
        let idx = names
            .iter()
            .map(|n| {
                self.feature_index(n)
                    .ok_or_else(|| Error::Input(format!("unknown feature `{n}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        FeatureMatrix::new(
            self.doc_ids.clone(),
            self.groups.clone(),
            names.to_vec(),
            self.values.select_columns(&idx),
            self.unit,
        )
    }

    /// Column means.
    pub fn means(&self) -> Vec<f64> {
        let n = self.n_docs() as f64;
        (0..self.n_features())
            .map(|j| self.values.column(j).iter().sum::<f64>() / n)
            .collect()
    }

    /// CSV with `doc_id`, `group`, then one column per feature at 6 decimals.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["doc_id".to_string(), "group".to_string()];
        header.extend(self.features.iter().cloned());
        w.write_record(&header)?;
        for i in 0..self.n_docs() {
            let mut rec = vec![self.doc_ids[i].clone(), self.groups[i].clone()];
            rec.extend(self.values.row(i).iter().map(|v| format!("{v:.6}")));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
    }
}
