use serde_json::json;

use super::{dimension_label, Decomposition, FactorModel, PcaModel};
use crate::error::Result;
use crate::matrix::Matrix;

/// A named file body produced by an analysis, written only once the whole
/// run has succeeded.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputFile {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl OutputFile {
    pub fn new(name: impl Into<String>, bytes: impl Into<Vec<u8>>) -> Self {
        OutputFile {
            name: name.into(),
            bytes: bytes.into(),
        }
    }
}

fn csv_bytes(header: Vec<String>, rows: Vec<Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

fn dims_header(first: &str, n: usize) -> Vec<String> {
    std::iter::once(first.to_string())
        .chain((0..n).map(dimension_label))
        .collect()
}

fn loadings_csv(features: &[String], m: &Matrix) -> Result<Vec<u8>> {
    let rows = features
        .iter()
        .enumerate()
        .map(|(i, f)| {
            std::iter::once(f.clone())
                .chain(m.row(i).iter().map(|v| format!("{v:.6}")))
                .collect()
        })
        .collect();
    csv_bytes(dims_header("feature", m.cols()), rows)
}

pub(crate) fn scores_csv(model: &dyn Decomposition) -> Result<Vec<u8>> {
    let s = model.scores();
    let mut header = vec!["doc_id".to_string(), "group".to_string()];
    header.extend((0..s.cols()).map(dimension_label));
    let rows = (0..s.rows())
        .map(|i| {
            let mut r = vec![model.doc_ids()[i].clone(), model.groups()[i].clone()];
            r.extend(s.row(i).iter().map(|v| format!("{v:.6}")));
            r
        })
        .collect();
    csv_bytes(header, rows)
}

fn pca_files(m: &PcaModel) -> Result<Vec<OutputFile>> {
    let var = m.variance_report_pairs();
    let rows = m
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(j, ev)| {
            vec![
                dimension_label(j),
                format!("{ev:.6}"),
                format!("{:.6}", var[j].0),
                format!("{:.6}", var[j].1),
            ]
        })
        .collect();
    let eigen = csv_bytes(
        ["dimension", "eigenvalue", "proportion", "cumulative"].map(String::from).to_vec(),
        rows,
    )?;
    let meta = json!({
        "model": "pca",
        "matrix": "correlation",
        "features": m.features,
        "n_texts": m.doc_ids.len(),
        "eigen_solver": "householder tridiagonalization + implicit QL",
        "eigen_tolerance": f64::EPSILON,
        "loadings_csv": "structure scale: eigenvector times sqrt(eigenvalue)",
        "eigenvectors_csv": "unit-norm eigenvectors",
        "scores": "standardized data times unit eigenvectors",
        "canonicalization": "largest-magnitude loading of each dimension is positive",
    });
    Ok(vec![
        OutputFile::new("eigenvalues.csv", eigen),
        OutputFile::new("loadings.csv", loadings_csv(&m.features, &m.structure_loadings())?),
        OutputFile::new("eigenvectors.csv", loadings_csv(&m.features, &m.loadings)?),
        OutputFile::new("scores.csv", scores_csv(m)?),
        OutputFile::new("model.json", pretty(&meta)?),
    ])
}

fn factor_files(m: &FactorModel) -> Result<Vec<OutputFile>> {
    let var = m.variance_report();
    let rows = (0..m.k)
        .map(|j| {
            let ss: f64 = m.loadings.column(j).iter().map(|v| v * v).sum();
            vec![
                dimension_label(j),
                format!("{ss:.6}"),
                format!("{:.6}", var.proportions[j]),
                format!("{:.6}", var.cumulative[j]),
            ]
        })
        .collect();
    let variance = csv_bytes(
        ["dimension", "ss_loadings", "proportion", "cumulative"].map(String::from).to_vec(),
        rows,
    )?;
    let mut loadings = loadings_csv(&m.features, &m.loadings)?;
    // Append communalities as a trailing column.
    let text = String::from_utf8(loadings).expect("utf-8");
    let mut out = String::new();
    for (i, line) in text.lines().enumerate() {
        out.push_str(line);
        if i == 0 {
            out.push_str(",communality");
        } else {
            out.push_str(&format!(",{:.6}", m.communalities[i - 1]));
        }
        out.push('\n');
    }
    loadings = out.into_bytes();
    let meta = json!({
        "model": "factor",
        "extraction": "iterated principal-axis factoring",
        "initial_communalities": "squared multiple correlations",
        "tolerance": 1e-6,
        "iterations": m.iterations,
        "rotation": m.rotation.id(),
        "k": m.k,
        "features": m.features,
        "n_texts": m.doc_ids.len(),
        "heywood": m.heywood,
        "scores": "regression method",
        "factor_order": "descending sum of squared loadings",
        "canonicalization": "largest-magnitude loading of each factor is positive",
    });
    Ok(vec![
        OutputFile::new("eigenvalues.csv", variance),
        OutputFile::new("loadings.csv", loadings),
        OutputFile::new("scores.csv", scores_csv(m)?),
        OutputFile::new("model.json", pretty(&meta)?),
    ])
}

fn pretty(v: &serde_json::Value) -> Result<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s.into_bytes())
}

impl PcaModel {
    fn variance_report_pairs(&self) -> Vec<(f64, f64)> {
        let r = self.variance_report();
        r.proportions.into_iter().zip(r.cumulative).collect()
    }
}

/// CSV and JSON files describing a PCA model.
pub fn model_files(model: &PcaModel) -> Result<Vec<OutputFile>> {
    pca_files(model)
}

impl FactorModel {
    pub fn files(&self) -> Result<Vec<OutputFile>> {
        factor_files(self)
    }
}

impl PcaModel {
    pub fn files(&self) -> Result<Vec<OutputFile>> {
        pca_files(self)
    }
}
