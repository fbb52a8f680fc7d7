//! Markdown views built from CSV bodies, so every figure shown is a cell of
//! some emitted CSV.

use crate::error::{Error, Result};
use crate::stats::format_p;

pub(crate) struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn parse(csv_bytes: &[u8]) -> Result<Table> {
        let mut r = csv::Reader::from_reader(csv_bytes);
        let header = r.headers()?.iter().map(String::from).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|r| r.iter().map(String::from).collect()))
            .collect::<std::result::Result<_, _>>()?;
        Ok(Table { header, rows })
    }

    pub fn column(&self, name: &str) -> Result<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Render(format!("no column `{name}`")))
    }

    /// Markdown table of the named columns (all columns when `columns` is empty).
    pub fn render(&self, columns: &[&str]) -> Result<String> {
        let idx: Vec<usize> = if columns.is_empty() {
            (0..self.header.len()).collect()
        } else {
            columns.iter().map(|c| self.column(c)).collect::<Result<_>>()?
        };
        let mut out = String::new();
        let head: Vec<&str> = idx.iter().map(|&i| self.header[i].as_str()).collect();
        out.push_str(&format!("| {} |\n", head.join(" | ")));
        out.push_str(&format!("|{}\n", "---|".repeat(idx.len())));
        for row in &self.rows {
            let cells: Vec<&str> = idx.iter().map(|&i| row[i].as_str()).collect();
            out.push_str(&format!("| {} |\n", cells.join(" | ")));
        }
        Ok(out)
    }
}

/// Comparison table with p shown at four decimals.
pub(crate) fn comparison_table(csv_bytes: &[u8]) -> Result<String> {
    let mut t = Table::parse(csv_bytes)?;
    let p = t.column("p")?;
    for row in &mut t.rows {
        let v: f64 = row[p]
            .parse()
            .map_err(|_| Error::Render(format!("bad p value `{}`", row[p])))?;
        row[p] = format_p(v);
    }
    t.render(&[
        "dimension", "group_a", "group_b", "n_a", "n_b", "W", "p", "method", "direction", "iqr_a", "iqr_b",
    ])
}

/// Positive and negative blocks of loadings with |loading| at or above
/// `threshold` on one dimension column, strongest first.
pub(crate) fn loading_blocks(
    loadings_csv: &[u8],
    dimension: &str,
    threshold: f64,
    describe: impl Fn(&str) -> String,
) -> Result<String> {
    let t = Table::parse(loadings_csv)?;
    let col = t.column(dimension)?;
    let mut entries: Vec<(String, f64, String)> = Vec::new();
    for row in &t.rows {
        let v: f64 = row[col]
            .parse()
            .map_err(|_| Error::Render(format!("bad loading `{}`", row[col])))?;
        entries.push((row[0].clone(), v, row[col].clone()));
    }
    let mut pos: Vec<_> = entries.iter().filter(|e| e.1 >= threshold).collect();
    let mut neg: Vec<_> = entries.iter().filter(|e| e.1 <= -threshold).collect();
    pos.sort_by(|a, b| b.1.total_cmp(&a.1));
    neg.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut out = String::new();
    for (title, block) in [("Positive", pos), ("Negative", neg)] {
        out.push_str(&format!("{title} loadings:\n\n"));
        if block.is_empty() {
            out.push_str("(none)\n\n");
            continue;
        }
        out.push_str("| feature | loading |\n|---|---|\n");
        for (name, _, text) in block {
            out.push_str(&format!("| {} | {text} |\n", describe(name)));
        }
        out.push('\n');
    }
    Ok(out)
}
