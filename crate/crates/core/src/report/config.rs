use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genclient::GenerationSettings;
use crate::multivariate::Rotation;
use crate::stats::{GroupPair, Grouping, WilcoxonOptions, DEFAULT_EXACT_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Analysis {
    Fwpca,
    Mda,
    Pos,
    ContentProfile,
    Compare,
}

impl Analysis {
    pub fn id(self) -> &'static str {
        match self {
            Analysis::Fwpca => "fwpca",
            Analysis::Mda => "mda",
            Analysis::Pos => "pos",
            Analysis::ContentProfile => "content-profile",
            Analysis::Compare => "compare",
        }
    }
}

/// Run configuration, read from one JSON file. Relative paths are resolved
/// against the directory holding that file.
///
/// | field | default |
/// |---|---|
/// | `manifest` | required unless `corpus_cache` exists |
/// | `corpus_cache` | none |
/// | `analysis` | none (chosen by the CLI command) |
/// | `groups` | all groups in the manifest |
/// | `pools` | none |
/// | `pairs` | every pair of selected groups |
/// | `top_n` | 100 |
/// | `min_rate` | 2.0 per 1,000 words |
/// | `tag_min_rate` | 5.0 per 1,000 tokens |
/// | `profile_top_n` | 50 |
/// | `k` | 3 |
/// | `rotation` | `varimax` |
/// | `dimensions` | 2 |
/// | `exact_limit` | 10000 |
/// | `output_dir` | `out` |
/// | `seed` | 0 |
/// | `function_words`, `feature_lists`, `tagged_dir`, `scores` | none |
/// | `generation` | none |
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub manifest: Option<PathBuf>,
    pub corpus_cache: Option<PathBuf>,
    pub analysis: Option<Analysis>,
    pub groups: Option<Vec<String>>,
    pub pools: BTreeMap<String, Vec<String>>,
    pub pairs: Vec<GroupPair>,
    pub top_n: usize,
    pub min_rate: f64,
    pub tag_min_rate: f64,
    pub profile_top_n: usize,
    pub k: usize,
    pub rotation: Rotation,
    /// Leading dimensions compared and plotted.
    pub dimensions: usize,
    pub exact_limit: usize,
    pub output_dir: PathBuf,
    /// Reserved; every analysis is deterministic.
    pub seed: u64,
    /// Function-word list replacing the built-in one.
    pub function_words: Option<PathBuf>,
    /// Directory with replacement private-verb, preposition and pronoun lists.
    pub feature_lists: Option<PathBuf>,
    /// Directory of `<doc_id>.tsv` tagged streams used instead of the built-in tagger.
    pub tagged_dir: Option<PathBuf>,
    /// Scores CSV read by the `compare` analysis.
    pub scores: Option<PathBuf>,
    pub generation: Option<GenerationSettings>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            manifest: None,
            corpus_cache: None,
            analysis: None,
            groups: None,
            pools: BTreeMap::new(),
            pairs: Vec::new(),
            top_n: crate::lexical::DEFAULT_TOP_N,
            min_rate: crate::lexical::DEFAULT_MIN_RATE,
            tag_min_rate: 5.0,
            profile_top_n: 50,
            k: 3,
            rotation: Rotation::Varimax,
            dimensions: 2,
            exact_limit: DEFAULT_EXACT_LIMIT,
            output_dir: PathBuf::from("out"),
            seed: 0,
            function_words: None,
            feature_lists: None,
            tagged_dir: None,
            scores: None,
            generation: None,
        }
    }
}

impl AnalysisConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let body = fs::read_to_string(path).map_err(|source| Error::Load {
            path: path.to_path_buf(),
            source,
        })?;
        let mut config: AnalysisConfig = serde_json::from_str(&body)
            .map_err(|e| Error::Input(format!("config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        config.resolve_paths(base);
        config.validate()?;
        Ok(config)
    }

    /// Makes every relative path absolute with respect to `base`.
    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for p in [
            &mut self.manifest,
            &mut self.corpus_cache,
            &mut self.function_words,
            &mut self.feature_lists,
            &mut self.tagged_dir,
            &mut self.scores,
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
        fix(&mut self.output_dir);
        if let Some(g) = &mut self.generation {
            g.resolve_paths(base);
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("top_n", self.top_n as f64),
            ("min_rate", self.min_rate),
            ("tag_min_rate", self.tag_min_rate),
            ("profile_top_n", self.profile_top_n as f64),
            ("dimensions", self.dimensions as f64),
            ("exact_limit", self.exact_limit as f64),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Input(format!("`{name}` must be positive, got {v}")));
            }
        }
        if self.k < 1 {
            return Err(Error::Input("`k` must be at least 1".into()));
        }
        if let Some(g) = &self.groups {
            if g.is_empty() {
                return Err(Error::Input("`groups` filter is empty".into()));
            }
        }
        for (name, members) in &self.pools {
            if members.is_empty() {
                return Err(Error::Input(format!("pool `{name}` has no members")));
            }
        }
        check_writable(&self.output_dir)
    }

    pub fn grouping(&self) -> Grouping {
        Grouping {
            pools: self.pools.clone(),
        }
    }

    pub fn wilcoxon_options(&self) -> WilcoxonOptions {
        WilcoxonOptions {
            exact_limit: self.exact_limit,
        }
    }

    /// Configured pairs, or every pair of `groups` in order.
    pub fn pairs_for(&self, groups: &[String]) -> Vec<GroupPair> {
        if !self.pairs.is_empty() {
            return self.pairs.clone();
        }
        let mut out = Vec::new();
        for (i, a) in groups.iter().enumerate() {
            for b in &groups[i + 1..] {
                out.push(GroupPair::new(a, b));
            }
        }
        out
    }
}

/// Fails when the nearest existing ancestor of `dir` is not a writable directory.
fn check_writable(dir: &Path) -> Result<()> {
    let mut probe = dir;
    loop {
        match fs::metadata(probe) {
            Ok(meta) => {
                if !meta.is_dir() {
                    return Err(Error::Input(format!("output path {} is not a directory", probe.display())));
                }
                if meta.permissions().readonly() {
                    return Err(Error::Input(format!("output directory {} is read-only", probe.display())));
                }
                return Ok(());
            }
            Err(_) => match probe.parent() {
                Some(parent) if !parent.as_os_str().is_empty() => probe = parent,
                _ => return Ok(()),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_apply_to_missing_fields() {
        let c: AnalysisConfig = serde_json::from_str(r#"{"manifest": "m.json"}"#).unwrap();
        assert_eq!(c.top_n, 100);
        assert_eq!(c.min_rate, 2.0);
        assert_eq!(c.tag_min_rate, 5.0);
        assert_eq!(c.k, 3);
        assert_eq!(c.rotation, Rotation::Varimax);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(serde_json::from_str::<AnalysisConfig>(r#"{"topn": 5}"#).is_err());
    }

    #[test]
    fn thresholds_must_be_positive() {
        let c = AnalysisConfig {
            min_rate: 0.0,
            ..Default::default()
        };
        assert!(matches!(c.validate(), Err(Error::Input(_))));
        let c = AnalysisConfig {
            k: 0,
            ..Default::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn empty_group_filter_is_rejected() {
        let c = AnalysisConfig {
            groups: Some(vec![]),
            ..Default::default()
        };
        assert!(c.validate().unwrap_err().to_string().contains("groups"));
    }

    #[test]
    fn default_pairs_cover_all_combinations() {
        let c = AnalysisConfig::default();
        let g: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let p = c.pairs_for(&g);
        assert_eq!(p, [GroupPair::new("a", "b"), GroupPair::new("a", "c"), GroupPair::new("b", "c")]);
    }

    #[test]
    fn relative_paths_follow_the_config_file() {
        let mut c: AnalysisConfig =
            serde_json::from_str(r#"{"manifest": "m.json", "output_dir": "/abs"}"#).unwrap();
        c.resolve_paths(Path::new("/base"));
        assert_eq!(c.manifest.unwrap(), Path::new("/base/m.json"));
        assert_eq!(c.output_dir, Path::new("/abs"));
    }
}
