use std::path::PathBuf;

use rayon::prelude::*;

use super::config::{Analysis, AnalysisConfig};
use super::markdown::{comparison_table, loading_blocks, Table};
use super::svg::{emit_svg, PlotSpec, Point, Series};
use crate::corpus::{load_corpus, Corpus, CorpusManifest};
use crate::error::{Error, Result, StageExt};
use crate::lexical::{
    build_feature_matrix, content_word_profile, rank_words, select_function_words, FeatureMatrix,
    FunctionWordLexicon, RateUnit,
};
use crate::matrix::Matrix;
use crate::multivariate::{dimension_label, factor_analysis, pca, Decomposition, OutputFile};
use crate::stats::{compare_groups, compare_score_columns, comparison_csv, summarize, GroupComparison};
use crate::tagger::{
    extract_with, feature_csv, ingest_tagged, pos_tag, word_class_profile, BiberFeatureVector,
    FeatureCode, FeatureLists, TagStream, WORD_CLASS_TAGS,
};

/// Display threshold for loading tables.
pub const LOADING_DISPLAY_THRESHOLD: f64 = 0.3;

/// Files produced by one analysis, not yet written.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub analysis: Analysis,
    pub files: Vec<OutputFile>,
    pub notices: Vec<String>,
    /// Files read by the run, digested into the run record.
    pub inputs: Vec<PathBuf>,
}

impl RunOutput {
    pub fn file(&self, name: &str) -> Option<&OutputFile> {
        self.files.iter().find(|f| f.name == name)
    }
}

pub fn run_analysis(config: &AnalysisConfig, analysis: Analysis) -> Result<RunOutput> {
    match analysis {
        Analysis::Fwpca => run_fwpca(config),
        Analysis::Mda => run_mda(config),
        Analysis::Pos => run_pos_contrast(config),
        Analysis::ContentProfile => run_content_profile(config),
        Analysis::Compare => run_compare(config),
    }
}

struct Loaded {
    corpus: Corpus,
    inputs: Vec<PathBuf>,
    /// Selected group labels that have at least one text.
    labels: Vec<String>,
}

fn load(config: &AnalysisConfig) -> Result<Loaded> {
    let (corpus, mut inputs) = match (&config.corpus_cache, &config.manifest) {
        (Some(cache), _) if cache.exists() => {
            let body = std::fs::read_to_string(cache).map_err(|source| Error::Load {
                path: cache.clone(),
                source,
            })?;
            (Corpus::from_cache_json(&body)?, vec![cache.clone()])
        }
        (_, Some(path)) => {
            let manifest = CorpusManifest::from_path(path)?;
            let mut inputs = vec![path.clone()];
            inputs.extend(manifest.texts.iter().map(|e| manifest.resolve(e)));
            (load_corpus(&manifest)?, inputs)
        }
        _ => return Err(Error::Input("config names neither `manifest` nor an existing `corpus_cache`".into())),
    };
    let corpus = match &config.groups {
        Some(groups) if groups.is_empty() => return Err(Error::Input("`groups` filter is empty".into())),
        Some(groups) => corpus.subset(groups)?,
        None => corpus,
    };
    if corpus.is_empty() {
        return Err(Error::Input("no texts selected".into()));
    }
    let labels = corpus
        .groups
        .iter()
        .filter(|g| !g.members.is_empty())
        .map(|g| g.label.clone())
        .collect();
    if let Some(p) = &config.function_words {
        inputs.push(p.clone());
    }
    Ok(Loaded { corpus, inputs, labels })
}

fn csv_bytes(header: &[&str], rows: Vec<Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

fn f6(v: f64) -> String {
    format!("{v:.6}")
}

fn corpus_summary_csv(loaded: &Loaded) -> Result<Vec<u8>> {
    let rows = loaded
        .labels
        .iter()
        .map(|g| {
            let s = loaded.corpus.group_summary(g)?;
            Ok(vec![g.clone(), s.n_texts.to_string(), s.total_words.to_string(), f6(s.mean_length)])
        })
        .collect::<Result<_>>()?;
    csv_bytes(&["group", "n_texts", "total_words", "mean_length"], rows)
}

/// Drops features that do not vary across texts.
fn drop_constant(matrix: FeatureMatrix, notices: &mut Vec<String>) -> Result<FeatureMatrix> {
    let mut keep = Vec::new();
    for (j, name) in matrix.features.iter().enumerate() {
        let col = matrix.values.column(j);
        let (lo, hi) = col
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        if hi > lo {
            keep.push(name.clone());
        } else {
            notices.push(format!("feature `{name}` is constant across texts and was dropped"));
        }
    }
    if keep.len() == matrix.n_features() {
        return Ok(matrix);
    }
    if keep.is_empty() {
        return Err(Error::Analysis("every feature is constant across texts".into()));
    }
    matrix.select_features(&keep)
}

fn group_summary_csv(model: &dyn Decomposition, config: &AnalysisConfig, labels: &[String], dims: &[usize]) -> Result<Vec<u8>> {
    let grouping = config.grouping();
    let names: Vec<&String> = labels.iter().chain(config.pools.keys()).collect();
    let mut rows = Vec::new();
    for &d in dims {
        let col = model.scores().column(d);
        for name in &names {
            let members = grouping.members(name, model.groups())?;
            if members.is_empty() {
                continue;
            }
            let values: Vec<f64> = members.iter().map(|&i| col[i]).collect();
            let s = summarize(&values)?;
            rows.push(vec![
                dimension_label(d),
                name.to_string(),
                s.n.to_string(),
                f6(s.median),
                f6(s.q1),
                f6(s.q3),
                f6(s.iqr),
            ]);
        }
    }
    csv_bytes(&["dimension", "group", "n", "median", "q1", "q3", "iqr"], rows)
}

fn svg_name(prefix: &str, d: usize) -> String {
    format!("{prefix}_{}.svg", dimension_label(d))
}

/// Scatter, box plots and loading bars for the leading dimensions.
fn model_plots(model: &dyn Decomposition, title: &str, labels: &[String], dims: &[usize], feature_label: &dyn Fn(&str) -> String) -> Result<Vec<OutputFile>> {
    let mut files = Vec::new();
    let scores = model.scores();
    if dims.len() >= 2 {
        let points = (0..scores.rows())
            .map(|i| Point {
                x: scores[(i, dims[0])],
                y: scores[(i, dims[1])],
                group: model.groups()[i].clone(),
            })
            .collect();
        let spec = PlotSpec::Scatter {
            title: format!("{title} scores"),
            x_label: dimension_label(dims[0]),
            y_label: dimension_label(dims[1]),
            points,
        };
        files.push(OutputFile::new(
            format!("scatter_{}_{}.svg", dimension_label(dims[0]), dimension_label(dims[1])),
            emit_svg(&spec)?,
        ));
    }
    let loadings = model.display_loadings();
    for &d in dims {
        let col = scores.column(d);
        let series = labels
            .iter()
            .map(|g| Series {
                label: g.clone(),
                values: model
                    .groups()
                    .iter()
                    .zip(&col)
                    .filter(|(lg, _)| *lg == g)
                    .map(|(_, &v)| v)
                    .collect(),
            })
            .collect();
        let spec = PlotSpec::Boxplot {
            title: format!("{title} {} scores by group", dimension_label(d)),
            y_label: dimension_label(d),
            series,
        };
        files.push(OutputFile::new(svg_name("boxplot", d), emit_svg(&spec)?));
        let spec = PlotSpec::Bars {
            title: format!("{title} {} loadings", dimension_label(d)),
            x_label: "loading".into(),
            labels: model.features().iter().map(|f| feature_label(f)).collect(),
            values: loadings.column(d),
        };
        files.push(OutputFile::new(svg_name("loadings", d), emit_svg(&spec)?));
    }
    Ok(files)
}

fn comparisons(model: &dyn Decomposition, config: &AnalysisConfig, labels: &[String], dims: &[usize]) -> Result<Vec<GroupComparison>> {
    let pairs = config.pairs_for(labels);
    if pairs.is_empty() {
        return Ok(Vec::new());
    }
    compare_groups(model, &config.grouping(), &pairs, dims, &config.wilcoxon_options())
}

fn file_list(files: &[OutputFile]) -> String {
    let mut names: Vec<&str> = files.iter().map(|f| f.name.as_str()).collect();
    names.push("summary.md");
    names.sort_unstable();
    names.iter().map(|n| format!("- `{n}`\n")).collect()
}

fn notices_section(notices: &[String]) -> String {
    if notices.is_empty() {
        return String::new();
    }
    let mut s = String::from("## Notices\n\n");
    for n in notices {
        s.push_str(&format!("- {n}\n"));
    }
    s.push('\n');
    s
}

fn find<'a>(files: &'a [OutputFile], name: &str) -> &'a [u8] {
    &files.iter().find(|f| f.name == name).expect("file produced above").bytes
}

pub fn run_fwpca(config: &AnalysisConfig) -> Result<RunOutput> {
    let loaded = load(config).stage("load")?;
    let lexicon = match &config.function_words {
        Some(p) => FunctionWordLexicon::from_path(p).stage("load")?,
        None => FunctionWordLexicon::builtin(),
    };
    let mut notices = Vec::new();
    let ranked = rank_words(&loaded.corpus, config.top_n).stage("rank")?;
    let features = select_function_words(&ranked, &lexicon, config.min_rate).stage("select")?;
    let matrix = build_feature_matrix(&loaded.corpus, &features).stage("matrix")?;
    let matrix = drop_constant(matrix, &mut notices).stage("matrix")?;
    let model = pca(&matrix).stage("pca")?;
    let dims: Vec<usize> = (0..config.dimensions.min(model.n_dims())).collect();
    if dims.len() < 2 {
        notices.push("fewer than two dimensions; no scatter plot".into());
    }
    let comps = comparisons(&model, config, &loaded.labels, &dims).stage("compare")?;

    let mut files = Vec::new();
    files.push(OutputFile::new("corpus_summary.csv", corpus_summary_csv(&loaded)?));
    let rank_rows = features
        .words
        .iter()
        .zip(&features.rates)
        .enumerate()
        .map(|(i, (w, r))| vec![(i + 1).to_string(), w.clone(), f6(*r)])
        .collect();
    files.push(OutputFile::new("feature_set.csv", csv_bytes(&["rank", "word", "rate_per_1000"], rank_rows)?));
    files.push(OutputFile::new("feature_matrix.csv", matrix.to_csv_string()?));
    files.extend(model.files()?);
    files.push(OutputFile::new("comparisons.csv", comparison_csv(&comps)?));
    files.push(OutputFile::new(
        "group_summary.csv",
        group_summary_csv(&model, config, &loaded.labels, &dims).stage("compare")?,
    ));
    files.extend(model_plots(&model, "FW-PCA", &loaded.labels, &dims, &|f| f.to_string()).stage("render")?);

    let mut md = String::from("# Function-word PCA\n\n");
    md.push_str("## Corpus\n\n");
    md.push_str(&Table::parse(find(&files, "corpus_summary.csv"))?.render(&[])?);
    md.push_str("\n## Feature set\n\n");
    md.push_str(&Table::parse(find(&files, "feature_set.csv"))?.render(&[])?);
    md.push_str("\n## Variance\n\n");
    md.push_str(&Table::parse(find(&files, "eigenvalues.csv"))?.render(&[])?);
    for &d in &dims {
        md.push_str(&format!("\n## {} loadings\n\n", dimension_label(d)));
        md.push_str(&loading_blocks(find(&files, "loadings.csv"), &dimension_label(d), LOADING_DISPLAY_THRESHOLD, |s| s.to_string())?);
    }
    md.push_str("## Group comparisons\n\n");
    md.push_str(&comparison_table(find(&files, "comparisons.csv"))?);
    md.push_str("\n## Score spread\n\n");
    md.push_str(&Table::parse(find(&files, "group_summary.csv"))?.render(&[])?);
    md.push('\n');
    md.push_str(&notices_section(&notices));
    md.push_str("## Files\n\n");
    md.push_str(&file_list(&files));
    files.push(OutputFile::new("summary.md", md));

    Ok(RunOutput {
        analysis: Analysis::Fwpca,
        files,
        notices,
        inputs: loaded.inputs,
    })
}

fn tag_corpus(config: &AnalysisConfig, loaded: &Loaded) -> Result<(Vec<BiberFeatureVector>, Vec<PathBuf>)> {
    let lists = match &config.feature_lists {
        Some(dir) => FeatureLists::from_dir(dir)?,
        None => FeatureLists::builtin(),
    };
    let streams: Vec<(TagStream, Option<PathBuf>)> = loaded
        .corpus
        .documents
        .par_iter()
        .map(|doc| match &config.tagged_dir {
            Some(dir) => {
                let path = dir.join(format!("{}.tsv", doc.id));
                Ok((ingest_tagged(&path)?, Some(path)))
            }
            None => Ok((pos_tag(doc), None)),
        })
        .collect::<Result<_>>()?;
    let inputs = streams.iter().filter_map(|(_, p)| p.clone()).collect();
    let vectors = streams
        .par_iter()
        .map(|(s, _)| extract_with(s, &lists))
        .collect::<Result<_>>()?;
    Ok((vectors, inputs))
}

fn groups_of(loaded: &Loaded) -> Vec<String> {
    loaded.corpus.documents.iter().map(|d| d.group.clone()).collect()
}

fn describe_code(code: &str) -> String {
    match code.parse::<FeatureCode>() {
        Ok(c) => format!("{} ({})", c.name(), c.code()),
        Err(_) => code.to_string(),
    }
}

pub fn run_mda(config: &AnalysisConfig) -> Result<RunOutput> {
    let mut loaded = load(config).stage("load")?;
    let (vectors, tag_inputs) = tag_corpus(config, &loaded).stage("tag")?;
    loaded.inputs.extend(tag_inputs);
    let mut notices = Vec::new();

    let n = vectors.len() as f64;
    let mean_per_1000: Vec<f64> = FeatureCode::ALL
        .iter()
        .map(|&c| vectors.iter().map(|v| v.rate(c)).sum::<f64>() / n * 10.0)
        .collect();
    let selected: Vec<FeatureCode> = FeatureCode::ALL
        .iter()
        .zip(&mean_per_1000)
        .filter(|(_, &m)| m >= config.tag_min_rate)
        .map(|(&c, _)| c)
        .collect();
    let dropped: Vec<String> = FeatureCode::ALL
        .iter()
        .zip(&mean_per_1000)
        .filter(|(_, &m)| m < config.tag_min_rate)
        .map(|(c, m)| format!("{} ({m:.6})", c.code()))
        .collect();
    if !dropped.is_empty() {
        notices.push(format!(
            "{} of {} variables fall below {} per 1,000 tokens and were filtered: {}",
            dropped.len(),
            FeatureCode::ALL.len(),
            config.tag_min_rate,
            dropped.join(", ")
        ));
    }
    if selected.len() <= config.k {
        return Err(Error::Analysis(format!(
            "{} variables pass the tag filter, too few for {} factors",
            selected.len(),
            config.k
        )))
        .stage("select");
    }
    let values = Matrix::from_fn(vectors.len(), selected.len(), |i, j| vectors[i].rate(selected[j]) * 10.0);
    let matrix = FeatureMatrix::new(
        vectors.iter().map(|v| v.doc_id.clone()).collect(),
        groups_of(&loaded),
        selected.iter().map(|c| c.code().to_string()).collect(),
        values,
        RateUnit::PerThousand,
    )
    .stage("matrix")?;
    let matrix = drop_constant(matrix, &mut notices).stage("matrix")?;
    let model = factor_analysis(&matrix, config.k, config.rotation).stage("factor")?;
    let dims: Vec<usize> = (0..model.k).collect();
    let comps = comparisons(&model, config, &loaded.labels, &dims).stage("compare")?;

    let mut files = Vec::new();
    files.push(OutputFile::new("corpus_summary.csv", corpus_summary_csv(&loaded)?));
    files.push(OutputFile::new("biber_features.csv", feature_csv(&vectors, &groups_of(&loaded))?));
    let var_rows = FeatureCode::ALL
        .iter()
        .zip(&mean_per_1000)
        .map(|(c, &m)| {
            vec![
                c.code().to_string(),
                c.name().to_string(),
                f6(m),
                matrix.features.iter().any(|f| f == c.code()).to_string(),
            ]
        })
        .collect();
    files.push(OutputFile::new(
        "variables.csv",
        csv_bytes(&["code", "name", "mean_rate_per_1000", "selected"], var_rows)?,
    ));
    files.push(OutputFile::new("feature_matrix.csv", matrix.to_csv_string()?));
    files.extend(model.files()?);
    files.push(OutputFile::new("comparisons.csv", comparison_csv(&comps)?));
    files.push(OutputFile::new(
        "group_summary.csv",
        group_summary_csv(&model, config, &loaded.labels, &dims).stage("compare")?,
    ));
    files.extend(model_plots(&model, "MDA", &loaded.labels, &dims, &describe_code).stage("render")?);

    let mut md = String::from("# Multidimensional register analysis\n\n");
    md.push_str("## Corpus\n\n");
    md.push_str(&Table::parse(find(&files, "corpus_summary.csv"))?.render(&[])?);
    md.push_str("\n## Variables\n\n");
    md.push_str(&Table::parse(find(&files, "variables.csv"))?.render(&[])?);
    md.push_str(&format!("\n## Factors ({}, {} rotation)\n\n", model.k, model.rotation.id()));
    md.push_str(&Table::parse(find(&files, "eigenvalues.csv"))?.render(&[])?);
    for &d in &dims {
        md.push_str(&format!("\n## {}\n\n", dimension_label(d)));
        md.push_str(&loading_blocks(find(&files, "loadings.csv"), &dimension_label(d), LOADING_DISPLAY_THRESHOLD, describe_code)?);
    }
    md.push_str("## Group comparisons\n\n");
    md.push_str(&comparison_table(find(&files, "comparisons.csv"))?);
    md.push_str("\n## Score spread\n\n");
    md.push_str(&Table::parse(find(&files, "group_summary.csv"))?.render(&[])?);
    md.push('\n');
    md.push_str(&notices_section(&notices));
    md.push_str("## Files\n\n");
    md.push_str(&file_list(&files));
    files.push(OutputFile::new("summary.md", md));

    Ok(RunOutput {
        analysis: Analysis::Mda,
        files,
        notices,
        inputs: loaded.inputs,
    })
}

pub fn run_pos_contrast(config: &AnalysisConfig) -> Result<RunOutput> {
    let mut loaded = load(config).stage("load")?;
    let (vectors, tag_inputs) = tag_corpus(config, &loaded).stage("tag")?;
    loaded.inputs.extend(tag_inputs);
    let groups = groups_of(&loaded);
    let grouping = config.grouping();
    let names: Vec<String> = loaded.labels.iter().chain(config.pools.keys()).cloned().collect();

    let mut profiles = Vec::new();
    for name in &names {
        let rows = grouping.members(name, &groups).stage("profile")?;
        let members: Vec<BiberFeatureVector> = rows.iter().map(|&i| vectors[i].clone()).collect();
        profiles.push(word_class_profile(&members, name).stage("profile")?);
    }
    let mut header = vec!["group", "n_texts"];
    header.extend(WORD_CLASS_TAGS.iter().map(|c| c.code()));
    let rows = profiles
        .iter()
        .map(|p| {
            let mut r = vec![p.group.clone(), p.n_texts.to_string()];
            r.extend(p.rates.iter().map(|&v| f6(v)));
            r
        })
        .collect();
    let mut files = vec![
        OutputFile::new("word_class_rates.csv", csv_bytes(&header, rows)?),
        OutputFile::new("biber_features.csv", feature_csv(&vectors, &groups)?),
    ];
    let shown: Vec<_> = profiles.iter().filter(|p| loaded.labels.contains(&p.group)).collect();
    let spec = PlotSpec::GroupedBars {
        title: "Word-class rates per 1,000 tokens".into(),
        y_label: "rate per 1,000 tokens".into(),
        categories: WORD_CLASS_TAGS.iter().map(|c| c.code().to_string()).collect(),
        series: shown
            .iter()
            .map(|p| Series {
                label: p.group.clone(),
                values: p.rates.clone(),
            })
            .collect(),
    };
    files.push(OutputFile::new("word_classes.svg", emit_svg(&spec).stage("render")?));

    let mut md = String::from("# Word-class contrast\n\nRates per 1,000 tokens.\n\n");
    md.push_str(&Table::parse(find(&files, "word_class_rates.csv"))?.render(&[])?);
    md.push_str("\n## Files\n\n");
    md.push_str(&file_list(&files));
    files.push(OutputFile::new("summary.md", md));
    Ok(RunOutput {
        analysis: Analysis::Pos,
        files,
        notices: Vec::new(),
        inputs: loaded.inputs,
    })
}

pub fn run_content_profile(config: &AnalysisConfig) -> Result<RunOutput> {
    let loaded = load(config).stage("load")?;
    let lexicon = match &config.function_words {
        Some(p) => FunctionWordLexicon::from_path(p).stage("load")?,
        None => FunctionWordLexicon::builtin(),
    };
    let groups = groups_of(&loaded);
    let grouping = config.grouping();
    let names: Vec<String> = loaded.labels.iter().chain(config.pools.keys()).cloned().collect();
    let mut profile_rows = Vec::new();
    let mut summary_rows = Vec::new();
    for name in &names {
        let rows = grouping.members(name, &groups).stage("profile")?;
        let docs: Vec<_> = rows.iter().map(|&i| &loaded.corpus.documents[i]).collect();
        let p = content_word_profile(&docs, config.profile_top_n, &lexicon).stage("profile")?;
        for e in &p.entries {
            profile_rows.push(vec![
                name.clone(),
                e.rank.to_string(),
                e.word.clone(),
                f6(e.rate),
                e.is_content.to_string(),
            ]);
        }
        summary_rows.push(vec![
            name.clone(),
            docs.len().to_string(),
            p.first_content_rank.map(|r| r.to_string()).unwrap_or_default(),
            p.content_count.to_string(),
            p.content_words().join(" "),
        ]);
    }
    let mut files = vec![
        OutputFile::new(
            "content_profile.csv",
            csv_bytes(&["group", "rank", "word", "rate_per_1000", "is_content"], profile_rows)?,
        ),
        OutputFile::new(
            "content_summary.csv",
            csv_bytes(&["group", "n_texts", "first_content_rank", "content_count", "content_words"], summary_rows)?,
        ),
    ];
    let mut md = format!("# Function and content words in the top {}\n\n", config.profile_top_n);
    md.push_str(&Table::parse(find(&files, "content_summary.csv"))?.render(&[])?);
    md.push_str("\n## Files\n\n");
    md.push_str(&file_list(&files));
    files.push(OutputFile::new("summary.md", md));
    Ok(RunOutput {
        analysis: Analysis::ContentProfile,
        files,
        notices: Vec::new(),
        inputs: loaded.inputs,
    })
}

/// Score table read back from a `scores.csv`.
struct ScoreTable {
    groups: Vec<String>,
    dims: Vec<String>,
    scores: Matrix,
}

fn read_scores(path: &std::path::Path) -> Result<ScoreTable> {
    let body = std::fs::read(path).map_err(|source| Error::Load {
        path: path.to_path_buf(),
        source,
    })?;
    let t = Table::parse(&body)?;
    if t.header.len() < 3 || t.header[0] != "doc_id" || t.header[1] != "group" {
        return Err(Error::Input(format!(
            "{}: expected columns doc_id, group, D1, ...",
            path.display()
        )));
    }
    let dims = t.header[2..].to_vec();
    let mut values = Vec::with_capacity(t.rows.len() * dims.len());
    for (n, row) in t.rows.iter().enumerate() {
        for cell in &row[2..] {
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                line: n + 2,
                message: format!("`{cell}` is not a number"),
            })?;
            values.push(v);
        }
    }
    Ok(ScoreTable {
        groups: t.rows.iter().map(|r| r[1].clone()).collect(),
        scores: Matrix::from_vec(t.rows.len(), dims.len(), values),
        dims,
    })
}

pub fn run_compare(config: &AnalysisConfig) -> Result<RunOutput> {
    let path = config
        .scores
        .clone()
        .unwrap_or_else(|| config.output_dir.join("fwpca").join("scores.csv"));
    let table = read_scores(&path).stage("load")?;
    let mut labels: Vec<String> = Vec::new();
    for g in &table.groups {
        if !labels.contains(g) {
            labels.push(g.clone());
        }
    }
    if let Some(filter) = &config.groups {
        if filter.is_empty() {
            return Err(Error::Input("`groups` filter is empty".into())).stage("load");
        }
        if let Some(g) = filter.iter().find(|g| !labels.contains(g)) {
            return Err(Error::UnknownGroup(g.clone())).stage("load");
        }
        labels.retain(|g| filter.contains(g));
    }
    let dims: Vec<usize> = (0..config.dimensions.min(table.dims.len())).collect();
    let pairs = config.pairs_for(&labels);
    let comps = compare_score_columns(
        &table.scores,
        &table.groups,
        &config.grouping(),
        &pairs,
        &dims,
        &config.wilcoxon_options(),
    )
    .stage("compare")?;
    let mut files = vec![OutputFile::new("comparisons.csv", comparison_csv(&comps)?)];
    let mut md = format!("# Group comparisons\n\nScores: `{}`\n\n", path.display());
    md.push_str(&comparison_table(find(&files, "comparisons.csv"))?);
    md.push_str("\n## Files\n\n");
    md.push_str(&file_list(&files));
    files.push(OutputFile::new("summary.md", md));
    Ok(RunOutput {
        analysis: Analysis::Compare,
        files,
        notices: Vec::new(),
        inputs: vec![path],
    })
}
