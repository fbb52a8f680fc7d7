#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use registra::lexical::{FeatureMatrix, RateUnit};
use registra::matrix::Matrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// W and two-sided exact p by enumerating every split of the pooled ranks.
pub fn brute_force_wilcoxon(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len();
    let mut pooled: Vec<(f64, bool)> = x.iter().map(|&v| (v, true)).chain(y.iter().map(|&v| (v, false))).collect();
    pooled.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total = pooled.len();
    let rank_sum: usize = pooled.iter().enumerate().filter(|(_, p)| p.1).map(|(i, _)| i + 1).sum();
    let offset = n * (n + 1) / 2;
    let observed = rank_sum - offset;
    let (mut below, mut above, mut all) = (0u64, 0u64, 0u64);
    for mask in 0u32..(1u32 << total) {
        if mask.count_ones() as usize != n {
            continue;
        }
        let s: usize = (0..total).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).sum();
        let u = s - offset;
        all += 1;
        if u <= observed {
            below += 1;
        }
        if u >= observed {
            above += 1;
        }
    }
    let p = (2.0 * below.min(above) as f64 / all as f64).min(1.0);
    (observed as f64, p)
}

/// Cyclic Jacobi eigen-decomposition; eigenvalues descending with matching
/// eigenvector columns.
pub fn jacobi_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut a = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for _ in 0..200 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k][p], v[k][q]);
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = (0..n).map(|r| order.iter().map(|&c| v[r][c]).collect()).collect();
    (values, vectors)
}

/// Pearson correlation computed directly from the covariance formula.
pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

pub fn sample_variance(a: &[f64]) -> f64 {
    let n = a.len() as f64;
    let m = a.iter().sum::<f64>() / n;
    a.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0)
}

pub fn feature_matrix(values: Matrix) -> FeatureMatrix {
    let (n, p) = (values.rows(), values.cols());
    FeatureMatrix::new(
        (0..n).map(|i| format!("doc{i:03}")).collect(),
        (0..n).map(|i| format!("g{}", i % 3)).collect(),
        (0..p).map(|j| format!("f{j:02}")).collect(),
        values,
        RateUnit::PerThousand,
    )
    .unwrap()
}

/// Non-negative rates driven by a few latent factors plus noise.
pub fn random_rates(rng: &mut ChaCha8Rng, n: usize, p: usize) -> Matrix {
    let latent = rng.gen_range(1..=3usize);
    let weights: Vec<Vec<f64>> = (0..p).map(|_| (0..latent).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    let mut m = Matrix::zeros(n, p);
    for i in 0..n {
        let f: Vec<f64> = (0..latent).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for j in 0..p {
            let signal: f64 = weights[j].iter().zip(&f).map(|(w, x)| w * x).sum();
            m[(i, j)] = 20.0 + 5.0 * signal + rng.gen_range(-1.0..1.0);
        }
    }
    m
}

fn cholesky(r: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = r.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                l[i][j] = (r[i][i] - s).sqrt();
            } else {
                l[i][j] = (r[i][j] - s) / l[j][j];
            }
        }
    }
    l
}

/// Data whose sample correlation matrix equals `target` exactly (up to
/// rounding): centred random columns are orthonormalized, then mixed by the
/// Cholesky factor of the target.
pub fn data_with_correlation(rng: &mut ChaCha8Rng, n: usize, target: &[Vec<f64>]) -> Matrix {
    let p = target.len();
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(p);
    for _ in 0..p {
        let mut c: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mean = c.iter().sum::<f64>() / n as f64;
        c.iter_mut().for_each(|v| *v -= mean);
        for prev in &cols {
            let dot: f64 = c.iter().zip(prev).map(|(a, b)| a * b).sum();
            c.iter_mut().zip(prev).for_each(|(a, b)| *a -= dot * b);
        }
        let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
        c.iter_mut().for_each(|v| *v /= norm);
        cols.push(c);
    }
    let l = cholesky(target);
    Matrix::from_fn(n, p, |i, j| {
        let mixed: f64 = (0..=j).map(|k| l[j][k] * cols[k][i]).sum();
        50.0 + 10.0 * mixed * ((n - 1) as f64).sqrt()
    })
}

/// Features 1-3 and 4-6 correlate at 0.8 within blocks and 0 across.
pub fn two_block_target() -> Vec<Vec<f64>> {
    (0..6)
        .map(|i| {
            (0..6)
                .map(|j| if i == j { 1.0 } else if i / 3 == j / 3 { 0.8 } else { 0.0 })
                .collect()
        })
        .collect()
}

pub fn two_block_fixture() -> FeatureMatrix {
    feature_matrix(data_with_correlation(&mut rng(6), 120, &two_block_target()))
}

const FUNCTION: &[&str] = &[
    "the", "of", "and", "to", "a", "in", "is", "that", "it", "for", "as", "with", "was", "on",
    "be", "by", "this", "are", "not", "or", "but", "from", "they", "we", "he", "she", "i",
    "you", "his", "her", "their", "which", "have", "has", "had", "can", "would", "will", "at",
];
const CONTENT: &[&str] = &[
    "student", "students", "education", "society", "history", "government", "people", "time",
    "world", "system", "language", "research", "important", "social", "economic", "country",
    "technology", "development", "city", "river", "music", "science", "market", "policy",
    "children", "school", "culture", "power", "health", "family", "change", "work", "life",
];
const VERBS: &[&str] = &[
    "believe", "think", "show", "walked", "said", "made", "created", "explains", "provides",
    "remains", "grew", "became",
];

/// A deterministic pseudo-text: each group draws function words with
/// its own skew so that groups differ stylistically.
pub fn synthetic_text(rng: &mut ChaCha8Rng, group: usize, words: usize) -> String {
    let mut out = String::new();
    let mut in_sentence = 0;
    for w in 0..words {
        let roll: f64 = rng.gen();
        let word = if roll < 0.45 + 0.05 * group as f64 {
            let skew = (group * 7) % FUNCTION.len();
            let idx = ((rng.gen::<f64>().powi(2) * FUNCTION.len() as f64) as usize + skew) % FUNCTION.len();
            FUNCTION[idx]
        } else if roll < 0.85 {
            CONTENT[rng.gen_range(0..CONTENT.len())]
        } else {
            VERBS[rng.gen_range(0..VERBS.len())]
        };
        if in_sentence == 0 {
            let mut c = word.chars();
            let first = c.next().unwrap().to_uppercase().collect::<String>();
            out.push_str(&first);
            out.push_str(c.as_str());
        } else {
            out.push_str(word);
        }
        in_sentence += 1;
        let end = in_sentence > 6 && rng.gen_bool(0.15);
        if end || w + 1 == words {
            out.push_str(". ");
            in_sentence = 0;
        } else if rng.gen_bool(0.06) {
            out.push_str(", ");
        } else {
            out.push(' ');
        }
    }
    out.trim_end().to_string()
}

/// Writes `n_texts` synthetic texts across `groups` and returns the manifest path.
pub fn write_synthetic_corpus(dir: &std::path::Path, groups: &[&str], n_texts: usize, words: usize, seed: u64) -> std::path::PathBuf {
    let mut r = rng(seed);
    std::fs::create_dir_all(dir.join("texts")).unwrap();
    let mut entries = Vec::new();
    for i in 0..n_texts {
        let g = i % groups.len();
        let id = format!("t{i:04}");
        let rel = format!("texts/{id}.txt");
        std::fs::write(dir.join(&rel), synthetic_text(&mut r, g, words)).unwrap();
        entries.push(serde_json::json!({"id": id, "path": rel, "group": groups[g], "topic": format!("topic{}", i % 10)}));
    }
    let manifest = serde_json::json!({"groups": groups, "texts": entries});
    let path = dir.join("manifest.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest).unwrap()).unwrap();
    path
}

pub fn fixture_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// The bundled fixture configuration with its output redirected to `out`.
pub fn fixture_config(out: &std::path::Path) -> registra::report::AnalysisConfig {
    let mut c = registra::report::AnalysisConfig::from_path(&fixture_dir().join("fixture_config.json")).unwrap();
    c.output_dir = out.to_path_buf();
    c
}

/// Every file below `dir` with its bytes, keyed by relative path.
pub fn read_tree(dir: &std::path::Path) -> std::collections::BTreeMap<String, Vec<u8>> {
    let mut out = std::collections::BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().display().to_string();
                out.insert(rel, std::fs::read(&p).unwrap());
            }
        }
    }
    out
}

/// Correct and total token counts of the built-in tagger on the hand-tagged sample,
/// plus every confusion as (gold, predicted) → tokens.
pub fn gold_sample_accuracy() -> (usize, usize, std::collections::BTreeMap<(String, String), Vec<String>>) {
    let gold = registra::tagger::parse_tagged(include_str!("../../data/pos_sample.tsv"), "pos_sample").unwrap();
    let (mut right, mut total) = (0usize, 0usize);
    let mut confusions: std::collections::BTreeMap<(String, String), Vec<String>> = Default::default();
    for sentence in gold.sentences() {
        let words: Vec<String> = sentence.iter().map(|t| t.token.clone()).collect();
        let tags = registra::tagger::tag_tokens(&words);
        for (t, got) in sentence.iter().zip(&tags) {
            total += 1;
            if &t.tag == got {
                right += 1;
            } else {
                confusions.entry((t.tag.clone(), got.clone())).or_default().push(t.token.clone());
            }
        }
    }
    (right, total, confusions)
}

pub struct FeatureScore {
    pub code: registra::tagger::FeatureCode,
    pub tp: usize,
    pub fp: usize,
    pub fneg: usize,
}

/// Token-level true/false positives per Biber feature over the annotated
/// sentence corpus. Also returns the number of sentences and one line per mismatch.
pub fn feature_sentence_scores() -> (usize, Vec<FeatureScore>, Vec<String>) {
    use registra::tagger::{annotate, FeatureCode, FeatureLists, Tagger};
    let lists = FeatureLists::builtin();
    let mut scores: Vec<FeatureScore> =
        FeatureCode::ALL.iter().map(|&code| FeatureScore { code, tp: 0, fp: 0, fneg: 0 }).collect();
    let mut mismatches = Vec::new();
    let mut n = 0;
    for line in include_str!("../../data/feature_sentences.tsv").lines() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        n += 1;
        let (sentence, spec) = line.split_once('\t').unwrap();
        let mut expected: std::collections::BTreeMap<FeatureCode, Vec<String>> = Default::default();
        for item in spec.split(';') {
            let (code, toks) = item.split_once('=').unwrap();
            expected.insert(code.parse().unwrap(), toks.split(',').map(str::to_string).collect());
        }
        let mut stream = Tagger::builtin().tag_text("s", sentence);
        annotate(&mut stream, &lists);
        for score in scores.iter_mut() {
            let code = score.code;
            let mut got: Vec<String> = stream
                .tokens
                .iter()
                .filter(|t| t.features.contains(&code))
                .map(|t| t.token.to_lowercase())
                .collect();
            let mut want = expected.get(&code).cloned().unwrap_or_default();
            got.sort();
            want.sort();
            if got != want {
                let tagged: Vec<String> = stream.tokens.iter().map(|t| format!("{}/{}", t.token, t.tag)).collect();
                mismatches.push(format!("{sentence}: {code} got {got:?} want {want:?} [{}]", tagged.join(" ")));
            }
            for g in &got {
                if let Some(pos) = want.iter().position(|w| w == g) {
                    want.remove(pos);
                    score.tp += 1;
                } else {
                    score.fp += 1;
                }
            }
            score.fneg += want.len();
        }
    }
    (n, scores, mismatches)
}
