mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use registra::matrix::Matrix;
use registra::multivariate::{
    correlation, factor_analysis, pca, standardize, variance_report, Decomposition, Rotation,
};
use registra::Error;

#[test]
fn standardize_small_column() {
    let m = feature_matrix(Matrix::from_rows(&[vec![1.0, 4.0], vec![2.0, 9.0], vec![3.0, 5.0]]));
    let z = standardize(&m).unwrap();
    assert_eq!(z.values.column(0), vec![-1.0, 0.0, 1.0]);
    let again = standardize(&z).unwrap();
    assert!(again.values.max_abs_diff(&z.values) < 1e-12);
}

#[test]
fn constant_column_is_an_error_naming_the_feature() {
    let m = feature_matrix(Matrix::from_rows(&[vec![5.0, 1.0], vec![5.0, 2.0], vec![5.0, 3.0]]));
    match standardize(&m) {
        Err(Error::Analysis(msg)) => assert!(msg.contains("f00"), "{msg}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn toy_correlation_matches_covariance_formula() {
    let rows = vec![
        vec![2.0, 7.0, 1.0],
        vec![4.0, 3.0, 8.0],
        vec![5.0, 6.0, 2.0],
        vec![9.0, 1.0, 4.0],
    ];
    let m = feature_matrix(Matrix::from_rows(&rows));
    let r = correlation(&m).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let want = pearson(&m.values.column(i), &m.values.column(j));
            assert!((r.values[(i, j)] - want).abs() < 1e-12);
        }
    }
}

#[test]
fn identical_and_negated_columns() {
    let m = feature_matrix(Matrix::from_rows(&[
        vec![1.0, 1.0, 9.0],
        vec![2.0, 2.0, 8.0],
        vec![4.0, 4.0, 6.0],
    ]));
    let r = correlation(&m).unwrap();
    assert!((r.values[(0, 1)] - 1.0).abs() < 1e-12);
    assert!((r.values[(0, 2)] + 1.0).abs() < 1e-12);
}

#[test]
fn five_feature_fixture_matches_jacobi_oracle() {
    let mut g = rng(5);
    let m = feature_matrix(random_rates(&mut g, 40, 5));
    let model = pca(&m).unwrap();
    let r: Vec<Vec<f64>> = model.correlation.values.to_rows();
    let (values, vectors) = jacobi_eigen(&r);
    for j in 0..5 {
        assert!((model.eigenvalues[j] - values[j]).abs() < 1e-9);
        let dot: f64 = (0..5).map(|i| model.loadings[(i, j)] * vectors[i][j]).sum();
        assert!((dot.abs() - 1.0).abs() < 1e-8, "dimension {j}: |dot| = {}", dot.abs());
    }
    let l = &model.loadings;
    let recon = Matrix::from_fn(5, 5, |a, b| (0..5).map(|k| l[(a, k)] * model.eigenvalues[k] * l[(b, k)]).sum());
    assert!(recon.max_abs_diff(&model.correlation.values) < 1e-9);
}

#[test]
fn variance_report_examples() {
    let m = feature_matrix(Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0], vec![3.0, 6.0], vec![5.0, 10.0]]));
    let r = variance_report(&pca(&m).unwrap());
    assert!((r.proportions[0] - 1.0).abs() < 1e-12 && r.proportions[1].abs() < 1e-12);
    let m = feature_matrix(Matrix::from_rows(&[vec![3.0, 3.0], vec![1.0, 3.0], vec![3.0, 1.0], vec![1.0, 1.0]]));
    let r = variance_report(&pca(&m).unwrap());
    assert!((r.proportions[0] - 0.5).abs() < 1e-12 && (r.proportions[1] - 0.5).abs() < 1e-12);
}

#[test]
fn two_block_varimax_recovers_blocks() {
    let m = two_block_fixture();
    let r = correlation(&m).unwrap();
    let target = two_block_target();
    for i in 0..6 {
        for j in 0..6 {
            assert!((r.values[(i, j)] - target[i][j]).abs() < 1e-9);
        }
    }
    let fa = factor_analysis(&m, 2, Rotation::Varimax).unwrap();
    for f in 0..2 {
        let col = fa.loadings.column(f);
        let block = if col[0].abs() > col[3].abs() { 0 } else { 1 };
        for (i, v) in col.iter().enumerate() {
            if i / 3 == block {
                assert!(v.abs() > 0.8, "factor {f} feature {i}: {v}");
            } else {
                assert!(v.abs() < 0.2, "factor {f} feature {i}: {v}");
            }
        }
    }
    let unrotated = factor_analysis(&m, 2, Rotation::None).unwrap();
    for i in 0..6 {
        let h_rot: f64 = fa.loadings.row(i).iter().map(|v| v * v).sum();
        let h_raw: f64 = unrotated.loadings.row(i).iter().map(|v| v * v).sum();
        assert!((h_rot - h_raw).abs() < 1e-8);
        assert!((fa.communalities[i] - h_rot).abs() < 1e-8);
    }
}

#[test]
fn factoring_at_the_data_rank_tracks_pca_variance() {
    let mut g = rng(0);
    let (n, p, rank) = (150, 6, 2);
    let w: Vec<Vec<f64>> = (0..p).map(|_| (0..rank).map(|_| g.gen_range(-1.0..1.0)).collect()).collect();
    let mut values = Matrix::zeros(n, p);
    for i in 0..n {
        let f: Vec<f64> = (0..rank).map(|_| g.gen_range(-1.0..1.0)).collect();
        for j in 0..p {
            let signal: f64 = w[j].iter().zip(&f).map(|(a, b)| a * b).sum();
            values[(i, j)] = 20.0 + 5.0 * signal + g.gen_range(-0.3..0.3);
        }
    }
    let m = feature_matrix(values);
    let pca_cum: f64 = pca(&m).unwrap().explained[..rank].iter().sum();
    let fa = factor_analysis(&m, rank, Rotation::None).unwrap();
    let fa_cum = fa.cumulative_variance();
    assert!((fa_cum - pca_cum).abs() <= 0.05 * pca_cum, "fa {fa_cum} pca {pca_cum}");
}

#[test]
fn factor_k_bounds() {
    let m = two_block_fixture();
    assert!(factor_analysis(&m, 0, Rotation::Varimax).is_err());
    assert!(factor_analysis(&m, 6, Rotation::Varimax).is_err());
}

#[test]
fn promax_runs_and_keeps_signs_canonical() {
    let fa = factor_analysis(&two_block_fixture(), 2, Rotation::Promax).unwrap();
    for f in 0..2 {
        let col = fa.loadings.column(f);
        let lead = col.iter().cloned().fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
        assert!(lead > 0.0);
    }
    assert!((fa.phi[(0, 1)] - fa.phi[(1, 0)]).abs() < 1e-12);
}

fn permuted(m: &registra::lexical::FeatureMatrix, rows: &[usize], cols: &[usize]) -> registra::lexical::FeatureMatrix {
    registra::lexical::FeatureMatrix::new(
        rows.iter().map(|&i| m.doc_ids[i].clone()).collect(),
        rows.iter().map(|&i| m.groups[i].clone()).collect(),
        cols.iter().map(|&j| m.features[j].clone()).collect(),
        m.values.select_rows(rows).select_columns(cols),
        m.unit,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pca_invariants(seed in any::<u64>(), p in 2usize..12, n in 15usize..60) {
        let mut g = rng(seed);
        let m = feature_matrix(random_rates(&mut g, n, p));
        let model = pca(&m).unwrap();
        let total: f64 = model.eigenvalues.iter().sum();
        prop_assert!((total - p as f64).abs() < 1e-9);
        prop_assert!(model.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        for j in 0..p {
            let col = model.loadings.column(j);
            let norm: f64 = col.iter().map(|v| v * v).sum::<f64>().sqrt();
            prop_assert!((norm - 1.0).abs() < 1e-10);
            let var = sample_variance(&model.scores.column(j));
            prop_assert!((var - model.eigenvalues[j]).abs() < 1e-8);
        }
        let cum = model.variance_report().cumulative;
        prop_assert!(cum.windows(2).all(|w| w[0] <= w[1] + 1e-15));
        prop_assert!(*cum.last().unwrap() <= 1.0);

        // Document permutation.
        let mut rows: Vec<usize> = (0..n).collect();
        rows.reverse();
        let all_cols: Vec<usize> = (0..p).collect();
        let pm = pca(&permuted(&m, &rows, &all_cols)).unwrap();
        prop_assert!(pm.loadings.max_abs_diff(&model.loadings) < 1e-9);
        prop_assert!(pm.scores.max_abs_diff(&model.scores.select_rows(&rows)) < 1e-9);

        // Feature permutation, when the spectrum is well separated.
        let gaps_ok = model.eigenvalues.windows(2).all(|w| w[0] - w[1] > 1e-4);
        if gaps_ok {
            let mut cols: Vec<usize> = (0..p).collect();
            cols.rotate_left(1);
            let all_rows: Vec<usize> = (0..n).collect();
            let fm = pca(&permuted(&m, &all_rows, &cols)).unwrap();
            for j in 0..p {
                prop_assert!((fm.eigenvalues[j] - model.eigenvalues[j]).abs() < 1e-9);
            }
            let expected = model.loadings.select_rows(&cols);
            for j in 0..p {
                // Canonical signs are only defined when one loading is strictly largest.
                let mut mags: Vec<f64> = expected.column(j).iter().map(|v| v.abs()).collect();
                mags.sort_by(|a, b| b.total_cmp(a));
                let sign = if mags[0] - mags[1] > 1e-6 { 1.0 } else {
                    (fm.loadings[(0, j)] * expected[(0, j)]).signum()
                };
                for i in 0..p {
                    prop_assert!((fm.loadings[(i, j)] - sign * expected[(i, j)]).abs() < 1e-7);
                }
                for i in 0..n {
                    prop_assert!((fm.scores[(i, j)] - sign * model.scores[(i, j)]).abs() < 1e-7);
                }
            }
        }
    }

    #[test]
    fn varimax_preserves_communalities(seed in any::<u64>(), p in 4usize..9) {
        let mut g = rng(seed);
        let m = feature_matrix(random_rates(&mut g, 80, p));
        let k = g.gen_range(1..p.min(4));
        let raw = factor_analysis(&m, k, Rotation::None);
        let rot = factor_analysis(&m, k, Rotation::Varimax);
        if let (Ok(raw), Ok(rot)) = (raw, rot) {
            for i in 0..p {
                let a: f64 = raw.loadings.row(i).iter().map(|v| v * v).sum();
                let b: f64 = rot.loadings.row(i).iter().map(|v| v * v).sum();
                prop_assert!((a - b).abs() < 1e-8);
                prop_assert!(rot.communalities[i] <= 1.0 + 1e-6);
            }
        }
    }
}
