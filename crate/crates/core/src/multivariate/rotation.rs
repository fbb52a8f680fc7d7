use serde::{Deserialize, Serialize};

use super::eigen::invert;
use crate::error::Result;
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Rotation {
    #[default]
    Varimax,
    Promax,
    None,
}

impl Rotation {
    pub fn id(&self) -> &'static str {
        match self {
            Rotation::Varimax => "varimax",
            Rotation::Promax => "promax",
            Rotation::None => "none",
        }
    }
}

impl std::str::FromStr for Rotation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "varimax" => Ok(Rotation::Varimax),
            "promax" => Ok(Rotation::Promax),
            "none" => Ok(Rotation::None),
            other => Err(format!("unknown rotation `{other}`")),
        }
    }
}

pub(crate) struct Rotated {
    /// Pattern loadings (equal to structure loadings for orthogonal rotations).
    pub pattern: Matrix,
    /// Factor correlation matrix; identity for orthogonal rotations.
    pub phi: Matrix,
}

const VARIMAX_EPS: f64 = 1e-12;
const VARIMAX_MAX_SWEEPS: usize = 1000;

/// Kaiser-normalized varimax by successive pairwise planar rotations.
pub(crate) fn varimax(loadings: &Matrix) -> Matrix {
    let p = loadings.rows();
    let k = loadings.cols();
    let mut x = loadings.clone();
    if k < 2 {
        return x;
    }
    let h: Vec<f64> = (0..p)
        .map(|i| x.row(i).iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    for i in 0..p {
        if h[i] > 0.0 {
            for v in x.row_mut(i) {
                *v /= h[i];
            }
        }
    }
    let pf = p as f64;
    for _ in 0..VARIMAX_MAX_SWEEPS {
        let mut max_angle: f64 = 0.0;
        for a in 0..k - 1 {
            for b in a + 1..k {
                let (mut sa, mut sb, mut sc, mut sd) = (0.0, 0.0, 0.0, 0.0);
                for i in 0..p {
                    let xa = x[(i, a)];
                    let xb = x[(i, b)];
                    let u = xa * xa - xb * xb;
                    let v = 2.0 * xa * xb;
                    sa += u;
                    sb += v;
                    sc += u * u - v * v;
                    sd += 2.0 * u * v;
                }
                let num = sd - 2.0 * sa * sb / pf;
                let den = sc - (sa * sa - sb * sb) / pf;
                let phi = 0.25 * num.atan2(den);
                if phi.abs() > VARIMAX_EPS {
                    let (s, c) = phi.sin_cos();
                    for i in 0..p {
                        let xa = x[(i, a)];
                        let xb = x[(i, b)];
                        x[(i, a)] = c * xa + s * xb;
                        x[(i, b)] = -s * xa + c * xb;
                    }
                }
                max_angle = max_angle.max(phi.abs());
            }
        }
        if max_angle <= VARIMAX_EPS {
            break;
        }
    }
    for i in 0..p {
        for v in x.row_mut(i) {
            *v *= h[i];
        }
    }
    x
}

/// Promax: varimax followed by an oblique least-squares fit to the
/// elementwise power target (power 4).
pub(crate) fn promax(loadings: &Matrix) -> Result<Rotated> {
    let k = loadings.cols();
    let x = varimax(loadings);
    if k < 2 {
        return Ok(Rotated {
            pattern: x,
            phi: Matrix::identity(k),
        });
    }
    let target = Matrix::from_fn(x.rows(), k, |i, j| {
        let v = x[(i, j)];
        v * v.abs().powi(3)
    });
    let xt = x.transpose();
    let mut u = invert(&xt.matmul(&x))?.matmul(&xt).matmul(&target);
    let d = invert(&u.transpose().matmul(&u))?;
    for j in 0..k {
        let s = d[(j, j)].sqrt();
        for i in 0..k {
            u[(i, j)] *= s;
        }
    }
    let pattern = x.matmul(&u);
    let ui = invert(&u)?;
    let phi = ui.matmul(&ui.transpose());
    Ok(Rotated { pattern, phi })
}

pub(crate) fn rotate(loadings: &Matrix, rotation: Rotation) -> Result<Rotated> {
    let k = loadings.cols();
    Ok(match rotation {
        Rotation::None => Rotated {
            pattern: loadings.clone(),
            phi: Matrix::identity(k),
        },
        Rotation::Varimax => Rotated {
            pattern: varimax(loadings),
            phi: Matrix::identity(k),
        },
        Rotation::Promax => promax(loadings)?,
    })
}
