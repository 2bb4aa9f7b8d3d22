//! Least-squares recovery of log-polynomial main-term coefficients.
//!
//! For a series with S(x) ~ x^k (c_0 + c_1 log x + ... + c_d log^d x) the
//! fit solves the normal equations of the scaled points S(x_i)/x_i^k
//! against powers of log x_i. The known closed-form constants are never
//! fitted; this exists for the leading coefficients whose lower-order
//! companions have no printed values.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use super::PartialSumSeries;
use crate::error::{Error, Result};

/// A fitted (or closed-form) main term S(x) ~ x^power * P(log x).
#[derive(Debug, Clone, PartialEq)]
pub struct MainTermModel {
    pub power: u32,
    pub log_degree: usize,
    /// Coefficients of P, ascending in the log power.
    pub coefficients: Vec<f64>,
    /// Per-checkpoint relative residual S/predicted - 1.
    pub residuals: Vec<(u64, f64)>,
    /// Relative tolerance the caller attaches when comparing against this
    /// model; purely informational here.
    pub tolerance: f64,
}

impl MainTermModel {
    /// x^power * sum_j c_j (log x)^j.
    pub fn predicted(&self, x: f64) -> f64 {
        let l = x.ln();
        let poly = self
            .coefficients
            .iter()
            .rev()
            .fold(0.0f64, |acc, &c| acc * l + c);
        x.powi(self.power as i32) * poly
    }

    /// The coefficient of the highest log power.
    pub fn leading_coefficient(&self) -> f64 {
        *self.coefficients.last().expect("degree >= 0")
    }

    /// Largest |relative residual| across the checkpoints used in the fit.
    pub fn max_residual(&self) -> f64 {
        self.residuals
            .iter()
            .map(|(_, r)| r.abs())
            .fold(0.0, f64::max)
    }
}

/// Exact-rational to f64 conversion that survives numerators and
/// denominators far beyond the f64 exponent range.
pub fn ratio_to_f64(v: &BigRational) -> f64 {
    big_to_f64_scaled(v.numer()) / big_to_f64_scaled(v.denom())
        * 2f64.powi(scale_exponent(v.numer()) - scale_exponent(v.denom()))
}

fn scale_exponent(x: &BigInt) -> i32 {
    let bits = x.magnitude().bits();
    if bits > 512 {
        (bits - 512) as i32
    } else {
        0
    }
}

fn big_to_f64_scaled(x: &BigInt) -> f64 {
    let shift = scale_exponent(x);
    let shifted: BigInt = x >> shift;
    shifted.to_f64().unwrap_or(if x.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

/// Fits S(x)/x^power against 1, log x, ..., log^d x by least squares.
///
/// Needs at least `log_degree + 2` checkpoints spanning two decades. The
/// residual report carries the per-checkpoint relative misfit.
pub fn fit_log_poly(
    series: &PartialSumSeries,
    power: u32,
    log_degree: usize,
) -> Result<MainTermModel> {
    let points = series.scaled_points(power);
    if points.len() < log_degree + 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least {} checkpoints for a degree-{log_degree} fit, got {}",
            log_degree + 2,
            points.len()
        )));
    }
    let (x_min, x_max) = (points[0].0, points[points.len() - 1].0);
    if x_max / x_min < 100 {
        return Err(Error::InvalidArgument(format!(
            "checkpoints must span two decades, got {x_min}..{x_max}"
        )));
    }

    let dim = log_degree + 1;
    let mut ata = vec![vec![0.0f64; dim]; dim];
    let mut aty = vec![0.0f64; dim];
    for &(x, y) in &points {
        let l = (x as f64).ln();
        let mut basis = Vec::with_capacity(dim);
        let mut acc = 1.0;
        for _ in 0..dim {
            basis.push(acc);
            acc *= l;
        }
        for i in 0..dim {
            for j in 0..dim {
                ata[i][j] += basis[i] * basis[j];
            }
            aty[i] += basis[i] * y;
        }
    }
    let coefficients = solve_spd(ata, aty)?;

    let model = MainTermModel {
        power,
        log_degree,
        coefficients,
        residuals: Vec::new(),
        tolerance: 0.0,
    };
    let residuals = points
        .iter()
        .map(|&(x, y)| {
            let l = (x as f64).ln();
            let pred = model
                .coefficients
                .iter()
                .rev()
                .fold(0.0f64, |acc, &c| acc * l + c);
            (x, y / pred - 1.0)
        })
        .collect();
    Ok(MainTermModel { residuals, ..model })
}

/// Gaussian elimination with partial pivoting on the (small, symmetric)
/// normal-equation system.
fn solve_spd(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    let scale = a
        .iter()
        .flat_map(|row| row.iter().map(|v| v.abs()))
        .fold(0.0f64, f64::max);
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot_row][col].abs() < 1e-13 * scale {
            return Err(Error::IllConditioned(format!(
                "pivot {} at column {col} below threshold",
                a[pivot_row][col]
            )));
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in (col + 1)..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0f64; n];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in (col + 1)..n {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
    }
    Ok(x)
}
