//! Exact partial-sum engines for the averaged subgroup counts, numerical
//! evaluation of the Euler-product constants in their main terms, and
//! least-squares recovery of log-polynomial coefficients.
//!
//! Every summation here is exact integer (or exact rational, for the mean
//! exponent series) arithmetic; floating point only enters when a finished
//! sum is compared against a main term.

mod constants;
mod fit;
mod sums;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::arith::Natural;
use crate::error::{Error, Result};

pub use constants::{euler_constant, ConstantId, NamedConstant};
pub use fit::{fit_log_poly, ratio_to_f64, MainTermModel};
pub use sums::{sum_diag, sum_pairs_c, sum_pairs_s, sum_sigma1_pairs, DiagSeries, MAX_SUM_X};

/// Where a summation engine records its exact partial sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Checkpoints {
    /// Powers of ten from 10^3 up to the summation limit, plus the limit
    /// itself.
    Geometric,
    /// An explicit list; entries above the limit are dropped.
    Explicit(&'static [u64]),
}

/// Owned variant used by the CLI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckpointList {
    Geometric,
    Explicit(Vec<u64>),
}

impl Checkpoints {
    pub fn to_list(self) -> CheckpointList {
        match self {
            Checkpoints::Geometric => CheckpointList::Geometric,
            Checkpoints::Explicit(v) => CheckpointList::Explicit(v.to_vec()),
        }
    }
}

impl CheckpointList {
    /// Sorted, deduplicated checkpoints, capped at `x` and always ending
    /// with `x` itself.
    pub fn resolve(&self, x: u64) -> Result<Vec<u64>> {
        if x == 0 {
            return Err(Error::ZeroArgument);
        }
        let mut points = match self {
            CheckpointList::Geometric => {
                let mut v = Vec::new();
                let mut p = 1000u64;
                while p < x {
                    v.push(p);
                    p = p.saturating_mul(10);
                }
                v
            }
            CheckpointList::Explicit(list) => {
                if list.iter().any(|&c| c == 0) {
                    return Err(Error::ZeroArgument);
                }
                list.iter().copied().filter(|&c| c < x).collect()
            }
        };
        points.push(x);
        points.sort_unstable();
        points.dedup();
        Ok(points)
    }
}

/// Checkpointed exact partial sums of one series.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialSumSeries {
    pub label: String,
    checkpoints: Vec<(u64, BigRational)>,
}

impl PartialSumSeries {
    pub(crate) fn from_rationals(label: &str, checkpoints: Vec<(u64, BigRational)>) -> Self {
        debug_assert!(checkpoints.windows(2).all(|w| w[0].0 < w[1].0));
        PartialSumSeries {
            label: label.to_string(),
            checkpoints,
        }
    }

    pub(crate) fn from_integers(label: &str, points: Vec<(u64, Natural)>) -> Self {
        PartialSumSeries::from_rationals(
            label,
            points
                .into_iter()
                .map(|(x, s)| (x, BigRational::from_integer(BigInt::from(s))))
                .collect(),
        )
    }

    /// (x, S(x)) pairs with x strictly increasing.
    pub fn checkpoints(&self) -> &[(u64, BigRational)] {
        &self.checkpoints
    }

    pub fn value_at(&self, x: u64) -> Option<&BigRational> {
        self.checkpoints
            .iter()
            .find(|(cx, _)| *cx == x)
            .map(|(_, v)| v)
    }

    /// The final checkpoint.
    pub fn last(&self) -> (u64, &BigRational) {
        let (x, v) = self.checkpoints.last().expect("series is non-empty");
        (*x, v)
    }

    /// Integer values, when the series is integral (every series except the
    /// mean-exponent one).
    pub fn integer_values(&self) -> Option<Vec<(u64, Natural)>> {
        self.checkpoints
            .iter()
            .map(|(x, v)| {
                if v.denom().is_one() && !v.numer().is_negative() {
                    Some((*x, v.numer().to_biguint().unwrap()))
                } else {
                    None
                }
            })
            .collect()
    }

    /// S(x)/x^power at each checkpoint, for fitting and reporting.
    pub fn scaled_points(&self, power: u32) -> Vec<(u64, f64)> {
        self.checkpoints
            .iter()
            .map(|(x, v)| {
                let scale = BigRational::from_integer(BigInt::from(*x).pow(power));
                (*x, ratio_to_f64(&(v / scale)))
            })
            .collect()
    }
}
