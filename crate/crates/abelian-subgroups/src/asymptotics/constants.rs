//! Euler-product constants for the main terms, with explicit tail bounds.
//!
//! Each product is truncated at a prime bound P and the remaining factors
//! are bounded through
//!     sum_{p > P} p^-2 <= 2.52 / (P ln P)
//! (partial summation against pi(t) <= 1.26 t/ln t, valid for t >= 17) and
//!     sum_{p > P} ln p / p^2 <= 2.04 / P
//! (partial summation against theta(t) <= 1.02 t). Every reported value is
//! a lower bound of the true product of >= 1 factors, and value + tail_bound
//! an upper bound, so doubling the prime bound must land inside the bracket.

use once_cell::sync::Lazy;
use std::sync::Mutex;

use crate::arith::small;
use crate::error::{Error, Result};
use crate::pgroup;

/// Which constant to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantId {
    /// H(k) = prod_p (1 + p^-2 + ... + p^-k), the density constant of the
    /// diagonal cyclic-count average.
    HK(u32),
    /// H(3) and H'(3) of the Dirichlet series attached to s(n,n,n) via
    /// s(n,n,n) = sum_{d|n} d^2 tau(d) h(n/d).
    H3AndDeriv,
    /// The mean-exponent constant
    /// C = prod_p (1-1/p) sum_v (p^{v+1}-1)^2 / (p^{2v}(p^{v+2}+p^{v+1}-(2v+3)p+2v+1)).
    CAe,
    /// zeta(2) zeta(3) ... zeta(k) / k, the sublattice-average constant.
    ZetaProduct(u32),
}

/// One evaluated constant.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedConstant {
    pub name: String,
    pub value: f64,
    /// Rigorous bound on the truncation error; the true value lies in
    /// [value, value + tail_bound] for the monotone products and within
    /// +- tail_bound otherwise.
    pub tail_bound: f64,
}

/// sum_{p > bound} p^-2 upper bound.
fn tail_inv_square(bound: u64) -> f64 {
    2.52 / (bound as f64 * (bound as f64).ln())
}

/// sum_{p > bound} ln p / p^2 upper bound.
fn tail_log_inv_square(bound: u64) -> f64 {
    2.04 / bound as f64
}

/// Evaluates the selected constant with all primes up to `prime_bound`.
/// H3AndDeriv returns two entries, everything else one.
pub fn euler_constant(which: ConstantId, prime_bound: u64) -> Result<Vec<NamedConstant>> {
    if prime_bound < 100 {
        return Err(Error::InvalidArgument(
            "prime bound must be at least 100".into(),
        ));
    }
    match which {
        ConstantId::HK(k) => {
            if k < 2 {
                return Err(Error::InvalidArgument(
                    "H(k) requires k >= 2; the k = 1 product diverges".into(),
                ));
            }
            let mut log_sum = 0.0f64;
            for p in small::primes_upto(prime_bound) {
                let p = p as f64;
                let mut term = 0.0;
                let mut pk = p * p;
                for _ in 2..=k {
                    term += pk.recip();
                    pk *= p;
                }
                log_sum += term.ln_1p();
            }
            let value = log_sum.exp();
            // factor - 1 <= p^-2/(1 - 1/p) <= 1.02 p^-2 for p > 100
            let tail = value * (1.02 * tail_inv_square(prime_bound)).exp_m1();
            Ok(vec![NamedConstant {
                name: format!("H({k})"),
                value,
                tail_bound: tail,
            }])
        }
        ConstantId::H3AndDeriv => Ok(h3_and_derivative(prime_bound)),
        ConstantId::CAe => Ok(vec![mean_exponent_constant(prime_bound)]),
        ConstantId::ZetaProduct(k) => {
            if k < 1 {
                return Err(Error::InvalidArgument("zeta product needs k >= 1".into()));
            }
            let mut value = 1.0f64;
            let mut rel_err = 0.0f64;
            for j in 2..=k {
                let (z, e) = zeta_int(j);
                value *= z;
                rel_err += e / z;
            }
            value /= k as f64;
            Ok(vec![NamedConstant {
                name: format!("zeta(2)..zeta({k})/{k}"),
                value,
                tail_bound: value * rel_err + f64::EPSILON * value,
            }])
        }
    }
}

/// zeta(j) for integer j >= 2 by direct summation with the Euler-Maclaurin
/// closing terms; returns (value, error bound).
fn zeta_int(j: u32) -> (f64, f64) {
    let n = 100_000u64;
    let mut sum = 0.0f64;
    // summing small-to-large keeps the floating error negligible
    for m in (1..=n).rev() {
        sum += (m as f64).powi(-(j as i32));
    }
    let nf = n as f64;
    let tail = nf.powi(1 - j as i32) / (j as f64 - 1.0) - 0.5 * nf.powi(-(j as i32));
    let err = (j as f64) / 12.0 * nf.powi(-(j as i32) - 1) + 1e-15 * sum;
    (sum + tail, err)
}

/// Coefficient tables of s(p^v, p^v, p^v) as f64, indexed by v.
static DIAG3_F64: Lazy<Mutex<Vec<Vec<f64>>>> = Lazy::new(|| Mutex::new(vec![vec![1.0]]));

fn diag3_coeffs(v: usize) -> Vec<f64> {
    use num_traits::ToPrimitive;
    let mut cache = DIAG3_F64.lock().unwrap();
    while cache.len() <= v {
        let a = cache.len() as u32;
        let poly = pgroup::s3_prime_power_poly(a, a, a).expect("equal exponents are valid");
        cache.push(poly.coeffs().iter().map(|c| c.to_f64().unwrap()).collect());
    }
    cache[v].clone()
}

fn horner_f64(coeffs: &[f64], p: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * p + c)
}

/// H(3) and H'(3) for the series defined by s(n,n,n) = sum d^2 tau(d) h(n/d).
///
/// The local factor is computed without the cancellation-prone h values:
/// F_p(z) = S_p(z)(1 - p^{2-z})^2 with S_p(z) = sum_v s(p^v,p^v,p^v) p^{-vz},
/// all of whose terms are positive, and
/// F_p'(3)/F_p(3) = ln p (2/(p-1) - T_p/S_p) with T_p = sum_v v s_v p^{-3v}.
fn h3_and_derivative(prime_bound: u64) -> Vec<NamedConstant> {
    let mut log_h = 0.0f64;
    let mut dsum = 0.0f64;
    for p in small::primes_upto(prime_bound) {
        let pf = p as f64;
        let mut s = 1.0f64;
        let mut t = 0.0f64;
        let mut scale = 1.0f64;
        let mut v = 1usize;
        loop {
            scale /= pf * pf * pf;
            let sv = horner_f64(&diag3_coeffs(v), pf) * scale;
            s += sv;
            t += v as f64 * sv;
            if sv < 1e-19 * s || v > 120 {
                break;
            }
            v += 1;
        }
        let q = 1.0 - 1.0 / pf;
        log_h += (s * q * q).ln();
        dsum += pf.ln() * (2.0 / (pf - 1.0) - t / s);
    }
    let h3 = log_h.exp();
    // |factor - 1| <= 2.2 p^-2 for the factors beyond the bound
    let h3_log_tail = 2.2 * tail_inv_square(prime_bound);
    let h3_tail = h3 * h3_log_tail.exp_m1();
    // |F'/F| <= 3 ln p / p^2 beyond the bound
    let dsum_tail = 3.0 * tail_log_inv_square(prime_bound);
    let h3d = h3 * dsum;
    let h3d_tail = h3_tail * dsum.abs() + (h3 + h3_tail) * dsum_tail;
    vec![
        NamedConstant {
            name: "H(3)".into(),
            value: h3,
            tail_bound: h3_tail,
        },
        NamedConstant {
            name: "H'(3)".into(),
            value: h3d,
            tail_bound: h3d_tail,
        },
    ]
}

/// The mean-exponent constant C.
fn mean_exponent_constant(prime_bound: u64) -> NamedConstant {
    let mut log_c = 0.0f64;
    for p in small::primes_upto(prime_bound) {
        let pf = p as f64;
        let mut series = 0.0f64;
        let mut v = 0u32;
        loop {
            let vf = v as f64;
            let num = (pf.powi(v as i32 + 1) - 1.0).powi(2);
            let den = pf.powi(2 * v as i32)
                * (pf.powi(v as i32 + 2) + pf.powi(v as i32 + 1) - (2.0 * vf + 3.0) * pf
                    + 2.0 * vf
                    + 1.0);
            let term = num / den;
            series += term;
            if term < 1e-19 * series || v > 200 {
                break;
            }
            v += 1;
        }
        log_c += ((1.0 - 1.0 / pf) * series).ln();
    }
    let value = log_c.exp();
    // |factor - 1| <= 4 p^-2
    let tail = value * (4.0 * tail_inv_square(prime_bound)).exp_m1();
    NamedConstant {
        name: "C".into(),
        value,
        tail_bound: tail,
    }
}
