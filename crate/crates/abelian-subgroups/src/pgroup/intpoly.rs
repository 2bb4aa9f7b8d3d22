//! Integer-coefficient polynomials in the formal variable p.
//!
//! This is the value type of every p-group count: dense coefficients,
//! arbitrary-precision, no trailing zeros. Division is exact long division;
//! a nonzero remainder in any of the closed forms would falsify the formula
//! being evaluated, so it panics rather than rounding.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense polynomial over Z; `coeffs[i]` is the coefficient of p^i.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let c = c.into();
        if c.is_zero() {
            IntPoly::zero()
        } else {
            IntPoly { coeffs: vec![c] }
        }
    }

    /// c * p^k.
    pub fn monomial(c: impl Into<BigInt>, k: usize) -> Self {
        let c = c.into();
        if c.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        IntPoly { coeffs }
    }

    /// 1 + p + ... + p^{len-1}; zero when `len == 0`.
    pub fn geometric(len: usize) -> Self {
        IntPoly {
            coeffs: vec![BigInt::one(); len],
        }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly { coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of p^k (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Multiplies by p^k.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend_from_slice(&self.coeffs);
        IntPoly { coeffs }
    }

    /// Horner evaluation at an arbitrary integer.
    pub fn eval(&self, p: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * p + c;
        }
        acc
    }

    /// Evaluation at a non-negative point, asserting a non-negative result.
    pub fn eval_natural(&self, p: &BigUint) -> Result<BigUint> {
        let v = self.eval(&BigInt::from(p.clone()));
        v.to_biguint().ok_or_else(|| {
            Error::Internal(format!("polynomial evaluated negative at {p}: {self}"))
        })
    }

    /// Exact division; `None` if `d` is zero, its leading coefficient does
    /// not divide at some step, or a remainder is left.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.coeffs.len() < d.coeffs.len() {
            return None;
        }
        let lead = d.coeffs.last().unwrap();
        let mut rem = self.coeffs.clone();
        let qlen = rem.len() - d.coeffs.len() + 1;
        let mut q = vec![BigInt::zero(); qlen];
        for i in (0..qlen).rev() {
            let top = rem[i + d.coeffs.len() - 1].clone();
            if top.is_zero() {
                continue;
            }
            let (c, r) = num_integer::div_rem(top, lead.clone());
            if !r.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let t = dc * &c;
                rem[i + j] -= t;
            }
            q[i] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::from_coeffs(q))
    }

    /// Exact division that panics on failure: used where the dividend comes
    /// from a closed form whose divisibility is part of the claim.
    pub fn div_exact_or_panic(&self, d: &IntPoly, context: &str) -> IntPoly {
        self.div_exact(d)
            .unwrap_or_else(|| panic!("inexact polynomial division in {context}: ({self}) / ({d})"))
    }
}

impl Add<&IntPoly> for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let mut c = self.coeffs.get(i).cloned().unwrap_or_default();
            if let Some(r) = rhs.coeffs.get(i) {
                c += r;
            }
            coeffs.push(c);
        }
        IntPoly::from_coeffs(coeffs)
    }
}

impl Sub<&IntPoly> for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let mut c = self.coeffs.get(i).cloned().unwrap_or_default();
            if let Some(r) = rhs.coeffs.get(i) {
                c -= r;
            }
            coeffs.push(c);
        }
        IntPoly::from_coeffs(coeffs)
    }
}

impl Mul<&IntPoly> for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(coeffs)
    }
}

impl AddAssign<&IntPoly> for IntPoly {
    fn add_assign(&mut self, rhs: &IntPoly) {
        *self = &*self + rhs;
    }
}

/// Ascending-power text form: `c0 + c1*p + c2*p^2 + ...` with zero terms
/// omitted, unit coefficients elided and `0` for the zero polynomial.
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit = mag.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "p")?,
                (1, false) => write!(f, "{mag}*p")?,
                (_, true) => write!(f, "p^{k}")?,
                (_, false) => write!(f, "{mag}*p^{k}")?,
            }
        }
        Ok(())
    }
}

/// Parses the canonical text form back into a polynomial.
impl FromStr for IntPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<IntPoly> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::InvalidArgument("empty polynomial".into()));
        }
        if s == "0" {
            return Ok(IntPoly::zero());
        }
        let bad = |what: &str| Error::InvalidArgument(format!("bad polynomial term: {what}"));
        let mut coeffs: Vec<BigInt> = Vec::new();
        // Normalize "a - b" into "+"-separated signed terms.
        let s = s.replace(" - ", " + -");
        for term in s.split(" + ") {
            let term = term.trim();
            let (neg, term) = match term.strip_prefix('-') {
                Some(rest) => (true, rest.trim()),
                None => (false, term),
            };
            let (coeff_str, pow): (&str, usize) = if let Some(idx) = term.find('p') {
                let c = term[..idx].trim().trim_end_matches('*').trim();
                let rest = &term[idx + 1..];
                let pow = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')
                        .ok_or_else(|| bad(term))?
                        .parse::<usize>()
                        .map_err(|_| bad(term))?
                };
                (if c.is_empty() { "1" } else { c }, pow)
            } else {
                (term, 0)
            };
            let mut c: BigInt = coeff_str.parse().map_err(|_| bad(term))?;
            if neg {
                c = -c;
            }
            if coeffs.len() <= pow {
                coeffs.resize(pow + 1, BigInt::zero());
            }
            coeffs[pow] += c;
        }
        Ok(IntPoly::from_coeffs(coeffs))
    }
}
