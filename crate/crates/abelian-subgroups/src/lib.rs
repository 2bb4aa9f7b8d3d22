//! Exact counting, classification and explicit enumeration of the subgroups
//! of finite abelian groups Z_{n1} x ... x Z_{nk}.
//!
//! The crate is organized around six capabilities:
//!
//! - [`arith`]: the number-theoretic kernel (factorization, divisors, the
//!   Euler/Jordan/Dedekind totients, divisor sums, gcd-sum, Moebius, sieves).
//! - [`pgroup`]: symbolic counts for abelian p-groups as integer polynomials
//!   in p (Gaussian binomials, per-type/total/order counts, cyclic counts,
//!   automorphism counts, rank-4 formulas).
//! - [`counting`]: integer-valued counting functions over arbitrary moduli
//!   (cyclic counts for any rank, total/order/isomorphism-type counts for
//!   rank <= 4, subgroup-order power sums, sublattice counts, automorphism
//!   counts, and the general-rank total via primary decomposition).
//! - [`enumerate`]: explicit subgroup representations for rank 2 and rank 3,
//!   with classification (order, exponent, cyclicity, isomorphism type,
//!   quotient type) and element-set materialization.
//! - [`oracle`]: a brute-force subgroup-lattice enumerator used as ground
//!   truth in every equivalence test.
//! - [`asymptotics`]: exact partial-sum engines for the averaged counting
//!   functions, Euler-product constants with tail bounds, and least-squares
//!   recovery of log-polynomial main-term coefficients.
//!
//! The `subgroups` binary exposes the same functionality on the command
//! line; `examples/` holds one runnable walk-through per capability.

pub mod arith;
pub mod asymptotics;
pub mod cli;
pub mod counting;
pub mod enumerate;
pub mod error;
pub mod oracle;
pub mod pgroup;

pub use arith::Natural;
pub use error::{Error, Result};
