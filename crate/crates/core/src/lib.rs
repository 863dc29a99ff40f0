//! Exact solvers for balanced transportation problems.
//!
//! Everything is computed over arbitrary-precision rationals. The crate
//! provides:
//!
//! * the problem model ([`TransportInstance`], [`TransportPlan`],
//!   [`DualCertificate`]) with feasibility and optimality checks,
//! * the North West corner rule together with Monge checks and builders for
//!   cost families on which the rule is optimal ([`nwcorner`]),
//! * a weighted Hungarian method that works directly on the `m × n` cost
//!   matrix, with line covers computed as minimum cuts ([`hungarian`]),
//! * brute-force enumeration oracles for tiny instances ([`oracle`]).
//!
//! ```
//! use transport_core::{hungarian, Matrix, TransportInstance, int};
//!
//! let cost = Matrix::from_i64(3, 4, &[10, 7, 3, 6, 1, 6, 8, 3, 7, 4, 5, 3]);
//! let inst = TransportInstance::new(
//!     cost,
//!     [3, 5, 7].map(int).to_vec(),
//!     [3, 2, 6, 4].map(int).to_vec(),
//! )
//! .unwrap();
//! let sol = hungarian::solve_weighted_hungarian(&inst).unwrap();
//! assert_eq!(inst.plan_cost(&sol.plan).unwrap(), int(47));
//! ```

#![allow(clippy::result_large_err)]

mod error;
mod matrix;
mod problem;

pub mod hungarian;
pub mod nwcorner;
pub mod oracle;
pub mod sampling;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use problem::{
    Cell, CertificateViolation, DualCertificate, FeasibilityReport, Line, OptimalityReport,
    TransportInstance, TransportPlan, Violation,
};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Exact rational scalar used throughout the crate.
pub type Rational = BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Shorthand for `num / den`.
///
/// Panics if `den` is zero.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Returns the value as a `u64` when it is a nonnegative integer that fits.
pub fn to_u64(v: &Rational) -> Option<u64> {
    use num_traits::ToPrimitive;
    if v.is_integer() {
        v.to_integer().to_u64()
    } else {
        None
    }
}
