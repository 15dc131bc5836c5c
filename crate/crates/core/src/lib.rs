//! Exact q-series machinery for generalized MacMahon partition functions.
//!
//! Everything is computed over arbitrary-precision rationals: truncated
//! power series in `q`, the normalized Lehmer polynomials `Λ_k`, the
//! Eisenstein-type series `G_{S,N,ε,k}` and eta products, point counts on
//! shifted lattices, and the sign expressions that detect primes.
//!
//! Module map:
//!
//! - [`qseries`]: truncated power series, the `D = q d/dq` operator, and
//!   series whose coefficients are polynomials.
//! - [`numtheory`]: divisor sums, primality, Möbius, Bernoulli numbers.
//! - [`lehmer`]: sparse multivariate polynomials and `Λ_k`.
//! - [`macmahon`]: `A_{S,N,ε,k}(q)` by direct product and by enumeration.
//! - [`eisenstein`]: Eisenstein series, eta products, basis decomposition.
//! - [`detector`]: prime-detecting expressions and Lelièvre's criteria.
//! - [`lattice`]: exact Fincke–Pohst point counting on shifted lattices.

pub mod detector;
pub mod eisenstein;
pub mod lattice;
pub mod lehmer;
pub mod macmahon;
pub mod numtheory;
pub mod qseries;

/// Exact rational scalar; always stored in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub use detector::{Backend, ExpressionId, Sign, SignOutcome};
pub use lehmer::{MultiPoly, Monomial};
pub use macmahon::{MacMahonParams, Variant};
pub use numtheory::{ResidueClassSet, SignEps};
pub use qseries::{PolySeries, QSeries, SeriesCheck};
