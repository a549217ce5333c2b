//! Exact arithmetic: big integers and rationals, dense integer polynomials,
//! truncated rational power series, and finite fields.

mod field;
mod poly;
mod prime;
mod series;

pub use field::{ff_arith, make_extension_field, FFElement, FieldDesc, FieldOp, FieldTables};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use poly::{poly_eval_int, IntPolynomial};
pub use prime::{is_prime, prime_power};
pub use series::{series_exp_of_counts, series_expand_factorization, RationalSeries, ZetaFactorization};
