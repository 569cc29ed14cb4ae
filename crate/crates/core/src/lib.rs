//! Seminorm, numerical-radius and Davis-Wielandt-radius computations for
//! matrices acting on a space with a positive semidefinite metric `A`.
//!
//! Every functional is evaluated by compressing `T` onto `range(A)`:
//! with `P` the orthogonal projection onto `range(A)`, the pair
//! `N = basis*·A^{1/2}TA^{†1/2}·basis` and `W = A^{1/2}TA^{†1/2}·basis`
//! carry all the information needed for `‖·‖_A`, `w_A`, `c_A` and `dw_A`.
//!
//! Start with [`metric::build_metric`], then see [`radii`], [`bounds`] and
//! [`exact`].

pub mod bounds;
pub mod cli;
pub mod error;
pub mod exact;
pub mod gen;
pub mod io;
pub mod linalg;
pub mod metric;
pub mod operator;
pub mod radii;
pub mod remark;
pub mod rng;
pub mod semiop;
pub mod suite;
pub mod sweep;

pub use error::{Error, Result};
pub use metric::{build_metric, compress, Compressed, Metric};
pub use operator::Operator;
pub use radii::{crawford, dw_radius, min_modulus, numerical_radius, op_seminorm, oracle_extremum, Method, Objective, RadiusEstimate};
