//! Exact secret-key capacity, omniscience rate and mutual-dependence bounds
//! for discrete multiterminal sources.
//!
//! A source is given as a GF(2)-linear source, a tabular pmf or a raw joint
//! entropy vector. From it an [`EntropyOracle`] serves joint entropies
//! `Ĥ(X_S)` and the conditional entropy function `h(B) = Ĥ(X_M) - Ĥ(X_{B^c})`.
//!
//! * [`capacity::r_co`] solves the omniscience LP exactly in rationals and
//!   returns `R_CO(A)`, `C_SK(A)`, the optimal rates, a dual certificate and
//!   a uniqueness verdict for the optimal vertex.
//! * [`dependence::mutual_dependence_bound`] enumerates admissible
//!   partitions and returns `I(A)` with every minimizer.
//! * [`tightness`] decides whether `C_SK(A) = I(A)` in two independent ways
//!   and builds the witnessing partition from the dual when `A = M`.
//!
//! ```
//! use omniscio::{capacity, dependence, source, EntropyOracle};
//!
//! let (src, active) = source::make_counterexample();
//! let oracle = EntropyOracle::from_linear(src);
//! let cap = capacity::r_co(&oracle, active).unwrap();
//! let bound = dependence::mutual_dependence_bound(&oracle, active).unwrap();
//! assert_eq!(cap.c_sk.to_string(), "3/4");
//! assert_eq!(bound.value.to_string(), "1");
//! ```

pub mod capacity;
pub mod cli;
pub mod dependence;
pub mod error;
pub mod lp;
pub mod oracle;
pub mod partition;
pub mod rational;
pub mod source;
pub mod subset;
pub mod tightness;

pub use capacity::{CapacityReport, ConstraintFamily, RateVector};
pub use dependence::DependenceBound;
pub use error::{Error, Result};
pub use lp::{ConstraintSystem, LpSolution, UniquenessCertificate, Verdict};
pub use oracle::EntropyOracle;
pub use partition::Partition;
pub use rational::Rational;
pub use source::{EntropyVector, LinearGF2Source, Source, TabularSource};
pub use subset::SubsetMask;
pub use tightness::TightnessVerdict;
