pub mod boson;
pub mod cartan;
pub mod correspondence;
pub mod currents;
pub mod error;
pub mod fock;
pub mod oracle;
pub mod exchange;
pub mod relation;
pub mod report;
pub mod scalar;
pub mod series;
pub mod symbolic;
pub mod var;

pub use error::{Error, Result};
pub use var::Var;
pub use boson::{AVariant, Sign};
pub use currents::{BuildOptions, EnReading};
pub use fock::{Momenta, OracleConfig};
pub use relation::RelationId;
pub use report::{run_suite, CheckRecord, RunConfig, Suite, Verdict};
pub use scalar::Q;
