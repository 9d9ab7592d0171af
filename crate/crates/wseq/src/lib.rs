//! Log-domain toolkit for weight sequences, their associated weight
//! functions, Young conjugates, associated weight matrices and the mixed
//! growth indices that tie the two worlds together, with executable property
//! suites over a catalog of closed-form families.

pub mod assoc;
pub mod conditions;
pub mod config;
pub mod conjugate;
pub mod error;
pub mod families;
pub mod harness;
pub mod indices;
pub mod instantiate;
pub mod matrix;
pub mod numeric;
pub mod report;
pub mod sequence;
pub mod tail;
pub mod verdict;
pub mod weightfn;

pub use config::Config;
pub use error::{Error, Result};
pub use verdict::{ConditionVerdict, Verdict, Witness};
