//! Stack-sorting machines whose stack must avoid a set of permutation
//! patterns, together with exhaustive tools for studying them: iteration
//! dynamics, preimage counts, sortable sets and reference sequences.
//!
//! ```
//! use stacksort_core::{MachineSpec, Permutation};
//!
//! let pi: Permutation = "265413".parse().unwrap();
//! let consecutive = MachineSpec::consecutive(&"231".parse().unwrap()).unwrap();
//! let classical = MachineSpec::classical(&"231".parse().unwrap()).unwrap();
//! assert_eq!(consecutive.run(&pi).to_string(), "653142");
//! assert_eq!(classical.run(&pi).to_string(), "651432");
//! ```

pub mod dynamics;
pub mod error;
pub mod golden;
pub mod machine;
pub mod pattern;
pub mod perm;
pub mod preimage;
pub mod scan;
pub mod sequences;
pub mod sortable;

pub use error::{Error, Result};
pub use machine::{MachineSpec, Op, TraceStep};
pub use pattern::{contains, Mode, PatternSpec};
pub use perm::{standardize, symmetric_group, AdWord, Direction, Permutation};
