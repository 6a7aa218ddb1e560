//! Brouwer fixed points of continuous self-maps of `[0,1]^n`, computed by
//! labeling grid subdivisions and locating fully-labeled strings.
//!
//! * [`grid`]: lattice points, k-strings, lift and pivot.
//! * [`labeling`]: the induced max-rule labeling and fully-labeled queries.
//! * [`search`]: exhaustive oracle, parity tallies, and the door-to-door walk.
//! * [`solver`]: the resolution-doubling loop and its report.
//! * [`functions`]: builtin maps and the expression language.
//! * [`cli`]: the `stringchase` command line.

pub mod cli;
pub mod functions;
pub mod grid;
pub mod labeling;
pub mod output;
pub mod render;
pub mod search;
pub mod solver;

pub use grid::{Face, GridError, GridPoint, GridSpec, StringK};
pub use labeling::{InducedLabeling, Labeling, MapFn, TableLabeling};
pub use search::{exhaustive_fully_labeled, parity_check, path_follow, ParityReport, PathTrace};
pub use solver::{solve, SolveConfig, SolveReport};
