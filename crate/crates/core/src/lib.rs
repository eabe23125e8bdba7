//! A generic branch-and-prune constraint solver.
//!
//! The search is parametrised by a filtering function, a selecting
//! function, per-domain splitting functions and precision maps, and a cost
//! function with its ordering. With a constant cost under `=` it enumerates solutions
//! (or, with `epsilon > 0`, partial solutions covering them); with `<` or
//! `>` it keeps an improving sequence of incumbents whose last element is
//! the first optimum found.
//!
//! ```
//! use genbranch::{solve, CostSpec, CspInstance, ConstraintExpr, DomainDescriptor, Relation, SolverConfig};
//!
//! let vars = (1..=3)
//!     .map(|i| (format!("x{i}"), DomainDescriptor::IntInterval { lo: 0, hi: 1 }))
//!     .collect();
//! let sum = ConstraintExpr::linear(vec![(1.0, 0), (1.0, 1), (1.0, 2)], Relation::Le, 1.0);
//! let csp = CspInstance::new(vars, vec![sum]).unwrap();
//! let result = solve(&csp, &SolverConfig::default()).unwrap();
//! assert_eq!(result.stack.len(), 4);
//! ```

pub mod constraint;
pub mod cost;
pub mod domain;
pub mod engine;
pub mod error;
pub mod filter;
pub mod model;
pub mod oracle;
pub mod precision;
pub mod report;
pub mod select;
pub mod store;

pub use constraint::{BoolExpr, ConstraintExpr, CspInstance, Relation, SetRelation};
pub use cost::{CostExpr, CostOrdering, CostSpec, CostValue, Direction};
pub use domain::{Cardinality, DomainDescriptor, DomainKind, DomainValue, Lattice, RealLattice};
pub use engine::{branch, solve, solve_real, Schema, SolveResult, SolveStatus, SolverConfig};
pub use filter::FilteringKind;
pub use model::{parse_model, print_model};
pub use precision::PrecisionValue;
pub use select::SelectorKind;
pub use store::{Stack, Store};
