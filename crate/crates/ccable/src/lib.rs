//! Decides whether an n-sided patch with prescribed per-side edge counts
//! admits a quadrangulation with a single interior irregular vertex (or none
//! when n = 4), enumerates all such quadrangulations, and constructs the
//! resulting quad meshes.
//!
//! The decision is closed-form: parities, linear equalities and inequalities
//! on the edge counts, all in exact integer arithmetic. [`solver`] carries
//! the per-n closed forms for 2..=8 sides, [`general`] the propagation
//! solver for any n, and [`oracle`] an independent brute-force enumerator
//! used as ground truth in the test suites. [`mesh`] realizes a solution as
//! an indexed planar quad mesh, [`scan`] batch-verifies the solver claims
//! over bounded instance boxes, and [`io`] handles the serialization
//! formats (patch input documents, outcome reports, OBJ, SVG).
//!
//! ```
//! use ccable::{Mode, PatchSpec};
//!
//! let spec = PatchSpec::new(vec![6, 4, 3, 5, 4]).unwrap();
//! let outcome = ccable::solver::solve(&spec, Mode::Strict).unwrap();
//! let solutions = ccable::general::enumerate_solutions(&outcome, usize::MAX);
//! assert_eq!(solutions[0].values(), &[3, 2, 1, 1, 4]);
//!
//! let mesh = ccable::mesh::build_topology(&spec, &solutions[0]).unwrap();
//! let stats = ccable::mesh::mesh_stats(&mesh);
//! assert_eq!((stats.quad_count, stats.vertex_count), (25, 37));
//! ```

pub mod general;
pub mod io;
pub mod mesh;
pub mod oracle;
pub mod scan;
pub mod solver;
pub mod types;

pub use types::{
    Condition, ConditionStatus, ConditionStatusKind, FailureReason, Family, FreeParam,
    IndexParity, Mode, OutcomeKind, PatchSpec, SingularityClass, SolveError, SolveOutcome,
    SubdivisionVector,
};
