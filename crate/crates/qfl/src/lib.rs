//! Quantum feasibility labeling for the vertex coloring problem.
//!
//! A k-coloring instance compiles into a reversible circuit that tags every
//! possible color assignment (held in superposition on the data qubits)
//! with a single feasibility bit: for each edge, a quantum subtractor
//! compares the two endpoint color registers, an OR circuit folds the
//! difference into a per-edge label, and a chain of AND gates combines the
//! edge labels into one final qubit that reads 1 exactly on proper
//! colorings. The labeled state is the "unstructured database" a downstream
//! amplitude-amplifying search would consume; here it can be simulated
//! exactly, sampled, and cross-checked against classical brute force.
//!
//! Two compile modes trade width for depth: with the reset blocks every
//! edge reuses one shared (m+1)-qubit ancilla block (`m*n + m + 2g` qubits),
//! without them each edge gets its own (`m*n + (m+3)g - 1` qubits).
//!
//! ```
//! use qfl::graph::ColoringInstance;
//! use qfl::{compiler, search};
//!
//! // 4 colors, star graph: center vertex adjacent to three leaves
//! let inst = ColoringInstance::new(4, 4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
//! let (circuit, layout) = compiler::compile_qfl(&inst, true, true).unwrap();
//! assert_eq!(circuit.width(), 16);
//!
//! let solutions = search::extract_feasible_exact(&inst, true).unwrap();
//! assert_eq!(solutions.assignments.len(), 108);
//! assert_eq!(solutions.assignments.len(), inst.enumerate_feasible().unwrap().len());
//! # let _ = layout;
//! ```
//!
//! The `examples/` directory has one runnable program per capability:
//! compiling and inspecting circuits, truth tables, the labeling
//! experiment, shot sampling, resource estimates, solution extraction, and
//! the verification suite. A thin `qfl` binary exposes the same pipeline as
//! subcommands.

pub mod compiler;
pub mod error;
pub mod graph;
pub mod ir;
pub mod search;
pub mod sim;
pub mod verify;

pub use compiler::{compile_qfl, estimate_resources, QubitLayout, ResourceEstimate};
pub use error::{Error, Result};
pub use graph::{parse_dimacs, Assignment, ColoringInstance};
pub use ir::{Circuit, Gate, Polarity, Stage, StageKind};
pub use search::{extract_feasible_exact, extract_feasible_sampled, SolutionSet};
pub use sim::{run, run_basis, MeasurementRecord, Statevector};
pub use verify::{run_suite, VerificationReport};
