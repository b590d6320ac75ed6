//! Feasible-coloring extraction from the labeled state.
//!
//! A compiled circuit run on the uniform superposition leaves every
//! assignment paired with its feasibility label, which is the database a
//! downstream amplitude-amplifying search would consume. This module
//! provides the two naive consumers: exact readout of every labeled basis
//! state, and post-selection of sampled shots on the label bit.

use std::collections::BTreeSet;

use crate::compiler;
use crate::error::Result;
use crate::graph::{Assignment, ColoringInstance};
use crate::sim;

/// How a solution set was obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    Exact,
    Sampled {
        shots: usize,
        seed: u64,
        /// Fraction of shots whose final label read 1.
        retained_fraction: f64,
    },
}

/// Feasible assignments recovered from the circuit, ascending by bit
/// pattern. The exact method lists each feasible assignment exactly once.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSet {
    pub method: Method,
    pub assignments: Vec<Assignment>,
}

/// Run the prep-enabled circuit once and read off every nonzero basis state
/// whose final label is 1, projected onto the data register.
pub fn extract_feasible_exact(inst: &ColoringInstance, use_reset: bool) -> Result<SolutionSet> {
    let (circuit, layout) = compiler::compile_qfl(inst, use_reset, true)?;
    let state = sim::run(&circuit, None)?;
    let data_mask = layout.data_mask();
    let mut patterns = BTreeSet::new();
    for index in state.nonzero_states() {
        let labeled = match layout.final_label() {
            Some(q) => index >> q & 1 == 1,
            None => true,
        };
        if labeled {
            patterns.insert(index & data_mask);
        }
    }
    Ok(SolutionSet {
        method: Method::Exact,
        assignments: decode(inst, patterns),
    })
}

/// Sample the prep-enabled reset-mode circuit and keep the shots whose
/// final label is 1. Returns the distinct decoded assignments and the
/// retained-shot fraction.
pub fn extract_feasible_sampled(
    inst: &ColoringInstance,
    shots: usize,
    seed: u64,
) -> Result<SolutionSet> {
    let (circuit, layout) = compiler::compile_qfl(inst, true, true)?;
    let state = sim::run(&circuit, None)?;
    let counts = state.sample_counts(shots, seed);
    let data_mask = layout.data_mask();
    let mut patterns = BTreeSet::new();
    let mut retained = 0usize;
    for (&index, &count) in &counts {
        let labeled = match layout.final_label() {
            Some(q) => index >> q & 1 == 1,
            None => true,
        };
        if labeled {
            patterns.insert(index & data_mask);
            retained += count;
        }
    }
    Ok(SolutionSet {
        method: Method::Sampled {
            shots,
            seed,
            retained_fraction: retained as f64 / shots as f64,
        },
        assignments: decode(inst, patterns),
    })
}

fn decode(inst: &ColoringInstance, patterns: BTreeSet<u64>) -> Vec<Assignment> {
    patterns
        .into_iter()
        .map(|bits| Assignment::from_bits(bits, inst.vertex_count(), inst.bits_per_vertex()))
        .collect()
}

/// CSV export: a summary comment, a `vertex0,vertex1,...` header, then one
/// color row per assignment.
pub fn solutions_to_csv(inst: &ColoringInstance, solutions: &SolutionSet) -> String {
    let mut out = match &solutions.method {
        Method::Exact => format!("# method=exact solutions={}\n", solutions.assignments.len()),
        Method::Sampled {
            shots,
            seed,
            retained_fraction,
        } => format!(
            "# method=sampled shots={shots} seed={seed} retained_fraction={retained_fraction:.6} solutions={}\n",
            solutions.assignments.len()
        ),
    };
    let header: Vec<String> = (0..inst.vertex_count()).map(|v| format!("vertex{v}")).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for assignment in &solutions.assignments {
        let row: Vec<String> = assignment.colors.iter().map(|c| c.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
