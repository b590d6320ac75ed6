//! The headline experiment: put all 256 assignments of a 4-color, 4-vertex,
//! 3-edge star into superposition, label them, and read the exact state.
//! All 256 basis states survive with probability 1/256; 108 carry label 1
//! (the proper colorings: 4 choices for the center, 3 for each leaf) and
//! 148 carry label 0.
//!
//! ```bash
//! cargo run -p qfl --example label_experiment
//! ```

use qfl::compiler::compile_qfl;
use qfl::graph::{Assignment, ColoringInstance};
use qfl::sim;

fn main() {
    let inst = ColoringInstance::new(4, 4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
    let (circuit, layout) = compile_qfl(&inst, true, true).unwrap();
    println!("compiled to {} qubits, {} gates", circuit.width(), circuit.len());

    let state = sim::run(&circuit, None).unwrap();
    let nonzero = state.nonzero_states();
    println!("nonzero basis states: {}", nonzero.len());

    let label = layout.final_label().unwrap();
    let mut feasible = Vec::new();
    let mut infeasible = 0usize;
    for &index in &nonzero {
        if index >> label & 1 == 1 {
            feasible.push(index & layout.data_mask());
        } else {
            infeasible += 1;
        }
    }
    println!("label 1 (feasible): {}", feasible.len());
    println!("label 0 (infeasible): {infeasible}");
    println!(
        "every amplitude magnitude: {:.6} (1/16 = {:.6})",
        state.amplitude(nonzero[0]).norm(),
        1.0 / 16.0
    );

    println!("\nfirst feasible colorings (vertex 0 is the star center):");
    for &bits in feasible.iter().take(6) {
        let assignment = Assignment::from_bits(bits, inst.vertex_count(), inst.bits_per_vertex());
        println!("  {:?}", assignment.colors);
        assert!(inst.is_feasible(&assignment));
    }
    println!("  ...");
}
