//! Closed-form resource predictions versus compiled circuits for a family
//! of instances, in both modes. The reset mode trades depth for width: it
//! reuses one shared ancilla block at the cost of one reset stage per edge.
//!
//! ```bash
//! cargo run -p qfl --example resource_estimates
//! ```

use qfl::compiler::{compile_qfl, estimate_resources};
use qfl::graph::ColoringInstance;

fn main() {
    let star4: Vec<(usize, usize)> = vec![(0, 1), (0, 2), (0, 3)];
    let triangle: Vec<(usize, usize)> = vec![(0, 1), (1, 2), (0, 2)];
    let cycle7: Vec<(usize, usize)> = (0..7).map(|i| (i, (i + 1) % 7)).collect();
    let instances = [
        ("star4 k=4", ColoringInstance::new(4, 4, &star4).unwrap()),
        ("triangle k=2", ColoringInstance::new(3, 2, &triangle).unwrap()),
        ("triangle k=3", ColoringInstance::new(3, 3, &triangle).unwrap()),
        ("cycle7 k=2", ColoringInstance::new(7, 2, &cycle7).unwrap()),
        ("cycle7 k=4", ColoringInstance::new(7, 4, &cycle7).unwrap()),
        ("cycle7 k=8", ColoringInstance::new(7, 8, &cycle7).unwrap()),
    ];

    println!(
        "{:<14} {:<9} {:>7} {:>9} {:>10} {:>6} {:>6}",
        "instance", "mode", "qubits", "predicted", "stage-sum", "asap", "gates"
    );
    for (name, inst) in &instances {
        for use_reset in [true, false] {
            let estimate = estimate_resources(inst, use_reset);
            let (circuit, _) = compile_qfl(inst, use_reset, false).unwrap();
            let report = circuit.depth_report();
            assert_eq!(circuit.width(), estimate.qubits);
            println!(
                "{:<14} {:<9} {:>7} {:>9} {:>10} {:>6} {:>6}",
                name,
                if use_reset { "reset" } else { "no-reset" },
                estimate.qubits,
                estimate.formula_depth,
                report.formula_depth,
                report.asap_depth,
                circuit.len(),
            );
        }
    }
    println!("\npredicted = per-edge closed form (subtraction 5m + OR 2^m+1 + AND 1");
    println!("+ reset 2^(2m)-1) x edges; stage-sum runs the compiled stages serially,");
    println!("asap layers the whole circuit greedily.");
}
