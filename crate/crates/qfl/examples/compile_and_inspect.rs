//! Compile a small instance in both modes and inspect the result: widths,
//! gate counts per stage, depth metrics, and the first few serialized gates.
//!
//! ```bash
//! cargo run -p qfl --example compile_and_inspect
//! ```

use qfl::compiler::{compile_qfl, estimate_resources};
use qfl::graph::ColoringInstance;

fn main() {
    // 4 colors, star graph: vertex 0 adjacent to vertices 1, 2, 3
    let inst = ColoringInstance::new(4, 4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
    println!(
        "instance: {} vertices, {} colors, {} edges, {} qubits per vertex\n",
        inst.vertex_count(),
        inst.color_count(),
        inst.edge_count(),
        inst.bits_per_vertex()
    );

    for use_reset in [true, false] {
        let mode = if use_reset { "reset" } else { "no-reset" };
        let (circuit, layout) = compile_qfl(&inst, use_reset, true).unwrap();
        let estimate = estimate_resources(&inst, use_reset);
        let report = circuit.depth_report();

        println!("== {mode} mode ==");
        println!("qubits: {} (predicted {})", circuit.width(), estimate.qubits);
        println!("gates:  {}", circuit.len());
        for (kind, count) in report.kind_gate_counts() {
            println!("  {:<12} {count}", kind.map_or("unannotated", |k| k.name()));
        }
        println!("predicted depth: {}", estimate.formula_depth);
        println!("stage depth sum: {}", report.formula_depth);
        println!("asap depth:      {}", report.asap_depth);

        println!("first gates:");
        for line in circuit.to_text().lines().take(6) {
            println!("  {line}");
        }
        println!("layout:");
        for line in layout.to_sidecar().lines() {
            println!("  {line}");
        }
        println!();
    }
}
