//! Measure the labeled star-instance state 20,000 times with a fixed seed
//! and summarize the histogram in the compact data+label view (final label
//! bit followed by the 8 data bits).
//!
//! ```bash
//! cargo run -p qfl --example shot_sampling
//! ```

use qfl::compiler::compile_qfl;
use qfl::graph::ColoringInstance;
use qfl::sim;

fn main() {
    let inst = ColoringInstance::new(4, 4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
    let (circuit, layout) = compile_qfl(&inst, true, true).unwrap();
    let state = sim::run(&circuit, None).unwrap();

    let shots = 20_000usize;
    let seed = 7u64;
    let counts = state.sample_counts(shots, seed);

    // project onto data bits + final label; the label becomes the leftmost
    // character of the rendered bitstring
    let mut keep: Vec<usize> = (0..layout.data_qubits()).collect();
    keep.push(layout.final_label().unwrap());
    let view = sim::project_counts(&counts, &keep);
    let records = sim::counts_to_records(&view, keep.len());

    println!("{shots} shots, seed {seed}");
    println!("distinct outcomes: {}", records.len());

    let retained: usize = records
        .iter()
        .filter(|r| r.bitstring.starts_with('1'))
        .map(|r| r.count)
        .sum();
    println!(
        "label-1 shots: {retained} ({:.4}, ideal {:.4})",
        retained as f64 / shots as f64,
        108.0 / 256.0
    );

    let min = records.iter().map(|r| r.count).min().unwrap();
    let max = records.iter().map(|r| r.count).max().unwrap();
    println!("per-outcome counts: min {min}, max {max}, ideal {:.1}", shots as f64 / 256.0);

    println!("\nfirst rows of the CSV export:");
    for line in sim::records_to_csv(&records).lines().take(8) {
        println!("  {line}");
    }
    println!("  ...");
}
