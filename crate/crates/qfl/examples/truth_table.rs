//! Print the truth tables of the arithmetic building blocks: the 1-bit full
//! subtractor block and the full compare module (subtraction plus OR) at
//! m = 2, with the ancilla bits it leaves behind.
//!
//! ```bash
//! cargo run -p qfl --example truth_table
//! ```

use qfl::compiler::build_subt_block;
use qfl::sim::run_basis;
use qfl::verify::so_truth_table;
use qfl::Circuit;

fn main() {
    println!("1-bit full subtractor (wires: a, b, borrow-in -> difference, borrow-out)");
    println!("a b d_in | diff b_out");
    let mut circuit = Circuit::new(4);
    circuit
        .append_all(build_subt_block(0, 1, 2, 3).unwrap(), None)
        .unwrap();
    for d_in in 0..2u64 {
        for b in 0..2u64 {
            for a in 0..2u64 {
                let out = run_basis(&circuit, a | (b << 1) | (d_in << 2)).unwrap();
                println!(
                    "{a} {b} {d_in}    | {}    {}",
                    out >> 2 & 1,
                    out >> 3 & 1
                );
            }
        }
    }

    println!("\ncompare module at m = 2 (label = 1 iff a != b)");
    println!("a b | ancilla label");
    for row in so_truth_table(2).unwrap() {
        println!(
            "{} {} | {:03b}     {}",
            row.a,
            row.b,
            row.ancilla,
            u8::from(row.label)
        );
    }
    println!("\nnote: the OR stage complements the low difference bits, so equal");
    println!("inputs leave the ancilla at 011 rather than 000; the reset stage");
    println!("undoes exactly this pattern per input pair.");
}
