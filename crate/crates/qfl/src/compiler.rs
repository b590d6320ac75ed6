//! Lowering of coloring instances to feasibility-labeling circuits.
//!
//! One edge constraint compiles to a compare module: an m-qubit ripple
//! subtractor writes the two's-complement difference of the two endpoint
//! color registers into an (m+1)-qubit ancilla block, and an OR circuit
//! folds the difference bits into a single label qubit, so the label reads 1
//! exactly when the two colors differ. In reset mode a third block of
//! multi-controlled gates returns the ancilla block to |0..0> so every edge
//! can reuse it; without reset each edge gets a fresh block. Labels are
//! folded into one final qubit by a chain of AND gates.

use crate::error::{Error, Result};
use crate::graph::ColoringInstance;
use crate::ir::{Circuit, Gate, Polarity, Stage, StageKind};

/// Qubit index map for a compiled circuit.
///
/// Data qubits come first (m per vertex, LSB first), then the ancilla
/// block(s), then one label qubit per edge, then the AND outputs. Widths:
/// `m*n + m + 2g` with reset, `m*n + (m+3)g - 1` without, and `m*n` when the
/// instance has no edges at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QubitLayout {
    bits_per_vertex: usize,
    vertex_count: usize,
    edge_count: usize,
    use_reset: bool,
}

impl QubitLayout {
    pub fn new(
        bits_per_vertex: usize,
        vertex_count: usize,
        edge_count: usize,
        use_reset: bool,
    ) -> QubitLayout {
        QubitLayout {
            bits_per_vertex,
            vertex_count,
            edge_count,
            use_reset,
        }
    }

    pub fn for_instance(inst: &ColoringInstance, use_reset: bool) -> QubitLayout {
        QubitLayout::new(
            inst.bits_per_vertex(),
            inst.vertex_count(),
            inst.edge_count(),
            use_reset,
        )
    }

    pub fn bits_per_vertex(&self) -> usize {
        self.bits_per_vertex
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn use_reset(&self) -> bool {
        self.use_reset
    }

    pub fn data_qubits(&self) -> usize {
        self.bits_per_vertex * self.vertex_count
    }

    pub fn width(&self) -> usize {
        let (m, n, g) = (self.bits_per_vertex, self.vertex_count, self.edge_count);
        if g == 0 {
            m * n
        } else if self.use_reset {
            m * n + m + 2 * g
        } else {
            m * n + (m + 3) * g - 1
        }
    }

    /// Indices of vertex `v`'s color register, LSB first.
    pub fn data(&self, v: usize) -> Vec<usize> {
        assert!(v < self.vertex_count, "vertex {v} out of range");
        let start = v * self.bits_per_vertex;
        (start..start + self.bits_per_vertex).collect()
    }

    /// The (m+1)-qubit ancilla block used by edge `j` (1-based). With reset
    /// every edge shares one block.
    pub fn ancilla_block(&self, j: usize) -> Vec<usize> {
        self.check_edge(j);
        let base = self.data_qubits();
        let start = if self.use_reset {
            base
        } else {
            base + (j - 1) * (self.bits_per_vertex + 1)
        };
        (start..start + self.bits_per_vertex + 1).collect()
    }

    fn labels_start(&self) -> usize {
        let blocks = if self.use_reset { 1 } else { self.edge_count };
        self.data_qubits() + blocks * (self.bits_per_vertex + 1)
    }

    /// Label qubit carrying edge `j`'s comparison result (1-based).
    pub fn label(&self, j: usize) -> usize {
        self.check_edge(j);
        self.labels_start() + (j - 1)
    }

    /// Output qubit of the AND gate that folds edge `j`'s label into the
    /// running conjunction, for `j` in `2..=g`.
    pub fn and_out(&self, j: usize) -> usize {
        assert!(
            j >= 2 && j <= self.edge_count,
            "and output {j} out of range 2..={}",
            self.edge_count
        );
        self.labels_start() + self.edge_count + (j - 2)
    }

    /// The qubit whose measurement gives the overall feasibility of the
    /// assignment held in the data register, when the instance has edges.
    pub fn final_label(&self) -> Option<usize> {
        match self.edge_count {
            0 => None,
            1 => Some(self.label(1)),
            g => Some(self.and_out(g)),
        }
    }

    /// Bit mask over the data qubits (they occupy the low `m*n` bits).
    pub fn data_mask(&self) -> u64 {
        (1u64 << self.data_qubits()) - 1
    }

    /// Bit mask over every ancilla qubit.
    pub fn ancilla_mask(&self) -> u64 {
        let mut mask = 0u64;
        let blocks = if self.use_reset { 1 } else { self.edge_count };
        for j in 1..=blocks.min(self.edge_count) {
            for q in self.ancilla_block(if self.use_reset { 1 } else { j }) {
                mask |= 1u64 << q;
            }
        }
        mask
    }

    /// Sidecar table mapping roles to qubit indices, one `role <name>
    /// <indices...>` line each.
    pub fn to_sidecar(&self) -> String {
        let mut out = String::new();
        let mut push = |name: String, indices: &[usize]| {
            out.push_str("role ");
            out.push_str(&name);
            for i in indices {
                out.push_str(&format!(" {i}"));
            }
            out.push('\n');
        };
        for v in 0..self.vertex_count {
            push(format!("data{v}"), &self.data(v));
        }
        if self.edge_count > 0 {
            if self.use_reset {
                push("ancilla".into(), &self.ancilla_block(1));
            } else {
                for j in 1..=self.edge_count {
                    push(format!("ancilla{j}"), &self.ancilla_block(j));
                }
            }
            for j in 1..=self.edge_count {
                push(format!("label{j}"), &[self.label(j)]);
            }
            for j in 2..=self.edge_count {
                push(format!("and{j}"), &[self.and_out(j)]);
            }
            push("final".into(), &[self.final_label().unwrap()]);
        }
        out
    }

    fn check_edge(&self, j: usize) {
        assert!(
            j >= 1 && j <= self.edge_count,
            "edge index {j} out of range 1..={}",
            self.edge_count
        );
    }
}

fn check_distinct(indices: &[usize], what: &str) -> Result<()> {
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::IrValidation(format!("{what} indices must be distinct")));
    }
    Ok(())
}

/// One-bit full subtractor on four wires: minuend bit, subtrahend bit,
/// borrow-in (which the difference bit overwrites), and a fresh |0> wire
/// that receives the borrow-out. Wires 1 and 2 are net-unchanged.
pub fn build_subt_block(
    minuend: usize,
    subtrahend: usize,
    borrow_in: usize,
    borrow_out: usize,
) -> Result<Vec<Gate>> {
    check_distinct(&[minuend, subtrahend, borrow_in, borrow_out], "subtractor block")?;
    Ok(vec![
        Gate::mcx(
            vec![(minuend, Polarity::Negative), (subtrahend, Polarity::Positive)],
            vec![borrow_out],
        ),
        Gate::cnot(minuend, subtrahend),
        Gate::mcx(
            vec![(subtrahend, Polarity::Negative), (borrow_in, Polarity::Positive)],
            vec![borrow_out],
        ),
        Gate::cnot(subtrahend, borrow_in),
        Gate::cnot(minuend, subtrahend),
    ])
}

/// m-qubit subtractor: writes `(a - b) mod 2^(m+1)` into `out_reg` (two's
/// complement, sign in the top bit), leaving both data registers unchanged.
/// `out_reg` must start in |0..0>. Block `i` uses `out_reg[i]` as borrow-in
/// and `out_reg[i+1]` as borrow-out.
pub fn build_subtraction(a_reg: &[usize], b_reg: &[usize], out_reg: &[usize]) -> Result<Vec<Gate>> {
    let m = a_reg.len();
    if m == 0 || b_reg.len() != m || out_reg.len() != m + 1 {
        return Err(Error::IrValidation(format!(
            "subtraction register sizes must be m/m/m+1, got {}/{}/{}",
            a_reg.len(),
            b_reg.len(),
            out_reg.len()
        )));
    }
    let all: Vec<usize> = a_reg.iter().chain(b_reg).chain(out_reg).copied().collect();
    check_distinct(&all, "subtraction")?;
    let mut gates = Vec::with_capacity(5 * m);
    for i in 0..m {
        gates.extend(build_subt_block(a_reg[i], b_reg[i], out_reg[i], out_reg[i + 1])?);
    }
    Ok(gates)
}

/// t-input OR onto a fresh |0> output qubit.
///
/// Emits one positively-controlled X per nonempty subset of the first t-1
/// inputs, then an X on each of those inputs, then one X controlled on all t
/// inputs. After the gates the output holds the OR of the original input
/// values; the first t-1 inputs are left complemented and the last is
/// untouched. Gate count `2^(t-1) + t - 1`, standalone depth `2^(t-1) + 1`.
pub fn build_or(inputs: &[usize], output: usize) -> Result<Vec<Gate>> {
    let t = inputs.len();
    if t < 2 {
        return Err(Error::UnsupportedSize(format!(
            "or circuit needs at least 2 inputs, got {t}"
        )));
    }
    let all: Vec<usize> = inputs.iter().copied().chain([output]).collect();
    check_distinct(&all, "or")?;
    let heads = &inputs[..t - 1];
    let mut gates = Vec::new();
    for size in 1..t {
        for mask in 0u32..(1 << heads.len()) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let controls = heads
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask & (1 << i) != 0)
                .map(|(_, &q)| (q, Polarity::Positive))
                .collect();
            gates.push(Gate::mcx(controls, vec![output]));
        }
    }
    for &q in heads {
        gates.push(Gate::x(q));
    }
    gates.push(Gate::mcx(
        inputs.iter().map(|&q| (q, Polarity::Positive)).collect(),
        vec![output],
    ));
    Ok(gates)
}

/// Reset block: returns the post-OR ancilla state to |0..0> for every data
/// basis state.
///
/// For each pair `(a, b)` of m-bit values the ancilla holds
/// `((a - b) mod 2^(m+1))` with its low m bits complemented; one gate per
/// pair, controlled on the exact data pattern, flips the set ancilla bits
/// back to zero. The single pair whose post-OR state is already zero
/// (`a = 2^m - 1, b = 0`) needs no gate, giving `2^(2m) - 1` gates. Control
/// patterns are mutually exclusive, so for any basis state at most one gate
/// fires.
pub fn build_reset(a_reg: &[usize], b_reg: &[usize], anc_reg: &[usize]) -> Result<Vec<Gate>> {
    let m = a_reg.len();
    if m == 0 || b_reg.len() != m || anc_reg.len() != m + 1 {
        return Err(Error::IrValidation(format!(
            "reset register sizes must be m/m/m+1, got {}/{}/{}",
            a_reg.len(),
            b_reg.len(),
            anc_reg.len()
        )));
    }
    let all: Vec<usize> = a_reg.iter().chain(b_reg).chain(anc_reg).copied().collect();
    check_distinct(&all, "reset")?;

    let modulus = 1u32 << (m + 1);
    let low_mask = (1u32 << m) - 1;
    let mut gates = Vec::new();
    for a in 0..(1u32 << m) {
        for b in 0..(1u32 << m) {
            let diff = (a.wrapping_sub(b)) & (modulus - 1);
            let post_or = diff ^ low_mask;
            if post_or == 0 {
                continue;
            }
            let polarity_of = |value: u32, bit: usize| {
                if value & (1 << bit) != 0 {
                    Polarity::Positive
                } else {
                    Polarity::Negative
                }
            };
            let mut controls = Vec::with_capacity(2 * m);
            controls.extend(a_reg.iter().enumerate().map(|(i, &q)| (q, polarity_of(a, i))));
            controls.extend(b_reg.iter().enumerate().map(|(i, &q)| (q, polarity_of(b, i))));
            let targets = (0..=m).filter(|&i| post_or & (1 << i) != 0).map(|i| anc_reg[i]);
            gates.push(Gate::mcx(controls, targets.collect()));
        }
    }
    Ok(gates)
}

/// Single Toffoli: `out = in1 & in2` for a fresh |0> output.
pub fn build_and(in1: usize, in2: usize, out: usize) -> Result<Vec<Gate>> {
    check_distinct(&[in1, in2, out], "and")?;
    Ok(vec![Gate::mcx(
        vec![(in1, Polarity::Positive), (in2, Polarity::Positive)],
        vec![out],
    )])
}

/// Subtraction plus OR for edge `j` (1-based): compares the two endpoint
/// registers and writes the inequality bit to the edge's label qubit,
/// leaving the difference in the ancilla block.
pub fn build_so_module(
    layout: &QubitLayout,
    endpoints: (usize, usize),
    j: usize,
) -> Result<Vec<(Gate, Stage)>> {
    let a_reg = layout.data(endpoints.0);
    let b_reg = layout.data(endpoints.1);
    let anc = layout.ancilla_block(j);
    let mut gates: Vec<(Gate, Stage)> = build_subtraction(&a_reg, &b_reg, &anc)?
        .into_iter()
        .map(|g| (g, Stage::of(StageKind::Subtraction, j)))
        .collect();
    gates.extend(
        build_or(&anc, layout.label(j))?
            .into_iter()
            .map(|g| (g, Stage::of(StageKind::Or, j))),
    );
    Ok(gates)
}

/// SO module followed by the reset block. Requires a reset-mode layout.
pub fn build_sor_module(
    layout: &QubitLayout,
    endpoints: (usize, usize),
    j: usize,
) -> Result<Vec<(Gate, Stage)>> {
    if !layout.use_reset() {
        return Err(Error::ModeMismatch(
            "sor module requires a reset-mode layout".into(),
        ));
    }
    let mut gates = build_so_module(layout, endpoints, j)?;
    let a_reg = layout.data(endpoints.0);
    let b_reg = layout.data(endpoints.1);
    let anc = layout.ancilla_block(j);
    gates.extend(
        build_reset(&a_reg, &b_reg, &anc)?
            .into_iter()
            .map(|g| (g, Stage::of(StageKind::Reset, j))),
    );
    Ok(gates)
}

/// Compile the full labeling circuit.
///
/// With prep enabled every data qubit gets a Hadamard, putting all
/// assignments in uniform superposition. Edge modules run in edge order;
/// from the second edge on, an AND gate folds the new label into the running
/// conjunction, so the final label qubit carries the feasibility of the
/// whole assignment. Edges sharing a vertex reuse that vertex's data
/// register.
pub fn compile_qfl(
    inst: &ColoringInstance,
    use_reset: bool,
    include_prep: bool,
) -> Result<(Circuit, QubitLayout)> {
    let layout = QubitLayout::for_instance(inst, use_reset);
    let mut circuit = Circuit::new(layout.width());

    if include_prep {
        for q in 0..layout.data_qubits() {
            circuit.append(Gate::h(q), Some(Stage::prep()))?;
        }
    }

    for (idx, &edge) in inst.edges().iter().enumerate() {
        let j = idx + 1;
        let module = if use_reset {
            build_sor_module(&layout, edge, j)?
        } else {
            build_so_module(&layout, edge, j)?
        };
        for (gate, stage) in module {
            circuit.append(gate, Some(stage))?;
        }
        if j >= 2 {
            let first_input = if j == 2 {
                layout.label(1)
            } else {
                layout.and_out(j - 1)
            };
            for gate in build_and(first_input, layout.label(j), layout.and_out(j))? {
                circuit.append(gate, Some(Stage::of(StageKind::And, j)))?;
            }
        }
    }
    Ok((circuit, layout))
}

/// Closed-form depth contributions of one edge module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageDepths {
    pub subtraction: usize,
    pub or: usize,
    pub and: usize,
    pub reset: Option<usize>,
}

impl StageDepths {
    pub fn total(&self) -> usize {
        self.subtraction + self.or + self.and + self.reset.unwrap_or(0)
    }
}

/// Predicted circuit size from the closed forms.
///
/// Depth counts each edge module as subtraction (5m) + OR (2^m + 1) +
/// AND (1) + reset (2^(2m) - 1, reset mode only), times the edge count; the
/// subtractor term counts its m blocks serially at depth 5 each. The prep
/// layer is not included.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResourceEstimate {
    pub qubits: usize,
    pub formula_depth: usize,
    pub per_edge: StageDepths,
}

pub fn estimate_resources(inst: &ColoringInstance, use_reset: bool) -> ResourceEstimate {
    let m = inst.bits_per_vertex();
    let g = inst.edge_count();
    let per_edge = StageDepths {
        subtraction: 5 * m,
        or: (1 << m) + 1,
        and: 1,
        reset: use_reset.then(|| (1 << (2 * m)) - 1),
    };
    ResourceEstimate {
        qubits: QubitLayout::for_instance(inst, use_reset).width(),
        formula_depth: g * per_edge.total(),
        per_edge,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::layered_depth;
    use crate::sim::run_basis;

    fn star4() -> ColoringInstance {
        ColoringInstance::new(4, 4, &[(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    /// Independent oracle for the 1-bit full subtractor: `a - b - borrow_in`
    /// as (difference, borrow_out).
    fn full_subtract(a: u8, b: u8, borrow_in: u8) -> (u8, u8) {
        let raw = a as i8 - b as i8 - borrow_in as i8;
        if raw < 0 {
            ((raw + 2) as u8, 1)
        } else {
            (raw as u8, 0)
        }
    }

    #[test]
    fn subt_block_matches_full_subtractor_truth_table() {
        // wires: 0 = a, 1 = b, 2 = borrow-in/difference, 3 = borrow-out
        let gates = build_subt_block(0, 1, 2, 3).unwrap();
        assert_eq!(gates.len(), 5);
        let mut circuit = Circuit::new(4);
        circuit.append_all(gates, None).unwrap();
        for a in 0..2u64 {
            for b in 0..2u64 {
                for d_in in 0..2u64 {
                    let input = a | (b << 1) | (d_in << 2);
                    let output = run_basis(&circuit, input).unwrap();
                    let (diff, borrow) = full_subtract(a as u8, b as u8, d_in as u8);
                    assert_eq!(output & 1, a, "wire I must be restored");
                    assert_eq!((output >> 1) & 1, b, "wire II must be restored");
                    assert_eq!((output >> 2) & 1, diff as u64, "difference a={a} b={b} d={d_in}");
                    assert_eq!((output >> 3) & 1, borrow as u64, "borrow a={a} b={b} d={d_in}");
                }
            }
        }
        // spot checks
        assert_eq!(full_subtract(0, 1, 0), (1, 1));
        assert_eq!(full_subtract(1, 1, 1), (1, 1));
        assert_eq!(full_subtract(0, 0, 0), (0, 0));
    }

    #[test]
    fn subt_block_rejects_duplicate_wires() {
        assert!(matches!(
            build_subt_block(0, 1, 1, 3),
            Err(Error::IrValidation(_))
        ));
    }

    fn run_subtraction(m: usize, a: u64, b: u64) -> u64 {
        let a_reg: Vec<usize> = (0..m).collect();
        let b_reg: Vec<usize> = (m..2 * m).collect();
        let out_reg: Vec<usize> = (2 * m..3 * m + 1).collect();
        let gates = build_subtraction(&a_reg, &b_reg, &out_reg).unwrap();
        let mut circuit = Circuit::new(3 * m + 1);
        circuit.append_all(gates, None).unwrap();
        let output = run_basis(&circuit, a | (b << m)).unwrap();
        assert_eq!(output & ((1 << (2 * m)) - 1), a | (b << m), "data must be restored");
        (output >> (2 * m)) & ((1 << (m + 1)) - 1)
    }

    #[test]
    fn subtraction_is_twos_complement_exhaustively() {
        for m in 1..=3usize {
            let modulus = 1u64 << (m + 1);
            for a in 0..(1u64 << m) {
                for b in 0..(1u64 << m) {
                    let expected = (a.wrapping_sub(b)) & (modulus - 1);
                    assert_eq!(run_subtraction(m, a, b), expected, "m={m} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn subtraction_reference_rows() {
        // m = 2 rows, result read as out_reg high-to-low
        assert_eq!(run_subtraction(2, 3, 0), 0b011);
        assert_eq!(run_subtraction(2, 0, 1), 0b111);
        assert_eq!(run_subtraction(2, 0, 2), 0b110);
    }

    #[test]
    fn subtraction_followed_by_inverse_restores_input() {
        // every gate is self-inverse, so the reversed gate list is the inverse
        let a_reg = [0, 1];
        let b_reg = [2, 3];
        let out_reg = [4, 5, 6];
        let gates = build_subtraction(&a_reg, &b_reg, &out_reg).unwrap();
        let mut circuit = Circuit::new(7);
        circuit.append_all(gates.clone(), None).unwrap();
        circuit.append_all(gates.into_iter().rev(), None).unwrap();
        for a in 0..4u64 {
            for b in 0..4u64 {
                let input = a | (b << 2);
                assert_eq!(run_basis(&circuit, input).unwrap(), input);
            }
        }
    }

    #[test]
    fn subtraction_gate_count_and_blockwise_depth() {
        for m in 1..=4usize {
            let a_reg: Vec<usize> = (0..m).collect();
            let b_reg: Vec<usize> = (m..2 * m).collect();
            let out_reg: Vec<usize> = (2 * m..3 * m + 1).collect();
            let gates = build_subtraction(&a_reg, &b_reg, &out_reg).unwrap();
            assert_eq!(gates.len(), 5 * m);
            for block in gates.chunks(5) {
                assert_eq!(layered_depth(block), 5);
            }
        }
    }

    fn run_or(t: usize, input: u64) -> (u64, u64) {
        let inputs: Vec<usize> = (0..t).collect();
        let gates = build_or(&inputs, t).unwrap();
        let mut circuit = Circuit::new(t + 1);
        circuit.append_all(gates, None).unwrap();
        let out = run_basis(&circuit, input).unwrap();
        (out >> t, out & ((1 << t) - 1))
    }

    #[test]
    fn or_truth_and_side_effects() {
        for t in 2..=5usize {
            let flip_mask = (1u64 << (t - 1)) - 1;
            for input in 0..(1u64 << t) {
                let (or_bit, post_inputs) = run_or(t, input);
                let expected = u64::from(input != 0);
                assert_eq!(or_bit, expected, "t={t} input={input:b}");
                assert_eq!(post_inputs, input ^ flip_mask, "t={t} input={input:b}");
            }
        }
    }

    #[test]
    fn or_reference_rows() {
        // t = 3, inputs read high-to-low as (x2, x1, x0)
        assert_eq!(run_or(3, 0b000), (0, 0b011));
        assert_eq!(run_or(3, 0b011), (1, 0b000));
        assert_eq!(run_or(3, 0b111), (1, 0b100));
    }

    #[test]
    fn or_gate_count_and_depth() {
        for t in 2..=5usize {
            let inputs: Vec<usize> = (0..t).collect();
            let gates = build_or(&inputs, t).unwrap();
            assert_eq!(gates.len(), (1 << (t - 1)) + t - 1, "gate count at t={t}");
            assert_eq!(layered_depth(&gates), (1 << (t - 1)) + 1, "depth at t={t}");
        }
    }

    #[test]
    fn or_rejects_single_input() {
        assert!(matches!(build_or(&[0], 1), Err(Error::UnsupportedSize(_))));
    }

    #[test]
    fn reset_gate_counts() {
        let gates = build_reset(&[0, 1], &[2, 3], &[4, 5, 6]).unwrap();
        assert_eq!(gates.len(), 15);

        // m = 1: enumerate the 4 pairs by hand; only a=1,b=0 is already zero
        let gates = build_reset(&[0], &[1], &[2, 3]).unwrap();
        assert_eq!(gates.len(), 3);
    }

    #[test]
    fn reset_skips_the_all_zero_pair() {
        // a = 3, b = 0 leaves the ancilla at zero, so no gate may be
        // controlled on that data pattern.
        let gates = build_reset(&[0, 1], &[2, 3], &[4, 5, 6]).unwrap();
        for gate in &gates {
            if let Gate::Mcx { controls, .. } = gate {
                let fires_on_30 = controls.iter().all(|&(q, p)| match q {
                    0 | 1 => p == Polarity::Positive, // a = 3
                    2 | 3 => p == Polarity::Negative, // b = 0
                    _ => true,
                });
                assert!(!fires_on_30);
            }
        }
    }

    #[test]
    fn reset_controls_are_mutually_exclusive() {
        let gates = build_reset(&[0, 1], &[2, 3], &[4, 5, 6]).unwrap();
        for data in 0..16u64 {
            let firing = gates
                .iter()
                .filter(|gate| match gate {
                    Gate::Mcx { controls, .. } => controls.iter().all(|&(q, p)| {
                        let bit = data >> q & 1;
                        (bit == 1) == (p == Polarity::Positive)
                    }),
                    _ => false,
                })
                .count();
            assert!(firing <= 1, "data pattern {data:04b} fires {firing} gates");
        }
    }

    #[test]
    fn and_gate_truth() {
        let gates = build_and(0, 1, 2).unwrap();
        assert_eq!(gates.len(), 1);
        let mut circuit = Circuit::new(3);
        circuit.append_all(gates, None).unwrap();
        for input in 0..4u64 {
            let out = run_basis(&circuit, input).unwrap() >> 2;
            assert_eq!(out, u64::from(input == 0b11));
        }
    }

    #[test]
    fn so_module_labels_inequality() {
        let inst = ColoringInstance::new(2, 4, &[(0, 1)]).unwrap();
        let layout = QubitLayout::for_instance(&inst, false);
        let module = build_so_module(&layout, (0, 1), 1).unwrap();
        let mut circuit = Circuit::new(layout.width());
        for (gate, stage) in module {
            circuit.append(gate, Some(stage)).unwrap();
        }
        for a in 0..4u64 {
            for b in 0..4u64 {
                let out = run_basis(&circuit, a | (b << 2)).unwrap();
                let label = out >> layout.label(1) & 1;
                assert_eq!(label, u64::from(a != b), "a={a} b={b}");
            }
        }
    }

    #[test]
    fn sor_module_clears_the_ancilla() {
        let inst = ColoringInstance::new(2, 4, &[(0, 1)]).unwrap();
        let layout = QubitLayout::for_instance(&inst, true);
        let module = build_sor_module(&layout, (0, 1), 1).unwrap();
        let mut circuit = Circuit::new(layout.width());
        for (gate, stage) in module {
            circuit.append(gate, Some(stage)).unwrap();
        }
        for a in 0..4u64 {
            for b in 0..4u64 {
                let out = run_basis(&circuit, a | (b << 2)).unwrap();
                assert_eq!(out & layout.ancilla_mask(), 0, "a={a} b={b}");
                let label = out >> layout.label(1) & 1;
                assert_eq!(label, u64::from(a != b), "a={a} b={b}");
            }
        }
    }

    #[test]
    fn sor_requires_reset_layout() {
        let inst = ColoringInstance::new(2, 4, &[(0, 1)]).unwrap();
        let layout = QubitLayout::for_instance(&inst, false);
        assert!(matches!(
            build_sor_module(&layout, (0, 1), 1),
            Err(Error::ModeMismatch(_))
        ));
    }

    #[test]
    fn compiled_widths_match_the_closed_forms() {
        let (reset, layout_reset) = compile_qfl(&star4(), true, true).unwrap();
        assert_eq!(reset.width(), 16);
        assert_eq!(layout_reset.width(), 16);

        let (plain, layout_plain) = compile_qfl(&star4(), false, true).unwrap();
        assert_eq!(plain.width(), 22);
        assert_eq!(layout_plain.width(), 22);
    }

    #[test]
    fn no_reset_ancilla_holds_the_flipped_difference() {
        // without reset, each edge's block keeps the post-OR state: the
        // two's-complement difference with its low m bits complemented
        let inst = star4();
        let m = inst.bits_per_vertex();
        let (circuit, layout) = compile_qfl(&inst, false, false).unwrap();
        let low_mask = (1u64 << m) - 1;
        for pattern in 0..(1u64 << inst.data_bits()) {
            let out = run_basis(&circuit, pattern).unwrap();
            for (idx, &(u, v)) in inst.edges().iter().enumerate() {
                let color = |w: usize| (pattern >> (w * m)) & low_mask;
                let diff = color(u).wrapping_sub(color(v)) & ((1 << (m + 1)) - 1);
                let block = layout.ancilla_block(idx + 1);
                let held = (out >> block[0]) & ((1 << (m + 1)) - 1);
                assert_eq!(held, diff ^ low_mask, "edge {} input {pattern:08b}", idx + 1);
            }
        }
    }

    #[test]
    fn single_edge_has_no_and_gates() {
        let inst = ColoringInstance::new(2, 4, &[(0, 1)]).unwrap();
        let (circuit, layout) = compile_qfl(&inst, true, false).unwrap();
        assert_eq!(layout.final_label(), Some(layout.label(1)));
        assert!(circuit
            .stages()
            .iter()
            .flatten()
            .all(|s| s.kind != StageKind::And));
    }

    #[test]
    fn edgeless_instance_compiles_to_prep_only() {
        let inst = ColoringInstance::new(2, 4, &[]).unwrap();
        let (circuit, layout) = compile_qfl(&inst, true, true).unwrap();
        assert_eq!(layout.width(), 4);
        assert_eq!(circuit.len(), 4);
        assert_eq!(layout.final_label(), None);
    }

    #[test]
    fn estimates_match_reference_numbers() {
        let reset = estimate_resources(&star4(), true);
        assert_eq!(reset.qubits, 16);
        assert_eq!(reset.formula_depth, 93);
        assert_eq!(reset.per_edge.subtraction, 10);
        assert_eq!(reset.per_edge.or, 5);
        assert_eq!(reset.per_edge.reset, Some(15));

        let plain = estimate_resources(&star4(), false);
        assert_eq!(plain.qubits, 22);
        assert_eq!(plain.formula_depth, 48);

        let single = ColoringInstance::new(2, 2, &[(0, 1)]).unwrap();
        let est = estimate_resources(&single, true);
        assert_eq!(est.qubits, 5);
        assert_eq!(est.formula_depth, 12);

        let edgeless = ColoringInstance::new(3, 4, &[]).unwrap();
        assert_eq!(estimate_resources(&edgeless, true).formula_depth, 0);
        assert_eq!(estimate_resources(&edgeless, true).qubits, 6);
    }

    #[test]
    fn layout_roles_partition_the_width() {
        for use_reset in [true, false] {
            let layout = QubitLayout::for_instance(&star4(), use_reset);
            let mut seen = vec![false; layout.width()];
            let mut mark = |q: usize| {
                assert!(!seen[q], "qubit {q} assigned twice");
                seen[q] = true;
            };
            for v in 0..4 {
                layout.data(v).into_iter().for_each(&mut mark);
            }
            if use_reset {
                layout.ancilla_block(1).into_iter().for_each(&mut mark);
            } else {
                for j in 1..=3 {
                    layout.ancilla_block(j).into_iter().for_each(&mut mark);
                }
            }
            for j in 1..=3 {
                mark(layout.label(j));
            }
            for j in 2..=3 {
                mark(layout.and_out(j));
            }
            assert!(seen.iter().all(|&s| s), "every index must have a role");
        }
    }

    #[test]
    fn sidecar_lists_every_role() {
        let layout = QubitLayout::for_instance(&star4(), true);
        let sidecar = layout.to_sidecar();
        assert!(sidecar.contains("role data0 0 1\n"));
        assert!(sidecar.contains("role ancilla 8 9 10\n"));
        assert!(sidecar.contains("role label1 11\n"));
        assert!(sidecar.contains("role and3 15\n"));
        assert!(sidecar.contains("role final 15\n"));
    }
}
