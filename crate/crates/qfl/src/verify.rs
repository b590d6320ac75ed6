//! Independent checks of the compiled circuits against classical ground
//! truth: compare-module truth tables, exhaustive label/oracle equivalence,
//! the ancilla reset invariant, and the closed-form resource predictions.
//!
//! Every exhaustive sweep runs basis states through the classical
//! permutation semantics of the circuit ([`crate::sim::run_basis`]), which
//! is exact for the X/MCX gate set; the dense engine is cross-checked
//! against that path in the simulator's own tests.

use crate::compiler::{self, QubitLayout};
use crate::error::{Error, Result};
use crate::graph::{Assignment, ColoringInstance, ENUMERATION_CAP_BITS};
use crate::ir::{Circuit, StageKind};
use crate::sim::{basis_image, bitstring, run_basis};

const MAX_RECORDED_FAILURES: usize = 20;

/// One row of a compare-module truth table: inputs `a` and `b`, the ancilla
/// bits left behind after the OR stage (sign bit high), and the label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SoRow {
    pub a: u32,
    pub b: u32,
    pub ancilla: u32,
    pub label: bool,
}

/// Reference rows for the m=2 compare module, frozen from its defining
/// truth table. Keyed by (a, b); ancilla is the post-OR state with the low
/// two bits complemented relative to the raw difference.
pub const SO_M2_REFERENCE: [(u32, u32, u32, bool); 16] = [
    (0, 0, 0b011, false),
    (1, 1, 0b011, false),
    (2, 2, 0b011, false),
    (3, 3, 0b011, false),
    (3, 0, 0b000, true),
    (2, 0, 0b001, true),
    (3, 1, 0b001, true),
    (1, 0, 0b010, true),
    (2, 1, 0b010, true),
    (3, 2, 0b010, true),
    (0, 1, 0b100, true),
    (1, 2, 0b100, true),
    (2, 3, 0b100, true),
    (0, 2, 0b101, true),
    (1, 3, 0b101, true),
    (0, 3, 0b110, true),
];

/// Simulate the standalone compare module (subtraction plus OR) on every
/// pair of m-bit inputs. Rows come back in ascending (a, b) order.
pub fn so_truth_table(m: usize) -> Result<Vec<SoRow>> {
    if !(1..=4).contains(&m) {
        return Err(Error::UnsupportedSize(format!(
            "truth table supported for m in 1..=4, got {m}"
        )));
    }
    let a_reg: Vec<usize> = (0..m).collect();
    let b_reg: Vec<usize> = (m..2 * m).collect();
    let anc: Vec<usize> = (2 * m..3 * m + 1).collect();
    let label = 3 * m + 1;
    let mut circuit = Circuit::new(3 * m + 2);
    circuit.append_all(compiler::build_subtraction(&a_reg, &b_reg, &anc)?, None)?;
    circuit.append_all(compiler::build_or(&anc, label)?, None)?;

    let mut rows = Vec::with_capacity(1 << (2 * m));
    for a in 0..(1u32 << m) {
        for b in 0..(1u32 << m) {
            let input = a as u64 | ((b as u64) << m);
            let output = run_basis(&circuit, input)?;
            rows.push(SoRow {
                a,
                b,
                ancilla: ((output >> (2 * m)) & ((1 << (m + 1)) - 1)) as u32,
                label: output >> label & 1 == 1,
            });
        }
    }
    Ok(rows)
}

/// A single failing case: what went in, what was expected, what came out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseFailure {
    pub input: String,
    pub expected: String,
    pub got: String,
}

/// Predicted versus measured resources for one compile mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResourceComparison {
    pub use_reset: bool,
    pub predicted_qubits: usize,
    pub measured_qubits: usize,
    pub predicted_depth: usize,
    /// Serial sum of standalone stage depths of the actual circuit.
    pub stage_sum_depth: usize,
    pub asap_depth: usize,
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub name: String,
    pub passed: bool,
    pub failures: Vec<CaseFailure>,
    /// Failures beyond the recording cap.
    pub truncated_failures: usize,
    pub feasible: Option<usize>,
    pub infeasible: Option<usize>,
    pub resources: Vec<ResourceComparison>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    fn new(name: impl Into<String>) -> VerificationReport {
        VerificationReport {
            name: name.into(),
            passed: true,
            failures: Vec::new(),
            truncated_failures: 0,
            feasible: None,
            infeasible: None,
            resources: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn fail(&mut self, input: impl Into<String>, expected: impl Into<String>, got: impl Into<String>) {
        self.passed = false;
        if self.failures.len() < MAX_RECORDED_FAILURES {
            self.failures.push(CaseFailure {
                input: input.into(),
                expected: expected.into(),
                got: got.into(),
            });
        } else {
            self.truncated_failures += 1;
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("[{}] {}", if self.passed { "PASS" } else { "FAIL" }, self.name);
        if let (Some(f), Some(i)) = (self.feasible, self.infeasible) {
            out.push_str(&format!(": feasible {f}, infeasible {i}"));
        }
        out.push('\n');
        for note in &self.notes {
            out.push_str(&format!("    {note}\n"));
        }
        for r in &self.resources {
            out.push_str(&format!(
                "    {}: qubits {}/{} (measured/predicted), depth formula {}, stage sum {}, asap {}\n",
                if r.use_reset { "reset" } else { "no-reset" },
                r.measured_qubits,
                r.predicted_qubits,
                r.predicted_depth,
                r.stage_sum_depth,
                r.asap_depth,
            ));
        }
        for f in &self.failures {
            out.push_str(&format!(
                "    input={} expected={} got={}\n",
                f.input, f.expected, f.got
            ));
        }
        if self.truncated_failures > 0 {
            out.push_str(&format!("    ... and {} more failures\n", self.truncated_failures));
        }
        out
    }
}

pub fn all_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.passed)
}

pub fn reports_to_text(reports: &[VerificationReport]) -> String {
    reports.iter().map(|r| r.render_text()).collect()
}

/// Machine-readable summary, one row per check.
pub fn reports_to_csv(reports: &[VerificationReport]) -> String {
    let mut out = String::from("check,passed,feasible,infeasible,failures\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.name,
            r.passed,
            r.feasible.map_or(String::new(), |v| v.to_string()),
            r.infeasible.map_or(String::new(), |v| v.to_string()),
            r.failures.len() + r.truncated_failures,
        ));
    }
    out
}

/// Compare the simulated m=2 truth table against the frozen reference rows.
pub fn check_so_reference_table() -> Result<VerificationReport> {
    let mut report = VerificationReport::new("so truth table m=2 matches reference");
    let rows = so_truth_table(2)?;
    if rows.len() != 16 {
        report.fail("row count", "16", rows.len().to_string());
    }
    for &(a, b, ancilla, label) in &SO_M2_REFERENCE {
        match rows.iter().find(|r| r.a == a && r.b == b) {
            Some(row) if row.ancilla == ancilla && row.label == label => {}
            Some(row) => report.fail(
                format!("a={a} b={b}"),
                format!("ancilla {ancilla:03b} label {}", u8::from(label)),
                format!("ancilla {:03b} label {}", row.ancilla, u8::from(row.label)),
            ),
            None => report.fail(format!("a={a} b={b}"), "a row", "missing"),
        }
    }
    Ok(report)
}

/// The label must read 1 exactly when the two inputs differ, for every pair
/// at the given register size.
pub fn check_label_matches_inequality(m: usize) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(format!("so label equals inequality at m={m}"));
    for row in so_truth_table(m)? {
        if row.label != (row.a != row.b) {
            report.fail(
                format!("a={} b={}", row.a, row.b),
                format!("label {}", u8::from(row.a != row.b)),
                format!("label {}", u8::from(row.label)),
            );
        }
    }
    Ok(report)
}

/// Exhaustively compare the circuit's final label against the classical
/// feasibility predicate, checking too that data bits come back unchanged.
pub fn check_label_oracle(inst: &ColoringInstance, use_reset: bool) -> Result<VerificationReport> {
    let bits = inst.data_bits();
    if bits > ENUMERATION_CAP_BITS {
        return Err(Error::ResourceLimit(format!(
            "oracle check needs {bits} data bits, cap is {ENUMERATION_CAP_BITS}"
        )));
    }
    let mode = if use_reset { "reset" } else { "no-reset" };
    let mut report = VerificationReport::new(format!("label oracle ({mode})"));
    let (circuit, layout) = compiler::compile_qfl(inst, use_reset, false)?;
    let data_mask = layout.data_mask();
    let mut feasible = 0usize;
    let mut infeasible = 0usize;
    for pattern in 0..(1u64 << bits) {
        let output = run_basis(&circuit, pattern)?;
        if output & data_mask != pattern {
            report.fail(
                bitstring(pattern, bits),
                "data bits unchanged",
                bitstring(output & data_mask, bits),
            );
        }
        let expected =
            inst.is_feasible(&Assignment::from_bits(pattern, inst.vertex_count(), inst.bits_per_vertex()));
        if expected {
            feasible += 1;
        } else {
            infeasible += 1;
        }
        if let Some(q) = layout.final_label() {
            let got = output >> q & 1 == 1;
            if got != expected {
                report.fail(
                    bitstring(pattern, bits),
                    format!("label {}", u8::from(expected)),
                    format!("label {}", u8::from(got)),
                );
            }
        }
    }
    report.feasible = Some(feasible);
    report.infeasible = Some(infeasible);
    Ok(report)
}

fn sweep_ancilla(circuit: &Circuit, layout: &QubitLayout, report: &mut VerificationReport) {
    let bits = layout.bits_per_vertex() * layout.vertex_count();
    let anc_mask = layout.ancilla_mask();
    let stages = circuit.stages();
    for pattern in 0..(1u64 << bits) {
        let mut state = pattern;
        for (i, gate) in circuit.gates().iter().enumerate() {
            state = basis_image(gate, state).expect("compiled prep-off circuits are classical");
            let reset_boundary = stages[i].map(|s| s.kind) == Some(StageKind::Reset)
                && (i + 1 == stages.len() || stages[i + 1] != stages[i]);
            if reset_boundary && state & anc_mask != 0 {
                report.fail(
                    bitstring(pattern, bits),
                    format!("ancilla 0 after {}", stages[i].unwrap()),
                    bitstring((state & anc_mask) >> layout.data_qubits(), layout.bits_per_vertex() + 1),
                );
            }
        }
        if state & anc_mask != 0 {
            report.fail(bitstring(pattern, bits), "ancilla 0 at end", "nonzero");
        }
    }
}

/// In reset mode the shared ancilla block must be exactly |0..0> after every
/// edge module, for every data basis state.
pub fn check_ancilla_reset(inst: &ColoringInstance) -> Result<VerificationReport> {
    let bits = inst.data_bits();
    if bits > ENUMERATION_CAP_BITS {
        return Err(Error::ResourceLimit(format!(
            "ancilla check needs {bits} data bits, cap is {ENUMERATION_CAP_BITS}"
        )));
    }
    let mut report = VerificationReport::new("ancilla reset");
    let (circuit, layout) = compiler::compile_qfl(inst, true, false)?;
    if inst.edge_count() == 0 {
        report.notes.push("no edges, nothing to reset".into());
        return Ok(report);
    }
    sweep_ancilla(&circuit, &layout, &mut report);
    Ok(report)
}

/// Remove one reset gate and confirm the ancilla check notices. Proves the
/// checker can actually fail.
pub fn check_reset_mutation_detected(inst: &ColoringInstance) -> Result<VerificationReport> {
    if inst.edge_count() == 0 {
        return Err(Error::InvalidInstance(
            "mutation check needs at least one edge".into(),
        ));
    }
    let mut report = VerificationReport::new("reset mutation detected");
    let (circuit, layout) = compiler::compile_qfl(inst, true, false)?;
    let victim = circuit
        .stages()
        .iter()
        .rposition(|s| s.map(|st| st.kind) == Some(StageKind::Reset))
        .expect("reset-mode circuit with edges has reset gates");
    let mutated = circuit.with_gate_removed(victim);

    let mut inner = VerificationReport::new("ancilla reset (mutated)");
    sweep_ancilla(&mutated, &layout, &mut inner);
    if inner.passed {
        report.fail(
            format!("gate {victim} removed"),
            "ancilla check fails",
            "ancilla check still passes",
        );
    } else if let Some(first) = inner.failures.first() {
        report
            .notes
            .push(format!("detected: input={} ({})", first.input, first.expected));
    }
    Ok(report)
}

/// Compare compiled circuits against the closed-form qubit and depth
/// predictions, in both modes.
///
/// The per-edge depth terms are validated structurally: the subtractor
/// stage must consist of m serially-dependent 5-gate blocks (term 5m), the
/// OR stage must layer to 2^m + 1, each AND is a single gate, and the reset
/// stage must layer to 2^(2m) - 1. Their per-edge sum times the edge count
/// must reproduce the predicted total. Whole-circuit ASAP depth may only be
/// smaller: layering across stage boundaries (and across subtractor blocks)
/// merges layers.
pub fn check_resource_formulas(inst: &ColoringInstance) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("resource formulas");
    let m = inst.bits_per_vertex();
    let g = inst.edge_count();

    for use_reset in [true, false] {
        let mode = if use_reset { "reset" } else { "no-reset" };
        let estimate = compiler::estimate_resources(inst, use_reset);
        let (circuit, _layout) = compiler::compile_qfl(inst, use_reset, false)?;
        if circuit.width() != estimate.qubits {
            report.fail(
                format!("{mode} width"),
                estimate.qubits.to_string(),
                circuit.width().to_string(),
            );
        }

        let depth_report = circuit.depth_report();
        let mut counts = [0usize; 4]; // subtraction, or, and, reset runs
        let mut offset = 0;
        for stats in &depth_report.per_stage {
            let stage = stats.stage.expect("compiled gates are annotated");
            let context = format!("{mode} {stage}");
            match stage.kind {
                StageKind::Subtraction => {
                    counts[0] += 1;
                    if stats.gates != 5 * m {
                        report.fail(&context, format!("{} gates", 5 * m), stats.gates.to_string());
                    }
                    let run = &circuit.gates()[offset..offset + stats.gates];
                    for (b, block) in run.chunks(5).enumerate() {
                        let block_depth = crate::ir::layered_depth(block);
                        if block_depth != 5 {
                            report.fail(
                                format!("{context} block {b}"),
                                "depth 5",
                                format!("depth {block_depth}"),
                            );
                        }
                    }
                }
                StageKind::Or => {
                    counts[1] += 1;
                    let expected = (1 << m) + 1;
                    if stats.depth != expected {
                        report.fail(&context, format!("depth {expected}"), stats.depth.to_string());
                    }
                }
                StageKind::And => {
                    counts[2] += 1;
                    if stats.depth != 1 || stats.gates != 1 {
                        report.fail(&context, "one gate, depth 1", format!("{stats:?}"));
                    }
                }
                StageKind::Reset => {
                    counts[3] += 1;
                    let expected = (1 << (2 * m)) - 1;
                    if stats.depth != expected {
                        report.fail(&context, format!("depth {expected}"), stats.depth.to_string());
                    }
                }
                StageKind::Prep => {
                    report.fail(&context, "no prep stage when disabled", "prep present");
                }
            }
            offset += stats.gates;
        }

        let expected_runs = [g, g, g.saturating_sub(1), if use_reset { g } else { 0 }];
        if counts != expected_runs {
            report.fail(
                format!("{mode} stage runs (subtraction/or/and/reset)"),
                format!("{expected_runs:?}"),
                format!("{counts:?}"),
            );
        }

        // g-fold sum of the per-edge terms must reproduce the prediction
        let per_edge = estimate.per_edge;
        let folded = g * (5 * m + per_edge.or + per_edge.and + per_edge.reset.unwrap_or(0));
        if folded != estimate.formula_depth {
            report.fail(
                format!("{mode} per-edge sum x g"),
                estimate.formula_depth.to_string(),
                folded.to_string(),
            );
        }
        if depth_report.asap_depth > estimate.formula_depth {
            report.fail(
                format!("{mode} asap depth"),
                format!("<= {}", estimate.formula_depth),
                depth_report.asap_depth.to_string(),
            );
        }

        report.resources.push(ResourceComparison {
            use_reset,
            predicted_qubits: estimate.qubits,
            measured_qubits: circuit.width(),
            predicted_depth: estimate.formula_depth,
            stage_sum_depth: depth_report.formula_depth,
            asap_depth: depth_report.asap_depth,
        });
    }
    Ok(report)
}

/// A named instance of the fixed verification suite.
#[derive(Debug, Clone)]
pub struct SuiteInstance {
    pub name: String,
    pub instance: ColoringInstance,
}

impl SuiteInstance {
    /// Whether the per-basis sweeps are in range for this instance.
    pub fn exhaustive(&self) -> bool {
        self.instance.data_bits() <= 12
    }
}

/// The fixed suite: the 4-color star experiment, triangles, paths and stars
/// covering one- and two-bit registers, and a 7-vertex cycle (resource
/// checks only at k=4, where its data register is too wide for the
/// exhaustive sweeps).
pub fn suite_instances() -> Vec<SuiteInstance> {
    let mut out = Vec::new();
    let mut push = |name: String, n: usize, k: u32, edges: &[(usize, usize)]| {
        out.push(SuiteInstance {
            name,
            instance: ColoringInstance::new(n, k, edges).expect("suite instances are valid"),
        });
    };

    let star4: Vec<(usize, usize)> = vec![(0, 1), (0, 2), (0, 3)];
    let triangle: Vec<(usize, usize)> = vec![(0, 1), (1, 2), (0, 2)];
    let cycle7: Vec<(usize, usize)> = (0..7).map(|i| (i, (i + 1) % 7)).collect();

    for k in [2u32, 3, 4] {
        push(format!("star4_k{k}"), 4, k, &star4);
    }
    for k in [2u32, 3, 4] {
        push(format!("triangle_k{k}"), 3, k, &triangle);
    }
    for n in [2usize, 3, 4] {
        let path: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        for k in [2u32, 4] {
            push(format!("path{n}_k{k}"), n, k, &path);
        }
    }
    push("cycle7_k2".into(), 7, 2, &cycle7);
    push("cycle7_k4".into(), 7, 4, &cycle7);
    out
}

/// Every applicable check for one instance.
pub fn check_instance(name: &str, inst: &ColoringInstance) -> Result<Vec<VerificationReport>> {
    let mut reports = Vec::new();
    let with_name = |mut report: VerificationReport| {
        report.name = format!("{} {name}", report.name);
        report
    };
    reports.push(with_name(check_resource_formulas(inst)?));
    if inst.data_bits() <= 12 {
        reports.push(with_name(check_label_oracle(inst, true)?));
        reports.push(with_name(check_label_oracle(inst, false)?));
        if inst.edge_count() > 0 {
            reports.push(with_name(check_ancilla_reset(inst)?));
            reports.push(with_name(check_reset_mutation_detected(inst)?));
        }
    }
    Ok(reports)
}

/// Run the whole fixed suite.
pub fn run_suite() -> Result<Vec<VerificationReport>> {
    let mut reports = vec![check_so_reference_table()?];
    for m in 1..=4 {
        reports.push(check_label_matches_inequality(m)?);
    }
    for suite in suite_instances() {
        reports.extend(check_instance(&suite.name, &suite.instance)?);
    }
    Ok(reports)
}
