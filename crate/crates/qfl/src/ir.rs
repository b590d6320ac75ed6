//! Gate-level circuit representation.
//!
//! The gate set is deliberately small: Pauli X, Hadamard, and a
//! multi-controlled multi-target X whose controls carry a polarity. Negative
//! controls are first-class so that the reset and subtractor constructions
//! keep their stated gate counts; [`Circuit::expand_negative_controls`]
//! rewrites them as X-conjugated positive controls for consumers that need
//! that form.
//!
//! Circuits carry an optional stage annotation per gate (which pipeline
//! stage emitted it, and for which edge), used by depth reporting and the
//! resource checks.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Control polarity: positive fires on |1>, negative on |0>.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    X { target: usize },
    H { target: usize },
    Mcx {
        controls: Vec<(usize, Polarity)>,
        targets: Vec<usize>,
    },
}

impl Gate {
    pub fn x(target: usize) -> Gate {
        Gate::X { target }
    }

    pub fn h(target: usize) -> Gate {
        Gate::H { target }
    }

    pub fn mcx(controls: Vec<(usize, Polarity)>, targets: Vec<usize>) -> Gate {
        Gate::Mcx { controls, targets }
    }

    /// Single positive control, single target.
    pub fn cnot(control: usize, target: usize) -> Gate {
        Gate::Mcx {
            controls: vec![(control, Polarity::Positive)],
            targets: vec![target],
        }
    }

    /// Every qubit the gate touches.
    pub fn support(&self) -> Vec<usize> {
        match self {
            Gate::X { target } | Gate::H { target } => vec![*target],
            Gate::Mcx { controls, targets } => controls
                .iter()
                .map(|&(q, _)| q)
                .chain(targets.iter().copied())
                .collect(),
        }
    }

    pub fn validate(&self, width: usize) -> Result<()> {
        match self {
            Gate::X { target } | Gate::H { target } => {
                if *target >= width {
                    return Err(Error::IrValidation(format!(
                        "target {target} out of range for width {width}"
                    )));
                }
            }
            Gate::Mcx { controls, targets } => {
                if targets.is_empty() {
                    return Err(Error::IrValidation("mcx needs at least one target".into()));
                }
                let mut seen = vec![false; width];
                for &q in controls.iter().map(|(q, _)| q).chain(targets.iter()) {
                    if q >= width {
                        return Err(Error::IrValidation(format!(
                            "qubit {q} out of range for width {width}"
                        )));
                    }
                    if seen[q] {
                        return Err(Error::IrValidation(format!(
                            "qubit {q} used more than once in one gate"
                        )));
                    }
                    seen[q] = true;
                }
            }
        }
        Ok(())
    }
}

/// Pipeline stage that emitted a gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StageKind {
    Prep,
    Subtraction,
    Or,
    And,
    Reset,
}

impl StageKind {
    pub fn name(self) -> &'static str {
        match self {
            StageKind::Prep => "prep",
            StageKind::Subtraction => "subtraction",
            StageKind::Or => "or",
            StageKind::And => "and",
            StageKind::Reset => "reset",
        }
    }

    fn from_name(name: &str) -> Option<StageKind> {
        Some(match name {
            "prep" => StageKind::Prep,
            "subtraction" => StageKind::Subtraction,
            "or" => StageKind::Or,
            "and" => StageKind::And,
            "reset" => StageKind::Reset,
            _ => return None,
        })
    }
}

/// Stage annotation: kind plus the 1-based edge index it belongs to, when any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Stage {
    pub kind: StageKind,
    pub edge: Option<usize>,
}

impl Stage {
    pub fn prep() -> Stage {
        Stage {
            kind: StageKind::Prep,
            edge: None,
        }
    }

    pub fn of(kind: StageKind, edge: usize) -> Stage {
        Stage {
            kind,
            edge: Some(edge),
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.edge {
            Some(edge) => write!(f, "@{}:{}", self.kind.name(), edge),
            None => write!(f, "@{}", self.kind.name()),
        }
    }
}

/// Greedy as-soon-as-possible layering: a gate lands in the earliest layer
/// after every earlier gate that shares a qubit with it. Returns the layer
/// count; an empty list has depth 0.
pub fn layered_depth(gates: &[Gate]) -> usize {
    let mut level: BTreeMap<usize, usize> = BTreeMap::new();
    let mut depth = 0;
    for gate in gates {
        let layer = 1 + gate
            .support()
            .into_iter()
            .map(|q| level.get(&q).copied().unwrap_or(0))
            .max()
            .unwrap_or(0);
        for q in gate.support() {
            level.insert(q, layer);
        }
        depth = depth.max(layer);
    }
    depth
}

/// An ordered gate list over a fixed number of qubits, with per-gate stage
/// annotations. Gate order is the execution order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    stages: Vec<Option<Stage>>,
}

impl Circuit {
    pub fn new(width: usize) -> Circuit {
        Circuit {
            width,
            gates: Vec::new(),
            stages: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn stages(&self) -> &[Option<Stage>] {
        &self.stages
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Gate, Option<Stage>)> {
        self.gates.iter().zip(self.stages.iter().copied())
    }

    pub fn append(&mut self, gate: Gate, stage: Option<Stage>) -> Result<()> {
        gate.validate(self.width)?;
        self.gates.push(gate);
        self.stages.push(stage);
        Ok(())
    }

    pub fn append_all(
        &mut self,
        gates: impl IntoIterator<Item = Gate>,
        stage: Option<Stage>,
    ) -> Result<()> {
        for gate in gates {
            self.append(gate, stage)?;
        }
        Ok(())
    }

    /// Copy with one gate removed. Used by the mutation checks to prove the
    /// verifier can fail.
    pub fn with_gate_removed(&self, index: usize) -> Circuit {
        let mut out = Circuit::new(self.width);
        for (i, (gate, stage)) in self.iter().enumerate() {
            if i != index {
                out.append(gate.clone(), stage).expect("gate was already valid");
            }
        }
        out
    }

    /// Rewrite negative controls as X-conjugated positive controls. The
    /// wrapping X gates inherit the gate's stage annotation.
    pub fn expand_negative_controls(&self) -> Circuit {
        let mut out = Circuit::new(self.width);
        for (gate, stage) in self.iter() {
            match gate {
                Gate::Mcx { controls, targets }
                    if controls.iter().any(|&(_, p)| p == Polarity::Negative) =>
                {
                    let negated: Vec<usize> = controls
                        .iter()
                        .filter(|&&(_, p)| p == Polarity::Negative)
                        .map(|&(q, _)| q)
                        .collect();
                    for &q in &negated {
                        out.append(Gate::x(q), stage).unwrap();
                    }
                    let positive = controls
                        .iter()
                        .map(|&(q, _)| (q, Polarity::Positive))
                        .collect();
                    out.append(Gate::mcx(positive, targets.clone()), stage).unwrap();
                    for &q in &negated {
                        out.append(Gate::x(q), stage).unwrap();
                    }
                }
                _ => out.append(gate.clone(), stage).unwrap(),
            }
        }
        out
    }

    /// Depth metrics: standalone depth per contiguous stage run, their sum,
    /// and the whole-circuit ASAP depth.
    pub fn depth_report(&self) -> DepthReport {
        let mut per_stage = Vec::new();
        let mut i = 0;
        while i < self.gates.len() {
            let stage = self.stages[i];
            let start = i;
            while i < self.gates.len() && self.stages[i] == stage {
                i += 1;
            }
            per_stage.push(StageStats {
                stage,
                depth: layered_depth(&self.gates[start..i]),
                gates: i - start,
            });
        }
        let formula_depth = per_stage.iter().map(|s| s.depth).sum();
        DepthReport {
            per_stage,
            formula_depth,
            asap_depth: layered_depth(&self.gates),
        }
    }

    /// Canonical text form; see module docs for the grammar.
    pub fn to_text(&self) -> String {
        let mut out = format!("width {}\n", self.width);
        for (gate, stage) in self.iter() {
            match gate {
                Gate::X { target } => out.push_str(&format!("x {target}")),
                Gate::H { target } => out.push_str(&format!("h {target}")),
                Gate::Mcx { controls, targets } => {
                    out.push_str("mcx");
                    for &(q, polarity) in controls {
                        let sign = if polarity == Polarity::Positive { '+' } else { '-' };
                        out.push_str(&format!(" c{sign}{q}"));
                    }
                    for &t in targets {
                        out.push_str(&format!(" t{t}"));
                    }
                }
            }
            if let Some(stage) = stage {
                out.push_str(&format!(" {stage}"));
            }
            out.push('\n');
        }
        out
    }

    /// Parse the text form. `#` lines and blank lines are skipped; the first
    /// meaningful line must be the `width` header.
    pub fn from_text(text: &str) -> Result<Circuit> {
        let mut circuit: Option<Circuit> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (gate_part, stage) = match line.rsplit_once(" @") {
                Some((head, tail)) => (head, Some(parse_stage(tail, line_no)?)),
                None => (line, None),
            };
            let tokens: Vec<&str> = gate_part.split_whitespace().collect();
            match circuit {
                None => {
                    if tokens.len() != 2 || tokens[0] != "width" {
                        return Err(Error::Parse {
                            line: line_no,
                            message: "expected `width <q>` header".into(),
                        });
                    }
                    let width = parse_index(tokens[1], line_no)?;
                    circuit = Some(Circuit::new(width));
                }
                Some(ref mut c) => {
                    let gate = parse_gate(&tokens, line_no)?;
                    c.append(gate, stage).map_err(|e| Error::Parse {
                        line: line_no,
                        message: e.to_string(),
                    })?;
                }
            }
        }
        circuit.ok_or(Error::Parse {
            line: 1,
            message: "missing `width` header".into(),
        })
    }
}

/// Standalone metrics for one contiguous run of equally-annotated gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageStats {
    pub stage: Option<Stage>,
    pub depth: usize,
    pub gates: usize,
}

/// Depth breakdown of a circuit.
///
/// `formula_depth` is the serial sum of standalone stage depths (the module
/// depths run one after the other); the ASAP depth of the whole circuit can
/// only be smaller or equal, since layering across stage boundaries merges
/// layers but never splits them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthReport {
    pub per_stage: Vec<StageStats>,
    pub formula_depth: usize,
    pub asap_depth: usize,
}

impl DepthReport {
    /// Gate totals aggregated by stage kind.
    pub fn kind_gate_counts(&self) -> BTreeMap<Option<StageKind>, usize> {
        let mut counts = BTreeMap::new();
        for stats in &self.per_stage {
            *counts.entry(stats.stage.map(|s| s.kind)).or_insert(0) += stats.gates;
        }
        counts
    }

    /// Stage runs of one kind, in execution order.
    pub fn runs_of(&self, kind: StageKind) -> impl Iterator<Item = &StageStats> {
        self.per_stage
            .iter()
            .filter(move |s| s.stage.map(|st| st.kind) == Some(kind))
    }
}

fn parse_index(token: &str, line: usize) -> Result<usize> {
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("malformed number `{token}`"),
    })
}

fn parse_stage(text: &str, line: usize) -> Result<Stage> {
    let (kind_name, edge) = match text.split_once(':') {
        Some((kind, edge)) => (kind, Some(parse_index(edge, line)?)),
        None => (text, None),
    };
    let kind = StageKind::from_name(kind_name).ok_or(Error::Parse {
        line,
        message: format!("unknown stage `{kind_name}`"),
    })?;
    Ok(Stage { kind, edge })
}

fn parse_gate(tokens: &[&str], line: usize) -> Result<Gate> {
    match tokens.first().copied() {
        Some("x") | Some("h") if tokens.len() == 2 => {
            let target = parse_index(tokens[1], line)?;
            Ok(if tokens[0] == "x" {
                Gate::x(target)
            } else {
                Gate::h(target)
            })
        }
        Some("mcx") => {
            let mut controls = Vec::new();
            let mut targets = Vec::new();
            for token in &tokens[1..] {
                if let Some(rest) = token.strip_prefix("c+") {
                    controls.push((parse_index(rest, line)?, Polarity::Positive));
                } else if let Some(rest) = token.strip_prefix("c-") {
                    controls.push((parse_index(rest, line)?, Polarity::Negative));
                } else if let Some(rest) = token.strip_prefix('t') {
                    targets.push(parse_index(rest, line)?);
                } else {
                    return Err(Error::Parse {
                        line,
                        message: format!("malformed mcx token `{token}`"),
                    });
                }
            }
            Ok(Gate::mcx(controls, targets))
        }
        _ => Err(Error::Parse {
            line,
            message: format!("unrecognized gate line `{}`", tokens.join(" ")),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn append_validates_gates() {
        let mut c = Circuit::new(2);
        c.append(Gate::x(0), None).unwrap();
        assert_eq!(c.len(), 1);

        // control/target overlap
        let overlap = Gate::mcx(
            vec![(0, Polarity::Positive), (1, Polarity::Positive)],
            vec![1],
        );
        assert!(matches!(
            Circuit::new(4).append(overlap, None),
            Err(Error::IrValidation(_))
        ));

        // out of range
        let far = Gate::mcx(vec![(0, Polarity::Positive)], vec![5]);
        assert!(matches!(
            Circuit::new(4).append(far, None),
            Err(Error::IrValidation(_))
        ));

        assert!(matches!(
            Circuit::new(4).append(Gate::mcx(vec![], vec![]), None),
            Err(Error::IrValidation(_))
        ));
    }

    #[test]
    fn layered_depth_examples() {
        assert_eq!(layered_depth(&[]), 0);
        assert_eq!(layered_depth(&[Gate::x(0), Gate::x(1)]), 1);
        assert_eq!(layered_depth(&[Gate::cnot(0, 2), Gate::cnot(1, 2)]), 2);
    }

    #[test]
    fn serialization_format() {
        let mut c = Circuit::new(8);
        c.append(Gate::h(0), Some(Stage::prep())).unwrap();
        c.append(Gate::x(3), None).unwrap();
        c.append(
            Gate::mcx(
                vec![(4, Polarity::Positive), (5, Polarity::Negative)],
                vec![7],
            ),
            Some(Stage::of(StageKind::Or, 2)),
        )
        .unwrap();
        assert_eq!(c.to_text(), "width 8\nh 0 @prep\nx 3\nmcx c+4 c-5 t7 @or:2\n");
    }

    #[test]
    fn parse_errors_name_the_line() {
        match Circuit::from_text("width 4\nmcx c+0 q3\n").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other}"),
        }
        match Circuit::from_text("x 0\n").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected error {other}"),
        }
        assert!(Circuit::from_text("# only comments\n").is_err());
    }

    #[test]
    fn negative_control_expansion_is_equivalent() {
        let mut c = Circuit::new(3);
        c.append(
            Gate::mcx(
                vec![(0, Polarity::Negative), (1, Polarity::Positive)],
                vec![2],
            ),
            None,
        )
        .unwrap();
        let expanded = c.expand_negative_controls();
        assert_eq!(expanded.len(), 3);
        for input in 0..8u64 {
            assert_eq!(
                crate::sim::run_basis(&c, input).unwrap(),
                crate::sim::run_basis(&expanded, input).unwrap()
            );
        }
    }

    #[test]
    fn depth_report_groups_contiguous_runs() {
        let mut c = Circuit::new(3);
        c.append(Gate::h(0), Some(Stage::prep())).unwrap();
        c.append(Gate::h(1), Some(Stage::prep())).unwrap();
        c.append(Gate::cnot(0, 2), Some(Stage::of(StageKind::And, 2)))
            .unwrap();
        let report = c.depth_report();
        assert_eq!(report.per_stage.len(), 2);
        assert_eq!(report.per_stage[0].depth, 1);
        assert_eq!(report.per_stage[0].gates, 2);
        assert_eq!(report.formula_depth, 2);
        assert!(report.asap_depth <= report.formula_depth);
    }

    fn arb_gate(width: usize) -> impl Strategy<Value = Gate> {
        let single = (0..width).prop_flat_map(|t| {
            prop_oneof![Just(Gate::x(t)), Just(Gate::h(t))]
        });
        let qubits: Vec<usize> = (0..width).collect();
        let mcx = proptest::sample::subsequence(qubits, 1..=width)
            .prop_flat_map(|chosen| {
                let len = chosen.len();
                (
                    Just(chosen),
                    0..len,
                    proptest::collection::vec(any::<bool>(), len),
                )
            })
            .prop_map(|(chosen, split, flags)| {
                let controls = chosen[..split]
                    .iter()
                    .zip(&flags)
                    .map(|(&q, &pos)| {
                        (q, if pos { Polarity::Positive } else { Polarity::Negative })
                    })
                    .collect();
                let targets = chosen[split..].to_vec();
                Gate::mcx(controls, targets)
            });
        prop_oneof![single, mcx]
    }

    fn arb_stage() -> impl Strategy<Value = Option<Stage>> {
        proptest::option::of((0..5usize, proptest::option::of(1..9usize)).prop_map(
            |(kind, edge)| {
                let kind = [
                    StageKind::Prep,
                    StageKind::Subtraction,
                    StageKind::Or,
                    StageKind::And,
                    StageKind::Reset,
                ][kind];
                Stage { kind, edge }
            },
        ))
    }

    fn arb_circuit() -> impl Strategy<Value = Circuit> {
        (1..8usize).prop_flat_map(|width| {
            proptest::collection::vec((arb_gate(width), arb_stage()), 0..40).prop_map(
                move |gates| {
                    let mut c = Circuit::new(width);
                    for (gate, stage) in gates {
                        c.append(gate, stage).unwrap();
                    }
                    c
                },
            )
        })
    }

    proptest! {
        #[test]
        fn text_round_trip_is_identity(c in arb_circuit()) {
            let parsed = Circuit::from_text(&c.to_text()).unwrap();
            prop_assert_eq!(&parsed, &c);
            // canonical text re-serializes byte-identically
            prop_assert_eq!(parsed.to_text(), c.to_text());
        }

        #[test]
        fn depth_invariant_under_qubit_relabeling(c in arb_circuit(), seed in any::<u64>()) {
            let mut perm: Vec<usize> = (0..c.width()).collect();
            // Fisher-Yates from a simple splitmix step
            let mut state = seed;
            for i in (1..perm.len()).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (state >> 33) as usize % (i + 1));
            }
            let relabeled: Vec<Gate> = c.gates().iter().map(|g| match g {
                Gate::X { target } => Gate::x(perm[*target]),
                Gate::H { target } => Gate::h(perm[*target]),
                Gate::Mcx { controls, targets } => Gate::mcx(
                    controls.iter().map(|&(q, p)| (perm[q], p)).collect(),
                    targets.iter().map(|&t| perm[t]).collect(),
                ),
            }).collect();
            prop_assert_eq!(layered_depth(&relabeled), layered_depth(c.gates()));
        }

        #[test]
        fn depth_bounded_by_gate_count(c in arb_circuit()) {
            prop_assert!(layered_depth(c.gates()) <= c.len());
        }
    }

    #[test]
    fn depth_equals_gate_count_on_a_common_qubit() {
        let gates = vec![Gate::x(0), Gate::h(0), Gate::cnot(0, 2), Gate::x(0)];
        assert_eq!(layered_depth(&gates), gates.len());
    }
}
