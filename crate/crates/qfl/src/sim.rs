//! Dense statevector execution and measurement sampling.
//!
//! Amplitudes are double-precision complex numbers indexed little-endian:
//! bit `i` of a basis index is the state of qubit `i`. X and
//! multi-controlled X are applied as exact index permutations, so label bits
//! read back as exact 0/1 and never involve a tolerance; Hadamard is the
//! only gate that mixes amplitudes.
//!
//! Circuits built from X/MCX alone permute basis states, so a basis input
//! can also be pushed through [`run_basis`] without allocating a
//! statevector. That path is how the exhaustive oracle checks read the final
//! label; [`run`] and [`run_basis`] agree bit-for-bit on such circuits.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::ir::{Circuit, Gate, Polarity};

/// Default width cap for dense simulation.
pub const DEFAULT_SIM_CAP: usize = 28;

/// Environment variable overriding the dense simulation cap.
pub const SIM_CAP_ENV: &str = "QFL_SIM_CAP";

/// Amplitudes above this magnitude count as nonzero when reading out states.
pub const AMP_EPS: f64 = 1e-9;

/// Effective dense-simulation cap: `QFL_SIM_CAP` when set, else the default.
pub fn sim_cap() -> usize {
    std::env::var(SIM_CAP_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_SIM_CAP)
}

/// A pure state over `width` qubits: `2^width` complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    width: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// Basis state (all-zeros by default), subject to the effective cap.
    pub fn new(width: usize, basis: Option<u64>) -> Result<Statevector> {
        Statevector::with_cap(width, basis, sim_cap())
    }

    pub fn with_cap(width: usize, basis: Option<u64>, cap: usize) -> Result<Statevector> {
        if width > cap {
            return Err(Error::ResourceLimit(format!(
                "statevector width {width} exceeds cap {cap}"
            )));
        }
        let index = basis.unwrap_or(0);
        if index >> width != 0 {
            return Err(Error::IrValidation(format!(
                "basis pattern {index:#b} does not fit in {width} qubits"
            )));
        }
        let mut amps = vec![Complex64::ZERO; 1usize << width];
        amps[index as usize] = Complex64::ONE;
        Ok(Statevector { width, amps })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: u64) -> Complex64 {
        self.amps[index as usize]
    }

    pub fn probability(&self, index: u64) -> f64 {
        self.amps[index as usize].norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Basis indices with `|amp| > AMP_EPS`, ascending.
    pub fn nonzero_states(&self) -> Vec<u64> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > AMP_EPS)
            .map(|(i, _)| i as u64)
            .collect()
    }

    pub fn apply(&mut self, gate: &Gate) {
        match gate {
            Gate::X { target } => {
                let mask = 1usize << target;
                for i in 0..self.amps.len() {
                    if i & mask == 0 {
                        self.amps.swap(i, i | mask);
                    }
                }
            }
            Gate::H { target } => {
                let mask = 1usize << target;
                for i in 0..self.amps.len() {
                    if i & mask == 0 {
                        let (lo, hi) = (self.amps[i], self.amps[i | mask]);
                        self.amps[i] = (lo + hi) * FRAC_1_SQRT_2;
                        self.amps[i | mask] = (lo - hi) * FRAC_1_SQRT_2;
                    }
                }
            }
            Gate::Mcx { controls, targets } => {
                let (cmask, cval) = control_masks(controls);
                let tmask: usize = targets.iter().map(|&t| 1usize << t).sum();
                let pivot = 1usize << targets[0];
                for i in 0..self.amps.len() {
                    if i & pivot == 0 && i & cmask == cval {
                        self.amps.swap(i, i ^ tmask);
                    }
                }
            }
        }
    }

    /// Sample `shots` outcomes by inverse CDF over ascending basis index,
    /// driven by a ChaCha20 stream seeded from `seed`. Identical seed and
    /// state give identical counts.
    pub fn sample_counts(&self, shots: usize, seed: u64) -> BTreeMap<u64, usize> {
        assert!(shots >= 1, "need at least one shot");
        let mut cdf = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cdf.push(acc);
        }
        let total = acc;
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            let u: f64 = rng.random::<f64>() * total;
            let mut index = cdf.partition_point(|&c| c <= u);
            if index >= cdf.len() {
                index = cdf.len() - 1;
            }
            *counts.entry(index as u64).or_insert(0) += 1;
        }
        counts
    }

    pub fn sample(&self, shots: usize, seed: u64) -> Vec<MeasurementRecord> {
        counts_to_records(&self.sample_counts(shots, seed), self.width)
    }
}

fn control_masks(controls: &[(usize, Polarity)]) -> (usize, usize) {
    let mut cmask = 0usize;
    let mut cval = 0usize;
    for &(q, polarity) in controls {
        cmask |= 1 << q;
        if polarity == Polarity::Positive {
            cval |= 1 << q;
        }
    }
    (cmask, cval)
}

/// Run a circuit from a basis state (all-zeros by default) on the dense
/// engine.
pub fn run(circuit: &Circuit, initial: Option<u64>) -> Result<Statevector> {
    run_with_cap(circuit, initial, sim_cap())
}

pub fn run_with_cap(circuit: &Circuit, initial: Option<u64>, cap: usize) -> Result<Statevector> {
    let mut state = Statevector::with_cap(circuit.width(), initial, cap)?;
    for gate in circuit.gates() {
        state.apply(gate);
    }
    Ok(state)
}

/// Image of a basis state under a single X/MCX gate. Hadamard has no
/// classical action and is rejected.
pub fn basis_image(gate: &Gate, bits: u64) -> Result<u64> {
    match gate {
        Gate::X { target } => Ok(bits ^ (1 << target)),
        Gate::H { .. } => Err(Error::NonClassical(
            "hadamard has no basis-state image".into(),
        )),
        Gate::Mcx { controls, targets } => {
            let (cmask, cval) = control_masks(controls);
            if bits & cmask as u64 == cval as u64 {
                let tmask: u64 = targets.iter().map(|&t| 1u64 << t).sum();
                Ok(bits ^ tmask)
            } else {
                Ok(bits)
            }
        }
    }
}

/// Exact image of a basis input under an X/MCX-only circuit.
pub fn run_basis(circuit: &Circuit, input: u64) -> Result<u64> {
    if circuit.width() > 63 {
        return Err(Error::ResourceLimit(format!(
            "basis evaluation supports at most 63 qubits, circuit has {}",
            circuit.width()
        )));
    }
    if input >> circuit.width() != 0 {
        return Err(Error::IrValidation(format!(
            "basis pattern {input:#b} does not fit in {} qubits",
            circuit.width()
        )));
    }
    let mut bits = input;
    for gate in circuit.gates() {
        bits = basis_image(gate, bits)?;
    }
    Ok(bits)
}

/// One measurement outcome: the bitstring (qubit 0 rightmost) and how often
/// it was observed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementRecord {
    pub bitstring: String,
    pub count: usize,
}

/// Render a basis index with qubit 0 as the rightmost character.
pub fn bitstring(index: u64, width: usize) -> String {
    (0..width)
        .rev()
        .map(|q| if index >> q & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Convert aggregated counts to records sorted by bitstring.
pub fn counts_to_records(counts: &BTreeMap<u64, usize>, width: usize) -> Vec<MeasurementRecord> {
    // ascending index order equals lexicographic bitstring order at fixed width
    counts
        .iter()
        .map(|(&index, &count)| MeasurementRecord {
            bitstring: bitstring(index, width),
            count,
        })
        .collect()
}

/// Project counts onto a subset of qubits: bit `i` of a projected index is
/// bit `keep[i]` of the original one. Counts for indistinguishable outcomes
/// merge.
pub fn project_counts(counts: &BTreeMap<u64, usize>, keep: &[usize]) -> BTreeMap<u64, usize> {
    let mut projected = BTreeMap::new();
    for (&index, &count) in counts {
        let mut out = 0u64;
        for (i, &q) in keep.iter().enumerate() {
            out |= (index >> q & 1) << i;
        }
        *projected.entry(out).or_insert(0) += count;
    }
    projected
}

/// CSV with a `bitstring,count` header, rows sorted by bitstring.
pub fn records_to_csv(records: &[MeasurementRecord]) -> String {
    let mut out = String::from("bitstring,count\n");
    for record in records {
        out.push_str(&record.bitstring);
        out.push(',');
        out.push_str(&record.count.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::Stage;
    use proptest::prelude::*;

    #[test]
    fn init_state_places_the_amplitude() {
        let s = Statevector::new(2, None).unwrap();
        assert_eq!(s.amplitude(0), Complex64::ONE);
        assert_eq!(s.nonzero_states(), vec![0]);

        let s = Statevector::new(2, Some(0b10)).unwrap();
        assert_eq!(s.amplitude(2), Complex64::ONE);

        assert!(matches!(
            Statevector::with_cap(29, None, 28),
            Err(Error::ResourceLimit(_))
        ));
        assert!(matches!(
            Statevector::new(2, Some(0b100)),
            Err(Error::IrValidation(_))
        ));
    }

    #[test]
    fn hadamard_splits_amplitudes() {
        let mut s = Statevector::new(1, None).unwrap();
        s.apply(&Gate::h(0));
        assert!((s.amplitude(0).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((s.amplitude(1).re - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn mcx_polarity_semantics() {
        // positive control fires on 1
        let mut s = Statevector::new(2, Some(0b01)).unwrap();
        s.apply(&Gate::cnot(0, 1));
        assert_eq!(s.amplitude(0b11), Complex64::ONE);

        // negative control fires on 0
        let mut s = Statevector::new(2, Some(0b00)).unwrap();
        s.apply(&Gate::mcx(vec![(0, Polarity::Negative)], vec![1]));
        assert_eq!(s.amplitude(0b10), Complex64::ONE);
    }

    #[test]
    fn empty_circuit_is_identity() {
        let s = run(&Circuit::new(3), None).unwrap();
        assert_eq!(s.nonzero_states(), vec![0]);
    }

    #[test]
    fn prep_layer_gives_uniform_magnitudes() {
        let mut c = Circuit::new(8);
        for q in 0..8 {
            c.append(Gate::h(q), Some(Stage::prep())).unwrap();
        }
        let s = run(&c, None).unwrap();
        let states = s.nonzero_states();
        assert_eq!(states.len(), 256);
        for index in states {
            assert!((s.amplitude(index).norm() - 1.0 / 16.0).abs() < 1e-12);
        }
    }

    #[test]
    fn deterministic_state_sampling() {
        let s = Statevector::new(3, Some(5)).unwrap();
        let records = s.sample(100, 42);
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].bitstring, "101");
        assert_eq!(records[0].count, 100);
    }

    #[test]
    fn same_seed_same_records() {
        let mut c = Circuit::new(4);
        for q in 0..4 {
            c.append(Gate::h(q), None).unwrap();
        }
        let s = run(&c, None).unwrap();
        assert_eq!(s.sample(500, 9), s.sample(500, 9));
        assert_ne!(s.sample(500, 9), s.sample(500, 10));
    }

    #[test]
    fn counts_sum_to_shots_and_strings_have_full_width() {
        let mut c = Circuit::new(5);
        for q in 0..3 {
            c.append(Gate::h(q), None).unwrap();
        }
        let s = run(&c, None).unwrap();
        let records = s.sample(1234, 7);
        assert_eq!(records.iter().map(|r| r.count).sum::<usize>(), 1234);
        assert!(records.iter().all(|r| r.bitstring.len() == 5));
        let mut sorted = records.clone();
        sorted.sort_by(|a, b| a.bitstring.cmp(&b.bitstring));
        assert_eq!(records, sorted);
    }

    #[test]
    fn projection_merges_counts() {
        let mut counts = BTreeMap::new();
        counts.insert(0b101, 3usize);
        counts.insert(0b001, 4);
        counts.insert(0b110, 5);
        // keep qubits 0 and 2
        let projected = project_counts(&counts, &[0, 2]);
        assert_eq!(projected.get(&0b11), Some(&3));
        assert_eq!(projected.get(&0b01), Some(&4));
        assert_eq!(projected.get(&0b10), Some(&5));
    }

    #[test]
    fn csv_rendering() {
        let records = vec![
            MeasurementRecord { bitstring: "00".into(), count: 2 },
            MeasurementRecord { bitstring: "11".into(), count: 1 },
        ];
        assert_eq!(records_to_csv(&records), "bitstring,count\n00,2\n11,1\n");
    }

    fn arb_classical_gate(width: usize) -> impl Strategy<Value = Gate> {
        let qubits: Vec<usize> = (0..width).collect();
        prop_oneof![
            (0..width).prop_map(Gate::x),
            proptest::sample::subsequence(qubits, 1..=width)
                .prop_flat_map(|chosen| {
                    let len = chosen.len();
                    (Just(chosen), 0..len, proptest::collection::vec(any::<bool>(), len))
                })
                .prop_map(|(chosen, split, flags)| {
                    let controls = chosen[..split]
                        .iter()
                        .zip(&flags)
                        .map(|(&q, &pos)| {
                            (q, if pos { Polarity::Positive } else { Polarity::Negative })
                        })
                        .collect();
                    Gate::mcx(controls, chosen[split..].to_vec())
                }),
        ]
    }

    proptest! {
        #[test]
        fn x_and_mcx_are_involutions(
            gate in arb_classical_gate(6),
            basis in 0u64..64,
        ) {
            let mut s = Statevector::new(6, Some(basis)).unwrap();
            let before = s.clone();
            s.apply(&gate);
            s.apply(&gate);
            prop_assert_eq!(s, before);
        }

        #[test]
        fn dense_and_basis_paths_agree(
            gates in proptest::collection::vec(arb_classical_gate(6), 0..25),
            input in 0u64..64,
        ) {
            let mut c = Circuit::new(6);
            for gate in gates {
                c.append(gate, None).unwrap();
            }
            let expected = run_basis(&c, input).unwrap();
            let s = run(&c, Some(input)).unwrap();
            prop_assert_eq!(s.nonzero_states(), vec![expected]);
            prop_assert_eq!(s.amplitude(expected), Complex64::ONE);
        }

        #[test]
        fn norm_is_preserved(
            hs in proptest::collection::vec(0usize..5, 0..8),
            gates in proptest::collection::vec(arb_classical_gate(5), 0..10),
        ) {
            let mut c = Circuit::new(5);
            for q in hs {
                c.append(Gate::h(q), None).unwrap();
            }
            for gate in gates {
                c.append(gate, None).unwrap();
            }
            let s = run(&c, None).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn run_basis_rejects_hadamard() {
        let mut c = Circuit::new(1);
        c.append(Gate::h(0), None).unwrap();
        assert!(matches!(run_basis(&c, 0), Err(Error::NonClassical(_))));
    }
}
