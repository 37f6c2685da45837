//! The two-observation gate.
//!
//! Three elements `a`, `b` (inputs) and `o` (output). An input that is false
//! observes `o`; an input that is true is observed by `o`. The output's
//! entropy is therefore the number of true inputs, in splits, and a single
//! threshold on the normalized output entropy reads NAND or NOR off the same
//! networks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{NetworkFile, ObservationNetwork, Role};
use crate::units::splits_to_nats;

pub const INPUT_A: &str = "a";
pub const INPUT_B: &str = "b";
pub const OUTPUT: &str = "o";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    Nand,
    Nor,
}

impl GateKind {
    /// The ideal boolean function.
    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            GateKind::Nand => !(a && b),
            GateKind::Nor => !(a || b),
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateKind::Nand => "nand",
            GateKind::Nor => "nor",
        })
    }
}

/// Turns the output element's entropy into a boolean: the gate reads true
/// when the normalized entropy `u` is strictly below the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateReadout {
    /// Output entropy, in splits, that maps to `u = 1`.
    pub normalization_max: f64,
    pub nand_threshold: f64,
    pub nor_threshold: f64,
}

impl Default for GateReadout {
    fn default() -> Self {
        Self { normalization_max: 2.0, nand_threshold: 0.75, nor_threshold: 0.25 }
    }
}

impl GateReadout {
    pub fn new(normalization_max: f64, nand_threshold: f64, nor_threshold: f64) -> Result<Self> {
        if !(normalization_max.is_finite() && normalization_max > 0.0) {
            return Err(Error::Domain(format!("normalization maximum must be positive, got {normalization_max}")));
        }
        if !(nand_threshold > 0.5 && nand_threshold <= 1.0) {
            return Err(Error::Domain(format!("NAND threshold must lie in (0.5, 1], got {nand_threshold}")));
        }
        if !(nor_threshold > 0.0 && nor_threshold <= 0.5) {
            return Err(Error::Domain(format!("NOR threshold must lie in (0, 0.5], got {nor_threshold}")));
        }
        Ok(Self { normalization_max, nand_threshold, nor_threshold })
    }

    pub fn threshold(&self, kind: GateKind) -> f64 {
        match kind {
            GateKind::Nand => self.nand_threshold,
            GateKind::Nor => self.nor_threshold,
        }
    }
}

/// Entropy of each gate element, in splits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateEntropies {
    pub a: u32,
    pub b: u32,
    pub o: u32,
}

fn wire_input(net: ObservationNetwork, input: &str, value: bool) -> ObservationNetwork {
    let result = if value { net.observe(OUTPUT, input) } else { net.observe(input, OUTPUT) };
    result.expect("gate wiring is a simple digraph")
}

/// The gate network for inputs `(a, b)`: exactly two observations.
pub fn build_gate_network(a: bool, b: bool) -> ObservationNetwork {
    let net = ObservationNetwork::default()
        .with_element(INPUT_A, Role::Input)
        .and_then(|n| n.with_element(INPUT_B, Role::Input))
        .and_then(|n| n.with_element(OUTPUT, Role::Output))
        .expect("fresh gate elements");
    let net = wire_input(net, INPUT_A, a);
    wire_input(net, INPUT_B, b)
}

pub fn gate_entropies(network: &ObservationNetwork) -> Result<GateEntropies> {
    let ids: BTreeSet<&str> = network.elements().iter().map(|e| e.id()).collect();
    if ids != BTreeSet::from([INPUT_A, INPUT_B, OUTPUT]) {
        return Err(Error::NotAGateNetwork(format!(
            "expected elements {{a, b, o}}, found {{{}}}",
            ids.iter().join(", ")
        )));
    }
    Ok(GateEntropies { a: network.splits(INPUT_A)?, b: network.splits(INPUT_B)?, o: network.splits(OUTPUT)? })
}

/// `u = o_S / normalization_max`, clamped to `[0, 1]`.
pub fn normalized_output(o_splits: u32, readout: &GateReadout) -> f64 {
    (f64::from(o_splits) / readout.normalization_max).clamp(0.0, 1.0)
}

pub fn read_gate(u: f64, kind: GateKind, readout: &GateReadout) -> bool {
    u < readout.threshold(kind)
}

/// Every intermediate of one gate evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct GateState {
    pub kind: GateKind,
    pub inputs: (bool, bool),
    pub network: ObservationNetwork,
    pub entropies: GateEntropies,
    pub u: f64,
    pub readout: GateReadout,
    pub output: bool,
}

#[derive(Debug, Clone, Serialize)]
struct EntropyRecord {
    splits: u32,
    physical_nats: f64,
}

#[derive(Debug, Clone, Serialize)]
struct TraceRecord {
    kind: GateKind,
    inputs: [bool; 2],
    network: NetworkFile,
    entropies: BTreeMap<&'static str, EntropyRecord>,
    u: f64,
    thresholds: GateReadout,
    output: bool,
}

impl GateState {
    pub fn trace_json(&self) -> Result<String> {
        let t = self.network.temperature();
        let record = |splits: u32| EntropyRecord { splits, physical_nats: splits_to_nats(u64::from(splits), t) };
        let trace = TraceRecord {
            kind: self.kind,
            inputs: [self.inputs.0, self.inputs.1],
            network: self.network.to_file(),
            entropies: BTreeMap::from([
                (INPUT_A, record(self.entropies.a)),
                (INPUT_B, record(self.entropies.b)),
                (OUTPUT, record(self.entropies.o)),
            ]),
            u: self.u,
            thresholds: self.readout,
            output: self.output,
        };
        Ok(serde_json::to_string_pretty(&trace)?)
    }
}

pub fn evaluate(a: bool, b: bool, kind: GateKind) -> (bool, GateState) {
    evaluate_with(a, b, kind, &GateReadout::default())
}

pub fn evaluate_with(a: bool, b: bool, kind: GateKind, readout: &GateReadout) -> (bool, GateState) {
    let network = build_gate_network(a, b);
    let entropies = gate_entropies(&network).expect("built gate has the gate shape");
    let u = normalized_output(entropies.o, readout);
    let output = read_gate(u, kind, readout);
    let state = GateState { kind, inputs: (a, b), network, entropies, u, readout: *readout, output };
    (output, state)
}

/// A two-input truth table. Bit `2a + b` holds the output for inputs `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TruthTable(pub u8);

impl TruthTable {
    pub const FALSE: Self = Self(0b0000);
    pub const NOR: Self = Self(0b0001);
    pub const NOT_A: Self = Self(0b0011);
    pub const NOT_B: Self = Self(0b0101);
    pub const XOR: Self = Self(0b0110);
    pub const NAND: Self = Self(0b0111);
    pub const AND: Self = Self(0b1000);
    pub const XNOR: Self = Self(0b1001);
    pub const OR: Self = Self(0b1110);
    pub const TRUE: Self = Self(0b1111);

    pub fn from_fn(f: impl Fn(bool, bool) -> bool) -> Self {
        Self(INPUT_ROWS.iter().enumerate().fold(0, |acc, (row, &(a, b))| acc | (u8::from(f(a, b)) << row)))
    }

    pub fn eval(self, a: bool, b: bool) -> bool {
        self.0 >> (2 * usize::from(a) + usize::from(b)) & 1 == 1
    }

    pub fn name(self) -> &'static str {
        const NAMES: [&str; 16] = [
            "FALSE",
            "NOR",
            "NOT_A_AND_B",
            "NOT_A",
            "A_AND_NOT_B",
            "NOT_B",
            "XOR",
            "NAND",
            "AND",
            "XNOR",
            "B",
            "A_IMPLIES_B",
            "A",
            "B_IMPLIES_A",
            "OR",
            "TRUE",
        ];
        NAMES[usize::from(self.0 & 0xf)]
    }

    /// Outputs for rows 00, 01, 10, 11.
    pub fn bits(self) -> String {
        (0..4).map(|row| if self.0 >> row & 1 == 1 { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.name(), self.bits())
    }
}

/// Input rows in truth-table bit order.
pub const INPUT_ROWS: [(bool, bool); 4] = [(false, false), (false, true), (true, false), (true, true)];

/// How one input is attached in a searched gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InputWiring {
    /// The input does not take part.
    Unwired,
    /// Input element observes `anchor` when false, is observed by it when true.
    Anchored(usize),
}

/// A gate found by [`search_reachable_tables`]. Elements are numbered; the
/// inputs are elements 0 and 1 and the output is element 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GateWiring {
    pub input_a: InputWiring,
    pub input_b: InputWiring,
    /// Input-independent observations `(observer, observed)`.
    pub fixed: Vec<(usize, usize)>,
    /// `true`: reads true when `u <= threshold`; `false`: when `u < threshold`.
    pub inclusive: bool,
    /// Threshold in output splits.
    pub threshold_splits: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachableTables {
    pub n_observations: usize,
    pub element_budget: usize,
    /// First witness found for each reachable table.
    pub witnesses: BTreeMap<TruthTable, GateWiring>,
}

impl ReachableTables {
    pub fn tables(&self) -> BTreeSet<TruthTable> {
        self.witnesses.keys().copied().collect()
    }

    pub fn contains(&self, table: TruthTable) -> bool {
        self.witnesses.contains_key(&table)
    }
}

pub const MAX_SEARCH_OBSERVATIONS: usize = 3;
pub const MAX_ELEMENT_BUDGET: usize = 6;

const SEARCH_A: usize = 0;
const SEARCH_B: usize = 1;
const SEARCH_O: usize = 2;

/// Arcs of a searched gate for one input row, or `None` when that row would
/// repeat an observation.
fn row_arcs(wiring: &GateWiring, a: bool, b: bool) -> Option<BTreeSet<(usize, usize)>> {
    let mut arcs: BTreeSet<(usize, usize)> = wiring.fixed.iter().copied().collect();
    for (element, wire, value) in [(SEARCH_A, wiring.input_a, a), (SEARCH_B, wiring.input_b, b)] {
        if let InputWiring::Anchored(anchor) = wire {
            let arc = if value { (anchor, element) } else { (element, anchor) };
            if !arcs.insert(arc) {
                return None;
            }
        }
    }
    Some(arcs)
}

/// Exhaustively lists the two-input truth tables realizable with exactly
/// `n_observations` observations over at most `element_budget` elements.
///
/// Searched space: each input is either unwired or anchored to any other
/// element with the gate's input encoding; the rest of the observations are
/// fixed arcs anywhere; the output is a third element read through a single
/// low-entropy-is-true threshold at every achievable output level, with both
/// strict and inclusive comparisons. Configurations that would repeat an
/// observation for some input row are skipped. Element names are arbitrary,
/// so the inputs and output are pinned to elements 0, 1 and 2.
pub fn search_reachable_tables(n_observations: usize, element_budget: usize) -> Result<ReachableTables> {
    if !(1..=MAX_SEARCH_OBSERVATIONS).contains(&n_observations) {
        return Err(Error::Unsupported(format!(
            "reachability search supports 1..={MAX_SEARCH_OBSERVATIONS} observations, got {n_observations}"
        )));
    }
    if !(3..=MAX_ELEMENT_BUDGET).contains(&element_budget) {
        return Err(Error::Unsupported(format!(
            "element budget must lie in 3..={MAX_ELEMENT_BUDGET}, got {element_budget}"
        )));
    }

    let all_arcs: Vec<(usize, usize)> =
        (0..element_budget).cartesian_product(0..element_budget).filter(|(u, v)| u != v).collect();
    let wirings_for = |element: usize| -> Vec<InputWiring> {
        std::iter::once(InputWiring::Unwired)
            .chain((0..element_budget).filter(|&t| t != element).map(InputWiring::Anchored))
            .collect()
    };

    let mut witnesses = BTreeMap::new();
    for (input_a, input_b) in wirings_for(SEARCH_A).into_iter().cartesian_product(wirings_for(SEARCH_B)) {
        let wired = [input_a, input_b].iter().filter(|w| **w != InputWiring::Unwired).count();
        let Some(n_fixed) = n_observations.checked_sub(wired) else {
            continue;
        };
        for fixed in all_arcs.iter().copied().combinations(n_fixed) {
            let mut wiring = GateWiring { input_a, input_b, fixed, inclusive: false, threshold_splits: 0 };
            let levels: Option<Vec<u32>> = INPUT_ROWS
                .iter()
                .map(|&(a, b)| {
                    row_arcs(&wiring, a, b).map(|arcs| arcs.iter().filter(|(u, _)| *u == SEARCH_O).count() as u32)
                })
                .collect();
            let Some(levels) = levels else {
                continue;
            };
            for &threshold in levels.iter().sorted().dedup() {
                for inclusive in [false, true] {
                    let table = TruthTable::from_fn(|a, b| {
                        let level = levels[2 * usize::from(a) + usize::from(b)];
                        if inclusive {
                            level <= threshold
                        } else {
                            level < threshold
                        }
                    });
                    wiring.inclusive = inclusive;
                    wiring.threshold_splits = threshold;
                    witnesses.entry(table).or_insert_with(|| wiring.clone());
                }
            }
        }
    }
    Ok(ReachableTables { n_observations, element_budget, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::{classify_pattern, PatternKind};

    #[test]
    fn gate_networks_have_expected_edges() {
        let net = build_gate_network(false, false);
        assert!(net.has_edge("a", "o") && net.has_edge("b", "o"));
        let net = build_gate_network(true, true);
        assert!(net.has_edge("o", "a") && net.has_edge("o", "b"));
        let net = build_gate_network(false, true);
        assert!(net.has_edge("a", "o") && net.has_edge("o", "b"));
        for (a, b) in INPUT_ROWS {
            assert_eq!(build_gate_network(a, b).observation_count(), 2);
        }
    }

    #[test]
    fn gate_networks_classify() {
        let kind = |a, b| classify_pattern(&build_gate_network(a, b)).unwrap().kind;
        assert_eq!(kind(false, false), PatternKind::EOut);
        assert_eq!(kind(true, true), PatternKind::SIn);
        assert_eq!(kind(false, true), PatternKind::Train);
        assert_eq!(kind(true, false), PatternKind::Train);
    }

    #[test]
    fn entropies_match_minimum_values() {
        let e = |a, b| gate_entropies(&build_gate_network(a, b)).unwrap();
        assert_eq!(e(false, false), GateEntropies { a: 1, b: 1, o: 0 });
        assert_eq!(e(true, true), GateEntropies { a: 0, b: 0, o: 2 });
        assert_eq!(e(true, false), GateEntropies { a: 0, b: 1, o: 1 });
    }

    #[test]
    fn gate_entropies_rejects_foreign_networks() {
        let net = ObservationNetwork::from_edges(&[("x", "y")]).unwrap();
        assert!(matches!(gate_entropies(&net), Err(Error::NotAGateNetwork(_))));
    }

    #[test]
    fn normalization_levels() {
        let r = GateReadout::default();
        assert_eq!(normalized_output(0, &r), 0.0);
        // ln 2 / ln 4
        assert_eq!(normalized_output(1, &r), 0.5);
        assert_eq!(normalized_output(2, &r), 1.0);
        assert_eq!(normalized_output(7, &r), 1.0);
    }

    #[test]
    fn readout_examples() {
        let r = GateReadout::default();
        assert!(read_gate(0.5, GateKind::Nand, &r));
        assert!(!read_gate(1.0, GateKind::Nand, &r));
        assert!(!read_gate(0.5, GateKind::Nor, &r));
        assert!(read_gate(0.0, GateKind::Nor, &r));
    }

    #[test]
    fn readout_validation() {
        assert!(GateReadout::new(2.0, 0.5, 0.25).is_err());
        assert!(GateReadout::new(2.0, 1.01, 0.25).is_err());
        assert!(GateReadout::new(2.0, 0.75, 0.0).is_err());
        assert!(GateReadout::new(2.0, 0.75, 0.51).is_err());
        assert!(GateReadout::new(0.0, 0.75, 0.25).is_err());
        assert!(GateReadout::new(2.0, 1.0, 0.5).is_ok());
    }

    #[test]
    fn evaluate_examples() {
        assert!(!evaluate(true, true, GateKind::Nand).0);
        assert!(evaluate(false, false, GateKind::Nand).0);
        assert!(evaluate(false, false, GateKind::Nor).0);
        assert!(!evaluate(true, false, GateKind::Nor).0);
        let (_, state) = evaluate(true, false, GateKind::Nand);
        assert_eq!(state.u, 0.5);
        assert_eq!(state.entropies.o, 1);
    }

    #[test]
    fn truth_tables_and_symmetry() {
        for kind in [GateKind::Nand, GateKind::Nor] {
            for (a, b) in INPUT_ROWS {
                assert_eq!(evaluate(a, b, kind).0, kind.apply(a, b));
                assert_eq!(evaluate(a, b, kind).0, evaluate(b, a, kind).0);
            }
        }
    }

    #[test]
    fn readout_robust_across_threshold_ranges() {
        for i in 0..100 {
            let nand = 0.5 + 0.5 * f64::from(i + 1) / 100.0;
            let nor = 0.5 * f64::from(i + 1) / 100.0;
            let r = GateReadout::new(2.0, nand, nor).unwrap();
            let table = |kind| TruthTable::from_fn(|a, b| evaluate_with(a, b, kind, &r).0);
            assert_eq!(table(GateKind::Nand), TruthTable::NAND, "nand threshold {nand}");
            assert_eq!(table(GateKind::Nor), TruthTable::NOR, "nor threshold {nor}");
        }
    }

    #[test]
    fn trace_json_carries_intermediates() {
        let (_, state) = evaluate(true, true, GateKind::Nand);
        let v: serde_json::Value = serde_json::from_str(&state.trace_json().unwrap()).unwrap();
        assert_eq!(v["output"], false);
        assert_eq!(v["u"], 1.0);
        assert_eq!(v["entropies"]["o"]["splits"], 2);
        assert!((v["entropies"]["o"]["physical_nats"].as_f64().unwrap() - 4f64.ln()).abs() < 1e-12);
        assert_eq!(v["thresholds"]["nand_threshold"], 0.75);
        let net: NetworkFile = serde_json::from_value(v["network"].clone()).unwrap();
        assert_eq!(ObservationNetwork::from_file(&net).unwrap(), state.network);
    }

    #[test]
    fn truth_table_naming() {
        assert_eq!(TruthTable::from_fn(|a, b| !(a && b)), TruthTable::NAND);
        assert_eq!(TruthTable::from_fn(|a, b| a ^ b), TruthTable::XOR);
        assert_eq!(TruthTable::from_fn(|a, _| !a), TruthTable::NOT_A);
        assert_eq!(TruthTable::NAND.to_string(), "NAND 1110");
        assert!(TruthTable::AND.eval(true, true));
        assert!(!TruthTable::AND.eval(true, false));
    }

    #[test]
    fn search_argument_bounds() {
        assert!(search_reachable_tables(0, 6).is_err());
        assert!(search_reachable_tables(4, 6).is_err());
        assert!(search_reachable_tables(2, 7).is_err());
        assert!(search_reachable_tables(2, 2).is_err());
    }

    #[test]
    fn single_observation_reaches_only_inverters() {
        let found = search_reachable_tables(1, 4).unwrap().tables();
        let expected = BTreeSet::from([TruthTable::FALSE, TruthTable::TRUE, TruthTable::NOT_A, TruthTable::NOT_B]);
        assert_eq!(found, expected);
    }

    #[test]
    fn nand_witness_replays() {
        let reach = search_reachable_tables(2, 3).unwrap();
        let w = &reach.witnesses[&TruthTable::NAND];
        assert_eq!(w.input_a, InputWiring::Anchored(SEARCH_O));
        assert_eq!(w.input_b, InputWiring::Anchored(SEARCH_O));
        assert!(w.fixed.is_empty());
    }
}
