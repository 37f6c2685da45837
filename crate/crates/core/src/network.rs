//! Observation networks and their entropy ledger.
//!
//! An observation is a directed edge `observer -> observed`. The observer
//! splits into a "before" and an "after" state, so its state count doubles
//! and it gains one split (`T ln 2`) of entropy. The ledger counts entropy in
//! integer splits so that every reconciliation is exact; physical nats are
//! derived from the network temperature.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::splits_to_nats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Input,
    Output,
    Environment,
    #[default]
    Plain,
}

/// A discrete entropy container. A fresh element has one state and no entropy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    id: String,
    splits: u32,
    role: Role,
}

impl Element {
    pub fn id(&self) -> &str {
        &self.id
    }

    /// Number of observations this element has performed and not erased.
    pub fn splits(&self) -> u32 {
        self.splits
    }

    /// State count `m = 2^splits`, saturating at `u64::MAX`.
    pub fn states(&self) -> u64 {
        1u64.checked_shl(self.splits).unwrap_or(u64::MAX)
    }

    pub fn role(&self) -> Role {
        self.role
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ObservationEdge {
    pub observer: String,
    pub observed: String,
    pub order: u32,
}

/// What happens to an element's own entropy once it has been handed to the
/// environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DissipationMode {
    /// The element keeps its split states (it has memory of the observation).
    #[default]
    Retain,
    /// Memoryless element: its splits reset to zero.
    Erase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Observation,
    Dissipation,
}

/// One ledger record. For an observation the delta is credited to the
/// observer; for a dissipation the environment is the observer and the delta
/// is what it absorbed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerStep {
    pub kind: StepKind,
    pub order: u32,
    pub observer: String,
    pub observed: String,
    pub delta_splits: u64,
    /// Cumulative environment absorption after this step, in splits.
    pub env_absorbed_splits: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EntropyLedger {
    environment_absorbed: u64,
    erased: BTreeMap<String, u64>,
    steps: Vec<LedgerStep>,
}

impl EntropyLedger {
    /// Entropy the environment has absorbed, in splits.
    pub fn environment_absorbed_splits(&self) -> u64 {
        self.environment_absorbed
    }

    pub fn steps(&self) -> &[LedgerStep] {
        &self.steps
    }

    /// Splits erased from `id` by memoryless dissipation.
    pub fn erased_splits(&self, id: &str) -> u64 {
        self.erased.get(id).copied().unwrap_or(0)
    }

    pub fn total_erased_splits(&self) -> u64 {
        self.erased.values().sum()
    }

    /// Sum of the deltas of all observation steps.
    pub fn observation_total_splits(&self) -> u64 {
        self.total_of(StepKind::Observation)
    }

    /// Sum of the deltas of all dissipation steps.
    pub fn dissipation_total_splits(&self) -> u64 {
        self.total_of(StepKind::Dissipation)
    }

    fn total_of(&self, kind: StepKind) -> u64 {
        self.steps.iter().filter(|s| s.kind == kind).map(|s| s.delta_splits).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObservationNetwork {
    temperature: f64,
    elements: Vec<Element>,
    edges: Vec<ObservationEdge>,
    ledger: EntropyLedger,
    auto_dissipate: Option<DissipationMode>,
}

impl Default for ObservationNetwork {
    fn default() -> Self {
        Self {
            temperature: 1.0,
            elements: Vec::new(),
            edges: Vec::new(),
            ledger: EntropyLedger::default(),
            auto_dissipate: None,
        }
    }
}

impl ObservationNetwork {
    /// An empty network at model temperature `temperature` (`k_B = 1`).
    pub fn new(temperature: f64) -> Result<Self> {
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(Error::Domain(format!("temperature must be positive, got {temperature}")));
        }
        Ok(Self { temperature, ..Self::default() })
    }

    /// Builds a network at `T = 1` by replaying `edges` in order; elements are
    /// created on first mention with [`Role::Plain`].
    pub fn from_edges<S: AsRef<str>>(edges: &[(S, S)]) -> Result<Self> {
        let mut net = Self::default();
        for (observer, observed) in edges {
            for id in [observer.as_ref(), observed.as_ref()] {
                if net.index_of(id).is_none() {
                    net.insert_element(id, Role::Plain)?;
                }
            }
            net.push_edge(observer.as_ref(), observed.as_ref(), None)?;
        }
        Ok(net)
    }

    /// Observes with every observation immediately followed by a dissipation
    /// of the observer in `mode`.
    pub fn with_auto_dissipation(&self, mode: Option<DissipationMode>) -> Self {
        Self { auto_dissipate: mode, ..self.clone() }
    }

    pub fn with_element(&self, id: &str, role: Role) -> Result<Self> {
        let mut next = self.clone();
        next.insert_element(id, role)?;
        Ok(next)
    }

    /// `observer` observes `observed`: the observer splits once.
    pub fn observe(&self, observer: &str, observed: &str) -> Result<Self> {
        let mut next = self.clone();
        next.push_edge(observer, observed, None)?;
        if let Some(mode) = self.auto_dissipate {
            next.dissipate_in_place(observer, mode)?;
        }
        Ok(next)
    }

    /// Hands the element's current entropy to the environment. An element with
    /// no splits has nothing to dissipate and is left untouched.
    pub fn dissipate_to_environment(&self, id: &str, mode: DissipationMode) -> Result<Self> {
        let mut next = self.clone();
        next.dissipate_in_place(id, mode)?;
        Ok(next)
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// Edges in application order.
    pub fn edges(&self) -> &[ObservationEdge] {
        &self.edges
    }

    pub fn ledger(&self) -> &EntropyLedger {
        &self.ledger
    }

    pub fn element(&self, id: &str) -> Option<&Element> {
        self.index_of(id).map(|i| &self.elements[i])
    }

    pub fn splits(&self, id: &str) -> Result<u32> {
        self.element(id).map(Element::splits).ok_or_else(|| Error::UnknownElement(id.to_owned()))
    }

    /// Entropy of `id` in physical nats, `splits * T ln 2`.
    pub fn entropy(&self, id: &str) -> Result<f64> {
        Ok(splits_to_nats(u64::from(self.splits(id)?), self.temperature))
    }

    /// Per-element entropy in physical nats.
    pub fn entropies(&self) -> BTreeMap<String, f64> {
        self.elements.iter().map(|e| (e.id.clone(), splits_to_nats(u64::from(e.splits), self.temperature))).collect()
    }

    pub fn environment_absorbed(&self) -> f64 {
        splits_to_nats(self.ledger.environment_absorbed, self.temperature)
    }

    pub fn out_degree(&self, id: &str) -> usize {
        self.edges.iter().filter(|e| e.observer == id).count()
    }

    pub fn in_degree(&self, id: &str) -> usize {
        self.edges.iter().filter(|e| e.observed == id).count()
    }

    pub fn has_edge(&self, observer: &str, observed: &str) -> bool {
        self.edges.iter().any(|e| e.observer == observer && e.observed == observed)
    }

    /// Number of observations; the order of the pattern.
    pub fn observation_count(&self) -> usize {
        self.edges.len()
    }

    pub fn total_splits(&self) -> u64 {
        self.elements.iter().map(|e| u64::from(e.splits)).sum()
    }

    /// Checks the exact ledger identities:
    /// - `splits + erased = out-degree` for every element,
    /// - observation deltas = current splits + erased splits,
    /// - dissipation deltas = environment absorption, which never decreased.
    pub fn reconcile(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Domain(format!("ledger does not reconcile: {msg}")));
        for e in &self.elements {
            let expected = self.out_degree(&e.id) as u64;
            let held = u64::from(e.splits) + self.ledger.erased_splits(&e.id);
            if held != expected {
                return fail(format!("`{}` holds {held} splits, out-degree {expected}", e.id));
            }
        }
        let observed = self.ledger.observation_total_splits();
        let held = self.total_splits() + self.ledger.total_erased_splits();
        if observed != held {
            return fail(format!("observations credited {observed}, elements hold {held}"));
        }
        if self.ledger.dissipation_total_splits() != self.ledger.environment_absorbed {
            return fail("dissipation steps disagree with environment total".into());
        }
        let monotone = self.ledger.steps.windows(2).all(|w| w[0].env_absorbed_splits <= w[1].env_absorbed_splits);
        if !monotone {
            return fail("environment absorption decreased".into());
        }
        Ok(())
    }

    /// Ledger as CSV: `order,observer,observed,delta_model_nats,delta_physical_nats,env_absorbed`.
    pub fn ledger_csv(&self) -> String {
        let mut out = String::from("order,observer,observed,delta_model_nats,delta_physical_nats,env_absorbed\n");
        for s in &self.ledger.steps {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                s.order,
                s.observer,
                s.observed,
                s.delta_splits,
                splits_to_nats(s.delta_splits, self.temperature),
                splits_to_nats(s.env_absorbed_splits, self.temperature),
            );
        }
        out
    }

    pub fn to_file(&self) -> NetworkFile {
        NetworkFile {
            temperature: self.temperature,
            elements: self.elements.iter().map(|e| ElementRecord { id: e.id.clone(), role: e.role }).collect(),
            edges: self.edges.clone(),
        }
    }

    /// Rebuilds a network by replaying the file's edges in ascending order.
    pub fn from_file(file: &NetworkFile) -> Result<Self> {
        let mut net = Self::new(file.temperature)?;
        for e in &file.elements {
            net.insert_element(&e.id, e.role)?;
        }
        let mut edges: Vec<&ObservationEdge> = file.edges.iter().collect();
        edges.sort_by_key(|e| e.order);
        for e in edges {
            net.push_edge(&e.observer, &e.observed, Some(e.order))?;
        }
        Ok(net)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(text)?)
    }

    fn index_of(&self, id: &str) -> Option<usize> {
        self.elements.iter().position(|e| e.id == id)
    }

    fn require(&self, id: &str) -> Result<usize> {
        self.index_of(id).ok_or_else(|| Error::UnknownElement(id.to_owned()))
    }

    fn insert_element(&mut self, id: &str, role: Role) -> Result<()> {
        if id.is_empty() {
            return Err(Error::Domain("element id must not be empty".into()));
        }
        if self.index_of(id).is_some() {
            return Err(Error::DuplicateElement(id.to_owned()));
        }
        self.elements.push(Element { id: id.to_owned(), splits: 0, role });
        Ok(())
    }

    fn next_order(&self) -> u32 {
        self.edges.iter().map(|e| e.order + 1).max().unwrap_or(0)
    }

    fn push_edge(&mut self, observer: &str, observed: &str, order: Option<u32>) -> Result<()> {
        let observer_idx = self.require(observer)?;
        self.require(observed)?;
        if observer == observed {
            return Err(Error::SelfObservation(observer.to_owned()));
        }
        if self.has_edge(observer, observed) {
            return Err(Error::DuplicateEdge { observer: observer.to_owned(), observed: observed.to_owned() });
        }
        let order = order.unwrap_or_else(|| self.next_order());
        if self.edges.iter().any(|e| e.order == order) {
            return Err(Error::DuplicateOrder(order));
        }
        self.elements[observer_idx].splits += 1;
        self.edges.push(ObservationEdge { observer: observer.to_owned(), observed: observed.to_owned(), order });
        self.ledger.steps.push(LedgerStep {
            kind: StepKind::Observation,
            order,
            observer: observer.to_owned(),
            observed: observed.to_owned(),
            delta_splits: 1,
            env_absorbed_splits: self.ledger.environment_absorbed,
        });
        Ok(())
    }

    fn dissipate_in_place(&mut self, id: &str, mode: DissipationMode) -> Result<()> {
        let idx = self.require(id)?;
        let splits = u64::from(self.elements[idx].splits);
        if splits == 0 {
            return Ok(());
        }
        self.ledger.environment_absorbed += splits;
        if mode == DissipationMode::Erase {
            self.elements[idx].splits = 0;
            *self.ledger.erased.entry(id.to_owned()).or_insert(0) += splits;
        }
        // Dissipation follows the most recent observation.
        let order = self.edges.iter().map(|e| e.order).max().unwrap_or(0);
        self.ledger.steps.push(LedgerStep {
            kind: StepKind::Dissipation,
            order,
            observer: "environment".to_owned(),
            observed: id.to_owned(),
            delta_splits: splits,
            env_absorbed_splits: self.ledger.environment_absorbed,
        });
        Ok(())
    }
}

/// On-disk network description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkFile {
    #[serde(default = "one")]
    pub temperature: f64,
    pub elements: Vec<ElementRecord>,
    #[serde(default)]
    pub edges: Vec<ObservationEdge>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRecord {
    pub id: String,
    #[serde(default)]
    pub role: Role,
}
