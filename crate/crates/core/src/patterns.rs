//! Observation patterns up to isomorphism.
//!
//! Patterns are order-free: only the shape of the directed graph matters, so
//! edge order indices and element names are ignored. Canonical labels come
//! from exhaustive search over vertex orderings, which is fine for the small
//! networks this crate deals with.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::ObservationNetwork;

/// Largest vertex count accepted by [`canonical_form`].
pub const MAX_CANONICAL_VERTICES: usize = 9;

/// Largest observation count accepted by [`enumerate_patterns`].
pub const MAX_ENUMERATED_OBSERVATIONS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalLabel(Vec<u8>);

impl CanonicalLabel {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn vertex_count(&self) -> usize {
        self.0[0] as usize
    }

    pub fn edge_count(&self) -> usize {
        self.0[1] as usize
    }

    /// Arcs of the canonical representative, row-major.
    fn arcs(&self) -> Vec<(usize, usize)> {
        let n = self.vertex_count();
        let matrix = &self.0[2 + 2 * n..];
        (0..n).cartesian_product(0..n).filter(|&(u, v)| matrix[u * n + v] == 1).collect()
    }
}

impl fmt::Display for CanonicalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternKind {
    SingleObservation,
    Loop,
    /// Two elements observe a common element.
    EOut,
    /// One element observes two others.
    SIn,
    /// Linear chain `c -> b -> p`.
    Train,
    Other,
}

impl PatternKind {
    pub fn name(self) -> &'static str {
        match self {
            PatternKind::SingleObservation => "single_observation",
            PatternKind::Loop => "loop",
            PatternKind::EOut => "e_out",
            PatternKind::SIn => "s_in",
            PatternKind::Train => "train",
            PatternKind::Other => "other",
        }
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PatternClass {
    pub kind: PatternKind,
    pub canonical_label: CanonicalLabel,
}

/// Plain adjacency view of a network, vertices indexed in element order.
#[derive(Debug, Clone)]
struct Digraph {
    n: usize,
    adj: Vec<bool>,
}

impl Digraph {
    fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![false; n * n];
        for (u, v) in arcs {
            adj[u * n + v] = true;
        }
        Self { n, adj }
    }

    fn from_network(net: &ObservationNetwork) -> Self {
        let index: BTreeMap<&str, usize> = net.elements().iter().enumerate().map(|(i, e)| (e.id(), i)).collect();
        Self::from_arcs(
            net.elements().len(),
            net.edges().iter().map(|e| (index[e.observer.as_str()], index[e.observed.as_str()])),
        )
    }

    fn has(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&b| b).count()
    }

    fn signature(&self, v: usize) -> (u8, u8) {
        let out = (0..self.n).filter(|&w| self.has(v, w)).count();
        let inn = (0..self.n).filter(|&w| self.has(w, v)).count();
        (out as u8, inn as u8)
    }

    /// Vertex count, edge count, sorted (out, in) degree signatures, then the
    /// lexicographically smallest adjacency matrix over all vertex orderings
    /// that list the signatures in sorted order.
    fn canonical_label(&self) -> CanonicalLabel {
        let n = self.n;
        let mut groups: BTreeMap<(u8, u8), Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            groups.entry(self.signature(v)).or_default().push(v);
        }
        let mut header = vec![n as u8, self.edge_count() as u8];
        for (sig, members) in &groups {
            for _ in members {
                header.extend([sig.0, sig.1]);
            }
        }

        let mut best: Option<Vec<u8>> = None;
        let per_group: Vec<Vec<Vec<usize>>> =
            groups.values().map(|m| m.iter().copied().permutations(m.len()).collect()).collect();
        for choice in per_group.iter().map(|g| g.iter()).multi_cartesian_product() {
            let order: Vec<usize> = choice.into_iter().flatten().copied().collect();
            let matrix: Vec<u8> = (0..n * n).map(|k| u8::from(self.has(order[k / n], order[k % n]))).collect();
            if best.as_ref().is_none_or(|b| matrix < *b) {
                best = Some(matrix);
            }
        }
        // multi_cartesian_product yields nothing for zero groups
        header.extend(best.unwrap_or_default());
        CanonicalLabel(header)
    }
}

/// Canonical label of the network's underlying digraph: equal labels iff the
/// digraphs are isomorphic. Element names, roles and edge orders are ignored.
pub fn canonical_form(network: &ObservationNetwork) -> Result<CanonicalLabel> {
    let n = network.elements().len();
    if n > MAX_CANONICAL_VERTICES {
        return Err(Error::Unsupported(format!(
            "canonical labelling supports at most {MAX_CANONICAL_VERTICES} elements, got {n}"
        )));
    }
    Ok(Digraph::from_network(network).canonical_label())
}

pub fn are_isomorphic(first: &ObservationNetwork, second: &ObservationNetwork) -> Result<bool> {
    Ok(canonical_form(first)? == canonical_form(second)?)
}

/// Whether the undirected shadow of the network is connected. An empty
/// network counts as connected.
pub fn is_weakly_connected(network: &ObservationNetwork) -> bool {
    let g = Digraph::from_network(network);
    if g.n == 0 {
        return true;
    }
    let mut seen = vec![false; g.n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for (v, flag) in seen.iter_mut().enumerate() {
            if !*flag && (g.has(u, v) || g.has(v, u)) {
                *flag = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn network_from_label(label: &CanonicalLabel) -> ObservationNetwork {
    let names: Vec<String> = (0..label.vertex_count()).map(|i| format!("v{i}")).collect();
    let arcs: Vec<(&str, &str)> =
        label.arcs().into_iter().map(|(u, v)| (names[u].as_str(), names[v].as_str())).collect();
    ObservationNetwork::from_edges(&arcs).expect("canonical arcs form a simple digraph")
}

/// One representative per isomorphism class of weakly connected simple
/// digraphs with exactly `n_observations` edges, no self-loops and no
/// isolated vertices, sorted by canonical label.
///
/// Every such digraph with `k + 1` edges arises from one with `k` edges by
/// adding an arc between existing vertices or to a new vertex (drop a
/// non-spanning-tree arc if there is one, otherwise a spanning-tree leaf), so
/// classes are grown one edge at a time.
pub fn enumerate_patterns(n_observations: usize) -> Result<Vec<ObservationNetwork>> {
    if !(1..=MAX_ENUMERATED_OBSERVATIONS).contains(&n_observations) {
        return Err(Error::Unsupported(format!(
            "pattern enumeration supports 1..={MAX_ENUMERATED_OBSERVATIONS} observations, got {n_observations}"
        )));
    }
    let mut level: BTreeSet<CanonicalLabel> = BTreeSet::from([Digraph::from_arcs(2, [(0, 1)]).canonical_label()]);
    for _ in 1..n_observations {
        let mut next = BTreeSet::new();
        for label in &level {
            let n = label.vertex_count();
            let arcs = label.arcs();
            // Arc between existing vertices.
            for (u, v) in (0..n).cartesian_product(0..n) {
                if u != v && !arcs.contains(&(u, v)) {
                    let g = Digraph::from_arcs(n, arcs.iter().copied().chain([(u, v)]));
                    next.insert(g.canonical_label());
                }
            }
            // Arc to or from a fresh vertex.
            for u in 0..n {
                for extra in [(u, n), (n, u)] {
                    let g = Digraph::from_arcs(n + 1, arcs.iter().copied().chain([extra]));
                    next.insert(g.canonical_label());
                }
            }
        }
        level = next;
    }
    Ok(level.iter().map(network_from_label).collect())
}

fn reference_labels() -> &'static [(PatternKind, CanonicalLabel)] {
    static REFS: OnceLock<Vec<(PatternKind, CanonicalLabel)>> = OnceLock::new();
    REFS.get_or_init(|| {
        let refs: [(PatternKind, &[(&str, &str)]); 5] = [
            (PatternKind::SingleObservation, &[("b", "a")]),
            (PatternKind::Loop, &[("b", "a"), ("a", "b")]),
            (PatternKind::EOut, &[("a", "e"), ("b", "e")]),
            (PatternKind::SIn, &[("s", "a"), ("s", "b")]),
            (PatternKind::Train, &[("c", "b"), ("b", "p")]),
        ];
        refs.iter()
            .map(|(kind, edges)| {
                let net = ObservationNetwork::from_edges(edges).expect("reference pattern");
                (*kind, canonical_form(&net).expect("small reference pattern"))
            })
            .collect()
    })
}

/// Names the pattern when it is isomorphic to one of the one- or
/// two-observation reference patterns.
pub fn classify_pattern(network: &ObservationNetwork) -> Result<PatternClass> {
    let canonical_label = canonical_form(network)?;
    let kind = reference_labels()
        .iter()
        .find(|(_, label)| *label == canonical_label)
        .map_or(PatternKind::Other, |(kind, _)| *kind);
    Ok(PatternClass { kind, canonical_label })
}

fn quote(id: &str) -> String {
    format!("\"{}\"", id.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT rendering: one node per element annotated with its split count, one
/// arc per observation from observer to observed.
pub fn to_dot(network: &ObservationNetwork, label: Option<&str>) -> String {
    let mut out = String::from("digraph observations {\n");
    if let Some(label) = label {
        out.push_str(&format!("  label={};\n", quote(label)));
    }
    for e in network.elements() {
        out.push_str(&format!(
            "  {} [label={}];\n",
            quote(e.id()),
            quote(&format!("{} (splits={})", e.id(), e.splits()))
        ));
    }
    for e in network.edges() {
        out.push_str(&format!(
            "  {} -> {} [arrowhead=normal, label=\"{}\"];\n",
            quote(&e.observer),
            quote(&e.observed),
            e.order
        ));
    }
    out.push_str("}\n");
    out
}
