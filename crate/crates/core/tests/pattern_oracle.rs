//! Pattern enumeration checked against a brute-force census that shares no
//! code with the library's canonical labelling.

use std::collections::BTreeSet;

use entropy_nand::network::ObservationNetwork;
use entropy_nand::patterns::{
    are_isomorphic, canonical_form, classify_pattern, enumerate_patterns, is_weakly_connected, PatternKind,
};
use itertools::Itertools;
use proptest::prelude::*;

type Arcs = Vec<(usize, usize)>;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn vertices(arcs: &Arcs) -> Vec<usize> {
    arcs.iter().flat_map(|&(u, v)| [u, v]).sorted().dedup().collect()
}

fn connected(arcs: &Arcs) -> bool {
    let vs = vertices(arcs);
    let mut seen = BTreeSet::from([vs[0]]);
    loop {
        let before = seen.len();
        for &(u, v) in arcs {
            if seen.contains(&u) || seen.contains(&v) {
                seen.insert(u);
                seen.insert(v);
            }
        }
        if seen.len() == before {
            return seen.len() == vs.len();
        }
    }
}

/// Tries every bijection between the vertex sets.
fn brute_isomorphic(x: &Arcs, y: &Arcs) -> bool {
    let (vx, vy) = (vertices(x), vertices(y));
    if vx.len() != vy.len() || x.len() != y.len() {
        return false;
    }
    let target: BTreeSet<(usize, usize)> = y.iter().copied().collect();
    permutations(vx.len()).into_iter().any(|p| {
        let map = |v: usize| vy[p[vx.iter().position(|&w| w == v).unwrap()]];
        x.iter().all(|&(u, v)| target.contains(&(map(u), map(v))))
    })
}

/// Classes of weakly connected simple digraphs with `edges` arcs among all
/// labelled digraphs on `max_vertices` vertices.
fn brute_force_census(edges: usize, max_vertices: usize) -> usize {
    let arcs: Arcs = (0..max_vertices).cartesian_product(0..max_vertices).filter(|(u, v)| u != v).collect();
    let mut reps: Vec<Arcs> = Vec::new();
    for set in arcs.into_iter().combinations(edges) {
        if connected(&set) && !reps.iter().any(|r| brute_isomorphic(r, &set)) {
            reps.push(set);
        }
    }
    reps.len()
}

#[test]
fn counts_match_brute_force_census() {
    assert_eq!(brute_force_census(1, 3), 1);
    assert_eq!(brute_force_census(2, 4), 4);
    let three = brute_force_census(3, 6);
    assert_eq!(three, 12);
    assert_eq!(enumerate_patterns(3).unwrap().len(), three);
}

#[test]
fn larger_counts_match_frozen_census() {
    // Frozen from a networkx census of all labelled digraphs on 5 and 6 vertices.
    assert_eq!(enumerate_patterns(4).unwrap().len(), 53);
    assert_eq!(enumerate_patterns(5).unwrap().len(), 237);
}

#[test]
fn enumeration_is_sound_and_pairwise_distinct() {
    for n in 1..=4 {
        let found = enumerate_patterns(n).unwrap();
        for p in &found {
            assert_eq!(p.observation_count(), n);
            assert!(is_weakly_connected(p));
            assert!(p.elements().iter().all(|e| p.out_degree(e.id()) + p.in_degree(e.id()) > 0));
            assert!(p.reconcile().is_ok());
        }
        for (x, y) in found.iter().tuple_combinations() {
            assert!(!are_isomorphic(x, y).unwrap());
        }
        let labels: Vec<_> = found.iter().map(|p| canonical_form(p).unwrap()).collect();
        assert!(labels.windows(2).all(|w| w[0] < w[1]), "not sorted by canonical label");
    }
}

#[test]
fn second_order_classes_each_appear_once() {
    let kinds: Vec<PatternKind> =
        enumerate_patterns(2).unwrap().iter().map(|p| classify_pattern(p).unwrap().kind).sorted().collect();
    assert_eq!(kinds, vec![PatternKind::Loop, PatternKind::EOut, PatternKind::SIn, PatternKind::Train]);
}

fn random_network() -> impl Strategy<Value = (Arcs, Vec<usize>)> {
    (2usize..=6).prop_flat_map(|n| {
        let arcs = prop::collection::btree_set((0..n, 0..n), 1..8)
            .prop_map(|s| s.into_iter().filter(|(u, v)| u != v).collect::<Arcs>());
        (arcs, Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

fn build(arcs: &Arcs, names: impl Fn(usize) -> String) -> ObservationNetwork {
    let edges: Vec<(String, String)> = arcs.iter().map(|&(u, v)| (names(u), names(v))).collect();
    ObservationNetwork::from_edges(&edges).unwrap()
}

proptest! {
    #[test]
    fn labels_agree_with_brute_force_isomorphism((arcs, perm) in random_network(), (other, _) in random_network()) {
        prop_assume!(!arcs.is_empty() && !other.is_empty());
        let original = build(&arcs, |v| format!("n{v}"));
        let relabelled = build(&arcs.iter().rev().copied().collect(), |v| format!("m{}", perm[v]));
        prop_assert_eq!(canonical_form(&original).unwrap(), canonical_form(&relabelled).unwrap());
        prop_assert_eq!(classify_pattern(&original).unwrap(), classify_pattern(&relabelled).unwrap());

        let second = build(&other, |v| format!("n{v}"));
        prop_assert_eq!(are_isomorphic(&original, &second).unwrap(), brute_isomorphic(&arcs, &other));
    }
}
