//! Chord orientations.
//!
//! An orientation assigns a direction to every chord. It is valid when every
//! vertex has at most two incoming chords and any two incoming chords at a
//! vertex bound a common inner face. Validity is checked directly against
//! the face structure of the embedding; existence is decided by a
//! linear-time dynamic program over the construction tree, cross-checked by
//! an exhaustive oracle that tries all `2^k` assignments.

use crate::graph::{Edge, Vertex};
use crate::recognize::{ConstructionTree, InnerChordalGraph, NodeKind};
use std::collections::BTreeMap;
use thiserror::Error;

/// Direction per chord: the map value is the target vertex.
pub type ChordOrientation = BTreeMap<Edge, Vertex>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrientError {
    #[error("orientation domain does not match the chord set: {0}")]
    DomainMismatch(String),
    #[error("vertex {vertex} has incoming chords {e1:?} and {e2:?} without a shared face")]
    UnsharedFace { vertex: Vertex, e1: Edge, e2: Edge },
    #[error("vertex {vertex} has {indegree} incoming chords")]
    InDegreeExceeded { vertex: Vertex, indegree: usize },
    #[error("input has 4-clique nodes; the greedy construction needs an outerplanar graph")]
    NotOuterplanar,
    #[error("{0} chords exceed the exhaustive bound of {1}")]
    TooManyChords(usize, usize),
}

/// Checks validity of an orientation against the embedding: in-degree at
/// most two everywhere, and any two incoming chords at a vertex share an
/// inner face. Returns the violating vertex and edge pair on failure.
pub fn validate_orientation(
    ic: &InnerChordalGraph,
    o: &ChordOrientation,
) -> Result<(), OrientError> {
    let chords: Vec<Edge> = o.keys().copied().collect();
    if chords != ic.chords {
        return Err(OrientError::DomainMismatch(format!(
            "expected {} chords, got {}",
            ic.chords.len(),
            chords.len()
        )));
    }
    let mut incoming: BTreeMap<Vertex, Vec<Edge>> = BTreeMap::new();
    for (&e, &target) in o {
        if !e.contains(target) {
            return Err(OrientError::DomainMismatch(format!(
                "target {target} is not an endpoint of {e:?}"
            )));
        }
        incoming.entry(target).or_default().push(e);
    }
    for (&v, edges) in &incoming {
        if edges.len() > 2 {
            return Err(OrientError::InDegreeExceeded {
                vertex: v,
                indegree: edges.len(),
            });
        }
        if edges.len() == 2 {
            let (fa, fb) = ic.embedded.faces_of_edge(edges[0]);
            let (fc, fd) = ic.embedded.faces_of_edge(edges[1]);
            let shared = fa == fc || fa == fd || fb == fc || fb == fd;
            if !shared {
                return Err(OrientError::UnsharedFace {
                    vertex: v,
                    e1: edges[0],
                    e2: edges[1],
                });
            }
        }
    }
    Ok(())
}

/// Exhaustively tries every assignment of directions to the chords.
/// Independent of the dynamic program: each assignment is checked with
/// [`validate_orientation`], which consults the face structure only.
pub fn enumerate_exists(ic: &InnerChordalGraph, max_chords: usize) -> Result<bool, OrientError> {
    Ok(enumerate_first(ic, max_chords)?.is_some())
}

/// First valid assignment in mask order, if any.
pub fn enumerate_first(
    ic: &InnerChordalGraph,
    max_chords: usize,
) -> Result<Option<ChordOrientation>, OrientError> {
    let k = ic.chords.len();
    if k > max_chords {
        return Err(OrientError::TooManyChords(k, max_chords));
    }
    for mask in 0u64..(1u64 << k) {
        let o = orientation_from_mask(ic, mask);
        if validate_orientation(ic, &o).is_ok() {
            return Ok(Some(o));
        }
    }
    Ok(None)
}

/// Number of valid assignments (exhaustive).
pub fn enumerate_count(ic: &InnerChordalGraph, max_chords: usize) -> Result<usize, OrientError> {
    let k = ic.chords.len();
    if k > max_chords {
        return Err(OrientError::TooManyChords(k, max_chords));
    }
    let mut count = 0;
    for mask in 0u64..(1u64 << k) {
        let o = orientation_from_mask(ic, mask);
        if validate_orientation(ic, &o).is_ok() {
            count += 1;
        }
    }
    Ok(count)
}

fn orientation_from_mask(ic: &InnerChordalGraph, mask: u64) -> ChordOrientation {
    ic.chords
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            let target = if mask >> i & 1 == 0 { e.u() } else { e.v() };
            (e, target)
        })
        .collect()
}

/// Greedy construction for maximal outerplanar inputs: repeatedly direct the
/// remaining edges of a vertex of degree at most two towards it and delete
/// it; afterwards only the chord directions are kept.
pub fn greedy_outerplanar(ic: &InnerChordalGraph) -> Result<ChordOrientation, OrientError> {
    if !ic.inner_vertices.is_empty() {
        return Err(OrientError::NotOuterplanar);
    }
    let g = ic.graph();
    let mut degree: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let mut alive = vec![true; g.n()];
    let mut directed: BTreeMap<Edge, Vertex> = BTreeMap::new();
    let mut eligible: std::collections::BTreeSet<Vertex> = g
        .vertices()
        .filter(|&v| degree[v] <= 2)
        .collect();
    let mut removed = 0;
    while removed < g.n() {
        let v = *eligible
            .iter()
            .next()
            .expect("maximal outerplanar graphs peel down to nothing");
        eligible.remove(&v);
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        removed += 1;
        for &w in g.neighbors(v) {
            if alive[w] {
                directed.insert(Edge::new(v, w), v);
                degree[w] -= 1;
                if degree[w] <= 2 {
                    eligible.insert(w);
                }
            }
        }
    }
    Ok(ic
        .chords
        .iter()
        .map(|&c| (c, directed[&c]))
        .collect())
}

/// True when at most one 4-clique node has all three of its triangle edges
/// as chords (tree-degree 3). Such trees always admit a valid orientation;
/// the solver roots at that node when it exists.
pub fn at_most_one_fully_chorded_k4(t: &ConstructionTree) -> bool {
    fully_chorded_k4s(t).len() <= 1
}

fn fully_chorded_k4s(t: &ConstructionTree) -> Vec<usize> {
    (0..t.nodes.len())
        .filter(|&i| t.nodes[i].kind == NodeKind::K4 && t.node_degree(i) == 3)
        .collect()
}

/// Table entry index: direction bit (0 = toward the chord's smaller
/// endpoint) and one "has other incoming chords inside the subtree" flag per
/// chord endpoint.
fn entry_index(dir: usize, du: usize, dv: usize) -> usize {
    dir * 4 + du * 2 + dv
}

#[derive(Debug, Clone)]
struct DpNode {
    parent_chord: Option<Edge>,
    children: Vec<(usize, Edge)>,
    /// for each of the 8 entries: chosen child entry indices, in child order
    witness: [Option<Vec<usize>>; 8],
}

/// Root used by the solver and the embedder: the unique fully chorded K4
/// node when there is exactly one, otherwise node 0.
pub fn canonical_root(t: &ConstructionTree) -> usize {
    match fully_chorded_k4s(t).as_slice() {
        [single] => *single,
        _ => 0,
    }
}

/// Decides whether the tree admits a valid orientation and reconstructs one
/// deterministic witness when it does.
///
/// For every non-root node with parent chord `{u,v}` the table stores, per
/// direction of the chord and per flag pair, whether the subtree including
/// the parent chord can be oriented so that all subtree vertices are valid
/// and `u` (resp. `v`) has incoming subtree chords other than the parent
/// chord exactly when its flag is set. Two incoming chords at a vertex may
/// only be combined when they are two triangle edges of a K3 node, or when
/// one is a child chord whose own entry already certified the pairing with
/// its deeper partner.
pub fn solve_dp(t: &ConstructionTree) -> Option<ChordOrientation> {
    let n = t.nodes.len();
    if n == 0 {
        return Some(ChordOrientation::new());
    }
    let bfs = t.bfs_from(canonical_root(t));
    let root = bfs.root;
    let order = &bfs.order;
    let mut dp: Vec<DpNode> = (0..n)
        .map(|i| DpNode {
            parent_chord: bfs.parent[i].map(|(_, c)| c),
            children: bfs.children[i].clone(),
            witness: Default::default(),
        })
        .collect();

    // process leaves upward
    for &node in order.iter().rev() {
        if node == root {
            continue;
        }
        let chord = dp[node].parent_chord.unwrap();
        let children = dp[node].children.clone();
        let mut table: [Option<Vec<usize>>; 8] = Default::default();
        for_each_combo(&dp, &children, &mut |child_entries| {
            for dir in 0..2 {
                let target = if dir == 0 { chord.u() } else { chord.v() };
                if let Some((du, dv)) =
                    check_node(t, node, Some((chord, target)), &children, child_entries)
                {
                    let idx = entry_index(dir, du, dv);
                    if table[idx].is_none() {
                        table[idx] = Some(child_entries.to_vec());
                    }
                }
            }
        });
        dp[node].witness = table;
        if dp[node].witness.iter().all(|w| w.is_none()) {
            return None;
        }
    }

    // root combination
    let children = dp[root].children.clone();
    let mut root_choice: Option<Vec<usize>> = None;
    for_each_combo(&dp, &children, &mut |child_entries| {
        if root_choice.is_some() {
            return;
        }
        if check_node(t, root, None, &children, child_entries).is_some() {
            root_choice = Some(child_entries.to_vec());
        }
    });
    let root_choice = root_choice?;

    // walk the witnesses down, fixing each chord's direction
    let mut orientation = ChordOrientation::new();
    let mut stack: Vec<(usize, Vec<usize>)> = vec![(root, root_choice)];
    while let Some((node, entries)) = stack.pop() {
        for (ci, &(child, chord)) in dp[node].children.iter().enumerate() {
            let e = entries[ci];
            let dir = e / 4;
            let target = if dir == 0 { chord.u() } else { chord.v() };
            orientation.insert(chord, target);
            let deeper = dp[child].witness[e]
                .clone()
                .expect("witness entry recorded during the upward pass");
            stack.push((child, deeper));
        }
    }
    debug_assert_eq!(orientation.len(), t.links.len());
    Some(orientation)
}

/// Iterates the cartesian product of the children's true entries, in
/// ascending entry order (direction toward the smaller endpoint first).
fn for_each_combo(dp: &[DpNode], children: &[(usize, Edge)], f: &mut dyn FnMut(&[usize])) {
    let lists: Vec<Vec<usize>> = children
        .iter()
        .map(|&(c, _)| {
            (0..8)
                .filter(|&i| dp[c].witness[i].is_some())
                .collect::<Vec<usize>>()
        })
        .collect();
    if lists.iter().any(|l| l.is_empty()) {
        return;
    }
    let mut picks = vec![0usize; lists.len()];
    loop {
        let current: Vec<usize> = picks.iter().enumerate().map(|(i, &p)| lists[i][p]).collect();
        f(&current);
        let mut i = 0;
        loop {
            if i == picks.len() {
                return;
            }
            picks[i] += 1;
            if picks[i] < lists[i].len() {
                break;
            }
            picks[i] = 0;
            i += 1;
        }
    }
}

/// Validates the three triangle vertices of `node` for one combination of
/// the parent-chord direction and child entries; returns the upward flags
/// `(d_u, d_v)` of the parent chord when valid.
fn check_node(
    t: &ConstructionTree,
    node: usize,
    parent: Option<(Edge, Vertex)>,
    children: &[(usize, Edge)],
    child_entries: &[usize],
) -> Option<(usize, usize)> {
    let is_k3 = t.nodes[node].kind == NodeKind::K3;
    let triangle = t.nodes[node].triangle;

    // for the upward flags
    let mut flag_u = 0usize;
    let mut flag_v = 0usize;

    for &x in &triangle {
        // visible incoming chords at x: the parent chord and child chords
        let mut visible_parent = false;
        let mut visible_children: Vec<usize> = Vec::new(); // child slots
        let mut deep_children: Vec<usize> = Vec::new();
        if let Some((pc, target)) = parent {
            if pc.contains(x) && target == x {
                visible_parent = true;
            }
        }
        for (ci, &(_, chord)) in children.iter().enumerate() {
            if !chord.contains(x) {
                continue;
            }
            let e = child_entries[ci];
            let dir = e / 4;
            let target = if dir == 0 { chord.u() } else { chord.v() };
            if target == x {
                visible_children.push(ci);
            }
            let flag = if x == chord.u() {
                (e / 2) % 2
            } else {
                e % 2
            };
            if flag == 1 {
                deep_children.push(ci);
            }
        }
        let total =
            visible_parent as usize + visible_children.len() + deep_children.len();
        if total > 2 {
            return None;
        }
        if total == 2 {
            let ok = if visible_parent && visible_children.len() == 1 && deep_children.is_empty()
            {
                // parent chord and a child chord meet in this node's face
                is_k3
            } else if visible_children.len() == 2 && !visible_parent && deep_children.is_empty() {
                is_k3
            } else if visible_children.len() == 1
                && deep_children.len() == 1
                && !visible_parent
            {
                // a child chord paired with that same child's deeper
                // incoming edge; the child's entry certified the pairing
                visible_children[0] == deep_children[0]
            } else {
                // parent + deep, or deep flags from two different subtrees:
                // the edges can never bound a common face
                false
            };
            if !ok {
                return None;
            }
        }
        if let Some((pc, _)) = parent {
            let non_parent = visible_children.len() + deep_children.len();
            if pc.contains(x) && non_parent > 0 {
                if x == pc.u() {
                    flag_u = 1;
                } else {
                    flag_v = 1;
                }
            }
        }
    }
    Some((flag_u, flag_v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::recognize::{build_construction_tree, recognize};

    fn fan(n: usize) -> Graph {
        let mut es = Vec::new();
        for i in 1..n {
            es.push((0, i));
        }
        for i in 1..n - 1 {
            es.push((i, i + 1));
        }
        Graph::build(n, &es).unwrap()
    }

    fn k4_star() -> Graph {
        Graph::build(
            7,
            &[
                (0, 1),
                (1, 2),
                (0, 2),
                (0, 3),
                (1, 3),
                (2, 3),
                (0, 4),
                (1, 4),
                (1, 5),
                (2, 5),
                (2, 6),
                (0, 6),
            ],
        )
        .unwrap()
    }

    /// Three 4-cliques in a path, every remaining 4-clique triangle edge
    /// padded with a glued triangle, so each K4 node has tree-degree 3.
    pub fn triple_k4_gadget() -> Graph {
        // K4 triangles (0,1,2), (1,2,3), (2,3,4); interiors 5, 6, 7
        let mut es = vec![
            (0, 1),
            (0, 2),
            (1, 2),
            (1, 3),
            (2, 3),
            (2, 4),
            (3, 4),
            (0, 5),
            (1, 5),
            (2, 5),
            (1, 6),
            (2, 6),
            (3, 6),
            (2, 7),
            (3, 7),
            (4, 7),
        ];
        // pads on the five non-shared triangle edges
        let pads = [(0, 1), (0, 2), (1, 3), (2, 4), (3, 4)];
        let mut next = 8;
        for (a, b) in pads {
            es.push((a, next));
            es.push((b, next));
            next += 1;
        }
        Graph::build(next, &es).unwrap()
    }

    #[test]
    fn validate_k4_star_cyclic_and_bad() {
        let ic = recognize(&k4_star()).unwrap();
        // cyclic orientation of the K4's chords (0,1),(1,2),(0,2)
        let mut o = ChordOrientation::new();
        o.insert(Edge::new(0, 1), 1);
        o.insert(Edge::new(1, 2), 2);
        o.insert(Edge::new(0, 2), 0);
        assert!(validate_orientation(&ic, &o).is_ok());

        // two chords into vertex 0: the 4-clique's interior vertex
        // separates their faces
        let mut bad = ChordOrientation::new();
        bad.insert(Edge::new(0, 1), 0);
        bad.insert(Edge::new(0, 2), 0);
        bad.insert(Edge::new(1, 2), 2);
        match validate_orientation(&ic, &bad) {
            Err(OrientError::UnsharedFace { vertex, .. }) => assert_eq!(vertex, 0),
            other => panic!("expected unshared-face violation, got {other:?}"),
        }
    }

    #[test]
    fn validate_empty_orientation_on_k3() {
        let ic = recognize(&Graph::build(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()).unwrap();
        assert!(validate_orientation(&ic, &ChordOrientation::new()).is_ok());
    }

    #[test]
    fn validate_rejects_domain_mismatch() {
        let ic = recognize(&fan(6)).unwrap();
        let o = ChordOrientation::new();
        assert!(matches!(
            validate_orientation(&ic, &o),
            Err(OrientError::DomainMismatch(_))
        ));
    }

    #[test]
    fn dp_fan_succeeds_and_validates() {
        let ic = recognize(&fan(6)).unwrap();
        let t = build_construction_tree(&ic);
        let o = solve_dp(&t).expect("fan admits an orientation");
        assert!(validate_orientation(&ic, &o).is_ok());
    }

    #[test]
    fn dp_single_k3_empty() {
        let ic = recognize(&Graph::build(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()).unwrap();
        let t = build_construction_tree(&ic);
        assert_eq!(solve_dp(&t), Some(ChordOrientation::new()));
    }

    #[test]
    fn dp_triple_k4_gadget_unsatisfiable() {
        let g = triple_k4_gadget();
        let ic = recognize(&g).unwrap();
        let t = build_construction_tree(&ic);
        assert_eq!(t.nodes.iter().filter(|n| n.kind == NodeKind::K4).count(), 3);
        assert!(!at_most_one_fully_chorded_k4(&t));
        assert_eq!(solve_dp(&t), None);
        assert_eq!(enumerate_exists(&ic, 20), Ok(false));
    }

    #[test]
    fn greedy_fan_validates() {
        let ic = recognize(&fan(6)).unwrap();
        let o = greedy_outerplanar(&ic).unwrap();
        assert!(validate_orientation(&ic, &o).is_ok());
    }

    #[test]
    fn greedy_k3_empty() {
        let ic = recognize(&Graph::build(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()).unwrap();
        assert_eq!(greedy_outerplanar(&ic).unwrap(), ChordOrientation::new());
    }

    #[test]
    fn greedy_rejects_k4() {
        let g = Graph::build(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let ic = recognize(&g).unwrap();
        assert_eq!(greedy_outerplanar(&ic), Err(OrientError::NotOuterplanar));
    }

    #[test]
    fn oracle_fan_true() {
        let ic = recognize(&fan(6)).unwrap();
        assert_eq!(enumerate_exists(&ic, 20), Ok(true));
    }

    #[test]
    fn oracle_k4_star_exactly_two_cycles() {
        let ic = recognize(&k4_star()).unwrap();
        assert_eq!(enumerate_count(&ic, 20), Ok(2));
        let t = build_construction_tree(&ic);
        assert!(at_most_one_fully_chorded_k4(&t));
        let o = solve_dp(&t).expect("single fully chorded K4 is orientable");
        assert!(validate_orientation(&ic, &o).is_ok());
        // the three chords form a directed cycle
        let targets: Vec<Vertex> = o.values().copied().collect();
        let mut sorted = targets.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 3, "each corner has exactly one incoming chord");
    }

    #[test]
    fn oracle_bound_respected() {
        let ic = recognize(&fan(30)).unwrap();
        assert!(matches!(
            enumerate_exists(&ic, 20),
            Err(OrientError::TooManyChords(27, 20))
        ));
    }

    #[test]
    fn dp_two_k4s_sharing_edge() {
        let g = Graph::build(
            6,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 2),
                (1, 3),
                (2, 3),
                (2, 4),
                (2, 5),
                (3, 4),
                (3, 5),
                (4, 5),
            ],
        )
        .unwrap();
        let ic = recognize(&g).unwrap();
        let t = build_construction_tree(&ic);
        assert!(at_most_one_fully_chorded_k4(&t));
        let o = solve_dp(&t).expect("two glued 4-cliques are orientable");
        assert!(validate_orientation(&ic, &o).is_ok());
        assert_eq!(enumerate_exists(&ic, 20), Ok(true));
    }
}
