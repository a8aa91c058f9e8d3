//! Deterministic instance generators. Every family is reproducible from
//! (family, size, seed); tree-based families also return the ground-truth
//! construction tree they were grown from.

use oor_core::graph::{Edge, Graph};
use oor_core::recognize::{ConstructionTree, NodeKind, TreeLink, TreeNode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Fan,
    RandomMaximalOuterplanar,
    K4Chain,
    K4Star,
    TripleK4Gadget,
    Octahedron,
    RandomConstructionTree,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Fan,
        Family::RandomMaximalOuterplanar,
        Family::K4Chain,
        Family::K4Star,
        Family::TripleK4Gadget,
        Family::Octahedron,
        Family::RandomConstructionTree,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Fan => "fan",
            Family::RandomMaximalOuterplanar => "random_maximal_outerplanar",
            Family::K4Chain => "k4_chain",
            Family::K4Star => "k4_star",
            Family::TripleK4Gadget => "triple_k4_gadget",
            Family::Octahedron => "octahedron",
            Family::RandomConstructionTree => "random_construction_tree",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        Family::ALL.iter().copied().find(|f| f.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub family: Family,
    pub size: usize,
    pub seed: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("family {0} needs size >= {1}, got {2}")]
    SizeTooSmall(&'static str, usize, usize),
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: Graph,
    /// ground truth for tree-based families
    pub tree: Option<ConstructionTree>,
}

pub fn generate(spec: &InstanceSpec) -> Result<Instance, GenError> {
    match spec.family {
        Family::Fan => fan(spec.size).map(|g| Instance {
            graph: g,
            tree: None,
        }),
        Family::RandomMaximalOuterplanar => {
            random_maximal_outerplanar(spec.size, spec.seed).map(|g| Instance {
                graph: g,
                tree: None,
            })
        }
        Family::K4Chain => k4_chain(spec.size),
        Family::K4Star => Ok(k4_star()),
        Family::TripleK4Gadget => Ok(triple_k4_gadget()),
        Family::Octahedron => Ok(Instance {
            graph: octahedron(),
            tree: None,
        }),
        Family::RandomConstructionTree => random_construction_tree(spec.size, spec.seed),
    }
}

/// Apex 0 joined to a path 1..n-1.
pub fn fan(n: usize) -> Result<Graph, GenError> {
    if n < 3 {
        return Err(GenError::SizeTooSmall("fan", 3, n));
    }
    let mut es = Vec::with_capacity(2 * n - 3);
    for i in 1..n {
        es.push((0, i));
    }
    for i in 1..n - 1 {
        es.push((i, i + 1));
    }
    Ok(Graph::build(n, &es).expect("fan edges are simple"))
}

pub fn octahedron() -> Graph {
    let mut es = Vec::new();
    for u in 0..6 {
        for v in (u + 1)..6 {
            if (u, v) != (0, 3) && (u, v) != (1, 4) && (u, v) != (2, 5) {
                es.push((u, v));
            }
        }
    }
    Graph::build(6, &es).expect("octahedron is simple")
}

/// Uniformly random triangulation of a convex n-gon: a uniform binary tree
/// with n-1 leaves is grown leaf by leaf (each step grafts a fresh leaf at
/// a uniformly chosen node), then read back as a triangulation.
pub fn random_maximal_outerplanar(n: usize, seed: u64) -> Result<Graph, GenError> {
    if n < 3 {
        return Err(GenError::SizeTooSmall("random_maximal_outerplanar", 3, n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let leaves = n - 1;

    // binary tree as child pairs; node 0 is the root
    #[derive(Clone, Copy)]
    struct Node {
        children: Option<(usize, usize)>,
        parent: usize,
    }
    let mut nodes = vec![Node {
        children: None,
        parent: usize::MAX,
    }];
    for _ in 1..leaves {
        let x = rng.gen_range(0..nodes.len());
        let left = rng.gen_bool(0.5);
        let internal = nodes.len();
        let leaf = nodes.len() + 1;
        nodes.push(Node {
            children: None,
            parent: usize::MAX,
        }); // placeholder, fixed below
        nodes.push(Node {
            children: None,
            parent: internal,
        });
        let parent_of_x = nodes[x].parent;
        nodes[internal] = Node {
            children: Some(if left { (leaf, x) } else { (x, leaf) }),
            parent: parent_of_x,
        };
        nodes[x].parent = internal;
        if parent_of_x != usize::MAX {
            let (a, b) = nodes[parent_of_x].children.expect("parent is internal");
            let fixed = if a == x { (internal, b) } else { (a, internal) };
            nodes[parent_of_x].children = Some(fixed);
        }
    }
    let root = {
        let mut r = 0;
        while nodes[r].parent != usize::MAX {
            r = nodes[r].parent;
        }
        r
    };

    // leaf counts, then triangles: the subtree over polygon arc [i, j]
    // splits at i + leaves(left child)
    let mut leaf_count = vec![0usize; nodes.len()];
    fn count(nodes: &[(Option<(usize, usize)>, usize)], at: usize, out: &mut [usize]) -> usize {
        let c = match nodes[at].0 {
            None => 1,
            Some((l, r)) => count(nodes, l, out) + count(nodes, r, out),
        };
        out[at] = c;
        c
    }
    let flat: Vec<(Option<(usize, usize)>, usize)> =
        nodes.iter().map(|n| (n.children, n.parent)).collect();
    count(&flat, root, &mut leaf_count);

    let mut edges: std::collections::BTreeSet<Edge> = std::collections::BTreeSet::new();
    for i in 0..n {
        edges.insert(Edge::new(i, (i + 1) % n));
    }
    let mut stack = vec![(root, 0usize, n - 1)];
    while let Some((at, lo, hi)) = stack.pop() {
        if let Some((l, r)) = flat[at].0 {
            let split = lo + leaf_count[l];
            edges.insert(Edge::new(lo, split));
            edges.insert(Edge::new(split, hi));
            edges.insert(Edge::new(lo, hi));
            stack.push((l, lo, split));
            stack.push((r, split, hi));
        }
    }
    let list: Vec<(usize, usize)> = edges.iter().map(|e| e.endpoints()).collect();
    let g = Graph::build(n, &list).expect("triangulation is simple");
    debug_assert_eq!(g.edge_count(), 2 * n - 3);
    Ok(g)
}

/// `size` 4-cliques glued edge to edge in a path. The spine is the vertex
/// path 0..size+1; clique i has triangle (i, i+1, i+2) and its own interior
/// vertex.
pub fn k4_chain(size: usize) -> Result<Instance, GenError> {
    if size < 1 {
        return Err(GenError::SizeTooSmall("k4_chain", 1, size));
    }
    let spine = size + 2;
    let mut edges = Vec::new();
    let mut nodes = Vec::new();
    let mut links = Vec::new();
    for i in 0..size {
        let tri = [i, i + 1, i + 2];
        let m = spine + i;
        for a in 0..3 {
            edges.push((tri[a], tri[(a + 1) % 3]));
            edges.push((tri[a], m));
        }
        nodes.push(TreeNode {
            kind: NodeKind::K4,
            triangle: tri,
            inner: Some(m),
        });
        if i > 0 {
            links.push(TreeLink {
                a: i - 1,
                b: i,
                chord: Edge::new(i, i + 1),
            });
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let graph = Graph::build(spine + size, &edges).expect("chain is simple");
    Ok(Instance {
        graph,
        tree: Some(ConstructionTree { nodes, links }),
    })
}

/// One 4-clique with a triangle glued onto each of its three outer edges,
/// so all three of its triangle edges are chords.
pub fn k4_star() -> Instance {
    let edges = vec![
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
    ];
    let graph = Graph::build(7, &edges).expect("star is simple");
    let nodes = vec![
        TreeNode {
            kind: NodeKind::K4,
            triangle: [0, 1, 2],
            inner: Some(3),
        },
        TreeNode {
            kind: NodeKind::K3,
            triangle: [0, 4, 1],
            inner: None,
        },
        TreeNode {
            kind: NodeKind::K3,
            triangle: [1, 5, 2],
            inner: None,
        },
        TreeNode {
            kind: NodeKind::K3,
            triangle: [2, 6, 0],
            inner: None,
        },
    ];
    let links = vec![
        TreeLink {
            a: 0,
            b: 1,
            chord: Edge::new(0, 1),
        },
        TreeLink {
            a: 0,
            b: 2,
            chord: Edge::new(1, 2),
        },
        TreeLink {
            a: 0,
            b: 3,
            chord: Edge::new(0, 2),
        },
    ];
    Instance {
        graph,
        tree: Some(ConstructionTree { nodes, links }),
    }
}

/// Three 4-cliques in a path with every remaining 4-clique triangle edge
/// padded by a glued triangle; all three 4-cliques end up with all their
/// triangle edges as chords, which is unsatisfiable.
pub fn triple_k4_gadget() -> Instance {
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
    let pads = [(0, 1), (0, 2), (1, 3), (2, 4), (3, 4)];
    let mut next = 8;
    for (a, b) in pads {
        es.push((a, next));
        es.push((b, next));
        next += 1;
    }
    let graph = Graph::build(next, &es).expect("gadget is simple");
    Instance {
        graph,
        tree: None,
    }
}

/// Random construction tree: grows K3/K4 nodes onto uniformly chosen free
/// triangle edges; returns both the merged graph and the tree.
pub fn random_construction_tree(nodes_count: usize, seed: u64) -> Result<Instance, GenError> {
    if nodes_count < 1 {
        return Err(GenError::SizeTooSmall("random_construction_tree", 1, nodes_count));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k4_bias = 0.4;

    let mut edges: Vec<(usize, usize)> = Vec::new();
    // free triangle edges, tagged with the node they belong to
    let mut free_edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut nodes: Vec<TreeNode> = Vec::new();
    let mut links: Vec<TreeLink> = Vec::new();
    let mut next_vertex = 3;

    edges.extend([(0, 1), (1, 2), (0, 2)]);
    let root_k4 = rng.gen_bool(k4_bias);
    let root_inner = if root_k4 {
        edges.extend([(0, 3), (1, 3), (2, 3)]);
        next_vertex = 4;
        Some(3)
    } else {
        None
    };
    nodes.push(TreeNode {
        kind: if root_k4 { NodeKind::K4 } else { NodeKind::K3 },
        triangle: [0, 1, 2],
        inner: root_inner,
    });
    for (a, b) in [(0, 1), (1, 2), (0, 2)] {
        free_edges.push((a, b, 0));
    }

    for _ in 1..nodes_count {
        let i = rng.gen_range(0..free_edges.len());
        let (u, v, parent) = free_edges.swap_remove(i);
        let w = next_vertex;
        next_vertex += 1;
        edges.push((u, w));
        edges.push((v, w));
        let id = nodes.len();
        let inner = if rng.gen_bool(k4_bias) {
            let m = next_vertex;
            next_vertex += 1;
            edges.extend([(u, m), (v, m), (w, m)]);
            Some(m)
        } else {
            None
        };
        nodes.push(TreeNode {
            kind: if inner.is_some() {
                NodeKind::K4
            } else {
                NodeKind::K3
            },
            triangle: [u, v, w],
            inner,
        });
        links.push(TreeLink {
            a: parent,
            b: id,
            chord: Edge::new(u, v),
        });
        free_edges.push((u, w, id));
        free_edges.push((v, w, id));
    }
    let graph = Graph::build(next_vertex, &edges).expect("tree growth is simple");
    Ok(Instance {
        graph,
        tree: Some(ConstructionTree { nodes, links }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use oor_core::orient::enumerate_exists;
    use oor_core::recognize::{build_construction_tree, merge_construction_tree, recognize};

    #[test]
    fn fan_counts() {
        let g = fan(6).unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(g.edge_count(), 9);
    }

    #[test]
    fn octahedron_is_4_regular() {
        let g = octahedron();
        assert_eq!(g.edge_count(), 12);
        assert!((0..6).all(|v| g.degree(v) == 4));
    }

    #[test]
    fn mop_is_maximal_outerplanar_across_seeds() {
        for seed in 0..30 {
            let n = 3 + (seed as usize * 7) % 60;
            let g = random_maximal_outerplanar(n, seed).unwrap();
            assert_eq!(g.edge_count(), 2 * n - 3, "seed {seed}");
            let ic = recognize(&g).unwrap();
            assert!(ic.inner_vertices.is_empty());
        }
    }

    #[test]
    fn generation_is_deterministic() {
        for family in Family::ALL {
            let spec = InstanceSpec {
                family,
                size: 6,
                seed: 42,
            };
            let a = generate(&spec).unwrap();
            let b = generate(&spec).unwrap();
            assert_eq!(a.graph.edges(), b.graph.edges(), "{family:?}");
        }
    }

    #[test]
    fn tree_families_merge_back() {
        for spec in [
            InstanceSpec {
                family: Family::K4Chain,
                size: 3,
                seed: 0,
            },
            InstanceSpec {
                family: Family::K4Star,
                size: 0,
                seed: 0,
            },
            InstanceSpec {
                family: Family::RandomConstructionTree,
                size: 8,
                seed: 11,
            },
        ] {
            let inst = generate(&spec).unwrap();
            let t = inst.tree.expect("tree-based family");
            let merged = merge_construction_tree(&t);
            assert_eq!(merged.edges(), inst.graph.edges(), "{:?}", spec.family);
            // recognition rebuilds a tree with the same structure
            let ic = recognize(&inst.graph).unwrap();
            let rebuilt = build_construction_tree(&ic);
            let kinds = |t: &ConstructionTree| {
                let mut k3 = 0;
                let mut k4 = 0;
                for n in &t.nodes {
                    match n.kind {
                        NodeKind::K3 => k3 += 1,
                        NodeKind::K4 => k4 += 1,
                    }
                }
                (k3, k4)
            };
            assert_eq!(kinds(&t), kinds(&rebuilt));
            assert_eq!(t.chords(), rebuilt.chords());
        }
    }

    #[test]
    fn gadget_is_unsatisfiable() {
        let inst = triple_k4_gadget();
        let ic = recognize(&inst.graph).unwrap();
        assert_eq!(enumerate_exists(&ic, 20), Ok(false));
    }
}
