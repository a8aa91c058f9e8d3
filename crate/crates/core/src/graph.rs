//! Simple undirected graphs and combinatorial plane embeddings.
//!
//! Vertices are dense indices `0..n`. Edges are canonical ordered pairs so
//! that the same pair always serializes and hashes identically. An
//! [`EmbeddedGraph`] couples a graph with a rotation system (counterclockwise
//! neighbor order per vertex) and a designated outer face; faces are derived
//! by the usual next-edge traversal and checked against Euler's formula.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

pub type Vertex = usize;

/// Undirected edge with the smaller endpoint stored first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(Vertex, Vertex);

impl Edge {
    pub fn new(u: Vertex, v: Vertex) -> Self {
        if u <= v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn u(&self) -> Vertex {
        self.0
    }

    pub fn v(&self) -> Vertex {
        self.1
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.0, self.1)
    }

    pub fn contains(&self, x: Vertex) -> bool {
        self.0 == x || self.1 == x
    }

    /// The endpoint that is not `x`. Panics if `x` is not an endpoint.
    pub fn other(&self, x: Vertex) -> Vertex {
        if self.0 == x {
            self.1
        } else {
            assert_eq!(self.1, x, "vertex {x} not on edge {self:?}");
            self.0
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop ({0},{0}) is not allowed")]
    SelfLoop(Vertex),
    #[error("duplicate edge ({0},{1})")]
    DuplicateEdge(Vertex, Vertex),
    #[error("edge ({0},{1}) references a vertex out of range for n={2}")]
    OutOfRange(Vertex, Vertex, usize),
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<Vertex>>,
}

impl Graph {
    /// Validates and deduplicates an edge list. Rejections name the
    /// offending pair.
    pub fn build(n: usize, edge_list: &[(Vertex, Vertex)]) -> Result<Graph, GraphError> {
        let mut edges = Vec::with_capacity(edge_list.len());
        for &(u, v) in edge_list {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if u >= n || v >= n {
                return Err(GraphError::OutOfRange(u, v, n));
            }
            edges.push(Edge::new(u, v));
        }
        edges.sort();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.0].push(e.1);
            adj[e.1].push(e.0);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, edges, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical sorted order; the position of an edge in this
    /// slice is its stable id.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        if u >= self.n || v >= self.n || u == v {
            return false;
        }
        self.edges.binary_search(&Edge::new(u, v)).is_ok()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        0..self.n
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// True iff the graph is connected, has at least 3 vertices and no cut
    /// vertex.
    pub fn is_biconnected(&self) -> bool {
        self.n >= 3 && self.is_connected() && self.find_cut_vertex().is_none()
    }

    /// Some articulation vertex, if one exists. Iterative lowpoint DFS so
    /// deep path-like graphs do not overflow the stack.
    pub fn find_cut_vertex(&self) -> Option<Vertex> {
        if self.n == 0 {
            return None;
        }
        let mut disc = vec![usize::MAX; self.n];
        let mut low = vec![usize::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut timer = 0;
        // stack entries: (vertex, next neighbor index to explore)
        let mut stack: Vec<(Vertex, usize)> = vec![(0, 0)];
        disc[0] = 0;
        low[0] = 0;
        timer += 1;
        let mut root_children = 0;
        while let Some(top) = stack.last_mut() {
            let v = top.0;
            if top.1 < self.adj[v].len() {
                let w = self.adj[v][top.1];
                top.1 += 1;
                if disc[w] == usize::MAX {
                    parent[w] = v;
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    if v == 0 {
                        root_children += 1;
                    }
                    stack.push((w, 0));
                } else if w != parent[v] {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if p != 0 && low[v] >= disc[p] {
                        return Some(p);
                    }
                }
            }
        }
        if root_children > 1 {
            return Some(0);
        }
        None
    }

    /// Common neighbors of `u` and `v`, iterating the smaller adjacency list.
    pub fn common_neighbors(&self, u: Vertex, v: Vertex) -> Vec<Vertex> {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a]
            .iter()
            .copied()
            .filter(|&w| self.adj[b].binary_search(&w).is_ok())
            .collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("rotation has {0} lists, expected one per vertex ({1})")]
    RotationLength(usize, usize),
    #[error("rotation at vertex {0} is not a permutation of its neighbors")]
    RotationMismatch(Vertex),
    #[error("outer face side ({0},{1}) is not a directed edge of the graph")]
    BadOuterSide(Vertex, Vertex),
    #[error("graph is not connected")]
    NotConnected,
    #[error("face traversal violates Euler's formula: V={v} E={e} F={f}")]
    NotPlanarRotation { v: usize, e: usize, f: usize },
}

/// One face of an embedding: the cyclic sequence of directed edge sides with
/// the face on their left. The boundary is rotated so its lexicographically
/// smallest side comes first, which gives faces a canonical identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub boundary: Vec<(Vertex, Vertex)>,
    pub is_outer: bool,
}

impl Face {
    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }

    /// Vertices in boundary order (with repetitions at cut vertices).
    pub fn vertex_walk(&self) -> Vec<Vertex> {
        self.boundary.iter().map(|&(u, _)| u).collect()
    }

    /// Distinct vertices on this face.
    pub fn vertex_set(&self) -> Vec<Vertex> {
        let mut vs = self.vertex_walk();
        vs.sort_unstable();
        vs.dedup();
        vs
    }
}

/// A graph together with a rotation system and a designated outer face.
///
/// Faces are traversed with the face on the left of each directed edge: the
/// side after `(u,v)` is `(v,w)` where `w` follows `u` in the
/// counterclockwise rotation at `v`.
#[derive(Debug, Clone)]
pub struct EmbeddedGraph {
    graph: Graph,
    rotation: Vec<Vec<Vertex>>,
    faces: Vec<Face>,
    outer_face: usize,
    side_face: HashMap<(Vertex, Vertex), usize>,
}

impl EmbeddedGraph {
    /// Validates the rotation system, traverses all faces and designates the
    /// outer face as the one left of the directed side `outer_side`.
    pub fn new(
        graph: Graph,
        rotation: Vec<Vec<Vertex>>,
        outer_side: (Vertex, Vertex),
    ) -> Result<EmbeddedGraph, EmbeddingError> {
        if rotation.len() != graph.n() {
            return Err(EmbeddingError::RotationLength(rotation.len(), graph.n()));
        }
        for v in graph.vertices() {
            let mut sorted = rotation[v].clone();
            sorted.sort_unstable();
            if sorted != graph.adj[v] {
                return Err(EmbeddingError::RotationMismatch(v));
            }
        }
        if !graph.is_connected() {
            return Err(EmbeddingError::NotConnected);
        }
        if !graph.has_edge(outer_side.0, outer_side.1) {
            return Err(EmbeddingError::BadOuterSide(outer_side.0, outer_side.1));
        }

        // position of each neighbor inside the rotation, for O(1) next-side
        let mut pos: Vec<HashMap<Vertex, usize>> = Vec::with_capacity(graph.n());
        for v in graph.vertices() {
            pos.push(
                rotation[v]
                    .iter()
                    .enumerate()
                    .map(|(i, &w)| (w, i))
                    .collect(),
            );
        }
        // face on the left of each directed side: continue with the
        // predecessor of u in the ccw rotation at v
        let next = |u: Vertex, v: Vertex| -> (Vertex, Vertex) {
            let i = pos[v][&u];
            let len = rotation[v].len();
            let w = rotation[v][(i + len - 1) % len];
            (v, w)
        };

        let mut side_face: HashMap<(Vertex, Vertex), usize> = HashMap::new();
        let mut raw_faces: Vec<Vec<(Vertex, Vertex)>> = Vec::new();
        for e in graph.edges() {
            for start in [(e.0, e.1), (e.1, e.0)] {
                if side_face.contains_key(&start) {
                    continue;
                }
                let id = raw_faces.len();
                let mut boundary = Vec::new();
                let mut cur = start;
                loop {
                    side_face.insert(cur, id);
                    boundary.push(cur);
                    cur = next(cur.0, cur.1);
                    if cur == start {
                        break;
                    }
                }
                raw_faces.push(boundary);
            }
        }

        let v = graph.n();
        let e = graph.edge_count();
        let f = raw_faces.len();
        if v + f != e + 2 {
            return Err(EmbeddingError::NotPlanarRotation { v, e, f });
        }

        // canonical rotation of each boundary + canonical face order
        let mut canon: Vec<Vec<(Vertex, Vertex)>> = raw_faces
            .into_iter()
            .map(|b| {
                let k = b
                    .iter()
                    .enumerate()
                    .min_by_key(|&(_, s)| s)
                    .map(|(i, _)| i)
                    .unwrap();
                let mut r = b[k..].to_vec();
                r.extend_from_slice(&b[..k]);
                r
            })
            .collect();
        canon.sort();
        let mut side_face = HashMap::new();
        for (id, b) in canon.iter().enumerate() {
            for &s in b {
                side_face.insert(s, id);
            }
        }
        let outer_face = side_face[&outer_side];
        let faces = canon
            .into_iter()
            .enumerate()
            .map(|(id, boundary)| Face {
                boundary,
                is_outer: id == outer_face,
            })
            .collect();

        Ok(EmbeddedGraph {
            graph,
            rotation,
            faces,
            outer_face,
            side_face,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn rotation(&self) -> &[Vec<Vertex>] {
        &self.rotation
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn outer_face(&self) -> usize {
        self.outer_face
    }

    /// Face lying to the left of the directed side `(u,v)`.
    pub fn face_left_of(&self, u: Vertex, v: Vertex) -> usize {
        self.side_face[&(u, v)]
    }

    /// The two faces incident to an undirected edge (equal only for bridges).
    pub fn faces_of_edge(&self, e: Edge) -> (usize, usize) {
        (
            self.face_left_of(e.0, e.1),
            self.face_left_of(e.1, e.0),
        )
    }

    /// True iff the edge lies on the outer face.
    pub fn is_outer_edge(&self, e: Edge) -> bool {
        let (a, b) = self.faces_of_edge(e);
        a == self.outer_face || b == self.outer_face
    }

    /// Vertices incident to the outer face.
    pub fn outer_vertices(&self) -> Vec<Vertex> {
        self.faces[self.outer_face].vertex_set()
    }
}

/// Standalone face computation, exposed for callers that only need the face
/// list of a rotation system.
pub fn compute_faces(
    graph: &Graph,
    rotation: &[Vec<Vertex>],
    outer_side: (Vertex, Vertex),
) -> Result<Vec<Face>, EmbeddingError> {
    let eg = EmbeddedGraph::new(graph.clone(), rotation.to_vec(), outer_side)?;
    Ok(eg.faces.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Graph {
        Graph::build(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn build_k3() {
        let g = k3();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 3);
        assert!(g.has_edge(2, 0));
    }

    #[test]
    fn build_rejects_duplicate() {
        let err = Graph::build(4, &[(0, 1), (0, 1)]).unwrap_err();
        assert_eq!(err, GraphError::DuplicateEdge(0, 1));
        // reversed duplicates collide on the canonical form as well
        let err = Graph::build(4, &[(0, 1), (1, 0)]).unwrap_err();
        assert_eq!(err, GraphError::DuplicateEdge(0, 1));
    }

    #[test]
    fn build_rejects_self_loop_and_range() {
        assert_eq!(
            Graph::build(3, &[(1, 1)]).unwrap_err(),
            GraphError::SelfLoop(1)
        );
        assert_eq!(
            Graph::build(3, &[(0, 3)]).unwrap_err(),
            GraphError::OutOfRange(0, 3, 3)
        );
    }

    pub(crate) fn octahedron_edges() -> Vec<(usize, usize)> {
        // 6 vertices, antipodal pairs (0,3), (1,4), (2,5) are the non-edges
        let mut es = Vec::new();
        for u in 0..6 {
            for v in (u + 1)..6 {
                if (u, v) != (0, 3) && (u, v) != (1, 4) && (u, v) != (2, 5) {
                    es.push((u, v));
                }
            }
        }
        es
    }

    #[test]
    fn build_octahedron() {
        let g = Graph::build(6, &octahedron_edges()).unwrap();
        assert_eq!(g.edge_count(), 12);
        for v in 0..6 {
            assert_eq!(g.degree(v), 4);
        }
    }

    #[test]
    fn biconnectivity_cases() {
        assert!(k3().is_biconnected());
        // path on 3 vertices: middle vertex cuts
        let path = Graph::build(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!path.is_biconnected());
        assert_eq!(path.find_cut_vertex(), Some(1));
        // two triangles sharing vertex 0
        let bowtie = Graph::build(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap();
        assert!(!bowtie.is_biconnected());
        assert_eq!(bowtie.find_cut_vertex(), Some(0));
    }

    #[test]
    fn faces_of_triangle() {
        let g = k3();
        let rotation = vec![vec![1, 2], vec![2, 0], vec![0, 1]];
        let eg = EmbeddedGraph::new(g, rotation, (1, 0)).unwrap();
        assert_eq!(eg.faces().len(), 2);
        let outer = &eg.faces()[eg.outer_face()];
        assert_eq!(outer.len(), 3);
        assert_eq!(eg.faces().iter().filter(|f| f.is_outer).count(), 1);
    }

    #[test]
    fn faces_of_k4() {
        // standard plane K4: vertex 3 inside triangle 0,1,2
        let g = Graph::build(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let rotation = vec![
            vec![1, 3, 2], // at 0
            vec![2, 3, 0], // at 1
            vec![0, 3, 1], // at 2
            vec![0, 1, 2], // at 3 (inner)
        ];
        let eg = EmbeddedGraph::new(g, rotation, (1, 0)).unwrap();
        assert_eq!(eg.faces().len(), 4);
        // face traversal by hand: all four faces are triangles
        assert!(eg.faces().iter().all(|f| f.len() == 3));
    }

    #[test]
    fn faces_of_quadrilateral_with_chord() {
        // square 0-1-2-3 with chord (0,2), convex drawing rotation
        let g = Graph::build(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let rotation = vec![
            vec![1, 2, 3], // at 0
            vec![2, 0],    // at 1
            vec![3, 0, 1], // at 2
            vec![0, 2],    // at 3
        ];
        let eg = EmbeddedGraph::new(g, rotation, (1, 0)).unwrap();
        assert_eq!(eg.faces().len(), 3);
        let outer = &eg.faces()[eg.outer_face()];
        assert_eq!(outer.len(), 4);
    }

    #[test]
    fn face_side_sum_is_twice_edges() {
        let g = Graph::build(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let rotation = vec![vec![1, 2, 3], vec![2, 0], vec![3, 0, 1], vec![0, 2]];
        let eg = EmbeddedGraph::new(g, rotation, (1, 0)).unwrap();
        let total: usize = eg.faces().iter().map(|f| f.len()).sum();
        assert_eq!(total, 2 * eg.graph().edge_count());
    }

    #[test]
    fn rejects_bad_rotation() {
        let g = k3();
        let rotation = vec![vec![1, 1], vec![2, 0], vec![0, 1]];
        assert!(matches!(
            EmbeddedGraph::new(g, rotation, (0, 1)),
            Err(EmbeddingError::RotationMismatch(0))
        ));
    }

    #[test]
    fn rejects_nonplanar_rotation() {
        // K4 with a rotation that yields a toroidal face structure
        let g = Graph::build(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let rotation = vec![
            vec![1, 2, 3],
            vec![2, 3, 0],
            vec![3, 0, 1],
            vec![0, 1, 2],
        ];
        assert!(matches!(
            EmbeddedGraph::new(g, rotation, (0, 1)),
            Err(EmbeddingError::NotPlanarRotation { .. })
        ));
    }

    #[test]
    fn face_computation_is_deterministic() {
        let g = Graph::build(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let rotation = vec![vec![1, 2, 3], vec![2, 0], vec![3, 0, 1], vec![0, 2]];
        let a = compute_faces(&g, &rotation, (1, 0)).unwrap();
        let b = compute_faces(&g, &rotation, (1, 0)).unwrap();
        assert_eq!(a, b);
    }
}
