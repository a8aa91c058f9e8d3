//! Recognition of biconnected graphs that can be embedded so that every
//! bounded face is a triangle and every cycle of length four or more has a
//! chord drawn inside it ("inner-chordal plane" graphs).
//!
//! The pipeline:
//!
//! 1. peel the interior candidates: vertices of degree 3 whose neighborhood
//!    is a triangle (each such vertex together with its neighborhood spans a
//!    4-clique, and exactly one vertex per 4-clique must end up interior);
//! 2. recognize the remaining core as a maximal outerplanar graph with a
//!    Hamiltonian outer cycle and a tree of triangular faces (the weak dual);
//! 3. re-insert the peeled vertices into their marked triangle faces and
//!    assemble a canonical embedding;
//! 4. read off the construction tree: triangle faces become K3 nodes, marked
//!    triangles with their interior vertex become K4 nodes, and tree links
//!    correspond one-to-one to the chords.
//!
//! Every accepted output is re-validated against the structural invariants
//! rather than assumed correct.

use crate::graph::{Edge, EmbeddedGraph, Graph, Vertex};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectKind {
    NotBiconnected,
    NotPlanarInnerChordal,
    InnerDegreeViolation,
    ChordlessCycle,
    NotMaximalOuterplanarCore,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Vertex(Vertex),
    Edge(Vertex, Vertex),
    Cycle(Vec<Vertex>),
    Triangle([Vertex; 3]),
    Note(String),
}

/// A checkable explanation of why recognition failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectReason {
    pub kind: RejectKind,
    pub witness: Witness,
}

impl RejectReason {
    fn new(kind: RejectKind, witness: Witness) -> Self {
        RejectReason { kind, witness }
    }
}

/// An accepted graph: a witness embedding in which all structural
/// invariants have been verified, plus the derived chord structure.
#[derive(Debug, Clone)]
pub struct InnerChordalGraph {
    pub embedded: EmbeddedGraph,
    /// Vertices not incident to the outer face, sorted.
    pub inner_vertices: Vec<Vertex>,
    /// Outer cycle in counterclockwise order, starting at the smallest
    /// outer vertex.
    pub outer_cycle: Vec<Vertex>,
    /// Inner edges whose endpoints both lie on the outer cycle, sorted.
    pub chords: Vec<Edge>,
}

impl InnerChordalGraph {
    pub fn graph(&self) -> &Graph {
        self.embedded.graph()
    }

    pub fn is_chord(&self, e: Edge) -> bool {
        self.chords.binary_search(&e).is_ok()
    }

    pub fn is_inner_vertex(&self, v: Vertex) -> bool {
        self.inner_vertices.binary_search(&v).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeKind {
    K3,
    K4,
}

/// One node of the construction tree: a triangle face or a 4-clique with a
/// recorded interior vertex. `triangle` is in counterclockwise order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub kind: NodeKind,
    pub triangle: [Vertex; 3],
    pub inner: Option<Vertex>,
}

impl TreeNode {
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut v = self.triangle.to_vec();
        if let Some(m) = self.inner {
            v.push(m);
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeLink {
    pub a: usize,
    pub b: usize,
    pub chord: Edge,
}

/// Tree of K3/K4 nodes glued along chords; merging the nodes back along the
/// shared chords reconstructs the accepted graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionTree {
    pub nodes: Vec<TreeNode>,
    pub links: Vec<TreeLink>,
}

impl ConstructionTree {
    /// Adjacency lists over node indices.
    pub fn adjacency(&self) -> Vec<Vec<(usize, Edge)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for l in &self.links {
            adj[l.a].push((l.b, l.chord));
            adj[l.b].push((l.a, l.chord));
        }
        adj
    }

    pub fn node_degree(&self, i: usize) -> usize {
        self.links.iter().filter(|l| l.a == i || l.b == i).count()
    }

    pub fn chords(&self) -> Vec<Edge> {
        let mut c: Vec<Edge> = self.links.iter().map(|l| l.chord).collect();
        c.sort();
        c
    }

    /// Breadth-first structure from `root`, children in ascending node id.
    pub fn bfs_from(&self, root: usize) -> BfsTree {
        let adj = self.adjacency();
        let n = self.nodes.len();
        let mut order = vec![root];
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut qi = 0;
        while qi < order.len() {
            let v = order[qi];
            qi += 1;
            let mut nbrs = adj[v].clone();
            nbrs.sort_by_key(|&(w, _)| w);
            for (w, chord) in nbrs {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((v, chord));
                    children[v].push((w, chord));
                    order.push(w);
                }
            }
        }
        BfsTree {
            root,
            order,
            parent,
            children,
        }
    }
}

/// Breadth-first view of a construction tree.
#[derive(Debug, Clone)]
pub struct BfsTree {
    pub root: usize,
    pub order: Vec<usize>,
    pub parent: Vec<Option<(usize, Edge)>>,
    pub children: Vec<Vec<(usize, Edge)>>,
}

/// Rebuilds the graph a construction tree describes by merging its nodes
/// along shared chords.
pub fn merge_construction_tree(t: &ConstructionTree) -> Graph {
    let mut edges = BTreeSet::new();
    let mut max_v = 0;
    for node in &t.nodes {
        let tri = node.triangle;
        for i in 0..3 {
            edges.insert(Edge::new(tri[i], tri[(i + 1) % 3]));
        }
        if let Some(m) = node.inner {
            for &x in &tri {
                edges.insert(Edge::new(m, x));
            }
            max_v = max_v.max(m);
        }
        max_v = max_v.max(*tri.iter().max().unwrap());
    }
    let list: Vec<(Vertex, Vertex)> = edges.iter().map(|e| e.endpoints()).collect();
    Graph::build(max_v + 1, &list).expect("construction tree nodes form a simple graph")
}

/// Result of peeling the interior candidates off a biconnected graph.
#[derive(Debug, Clone)]
pub struct Peeling {
    /// The core graph, relabeled to dense indices.
    pub core: Graph,
    /// Original vertex id of each core vertex.
    pub core_to_orig: Vec<Vertex>,
    /// Removed vertices with their marked neighbor triangles (original ids).
    pub removed: Vec<(Vertex, [Vertex; 3])>,
}

fn is_triangle(g: &Graph, vs: &[Vertex]) -> bool {
    vs.len() == 3
        && g.has_edge(vs[0], vs[1])
        && g.has_edge(vs[1], vs[2])
        && g.has_edge(vs[0], vs[2])
}

/// Interior candidates grouped by the 4-clique they span: a candidate is a
/// degree-3 vertex whose neighborhood is a triangle, and two candidates
/// belong to the same group exactly when they have the same closed
/// neighborhood.
fn candidate_groups(g: &Graph) -> Vec<Vec<Vertex>> {
    let mut groups: BTreeMap<Vec<Vertex>, Vec<Vertex>> = BTreeMap::new();
    for v in g.vertices() {
        if g.degree(v) == 3 && is_triangle(g, g.neighbors(v)) {
            let mut key = g.neighbors(v).to_vec();
            key.push(v);
            key.sort_unstable();
            groups.entry(key).or_default().push(v);
        }
    }
    groups
        .into_values()
        .map(|mut vs| {
            vs.sort_unstable();
            vs
        })
        .collect()
}

fn peel_with_choice(g: &Graph, chosen: &[Vertex]) -> Peeling {
    let removed_set: BTreeSet<Vertex> = chosen.iter().copied().collect();
    let mut removed = Vec::new();
    for &v in chosen {
        let mut tri = [0; 3];
        tri.copy_from_slice(g.neighbors(v));
        removed.push((v, tri));
    }
    let mut core_to_orig = Vec::new();
    let mut orig_to_core = vec![usize::MAX; g.n()];
    for v in g.vertices() {
        if !removed_set.contains(&v) {
            orig_to_core[v] = core_to_orig.len();
            core_to_orig.push(v);
        }
    }
    let mut edges = Vec::new();
    for e in g.edges() {
        let (u, v) = e.endpoints();
        if orig_to_core[u] != usize::MAX && orig_to_core[v] != usize::MAX {
            edges.push((orig_to_core[u], orig_to_core[v]));
        }
    }
    let core = Graph::build(core_to_orig.len(), &edges).expect("core inherits simplicity");
    Peeling {
        core,
        core_to_orig,
        removed,
    }
}

/// Removes one interior candidate per 4-clique group (smallest id first)
/// and reports the marked triangles.
pub fn peel_inner_vertices(g: &Graph) -> Result<Peeling, RejectReason> {
    if !g.is_biconnected() {
        return Err(not_biconnected_reason(g));
    }
    let groups = candidate_groups(g);
    let chosen: Vec<Vertex> = groups.iter().map(|grp| grp[0]).collect();
    Ok(peel_with_choice(g, &chosen))
}

fn not_biconnected_reason(g: &Graph) -> RejectReason {
    let witness = if g.n() < 3 {
        Witness::Note(format!("only {} vertices", g.n()))
    } else if !g.is_connected() {
        Witness::Note("disconnected".to_string())
    } else {
        match g.find_cut_vertex() {
            Some(v) => Witness::Vertex(v),
            None => Witness::Note("not biconnected".to_string()),
        }
    };
    RejectReason::new(RejectKind::NotBiconnected, witness)
}

/// Structure of a maximal outerplanar graph: Hamiltonian outer cycle,
/// triangle faces and the weak dual tree over them.
#[derive(Debug, Clone)]
pub struct MopStructure {
    /// Outer cycle, canonical direction, starting at the smallest vertex.
    pub outer_cycle: Vec<Vertex>,
    /// Triangles as sorted triples, in canonical (sorted) order.
    pub triangles: Vec<[Vertex; 3]>,
    /// Weak dual tree: (triangle index, triangle index, shared chord).
    pub dual_links: Vec<(usize, usize, Edge)>,
    /// Inner edges (both endpoints on the cycle, not cycle edges), sorted.
    pub chords: Vec<Edge>,
}

/// Decides whether a biconnected graph is maximal outerplanar and returns
/// its outer cycle and weak dual tree.
pub fn recognize_maximal_outerplanar(g: &Graph) -> Result<MopStructure, RejectReason> {
    if !g.is_biconnected() {
        return Err(not_biconnected_reason(g));
    }
    let n = g.n();
    if n == 3 {
        return Ok(MopStructure {
            outer_cycle: vec![0, 1, 2],
            triangles: vec![[0, 1, 2]],
            dual_links: vec![],
            chords: vec![],
        });
    }
    if g.edge_count() != 2 * n - 3 {
        if g.edge_count() < 2 * n - 3 {
            // too sparse to be chordal: exhibit a chordless cycle
            if let Some(cycle) = find_chordless_cycle(g) {
                return Err(RejectReason::new(
                    RejectKind::ChordlessCycle,
                    Witness::Cycle(cycle),
                ));
            }
            return Err(RejectReason::new(
                RejectKind::NotMaximalOuterplanarCore,
                Witness::Note(format!(
                    "{} edges, maximal outerplanar needs {}",
                    g.edge_count(),
                    2 * n - 3
                )),
            ));
        }
        // too dense to be outerplanar: some vertex is interior in every
        // embedding, and no interior candidate is left in the core
        let kind = if g.edge_count() > 3 * n - 6 {
            RejectKind::NotPlanarInnerChordal
        } else {
            RejectKind::InnerDegreeViolation
        };
        let worst = g.vertices().max_by_key(|&v| g.degree(v)).unwrap_or(0);
        return Err(RejectReason::new(kind, Witness::Vertex(worst)));
    }

    // classify edges by the number of triangles they lie on
    let mut outer_at: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    let mut chords: Vec<Edge> = Vec::new();
    let mut triangles: BTreeSet<[Vertex; 3]> = BTreeSet::new();
    for e in g.edges() {
        let (u, v) = e.endpoints();
        let common = g.common_neighbors(u, v);
        match common.len() {
            1 => {
                outer_at[u].push(v);
                outer_at[v].push(u);
            }
            2 => chords.push(*e),
            0 => {
                let cycle = shortest_cycle_through_edge(g, u, v)
                    .expect("edge of a biconnected graph lies on a cycle");
                return Err(RejectReason::new(
                    RejectKind::ChordlessCycle,
                    Witness::Cycle(cycle),
                ));
            }
            _ => {
                return Err(RejectReason::new(
                    RejectKind::NotPlanarInnerChordal,
                    Witness::Edge(u, v),
                ));
            }
        }
        for &w in &common {
            let mut t = [u, v, w];
            t.sort_unstable();
            triangles.insert(t);
        }
    }

    // the single-triangle edges must form one Hamiltonian cycle
    for v in g.vertices() {
        if outer_at[v].len() != 2 {
            return Err(RejectReason::new(
                RejectKind::NotMaximalOuterplanarCore,
                Witness::Vertex(v),
            ));
        }
    }
    let mut cycle = vec![0];
    let mut prev = usize::MAX;
    let mut cur = 0;
    loop {
        let nexts = &outer_at[cur];
        let nxt = if nexts[0] != prev { nexts[0] } else { nexts[1] };
        if nxt == 0 {
            break;
        }
        prev = cur;
        cur = nxt;
        cycle.push(cur);
        if cycle.len() > n {
            return Err(RejectReason::new(
                RejectKind::NotMaximalOuterplanarCore,
                Witness::Note("outer edges do not close a single cycle".into()),
            ));
        }
    }
    if cycle.len() != n {
        return Err(RejectReason::new(
            RejectKind::NotMaximalOuterplanarCore,
            Witness::Note("outer edges do not span all vertices".into()),
        ));
    }
    // canonical direction: second vertex is the smaller neighbor of vertex 0
    if cycle[1] > cycle[n - 1] {
        cycle[1..].reverse();
    }

    let triangles: Vec<[Vertex; 3]> = triangles.into_iter().collect();
    if triangles.len() != n - 2 {
        return Err(RejectReason::new(
            RejectKind::NotMaximalOuterplanarCore,
            Witness::Note(format!("{} triangles, expected {}", triangles.len(), n - 2)),
        ));
    }
    chords.sort();
    debug_assert_eq!(chords.len(), n - 3);

    // weak dual: triangles adjacent along shared chords
    let mut tri_of_edge: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (i, t) in triangles.iter().enumerate() {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
            tri_of_edge.entry(Edge::new(a, b)).or_default().push(i);
        }
    }
    let mut dual_links = Vec::new();
    for &ch in &chords {
        let ts = &tri_of_edge[&ch];
        if ts.len() != 2 {
            return Err(RejectReason::new(
                RejectKind::NotMaximalOuterplanarCore,
                Witness::Edge(ch.u(), ch.v()),
            ));
        }
        dual_links.push((ts[0], ts[1], ch));
    }
    // dual connectivity (n-3 links over n-2 nodes makes it a tree)
    let mut adj = vec![Vec::new(); triangles.len()];
    for &(a, b, _) in &dual_links {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; triangles.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(t) = stack.pop() {
        for &o in &adj[t] {
            if !seen[o] {
                seen[o] = true;
                stack.push(o);
            }
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(RejectReason::new(
            RejectKind::NotMaximalOuterplanarCore,
            Witness::Note("weak dual is not connected".into()),
        ));
    }

    Ok(MopStructure {
        outer_cycle: cycle,
        triangles,
        dual_links,
        chords,
    })
}

/// Rotation system of the outerplanar embedding with the given outer cycle:
/// every vertex orders its neighbors by cyclic position along the cycle,
/// which realizes the circle drawing combinatorially.
fn mop_rotation(g: &Graph, cycle: &[Vertex]) -> Vec<Vec<Vertex>> {
    let n = g.n();
    let mut pos = vec![0usize; n];
    for (i, &v) in cycle.iter().enumerate() {
        pos[v] = i;
    }
    let mut rotation = vec![Vec::new(); n];
    for v in g.vertices() {
        let mut nb: Vec<Vertex> = g.neighbors(v).to_vec();
        nb.sort_by_key(|&w| (pos[w] + n - pos[v] - 1) % n);
        rotation[v] = nb;
    }
    rotation
}

/// Breadth-first shortest cycle through an edge; such a cycle is chordless.
fn shortest_cycle_through_edge(g: &Graph, u: Vertex, v: Vertex) -> Option<Vec<Vertex>> {
    let mut prev = vec![usize::MAX; g.n()];
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(u);
    prev[u] = u;
    while let Some(x) = queue.pop_front() {
        for &w in g.neighbors(x) {
            if x == u && w == v {
                continue;
            }
            if prev[w] == usize::MAX {
                prev[w] = x;
                if w == v {
                    let mut path = vec![v];
                    let mut cur = v;
                    while cur != u {
                        cur = prev[cur];
                        path.push(cur);
                    }
                    return Some(path);
                }
                queue.push_back(w);
            }
        }
    }
    None
}

/// Maximum-cardinality search plus elimination-order verification; on a
/// non-chordal graph returns a chordless cycle of length >= 4.
fn find_chordless_cycle(g: &Graph) -> Option<Vec<Vertex>> {
    let n = g.n();
    if n == 0 {
        return None;
    }
    let mut weight = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| weight[v])
            .unwrap();
        placed[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !placed[w] {
                weight[w] += 1;
            }
        }
    }
    order.reverse(); // elimination order
    let mut rank = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    for &v in &order {
        let mut later: Vec<Vertex> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| rank[w] > rank[v])
            .collect();
        later.sort_by_key(|&w| rank[w]);
        if later.len() < 2 {
            continue;
        }
        let parent = later[0];
        for &w in &later[1..] {
            if !g.has_edge(parent, w) {
                // v sees two non-adjacent later vertices: close a chordless
                // cycle through a shortest parent-w path avoiding N[v]
                return Some(chordless_cycle_from(g, v, parent, w));
            }
        }
    }
    None
}

fn chordless_cycle_from(g: &Graph, v: Vertex, x: Vertex, y: Vertex) -> Vec<Vertex> {
    let mut banned = vec![false; g.n()];
    banned[v] = true;
    for &w in g.neighbors(v) {
        banned[w] = true;
    }
    banned[x] = false;
    banned[y] = false;
    let mut prev = vec![usize::MAX; g.n()];
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(x);
    prev[x] = x;
    while let Some(cur) = queue.pop_front() {
        if cur == y {
            break;
        }
        for &w in g.neighbors(cur) {
            if !banned[w] && prev[w] == usize::MAX {
                prev[w] = cur;
                queue.push_back(w);
            }
        }
    }
    assert_ne!(prev[y], usize::MAX, "x and y reconnect outside N[v]");
    let mut path = vec![y];
    let mut cur = y;
    while cur != x {
        cur = prev[cur];
        path.push(cur);
    }
    path.push(v);
    path
}

/// Full recognition: embedding witness plus chord structure, or a reject
/// reason with a checkable witness.
pub fn recognize(g: &Graph) -> Result<InnerChordalGraph, RejectReason> {
    if !g.is_biconnected() {
        return Err(not_biconnected_reason(g));
    }
    let groups = candidate_groups(g);
    let default_choice: Vec<Vertex> = groups.iter().map(|grp| grp[0]).collect();
    match try_assemble(g, &default_choice) {
        Ok(ic) => Ok(ic),
        Err(first_reason) => {
            // the only recognition ambiguity lives inside single 4-cliques;
            // retry the symmetric alternatives one group at a time
            for (gi, grp) in groups.iter().enumerate() {
                for &alt in &grp[1..] {
                    let mut choice = default_choice.clone();
                    choice[gi] = alt;
                    if let Ok(ic) = try_assemble(g, &choice) {
                        return Ok(ic);
                    }
                }
            }
            Err(first_reason)
        }
    }
}

fn try_assemble(g: &Graph, chosen: &[Vertex]) -> Result<InnerChordalGraph, RejectReason> {
    let peeling = peel_with_choice(g, chosen);
    let core = &peeling.core;
    if core.n() < 3 {
        return Err(RejectReason::new(
            RejectKind::NotPlanarInnerChordal,
            Witness::Note("core smaller than a triangle".into()),
        ));
    }
    if !core.is_biconnected() {
        return Err(RejectReason::new(
            RejectKind::NotMaximalOuterplanarCore,
            Witness::Note("core is not biconnected".into()),
        ));
    }
    let mop = recognize_maximal_outerplanar(core).map_err(|r| lift_reason(r, &peeling))?;

    let core_rot = mop_rotation(core, &mop.outer_cycle);
    let core_emb = EmbeddedGraph::new(
        core.clone(),
        core_rot.clone(),
        (mop.outer_cycle[1], mop.outer_cycle[0]),
    )
    .map_err(|e| {
        RejectReason::new(
            RejectKind::NotMaximalOuterplanarCore,
            Witness::Note(format!("embedding assembly failed: {e}")),
        )
    })?;

    // rotations on original ids
    let n = g.n();
    let mut rotation: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    for (cv, rot) in core_rot.iter().enumerate() {
        rotation[peeling.core_to_orig[cv]] =
            rot.iter().map(|&w| peeling.core_to_orig[w]).collect();
    }
    let outer_cycle: Vec<Vertex> = mop
        .outer_cycle
        .iter()
        .map(|&cv| peeling.core_to_orig[cv])
        .collect();

    // bounded faces keyed by vertex triple, boundary sides in original ids
    let mut face_by_triple: HashMap<[Vertex; 3], Vec<(Vertex, Vertex)>> = HashMap::new();
    for (fi, f) in core_emb.faces().iter().enumerate() {
        if fi == core_emb.outer_face() {
            continue;
        }
        let sides: Vec<(Vertex, Vertex)> = f
            .boundary
            .iter()
            .map(|&(a, b)| (peeling.core_to_orig[a], peeling.core_to_orig[b]))
            .collect();
        let mut key: Vec<Vertex> = sides.iter().map(|&(a, _)| a).collect();
        key.sort_unstable();
        face_by_triple.insert([key[0], key[1], key[2]], sides);
    }

    // insert each peeled vertex into its marked triangle face
    for &(v, tri) in &peeling.removed {
        let mut key = tri;
        key.sort_unstable();
        let sides = match face_by_triple.remove(&key) {
            Some(s) => s,
            None => {
                return Err(RejectReason::new(
                    RejectKind::NotPlanarInnerChordal,
                    Witness::Triangle(key),
                ));
            }
        };
        // at the head y of each ccw side (x,y) with following side (y,z):
        // rotation at y reads "... z, x ..."; v goes in between
        for i in 0..3 {
            let (x, y) = sides[i];
            let (_, z) = sides[(i + 1) % 3];
            let rot = &mut rotation[y];
            let px = rot.iter().position(|&w| w == x).unwrap();
            let len = rot.len();
            debug_assert_eq!(rot[(px + len - 1) % len], z);
            rot.insert(px, v);
        }
        rotation[v] = sides.iter().map(|&(a, _)| a).collect();
    }

    let outer_side = (outer_cycle[1], outer_cycle[0]);
    let embedded = EmbeddedGraph::new(g.clone(), rotation, outer_side).map_err(|e| {
        RejectReason::new(
            RejectKind::NotPlanarInnerChordal,
            Witness::Note(format!("final embedding invalid: {e}")),
        )
    })?;

    let mut inner_vertices: Vec<Vertex> = peeling.removed.iter().map(|&(v, _)| v).collect();
    inner_vertices.sort_unstable();

    // canonical outer cycle: rotate so the smallest id comes first
    let mut cyc = outer_cycle;
    let k = cyc
        .iter()
        .enumerate()
        .min_by_key(|&(_, &v)| v)
        .map(|(i, _)| i)
        .unwrap();
    cyc.rotate_left(k);

    let mut chords: Vec<Edge> = mop
        .chords
        .iter()
        .map(|e| Edge::new(peeling.core_to_orig[e.u()], peeling.core_to_orig[e.v()]))
        .collect();
    chords.sort();

    let ic = InnerChordalGraph {
        embedded,
        inner_vertices,
        outer_cycle: cyc,
        chords,
    };
    validate_inner_chordal(&ic)?;
    Ok(ic)
}

fn lift_reason(mut r: RejectReason, peeling: &Peeling) -> RejectReason {
    let map = |v: Vertex| peeling.core_to_orig[v];
    r.witness = match r.witness {
        Witness::Vertex(v) => Witness::Vertex(map(v)),
        Witness::Edge(u, v) => Witness::Edge(map(u), map(v)),
        Witness::Cycle(c) => Witness::Cycle(c.into_iter().map(map).collect()),
        Witness::Triangle(t) => Witness::Triangle([map(t[0]), map(t[1]), map(t[2])]),
        w => w,
    };
    r
}

/// Re-checks every structural invariant of an accepted embedding: interior
/// vertices of degree 3 with triangle neighborhoods forming an independent
/// set, all bounded faces triangles, and the chord list consistent with the
/// face structure. Together with planarity these force every long cycle to
/// carry an inside chord.
fn validate_inner_chordal(ic: &InnerChordalGraph) -> Result<(), RejectReason> {
    let g = ic.graph();
    let emb = &ic.embedded;
    let outer: BTreeSet<Vertex> = ic.outer_cycle.iter().copied().collect();
    let err = |note: &str| {
        Err(RejectReason::new(
            RejectKind::NotPlanarInnerChordal,
            Witness::Note(note.to_string()),
        ))
    };
    if outer.len() != ic.outer_cycle.len() {
        return err("outer cycle repeats a vertex");
    }
    let outer_face = &emb.faces()[emb.outer_face()];
    if outer_face.vertex_set() != outer.iter().copied().collect::<Vec<_>>() {
        return err("outer cycle does not match the outer face");
    }
    if outer_face.len() != ic.outer_cycle.len() {
        return err("outer face is not a simple cycle");
    }
    for &v in &ic.inner_vertices {
        if outer.contains(&v) {
            return err("inner vertex on outer cycle");
        }
        if g.degree(v) != 3 || !is_triangle(g, g.neighbors(v)) {
            return Err(RejectReason::new(
                RejectKind::InnerDegreeViolation,
                Witness::Vertex(v),
            ));
        }
        if g
            .neighbors(v)
            .iter()
            .any(|w| ic.inner_vertices.binary_search(w).is_ok())
        {
            return err("adjacent inner vertices");
        }
    }
    if ic.inner_vertices.len() + outer.len() != g.n() {
        return err("vertex partition mismatch");
    }
    for (fi, f) in emb.faces().iter().enumerate() {
        if fi != emb.outer_face() && f.len() != 3 {
            return err("bounded face is not a triangle");
        }
    }
    let mut expected: Vec<Edge> = g
        .edges()
        .iter()
        .copied()
        .filter(|&e| !emb.is_outer_edge(e) && outer.contains(&e.u()) && outer.contains(&e.v()))
        .collect();
    expected.sort();
    if expected != ic.chords {
        return err("chord list mismatch");
    }
    Ok(())
}

/// Reads the construction tree off an accepted embedding: bounded faces are
/// grouped around interior vertices into K4 nodes, remaining faces are K3
/// nodes, and tree links are the chords.
pub fn build_construction_tree(ic: &InnerChordalGraph) -> ConstructionTree {
    let emb = &ic.embedded;
    let inner: BTreeSet<Vertex> = ic.inner_vertices.iter().copied().collect();

    let mut nodes: Vec<TreeNode> = Vec::new();
    let mut node_of_face: HashMap<usize, usize> = HashMap::new();
    let mut k4_of_inner: HashMap<Vertex, usize> = HashMap::new();

    for (fi, f) in emb.faces().iter().enumerate() {
        if fi == emb.outer_face() {
            continue;
        }
        let walk = f.vertex_walk();
        let inner_here: Vec<Vertex> = walk.iter().copied().filter(|v| inner.contains(v)).collect();
        match inner_here.len() {
            0 => {
                let tri = [walk[0], walk[1], walk[2]];
                let id = nodes.len();
                nodes.push(TreeNode {
                    kind: NodeKind::K3,
                    triangle: tri,
                    inner: None,
                });
                node_of_face.insert(fi, id);
            }
            1 => {
                let m = inner_here[0];
                let id = *k4_of_inner.entry(m).or_insert_with(|| {
                    let id = nodes.len();
                    nodes.push(TreeNode {
                        kind: NodeKind::K4,
                        triangle: [0; 3],
                        inner: Some(m),
                    });
                    id
                });
                node_of_face.insert(fi, id);
            }
            _ => unreachable!("two interior vertices on one bounded face"),
        }
    }
    // each K4 node's ccw outer triangle: chain the face sides avoiding the
    // interior vertex
    for (&m, &id) in &k4_of_inner {
        let mut succ: HashMap<Vertex, Vertex> = HashMap::new();
        for f in emb.faces() {
            if !f.is_outer && f.vertex_walk().contains(&m) {
                for &(a, b) in &f.boundary {
                    if a != m && b != m {
                        succ.insert(a, b);
                    }
                }
            }
        }
        let start = *succ.keys().min().unwrap();
        let second = succ[&start];
        let third = succ[&second];
        debug_assert_eq!(succ[&third], start);
        nodes[id].triangle = [start, second, third];
    }

    // canonical node order: sorted triangle triple
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    let key = |n: &TreeNode| {
        let mut t = n.triangle;
        t.sort_unstable();
        t
    };
    order.sort_by_key(|&i| key(&nodes[i]));
    let mut remap = vec![0usize; nodes.len()];
    for (new_id, &old_id) in order.iter().enumerate() {
        remap[old_id] = new_id;
    }
    let sorted_nodes: Vec<TreeNode> = order.iter().map(|&i| nodes[i].clone()).collect();

    let mut links = Vec::new();
    for &ch in &ic.chords {
        let (fa, fb) = emb.faces_of_edge(ch);
        let (a, b) = (remap[node_of_face[&fa]], remap[node_of_face[&fb]]);
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        links.push(TreeLink { a, b, chord: ch });
    }
    links.sort_by_key(|l| (l.a, l.b, l.chord));

    debug_assert_eq!(links.len() + 1, sorted_nodes.len());
    ConstructionTree {
        nodes: sorted_nodes,
        links,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn fan(n: usize) -> Graph {
        let mut es = Vec::new();
        for i in 1..n {
            es.push((0, i));
        }
        for i in 1..n - 1 {
            es.push((i, i + 1));
        }
        Graph::build(n, &es).unwrap()
    }

    fn octahedron() -> Graph {
        let mut es = Vec::new();
        for u in 0..6 {
            for v in (u + 1)..6 {
                if (u, v) != (0, 3) && (u, v) != (1, 4) && (u, v) != (2, 5) {
                    es.push((u, v));
                }
            }
        }
        Graph::build(6, &es).unwrap()
    }

    fn k4() -> Graph {
        Graph::build(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn octahedron_rejected_for_inner_degree() {
        let r = recognize(&octahedron()).unwrap_err();
        assert_eq!(r.kind, RejectKind::InnerDegreeViolation);
    }

    #[test]
    fn c4_rejected_for_chordless_cycle() {
        let c4 = Graph::build(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let r = recognize(&c4).unwrap_err();
        assert_eq!(r.kind, RejectKind::ChordlessCycle);
        if let Witness::Cycle(c) = &r.witness {
            assert_eq!(c.len(), 4);
        } else {
            panic!("expected cycle witness, got {:?}", r.witness);
        }
    }

    #[test]
    fn fan_f6_accepted() {
        let ic = recognize(&fan(6)).unwrap();
        assert!(ic.inner_vertices.is_empty());
        assert_eq!(
            ic.chords,
            vec![Edge::new(0, 2), Edge::new(0, 3), Edge::new(0, 4)]
        );
        let t = build_construction_tree(&ic);
        assert_eq!(t.nodes.len(), 4);
        assert!(t.nodes.iter().all(|n| n.kind == NodeKind::K3));
        let mut degs: Vec<usize> = (0..4).map(|i| t.node_degree(i)).collect();
        degs.sort_unstable();
        assert_eq!(degs, vec![1, 1, 2, 2]);
    }

    #[test]
    fn peel_k4() {
        let p = peel_inner_vertices(&k4()).unwrap();
        assert_eq!(p.removed.len(), 1);
        assert_eq!(p.removed[0].0, 0); // smallest candidate
        assert_eq!(p.core.n(), 3);
        assert_eq!(p.core.edge_count(), 3);
    }

    #[test]
    fn peel_fan_is_empty() {
        let p = peel_inner_vertices(&fan(6)).unwrap();
        assert!(p.removed.is_empty());
        assert_eq!(p.core.n(), 6);
    }

    #[test]
    fn peel_k4_glued_triangle() {
        // K4 on {0,1,2,3} plus triangle {0,1,4}
        let g = Graph::build(
            5,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 2),
                (1, 3),
                (2, 3),
                (0, 4),
                (1, 4),
            ],
        )
        .unwrap();
        let p = peel_inner_vertices(&g).unwrap();
        assert_eq!(p.removed.len(), 1);
        assert_eq!(p.removed[0].0, 2); // smaller of the two symmetric candidates
        assert_eq!(p.core.n(), 4);
        assert!(recognize_maximal_outerplanar(&p.core).is_ok());
    }

    #[test]
    fn mop_k3_and_fan() {
        let m =
            recognize_maximal_outerplanar(&Graph::build(3, &[(0, 1), (1, 2), (2, 0)]).unwrap())
                .unwrap();
        assert_eq!(m.outer_cycle.len(), 3);
        assert_eq!(m.triangles.len(), 1);

        let m = recognize_maximal_outerplanar(&fan(6)).unwrap();
        assert_eq!(m.triangles.len(), 4);
        assert_eq!(m.dual_links.len(), 3);
        let mut deg = vec![0usize; 4];
        for &(a, b, _) in &m.dual_links {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg.sort_unstable();
        assert_eq!(deg, vec![1, 1, 2, 2]);
    }

    #[test]
    fn mop_rejects_k4() {
        let r = recognize_maximal_outerplanar(&k4()).unwrap_err();
        assert_eq!(r.kind, RejectKind::InnerDegreeViolation);
    }

    #[test]
    fn k4_accepted_single_node_tree() {
        let ic = recognize(&k4()).unwrap();
        assert_eq!(ic.inner_vertices, vec![0]);
        assert!(ic.chords.is_empty());
        let t = build_construction_tree(&ic);
        assert_eq!(t.nodes.len(), 1);
        assert_eq!(t.nodes[0].kind, NodeKind::K4);
        assert_eq!(t.nodes[0].inner, Some(0));
        assert!(t.links.is_empty());
    }

    pub fn k4_star() -> Graph {
        // K4 {0,1,2,3} with interior 3; pads 4,5,6 on edges (0,1),(1,2),(2,0)
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

    #[test]
    fn k4_star_tree_shape() {
        let ic = recognize(&k4_star()).unwrap();
        assert_eq!(ic.inner_vertices, vec![3]);
        assert_eq!(ic.chords.len(), 3);
        let t = build_construction_tree(&ic);
        assert_eq!(t.nodes.len(), 4);
        let k4s: Vec<usize> = (0..4)
            .filter(|&i| t.nodes[i].kind == NodeKind::K4)
            .collect();
        assert_eq!(k4s.len(), 1);
        assert_eq!(t.node_degree(k4s[0]), 3);
    }

    #[test]
    fn merge_reconstructs_input() {
        for g in [fan(6), k4(), k4_star()] {
            let ic = recognize(&g).unwrap();
            let t = build_construction_tree(&ic);
            let merged = merge_construction_tree(&t);
            assert_eq!(merged.n(), g.n());
            assert_eq!(merged.edges(), g.edges());
        }
    }

    #[test]
    fn not_biconnected_witness() {
        let path = Graph::build(3, &[(0, 1), (1, 2)]).unwrap();
        let r = recognize(&path).unwrap_err();
        assert_eq!(r.kind, RejectKind::NotBiconnected);
        assert_eq!(r.witness, Witness::Vertex(1));
    }

    #[test]
    fn book_b3_rejected() {
        // edge (0,1) shared by three triangles: chordal but never
        // embeddable with all bounded faces triangular
        let g = Graph::build(
            5,
            &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (0, 4), (1, 4)],
        )
        .unwrap();
        let r = recognize(&g).unwrap_err();
        assert_eq!(r.kind, RejectKind::NotPlanarInnerChordal);
    }

    #[test]
    fn k23_rejected_with_chordless_cycle() {
        let g = Graph::build(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).unwrap();
        let r = recognize(&g).unwrap_err();
        assert_eq!(r.kind, RejectKind::ChordlessCycle);
    }

    #[test]
    fn two_k4s_sharing_edge_accepted() {
        // K4 {0,1,2,3} and K4 {2,3,4,5} glued along edge (2,3)
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
        assert_eq!(ic.inner_vertices.len(), 2);
        let t = build_construction_tree(&ic);
        assert_eq!(t.nodes.len(), 2);
        assert!(t.nodes.iter().all(|n| n.kind == NodeKind::K4));
        assert_eq!(t.links.len(), 1);
        assert_eq!(t.links[0].chord, Edge::new(2, 3));
    }
}
