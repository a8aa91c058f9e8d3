//! File formats. Rationals always travel as lowest-terms strings so that
//! artifacts re-verify bit for bit; nothing is ever serialized as floating
//! point.

use anyhow::{anyhow, bail, Context, Result};
use oor_core::embed::{embedded_with_geometric_outer, Drawing};
use oor_core::geometry::obstacle::SimplePolygon;
use oor_core::geometry::rational::{cmp_around, parse_rat, RationalPoint};
use oor_core::graph::{EmbeddedGraph, Graph};
use oor_core::recognize::{ConstructionTree, NodeKind, TreeLink, TreeNode};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotation: Option<Vec<Vec<usize>>>,
    /// outer face named by a directed edge side: the face left of (u,v)
    /// when the third entry is 0, left of (v,u) when it is 1
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outer_face_edge: Option<(usize, usize, u8)>,
}

impl GraphJson {
    pub fn from_graph(g: &Graph) -> GraphJson {
        GraphJson {
            n: g.n(),
            edges: g.edges().iter().map(|e| e.endpoints()).collect(),
            rotation: None,
            outer_face_edge: None,
        }
    }

    pub fn from_embedded(eg: &EmbeddedGraph) -> GraphJson {
        let side = eg.faces()[eg.outer_face()].boundary[0];
        GraphJson {
            n: eg.graph().n(),
            edges: eg.graph().edges().iter().map(|e| e.endpoints()).collect(),
            rotation: Some(eg.rotation().to_vec()),
            outer_face_edge: Some((side.0, side.1, 0)),
        }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        Graph::build(self.n, &self.edges).map_err(|e| anyhow!("invalid graph: {e}"))
    }
}

/// Generator output: the instance graph plus, for tree-based families, the
/// ground-truth construction tree.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceJson {
    pub graph: GraphJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tree: Option<TreeJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeNodeJson {
    pub kind: String,
    pub vertices: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeJson {
    pub nodes: Vec<TreeNodeJson>,
    pub tree_edges: Vec<(usize, usize, (usize, usize))>,
}

impl TreeJson {
    pub fn from_tree(t: &ConstructionTree) -> TreeJson {
        TreeJson {
            nodes: t
                .nodes
                .iter()
                .map(|n| TreeNodeJson {
                    kind: match n.kind {
                        NodeKind::K3 => "K3".into(),
                        NodeKind::K4 => "K4".into(),
                    },
                    vertices: n.vertices(),
                    inner: n.inner,
                })
                .collect(),
            tree_edges: t
                .links
                .iter()
                .map(|l| (l.a, l.b, l.chord.endpoints()))
                .collect(),
        }
    }

    pub fn to_tree(&self) -> Result<ConstructionTree> {
        let mut nodes = Vec::new();
        for n in &self.nodes {
            let kind = match n.kind.as_str() {
                "K3" => NodeKind::K3,
                "K4" => NodeKind::K4,
                other => bail!("unknown node kind {other:?}"),
            };
            if n.vertices.len() < 3 {
                bail!("node needs at least 3 vertices");
            }
            nodes.push(TreeNode {
                kind,
                triangle: [n.vertices[0], n.vertices[1], n.vertices[2]],
                inner: n.inner,
            });
        }
        let links = self
            .tree_edges
            .iter()
            .map(|&(a, b, (u, v))| TreeLink {
                a,
                b,
                chord: oor_core::graph::Edge::new(u, v),
            })
            .collect();
        Ok(ConstructionTree { nodes, links })
    }
}

/// Chord orientation on the wire: one entry `[[u,v], "->", target]` per
/// chord.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrientationJson {
    pub chords: Vec<((usize, usize), String, usize)>,
}

impl OrientationJson {
    pub fn from_orientation(o: &oor_core::orient::ChordOrientation) -> OrientationJson {
        OrientationJson {
            chords: o
                .iter()
                .map(|(e, &t)| (e.endpoints(), "->".to_string(), t))
                .collect(),
        }
    }

    pub fn to_orientation(&self) -> Result<oor_core::orient::ChordOrientation> {
        let mut o = oor_core::orient::ChordOrientation::new();
        for ((u, v), arrow, t) in &self.chords {
            if arrow != "->" {
                bail!("bad orientation entry marker {arrow:?}");
            }
            o.insert(oor_core::graph::Edge::new(*u, *v), *t);
        }
        Ok(o)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DrawingJson {
    pub points: Vec<(String, String)>,
    pub edges: Vec<(usize, usize)>,
}

impl DrawingJson {
    pub fn from_drawing(d: &Drawing) -> DrawingJson {
        DrawingJson {
            points: d
                .points
                .iter()
                .map(|p| (p.x.to_string(), p.y.to_string()))
                .collect(),
            edges: d.graph().edges().iter().map(|e| e.endpoints()).collect(),
        }
    }

    /// Rebuilds the drawing: the rotation system is read off the
    /// coordinates and the outer face is the unique one with non-positive
    /// signed area.
    pub fn to_drawing(&self) -> Result<Drawing> {
        let n = self.points.len();
        let graph = Graph::build(n, &self.edges).map_err(|e| anyhow!("invalid edges: {e}"))?;
        let points: Vec<RationalPoint> = self
            .points
            .iter()
            .map(|(x, y)| {
                Ok(RationalPoint::new(
                    parse_rat(x).map_err(|e| anyhow!(e))?,
                    parse_rat(y).map_err(|e| anyhow!(e))?,
                ))
            })
            .collect::<Result<_>>()?;
        let rotation: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                let mut nb = graph.neighbors(v).to_vec();
                nb.sort_by(|&a, &b| cmp_around(&points[v], &points[a], &points[b]));
                nb
            })
            .collect();
        let embedded = embedded_with_geometric_outer(graph, rotation, &points)
            .map_err(|e| anyhow!("drawing does not embed: {e}"))?;
        Ok(Drawing { embedded, points })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObstacleJson {
    pub vertices: Vec<(String, String)>,
}

impl ObstacleJson {
    pub fn from_polygon(p: &SimplePolygon) -> ObstacleJson {
        ObstacleJson {
            vertices: p
                .vertices
                .iter()
                .map(|v| (v.x.to_string(), v.y.to_string()))
                .collect(),
        }
    }

    pub fn to_polygon(&self) -> Result<SimplePolygon> {
        let vertices: Vec<RationalPoint> = self
            .vertices
            .iter()
            .map(|(x, y)| {
                Ok(RationalPoint::new(
                    parse_rat(x).map_err(|e| anyhow!(e))?,
                    parse_rat(y).map_err(|e| anyhow!(e))?,
                ))
            })
            .collect::<Result<_>>()?;
        SimplePolygon::new(vertices).map_err(|e| anyhow!("invalid polygon: {e}"))
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Reads a graph from either a bare graph document or a generator instance
/// envelope.
pub fn read_graph_input(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    if let Ok(inst) = serde_json::from_str::<InstanceJson>(&text) {
        return inst.graph.to_graph();
    }
    let gj: GraphJson =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    gj.to_graph()
}

pub fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_json_round_trip() {
        let g = Graph::build(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let j = GraphJson::from_graph(&g);
        let text = serde_json::to_string(&j).unwrap();
        let back: GraphJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_graph().unwrap().edges(), g.edges());
    }

    #[test]
    fn orientation_entry_shape() {
        let mut o = oor_core::orient::ChordOrientation::new();
        o.insert(oor_core::graph::Edge::new(0, 2), 2);
        let j = OrientationJson::from_orientation(&o);
        let text = serde_json::to_string(&j).unwrap();
        assert_eq!(text, r#"{"chords":[[[0,2],"->",2]]}"#);
        let back: OrientationJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_orientation().unwrap(), o);
    }

    #[test]
    fn drawing_round_trip_is_exact() {
        use oor_core::orient::greedy_outerplanar;
        use oor_core::recognize::recognize;
        let g = crate::gen::fan(6).unwrap();
        let ic = recognize(&g).unwrap();
        let o = greedy_outerplanar(&ic).unwrap();
        let d = oor_core::embed::embed(&ic, &o).unwrap();
        let j = DrawingJson::from_drawing(&d);
        let text = serde_json::to_string(&j).unwrap();
        let back: DrawingJson = serde_json::from_str(&text).unwrap();
        let d2 = back.to_drawing().unwrap();
        assert_eq!(d.points, d2.points);
        assert_eq!(d.graph().edges(), d2.graph().edges());
    }
}
