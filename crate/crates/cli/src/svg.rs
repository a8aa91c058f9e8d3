//! SVG rendering of drawings and obstacles. Exact coordinates are rounded
//! to floating point only here, at render time; stored artifacts stay
//! rational.

use num_traits::ToPrimitive;
use oor_core::embed::Drawing;
use oor_core::geometry::obstacle::SimplePolygon;
use oor_core::geometry::rational::RationalPoint;
use std::fmt::Write;

fn approx(p: &RationalPoint) -> (f64, f64) {
    (p.x.to_f64().unwrap_or(0.0), p.y.to_f64().unwrap_or(0.0))
}

/// Renders the drawing (and the obstacle, when given) into a standalone
/// SVG document. Deterministic for identical inputs.
pub fn render_svg(d: &Drawing, obstacle: Option<&SimplePolygon>) -> String {
    let mut pts: Vec<(f64, f64)> = d.points.iter().map(approx).collect();
    if let Some(o) = obstacle {
        pts.extend(o.vertices.iter().map(approx));
    }
    let (mut min_x, mut min_y, mut max_x, mut max_y) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for &(x, y) in &pts {
        min_x = min_x.min(x);
        min_y = min_y.min(y);
        max_x = max_x.max(x);
        max_y = max_y.max(y);
    }
    let span = (max_x - min_x).max(max_y - min_y).max(1e-9);
    let pad = span * 0.05;
    let scale = 900.0 / (span + 2.0 * pad);
    // svg y grows downward; flip
    let tx = |x: f64| (x - min_x + pad) * scale;
    let ty = |y: f64| (max_y + pad - y) * scale;
    let w = (max_x - min_x + 2.0 * pad) * scale;
    let h = (max_y - min_y + 2.0 * pad) * scale;
    let r = (scale * span * 0.008).max(2.0);

    let mut out = String::new();
    writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{w:.2}" height="{h:.2}" viewBox="0 0 {w:.2} {h:.2}">"#
    )
    .unwrap();
    if let Some(o) = obstacle {
        let mut path = String::new();
        for (i, v) in o.vertices.iter().enumerate() {
            let (x, y) = approx(v);
            let _ = write!(path, "{}{:.3},{:.3} ", if i == 0 { "M" } else { "L" }, tx(x), ty(y));
        }
        path.push('Z');
        writeln!(
            out,
            r##"  <path d="{path}" fill="#c8c8c8" stroke="#8a8a8a" stroke-width="1"/>"##
        )
        .unwrap();
    }
    for e in d.graph().edges() {
        let (a, b) = e.endpoints();
        let (x1, y1) = approx(d.point(a));
        let (x2, y2) = approx(d.point(b));
        writeln!(
            out,
            r#"  <line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="black" stroke-width="1.5"/>"#,
            tx(x1),
            ty(y1),
            tx(x2),
            ty(y2)
        )
        .unwrap();
    }
    for (v, p) in d.points.iter().enumerate() {
        let (x, y) = approx(p);
        writeln!(
            out,
            r##"  <circle cx="{:.3}" cy="{:.3}" r="{r:.2}" fill="#1f4e9c"><title>{v}</title></circle>"##,
            tx(x),
            ty(y)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use oor_core::graph::Graph;
    use oor_core::orient::{greedy_outerplanar, ChordOrientation};
    use oor_core::recognize::recognize;

    #[test]
    fn triangle_svg_has_three_segments() {
        let g = Graph::build(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let ic = recognize(&g).unwrap();
        let d = oor_core::embed::embed(&ic, &ChordOrientation::new()).unwrap();
        let svg = render_svg(&d, None);
        assert_eq!(svg.matches("<line").count(), 3);
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(!svg.contains("<path"));
    }

    #[test]
    fn diamond_svg_has_five_segments() {
        let g = Graph::build(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let ic = recognize(&g).unwrap();
        let mut o = ChordOrientation::new();
        o.insert(oor_core::graph::Edge::new(0, 2), 0);
        let d = oor_core::embed::embed(&ic, &o).unwrap();
        let svg = render_svg(&d, None);
        assert_eq!(svg.matches("<line").count(), 5);
    }

    #[test]
    fn obstacle_layer_is_rendered_gray() {
        let g = crate::gen::fan(6).unwrap();
        let ic = recognize(&g).unwrap();
        let o = greedy_outerplanar(&ic).unwrap();
        let d = oor_core::embed::embed(&ic, &o).unwrap();
        let obs = oor_core::geometry::obstacle::build_obstacle(&d, &ic).unwrap();
        let svg = render_svg(&d, Some(&obs));
        assert_eq!(svg.matches("<path").count(), 1);
        assert!(svg.contains("#c8c8c8"));
        assert_eq!(svg.matches("<line").count(), 9);
    }

    #[test]
    fn rendering_is_deterministic() {
        let g = crate::gen::fan(5).unwrap();
        let ic = recognize(&g).unwrap();
        let o = greedy_outerplanar(&ic).unwrap();
        let d = oor_core::embed::embed(&ic, &o).unwrap();
        assert_eq!(render_svg(&d, None), render_svg(&d, None));
    }
}
