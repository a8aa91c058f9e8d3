//! Visibility graphs of point sets among polygonal obstacles: two points
//! see each other exactly when the open segment between them misses every
//! closed obstacle region. This is the independent oracle certifying built
//! obstacles.

use crate::geometry::obstacle::SimplePolygon;
use crate::geometry::rational::RationalPoint;
use crate::geometry::verify::orient_i;
use crate::graph::Graph;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VisibilityError {
    #[error("points {0}, {1}, {2} are collinear (indices over points then obstacle corners)")]
    CollinearTriple(usize, usize, usize),
    #[error("two of the given points coincide")]
    CoincidentPoints,
}

/// Scales points and obstacle corners onto one integer lattice.
struct Scene {
    pts: Vec<(BigInt, BigInt)>,
    polys: Vec<Vec<(BigInt, BigInt)>>,
}

fn to_lattice(all: &[&RationalPoint]) -> Vec<(BigInt, BigInt)> {
    let mut scale = BigInt::one();
    for p in all {
        scale = scale.lcm(p.x.denom());
        scale = scale.lcm(p.y.denom());
    }
    all.iter()
        .map(|p| {
            (
                p.x.numer() * (&scale / p.x.denom()),
                p.y.numer() * (&scale / p.y.denom()),
            )
        })
        .collect()
}

impl Scene {
    fn new(points: &[RationalPoint], obstacles: &[SimplePolygon]) -> Scene {
        let mut all: Vec<&RationalPoint> = points.iter().collect();
        for o in obstacles {
            all.extend(o.vertices.iter());
        }
        let lattice = to_lattice(&all);
        let pts = lattice[..points.len()].to_vec();
        let mut polys = Vec::new();
        let mut at = points.len();
        for o in obstacles {
            polys.push(lattice[at..at + o.vertices.len()].to_vec());
            at += o.vertices.len();
        }
        Scene { pts, polys }
    }

    fn all_points(&self) -> Vec<&(BigInt, BigInt)> {
        self.pts.iter().chain(self.polys.iter().flatten()).collect()
    }
}

/// No three among the points and obstacle corners may be collinear; the
/// first violating triple is reported by index (points first, then corners
/// in polygon order).
fn check_general_position(scene: &Scene) -> Result<(), VisibilityError> {
    let all = scene.all_points();
    let n = all.len();
    for i in 0..n {
        // directions from anchor i, normalized into a half-plane; equal
        // directions after sorting witness a collinear triple
        let mut dirs: Vec<(BigInt, BigInt, usize)> = Vec::with_capacity(n - 1);
        for (j, q) in all.iter().enumerate() {
            if j == i {
                continue;
            }
            let mut dx = &q.0 - &all[i].0;
            let mut dy = &q.1 - &all[i].1;
            if dx.is_zero() && dy.is_zero() {
                return Err(VisibilityError::CoincidentPoints);
            }
            if dy.is_negative() || (dy.is_zero() && dx.is_negative()) {
                dx = -dx;
                dy = -dy;
            }
            dirs.push((dx, dy, j));
        }
        dirs.sort_by(|a, b| (&b.0 * &a.1).cmp(&(&a.0 * &b.1)));
        for w in dirs.windows(2) {
            if &w[0].0 * &w[1].1 == &w[1].0 * &w[0].1 {
                return Err(VisibilityError::CollinearTriple(i, w[0].2, w[1].2));
            }
        }
    }
    Ok(())
}

/// True iff the open segment (a,b) intersects the closed region of the
/// polygon. Under general position the only contacts are proper crossings,
/// corners strictly inside the segment, or full containment.
fn segment_blocked(
    a: &(BigInt, BigInt),
    b: &(BigInt, BigInt),
    poly: &[(BigInt, BigInt)],
) -> bool {
    let k = poly.len();
    for i in 0..k {
        let (c, d) = (&poly[i], &poly[(i + 1) % k]);
        let d1 = orient_i(c, d, a);
        let d2 = orient_i(c, d, b);
        let d3 = orient_i(a, b, c);
        let d4 = orient_i(a, b, d);
        if d1 != Ordering::Equal
            && d2 != Ordering::Equal
            && d3 != Ordering::Equal
            && d4 != Ordering::Equal
            && d1 != d2
            && d3 != d4
        {
            return true; // proper crossing
        }
        // obstacle corner strictly inside the open segment
        for corner in [c, d] {
            if orient_i(a, b, corner) == Ordering::Equal && strictly_between(a, b, corner) {
                return true;
            }
        }
    }
    // no boundary contact: inside-ness is uniform along the open segment
    let mid = (&a.0 + &b.0, &a.1 + &b.1);
    point_in_polygon_scaled(&mid, &BigInt::from(2), poly)
}

fn strictly_between(a: &(BigInt, BigInt), b: &(BigInt, BigInt), x: &(BigInt, BigInt)) -> bool {
    if x == a || x == b {
        return false;
    }
    let (lox, hix) = if a.0 <= b.0 { (&a.0, &b.0) } else { (&b.0, &a.0) };
    let (loy, hiy) = if a.1 <= b.1 { (&a.1, &b.1) } else { (&b.1, &a.1) };
    lox <= &x.0 && &x.0 <= hix && loy <= &x.1 && &x.1 <= hiy
}

/// Even-odd test for the point (x/w, y/w), w > 0.
pub(crate) fn point_in_polygon_scaled(
    p: &(BigInt, BigInt),
    w: &BigInt,
    poly: &[(BigInt, BigInt)],
) -> bool {
    let (x, y) = p;
    let mut inside = false;
    let k = poly.len();
    for i in 0..k {
        let a = &poly[i];
        let b = &poly[(i + 1) % k];
        let ax_right = &a.0 * w > *x;
        let bx_right = &b.0 * w > *x;
        if ax_right == bx_right {
            continue;
        }
        let o = ((&b.0 - &a.0) * (y - &a.1 * w)).cmp(&((&b.1 - &a.1) * (x - &a.0 * w)));
        let toggles = if bx_right {
            o == Ordering::Less
        } else {
            o == Ordering::Greater
        };
        if toggles {
            inside = !inside;
        }
    }
    inside
}

/// The visibility graph: edge (i,j) present iff the open segment between
/// points i and j avoids every closed obstacle region. Exact; rejects
/// inputs violating general position.
pub fn visibility_graph(
    points: &[RationalPoint],
    obstacles: &[SimplePolygon],
) -> Result<Graph, VisibilityError> {
    let scene = Scene::new(points, obstacles);
    check_general_position(&scene)?;
    let n = points.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push((i, j));
        }
    }
    let edges: Vec<(usize, usize)> = pairs
        .par_iter()
        .filter(|&&(i, j)| {
            !scene
                .polys
                .iter()
                .any(|poly| segment_blocked(&scene.pts[i], &scene.pts[j], poly))
        })
        .copied()
        .collect();
    Ok(Graph::build(n, &edges).expect("visibility edges are simple"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rational::rat;

    fn p(x: i64, y: i64) -> RationalPoint {
        RationalPoint::from_ints(x, y)
    }

    #[test]
    fn no_obstacles_gives_complete_graph() {
        let pts = vec![p(0, 0), p(4, 1), p(1, 3)];
        let g = visibility_graph(&pts, &[]).unwrap();
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn small_triangle_blocks_midpoint() {
        let pts = vec![p(-4, 0), p(4, 1)];
        // obstacle straddling the segment near its midpoint (0, 1/2)
        let tri = SimplePolygon::new(vec![
            RationalPoint::new(rat(-1, 1), rat(-1, 3)),
            RationalPoint::new(rat(1, 1), rat(-1, 5)),
            RationalPoint::new(rat(1, 7), rat(2, 1)),
        ])
        .unwrap();
        let g = visibility_graph(&pts, &[tri]).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn collinear_triple_rejected() {
        let pts = vec![p(0, 0), p(1, 1), p(2, 2)];
        assert!(matches!(
            visibility_graph(&pts, &[]),
            Err(VisibilityError::CollinearTriple(_, _, _))
        ));
    }

    #[test]
    fn obstacle_fully_containing_segment_blocks() {
        let pts = vec![p(0, 0), p(1, 0)];
        let big = SimplePolygon::new(vec![p(-5, -5), p(5, -5), p(6, 5), p(-5, 6)]).unwrap();
        let g = visibility_graph(&pts, &[big]).unwrap();
        // both points are inside the obstacle: blocked
        assert_eq!(g.edge_count(), 0);
    }
}
