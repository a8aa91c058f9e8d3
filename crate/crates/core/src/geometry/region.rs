//! Corner regions of triangles.
//!
//! For a nondegenerate triangle `D` and a corner `u`, the region is the open
//! cone formed by intersecting the two half-planes that are bounded by the
//! sides of `D` incident to `u` and do not contain `D`. A chord of a drawing
//! is "good" exactly when the far side's vertices lie in one of these cones;
//! the verifier and the embedder both reduce to this membership test.

use super::rational::{orient2d, Rat, RationalPoint};
use num_traits::Zero;
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegionError {
    #[error("triangle is degenerate (collinear corners)")]
    DegenerateTriangle,
}

/// Open half-plane `a*x + b*y + c > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfPlane {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

impl HalfPlane {
    /// Oriented line through `p` and `q`; positive side is the left of p->q.
    pub fn left_of(p: &RationalPoint, q: &RationalPoint) -> HalfPlane {
        let a = &q.y - &p.y;
        let b = &p.x - &q.x;
        let c = -(&a * &p.x) - (&b * &p.y);
        HalfPlane { a, b, c }
    }

    pub fn eval(&self, pt: &RationalPoint) -> Rat {
        &self.a * &pt.x + &self.b * &pt.y + &self.c
    }

    pub fn strictly_contains(&self, pt: &RationalPoint) -> bool {
        self.eval(pt) > Rat::zero()
    }

    pub fn flipped(&self) -> HalfPlane {
        HalfPlane {
            a: -self.a.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
        }
    }
}

/// Open cone at a triangle corner: the intersection of the two half-planes
/// defined by the corner's sides that do not contain the triangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub apex: RationalPoint,
    pub bounds: [HalfPlane; 2],
}

impl Region {
    pub fn contains(&self, pt: &RationalPoint) -> bool {
        self.bounds[0].strictly_contains(pt) && self.bounds[1].strictly_contains(pt)
    }

    pub fn contains_all<'a, I: IntoIterator<Item = &'a RationalPoint>>(&self, pts: I) -> bool {
        pts.into_iter().all(|p| self.contains(p))
    }
}

/// The corner region of `triangle` at corner index `corner`.
pub fn region_of(triangle: &[RationalPoint; 3], corner: usize) -> Result<Region, RegionError> {
    assert!(corner < 3);
    if orient2d(&triangle[0], &triangle[1], &triangle[2]) == Ordering::Equal {
        return Err(RegionError::DegenerateTriangle);
    }
    let apex = &triangle[corner];
    let others = [&triangle[(corner + 1) % 3], &triangle[(corner + 2) % 3]];
    let bounds = [
        side_away_from(apex, others[0], others[1]),
        side_away_from(apex, others[1], others[0]),
    ];
    Ok(Region {
        apex: apex.clone(),
        bounds,
    })
}

/// Half-plane bounded by the line through `apex` and `on_line`, on the side
/// not containing `excluded`.
fn side_away_from(
    apex: &RationalPoint,
    on_line: &RationalPoint,
    excluded: &RationalPoint,
) -> HalfPlane {
    let h = HalfPlane::left_of(apex, on_line);
    if h.strictly_contains(excluded) {
        h.flipped()
    } else {
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rational::{rat, rat_i};

    fn p(x: i64, y: i64) -> RationalPoint {
        RationalPoint::from_ints(x, y)
    }

    fn d() -> [RationalPoint; 3] {
        [p(0, 0), p(4, 0), p(0, 3)]
    }

    #[test]
    fn region_at_origin_is_third_quadrant() {
        let r = region_of(&d(), 0).unwrap();
        // cone { x < 0 and y < 0 }
        assert!(r.contains(&p(-1, -1)));
        assert!(!r.contains(&p(1, -5)));
        assert!(!r.contains(&p(-1, 1)));
        assert!(!r.contains(&p(0, -1))); // on a bounding line: open cone
    }

    #[test]
    fn region_at_4_0() {
        let r = region_of(&d(), 1).unwrap();
        // cone { y < 0 and 3x + 4y > 12 }
        assert!(r.contains(&p(6, -1)));
        assert!(!r.contains(&p(6, 1)));
        assert!(!r.contains(&p(3, -1)));
        let boundary = RationalPoint::new(rat_i(6), rat(-3, 2)); // on 3x+4y=12
        assert!(!r.contains(&boundary));
    }

    #[test]
    fn rejects_degenerate() {
        let t = [p(0, 0), p(1, 1), p(2, 2)];
        assert_eq!(region_of(&t, 0), Err(RegionError::DegenerateTriangle));
    }

    #[test]
    fn opposite_corner_regions_are_disjoint_samples() {
        // sampled membership: no point is in the regions of two corners
        let tri = d();
        let regions: Vec<Region> = (0..3).map(|i| region_of(&tri, i).unwrap()).collect();
        for x in -6..=8 {
            for y in -6..=8 {
                let pt = p(x, y);
                let hits = regions.iter().filter(|r| r.contains(&pt)).count();
                assert!(hits <= 1, "point {pt} in {hits} corner regions");
            }
        }
    }
}
