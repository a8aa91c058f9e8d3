//! Construction of the certifying obstacle: a single simple polygon in the
//! outer face that blocks exactly the non-edges.
//!
//! Shape: a thick ring around the drawing (a miter offset of the outer
//! cycle at clearance `mu` for the inner boundary, at `4 mu` for the outer
//! boundary), opened into one simple polygon by a thin kinked channel at a
//! ring corner whose direction is parallel to no vertex-pair line. The
//! construction itself is heuristic with shrinking parameters; the returned
//! polygon is accepted only after the visibility graph of the points with
//! the obstacle equals the drawn graph edge for edge.

use crate::embed::Drawing;
use crate::geometry::rational::{
    closed_segments_intersect, dyadic_round, floor_log2, orient2d, pow2_le_sqrt, rat, rat_i, Rat,
    RationalPoint,
};
use crate::geometry::verify::{outer_witnesses_scaled, segs_closed_intersect_i, HomogWitness};
use crate::geometry::visibility::{point_in_polygon_scaled, visibility_graph};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use crate::graph::Vertex;
use crate::recognize::InnerChordalGraph;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolygonError {
    #[error("polygon needs at least 3 vertices")]
    TooFewVertices,
    #[error("polygon has zero area")]
    ZeroArea,
    #[error("consecutive polygon vertices coincide or are collinear")]
    DegenerateCorner,
    #[error("polygon boundary self-intersects")]
    SelfIntersection,
}

/// A simple polygon with counterclockwise vertex order (the constructor
/// reverses clockwise input and rejects degenerate or self-intersecting
/// boundaries).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplePolygon {
    pub vertices: Vec<RationalPoint>,
}

impl SimplePolygon {
    pub fn new(mut vertices: Vec<RationalPoint>) -> Result<SimplePolygon, PolygonError> {
        let k = vertices.len();
        if k < 3 {
            return Err(PolygonError::TooFewVertices);
        }
        let mut twice_area = Rat::zero();
        for i in 0..k {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % k];
            twice_area += &a.x * &b.y - &b.x * &a.y;
        }
        match twice_area.cmp(&Rat::zero()) {
            Ordering::Equal => return Err(PolygonError::ZeroArea),
            Ordering::Less => vertices.reverse(),
            Ordering::Greater => {}
        }
        for i in 0..k {
            let a = &vertices[(i + k - 1) % k];
            let b = &vertices[i];
            let c = &vertices[(i + 1) % k];
            if a == b || orient2d(a, b, c) == Ordering::Equal {
                return Err(PolygonError::DegenerateCorner);
            }
        }
        for i in 0..k {
            let (a, b) = (&vertices[i], &vertices[(i + 1) % k]);
            for j in (i + 1)..k {
                if j == i || (j + 1) % k == i || (i + 1) % k == j {
                    continue; // adjacent edges share exactly a vertex
                }
                let (c, d) = (&vertices[j], &vertices[(j + 1) % k]);
                if closed_segments_intersect(a, b, c, d) {
                    return Err(PolygonError::SelfIntersection);
                }
            }
        }
        Ok(SimplePolygon { vertices })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Even-odd containment for points not on the boundary.
    pub fn contains(&self, p: &RationalPoint) -> bool {
        let k = self.vertices.len();
        let mut inside = false;
        for i in 0..k {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % k];
            if (a.x > p.x) != (b.x > p.x) {
                let o = orient2d(a, b, p);
                let toggles = if b.x > p.x {
                    o == Ordering::Less
                } else {
                    o == Ordering::Greater
                };
                if toggles {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn on_boundary(&self, p: &RationalPoint) -> bool {
        let k = self.vertices.len();
        (0..k).any(|i| {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % k];
            crate::geometry::rational::on_closed_segment(p, a, b)
        })
    }
}

#[derive(Debug, Error)]
pub enum ObstacleError {
    #[error("non-edge ({0},{1}) never meets the outer face; run the verifier first")]
    NoOuterWitness(Vertex, Vertex),
    #[error("drawing is degenerate: {0}")]
    Degenerate(String),
    #[error(
        "obstacle construction failed to verify after {attempts} attempts; last defect: {defect}"
    )]
    FailedToVerify { attempts: usize, defect: String },
}

const MAX_ATTEMPTS: usize = 48;

/// Builds and certifies the obstacle for a verified drawing. The
/// postcondition is checked exactly before returning: the visibility graph
/// of the drawing's points with the obstacle equals the drawn graph.
pub fn build_obstacle(
    d: &Drawing,
    ic: &InnerChordalGraph,
) -> Result<SimplePolygon, ObstacleError> {
    let g = d.graph();
    let cycle_pts: Vec<RationalPoint> = ic
        .outer_cycle
        .iter()
        .map(|&v| d.point(v).clone())
        .collect();

    // witnesses: one homogeneous point in the open outer face per
    // non-edge, in lattice units
    let (scale, witnesses) =
        outer_witnesses_scaled(d).map_err(|e| ObstacleError::Degenerate(e.to_string()))?;
    let mut expected_non_edges = 0;
    for p in g.vertices() {
        for q in (p + 1)..g.n() {
            if !g.has_edge(p, q) {
                expected_non_edges += 1;
            }
        }
    }
    if witnesses.len() != expected_non_edges {
        // some non-edge is fully covered by bounded faces
        let mut seen: std::collections::BTreeSet<(Vertex, Vertex)> =
            witnesses.iter().map(|&(pq, _)| pq).collect();
        for p in g.vertices() {
            for q in (p + 1)..g.n() {
                if !g.has_edge(p, q) && !seen.remove(&(p, q)) {
                    return Err(ObstacleError::NoOuterWitness(p, q));
                }
            }
        }
    }

    // smallest squared feature distance of the drawing and smallest
    // squared witness-to-boundary distance, exact and division free: the
    // minimum is tracked as an integer fraction in lattice units
    let lp: Vec<(BigInt, BigInt)> = d
        .points
        .iter()
        .map(|p| {
            (
                p.x.numer() * (&scale / p.x.denom()),
                p.y.numer() * (&scale / p.y.denom()),
            )
        })
        .collect();
    let mut best: Option<(BigInt, BigInt)> = None; // num / den
    let mut consider = |num: BigInt, den: BigInt| {
        let better = match &best {
            None => true,
            Some((bn, bd)) => &num * bd < bn * &den,
        };
        if better {
            best = Some((num, den));
        }
    };
    for (i, p) in lp.iter().enumerate() {
        for q in lp.iter().skip(i + 1) {
            let dx = &q.0 - &p.0;
            let dy = &q.1 - &p.1;
            consider(&dx * &dx + &dy * &dy, BigInt::one());
        }
    }
    // squared distance of the homogeneous point (x/w, y/w) to segment ab
    let homog_seg_dist2 = |x: &BigInt,
                           y: &BigInt,
                           w: &BigInt,
                           a: &(BigInt, BigInt),
                           b: &(BigInt, BigInt)|
     -> (BigInt, BigInt) {
        let abx = &b.0 - &a.0;
        let aby = &b.1 - &a.1;
        let apx = x - &a.0 * w;
        let apy = y - &a.1 * w; // scaled by w
        let dot = &abx * &apx + &aby * &apy;
        let len2 = &abx * &abx + &aby * &aby;
        let w2 = w * w;
        if dot <= BigInt::ZERO {
            (&apx * &apx + &apy * &apy, w2)
        } else if dot >= &len2 * w2.clone() {
            let bpx = x - &b.0 * w;
            let bpy = y - &b.1 * w;
            (&bpx * &bpx + &bpy * &bpy, w * w)
        } else {
            let cross = &abx * &apy - &aby * &apx;
            (&cross * &cross, len2 * w * w)
        }
    };
    let one = BigInt::one();
    for e in g.edges() {
        let (a, b) = e.endpoints();
        for (v, p) in lp.iter().enumerate() {
            if v != a && v != b {
                let (num, den) = homog_seg_dist2(&p.0, &p.1, &one, &lp[a], &lp[b]);
                consider(num, den);
            }
        }
    }
    let cyc: Vec<usize> = ic.outer_cycle.clone();
    let k = cyc.len();
    for (_, (x, y, w)) in &witnesses {
        for i in 0..k {
            let (num, den) = homog_seg_dist2(x, y, w, &lp[cyc[i]], &lp[cyc[(i + 1) % k]]);
            consider(num, den);
        }
    }
    let (num, den) = best.ok_or_else(|| ObstacleError::Degenerate("empty drawing".into()))?;
    if num <= BigInt::ZERO {
        return Err(ObstacleError::Degenerate("coincident features".into()));
    }
    // back to real units: lattice distances carry a factor of scale^2
    let min_sq = Rat::new(num, den * &scale * &scale);
    let mut mu = pow2_le_sqrt(&(&min_sq / rat_i(16)));
    let mut eps = rat(1, 8);
    let mut last_defect = String::from("not attempted");

    for attempt in 0..MAX_ATTEMPTS {
        match attempt_obstacle(d, &cycle_pts, &lp, &scale, &witnesses, &mu, &eps, attempt) {
            Ok(poly) => return Ok(poly),
            Err(defect) => last_defect = defect,
        }
        mu /= rat_i(2);
        eps /= rat_i(2);
    }
    Err(ObstacleError::FailedToVerify {
        attempts: MAX_ATTEMPTS,
        defect: last_defect,
    })
}

#[allow(clippy::too_many_arguments)]
fn attempt_obstacle(
    d: &Drawing,
    cycle_pts: &[RationalPoint],
    lp: &[(BigInt, BigInt)],
    scale: &BigInt,
    witnesses: &[HomogWitness],
    mu: &Rat,
    eps: &Rat,
    attempt: usize,
) -> Result<SimplePolygon, String> {
    let k = cycle_pts.len();
    let ones: Vec<Rat> = vec![rat_i(1); k];
    // the outer ring's per-edge offsets carry uneven post-rounding jitter
    // with distinct factors on adjacent edges; exactly proportional rings
    // would make every cycle vertex collinear with its two miter corners
    // and violate general position structurally
    let mut jitter: Vec<Rat> = (0..k)
        .map(|i| rat_i(1) + rat(((i * 7919) % 64 + 1) as i64, 256))
        .collect();
    if k > 1 && jitter[k - 1] == jitter[0] {
        jitter[k - 1] = &jitter[k - 1] + rat(1, 256);
    }
    let ring_in = offset_ring(cycle_pts, mu, &ones).ok_or("inner ring degenerate")?;
    let ring_out =
        offset_ring(cycle_pts, &(mu * rat_i(4)), &jitter).ok_or("outer ring degenerate")?;

    // both rings simple
    SimplePolygon::new(ring_in.clone()).map_err(|e| format!("inner ring: {e}"))?;
    SimplePolygon::new(ring_out.clone()).map_err(|e| format!("outer ring: {e}"))?;

    // common integer lattice for the preflight checks: ring corners are
    // dyadic by construction, so the scales merge cheaply
    let mut att_scale = scale.clone();
    for p in ring_in.iter().chain(ring_out.iter()) {
        att_scale = att_scale.lcm(p.x.denom());
        att_scale = att_scale.lcm(p.y.denom());
    }
    let to_int = |p: &RationalPoint| -> (BigInt, BigInt) {
        (
            p.x.numer() * (&att_scale / p.x.denom()),
            p.y.numer() * (&att_scale / p.y.denom()),
        )
    };
    let rin: Vec<(BigInt, BigInt)> = ring_in.iter().map(&to_int).collect();
    let rout: Vec<(BigInt, BigInt)> = ring_out.iter().map(&to_int).collect();
    let rescale = &att_scale / scale; // multiplies drawing-lattice values
    let lpz: Vec<(BigInt, BigInt)> = lp
        .iter()
        .map(|p| (&p.0 * &rescale, &p.1 * &rescale))
        .collect();
    let one = BigInt::one();

    let on_ring = |x: &BigInt, y: &BigInt, w: &BigInt, ring: &[(BigInt, BigInt)]| -> bool {
        let kk = ring.len();
        (0..kk).any(|i| {
            let a = &ring[i];
            let b = &ring[(i + 1) % kk];
            let o = (&b.0 - &a.0) * (y - &a.1 * w) - (&b.1 - &a.1) * (x - &a.0 * w);
            if o != BigInt::ZERO {
                return false;
            }
            let in_x = (&a.0 * w).min(&b.0 * w) <= *x && *x <= (&a.0 * w).max(&b.0 * w);
            let in_y = (&a.1 * w).min(&b.1 * w) <= *y && *y <= (&a.1 * w).max(&b.1 * w);
            in_x && in_y
        })
    };

    // nesting, drawing strictly inside, witnesses strictly outside
    for p in &rin {
        if !point_in_polygon_scaled(p, &one, &rout) {
            return Err("rings not nested".into());
        }
    }
    for p in &lpz {
        if !point_in_polygon_scaled(p, &one, &rin) || on_ring(&p.0, &p.1, &one, &rin) {
            return Err("drawing not strictly inside the inner ring".into());
        }
    }
    for e in d.graph().edges() {
        let (a, b) = e.endpoints();
        for i in 0..k {
            if segs_closed_intersect_i(&lpz[a], &lpz[b], &rin[i], &rin[(i + 1) % k]) {
                return Err("inner ring touches a drawn edge".into());
            }
        }
    }
    for (pq, (x, y, w)) in witnesses {
        let xs = x * &rescale;
        let ys = y * &rescale;
        if point_in_polygon_scaled(&(xs.clone(), ys.clone()), w, &rin) || on_ring(&xs, &ys, w, &rin)
        {
            return Err(format!("witness of non-edge {pq:?} inside the inner ring"));
        }
    }

    // slit corner: channel direction must be parallel to no vertex-pair line
    let mut candidates = Vec::new();
    for j in 0..k {
        let dir = (&rout[j].0 - &rin[j].0, &rout[j].1 - &rin[j].1);
        let ok = lpz.iter().enumerate().all(|(i, p)| {
            lpz.iter().skip(i + 1).all(|q| {
                let pdx = &q.0 - &p.0;
                let pdy = &q.1 - &p.1;
                (&dir.0 * pdy - &dir.1 * pdx) != BigInt::ZERO
            })
        });
        if ok {
            candidates.push(j);
        }
    }
    if candidates.is_empty() {
        return Err("no slit direction avoids the vertex-pair lines".into());
    }
    let j = candidates[attempt % candidates.len()];

    let jm = (j + k - 1) % k;
    let jp = (j + 1) % k;
    let lerp = |a: &RationalPoint, b: &RationalPoint, t: &Rat| -> RationalPoint {
        RationalPoint::new(&a.x + (&b.x - &a.x) * t, &a.y + (&b.y - &a.y) * t)
    };
    // mouth points near the chosen inner corner, outlet points near the
    // outer corner
    let eps2 = eps * rat(65, 64); // slightly asymmetric cut
    let m_prev = lerp(&ring_in[j], &ring_in[jm], eps);
    let m_next = lerp(&ring_in[j], &ring_in[jp], &eps2);
    let out_prev = lerp(&ring_out[j], &ring_out[jm], eps);
    let out_next = lerp(&ring_out[j], &ring_out[jp], &eps2);

    // one lateral kink in the middle of the channel, larger than its width
    let axis = ring_out[j].sub(&ring_in[j]);
    let perp = (axis.1.clone(), -axis.0.clone());
    let perp_n2 = &perp.0 * &perp.0 + &perp.1 * &perp.1;
    if perp_n2.is_zero() {
        return Err("zero channel axis".into());
    }
    let lambda = pow2_le_sqrt(&(mu * mu / (&perp_n2 * rat_i(4))));
    let jog = (&perp.0 * &lambda, &perp.1 * &lambda);
    let kink1 = m_prev.midpoint(&out_prev).add_vec(&jog);
    let kink2 = m_next.midpoint(&out_next).add_vec(&jog);

    // single boundary walk: outer ring ccw with its corner j cut open,
    // wall in, inner ring clockwise (the hole), wall out
    let mut walk: Vec<RationalPoint> = Vec::with_capacity(2 * k + 4);
    walk.push(out_next.clone());
    let mut i = jp;
    while i != j {
        walk.push(ring_out[i].clone());
        i = (i + 1) % k;
    }
    walk.push(out_prev.clone());
    walk.push(kink1);
    walk.push(m_prev.clone());
    let mut i = jm;
    while i != j {
        walk.push(ring_in[i].clone());
        i = (i + k - 1) % k;
    }
    walk.push(m_next.clone());
    walk.push(kink2);

    let obstacle = SimplePolygon::new(walk).map_err(|e| format!("slit polygon: {e}"))?;

    // the exact certificate: visibility equality, edge for edge
    let vg = visibility_graph(&d.points, std::slice::from_ref(&obstacle)).map_err(|e| {
        if let crate::geometry::visibility::VisibilityError::CollinearTriple(a, b, c) = e {
            let all: Vec<&RationalPoint> =
                d.points.iter().chain(obstacle.vertices.iter()).collect();
            format!(
                "visibility check rejected the scene: {e}; coords {} {} {}",
                all[a], all[b], all[c]
            )
        } else {
            format!("visibility check rejected the scene: {e}")
        }
    })?;
    if vg.edges() != d.graph().edges() {
        let drawn: std::collections::BTreeSet<_> = d.graph().edges().iter().collect();
        let seen: std::collections::BTreeSet<_> = vg.edges().iter().collect();
        if let Some(extra) = seen.difference(&drawn).next() {
            return Err(format!("non-edge {extra:?} is not blocked"));
        }
        if let Some(missing) = drawn.difference(&seen).next() {
            return Err(format!("edge {missing:?} is wrongly blocked"));
        }
    }
    Ok(obstacle)
}

/// Miter offset of a counterclockwise polygon: each edge line is moved
/// outward by roughly `amount` (within a factor of two, scaled by the
/// per-edge jitter), and consecutive offset lines are intersected.
fn offset_ring(
    cycle: &[RationalPoint],
    amount: &Rat,
    jitter: &[Rat],
) -> Option<Vec<RationalPoint>> {
    let k = cycle.len();
    let mut shifted: Vec<(RationalPoint, (Rat, Rat))> = Vec::with_capacity(k);
    for i in 0..k {
        let a = &cycle[i];
        let b = &cycle[(i + 1) % k];
        let dir = b.sub(a);
        // outward of a ccw polygon is to the right of the edge direction
        let nrm = (dir.1.clone(), -dir.0.clone());
        let n2 = &nrm.0 * &nrm.0 + &nrm.1 * &nrm.1;
        if n2.is_zero() {
            return None;
        }
        let lam = pow2_le_sqrt(&(amount * amount / (n2 * rat_i(4)))) * &jitter[i];
        let off = (&nrm.0 * &lam, &nrm.1 * &lam);
        shifted.push((a.add_vec(&off), dir));
    }
    // miter intersections carry huge denominators; snapping them to a fine
    // dyadic grid keeps every later exact computation on small integers,
    // and all placement properties are re-verified afterwards anyway
    let grid = floor_log2(amount) - 24;
    let mut ring = Vec::with_capacity(k);
    for i in 0..k {
        let prev = &shifted[(i + k - 1) % k];
        let cur = &shifted[i];
        let exact = line_intersection(&prev.0, &prev.1, &cur.0, &cur.1)?;
        ring.push(RationalPoint::new(
            dyadic_round(&exact.x, grid),
            dyadic_round(&exact.y, grid),
        ));
    }
    Some(ring)
}

/// Intersection of the lines a + t*da and b + s*db.
fn line_intersection(
    a: &RationalPoint,
    da: &(Rat, Rat),
    b: &RationalPoint,
    db: &(Rat, Rat),
) -> Option<RationalPoint> {
    let denom = &da.0 * &db.1 - &da.1 * &db.0;
    if denom.is_zero() {
        return None;
    }
    let diff = b.sub(a);
    let t = (&diff.0 * &db.1 - &diff.1 * &db.0) / denom;
    Some(RationalPoint::new(&a.x + &da.0 * &t, &a.y + &da.1 * &t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use num_traits::Signed;
    use crate::orient::{greedy_outerplanar, solve_dp, ChordOrientation};
    use crate::recognize::{build_construction_tree, recognize};

    fn p(x: i64, y: i64) -> RationalPoint {
        RationalPoint::from_ints(x, y)
    }

    #[test]
    fn polygon_validation() {
        assert!(SimplePolygon::new(vec![p(0, 0), p(1, 0)]).is_err());
        assert!(SimplePolygon::new(vec![p(0, 0), p(2, 0), p(1, 0)]).is_err()); // collinear
        let bow = SimplePolygon::new(vec![p(0, 0), p(2, 2), p(2, 0), p(0, 2)]);
        assert!(matches!(bow, Err(PolygonError::ZeroArea)));
        let crossing =
            SimplePolygon::new(vec![p(0, 0), p(4, 0), p(4, 4), p(2, -2), p(0, 4)]);
        assert!(matches!(crossing, Err(PolygonError::SelfIntersection)));
        // clockwise input is normalized to counterclockwise
        let sq = SimplePolygon::new(vec![p(0, 0), p(0, 1), p(1, 1), p(1, 0)]).unwrap();
        let mut area = Rat::zero();
        let k = sq.vertices.len();
        for i in 0..k {
            let a = &sq.vertices[i];
            let b = &sq.vertices[(i + 1) % k];
            area += (&a.x * &b.y - &b.x * &a.y);
        }
        assert!(area.is_positive());
    }

    #[test]
    fn obstacle_for_triangle() {
        let g = Graph::build(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let ic = recognize(&g).unwrap();
        let d = crate::embed::embed(&ic, &ChordOrientation::new()).unwrap();
        let obs = build_obstacle(&d, &ic).unwrap();
        let vg = visibility_graph(&d.points, &[obs]).unwrap();
        assert_eq!(vg.edges(), g.edges());
    }

    #[test]
    fn obstacle_for_good_diamond_blocks_exactly_bd() {
        let g = Graph::build(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let ic = recognize(&g).unwrap();
        let mut o = ChordOrientation::new();
        o.insert(crate::graph::Edge::new(0, 2), 0);
        let d = crate::embed::embed(&ic, &o).unwrap();
        let obs = build_obstacle(&d, &ic).unwrap();
        let vg = visibility_graph(&d.points, &[obs]).unwrap();
        assert_eq!(vg.edges(), g.edges());
        assert!(!vg.has_edge(1, 3));
    }

    #[test]
    fn obstacle_for_fan_blocks_all_six_non_edges() {
        let mut es = Vec::new();
        for i in 1..6 {
            es.push((0, i));
        }
        for i in 1..5 {
            es.push((i, i + 1));
        }
        let g = Graph::build(6, &es).unwrap();
        let ic = recognize(&g).unwrap();
        let o = greedy_outerplanar(&ic).unwrap();
        let d = crate::embed::embed(&ic, &o).unwrap();
        let obs = build_obstacle(&d, &ic).unwrap();
        let vg = visibility_graph(&d.points, &[obs]).unwrap();
        assert_eq!(vg.edges(), g.edges());
        let non_edges = 6 * 5 / 2 - g.edge_count();
        assert_eq!(non_edges, 6);
    }

    #[test]
    fn obstacle_for_k4() {
        let g = Graph::build(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let ic = recognize(&g).unwrap();
        let t = build_construction_tree(&ic);
        let o = solve_dp(&t).unwrap();
        let d = crate::embed::embed(&ic, &o).unwrap();
        let obs = build_obstacle(&d, &ic).unwrap();
        let vg = visibility_graph(&d.points, &[obs]).unwrap();
        assert_eq!(vg.edges(), g.edges());
    }
}
