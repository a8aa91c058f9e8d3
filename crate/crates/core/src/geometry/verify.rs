//! The drawing verifier.
//!
//! Two independent criteria are computed and compared: the local one (every
//! chord is good, i.e. each far side sits in a corner region of the near
//! face) and the exhaustive one (every non-edge segment reaches the open
//! outer face). For plane drawings of the graphs handled here the two must
//! agree; any disagreement is flagged in the report instead of being papered
//! over.
//!
//! All decisions are exact. Internally the drawing is scaled onto an
//! integer lattice once, so the hot predicates are integer sign tests
//! without rational normalization.

use crate::embed::{classify_chord, check_rotation_realized, Drawing};
use crate::graph::Vertex;
use crate::recognize::InnerChordalGraph;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("query endpoints coincide")]
    DegenerateQuery,
    #[error("segment ({0},{1}) passes through vertex {2}; degenerate queries are rejected")]
    SegmentThroughVertex(Vertex, Vertex, Vertex),
    #[error("drawing is not planar: edges {0:?} and {1:?} intersect")]
    NotPlanar((Vertex, Vertex), (Vertex, Vertex)),
    #[error("drawing does not realize its rotation system: {0}")]
    RotationMismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordCheck {
    pub chord: (Vertex, Vertex),
    pub good: bool,
    pub toward: Option<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonEdgeCheck {
    pub pair: (Vertex, Vertex),
    pub meets_outer: bool,
}

/// Everything the verifier measured, with the verdict being the conjunction
/// of its parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub planar: bool,
    pub general_position: bool,
    pub chords: Vec<ChordCheck>,
    pub non_edges: Vec<NonEdgeCheck>,
    /// whether the local criterion (all chords good) and the exhaustive one
    /// (all non-edges meet the outer face) agree
    pub criteria_agree: bool,
    pub verdict: bool,
}

impl VerificationReport {
    pub fn all_chords_good(&self) -> bool {
        self.chords.iter().all(|c| c.good)
    }

    pub fn all_non_edges_exit(&self) -> bool {
        self.non_edges.iter().all(|n| n.meets_outer)
    }
}

/// A drawing scaled to integers: every coordinate times the common
/// denominator. Bounded faces carry their boundary walks as vertex lists.
pub(crate) struct Lattice {
    pub pts: Vec<(BigInt, BigInt)>,
    pub scale: BigInt,
    /// bounded faces as cyclic vertex walks
    pub bounded_walks: Vec<Vec<Vertex>>,
    /// bounding box per bounded walk: (min x, max x, min y, max y)
    boxes: Vec<(BigInt, BigInt, BigInt, BigInt)>,
    /// top bits of every coordinate (floor-shifted by `shift`), feeding an
    /// exact integer filter for orientation signs
    hi: Vec<(i64, i64)>,
    /// face corners incident to each vertex: (bounded face, previous and
    /// next walk vertices at that corner)
    corners_at: Vec<Vec<(usize, Vertex, Vertex)>>,
    /// bounded faces on the two sides of each undirected edge (None for
    /// the outer face)
    edge_sides: std::collections::HashMap<(Vertex, Vertex), (Option<usize>, Option<usize>)>,
}

impl Lattice {
    pub fn new(d: &Drawing) -> Lattice {
        let mut scale = BigInt::one();
        for p in &d.points {
            scale = scale.lcm(p.x.denom());
            scale = scale.lcm(p.y.denom());
        }
        let pts: Vec<(BigInt, BigInt)> = d
            .points
            .iter()
            .map(|p| {
                (
                    p.x.numer() * (&scale / p.x.denom()),
                    p.y.numer() * (&scale / p.y.denom()),
                )
            })
            .collect();
        let bounded_walks: Vec<Vec<Vertex>> = d
            .embedded
            .faces()
            .iter()
            .filter(|f| !f.is_outer)
            .map(|f| f.vertex_walk())
            .collect();
        let boxes = bounded_walks
            .iter()
            .map(|walk| {
                let pts: &Vec<(BigInt, BigInt)> = &pts;
                let mut it = walk.iter();
                let first = &pts[*it.next().expect("nonempty walk")];
                let mut bb = (first.0.clone(), first.0.clone(), first.1.clone(), first.1.clone());
                for &v in it {
                    let p = &pts[v];
                    if p.0 < bb.0 {
                        bb.0 = p.0.clone();
                    }
                    if p.0 > bb.1 {
                        bb.1 = p.0.clone();
                    }
                    if p.1 < bb.2 {
                        bb.2 = p.1.clone();
                    }
                    if p.1 > bb.3 {
                        bb.3 = p.1.clone();
                    }
                }
                bb
            })
            .collect();
        let max_bits = pts
            .iter()
            .flat_map(|p: &(BigInt, BigInt)| [p.0.bits(), p.1.bits()])
            .max()
            .unwrap_or(0);
        let shift = max_bits.saturating_sub(40);
        let to_hi = |x: &BigInt| -> i64 {
            let shifted: BigInt = x >> shift;
            i64::try_from(&shifted).expect("40-bit window fits i64")
        };
        let hi = pts.iter().map(|p| (to_hi(&p.0), to_hi(&p.1))).collect();

        // map embedded face indices to bounded indices and collect the
        // corner and side structures the face walk needs
        let mut bounded_of_face = vec![None; d.embedded.faces().len()];
        let mut bi = 0;
        for (fi, f) in d.embedded.faces().iter().enumerate() {
            if !f.is_outer {
                bounded_of_face[fi] = Some(bi);
                bi += 1;
            }
        }
        let mut corners_at: Vec<Vec<(usize, Vertex, Vertex)>> = vec![Vec::new(); pts.len()];
        for (b, walk) in bounded_walks.iter().enumerate() {
            let k = walk.len();
            for i in 0..k {
                let at = walk[i];
                let prev = walk[(i + k - 1) % k];
                let next = walk[(i + 1) % k];
                corners_at[at].push((b, prev, next));
            }
        }
        let mut edge_sides = std::collections::HashMap::new();
        for e in d.graph().edges() {
            let (fa, fb) = d.embedded.faces_of_edge(*e);
            edge_sides.insert(
                e.endpoints(),
                (bounded_of_face[fa], bounded_of_face[fb]),
            );
        }
        Lattice {
            pts,
            scale,
            bounded_walks,
            boxes,
            hi,
            corners_at,
            edge_sides,
        }
    }

    fn sides_of(&self, a: Vertex, b: Vertex) -> (Option<usize>, Option<usize>) {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.edge_sides[&key]
    }

    fn orient(&self, a: Vertex, b: Vertex, c: Vertex) -> Ordering {
        self.fast_orient(a, b, c)
            .unwrap_or_else(|| orient_i(&self.pts[a], &self.pts[b], &self.pts[c]))
    }

    /// Orientation sign from the truncated coordinates when the truncation
    /// error provably cannot flip it. Floor-shifting leaves per-coordinate
    /// errors in [0, 2^shift), so the cross product of the truncated
    /// differences is off by at most (sum of |truncated differences| + 2)
    /// units of 4^shift.
    fn fast_orient(&self, a: Vertex, b: Vertex, c: Vertex) -> Option<Ordering> {
        let (ax, ay) = self.hi[a];
        let (bx, by) = self.hi[b];
        let (cx, cy) = self.hi[c];
        let dbx = (bx - ax) as i128;
        let dby = (by - ay) as i128;
        let dcx = (cx - ax) as i128;
        let dcy = (cy - ay) as i128;
        let cross = dbx * dcy - dby * dcx;
        let bound = dbx.abs() + dby.abs() + dcx.abs() + dcy.abs() + 2;
        if cross > bound {
            Some(Ordering::Greater)
        } else if cross < -bound {
            Some(Ordering::Less)
        } else {
            None
        }
    }
}

pub(crate) fn orient_i(
    a: &(BigInt, BigInt),
    b: &(BigInt, BigInt),
    c: &(BigInt, BigInt),
) -> Ordering {
    let abx = &b.0 - &a.0;
    let aby = &b.1 - &a.1;
    let acx = &c.0 - &a.0;
    let acy = &c.1 - &a.1;
    (abx * acy).cmp(&(aby * acx))
}

/// Exact parameter along a segment: `num/den` with `den > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Frac {
    num: BigInt,
    den: BigInt,
}

impl Frac {
    fn new(num: BigInt, den: BigInt) -> Frac {
        if den.is_negative() {
            Frac {
                num: -num,
                den: -den,
            }
        } else {
            Frac { num, den }
        }
    }

    fn zero() -> Frac {
        Frac {
            num: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    fn one() -> Frac {
        Frac {
            num: BigInt::one(),
            den: BigInt::one(),
        }
    }

    fn cmp_frac(&self, o: &Frac) -> Ordering {
        (&self.num * &o.den).cmp(&(&o.num * &self.den))
    }

    fn midpoint(&self, o: &Frac) -> Frac {
        Frac::new(
            &self.num * &o.den + &o.num * &self.den,
            BigInt::from(2) * &self.den * &o.den,
        )
    }
}

/// Coverage engine for outer-face queries on one drawing.
pub(crate) struct OuterCoverage<'a> {
    lat: &'a Lattice,
}

impl<'a> OuterCoverage<'a> {
    pub fn new(lat: &'a Lattice) -> Self {
        OuterCoverage { lat }
    }

    /// The parameter intervals of the open segment (p,q) that are NOT
    /// covered by any closed bounded face; the segment meets the open outer
    /// face exactly when this is nonempty.
    fn uncovered(&self, p: Vertex, q: Vertex) -> Result<Vec<(Frac, Frac)>, VerifyError> {
        if p == q {
            return Err(VerifyError::DegenerateQuery);
        }
        // reject queries passing through any other vertex exactly
        let pts = &self.lat.pts;
        for (w, pw) in pts.iter().enumerate() {
            if w != p
                && w != q
                && orient_i(&pts[p], &pts[q], pw) == Ordering::Equal
                && strictly_within(&pts[p], &pts[q], pw)
            {
                return Err(VerifyError::SegmentThroughVertex(p, q, w));
            }
        }
        let (pp, pq) = (&pts[p], &pts[q]);
        let seg_box = (
            pp.0.clone().min(pq.0.clone()),
            pp.0.clone().max(pq.0.clone()),
            pp.1.clone().min(pq.1.clone()),
            pp.1.clone().max(pq.1.clone()),
        );
        let mut covered: Vec<(Frac, Frac)> = Vec::new();
        for (walk, bb) in self.lat.bounded_walks.iter().zip(&self.lat.boxes) {
            if bb.1 < seg_box.0 || seg_box.1 < bb.0 || bb.3 < seg_box.2 || seg_box.3 < bb.2 {
                continue; // face box disjoint from the segment box
            }
            self.face_intervals(p, q, walk, &mut covered)?;
        }
        covered.sort_by(|a, b| a.0.cmp_frac(&b.0));
        let mut gaps = Vec::new();
        let mut reach = Frac::zero();
        for (a, b) in covered {
            if a.cmp_frac(&reach) == Ordering::Greater {
                gaps.push((reach.clone(), a.clone()));
            }
            if b.cmp_frac(&reach) == Ordering::Greater {
                reach = b;
            }
        }
        if reach.cmp_frac(&Frac::one()) == Ordering::Less {
            gaps.push((reach, Frac::one()));
        }
        Ok(gaps)
    }

    /// Appends the parameter intervals of segment (p,q) covered by the
    /// closed region of one face walk.
    fn face_intervals(
        &self,
        p: Vertex,
        q: Vertex,
        walk: &[Vertex],
        out: &mut Vec<(Frac, Frac)>,
    ) -> Result<(), VerifyError> {
        let pts = &self.lat.pts;
        // quick exact reject: all walk vertices strictly on one side of the
        // line through p and q
        let mut side = Ordering::Equal;
        let mut mixed = false;
        for &w in walk {
            let o = self.lat.orient(p, q, w);
            if o == Ordering::Equal {
                mixed = true;
                break;
            }
            if side == Ordering::Equal {
                side = o;
            } else if side != o {
                mixed = true;
                break;
            }
        }
        if !mixed {
            return Ok(());
        }

        // breakpoints: proper crossings of (p,q) with boundary edges, plus
        // the segment ends
        let mut ts: Vec<Frac> = vec![Frac::zero(), Frac::one()];
        let k = walk.len();
        for i in 0..k {
            let (a, b) = (walk[i], walk[(i + 1) % k]);
            if a == p || a == q || b == p || b == q {
                continue; // contact at a shared vertex is t = 0 or 1
            }
            let oa = self.lat.orient(p, q, a);
            let ob = self.lat.orient(p, q, b);
            if oa == Ordering::Equal && ob == Ordering::Equal {
                // edge collinear with the query line; overlap would put a
                // drawn vertex inside an edge, which valid drawings exclude
                if strictly_within(&pts[p], &pts[q], &pts[a])
                    || strictly_within(&pts[p], &pts[q], &pts[b])
                    || strictly_within(&pts[a], &pts[b], &pts[p])
                {
                    return Err(VerifyError::SegmentThroughVertex(p, q, a));
                }
                continue;
            }
            if oa == Ordering::Equal || ob == Ordering::Equal {
                // an endpoint on the query line but outside the open
                // segment (inside was rejected upfront): no crossing here
                continue;
            }
            if oa == ob {
                continue;
            }
            let op = orient_i(&pts[a], &pts[b], &pts[p]);
            let oq = orient_i(&pts[a], &pts[b], &pts[q]);
            if op == Ordering::Equal || oq == Ordering::Equal || op == oq {
                continue;
            }
            // proper crossing: t = cross(ab, ap) / (cross(ab, ap) - cross(ab, aq))
            let cp = cross_val(&pts[a], &pts[b], &pts[p]);
            let cq = cross_val(&pts[a], &pts[b], &pts[q]);
            ts.push(Frac::new(cp.clone(), cp - cq));
        }
        ts.sort_by(Frac::cmp_frac);
        ts.dedup_by(|a, b| a.cmp_frac(b) == Ordering::Equal);

        // classify each open piece by its midpoint
        for w in ts.windows(2) {
            let mid = w[0].midpoint(&w[1]);
            if self.point_in_walk(p, q, &mid, walk) {
                out.push((w[0].clone(), w[1].clone()));
            }
        }
        Ok(())
    }

    /// Even-odd test for the homogeneous segment point p + t(q - p).
    fn point_in_walk(&self, p: Vertex, q: Vertex, t: &Frac, walk: &[Vertex]) -> bool {
        let pts = &self.lat.pts;
        let (pp, pq) = (&pts[p], &pts[q]);
        // X/W, Y/W with W > 0
        let w = &t.den;
        let x = &pp.0 * w + &t.num * (&pq.0 - &pp.0);
        let y = &pp.1 * w + &t.num * (&pq.1 - &pp.1);
        let mut inside = false;
        let k = walk.len();
        for i in 0..k {
            let a = &pts[walk[i]];
            let b = &pts[walk[(i + 1) % k]];
            let ax_right = &a.0 * w > x;
            let bx_right = &b.0 * w > x;
            if ax_right == bx_right {
                continue;
            }
            // sign of orient(a, b, point)
            let o = ((&b.0 - &a.0) * (&y - &a.1 * w)).cmp(&((&b.1 - &a.1) * (&x - &a.0 * w)));
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
}

impl<'a> OuterCoverage<'a> {
    /// Whether the open segment between vertices `p` and `q` meets the open
    /// outer face, decided by walking the segment through the face
    /// structure: it meets the outer face exactly when the walk exits
    /// through an outer-bordering edge (or starts in the outer wedge at
    /// `p`). Semantically identical to checking that the face intervals do
    /// not cover (0,1); the interval route remains as the reference
    /// implementation.
    pub fn meets_outer_fast(&self, p: Vertex, q: Vertex) -> Result<bool, VerifyError> {
        Ok(self.first_outer_exit(p, q)?.is_some())
    }

    /// Parameter at which the segment first leaves the bounded faces into
    /// the open outer face, if it ever does. Zero means the segment starts
    /// in the outer wedge at `p`.
    fn first_outer_exit(&self, p: Vertex, q: Vertex) -> Result<Option<Frac>, VerifyError> {
        if p == q {
            return Err(VerifyError::DegenerateQuery);
        }
        let lat = self.lat;
        let pts = &lat.pts;

        // which face does the open segment leave p into?
        let mut current: Option<usize> = None;
        for &(face, prev, next) in &lat.corners_at[p] {
            // interior wedge at this corner sweeps counterclockwise from
            // the direction to `next` around to the direction to `prev`
            let o_uq = lat.orient(p, next, q); // cross(next - p, q - p)
            let o_qv = lat.orient(p, q, prev); // cross(q - p, prev - p)
            let o_uv = lat.orient(p, next, prev);
            if o_uq == Ordering::Equal {
                return Err(VerifyError::SegmentThroughVertex(p, q, next));
            }
            if o_qv == Ordering::Equal {
                return Err(VerifyError::SegmentThroughVertex(p, q, prev));
            }
            let inside = match o_uv {
                Ordering::Greater => o_uq == Ordering::Greater && o_qv == Ordering::Greater,
                Ordering::Less => o_uq == Ordering::Greater || o_qv == Ordering::Greater,
                Ordering::Equal => {
                    return Err(VerifyError::SegmentThroughVertex(p, q, next));
                }
            };
            if inside {
                current = Some(face);
                break;
            }
        }
        let Some(mut face) = current else {
            return Ok(Some(Frac::zero())); // the outer wedge at p contains the start
        };

        let mut t_in = Frac::zero();
        for _ in 0..lat.edge_sides.len() + 2 {
            let walk = &lat.bounded_walks[face];
            let k = walk.len();
            // earliest boundary crossing strictly after t_in
            let mut best: Option<(Frac, Vertex, Vertex)> = None;
            for i in 0..k {
                let (a, b) = (walk[i], walk[(i + 1) % k]);
                if a == p || a == q || b == p || b == q {
                    continue;
                }
                let oa = lat.orient(p, q, a);
                let ob = lat.orient(p, q, b);
                if oa == Ordering::Equal || ob == Ordering::Equal {
                    let on = if oa == Ordering::Equal { a } else { b };
                    if strictly_within(&pts[p], &pts[q], &pts[on]) {
                        return Err(VerifyError::SegmentThroughVertex(p, q, on));
                    }
                    continue;
                }
                if oa == ob {
                    continue;
                }
                let op = orient_i(&pts[a], &pts[b], &pts[p]);
                let oq = orient_i(&pts[a], &pts[b], &pts[q]);
                if op == Ordering::Equal || oq == Ordering::Equal || op == oq {
                    continue;
                }
                let cp = cross_val(&pts[a], &pts[b], &pts[p]);
                let cq = cross_val(&pts[a], &pts[b], &pts[q]);
                let t = Frac::new(cp.clone(), cp - cq);
                if t.cmp_frac(&t_in) == Ordering::Greater
                    && best
                        .as_ref()
                        .is_none_or(|(bt, _, _)| t.cmp_frac(bt) == Ordering::Less)
                {
                    best = Some((t, a, b));
                }
            }
            match best {
                None => return Ok(None), // segment ends at q inside this face
                Some((t, a, b)) => {
                    let (sa, sb) = lat.sides_of(a, b);
                    let next_face = if sa == Some(face) { sb } else { sa };
                    match next_face {
                        None => return Ok(Some(t)), // crossed into the outer face
                        Some(f) => {
                            face = f;
                            t_in = t;
                        }
                    }
                }
            }
        }
        Err(VerifyError::DegenerateQuery)
    }
}

fn cross_val(a: &(BigInt, BigInt), b: &(BigInt, BigInt), c: &(BigInt, BigInt)) -> BigInt {
    (&b.0 - &a.0) * (&c.1 - &a.1) - (&b.1 - &a.1) * (&c.0 - &a.0)
}

fn strictly_within(p: &(BigInt, BigInt), q: &(BigInt, BigInt), x: &(BigInt, BigInt)) -> bool {
    // x assumed collinear with p,q: strictly between them?
    let lox = p.0.clone().min(q.0.clone());
    let hix = p.0.clone().max(q.0.clone());
    let loy = p.1.clone().min(q.1.clone());
    let hiy = p.1.clone().max(q.1.clone());
    (lox <= x.0 && x.0 <= hix && loy <= x.1 && x.1 <= hiy) && x != p && x != q
}

/// True iff some open piece of the segment between vertices `p` and `q`
/// lies in the open outer face, computed by collecting the parameter
/// interval each bounded face covers and testing whether the union covers
/// the whole of (0,1).
pub fn segment_intersects_outer(d: &Drawing, p: Vertex, q: Vertex) -> Result<bool, VerifyError> {
    let lat = Lattice::new(d);
    let cov = OuterCoverage::new(&lat);
    Ok(!cov.uncovered(p, q)?.is_empty())
}

/// Good-chord test with its direction witness: `Some(x)` when the far
/// side's vertex set sits in the corner regions at endpoint `x` (and the
/// mirrored containment holds), `None` when the chord is not good.
pub fn chord_is_good(
    d: &Drawing,
    ic: &InnerChordalGraph,
    chord: crate::graph::Edge,
) -> Result<Option<Vertex>, crate::embed::DeriveError> {
    match classify_chord(d, ic, chord) {
        Ok((x, _)) => Ok(Some(x)),
        Err(crate::embed::DeriveError::ChordNotGood(_, _)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Both outer-face routes side by side: the interval-cover reference and
/// the face walk. They must agree; exposed for differential testing.
pub fn outer_routes(d: &Drawing, p: Vertex, q: Vertex) -> Result<(bool, bool), VerifyError> {
    let lat = Lattice::new(d);
    let cov = OuterCoverage::new(&lat);
    let by_cover = !cov.uncovered(p, q)?.is_empty();
    let by_walk = cov.meets_outer_fast(p, q)?;
    Ok((by_cover, by_walk))
}

/// One witness per non-edge that reaches the outer face: a homogeneous
/// point (x, y, w) in lattice units (real position x/(w*s), y/(w*s) for the
/// returned scale s). The witness sits halfway between the first
/// outer-face entry of the segment and the next drawn edge it crosses: on
/// that stretch the segment crosses nothing, so it stays in the outer face
/// it just entered.
pub(crate) type HomogWitness = ((Vertex, Vertex), (BigInt, BigInt, BigInt));

pub(crate) fn outer_witnesses_scaled(
    d: &Drawing,
) -> Result<(BigInt, Vec<HomogWitness>), VerifyError> {
    let lat = Lattice::new(d);
    let scale = lat.scale.clone();
    let cov = OuterCoverage::new(&lat);
    let g = d.graph();
    let edges = g.edges();
    let mut out = Vec::new();
    for p in g.vertices() {
        for q in (p + 1)..g.n() {
            if g.has_edge(p, q) {
                continue;
            }
            let Some(t_exit) = cov.first_outer_exit(p, q)? else {
                continue;
            };
            // earliest crossing with any drawn edge strictly after the exit
            let mut t_next = Frac::one();
            let (pp, pq) = (&lat.pts[p], &lat.pts[q]);
            let _ = &pp;
            for e in edges {
                let (a, b) = e.endpoints();
                if a == p || a == q || b == p || b == q {
                    continue;
                }
                let oa = lat.orient(p, q, a);
                let ob = lat.orient(p, q, b);
                if oa == Ordering::Equal || ob == Ordering::Equal || oa == ob {
                    continue;
                }
                let (pa, pb) = (&lat.pts[a], &lat.pts[b]);
                let op = orient_i(pa, pb, pp);
                let oq = orient_i(pa, pb, pq);
                if op == Ordering::Equal || oq == Ordering::Equal || op == oq {
                    continue;
                }
                let cp = cross_val(pa, pb, pp);
                let cq = cross_val(pa, pb, pq);
                let t = Frac::new(cp.clone(), cp - cq);
                if t.cmp_frac(&t_exit) == Ordering::Greater
                    && t.cmp_frac(&t_next) == Ordering::Less
                {
                    t_next = t;
                }
            }
            let t = t_exit.midpoint(&t_next);
            let x = &pp.0 * &t.den + &t.num * (&pq.0 - &pp.0);
            let y = &pp.1 * &t.den + &t.num * (&pq.1 - &pp.1);
            out.push(((p, q), (x, y, t.den)));
        }
    }
    Ok((scale, out))
}

/// The drawing realizes its embedding only if the designated outer face is
/// the geometrically unbounded one: its boundary walk winds clockwise
/// (non-positive doubled signed area) while every bounded face winds
/// counterclockwise.
fn face_orientations_realized(lat: &Lattice, d: &Drawing) -> bool {
    for (fi, f) in d.embedded.faces().iter().enumerate() {
        let mut doubled = BigInt::zero();
        for &(a, b) in &f.boundary {
            let (pa, pb) = (&lat.pts[a], &lat.pts[b]);
            doubled += &pa.0 * &pb.1 - &pb.0 * &pa.1;
        }
        let want_positive = fi != d.embedded.outer_face();
        if want_positive != doubled.is_positive() {
            return false;
        }
    }
    true
}

fn planar_check(lat: &Lattice, d: &Drawing) -> Result<(), VerifyError> {
    let edges = d.graph().edges();
    let bad = edges
        .par_iter()
        .enumerate()
        .find_map_any(|(i, e1)| {
            for e2 in &edges[i + 1..] {
                let (a, b) = e1.endpoints();
                let (c, dd) = e2.endpoints();
                if a == c || a == dd || b == c || b == dd {
                    continue;
                }
                if segs_closed_intersect_i(&lat.pts[a], &lat.pts[b], &lat.pts[c], &lat.pts[dd]) {
                    return Some((e1.endpoints(), e2.endpoints()));
                }
            }
            None
        });
    match bad {
        Some((e1, e2)) => Err(VerifyError::NotPlanar(e1, e2)),
        None => Ok(()),
    }
}

pub(crate) fn segs_closed_intersect_i(
    a: &(BigInt, BigInt),
    b: &(BigInt, BigInt),
    c: &(BigInt, BigInt),
    d: &(BigInt, BigInt),
) -> bool {
    let d1 = orient_i(c, d, a);
    let d2 = orient_i(c, d, b);
    let d3 = orient_i(a, b, c);
    let d4 = orient_i(a, b, d);
    if d1 != Ordering::Equal
        && d2 != Ordering::Equal
        && d3 != Ordering::Equal
        && d4 != Ordering::Equal
    {
        return d1 != d2 && d3 != d4;
    }
    let in_box = |p: &(BigInt, BigInt), u: &(BigInt, BigInt), v: &(BigInt, BigInt)| {
        let (lox, hix) = if u.0 <= v.0 { (&u.0, &v.0) } else { (&v.0, &u.0) };
        let (loy, hiy) = if u.1 <= v.1 { (&u.1, &v.1) } else { (&v.1, &u.1) };
        lox <= &p.0 && &p.0 <= hix && loy <= &p.1 && &p.1 <= hiy
    };
    (d1 == Ordering::Equal && in_box(a, c, d))
        || (d2 == Ordering::Equal && in_box(b, c, d))
        || (d3 == Ordering::Equal && in_box(c, a, b))
        || (d4 == Ordering::Equal && in_box(d, a, b))
}

/// General position: no three drawn vertices collinear. Per anchor, the
/// directions to all other vertices are normalized into a half-plane and
/// sorted; equal neighbors witness a collinear triple.
pub(crate) fn general_position_check(pts: &[(BigInt, BigInt)]) -> bool {
    let n = pts.len();
    (0..n).into_par_iter().all(|i| {
        let p = &pts[i];
        let mut dirs: Vec<(BigInt, BigInt)> = Vec::with_capacity(n - 1);
        for (j, q) in pts.iter().enumerate() {
            if j == i {
                continue;
            }
            let mut dx = &q.0 - &p.0;
            let mut dy = &q.1 - &p.1;
            if dx.is_zero() && dy.is_zero() {
                return false;
            }
            if dy.is_negative() || (dy.is_zero() && dx.is_negative()) {
                dx = -dx;
                dy = -dy;
            }
            dirs.push((dx, dy));
        }
        dirs.sort_by(|a, b| (&b.0 * &a.1).cmp(&(&a.0 * &b.1)));
        !dirs
            .windows(2)
            .any(|w| &w[0].0 * &w[1].1 == &w[1].0 * &w[0].1)
    })
}

/// Full verification of a drawing of a biconnected inner-chordal plane
/// graph: planarity and rotation realization, general position, the
/// per-chord goodness criterion, the exhaustive non-edge criterion, and the
/// agreement between the two.
pub fn is_plane_oor(d: &Drawing, ic: &InnerChordalGraph) -> VerificationReport {
    let lat = Lattice::new(d);
    let planar = planar_check(&lat, d).is_ok()
        && check_rotation_realized(d).is_ok()
        && face_orientations_realized(&lat, d);
    let general_position = general_position_check(&lat.pts);

    let chords: Vec<ChordCheck> = ic
        .chords
        .iter()
        .map(|&chord| match classify_chord(d, ic, chord) {
            Ok((toward, _)) => ChordCheck {
                chord: chord.endpoints(),
                good: true,
                toward: Some(toward),
            },
            Err(_) => ChordCheck {
                chord: chord.endpoints(),
                good: false,
                toward: None,
            },
        })
        .collect();

    let g = d.graph();
    let mut pairs = Vec::new();
    for p in g.vertices() {
        for q in (p + 1)..g.n() {
            if !g.has_edge(p, q) {
                pairs.push((p, q));
            }
        }
    }
    let cov = OuterCoverage::new(&lat);
    let non_edges: Vec<NonEdgeCheck> = pairs
        .par_iter()
        .map(|&(p, q)| NonEdgeCheck {
            pair: (p, q),
            meets_outer: cov.meets_outer_fast(p, q).unwrap_or(false),
        })
        .collect();

    let local = chords.iter().all(|c| c.good);
    let exhaustive = non_edges.iter().all(|n| n.meets_outer);
    let criteria_agree = local == exhaustive;
    let verdict = planar && general_position && local && exhaustive && criteria_agree;
    VerificationReport {
        planar,
        general_position,
        chords,
        non_edges,
        criteria_agree,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rational::RationalPoint;
    use crate::graph::Graph;
    use crate::orient::greedy_outerplanar;
    use crate::recognize::recognize;

    fn diamond_drawing(points: Vec<RationalPoint>) -> (Drawing, InnerChordalGraph) {
        let g = Graph::build(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let ic = recognize(&g).unwrap();
        (
            Drawing {
                embedded: ic.embedded.clone(),
                points,
            },
            ic,
        )
    }

    fn p(x: i64, y: i64) -> RationalPoint {
        RationalPoint::from_ints(x, y)
    }

    #[test]
    fn convex_square_non_edge_is_covered() {
        let (d, _ic) = diamond_drawing(vec![p(0, 0), p(1, 0), p(1, 1), p(0, 1)]);
        // non-edge (1,3) crosses the chord and stays inside the two faces
        assert_eq!(segment_intersects_outer(&d, 1, 3), Ok(false));
    }

    #[test]
    fn good_diamond_non_edge_exits() {
        let (d, _ic) = diamond_drawing(vec![p(0, 0), p(1, 1), p(4, 0), p(-2, -1)]);
        assert_eq!(segment_intersects_outer(&d, 1, 3), Ok(true));
    }

    #[test]
    fn verifier_agrees_on_both_diamonds() {
        let (square, ic) = diamond_drawing(vec![p(0, 0), p(1, 0), p(1, 1), p(0, 1)]);
        let r = is_plane_oor(&square, &ic);
        assert!(r.planar && r.general_position);
        assert!(!r.all_chords_good());
        assert!(!r.all_non_edges_exit());
        assert!(r.criteria_agree);
        assert!(!r.verdict);

        // mirror image of the classic witness placement, oriented to match
        // the canonical embedding (cycle 0,1,2,3 counterclockwise)
        let (good, ic) = diamond_drawing(vec![p(0, 0), p(1, -1), p(4, 0), p(-2, 1)]);
        let r = is_plane_oor(&good, &ic);
        assert!(r.verdict, "report: {r:?}");
    }

    #[test]
    fn fan_pipeline_verifies() {
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
        let r = is_plane_oor(&d, &ic);
        assert!(r.verdict, "report: {r:?}");
    }

    #[test]
    fn chord_goodness_api() {
        use crate::graph::Edge;
        let (good, ic) = diamond_drawing(vec![p(0, 0), p(1, -1), p(4, 0), p(-2, 1)]);
        assert!(matches!(
            chord_is_good(&good, &ic, Edge::new(0, 2)),
            Ok(Some(0))
        ));
        let (square, ic) = diamond_drawing(vec![p(0, 0), p(1, 0), p(1, 1), p(0, 1)]);
        assert!(matches!(
            chord_is_good(&square, &ic, Edge::new(0, 2)),
            Ok(None)
        ));
        // an outer edge is rejected as a non-chord
        assert!(chord_is_good(&square, &ic, Edge::new(0, 1)).is_err());
    }

    #[test]
    fn degenerate_query_rejected() {
        // vertex 1 collinear with and between 0 and 2
        let g = Graph::build(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let ic = recognize(&g).unwrap();
        let d = Drawing {
            embedded: ic.embedded.clone(),
            points: vec![p(0, 0), p(2, 0), p(4, 0), p(2, -3)],
        };
        // the (1,3) query runs fine but the drawing has 0,1,2 collinear;
        // probing 0-2 passes through vertex 1
        assert!(matches!(
            segment_intersects_outer(&d, 0, 2),
            Err(VerifyError::SegmentThroughVertex(0, 2, 1))
        ));
    }

    #[test]
    fn k3_has_no_non_edges() {
        let g = Graph::build(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let ic = recognize(&g).unwrap();
        let d = crate::embed::embed(&ic, &Default::default()).unwrap();
        let r = is_plane_oor(&d, &ic);
        assert!(r.non_edges.is_empty());
        assert!(r.verdict);
    }

    #[test]
    fn shear_invariance_of_outer_test() {
        // applying a positive-determinant rational shear must not change
        // outcomes
        let shear = |pt: &RationalPoint| -> RationalPoint {
            // (x, y) -> (x + 2y, 3x/2 ... ) keep it simple: (x + 2y, y + x/3)
            RationalPoint::new(
                &pt.x + &pt.y * crate::geometry::rational::rat_i(2),
                &pt.y + &pt.x * crate::geometry::rational::rat(1, 3),
            )
        };
        for pts in [
            vec![p(0, 0), p(1, 0), p(1, 1), p(0, 1)],
            vec![p(0, 0), p(1, 1), p(4, 0), p(-2, -1)],
        ] {
            let (d, _) = diamond_drawing(pts.clone());
            let before = segment_intersects_outer(&d, 1, 3).unwrap();
            // symmetric in the two endpoints
            assert_eq!(segment_intersects_outer(&d, 3, 1).unwrap(), before);
            let sheared: Vec<RationalPoint> = pts.iter().map(shear).collect();
            let (d2, _) = diamond_drawing(sheared);
            let after = segment_intersects_outer(&d2, 1, 3).unwrap();
            assert_eq!(before, after);
        }
    }
}
