//! Exact rational points and the handful of sign predicates everything else
//! is built from. No floating point: every verdict in this crate reduces to
//! integer sign computations on `BigRational` / `BigInt` values.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

pub type Rat = BigRational;

pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// A point with exact rational coordinates. `BigRational` keeps itself in
/// lowest terms, so equality behaves canonically. Serializes as a pair of
/// lowest-terms strings `["p/q", "r/s"]`, never as floating point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoint {
    pub x: Rat,
    pub y: Rat,
}

impl Serialize for RationalPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (self.x.to_string(), self.y.to_string()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (x, y) = <(String, String)>::deserialize(d)?;
        Ok(RationalPoint {
            x: parse_rat(&x).map_err(serde::de::Error::custom)?,
            y: parse_rat(&y).map_err(serde::de::Error::custom)?,
        })
    }
}

impl RationalPoint {
    pub fn new(x: Rat, y: Rat) -> Self {
        RationalPoint { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        RationalPoint::new(rat_i(x), rat_i(y))
    }

    pub fn sub(&self, o: &RationalPoint) -> (Rat, Rat) {
        (&self.x - &o.x, &self.y - &o.y)
    }

    pub fn add_vec(&self, v: &(Rat, Rat)) -> RationalPoint {
        RationalPoint::new(&self.x + &v.0, &self.y + &v.1)
    }

    pub fn midpoint(&self, o: &RationalPoint) -> RationalPoint {
        let half = rat(1, 2);
        RationalPoint::new((&self.x + &o.x) * &half, (&self.y + &o.y) * &half)
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Parses the canonical `"p/q"` (or plain integer) form used in JSON files.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    Rat::from_str(s).map_err(|e| format!("bad rational {s:?}: {e}"))
}

pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

/// Sign of the cross product (b-a) x (c-a): `Greater` when the triple makes
/// a left (counterclockwise) turn, `Equal` when collinear.
pub fn orient2d(a: &RationalPoint, b: &RationalPoint, c: &RationalPoint) -> Ordering {
    let (abx, aby) = b.sub(a);
    let (acx, acy) = c.sub(a);
    (abx * acy).cmp(&(aby * acx))
}

pub fn collinear(a: &RationalPoint, b: &RationalPoint, c: &RationalPoint) -> bool {
    orient2d(a, b, c) == Ordering::Equal
}

/// True iff `p` lies on the closed segment `ab` (endpoints included).
pub fn on_closed_segment(p: &RationalPoint, a: &RationalPoint, b: &RationalPoint) -> bool {
    if !collinear(a, b, p) {
        return false;
    }
    within_box(p, a, b)
}

/// True iff `p` lies on the open segment `ab` (endpoints excluded).
pub fn on_open_segment(p: &RationalPoint, a: &RationalPoint, b: &RationalPoint) -> bool {
    on_closed_segment(p, a, b) && p != a && p != b
}

fn within_box(p: &RationalPoint, a: &RationalPoint, b: &RationalPoint) -> bool {
    let (lox, hix) = if a.x <= b.x {
        (&a.x, &b.x)
    } else {
        (&b.x, &a.x)
    };
    let (loy, hiy) = if a.y <= b.y {
        (&a.y, &b.y)
    } else {
        (&b.y, &a.y)
    };
    lox <= &p.x && &p.x <= hix && loy <= &p.y && &p.y <= hiy
}

/// Whether the closed segments `ab` and `cd` share at least one point.
pub fn closed_segments_intersect(
    a: &RationalPoint,
    b: &RationalPoint,
    c: &RationalPoint,
    d: &RationalPoint,
) -> bool {
    let d1 = orient2d(c, d, a);
    let d2 = orient2d(c, d, b);
    let d3 = orient2d(a, b, c);
    let d4 = orient2d(a, b, d);
    if d1 != Ordering::Equal
        && d2 != Ordering::Equal
        && d3 != Ordering::Equal
        && d4 != Ordering::Equal
    {
        return d1 != d2 && d3 != d4;
    }
    (d1 == Ordering::Equal && within_box(a, c, d))
        || (d2 == Ordering::Equal && within_box(b, c, d))
        || (d3 == Ordering::Equal && within_box(c, a, b))
        || (d4 == Ordering::Equal && within_box(d, a, b))
}

/// Proper crossing: interiors meet in exactly one point.
pub fn segments_cross_properly(
    a: &RationalPoint,
    b: &RationalPoint,
    c: &RationalPoint,
    d: &RationalPoint,
) -> bool {
    let d1 = orient2d(c, d, a);
    let d2 = orient2d(c, d, b);
    let d3 = orient2d(a, b, c);
    let d4 = orient2d(a, b, d);
    d1 != Ordering::Equal
        && d2 != Ordering::Equal
        && d3 != Ordering::Equal
        && d4 != Ordering::Equal
        && d1 != d2
        && d3 != d4
}

pub fn dist2(a: &RationalPoint, b: &RationalPoint) -> Rat {
    let (dx, dy) = b.sub(a);
    &dx * &dx + &dy * &dy
}

/// Squared distance from `p` to the closed segment `ab`.
pub fn dist2_point_segment(p: &RationalPoint, a: &RationalPoint, b: &RationalPoint) -> Rat {
    let (abx, aby) = b.sub(a);
    let (apx, apy) = p.sub(a);
    let len2 = &abx * &abx + &aby * &aby;
    if len2.is_zero() {
        return dist2(p, a);
    }
    let t = (&apx * &abx + &apy * &aby) / &len2;
    if t <= Rat::zero() {
        dist2(p, a)
    } else if t >= Rat::one() {
        dist2(p, b)
    } else {
        let proj = RationalPoint::new(&a.x + &abx * &t, &a.y + &aby * &t);
        dist2(p, &proj)
    }
}

/// Largest power of two `2^e` (e possibly negative) with `4^e <= q`.
/// Used to turn exact squared clearances into dyadic step lengths without
/// ever taking a square root.
pub fn pow2_le_sqrt(q: &Rat) -> Rat {
    assert!(q.is_positive(), "clearance must be positive");
    let bits = |x: &BigInt| -> i64 { x.bits() as i64 };
    // initial guess from the bit lengths of numerator and denominator
    let mut e = (bits(q.numer()) - bits(q.denom())) / 2 - 2;
    let pow4 = |e: i64| -> Rat {
        let two = BigInt::from(2);
        if e >= 0 {
            Rat::from_integer(two.pow(2 * e as u32))
        } else {
            Rat::new(BigInt::one(), two.pow((-2 * e) as u32))
        }
    };
    while &pow4(e) > q {
        e -= 1;
    }
    while pow4(e + 1) <= *q {
        e += 1;
    }
    let two = BigInt::from(2);
    if e >= 0 {
        Rat::from_integer(two.pow(e as u32))
    } else {
        Rat::new(BigInt::one(), two.pow((-e) as u32))
    }
}

/// Largest `e` with `2^e <= r`, for positive `r`.
pub fn floor_log2(r: &Rat) -> i64 {
    assert!(r.is_positive());
    let bits = |x: &BigInt| -> i64 { x.bits() as i64 };
    let mut e = bits(r.numer()) - bits(r.denom()) - 1;
    let pow2 = |e: i64| -> Rat {
        let two = BigInt::from(2);
        if e >= 0 {
            Rat::from_integer(two.pow(e as u32))
        } else {
            Rat::new(BigInt::one(), two.pow((-e) as u32))
        }
    };
    while &pow2(e) > r {
        e -= 1;
    }
    while pow2(e + 1) <= *r {
        e += 1;
    }
    e
}

/// Rounds `x` to the nearest multiple of `2^k` (ties round up; any
/// deterministic tie rule works for snapping).
pub fn dyadic_round(x: &Rat, k: i64) -> Rat {
    let two = BigInt::from(2);
    let scale = if k >= 0 {
        Rat::from_integer(two.pow(k as u32))
    } else {
        Rat::new(BigInt::one(), two.pow((-k) as u32))
    };
    let shifted = x / &scale + rat(1, 2);
    let n = shifted.floor().to_integer();
    Rat::from_integer(n) * scale
}

/// Counterclockwise comparator of directions `a-c` and `b-c` around center
/// `c`, starting from the positive x-axis. `Equal` means the two directions
/// coincide exactly (a general-position violation between distinct points).
pub fn cmp_around(c: &RationalPoint, a: &RationalPoint, b: &RationalPoint) -> Ordering {
    let half = |p: &RationalPoint| -> u8 {
        if p.y > c.y || (p.y == c.y && p.x > c.x) {
            0
        } else {
            1
        }
    };
    let (ha, hb) = (half(a), half(b));
    if ha != hb {
        return ha.cmp(&hb);
    }
    match orient2d(c, a, b) {
        Ordering::Greater => Ordering::Less, // a strictly before b going ccw
        Ordering::Less => Ordering::Greater,
        Ordering::Equal => Ordering::Equal,
    }
}

/// True iff some pair among `pts` is collinear with `p` (so `p` would break
/// general position). Directions from `p` are normalized into a half-plane
/// and sorted; equal normalized directions witness a collinear triple.
pub fn breaks_general_position(p: &RationalPoint, pts: &[&RationalPoint]) -> bool {
    let mut dirs: Vec<(Rat, Rat)> = Vec::with_capacity(pts.len());
    for q in pts {
        let (mut dx, mut dy) = q.sub(p);
        if dx.is_zero() && dy.is_zero() {
            return true; // coincident points
        }
        // flip into the upper half-plane (y > 0, or y == 0 and x > 0)
        if dy.is_negative() || (dy.is_zero() && dx.is_negative()) {
            dx = -dx;
            dy = -dy;
        }
        dirs.push((dx, dy));
    }
    dirs.sort_by(|a, b| (&b.0 * &a.1).cmp(&(&a.0 * &b.1)));
    dirs.windows(2)
        .any(|w| (&w[0].0 * &w[1].1) == (&w[1].0 * &w[0].1))
}
