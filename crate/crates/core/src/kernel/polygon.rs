//! Lower convex polygons: Newton polygons of polynomials and Hodge polygons of
//! filtrations. Convention: points `(i, v(a_i))`, lower hull, root valuation is
//! the negated slope.

use num_integer::Integer;
use num_traits::Zero;

use super::poly::Poly;
use super::rat::{fmt_rat, rat, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub slope: Rat,
    pub length: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerPolygon {
    vertices: Vec<(i64, Rat)>,
}

fn cross(o: &(i64, Rat), a: &(i64, Rat), b: &(i64, Rat)) -> Rat {
    // (a - o) x (b - o); nonpositive means `a` is not strictly below segment o-b
    rat(a.0 - o.0) * (&b.1 - &o.1) - rat(b.0 - o.0) * (&a.1 - &o.1)
}

impl LowerPolygon {
    /// Lower convex hull of a finite point set. Abscissae must be distinct.
    pub fn lower_hull(points: &[(i64, Rat)]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Domain("polygon of an empty point set".into()));
        }
        let mut pts = points.to_vec();
        pts.sort_by_key(|p| p.0);
        if pts.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Domain("repeated abscissa in polygon points".into()));
        }
        let mut hull: Vec<(i64, Rat)> = Vec::new();
        for p in pts {
            while hull.len() >= 2 {
                let n = hull.len();
                if cross(&hull[n - 2], &hull[n - 1], &p) <= Rat::zero() {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        Ok(LowerPolygon { vertices: hull })
    }

    /// Polygon starting at `start` whose segments have the given slopes and
    /// lengths; slopes are sorted increasingly and equal slopes merged.
    pub fn from_segments(start: (i64, Rat), segs: &[(Rat, u64)]) -> Self {
        let mut s: Vec<(Rat, u64)> = segs.iter().filter(|x| x.1 > 0).cloned().collect();
        s.sort_by(|a, b| a.0.cmp(&b.0));
        let mut vertices = vec![start];
        let mut last_slope: Option<Rat> = None;
        for (slope, len) in s {
            let (x, y) = vertices.last().unwrap().clone();
            let next = (x + len as i64, y + &slope * rat(len as i64));
            if last_slope.as_ref() == Some(&slope) {
                *vertices.last_mut().unwrap() = next;
            } else {
                vertices.push(next);
            }
            last_slope = Some(slope);
        }
        LowerPolygon { vertices }
    }

    pub fn vertices(&self) -> &[(i64, Rat)] {
        &self.vertices
    }

    pub fn start(&self) -> &(i64, Rat) {
        &self.vertices[0]
    }

    pub fn end(&self) -> &(i64, Rat) {
        self.vertices.last().unwrap()
    }

    /// Total horizontal length.
    pub fn length(&self) -> u64 {
        (self.end().0 - self.start().0) as u64
    }

    pub fn segments(&self) -> Vec<Segment> {
        self.vertices
            .windows(2)
            .map(|w| {
                let len = w[1].0 - w[0].0;
                Segment {
                    slope: (&w[1].1 - &w[0].1) / rat(len),
                    length: len as u64,
                }
            })
            .collect()
    }

    /// Root valuations (negated slopes) with multiplicities, in increasing
    /// order of slope.
    pub fn root_valuations(&self) -> Vec<(Rat, u64)> {
        self.segments().into_iter().map(|s| (-s.slope, s.length)).collect()
    }

    /// Slopes listed with multiplicity.
    pub fn slope_list(&self) -> Vec<Rat> {
        self.segments()
            .into_iter()
            .flat_map(|s| std::iter::repeat_n(s.slope, s.length as usize))
            .collect()
    }

    /// Ordinate at an abscissa inside the polygon's range.
    pub fn eval(&self, x: i64) -> Option<Rat> {
        if x < self.start().0 || x > self.end().0 {
            return None;
        }
        for w in self.vertices.windows(2) {
            if x <= w[1].0 {
                let t = rat(x - w[0].0) / rat(w[1].0 - w[0].0);
                return Some(&w[0].1 + t * (&w[1].1 - &w[0].1));
            }
        }
        Some(self.start().1.clone())
    }

    /// True when `self` lies on or above `other` at every vertex of either
    /// polygon; both must span the same abscissae.
    pub fn lies_on_or_above(&self, other: &LowerPolygon) -> bool {
        if self.start().0 != other.start().0 || self.end().0 != other.end().0 {
            return false;
        }
        self.vertices
            .iter()
            .chain(other.vertices.iter())
            .all(|(x, _)| self.eval(*x).unwrap() >= other.eval(*x).unwrap())
    }

    /// True when the polygon is a single segment whose only lattice points
    /// are its endpoints.
    pub fn is_primitive_segment(&self) -> bool {
        if self.vertices.len() != 2 {
            return false;
        }
        let (x0, y0) = &self.vertices[0];
        let (x1, y1) = &self.vertices[1];
        if !y0.is_integer() || !y1.is_integer() {
            return false;
        }
        let dy = (y1 - y0).to_integer();
        let dx = num_bigint::BigInt::from(x1 - x0);
        dx.gcd(&dy) == num_bigint::BigInt::from(1)
    }

    pub fn describe(&self) -> String {
        self.vertices
            .iter()
            .map(|(x, y)| format!("({x},{})", fmt_rat(y)))
            .collect::<Vec<_>>()
            .join("-")
    }
}

/// Newton polygon of a nonzero polynomial given a coefficient valuation map
/// (`None` for a zero coefficient).
pub fn newton_polygon_of_poly<E: Clone>(
    f: &Poly<E>,
    valuation: impl Fn(&E) -> Option<Rat>,
) -> Result<LowerPolygon> {
    if f.is_zero() {
        return Err(Error::Domain("Newton polygon of the zero polynomial".into()));
    }
    let lead = f.lead().unwrap();
    if valuation(lead).is_none() {
        return Err(Error::Domain("leading coefficient has infinite valuation".into()));
    }
    let pts: Vec<(i64, Rat)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| valuation(c).map(|v| (i as i64, v)))
        .collect();
    // a zero constant term means zero roots; the hull then starts at the
    // first nonzero coefficient and covers only the nonzero roots
    LowerPolygon::lower_hull(&pts)
}

/// Newton polygon of a rational polynomial with respect to `v_p`.
pub fn newton_polygon_rat(f: &Poly<Rat>, p: u64) -> Result<LowerPolygon> {
    newton_polygon_of_poly(f, |c| super::rat::val(c, p).map(rat))
}
