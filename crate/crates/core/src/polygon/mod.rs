//! φ-Newton polygons with respect to a prime `p`.
//!
//! For the φ-expansion `f = Σ_{i=0}^{n} b_i φ^i`, the point `P_i` is
//! `(i, v_p^x(b_{n-i}))`, so the leading term sits at the left end. Points
//! with `b_{n-i} = 0` are absent. Vertices are chosen by sweeping from `P_0`:
//! at each step take the smallest slope to a later point, and among equal
//! slopes the point with the largest index.

mod render;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::modp::{rabin_irreducible, reduce, ModpError};
use crate::poly::{phi_expand, IntPoly, PolyError};
use crate::valuation::{fmt_ratio, ratio, vp, vpx, ExactRational, ValuationError};

pub use render::{render, RenderFormat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolygonError {
    #[error("the zero polynomial has no Newton polygon")]
    ZeroPolynomial,
    #[error("phi divides the {0} (constant term of the phi-expansion is zero)")]
    PhiDivides(&'static str),
    #[error("phi is reducible modulo {0}")]
    PhiReducible(u64),
    #[error("the {0} must be non-constant")]
    ConstantFactor(&'static str),
    #[error("the leading coefficient of the {0} is divisible by {1}")]
    LeadingCoefficientNotCoprime(&'static str, u64),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Modp(#[from] ModpError),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolygonPoint {
    pub x: usize,
    pub y: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonEdge {
    pub start: PolygonPoint,
    pub end: PolygonPoint,
    pub slope: ExactRational,
    pub hlen: usize,
}

impl PolygonEdge {
    fn between(start: PolygonPoint, end: PolygonPoint) -> Self {
        let hlen = end.x - start.x;
        Self {
            start,
            end,
            slope: slope_between(start, end),
            hlen,
        }
    }
}

fn slope_between(a: PolygonPoint, b: PolygonPoint) -> ExactRational {
    ratio(b.y as i128 - a.y as i128, (b.x - a.x) as i128)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub p: u64,
    pub phi: IntPoly,
    /// Top index of the φ-expansion; the polygon spans `[0, n]`.
    pub n: usize,
    pub points: Vec<PolygonPoint>,
    pub edges: Vec<PolygonEdge>,
}

/// Edges of the lower polygon through `points` (sorted by `x`, distinct `x`).
pub fn lower_edges(points: &[PolygonPoint]) -> Vec<PolygonEdge> {
    let mut edges = Vec::new();
    let mut cur = 0;
    while cur + 1 < points.len() {
        let from = points[cur];
        let mut best = cur + 1;
        let mut best_slope = slope_between(from, points[best]);
        for (j, &pt) in points.iter().enumerate().skip(cur + 2) {
            let s = slope_between(from, pt);
            // `<=` keeps the largest index among ties
            if s <= best_slope {
                best = j;
                best_slope = s;
            }
        }
        edges.push(PolygonEdge::between(from, points[best]));
        cur = best;
    }
    edges
}

/// φ-Newton polygon of `f` with respect to `p`.
pub fn build_polygon(f: &IntPoly, phi: &IntPoly, p: u64) -> Result<NewtonPolygon, PolygonError> {
    if f.is_zero() {
        return Err(PolygonError::ZeroPolynomial);
    }
    let expansion = phi_expand(f, phi)?;
    if expansion.terms()[0].is_zero() {
        return Err(PolygonError::PhiDivides("polynomial"));
    }
    if !rabin_irreducible(&reduce(phi, p)?)? {
        return Err(PolygonError::PhiReducible(p));
    }
    let n = expansion.top_index().expect("nonzero expansion");
    let mut points = Vec::new();
    for i in 0..=n {
        let b = &expansion.terms()[n - i];
        if !b.is_zero() {
            points.push(PolygonPoint { x: i, y: vpx(b, p)? });
        }
    }
    let edges = lower_edges(&points);
    let np = NewtonPolygon {
        p,
        phi: phi.clone(),
        n,
        points,
        edges,
    };
    debug_assert!(np.check_invariants(), "polygon invariants violated");
    Ok(np)
}

impl NewtonPolygon {
    pub fn vertices(&self) -> Vec<PolygonPoint> {
        let mut v: Vec<PolygonPoint> = self.edges.iter().map(|e| e.start).collect();
        match self.edges.last() {
            Some(e) => v.push(e.end),
            None => v.extend(self.points.first().copied()),
        }
        v
    }

    pub fn slopes(&self) -> Vec<ExactRational> {
        self.edges.iter().map(|e| e.slope.clone()).collect()
    }

    /// Height of the polygonal path above `x`, for `x` within its span.
    pub fn path_height(&self, x: usize) -> Option<ExactRational> {
        if self.edges.is_empty() {
            return self
                .points
                .first()
                .filter(|pt| pt.x == x)
                .map(|pt| ratio(pt.y, 1));
        }
        self.edges
            .iter()
            .find(|e| e.start.x <= x && x <= e.end.x)
            .map(|e| ratio(e.start.y, 1) + &e.slope * ratio((x - e.start.x) as u64, 1))
    }

    /// Slopes strictly increase, every point lies on or above the path, the
    /// path spans `[0, n]`, and horizontal lengths sum to `n`.
    pub fn check_invariants(&self) -> bool {
        let increasing = self.edges.windows(2).all(|w| w[0].slope < w[1].slope);
        let above = self.points.iter().all(|pt| {
            self.path_height(pt.x)
                .is_some_and(|h| ratio(pt.y, 1) >= h)
        });
        let spans = match (self.edges.first(), self.edges.last()) {
            (Some(first), Some(last)) => first.start.x == 0 && last.end.x == self.n,
            _ => self.n == 0,
        };
        let total: usize = self.edges.iter().map(|e| e.hlen).sum();
        let consistent = self.edges.iter().all(|e| {
            e.hlen == e.end.x - e.start.x && e.hlen > 0 && e.slope == slope_between(e.start, e.end)
        });
        increasing && above && spans && total == self.n && consistent
    }

    /// The polygon without its slope-zero edges.
    pub fn principal_part(&self) -> NewtonPolygon {
        let mut out = self.clone();
        out.edges.retain(|e| !e.slope.is_zero());
        out
    }

    /// Horizontal length of the slope-zero edge, or 0 if there is none.
    pub fn zero_slope_length(&self) -> usize {
        self.edges
            .iter()
            .find(|e| e.slope.is_zero())
            .map_or(0, |e| e.hlen)
    }

    /// `(slope, hlen)` pairs left to right.
    pub fn edge_profile(&self) -> Vec<(ExactRational, usize)> {
        self.edges.iter().map(|e| (e.slope.clone(), e.hlen)).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let edges: Vec<EdgeJson> = self.edges.iter().map(EdgeJson::from).collect();
        serde_json::json!({
            "p": self.p.to_string(),
            "phi": self.phi.to_string(),
            "n": self.n.to_string(),
            "points": self.points.iter().map(|pt| [pt.x.to_string(), pt.y.to_string()]).collect::<Vec<_>>(),
            "edges": edges,
        })
    }
}

#[derive(Debug, Serialize)]
pub struct EdgeJson {
    pub slope: String,
    pub hlen: String,
    pub start: [String; 2],
    pub end: [String; 2],
}

impl From<&PolygonEdge> for EdgeJson {
    fn from(e: &PolygonEdge) -> Self {
        Self {
            slope: fmt_ratio(&e.slope),
            hlen: e.hlen.to_string(),
            start: [e.start.x.to_string(), e.start.y.to_string()],
            end: [e.end.x.to_string(), e.end.y.to_string()],
        }
    }
}

pub fn principal_part(np: &NewtonPolygon) -> NewtonPolygon {
    np.principal_part()
}

pub fn zero_slope_length(np: &NewtonPolygon) -> usize {
    np.zero_slope_length()
}

/// Merge edge multisets in increasing slope order, fusing equal slopes.
fn merge_profiles(parts: &[Vec<(ExactRational, usize)>]) -> Vec<(ExactRational, usize)> {
    let mut all: Vec<(ExactRational, usize)> = parts.iter().flatten().cloned().collect();
    all.sort_by(|a, b| a.0.cmp(&b.0));
    let mut fused: Vec<(ExactRational, usize)> = Vec::new();
    for (s, l) in all {
        match fused.last_mut() {
            Some(last) if last.0 == s => last.1 += l,
            _ => fused.push((s, l)),
        }
    }
    fused
}

fn check_factor(f: &IntPoly, phi: &IntPoly, p: u64, name: &'static str) -> Result<(), PolygonError> {
    if f.is_constant() {
        return Err(PolygonError::ConstantFactor(name));
    }
    let lc = f.leading_coeff().expect("non-constant");
    if vp(lc, p)? > 0 {
        return Err(PolygonError::LeadingCoefficientNotCoprime(name, p));
    }
    if f.divrem_monic(phi)?.1.is_zero() {
        return Err(PolygonError::PhiDivides(name));
    }
    Ok(())
}

/// Whether the principal part of the polygon of `g·h` is assembled from the
/// translated principal-part edges of `g` and `h` in increasing slope order.
///
/// Adjacent translates of equal slope appear fused in the product polygon,
/// so both sides are compared as slope-sorted `(slope, hlen)` lists with
/// equal slopes merged.
pub fn product_rule_holds(g: &IntPoly, h: &IntPoly, phi: &IntPoly, p: u64) -> Result<bool, PolygonError> {
    check_factor(g, phi, p, "first factor")?;
    check_factor(h, phi, p, "second factor")?;
    let pg = build_polygon(g, phi, p)?.principal_part();
    let ph = build_polygon(h, phi, p)?.principal_part();
    let pgh = build_polygon(&(g * h), phi, p)?.principal_part();
    let expected = merge_profiles(&[pg.edge_profile(), ph.edge_profile()]);
    Ok(pgh.edge_profile() == expected)
}

/// Whether `zero_slope_length(g·h)` is `L_g + L_h` or `L_g + L_h + 1`.
pub fn zero_slope_rule_holds(g: &IntPoly, h: &IntPoly, phi: &IntPoly, p: u64) -> Result<bool, PolygonError> {
    check_factor(g, phi, p, "first factor")?;
    check_factor(h, phi, p, "second factor")?;
    let lg = build_polygon(g, phi, p)?.zero_slope_length();
    let lh = build_polygon(h, phi, p)?.zero_slope_length();
    let lgh = build_polygon(&(g * h), phi, p)?.zero_slope_length();
    Ok(lgh == lg + lh || lgh == lg + lh + 1)
}

/// Every edge slope is strictly below `bound`.
pub fn all_slopes_below(np: &NewtonPolygon, bound: &ExactRational) -> bool {
    np.edges.iter().all(|e| &e.slope < bound)
}

pub fn starts_at_origin(np: &NewtonPolygon) -> bool {
    np.points.first() == Some(&PolygonPoint { x: 0, y: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn pt(x: usize, y: u64) -> PolygonPoint {
        PolygonPoint { x, y }
    }

    #[test]
    fn single_edge_with_point_above() {
        let np = build_polygon(&ip(&[2, 2, 1]), &ip(&[0, 1]), 2).unwrap();
        assert_eq!(np.points, vec![pt(0, 0), pt(1, 1), pt(2, 1)]);
        assert_eq!(np.edge_profile(), vec![(ratio(1, 2), 2)]);
        assert_eq!(np.vertices(), vec![pt(0, 0), pt(2, 1)]);
    }

    #[test]
    fn tie_resolved_to_largest_index() {
        let np = build_polygon(&ip(&[8, 4, 0, 1]), &ip(&[0, 1]), 2).unwrap();
        assert_eq!(np.points, vec![pt(0, 0), pt(2, 2), pt(3, 3)]);
        assert_eq!(np.edges.len(), 1);
        assert_eq!(np.edges[0].end, pt(3, 3));
        assert_eq!(np.edges[0].slope, ratio(1, 1));

        let np = build_polygon(&ip(&[4, 2, 1]), &ip(&[0, 1]), 2).unwrap();
        assert_eq!(np.edges.len(), 1);
        assert_eq!(np.edges[0].end, pt(2, 2));
    }

    #[test]
    fn rejects_outside_definition() {
        let x = ip(&[0, 1]);
        assert_eq!(
            build_polygon(&ip(&[0, 2, 1]), &x, 2),
            Err(PolygonError::PhiDivides("polynomial"))
        );
        assert_eq!(
            build_polygon(&ip(&[1, 1]), &ip(&[1, 0, 1]), 2),
            Err(PolygonError::PhiReducible(2))
        );
        assert_eq!(build_polygon(&IntPoly::zero(), &x, 2), Err(PolygonError::ZeroPolynomial));
        assert!(matches!(
            build_polygon(&ip(&[1, 1]), &ip(&[1, 2]), 2),
            Err(PolygonError::Poly(PolyError::NonMonicDivisor))
        ));
    }

    #[test]
    fn principal_part_drops_horizontal_edges() {
        // points (0,0),(1,0),(2,1)
        let np = build_polygon(&ip(&[2, 3, 1]), &ip(&[0, 1]), 2).unwrap();
        assert_eq!(np.edge_profile(), vec![(ratio(0, 1), 1), (ratio(1, 1), 1)]);
        assert_eq!(np.principal_part().edge_profile(), vec![(ratio(1, 1), 1)]);
        assert_eq!(np.zero_slope_length(), 1);

        let eis = build_polygon(&ip(&[2, 4, 6, 1]), &ip(&[0, 1]), 2).unwrap();
        assert_eq!(eis.principal_part(), eis);
        assert_eq!(eis.edge_profile(), vec![(ratio(1, 3), 3)]);
        assert_eq!(eis.zero_slope_length(), 0);
    }

    #[test]
    fn zero_slope_lengths_of_factors() {
        let x = ip(&[0, 1]);
        let g = ip(&[1, 1]);
        let h = ip(&[2, 1]);
        assert_eq!(build_polygon(&g, &x, 2).unwrap().zero_slope_length(), 1);
        assert_eq!(build_polygon(&h, &x, 2).unwrap().zero_slope_length(), 0);
        assert_eq!(build_polygon(&(&g * &h), &x, 2).unwrap().zero_slope_length(), 1);
        assert!(zero_slope_rule_holds(&g, &h, &x, 2).unwrap());
    }

    #[test]
    fn product_rule_examples() {
        let x = ip(&[0, 1]);
        assert!(product_rule_holds(&ip(&[2, 1]), &ip(&[2, 1]), &x, 2).unwrap());
        let sq = build_polygon(&ip(&[4, 4, 1]), &x, 2).unwrap();
        assert_eq!(sq.principal_part().edge_profile(), vec![(ratio(1, 1), 2)]);
        assert!(product_rule_holds(&ip(&[2, 1]), &ip(&[1, 1]), &x, 2).unwrap());
        assert_eq!(
            product_rule_holds(&ip(&[2, 1]), &IntPoly::one(), &x, 2),
            Err(PolygonError::ConstantFactor("second factor"))
        );
        assert_eq!(
            product_rule_holds(&ip(&[1, 2]), &ip(&[1, 1]), &x, 2),
            Err(PolygonError::LeadingCoefficientNotCoprime("first factor", 2))
        );
        assert_eq!(
            product_rule_holds(&ip(&[1, 1]), &ip(&[0, 1]), &x, 2),
            Err(PolygonError::PhiDivides("second factor"))
        );
    }

    #[test]
    fn expansion_of_degree_below_phi_has_no_edges() {
        let np = build_polygon(&ip(&[3, 1]), &ip(&[1, 1, 1]), 2).unwrap();
        assert_eq!(np.n, 0);
        assert!(np.edges.is_empty());
        assert_eq!(np.vertices(), vec![pt(0, 0)]);
        assert!(np.check_invariants());
    }

    #[test]
    fn negative_slopes_are_allowed() {
        // leading coefficient 4 has valuation 2
        let np = build_polygon(&ip(&[1, 1, 4]), &ip(&[0, 1]), 2).unwrap();
        assert_eq!(np.edge_profile(), vec![(ratio(-2, 1), 1), (ratio(0, 1), 1)]);
        assert!(np.check_invariants());
    }

    #[test]
    fn eisenstein_instances_have_one_edge() {
        for (p, n) in [(2u64, 5usize), (3, 4), (5, 7), (7, 3)] {
            let pi = p as i64;
            let mut c = vec![pi * (pi + 1)];
            c.extend((1..n).map(|i| pi * i as i64));
            c.push(1);
            let np = build_polygon(&ip(&c), &ip(&[0, 1]), p).unwrap();
            assert_eq!(np.edge_profile(), vec![(ratio(1, n as u64), n)]);
        }
    }

    proptest! {
        #[test]
        fn polygon_invariants_hold(
            c in prop::collection::vec(-300i64..300, 2..14),
            p in prop::sample::select(vec![2u64, 3, 5, 7]),
        ) {
            let f = IntPoly::from(c);
            prop_assume!(f.degree().unwrap_or(0) >= 1 && !f.coeff(0).is_zero());
            let np = build_polygon(&f, &ip(&[0, 1]), p).unwrap();
            prop_assert!(np.check_invariants());
            prop_assert_eq!(np.edges.iter().map(|e| e.hlen).sum::<usize>(), np.n);
        }
    }
}
