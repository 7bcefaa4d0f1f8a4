//! The bending moment polytope for pentagons.
//!
//! With the two diagonals from the first vertex as action coordinates
//! (x, y) = (l_1, l_2), the image of a pentagon space is cut out by seven
//! half-planes: the rectangle |r_1 - r_2| <= x <= r_1 + r_2,
//! |r_4 - r_5| <= y <= r_4 + r_5, and the band y >= -x + r_3, y >= x - r_3,
//! y <= x + r_3. The intersection is computed exactly in rationals by
//! clipping a bounding box against each half-plane in turn; seven
//! constraints make asymptotics irrelevant, exactness is the point.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lengths::LengthVector;
use crate::rational::Rational;

/// The constraint a*x + b*y <= c with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfPlane {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

type Point = (Rational, Rational);

impl HalfPlane {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::InvalidInput("half-plane with zero normal".into()));
        }
        Ok(HalfPlane { a, b, c })
    }

    fn value(&self, p: &Point) -> Rational {
        &(&self.a * &p.0) + &(&self.b * &p.1)
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.value(p) <= self.c
    }

    pub fn is_tight(&self, p: &Point) -> bool {
        self.value(p) == self.c
    }

    /// Intersection point of the two boundary lines, unless parallel.
    pub fn line_intersection(&self, other: &HalfPlane) -> Option<Point> {
        let det = &(&self.a * &other.b) - &(&self.b * &other.a);
        if det.is_zero() {
            return None;
        }
        let x = &(&self.c * &other.b) - &(&self.b * &other.c);
        let y = &(&self.a * &other.c) - &(&self.c * &other.a);
        Some((&x / &det, &y / &det))
    }
}

/// The seven constraints in fixed order: x-range of the rectangle, y-range,
/// then the three band lines.
pub fn halfplanes(r: &LengthVector) -> Result<[HalfPlane; 7]> {
    if r.n() != 5 {
        return Err(Error::InvalidInput(format!(
            "the moment polytope is computed for pentagons only, got n = {}",
            r.n()
        )));
    }
    let one = Rational::one;
    let zero = Rational::zero;
    let (r1, r2, r3, r4, r5) = (r.get(1), r.get(2), r.get(3), r.get(4), r.get(5));
    Ok([
        // x >= |r1 - r2|
        HalfPlane::new(-one(), zero(), -(r1 - r2).abs())?,
        // x <= r1 + r2
        HalfPlane::new(one(), zero(), r1 + r2)?,
        // y >= |r4 - r5|
        HalfPlane::new(zero(), -one(), -(r4 - r5).abs())?,
        // y <= r4 + r5
        HalfPlane::new(zero(), one(), r4 + r5)?,
        // y >= -x + r3
        HalfPlane::new(-one(), -one(), -r3.clone())?,
        // y >= x - r3
        HalfPlane::new(one(), -one(), r3.clone())?,
        // y <= x + r3
        HalfPlane::new(-one(), one(), r3.clone())?,
    ])
}

/// Exact convex polygon: counterclockwise vertices starting from the
/// lexicographically smallest, and for each edge (v_i, v_{i+1}) the index of
/// the input half-plane tight along it. Degenerate intersections (a segment
/// or a point, on walls) keep their vertices and set the flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentPolygon {
    pub vertices: Vec<Point>,
    pub active_halfplanes: Vec<usize>,
    pub degenerate: bool,
}

impl MomentPolygon {
    pub fn edge_count(&self) -> usize {
        self.active_halfplanes.len()
    }
}

/// Clip a generous bounding box by every half-plane; `None` when empty.
///
/// Callers supply systems with a bounded intersection, as the seven pentagon
/// constraints always are; an unbounded system would leave an edge supported
/// by no input plane, which panics.
pub fn intersect(planes: &[HalfPlane]) -> Option<MomentPolygon> {
    // The box strictly contains every feasible point of the bounded inputs
    // used here, so its edges never survive into the result.
    let bound = planes
        .iter()
        .fold(Rational::one(), |acc, hp| acc + hp.c.abs());
    let mut poly: Vec<Point> = vec![
        (-bound.clone(), -bound.clone()),
        (bound.clone(), -bound.clone()),
        (bound.clone(), bound.clone()),
        (-bound.clone(), bound.clone()),
    ];

    for hp in planes {
        poly = clip(&poly, hp);
        if poly.is_empty() {
            return None;
        }
    }

    poly = simplify(poly);
    if poly.is_empty() {
        return None;
    }
    let degenerate = poly.len() < 3;
    let poly = canonical_ccw(poly);
    let active = edge_supports(&poly, planes);
    Some(MomentPolygon {
        vertices: poly,
        active_halfplanes: active,
        degenerate,
    })
}

/// One Sutherland-Hodgman pass; boundary points count as inside.
fn clip(poly: &[Point], hp: &HalfPlane) -> Vec<Point> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let cur = &poly[i];
        let next = &poly[(i + 1) % poly.len()];
        let cur_in = hp.contains(cur);
        let next_in = hp.contains(next);
        if cur_in {
            out.push(cur.clone());
        }
        if cur_in != next_in {
            out.push(edge_crossing(cur, next, hp));
        }
    }
    out
}

/// Point where the segment crosses the boundary line of `hp`; callers
/// guarantee the endpoints straddle it.
fn edge_crossing(p: &Point, q: &Point, hp: &HalfPlane) -> Point {
    let vp = hp.value(p);
    let vq = hp.value(q);
    // t = (c - vp) / (vq - vp) in [0, 1].
    let t = &(&hp.c - &vp) / &(&vq - &vp);
    let x = &p.0 + &(&t * &(&q.0 - &p.0));
    let y = &p.1 + &(&t * &(&q.1 - &p.1));
    (x, y)
}

/// Drop duplicate consecutive vertices and collinear middle vertices.
fn simplify(poly: Vec<Point>) -> Vec<Point> {
    let mut deduped: Vec<Point> = Vec::with_capacity(poly.len());
    for p in poly {
        if deduped.last() != Some(&p) {
            deduped.push(p);
        }
    }
    while deduped.len() > 1 && deduped.first() == deduped.last() {
        deduped.pop();
    }
    if deduped.len() < 3 {
        return deduped;
    }
    let mut out: Vec<Point> = Vec::with_capacity(deduped.len());
    let m = deduped.len();
    for i in 0..m {
        let prev = &deduped[(i + m - 1) % m];
        let cur = &deduped[i];
        let next = &deduped[(i + 1) % m];
        if !cross(prev, cur, next).is_zero() {
            out.push(cur.clone());
        }
    }
    // All-collinear input (a segment): keep its extreme points.
    if out.len() < 2 {
        let mut extremes = deduped;
        extremes.sort();
        extremes.dedup();
        let (lo, hi) = (extremes[0].clone(), extremes[extremes.len() - 1].clone());
        return if lo == hi { vec![lo] } else { vec![lo, hi] };
    }
    out
}

fn cross(o: &Point, a: &Point, b: &Point) -> Rational {
    let ax = &a.0 - &o.0;
    let ay = &a.1 - &o.1;
    let bx = &b.0 - &o.0;
    let by = &b.1 - &o.1;
    &(&ax * &by) - &(&ay * &bx)
}

/// Counterclockwise order starting from the lexicographically smallest
/// vertex; the clipper emits the box orientation, so only the start point
/// and possibly the direction need fixing.
fn canonical_ccw(mut poly: Vec<Point>) -> Vec<Point> {
    if poly.len() >= 3 {
        let mut area = Rational::zero();
        for i in 0..poly.len() {
            let p = &poly[i];
            let q = &poly[(i + 1) % poly.len()];
            area = area + (&(&p.0 * &q.1) - &(&p.1 * &q.0));
        }
        if area.is_negative() {
            poly.reverse();
        }
    }
    let start = poly
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    poly.rotate_left(start);
    poly
}

/// For every edge, the first input half-plane whose boundary carries it.
fn edge_supports(poly: &[Point], planes: &[HalfPlane]) -> Vec<usize> {
    if poly.len() < 2 {
        return Vec::new();
    }
    let edge_total = if poly.len() == 2 { 1 } else { poly.len() };
    let mut supports = Vec::with_capacity(edge_total);
    for i in 0..edge_total {
        let p = &poly[i];
        let q = &poly[(i + 1) % poly.len()];
        let support = planes
            .iter()
            .position(|hp| hp.is_tight(p) && hp.is_tight(q));
        // Every surviving edge came from some clip line.
        supports.push(support.expect("polytope edge without a supporting half-plane"));
    }
    supports
}

/// Shape combinatorics: counts plus the pairs of parallel opposite edges
/// (any two parallel edges of a convex polygon face each other).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShapeReport {
    pub edge_count: usize,
    pub vertex_count: usize,
    pub parallel_opposite_pairs: Vec<(usize, usize)>,
}

pub fn classify_shape(poly: &MomentPolygon) -> ShapeReport {
    let m = poly.vertices.len();
    let edge_total = poly.edge_count();
    let mut dirs: Vec<(Rational, Rational)> = Vec::with_capacity(edge_total);
    for i in 0..edge_total {
        let p = &poly.vertices[i];
        let q = &poly.vertices[(i + 1) % m];
        dirs.push((&q.0 - &p.0, &q.1 - &p.1));
    }
    let mut pairs = Vec::new();
    for i in 0..edge_total {
        for j in i + 1..edge_total {
            let det = &(&dirs[i].0 * &dirs[j].1) - &(&dirs[i].1 * &dirs[j].0);
            if det.is_zero() {
                pairs.push((i + 1, j + 1));
            }
        }
    }
    ShapeReport {
        edge_count: edge_total,
        vertex_count: m,
        parallel_opposite_pairs: pairs,
    }
}

impl Serialize for MomentPolygon {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let verts: Vec<[String; 2]> = self
            .vertices
            .iter()
            .map(|(x, y)| [x.to_string(), y.to_string()])
            .collect();
        let mut st = serializer.serialize_struct("MomentPolygon", 3)?;
        st.serialize_field("vertices", &verts)?;
        st.serialize_field("edges", &self.edge_count())?;
        st.serialize_field("degenerate", &self.degenerate)?;
        st.end()
    }
}

/// The polygon as canonical JSON: exact rational vertex strings, edge count,
/// degeneracy flag.
pub fn emit_json(poly: &MomentPolygon) -> String {
    serde_json::to_string(poly).expect("moment polygon serializes")
}

/// Deterministic SVG: the filled polygon over the seven constraint lines,
/// viewport from the coordinate rectangle padded by 10 percent.
pub fn emit_svg(poly: &MomentPolygon, planes: &[HalfPlane; 7]) -> String {
    // The rectangle is planes 0..4: -x <= c0, x <= c1, -y <= c2, y <= c3.
    let x_min = -planes[0].c.to_f64();
    let x_max = planes[1].c.to_f64();
    let y_min = -planes[2].c.to_f64();
    let y_max = planes[3].c.to_f64();
    let pad_x = 0.1 * (x_max - x_min).max(1e-3);
    let pad_y = 0.1 * (y_max - y_min).max(1e-3);
    let (vx, vy) = (x_min - pad_x, y_min - pad_y);
    let (vw, vh) = (x_max - x_min + 2.0 * pad_x, y_max - y_min + 2.0 * pad_y);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         viewBox=\"{} {} {} {}\" width=\"480\" height=\"480\">\n",
        fmt6(vx),
        fmt6(-vy - vh),
        fmt6(vw),
        fmt6(vh)
    ));
    // Flip y so the mathematical orientation points up.
    svg.push_str("<g transform=\"scale(1,-1)\">\n");
    let line_width = fmt6(vw.max(vh) / 320.0);
    for hp in planes.iter() {
        if let Some(((x1, y1), (x2, y2))) = line_in_box(hp, vx, vy, vw, vh) {
            svg.push_str(&format!(
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#999999\" stroke-width=\"{}\"/>\n",
                fmt6(x1), fmt6(y1), fmt6(x2), fmt6(y2), line_width
            ));
        }
    }
    let pts: Vec<String> = poly
        .vertices
        .iter()
        .map(|(x, y)| format!("{},{}", fmt6(x.to_f64()), fmt6(y.to_f64())))
        .collect();
    if poly.degenerate {
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"{}\"/>\n",
            pts.join(" "),
            line_width
        ));
    } else {
        svg.push_str(&format!(
            "<polygon points=\"{}\" fill=\"#9ecae1\" fill-opacity=\"0.7\" stroke=\"#1f77b4\" stroke-width=\"{}\"/>\n",
            pts.join(" "),
            line_width
        ));
    }
    svg.push_str("</g>\n</svg>\n");
    svg
}

fn fmt6(v: f64) -> String {
    let s = format!("{v:.6}");
    // Normalize negative zero for byte determinism.
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

/// Clip the boundary line of `hp` to the viewport; `None` when outside.
fn line_in_box(hp: &HalfPlane, vx: f64, vy: f64, vw: f64, vh: f64) -> Option<((f64, f64), (f64, f64))> {
    let a = hp.a.to_f64();
    let b = hp.b.to_f64();
    let c = hp.c.to_f64();
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let (x1, x2, y1, y2) = (vx, vx + vw, vy, vy + vh);
    let mut push = |x: f64, y: f64| {
        if (x1 - 1e-9..=x2 + 1e-9).contains(&x)
            && (y1 - 1e-9..=y2 + 1e-9).contains(&y)
            && !pts.iter().any(|&(px, py)| (px - x).abs() + (py - y).abs() < 1e-9)
        {
            pts.push((x, y));
        }
    };
    if b.abs() > 1e-12 {
        push(x1, (c - a * x1) / b);
        push(x2, (c - a * x2) / b);
    }
    if a.abs() > 1e-12 {
        push((c - b * y1) / a, y1);
        push((c - b * y2) / a, y2);
    }
    if pts.len() >= 2 {
        Some((pts[0], pts[1]))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(strs: &[&str]) -> LengthVector {
        LengthVector::from_strs(strs).unwrap()
    }

    fn rat(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn pt(x: &str, y: &str) -> Point {
        (rat(x), rat(y))
    }

    #[test]
    fn halfplanes_for_the_first_example() {
        let hp = halfplanes(&lv(&["1", "3/2", "4", "1", "2"])).unwrap();
        // x in [1/2, 5/2], y in [1, 3], plus the three band lines at r3 = 4.
        assert!(hp[0].contains(&pt("1/2", "0")) && hp[0].is_tight(&pt("1/2", "7")));
        assert!(hp[1].is_tight(&pt("5/2", "0")));
        assert!(hp[2].is_tight(&pt("9", "1")));
        assert!(hp[3].is_tight(&pt("9", "3")));
        assert!(hp[4].is_tight(&pt("1", "3")));   // y = -x + 4
        assert!(hp[5].is_tight(&pt("5", "1")));   // y = x - 4
        assert!(hp[6].is_tight(&pt("1", "5")));   // y = x + 4
        assert!(halfplanes(&lv(&["1", "1", "1", "1"])).is_err());
    }

    #[test]
    fn equal_sides_put_the_rectangle_at_zero() {
        let hp = halfplanes(&lv(&["1", "1", "1", "1", "1"])).unwrap();
        assert!(hp[0].is_tight(&pt("0", "5")));
        assert!(hp[1].is_tight(&pt("2", "5")));
    }

    #[test]
    fn triangle_polytope() {
        let hp = halfplanes(&lv(&["1", "3/2", "4", "1", "2"])).unwrap();
        let poly = intersect(&hp).unwrap();
        assert!(!poly.degenerate);
        assert_eq!(
            poly.vertices,
            vec![pt("1", "3"), pt("5/2", "3/2"), pt("5/2", "3")]
        );
        assert_eq!(classify_shape(&poly).edge_count, 3);
    }

    #[test]
    fn pentagon_polytope() {
        let hp = halfplanes(&lv(&["2", "1/2", "4", "1/2", "5/2"])).unwrap();
        let poly = intersect(&hp).unwrap();
        assert_eq!(
            poly.vertices,
            vec![
                pt("3/2", "5/2"),
                pt("2", "2"),
                pt("5/2", "2"),
                pt("5/2", "3"),
                pt("3/2", "3"),
            ]
        );
        let report = classify_shape(&poly);
        assert_eq!(report.edge_count, 5);
        assert_eq!(report.vertex_count, 5);
    }

    #[test]
    fn empty_polytope() {
        let hp = halfplanes(&lv(&["10", "1", "1", "1", "1"])).unwrap();
        assert!(intersect(&hp).is_none());
    }

    #[test]
    fn vertices_satisfy_all_halfplanes_exactly() {
        for strs in [
            ["1", "3/2", "4", "1", "2"],
            ["2", "1/2", "4", "1/2", "5/2"],
            ["5", "1", "4", "5", "1"],
            ["1", "3/2", "7/2", "3", "7/2"],
        ] {
            let hp = halfplanes(&lv(&strs)).unwrap();
            let poly = intersect(&hp).unwrap();
            for v in &poly.vertices {
                for (i, plane) in hp.iter().enumerate() {
                    assert!(plane.contains(v), "vertex {v:?} violates plane {i}");
                }
            }
            // Each vertex is tight on at least two planes.
            for v in &poly.vertices {
                let tight = hp.iter().filter(|p| p.is_tight(v)).count();
                assert!(tight >= 2, "vertex {v:?} tight on {tight} planes");
            }
        }
    }

    #[test]
    fn parallelogram_shape_of_the_empty_class_example() {
        let hp = halfplanes(&lv(&["5", "1", "4", "5", "1"])).unwrap();
        let poly = intersect(&hp).unwrap();
        let report = classify_shape(&poly);
        assert_eq!(report.edge_count, 4);
        assert_eq!(report.parallel_opposite_pairs.len(), 2);
    }

    #[test]
    fn scale_covariance() {
        let r = lv(&["1", "3/2", "4", "1", "2"]);
        let scaled = r.scale(&rat("3")).unwrap();
        let poly = intersect(&halfplanes(&r).unwrap()).unwrap();
        let poly3 = intersect(&halfplanes(&scaled).unwrap()).unwrap();
        let blown: Vec<Point> = poly
            .vertices
            .iter()
            .map(|(x, y)| (x * &rat("3"), y * &rat("3")))
            .collect();
        assert_eq!(poly3.vertices, blown);
    }

    #[test]
    fn wall_vector_gives_degenerate_polytope() {
        // On the wall r3 = r1+r2+r4+r5 the feasible set is the single corner
        // (r1+r2, r4+r5).
        let hp = halfplanes(&lv(&["1", "1", "4", "1", "1"])).unwrap();
        let poly = intersect(&hp).unwrap();
        assert!(poly.degenerate, "vertices: {:?}", poly.vertices);
        assert_eq!(poly.vertices, vec![pt("2", "2")]);
    }

    #[test]
    fn emit_json_schema() {
        let hp = halfplanes(&lv(&["1", "3/2", "4", "1", "2"])).unwrap();
        let poly = intersect(&hp).unwrap();
        let json = emit_json(&poly);
        assert_eq!(
            json,
            "{\"vertices\":[[\"1\",\"3\"],[\"5/2\",\"3/2\"],[\"5/2\",\"3\"]],\"edges\":3,\"degenerate\":false}"
        );
    }

    #[test]
    fn emit_svg_is_deterministic() {
        let hp = halfplanes(&lv(&["2", "1/2", "4", "1/2", "5/2"])).unwrap();
        let poly = intersect(&hp).unwrap();
        let a = emit_svg(&poly, &hp);
        let b = emit_svg(&poly, &hp);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        // Four rectangle lines plus the one band line crossing the viewport.
        assert_eq!(a.matches("<line").count(), 5);
    }
}
