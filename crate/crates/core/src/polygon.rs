//! Closed polygons in R^3 and the bending flows.
//!
//! A polygon is stored as its n edge vectors, which sum to zero within a
//! closure tolerance. The k-th diagonal is mu_k = e_1 + ... + e_{k+1}; bending
//! around it rotates the first k+1 edges about the diagonal and leaves the
//! rest fixed. The flow parameterization rotates with angular speed equal to
//! the diagonal length (period 2*pi / l_k), the action parameterization by a
//! plain angle and is undefined on zero diagonals.
//!
//! The fan triangulation from the first vertex gives action-angle
//! coordinates: lengths l_k of the diagonals, and angles theta_i = pi minus
//! the dihedral angle between consecutive fan triangles. The dihedral angle
//! is measured from the plane of triangle i to the plane of triangle i+1
//! about the directed diagonal, in [0, 2*pi); with this convention bending
//! around diagonal k adds the bend angle to theta_k and planar convex
//! polygons have all angles zero.

use nalgebra::{Rotation3, Unit, Vector3};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::admissible::{is_admissible, IndexSet};
use crate::error::{Error, Result};
use crate::lengths::LengthVector;

/// Default closure tolerance: double precision leaves ~6 orders of headroom
/// at desk scale (n <= 50, lengths of order 1..10).
pub const DEFAULT_CLOSURE_TOL: f64 = 1e-9;

/// Relative threshold below which a fan triangle counts as flat.
const DEGENERACY_EPS: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct Polygon {
    edges: Vec<Vector3<f64>>,
    side_lengths: Vec<f64>,
    closure_tol: f64,
}

/// How the bending circle action around the last proper diagonal fixes a
/// polygon, if it does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixedPointKind {
    /// The first n-2 edges are collinear; the class is an isolated fixed
    /// point. `forward` lists the 1-based indices of edges pointing along
    /// the diagonal (the recovered admissible index set).
    TypeI { forward: Vec<usize> },
    /// The last two edges are collinear; the class lies in a fixed
    /// submanifold (the diagonal is parallel to them, so bending acts as a
    /// global rotation).
    TypeII,
    NotFixed,
}

/// Action-angle coordinates: diagonal lengths and dihedral offsets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActionAngle {
    pub ell: Vec<f64>,
    pub theta: Vec<f64>,
}

impl Polygon {
    pub fn new(edges: Vec<Vector3<f64>>, closure_tol: f64) -> Result<Polygon> {
        if edges.len() < 3 {
            return Err(Error::InvalidInput(format!(
                "a polygon needs at least 3 edges, got {}",
                edges.len()
            )));
        }
        if closure_tol.is_nan() || closure_tol < 0.0 {
            return Err(Error::InvalidInput("closure tolerance must be >= 0".into()));
        }
        let closure = edges.iter().sum::<Vector3<f64>>().norm();
        if closure > closure_tol {
            return Err(Error::InvalidInput(format!(
                "edges do not close: residual {closure:.3e} > tolerance {closure_tol:.3e}"
            )));
        }
        let side_lengths: Vec<f64> = edges.iter().map(|e| e.norm()).collect();
        if let Some(i) = side_lengths.iter().position(|&l| l <= closure_tol) {
            return Err(Error::InvalidInput(format!("edge {} has zero length", i + 1)));
        }
        Ok(Polygon {
            edges,
            side_lengths,
            closure_tol,
        })
    }

    pub fn from_coords(coords: &[[f64; 3]], closure_tol: f64) -> Result<Polygon> {
        Polygon::new(
            coords.iter().map(|c| Vector3::new(c[0], c[1], c[2])).collect(),
            closure_tol,
        )
    }

    /// A planar polygon with the given side lengths, built by fanning flat
    /// triangles over greedily chosen feasible diagonals. Errors when no
    /// closed polygon exists.
    pub fn planar_fan(r: &LengthVector) -> Result<Polygon> {
        if let Some(side) = r.violating_side() {
            return Err(Error::EmptyModuliSpace(side));
        }
        let s = r.to_f64_vec();
        let n = s.len();

        // Feasible range for each diagonal: reachable by the triangle over
        // the previous diagonal, and closable by the remaining chain.
        let mut targets = Vec::with_capacity(n - 2);
        let mut prev = s[0];
        for k in 1..=n.saturating_sub(3) {
            let tail = &s[k + 1..];
            let sum_tail: f64 = tail.iter().sum();
            let max_tail = tail.iter().cloned().fold(0.0, f64::max);
            let lo = (prev - s[k]).abs().max(2.0 * max_tail - sum_tail).max(0.0);
            let hi = (prev + s[k]).min(sum_tail);
            let mid = 0.5 * (lo + hi);
            targets.push(mid);
            prev = mid;
        }
        targets.push(s[n - 1]);

        let mut verts = vec![Vector3::zeros(); n];
        verts[1] = Vector3::new(s[0], 0.0, 0.0);
        let mut prev = s[0];
        for (k, &target) in targets.iter().enumerate() {
            // verts[k+2] at distance `target` from the origin and s[k+1]
            // from verts[k+1]; prev = |verts[k+1]|.
            let center = verts[k + 1];
            let axial = (prev * prev + target * target - s[k + 1] * s[k + 1]) / (2.0 * prev);
            let height = (target * target - axial * axial).max(0.0).sqrt();
            let u = center / prev;
            let u_perp = Vector3::new(-u.y, u.x, 0.0);
            verts[k + 2] = axial * u + height * u_perp;
            prev = target;
        }
        let edges: Vec<Vector3<f64>> = (0..n)
            .map(|j| verts[(j + 1) % n] - verts[j])
            .collect();
        Polygon::new(edges, DEFAULT_CLOSURE_TOL)
    }

    /// The planar model of an isolated bending fixed point: edges 1..n-2 on
    /// the x-axis with directions given by the index set, closed by the
    /// remaining two sides. Requires the index set to be admissible.
    pub fn type1_model(r: &LengthVector, set: IndexSet) -> Result<Polygon> {
        if !is_admissible(r, set)? {
            return Err(Error::NotAdmissible);
        }
        let s = r.to_f64_vec();
        let n = s.len();
        let mut edges = Vec::with_capacity(n);
        let mut mu = 0.0;
        for i in 1..=n - 2 {
            let sign = if set.contains(i) { 1.0 } else { -1.0 };
            edges.push(Vector3::new(sign * s[i - 1], 0.0, 0.0));
            mu += sign * s[i - 1];
        }
        let (a, b) = (s[n - 2], s[n - 1]);
        // Law of cosines on the closing triangle (mu, r_{n-1}, r_n); theta is
        // the angle between the diagonal and the last side.
        let cos_t = (mu * mu + b * b - a * a) / (2.0 * mu * b);
        let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
        let cos_a = (mu - b * cos_t) / a;
        let sin_a = (b / a) * sin_t;
        edges.push(Vector3::new(-a * cos_a, a * sin_a, 0.0));
        edges.push(Vector3::new(-b * cos_t, -b * sin_t, 0.0));
        Polygon::new(edges, DEFAULT_CLOSURE_TOL)
    }

    /// Same polygon, revalidated against a different closure tolerance.
    pub fn with_closure_tol(&self, closure_tol: f64) -> Result<Polygon> {
        Polygon::new(self.edges.clone(), closure_tol)
    }

    pub fn n(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vector3<f64>] {
        &self.edges
    }

    pub fn edge_coords(&self) -> Vec<[f64; 3]> {
        self.edges.iter().map(|e| [e.x, e.y, e.z]).collect()
    }

    pub fn side_lengths(&self) -> &[f64] {
        &self.side_lengths
    }

    pub fn closure_tol(&self) -> f64 {
        self.closure_tol
    }

    pub fn closure_residual(&self) -> f64 {
        self.edges.iter().sum::<Vector3<f64>>().norm()
    }

    fn total_length(&self) -> f64 {
        self.side_lengths.iter().sum()
    }

    /// Partial sum e_1 + ... + e_m.
    fn partial(&self, m: usize) -> Vector3<f64> {
        self.edges[..m].iter().sum()
    }

    /// mu_k = e_1 + ... + e_{k+1} for 1 <= k <= n-3.
    pub fn diagonal(&self, k: usize) -> Result<Vector3<f64>> {
        if k == 0 || k > self.n() - 3 {
            return Err(Error::InvalidInput(format!(
                "diagonal index {k} outside 1..={}",
                self.n() - 3
            )));
        }
        Ok(self.partial(k + 1))
    }

    /// All proper diagonals with their lengths, k = 1..n-3.
    pub fn diagonals(&self) -> Vec<(Vector3<f64>, f64)> {
        (1..=self.n() - 3)
            .map(|k| {
                let mu = self.partial(k + 1);
                let len = mu.norm();
                (mu, len)
            })
            .collect()
    }

    pub fn diagonal_lengths(&self) -> Vec<f64> {
        self.diagonals().into_iter().map(|(_, l)| l).collect()
    }

    fn rotated_prefix(&self, k: usize, axis: Unit<Vector3<f64>>, angle: f64) -> Polygon {
        let rot = Rotation3::from_axis_angle(&axis, angle);
        let mut edges = self.edges.clone();
        for e in edges.iter_mut().take(k + 1) {
            *e = rot * *e;
        }
        let side_lengths = edges.iter().map(|e| e.norm()).collect();
        Polygon {
            edges,
            side_lengths,
            closure_tol: self.closure_tol,
        }
    }

    /// Hamiltonian bending flow for time t: rotates e_1..e_{k+1} about the
    /// k-th diagonal with angular speed equal to the diagonal length, so the
    /// orbit is periodic with period 2*pi / l_k. A polygon with l_k = 0 is a
    /// fixed point of the flow.
    pub fn bend_flow(&self, k: usize, t: f64) -> Result<Polygon> {
        let mu = self.diagonal(k)?;
        let len = mu.norm();
        if len == 0.0 {
            return Ok(self.clone());
        }
        Ok(self.rotated_prefix(k, Unit::new_unchecked(mu / len), t * len))
    }

    /// Normalized bending action: rotation by the given angle about the k-th
    /// diagonal. Undefined when the diagonal vanishes (only prodigal
    /// polygons carry the full torus of bending circles).
    pub fn bend_action(&self, k: usize, theta: f64) -> Result<Polygon> {
        let mu = self.diagonal(k)?;
        let len = mu.norm();
        if len <= self.closure_tol {
            return Err(Error::UndefinedAction(k));
        }
        Ok(self.rotated_prefix(k, Unit::new_unchecked(mu / len), theta))
    }

    /// Action-angle coordinates over the fan triangulation. Errors when a
    /// fan triangle is flat (a diagonal collinear with the following edge),
    /// naming the offending triangle.
    pub fn action_angle(&self) -> Result<ActionAngle> {
        let n = self.n();
        let scale = self.total_length();
        let ell = self.diagonal_lengths();

        // In-plane reference vector of fan triangle m seen from the axis
        // along diagonal k: component of the other diagonal of triangle m
        // orthogonal to the axis.
        let perp_of = |dir: Vector3<f64>, axis: &Vector3<f64>, triangle: usize| {
            let w = dir - axis * dir.dot(axis);
            if w.norm() <= DEGENERACY_EPS * scale {
                return Err(Error::DegenerateTriangle(triangle));
            }
            Ok(w.normalize())
        };

        let mut theta = Vec::with_capacity(n - 3);
        for i in 1..=n - 3 {
            let mu = self.partial(i + 1);
            let len = mu.norm();
            if len <= DEGENERACY_EPS * scale {
                return Err(Error::DegenerateTriangle(i));
            }
            let axis = mu / len;
            let w_lower = perp_of(self.partial(i), &axis, i)?;
            let w_upper = perp_of(self.partial(i + 2), &axis, i + 1)?;
            let theta_hat = f64::atan2(axis.dot(&w_lower.cross(&w_upper)), w_lower.dot(&w_upper));
            let theta_hat = if theta_hat < 0.0 {
                theta_hat + std::f64::consts::TAU
            } else {
                theta_hat
            };
            let mut t = std::f64::consts::PI - theta_hat;
            if t < 0.0 {
                t += std::f64::consts::TAU;
            }
            theta.push(t);
        }
        Ok(ActionAngle { ell, theta })
    }

    /// Non-strict triangle inequalities linking consecutive diagonals and
    /// sides, within the closure tolerance. Every closed polygon satisfies
    /// them; bending fixed points make some of them tight.
    pub fn check_gc(&self) -> bool {
        let n = self.n();
        let tol = self.closure_tol;
        let r = &self.side_lengths;
        if n == 3 {
            return triangle_ok(r[0], r[1], r[2], tol);
        }
        let ell = self.diagonal_lengths();
        if !triangle_ok(r[0], r[1], ell[0], tol) {
            return false;
        }
        for i in 1..=n - 4 {
            if !triangle_ok(ell[i - 1], ell[i], r[i + 1], tol) {
                return false;
            }
        }
        triangle_ok(ell[n - 4], r[n - 2], r[n - 1], tol)
    }

    /// Classify as a fixed point of bending around the last proper diagonal.
    /// Collinearity is tested through normalized cross products against
    /// `tol`.
    pub fn classify_fixed(&self, tol: f64) -> FixedPointKind {
        let n = self.n();
        let first = &self.edges[..n - 2];
        let collinear = |a: &Vector3<f64>, b: &Vector3<f64>| {
            a.cross(b).norm() <= tol * a.norm() * b.norm()
        };
        let first_collinear = (0..first.len())
            .all(|i| (i + 1..first.len()).all(|j| collinear(&first[i], &first[j])));
        if first_collinear {
            let mu: Vector3<f64> = first.iter().sum();
            let first_total: f64 = self.side_lengths[..n - 2].iter().sum();
            if mu.norm() > tol * first_total {
                let forward = first
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| e.dot(&mu) > 0.0)
                    .map(|(i, _)| i + 1)
                    .collect();
                return FixedPointKind::TypeI { forward };
            }
            // Zero diagonal: the last two edges then balance the (zero)
            // first block, so the pair test below decides.
        }
        if collinear(&self.edges[n - 2], &self.edges[n - 1]) {
            FixedPointKind::TypeII
        } else {
            FixedPointKind::NotFixed
        }
    }

    /// Equality in the quotient by orientation-preserving isometries: the
    /// Gram matrices of the edge tuples agree within `tol`, and a spanning
    /// triple (if any) has triple products of equal sign. Planar polygons
    /// are chirality-free, so Gram agreement suffices for them.
    pub fn so3_equivalent(&self, other: &Polygon, tol: f64) -> Result<bool> {
        let n = self.n();
        if other.n() != n {
            return Err(Error::Mismatch(format!(
                "edge counts differ: {n} vs {}",
                other.n()
            )));
        }
        for i in 0..n {
            for j in i..n {
                let d = self.edges[i].dot(&self.edges[j]) - other.edges[i].dot(&other.edges[j]);
                if d.abs() > tol {
                    return Ok(false);
                }
            }
        }
        let mut best = (0usize, 0usize, 0usize);
        let mut best_det = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let det = self.edges[i].cross(&self.edges[j]).dot(&self.edges[k]);
                    if det.abs() > best_det.abs() {
                        best_det = det;
                        best = (i, j, k);
                    }
                }
            }
        }
        if best_det.abs() <= tol {
            return Ok(true);
        }
        let (i, j, k) = best;
        let other_det = other.edges[i].cross(&other.edges[j]).dot(&other.edges[k]);
        Ok(best_det.signum() == other_det.signum())
    }

    /// Tangency at this polygon: the variation closes (i), keeps every side
    /// length to first order (ii), and has vanishing angular part (iii).
    pub fn tangent_check(&self, v: &[Vector3<f64>], tol: f64) -> bool {
        let n = self.n();
        assert_eq!(v.len(), n, "variation must have one vector per edge");
        let closing: Vector3<f64> = v.iter().sum();
        if closing.norm() > tol {
            return false;
        }
        for (e, vi) in self.edges.iter().zip(v) {
            if e.dot(vi).abs() > tol {
                return false;
            }
        }
        let angular: Vector3<f64> = (0..n)
            .map(|i| self.edges[i].cross(&v[i]) / self.side_lengths[i])
            .sum();
        angular.norm() <= tol
    }

    /// Riemannian pairing sum (1/r_j) <u_j, v_j>.
    pub fn inner(&self, u: &[Vector3<f64>], v: &[Vector3<f64>]) -> f64 {
        (0..self.n())
            .map(|j| u[j].dot(&v[j]) / self.side_lengths[j])
            .sum()
    }

    /// Symplectic pairing sum (1/r_j^2) <e_j, v_j x u_j>; the wedge order is
    /// fixed so that omega(u, v) = inner(u, J v) with `j_op` below.
    pub fn omega(&self, u: &[Vector3<f64>], v: &[Vector3<f64>]) -> f64 {
        (0..self.n())
            .map(|j| {
                self.edges[j].dot(&v[j].cross(&u[j])) / (self.side_lengths[j] * self.side_lengths[j])
            })
            .sum()
    }

    /// Complex structure (e_j / r_j) x u_j, slotwise.
    pub fn j_op(&self, u: &[Vector3<f64>]) -> Vec<Vector3<f64>> {
        (0..self.n())
            .map(|j| self.edges[j].cross(&u[j]) / self.side_lengths[j])
            .collect()
    }

    /// Euclidean projection of an arbitrary variation onto the tangent
    /// space: orthogonalize the closing, length and angular constraint rows,
    /// then subtract the components along them.
    pub fn project_tangent(&self, raw: &[Vector3<f64>]) -> Vec<Vector3<f64>> {
        let n = self.n();
        assert_eq!(raw.len(), n, "variation must have one vector per edge");
        let axes = [Vector3::x(), Vector3::y(), Vector3::z()];

        let mut rows: Vec<Vec<Vector3<f64>>> = Vec::with_capacity(n + 6);
        for a in axes {
            rows.push(vec![a; n]);
        }
        for i in 0..n {
            let mut row = vec![Vector3::zeros(); n];
            row[i] = self.edges[i];
            rows.push(row);
        }
        for a in axes {
            rows.push(
                (0..n)
                    .map(|j| a.cross(&self.edges[j]) / self.side_lengths[j])
                    .collect(),
            );
        }

        let dot = |u: &[Vector3<f64>], v: &[Vector3<f64>]| -> f64 {
            (0..n).map(|j| u[j].dot(&v[j])).sum()
        };

        // Gram-Schmidt over the constraint rows, dropping dependent ones.
        let mut basis: Vec<Vec<Vector3<f64>>> = Vec::new();
        for mut row in rows {
            for b in &basis {
                let c = dot(&row, b);
                for j in 0..n {
                    row[j] -= c * b[j];
                }
            }
            let norm = dot(&row, &row).sqrt();
            if norm > 1e-12 {
                for x in row.iter_mut() {
                    *x /= norm;
                }
                basis.push(row);
            }
        }

        let mut out = raw.to_vec();
        for b in &basis {
            let c = dot(&out, b);
            for j in 0..n {
                out[j] -= c * b[j];
            }
        }
        out
    }
}

impl Serialize for Polygon {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.n()))?;
        for e in &self.edges {
            seq.serialize_element(&[e.x, e.y, e.z])?;
        }
        seq.end()
    }
}

fn triangle_ok(a: f64, b: f64, c: f64, tol: f64) -> bool {
    a <= b + c + tol && b <= a + c + tol && c <= a + b + tol
}
