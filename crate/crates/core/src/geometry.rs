//! Convex geometry on generating point sets: support functions, orthant cones,
//! distances to simplices and Minkowski sums.
//!
//! Polytopes are never reduced to their hull. Every quantity used downstream is
//! either a vertex maximum (support values, farthest points) or a small
//! barycentric projection, so redundant generators cost time but never accuracy.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform comparison tolerance for breakpoints and coordinates.
pub const EPS: f64 = 1e-9;

/// A point of the ambient vector space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()), "non-finite coordinate");
        Vector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: f64) -> Vector {
        Vector(self.0.iter().map(|a| a * s).collect())
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    pub fn dist(&self, other: &Vector) -> f64 {
        self.sub(other).norm()
    }
}

impl From<Vec<f64>> for Vector {
    fn from(v: Vec<f64>) -> Self {
        Vector::new(v)
    }
}

impl From<&[f64]> for Vector {
    fn from(v: &[f64]) -> Self {
        Vector::new(v.to_vec())
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// An element of the dual space, paired with vectors by the dot product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinearForm(Vec<f64>);

impl LinearForm {
    pub fn new(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()), "non-finite coordinate");
        LinearForm(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn pair(&self, x: &Vector) -> f64 {
        debug_assert_eq!(self.dim(), x.dim());
        self.0.iter().zip(x.coords()).map(|(a, b)| a * b).sum()
    }

    pub fn neg(&self) -> LinearForm {
        self.scale(-1.0)
    }

    pub fn scale(&self, s: f64) -> LinearForm {
        LinearForm(self.0.iter().map(|a| a * s).collect())
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0.0)
    }
}

impl From<Vec<f64>> for LinearForm {
    fn from(v: Vec<f64>) -> Self {
        LinearForm::new(v)
    }
}

impl std::ops::Index<usize> for LinearForm {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Convex hull of a nonempty finite point set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polytope {
    points: Vec<Vector>,
}

impl Polytope {
    pub fn new(points: Vec<Vector>) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::InvalidInput("polytope needs at least one point".into()))?;
        let dim = first.dim();
        if let Some(bad) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Polytope { points })
    }

    pub fn point(p: Vector) -> Self {
        Polytope { points: vec![p] }
    }

    /// Closed axis-aligned box `[low, high]`, one generator per distinct corner.
    pub fn closed_box(low: &[f64], high: &[f64]) -> Self {
        let mut corners: Vec<Vec<f64>> = vec![Vec::new()];
        for (&a, &b) in low.iter().zip(high) {
            let ends: &[f64] = if a == b { &[a][..] } else { &[a, b][..] };
            corners = corners
                .into_iter()
                .flat_map(|c| {
                    ends.iter().map(move |&e| {
                        let mut c = c.clone();
                        c.push(e);
                        c
                    })
                })
                .collect();
        }
        Polytope {
            points: corners.into_iter().map(Vector::new).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn translate(&self, by: &Vector) -> Polytope {
        Polytope {
            points: self.points.iter().map(|p| p.add(by)).collect(),
        }
    }

    pub fn map_linear(&self, rows: &[Vec<f64>]) -> Polytope {
        Polytope {
            points: self
                .points
                .iter()
                .map(|p| {
                    Vector::new(
                        rows.iter()
                            .map(|r| r.iter().zip(p.coords()).map(|(a, b)| a * b).sum())
                            .collect(),
                    )
                })
                .collect(),
        }
    }

    /// Membership in the convex hull, decided exactly by Carathéodory
    /// enumeration of affinely independent generator subsets.
    pub fn contains(&self, x: &Vector) -> bool {
        let mut pts: Vec<&Vector> = Vec::with_capacity(self.points.len());
        for p in &self.points {
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        if pts.len() == 1 {
            return pts[0].dist(x) <= EPS;
        }
        if x.dim() == 1 {
            let lo = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
            let hi = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
            return x[0] >= lo - EPS && x[0] <= hi + EPS;
        }
        let rank = affine_rank(&pts);
        let mut found = false;
        for_each_combination(pts.len(), rank + 1, &mut |idx| {
            if found {
                return;
            }
            let face: Vec<Vector> = idx.iter().map(|&i| pts[i].clone()).collect();
            if let Some(proj) = project_to_face(x, &face) {
                if proj.weights.iter().all(|&w| w >= -EPS) && proj.point.dist(x) <= EPS {
                    found = true;
                }
            }
        });
        found
    }
}

/// Largest value of `<ξ, p>` over the generators; equals the support function.
pub fn support_value(p: &Polytope, xi: &LinearForm) -> f64 {
    p.points
        .iter()
        .map(|v| xi.pair(v))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Pairwise sums of generators. The hull of the result is `P + Q`.
pub fn minkowski_points(p: &Polytope, q: &Polytope) -> Result<Polytope> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    let points = p
        .points
        .iter()
        .flat_map(|a| q.points.iter().map(move |b| a.add(b)))
        .collect();
    Ok(Polytope { points })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AxisSign {
    NonPositive,
    NonNegative,
}

impl AxisSign {
    fn factor(self) -> f64 {
        match self {
            AxisSign::NonPositive => -1.0,
            AxisSign::NonNegative => 1.0,
        }
    }

    pub fn flip(self) -> AxisSign {
        match self {
            AxisSign::NonPositive => AxisSign::NonNegative,
            AxisSign::NonNegative => AxisSign::NonPositive,
        }
    }
}

/// Closed orthant `∏ ℝ_{sign_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthantCone {
    signs: Vec<AxisSign>,
}

impl OrthantCone {
    pub fn new(signs: Vec<AxisSign>) -> Self {
        OrthantCone { signs }
    }

    /// `(ℝ≤0)^d`, the cone of sublevel-set persistence.
    pub fn non_positive(dim: usize) -> Self {
        OrthantCone {
            signs: vec![AxisSign::NonPositive; dim],
        }
    }

    pub fn non_negative(dim: usize) -> Self {
        OrthantCone {
            signs: vec![AxisSign::NonNegative; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[AxisSign] {
        &self.signs
    }

    pub fn antipodal(&self) -> OrthantCone {
        OrthantCone {
            signs: self.signs.iter().map(|s| s.flip()).collect(),
        }
    }

    pub fn contains(&self, x: &Vector) -> bool {
        self.signs
            .iter()
            .zip(x.coords())
            .all(|(s, &c)| s.factor() * c >= 0.0)
    }
}

/// `ξ ∈ γ°`, i.e. `ξ(γ) ⊆ ℝ≥0`.
pub fn polar_contains(cone: &OrthantCone, xi: &LinearForm) -> bool {
    cone.signs
        .iter()
        .zip(xi.coords())
        .all(|(s, &c)| s.factor() * c >= 0.0)
}

/// `ξ ∈ Int(γ°)`.
pub fn polar_interior_contains(cone: &OrthantCone, xi: &LinearForm) -> bool {
    cone.signs
        .iter()
        .zip(xi.coords())
        .all(|(s, &c)| s.factor() * c > 0.0)
}

/// Projection of a point onto the affine hull of a face, with barycentric weights.
struct FaceProjection {
    point: Vector,
    weights: Vec<f64>,
}

fn project_to_face(v: &Vector, face: &[Vector]) -> Option<FaceProjection> {
    let p0 = &face[0];
    let m = face.len() - 1;
    if m == 0 {
        return Some(FaceProjection {
            point: p0.clone(),
            weights: vec![1.0],
        });
    }
    let d = p0.dim();
    let e = DMatrix::from_fn(d, m, |r, c| face[c + 1][r] - p0[r]);
    let rhs = DVector::from_iterator(d, v.sub(p0).coords().iter().copied());
    let gram = e.transpose() * &e;
    let lambda = gram.lu().solve(&(e.transpose() * rhs))?;
    if lambda.iter().any(|x| !x.is_finite()) {
        return None;
    }
    let offset = &e * &lambda;
    let point = Vector::new((0..d).map(|r| p0[r] + offset[r]).collect());
    let mut weights = vec![1.0 - lambda.sum()];
    weights.extend(lambda.iter().copied());
    Some(FaceProjection { point, weights })
}

/// Euclidean distance from `v` to the convex hull of an affinely independent set,
/// by projecting onto every face and keeping the feasible projections.
pub fn dist_to_simplex(v: &Vector, simplex: &[Vector]) -> f64 {
    let n = simplex.len();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1u32 << n) {
        let face: Vec<Vector> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| simplex[i].clone())
            .collect();
        if let Some(proj) = project_to_face(v, &face) {
            if proj.weights.iter().all(|&w| w >= -EPS) {
                best = best.min(proj.point.dist(v));
            }
        }
    }
    best
}

/// Distance from `v` to the farthest point of the simplex, attained at a vertex.
pub fn max_dist_to_simplex(v: &Vector, simplex: &[Vector]) -> f64 {
    simplex
        .iter()
        .map(|p| p.dist(v))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn affine_rank(pts: &[&Vector]) -> usize {
    if pts.len() < 2 {
        return 0;
    }
    let d = pts[0].dim();
    let m = DMatrix::from_fn(d, pts.len() - 1, |r, c| pts[c + 1][r] - pts[0][r]);
    m.rank(1e-10)
}

fn for_each_combination(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    let mut cur = Vec::with_capacity(k);
    rec(0, n, k, &mut cur, f);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::from(c)
    }

    fn poly(pts: &[&[f64]]) -> Polytope {
        Polytope::new(pts.iter().map(|p| v(p)).collect()).unwrap()
    }

    #[test]
    fn support_values() {
        let square = Polytope::closed_box(&[0.0, 0.0], &[1.0, 1.0]);
        assert_eq!(support_value(&square, &LinearForm::from(vec![1.0, 1.0])), 2.0);
        let point = Polytope::point(v(&[0.0, 0.0]));
        assert_eq!(support_value(&point, &LinearForm::from(vec![3.0, -7.0])), 0.0);
        let tri = poly(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 2.0]]);
        assert_eq!(support_value(&tri, &LinearForm::from(vec![1.0, 1.0])), 2.0);
    }

    #[test]
    fn polar_membership() {
        let neg = OrthantCone::non_positive(2);
        assert!(polar_contains(&neg, &LinearForm::from(vec![-1.0, -2.0])));
        assert!(!polar_contains(&neg, &LinearForm::from(vec![1.0, -1.0])));
        let pos = OrthantCone::non_negative(2);
        assert!(polar_contains(&pos, &LinearForm::from(vec![0.0, 0.0])));
        assert!(!polar_interior_contains(&pos, &LinearForm::from(vec![0.0, 1.0])));
    }

    #[test]
    fn simplex_distances() {
        let seg = [v(&[1.0, 0.0]), v(&[0.0, 1.0])];
        assert!((dist_to_simplex(&v(&[0.0, 0.0]), &seg) - 0.5f64.sqrt()).abs() < 1e-15);
        let tri = [v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.0, 1.0])];
        assert_eq!(dist_to_simplex(&v(&[0.2, 0.2]), &tri), 0.0);
        let unit = [v(&[0.0, 0.0]), v(&[1.0, 0.0])];
        assert!((dist_to_simplex(&v(&[2.0, 0.0]), &unit) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn farthest_vertex_distance() {
        let seg = [v(&[1.0, 0.0]), v(&[3.0, 0.0])];
        assert_eq!(max_dist_to_simplex(&v(&[0.0, 0.0]), &seg), 3.0);
        let h = 3f64.sqrt() / 2.0;
        let tri = [v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.5, h])];
        let centroid = v(&[0.5, h / 3.0]);
        assert!((max_dist_to_simplex(&centroid, &tri) - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!((max_dist_to_simplex(&tri[0], &tri) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn minkowski_generators() {
        let unit = poly(&[&[0.0], &[1.0]]);
        let sum = minkowski_points(&unit, &unit).unwrap();
        let xs: Vec<f64> = sum.points().iter().map(|p| p[0]).collect();
        assert_eq!(xs, vec![0.0, 1.0, 1.0, 2.0]);

        let sq = poly(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]);
        let big = minkowski_points(&sq, &sq).unwrap();
        assert_eq!(big.points().len(), 16);
        assert!(big.contains(&v(&[2.0, 2.0])));
        assert!(big.contains(&v(&[1.5, 0.1])));
        assert!(!big.contains(&v(&[2.1, 1.0])));

        let moved = minkowski_points(&Polytope::point(v(&[3.0, -1.0])), &sq).unwrap();
        assert_eq!(moved, sq.translate(&v(&[3.0, -1.0])));
    }

    #[test]
    fn hull_membership() {
        let tri = poly(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 2.0], &[0.2, 0.2]]);
        assert!(tri.contains(&v(&[0.5, 1.0])));
        assert!(!tri.contains(&v(&[0.6, 1.0])));
        let seg = poly(&[&[0.0, 0.0], &[2.0, 2.0]]);
        assert!(seg.contains(&v(&[1.0, 1.0])));
        assert!(!seg.contains(&v(&[1.0, 1.1])));
        let tet = poly(&[&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        assert!(tet.contains(&v(&[0.2, 0.2, 0.2])));
        assert!(!tet.contains(&v(&[0.4, 0.4, 0.4])));
    }
}
