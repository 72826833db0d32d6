//! Standard inputs: rectangles, the γ-triangle, polygonal circles, and seeded
//! random scenes, functions and complexes.

use rand::Rng;

use crate::cf1d::{Cf1d, Interval};
use crate::cfnd::{BoxCell, Cfnd, Generator};
use crate::complexes::{EmbeddedComplex, PlFunction};
use crate::geometry::{Polytope, Vector};

/// Closedness pattern of a rectangle `⌈a,b⌋ × ⌈c,d⌋`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RectangleKind {
    /// `[a,b) × [c,d)`
    HalfOpen,
    /// `[a,b) × [c,d]`
    OpenRight,
    /// `(a,b] × [c,d]`
    OpenLeft,
    /// `[a,b] × [c,d]`
    Closed,
}

pub fn rectangle(kind: RectangleKind, a: f64, b: f64, c: f64, d: f64) -> Cfnd {
    let (x, y) = match kind {
        RectangleKind::HalfOpen => (Interval::closed_open(a, b), Interval::closed_open(c, d)),
        RectangleKind::OpenRight => (Interval::closed_open(a, b), Interval::closed(c, d)),
        RectangleKind::OpenLeft => (Interval::open_closed(a, b), Interval::closed(c, d)),
        RectangleKind::Closed => (Interval::closed(a, b), Interval::closed(c, d)),
    };
    Cfnd::boxed(1, BoxCell::new(vec![x, y]))
}

/// Triangle with vertices `(0,0)`, `(1,0)`, `(0,b)` minus its hypotenuse.
pub fn gamma_triangle(b: f64) -> Cfnd {
    let o = Vector::new(vec![0.0, 0.0]);
    let x = Vector::new(vec![1.0, 0.0]);
    let y = Vector::new(vec![0.0, b]);
    let tri = Polytope::new(vec![o, x.clone(), y.clone()]).expect("nonempty");
    let hyp = Polytope::new(vec![x, y]).expect("nonempty");
    Cfnd::new(2, vec![(1, Generator::Polytope(tri)), (-1, Generator::Polytope(hyp))]).expect("planar")
}

/// Boundary of the regular `n`-gon of circumradius `r`: edges minus vertices,
/// so each point of the curve is counted once.
pub fn polygon_boundary(n: usize, r: f64) -> Cfnd {
    use std::f64::consts::PI;
    let pts: Vec<Vector> = (0..n)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / n as f64;
            Vector::new(vec![r * a.cos(), r * a.sin()])
        })
        .collect();
    let mut phi = Cfnd::zero(2);
    for k in 0..n {
        let edge = Polytope::new(vec![pts[k].clone(), pts[(k + 1) % n].clone()]).expect("nonempty");
        phi.push(1, Generator::Polytope(edge)).expect("planar");
        phi.push(-1, Generator::Polytope(Polytope::point(pts[k].clone())))
            .expect("planar");
    }
    phi
}

fn nonzero_coef<R: Rng>(rng: &mut R) -> i64 {
    let c = rng.gen_range(1..=2);
    if rng.gen_bool(0.5) {
        c
    } else {
        -c
    }
}

/// Sum of 1 to 4 half-open voxels `∏[lowᵢ, highᵢ)` with corners on a
/// quarter-integer lattice in `[−2, 2]`.
pub fn random_voxel_scene<R: Rng>(rng: &mut R, dim: usize) -> Cfnd {
    let mut phi = Cfnd::zero(dim);
    for _ in 0..rng.gen_range(1..=4) {
        let mut low = Vec::with_capacity(dim);
        let mut high = Vec::with_capacity(dim);
        for _ in 0..dim {
            let a = rng.gen_range(-8..=6) as f64 * 0.25;
            let len = rng.gen_range(1..=6) as f64 * 0.25;
            low.push(a);
            high.push(a + len);
        }
        let b = BoxCell::half_open(&low, &high).expect("low < high");
        phi.push(nonzero_coef(rng), Generator::Box(b)).expect("same dimension");
    }
    phi
}

fn random_interval<R: Rng>(rng: &mut R) -> Interval {
    let a = rng.gen_range(-8..=6) as f64 * 0.25;
    let len = rng.gen_range(0..=6) as f64 * 0.25;
    if len == 0.0 {
        return Interval::point(a);
    }
    Interval::new(a, a + len, rng.gen_bool(0.5), rng.gen_bool(0.5))
}

/// Compact box sum with random closedness on every axis.
pub fn random_box_scene<R: Rng>(rng: &mut R, dim: usize) -> Cfnd {
    let mut phi = Cfnd::zero(dim);
    for _ in 0..rng.gen_range(1..=3) {
        let axes = (0..dim).map(|_| random_interval(rng)).collect();
        phi.push(nonzero_coef(rng), Generator::Box(BoxCell::new(axes)))
            .expect("same dimension");
    }
    phi
}

/// Sum of random closed polytopes (2 to 4 generating points each).
pub fn random_polytope_scene<R: Rng>(rng: &mut R, dim: usize) -> Cfnd {
    let mut phi = Cfnd::zero(dim);
    for _ in 0..rng.gen_range(1..=3) {
        let pts = (0..rng.gen_range(2..=4))
            .map(|_| Vector::new((0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect()))
            .collect();
        let p = Polytope::new(pts).expect("nonempty");
        phi.push(nonzero_coef(rng), Generator::Polytope(p)).expect("same dimension");
    }
    phi
}

/// Compactly supported step function built from random weighted intervals.
pub fn random_cf1d<R: Rng>(rng: &mut R) -> Cf1d {
    let n = rng.gen_range(0..=5);
    Cf1d::from_weighted_intervals((0..n).map(|_| (nonzero_coef(rng), random_interval(rng))))
}

/// Random subcomplex of a jittered triangulated 3×3 grid in the plane
/// (at most 33 cells), closed under faces.
pub fn random_complex<R: Rng>(rng: &mut R) -> EmbeddedComplex {
    let mut vertices = Vec::with_capacity(9);
    for j in 0..3 {
        for i in 0..3 {
            vertices.push(Vector::new(vec![
                i as f64 + rng.gen_range(-0.2..0.2),
                j as f64 + rng.gen_range(-0.2..0.2),
            ]));
        }
    }
    let id = |i: usize, j: usize| 3 * j + i;
    let mut candidates: Vec<Vec<usize>> = Vec::new();
    for j in 0..2 {
        for i in 0..2 {
            candidates.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            candidates.push(vec![id(i, j), id(i, j + 1), id(i + 1, j + 1)]);
        }
    }
    for j in 0..3 {
        for i in 0..3 {
            if i < 2 {
                candidates.push(vec![id(i, j), id(i + 1, j)]);
            }
            if j < 2 {
                candidates.push(vec![id(i, j), id(i, j + 1)]);
            }
            if i < 2 && j < 2 {
                candidates.push(vec![id(i, j), id(i + 1, j + 1)]);
            }
            candidates.push(vec![id(i, j)]);
        }
    }
    let p = rng.gen_range(0.15..0.6);
    let mut cells: Vec<Vec<usize>> = candidates.into_iter().filter(|_| rng.gen_bool(p)).collect();
    if cells.is_empty() {
        cells.push(vec![rng.gen_range(0..9)]);
    }
    EmbeddedComplex::new(vertices, cells).expect("grid cells are nondegenerate")
}

/// Vertex values on a coarse lattice so that ties occur, mixed with generic reals.
pub fn random_values<R: Rng>(rng: &mut R, z: &EmbeddedComplex) -> PlFunction {
    let values = (0..z.vertices().len())
        .map(|_| {
            if rng.gen_bool(0.5) {
                rng.gen_range(-4..=4) as f64 * 0.5
            } else {
                rng.gen_range(-2.0..2.0)
            }
        })
        .collect();
    PlFunction::new(z, values).expect("one value per vertex")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn polygon_has_circle_euler_characteristic() {
        assert_eq!(polygon_boundary(16, 1.0).euler_integral(), Ok(0));
    }

    #[test]
    fn random_complexes_are_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let z = random_complex(&mut rng);
            assert!(!z.cells().is_empty() && z.cells().len() <= 50);
        }
    }

    #[test]
    fn voxel_scenes_are_gamma_constructible() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let cone = crate::geometry::OrthantCone::non_positive(2);
        for _ in 0..20 {
            assert!(random_voxel_scene(&mut rng, 2).is_gamma_constructible(&cone).unwrap());
        }
    }
}
