//! Euler characteristic curves, sublevel-sets transforms, continuous Euler
//! integrals and the Euler-Bessel transform on embedded simplicial complexes.
//!
//! Every count goes through one engine: for a region `S` meeting each closed
//! cell in an empty or contractible set,
//! `χ_c(relint σ ∩ S) = [cl σ ∩ S ≠ ∅] − Σ_{τ < σ} χ_c(relint τ ∩ S)`,
//! and `χ(Z ∩ S)` is the sum over cells.

use std::collections::{BTreeSet, HashMap};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cf1d::{Cf1d, Interval};
use crate::error::{Error, Result};
use crate::geometry::{dist_to_simplex, max_dist_to_simplex, LinearForm, Vector, EPS};
use crate::kernels::{Kernel, Monotonicity};

/// Geometric simplicial complex, closed under taking faces.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedComplex {
    vertices: Vec<Vector>,
    /// Sorted vertex lists, ordered by dimension then lexicographically.
    cells: Vec<Vec<usize>>,
    /// Indices of all proper faces of each cell.
    faces: Vec<Vec<usize>>,
}

impl EmbeddedComplex {
    /// Builds the face closure of the given cells.
    pub fn new(vertices: Vec<Vector>, cells: Vec<Vec<usize>>) -> Result<Self> {
        let dim = vertices.first().map_or(0, |v| v.dim());
        if let Some(v) = vertices.iter().find(|v| v.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.dim(),
            });
        }
        let mut closed: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
        for cell in &cells {
            let mut c = cell.clone();
            c.sort_unstable();
            c.dedup();
            if c.is_empty() || c.len() > 16 {
                return Err(Error::InvalidInput(format!("bad cell {cell:?}")));
            }
            if let Some(&i) = c.iter().find(|&&i| i >= vertices.len()) {
                return Err(Error::InvalidInput(format!("vertex index {i} out of range")));
            }
            if !affinely_independent(&c.iter().map(|&i| &vertices[i]).collect::<Vec<_>>()) {
                return Err(Error::InvalidInput(format!(
                    "cell {c:?} is not affinely independent"
                )));
            }
            for mask in 1u32..(1 << c.len()) {
                let sub: Vec<usize> = (0..c.len())
                    .filter(|b| mask & (1 << b) != 0)
                    .map(|b| c[b])
                    .collect();
                closed.insert((sub.len(), sub));
            }
        }
        let cells: Vec<Vec<usize>> = closed.into_iter().map(|(_, c)| c).collect();
        let index: HashMap<&[usize], usize> =
            cells.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
        let faces = cells
            .iter()
            .map(|c| {
                let full = (1u32 << c.len()) - 1;
                (1..full)
                    .map(|mask| {
                        let sub: Vec<usize> = (0..c.len())
                            .filter(|b| mask & (1 << b) != 0)
                            .map(|b| c[b])
                            .collect();
                        index[sub.as_slice()]
                    })
                    .collect()
            })
            .collect();
        Ok(EmbeddedComplex {
            vertices,
            cells,
            faces,
        })
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell_dim(&self, i: usize) -> usize {
        self.cells[i].len() - 1
    }

    fn sign(&self, i: usize) -> i64 {
        if self.cell_dim(i).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    fn cell_points(&self, i: usize) -> Vec<Vector> {
        self.cells[i].iter().map(|&v| self.vertices[v].clone()).collect()
    }

    /// `χ(Z ∩ S)` from an oracle deciding `cl σ ∩ S ≠ ∅` for each closed cell.
    /// Valid when those intersections are empty or contractible.
    pub fn chi_region(&self, mut meets: impl FnMut(&[usize]) -> bool) -> i64 {
        let mut local = vec![0i64; self.cells.len()];
        for i in 0..self.cells.len() {
            let below: i64 = self.faces[i].iter().map(|&f| local[f]).sum();
            local[i] = i64::from(meets(&self.cells[i])) - below;
        }
        local.iter().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.chi_region(|_| true)
    }

    /// `χ_c(Z ∩ B°(v, t))`; each cell meeting the open ball contributes an open
    /// cell of its own dimension.
    pub fn chi_open_ball_region(&self, v: &Vector, t: f64) -> i64 {
        (0..self.cells.len())
            .filter(|&i| dist_to_simplex(v, &self.cell_points(i)) < t)
            .map(|i| self.sign(i))
            .sum()
    }

    /// Vertex values of `⟨ξ, x⟩`.
    pub fn height(&self, xi: &LinearForm) -> Result<PlFunction> {
        if let Some(v) = self.vertices.iter().find(|v| v.dim() != xi.dim()) {
            return Err(Error::DimensionMismatch {
                expected: xi.dim(),
                found: v.dim(),
            });
        }
        Ok(PlFunction {
            values: self.vertices.iter().map(|v| xi.pair(v)).collect(),
        })
    }

    fn distances(&self, v: &Vector) -> Vec<(f64, f64)> {
        (0..self.cells.len())
            .map(|i| {
                let pts = self.cell_points(i);
                (dist_to_simplex(v, &pts), max_dist_to_simplex(v, &pts))
            })
            .collect()
    }
}

fn affinely_independent(pts: &[&Vector]) -> bool {
    if pts.len() <= 1 {
        return true;
    }
    let d = pts[0].dim();
    if pts.len() > d + 1 {
        return false;
    }
    let m = DMatrix::from_fn(d, pts.len() - 1, |r, c| pts[c + 1][r] - pts[0][r]);
    m.rank(1e-12) == pts.len() - 1
}

/// Function on a complex, affine on each cell, given by its vertex values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlFunction {
    values: Vec<f64>,
}

impl PlFunction {
    pub fn new(z: &EmbeddedComplex, values: Vec<f64>) -> Result<Self> {
        if values.len() != z.vertices.len() {
            return Err(Error::DimensionMismatch {
                expected: z.vertices.len(),
                found: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite vertex value".into()));
        }
        Ok(PlFunction { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn neg(&self) -> PlFunction {
        PlFunction {
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    /// `Σ ξᵢ fᵢ` for coordinate functions `fᵢ`.
    pub fn combine(coords: &[PlFunction], xi: &LinearForm) -> Result<PlFunction> {
        if coords.len() != xi.dim() || coords.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: xi.dim(),
                found: coords.len(),
            });
        }
        let n = coords[0].values.len();
        if coords.iter().any(|c| c.values.len() != n) {
            return Err(Error::InvalidInput("coordinate functions differ in length".into()));
        }
        Ok(PlFunction {
            values: (0..n)
                .map(|j| coords.iter().zip(xi.coords()).map(|(c, w)| w * c.values[j]).sum())
                .collect(),
        })
    }

    fn range_on(&self, cell: &[usize]) -> (f64, f64) {
        cell.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
            (lo.min(self.values[i]), hi.max(self.values[i]))
        })
    }
}

/// Right-continuous integer step function `Σ mᵢ·1_{[cᵢ,∞)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepCurve {
    jumps: Vec<(f64, i64)>,
}

impl StepCurve {
    pub fn new(mut jumps: Vec<(f64, i64)>) -> Self {
        jumps.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, i64)> = Vec::with_capacity(jumps.len());
        for (c, m) in jumps {
            match merged.last_mut() {
                Some(last) if (c - last.0).abs() <= EPS => last.1 += m,
                _ => merged.push((c, m)),
            }
        }
        merged.retain(|(_, m)| *m != 0);
        StepCurve { jumps: merged }
    }

    /// Requires zero at `−∞` and right-continuity.
    pub fn from_cf1d(f: &Cf1d) -> Result<Self> {
        if f.interval_values()[0] != 0 || !f.is_right_closed() {
            return Err(Error::InvalidInput(
                "not a right-continuous curve vanishing at −∞".into(),
            ));
        }
        Ok(StepCurve::new(a_e_jumps(f)))
    }

    pub fn jumps(&self) -> &[(f64, i64)] {
        &self.jumps
    }

    pub fn value(&self, t: f64) -> i64 {
        self.jumps
            .iter()
            .take_while(|(c, _)| *c <= t + EPS)
            .map(|(_, m)| m)
            .sum()
    }

    pub fn total(&self) -> i64 {
        self.jumps.iter().map(|(_, m)| m).sum()
    }

    pub fn to_cf1d(&self) -> Cf1d {
        Cf1d::from_weighted_intervals(self.jumps.iter().map(|&(c, m)| (m, Interval::ray_up(c))))
    }

    /// `Σ mᵢ cᵢ`, the upper continuous Euler integral of the underlying function.
    pub fn moment(&self) -> f64 {
        self.jumps.iter().map(|&(c, m)| m as f64 * c).sum()
    }
}

/// Jumps of the interval values across each breakpoint; point values are
/// ignored, so the result describes `f` almost everywhere.
fn a_e_jumps(f: &Cf1d) -> Vec<(f64, i64)> {
    let iv = f.interval_values();
    f.breakpoints()
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, iv[i + 1] - iv[i]))
        .filter(|(_, m)| *m != 0)
        .collect()
}

fn vertex_candidates(g: &PlFunction) -> Vec<f64> {
    g.values.clone()
}

/// `t ↦ χ({g ≤ t} ∩ Z)`.
pub fn sublevel_curve(z: &EmbeddedComplex, g: &PlFunction) -> StepCurve {
    let f = Cf1d::sample(vertex_candidates(g), |t| {
        z.chi_region(|cell| g.range_on(cell).0 <= t + EPS)
    });
    StepCurve::from_cf1d(&f).expect("sublevel curves are right-continuous")
}

/// `t ↦ χ({g ≥ t} ∩ Z)`, left-continuous and vanishing at `+∞`.
pub fn superlevel_curve(z: &EmbeddedComplex, g: &PlFunction) -> Cf1d {
    Cf1d::sample(vertex_candidates(g), |t| {
        z.chi_region(|cell| g.range_on(cell).1 >= t - EPS)
    })
}

/// `t ↦ χ({g = t} ∩ Z)`.
pub fn level_curve(z: &EmbeddedComplex, g: &PlFunction) -> Cf1d {
    Cf1d::sample(vertex_candidates(g), |t| {
        z.chi_region(|cell| {
            let (lo, hi) = g.range_on(cell);
            lo <= t + EPS && hi >= t - EPS
        })
    })
}

/// Lower-star model of the sublevel curve: `Σ_σ (−1)^{dim σ}·[max_σ g ≤ t]`.
pub fn lower_star_curve(z: &EmbeddedComplex, g: &PlFunction) -> StepCurve {
    StepCurve::new(
        (0..z.cells.len())
            .map(|i| (g.range_on(&z.cells[i]).1, z.sign(i)))
            .collect(),
    )
}

/// Euler characteristic transform in direction `ξ`.
pub fn ect(z: &EmbeddedComplex, xi: &LinearForm) -> Result<StepCurve> {
    Ok(sublevel_curve(z, &z.height(xi)?))
}

/// `∫ κ(t) χ({ξ∘f ≤ t} ∩ Z) dt`.
pub fn sublevel_transform(
    z: &EmbeddedComplex,
    f: &[PlFunction],
    xi: &LinearForm,
    kernel: &Kernel,
) -> Result<num_complex::Complex64> {
    let g = PlFunction::combine(f, xi)?;
    sublevel_curve(z, &g).to_cf1d().lebesgue_pair(kernel)
}

/// `∫_Z g ⌈dχ⌉`.
pub fn upper_euler_integral(z: &EmbeddedComplex, g: &PlFunction) -> f64 {
    sublevel_curve(z, g).moment()
}

/// `∫_Z g ⌊dχ⌋ = −∫_Z (−g) ⌈dχ⌉`.
pub fn lower_euler_integral(z: &EmbeddedComplex, g: &PlFunction) -> f64 {
    -upper_euler_integral(z, &g.neg())
}

/// `χ_c({g ∈ J} ∩ Z)` for any interval `J`, from compact slabs and levels.
pub fn chi_c_preimage(z: &EmbeddedComplex, g: &PlFunction, j: &Interval) -> i64 {
    if j.is_empty() {
        return 0;
    }
    let slab = |p: f64, q: f64| {
        z.chi_region(|cell| {
            let (lo, hi) = g.range_on(cell);
            hi >= p - EPS && lo <= q + EPS
        })
    };
    let mut chi = slab(j.lo, j.hi);
    if j.lo.is_finite() && !j.lo_closed {
        chi -= slab(j.lo, j.lo);
    }
    if j.hi.is_finite() && !j.hi_closed && j.hi != j.lo {
        chi -= slab(j.hi, j.hi);
    }
    chi
}

/// Jump data of `g` on `Y = {g ∈ J} ∩ Z`:
/// `χ_c({g ≤ s} ∩ Y) = Σ mᵢ 1_{[cᵢ,∞)}(s)` and `χ_c({g ≥ s} ∩ Y) = Σ nⱼ 1_{(−∞,dⱼ]}(s)`,
/// both almost everywhere in `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedDecomposition {
    pub sublevel: Vec<(f64, i64)>,
    pub superlevel: Vec<(f64, i64)>,
}

impl RestrictedDecomposition {
    pub fn new(z: &EmbeddedComplex, g: &PlFunction, j: &Interval) -> Self {
        let mut cands = vertex_candidates(g);
        cands.extend([j.lo, j.hi].into_iter().filter(|x| x.is_finite()));
        let below = Cf1d::sample(cands.iter().copied(), |s| {
            chi_c_preimage(z, g, &j.intersect(&Interval::ray_down(s)))
        });
        let above = Cf1d::sample(cands, |s| {
            chi_c_preimage(z, g, &j.intersect(&Interval::ray_up(s)))
        });
        RestrictedDecomposition {
            sublevel: a_e_jumps(&below),
            superlevel: a_e_jumps(&above).into_iter().map(|(d, n)| (d, -n)).collect(),
        }
    }

    /// `∫_Y k(g) ⌈dχ⌉` for `k` strictly monotone on the range of `g`.
    pub fn upper(&self, k: impl Fn(f64) -> f64, increasing: bool) -> f64 {
        let src = if increasing { &self.sublevel } else { &self.superlevel };
        src.iter().map(|&(c, m)| m as f64 * k(c)).sum()
    }

    /// `∫_Y k(g) ⌊dχ⌋` for `k` strictly monotone on the range of `g`.
    pub fn lower(&self, k: impl Fn(f64) -> f64, increasing: bool) -> f64 {
        self.upper(k, !increasing)
    }
}

/// Two sides of an identity evaluated independently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    pub lhs: f64,
    pub rhs: f64,
}

impl IdentityReport {
    pub fn deviation(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

fn monotone_direction(kernel: &Kernel) -> Result<bool> {
    match kernel.monotonicity() {
        Monotonicity::StrictlyIncreasing => Ok(true),
        Monotonicity::StrictlyDecreasing => Ok(false),
        Monotonicity::Unknown => Err(Error::MonotonicityUnknown),
    }
}

fn real_antiderivative(kernel: &Kernel) -> impl Fn(f64) -> Result<f64> + '_ {
    move |x| kernel.antiderivative_real(x).ok_or(Error::NonIntegrable)
}

/// Sublevel-sets transform with kernel `κ·1_{(a,b)}` against
/// `𝒦(b)χ({g≤b}∩Z) − 𝒦(a)χ({g≤a}∩Z) − ∫_{a<g≤b} 𝒦(g) d̃χ`, where `d̃χ` is the
/// upper integral for increasing `𝒦` and the lower one for decreasing `𝒦`.
pub fn index_formula_check(
    z: &EmbeddedComplex,
    f: &[PlFunction],
    xi: &LinearForm,
    kernel: &Kernel,
) -> Result<IdentityReport> {
    let increasing = monotone_direction(kernel)?;
    let g = PlFunction::combine(f, xi)?;
    let curve = sublevel_curve(z, &g);
    let lhs = curve.to_cf1d().lebesgue_pair(kernel)?.re;

    let (a, b) = kernel.window();
    let big_k = real_antiderivative(kernel);
    let kb = big_k(b)?;
    let mut rhs = kb * curve.value(b) as f64;
    if a.is_finite() {
        rhs -= big_k(a)? * curve.value(a) as f64;
    }
    let dec = RestrictedDecomposition::new(z, &g, &Interval::open_closed(a, b));
    let kk = |x: f64| kernel.antiderivative_real(x).unwrap_or(f64::NAN);
    rhs -= if increasing {
        dec.upper(kk, true)
    } else {
        dec.lower(kk, false)
    };
    Ok(IdentityReport { lhs, rhs })
}

/// Hybrid transform of the level curve with kernel `κ·1_{(a,b)}` against
/// `±(∫ 𝒦(g) ⌊dχ⌋ − ∫ 𝒦(g) ⌈dχ⌉)` over `{a ≤ g ≤ b} ∩ Z`.
pub fn level_index_check(
    z: &EmbeddedComplex,
    f: &[PlFunction],
    xi: &LinearForm,
    kernel: &Kernel,
) -> Result<IdentityReport> {
    let increasing = monotone_direction(kernel)?;
    let g = PlFunction::combine(f, xi)?;
    let lhs = level_curve(z, &g).lebesgue_pair(kernel)?.re;
    let (a, b) = kernel.window();
    let dec = RestrictedDecomposition::new(z, &g, &Interval::closed(a, b));
    let kk = |x: f64| kernel.antiderivative_real(x).unwrap_or(f64::NAN);
    let diff = dec.lower(kk, increasing) - dec.upper(kk, increasing);
    let rhs = if increasing { diff } else { -diff };
    Ok(IdentityReport { lhs, rhs })
}

/// Heaviside-kernel transform of the `(ℝ≤0)^n`-sublevel function of `f` at
/// `ξ ∈ Int(γ°)`, against `∫_{ξ∘f ≥ 0} ξ∘f ⌊dχ⌋`.
pub fn gr_index_check(z: &EmbeddedComplex, f: &[PlFunction], xi: &LinearForm) -> Result<IdentityReport> {
    if !xi.coords().iter().all(|&c| c < 0.0) {
        return Err(Error::InvalidInput(
            "direction must lie in the interior of the polar cone".into(),
        ));
    }
    let g = PlFunction::combine(f, xi)?;
    // ξ_* of the sublevel function is t ↦ χ({ξ∘f ≥ t} ∩ Z).
    let lhs = superlevel_curve(z, &g).lebesgue_pair(&Kernel::heaviside())?.re;
    let dec = RestrictedDecomposition::new(z, &g, &Interval::ray_up(0.0));
    let rhs = dec.lower(|x| x, true);
    Ok(IdentityReport { lhs, rhs })
}

/// Sublevel and superlevel curves of `d_v = ‖v − ·‖` on `Z`.
pub fn distance_curves(z: &EmbeddedComplex, v: &Vector) -> (StepCurve, Cf1d) {
    let dist = z.distances(v);
    let cands: Vec<f64> = dist.iter().flat_map(|&(lo, hi)| [lo, hi]).collect();
    let sub = Cf1d::sample(cands.iter().copied(), |t| {
        let mut k = 0;
        z.chi_region(|_| {
            let r = dist[k].0 <= t + EPS;
            k += 1;
            r
        })
    });
    let sup = Cf1d::sample(cands, |t| {
        (0..z.cells.len())
            .filter(|&i| dist[i].0 >= t - EPS)
            .map(|i| z.sign(i))
            .sum()
    });
    (
        StepCurve::from_cf1d(&sub).expect("sublevel curves are right-continuous"),
        sup,
    )
}

/// `∫_0^∞ χ(∂B(v,t) ∩ Z) dt`, with the sphere count taken as
/// `χ(Z ∩ B(v,t)) − χ_c(Z ∩ B°(v,t))`.
pub fn euler_bessel(z: &EmbeddedComplex, v: &Vector) -> f64 {
    let dist = z.distances(v);
    let mut cuts: Vec<f64> = dist.iter().flat_map(|&(lo, hi)| [lo, hi]).collect();
    cuts.push(0.0);
    cuts.sort_by(|a, b| a.total_cmp(b));
    cuts.dedup_by(|a, b| (*a - *b).abs() <= EPS);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let t = 0.5 * (w[0] + w[1]);
        let mut k = 0;
        let closed = z.chi_region(|_| {
            let r = dist[k].0 <= t;
            k += 1;
            r
        });
        let open = z.chi_open_ball_region(v, t);
        total += (closed - open) as f64 * (w[1] - w[0]);
    }
    total
}

/// `∫_Z d_v ⌊dχ⌋ − ∫_Z d_v ⌈dχ⌉` from the distance curve decompositions.
pub fn euler_bessel_index(z: &EmbeddedComplex, v: &Vector) -> f64 {
    let (sub, sup) = distance_curves(z, v);
    let upper = sub.moment();
    let lower: f64 = a_e_jumps(&sup).iter().map(|&(d, n)| -(n as f64) * d).sum();
    lower - upper
}

/// Whether the sublevel curve equals the level curve convolved with `1_{[0,∞)}`.
pub fn gamma_identity_check(z: &EmbeddedComplex, g: &PlFunction) -> Result<bool> {
    let sub = sublevel_curve(z, g).to_cf1d();
    let conv = level_curve(z, g).convolve(&Cf1d::indicator(Interval::ray_up(0.0)))?;
    Ok(sub == conv)
}
