//! Constructible functions on the real line, stored exactly as integer values on
//! breakpoints and on the open intervals between them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::EPS;
use crate::kernels::Kernel;

/// An interval of the extended line. Infinite ends are always open.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Self {
        Interval {
            lo,
            hi,
            lo_closed: lo_closed && lo.is_finite(),
            hi_closed: hi_closed && hi.is_finite(),
        }
    }

    pub fn closed(a: f64, b: f64) -> Self {
        Interval::new(a, b, true, true)
    }

    pub fn open(a: f64, b: f64) -> Self {
        Interval::new(a, b, false, false)
    }

    /// `[a, b)`
    pub fn closed_open(a: f64, b: f64) -> Self {
        Interval::new(a, b, true, false)
    }

    /// `(a, b]`
    pub fn open_closed(a: f64, b: f64) -> Self {
        Interval::new(a, b, false, true)
    }

    pub fn point(p: f64) -> Self {
        Interval::closed(p, p)
    }

    /// `[a, ∞)`
    pub fn ray_up(a: f64) -> Self {
        Interval::new(a, f64::INFINITY, true, false)
    }

    /// `(−∞, a]`
    pub fn ray_down(a: f64) -> Self {
        Interval::new(f64::NEG_INFINITY, a, false, true)
    }

    pub fn whole() -> Self {
        Interval::open(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed {
            x >= self.lo - EPS
        } else {
            x > self.lo + EPS
        };
        let below = if self.hi_closed {
            x <= self.hi + EPS
        } else {
            x < self.hi - EPS
        };
        above && below
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let (lo, lo_closed) = if self.lo > other.lo {
            (self.lo, self.lo_closed)
        } else if other.lo > self.lo {
            (other.lo, other.lo_closed)
        } else {
            (self.lo, self.lo_closed && other.lo_closed)
        };
        let (hi, hi_closed) = if self.hi < other.hi {
            (self.hi, self.hi_closed)
        } else if other.hi < self.hi {
            (other.hi, other.hi_closed)
        } else {
            (self.hi, self.hi_closed && other.hi_closed)
        };
        Interval::new(lo, hi, lo_closed, hi_closed)
    }

    /// Compactly supported Euler characteristic, `None` for unbounded intervals.
    pub fn chi_c(&self) -> Option<i64> {
        if self.is_empty() {
            return Some(0);
        }
        if !self.is_bounded() {
            return None;
        }
        Some(match (self.lo_closed, self.hi_closed) {
            (true, true) => 1,
            (false, false) => -1,
            _ => 0,
        })
    }

    pub fn map_affine(&self, alpha: f64, beta: f64) -> Interval {
        let f = |x: f64| alpha * x + beta;
        if alpha > 0.0 {
            Interval::new(f(self.lo), f(self.hi), self.lo_closed, self.hi_closed)
        } else {
            Interval::new(f(self.hi), f(self.lo), self.hi_closed, self.lo_closed)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorKind {
    Segment(f64, f64),
    Point(f64),
    RayUp(f64),
    RayDown(f64),
}

impl GeneratorKind {
    pub fn interval(&self) -> Interval {
        match *self {
            GeneratorKind::Segment(a, b) => Interval::closed(a, b),
            GeneratorKind::Point(p) => Interval::point(p),
            GeneratorKind::RayUp(a) => Interval::ray_up(a),
            GeneratorKind::RayDown(a) => Interval::ray_down(a),
        }
    }

    fn same(&self, other: &GeneratorKind) -> bool {
        use GeneratorKind::*;
        match (self, other) {
            (Segment(a, b), Segment(c, d)) => a == c && b == d,
            (Point(a), Point(b)) | (RayUp(a), RayUp(b)) | (RayDown(a), RayDown(b)) => a == b,
            _ => false,
        }
    }
}

/// A closed interval, point or closed ray with an integer weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalGenerator {
    pub kind: GeneratorKind,
    pub coef: i64,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct RawCf1d {
    breakpoints: Vec<f64>,
    point_values: Vec<i64>,
    interval_values: Vec<i64>,
}

impl TryFrom<RawCf1d> for Cf1d {
    type Error = Error;

    fn try_from(raw: RawCf1d) -> Result<Cf1d> {
        let k = raw.breakpoints.len();
        if raw.point_values.len() != k || raw.interval_values.len() != k + 1 {
            return Err(Error::InvalidInput(
                "expected one point value per breakpoint and one more interval value".into(),
            ));
        }
        if raw.breakpoints.iter().any(|b| !b.is_finite())
            || raw.breakpoints.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::InvalidInput(
                "breakpoints must be finite and strictly increasing".into(),
            ));
        }
        Ok(Cf1d::from_raw(raw.breakpoints, raw.point_values, raw.interval_values))
    }
}

/// Integer step function on ℝ in canonical form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", try_from = "RawCf1d")]
pub struct Cf1d {
    breakpoints: Vec<f64>,
    point_values: Vec<i64>,
    interval_values: Vec<i64>,
}

fn merge_points(mut xs: Vec<f64>) -> Vec<f64> {
    xs.sort_by(|a, b| a.total_cmp(b));
    let mut reps: Vec<f64> = Vec::with_capacity(xs.len());
    for x in xs {
        match reps.last() {
            Some(&r) if x - r <= EPS => {}
            _ => reps.push(x),
        }
    }
    reps
}

impl Cf1d {
    pub fn zero() -> Self {
        Cf1d::constant(0)
    }

    pub fn constant(c: i64) -> Self {
        Cf1d {
            breakpoints: Vec::new(),
            point_values: Vec::new(),
            interval_values: vec![c],
        }
    }

    pub fn indicator(iv: Interval) -> Self {
        Cf1d::from_weighted_intervals([(1, iv)])
    }

    /// Builds from unchecked arrays with strictly increasing breakpoints.
    fn from_raw(breakpoints: Vec<f64>, point_values: Vec<i64>, interval_values: Vec<i64>) -> Self {
        let mut out = Cf1d {
            breakpoints: Vec::with_capacity(breakpoints.len()),
            point_values: Vec::with_capacity(breakpoints.len()),
            interval_values: vec![interval_values[0]],
        };
        for (i, &b) in breakpoints.iter().enumerate() {
            let removable =
                point_values[i] == interval_values[i] && interval_values[i] == interval_values[i + 1];
            if !removable {
                out.breakpoints.push(b);
                out.point_values.push(point_values[i]);
                out.interval_values.push(interval_values[i + 1]);
            }
        }
        out
    }

    /// `Σ mᵢ·1_{Iᵢ}` with endpoints closer than ε merged onto the leftmost one.
    pub fn from_weighted_intervals(items: impl IntoIterator<Item = (i64, Interval)>) -> Self {
        let items: Vec<(i64, Interval)> = items
            .into_iter()
            .filter(|(c, iv)| *c != 0 && !iv.is_empty())
            .collect();
        let ends: Vec<f64> = items
            .iter()
            .flat_map(|(_, iv)| [iv.lo, iv.hi])
            .filter(|x| x.is_finite())
            .collect();
        let reps = merge_points(ends);
        let k = reps.len();
        let locate = |x: f64| reps.partition_point(|r| *r <= x) - 1;
        let mut diff = vec![0i64; 2 * k + 2];
        for (c, iv) in &items {
            let start = if iv.lo.is_finite() {
                let i = locate(iv.lo);
                if iv.lo_closed {
                    2 * i + 1
                } else {
                    2 * i + 2
                }
            } else {
                0
            };
            let end = if iv.hi.is_finite() {
                let j = locate(iv.hi);
                if iv.hi_closed {
                    2 * j + 1
                } else {
                    2 * j
                }
            } else {
                2 * k
            };
            if start <= end {
                diff[start] += c;
                diff[end + 1] -= c;
            }
        }
        let mut acc = 0;
        let mut points = Vec::with_capacity(k);
        let mut intervals = Vec::with_capacity(k + 1);
        for (s, d) in diff.iter().take(2 * k + 1).enumerate() {
            acc += d;
            if s % 2 == 0 {
                intervals.push(acc);
            } else {
                points.push(acc);
            }
        }
        Cf1d::from_raw(reps, points, intervals)
    }

    /// Reconstructs a function that is constant between the (merged) candidates
    /// by evaluating `f` at each candidate and between consecutive candidates.
    pub fn sample(candidates: impl IntoIterator<Item = f64>, mut f: impl FnMut(f64) -> i64) -> Self {
        let reps = merge_points(candidates.into_iter().filter(|x| x.is_finite()).collect());
        if reps.is_empty() {
            return Cf1d::constant(f(0.0));
        }
        let k = reps.len();
        let mut points = Vec::with_capacity(k);
        let mut intervals = Vec::with_capacity(k + 1);
        intervals.push(f(reps[0] - 1.0));
        for i in 0..k {
            points.push(f(reps[i]));
            let next = if i + 1 < k {
                0.5 * (reps[i] + reps[i + 1])
            } else {
                reps[i] + 1.0
            };
            intervals.push(f(next));
        }
        Cf1d::from_raw(reps, points, intervals)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn point_values(&self) -> &[i64] {
        &self.point_values
    }

    pub fn interval_values(&self) -> &[i64] {
        &self.interval_values
    }

    pub fn is_zero(&self) -> bool {
        self.breakpoints.is_empty() && self.interval_values[0] == 0
    }

    /// Bounds of the `j`-th open interval piece.
    fn piece_bounds(&self, j: usize) -> (f64, f64) {
        let lo = if j == 0 {
            f64::NEG_INFINITY
        } else {
            self.breakpoints[j - 1]
        };
        let hi = self
            .breakpoints
            .get(j)
            .copied()
            .unwrap_or(f64::INFINITY);
        (lo, hi)
    }

    /// Nonzero pieces as weighted points and open intervals.
    pub fn pieces(&self) -> Vec<(i64, Interval)> {
        let mut out = Vec::new();
        for j in 0..self.interval_values.len() {
            let v = self.interval_values[j];
            if v != 0 {
                let (lo, hi) = self.piece_bounds(j);
                out.push((v, Interval::open(lo, hi)));
            }
            if let (Some(&b), Some(&p)) = (self.breakpoints.get(j), self.point_values.get(j)) {
                if p != 0 {
                    out.push((p, Interval::point(b)));
                }
            }
        }
        out
    }

    pub fn evaluate(&self, x: f64) -> i64 {
        let i = self.breakpoints.partition_point(|b| *b < x - EPS);
        if i < self.breakpoints.len() && (self.breakpoints[i] - x).abs() <= EPS {
            self.point_values[i]
        } else {
            self.interval_values[i]
        }
    }

    pub fn add(&self, other: &Cf1d) -> Cf1d {
        Cf1d::from_weighted_intervals(self.pieces().into_iter().chain(other.pieces()))
    }

    pub fn sub(&self, other: &Cf1d) -> Cf1d {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, m: i64) -> Cf1d {
        if m == 0 {
            return Cf1d::zero();
        }
        Cf1d {
            breakpoints: self.breakpoints.clone(),
            point_values: self.point_values.iter().map(|v| v * m).collect(),
            interval_values: self.interval_values.iter().map(|v| v * m).collect(),
        }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Cf1d) -> Cf1d {
        let candidates = self.breakpoints.iter().chain(&other.breakpoints).copied();
        Cf1d::sample(candidates, |x| self.evaluate(x) * other.evaluate(x))
    }

    /// `∫ φ dχ`: point values count `+1`, bounded open pieces `−1`.
    pub fn euler_integral(&self) -> Result<i64> {
        if self.interval_values[0] != 0 || *self.interval_values.last().unwrap() != 0 {
            return Err(Error::NonCompactSupport);
        }
        let points: i64 = self.point_values.iter().sum();
        let opens: i64 = self.interval_values.iter().sum();
        Ok(points - opens)
    }

    /// Writes the function as an integer combination of closed segments,
    /// points and closed rays.
    pub fn decompose(&self) -> Vec<IntervalGenerator> {
        let mut gens: Vec<IntervalGenerator> = Vec::new();
        let mut push = |kind: GeneratorKind, coef: i64| {
            if coef == 0 {
                return;
            }
            match gens.iter_mut().find(|g| g.kind.same(&kind)) {
                Some(g) => g.coef += coef,
                None => gens.push(IntervalGenerator { kind, coef }),
            }
        };
        let k = self.breakpoints.len();
        if k == 0 {
            let c = self.interval_values[0];
            push(GeneratorKind::RayUp(0.0), c);
            push(GeneratorKind::RayDown(0.0), c);
            push(GeneratorKind::Point(0.0), -c);
        } else {
            for (j, &v) in self.interval_values.iter().enumerate() {
                let (lo, hi) = self.piece_bounds(j);
                match (lo.is_finite(), hi.is_finite()) {
                    (true, true) => {
                        push(GeneratorKind::Segment(lo, hi), v);
                        push(GeneratorKind::Point(lo), -v);
                        push(GeneratorKind::Point(hi), -v);
                    }
                    (false, true) => {
                        push(GeneratorKind::RayDown(hi), v);
                        push(GeneratorKind::Point(hi), -v);
                    }
                    (true, false) => {
                        push(GeneratorKind::RayUp(lo), v);
                        push(GeneratorKind::Point(lo), -v);
                    }
                    (false, false) => unreachable!("k > 0"),
                }
            }
            for (&b, &p) in self.breakpoints.iter().zip(&self.point_values) {
                push(GeneratorKind::Point(b), p);
            }
        }
        gens.retain(|g| g.coef != 0);
        gens
    }

    pub fn recompose(gens: &[IntervalGenerator]) -> Cf1d {
        Cf1d::from_weighted_intervals(gens.iter().map(|g| (g.coef, g.kind.interval())))
    }

    /// Convolution `φ ⋆ ψ`, the pushforward of `φ ⊠ ψ` along addition.
    pub fn convolve(&self, other: &Cf1d) -> Result<Cf1d> {
        let left = self.decompose();
        let right = other.decompose();
        let mut items = Vec::with_capacity(left.len() * right.len());
        for g in &left {
            for h in &right {
                let a = g.kind.interval();
                let b = h.kind.interval();
                let opposite = (a.lo == f64::NEG_INFINITY && b.hi == f64::INFINITY)
                    || (a.hi == f64::INFINITY && b.lo == f64::NEG_INFINITY);
                if opposite {
                    return Err(Error::ImproperConvolution);
                }
                items.push((g.coef * h.coef, Interval::closed(a.lo + b.lo, a.hi + b.hi)));
            }
        }
        Ok(Cf1d::from_weighted_intervals(items))
    }

    /// Local duality `Dφ(x) = φ(x) − φ(x⁻) − φ(x⁺)`.
    pub fn dualize(&self) -> Cf1d {
        let points = self
            .point_values
            .iter()
            .enumerate()
            .map(|(i, p)| p - self.interval_values[i] - self.interval_values[i + 1])
            .collect();
        let intervals = self.interval_values.iter().map(|v| -v).collect();
        Cf1d::from_raw(self.breakpoints.clone(), points, intervals)
    }

    /// Pushforward along `t ↦ αt + β`, i.e. `ψ(t) = φ((t − β)/α)`.
    pub fn pushforward_affine(&self, alpha: f64, beta: f64) -> Result<Cf1d> {
        if alpha == 0.0 || !alpha.is_finite() {
            return Err(Error::DegenerateMap);
        }
        Ok(Cf1d::from_weighted_intervals(
            self.pieces()
                .into_iter()
                .map(|(v, iv)| (v, iv.map_affine(alpha, beta))),
        ))
    }

    /// `∫ κ(t) φ(t) dt`; breakpoints carry no Lebesgue mass.
    pub fn lebesgue_pair(&self, kernel: &Kernel) -> Result<Complex64> {
        let mut total = Complex64::new(0.0, 0.0);
        for (j, &v) in self.interval_values.iter().enumerate() {
            if v == 0 {
                continue;
            }
            let (lo, hi) = self.piece_bounds(j);
            total += kernel.integrate_window(lo, hi)? * v as f64;
        }
        Ok(total)
    }

    /// Same values with breakpoints matching to within `tol`.
    pub fn approx_eq(&self, other: &Cf1d, tol: f64) -> bool {
        self.point_values == other.point_values
            && self.interval_values == other.interval_values
            && self
                .breakpoints
                .iter()
                .zip(&other.breakpoints)
                .all(|(a, b)| (a - b).abs() <= tol)
    }

    /// True when every breakpoint takes the value of the interval on its right,
    /// as for sums of `1_{[c,d)}`.
    pub fn is_right_closed(&self) -> bool {
        self.point_values
            .iter()
            .zip(&self.interval_values[1..])
            .all(|(p, r)| p == r)
    }
}
