//! Constructible functions on ℝⁿ as integer combinations of closed polytopes
//! and products of intervals.

use crate::cf1d::{Cf1d, Interval};
use crate::error::{Error, Result};
use crate::geometry::{minkowski_points, support_value, AxisSign, LinearForm, OrthantCone, Polytope, Vector, EPS};

/// Product of one interval per axis. Half-open boxes `∏[lowᵢ, highᵢ)` are the
/// common case; other closedness patterns and closed rays arise from
/// convolution and gammaification.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxCell {
    axes: Vec<Interval>,
}

impl BoxCell {
    pub fn new(axes: Vec<Interval>) -> Self {
        BoxCell { axes }
    }

    /// `∏ [lowᵢ, highᵢ)` with `lowᵢ < highᵢ`; `highᵢ = +∞` is permitted.
    pub fn half_open(low: &[f64], high: &[f64]) -> Result<Self> {
        if low.len() != high.len() {
            return Err(Error::DimensionMismatch {
                expected: low.len(),
                found: high.len(),
            });
        }
        if low.iter().zip(high).any(|(a, b)| !(a < b) || !a.is_finite()) {
            return Err(Error::InvalidInput(
                "half-open box needs finite low < high on every axis".into(),
            ));
        }
        Ok(BoxCell {
            axes: low
                .iter()
                .zip(high)
                .map(|(&a, &b)| Interval::closed_open(a, b))
                .collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Interval] {
        &self.axes
    }

    pub fn is_bounded(&self) -> bool {
        self.axes.iter().all(|a| a.is_bounded())
    }

    pub fn contains(&self, x: &Vector) -> bool {
        self.axes.iter().zip(x.coords()).all(|(a, &c)| a.contains(c))
    }

    pub fn translate(&self, by: &Vector) -> BoxCell {
        BoxCell {
            axes: self
                .axes
                .iter()
                .zip(by.coords())
                .map(|(a, &t)| a.map_affine(1.0, t))
                .collect(),
        }
    }

    /// Signed products of closed intervals, closed rays and points summing to
    /// the box indicator.
    fn closed_products(&self) -> Vec<(i64, Vec<Interval>)> {
        tensor(self.axes.iter().map(closed_pieces).collect())
    }
}

/// Inclusion–exclusion of one axis into closed pieces.
fn closed_pieces(iv: &Interval) -> Vec<(i64, Interval)> {
    if iv.is_empty() {
        return Vec::new();
    }
    match (iv.lo.is_finite(), iv.hi.is_finite()) {
        (false, false) => vec![
            (1, Interval::ray_up(0.0)),
            (1, Interval::ray_down(0.0)),
            (-1, Interval::point(0.0)),
        ],
        _ => {
            let mut out = vec![(1, Interval::new(iv.lo, iv.hi, true, true))];
            if iv.lo.is_finite() && !iv.lo_closed {
                out.push((-1, Interval::point(iv.lo)));
            }
            if iv.hi.is_finite() && !iv.hi_closed {
                out.push((-1, Interval::point(iv.hi)));
            }
            out
        }
    }
}

/// Tensor product of weighted per-axis interval lists.
fn tensor(per_axis: Vec<Vec<(i64, Interval)>>) -> Vec<(i64, Vec<Interval>)> {
    let mut acc: Vec<(i64, Vec<Interval>)> = vec![(1, Vec::new())];
    for pieces in per_axis {
        let mut next = Vec::with_capacity(acc.len() * pieces.len());
        for (c, prefix) in &acc {
            for (m, iv) in &pieces {
                let mut axes = prefix.clone();
                axes.push(*iv);
                next.push((c * m, axes));
            }
        }
        acc = next;
    }
    acc.retain(|(c, _)| *c != 0);
    acc
}

fn closed_box_polytope(axes: &[Interval]) -> Polytope {
    let low: Vec<f64> = axes.iter().map(|a| a.lo).collect();
    let high: Vec<f64> = axes.iter().map(|a| a.hi).collect();
    Polytope::closed_box(&low, &high)
}

/// Closed polytopes for a bounded box, by per-axis inclusion–exclusion.
pub fn expand_box(g: &BoxCell) -> Result<Vec<(i64, Polytope)>> {
    if !g.is_bounded() {
        return Err(Error::UnsupportedGenerator);
    }
    Ok(g
        .closed_products()
        .into_iter()
        .map(|(c, axes)| (c, closed_box_polytope(&axes)))
        .collect())
}

/// Image of a closed product of intervals and rays under `ξ`. The fibres are
/// compact convex sets, so the pushforward is the indicator of the image.
fn push_closed_product(axes: &[Interval], xi: &LinearForm) -> Result<Interval> {
    let mut lo = 0.0;
    let mut hi = 0.0;
    let mut ray_sign = 0.0f64;
    for (a, &w) in axes.iter().zip(xi.coords()) {
        if !a.is_bounded() {
            let dir = if a.hi.is_infinite() { 1.0 } else { -1.0 };
            let s = (w * dir).signum();
            if w == 0.0 || (ray_sign != 0.0 && s != ray_sign) {
                return Err(Error::ImproperPushforward);
            }
            ray_sign = s;
        }
        if w == 0.0 {
            continue;
        }
        let (p, q) = if w > 0.0 { (a.lo, a.hi) } else { (a.hi, a.lo) };
        lo += w * p;
        hi += w * q;
    }
    Ok(Interval::closed(lo, hi))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    Polytope(Polytope),
    Box(BoxCell),
}

impl Generator {
    pub fn dim(&self) -> usize {
        match self {
            Generator::Polytope(p) => p.dim(),
            Generator::Box(b) => b.dim(),
        }
    }

    pub fn contains(&self, x: &Vector) -> bool {
        match self {
            Generator::Polytope(p) => p.contains(x),
            Generator::Box(b) => b.contains(x),
        }
    }
}

/// `Σ mᵢ·1_{Gᵢ}` on ℝ^d.
#[derive(Debug, Clone, PartialEq)]
pub struct Cfnd {
    dimension: usize,
    terms: Vec<(i64, Generator)>,
}

impl Cfnd {
    pub fn zero(dimension: usize) -> Self {
        Cfnd {
            dimension,
            terms: Vec::new(),
        }
    }

    pub fn new(dimension: usize, terms: Vec<(i64, Generator)>) -> Result<Self> {
        let mut out = Cfnd::zero(dimension);
        for (c, g) in terms {
            out.push(c, g)?;
        }
        Ok(out)
    }

    pub fn push(&mut self, coef: i64, g: Generator) -> Result<()> {
        if g.dim() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: g.dim(),
            });
        }
        if coef != 0 {
            self.terms.push((coef, g));
        }
        Ok(())
    }

    pub fn polytope(coef: i64, p: Polytope) -> Self {
        Cfnd {
            dimension: p.dim(),
            terms: vec![(coef, Generator::Polytope(p))],
        }
    }

    pub fn boxed(coef: i64, b: BoxCell) -> Self {
        Cfnd {
            dimension: b.dim(),
            terms: vec![(coef, Generator::Box(b))],
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn terms(&self) -> &[(i64, Generator)] {
        &self.terms
    }

    pub fn add(&self, other: &Cfnd) -> Result<Cfnd> {
        self.check_dim(other.dimension)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Cfnd {
            dimension: self.dimension,
            terms,
        })
    }

    pub fn scale(&self, m: i64) -> Cfnd {
        Cfnd {
            dimension: self.dimension,
            terms: if m == 0 {
                Vec::new()
            } else {
                self.terms.iter().map(|(c, g)| (c * m, g.clone())).collect()
            },
        }
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found,
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &Vector) -> Result<i64> {
        self.check_dim(x.dim())?;
        Ok(self
            .terms
            .iter()
            .filter(|(_, g)| g.contains(x))
            .map(|(c, _)| c)
            .sum())
    }

    /// `ξ_*φ` as an exact step function.
    pub fn pushforward_linear(&self, xi: &LinearForm) -> Result<Cf1d> {
        self.check_dim(xi.dim())?;
        let mut items = Vec::new();
        let neg = xi.neg();
        for (c, g) in &self.terms {
            match g {
                Generator::Polytope(p) => {
                    items.push((*c, Interval::closed(-support_value(p, &neg), support_value(p, xi))));
                }
                Generator::Box(b) => {
                    for (m, axes) in b.closed_products() {
                        items.push((c * m, push_closed_product(&axes, xi)?));
                    }
                }
            }
        }
        Ok(Cf1d::from_weighted_intervals(items))
    }

    /// `∫ φ dχ`; polytopes count 1, boxes the product of their axis `χ_c`.
    pub fn euler_integral(&self) -> Result<i64> {
        let mut total = 0;
        for (c, g) in &self.terms {
            let chi = match g {
                Generator::Polytope(_) => 1,
                Generator::Box(b) => b
                    .axes
                    .iter()
                    .map(|a| a.chi_c().ok_or(Error::NonCompactSupport))
                    .product::<Result<i64>>()?,
            };
            total += c * chi;
        }
        Ok(total)
    }

    pub fn translate(&self, by: &Vector) -> Result<Cfnd> {
        self.check_dim(by.dim())?;
        Ok(Cfnd {
            dimension: self.dimension,
            terms: self
                .terms
                .iter()
                .map(|(c, g)| {
                    let g = match g {
                        Generator::Polytope(p) => Generator::Polytope(p.translate(by)),
                        Generator::Box(b) => Generator::Box(b.translate(by)),
                    };
                    (*c, g)
                })
                .collect(),
        })
    }

    /// `φ ⋆ ψ`.
    pub fn convolve(&self, other: &Cfnd) -> Result<Cfnd> {
        self.check_dim(other.dimension)?;
        let mut out = Cfnd::zero(self.dimension);
        for (c, g) in &self.terms {
            for (d, h) in &other.terms {
                match (g, h) {
                    (Generator::Polytope(p), Generator::Polytope(q)) => {
                        out.terms
                            .push((c * d, Generator::Polytope(minkowski_points(p, q)?)));
                    }
                    (Generator::Box(a), Generator::Box(b)) => {
                        let per_axis = a
                            .axes
                            .iter()
                            .zip(&b.axes)
                            .map(|(x, y)| {
                                Ok(Cf1d::indicator(*x).convolve(&Cf1d::indicator(*y))?.pieces())
                            })
                            .collect::<Result<Vec<_>>>()?;
                        for (m, axes) in tensor(per_axis) {
                            out.terms.push((c * d * m, Generator::Box(BoxCell::new(axes))));
                        }
                    }
                    (Generator::Box(a), Generator::Polytope(p))
                    | (Generator::Polytope(p), Generator::Box(a)) => {
                        for (m, q) in expand_box(a)? {
                            out.terms
                                .push((c * d * m, Generator::Polytope(minkowski_points(&q, p)?)));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Image under an injective linear map given by its matrix rows.
    pub fn image_linear(&self, rows: &[Vec<f64>]) -> Result<Cfnd> {
        if rows.is_empty() {
            return Err(Error::InvalidInput("empty matrix".into()));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != self.dimension) {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: r.len(),
            });
        }
        let mut out = Cfnd::zero(rows.len());
        for (c, g) in &self.terms {
            match g {
                Generator::Polytope(p) => out.terms.push((*c, Generator::Polytope(p.map_linear(rows)))),
                Generator::Box(b) => {
                    for (m, q) in expand_box(b)? {
                        out.terms.push((c * m, Generator::Polytope(q.map_linear(rows))));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `φ ⋆ 1_{γᵃ}` for box-only `φ`, computed axis by axis.
    pub fn gammaify(&self, cone: &OrthantCone) -> Result<Cfnd> {
        self.check_dim(cone.dim())?;
        let rays: Vec<Cf1d> = cone
            .signs()
            .iter()
            .map(|s| match s {
                AxisSign::NonPositive => Cf1d::indicator(Interval::ray_up(0.0)),
                AxisSign::NonNegative => Cf1d::indicator(Interval::ray_down(0.0)),
            })
            .collect();
        let mut out = Cfnd::zero(self.dimension);
        for (c, g) in &self.terms {
            let b = match g {
                Generator::Box(b) => b,
                Generator::Polytope(_) => return Err(Error::UnsupportedGenerator),
            };
            let per_axis = b
                .axes
                .iter()
                .zip(&rays)
                .map(|(a, r)| Ok(Cf1d::indicator(*a).convolve(r)?.pieces()))
                .collect::<Result<Vec<_>>>()?;
            for (m, axes) in tensor(per_axis) {
                out.terms.push((c * m, Generator::Box(BoxCell::new(axes))));
            }
        }
        Ok(out)
    }

    /// Whether `φ = φ ⋆ 1_{γᵃ}`.
    pub fn is_gamma_constructible(&self, cone: &OrthantCone) -> Result<bool> {
        let g = self.gammaify(cone)?;
        self.equals_on_witness_grid(&g)
    }

    /// Per-axis witness coordinates: every generator coordinate, midpoints,
    /// and one point beyond each extreme.
    fn witness_axes(&self, other: &Cfnd) -> Vec<Vec<f64>> {
        (0..self.dimension)
            .map(|i| {
                let mut xs: Vec<f64> = Vec::new();
                for (_, g) in self.terms.iter().chain(&other.terms) {
                    match g {
                        Generator::Box(b) => {
                            xs.extend([b.axes[i].lo, b.axes[i].hi].into_iter().filter(|x| x.is_finite()))
                        }
                        Generator::Polytope(p) => xs.extend(p.points().iter().map(|q| q[i])),
                    }
                }
                xs.sort_by(|a, b| a.total_cmp(b));
                xs.dedup_by(|a, b| (*a - *b).abs() <= EPS);
                if xs.is_empty() {
                    return vec![0.0];
                }
                let mut w = vec![xs[0] - 1.0];
                for (j, &x) in xs.iter().enumerate() {
                    w.push(x);
                    w.push(xs.get(j + 1).map_or(x + 1.0, |&y| 0.5 * (x + y)));
                }
                w
            })
            .collect()
    }

    /// Pointwise equality on the product witness grid; sound for box sums.
    pub fn equals_on_witness_grid(&self, other: &Cfnd) -> Result<bool> {
        self.check_dim(other.dimension)?;
        let axes = self.witness_axes(other);
        let mut idx = vec![0usize; self.dimension];
        loop {
            let x = Vector::new(idx.iter().enumerate().map(|(i, &j)| axes[i][j]).collect());
            if self.evaluate(&x)? != other.evaluate(&x)? {
                return Ok(false);
            }
            let mut i = 0;
            loop {
                if i == self.dimension {
                    return Ok(true);
                }
                idx[i] += 1;
                if idx[i] < axes[i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::from(c)
    }

    fn half_open(low: &[f64], high: &[f64]) -> Cfnd {
        Cfnd::boxed(1, BoxCell::half_open(low, high).unwrap())
    }

    fn triangle_minus_hypotenuse() -> Cfnd {
        let tri = Polytope::new(vec![v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.0, 2.0])]).unwrap();
        let hyp = Polytope::new(vec![v(&[1.0, 0.0]), v(&[0.0, 2.0])]).unwrap();
        Cfnd::polytope(1, tri).add(&Cfnd::polytope(-1, hyp)).unwrap()
    }

    #[test]
    fn evaluation() {
        let sq = half_open(&[0.0, 0.0], &[1.0, 1.0]);
        assert_eq!(sq.evaluate(&v(&[1.0, 0.0])), Ok(0));
        assert_eq!(sq.evaluate(&v(&[0.0, 0.0])), Ok(1));
        let t = triangle_minus_hypotenuse();
        assert_eq!(t.evaluate(&v(&[0.5, 1.0])), Ok(0));
        assert_eq!(t.evaluate(&v(&[0.2, 0.2])), Ok(1));
        assert!(matches!(
            sq.evaluate(&v(&[0.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn box_expansion() {
        let one = expand_box(&BoxCell::half_open(&[0.0], &[1.0]).unwrap()).unwrap();
        assert_eq!(one.len(), 2);
        assert_eq!(one[0].0, 1);
        assert_eq!(one[1], (-1, Polytope::point(v(&[1.0]))));

        let b = BoxCell::half_open(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let parts = expand_box(&b).unwrap();
        assert_eq!(parts.len(), 4);
        assert!(parts.iter().all(|(c, _)| c.abs() == 1));
        let expanded = Cfnd::new(
            2,
            parts.into_iter().map(|(c, p)| (c, Generator::Polytope(p))).collect(),
        )
        .unwrap();
        for x in [0.0, 0.5, 1.0] {
            for y in [0.0, 0.5, 1.0] {
                let p = v(&[x, y]);
                assert_eq!(expanded.evaluate(&p), Ok(i64::from(b.contains(&p))));
            }
        }
    }

    #[test]
    fn rectangle_pushforwards() {
        let xi = LinearForm::from(vec![1.0, 0.3]);
        // ξ(a,c)=0 < ξ(a,d)=0.6 < ξ(b,c)=1 < ξ(b,d)=1.6 for [0,1)×[0,2)
        let half = half_open(&[0.0, 0.0], &[1.0, 2.0]).pushforward_linear(&xi).unwrap();
        let expected = Cf1d::indicator(Interval::closed_open(0.0, 0.6))
            .sub(&Cf1d::indicator(Interval::closed_open(1.0, 1.6)));
        assert_eq!(half, expected);

        let closed = Cfnd::polytope(1, Polytope::closed_box(&[0.0, 0.0], &[1.0, 2.0]));
        assert_eq!(
            closed.pushforward_linear(&xi).unwrap(),
            Cf1d::indicator(Interval::closed(0.0, 1.6))
        );

        let pt = Cfnd::polytope(1, Polytope::point(v(&[2.0, -1.0])));
        assert_eq!(
            pt.pushforward_linear(&xi).unwrap(),
            Cf1d::indicator(Interval::point(2.0 - 0.3))
        );
    }

    #[test]
    fn euler_integrals() {
        let closed = Cfnd::polytope(1, Polytope::closed_box(&[0.0, 0.0], &[1.0, 1.0]));
        assert_eq!(closed.euler_integral(), Ok(1));
        assert_eq!(half_open(&[0.0, 0.0], &[1.0, 1.0]).euler_integral(), Ok(0));
        assert_eq!(triangle_minus_hypotenuse().euler_integral(), Ok(0));
    }

    #[test]
    fn translations() {
        let by = v(&[2.0, -1.0]);
        let b = half_open(&[0.0, 0.0], &[1.0, 1.0]).translate(&by).unwrap();
        assert_eq!(b, half_open(&[2.0, -1.0], &[3.0, 0.0]));
        let t = triangle_minus_hypotenuse().translate(&by).unwrap();
        assert_eq!(t.evaluate(&v(&[2.2, -0.8])), Ok(1));
        let p = Cfnd::polytope(1, Polytope::point(v(&[0.0, 0.0]))).translate(&by).unwrap();
        assert_eq!(p.evaluate(&by), Ok(1));
    }

    #[test]
    fn convolutions() {
        let seg = Cfnd::polytope(1, Polytope::closed_box(&[0.0], &[1.0]));
        let sum = seg.convolve(&seg).unwrap();
        assert_eq!(
            sum.pushforward_linear(&LinearForm::from(vec![1.0])).unwrap(),
            Cf1d::indicator(Interval::closed(0.0, 2.0))
        );

        let sq = half_open(&[0.0, 0.0], &[1.0, 1.0]);
        let conv = sq.convolve(&sq).unwrap();
        let axis = Cf1d::indicator(Interval::closed_open(0.0, 1.0))
            .convolve(&Cf1d::indicator(Interval::closed_open(0.0, 1.0)))
            .unwrap();
        for i in 0..=8 {
            for j in 0..=8 {
                let (x, y) = (i as f64 * 0.25, j as f64 * 0.25);
                assert_eq!(
                    conv.evaluate(&v(&[x, y])).unwrap(),
                    axis.evaluate(x) * axis.evaluate(y)
                );
            }
        }

        let t = triangle_minus_hypotenuse();
        let x0 = v(&[0.5, 0.25]);
        let shifted = t.convolve(&Cfnd::polytope(1, Polytope::point(x0.clone()))).unwrap();
        assert_eq!(shifted, t.translate(&x0).unwrap());
    }

    #[test]
    fn gammaification() {
        let neg1 = OrthantCone::non_positive(1);
        let h = half_open(&[0.0], &[1.0]);
        assert!(h.gammaify(&neg1).unwrap().equals_on_witness_grid(&h).unwrap());

        let closed = Cfnd::boxed(1, BoxCell::new(vec![Interval::closed(0.0, 1.0)]));
        let ray = Cfnd::boxed(1, BoxCell::new(vec![Interval::ray_up(0.0)]));
        assert!(closed.gammaify(&neg1).unwrap().equals_on_witness_grid(&ray).unwrap());

        let neg2 = OrthantCone::non_positive(2);
        let sq = half_open(&[0.0, 0.0], &[1.0, 1.0]);
        assert!(sq.is_gamma_constructible(&neg2).unwrap());
        let closed_sq = Cfnd::boxed(
            1,
            BoxCell::new(vec![Interval::closed(0.0, 1.0), Interval::closed(0.0, 1.0)]),
        );
        assert!(!closed_sq.is_gamma_constructible(&neg2).unwrap());
        assert!(Cfnd::zero(2).is_gamma_constructible(&neg2).unwrap());
        assert_eq!(
            triangle_minus_hypotenuse().gammaify(&neg2),
            Err(Error::UnsupportedGenerator)
        );
    }

    #[test]
    fn gammaified_pushforward_is_right_closed() {
        let neg2 = OrthantCone::non_positive(2);
        let closed_sq = Cfnd::boxed(
            1,
            BoxCell::new(vec![Interval::closed(0.0, 1.0), Interval::closed(0.0, 2.0)]),
        );
        let g = closed_sq.gammaify(&neg2).unwrap();
        let push = g.pushforward_linear(&LinearForm::from(vec![1.0, 2.0])).unwrap();
        assert_eq!(push, Cf1d::indicator(Interval::ray_up(0.0)));
        assert_eq!(
            g.pushforward_linear(&LinearForm::from(vec![1.0, -1.0])),
            Err(Error::ImproperPushforward)
        );
    }
}
