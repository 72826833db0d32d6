//! Independent reference computations used by the integration tests. Nothing
//! here calls into the library's curve or integral code; complexes are read
//! only through their cell lists and vertex coordinates.
#![allow(dead_code)]

use ehc_core::complexes::EmbeddedComplex;

/// Real interval with explicit closedness; infinite ends are always open.
#[derive(Debug, Clone, Copy)]
pub struct Iv {
    pub lo: f64,
    pub hi: f64,
    pub lo_in: bool,
    pub hi_in: bool,
}

impl Iv {
    pub fn new(lo: f64, hi: f64, lo_in: bool, hi_in: bool) -> Iv {
        Iv { lo, hi, lo_in: lo_in && lo.is_finite(), hi_in: hi_in && hi.is_finite() }
    }

    pub fn all() -> Iv {
        Iv::new(f64::NEG_INFINITY, f64::INFINITY, false, false)
    }

    pub fn contains(&self, x: f64) -> bool {
        (x > self.lo || (self.lo_in && x == self.lo)) && (x < self.hi || (self.hi_in && x == self.hi))
    }

    pub fn meet(&self, o: &Iv) -> Iv {
        let (lo, lo_in) = if self.lo > o.lo {
            (self.lo, self.lo_in)
        } else if o.lo > self.lo {
            (o.lo, o.lo_in)
        } else {
            (self.lo, self.lo_in && o.lo_in)
        };
        let (hi, hi_in) = if self.hi < o.hi {
            (self.hi, self.hi_in)
        } else if o.hi < self.hi {
            (o.hi, o.hi_in)
        } else {
            (self.hi, self.hi_in && o.hi_in)
        };
        Iv::new(lo, hi, lo_in, hi_in)
    }

    /// Compactly supported Euler characteristic.
    pub fn chi_c(&self) -> i64 {
        if self.lo > self.hi || (self.lo == self.hi && !(self.lo_in && self.hi_in)) {
            return 0;
        }
        if self.lo == self.hi {
            return 1;
        }
        match (self.lo_in, self.hi_in) {
            (true, true) => 1,
            (false, false) => -1,
            _ => 0,
        }
    }
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `χ_c({g ∈ J} ∩ Z)`, summed over open cells: a cell on which `g` is constant
/// contributes `(−1)^k [c ∈ J]`; otherwise `g` is a trivial bundle of open
/// `(k−1)`-cells over `(min, max)`.
pub fn chi_c_preimage(z: &EmbeddedComplex, g: &[f64], j: &Iv) -> i64 {
    z.cells()
        .iter()
        .map(|cell| {
            let k = cell.len() - 1;
            let lo = cell.iter().map(|&v| g[v]).fold(f64::INFINITY, f64::min);
            let hi = cell.iter().map(|&v| g[v]).fold(f64::NEG_INFINITY, f64::max);
            if lo == hi {
                sign(k) * i64::from(j.contains(lo))
            } else {
                sign(k - 1) * Iv::new(lo, hi, false, false).meet(j).chi_c()
            }
        })
        .sum()
}

/// Sorted, deduplicated critical values: vertex values and finite ends of `j`.
fn candidates(g: &[f64], j: &Iv) -> Vec<f64> {
    let mut c: Vec<f64> = g.to_vec();
    c.extend([j.lo, j.hi].into_iter().filter(|x| x.is_finite()));
    c.sort_by(|a, b| a.total_cmp(b));
    c.dedup();
    c
}

/// A value of `g` strictly inside the candidate gap where the monotone `k`
/// crosses level `u` (no candidate maps exactly to `u`).
fn gap_point(cands: &[f64], k: &dyn Fn(f64) -> f64, u: f64, increasing: bool) -> f64 {
    let below = |c: f64| if increasing { k(c) < u } else { k(c) > u };
    let n = cands.iter().take_while(|&&c| below(c)).count();
    match n {
        0 => cands[0] - 1.0,
        n if n == cands.len() => cands[n - 1] + 1.0,
        n => 0.5 * (cands[n - 1] + cands[n]),
    }
}

/// `{x : k(x) > u}` (`strict`) or `{x : k(x) ≥ u}` in `g`-space, where `x`
/// is the point with `k(x) = u`.
fn super_set(x: f64, increasing: bool, strict: bool) -> Iv {
    if increasing {
        Iv::new(x, f64::INFINITY, !strict, false)
    } else {
        Iv::new(f64::NEG_INFINITY, x, false, !strict)
    }
}

/// `{x : k(x) ≤ u}` (`closed`) or `{x : k(x) < u}`.
fn sub_set(x: f64, increasing: bool, closed: bool) -> Iv {
    if increasing {
        Iv::new(f64::NEG_INFINITY, x, false, closed)
    } else {
        Iv::new(x, f64::INFINITY, closed, false)
    }
}

/// Continuous Euler integral of `k∘g` over `Y = {g ∈ J} ∩ Z` straight from
/// the level-set definitions:
/// upper `∫_0^∞ χ_c({h > u}∩Y) − χ_c({h ≤ −u}∩Y) du`,
/// lower `∫_0^∞ χ_c({h ≥ u}∩Y) − χ_c({h < −u}∩Y) du`.
/// The integrands are constant between consecutive values of `|k(c)|`.
pub fn continuous_integral(
    z: &EmbeddedComplex,
    g: &[f64],
    j: &Iv,
    k: &dyn Fn(f64) -> f64,
    increasing: bool,
    upper: bool,
) -> f64 {
    let cands = candidates(g, j);
    let mut us: Vec<f64> = cands.iter().map(|&c| k(c).abs()).collect();
    us.push(0.0);
    us.sort_by(|a, b| a.total_cmp(b));
    us.dedup();
    let mut total = 0.0;
    for w in us.windows(2) {
        let u = 0.5 * (w[0] + w[1]);
        let x_pos = gap_point(&cands, k, u, increasing);
        let pos = chi_c_preimage(z, g, &j.meet(&super_set(x_pos, increasing, upper)));
        let x_neg = gap_point(&cands, k, -u, increasing);
        let neg = chi_c_preimage(z, g, &j.meet(&sub_set(x_neg, increasing, upper)));
        total += (pos - neg) as f64 * (w[1] - w[0]);
    }
    total
}

/// `χ({g ≤ t} ∩ Z)` as `(jump position, jump size)`: every closed cell enters
/// the sublevel set once its largest vertex value is reached.
pub fn lower_star_jumps(z: &EmbeddedComplex, g: &[f64]) -> Vec<(f64, i64)> {
    z.cells()
        .iter()
        .map(|cell| {
            let hi = cell.iter().map(|&v| g[v]).fold(f64::NEG_INFINITY, f64::max);
            (hi, sign(cell.len() - 1))
        })
        .collect()
}

/// Pieces of the level curve: `χ({g = t} ∩ Z) = Σ (−1)^{k−1} 1_{(min,max)}(t)`
/// for almost every `t`, over the cells on which `g` is not constant.
pub fn level_pieces(z: &EmbeddedComplex, g: &[f64]) -> Vec<(f64, f64, i64)> {
    z.cells()
        .iter()
        .filter_map(|cell| {
            let lo = cell.iter().map(|&v| g[v]).fold(f64::INFINITY, f64::min);
            let hi = cell.iter().map(|&v| g[v]).fold(f64::NEG_INFINITY, f64::max);
            (lo < hi).then(|| (lo, hi, sign(cell.len() - 2)))
        })
        .collect()
}

/// `χ({g ≥ t} ∩ Z)` as `(drop position, size)`: an open cell contributes
/// `(−1)^k` while `t` is below its minimum, and nothing on `(min, max)` where
/// its slice is a bundle over a half-open interval.
pub fn superlevel_drops(z: &EmbeddedComplex, g: &[f64]) -> Vec<(f64, i64)> {
    z.cells()
        .iter()
        .map(|cell| {
            let lo = cell.iter().map(|&v| g[v]).fold(f64::INFINITY, f64::min);
            (lo, sign(cell.len() - 1))
        })
        .collect()
}
