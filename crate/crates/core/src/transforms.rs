//! Hybrid transforms of constructible functions on ℝⁿ and grid sweeps over
//! directions and radii.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::cfnd::Cfnd;
use crate::error::{Error, Result};
use crate::geometry::LinearForm;
use crate::kernels::Kernel;

/// `∫ κ(t) ξ_*φ(t) dt`, exact through the pushforward step function.
pub fn hybrid_transform(phi: &Cfnd, xi: &LinearForm, kernel: &Kernel) -> Result<Complex64> {
    phi.pushforward_linear(xi)?.lebesgue_pair(kernel)
}

pub fn euler_laplace(phi: &Cfnd, xi: &LinearForm) -> Result<f64> {
    Ok(hybrid_transform(phi, xi, &Kernel::laplace())?.re)
}

/// Alias of [`euler_laplace`]; the magnitude of `φ` in direction `ξ`.
pub fn magnitude(phi: &Cfnd, xi: &LinearForm) -> Result<f64> {
    euler_laplace(phi, xi)
}

pub fn euler_fourier(phi: &Cfnd, xi: &LinearForm) -> Result<Complex64> {
    hybrid_transform(phi, xi, &Kernel::fourier())
}

pub fn gr_euler_fourier(phi: &Cfnd, xi: &LinearForm) -> Result<f64> {
    Ok(hybrid_transform(phi, xi, &Kernel::heaviside())?.re)
}

/// Integral of `ξ_*φ` over `(−∞, a)`.
pub fn ecb_transform(phi: &Cfnd, xi: &LinearForm, a: f64) -> Result<f64> {
    Ok(hybrid_transform(phi, xi, &Kernel::ecb(a))?.re)
}

/// Transform values over `directions × radii`; cells whose kernel is not
/// integrable are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformGrid {
    pub directions: Vec<LinearForm>,
    pub radii: Vec<f64>,
    pub values: Vec<Vec<Option<Complex64>>>,
}

impl TransformGrid {
    pub fn cell_count(&self) -> usize {
        self.directions.len() * self.radii.len()
    }

    pub fn missing_count(&self) -> usize {
        self.values.iter().flatten().filter(|v| v.is_none()).count()
    }

    /// One row per cell: `dir_1,…,dir_d,radius,re,im`, empty fields when missing.
    pub fn to_csv(&self) -> String {
        let d = self.directions.first().map_or(0, |x| x.dim());
        let mut out = String::new();
        for i in 1..=d {
            let _ = write!(out, "dir_{i},");
        }
        out.push_str("radius,re,im\n");
        for (dir, row) in self.directions.iter().zip(&self.values) {
            for (r, v) in self.radii.iter().zip(row) {
                for c in dir.coords() {
                    let _ = write!(out, "{c},");
                }
                match v {
                    Some(z) => {
                        let _ = writeln!(out, "{r},{},{}", z.re, z.im);
                    }
                    None => {
                        let _ = writeln!(out, "{r},,");
                    }
                }
            }
        }
        out
    }
}

fn eval_row(phi: &Cfnd, kernel: &Kernel, dir: &LinearForm, radii: &[f64]) -> Vec<Option<Complex64>> {
    radii
        .iter()
        .map(|&r| hybrid_transform(phi, &dir.scale(r), kernel).ok())
        .collect()
}

/// `values[i][j] = 𝒯κ[φ](radii[j]·directions[i])`. Rows are independent and
/// are evaluated in parallel when the `parallel` feature is on.
pub fn grid_eval(
    phi: &Cfnd,
    kernel: &Kernel,
    directions: &[LinearForm],
    radii: &[f64],
) -> Result<TransformGrid> {
    if let Some(d) = directions.iter().find(|d| d.dim() != phi.dimension()) {
        return Err(Error::DimensionMismatch {
            expected: phi.dimension(),
            found: d.dim(),
        });
    }
    #[cfg(feature = "parallel")]
    let values = {
        use rayon::prelude::*;
        directions
            .par_iter()
            .map(|dir| eval_row(phi, kernel, dir, radii))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let values = directions
        .iter()
        .map(|dir| eval_row(phi, kernel, dir, radii))
        .collect();
    Ok(TransformGrid {
        directions: directions.to_vec(),
        radii: radii.to_vec(),
        values,
    })
}

/// `n` unit directions: equally spaced angles in the plane, `±1` (at most two) on the line,
/// a Fibonacci lattice on higher spheres.
pub fn unit_directions(dim: usize, n: usize) -> Vec<LinearForm> {
    use std::f64::consts::PI;
    match dim {
        0 => Vec::new(),
        1 => [1.0, -1.0]
            .iter()
            .take(n)
            .map(|&s| LinearForm::new(vec![s]))
            .collect(),
        2 => (0..n)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / n as f64;
                LinearForm::new(vec![a.cos(), a.sin()])
            })
            .collect(),
        _ => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..n)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
                    let rho = (1.0 - z * z).sqrt();
                    let a = golden * k as f64;
                    let mut c = vec![rho * a.cos(), rho * a.sin(), z];
                    c.resize(dim, 0.0);
                    LinearForm::new(c)
                })
                .collect()
        }
    }
}
