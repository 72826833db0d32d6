//! Lebesgue kernels carried by their closed-form antiderivatives.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// `κ(t) = e^{−t}`, `𝒦(x) = −e^{−x}`.
    Laplace,
    /// `κ(t) = −e^{−t}`, `𝒦(x) = e^{−x}`; a strictly decreasing antiderivative.
    NegLaplace,
    /// `κ(t) = e^{−it}`, `𝒦(x) = i·e^{−ix}`.
    Fourier,
    /// `κ = 1_{[0,∞)}`, `𝒦(x) = max(x, 0)`.
    Heaviside,
    /// `κ ≡ 1`, `𝒦(x) = x`.
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    StrictlyIncreasing,
    StrictlyDecreasing,
    Unknown,
}

/// A kernel `κ·1_{(lo, hi)}` where `κ` is one of the builtin kinds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    kind: KernelKind,
    lo: f64,
    hi: f64,
}

impl Kernel {
    pub fn new(kind: KernelKind) -> Self {
        Kernel {
            kind,
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn laplace() -> Self {
        Kernel::new(KernelKind::Laplace)
    }

    pub fn neg_laplace() -> Self {
        Kernel::new(KernelKind::NegLaplace)
    }

    pub fn fourier() -> Self {
        Kernel::new(KernelKind::Fourier)
    }

    pub fn heaviside() -> Self {
        Kernel::new(KernelKind::Heaviside)
    }

    pub fn constant() -> Self {
        Kernel::new(KernelKind::Constant)
    }

    /// Constant kernel cut off at `a`, integrating curves over `(−∞, a)`.
    pub fn ecb(a: f64) -> Self {
        Kernel {
            kind: KernelKind::Constant,
            lo: f64::NEG_INFINITY,
            hi: a,
        }
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn window(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn is_complex(&self) -> bool {
        self.kind == KernelKind::Fourier
    }

    /// Restricts the kernel to `(a, b)` on top of any existing window.
    pub fn compose_window(&self, a: f64, b: f64) -> Result<Kernel> {
        let lo = self.lo.max(a);
        let hi = self.hi.min(b);
        if a.is_nan() || b.is_nan() || lo >= hi {
            return Err(Error::EmptyWindow(lo, hi));
        }
        Ok(Kernel {
            kind: self.kind,
            lo,
            hi,
        })
    }

    /// The unwindowed antiderivative at an extended real, `None` where the
    /// improper integral diverges or oscillates.
    pub fn antiderivative(&self, x: f64) -> Option<Complex64> {
        let re = |v: f64| Some(Complex64::new(v, 0.0));
        match self.kind {
            KernelKind::Laplace => match x {
                f64::INFINITY => re(0.0),
                f64::NEG_INFINITY => None,
                _ => re(-(-x).exp()),
            },
            KernelKind::NegLaplace => match x {
                f64::INFINITY => re(0.0),
                f64::NEG_INFINITY => None,
                _ => re((-x).exp()),
            },
            KernelKind::Fourier => {
                if x.is_finite() {
                    Some(Complex64::new(0.0, 1.0) * Complex64::new(0.0, -x).exp())
                } else {
                    None
                }
            }
            KernelKind::Heaviside => match x {
                f64::INFINITY => None,
                f64::NEG_INFINITY => re(0.0),
                _ => re(x.max(0.0)),
            },
            KernelKind::Constant => {
                if x.is_finite() {
                    re(x)
                } else {
                    None
                }
            }
        }
    }

    /// Real antiderivative for the index formulas; `None` for complex kernels.
    pub fn antiderivative_real(&self, x: f64) -> Option<f64> {
        if self.is_complex() {
            return None;
        }
        self.antiderivative(x).map(|z| z.re)
    }

    /// `∫_a^b κ(t)·1_{window}(t) dt`.
    pub fn integrate_window(&self, a: f64, b: f64) -> Result<Complex64> {
        let lo = a.max(self.lo);
        let hi = b.min(self.hi);
        if !(lo < hi) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let upper = self.antiderivative(hi).ok_or(Error::NonIntegrable)?;
        let lower = self.antiderivative(lo).ok_or(Error::NonIntegrable)?;
        Ok(upper - lower)
    }

    /// Monotonicity of the antiderivative on the window.
    pub fn monotonicity(&self) -> Monotonicity {
        match self.kind {
            KernelKind::Laplace | KernelKind::Constant => Monotonicity::StrictlyIncreasing,
            KernelKind::NegLaplace => Monotonicity::StrictlyDecreasing,
            KernelKind::Heaviside if self.lo >= 0.0 => Monotonicity::StrictlyIncreasing,
            KernelKind::Heaviside | KernelKind::Fourier => Monotonicity::Unknown,
        }
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            KernelKind::Laplace => "laplace",
            KernelKind::NegLaplace => "neglaplace",
            KernelKind::Fourier => "fourier",
            KernelKind::Heaviside => "gr",
            KernelKind::Constant => "constant",
        };
        write!(f, "{name}")?;
        if self.lo.is_finite() || self.hi.is_finite() {
            write!(f, ":window={},{}", self.lo, self.hi)?;
        }
        Ok(())
    }
}

fn parse_bound(s: &str) -> Result<f64> {
    match s.trim() {
        "inf" | "+inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        t => t
            .parse::<f64>()
            .map_err(|_| Error::InvalidInput(format!("bad number `{t}` in kernel name"))),
    }
}

impl FromStr for Kernel {
    type Err = Error;

    /// Parses `laplace`, `fourier`, `gr`, `ecb:a`, `neglaplace` or `constant`,
    /// each optionally followed by `:window=a,b`.
    fn from_str(s: &str) -> Result<Kernel> {
        let (head, window) = match s.find(":window=") {
            Some(i) => (&s[..i], Some(&s[i + ":window=".len()..])),
            None => (s, None),
        };
        let mut kernel = match head.trim() {
            "laplace" => Kernel::laplace(),
            "neglaplace" => Kernel::neg_laplace(),
            "fourier" => Kernel::fourier(),
            "gr" | "heaviside" => Kernel::heaviside(),
            "constant" => Kernel::constant(),
            other => match other.strip_prefix("ecb:") {
                Some(a) => Kernel::ecb(parse_bound(a)?),
                None => return Err(Error::InvalidInput(format!("unknown kernel `{other}`"))),
            },
        };
        if let Some(w) = window {
            let (a, b) = w
                .split_once(',')
                .ok_or_else(|| Error::InvalidInput(format!("window needs `a,b`, got `{w}`")))?;
            kernel = kernel.compose_window(parse_bound(a)?, parse_bound(b)?)?;
        }
        Ok(kernel)
    }
}
