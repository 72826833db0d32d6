//! Seeded randomized suites for the compatibility, sublevel, index-theoretic
//! and reconstruction identities.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cf1d::{Cf1d, Interval};
use crate::cfnd::Cfnd;
use crate::complexes::{
    euler_bessel, euler_bessel_index, gamma_identity_check, gr_index_check, index_formula_check,
    level_index_check, lower_star_curve, sublevel_curve, PlFunction,
};
use crate::error::Result;
use crate::geometry::{LinearForm, OrthantCone, Vector};
use crate::kernels::Kernel;
use crate::radon::{chi_vanishing_check, radon_support_check};
use crate::scenes::{
    random_box_scene, random_cf1d, random_complex, random_polytope_scene, random_values,
    random_voxel_scene,
};
use crate::transforms::{euler_fourier, euler_laplace, hybrid_transform};

/// Deliberate defects for checking that the suites can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Flip the sign of the duality operator.
    DualitySign,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub cases: usize,
    pub fault: Option<Fault>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 42,
            cases: 50,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Suite names in run order.
pub const SUITES: &[&str] = &[
    "cf1d_algebra",
    "duality",
    "translation",
    "direct_image",
    "fubini",
    "el_three_term",
    "el_product",
    "ef_convolution",
    "projection",
    "gamma_voxels",
    "gamma_identity",
    "lower_star",
    "index_sublevel",
    "index_level",
    "gr_index",
    "bessel",
    "radon",
];

struct Tally {
    name: &'static str,
    tolerance: f64,
    cases: usize,
    failures: usize,
    max_deviation: f64,
    first_failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Tally {
            name,
            tolerance,
            cases: 0,
            failures: 0,
            max_deviation: 0.0,
            first_failure: None,
        }
    }

    fn record(&mut self, deviation: f64, what: impl FnOnce() -> String) {
        let deviation = if deviation.is_nan() { f64::INFINITY } else { deviation };
        self.max_deviation = self.max_deviation.max(deviation);
        if deviation > self.tolerance {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.record(if ok { 0.0 } else { f64::INFINITY }, what);
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            name: self.name,
            cases: self.cases,
            failures: self.failures,
            max_deviation: self.max_deviation,
            tolerance: self.tolerance,
            first_failure: self.first_failure,
        }
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / 1f64.max(a.norm()).max(b.norm())
}

fn rng_for(config: &VerifyConfig, name: &str) -> ChaCha8Rng {
    let salt = name
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    ChaCha8Rng::seed_from_u64(config.seed ^ salt)
}

fn random_form<R: Rng>(rng: &mut R, dim: usize) -> LinearForm {
    loop {
        let c: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
        if c.iter().any(|x| x.abs() > 0.1) {
            return LinearForm::new(c);
        }
    }
}

fn positive_form<R: Rng>(rng: &mut R, dim: usize) -> LinearForm {
    LinearForm::new((0..dim).map(|_| rng.gen_range(0.1..2.0)).collect())
}

fn dualize(phi: &Cf1d, fault: Option<Fault>) -> Cf1d {
    match fault {
        Some(Fault::DualitySign) => phi.dualize().scale(-1),
        None => phi.dualize(),
    }
}

fn compact_pair(phi: &Cf1d, kernel: &Kernel) -> Option<Complex64> {
    phi.lebesgue_pair(kernel).ok()
}

pub fn run_suite(name: &str, config: &VerifyConfig) -> Result<SuiteReport> {
    let mut rng = rng_for(config, name);
    let n = config.cases;
    let fault = config.fault;
    let report = match name {
        "cf1d_algebra" => {
            let mut t = Tally::new("cf1d_algebra", 0.0);
            for _ in 0..n {
                t.cases += 1;
                let f = random_cf1d(&mut rng);
                let g = random_cf1d(&mut rng);
                let h = random_cf1d(&mut rng);
                t.check(Cf1d::recompose(&f.decompose()) == f, || format!("round trip {f:?}"));
                t.check(dualize(&dualize(&f, fault), fault) == f, || format!("D∘D {f:?}"));
                t.check(
                    dualize(&f, fault).euler_integral()? == f.euler_integral()?,
                    || format!("χ∘D {f:?}"),
                );
                let fg = f.convolve(&g)?;
                t.check(
                    fg.euler_integral()? == f.euler_integral()? * g.euler_integral()?,
                    || format!("χ(f⋆g) {f:?} {g:?}"),
                );
                t.check(fg == g.convolve(&f)?, || format!("commutativity {f:?} {g:?}"));
                t.check(
                    fg.convolve(&h)? == f.convolve(&g.convolve(&h)?)?,
                    || format!("associativity {f:?} {g:?} {h:?}"),
                );
            }
            t.finish()
        }
        "duality" => {
            let mut t = Tally::new("duality", 1e-10);
            for _ in 0..n {
                t.cases += 1;
                let phi = random_polytope_scene(&mut rng, 2);
                let xi = random_form(&mut rng, 2);
                let theta = phi.pushforward_linear(&xi)?;
                let dual = dualize(&theta, fault);
                for k in [Kernel::laplace(), Kernel::fourier(), Kernel::heaviside()] {
                    if let (Some(a), Some(b)) = (compact_pair(&dual, &k), compact_pair(&theta, &k)) {
                        t.record(rel(a, -b), || format!("{k} at {xi:?}: {a} vs {}", -b));
                    }
                }
            }
            t.finish()
        }
        "translation" => {
            let mut t = Tally::new("translation", 1e-10);
            for i in 0..n {
                t.cases += 1;
                let phi = if i % 2 == 0 {
                    random_polytope_scene(&mut rng, 2)
                } else {
                    random_box_scene(&mut rng, 2)
                };
                let xi = random_form(&mut rng, 2);
                let x0 = Vector::new(vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]);
                let moved = phi.translate(&x0)?;
                let phase = xi.pair(&x0);
                let el = euler_laplace(&moved, &xi)?;
                let expected = (-phase).exp() * euler_laplace(&phi, &xi)?;
                t.record(rel(el.into(), expected.into()), || format!("EL shift {x0:?}"));
                let ef = euler_fourier(&moved, &xi)?;
                let expected = Complex64::new(0.0, -phase).exp() * euler_fourier(&phi, &xi)?;
                t.record(rel(ef, expected), || format!("EF shift {x0:?}"));
            }
            t.finish()
        }
        "direct_image" => {
            let mut t = Tally::new("direct_image", 1e-10);
            let rows = vec![vec![1.0], vec![2.0]];
            for i in 0..n {
                t.cases += 1;
                let phi = if i % 2 == 0 {
                    random_polytope_scene(&mut rng, 1)
                } else {
                    random_box_scene(&mut rng, 1)
                };
                let image = phi.image_linear(&rows)?;
                let zeta = random_form(&mut rng, 2);
                let pulled = LinearForm::new(vec![zeta[0] + 2.0 * zeta[1]]);
                for k in [Kernel::laplace(), Kernel::fourier()] {
                    let a = hybrid_transform(&image, &zeta, &k);
                    let b = hybrid_transform(&phi, &pulled, &k);
                    match (a, b) {
                        (Ok(a), Ok(b)) => t.record(rel(a, b), || format!("{k} at {zeta:?}")),
                        (Err(e), Err(f)) if e == f => {}
                        (a, b) => t.check(false, || format!("{k}: {a:?} vs {b:?}")),
                    }
                }
            }
            t.finish()
        }
        "fubini" => {
            let mut t = Tally::new("fubini", 1e-9);
            for i in 0..n {
                t.cases += 1;
                let dim = 2 + i % 2;
                let phi = if i % 3 == 0 {
                    random_polytope_scene(&mut rng, dim)
                } else {
                    random_box_scene(&mut rng, dim)
                };
                let psi = random_box_scene(&mut rng, dim);
                let xi = random_form(&mut rng, dim);
                let push = phi.pushforward_linear(&xi)?;
                t.check(
                    push.euler_integral()? == phi.euler_integral()?,
                    || format!("Fubini at {xi:?}"),
                );
                let lhs = phi.convolve(&psi)?.pushforward_linear(&xi)?;
                let rhs = push.convolve(&psi.pushforward_linear(&xi)?)?;
                t.check(lhs.approx_eq(&rhs, 1e-9), || format!("convolution exchange at {xi:?}"));
                // Box product pushed along ξ ⊕ ξ′ equals the convolution of the parts.
                let xi2 = random_form(&mut rng, 1);
                let line = random_box_scene(&mut rng, 1);
                let prod = box_product(&phi, &line)?;
                let mut both = xi.coords().to_vec();
                both.push(xi2[0]);
                let lhs = prod.pushforward_linear(&LinearForm::new(both))?;
                let rhs = push.convolve(&line.pushforward_linear(&xi2)?)?;
                t.check(lhs.approx_eq(&rhs, 1e-9), || "box product".to_string());
            }
            t.finish()
        }
        "el_three_term" => {
            let mut t = Tally::new("el_three_term", 1e-10);
            let cone = OrthantCone::non_positive(2);
            for _ in 0..n {
                t.cases += 1;
                let phi = random_box_scene(&mut rng, 2);
                let psi = random_box_scene(&mut rng, 2);
                let xi = positive_form(&mut rng, 2);
                let el = |f: &Cfnd| euler_laplace(f, &xi);
                let lhs = el(&phi.convolve(&psi)?)?;
                let (a, b) = (el(&phi)?, el(&psi)?);
                let rhs = el(&phi.gammaify(&cone)?)? * b + a * el(&psi.gammaify(&cone)?)? - a * b;
                t.record(rel(lhs.into(), rhs.into()), || format!("{lhs} vs {rhs} at {xi:?}"));
            }
            t.finish()
        }
        "el_product" => {
            let mut t = Tally::new("el_product", 1e-10);
            let cone = OrthantCone::non_positive(2);
            for _ in 0..n {
                t.cases += 1;
                let phi = random_voxel_scene(&mut rng, 2);
                let psi = random_voxel_scene(&mut rng, 2);
                t.check(
                    phi.is_gamma_constructible(&cone)? && psi.is_gamma_constructible(&cone)?,
                    || "inputs not γ-stable".into(),
                );
                let xi = positive_form(&mut rng, 2);
                let lhs = euler_laplace(&phi.convolve(&psi)?, &xi)?;
                let rhs = euler_laplace(&phi, &xi)? * euler_laplace(&psi, &xi)?;
                t.record(rel(lhs.into(), rhs.into()), || format!("{lhs} vs {rhs} at {xi:?}"));
            }
            t.finish()
        }
        "ef_convolution" => {
            let mut t = Tally::new("ef_convolution", 1e-10);
            for i in 0..n {
                t.cases += 1;
                let phi = random_voxel_scene(&mut rng, 2);
                let psi = random_voxel_scene(&mut rng, 2);
                let p = positive_form(&mut rng, 2);
                let (xi, sign) = match i % 3 {
                    0 => (p, Complex64::i()),
                    1 => (p.neg(), -Complex64::i()),
                    _ => (LinearForm::new(vec![p[0], -p[1]]), Complex64::new(0.0, 0.0)),
                };
                let lhs = euler_fourier(&phi.convolve(&psi)?, &xi)?;
                let rhs = sign * euler_fourier(&phi, &xi)? * euler_fourier(&psi, &xi)?;
                t.record(rel(lhs, rhs), || format!("{lhs} vs {rhs} at {xi:?}"));
                if i % 3 == 2 {
                    t.check(lhs == Complex64::new(0.0, 0.0), || format!("nonzero {lhs} at {xi:?}"));
                }
            }
            t.finish()
        }
        "projection" => {
            let mut t = Tally::new("projection", 1e-12);
            for _ in 0..n {
                t.cases += 1;
                let f = random_cf1d(&mut rng);
                let a = rng.gen_range(-2.0..1.0);
                let b = a + rng.gen_range(0.1..2.0);
                let cut = f.mul(&Cf1d::indicator(Interval::open(a, b)));
                for k in [Kernel::laplace(), Kernel::fourier(), Kernel::heaviside()] {
                    let lhs = f.lebesgue_pair(&k.compose_window(a, b)?)?;
                    let rhs = cut.lebesgue_pair(&k)?;
                    t.record(rel(lhs, rhs), || format!("{k} on ({a},{b})"));
                }
            }
            t.finish()
        }
        "gamma_voxels" => {
            let mut t = Tally::new("gamma_voxels", 1e-10);
            for _ in 0..n {
                t.cases += 1;
                let phi = random_voxel_scene(&mut rng, 2);
                let xi = positive_form(&mut rng, 2);
                let (lap, fou) = voxel_lebesgue_transforms(&phi, &xi);
                let prod = xi[0] * xi[1];
                let el = euler_laplace(&phi, &xi)?;
                t.record(rel(el.into(), (lap * prod).into()), || format!("EL at {xi:?}"));
                let ef = euler_fourier(&phi, &xi)?;
                t.record(rel(ef, Complex64::i() * fou * prod), || format!("EF at {xi:?}"));
            }
            t.finish()
        }
        "gamma_identity" => {
            let mut t = Tally::new("gamma_identity", 0.0);
            for _ in 0..n {
                t.cases += 1;
                let z = random_complex(&mut rng);
                let g = random_values(&mut rng, &z);
                t.check(gamma_identity_check(&z, &g)?, || format!("{g:?}"));
            }
            t.finish()
        }
        "lower_star" => {
            let mut t = Tally::new("lower_star", 0.0);
            for _ in 0..n {
                t.cases += 1;
                let z = random_complex(&mut rng);
                let g = random_values(&mut rng, &z);
                let a = sublevel_curve(&z, &g);
                let b = lower_star_curve(&z, &g);
                t.check(a == b, || format!("{a:?} vs {b:?}"));
                t.check(a.total() == z.euler_characteristic(), || "total".into());
            }
            t.finish()
        }
        "index_sublevel" | "index_level" => {
            let level = name == "index_level";
            let mut t = Tally::new(if level { "index_level" } else { "index_sublevel" }, 1e-9);
            let one = LinearForm::new(vec![1.0]);
            for _ in 0..n {
                t.cases += 1;
                let z = random_complex(&mut rng);
                let f = vec![random_values(&mut rng, &z)];
                for k in index_kernels(&mut rng)? {
                    let r = if level {
                        level_index_check(&z, &f, &one, &k)?
                    } else {
                        index_formula_check(&z, &f, &one, &k)?
                    };
                    t.record(r.deviation(), || format!("{k}: {r:?}"));
                }
            }
            t.finish()
        }
        "gr_index" => {
            let mut t = Tally::new("gr_index", 1e-9);
            for _ in 0..n {
                t.cases += 1;
                let z = random_complex(&mut rng);
                let coords: Vec<PlFunction> = (0..2)
                    .map(|i| {
                        let vals = z.vertices().iter().map(|v| v[i] - 1.0).collect();
                        PlFunction::new(&z, vals)
                    })
                    .collect::<Result<_>>()?;
                let xi = positive_form(&mut rng, 2).neg();
                let r = gr_index_check(&z, &coords, &xi)?;
                t.record(r.deviation(), || format!("{xi:?}: {r:?}"));
            }
            t.finish()
        }
        "bessel" => {
            let mut t = Tally::new("bessel", 1e-9);
            for _ in 0..n {
                t.cases += 1;
                let z = random_complex(&mut rng);
                for c in 0..5 {
                    let v = if c == 0 {
                        z.vertices()[z.cells()[0][0]].clone()
                    } else {
                        Vector::new(vec![rng.gen_range(-1.0..3.0), rng.gen_range(-1.0..3.0)])
                    };
                    let a = euler_bessel(&z, &v);
                    let b = euler_bessel_index(&z, &v);
                    t.record((a - b).abs(), || format!("center {v:?}: {a} vs {b}"));
                }
            }
            t.finish()
        }
        "radon" => {
            let mut t = Tally::new("radon", 0.0);
            let cone = OrthantCone::non_positive(2);
            for _ in 0..n {
                t.cases += 1;
                let phi = random_voxel_scene(&mut rng, 2);
                t.check(chi_vanishing_check(&phi, &cone)?, || "χ does not vanish".into());
                let p = positive_form(&mut rng, 2);
                let mixed = LinearForm::new(vec![p[0], -p[1]]);
                t.check(radon_support_check(&phi, &cone, &mixed)?, || format!("support at {mixed:?}"));
            }
            t.finish()
        }
        other => {
            return Err(crate::error::Error::InvalidInput(format!("unknown suite `{other}`")));
        }
    };
    Ok(report)
}

pub fn run_all(config: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    SUITES.iter().map(|s| run_suite(s, config)).collect()
}

/// Kernels with known monotone antiderivatives on random windows.
fn index_kernels<R: Rng>(rng: &mut R) -> Result<Vec<Kernel>> {
    let a = rng.gen_range(-3.0..1.0);
    let b = a + rng.gen_range(0.5..3.0);
    Ok(vec![
        Kernel::laplace(),
        Kernel::laplace().compose_window(a, f64::INFINITY)?,
        Kernel::laplace().compose_window(a, b)?,
        Kernel::neg_laplace().compose_window(a, b)?,
        Kernel::neg_laplace().compose_window(a, f64::INFINITY)?,
        Kernel::heaviside().compose_window(a.abs(), a.abs() + 2.0)?,
        Kernel::constant().compose_window(a, b)?,
    ])
}

/// `φ ⊠ ψ` for box-only (or expandable) inputs.
fn box_product(phi: &Cfnd, psi: &Cfnd) -> Result<Cfnd> {
    use crate::cfnd::{expand_box, BoxCell, Generator};
    let d = phi.dimension() + psi.dimension();
    let mut out = Cfnd::zero(d);
    for (c, g) in phi.terms() {
        for (e, h) in psi.terms() {
            match (g, h) {
                (Generator::Box(a), Generator::Box(b)) => {
                    let mut axes = a.axes().to_vec();
                    axes.extend_from_slice(b.axes());
                    out.push(c * e, Generator::Box(BoxCell::new(axes)))?;
                }
                (Generator::Polytope(p), Generator::Box(b)) => {
                    for (m, q) in expand_box(b)? {
                        let pts = p
                            .points()
                            .iter()
                            .flat_map(|x| {
                                q.points().iter().map(move |y| {
                                    let mut c = x.coords().to_vec();
                                    c.extend_from_slice(y.coords());
                                    Vector::new(c)
                                })
                            })
                            .collect();
                        out.push(c * e * m, Generator::Polytope(crate::geometry::Polytope::new(pts)?))?;
                    }
                }
                _ => return Err(crate::error::Error::UnsupportedGenerator),
            }
        }
    }
    Ok(out)
}

/// Exact Lebesgue Laplace and Fourier transforms of a sum of half-open voxels:
/// `∫ e^{−⟨ξ,x⟩} φ(x) dx` and `∫ e^{−i⟨ξ,x⟩} φ(x) dx`.
fn voxel_lebesgue_transforms(phi: &Cfnd, xi: &LinearForm) -> (f64, Complex64) {
    use crate::cfnd::Generator;
    let mut lap = 0.0;
    let mut fou = Complex64::new(0.0, 0.0);
    for (c, g) in phi.terms() {
        if let Generator::Box(b) = g {
            let mut l = *c as f64;
            let mut f = Complex64::new(*c as f64, 0.0);
            for (ax, &w) in b.axes().iter().zip(xi.coords()) {
                l *= ((-w * ax.lo).exp() - (-w * ax.hi).exp()) / w;
                let e = |x: f64| Complex64::new(0.0, -w * x).exp();
                f *= (e(ax.lo) - e(ax.hi)) / Complex64::new(0.0, w);
            }
            lap += l;
            fou += f;
        }
    }
    (lap, fou)
}
