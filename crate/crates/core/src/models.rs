//! The rational (`A = 2z`) and hyperbolic (`A = (z² + ζ²)/2`) physical
//! models, evaluated in `f64` and tied back to the exact operators.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::Path;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::rational::{int, pq, to_f64, to_pq, Rational};
use crate::exactalg::{Poly, RatFunc};
use crate::laguerre::{restricted_matrix, RestrictedMatrix};
use crate::qalgebra::{PhysicalSystem, Sign};
use crate::x2spaces::{chi_bar, f_poly, phi_tilde, ParamContext};

/// Which worked example.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExampleId {
    /// `A(z) = 2z`, `z = q²`.
    Rational,
    /// `A(z) = (z² + ζ²)/2`, `z = ζ sinh q`.
    Hyperbolic,
}

impl ExampleId {
    pub fn from_number(n: u32) -> Result<Self> {
        match n {
            1 => Ok(ExampleId::Rational),
            2 => Ok(ExampleId::Hyperbolic),
            _ => Err(Error::Domain(format!("example id must be 1 or 2 (got {n})"))),
        }
    }

    pub fn number(self) -> u32 {
        match self {
            ExampleId::Rational => 1,
            ExampleId::Hyperbolic => 2,
        }
    }

    /// The parameter pattern `(a1, a2, a3, a4)` of the example.
    pub fn context(self, alpha: Rational, enn: u32, c0: Rational) -> Result<ParamContext> {
        let ctx = match self {
            ExampleId::Rational => ParamContext::example1(alpha, enn)?,
            ExampleId::Hyperbolic => ParamContext::example2(alpha, enn)?,
        };
        Ok(ctx.with_c0(c0))
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Interval of `q` with endpoint openness.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

/// Evenly spaced `q` samples, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub q_min: f64,
    pub q_max: f64,
    pub steps: usize,
}

impl Grid {
    pub fn new(q_min: f64, q_max: f64, steps: usize) -> Result<Self> {
        if !(q_min.is_finite() && q_max.is_finite()) || q_max <= q_min || steps < 2 {
            return Err(Error::Domain(format!(
                "grid needs finite q_min < q_max and at least 2 points (got [{q_min}, {q_max}], {steps})"
            )));
        }
        Ok(Grid { q_min, q_max, steps })
    }

    pub fn points(&self) -> Vec<f64> {
        let span = self.q_max - self.q_min;
        (0..self.steps)
            .map(|i| self.q_min + span * i as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

/// `gd q = arctan(sinh q)`.
pub fn gd(q: f64) -> f64 {
    q.sinh().atan()
}

/// Centered five-point second derivative.
pub fn second_derivative(f: impl Fn(f64) -> f64, q: f64, h: f64) -> f64 {
    (-f(q + 2.0 * h) + 16.0 * f(q + h) - 30.0 * f(q) + 16.0 * f(q - h) - f(q - 2.0 * h)) / (12.0 * h * h)
}

/// Centered five-point first derivative.
pub fn first_derivative(f: impl Fn(f64) -> f64, q: f64, h: f64) -> f64 {
    (-f(q + 2.0 * h) + 8.0 * f(q + h) - 8.0 * f(q - h) + f(q - 2.0 * h)) / (12.0 * h)
}

/// Closed-form gauge factor of a sector function:
/// `|q|^q_power · e^{gaussian q²} · cosh(q)^cosh_power · e^{ζ(sinh_coeff sinh q + gd_coeff gd q)} / f(z; f_alpha)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaugeDescriptor {
    pub q_power: f64,
    pub gaussian: f64,
    pub cosh_power: f64,
    pub sinh_coeff: f64,
    pub gd_coeff: f64,
    #[serde(with = "pq")]
    pub f_alpha: Rational,
}

/// `poly_part(z(q)) × gauge`.
#[derive(Clone, Debug, Serialize)]
pub struct SectorFunction {
    pub n: u32,
    pub sign: Sign,
    pub poly_part: Poly,
    pub gauge: GaugeDescriptor,
}

/// A worked example realized at concrete parameters.
#[derive(Clone, Debug)]
pub struct PhysicalModel {
    pub example: ExampleId,
    pub ctx: ParamContext,
    pub zeta: Option<f64>,
    pub domain: Domain,
    system: PhysicalSystem,
    v_exact: [RatFunc; 2],
    alpha: f64,
    enn: f64,
    c0: f64,
    f_minus: [f64; 3],
    f_plus: [f64; 3],
    /// Largest relative gap between closed-form and exact potentials over
    /// the construction samples.
    pub closed_form_deviation: f64,
}

fn f_coeffs(alpha: &Rational) -> [f64; 3] {
    let p = f_poly(alpha);
    [to_f64(&p.coeff(0)), to_f64(&p.coeff(1)), to_f64(&p.coeff(2))]
}

fn eval_quadratic(c: &[f64; 3], z: f64) -> f64 {
    (c[2] * z + c[1]) * z + c[0]
}

fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// Tolerance for closed-form versus exact potential agreement.
pub const CLOSED_FORM_TOL: f64 = 1e-12;

fn sign_index(sign: Sign) -> usize {
    match sign {
        Sign::Minus => 0,
        Sign::Plus => 1,
    }
}

/// Builds and self-checks an example model. `α ≤ 1` is rejected as an
/// unsupported branch.
pub fn make_model(example: ExampleId, ctx: &ParamContext) -> Result<PhysicalModel> {
    let [a1, a2, a3, a4] = &ctx.a;
    let pattern_ok = match example {
        ExampleId::Rational => *a1 == int(2) && a2.is_zero() && a3.is_zero() && a4.is_zero(),
        ExampleId::Hyperbolic => {
            a1.is_zero() && *a2 == Rational::one() / int(2) && a3.is_zero() && a4.is_zero()
        }
    };
    if !pattern_ok {
        return Err(Error::Domain(format!(
            "example {example} requires {} with all other weights zero",
            match example {
                ExampleId::Rational => "a1 = 2",
                ExampleId::Hyperbolic => "a2 = 1/2",
            }
        )));
    }
    if ctx.alpha <= Rational::one() {
        return Err(Error::UnsupportedBranch(match example {
            ExampleId::Rational => format!(
                "example 1 is realized on the half line only for alpha > 1 (got {})",
                to_pq(&ctx.alpha)
            ),
            ExampleId::Hyperbolic => format!(
                "example 2 with zeta^2 = (alpha-1)(alpha+N-1) <= 0 (alpha = {}) is the cosh branch, which is not implemented",
                to_pq(&ctx.alpha)
            ),
        }));
    }
    let system = PhysicalSystem::new(ctx)?;
    let v_minus = system.potential(Sign::Minus)?.even;
    let v_plus = system.potential(Sign::Plus)?.even;
    let alpha = to_f64(&ctx.alpha);
    let enn = ctx.enn as f64;
    let (zeta, domain) = match example {
        ExampleId::Rational => (
            None,
            Domain {
                lo: 0.0,
                hi: f64::INFINITY,
                lo_open: true,
                hi_open: true,
            },
        ),
        ExampleId::Hyperbolic => (
            Some(((alpha - 1.0) * (alpha + enn - 1.0)).sqrt()),
            Domain {
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
                lo_open: true,
                hi_open: true,
            },
        ),
    };
    let mut model = PhysicalModel {
        example,
        ctx: ctx.clone(),
        zeta,
        domain,
        system,
        v_exact: [v_minus, v_plus],
        alpha,
        enn,
        c0: to_f64(&ctx.c0),
        f_minus: f_coeffs(&ctx.alpha),
        f_plus: f_coeffs(&(&ctx.alpha + ctx.n_rat())),
        closed_form_deviation: 0.0,
    };
    let samples = match example {
        ExampleId::Rational => Grid::new(0.1, 6.0, 100)?,
        ExampleId::Hyperbolic => Grid::new(-4.0, 4.0, 100)?,
    };
    let mut worst: f64 = 0.0;
    for q in samples.points() {
        for sign in [Sign::Minus, Sign::Plus] {
            worst = worst.max(rel_gap(model.v(sign, q), model.v_exact(sign, q)));
        }
    }
    model.closed_form_deviation = worst;
    if worst > CLOSED_FORM_TOL {
        return Err(Error::Consistency(format!(
            "closed-form potentials of example {example} deviate from the exact assembly by {worst:e}"
        )));
    }
    Ok(model)
}

impl PhysicalModel {
    pub fn system(&self) -> &PhysicalSystem {
        &self.system
    }

    fn zeta_val(&self) -> f64 {
        self.zeta.unwrap_or(0.0)
    }

    pub fn z(&self, q: f64) -> f64 {
        match self.example {
            ExampleId::Rational => q * q,
            ExampleId::Hyperbolic => self.zeta_val() * q.sinh(),
        }
    }

    pub fn z_prime(&self, q: f64) -> f64 {
        match self.example {
            ExampleId::Rational => 2.0 * q,
            ExampleId::Hyperbolic => self.zeta_val() * q.cosh(),
        }
    }

    /// Closed-form `E(q)`.
    pub fn e(&self, q: f64) -> f64 {
        match self.example {
            ExampleId::Rational => 1.0 / q,
            ExampleId::Hyperbolic => q.tanh(),
        }
    }

    /// Closed-form `W(q)`.
    pub fn w(&self, q: f64) -> f64 {
        let (a, n) = (self.alpha, self.enn);
        let z = self.z(q);
        let f = eval_quadratic(&self.f_minus, z);
        match self.example {
            ExampleId::Rational => {
                q - (2.0 * a + n - 8.0) / (2.0 * q) - 4.0 * (a - 1.0) * (q * q + a) / (f * q)
            }
            ExampleId::Hyperbolic => {
                let zeta = self.zeta_val();
                let (s, c) = (q.sinh(), q.cosh());
                zeta / 2.0 * c
                    + 1.5 * q.tanh()
                    + (a - 1.0) * (a + n - 3.0) / (zeta * c)
                    + ((2.0 * a + n - 3.0) * zeta * s + (a - 1.0) * (2.0 * a + n - 1.0)) * 2.0 * (a - 1.0)
                        / (f * zeta * c)
            }
        }
    }

    /// `E` and `W` from the exact algebra, evaluated at `q`.
    pub fn e_w_exact(&self, q: f64) -> (f64, f64) {
        let (z, zp) = (self.z(q), self.z_prime(q));
        (self.system.e().eval_f64(z, zp), self.system.w().eval_f64(z, zp))
    }

    /// Closed-form potential `V^±(q)`.
    pub fn v(&self, sign: Sign, q: f64) -> f64 {
        let (a, n, c0) = (self.alpha, self.enn, self.c0);
        let z = self.z(q);
        match (self.example, sign) {
            (ExampleId::Rational, Sign::Minus) => {
                let f = eval_quadratic(&self.f_minus, z);
                q * q / 2.0 + (4.0 * a * a - 1.0) / (8.0 * q * q)
                    + 4.0 * ((q * q - a + 1.0) / f - 4.0 * (a - 1.0) * q * q / (f * f))
                    - a
                    + 3.0
                    - c0
            }
            (ExampleId::Rational, Sign::Plus) => {
                let b = a + n;
                let f = eval_quadratic(&self.f_plus, z);
                q * q / 2.0 + (4.0 * b * b - 1.0) / (8.0 * q * q)
                    + 4.0 * ((q * q - b + 1.0) / f - 4.0 * (b - 1.0) * q * q / (f * f))
                    - a
                    + n
                    + 3.0
                    - c0
            }
            (ExampleId::Hyperbolic, _) => {
                let zeta = self.zeta_val();
                let (s, c) = (q.sinh(), q.cosh());
                let zs = zeta * s;
                let common = zeta * zeta / 8.0 * c * c
                    + (4.0 * a * a + 4.0 * (n - 4.0) * a + n * n + 16.0) / 8.0
                    - c0;
                match sign {
                    Sign::Minus => {
                        let f = eval_quadratic(&self.f_minus, z);
                        common - (n + 1.0) / 4.0 * zs
                            + (4.0 * (n - 1.0) * zs + 4.0 * a * a + 4.0 * (n - 2.0) * a - n * n - 2.0 * n + 4.0)
                                / (8.0 * c * c)
                            - 2.0
                                * (a - 1.0)
                                * ((zs - a - n + 3.0) / f - 2.0 * (a - 1.0) * (2.0 * zs - n + 1.0) / (f * f))
                    }
                    Sign::Plus => {
                        let f = eval_quadratic(&self.f_plus, z);
                        let b1 = a + n - 1.0;
                        common + (n - 1.0) / 4.0 * zs
                            - (4.0 * (n + 1.0) * zs - 4.0 * a * a - 4.0 * (n - 2.0) * a + n * n + 6.0 * n - 4.0)
                                / (8.0 * c * c)
                            - 2.0 * b1 * ((zs - a + 3.0) / f - 2.0 * b1 * (2.0 * zs + n + 1.0) / (f * f))
                    }
                }
            }
        }
    }

    /// Exact-algebra potential evaluated at `q`.
    pub fn v_exact(&self, sign: Sign, q: f64) -> f64 {
        self.v_exact[sign_index(sign)].eval_f64(self.z(q))
    }

    /// Closed-form gauge potential `𝒲^±(q)`.
    pub fn gauge_potential(&self, sign: Sign, q: f64) -> f64 {
        let (a, n) = (self.alpha, self.enn);
        let s = -sign.factor_f64();
        let f = eval_quadratic(&self.f_minus, self.z(q));
        match self.example {
            ExampleId::Rational => {
                // ∓q²/2 ± (2α+N±N∓1)/2 ln|q| ∓ ln|f|, upper sign for 𝒲⁺
                let up = -s;
                -up * q * q / 2.0 + up * (2.0 * a + n + up * n - up) / 2.0 * q.abs().ln() - up * f.abs().ln()
            }
            ExampleId::Hyperbolic => {
                let up = -s;
                let zeta = self.zeta_val();
                -up * zeta / 2.0 * q.sinh() - up * zeta * gd(q) + (n - 1.0 + up) / 2.0 * q.cosh().ln()
                    - up * f.abs().ln()
            }
        }
    }

    /// Sector gauge descriptor for the given sign.
    pub fn gauge_descriptor(&self, sign: Sign) -> GaugeDescriptor {
        let (a, n) = (self.alpha, self.enn);
        let beta = &self.ctx.alpha + self.ctx.n_rat();
        match (self.example, sign) {
            (ExampleId::Rational, Sign::Minus) => GaugeDescriptor {
                q_power: a + 0.5,
                gaussian: -0.5,
                cosh_power: 0.0,
                sinh_coeff: 0.0,
                gd_coeff: 0.0,
                f_alpha: self.ctx.alpha.clone(),
            },
            (ExampleId::Rational, Sign::Plus) => GaugeDescriptor {
                q_power: -a - n + 0.5,
                gaussian: 0.5,
                cosh_power: 0.0,
                sinh_coeff: 0.0,
                gd_coeff: 0.0,
                f_alpha: beta,
            },
            (ExampleId::Hyperbolic, Sign::Minus) => GaugeDescriptor {
                q_power: 0.0,
                gaussian: 0.0,
                cosh_power: -(n / 2.0 - 1.0),
                sinh_coeff: -0.5,
                gd_coeff: -1.0,
                f_alpha: self.ctx.alpha.clone(),
            },
            (ExampleId::Hyperbolic, Sign::Plus) => GaugeDescriptor {
                q_power: 0.0,
                gaussian: 0.0,
                cosh_power: -n / 2.0,
                sinh_coeff: 0.5,
                gd_coeff: 1.0,
                f_alpha: beta,
            },
        }
    }

    /// The N sector functions of `H^±`.
    pub fn sector_functions(&self, sign: Sign) -> Vec<SectorFunction> {
        let gauge = self.gauge_descriptor(sign);
        let beta = &self.ctx.alpha + self.ctx.n_rat();
        (1..=self.ctx.enn)
            .map(|n| SectorFunction {
                n,
                sign,
                poly_part: match sign {
                    Sign::Minus => phi_tilde(n, &self.ctx.alpha),
                    Sign::Plus => chi_bar(n, &beta),
                },
                gauge: gauge.clone(),
            })
            .collect()
    }

    /// Gauge factor at `q`.
    pub fn gauge_value(&self, g: &GaugeDescriptor, q: f64) -> f64 {
        let z = self.z(q);
        let f = f_poly(&g.f_alpha).eval_f64(z);
        let mut v = 1.0 / f;
        if g.q_power != 0.0 {
            v *= q.abs().powf(g.q_power);
        }
        let mut expo = g.gaussian * q * q;
        if self.example == ExampleId::Hyperbolic {
            expo += self.zeta_val() * (g.sinh_coeff * q.sinh() + g.gd_coeff * gd(q));
        }
        if g.cosh_power != 0.0 {
            v *= q.cosh().powf(g.cosh_power);
        }
        v * expo.exp()
    }

    pub fn sector_value(&self, s: &SectorFunction, q: f64) -> f64 {
        s.poly_part.eval_f64(self.z(q)) * self.gauge_value(&s.gauge, q)
    }
}

trait SignF64 {
    fn factor_f64(self) -> f64;
}

impl SignF64 for Sign {
    fn factor_f64(self) -> f64 {
        match self {
            Sign::Minus => -1.0,
            Sign::Plus => 1.0,
        }
    }
}

/// Result of a sampled-maximum check.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub max_residual: f64,
    pub worst_q: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl ResidualReport {
    fn from_samples(samples: impl IntoIterator<Item = (f64, f64)>, tolerance: f64) -> Self {
        let mut max_residual: f64 = 0.0;
        let mut worst_q = f64::NAN;
        let mut finite = true;
        for (q, r) in samples {
            if !r.is_finite() {
                finite = false;
                worst_q = q;
                max_residual = f64::INFINITY;
                break;
            }
            if r > max_residual {
                max_residual = r;
                worst_q = q;
            }
        }
        ResidualReport {
            max_residual,
            worst_q,
            tolerance,
            passed: finite && max_residual <= tolerance,
        }
    }
}

/// Consistency of the closed-form gauge data: `d𝒲^±/dq` against
/// `(N−1)/2 E ∓ W`, closed-form `E, W` against the exact algebra, and
/// `e^{−𝒲^±}` against the sector gauge factors.
#[derive(Clone, Debug, Serialize)]
pub struct GaugeSelfCheck {
    pub e_w_match: ResidualReport,
    pub derivative_match: ResidualReport,
    pub factor_match: ResidualReport,
}

pub fn gauge_self_check(model: &PhysicalModel, grid: &Grid, h: f64) -> GaugeSelfCheck {
    let pts = grid.points();
    let e_w = pts.iter().map(|&q| {
        let (e, w) = model.e_w_exact(q);
        (q, rel_gap(e, model.e(q)).max(rel_gap(w, model.w(q))))
    });
    let e_w_match = ResidualReport::from_samples(e_w.collect::<Vec<_>>(), 1e-12);
    let half_nm1 = (model.enn - 1.0) / 2.0;
    let deriv = pts.iter().map(|&q| {
        let mut worst: f64 = 0.0;
        for sign in [Sign::Minus, Sign::Plus] {
            let num = first_derivative(|x| model.gauge_potential(sign, x), q, h);
            let want = half_nm1 * model.e(q) - sign.factor_f64() * model.w(q);
            worst = worst.max(rel_gap(num, want));
        }
        (q, worst)
    });
    let derivative_match = ResidualReport::from_samples(deriv.collect::<Vec<_>>(), 1e-8);
    // e^{−𝒲⁻} = gauge⁻; e^{−𝒲⁺}/(f(α) f(α+N)) = gauge⁺
    let factor = pts.iter().map(|&q| {
        let z = model.z(q);
        let fm = eval_quadratic(&model.f_minus, z);
        let fp = eval_quadratic(&model.f_plus, z);
        let lm = (-model.gauge_potential(Sign::Minus, q)).exp();
        let lp = (-model.gauge_potential(Sign::Plus, q)).exp() / (fm * fp).abs();
        let gm = model.gauge_value(&model.gauge_descriptor(Sign::Minus), q).abs();
        let gp = model.gauge_value(&model.gauge_descriptor(Sign::Plus), q).abs();
        (q, ((lm - gm).abs() / gm).max((lp - gp).abs() / gp))
    });
    let factor_match = ResidualReport::from_samples(factor.collect::<Vec<_>>(), 1e-10);
    GaugeSelfCheck {
        e_w_match,
        derivative_match,
        factor_match,
    }
}

/// Shape invariance of the rational example.
#[derive(Clone, Debug, Serialize)]
pub struct ShapeInvarianceReport {
    pub mean: f64,
    pub std_dev: f64,
    pub expected: f64,
    /// `V⁺(α) − V⁻(α+N)` as an exact function of `z`, when constant.
    pub exact_constant: Option<String>,
    pub passed: bool,
}

/// `V⁺(q; α) − V⁻(q; α+N)` is constant, equal to `2N` for `a1 = 2`.
pub fn shape_invariance_check(ctx: &ParamContext) -> Result<ShapeInvarianceReport> {
    let model = make_model(ExampleId::Rational, ctx)?;
    let shifted_ctx = ctx.at_alpha(&ctx.alpha + ctx.n_rat());
    let shifted = make_model(ExampleId::Rational, &shifted_ctx)?;
    let pts = Grid::new(0.2, 6.0, 100)?.points();
    let diffs: Vec<f64> = pts
        .iter()
        .map(|&q| model.v(Sign::Plus, q) - shifted.v(Sign::Minus, q))
        .collect();
    let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (diffs.len() - 1) as f64;
    let std_dev = var.sqrt();
    let exact = &model.v_exact[1] - &shifted.v_exact[0];
    let expected_exact = int(2) * ctx.n_rat();
    let exact_constant = exact.as_constant();
    let expected = to_f64(&expected_exact);
    let passed = std_dev < 1e-12
        && (mean - expected).abs() < 1e-12 * expected.abs().max(1.0)
        && exact_constant.as_ref() == Some(&expected_exact);
    Ok(ShapeInvarianceReport {
        mean,
        std_dev,
        expected,
        exact_constant: exact_constant.map(|c| to_pq(&c)),
        passed,
    })
}

/// Numeric check that `H^±` maps each sector function into the sector with
/// the exact restricted-matrix coordinates.
#[derive(Clone, Debug, Serialize)]
pub struct SectorPreservationReport {
    pub sign: Sign,
    pub h: f64,
    pub worst_index: u32,
    pub residual: ResidualReport,
    pub matrix: RestrictedMatrix,
}

/// Pointwise residual `|(−½ψ_i″ + Vψ_i) − Σ_j M_ji ψ_j|` relative to
/// `½|ψ_i″| + |Vψ_i| + Σ_j |M_ji ψ_j|`, floored at `SCALE_FLOOR` times the
/// largest such scale of `ψ_i` on the grid (zeros of `ψ_i`).
pub fn sector_preservation_numeric(
    model: &PhysicalModel,
    sign: Sign,
    grid: &Grid,
    h: f64,
    tolerance: f64,
) -> Result<SectorPreservationReport> {
    const SCALE_FLOOR: f64 = 1e-8;
    let matrix = restricted_matrix(&model.ctx, sign)?;
    let m = matrix.to_f64();
    let sectors = model.sector_functions(sign);
    let size = sectors.len();
    // (q, index, |lhs − rhs|, local scale)
    let mut raw: Vec<(f64, usize, f64, f64)> = Vec::new();
    let mut peak = vec![0.0_f64; size];
    for q in grid.points() {
        let values: Vec<f64> = sectors.iter().map(|s| model.sector_value(s, q)).collect();
        let v = model.v(sign, q);
        for (i, s) in sectors.iter().enumerate() {
            let d2 = second_derivative(|x| model.sector_value(s, x), q, h);
            let lhs = -0.5 * d2 + v * values[i];
            let rhs: f64 = (0..size).map(|j| m[j][i] * values[j]).sum();
            let rhs_abs: f64 = (0..size).map(|j| (m[j][i] * values[j]).abs()).sum();
            let scale = 0.5 * d2.abs() + (v * values[i]).abs() + rhs_abs;
            peak[i] = peak[i].max(scale);
            raw.push((q, i, (lhs - rhs).abs(), scale));
        }
    }
    let mut worst_index = 1;
    let mut worst = 0.0_f64;
    let all: Vec<(f64, f64)> = raw
        .into_iter()
        .map(|(q, i, diff, scale)| {
            let r = diff / scale.max(SCALE_FLOOR * peak[i]).max(f64::MIN_POSITIVE);
            if !(r <= worst) {
                worst = r;
                worst_index = sectors[i].n;
            }
            (q, r)
        })
        .collect();
    Ok(SectorPreservationReport {
        sign,
        h,
        worst_index,
        residual: ResidualReport::from_samples(all, tolerance),
        matrix,
    })
}

/// N-fold SUSY realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SusyStatus {
    Unbroken,
    Broken,
}

/// Square integrability of every sector function at each endpoint.
#[derive(Clone, Debug, Serialize)]
pub struct SusyClassification {
    pub status: SusyStatus,
    pub minus_normalizable: bool,
    pub plus_normalizable: bool,
    pub reasons: Vec<String>,
}

/// Integrability at one endpoint from the leading asymptotics of
/// `poly(z(q)) × gauge`.
fn endpoint_integrable(
    model: &PhysicalModel,
    s: &SectorFunction,
    endpoint: f64,
    reasons: &mut Vec<String>,
) -> bool {
    let g = &s.gauge;
    let deg = s.poly_part.degree().unwrap_or(0) as f64;
    let tag = format!("{} sector n={} at q={endpoint}", s.sign, s.n);
    match model.example {
        ExampleId::Rational => {
            if endpoint == 0.0 {
                // f(0; ·) ≠ 0, so ψ ~ q^{q_power + 2 val}
                let val = s.poly_part.valuation().unwrap_or(0) as f64;
                let p = g.q_power + 2.0 * val;
                let ok = 2.0 * p > -1.0;
                if !ok {
                    reasons.push(format!("{tag}: behaves like q^{p}, not square integrable"));
                }
                ok
            } else if g.gaussian != 0.0 {
                let ok = g.gaussian < 0.0;
                if !ok {
                    reasons.push(format!("{tag}: grows like e^({} q^2)", g.gaussian));
                }
                ok
            } else {
                let p = g.q_power + 2.0 * deg - 4.0;
                2.0 * p < -1.0
            }
        }
        ExampleId::Hyperbolic => {
            // e^{ζ c sinh q} dominates whenever c ≠ 0
            let dir = endpoint.signum();
            if g.sinh_coeff != 0.0 {
                let ok = g.sinh_coeff * dir < 0.0;
                if !ok {
                    reasons.push(format!(
                        "{tag}: grows like e^({} zeta sinh q)",
                        g.sinh_coeff
                    ));
                }
                ok
            } else {
                // |ψ| ~ e^{(deg−2)|q| + cosh_power |q|}
                (deg - 2.0 + g.cosh_power) * 2.0 < 0.0
            }
        }
    }
}

pub fn susy_breaking_classification(model: &PhysicalModel) -> SusyClassification {
    let endpoints: Vec<f64> = match model.example {
        ExampleId::Rational => vec![0.0, f64::INFINITY],
        ExampleId::Hyperbolic => vec![f64::NEG_INFINITY, f64::INFINITY],
    };
    let mut reasons = Vec::new();
    let normalizable = |sign: Sign, reasons: &mut Vec<String>| {
        model.sector_functions(sign).iter().all(|s| {
            endpoints
                .iter()
                .map(|&e| endpoint_integrable(model, s, e, reasons))
                .fold(true, |a, b| a && b)
        })
    };
    let minus_normalizable = normalizable(Sign::Minus, &mut reasons);
    let plus_normalizable = normalizable(Sign::Plus, &mut reasons);
    SusyClassification {
        status: if minus_normalizable || plus_normalizable {
            SusyStatus::Unbroken
        } else {
            SusyStatus::Broken
        },
        minus_normalizable,
        plus_normalizable,
        reasons,
    }
}

/// Scaling of the change of variable and the potentials under
/// `a_i → ν a_i`, `c0 → ν c0`.
#[derive(Clone, Debug, Serialize)]
pub struct ScalingReport {
    #[serde(with = "pq")]
    pub nu: Rational,
    pub change_of_variable: ResidualReport,
    pub potentials: ResidualReport,
}

pub fn scaling_relation_check(model: &PhysicalModel, nu: &Rational) -> Result<ScalingReport> {
    if *nu <= Rational::zero() {
        return Err(Error::Domain(format!("scaling factor must be positive (got {})", to_pq(nu))));
    }
    let scaled_ctx = model
        .ctx
        .clone()
        .with_weights(model.ctx.a.clone().map(|a| a * nu))
        .with_c0(&model.ctx.c0 * nu);
    let scaled = PhysicalSystem::new(&scaled_ctx)?;
    let v_scaled = [scaled.potential(Sign::Minus)?.even, scaled.potential(Sign::Plus)?.even];
    let nu_f = to_f64(nu);
    let root = nu_f.sqrt();
    let grid = match model.example {
        ExampleId::Rational => Grid::new(0.3, 4.0, 60)?,
        ExampleId::Hyperbolic => Grid::new(-2.0, 2.0, 60)?,
    };
    let a_scaled = scaled_ctx_a(&scaled);
    // z_ν(q) = z(√ν q) must solve z_ν′² = 2 A_ν(z_ν)
    let cov = grid.points().into_iter().map(|q| {
        let zq = model.z(root * q);
        let zp = root * model.z_prime(root * q);
        (q, rel_gap(zp * zp, 2.0 * a_scaled.eval_f64(zq)))
    });
    let change_of_variable = ResidualReport::from_samples(cov.collect::<Vec<_>>(), 1e-12);
    let pots = grid.points().into_iter().map(|q| {
        let z = model.z(root * q);
        let mut worst: f64 = 0.0;
        for sign in [Sign::Minus, Sign::Plus] {
            let lhs = v_scaled[sign_index(sign)].eval_f64(z);
            let rhs = nu_f * model.v(sign, root * q);
            worst = worst.max(rel_gap(lhs, rhs));
        }
        (q, worst)
    });
    let potentials = ResidualReport::from_samples(pots.collect::<Vec<_>>(), 1e-12);
    Ok(ScalingReport {
        nu: nu.clone(),
        change_of_variable,
        potentials,
    })
}

fn scaled_ctx_a(sys: &PhysicalSystem) -> Poly {
    sys.alg.a().clone()
}

/// Finiteness of both potentials over a grid and the analytic pole test.
#[derive(Clone, Debug, Serialize)]
pub struct SingularityReport {
    /// `f(z; α)` and `f(z; α+N)` have no real roots (discriminant `1 − α < 0`).
    pub f_has_no_real_roots: bool,
    pub all_finite_on_grid: bool,
    /// Only meaningful for the rational example: `|V^±| → ∞` as `q → 0⁺`.
    pub pole_at_origin: Option<bool>,
}

pub fn singularity_scan(model: &PhysicalModel, grid: &Grid) -> SingularityReport {
    let disc_neg = |c: &[f64; 3]| c[1] * c[1] - 4.0 * c[2] * c[0] < 0.0;
    let f_has_no_real_roots = disc_neg(&model.f_minus) && disc_neg(&model.f_plus);
    let all_finite_on_grid = grid.points().into_iter().all(|q| {
        [Sign::Minus, Sign::Plus]
            .iter()
            .all(|&s| model.v(s, q).is_finite())
    });
    let pole_at_origin = (model.example == ExampleId::Rational).then(|| {
        [Sign::Minus, Sign::Plus]
            .iter()
            .all(|&s| model.v(s, 1e-4).abs() > 1e6 && model.v(s, 1e-5).abs() > model.v(s, 1e-4).abs())
    });
    SingularityReport {
        f_has_no_real_roots,
        all_finite_on_grid,
        pole_at_origin,
    }
}

/// `gd′ = sech` by five-point differences over a grid.
pub fn gd_self_test(grid: &Grid, h: f64) -> ResidualReport {
    let samples = grid
        .points()
        .into_iter()
        .map(|q| (q, (first_derivative(gd, q, h) - 1.0 / q.cosh()).abs()));
    ResidualReport::from_samples(samples.collect::<Vec<_>>(), 1e-10)
}

/// Export encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableFormat {
    Csv,
    Json,
}

/// Tabulated potentials and minus-sector functions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialTable {
    pub metadata: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn potential_table(model: &PhysicalModel, grid: &Grid) -> PotentialTable {
    let sectors = model.sector_functions(Sign::Minus);
    let mut columns = vec!["q".to_string(), "V_minus".to_string(), "V_plus".to_string()];
    columns.extend((1..=sectors.len()).map(|n| format!("psi_{n}")));
    let rows = grid
        .points()
        .into_iter()
        .map(|q| {
            let mut row = vec![q, model.v(Sign::Minus, q), model.v(Sign::Plus, q)];
            row.extend(sectors.iter().map(|s| model.sector_value(s, q)));
            row
        })
        .collect();
    let mut metadata = BTreeMap::new();
    metadata.insert("example".into(), model.example.to_string());
    metadata.insert("alpha".into(), to_pq(&model.ctx.alpha));
    metadata.insert("enn".into(), model.ctx.enn.to_string());
    metadata.insert("c0".into(), to_pq(&model.ctx.c0));
    metadata.insert("q_min".into(), grid.q_min.to_string());
    metadata.insert("q_max".into(), grid.q_max.to_string());
    metadata.insert("steps".into(), grid.steps.to_string());
    metadata.insert("psi_sector".into(), "minus".into());
    PotentialTable {
        metadata,
        columns,
        rows,
    }
}

/// Shortest round-trip text; scientific outside `[1e-4, 1e15)`. With a
/// precision, always scientific with that many fractional digits.
pub fn format_value(x: f64, precision: Option<usize>) -> String {
    match precision {
        Some(p) => format!("{x:.p$e}"),
        None if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&x.abs()) => format!("{x}"),
        None => format!("{x:e}"),
    }
}

/// Writes a table as CSV (metadata as leading `#` lines) or JSON.
pub fn write_table<W: Write>(
    table: &PotentialTable,
    format: TableFormat,
    precision: Option<usize>,
    out: W,
) -> Result<()> {
    match format {
        TableFormat::Json => {
            serde_json::to_writer_pretty(out, table)?;
            Ok(())
        }
        TableFormat::Csv => {
            let mut out = out;
            for (k, v) in &table.metadata {
                writeln!(out, "# {k} = {v}").map_err(|e| Error::Io {
                    path: "<table>".into(),
                    source: e,
                })?;
            }
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&table.columns)?;
            for row in &table.rows {
                w.write_record(row.iter().map(|x| format_value(*x, precision)))?;
            }
            w.flush().map_err(|e| Error::Io {
                path: "<table>".into(),
                source: e,
            })?;
            Ok(())
        }
    }
}

/// `export_tables`: writes the table to `path`.
pub fn export_tables(
    model: &PhysicalModel,
    grid: &Grid,
    format: TableFormat,
    precision: Option<usize>,
    path: &Path,
) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let table = potential_table(model, grid);
    write_table(&table, format, precision, std::io::BufWriter::new(file)).map_err(|e| match e {
        Error::Io { source, .. } => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })
}

/// Reads a CSV table back, metadata included.
pub fn read_csv_table(text: &str) -> Result<PotentialTable> {
    let mut metadata = BTreeMap::new();
    let mut body = String::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.split_once('=') {
                metadata.insert(k.trim().to_string(), v.trim().to_string());
            }
        } else {
            body.push_str(line);
            body.push('\n');
        }
    }
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let columns = r.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|s| s.parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(PotentialTable {
        metadata,
        columns,
        rows,
    })
}

/// Potential types by the shape of `A(z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PotentialType {
    Rational,
    Exponential,
    TrigonometricOrHyperbolic,
    Elliptic,
}

/// Classifies by which weights are nonzero.
pub fn classify_potential_type(a: &[Rational; 4]) -> PotentialType {
    let nz: Vec<bool> = a.iter().map(|x| !x.is_zero()).collect();
    match (nz[0], nz[1], nz[2], nz[3]) {
        (true, false, false, false) | (false, false, false, true) => PotentialType::Rational,
        (true, true, false, false) => PotentialType::Exponential,
        (false, true, false, false) | (false, false, true, false) | (false, false, true, true) => {
            PotentialType::TrigonometricOrHyperbolic
        }
        _ => PotentialType::Elliptic,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::frac;

    fn ex1(alpha: Rational, enn: u32) -> PhysicalModel {
        make_model(ExampleId::Rational, &ParamContext::example1(alpha, enn).unwrap()).unwrap()
    }

    fn ex2(alpha: Rational, enn: u32) -> PhysicalModel {
        make_model(ExampleId::Hyperbolic, &ParamContext::example2(alpha, enn).unwrap()).unwrap()
    }

    #[test]
    fn example_values() {
        assert!((ex1(int(2), 3).v(Sign::Minus, 1.0) - 2.735).abs() < 1e-12);
        let m = ex2(int(2), 3);
        assert_eq!(m.zeta, Some(2.0));
        assert!((m.v(Sign::Minus, 0.0) - 6.25).abs() < 1e-12);
    }

    #[test]
    fn shape_invariance_constants() {
        for (a, n) in [(int(2), 3), (frac(5, 2), 4)] {
            let r = shape_invariance_check(&ParamContext::example1(a, n).unwrap()).unwrap();
            assert!(r.passed, "{r:?}");
            assert_eq!(r.expected, 2.0 * n as f64);
        }
    }

    #[test]
    fn unsupported_branch() {
        let ctx = ParamContext::example2(frac(1, 2), 3).unwrap();
        assert!(matches!(
            make_model(ExampleId::Hyperbolic, &ctx),
            Err(Error::UnsupportedBranch(_))
        ));
    }

    #[test]
    fn classification() {
        assert_eq!(susy_breaking_classification(&ex1(int(2), 3)).status, SusyStatus::Unbroken);
        assert_eq!(susy_breaking_classification(&ex2(int(2), 3)).status, SusyStatus::Broken);
    }

    #[test]
    fn gauge_data_consistent() {
        let m = ex1(frac(7, 3), 4);
        let r = gauge_self_check(&m, &Grid::new(0.5, 4.0, 40).unwrap(), 1e-4);
        assert!(r.e_w_match.passed && r.derivative_match.passed && r.factor_match.passed, "{r:?}");
        let m = ex2(frac(7, 3), 4);
        let r = gauge_self_check(&m, &Grid::new(-3.0, 3.0, 40).unwrap(), 1e-4);
        assert!(r.e_w_match.passed && r.derivative_match.passed && r.factor_match.passed, "{r:?}");
    }

    #[test]
    fn table_classifier() {
        assert_eq!(
            classify_potential_type(&[int(2), int(0), int(0), int(0)]),
            PotentialType::Rational
        );
        assert_eq!(
            classify_potential_type(&[int(0), frac(1, 2), int(0), int(0)]),
            PotentialType::TrigonometricOrHyperbolic
        );
        assert_eq!(
            classify_potential_type(&[int(1), int(1), int(1), int(0)]),
            PotentialType::Elliptic
        );
    }
}
