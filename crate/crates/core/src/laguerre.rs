//! Restricted spectra of the solvable Hamiltonians, their eigenpolynomials
//! in the `φ̃` and `χ̄` bases, and a numeric Gram–Schmidt comparison.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::rational::{int, pq, pq_seq, to_f64, to_pq, Rational};
use crate::exactalg::Poly;
use crate::models::{make_model, ExampleId};
use crate::qalgebra::Sign;
use crate::quasiops::{build_h_minus, build_j, build_k, restricted_columns};
use crate::susybuild::verify_preservation_plus;
use crate::x2spaces::{chi_bar, f_poly, phi_tilde, x2a_basis, ParamContext};

/// Matrix of the gauged Hamiltonian on its invariant subspace.
/// `entries[i][j]` is the coefficient of `e_{i+1}` in `H e_{j+1}`.
#[derive(Clone, Debug, Serialize)]
pub struct RestrictedMatrix {
    pub side: Sign,
    #[serde(with = "pq")]
    pub alpha: Rational,
    pub enn: u32,
    #[serde(with = "crate::exactalg::rational::pq_matrix")]
    pub entries: Vec<Vec<Rational>>,
}

impl RestrictedMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// No entry below the diagonal.
    pub fn is_triangular(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().take(i).all(Zero::is_zero))
    }

    pub fn diagonal(&self) -> Vec<Rational> {
        (0..self.size()).map(|i| self.entries[i][i].clone()).collect()
    }

    /// Nonzero index shifts `i − j` present in the matrix.
    pub fn shifts(&self) -> Vec<i64> {
        let mut s: Vec<i64> = Vec::new();
        for (i, row) in self.entries.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let d = i as i64 - j as i64;
                if !x.is_zero() && !s.contains(&d) {
                    s.push(d);
                }
            }
        }
        s.sort_unstable();
        s
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(to_f64).collect())
            .collect()
    }
}

fn transpose_columns(cols: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let n = cols.len();
    (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
}

/// `H̃⁻` on `⟨φ̃_1..φ̃_N⟩(α)` for the minus side, `Ȟ⁺` on
/// `⟨χ̄_1..χ̄_N⟩(α+N)` for the plus side.
pub fn restricted_matrix(ctx: &ParamContext, side: Sign) -> Result<RestrictedMatrix> {
    let cols = match side {
        Sign::Minus => {
            let (h, _) = build_h_minus(ctx)?;
            restricted_columns(&h, &x2a_basis(&ctx.alpha, ctx.enn)?).ok_or_else(|| {
                Error::Consistency(format!(
                    "H-minus leaves the X2a subspace at alpha = {}, N = {}",
                    to_pq(&ctx.alpha),
                    ctx.enn
                ))
            })?
        }
        Sign::Plus => {
            let rep = verify_preservation_plus(ctx)?;
            if !rep.preserved {
                return Err(Error::Consistency(format!(
                    "H-check-plus leaves the X2b subspace at alpha + N = {}",
                    to_pq(&(&ctx.alpha + ctx.n_rat()))
                )));
            }
            rep.coordinates
        }
    };
    Ok(RestrictedMatrix {
        side,
        alpha: ctx.alpha.clone(),
        enn: ctx.enn,
        entries: transpose_columns(cols),
    })
}

/// Eigenvector of a triangular restricted matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenPoly {
    pub n: u32,
    #[serde(with = "pq")]
    pub eigenvalue: Rational,
    /// Coordinates in the basis; entry `n−1` is `(−1)^{n+1}`.
    #[serde(with = "pq_seq")]
    pub coordinates: Vec<Rational>,
    pub poly: Poly,
}

/// Triangular back-substitution; `top(n)` fixes coordinate `n`.
pub fn triangular_eigenvectors(
    m: &RestrictedMatrix,
    top: impl Fn(u32) -> Rational,
) -> Result<Vec<Vec<Rational>>> {
    if !m.is_triangular() {
        return Err(Error::Domain(
            "eigenpolynomials need a triangular restricted matrix (solvable weights)".into(),
        ));
    }
    let size = m.size();
    let e = &m.entries;
    (0..size)
        .map(|n| {
            let lambda = &e[n][n];
            let mut v = vec![Rational::zero(); size];
            v[n] = top(n as u32 + 1);
            for k in (0..n).rev() {
                let gap = &e[k][k] - lambda;
                if gap.is_zero() {
                    return Err(Error::DegenerateSpectrum(format!(
                        "eigenvalue {} repeats at indices {} and {}",
                        to_pq(lambda),
                        k + 1,
                        n + 1
                    )));
                }
                let s: Rational = (k + 1..=n).map(|j| &e[k][j] * &v[j]).sum();
                v[k] = -s / gap;
            }
            Ok(v)
        })
        .collect()
}

fn sign_top(n: u32) -> Rational {
    if n % 2 == 1 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn combine(elements: &[Poly], coords: &[Rational]) -> Poly {
    elements
        .iter()
        .zip(coords)
        .fold(Poly::zero(), |acc, (p, c)| &acc + &p.scale(c))
}

/// Eigenpolynomials of the solvable `H̃⁻`, one per basis index.
pub fn eigen_polys(ctx: &ParamContext) -> Result<Vec<EigenPoly>> {
    if !ctx.is_solvable() {
        return Err(Error::Domain("eigenpolynomials need a2 = a3 = a4 = 0".into()));
    }
    let m = restricted_matrix(ctx, Sign::Minus)?;
    let vecs = triangular_eigenvectors(&m, sign_top)?;
    let elements: Vec<Poly> = (1..=ctx.enn).map(|n| phi_tilde(n, &ctx.alpha)).collect();
    Ok(vecs
        .into_iter()
        .enumerate()
        .map(|(i, v)| EigenPoly {
            n: i as u32 + 1,
            eigenvalue: m.entries[i][i].clone(),
            poly: combine(&elements, &v),
            coordinates: v,
        })
        .collect())
}

/// Displayed second-kind combinations in the `φ̃` basis, `n = 1..=3`.
pub fn second_kind_display(n: u32, alpha: &Rational) -> Option<Vec<Rational>> {
    let a = alpha;
    match n {
        1 => Some(vec![int(1)]),
        2 => Some(vec![a + int(2), int(-1)]),
        3 => Some(vec![(a + int(2)) * (a + int(3)), int(-2) * (a + int(3)), int(1)]),
        _ => None,
    }
}

/// Displayed first-kind combinations in the `χ̄(−z; −α)` basis, `ν = 0..=2`.
pub fn first_kind_display(nu: u32, alpha: &Rational) -> Option<Vec<Rational>> {
    let a = alpha;
    match nu {
        0 => Some(vec![int(1)]),
        1 => Some(vec![a + int(3), int(1)]),
        2 => Some(vec![(a + int(3)) * (a + int(4)), int(2) * (a + int(4)), int(1)]),
        _ => None,
    }
}

/// One displayed combination checked against the exact machinery.
#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub index: u32,
    #[serde(with = "pq_seq")]
    pub displayed: Vec<Rational>,
    /// Back-substituted eigenvector equals the display.
    pub matches_eigenvector: bool,
    /// Eigenvalue of the combination under the first-order preserving
    /// operator, when it is an eigenvector.
    #[serde(with = "crate::exactalg::rational::opt_pq")]
    pub operator_eigenvalue: Option<Rational>,
    #[serde(with = "crate::exactalg::rational::opt_pq")]
    pub expected_eigenvalue: Option<Rational>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    #[serde(with = "pq")]
    pub alpha: Rational,
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// `λ` with `op p = λ p`, if any.
fn eigenvalue_of(image: &Poly, p: &Poly) -> Option<Rational> {
    let d = p.degree()?;
    let lambda = image.coeff(d) / p.coeff(d);
    (image == &p.scale(&lambda)).then_some(lambda)
}

/// The displayed second-kind combinations are eigenvectors of the solvable
/// `H̃⁻` and of `J1` with eigenvalue `−(n+1)`.
pub fn second_kind_relations(alpha: &Rational) -> Result<RelationReport> {
    let ctx = ParamContext::new(alpha.clone(), 3)?.with_weights([int(1), int(0), int(0), int(0)]);
    let eig = eigen_polys(&ctx)?;
    let j1 = build_j(1, &ctx)?;
    let elements: Vec<Poly> = (1..=3).map(|n| phi_tilde(n, alpha)).collect();
    let checks = (1..=3)
        .map(|n| {
            let displayed = second_kind_display(n, alpha).expect("n <= 3");
            let mut padded = displayed.clone();
            padded.resize(3, Rational::zero());
            let matches_eigenvector = eig[n as usize - 1].coordinates == padded;
            let v = combine(&elements, &displayed);
            let image = j1.apply_poly(&v);
            let operator_eigenvalue = image.as_poly().and_then(|img| eigenvalue_of(img, &v));
            let expected = -int(n as i64 + 1);
            let passed = matches_eigenvector && operator_eigenvalue.as_ref() == Some(&expected);
            RelationCheck {
                index: n,
                displayed,
                matches_eigenvector,
                operator_eigenvalue,
                expected_eigenvalue: Some(expected),
                passed,
            }
        })
        .collect();
    Ok(RelationReport {
        alpha: alpha.clone(),
        checks,
    })
}

/// The displayed first-kind combinations of `χ̄_k(−z; −α)` are eigenvectors
/// of the reflected `K1` at parameter `−α`, and agree with back-substitution
/// on the `K1` restricted matrix.
pub fn first_kind_relations(alpha: &Rational) -> Result<RelationReport> {
    let gamma = -alpha.clone();
    let kctx = ParamContext::new(gamma.clone(), 3)?;
    let k1 = build_k(1, &kctx)?;
    let reflected = k1.reflect();
    let direct: Vec<Poly> = (1..=3).map(|n| chi_bar(n, &gamma)).collect();
    let columns = restricted_columns(&k1, &crate::x2spaces::x2b_basis(&gamma, 3)?).ok_or_else(|| {
        Error::Consistency(format!("K1 leaves the X2b subspace at {}", to_pq(&gamma)))
    })?;
    let m = RestrictedMatrix {
        side: Sign::Plus,
        alpha: gamma.clone(),
        enn: 3,
        entries: transpose_columns(columns),
    };
    let vecs = triangular_eigenvectors(&m, |_| Rational::one())?;
    let elements: Vec<Poly> = direct.iter().map(Poly::reflect).collect();
    let checks = (0..3)
        .map(|nu| {
            let displayed = first_kind_display(nu, alpha).expect("nu <= 2");
            let mut padded = displayed.clone();
            padded.resize(3, Rational::zero());
            let matches_eigenvector = vecs[nu as usize] == padded;
            let v = combine(&elements, &displayed);
            let image = reflected.apply_poly(&v);
            let operator_eigenvalue = image.as_poly().and_then(|img| eigenvalue_of(img, &v));
            let expected = m.entries[nu as usize][nu as usize].clone();
            let passed = matches_eigenvector && operator_eigenvalue.as_ref() == Some(&expected);
            RelationCheck {
                index: nu,
                displayed,
                matches_eigenvector,
                operator_eigenvalue,
                expected_eigenvalue: Some(expected),
                passed,
            }
        })
        .collect();
    Ok(RelationReport {
        alpha: alpha.clone(),
        checks,
    })
}

const GL_LOW: usize = 20;
const GL_HIGH: usize = 30;
const PANEL_TOL: f64 = 1e-14;
const TAIL_TOL: f64 = 1e-14;
const MAX_REFINEMENTS: usize = 40;

fn rule(order: usize) -> GaussLegendre {
    GaussLegendre::new(NonZeroUsize::new(order).expect("positive order"))
}

/// Nodes and weights of a composite rule on `panels`.
fn composite_nodes(panels: &[(f64, f64)], r: &GaussLegendre) -> Vec<(f64, f64)> {
    panels
        .par_iter()
        .flat_map_iter(|&(a, b)| {
            let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
            r.as_node_weight_pairs()
                .iter()
                .map(move |&(x, w)| (mid + half * x, half * w))
        })
        .collect()
}

/// Refines `panels` until two Gauss–Legendre orders agree on `g` panel by
/// panel relative to the total.
fn refine_panels(mut panels: Vec<(f64, f64)>, g: &(dyn Fn(f64) -> f64 + Sync)) -> Result<(Vec<(f64, f64)>, f64)> {
    let (lo, hi) = (rule(GL_LOW), rule(GL_HIGH));
    for _ in 0..MAX_REFINEMENTS {
        let per_panel: Vec<(f64, f64)> = panels
            .par_iter()
            .map(|&(a, b)| (lo.integrate(a, b, g), hi.integrate(a, b, g)))
            .collect();
        let total: f64 = per_panel.iter().map(|p| p.1).sum();
        let bad: Vec<bool> = per_panel
            .iter()
            .map(|(l, h)| (l - h).abs() > PANEL_TOL * total.abs())
            .collect();
        if !bad.iter().any(|&b| b) {
            return Ok((panels, total));
        }
        panels = panels
            .into_iter()
            .zip(bad)
            .flat_map(|((a, b), split)| {
                if split {
                    let m = (a + b) / 2.0;
                    vec![(a, m), (m, b)]
                } else {
                    vec![(a, b)]
                }
            })
            .collect();
    }
    Err(Error::Precision(format!(
        "quadrature did not converge after {MAX_REFINEMENTS} refinements"
    )))
}

/// Breakpoints graded toward 0, then unit panels up to `upper`.
fn graded_panels(upper: f64) -> Vec<(f64, f64)> {
    let mut pts = vec![0.0];
    pts.extend((0..=12).rev().map(|k| 2f64.powi(-k)));
    let mut x = 1.0;
    while x < upper {
        x = (x + 1.0).min(upper);
        pts.push(x);
    }
    pts.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Gram–Schmidt comparison for one index.
#[derive(Clone, Debug, Serialize)]
pub struct GramSchmidtEntry {
    pub n: u32,
    pub orthogonalized: Vec<f64>,
    #[serde(with = "pq_seq")]
    pub exact: Vec<Rational>,
    pub deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GramSchmidtReport {
    #[serde(with = "pq")]
    pub alpha: Rational,
    pub n_max: u32,
    pub weight: String,
    pub upper_limit: f64,
    pub nodes: usize,
    pub entries: Vec<GramSchmidtEntry>,
    pub max_deviation: f64,
    /// Largest `|⟨v_m, v_n⟩| / (‖v_m‖ ‖v_n‖)` over exact eigenpolynomials.
    pub max_exact_overlap: f64,
    pub caveat: String,
}

/// `z^α e^{−z} / f(z; α)²`.
pub fn laguerre_weight(alpha: f64, f: &Poly, z: f64) -> f64 {
    let fz = f.eval_f64(z);
    z.powf(alpha) * (-z).exp() / (fz * fz)
}

/// Orthogonalizes `φ̃_1..φ̃_{n_max}` under the weight `z^α e^{−z} f⁻²` on
/// `(0, ∞)` and compares with the exact eigenpolynomials.
pub fn gram_schmidt_support(ctx: &ParamContext, n_max: u32) -> Result<GramSchmidtReport> {
    if !ctx.is_solvable() || ctx.alpha <= Rational::one() {
        return Err(Error::Domain(
            "Gram-Schmidt support needs solvable weights and alpha > 1".into(),
        ));
    }
    if n_max == 0 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    let alpha = &ctx.alpha;
    let af = to_f64(alpha);
    let f = f_poly(alpha);
    if f.coeffs().iter().any(Signed::is_negative) {
        return Err(Error::Domain("f(z; alpha) has a negative coefficient".into()));
    }
    let exact_ctx = ParamContext::new(alpha.clone(), n_max.max(3))?.with_weights(ctx.a.clone());
    let exact = eigen_polys(&exact_ctx)?;
    let basis: Vec<Poly> = (1..=n_max).map(|n| phi_tilde(n, alpha)).collect();
    let top = basis.last().expect("n_max >= 1");

    // Tail: |P|² z^α e^{−z}/f² ≤ K z^m e^{−z} with f ≥ f2 z² on z ≥ 1.
    let d = top.degree().unwrap_or(0) as f64;
    let l1: f64 = top.coeffs().iter().map(|c| to_f64(c).abs()).sum();
    let f2 = to_f64(&f.coeff(2));
    let m_exp = 2.0 * d + af - 4.0;
    let tail = |z: f64| l1 * l1 / (f2 * f2) * z.powf(m_exp) * (-z).exp() / (1.0 - m_exp / z);
    let diag = |z: f64| {
        let p = top.eval_f64(z);
        p * p * laguerre_weight(af, &f, z)
    };
    let mut upper = (2.0 * m_exp).max(40.0);
    let (panels, total) = loop {
        let (panels, total) = refine_panels(graded_panels(upper), &diag)?;
        if upper > m_exp && tail(upper) < TAIL_TOL * total {
            break (panels, total);
        }
        upper += 10.0;
        if upper > 2000.0 {
            return Err(Error::Precision("tail bound never fell below tolerance".into()));
        }
    };
    debug_assert!(total > 0.0);
    let nodes = composite_nodes(&panels, &rule(GL_HIGH));
    let sampled: Vec<Vec<f64>> = basis
        .iter()
        .map(|p| {
            nodes
                .iter()
                .map(|&(z, w)| (w * laguerre_weight(af, &f, z)).sqrt() * p.eval_f64(z))
                .collect()
        })
        .collect();
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();

    // MGS with one reorthogonalization pass, tracking basis coordinates.
    let size = n_max as usize;
    let mut ortho: Vec<Vec<f64>> = Vec::with_capacity(size);
    let mut coords: Vec<Vec<f64>> = Vec::with_capacity(size);
    for n in 0..size {
        let mut v = sampled[n].clone();
        let mut c = vec![0.0; size];
        c[n] = 1.0;
        for _pass in 0..2 {
            for k in 0..n {
                let proj = dot(&v, &ortho[k]) / dot(&ortho[k], &ortho[k]);
                v.iter_mut().zip(&ortho[k]).for_each(|(a, b)| *a -= proj * b);
                c.iter_mut().zip(&coords[k]).for_each(|(a, b)| *a -= proj * b);
            }
        }
        ortho.push(v);
        coords.push(c);
    }
    let entries: Vec<GramSchmidtEntry> = (0..size)
        .map(|n| {
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            let orthogonalized: Vec<f64> = coords[n][..=n].iter().map(|x| s * x).collect();
            let exact_c: Vec<Rational> = exact[n].coordinates[..=n].to_vec();
            let deviation = orthogonalized
                .iter()
                .zip(&exact_c)
                .map(|(x, y)| (x - to_f64(y)).abs())
                .fold(0.0, f64::max);
            GramSchmidtEntry {
                n: n as u32 + 1,
                orthogonalized,
                exact: exact_c,
                deviation,
            }
        })
        .collect();
    let exact_sampled: Vec<Vec<f64>> = exact[..size]
        .iter()
        .map(|e| {
            nodes
                .iter()
                .map(|&(z, w)| (w * laguerre_weight(af, &f, z)).sqrt() * e.poly.eval_f64(z))
                .collect()
        })
        .collect();
    let mut max_exact_overlap: f64 = 0.0;
    for i in 0..size {
        for j in 0..i {
            let (x, y) = (&exact_sampled[i], &exact_sampled[j]);
            max_exact_overlap = max_exact_overlap.max(dot(x, y).abs() / (dot(x, x) * dot(y, y)).sqrt());
        }
    }
    Ok(GramSchmidtReport {
        alpha: alpha.clone(),
        n_max,
        weight: "z^alpha exp(-z) / f(z; alpha)^2 on (0, inf)".into(),
        upper_limit: upper,
        nodes: nodes.len(),
        max_deviation: entries.iter().map(|e| e.deviation).fold(0.0, f64::max),
        entries,
        max_exact_overlap,
        caveat: "numeric support under the natural weight, not a proof".into(),
    })
}

/// Rayleigh quotient of one sector eigenfunction.
#[derive(Clone, Debug, Serialize)]
pub struct RayleighEntry {
    pub n: u32,
    #[serde(with = "pq")]
    pub eigenvalue: Rational,
    pub rayleigh_quotient: f64,
    pub relative_gap: f64,
}

/// `∫(½ψ′² + V⁻ψ²) dq / ∫ψ² dq` for `ψ = v_n(q²) × gauge⁻` in the rational
/// example, against the restricted-matrix eigenvalues.
pub fn rayleigh_quotients(ctx: &ParamContext) -> Result<Vec<RayleighEntry>> {
    let model = make_model(ExampleId::Rational, ctx)?;
    let eig = eigen_polys(ctx)?;
    let af = to_f64(&ctx.alpha);
    let f = f_poly(&ctx.alpha);
    let fd = f.deriv();
    let panels = {
        let mut pts = vec![0.0];
        pts.extend((0..=8).rev().map(|k| 2f64.powi(-k)));
        pts.extend((3..=40).map(|k| k as f64 * 0.5));
        pts.windows(2).map(|w| (w[0], w[1])).collect::<Vec<_>>()
    };
    let nodes = composite_nodes(&panels, &rule(GL_HIGH));
    eig.iter()
        .map(|e| {
            let p = &e.poly;
            let pd = p.deriv();
            let (mut num, mut den) = (0.0, 0.0);
            for &(q, w) in &nodes {
                let z = q * q;
                let g = q.powf(af + 0.5) * (-z / 2.0).exp() / f.eval_f64(z);
                let log_g = (af + 0.5) / q - q - 2.0 * q * fd.eval_f64(z) / f.eval_f64(z);
                let psi = p.eval_f64(z) * g;
                let dpsi = 2.0 * q * pd.eval_f64(z) * g + psi * log_g;
                num += w * (0.5 * dpsi * dpsi + model.v(Sign::Minus, q) * psi * psi);
                den += w * psi * psi;
            }
            let rq = num / den;
            let lam = to_f64(&e.eigenvalue);
            Ok(RayleighEntry {
                n: e.n,
                eigenvalue: e.eigenvalue.clone(),
                rayleigh_quotient: rq,
                relative_gap: (rq - lam).abs() / lam.abs().max(1.0),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::frac;

    #[test]
    fn solvable_diagonal() {
        let ctx = ParamContext::example1(int(2), 3).unwrap();
        let m = restricted_matrix(&ctx, Sign::Minus).unwrap();
        assert!(m.is_triangular());
        assert_eq!(m.diagonal(), vec![int(4), int(6), int(8)]);
        let p = restricted_matrix(&ctx, Sign::Plus).unwrap();
        assert!(p.is_triangular());
    }

    #[test]
    fn generic_band() {
        let ctx = ParamContext::new(frac(7, 3), 5)
            .unwrap()
            .with_weights([int(0), int(1), int(0), int(0)]);
        let m = restricted_matrix(&ctx, Sign::Minus).unwrap();
        assert!(m.shifts().iter().all(|s| (-2..=1).contains(s)), "{:?}", m.shifts());
        assert!(m.shifts().contains(&1));
    }

    #[test]
    fn second_kind() {
        for a in [int(2), frac(5, 2), frac(-7, 3)] {
            let r = second_kind_relations(&a).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn first_kind() {
        for a in [int(2), frac(5, 2), frac(11, 3)] {
            let r = first_kind_relations(&a).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn gram_schmidt_small() {
        let ctx = ParamContext::example1(int(2), 3).unwrap();
        let r = gram_schmidt_support(&ctx, 3).unwrap();
        assert!(r.max_deviation < 1e-8, "{r:?}");
    }

    #[test]
    fn rayleigh() {
        let ctx = ParamContext::example1(frac(5, 2), 3).unwrap();
        for e in rayleigh_quotients(&ctx).unwrap() {
            assert!(e.relative_gap < 1e-6, "{e:?}");
        }
    }
}
