//! Gauged N-fold supercharges `P̃⁻`, `P̄⁺` and the gauged Hamiltonian pair
//! `H̃⁻ = H̄⁻`, `H̄⁺`. The `z′(q)^N` prefactor of both charges is carried
//! as an exponent only.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::linalg::{rank, Matrix};
use crate::exactalg::rational::{int, pq, to_pq, Rational};
use crate::exactalg::{LinDiffOp, Poly, RatFunc};
use crate::quasiops::{self, HamiltonianParts};
use crate::x2spaces::{
    check_f_param, chi_bar, f_log_deriv, f_poly, f_rat, f_ratio, phi_tilde, raising_chain, x2b_basis,
    ParamContext,
};

/// `left · op · right`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChargeFactor {
    pub left: RatFunc,
    pub op: LinDiffOp,
    pub right: RatFunc,
}

impl ChargeFactor {
    pub fn expand(&self) -> LinDiffOp {
        self.op.left_mul(&self.left).right_mul(&self.right)
    }
}

/// An order-N gauged supercharge `z′^N · z_part`.
#[derive(Clone, Debug, Serialize)]
pub struct GaugedCharge {
    pub z_part: LinDiffOp,
    pub prefactor_exponent: u32,
    /// Leftmost factor first.
    pub product_form: Vec<ChargeFactor>,
}

impl GaugedCharge {
    pub fn expand_product(&self) -> LinDiffOp {
        self.product_form
            .iter()
            .fold(LinDiffOp::identity(), |acc, f| acc.compose(&f.expand()))
    }
}

/// `H̄^±` with the ingredients `Q`, `C`, `w̃_{N−1}`.
#[derive(Clone, Debug, Serialize)]
pub struct GaugedPair {
    pub h_minus: LinDiffOp,
    pub h_plus: LinDiffOp,
    pub q_poly_part: RatFunc,
    pub c_func: RatFunc,
    pub w_coeff: RatFunc,
    pub parts: HamiltonianParts,
}

/// `w̃_{N−1} = −(N−1) f′(α)/f(α) − f′(α+N)/f(α+N)`.
pub fn w_tilde_closed(alpha: &Rational, enn: u32) -> RatFunc {
    let nm1 = int(enn as i64 - 1);
    &f_log_deriv(alpha).scale(&-nm1) - &f_log_deriv(&(alpha + int(enn as i64)))
}

/// `Σ_{k<N} [g_k + (N−1−k) f_k′/f_k]` with `f_k = f(α+k+1)/f(α+k)` and
/// `g_k = −f′(α+k+1)/f(α+k+1)`; valid for every `N ≥ 1`.
pub fn w_tilde_general(alpha: &Rational, enn: u32) -> RatFunc {
    let mut acc = RatFunc::zero();
    for k in 0..enn as i64 {
        let lo = alpha + int(k);
        let hi = alpha + int(k + 1);
        let g = -f_log_deriv(&hi);
        let fk_log = &f_log_deriv(&hi) - &f_log_deriv(&lo);
        acc = &acc + &(&g + &fk_log.scale(&int(enn as i64 - 1 - k)));
    }
    acc
}

/// `w̃_{N−1}` of a context, in closed form.
pub fn w_tilde(ctx: &ParamContext) -> RatFunc {
    w_tilde_closed(&ctx.alpha, ctx.enn)
}

/// `P̃⁻ = z′^N f(α)/f(α+N) Π_{k=0}^{N−1} f(α+k+1)/f(α+k) (∂ − f′(α+k+1)/f(α+k+1))`,
/// factors ordered `k = N−1` leftmost.
pub fn build_p_minus(ctx: &ParamContext) -> Result<GaugedCharge> {
    ctx.check_charges()?;
    let a = &ctx.alpha;
    let nn = ctx.enn;
    let mut factors = vec![ChargeFactor {
        left: f_ratio(a, &(a + int(nn as i64))),
        op: LinDiffOp::identity(),
        right: RatFunc::one(),
    }];
    for k in (0..nn as i64).rev() {
        let hi = a + int(k + 1);
        let lo = a + int(k);
        factors.push(ChargeFactor {
            left: f_ratio(&hi, &lo),
            op: &LinDiffOp::d() - &LinDiffOp::mult(f_log_deriv(&hi)),
            right: RatFunc::one(),
        });
    }
    let mut charge = GaugedCharge {
        z_part: LinDiffOp::zero(),
        prefactor_exponent: nn,
        product_form: factors,
    };
    charge.z_part = charge.expand_product();
    let lead = charge.z_part.coeff(nn as usize);
    if !lead.is_one() {
        return Err(Error::Consistency(format!(
            "P-minus leading coefficient is {lead}, not 1"
        )));
    }
    Ok(charge)
}

/// `P̄⁺ = z′^N [Π_{k=0}^{N−1} (∂ + f′(α+N−k)/f(α+N−k)) f(α+N−k)/f(α+N−k−1)] f(α)/f(α+N)`,
/// certified equal to `(−1)^N` times the z-transpose of `P̃⁻` and, when
/// `α − 1 ∉ {0, 1}`, to `f(α−1)/f(α) Π Ā⁺(α+N−k) f(α)/f(α+N−1)`.
pub fn build_p_plus(ctx: &ParamContext) -> Result<GaugedCharge> {
    let minus = build_p_minus(ctx)?;
    let a = &ctx.alpha;
    let nn = ctx.enn as i64;
    let mut factors = Vec::with_capacity(ctx.enn as usize + 1);
    for k in (0..nn).rev() {
        let top = a + int(nn - k);
        let below = a + int(nn - k - 1);
        factors.push(ChargeFactor {
            left: RatFunc::one(),
            op: &LinDiffOp::d() + &LinDiffOp::mult(f_log_deriv(&top)),
            right: f_ratio(&top, &below),
        });
    }
    factors.push(ChargeFactor {
        left: RatFunc::one(),
        op: LinDiffOp::identity(),
        right: f_ratio(a, &(a + int(nn))),
    });
    let charge = GaugedCharge {
        z_part: LinDiffOp::zero(),
        prefactor_exponent: ctx.enn,
        product_form: factors,
    };
    let product = charge.expand_product();
    let transposed = transpose_form(&minus.z_part, ctx.enn);
    if product != transposed {
        return Err(Error::Consistency(format!(
            "P-plus product form differs from the transpose form at alpha = {}, N = {}",
            to_pq(a),
            ctx.enn
        )));
    }
    if check_f_param(&(a - int(1)), "alpha - 1").is_ok() {
        let chain = raising_chain(&(a + int(nn)), ctx.enn)?;
        let via_raising = chain
            .left_mul(&f_ratio(&(a - int(1)), a))
            .right_mul(&f_ratio(a, &(a + int(nn - 1))));
        if via_raising != product {
            return Err(Error::Consistency(format!(
                "P-plus product form differs from the raising-operator form at alpha = {}",
                to_pq(a)
            )));
        }
    }
    Ok(GaugedCharge {
        z_part: product,
        ..charge
    })
}

/// `(−1)^N Σ_k (−1)^k ∂^k ∘ c_k`, the z-part of `P̄⁺` given that of `P̃⁻`.
pub fn transpose_form(z_part: &LinDiffOp, enn: u32) -> LinDiffOp {
    let t = z_part.transpose();
    if enn % 2 == 0 {
        t
    } else {
        -t
    }
}

/// `Q = (N−2)/2 A′ + B̃ + 4(α−1)D/f` and `C = C̃ − 4(α−1)D/f`.
pub fn q_and_c(ctx: &ParamContext, parts: &HamiltonianParts) -> (RatFunc, RatFunc) {
    let four_d = RatFunc::new(
        parts.d.scale(&(int(4) * (&ctx.alpha - int(1)))),
        f_poly(&ctx.alpha),
    )
    .expect("f is monic");
    let half_nm2 = (ctx.n_rat() - int(2)) / int(2);
    let q = &(&RatFunc::from_poly(parts.a.deriv().scale(&half_nm2))
        + &RatFunc::from_poly(parts.b_tilde.clone()))
        + &four_d;
    let c = &RatFunc::from_poly(parts.c_tilde.clone()) - &four_d;
    (q, c)
}

/// `H̄^±` from `A`, `Q`, `C` and `w̃_{N−1}`; `H̄⁻` must coincide with the
/// `H̃⁻` assembled from `J1..J4`.
pub fn build_gauged_pair(ctx: &ParamContext) -> Result<GaugedPair> {
    ctx.check_minus()?;
    let (h_tilde, parts) = quasiops::build_h_minus(ctx)?;
    let (q, c) = q_and_c(ctx, &parts);
    let w = w_tilde(ctx);
    let a = RatFunc::from_poly(parts.a.clone());
    let a_prime = RatFunc::from_poly(parts.a.deriv());
    let half_nm2 = (ctx.n_rat() - int(2)) / int(2);
    let base_first = a_prime.scale(&half_nm2);

    let h_minus = LinDiffOp::from_terms([
        (2, -&a),
        (1, &base_first - &q),
        (0, -&c),
    ]);
    if h_minus != h_tilde {
        return Err(Error::Consistency(format!(
            "gauged H-minus differs from the J assembly at alpha = {}",
            to_pq(&ctx.alpha)
        )));
    }
    // (1+1)·((N−1)/2 Q′ − A′w̃/2 − A w̃′)
    let half_nm1 = (ctx.n_rat() - int(1)) / int(2);
    let extra = &(&q.deriv().scale(&half_nm1) - &(&a_prime * &w).scale(&(Rational::one() / int(2))))
        - &(&a * &w.deriv());
    let h_plus = LinDiffOp::from_terms([
        (2, -&a),
        (1, &base_first + &q),
        (0, -&c),
        (0, -&extra.scale(&int(2))),
    ]);
    Ok(GaugedPair {
        h_minus,
        h_plus,
        q_poly_part: q,
        c_func: c,
        w_coeff: w,
        parts,
    })
}

/// `dim ker P̃⁻` restricted to polynomials of degree at most `N+1`.
pub fn kernel_dimension_minus(charge: &GaugedCharge) -> usize {
    let size = charge.prefactor_exponent as usize + 2;
    let (_, cleared) = charge.z_part.clear_denominators();
    let images: Vec<Poly> = (0..size)
        .map(|k| {
            cleared
                .apply_poly(&Poly::monomial(Rational::one(), k))
                .as_poly()
                .cloned()
                .expect("cleared operator has polynomial coefficients")
        })
        .collect();
    let width = images.iter().map(|p| p.coeffs().len()).max().unwrap_or(0);
    let m: Matrix = images
        .iter()
        .map(|p| (0..width).map(|j| p.coeff(j)).collect())
        .collect();
    size - rank(&m)
}

/// Annihilation and first-outside checks of both charges.
#[derive(Clone, Debug, Serialize)]
pub struct ChargeKernelReport {
    pub enn: u32,
    #[serde(with = "pq")]
    pub alpha: Rational,
    pub minus_annihilates: bool,
    pub plus_annihilates: bool,
    pub minus_next_is_gamma_multiple: bool,
    pub plus_next_nonzero: bool,
    pub kernel_dimension: usize,
    pub leading_is_one: bool,
    pub w_matches_coefficient: bool,
}

/// Kernels of `P̃⁻` and `P̄⁺` on the X2 bases, the image of the first
/// element beyond them, and the `∂^{N−1}` coefficient against `w̃`.
pub fn charge_kernel_report(ctx: &ParamContext) -> Result<ChargeKernelReport> {
    let minus = build_p_minus(ctx)?;
    let plus = build_p_plus(ctx)?;
    let a = &ctx.alpha;
    let nn = ctx.enn;
    let beta = a + int(nn as i64);
    let ff = (&f_rat(a) * &f_rat(&beta)).inv()?;
    let minus_annihilates = (1..=nn).all(|n| minus.z_part.apply_poly(&phi_tilde(n, a)).is_zero());
    let plus_annihilates = (1..=nn).all(|n| {
        plus.z_part
            .apply(&ff.mul_poly(&chi_bar(n, &beta)))
            .is_zero()
    });
    // Π Ã⁻ φ̃_{N+1}(α) = N! φ̃_1(α+N), then times f(α)/f(α+N).
    let gamma = crate::exactalg::rational::gamma_ratio(nn + 1, nn);
    let want = f_ratio(a, &beta).mul_poly(&phi_tilde(1, &beta).scale(&gamma));
    let minus_next_is_gamma_multiple = minus.z_part.apply_poly(&phi_tilde(nn + 1, a)) == want;
    let plus_next_nonzero = !plus
        .z_part
        .apply(&ff.mul_poly(&chi_bar(nn + 1, &beta)))
        .is_zero();
    Ok(ChargeKernelReport {
        enn: nn,
        alpha: a.clone(),
        minus_annihilates,
        plus_annihilates,
        minus_next_is_gamma_multiple,
        plus_next_nonzero,
        kernel_dimension: kernel_dimension_minus(&minus),
        leading_is_one: minus.z_part.coeff(nn as usize).is_one(),
        w_matches_coefficient: minus.z_part.coeff(nn as usize - 1) == w_tilde(ctx),
    })
}

/// Outcome of applying `Ȟ⁺` to the X2b basis at `α+N`.
#[derive(Clone, Debug, Serialize)]
pub struct PreservationReport {
    #[serde(with = "pq")]
    pub alpha: Rational,
    pub enn: u32,
    pub preserved: bool,
    pub triangular: bool,
    /// Column `n−1` holds the coordinates of `Ȟ⁺ χ̄_n(z; α+N)`.
    #[serde(with = "crate::exactalg::rational::pq_matrix")]
    pub coordinates: Vec<Vec<Rational>>,
    #[serde(with = "pq")]
    pub c0_plus: Rational,
}

/// Checks `Ȟ⁺ Ṽ^(X2b)[z; α+N] ⊂ Ṽ^(X2b)[z; α+N]` and records coordinates.
pub fn verify_preservation_plus(ctx: &ParamContext) -> Result<PreservationReport> {
    let (h_check, parts) = quasiops::build_check_h_plus(ctx)?;
    let beta = &ctx.alpha + ctx.n_rat();
    let basis = x2b_basis(&beta, ctx.enn)?;
    let cols = quasiops::restricted_columns(&h_check, &basis);
    let preserved = cols.is_some();
    let coordinates = cols.unwrap_or_default();
    let triangular = preserved
        && coordinates
            .iter()
            .enumerate()
            .all(|(n, col)| col.iter().skip(n + 1).all(Zero::is_zero));
    Ok(PreservationReport {
        alpha: ctx.alpha.clone(),
        enn: ctx.enn,
        preserved,
        triangular,
        coordinates,
        c0_plus: parts.plus.map(|p| p.c0_plus).unwrap_or_default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::frac;

    #[test]
    fn w_tilde_example() {
        let w = w_tilde_closed(&int(2), 3);
        let a = RatFunc::new(Poly::from_ints(&[-4, -4]), Poly::from_ints(&[2, 2, 1])).unwrap();
        let b = RatFunc::new(Poly::from_ints(&[-8, -2]), Poly::from_ints(&[20, 8, 1])).unwrap();
        assert_eq!(w, &a + &b);
    }

    #[test]
    fn w_tilde_forms_agree() {
        for enn in 1..=8 {
            let a = frac(17, 5);
            assert_eq!(w_tilde_general(&a, enn), w_tilde_closed(&a, enn));
        }
        assert_eq!(w_tilde_general(&frac(3, 7), 1), -f_log_deriv(&frac(10, 7)));
    }

    #[test]
    fn charges_for_n3() {
        let ctx = ParamContext::new(frac(7, 3), 3).unwrap();
        let r = charge_kernel_report(&ctx).unwrap();
        assert!(r.minus_annihilates && r.plus_annihilates);
        assert!(r.minus_next_is_gamma_multiple && r.plus_next_nonzero);
        assert_eq!(r.kernel_dimension, 3);
        assert!(r.leading_is_one && r.w_matches_coefficient);
    }

    #[test]
    fn gauged_pair_and_plus_preservation() {
        let ctx = ParamContext::new(frac(9, 4), 3)
            .unwrap()
            .with_weights([int(1), frac(1, 3), int(-2), frac(2, 5)]);
        build_gauged_pair(&ctx).unwrap();
        let r = verify_preservation_plus(&ctx).unwrap();
        assert!(r.preserved);
        assert!(!r.triangular);
        let solv = ParamContext::example1(frac(9, 4), 4).unwrap();
        let r = verify_preservation_plus(&solv).unwrap();
        assert!(r.preserved && r.triangular);
    }
}
