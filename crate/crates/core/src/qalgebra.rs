//! Physical-coordinate operator algebra. Functions of `q` are elements of
//! `K = R(z) ⊕ z′·R(z)` with `z′² = 2A(z)`; operators are normal-ordered
//! polynomials in `D = d/dq = z′ ∂_z` with coefficients in `K`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactalg::diffop::binomial;
use crate::exactalg::rational::{int, pq, to_pq, Rational};
use crate::exactalg::{LinDiffOp, Poly, RatFunc};
use crate::susybuild::{self, GaugedPair};
use crate::x2spaces::{f_log_deriv, f_ratio, ParamContext};

/// `even + odd·z′`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct QElement {
    pub even: RatFunc,
    pub odd: RatFunc,
}

impl QElement {
    pub fn new(even: RatFunc, odd: RatFunc) -> Self {
        QElement { even, odd }
    }

    pub fn even(r: RatFunc) -> Self {
        QElement {
            even: r,
            odd: RatFunc::zero(),
        }
    }

    pub fn odd(r: RatFunc) -> Self {
        QElement {
            even: RatFunc::zero(),
            odd: r,
        }
    }

    pub fn constant(c: Rational) -> Self {
        QElement::even(RatFunc::constant(c))
    }

    pub fn zero() -> Self {
        QElement::default()
    }

    pub fn one() -> Self {
        QElement::constant(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    pub fn is_even(&self) -> bool {
        self.odd.is_zero()
    }

    pub fn is_odd(&self) -> bool {
        self.even.is_zero()
    }

    pub fn add(&self, o: &QElement) -> QElement {
        QElement::new(&self.even + &o.even, &self.odd + &o.odd)
    }

    pub fn sub(&self, o: &QElement) -> QElement {
        QElement::new(&self.even - &o.even, &self.odd - &o.odd)
    }

    pub fn neg(&self) -> QElement {
        QElement::new(-&self.even, -&self.odd)
    }

    pub fn scale(&self, c: &Rational) -> QElement {
        QElement::new(self.even.scale(c), self.odd.scale(c))
    }

    /// Value at a point where `z(q) = z` and `z′(q) = zp`.
    pub fn eval_f64(&self, z: f64, zp: f64) -> f64 {
        let e = if self.even.is_zero() { 0.0 } else { self.even.eval_f64(z) };
        let o = if self.odd.is_zero() { 0.0 } else { self.odd.eval_f64(z) };
        e + o * zp
    }
}

impl fmt::Display for QElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] + [{}] z'", self.even, self.odd)
    }
}

/// Normal-ordered `Σ_k c_k D^k`, zero coefficients never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QOperator {
    coeffs: BTreeMap<usize, QElement>,
}

impl QOperator {
    pub fn zero() -> Self {
        QOperator::default()
    }

    pub fn mult(c: QElement) -> Self {
        let mut out = QOperator::zero();
        out.add_term(0, &c);
        out
    }

    pub fn identity() -> Self {
        QOperator::mult(QElement::one())
    }

    /// `D`.
    pub fn d() -> Self {
        let mut out = QOperator::zero();
        out.add_term(1, &QElement::one());
        out
    }

    pub fn coeff(&self, k: usize) -> QElement {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &QElement)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn order(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, k: usize, c: &QElement) {
        if c.is_zero() {
            return;
        }
        let sum = match self.coeffs.get(&k) {
            Some(old) => old.add(c),
            None => c.clone(),
        };
        if sum.is_zero() {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, sum);
        }
    }

    pub fn add(&self, o: &QOperator) -> QOperator {
        let mut out = self.clone();
        for (k, c) in &o.coeffs {
            out.add_term(*k, c);
        }
        out
    }

    pub fn sub(&self, o: &QOperator) -> QOperator {
        let mut out = self.clone();
        for (k, c) in &o.coeffs {
            out.add_term(*k, &c.neg());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> QOperator {
        let mut out = QOperator::zero();
        for (k, x) in &self.coeffs {
            out.add_term(*k, &x.scale(c));
        }
        out
    }

    /// Every coefficient is even (parity 0) or odd (parity 1) times `D^k`
    /// counted with `D` odd; `None` for mixed parity.
    pub fn parity(&self) -> Option<usize> {
        let mut seen = None;
        for (k, c) in &self.coeffs {
            for (part, p) in [(&c.even, 0), (&c.odd, 1)] {
                if part.is_zero() {
                    continue;
                }
                let total = (p + k) % 2;
                match seen {
                    None => seen = Some(total),
                    Some(s) if s != total => return None,
                    _ => {}
                }
            }
        }
        Some(seen.unwrap_or(0))
    }
}

impl Serialize for QOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m: BTreeMap<String, &QElement> =
            self.coeffs.iter().map(|(k, c)| (k.to_string(), c)).collect();
        m.serialize(s)
    }
}

impl fmt::Display for QOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .rev()
            .map(|(k, c)| format!("({c}) D^{k}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The quadratic extension fixed by `A(z)`.
#[derive(Clone, Debug)]
pub struct QAlgebra {
    a: Poly,
    two_a: RatFunc,
    a_prime: RatFunc,
}

impl QAlgebra {
    pub fn new(a: Poly) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::Domain("A(z) vanishes identically".into()));
        }
        Ok(QAlgebra {
            two_a: RatFunc::from_poly(a.scale(&int(2))),
            a_prime: RatFunc::from_poly(a.deriv()),
            a,
        })
    }

    pub fn a(&self) -> &Poly {
        &self.a
    }

    /// `z′`.
    pub fn z_prime(&self) -> QElement {
        QElement::odd(RatFunc::one())
    }

    /// `z′^k`, reduced through `z′² = 2A`.
    pub fn z_prime_pow(&self, k: u32) -> QElement {
        let even_part = self.two_a.pow(k / 2);
        if k % 2 == 0 {
            QElement::even(even_part)
        } else {
            QElement::odd(even_part)
        }
    }

    /// `1/z′ = z′/(2A)`.
    pub fn z_prime_inv(&self) -> QElement {
        QElement::odd(self.two_a.inv().expect("A is nonzero"))
    }

    /// `(x_e y_e + 2A x_o y_o) + (x_e y_o + x_o y_e) z′`.
    pub fn mul(&self, x: &QElement, y: &QElement) -> QElement {
        let oo = &x.odd * &y.odd;
        QElement::new(
            &(&x.even * &y.even) + &(&self.two_a * &oo),
            &(&x.even * &y.odd) + &(&x.odd * &y.even),
        )
    }

    /// `(e − o z′)/(e² − 2A o²)`.
    pub fn inv(&self, x: &QElement) -> Result<QElement> {
        let norm = &(&x.even * &x.even) - &(&self.two_a * &(&x.odd * &x.odd));
        let ni = norm.inv().map_err(|_| Error::DivisionByZero)?;
        Ok(QElement::new(&x.even * &ni, -&(&x.odd * &ni)))
    }

    /// `d/dq`: `D(e + o z′) = (2A o′ + A′ o) + e′ z′`.
    pub fn deriv(&self, x: &QElement) -> QElement {
        QElement::new(
            &(&self.two_a * &x.odd.deriv()) + &(&self.a_prime * &x.odd),
            x.even.deriv(),
        )
    }

    pub fn nth_deriv(&self, x: &QElement, n: usize) -> QElement {
        (0..n).fold(x.clone(), |acc, _| self.deriv(&acc))
    }

    /// `X ∘ Y`, normal ordered via `D^k c = Σ_i C(k,i) D^i(c) D^{k−i}`.
    pub fn compose(&self, x: &QOperator, y: &QOperator) -> QOperator {
        let mut out = QOperator::zero();
        let max_k = x.order().unwrap_or(0);
        for (j, b) in &y.coeffs {
            let mut derivs = Vec::with_capacity(max_k + 1);
            derivs.push(b.clone());
            for _ in 0..max_k {
                let next = self.deriv(derivs.last().unwrap());
                derivs.push(next);
            }
            for (k, a) in &x.coeffs {
                for (i, bi) in derivs.iter().enumerate().take(k + 1) {
                    if bi.is_zero() {
                        continue;
                    }
                    let c = self.mul(a, bi).scale(&binomial(*k, i));
                    out.add_term(k - i + j, &c);
                }
            }
        }
        out
    }

    /// Left product of a list of operators, leftmost first.
    pub fn product(&self, factors: &[QOperator]) -> QOperator {
        factors
            .iter()
            .fold(QOperator::identity(), |acc, f| self.compose(&acc, f))
    }

    /// `c · X`.
    pub fn left_mul(&self, c: &QElement, x: &QOperator) -> QOperator {
        let mut out = QOperator::zero();
        for (k, a) in &x.coeffs {
            out.add_term(*k, &self.mul(c, a));
        }
        out
    }

    /// `Σ_k (−1)^k D^k ∘ c_k`.
    pub fn transpose(&self, x: &QOperator) -> QOperator {
        let mut out = QOperator::zero();
        for (k, c) in &x.coeffs {
            let sign = if k % 2 == 0 { int(1) } else { int(-1) };
            let mut d = c.clone();
            for i in 0..=*k {
                if !d.is_zero() {
                    out.add_term(k - i, &d.scale(&(&sign * binomial(*k, i))));
                }
                if i < *k {
                    d = self.deriv(&d);
                }
            }
        }
        out
    }

    /// `∂_z = (1/z′) D`.
    pub fn dz(&self) -> QOperator {
        let mut out = QOperator::zero();
        out.add_term(1, &self.z_prime_inv());
        out
    }

    /// A z-space operator rewritten in `D`.
    pub fn from_z_operator(&self, l: &LinDiffOp) -> QOperator {
        let dz = self.dz();
        let top = l.order().unwrap_or(0);
        let mut power = QOperator::identity();
        let mut out = QOperator::zero();
        for k in 0..=top {
            let c = l.coeff(k);
            if !c.is_zero() {
                out = out.add(&self.left_mul(&QElement::even(c), &power));
            }
            if k < top {
                power = self.compose(&power, &dz);
            }
        }
        out
    }

    /// `e^{𝒲} X e^{−𝒲}` given `g = 𝒲′`, i.e. `D ↦ D − g`.
    pub fn conjugate(&self, x: &QOperator, g: &QElement) -> QOperator {
        let shifted = QOperator::d().sub(&QOperator::mult(g.clone()));
        let top = x.order().unwrap_or(0);
        let mut power = QOperator::identity();
        let mut out = QOperator::zero();
        for k in 0..=top {
            let c = x.coeff(k);
            if !c.is_zero() {
                out = out.add(&self.left_mul(&c, &power));
            }
            if k < top {
                power = self.compose(&power, &shifted);
            }
        }
        out
    }
}

/// `E`, `W`, `F_α` helpers and the assembled physical operators.
#[derive(Clone, Debug)]
pub struct PhysicalSystem {
    pub ctx: ParamContext,
    pub alg: QAlgebra,
    pub pair: GaugedPair,
}

/// Which partner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn factor(self) -> Rational {
        match self {
            Sign::Minus => int(-1),
            Sign::Plus => int(1),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Minus => write!(f, "-"),
            Sign::Plus => write!(f, "+"),
        }
    }
}

impl PhysicalSystem {
    pub fn new(ctx: &ParamContext) -> Result<Self> {
        ctx.check_charges()?;
        let pair = susybuild::build_gauged_pair(ctx)?;
        let alg = QAlgebra::new(pair.parts.a.clone())?;
        Ok(PhysicalSystem {
            ctx: ctx.clone(),
            alg,
            pair,
        })
    }

    /// `E = z″/z′ = A′ z′/(2A)`.
    pub fn e(&self) -> QElement {
        self.alg.mul(
            &QElement::even(RatFunc::from_poly(self.alg.a().deriv())),
            &self.alg.z_prime_inv(),
        )
    }

    /// `W = −Q/z′`.
    pub fn w(&self) -> QElement {
        self.alg
            .mul(&QElement::even(-&self.pair.q_poly_part), &self.alg.z_prime_inv())
    }

    /// `F_α = f′(z;α) z′ / f(z;α)`.
    pub fn f_q(&self, alpha: &Rational) -> QElement {
        QElement::odd(f_log_deriv(alpha))
    }

    /// `𝒲^±′ = (N−1)/2 E ∓ W`.
    pub fn gauge_derivative(&self, sign: Sign) -> QElement {
        let half_nm1 = (self.ctx.n_rat() - int(1)) / int(2);
        self.e()
            .scale(&half_nm1)
            .sub(&self.w().scale(&sign.factor()))
    }

    /// Order-0 part of `H^±`, even by construction.
    pub fn potential(&self, sign: Sign) -> Result<QElement> {
        let alg = &self.alg;
        let nn = self.ctx.n_rat();
        let e = self.e();
        let w = self.w();
        let e_p = alg.deriv(&e);
        let w_p = alg.deriv(&w);
        let half = Rational::one() / int(2);
        let nm1 = &nn - int(1);

        let mut v = alg.mul(&w, &w).scale(&half);
        let bracket = e_p
            .sub(&alg.mul(&e, &e).scale(&(&nm1 / int(2))))
            .sub(&w_p.scale(&int(2)))
            .sub(&alg.mul(&e, &w).scale(&int(2)));
        v = v.sub(&bracket.scale(&(&nm1 / int(4))));
        v = v.sub(&QElement::even(self.pair.c_func.clone()));
        v = v.add(&w_p.scale(&(sign.factor() * &nn / int(2))));
        if sign == Sign::Plus {
            let wt = &self.pair.w_coeff;
            // z″ = A′, z′² = 2A
            let z_pp = RatFunc::from_poly(alg.a().deriv());
            let two_a = RatFunc::from_poly(alg.a().scale(&int(2)));
            v = v.add(&QElement::even(&(&z_pp * wt) + &(&two_a * &wt.deriv())));
        }
        if !v.is_even() {
            return Err(Error::Consistency(format!(
                "odd residue in the H{sign} potential: {}",
                v.odd
            )));
        }
        Ok(v)
    }

    /// `H^± = −½ D² + V^±`.
    pub fn hamiltonian(&self, sign: Sign) -> Result<QOperator> {
        let mut h = QOperator::zero();
        h.add_term(2, &QElement::constant(-(Rational::one() / int(2))));
        h.add_term(0, &self.potential(sign)?);
        Ok(h)
    }

    /// `P^±` from the product displays.
    pub fn supercharge(&self, sign: Sign) -> Result<QOperator> {
        let alg = &self.alg;
        let a = &self.ctx.alpha;
        let n = self.ctx.enn as i64;
        let e = self.e();
        let w = self.w();
        let outer = QElement::even(f_ratio(a, &(a + int(n))));
        let mut factors = Vec::with_capacity(n as usize + 1);
        match sign {
            Sign::Minus => {
                factors.push(QOperator::mult(outer));
                for k in (0..n).rev() {
                    let hi = a + int(k + 1);
                    let m = QElement::even(f_ratio(&hi, &(a + int(k))));
                    let shift = w
                        .sub(&self.f_q(&hi))
                        .add(&e.scale(&(int(n - 1 - 2 * k) / int(2))));
                    let first = QOperator::d().add(&QOperator::mult(shift));
                    factors.push(alg.left_mul(&m, &first));
                }
            }
            Sign::Plus => {
                for k in (0..n).rev() {
                    let top = a + int(n - k);
                    let r = QElement::even(f_ratio(&top, &(a + int(n - k - 1))));
                    let shift = w
                        .neg()
                        .add(&self.f_q(&top))
                        .add(&e.scale(&(int(n - 1 - 2 * k) / int(2))));
                    let first = QOperator::d().add(&QOperator::mult(shift));
                    factors.push(alg.compose(&first, &QOperator::mult(r)));
                }
                factors.push(QOperator::mult(outer));
            }
        }
        let p = alg.product(&factors);
        if p.parity() != Some(self.ctx.enn as usize % 2) {
            return Err(Error::Consistency(format!(
                "P{sign} does not have pure parity N mod 2"
            )));
        }
        Ok(p)
    }

    /// `z′^N · z_part` of the gauged charge, rewritten in `D`.
    pub fn gauged_charge_in_q(&self, sign: Sign) -> Result<QOperator> {
        let charge = match sign {
            Sign::Minus => susybuild::build_p_minus(&self.ctx)?,
            Sign::Plus => susybuild::build_p_plus(&self.ctx)?,
        };
        let zq = self.alg.from_z_operator(&charge.z_part);
        Ok(self
            .alg
            .left_mul(&self.alg.z_prime_pow(charge.prefactor_exponent), &zq))
    }
}

/// Build `H^±` for a context.
pub fn build_physical_h(ctx: &ParamContext, sign: Sign) -> Result<QOperator> {
    PhysicalSystem::new(ctx)?.hamiltonian(sign)
}

/// Build `P^±` for a context.
pub fn build_physical_p(ctx: &ParamContext, sign: Sign) -> Result<QOperator> {
    PhysicalSystem::new(ctx)?.supercharge(sign)
}

/// Outcome of the exact physical-space identities for one context.
#[derive(Clone, Debug, Serialize)]
pub struct IntertwiningReport {
    #[serde(with = "pq")]
    pub alpha: Rational,
    pub enn: u32,
    pub minus_relation_zero: bool,
    pub plus_relation_zero: bool,
    pub transpose_relation: bool,
    pub gauge_route_hamiltonians: bool,
    pub gauge_route_charges: bool,
    pub first_order_vanishes: bool,
    /// Highest order carrying a nonzero residual coefficient, if any.
    pub offending: Option<String>,
}

impl IntertwiningReport {
    pub fn passed(&self) -> bool {
        self.minus_relation_zero
            && self.plus_relation_zero
            && self.transpose_relation
            && self.gauge_route_hamiltonians
            && self.gauge_route_charges
            && self.first_order_vanishes
    }
}

fn describe_residual(name: &str, r: &QOperator) -> Option<String> {
    r.order()
        .map(|k| format!("{name}: D^{k} coefficient {}", r.coeff(k)))
}

/// `P⁻H⁻ − H⁺P⁻ = 0`, `P⁺H⁺ − H⁻P⁺ = 0`, `P⁺ = (−1)^N (P⁻)ᵀ`, and the
/// gauge transforms of `H^±`, `P^±` back to the z-space constructions.
pub fn verify_intertwining(ctx: &ParamContext) -> Result<IntertwiningReport> {
    let sys = PhysicalSystem::new(ctx)?;
    let alg = &sys.alg;
    let hm = sys.hamiltonian(Sign::Minus)?;
    let hp = sys.hamiltonian(Sign::Plus)?;
    let pm = sys.supercharge(Sign::Minus)?;
    let pp = sys.supercharge(Sign::Plus)?;

    let r_minus = alg.compose(&pm, &hm).sub(&alg.compose(&hp, &pm));
    let r_plus = alg.compose(&pp, &hp).sub(&alg.compose(&hm, &pp));

    let t = alg.transpose(&pm);
    let t = if ctx.enn % 2 == 0 { t } else { t.scale(&int(-1)) };
    let transpose_relation = t == pp;

    let g_minus = sys.gauge_derivative(Sign::Minus);
    let g_plus = sys.gauge_derivative(Sign::Plus);
    let gauge_route_hamiltonians = alg.conjugate(&hm, &g_minus) == alg.from_z_operator(&sys.pair.h_minus)
        && alg.conjugate(&hp, &g_plus) == alg.from_z_operator(&sys.pair.h_plus);
    let gauge_route_charges = alg.conjugate(&pm, &g_minus) == sys.gauged_charge_in_q(Sign::Minus)?
        && alg.conjugate(&pp, &g_plus) == sys.gauged_charge_in_q(Sign::Plus)?;

    let offending = describe_residual("P-H- - H+P-", &r_minus)
        .or_else(|| describe_residual("P+H+ - H-P+", &r_plus));
    Ok(IntertwiningReport {
        alpha: ctx.alpha.clone(),
        enn: ctx.enn,
        minus_relation_zero: r_minus.is_zero(),
        plus_relation_zero: r_plus.is_zero(),
        transpose_relation,
        gauge_route_hamiltonians,
        gauge_route_charges,
        first_order_vanishes: hm.coeff(1).is_zero() && hp.coeff(1).is_zero(),
        offending,
    })
}

/// Human-readable one-liner for a QOperator's coefficient at `D^k`.
pub fn coeff_string(op: &QOperator, k: usize) -> String {
    let c = op.coeff(k);
    format!("even = {}, odd = {}", c.even, c.odd)
}

/// Rational constant of an even element, if it is one.
pub fn as_constant(x: &QElement) -> Option<Rational> {
    if x.is_even() {
        x.even.as_constant()
    } else {
        None
    }
}

/// `p/q` string of a rational constant element, for reports.
pub fn constant_string(x: &QElement) -> Option<String> {
    as_constant(x).map(|c| to_pq(&c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::frac;

    fn alg_linear() -> QAlgebra {
        QAlgebra::new(Poly::from_ints(&[0, 2])).unwrap()
    }

    #[test]
    fn z_prime_squares_to_two_a() {
        let alg = alg_linear();
        let zp = alg.z_prime();
        assert_eq!(alg.mul(&zp, &zp), QElement::even(RatFunc::from_poly(Poly::from_ints(&[0, 4]))));
        assert_eq!(alg.mul(&alg.z_prime_inv(), &zp), QElement::one());
    }

    #[test]
    fn derivatives() {
        let alg = alg_linear();
        let z = QElement::even(RatFunc::from_poly(Poly::z()));
        assert_eq!(alg.deriv(&z), alg.z_prime());
        assert_eq!(alg.deriv(&alg.z_prime()), QElement::constant(int(2)));
    }

    #[test]
    fn example1_e_is_one_over_q() {
        // z = q², z′ = 2q: E = 1/q = 2/z′ = z′/(2z)
        let ctx = ParamContext::example1(int(2), 3).unwrap();
        let sys = PhysicalSystem::new(&ctx).unwrap();
        let want = QElement::odd(RatFunc::new(Poly::one(), Poly::from_ints(&[0, 2])).unwrap());
        assert_eq!(sys.e(), want);
    }

    #[test]
    fn transpose_basics() {
        let alg = alg_linear();
        assert_eq!(alg.transpose(&QOperator::d()), QOperator::d().scale(&int(-1)));
        let c = QOperator::mult(alg.z_prime());
        assert_eq!(alg.transpose(&c), c);
    }

    #[test]
    fn intertwining_example1() {
        let ctx = ParamContext::example1(int(2), 3).unwrap();
        let r = verify_intertwining(&ctx).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn intertwining_generic() {
        let ctx = ParamContext::new(frac(7, 3), 3)
            .unwrap()
            .with_weights([int(1), frac(1, 2), frac(-1, 3), frac(1, 5)])
            .with_c0(frac(2, 7));
        let r = verify_intertwining(&ctx).unwrap();
        assert!(r.passed(), "{r:?}");
    }
}
