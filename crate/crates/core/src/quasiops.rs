//! Second-order operators preserving the two X2 spaces, their action
//! coefficients, and the assembled gauged Hamiltonians `H̃⁻` and `Ȟ⁺`.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::rational::{int, pq, to_pq, Rational};
use crate::exactalg::{LinDiffOp, Poly, RatFunc};
use crate::susybuild;
use crate::x2spaces::{
    check_f_param, chi_bar, f_poly, f_rat, o1_plus, o2_plus, phi_tilde, Basis, ParamContext,
};

fn p(coeffs: Vec<Rational>) -> Poly {
    Poly::new(coeffs)
}

/// Which X2 space an operator preserves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// `J1..J4`, preserving `⟨φ̃_1, …, φ̃_N⟩`.
    J,
    /// `K1..K4`, preserving `⟨χ̄_1, …, χ̄_N⟩`.
    K,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::J => write!(f, "J"),
            Family::K => write!(f, "K"),
        }
    }
}

impl Family {
    /// `n`-th member of the family's polynomial basis at parameter `α`.
    pub fn element(self, n: u32, alpha: &Rational) -> Poly {
        match self {
            Family::J => phi_tilde(n, alpha),
            Family::K => chi_bar(n, alpha),
        }
    }
}

/// Operator in the split form
/// `p4 ∂² + p3 ∂ + p2 + (1/f(z; α)) (u ∂ + v)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitOp {
    pub second: Poly,
    pub first: Poly,
    pub zeroth: Poly,
    pub frac_first: Poly,
    pub frac_zeroth: Poly,
    #[serde(with = "pq")]
    pub f_alpha: Rational,
}

impl SplitOp {
    pub fn to_op(&self) -> LinDiffOp {
        let f = f_poly(&self.f_alpha);
        let over_f = |q: &Poly| RatFunc::new(q.clone(), f.clone()).expect("f is monic");
        LinDiffOp::from_terms([
            (2, RatFunc::from_poly(self.second.clone())),
            (1, RatFunc::from_poly(self.first.clone())),
            (0, RatFunc::from_poly(self.zeroth.clone())),
            (1, over_f(&self.frac_first)),
            (0, over_f(&self.frac_zeroth)),
        ])
    }

    /// Only the fractional part `(1/f)(u ∂ + v)`.
    pub fn fractional_op(&self) -> LinDiffOp {
        let f = f_poly(&self.f_alpha);
        let over_f = |q: &Poly| RatFunc::new(q.clone(), f.clone()).expect("f is monic");
        LinDiffOp::from_terms([(1, over_f(&self.frac_first)), (0, over_f(&self.frac_zeroth))])
    }

    fn scale(&self, c: &Rational) -> SplitOp {
        SplitOp {
            second: self.second.scale(c),
            first: self.first.scale(c),
            zeroth: self.zeroth.scale(c),
            frac_first: self.frac_first.scale(c),
            frac_zeroth: self.frac_zeroth.scale(c),
            f_alpha: self.f_alpha.clone(),
        }
    }
}

impl fmt::Display for SplitOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] d^2 + [{}] d + [{}] + (1/f(z;{})) ([{}] d + [{}])",
            self.second,
            self.first,
            self.zeroth,
            self.f_alpha,
            self.frac_first,
            self.frac_zeroth
        )
    }
}

fn j_form(p4: Poly, p3: Poly, p2: Poly, p1: Poly, alpha: &Rational) -> SplitOp {
    SplitOp {
        second: p4,
        first: p3,
        zeroth: p2,
        frac_zeroth: -&p1,
        frac_first: p1,
        f_alpha: alpha.clone(),
    }
}

/// `2α + N − 1`.
fn m_minus(a: &Rational, nn: &Rational) -> Rational {
    int(2) * a + nn - int(1)
}

/// `2α − N − 1`.
fn m_plus(a: &Rational, nn: &Rational) -> Rational {
    int(2) * a - nn - int(1)
}

fn nonzero(x: &Rational, what: &str) -> Result<()> {
    if x.is_zero() {
        return Err(Error::Domain(format!("{what} vanishes")));
    }
    Ok(())
}

/// `B₄⁻(z; α, N)`.
pub fn b4_minus(a: &Rational, nn: &Rational) -> Poly {
    let one = Rational::one();
    let a2 = a * a;
    let a3 = &a2 * a;
    let a4 = &a3 * a;
    let n2 = nn * nn;
    let n3 = &n2 * nn;
    let am1 = a - &one;
    p(vec![
        &am1 * (int(2) * &a4 + (int(5) * nn + &one) * &a3
            + (int(4) * &n2 + int(3) * nn + int(13)) * &a2
            + (&n3 + int(2) * &n2 - int(7) * nn - int(36)) * a
            - int(8) * (nn - &one) * (nn + int(2))),
        &am1 * (int(7) * &a3 + (int(14) * nn - int(15)) * &a2
            + (int(3) * nn + &one) * (int(3) * nn - int(8)) * a
            + int(2) * (nn - int(4)) * (&n2 - &one)),
        int(3) * &a3 + (int(9) * nn - int(19)) * &a2 + (int(5) * &n2 - int(18) * nn + int(24)) * a
            + (nn - &one) * (&n2 - int(2) * nn + int(8)),
        int(2) * nn * m_minus(a, nn),
    ])
}

/// `D₄⁻(z; α, N)`.
pub fn d4_minus(a: &Rational, nn: &Rational) -> Poly {
    let one = Rational::one();
    let a2 = a * a;
    let a3 = &a2 * a;
    let n2 = nn * nn;
    p(vec![
        a * (&a3 + (int(2) * nn + int(3)) * &a2 + (&n2 - int(2) * nn - int(9)) * a
            - int(2) * (nn - &one) * (nn + int(2))),
        &a3 + (int(2) * nn + int(3)) * &a2 + (&n2 - int(5) * nn - int(16)) * a
            - int(4) * (nn - &one) * (nn + int(2)),
    ])
}

/// `B₄⁺(z; β, N)`, written through `α = β − N`.
pub fn b4_plus(beta: &Rational, nn: &Rational) -> Poly {
    let a = &(beta - nn);
    let one = Rational::one();
    let a2 = a * a;
    let a3 = &a2 * a;
    let a4 = &a3 * a;
    let n2 = nn * nn;
    let anm1 = a + nn - &one;
    p(vec![
        -(&anm1
            * (int(2) * &a4 + (int(3) * nn - int(7)) * &a3
                + (&n2 - int(8) * nn - int(11)) * &a2
                - (&n2 + int(31) * nn - int(36)) * a
                - int(4) * (nn - &one) * (int(3) * nn - int(4)))),
        -(&anm1
            * (int(7) * &a3 + int(7) * (nn - &one) * &a2 + (int(2) * &n2 - int(9) * nn + int(16)) * a
                - int(2) * (nn - &one) * (nn - int(4)))),
        -(int(3) * &a3 - int(9) * &a2 - int(2) * (int(2) * &n2 + nn - int(2)) * a
            - int(2) * &n2 * (nn - &one)),
        int(2) * nn * m_minus(a, nn),
    ])
}

/// `D₁₄⁺(z; β, N)`, written through `α = β − N`.
pub fn d14_plus(beta: &Rational, nn: &Rational) -> Poly {
    let a = &(beta - nn);
    let one = Rational::one();
    let a2 = a * a;
    let a3 = &a2 * a;
    p(vec![
        (a + nn)
            * (&a3 + (nn + int(3)) * &a2 + (int(8) * nn - int(9)) * a
                + (nn - &one) * (int(3) * nn - int(4))),
        &a3 + (nn + int(3)) * &a2 + (int(11) * nn - int(16)) * a
            + int(4) * (nn - &one) * (nn - int(2)),
    ])
}

/// `D₂₄⁺(z; β, N)`, written through `α = β − N`.
pub fn d24_plus(beta: &Rational, nn: &Rational) -> Poly {
    let a = &(beta - nn);
    let one = Rational::one();
    let a2 = a * a;
    let a3 = &a2 * a;
    p(vec![
        (a + nn) * (a + nn - &one) * (&a2 + int(3) * a + int(2) * (nn - &one)),
        &a3 + (nn + int(3)) * &a2 + (int(8) * nn - int(9)) * a
            + (nn - &one) * (int(3) * nn - int(4)),
    ])
}

/// Split form of `J_i` at the context's `α` and `N`.
pub fn j_split(i: usize, ctx: &ParamContext) -> Result<SplitOp> {
    ctx.check_alpha()?;
    let a = &ctx.alpha;
    let nn = &ctx.n_rat();
    let one = Rational::one();
    let z = Poly::z();
    let am1 = a - &one;
    Ok(match i {
        1 => j_form(
            z.clone(),
            p(vec![a - int(3), int(-1)]),
            Poly::zero(),
            p(vec![int(4) * &am1 * a, int(4) * &am1]),
            a,
        ),
        2 => j_form(
            p(vec![&am1 * (a + nn - &one), int(0), one.clone()]),
            -p(vec![&am1 * (int(3) * a + int(3) * nn - int(7)), nn + &one, one.clone()]),
            p(vec![int(0), nn + &one]),
            p(vec![
                -(int(4) * &am1 * &am1 * m_minus(a, nn)),
                -(int(4) * &am1 * (int(2) * a + nn - int(3))),
            ]),
            a,
        ),
        3 => j_form(
            p(vec![int(0), int(0), int(2) * a + nn - &one, one.clone()]),
            p(vec![
                int(4) * &am1 * (a + nn + &one),
                int(3) * a * a + (nn - int(2)) * a - int(2) * (nn + &one),
                a - nn - int(2),
            ]),
            p(vec![int(0), -((nn + &one) * (a - int(2)))]),
            p(vec![
                -(int(4) * &am1 * a * &am1 * (a + nn + &one)),
                -(int(4) * &am1 * (a * a + nn * a - int(2) * nn - int(2))),
            ]),
            a,
        ),
        4 => {
            let m = m_minus(a, nn);
            nonzero(&m, "2*alpha + N - 1 (required by J4)")?;
            let lead = int(3) * a * a + (int(3) * nn - int(2)) * a + nn * (nn - &one);
            let body = j_form(
                p(vec![int(0), int(0), int(0), lead, m.clone()]),
                -b4_minus(a, nn),
                p(vec![
                    int(0),
                    (nn + &one)
                        * &am1
                        * (int(3) * a * a + int(2) * (int(3) * nn - int(8)) * a
                            + int(2) * (nn - int(4)) * (nn - &one)),
                    nn * (nn + &one) * &m,
                ]),
                d4_minus(a, nn).scale(&(int(4) * &am1 * &am1)),
                a,
            );
            body.scale(&m.recip())
        }
        _ => return Err(Error::Domain(format!("operator index {i} outside 1..4"))),
    })
}

/// Split form of `K_i` at the context's `α` and `N`.
pub fn k_split(i: usize, ctx: &ParamContext) -> Result<SplitOp> {
    ctx.check_alpha()?;
    let a = &ctx.alpha;
    let nn = &ctx.n_rat();
    let one = Rational::one();
    let am1 = a - &one;
    let frac = |first: Poly, zeroth: Poly| (first, zeroth);
    let (second, first, zeroth, (fu, fv), scale) = match i {
        1 => (
            Poly::z(),
            p(vec![-(a + int(3)), one.clone()]),
            Poly::zero(),
            frac(
                p(vec![int(4) * &am1 * a, int(4) * &am1]),
                p(vec![int(4) * a * &am1, int(4) * a]),
            ),
            None,
        ),
        2 => {
            let c = int(-4) * &am1;
            (
                p(vec![&am1 * (a - nn - &one), int(0), one.clone()]),
                p(vec![&am1 * (int(3) * a - int(3) * nn + &one), -(nn + int(3)), one.clone()]),
                p(vec![int(0), -(nn + &one)]),
                frac(
                    p(vec![&am1 * m_plus(a, nn), int(2) * a - nn - int(3)]).scale(&c),
                    p(vec![
                        int(2) * a * a - (nn + int(3)) * a + int(2) * (nn + &one),
                        m_plus(a, nn),
                    ])
                    .scale(&c),
                ),
                None,
            )
        }
        3 => {
            let c = int(-4) * &am1;
            (
                p(vec![int(0), int(0), int(2) * a - nn - &one, one.clone()]),
                -p(vec![
                    -(int(4) * &am1 * (a - nn + &one)),
                    int(3) * a * a - (nn + int(2)) * a - int(2) * (nn - &one),
                    a + nn,
                ]),
                p(vec![int(0), (nn + &one) * a]),
                frac(
                    p(vec![
                        a * &am1 * (a - nn + &one),
                        a * a - nn * a + int(2) * nn - int(2),
                    ])
                    .scale(&c),
                    p(vec![a * a * (a - nn), a * (a - nn + &one)]).scale(&c),
                ),
                None,
            )
        }
        4 => {
            let m = m_plus(a, nn);
            nonzero(&m, "2*alpha - N - 1 (required by K4)")?;
            let lead = int(3) * a * a - (int(3) * nn + int(2)) * a + nn * (nn + &one);
            let c = int(4) * &am1;
            (
                p(vec![int(0), int(0), int(0), lead, m.clone()]),
                -b4_plus(a, nn),
                p(vec![
                    int(0),
                    -((nn + &one)
                        * (int(3) * a * a * a - int(3) * (int(2) * nn + int(3)) * a * a
                            + int(2) * (nn * nn + int(7) * nn + int(2)) * a
                            - int(4) * nn * (nn + &one))),
                    nn * (nn + &one) * &m,
                ]),
                frac(
                    d14_plus(a, nn).scale(&(&c * &am1)),
                    d24_plus(a, nn).scale(&(&c * a)),
                ),
                Some(m.recip()),
            )
        }
        _ => return Err(Error::Domain(format!("operator index {i} outside 1..4"))),
    };
    let op = SplitOp {
        second,
        first,
        zeroth,
        frac_first: fu,
        frac_zeroth: fv,
        f_alpha: a.clone(),
    };
    Ok(match scale {
        Some(s) => op.scale(&s),
        None => op,
    })
}

/// `J_i` as a differential operator.
pub fn build_j(i: usize, ctx: &ParamContext) -> Result<LinDiffOp> {
    Ok(j_split(i, ctx)?.to_op())
}

/// `K_i` as a differential operator, parameter `α` taken from `ctx`.
pub fn build_k(i: usize, ctx: &ParamContext) -> Result<LinDiffOp> {
    Ok(k_split(i, ctx)?.to_op())
}

pub fn split(family: Family, i: usize, ctx: &ParamContext) -> Result<SplitOp> {
    match family {
        Family::J => j_split(i, ctx),
        Family::K => k_split(i, ctx),
    }
}

pub fn build(family: Family, i: usize, ctx: &ParamContext) -> Result<LinDiffOp> {
    Ok(split(family, i, ctx)?.to_op())
}

/// Coefficients of an operator image in the family basis, keyed by index
/// shift relative to the input element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActionExpansion {
    pub family: Family,
    pub index: usize,
    pub n: u32,
    pub terms: Vec<ActionTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActionTerm {
    pub shift: i32,
    #[serde(with = "pq")]
    pub coeff: Rational,
}

impl ActionExpansion {
    pub fn coeff(&self, shift: i32) -> Rational {
        self.terms
            .iter()
            .find(|t| t.shift == shift)
            .map(|t| t.coeff.clone())
            .unwrap_or_else(Rational::zero)
    }

    fn from_pairs(family: Family, index: usize, n: u32, pairs: Vec<(i32, Rational)>) -> Self {
        let mut pairs = pairs;
        pairs.sort_by(|x, y| y.0.cmp(&x.0));
        let terms = pairs
            .into_iter()
            .filter(|(s, c)| !c.is_zero() && n as i32 + s >= 1)
            .map(|(shift, coeff)| ActionTerm { shift, coeff })
            .collect();
        ActionExpansion {
            family,
            index,
            n,
            terms,
        }
    }
}

fn unavailable(what: &str) -> Error {
    Error::CoefficientFormUnavailable(format!("{what} vanishes"))
}

fn div_or_unavailable(x: Rational, d: &Rational, what: &str) -> Result<Rational> {
    if d.is_zero() {
        return Err(unavailable(what));
    }
    Ok(x / d)
}

/// `s⁻(n, α, N)`.
pub fn s_minus(n: &Rational, a: &Rational, nn: &Rational) -> Rational {
    let n2 = n * n;
    let n3 = &n2 * n;
    let n4 = &n3 * n;
    int(2) * a * a * a
        + (&n2 - (nn - int(4)) * n - nn - int(7)) * a * a
        + (int(2) * &n3 - (int(2) * nn + int(1)) * &n2 + (nn - int(12)) * n + int(5) * nn + int(9)) * a
        + &n4
        - (nn + int(3)) * &n3
        + (int(2) * nn - int(1)) * &n2
        + (nn + int(9)) * n
        - int(4) * (nn + int(1))
}

/// `(2α+N−1) t₁⁻(n, α, N)`.
pub fn t1_minus_scaled(n: &Rational, a: &Rational, nn: &Rational) -> Rational {
    let one = Rational::one();
    let n2 = n * n;
    let n3 = &n2 * n;
    let nn2 = nn * nn;
    let a2 = a * a;
    let a3 = &a2 * a;
    let a4 = &a3 * a;
    let a5 = &a4 * a;
    int(3) * &a5 + (int(3) * n + int(6) * nn - int(20)) * &a4
        - (int(3) * &n2 - (int(9) * nn - int(26)) * n - int(2) * &nn2 + int(27) * nn - int(50)) * &a3
        - (int(3) * &n3 + int(4) * &n2 - (int(3) * &nn2 - int(35) * nn + int(52)) * n
            + int(7) * &nn2
            - int(49) * nn
            + int(52))
            * &a2
        - ((int(3) * nn - int(2)) * &n3 + (int(7) * nn - int(10)) * &n2
            + int(2) * (int(4) * &nn2 - int(21) * nn + int(18)) * n
            - int(2) * (nn - &one) * (int(5) * nn - int(12)))
            * a
        - (nn - &one) * (n - &one) * (nn * &n2 + int(2) * (nn - int(2)) * n - int(4) * (nn - &one))
}

/// `(2α+N−1) t₂⁻(n, α, N)`.
pub fn t2_minus_scaled(n: &Rational, a: &Rational, nn: &Rational) -> Rational {
    let one = Rational::one();
    let n2 = n * n;
    let n3 = &n2 * n;
    let nn2 = nn * nn;
    let nn3 = &nn2 * nn;
    let a2 = a * a;
    let a3 = &a2 * a;
    let a4 = &a3 * a;
    let a5 = &a4 * a;
    (int(7) * n + &one) * &a5
        + int(2) * (int(7) * &n2 + (int(7) * nn - int(8)) * n + int(2) * nn + int(6)) * &a4
        + (int(7) * &n3 + int(28) * (nn - &one) * &n2 + (int(9) * &nn2 - int(19) * nn + int(48)) * n
            + int(3) * &nn2
            - int(19) * nn
            - int(49))
            * &a3
        + ((int(14) * nn - int(11)) * &n3 + int(18) * (&nn2 - int(2) * nn + int(2)) * &n2
            + (int(2) * &nn3 - int(7) * &nn2 + nn - int(97)) * n
            - int(19) * &nn2
            + int(7) * nn
            + int(52))
            * &a2
        + ((nn - &one) * (int(9) * nn - int(4)) * &n3
            + int(2) * (int(2) * nn - int(7)) * (&nn2 + int(3)) * &n2
            - (int(2) * &nn3 + int(15) * &nn2 + int(13) * nn - int(70)) * n
            - int(2) * (nn - &one) * (&nn2 - int(5) * nn - int(8)))
            * a
        + int(2) * (nn - &one) * n * (n - &one) * (nn * (nn - &one) * n - int(4) * (nn + int(2)))
}

/// `s⁺(n, α, N)`.
pub fn s_plus(n: &Rational, a: &Rational, nn: &Rational) -> Rational {
    let n2 = n * n;
    let n3 = &n2 * n;
    let n4 = &n3 * n;
    int(2) * a * a * a - (&n2 - (nn - int(2)) * n - nn + int(3)) * a * a
        + (int(2) * &n3 - (int(2) * nn + int(1)) * &n2 - (int(3) * nn + int(2)) * n + nn + int(3)) * a
        - &n4
        + (nn + int(1)) * &n3
        + (int(2) * nn + int(3)) * &n2
        + (nn + int(1)) * n
        - int(2) * (nn + int(1))
}

/// `(2α−N−1) t₁⁺(n, α, N)`.
pub fn t1_plus_scaled(n: &Rational, a: &Rational, nn: &Rational) -> Rational {
    let one = Rational::one();
    let n2 = n * n;
    let n3 = &n2 * n;
    let nn2 = nn * nn;
    let a2 = a * a;
    let a3 = &a2 * a;
    let a4 = &a3 * a;
    let a5 = &a4 * a;
    int(3) * &a5 - (int(3) * n + int(6) * nn + int(20)) * &a4
        - (int(3) * &n2 - (int(9) * nn + int(26)) * n - (int(2) * &nn2 + int(27) * nn + int(50))) * &a3
        + (int(3) * &n3 - int(4) * &n2 - (int(3) * &nn2 + int(35) * nn + int(52)) * n
            - int(7) * &nn2
            - int(49) * nn
            - int(52))
            * &a2
        - ((int(3) * nn + int(2)) * &n3 - (int(7) * nn + int(10)) * &n2
            - int(2) * (int(4) * &nn2 + int(21) * nn + int(18)) * n
            - int(2) * (nn + &one) * (int(5) * nn + int(12)))
            * a
        + (nn + &one) * (nn * &n3 - (nn + int(4)) * &n2 - int(2) * (int(3) * nn + int(4)) * n
            - int(4) * (nn + &one))
}

/// `(2α−N−1) t₂⁺(n, α, N)`.
pub fn t2_plus_scaled(n: &Rational, a: &Rational, nn: &Rational) -> Rational {
    let one = Rational::one();
    let n2 = n * n;
    let n3 = &n2 * n;
    let nn2 = nn * nn;
    let nn3 = &nn2 * nn;
    let a2 = a * a;
    let a3 = &a2 * a;
    let a4 = &a3 * a;
    let a5 = &a4 * a;
    (int(7) * n + &one) * &a5
        - int(2) * (int(7) * &n2 + (int(7) * nn + int(3)) * n + int(2) * nn - int(11)) * &a4
        + (int(7) * &n3 + int(4) * (int(7) * nn + int(4)) * &n2 + (int(9) * &nn2 + int(7) * nn - int(42)) * n
            + int(3) * &nn2
            - int(21) * nn
            + &one)
            * &a3
        - ((int(14) * nn + int(11)) * &n3 + int(2) * (int(9) * &nn2 + int(8) * nn - int(10)) * &n2
            + (int(2) * &nn3 + &nn2 - int(29) * nn - int(7)) * n
            - (nn + &one) * (int(11) * nn - int(8)))
            * &a2
        + (nn + &one)
            * (n - &one)
            * ((int(9) * nn + int(4)) * &n2 + (int(4) * &nn2 + int(7) * nn - int(10)) * n
                + int(2) * nn * (nn + &one))
            * a
        - int(2) * nn * (nn + &one) * (nn + &one) * &n2 * (n - &one)
}

/// Expansion coefficients from the closed-form action formulas alone.
pub fn closed_form_expansion(
    family: Family,
    i: usize,
    n: u32,
    ctx: &ParamContext,
) -> Result<ActionExpansion> {
    let a = &ctx.alpha;
    let nn = &ctx.n_rat();
    let nr = &int(n as i64);
    let one = Rational::one();
    let am1 = a - &one;
    let pairs: Vec<(i32, Rational)> = match (family, i) {
        (Family::J, 1) => vec![(0, -(nr + &one)), (-1, (nr - &one) * (a + nr))],
        (Family::J, 2) => {
            let d = (a + nr - int(2)) * (a + nr - &one);
            let what = "(alpha+n-2)(alpha+n-1) in the J2 action";
            vec![
                (1, div_or_unavailable(-((nr - nn) * (a + nr - int(2)) * (a + nr - int(2))), &d, what)?),
                (0, div_or_unavailable(s_minus(nr, a, nn), &d, what)?),
                (
                    -1,
                    div_or_unavailable(
                        -((nr - &one)
                            * &am1
                            * (a + nn - &one)
                            * (int(3) * a * a + int(6) * (nr - &one) * a + int(3) * nr * nr
                                - int(6) * nr
                                + int(4))),
                        &d,
                        what,
                    )?,
                ),
                (
                    -2,
                    div_or_unavailable(
                        (nr - &one) * (nr - int(2)) * &am1 * (a + nn - &one) * (a + nr - &one) * (a + nr),
                        &d,
                        what,
                    )?,
                ),
            ]
        }
        (Family::J, 3) => vec![
            (1, (nr - nn) * (a + nr - int(2))),
            (
                0,
                (int(3) * nr + &one) * a * a
                    + (int(2) * nr * nr + (nn - int(4)) * nr + int(3) * nn + int(2)) * a
                    + (nn - &one) * nr * (nr - &one)
                    - int(4) * (nn + &one),
            ),
        ],
        (Family::J, 4) => {
            let m = m_minus(a, nn);
            if m.is_zero() {
                return Err(unavailable("2*alpha + N - 1 in the J4 action"));
            }
            let d = (a + nr - &one) * (a + nr);
            let what = "(alpha+n-1)(alpha+n) in the J4 action";
            vec![
                (
                    2,
                    div_or_unavailable(
                        (nr - nn) * (nr - nn + &one) * (a + nr - int(2)) * (a + nr - &one),
                        &d,
                        what,
                    )?,
                ),
                (1, div_or_unavailable(-((nr - nn) * t1_minus_scaled(nr, a, nn) / &m), &d, what)?),
                (0, div_or_unavailable(-(&am1 * t2_minus_scaled(nr, a, nn) / &m), &d, what)?),
                (
                    -1,
                    div_or_unavailable(
                        -((nr - &one) * a * &am1 * (a + nn - &one) * (a + nn) * (a + nr) * (a + nr)),
                        &d,
                        what,
                    )?,
                ),
            ]
        }
        (Family::K, 1) => vec![(0, nr + &one), (-1, -((nr - &one) * (a - nr - &one)))],
        (Family::K, 2) => {
            let d = (a - nr + int(2)) * (a - nr + &one) * (a - nr) * (a - nr - &one);
            let what = "(alpha-n+2)(alpha-n+1)(alpha-n)(alpha-n-1) in the K2 action";
            let amn1 = a - nr - &one;
            let amn = a - nr;
            vec![
                (
                    1,
                    div_or_unavailable(
                        (nr - nn) * (a - nr + int(2)) * (a - nr + &one) * (a - nr + &one) * &amn,
                        &d,
                        what,
                    )?,
                ),
                (
                    0,
                    div_or_unavailable(
                        -((a - nr + int(2)) * (a - nr + &one) * s_plus(nr, a, nn)),
                        &d,
                        what,
                    )?,
                ),
                (
                    -1,
                    div_or_unavailable(
                        (nr - &one)
                            * &am1
                            * (a - nn - &one)
                            * &amn1
                            * &amn1
                            * (int(3) * a * a - int(6) * (nr - &one) * a + int(3) * nr * nr
                                - int(6) * nr
                                + int(4)),
                        &d,
                        what,
                    )?,
                ),
                (
                    -2,
                    div_or_unavailable(
                        (nr - &one) * (nr - int(2)) * &am1 * (a - nn - &one) * &amn * &amn * &amn1 * &amn1,
                        &d,
                        what,
                    )?,
                ),
            ]
        }
        (Family::K, 3) => vec![
            (1, -((nr - nn) * (a - nr + &one))),
            (
                0,
                -((int(3) * nr + &one) * a * a
                    - (int(2) * nr * nr + nn * nr + int(3) * nn - int(2)) * a
                    + (nn + &one) * nr * (nr - &one)),
            ),
        ],
        (Family::K, 4) => {
            let m = m_plus(a, nn);
            if m.is_zero() {
                return Err(unavailable("2*alpha - N - 1 in the K4 action"));
            }
            let d = (a - nr - int(2)) * (a - nr - &one) * (a - nr) * (a - nr + &one);
            let what = "(alpha-n-2)(alpha-n-1)(alpha-n)(alpha-n+1) in the K4 action";
            let amn = a - nr;
            let amn1 = a - nr - &one;
            let amp1 = a - nr + &one;
            vec![
                (
                    2,
                    div_or_unavailable(
                        (nr - nn) * (nr - nn + &one) * &amn * &amn * &amp1 * &amp1,
                        &d,
                        what,
                    )?,
                ),
                (
                    1,
                    div_or_unavailable((nr - nn) * &amp1 * &amp1 * t1_plus_scaled(nr, a, nn) / &m, &d, what)?,
                ),
                (
                    0,
                    div_or_unavailable(
                        &am1 * (a - nr - int(2)) * &amn1 * t2_plus_scaled(nr, a, nn) / &m,
                        &d,
                        what,
                    )?,
                ),
                (
                    -1,
                    div_or_unavailable(
                        (nr - &one)
                            * a
                            * &am1
                            * (a - nn - &one)
                            * (a - nn)
                            * (a - nr - int(2))
                            * &amn1
                            * &amn1
                            * &amn,
                        &d,
                        what,
                    )?,
                ),
            ]
        }
        _ => return Err(Error::Domain(format!("operator index {i} outside 1..4"))),
    };
    Ok(ActionExpansion::from_pairs(family, i, n, pairs))
}

/// Basis `{e_1, …, e_size}` of the family at the context's `α`.
pub fn family_basis(family: Family, alpha: &Rational, size: u32) -> Result<Basis> {
    Basis::new((1..=size).map(|k| family.element(k, alpha)).collect())
}

/// Expansion coefficients read off by applying the operator and solving
/// for coordinates in `{e_1, …, e_{n+2}}`.
pub fn direct_expansion(
    family: Family,
    i: usize,
    n: u32,
    ctx: &ParamContext,
    op: &LinDiffOp,
    basis: &Basis,
) -> Result<ActionExpansion> {
    let image = op.apply_poly(&family.element(n, &ctx.alpha));
    let coords = basis.membership_rat(&image).ok_or_else(|| {
        Error::Consistency(format!(
            "{family}{i} maps element {n} outside the span of the first {} elements",
            basis.len()
        ))
    })?;
    let pairs = coords
        .into_iter()
        .enumerate()
        .map(|(k, c)| (k as i32 + 1 - n as i32, c))
        .collect();
    Ok(ActionExpansion::from_pairs(family, i, n, pairs))
}

/// Closed-form expansion, certified against direct application. Errors with
/// `CoefficientFormUnavailable` when a displayed denominator vanishes.
pub fn action_expansion(family: Family, i: usize, n: u32, ctx: &ParamContext) -> Result<ActionExpansion> {
    let closed = closed_form_expansion(family, i, n, ctx)?;
    let op = build(family, i, ctx)?;
    let basis = family_basis(family, &ctx.alpha, n + 2)?;
    let direct = direct_expansion(family, i, n, ctx, &op, &basis)?;
    if closed != direct {
        return Err(Error::Consistency(format!(
            "{family}{i} action at n = {n}, alpha = {}: closed form {:?} != direct {:?}",
            to_pq(&ctx.alpha),
            closed.terms,
            direct.terms
        )));
    }
    Ok(closed)
}

/// Decomposes a fractional part `(1/f)(u ∂ + v)` as `(1/f)(p O₁⁺ + r O₂⁺)`,
/// requiring polynomial `p` and `r`.
pub fn o_decomposition(op: &SplitOp) -> Result<(Poly, Poly)> {
    let a = &op.f_alpha;
    let one = Rational::one();
    let f = f_poly(a);
    let (u, v) = (&op.frac_first, &op.frac_zeroth);
    // det [[z, α−1], [−α, z+2α−2]] = f
    let p_num = &(u * &p(vec![int(2) * a - int(2), one.clone()])) - &v.scale(&(a - &one));
    let r_num = &(v * &Poly::z()) + &u.scale(a);
    let pp = p_num
        .exact_div(&f)
        .ok_or_else(|| Error::Consistency("O1+ coefficient is not polynomial".into()))?;
    let rr = r_num
        .exact_div(&f)
        .ok_or_else(|| Error::Consistency("O2+ coefficient is not polynomial".into()))?;
    let rebuilt = &o1_plus(a).left_mul(&RatFunc::from_poly(pp.clone()))
        + &o2_plus(a).left_mul(&RatFunc::from_poly(rr.clone()));
    let target = LinDiffOp::from_terms([
        (1, RatFunc::from_poly(u.clone())),
        (0, RatFunc::from_poly(v.clone())),
    ]);
    if rebuilt != target {
        return Err(Error::Consistency("O+ decomposition does not rebuild the fractional part".into()));
    }
    Ok((pp, rr))
}

/// Polynomials of the minus-side Hamiltonian, and of the plus side once
/// computed.
#[derive(Clone, Debug, Serialize)]
pub struct HamiltonianParts {
    pub a: Poly,
    pub b_tilde: Poly,
    pub c_tilde: Poly,
    pub d: Poly,
    pub plus: Option<PlusParts>,
}

/// `B̃⁺, D₁⁺, C̃⁺` (with `c₀⁺` removed), `D₂⁺` and the computed `c₀⁺`.
#[derive(Clone, Debug, Serialize)]
pub struct PlusParts {
    pub b_plus_tilde: Poly,
    pub d1_plus: Poly,
    pub c_plus_tilde: Poly,
    pub d2_plus: Poly,
    #[serde(with = "pq")]
    pub c0_plus: Rational,
}

/// `a4 · x / (2α+N−1)`, zero without division when `a4 = 0`.
fn a4_term(ctx: &ParamContext, x: Poly) -> Result<Poly> {
    if ctx.a[3].is_zero() {
        return Ok(Poly::zero());
    }
    let m = m_minus(&ctx.alpha, &ctx.n_rat());
    nonzero(&m, "2*alpha + N - 1 (required when a4 != 0)")?;
    Ok(x.scale(&(&ctx.a[3] / m)))
}

/// Closed forms of `A, B̃, C̃, D`.
pub fn minus_parts(ctx: &ParamContext) -> Result<HamiltonianParts> {
    ctx.check_minus()?;
    let a = &ctx.alpha;
    let nn = &ctx.n_rat();
    let one = Rational::one();
    let am1 = a - &one;
    let [a1, a2, a3, _] = &ctx.a;
    let m = m_minus(a, nn);

    let mut big_a = p(vec![
        &am1 * (a + nn - &one) * a2,
        a1.clone(),
        &m * a3 + a2,
        a3.clone(),
        Rational::zero(),
    ]);
    big_a = &big_a
        + &a4_term(
            ctx,
            p(vec![
                int(0),
                int(0),
                int(0),
                int(3) * a * a + (int(3) * nn - int(2)) * a + nn * (nn - &one),
                m.clone(),
            ]),
        )?;

    let b_tilde = &p(vec![
        int(4) * &am1 * (a + nn + &one) * a3 - &am1 * (int(3) * a + int(3) * nn - int(7)) * a2
            + (a - int(3)) * a1,
        (int(3) * a * a + (nn - int(2)) * a - int(2) * (nn + &one)) * a3 - (nn + &one) * a2 - a1,
        (a - nn - int(2)) * a3 - a2,
    ]) + &a4_term(ctx, -b4_minus(a, nn))?;

    let c_tilde = &p(vec![
        ctx.c0.clone(),
        (nn + &one) * (-(a - int(2)) * a3 + a2),
    ]) + &a4_term(
        ctx,
        p(vec![
            int(0),
            (nn + &one)
                * &am1
                * (int(3) * a * a + int(2) * (int(3) * nn - int(8)) * a + int(2) * (nn - int(4)) * (nn - &one)),
            nn * (nn + &one) * &m,
        ]),
    )?;

    let d = &p(vec![
        -(a * &am1 * (a + nn + &one) * a3) - &am1 * &m * a2 + a * a1,
        -((a * a + nn * a - int(2) * nn - int(2)) * a3 + (int(2) * a + nn - int(3)) * a2 - a1),
    ]) + &a4_term(ctx, d4_minus(a, nn).scale(&am1))?;

    Ok(HamiltonianParts {
        a: big_a,
        b_tilde,
        c_tilde,
        d,
        plus: None,
    })
}

/// `H̃⁻ = −A∂² − [B̃ + 4(α−1)D/f]∂ − C̃ + 4(α−1)D/f` from the closed forms.
pub fn h_minus_from_parts(ctx: &ParamContext, parts: &HamiltonianParts) -> LinDiffOp {
    let four_d = RatFunc::new(
        parts.d.scale(&(int(4) * (&ctx.alpha - int(1)))),
        f_poly(&ctx.alpha),
    )
    .expect("f is monic");
    LinDiffOp::from_terms([
        (2, RatFunc::from_poly(-&parts.a)),
        (1, RatFunc::from_poly(-&parts.b_tilde)),
        (1, -&four_d),
        (0, RatFunc::from_poly(-&parts.c_tilde)),
        (0, four_d),
    ])
}

/// `−Σ a_i J_i − c₀` summed from the built operators.
pub fn h_minus_from_j(ctx: &ParamContext) -> Result<LinDiffOp> {
    let mut h = LinDiffOp::constant(-&ctx.c0);
    for i in 1..=4 {
        let ai = ctx.a(i);
        if ai.is_zero() {
            continue;
        }
        h = &h - &build_j(i, ctx)?.scale(ai);
    }
    Ok(h)
}

/// `H̃⁻` assembled from `J1..J4` and from the closed forms; both must agree.
pub fn build_h_minus(ctx: &ParamContext) -> Result<(LinDiffOp, HamiltonianParts)> {
    let parts = minus_parts(ctx)?;
    let from_j = h_minus_from_j(ctx)?;
    let closed = h_minus_from_parts(ctx, &parts);
    if from_j != closed {
        return Err(Error::Consistency(format!(
            "H-minus from J operators differs from the closed form at alpha = {}",
            to_pq(&ctx.alpha)
        )));
    }
    Ok((from_j, parts))
}

/// Closed forms of `B̃⁺, D₁⁺, C̃⁺ (without c₀⁺), D₂⁺`.
fn plus_closed_forms(ctx: &ParamContext) -> Result<(Poly, Poly, Poly, Poly)> {
    let a = &ctx.alpha;
    let nn = &ctx.n_rat();
    let one = Rational::one();
    let [a1, a2, a3, _] = &ctx.a;
    let beta = a + nn;
    let bm1 = &beta - &one;
    let m = m_minus(a, nn);

    let b_plus_tilde = &p(vec![
        int(4) * &bm1 * (a + &one) * a3 + &bm1 * (int(3) * a + &one) * a2 - (a + nn + int(3)) * a1,
        -((int(3) * a * a + (int(5) * nn - int(2)) * a + int(2) * (nn - &one) * (nn - &one)) * a3
            + (nn + int(3)) * a2
            - a1),
        -((a + int(2) * nn) * a3 - a2),
    ]) + &a4_term(ctx, -b4_plus(&beta, nn))?;

    let d1_plus = &p(vec![
        -(&beta * &bm1 * (a + &one) * a3) - &bm1 * &m * a2 + &beta * a1,
        -((a * a + nn * a + int(2) * nn - int(2)) * a3 + (int(2) * a + nn - int(3)) * a2 - a1),
    ]) + &a4_term(ctx, d14_plus(&beta, nn).scale(&bm1))?;

    let c_plus_tilde = &p(vec![
        Rational::zero(),
        -((nn + &one) * (-(&beta * a3) + a2)),
    ]) + &a4_term(
        ctx,
        p(vec![
            int(0),
            -((nn + &one)
                * (int(3) * a * a * a + int(3) * (nn - int(3)) * a * a
                    - (nn * nn + int(4) * nn - int(4)) * a
                    - nn * nn * (nn - &one))),
            nn * (nn + &one) * &m,
        ]),
    )?;

    let d2_plus = &p(vec![
        -(&bm1
            * (a * &beta * &beta * a3
                + (int(2) * a * a + int(3) * (nn - &one) * a + nn * nn - nn + int(2)) * a2
                - &beta * a1)),
        -(&beta * &bm1 * (a + &one) * a3 + &bm1 * &m * a2 - &beta * a1),
    ]) + &a4_term(ctx, d24_plus(&beta, nn).scale(&(&beta * &bm1)))?;

    Ok((b_plus_tilde, d1_plus, c_plus_tilde, d2_plus))
}

/// `Ȟ⁺ = f_α f_{α+N} H̄⁺ (f_α f_{α+N})⁻¹`, checked against the closed
/// `B⁺, C⁺` forms (which fixes `c₀⁺`) and against `−Σ a_i K_i(α+N) − c₀⁺`.
pub fn build_check_h_plus(ctx: &ParamContext) -> Result<(LinDiffOp, HamiltonianParts)> {
    ctx.check_charges()?;
    let mut parts = minus_parts(ctx)?;
    let pair = susybuild::build_gauged_pair(ctx)?;
    let beta = &ctx.alpha + ctx.n_rat();
    let ff = &f_rat(&ctx.alpha) * &f_rat(&beta);
    let conj = pair.h_plus.left_mul(&ff).right_mul(&ff.inv()?);

    let (bpt, d1p, cpt, d2p) = plus_closed_forms(ctx)?;
    let f_beta = f_poly(&beta);
    let b_plus = &RatFunc::from_poly(bpt.clone())
        + &RatFunc::new(d1p.scale(&(int(4) * (&beta - int(1)))), f_beta.clone())?;
    let c_plus_no_const =
        &RatFunc::from_poly(cpt.clone()) + &RatFunc::new(d2p.scale(&int(4)), f_beta)?;
    let closed = LinDiffOp::from_terms([
        (2, RatFunc::from_poly(-&parts.a)),
        (1, -&b_plus),
        (0, -&c_plus_no_const),
    ]);
    let diff = &conj - &closed;
    let c0_plus = match diff.as_constant() {
        Some(c) => -c,
        None => {
            return Err(Error::Consistency(format!(
                "conjugated H-plus differs from the closed form beyond a constant at alpha = {}: {}",
                to_pq(&ctx.alpha),
                diff
            )))
        }
    };

    // Ȟ⁺ + Σ a_i K_i(α+N) is the constant −c₀⁺.
    let kctx = ctx.at_alpha(beta.clone());
    check_f_param(&beta, "alpha + N")?;
    let mut sum = conj.clone();
    for i in 1..=4 {
        let ai = ctx.a(i);
        if ai.is_zero() {
            continue;
        }
        sum = &sum + &build_k(i, &kctx)?.scale(ai);
    }
    match sum.as_constant() {
        Some(c) if c == -&c0_plus => {}
        _ => {
            return Err(Error::Consistency(format!(
                "H-check-plus is not -sum a_i K_i(alpha+N) - c0+ at alpha = {}",
                to_pq(&ctx.alpha)
            )))
        }
    }

    parts.plus = Some(PlusParts {
        b_plus_tilde: bpt,
        d1_plus: d1p,
        c_plus_tilde: &cpt + &Poly::constant(c0_plus.clone()),
        d2_plus: d2p,
        c0_plus,
    });
    Ok((conj, parts))
}

/// Image coordinates of each basis element `e_n`, `n ≤ size`, under `op`
/// in the basis `{e_1..e_size}`; `None` at the first element mapped outside.
pub fn restricted_columns(op: &LinDiffOp, basis: &Basis) -> Option<Vec<Vec<Rational>>> {
    basis
        .elements()
        .iter()
        .map(|e| basis.membership_rat(&op.apply_poly(e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::frac;

    fn ctx(alpha: Rational, enn: u32) -> ParamContext {
        ParamContext::new(alpha, enn).unwrap()
    }

    #[test]
    fn j1_at_alpha_two() {
        let c = ctx(int(2), 3);
        let j1 = build_j(1, &c).unwrap();
        // z d^2 − (z+1) d + (4(z+2)/f(z;2))(d − 1)
        let f2 = f_poly(&int(2));
        let frac_part = RatFunc::new(Poly::from_ints(&[8, 4]), f2).unwrap();
        let want = LinDiffOp::from_terms([
            (2, RatFunc::from_poly(Poly::z())),
            (1, RatFunc::from_poly(Poly::from_ints(&[-1, -1]))),
            (1, frac_part.clone()),
            (0, -&frac_part),
        ]);
        assert_eq!(j1, want);
        let out = j1.apply_poly(&phi_tilde(1, &int(2)));
        assert_eq!(out, RatFunc::from_poly(phi_tilde(1, &int(2)).scale(&int(-2))));
    }

    #[test]
    fn j1_membership_example() {
        let c = ctx(int(2), 3);
        let basis = family_basis(Family::J, &int(2), 3).unwrap();
        let img = build_j(1, &c).unwrap().apply_poly(&phi_tilde(2, &int(2)));
        assert_eq!(basis.membership_rat(&img), Some(vec![int(4), int(-3), int(0)]));
    }

    #[test]
    fn k1_action_small() {
        let a = frac(11, 3);
        let c = ctx(a.clone(), 4);
        let k1 = build_k(1, &c).unwrap();
        let got = k1.apply_poly(&chi_bar(1, &a));
        assert_eq!(got, RatFunc::from_poly(chi_bar(1, &a).scale(&int(2))));
        let got = k1.apply_poly(&chi_bar(2, &a));
        let want = &chi_bar(2, &a).scale(&int(3)) - &chi_bar(1, &a).scale(&(&a - int(3)));
        assert_eq!(got, RatFunc::from_poly(want));
    }

    #[test]
    fn every_closed_form_matches_direct_application() {
        for a in [frac(7, 3), frac(-13, 5), frac(29, 4)] {
            for enn in [3u32, 4] {
                let c = ctx(a.clone(), enn);
                for fam in [Family::J, Family::K] {
                    for i in 1..=4 {
                        for n in 1..=enn + 2 {
                            action_expansion(fam, i, n, &c).unwrap();
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn k1_fraction_decomposes_over_o_plus() {
        let a = frac(9, 2);
        let c = ctx(a.clone(), 3);
        let (pp, rr) = o_decomposition(&k_split(1, &c).unwrap()).unwrap();
        assert_eq!(pp, Poly::constant(int(4) * (&a - int(1))));
        assert_eq!(rr, Poly::constant(int(4) * &a));
    }

    #[test]
    fn example_patterns_give_expected_a() {
        let c = ParamContext::example1(int(2), 3).unwrap();
        assert_eq!(minus_parts(&c).unwrap().a, Poly::from_ints(&[0, 2]));
        let a = frac(5, 2);
        let c = ParamContext::example2(a.clone(), 4).unwrap();
        let zeta2 = (&a - int(1)) * (&a + int(3));
        let want = Poly::new(vec![zeta2 / int(2), int(0), frac(1, 2)]);
        assert_eq!(minus_parts(&c).unwrap().a, want);
    }

    #[test]
    fn generic_h_minus_two_ways() {
        let c = ctx(frac(7, 3), 4).with_weights([frac(1, 2), int(-2), frac(3, 7), int(5)]).with_c0(frac(1, 9));
        build_h_minus(&c).unwrap();
    }

    #[test]
    fn unavailable_coefficient_form_is_reported() {
        // α + n − 2 = 0 at n = 1, α = 1 is excluded; use α = −1, n = 3.
        let c = ctx(int(-1), 4);
        let err = closed_form_expansion(Family::J, 2, 3, &c).unwrap_err();
        assert!(matches!(err, Error::CoefficientFormUnavailable(_)));
    }
}
