use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Linear differential operator `Σ_k c_k(z) ∂^k` with rational-function
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LinDiffOp {
    coeffs: BTreeMap<usize, RatFunc>,
}

pub(crate) fn binomial(n: usize, k: usize) -> Rational {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

impl LinDiffOp {
    pub fn zero() -> Self {
        LinDiffOp::default()
    }

    pub fn identity() -> Self {
        LinDiffOp::mult(RatFunc::one())
    }

    /// Multiplication by `r`.
    pub fn mult(r: RatFunc) -> Self {
        LinDiffOp::term(0, r)
    }

    pub fn mult_poly(p: Poly) -> Self {
        LinDiffOp::mult(RatFunc::from_poly(p))
    }

    pub fn constant(c: Rational) -> Self {
        LinDiffOp::mult(RatFunc::constant(c))
    }

    /// `∂`.
    pub fn d() -> Self {
        LinDiffOp::term(1, RatFunc::one())
    }

    /// `r ∂^k`.
    pub fn term(k: usize, r: RatFunc) -> Self {
        let mut coeffs = BTreeMap::new();
        if !r.is_zero() {
            coeffs.insert(k, r);
        }
        LinDiffOp { coeffs }
    }

    /// Builds from `(order, coefficient)` pairs, summing repeats.
    pub fn from_terms<I: IntoIterator<Item = (usize, RatFunc)>>(terms: I) -> Self {
        let mut out = LinDiffOp::zero();
        for (k, r) in terms {
            out.add_term(k, &r);
        }
        out
    }

    fn add_term(&mut self, k: usize, r: &RatFunc) {
        if r.is_zero() {
            return;
        }
        let sum = match self.coeffs.get(&k) {
            Some(c) => c + r,
            None => r.clone(),
        };
        if sum.is_zero() {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, sum);
        }
    }

    pub fn coeff(&self, k: usize) -> RatFunc {
        self.coeffs.get(&k).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &RatFunc)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn order(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Constant value when the operator is multiplication by a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.coeffs.len() == 1 {
            return self.coeffs.get(&0).and_then(RatFunc::as_constant);
        }
        None
    }

    /// True when every coefficient is a polynomial.
    pub fn has_polynomial_coeffs(&self) -> bool {
        self.coeffs.values().all(RatFunc::is_polynomial)
    }

    pub fn scale(&self, c: &Rational) -> LinDiffOp {
        LinDiffOp::from_terms(self.coeffs.iter().map(|(k, r)| (*k, r.scale(c))))
    }

    /// Left multiplication `r ∘ L`.
    pub fn left_mul(&self, r: &RatFunc) -> LinDiffOp {
        LinDiffOp::from_terms(self.coeffs.iter().map(|(k, c)| (*k, r * c)))
    }

    /// Right multiplication `L ∘ r`.
    pub fn right_mul(&self, r: &RatFunc) -> LinDiffOp {
        self.compose(&LinDiffOp::mult(r.clone()))
    }

    pub fn apply(&self, f: &RatFunc) -> RatFunc {
        let mut acc = RatFunc::zero();
        let mut deriv = f.clone();
        let mut at = 0usize;
        for (k, c) in &self.coeffs {
            while at < *k {
                deriv = deriv.deriv();
                at += 1;
            }
            acc = &acc + &(c * &deriv);
        }
        acc
    }

    /// Application to a polynomial; the result is rational in general.
    pub fn apply_poly(&self, p: &Poly) -> RatFunc {
        self.apply(&RatFunc::from_poly(p.clone()))
    }

    /// `self ∘ other` via Leibniz: `∂^i b = Σ_k C(i,k) b^{(k)} ∂^{i-k}`.
    pub fn compose(&self, other: &LinDiffOp) -> LinDiffOp {
        let mut out = LinDiffOp::zero();
        for (j, b) in &other.coeffs {
            let max_i = self.order().unwrap_or(0);
            let mut derivs = Vec::with_capacity(max_i + 1);
            derivs.push(b.clone());
            for _ in 0..max_i {
                let next = derivs.last().unwrap().deriv();
                derivs.push(next);
            }
            for (i, a) in &self.coeffs {
                for (k, bk) in derivs.iter().enumerate().take(i + 1) {
                    if bk.is_zero() {
                        continue;
                    }
                    let c = (a * bk).scale(&binomial(*i, k));
                    out.add_term(i - k + j, &c);
                }
            }
        }
        out
    }

    /// Formal transpose `Σ_k (-1)^k ∂^k ∘ c_k`.
    pub fn transpose(&self) -> LinDiffOp {
        let mut out = LinDiffOp::zero();
        for (k, c) in &self.coeffs {
            let sign = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
            let mut d = c.clone();
            // ∂^k c = Σ_m C(k,m) c^{(k-m)} ∂^m ; walk derivative order upward.
            for r in 0..=*k {
                let m = k - r;
                if !d.is_zero() {
                    out.add_term(m, &d.scale(&(&sign * binomial(*k, r))));
                }
                if r < *k {
                    d = d.deriv();
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> LinDiffOp {
        (0..e).fold(LinDiffOp::identity(), |acc, _| acc.compose(self))
    }

    /// Operator with `z` replaced by `-z`, i.e. `∂ -> -∂`.
    pub fn reflect(&self) -> LinDiffOp {
        LinDiffOp::from_terms(self.coeffs.iter().map(|(k, c)| {
            let r = c.reflect();
            (*k, if k % 2 == 1 { -r } else { r })
        }))
    }

    /// Coefficients at `z` in `f64`, indexed by order.
    pub fn eval_coeffs_f64(&self, z: f64) -> Vec<(usize, f64)> {
        self.coeffs.iter().map(|(k, c)| (*k, c.eval_f64(z))).collect()
    }

    /// Multiplies all coefficients through by a common polynomial so the
    /// result has polynomial coefficients; returns that multiplier as well.
    pub fn clear_denominators(&self) -> (Poly, LinDiffOp) {
        let mut l = Poly::one();
        for c in self.coeffs.values() {
            let g = l.gcd(c.den());
            l = (&l * c.den()).exact_div(&g).unwrap();
        }
        let op = self.left_mul(&RatFunc::from_poly(l.clone()));
        (l, op)
    }
}

impl Add for &LinDiffOp {
    type Output = LinDiffOp;
    fn add(self, rhs: &LinDiffOp) -> LinDiffOp {
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_term(*k, c);
        }
        out
    }
}

impl Sub for &LinDiffOp {
    type Output = LinDiffOp;
    fn sub(self, rhs: &LinDiffOp) -> LinDiffOp {
        self + &(-rhs)
    }
}

impl Neg for &LinDiffOp {
    type Output = LinDiffOp;
    fn neg(self) -> LinDiffOp {
        LinDiffOp {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Mul for &LinDiffOp {
    type Output = LinDiffOp;
    fn mul(self, rhs: &LinDiffOp) -> LinDiffOp {
        self.compose(rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LinDiffOp {
            type Output = LinDiffOp;
            fn $m(self, rhs: LinDiffOp) -> LinDiffOp {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LinDiffOp> for LinDiffOp {
            type Output = LinDiffOp;
            fn $m(self, rhs: &LinDiffOp) -> LinDiffOp {
                (&self).$m(rhs)
            }
        }
        impl $tr<LinDiffOp> for &LinDiffOp {
            type Output = LinDiffOp;
            fn $m(self, rhs: LinDiffOp) -> LinDiffOp {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LinDiffOp {
    type Output = LinDiffOp;
    fn neg(self) -> LinDiffOp {
        -&self
    }
}

impl From<RatFunc> for LinDiffOp {
    fn from(r: RatFunc) -> Self {
        LinDiffOp::mult(r)
    }
}

impl fmt::Display for LinDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "[{c}]")?,
                1 => write!(f, "[{c}] d")?,
                _ => write!(f, "[{c}] d^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LinDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinDiffOp({self})")
    }
}

impl Serialize for LinDiffOp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m: BTreeMap<String, &RatFunc> =
            self.coeffs.iter().map(|(k, c)| (k.to_string(), c)).collect();
        m.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinDiffOp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = BTreeMap::<String, RatFunc>::deserialize(d)?;
        let mut terms = Vec::with_capacity(m.len());
        for (k, c) in m {
            let k: usize = k
                .parse()
                .map_err(|_| serde::de::Error::custom(Error::Parse(format!("bad order {k:?}"))))?;
            terms.push((k, c));
        }
        Ok(LinDiffOp::from_terms(terms))
    }
}

/// Parses an operator from its JSON text.
pub fn op_from_json(s: &str) -> Result<LinDiffOp> {
    Ok(serde_json::from_str(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::int;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn commutator_of_d_and_z_is_one() {
        let d = LinDiffOp::d();
        let z = LinDiffOp::mult_poly(Poly::z());
        let comm = &(&d * &z) - &(&z * &d);
        assert_eq!(comm, LinDiffOp::identity());
    }

    #[test]
    fn transpose_of_first_order() {
        // (a ∂ + b)^T = -a ∂ + (b - a')
        let a = RatFunc::from_poly(p(&[0, 0, 1]));
        let b = RatFunc::from_poly(p(&[3, 1]));
        let l = LinDiffOp::from_terms([(1, a.clone()), (0, b.clone())]);
        let t = l.transpose();
        assert_eq!(t.coeff(1), -&a);
        assert_eq!(t.coeff(0), &b - &a.deriv());
    }

    #[test]
    fn apply_second_order() {
        let l = LinDiffOp::from_terms([(2, RatFunc::one()), (0, RatFunc::constant(int(-1)))]);
        // (∂^2 - 1) z^3 = 6z - z^3
        assert_eq!(l.apply_poly(&p(&[0, 0, 0, 1])), RatFunc::from_poly(p(&[0, 6, 0, -1])));
    }

    #[test]
    fn json_uses_order_keys() {
        let l = LinDiffOp::from_terms([(1, RatFunc::one()), (0, RatFunc::from_poly(p(&[0, 2])))]);
        let s = serde_json::to_string(&l).unwrap();
        assert_eq!(
            s,
            r#"{"0":{"num":["0/1","2/1"],"den":["1/1"]},"1":{"num":["1/1"],"den":["1/1"]}}"#
        );
        assert_eq!(op_from_json(&s).unwrap(), l);
    }
}
