use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::Poly;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Rational function `num/den` kept in canonical form: `gcd(num, den) = 1`
/// and `den` monic. Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Reduces to canonical form; errors on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let lc = den.leading();
        if !lc.is_one() {
            let s = lc.recip();
            num = num.scale(&s);
            den = den.scale(&s);
        }
        RatFunc { num, den }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    /// The constant value when the function is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &RatFunc) -> Result<RatFunc> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &Poly) -> RatFunc {
        self * &RatFunc::from_poly(p.clone())
    }

    pub fn deriv(&self) -> RatFunc {
        if self.is_polynomial() {
            return RatFunc::from_poly(self.num.deriv());
        }
        // (n/d)' = (n'd - nd')/d^2; reduction only needs gcd with d.
        let top = &(&self.num.deriv() * &self.den) - &(&self.num * &self.den.deriv());
        Self::reduce(top, &self.den * &self.den)
    }

    pub fn nth_deriv(&self, n: usize) -> RatFunc {
        (0..n).fold(self.clone(), |r, _| r.deriv())
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// `r(-z)`.
    pub fn reflect(&self) -> RatFunc {
        Self::reduce(self.num.reflect(), self.den.reflect())
    }

    pub fn eval(&self, z: &Rational) -> Result<Rational> {
        let d = self.den.eval(z);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(z) / d)
    }

    /// `NaN`/`inf` at poles.
    pub fn eval_f64(&self, z: f64) -> f64 {
        self.num.eval_f64(z) / self.den.eval_f64(z)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return RatFunc::from_poly(&self.num + &rhs.num);
            }
            return RatFunc::reduce(&self.num + &rhs.num, self.den.clone());
        }
        // Henrici: with g = gcd(d1, d2) the sum is
        // (n1 d2/g + n2 d1/g) / (d1 d2/g), and only g can still cancel.
        let g = self.den.gcd(&rhs.den);
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            let den = &self.den * &rhs.den;
            // gcd(num, d1 d2) = 1 already holds here.
            return RatFunc::normalize_lc(num, den);
        }
        let d1g = self.den.exact_div(&g).unwrap();
        let d2g = rhs.den.exact_div(&g).unwrap();
        let t = &(&self.num * &d2g) + &(&rhs.num * &d1g);
        if t.is_zero() {
            return RatFunc::zero();
        }
        let g2 = t.gcd(&g);
        if g2.is_one() {
            RatFunc::normalize_lc(t, &(&d1g * &d2g) * &g)
        } else {
            let t = t.exact_div(&g2).unwrap();
            let gg = g.exact_div(&g2).unwrap();
            RatFunc::normalize_lc(t, &(&d1g * &d2g) * &gg)
        }
    }
}

impl RatFunc {
    fn normalize_lc(num: Poly, den: Poly) -> RatFunc {
        if num.is_zero() {
            return RatFunc::zero();
        }
        let lc = den.leading();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let s = lc.recip();
            RatFunc {
                num: num.scale(&s),
                den: den.scale(&s),
            }
        }
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.is_polynomial() && rhs.is_polynomial() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        // Cross-cancel: gcd(n1, d2) and gcd(n2, d1) are the only possible
        // common factors of the product.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let cut = |p: &Poly, g: &Poly| if g.is_one() { p.clone() } else { p.exact_div(g).unwrap() };
        let n1 = cut(&self.num, &g1);
        let d2 = cut(&rhs.den, &g1);
        let n2 = cut(&rhs.num, &g2);
        let d1 = cut(&self.den, &g2);
        RatFunc::normalize_lc(&n1 * &n2, &d1 * &d2)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: &RatFunc) -> RatFunc {
                (&self).$m(rhs)
            }
        }
        impl $tr<RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl From<Rational> for RatFunc {
    fn from(c: Rational) -> Self {
        RatFunc::constant(c)
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::one()
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct RatFuncRepr {
    num: Poly,
    den: Poly,
}

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RatFuncRepr {
            num: self.num.clone(),
            den: self.den.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = RatFuncRepr::deserialize(d)?;
        RatFunc::new(r.num, r.den).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::int;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn canonical_form() {
        // (2z^2 - 2)/(4z - 4) = (z + 1)/2
        let r = RatFunc::new(p(&[-2, 0, 2]), p(&[-4, 4])).unwrap();
        assert!(r.is_polynomial());
        assert_eq!(r.num(), &Poly::new(vec![int(1) / int(2), int(1) / int(2)]));
        assert!(RatFunc::new(p(&[1]), Poly::zero()).is_err());
    }

    #[test]
    fn sums_cancel_through_common_factor() {
        // 1/(z-1) - 1/(z+1) - 2/(z^2-1) = 0
        let a = RatFunc::new(p(&[1]), p(&[-1, 1])).unwrap();
        let b = RatFunc::new(p(&[1]), p(&[1, 1])).unwrap();
        let c = RatFunc::new(p(&[2]), p(&[-1, 0, 1])).unwrap();
        assert!((&(&a - &b) - &c).is_zero());
        // 1/(z(z-1)) + 1/(z(z+1)) = 2/((z-1)(z+1))
        let d = RatFunc::new(p(&[1]), p(&[0, -1, 1])).unwrap();
        let e = RatFunc::new(p(&[1]), p(&[0, 1, 1])).unwrap();
        let s = &d + &e;
        assert_eq!(s, RatFunc::new(p(&[2]), p(&[-1, 0, 1])).unwrap());
    }

    #[test]
    fn derivative_of_quotient() {
        // (1/z)' = -1/z^2
        let r = RatFunc::new(p(&[1]), p(&[0, 1])).unwrap();
        assert_eq!(r.deriv(), RatFunc::new(p(&[-1]), p(&[0, 0, 1])).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let r = RatFunc::new(p(&[1, 2]), p(&[3, 0, 2])).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"num":["1/2","1/1"],"den":["3/2","0/1","1/1"]}"#);
        let back: RatFunc = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
