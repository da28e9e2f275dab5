use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{int, parse_rational, to_f64, to_pq, Rational};

/// Dense univariate polynomial in `z` over the rationals.
///
/// `coeffs[k]` is the coefficient of `z^k`; trailing zeros are never stored,
/// so the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `c z^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        Poly::monomial(Rational::one(), 1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    /// Lowest power carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lc = self.leading();
        if lc.is_one() {
            return self.clone();
        }
        self.scale(&lc.recip())
    }

    pub fn deriv(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    pub fn nth_deriv(&self, n: usize) -> Poly {
        (0..n).fold(self.clone(), |p, _| p.deriv())
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// `p(-z)`.
    pub fn reflect(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `p(q(z))` by Horner's scheme.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::constant(c.clone());
        }
        acc
    }

    pub fn eval(&self, z: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn eval_f64(&self, z: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * z + to_f64(c);
        }
        acc
    }

    /// Coefficients converted once to `f64`, ascending powers.
    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let Some(nd) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if nd < dd {
            return (Poly::zero(), self.clone());
        }
        let inv_lc = divisor.leading().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] * &inv_lc;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Quotient when `divisor` divides `self` exactly.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return Poly::one();
        }
        let a = IntPoly::primitive_from(self);
        let b = IntPoly::primitive_from(other);
        if modular_coprime(&a, &b) {
            return Poly::one();
        }
        primitive_prs_gcd(a, b).to_poly().monic()
    }

    /// Common denominator of the coefficients together with the integer
    /// numerators, used by the exact linear algebra.
    pub fn integer_content_split(&self) -> (BigInt, Vec<BigInt>) {
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        (den, nums)
    }
}

// ---------------------------------------------------------------------------
// gcd machinery over Z[z]

#[derive(Clone, Debug)]
struct IntPoly(Vec<BigInt>);

impl IntPoly {
    fn primitive_from(p: &Poly) -> IntPoly {
        let (_, nums) = p.integer_content_split();
        IntPoly(nums).primitive()
    }

    fn degree(&self) -> usize {
        self.0.len() - 1
    }

    fn primitive(mut self) -> IntPoly {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        let mut g = BigInt::zero();
        for c in &self.0 {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if !g.is_zero() && !g.is_one() {
            for c in &mut self.0 {
                *c /= &g;
            }
        }
        if self.0.last().is_some_and(|c| c.is_negative()) {
            for c in &mut self.0 {
                *c = -&*c;
            }
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Pseudo-remainder of `self` by `b`, content removed along the way.
    fn prem(&self, b: &IntPoly) -> IntPoly {
        let db = b.degree();
        let lb = b.0.last().unwrap().clone();
        let mut r = self.0.clone();
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            let shift = dr - db;
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (j, bc) in b.0.iter().enumerate() {
                r[shift + j] -= &lr * bc;
            }
            debug_assert!(r[dr].is_zero());
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
            r = IntPoly(r).primitive().0;
        }
        IntPoly(r).primitive()
    }

    fn to_poly(&self) -> Poly {
        Poly::new(self.0.iter().map(|c| Rational::from_integer(c.clone())).collect())
    }
}

fn primitive_prs_gcd(a: IntPoly, b: IntPoly) -> IntPoly {
    let (mut a, mut b) = if a.degree() >= b.degree() { (a, b) } else { (b, a) };
    while !b.is_zero() {
        let r = a.prem(&b);
        a = b;
        b = r;
    }
    a
}

const MOD_P: u64 = (1 << 61) - 1;

fn to_mod(x: &BigInt) -> u64 {
    let m = BigInt::from(MOD_P);
    let r = x.mod_floor(&m);
    u64::try_from(r).unwrap()
}

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MOD_P as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64) -> u64 {
    powmod(a, MOD_P - 2)
}

/// Sufficient test for coprimality: if the images modulo a prime not dividing
/// either leading coefficient are coprime, so are the integer polynomials.
fn modular_coprime(a: &IntPoly, b: &IntPoly) -> bool {
    let ma: Vec<u64> = a.0.iter().map(to_mod).collect();
    let mb: Vec<u64> = b.0.iter().map(to_mod).collect();
    if *ma.last().unwrap() == 0 || *mb.last().unwrap() == 0 {
        return false;
    }
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    let (mut x, mut y) = (ma, mb);
    while !y.is_empty() {
        // x mod y
        let inv = invmod(*y.last().unwrap());
        while x.len() >= y.len() && !x.is_empty() {
            let c = mulmod(*x.last().unwrap(), inv);
            let shift = x.len() - y.len();
            for (j, yc) in y.iter().enumerate() {
                let t = mulmod(c, *yc);
                x[shift + j] = (x[shift + j] + MOD_P - t) % MOD_P;
            }
            trim(&mut x);
        }
        std::mem::swap(&mut x, &mut y);
    }
    x.len() == 1
}

// ---------------------------------------------------------------------------
// arithmetic

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            match (self.coeffs.get(k), rhs.coeffs.get(k)) {
                (Some(a), Some(b)) => out.push(a + b),
                (Some(a), None) => out.push(a.clone()),
                (None, Some(b)) => out.push(b.clone()),
                (None, None) => unreachable!(),
            }
        }
        Poly::new(out)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        // Accumulate over a common denominator: one BigInt product per term
        // instead of a normalized rational product.
        let (da, na) = self.integer_content_split();
        let (db, nb) = rhs.integer_content_split();
        let mut acc = vec![BigInt::zero(); na.len() + nb.len() - 1];
        for (i, a) in na.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in nb.iter().enumerate() {
                acc[i + j] += a * b;
            }
        }
        let den = da * db;
        Poly::new(
            acc.into_iter()
                .map(|c| Rational::new(c, den.clone()))
                .collect(),
        )
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Self {
        Poly::constant(c)
    }
}

// ---------------------------------------------------------------------------
// display and serde

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_mag = k == 0 || !mag.is_one();
            if show_mag {
                if mag.is_integer() || k == 0 {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(to_pq).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        let coeffs = v
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Poly::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::frac;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn trailing_zeros_are_stripped() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[0]).degree(), None);
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]); // z^2 - 1
        let b = p(&[-1, 1]); // z - 1
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, p(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&b), b);
        // coprime pair
        assert!(p(&[2, 2, 1]).gcd(&p(&[20, 8, 1])).is_one());
        // shared quadratic factor with rational coefficients
        let f = Poly::new(vec![frac(1, 2), int(3), int(1)]);
        let g1 = &f * &p(&[5, 1]);
        let g2 = &f * &p(&[-3, 0, 7]);
        assert_eq!(g1.gcd(&g2), f.monic());
    }

    #[test]
    fn display_reads_naturally() {
        assert_eq!(p(&[6, 4, 1]).to_string(), "z^2 + 4z + 6");
        assert_eq!(p(&[0, -2, 0, 1]).to_string(), "z^3 - 2z");
        assert_eq!(Poly::new(vec![frac(1, 2)]).to_string(), "1/2");
    }

    #[test]
    fn json_is_ascending_pq_strings() {
        let q = Poly::new(vec![frac(1, 2), int(0), int(-3)]);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, r#"["1/2","0/1","-3/1"]"#);
        let back: Poly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn reflect_and_compose() {
        let q = p(&[1, 2, 3]);
        assert_eq!(q.reflect(), p(&[1, -2, 3]));
        assert_eq!(q.compose(&p(&[0, -1])), q.reflect());
    }
}
