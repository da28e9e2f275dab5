use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational. `num_rational` keeps it reduced with a
/// positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p/q` as a reduced rational. Panics on `q == 0`.
pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Canonical `"p/q"` text form used by the JSON schema (always carries the
/// denominator, so integers print as `"3/1"`).
pub fn to_pq(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `"p/q"`, `"p"` and `"-p/q"`; rejects a zero denominator.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational numerator in {s:?}")))?;
    let q: BigInt = q
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational denominator in {s:?}")))?;
    if q.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(p, q))
}

pub fn to_f64(r: &Rational) -> f64 {
    // Direct conversion overflows for huge numerators/denominators; fall back
    // to scaling by the bit lengths.
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb.max(db) - 900;
    let n = shift_to_f64(r.numer(), shift);
    let d = shift_to_f64(r.denom(), shift);
    n / d
}

fn shift_to_f64(x: &BigInt, shift: i64) -> f64 {
    if shift <= 0 {
        x.to_f64().unwrap_or(f64::NAN)
    } else {
        (x >> (shift as usize)).to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
    }
}

/// Falling factorial `(n-1)(n-2)…(n-m)`, i.e. `Γ(n)/Γ(n-m)`, defined as 0
/// once `n <= m`.
pub fn gamma_ratio(n: u32, m: u32) -> Rational {
    if n <= m {
        return Rational::zero();
    }
    let mut acc = Rational::one();
    for k in 1..=m {
        acc *= int((n - k) as i64);
    }
    acc
}

pub fn is_integer_value(r: &Rational, v: i64) -> bool {
    r.is_integer() && *r.numer() == BigInt::from(v)
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

/// Serde adapter storing a [`Rational`] as its `"p/q"` string.
pub mod pq {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{parse_rational, to_pq, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_pq(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for sequences of rationals as `"p/q"` strings.
pub mod pq_seq {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::{parse_rational, to_pq, Rational};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(to_pq).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serialize-only adapter for rational matrices as nested `"p/q"` arrays.
pub mod pq_matrix {
    use serde::{Serialize, Serializer};

    use super::{to_pq, Rational};

    pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        m.iter()
            .map(|row| row.iter().map(to_pq).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

/// Serializes an optional rational as `"p/q"` or `null`.
pub mod opt_pq {
    use serde::{Serialize, Serializer};

    use super::{to_pq, Rational};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        r.as_ref().map(to_pq).serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pq_round_trip() {
        for r in [frac(3, 7), frac(-12, 5), int(4), int(0)] {
            assert_eq!(parse_rational(&to_pq(&r)).unwrap(), r);
        }
        assert_eq!(to_pq(&int(3)), "3/1");
        assert_eq!(parse_rational("6/4").unwrap(), frac(3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn gamma_ratio_is_falling_factorial() {
        assert_eq!(gamma_ratio(5, 2), int(12));
        assert_eq!(gamma_ratio(4, 4), int(0));
        assert_eq!(gamma_ratio(4, 0), int(1));
        assert_eq!(gamma_ratio(4, 3), int(6));
    }

    #[test]
    fn huge_rationals_convert() {
        let big = Rational::new(BigInt::from(10).pow(400) * 3, BigInt::from(10).pow(400) * 4);
        assert!((to_f64(&big) - 0.75).abs() < 1e-15);
    }
}
