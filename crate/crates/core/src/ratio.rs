//! Exact rational helpers. Rationals travel as lowest-terms `"p/q"` strings
//! (integers as `"p"`), complex rationals as `{"re": .., "im": ..}`.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = num_rational::Rational64;

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
            let q: i64 = q.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
            if q == 0 {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Rational::new(p, q)
        }
        None => Rational::from_integer(
            s.parse().map_err(|_| Error::Parse(format!("not a rational: {s:?}")))?,
        ),
    };
    Ok(parsed)
}

/// Fractional part `{q} = q - floor(q)`, always in `[0, 1)`.
pub fn fract(q: Rational) -> Rational {
    q - q.floor()
}

pub fn in_unit_window(q: Rational) -> bool {
    !q.is_negative() && q < Rational::from_integer(1)
}

/// Serde adapter for a single `Rational` field.
pub mod as_string {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(q)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod vec_as_string {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(qs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(qs.len()))?;
        for q in qs {
            seq.serialize_element(&q.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// A complex number with exact rational real and imaginary parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComplexRational {
    #[serde(with = "as_string")]
    pub re: Rational,
    #[serde(with = "as_string")]
    pub im: Rational,
}

impl ComplexRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }
}

impl fmt::Display for ComplexRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("3").unwrap(), Rational::from_integer(3));
        assert_eq!(parse_rational("-2/4").unwrap(), Rational::new(-1, 2));
        assert_eq!(parse_rational(" 5/6 ").unwrap(), Rational::new(5, 6));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn display_is_lowest_terms() {
        assert_eq!(Rational::new(4, 6).to_string(), "2/3");
        assert_eq!(Rational::new(-6, 3).to_string(), "-2");
        assert_eq!(Rational::zero().to_string(), "0");
    }

    #[test]
    fn fract_of_negative() {
        assert_eq!(fract(Rational::new(-1, 6)), Rational::new(5, 6));
        assert_eq!(fract(Rational::from_integer(-3)), Rational::zero());
    }

    #[test]
    fn complex_json_shape() {
        let z = ComplexRational::new(Rational::new(-1, 6), Rational::zero());
        let v = serde_json::to_value(z).unwrap();
        assert_eq!(v, serde_json::json!({"re": "-1/6", "im": "0"}));
        let back: ComplexRational = serde_json::from_value(v).unwrap();
        assert_eq!(back, z);
    }
}
