//! Exact rational arithmetic helpers.
//!
//! All cost comparisons in this crate are exact: parameters, costs and deltas
//! are `Rational64` values. Floats appear only in reports (motif z-scores,
//! densities, means).

use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Error;

pub type Rat = Rational64;

/// Shorthand constructor.
pub fn rat(num: i64, den: i64) -> Rat {
    Rational64::new(num, den)
}

pub fn int(num: i64) -> Rat {
    Rational64::from_integer(num)
}

pub fn zero() -> Rat {
    Rational64::zero()
}

pub fn one() -> Rat {
    Rational64::one()
}

/// Parse "p/q", an integer, or a plain decimal like "0.1".
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let bad = || Error::BadArgument(format!("cannot parse rational from {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(Error::BadArgument(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational64::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.trim_start().starts_with('-');
        let whole: i64 = if whole.is_empty() || whole == "-" {
            0
        } else {
            whole.parse().map_err(|_| bad())?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = 10i64.checked_pow(frac.len() as u32).ok_or_else(bad)?;
        let frac_num: i64 = frac.parse().map_err(|_| bad())?;
        let abs = Rational64::from_integer(whole.abs()) + Rational64::new(frac_num, scale);
        return Ok(if neg || whole < 0 { -abs } else { abs });
    }
    let p: i64 = s.parse().map_err(|_| bad())?;
    Ok(Rational64::from_integer(p))
}

/// Canonical "p/q" (or "p" for integers) formatting.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Falls back to component division; only reachable for huge terms.
        *r.numer() as f64 / *r.denom() as f64
    })
}

pub fn is_negative(r: &Rat) -> bool {
    r.is_negative()
}

/// Serde adapter: rationals serialize as "p/q" strings so JSON stays exact.
pub mod rat_serde {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Option<Rat>`.
pub mod opt_rat_serde {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&fmt_rat(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rat>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|s| parse_rat(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_integer_and_decimal() {
        assert_eq!(parse_rat("3/2").unwrap(), rat(3, 2));
        assert_eq!(parse_rat("-7").unwrap(), int(-7));
        assert_eq!(parse_rat("0.1").unwrap(), rat(1, 10));
        assert_eq!(parse_rat("1.5").unwrap(), rat(3, 2));
        assert_eq!(parse_rat("-0.25").unwrap(), rat(-1, 4));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
    }

    #[test]
    fn formats_round_trip() {
        for r in [rat(3, 2), int(5), rat(-7, 3), zero()] {
            assert_eq!(parse_rat(&fmt_rat(&r)).unwrap(), r);
        }
    }
}
