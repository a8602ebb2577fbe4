//! Exact rational thresholds.
//!
//! Degree and edge-count bars such as `(1/2 - mu) n` are compared against
//! integers without going through floating point.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

pub type Rational = Ratio<i128>;

pub fn ratio(num: i128, den: i128) -> Rational {
    Ratio::new(num, den)
}

pub fn int(v: usize) -> Rational {
    Ratio::from_integer(v as i128)
}

/// `value >= bar`, exactly.
pub fn at_least(value: usize, bar: &Rational) -> bool {
    int(value) >= *bar
}

/// Largest integer `<= x`, clamped below at zero.
pub fn floor_nonneg(x: &Rational) -> usize {
    if *x <= Rational::zero() {
        0
    } else {
        x.floor().to_integer() as usize
    }
}

pub fn ceil_nonneg(x: &Rational) -> usize {
    if *x <= Rational::zero() {
        0
    } else {
        x.ceil().to_integer() as usize
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Best rational approximation of a finite float with a bounded denominator.
pub fn from_f64(x: f64) -> Rational {
    Ratio::<i128>::approximate_float(x).unwrap_or_else(|| Ratio::from_integer(0))
}

/// Parses `"a/b"`, `"a"` or a decimal literal.
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: i128 = a.trim().parse().ok()?;
        let b: i128 = b.trim().parse().ok()?;
        if b == 0 {
            return None;
        }
        return Some(Ratio::new(a, b));
    }
    if let Ok(v) = s.parse::<i128>() {
        return Some(Ratio::from_integer(v));
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite()).map(from_f64)
}

/// Serde helper writing `"a/b"` and reading either that or `[a, b]`.
pub mod text {
    use super::{parse, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Text(String),
        Pair(i64, i64),
    }

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(q)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Text(t) => parse(&t).ok_or_else(|| D::Error::custom(format!("not a rational: {t:?}"))),
            Repr::Pair(_, 0) => Err(D::Error::custom("zero denominator")),
            Repr::Pair(a, b) => Ok(Rational::new(a.into(), b.into())),
        }
    }
}
