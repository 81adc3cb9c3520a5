//! Exact rational helpers shared by every module: string (de)serialization
//! and a seeded source of generic rationals.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Renders as `num/den`, or just `num` when the denominator is one.
pub fn to_string(q: &Rational) -> String {
    q.to_string()
}

pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    let q = match text.split_once('/') {
        Some((n, d)) => {
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Rational::new(BigInt::from_str(n.trim()).ok()?, d)
        }
        None => Rational::from_integer(BigInt::from_str(text).ok()?),
    };
    Some(q)
}

pub fn to_f64(q: &Rational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // huge operands: scale down through the integer part
            let whole = q.to_integer().to_f64().unwrap_or(f64::NAN);
            let frac = (q - Rational::from_integer(q.to_integer())).abs();
            whole + frac.numer().to_f64().unwrap_or(0.0) / frac.denom().to_f64().unwrap_or(1.0)
        }
    }
}

/// Serde adapter: a single rational as a string.
pub mod serde_str {
    use super::Rational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::to_string(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).ok_or_else(|| D::Error::custom(format!("bad rational `{text}`")))
    }
}

/// Serde adapter: a vector of rationals as a list of strings.
pub mod serde_vec {
    use super::Rational;
    use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&super::to_string(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| super::parse(t).ok_or_else(|| D::Error::custom(format!("bad rational `{t}`"))))
            .collect()
    }
}

/// Deterministic generator of "generic" rationals.
///
/// Every random choice in the crate goes through this type so that a `u64`
/// seed fully determines downstream results.
pub struct GenericRng {
    rng: ChaCha8Rng,
}

impl GenericRng {
    pub fn new(seed: u64) -> Self {
        GenericRng {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Derives an independent stream for a sub-task (retry attempt, trial index).
    pub fn derived(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        GenericRng { rng }
    }

    /// Nonzero rational with numerator in ±[1, 997] and denominator in [1, 97].
    pub fn nonzero(&mut self) -> Rational {
        let num: i64 = self.rng.gen_range(1..=997);
        let num = if self.rng.gen_bool(0.5) { num } else { -num };
        let den: i64 = self.rng.gen_range(1..=97);
        ratio(num, den)
    }

    /// Rational in `[0, 1)` with denominator `2^bits`.
    pub fn unit(&mut self, bits: u32) -> Rational {
        let den = 1i64 << bits;
        ratio(self.rng.gen_range(0..den), den)
    }

    /// Rational in `[lo, hi)` with denominator dividing `2^bits` times that of the bounds.
    pub fn in_range(&mut self, lo: &Rational, hi: &Rational, bits: u32) -> Rational {
        lo + (hi - lo) * self.unit(bits)
    }

    pub fn vector(&mut self, len: usize) -> Vec<Rational> {
        (0..len).map(|_| self.nonzero()).collect()
    }
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}
