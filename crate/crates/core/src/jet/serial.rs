//! JSON form of a jet:
//!
//! ```json
//! { "n": 2, "D": 3, "valid_order": 3, "coeffs": { "1 0": "1/1", "0 2": "-1/2" } }
//! ```
//!
//! Keys are space-separated exponents, values reduced `num/den` strings, zero
//! coefficients omitted, entries emitted in ranked (graded-colex) order.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Jet, Layout, Rational, SliceJet};
use crate::error::{Error, Result};

pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

struct Coeffs<'a>(&'a Jet);

impl Serialize for Coeffs<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let jet = self.0;
        let nonzero = jet.coeffs.iter().filter(|c| !c.is_zero()).count();
        let mut map = s.serialize_map(Some(nonzero))?;
        for (r, c) in jet.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let key = jet
                .layout
                .exponents(r)
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            map.serialize_entry(&key, &format_rational(c))?;
        }
        map.end()
    }
}

impl Serialize for Jet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(4))?;
        map.serialize_entry("n", &self.nvars())?;
        map.serialize_entry("D", &self.degree())?;
        map.serialize_entry("valid_order", &self.valid)?;
        map.serialize_entry("coeffs", &Coeffs(self))?;
        map.end()
    }
}

/// Coefficient table as read from JSON, in document order.
struct RawCoeffs(Vec<(String, String)>);

impl<'de> Deserialize<'de> for RawCoeffs {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = RawCoeffs;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from exponent strings to rational strings")
            }
            fn visit_map<A: MapAccess<'de>>(
                self,
                mut m: A,
            ) -> std::result::Result<RawCoeffs, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = m.next_entry::<String, String>()? {
                    out.push((k, v));
                }
                Ok(RawCoeffs(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJet {
    n: usize,
    #[serde(rename = "D")]
    degree: usize,
    valid_order: usize,
    coeffs: RawCoeffs,
}

impl RawJet {
    fn into_jet(self) -> Result<Jet> {
        if self.valid_order > self.degree {
            return Err(Error::Parse(format!(
                "valid_order {} exceeds D = {}",
                self.valid_order, self.degree
            )));
        }
        let layout = Layout::get(self.n, self.degree);
        let mut coeffs = vec![Rational::zero(); layout.len()];
        for (key, value) in self.coeffs.0 {
            let exps: Vec<u32> = if key.trim().is_empty() {
                Vec::new()
            } else {
                key.split_whitespace()
                    .map(|t| t.parse::<u32>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::Parse(format!("invalid exponent key {key:?}")))?
            };
            if exps.len() != self.n {
                return Err(Error::Parse(format!(
                    "exponent key {key:?} has {} entries, expected {}",
                    exps.len(),
                    self.n
                )));
            }
            let r = layout.rank(&exps).ok_or_else(|| {
                Error::Parse(format!(
                    "monomial {key:?} exceeds total degree {}",
                    self.degree
                ))
            })?;
            coeffs[r] = parse_rational(&value)?;
        }
        Ok(Jet::from_parts(layout, coeffs, self.valid_order))
    }
}

impl<'de> Deserialize<'de> for Jet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        RawJet::deserialize(d)?
            .into_jet()
            .map_err(de::Error::custom)
    }
}

impl Serialize for SliceJet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.jet.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SliceJet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(SliceJet::new(Jet::deserialize(d)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::{int, rat};

    #[test]
    fn rational_strings() {
        assert_eq!(format_rational(&rat(-6, 4)), "-3/2");
        assert_eq!(format_rational(&int(0)), "0/1");
        assert_eq!(parse_rational("4/-6").unwrap(), rat(-2, 3));
        assert_eq!(parse_rational("5").unwrap(), int(5));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn json_layout() {
        let mut j = Jet::zero(2, 2);
        j.set_coeff(&[1, 0], int(1));
        j.set_coeff(&[0, 2], rat(-1, 2));
        let s = serde_json::to_string(&j).unwrap();
        assert_eq!(
            s,
            r#"{"n":2,"D":2,"valid_order":2,"coeffs":{"1 0":"1/1","0 2":"-1/2"}}"#
        );
        let back: Jet = serde_json::from_str(&s).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }

    #[test]
    fn rejects_bad_keys() {
        let too_high = r#"{"n":1,"D":1,"valid_order":1,"coeffs":{"2":"1/1"}}"#;
        assert!(serde_json::from_str::<Jet>(too_high).is_err());
        let wrong_len = r#"{"n":2,"D":1,"valid_order":1,"coeffs":{"1":"1/1"}}"#;
        assert!(serde_json::from_str::<Jet>(wrong_len).is_err());
        let bad_valid = r#"{"n":2,"D":1,"valid_order":2,"coeffs":{}}"#;
        assert!(serde_json::from_str::<Jet>(bad_valid).is_err());
    }

    #[test]
    fn zero_variable_jet() {
        let j = Jet::constant(0, 3, rat(2, 3));
        let s = serde_json::to_string(&j).unwrap();
        assert_eq!(s, r#"{"n":0,"D":3,"valid_order":3,"coeffs":{"":"2/3"}}"#);
        let back: Jet = serde_json::from_str(&s).unwrap();
        assert_eq!(back, j);
    }
}
