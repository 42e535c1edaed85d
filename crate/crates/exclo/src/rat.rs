//! Exact rational scalars and their `"p/q"` string form.
//!
//! All probabilities and clique weights in this crate are dyadic rationals
//! with tiny numerators, so a 64-bit ratio is ample headroom.

use num_rational::Rational64;

pub type Rat = Rational64;

/// Shorthand constructor used throughout tests and builders.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(p, q)
}

/// Renders a rational in the `"p/q"` convention used by every JSON format
/// in this crate (integers render without the slash, e.g. `"0"`, `"2"`).
pub fn rat_to_string(r: &Rat) -> String {
    r.to_string()
}

/// Parses the `"p/q"` convention; accepts plain integers as well.
pub fn rat_from_str(s: &str) -> Result<Rat, String> {
    let t = s.trim();
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p, q),
        None => (t, "1"),
    };
    let p: i64 = p.trim().parse().map_err(|e| format!("bad rational {s:?}: {e}"))?;
    let q: i64 = q.trim().parse().map_err(|e| format!("bad rational {s:?}: {e}"))?;
    if q == 0 {
        return Err(format!("bad rational {s:?}: zero denominator"));
    }
    Ok(Rat::new(p, q))
}

/// Serde adapter for `#[serde(with = "crate::rat::pq")]` fields.
pub mod pq {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rat_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        rat_from_str(&s).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_p_over_q() {
        for s in ["1/2", "5/4", "0", "3", "-1/8"] {
            let r = rat_from_str(s).unwrap();
            assert_eq!(rat_to_string(&r), s);
        }
    }

    #[test]
    fn normalizes_on_parse() {
        assert_eq!(rat_from_str("2/4").unwrap(), rat(1, 2));
        assert_eq!(rat_to_string(&rat(2, 4)), "1/2");
    }

    #[test]
    fn rejects_garbage() {
        assert!(rat_from_str("").is_err());
        assert!(rat_from_str("1/0").is_err());
        assert!(rat_from_str("one half").is_err());
    }
}
