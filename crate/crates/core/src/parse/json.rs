use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::logic::Count;

fn exact(r: &BigRational) -> Value {
    json!({ "num": r.numer().to_string(), "den": r.denom().to_string() })
}

/// `{"count": {"num": "...", "den": "..."}}` or `{"count_float": v}`.
pub fn count_to_json(c: &Count) -> Value {
    match c {
        Count::Exact(r) => json!({ "count": exact(r) }),
        Count::Float(v) => json!({ "count_float": v }),
    }
}

/// `{"probability": {"num": "...", "den": "..."}}` or
/// `{"probability_float": v}`.
pub fn probability_to_json(c: &Count) -> Value {
    match c {
        Count::Exact(r) => json!({ "probability": exact(r) }),
        Count::Float(v) => json!({ "probability_float": v }),
    }
}

/// Reads back either shape written by [`count_to_json`].
pub fn count_from_json(v: &Value) -> Option<Count> {
    if let Some(obj) = v.get("count") {
        let num: BigInt = obj.get("num")?.as_str()?.parse().ok()?;
        let den: BigInt = obj.get("den")?.as_str()?.parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Count::Exact(BigRational::new(num, den)));
    }
    v.get("count_float")?.as_f64().map(Count::Float)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_counts_survive_serialization() {
        let big = BigRational::new(BigInt::from(3).pow(200), BigInt::from(7));
        let c = Count::Exact(big);
        let text = count_to_json(&c).to_string();
        assert!(text.starts_with("{\"count\":{\"den\":\"7\""));
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(count_from_json(&back), Some(c));
    }

    #[test]
    fn float_counts() {
        let c = Count::Float(0.5);
        assert_eq!(count_to_json(&c), json!({ "count_float": 0.5 }));
        assert_eq!(count_from_json(&count_to_json(&c)), Some(c));
        assert_eq!(
            probability_to_json(&Count::Exact(BigRational::new(591.into(), 10000.into()))),
            json!({ "probability": { "num": "591", "den": "10000" } })
        );
    }
}
