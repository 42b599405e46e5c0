//! Serialization of floats at 17 significant digits.

use serde::Serializer;
use serde_json::value::RawValue;

/// `x` in scientific notation with 17 significant digits.
pub fn format(x: f64) -> String {
    format!("{x:.16e}")
}

/// `serialize_with` hook emitting [`format`] as a raw JSON number.
pub fn serialize<S: Serializer>(x: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    if !x.is_finite() {
        return Err(serde::ser::Error::custom(format!("non-finite value {x}")));
    }
    let raw = RawValue::from_string(format(*x)).map_err(serde::ser::Error::custom)?;
    serde::Serialize::serialize(&raw, serializer)
}

pub fn serialize_slice<S: Serializer>(xs: &[f64], serializer: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = serializer.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&Sig17(*x))?;
    }
    seq.end()
}

struct Sig17(f64);

impl serde::Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serialize(&self.0, serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 123456.789, 0.0] {
            let s = format(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let digits = s.split('e').next().unwrap().replace(['-', '.'], "");
            assert_eq!(digits.len(), 17, "{s}");
        }
    }

    #[test]
    fn emits_valid_json_numbers() {
        #[derive(serde::Serialize)]
        struct T {
            #[serde(serialize_with = "serialize")]
            a: f64,
            #[serde(serialize_with = "serialize_slice")]
            b: Vec<f64>,
        }
        let text = serde_json::to_string(&T { a: -0.5, b: vec![1.0, 2e-7] }).unwrap();
        assert_eq!(
            text,
            r#"{"a":-5.0000000000000000e-1,"b":[1.0000000000000000e0,1.9999999999999999e-7]}"#
        );
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["a"].as_f64(), Some(-0.5));
    }
}
