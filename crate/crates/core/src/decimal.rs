//! Serde adapters writing big integers as decimal strings.

use num_bigint::BigInt;
use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
    Vec::<String>::deserialize(d)?
        .iter()
        .map(|s| s.parse().map_err(|_| D::Error::custom(format!("bad integer {s:?}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Serialize;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct W(#[serde(with = "super")] Vec<BigInt>);

    #[test]
    fn roundtrip() {
        let w = W(vec![BigInt::from(-3), BigInt::from(10).pow(30)]);
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"["-3","1000000000000000000000000000000"]"#);
        assert_eq!(serde_json::from_str::<W>(&s).unwrap(), w);
    }
}
