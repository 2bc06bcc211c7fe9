//! Serde helpers: unbounded integers and rationals travel as decimal
//! strings ("123", "-4/7"), never as floats or limb arrays.

use crate::exact::{format_rat, parse_int, parse_rat, Int, Rat};
use crate::problems::ProblemKind;
use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

pub mod int_string {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Int, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Int, D::Error> {
        let raw = String::deserialize(d)?;
        parse_int(&raw).map_err(D::Error::custom)
    }
}

pub mod int_string_opt {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Int>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(i) => s.serialize_some(&i.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Int>, D::Error> {
        let raw = Option::<String>::deserialize(d)?;
        raw.map(|r| parse_int(&r).map_err(D::Error::custom)).transpose()
    }
}

pub mod rat_string {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rat(&raw).map_err(D::Error::custom)
    }
}

pub mod rat_string_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rat))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|r| parse_rat(r).map_err(D::Error::custom)).collect()
    }
}

pub mod kind_string {
    use super::*;

    pub fn serialize<S: Serializer>(v: &ProblemKind, s: S) -> Result<S::Ok, S::Error> {
        match v {
            ProblemKind::KMeans(k) => s.serialize_str(&format!("kmeans:{k}")),
            other => s.serialize_str(&other.tag()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ProblemKind, D::Error> {
        let raw = String::deserialize(d)?;
        let (tag, k) = match raw.split_once(':') {
            Some((t, kk)) => {
                let k: usize = kk.parse().map_err(D::Error::custom)?;
                (t.to_string(), Some(k))
            }
            None => (raw, None),
        };
        ProblemKind::from_tag(&tag, k).map_err(D::Error::custom)
    }
}
