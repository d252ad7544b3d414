//! Shared pieces of the JSON report format.

use std::fmt::Display;

use serde::ser::SerializeSeq;
use serde::Serializer;

macro_rules! schema_version {
    () => {
        "1.0.0"
    };
}
pub(crate) use schema_version;

/// Version of the JSON report layout; bumped on incompatible changes.
pub const SCHEMA_VERSION: &str = schema_version!();

pub(crate) fn display<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub(crate) fn display_seq<T: Display, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

pub(crate) fn display_opt_seq<T: Display, S: Serializer>(
    v: &Option<Vec<T>>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => display_seq(v, s),
        None => s.serialize_none(),
    }
}

pub(crate) fn display_opt<T: Display, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}
