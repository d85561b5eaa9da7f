//! Serde helpers: big integers travel as decimal strings so that JSON
//! consumers never lose precision.

use num_bigint::BigInt;
use serde::Serializer;

pub fn bigint_str<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}
