//! Deterministic JSON output with 17 significant digits per float.

use std::io;

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};

/// Report schema version.
pub const SCHEMA: u32 = 1;

struct Digits17<F> {
    inner: F,
}

macro_rules! forward {
    ($($name:ident),*) => {
        $(fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
            self.inner.$name(w)
        })*
    };
}

macro_rules! forward_first {
    ($($name:ident),*) => {
        $(fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
            self.inner.$name(w, first)
        })*
    };
}

impl<F: Formatter> Formatter for Digits17<F> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    forward!(
        begin_array,
        end_array,
        end_array_value,
        begin_object,
        end_object,
        end_object_value,
        begin_object_value
    );
    forward_first!(begin_array_value, begin_object_key);
}

/// Serializes `value` as indented JSON with floats in `{:.16e}` form.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let fmt = Digits17 {
        inner: PrettyFormatter::with_indent(b"  "),
    };
    let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
    value.serialize(&mut ser).expect("report serialization");
    String::from_utf8(out).expect("JSON is UTF-8")
}

/// Single-line variant of [`to_json`].
pub fn to_json_compact<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let fmt = Digits17 {
        inner: CompactFormatter,
    };
    let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
    value.serialize(&mut ser).expect("report serialization");
    String::from_utf8(out).expect("JSON is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        let s = to_json_compact(&serde_json::json!({"x": 0.1, "n": 3, "bad": f64::NAN}));
        assert_eq!(s, r#"{"bad":null,"n":3,"x":1.0000000000000001e-1}"#);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["x"].as_f64().unwrap(), 0.1);
    }
}
