//! Serialization helpers: every floating-point number in the artifacts is
//! written with 17 significant digits, enough to round-trip any f64.

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};

/// 17-significant-digit rendering used in CSV artifacts.
pub fn sig17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Pretty formatter with f64 output pinned to 17 significant digits.
struct SigFigFormatter<'a> {
    inner: PrettyFormatter<'a>,
}

impl Formatter for SigFigFormatter<'_> {
    fn write_f64<W: ?Sized + std::io::Write>(&mut self, w: &mut W, value: f64) -> std::io::Result<()> {
        write!(w, "{value:.16e}")
    }

    // everything below forwards to the pretty formatter's layout
    fn begin_array<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.inner.begin_array(w)
    }

    fn end_array<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.inner.end_array(w)
    }

    fn begin_array_value<W: ?Sized + std::io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> std::io::Result<()> {
        self.inner.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.inner.end_array_value(w)
    }

    fn begin_object<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.inner.begin_object(w)
    }

    fn end_object<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.inner.end_object(w)
    }

    fn begin_object_key<W: ?Sized + std::io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> std::io::Result<()> {
        self.inner.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.inner.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.inner.end_object_value(w)
    }
}

/// Pretty JSON with pinned float formatting and a trailing newline.
pub fn to_string_pretty<T: Serialize>(value: &T) -> std::io::Result<String> {
    let mut buf = Vec::new();
    let fmt = SigFigFormatter { inner: PrettyFormatter::new() };
    let mut ser = Serializer::with_formatter(&mut buf, fmt);
    value.serialize(&mut ser).map_err(std::io::Error::other)?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(std::io::Error::other)
}
