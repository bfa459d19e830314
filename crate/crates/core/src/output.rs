//! Serialization helpers: complex numbers as `{re, im}` objects and JSON
//! with 15 significant digits.

use std::io;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::ser::Formatter;

use crate::Point;

#[derive(Serialize, Deserialize)]
struct ReIm {
    re: f64,
    im: f64,
}

/// `#[serde(with = "complex")]` for a single `Complex64`.
pub mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Point, s: S) -> Result<S::Ok, S::Error> {
        ReIm { re: z.re, im: z.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Point, D::Error> {
        let v = ReIm::deserialize(d)?;
        Ok(Point::new(v.re, v.im))
    }
}

/// `#[serde(with = "complex_vec")]` for `Vec<Complex64>`.
pub mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(zs: &[Point], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(zs.iter().map(|z| ReIm { re: z.re, im: z.im }))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Point>, D::Error> {
        let v = Vec::<ReIm>::deserialize(d)?;
        Ok(v.into_iter().map(|c| Point::new(c.re, c.im)).collect())
    }
}

/// Formats `v` like C's `%.15g`, keeping a `.0` on integral values so the
/// token still reads as a float.
pub fn format_sig15(v: f64) -> String {
    if !v.is_finite() {
        return "null".into();
    }
    if v == 0.0 {
        return "0.0".into();
    }
    let sci = format!("{:.14e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    let sign = if negative { "-" } else { "" };
    if !(-5..15).contains(&exp) {
        let (head, tail) = digits.split_at(1);
        return if tail.is_empty() {
            format!("{sign}{head}e{exp}")
        } else {
            format!("{sign}{head}.{tail}e{exp}")
        };
    }
    if exp < 0 {
        let zeros = "0".repeat((-exp - 1) as usize);
        return format!("{sign}0.{zeros}{digits}");
    }
    let int_len = exp as usize + 1;
    if digits.len() <= int_len {
        let pad = "0".repeat(int_len - digits.len());
        format!("{sign}{digits}{pad}.0")
    } else {
        let (i, f) = digits.split_at(int_len);
        format!("{sign}{i}.{f}")
    }
}

/// Rounds to the nearest `f64` of the 15-significant-digit decimal.
pub fn round_sig15(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{:.14e}", v).parse().expect("round trip")
}

struct Sig15;

impl Formatter for Sig15 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_sig15(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Compact JSON with every float printed to 15 significant digits.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig15);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("json is utf-8"))
}

/// The value as a consumer of [`to_json`] output sees it.
pub fn quantize<T: Serialize + DeserializeOwned>(value: &T) -> serde_json::Result<T> {
    serde_json::from_str(&to_json(value)?)
}
