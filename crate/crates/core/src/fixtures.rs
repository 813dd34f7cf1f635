//! Bundled reference data for d = 5 and d = 11.

use crate::error::{Error, Result};
use crate::num::Cx;
use crate::recognition::RecognizedPolynomial;
use crate::sic::parse_fiducial;

pub const NAMES: [&str; 7] = ["f5", "g5", "gt5", "v5", "f11", "g11", "v11"];

pub fn text(name: &str) -> Option<&'static str> {
    Some(match name {
        "f5" => include_str!("../fixtures/f5.txt"),
        "g5" => include_str!("../fixtures/g5.txt"),
        "gt5" => include_str!("../fixtures/gt5.txt"),
        "v5" => include_str!("../fixtures/v5.txt"),
        "f11" => include_str!("../fixtures/f11.txt"),
        "g11" => include_str!("../fixtures/g11.txt"),
        "v11" => include_str!("../fixtures/v11.txt"),
        _ => return None,
    })
}

fn missing(name: &str) -> Error {
    Error::Config(format!("no bundled fixture '{name}'"))
}

pub fn polynomial(name: &str) -> Result<RecognizedPolynomial> {
    RecognizedPolynomial::from_text(text(name).ok_or_else(|| missing(name))?)
}

/// Fiducial entries and the number of significant digits they carry.
pub fn fiducial(name: &str) -> Result<(Vec<Cx>, u32)> {
    parse_fiducial(text(name).ok_or_else(|| missing(name))?)
}

/// Reference fiducial for dimension d, if one is bundled.
pub fn reference_fiducial(d: u64) -> Option<(Vec<Cx>, u32)> {
    match d {
        5 => fiducial("v5").ok(),
        11 => fiducial("v11").ok(),
        _ => None,
    }
}
