use std::fs;
use std::path::Path;

use cantor_core::numeral::{DigitStringRepr, QSequence};
use cantor_core::{rational, DigitString, Rational};
use serde::de::DeserializeOwned;

use crate::Failure;

/// Inline JSON when the argument starts like JSON, a file path otherwise.
pub fn json<T: DeserializeOwned>(arg: &str, what: &str) -> Result<T, Failure> {
    let text = if looks_inline(arg) {
        arg.to_string()
    } else {
        read_file(arg, what)?
    };
    serde_json::from_str(&text).map_err(|e| Failure::parse(format!("{what}: {e}")))
}

fn looks_inline(arg: &str) -> bool {
    matches!(arg.trim_start().chars().next(), Some('{' | '[' | '"'))
}

fn read_file(path: &str, what: &str) -> Result<String, Failure> {
    fs::read_to_string(Path::new(path))
        .map_err(|e| Failure::usage(format!("cannot read {what} from {path}: {e}")))
}

/// A base sequence: an integer, inline JSON, or a JSON file.
pub fn qseq(arg: &str) -> Result<QSequence, Failure> {
    if let Ok(q) = arg.trim().parse::<u64>() {
        return QSequence::constant(q).map_err(Failure::from);
    }
    json(arg, "base sequence")
}

pub fn rational(arg: &str) -> Result<Rational, Failure> {
    rational::parse(arg).map_err(Failure::from)
}

/// Comma-separated rationals.
pub fn rationals(arg: &str) -> Result<Vec<Rational>, Failure> {
    arg.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(rational)
        .collect()
}

/// Comma-separated digits.
pub fn digits(arg: &str) -> Result<Vec<u64>, Failure> {
    arg.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Failure::parse(format!("bad digit {s:?}")))
        })
        .collect()
}

pub fn digit_string(arg: &str, q: &QSequence) -> Result<DigitString, Failure> {
    let repr: DigitStringRepr = json(arg, "digit string")?;
    DigitString::from_repr(repr, q.clone()).map_err(Failure::from)
}
