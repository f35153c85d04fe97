#![allow(dead_code)]

use std::process::{Command, Output};

/// `e^(y^2) erfc(y)` for `y > 0` from the Laplace continued fraction
/// `1/sqrt(pi) * 1/(y + (1/2)/(y + 1/(y + (3/2)/(y + ...))))`, evaluated backwards.
pub fn scaled_erfc_cf(y: f64) -> f64 {
    let mut tail = 0.0;
    for k in (1..=400).rev() {
        tail = (k as f64 / 2.0) / (y + tail);
    }
    1.0 / (std::f64::consts::PI.sqrt() * (y + tail))
}

pub fn pvoigt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pvoigt"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

/// Value after `key = ` on the first line that starts with `key`.
pub fn labeled(text: &str, key: &str) -> f64 {
    let line = text
        .lines()
        .find(|l| l.starts_with(key))
        .unwrap_or_else(|| panic!("no line starting with {key:?} in:\n{text}"));
    line[key.len()..]
        .trim_start()
        .trim_start_matches('=')
        .split_whitespace()
        .next()
        .expect("value present")
        .parse()
        .expect("numeric value")
}
