//! CSV tables written by the command-line tool.
//!
//! Numbers carry 17 significant digits (trailing zeros dropped), which is
//! enough for every `f64` to parse back to the identical value. Magnitudes in
//! `[1e-5, 1e17)` are written positionally, others in `e` notation.

use std::io::{Read, Write};

use crate::discrepancy::{DiscrepancyRow, KernelRow};
use crate::error::{Error, Result};
use crate::kernel::{KernelExpansion, Term};

pub const SCAN_HEADER: [&str; 8] = [
    "x", "y", "k_approx", "l_approx", "k_ref", "l_ref", "delta_re", "delta_im",
];
pub const KERNEL_HEADER: [&str; 6] = ["t", "f0", "f1", "sum", "exact", "epsilon"];
pub const COEFFICIENT_HEADER: [&str; 3] = ["n", "alpha", "beta"];

/// Locale-independent decimal rendering with 17 significant digits.
pub fn format_f64(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exponent) = sci
        .split_once('e')
        .expect("LowerExp output has an exponent");
    let exponent: i32 = exponent.parse().expect("LowerExp exponent is an integer");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let digits = digits.trim_end_matches('0');
    if digits.is_empty() {
        return format!("{sign}0");
    }
    if !(-5..=16).contains(&exponent) {
        let (lead, rest) = digits.split_at(1);
        return if rest.is_empty() {
            format!("{sign}{lead}e{exponent}")
        } else {
            format!("{sign}{lead}.{rest}e{exponent}")
        };
    }
    if exponent < 0 {
        let zeros = "0".repeat((-exponent - 1) as usize);
        return format!("{sign}0.{zeros}{digits}");
    }
    let int_len = exponent as usize + 1;
    if digits.len() <= int_len {
        let zeros = "0".repeat(int_len - digits.len());
        format!("{sign}{digits}{zeros}")
    } else {
        let (int_part, frac) = digits.split_at(int_len);
        format!("{sign}{int_part}.{frac}")
    }
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

pub fn write_scan<W: Write>(out: W, rows: &[DiscrepancyRow]) -> Result<()> {
    let mut w = writer(out);
    w.write_record(SCAN_HEADER)?;
    for r in rows {
        w.write_record(
            [
                r.x, r.y, r.k_approx, r.l_approx, r.k_ref, r.l_ref, r.delta_re, r.delta_im,
            ]
            .map(format_f64),
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_kernel<W: Write>(out: W, rows: &[KernelRow]) -> Result<()> {
    let mut w = writer(out);
    w.write_record(KERNEL_HEADER)?;
    for r in rows {
        w.write_record([r.t, r.f0, r.f1, r.sum, r.exact, r.epsilon].map(format_f64))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_coefficients<W: Write>(out: W, expansion: &KernelExpansion) -> Result<()> {
    let mut w = writer(out);
    w.write_record(COEFFICIENT_HEADER)?;
    for (n, term) in expansion.terms().iter().enumerate() {
        w.write_record([n.to_string(), format_f64(term.alpha), format_f64(term.beta)])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads an `n,alpha,beta` table back into a validated expansion.
///
/// Rows must list `n = 0, 1, 2, ...` in order.
pub fn read_coefficients<R: Read>(input: R) -> Result<KernelExpansion> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers()?;
    if header.iter().ne(COEFFICIENT_HEADER) {
        return Err(Error::Format(format!(
            "expected header n,alpha,beta, found {}",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut terms = Vec::new();
    for (expected, record) in reader.records().enumerate() {
        let record = record?;
        let field = |i: usize| record.get(i).unwrap_or("").trim();
        let n: usize = field(0)
            .parse()
            .map_err(|_| Error::Format(format!("bad term index {:?}", field(0))))?;
        if n != expected {
            return Err(Error::Format(format!(
                "term index {n} out of order, expected {expected}"
            )));
        }
        let number = |i: usize| -> Result<f64> {
            field(i)
                .parse()
                .map_err(|_| Error::Format(format!("bad number {:?} in row {n}", field(i))))
        };
        terms.push(Term::new(number(1)?, number(2)?));
    }
    KernelExpansion::new(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn formatting_examples() {
        assert_eq!(format_f64(0.0), "0");
        assert_eq!(format_f64(-0.0), "-0");
        assert_eq!(format_f64(1.0), "1");
        assert_eq!(format_f64(10.0), "10");
        assert_eq!(format_f64(-2.75), "-2.75");
        assert_eq!(format_f64(0.1), "0.10000000000000001");
        assert_eq!(format_f64(1e-5), "0.000010000000000000001");
        assert_eq!(format_f64(1e-170), "9.9999999999999998e-171");
        assert_eq!(format_f64(1e-300 * 1e10), "1.0000000000000001e-290");
        assert_eq!(format_f64(1.5e20), "1.5e20");
        assert_eq!(format_f64(123456.5), "123456.5");
    }

    proptest! {
        #[test]
        fn format_round_trips(bits in any::<u64>()) {
            let v = f64::from_bits(bits);
            prop_assume!(v.is_finite());
            let s = format_f64(v);
            prop_assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits());
            prop_assert!(!s.contains(','));
        }
    }

    #[test]
    fn coefficient_table_round_trip() {
        let mut buf = Vec::new();
        write_coefficients(&mut buf, &KernelExpansion::standard()).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text, "n,alpha,beta\n0,1,5.5\n1,5.5,2.75\n");
        assert_eq!(
            read_coefficients(&buf[..]).unwrap(),
            KernelExpansion::standard()
        );
    }

    #[test]
    fn coefficient_table_rejects_bad_input() {
        assert!(read_coefficients("a,b,c\n0,1,1\n".as_bytes()).is_err());
        assert!(read_coefficients("n,alpha,beta\n1,1,1\n".as_bytes()).is_err());
        assert!(read_coefficients("n,alpha,beta\n0,1,-1\n".as_bytes()).is_err());
        assert!(read_coefficients("n,alpha,beta\n0,x,1\n".as_bytes()).is_err());
        assert!(read_coefficients("n,alpha,beta\n".as_bytes()).is_err());
    }
}
