//! Number formatting and the JSON, CSV and text renderings of report rows.

use std::io::Write;

use fcq_core::{BoundKind, Float};
use serde_json::{json, Map, Number, Value};

use crate::table::RowResult;

/// Significant decimal digits that make a `bits`-bit float round-trip:
/// `max(20, 1 + ⌈bits·log₁₀2⌉)`.
pub fn decimal_digits(bits: u32) -> usize {
    let needed = 1 + (bits as f64 * std::f64::consts::LOG10_2).ceil() as usize;
    needed.max(20)
}

/// Scientific notation with `digits` significant digits, e.g. `5.2249e-14`.
pub fn decimal(x: &Float, digits: usize) -> String {
    format!("{:.*e}", digits.max(1), x)
}

fn split_exponent(text: &str) -> (&str, i64) {
    match text.split_once('e') {
        Some((m, e)) => (m, e.parse().expect("exponent is an integer")),
        None => (text, 0),
    }
}

/// `C.CC(±e)`, rounded to three significant digits.
pub fn paper_style(x: &Float) -> String {
    if x.is_zero() {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let text = decimal(x, 3);
    let (mantissa, exp) = split_exponent(&text);
    format!("{mantissa}({exp:+})")
}

/// The first `digits` significant digits without rounding, e.g. `8.53e-4`.
pub fn truncated_digits(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    // Enough extra digits that the rounded tail cannot carry into the kept ones
    // unless the value really is that close to the next step.
    let text = decimal(x, digits + 12);
    let (mantissa, exp) = split_exponent(&text);
    let (sign, body) = match mantissa.strip_prefix('-') {
        Some(b) => ("-", b),
        None => ("", mantissa),
    };
    let all: String = body.chars().filter(char::is_ascii_digit).collect();
    let kept = &all[..digits.min(all.len())];
    let (head, tail) = kept.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{exp}")
    } else {
        format!("{sign}{head}.{tail}e{exp}")
    }
}

fn number(x: &Float, digits: usize) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let n: Number = decimal(x, digits).parse().expect("decimal output is a JSON number");
    Value::Number(n)
}

fn optional(x: Option<&Float>, digits: usize) -> Value {
    x.map_or(Value::Null, |x| number(x, digits))
}

/// `{n, s, omega, r1, r2, r3, rho_star, error, integral, bits, flags}`;
/// numeric fields are `null` when the row failed.
pub fn row_json(row: &RowResult) -> Value {
    let digits = decimal_digits(row.bits);
    let mut obj = Map::new();
    obj.insert("n".into(), json!(row.spec.n));
    obj.insert("s".into(), json!(row.spec.s));
    obj.insert("omega".into(), json!(row.spec.omega));
    let report = row.report.as_ref().ok();
    for kind in BoundKind::ALL {
        let key = format!("r{}", kind.index() + 1);
        obj.insert(key, optional(report.map(|r| r.r(kind)), digits));
    }
    let rho = BoundKind::ALL
        .iter()
        .map(|&k| optional(report.map(|r| r.rho_star(k)), digits))
        .collect();
    obj.insert("rho_star".into(), Value::Array(rho));
    obj.insert(
        "error".into(),
        optional(report.and_then(|r| r.actual_error.as_ref()), digits),
    );
    obj.insert(
        "integral".into(),
        optional(report.and_then(|r| r.reference_integral.as_ref()), digits),
    );
    obj.insert("bits".into(), json!(row.bits));
    obj.insert("flags".into(), json!(row.flags()));
    Value::Object(obj)
}

/// A single row as an object, several as an array.
pub fn write_json<W: Write>(rows: &[RowResult], out: &mut W) -> anyhow::Result<()> {
    let value = match rows {
        [one] => row_json(one),
        _ => Value::Array(rows.iter().map(row_json).collect()),
    };
    serde_json::to_writer_pretty(&mut *out, &value)?;
    writeln!(out)?;
    Ok(())
}

pub const CSV_HEADER: [&str; 9] = ["n", "s", "omega", "r1", "r2", "r3", "error", "integral", "flags"];

pub fn write_csv<W: Write>(rows: &[RowResult], out: W) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        let digits = decimal_digits(row.bits);
        let cell = |x: Option<&Float>| x.map(|x| decimal(x, digits)).unwrap_or_default();
        let report = row.report.as_ref().ok();
        let mut record = vec![
            row.spec.n.to_string(),
            row.spec.s.to_string(),
            row.spec.omega.to_string(),
        ];
        record.extend(BoundKind::ALL.iter().map(|&k| cell(report.map(|r| r.r(k)))));
        record.push(cell(report.and_then(|r| r.actual_error.as_ref())));
        record.push(cell(report.and_then(|r| r.reference_integral.as_ref())));
        record.push(row.flags().join(";"));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// Aligned table in the `C.CC(±e)` style; the integral is truncated as printed.
pub fn write_text<W: Write>(rows: &[RowResult], out: &mut W) -> anyhow::Result<()> {
    let header = ["n, s, omega", "r1", "r2", "r3", "Error", "I", "flags"];
    let mut lines = vec![header.map(String::from).to_vec()];
    for row in rows {
        let report = row.report.as_ref().ok();
        let cell = |x: Option<&Float>| x.map(paper_style).unwrap_or_else(|| "-".into());
        let mut line = vec![format!("{}, {}, {}", row.spec.n, row.spec.s, row.spec.omega)];
        line.extend(BoundKind::ALL.iter().map(|&k| cell(report.map(|r| r.r(k)))));
        line.push(cell(report.and_then(|r| r.actual_error.as_ref())));
        line.push(
            report
                .and_then(|r| r.reference_integral.as_ref())
                .map(|i| {
                    let t = truncated_digits(i, 3);
                    let (m, e) = split_exponent(&t);
                    format!("{m}...({e:+})")
                })
                .unwrap_or_else(|| "-".into()),
        );
        line.push(row.flags().join(" "));
        lines.push(line);
    }
    let widths: Vec<usize> = (0..header.len())
        .map(|c| lines.iter().map(|l| l[c].chars().count()).max().unwrap_or(0))
        .collect();
    for line in &lines {
        let cells: Vec<String> = line
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:<w$}"))
            .collect();
        writeln!(out, "{}", cells.join("  ").trim_end())?;
    }
    Ok(())
}
