//! Front end for the quadrature error-bound library: single-case reports,
//! reproduction of the published table and the identity suites.

pub mod config;
pub mod render;
pub mod table;
pub mod verify;

use std::io::Write;

use fcq_core::Error;

pub use config::{parse_rows, Cli, Command, Format, RowSpec, RunConfig, UsageError};
pub use table::{run_row, run_table, RowResult};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_PRECISION: u8 = 3;

/// Exit status for an error returned by [`run`].
pub fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::InvalidParams { .. } | Error::Domain { .. }) => EXIT_USAGE,
        Some(_) => EXIT_PRECISION,
        None => EXIT_VERIFY_FAILED,
    }
}

fn render_rows<W: Write>(rows: &[RowResult], format: Format, out: &mut W) -> anyhow::Result<()> {
    match format {
        Format::Text => render::write_text(rows, out),
        Format::Json => render::write_json(rows, out),
        Format::Csv => render::write_csv(rows, out),
    }
}

/// Executes one command and returns its exit status.
pub fn run<W: Write>(cfg: &RunConfig, out: &mut W) -> anyhow::Result<u8> {
    match &cfg.command {
        Command::Bounds(row) => {
            let result = run_row(*row, cfg.bits, &cfg.options);
            if let Err(e) = &result.report {
                return Err(e.clone().into());
            }
            render_rows(std::slice::from_ref(&result), cfg.format, out)?;
            Ok(EXIT_OK)
        }
        Command::Table { rows } => {
            let rows = rows.clone().unwrap_or_else(table::paper_rows);
            let results = run_table(&rows, cfg.bits, &cfg.options);
            render_rows(&results, cfg.format, out)?;
            let failed = results.iter().filter(|r| r.report.is_err()).count();
            if failed > 0 {
                eprintln!("{failed} row(s) failed; see the flags column");
                return Ok(EXIT_PRECISION);
            }
            Ok(EXIT_OK)
        }
        Command::Verify => {
            let suites = verify::run_all(&cfg.context());
            render_suites(&suites, cfg.format, out)?;
            Ok(if suites.iter().all(verify::SuiteReport::passed) {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            })
        }
    }
}

fn render_suites<W: Write>(suites: &[verify::SuiteReport], format: Format, out: &mut W) -> anyhow::Result<()> {
    match format {
        Format::Text => {
            for s in suites {
                let verdict = if s.passed() { "PASS" } else { "FAIL" };
                writeln!(out, "{verdict} {} ({} checks)", s.name, s.checks)?;
                for note in &s.notes {
                    writeln!(out, "    {note}")?;
                }
                for failure in &s.failures {
                    writeln!(out, "    failed: {failure}")?;
                }
            }
        }
        Format::Json => {
            let value: Vec<_> = suites
                .iter()
                .map(|s| {
                    serde_json::json!({
                        "suite": s.name,
                        "passed": s.passed(),
                        "checks": s.checks,
                        "failures": s.failures,
                        "notes": s.notes,
                    })
                })
                .collect();
            serde_json::to_writer_pretty(&mut *out, &value)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["suite", "passed", "checks", "failures"])?;
            for s in suites {
                w.write_record([
                    s.name.to_string(),
                    s.passed().to_string(),
                    s.checks.to_string(),
                    s.failures.join(";"),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
