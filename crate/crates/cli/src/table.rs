//! Tabulation of `S'` and `d` over weight grids.

use std::io::Write;

use adolink::{modified_dim, s_prime_formula, Error, HighestWeight, RootContext};
use serde::{Deserialize, Serialize};

use crate::report::fmt_complex;
use crate::{Failure, Format};

/// Largest number of grid points accepted on one axis.
pub const MAX_GRID: usize = 10_000;

/// One `(λ, λ')` pair. Values are left empty when either weight is atypical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub lambda_prime_re: f64,
    pub lambda_prime_im: f64,
    pub status: String,
    pub s_prime_re: Option<f64>,
    pub s_prime_im: Option<f64>,
    pub modified_dim_re: Option<f64>,
    pub modified_dim_im: Option<f64>,
}

/// Parse `start:stop:step` into real weights, both endpoints included.
pub fn parse_range(text: &str) -> Result<Vec<HighestWeight>, Error> {
    let bad = || Error::Parse(format!("range must be start:stop:step, got {text:?}"));
    let parts: Vec<f64> = text
        .split(':')
        .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(bad());
    };
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 || stop < start {
        return Err(bad());
    }
    let span = (stop - start) / step;
    if span >= MAX_GRID as f64 {
        return Err(Error::Parse(format!(
            "range has more than {MAX_GRID} points"
        )));
    }
    let count = (span + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| HighestWeight::new(start + i as f64 * step, 0.0))
        .collect())
}

pub fn build(
    ctx: &RootContext,
    lambdas: &[HighestWeight],
    primes: &[HighestWeight],
) -> Result<Vec<TableRow>, Error> {
    if lambdas.len() > MAX_GRID || primes.len() > MAX_GRID {
        return Err(Error::Parse(format!(
            "grid axes are limited to {MAX_GRID} points"
        )));
    }
    let mut rows = Vec::with_capacity(lambdas.len() * primes.len());
    for &a in lambdas {
        for &b in primes {
            let typical = a.is_typical(ctx) && b.is_typical(ctx);
            let (s, d) = if typical {
                (
                    Some(s_prime_formula(ctx, a, b)?),
                    Some(modified_dim(ctx, a)?),
                )
            } else {
                (None, None)
            };
            rows.push(TableRow {
                lambda_re: a.0.re,
                lambda_im: a.0.im,
                lambda_prime_re: b.0.re,
                lambda_prime_im: b.0.im,
                status: if typical { "ok" } else { "atypical" }.into(),
                s_prime_re: s.map(|z| z.re),
                s_prime_im: s.map(|z| z.im),
                modified_dim_re: d.map(|z| z.re),
                modified_dim_im: d.map(|z| z.im),
            });
        }
    }
    Ok(rows)
}

/// Read rows back from the CSV form written by [`write`].
pub fn read_csv<R: std::io::Read>(reader: R) -> Result<Vec<TableRow>, csv::Error> {
    csv::Reader::from_reader(reader).deserialize().collect()
}

pub(crate) fn write(out: &mut dyn Write, format: Format, rows: &[TableRow]) -> Result<(), Failure> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Plain => {
            for r in rows {
                let a = fmt_complex(adolink::Scalar::new(r.lambda_re, r.lambda_im));
                let b = fmt_complex(adolink::Scalar::new(r.lambda_prime_re, r.lambda_prime_im));
                match (
                    r.s_prime_re,
                    r.s_prime_im,
                    r.modified_dim_re,
                    r.modified_dim_im,
                ) {
                    (Some(sr), Some(si), Some(dr), Some(di)) => writeln!(
                        out,
                        "{a:>14} {b:>14}  S' = {:<44} d = {}",
                        fmt_complex(adolink::Scalar::new(sr, si)),
                        fmt_complex(adolink::Scalar::new(dr, di))
                    )?,
                    _ => writeln!(out, "{a:>14} {b:>14}  atypical")?,
                }
            }
        }
    }
    Ok(())
}
