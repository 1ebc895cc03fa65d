use std::io::Write;

use adolink::suite::{SuiteConfig, SuiteReport};
use adolink::{ColoredLink, Error, HighestWeight, InvariantReport, RootContext, Scalar};
use serde::{Deserialize, Serialize};

use crate::{Failure, Format};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Scalar> for ComplexJson {
    fn from(z: Scalar) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<HighestWeight> for ComplexJson {
    fn from(w: HighestWeight) -> Self {
        w.0.into()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub strands: Vec<usize>,
    pub color: ComplexJson,
    pub writhe: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutJson {
    pub component: usize,
    pub strand: usize,
    pub cut: ComplexJson,
    pub modified_dim: ComplexJson,
    pub product: ComplexJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualsJson {
    pub max_disagreement: f64,
    pub tolerance: f64,
}

/// Machine-readable form of an invariant evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub braid: String,
    pub components: Vec<ComponentJson>,
    pub colors: Vec<ComplexJson>,
    pub value: ComplexJson,
    pub unframed_value: ComplexJson,
    pub per_cut: Vec<CutJson>,
    pub residuals: ResidualsJson,
}

impl InvariantJson {
    pub fn new(ctx: &RootContext, link: &ColoredLink, report: &InvariantReport) -> Self {
        Self {
            n: ctx.n(),
            braid: link.braid().to_string(),
            components: link
                .components()
                .iter()
                .enumerate()
                .map(|(i, strands)| ComponentJson {
                    strands: strands.clone(),
                    color: link.colors()[i].into(),
                    writhe: report.framing[i],
                })
                .collect(),
            colors: link.colors().iter().map(|&c| c.into()).collect(),
            value: report.value.into(),
            unframed_value: report.unframed_value.into(),
            per_cut: report
                .per_cut
                .iter()
                .map(|c| CutJson {
                    component: c.component,
                    strand: c.strand,
                    cut: c.cut.into(),
                    modified_dim: c.modified_dim.into(),
                    product: c.product.into(),
                })
                .collect(),
            residuals: ResidualsJson {
                max_disagreement: report.max_disagreement,
                tolerance: report.tolerance,
            },
        }
    }
}

/// Shortest round-tripping decimal, switching to exponent form for very small
/// or very large magnitudes.
pub(crate) fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

pub(crate) fn fmt_complex(z: Scalar) -> String {
    let im = fmt_f64(z.im);
    let sign = if im.starts_with('-') { "" } else { "+" };
    format!("{}{sign}{im}i", fmt_f64(z.re))
}

pub(crate) fn write_error(err: &mut dyn Write, format: Format, e: &Error) -> std::io::Result<()> {
    match format {
        Format::Json => {
            let body =
                serde_json::json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
            writeln!(err, "{body}")
        }
        Format::Csv | Format::Plain => writeln!(err, "{}: {}", e.kind(), e),
    }
}

pub(crate) fn write_invariant(
    out: &mut dyn Write,
    format: Format,
    ctx: &RootContext,
    link: &ColoredLink,
    report: &InvariantReport,
) -> Result<(), Failure> {
    let doc = InvariantJson::new(ctx, link, report);
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "component",
                "strand",
                "cut_re",
                "cut_im",
                "modified_dim_re",
                "modified_dim_im",
                "product_re",
                "product_im",
            ])?;
            for c in &doc.per_cut {
                w.write_record([
                    c.component.to_string(),
                    c.strand.to_string(),
                    fmt_f64(c.cut.re),
                    fmt_f64(c.cut.im),
                    fmt_f64(c.modified_dim.re),
                    fmt_f64(c.modified_dim.im),
                    fmt_f64(c.product.re),
                    fmt_f64(c.product.im),
                ])?;
            }
            w.flush()?;
        }
        Format::Plain => {
            writeln!(out, "N = {}, braid {}", doc.n, doc.braid)?;
            for (i, c) in doc.components.iter().enumerate() {
                writeln!(
                    out,
                    "component {i}: strands {:?}, color {}, writhe {}",
                    c.strands,
                    fmt_complex(link.colors()[i].0),
                    c.writhe
                )?;
            }
            for c in &report.per_cut {
                writeln!(
                    out,
                    "cut at strand {}: <T> = {}, d = {}, d<T> = {}",
                    c.strand,
                    fmt_complex(c.cut),
                    fmt_complex(c.modified_dim),
                    fmt_complex(c.product)
                )?;
            }
            writeln!(out, "F' = {}", fmt_complex(report.value))?;
            writeln!(
                out,
                "F' (zero framing) = {}",
                fmt_complex(report.unframed_value)
            )?;
            writeln!(
                out,
                "max disagreement {:e} (tolerance {:e})",
                report.max_disagreement, report.tolerance
            )?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CheckJson<'a> {
    name: &'a str,
    #[serde(rename = "N")]
    n: usize,
    samples: usize,
    max_residual: f64,
    threshold: f64,
    passed: bool,
    error: Option<&'a str>,
}

pub(crate) fn write_suite(
    out: &mut dyn Write,
    format: Format,
    config: &SuiteConfig,
    suite: &SuiteReport,
) -> Result<(), Failure> {
    let checks: Vec<CheckJson> = suite
        .checks
        .iter()
        .map(|c| CheckJson {
            name: c.name,
            n: c.n,
            samples: c.samples,
            max_residual: c.max_residual,
            threshold: c.threshold,
            passed: c.passed(),
            error: c.error.as_deref(),
        })
        .collect();
    match format {
        Format::Json => {
            let doc = serde_json::json!({
                "seed": suite.seed,
                "orders": config.orders,
                "passed": suite.passed(),
                "checks": checks,
            });
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "name",
                "N",
                "samples",
                "max_residual",
                "threshold",
                "passed",
                "error",
            ])?;
            for c in &checks {
                w.write_record([
                    c.name.to_string(),
                    c.n.to_string(),
                    c.samples.to_string(),
                    fmt_f64(c.max_residual),
                    fmt_f64(c.threshold),
                    c.passed.to_string(),
                    c.error.unwrap_or("").to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Plain => {
            for c in &checks {
                writeln!(
                    out,
                    "{} {:<44} N={} samples={:<4} residual={:.3e} threshold={:.1e}{}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.n,
                    c.samples,
                    c.max_residual,
                    c.threshold,
                    c.error.map(|e| format!(" ({e})")).unwrap_or_default()
                )?;
            }
            writeln!(
                out,
                "seed {}: {}",
                suite.seed,
                if suite.passed() {
                    "all checks passed"
                } else {
                    "FAILED"
                }
            )?;
        }
    }
    Ok(())
}

pub(crate) fn write_scalar(
    out: &mut dyn Write,
    format: Format,
    name: &str,
    n: &usize,
    inputs: &[(&str, HighestWeight)],
    value: Scalar,
) -> Result<(), Failure> {
    match format {
        Format::Json => {
            let mut doc = serde_json::Map::new();
            doc.insert("N".into(), (*n).into());
            for (key, w) in inputs {
                doc.insert((*key).into(), serde_json::to_value(ComplexJson::from(*w))?);
            }
            doc.insert(name.into(), serde_json::to_value(ComplexJson::from(value))?);
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let mut header = vec!["N".to_string()];
            let mut row = vec![n.to_string()];
            for (key, wt) in inputs {
                header.extend([format!("{key}_re"), format!("{key}_im")]);
                row.extend([fmt_f64(wt.0.re), fmt_f64(wt.0.im)]);
            }
            header.extend([format!("{name}_re"), format!("{name}_im")]);
            row.extend([fmt_f64(value.re), fmt_f64(value.im)]);
            w.write_record(&header)?;
            w.write_record(&row)?;
            w.flush()?;
        }
        Format::Plain => {
            writeln!(out, "{name} = {}", fmt_complex(value))?;
        }
    }
    Ok(())
}
