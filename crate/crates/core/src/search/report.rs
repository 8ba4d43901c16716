//! Comparison reports for a record table, and the cold-start audit.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde_json::{json, Value};

use super::{certify_irreducible, RecordTable, SearchError, LOWER_BOUND_SLACK};
use crate::capacity::{all_bounds, finite_degree_lower_bound, BoundKind, BoundValue};
use crate::heights::weil_height;
use crate::padic::PrecisionPolicy;
use crate::place::{parse_places_key, LocalFieldSpec};
use crate::poly::IntPolynomial;
use crate::splitting::{Decision, SplittingChecker};

const BOX_LABEL: &str = "minimum over the enumerated box";
const FOOTER: &str = "Only monic polynomials (algebraic integers) are searched. Whether \
non-integral totally split numbers can have smaller limit points is an open question \
not addressed by this data.";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Text,
    /// Static SVG scatter plot of height against degree.
    Plot,
}

impl FromStr for ReportFormat {
    type Err = SearchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "text" => Ok(ReportFormat::Text),
            "plot" | "svg" => Ok(ReportFormat::Plot),
            _ => Err(SearchError::Config(format!("unknown report format {s:?}"))),
        }
    }
}

struct Row {
    degree: usize,
    polynomial: Option<String>,
    coeffs: Option<Vec<String>>,
    height: Option<f64>,
    height_text: Option<String>,
    lower_bound: f64,
    envelope: Option<f64>,
}

struct Summary {
    places: Vec<LocalFieldSpec>,
    bounds: Vec<BoundValue>,
    conjecture: f64,
    rows: Vec<Row>,
}

fn summarize(table: &RecordTable) -> Result<Summary, SearchError> {
    let places = parse_places_key(&table.header.s_key).map_err(|e| SearchError::Schema(e.to_string()))?;
    let bounds = all_bounds(&places);
    let conjecture = bounds
        .iter()
        .find(|b| b.kind == BoundKind::Conjecture)
        .map(BoundValue::value)
        .unwrap_or(f64::NAN);
    let [dmin, dmax] = table.header.degrees;
    let mut rows = Vec::new();
    for degree in dmin..=dmax {
        let rec = table.records.get(&degree);
        let lb = finite_degree_lower_bound(degree, &places)
            .map_err(|e| SearchError::Config(e.to_string()))?
            .value();
        let poly = rec
            .map(|r| r.coeffs_i64().map(|c| IntPolynomial::from_i64(&c).to_string()))
            .transpose()?;
        rows.push(Row {
            degree,
            polynomial: poly,
            coeffs: rec.map(|r| r.coeffs.clone()),
            height: rec.map(|r| r.height_value()),
            height_text: rec.map(|r| r.height.clone()),
            lower_bound: lb,
            envelope: None,
        });
    }
    // min height among degrees >= d
    let mut running: Option<f64> = None;
    for row in rows.iter_mut().rev() {
        if let Some(h) = row.height {
            running = Some(running.map_or(h, |m| m.min(h)));
        }
        row.envelope = running;
    }
    Ok(Summary {
        places,
        bounds,
        conjecture,
        rows,
    })
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "none".to_string(), |v| format!("{v:.10}"))
}

pub fn report(table: &RecordTable, format: ReportFormat) -> Result<String, SearchError> {
    let s = summarize(table)?;
    Ok(match format {
        ReportFormat::Json => render_json(table, &s).to_string() + "\n",
        ReportFormat::Csv => render_csv(&s),
        ReportFormat::Text => render_text(table, &s),
        ReportFormat::Plot => render_svg(table, &s),
    })
}

fn render_json(table: &RecordTable, s: &Summary) -> Value {
    let rows: Vec<Value> = s
        .rows
        .iter()
        .map(|r| {
            json!({
                "degree": r.degree,
                "polynomial": r.polynomial.clone().unwrap_or_else(|| "none".into()),
                "coeffs": r.coeffs,
                "height": r.height_text,
                "finite_degree_lower_bound": format!("{:.10}", r.lower_bound),
                "envelope": r.envelope.map(|v| format!("{v:.10}")),
                "gap_to_conjecture": r.height.map(|h| format!("{:.10}", h - s.conjecture)),
            })
        })
        .collect();
    json!({
        "s_key": table.header.s_key,
        "places": s.places.iter().map(LocalFieldSpec::to_json).collect::<Vec<_>>(),
        "box": {
            "degrees": table.header.degrees,
            "coeff_bound": table.header.coeff_bound,
            "label": BOX_LABEL,
            "complete": table.header.complete,
        },
        "bounds": s.bounds.iter().map(BoundValue::to_json).collect::<Vec<_>>(),
        "rows": rows,
        "note": FOOTER,
    })
}

fn render_csv(s: &Summary) -> String {
    let mut out = String::from("degree,polynomial,height,finite_degree_lower_bound,envelope,gap_to_conjecture\n");
    for r in &s.rows {
        let _ = writeln!(
            out,
            "{},\"{}\",{},{:.10},{},{}",
            r.degree,
            r.polynomial.as_deref().unwrap_or("none"),
            r.height_text.as_deref().unwrap_or("none"),
            r.lower_bound,
            fmt_opt(r.envelope),
            fmt_opt(r.height.map(|h| h - s.conjecture)),
        );
    }
    for b in &s.bounds {
        let _ = writeln!(out, "bound:{},\"{}\",{:.10},,,", b.kind, b.exact, b.value());
    }
    out
}

fn render_text(table: &RecordTable, s: &Summary) -> String {
    let mut out = String::new();
    let [dmin, dmax] = table.header.degrees;
    let _ = writeln!(out, "places {}", s.places.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" "));
    let _ = writeln!(
        out,
        "box: degrees {dmin}..{dmax}, coefficients in [-{b}, {b}]; heights are the {BOX_LABEL}{}",
        if table.header.complete { "" } else { " (incomplete run)" },
        b = table.header.coeff_bound
    );
    let _ = writeln!(out);
    let _ = writeln!(out, "{:<16} {:>14}  exact", "bound", "value");
    for b in &s.bounds {
        let _ = writeln!(out, "{:<16} {:>14.10}  {}", b.kind.name(), b.value(), b.exact);
    }
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:<7} {:<36} {:>14} {:>14} {:>14} {:>14}",
        "degree", "polynomial", "height", "lower_bound", "envelope", "gap_to_conj"
    );
    for r in &s.rows {
        let _ = writeln!(
            out,
            "{:<7} {:<36} {:>14} {:>14.10} {:>14} {:>14}",
            r.degree,
            r.polynomial.as_deref().unwrap_or("none"),
            r.height_text.as_deref().unwrap_or("none"),
            r.lower_bound,
            fmt_opt(r.envelope),
            fmt_opt(r.height.map(|h| h - s.conjecture)),
        );
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "{FOOTER}");
    out
}

fn render_svg(table: &RecordTable, s: &Summary) -> String {
    let (w, h, m) = (640.0, 400.0, 56.0);
    let [dmin, dmax] = table.header.degrees;
    let bound = |k: BoundKind| s.bounds.iter().find(|b| b.kind == k).map(BoundValue::value);
    let lines: Vec<(&str, f64, &str)> = [
        ("bz_lower_all", bound(BoundKind::BzLowerAll), "#888888"),
        ("lower_integers", bound(BoundKind::LowerIntegers), "#1f77b4"),
        ("conjecture = upper", bound(BoundKind::Conjecture), "#d62728"),
    ]
    .into_iter()
    .filter_map(|(name, v, col)| v.map(|v| (name, v, col)))
    .collect();
    let ymax = s
        .rows
        .iter()
        .filter_map(|r| r.height)
        .chain(lines.iter().map(|l| l.1))
        .fold(0.0f64, f64::max)
        * 1.15
        + 1e-3;
    let span = (dmax - dmin).max(1) as f64;
    let x = |d: usize| m + (d - dmin) as f64 / span * (w - 2.0 * m);
    let y = |v: f64| h - m - v.max(0.0) / ymax * (h - 2.0 * m);

    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="11">"#);
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{m}" y="20" font-size="13">height vs degree, S = {}: {BOX_LABEL}</text>"#,
        table.header.s_key
    );
    let _ = writeln!(
        out,
        r#"<line x1="{m}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/><line x1="{m}" y1="{m}" x2="{m}" y2="{b}" stroke="black"/>"#,
        b = h - m,
        r = w - m
    );
    for d in dmin..=dmax {
        let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{d}</text>"#, x(d), h - m + 16.0);
    }
    for k in 0..=4 {
        let v = ymax * k as f64 / 4.0;
        let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{v:.3}</text>"#, m - 6.0, y(v) + 4.0);
    }
    for (name, v, col) in &lines {
        let _ = writeln!(
            out,
            r#"<line x1="{m}" y1="{yy:.1}" x2="{r}" y2="{yy:.1}" stroke="{col}" stroke-dasharray="6 3"/><text x="{r}" y="{t:.1}" text-anchor="end" fill="{col}">{name} {v:.5}</text>"#,
            yy = y(*v),
            r = w - m,
            t = y(*v) - 4.0
        );
    }
    let curve: Vec<String> = s
        .rows
        .iter()
        .map(|r| format!("{:.1},{:.1}", x(r.degree), y(r.lower_bound)))
        .collect();
    let _ = writeln!(out, r##"<polyline points="{}" fill="none" stroke="#2ca02c"/>"##, curve.join(" "));
    for r in &s.rows {
        match r.height {
            Some(v) => {
                let _ = writeln!(
                    out,
                    r#"<circle cx="{:.1}" cy="{:.1}" r="4" fill="black"><title>{}: {:.10}</title></circle>"#,
                    x(r.degree),
                    y(v),
                    r.polynomial.as_deref().unwrap_or(""),
                    v
                );
            }
            None => {
                let _ = writeln!(out, r##"<text x="{:.1}" y="{:.1}" text-anchor="middle" fill="#888888">none</text>"##, x(r.degree), h - m - 6.0);
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AuditReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl AuditReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Recheck every record from scratch: splitting at every place, irreducibility,
/// height and the finite-degree lower bound.
pub fn audit(path: &Path) -> Result<AuditReport, SearchError> {
    let table = RecordTable::load(path)?;
    let places = parse_places_key(&table.header.s_key).map_err(|e| SearchError::Schema(e.to_string()))?;
    let checker = SplittingChecker::new(&places, PrecisionPolicy::from_env())?;
    let mut rep = AuditReport::default();
    for r in table.records.values() {
        rep.checked += 1;
        let c = r.coeffs_i64()?;
        let f = IntPolynomial::from_i64(&c);
        let mut fail = |m: String| rep.failures.push(format!("degree {}: {f}: {m}", r.degree));
        if r.s_key != table.header.s_key || f.degree() != Some(r.degree) || !f.is_monic() {
            fail("record does not match its header".into());
            continue;
        }
        match checker.check(&f).map(|t| t.decision) {
            Ok(Decision::Yes) => {}
            Ok(d) => fail(format!("splitting check gives {d:?}")),
            Err(e) => fail(format!("splitting check failed: {e}")),
        }
        match certify_irreducible(&f) {
            Ok(true) => {}
            Ok(false) => fail("reducible".into()),
            Err(e) => fail(format!("irreducibility check failed: {e}")),
        }
        match weil_height(&f) {
            Ok(h) => {
                if (h.h - r.height_value()).abs() > 1e-12 + h.error_radius {
                    fail(format!("stored height {} but recomputed {:.12}", r.height, h.h));
                }
                let lb = finite_degree_lower_bound(r.degree, &places)
                    .map_err(|e| SearchError::Config(e.to_string()))?
                    .value();
                if h.h + h.error_radius < lb - LOWER_BOUND_SLACK {
                    fail(format!("height below the lower bound {lb:.12}"));
                }
            }
            Err(e) => fail(format!("height failed: {e}")),
        }
    }
    Ok(rep)
}
