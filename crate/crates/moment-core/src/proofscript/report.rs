use serde::Serialize;

use super::runner::TheoremOutcome;
use super::schema::{CheckStatus, SCHEMA_VERSION};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    schema: u32,
    theorem: &'a str,
    reports: &'a [super::schema::CheckReport],
}

/// Render an outcome; the JSON form is stable apart from elapsed times.
pub fn render_report(outcome: &TheoremOutcome, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => serde_json::to_string_pretty(&JsonReport {
            schema: SCHEMA_VERSION,
            theorem: &outcome.name,
            reports: &outcome.reports,
        })
        .expect("reports serialize"),
        ReportFormat::Text => {
            let mut out = String::new();
            for r in &outcome.reports {
                let tag = match r.status {
                    CheckStatus::Pass => "pass",
                    CheckStatus::Fail => "FAIL",
                    CheckStatus::Error => "ERROR",
                    CheckStatus::Skipped => "skip",
                };
                out.push_str(&format!("{tag:5} {:28} {:6} ms", r.id, r.elapsed_ms));
                if !r.message.is_empty() {
                    out.push_str("  ");
                    out.push_str(&truncate(&r.message, 120));
                }
                if !r.residual.is_empty() {
                    out.push_str(&format!("  residual: {}", truncate(&r.residual, 160)));
                }
                out.push('\n');
            }
            let (p, f, e, s) = outcome.counts();
            out.push_str(&format!(
                "{}: {p} passed, {f} failed, {e} errors, {s} skipped\n",
                outcome.name
            ));
            out
        }
    }
}

fn truncate(s: &str, limit: usize) -> String {
    if s.len() <= limit {
        s.to_string()
    } else {
        format!("{}... ({} bytes)", &s[..limit], s.len())
    }
}
