use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::policy::StepRecord;

use super::experiment::ExperimentReport;

pub const CSV_HEADER: &str = "knob,T,K,mean_reward,stderr,benchmark,relative_error,policy";
const BENCHMARK_HEADER: &str = "instance_id,benchmark_kind,value,mu_star,slack";
const TRAJECTORY_HEADER: &str =
    "t,value,competitor_bid,bid,won,payment,reward,gradient,mu_after,budget_after";

/// Shortest decimal rendering with at most 12 significant digits.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let trim = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = trim(format!("{x:.decimals$}"));
        if s == "-0" { "0".into() } else { s }
    } else {
        let s = format!("{x:.11e}");
        let (mantissa, power) = s.split_once('e').unwrap_or((&s, "0"));
        format!("{}e{power}", trim(mantissa.to_string()))
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Experiment rows in the CSV schema, header included.
pub fn render_csv(report: &ExperimentReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            format_sig(row.knob),
            row.horizon,
            row.reps,
            format_sig(row.mean_reward),
            format_sig(row.stderr),
            format_sig(row.benchmark),
            format_sig(row.relative_error),
            row.policy.label()
        );
    }
    out
}

pub fn emit_csv(report: &ExperimentReport, path: &Path) -> Result<()> {
    write_file(path, &render_csv(report))
}

const COLORS: [&str; 3] = ["#1f77b4", "#d62728", "#2ca02c"];

/// Static line chart of relative error against the knob, one line per
/// policy.
pub fn render_svg(report: &ExperimentReport) -> String {
    let (w, h, m) = (640.0, 400.0, 60.0);
    let xs = report.rows.iter().map(|r| r.knob);
    let ys = report.rows.iter().map(|r| r.relative_error);
    let (x0, x1) = span(xs);
    let (y0, y1) = span(ys.chain([0.0]));
    let px = |x: f64| m + (x - x0) / (x1 - x0) * (w - 2.0 * m);
    let py = |y: f64| h - m - (y - y0) / (y1 - y0) * (h - 2.0 * m);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<path d="M{m} {} H{} M{m} {} V{m}" stroke="black" fill="none"/>"#,
        h - m,
        w - m,
        h - m
    );
    for (x, anchor) in [(x0, "start"), (x1, "end")] {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="12" text-anchor="{anchor}">{}</text>"#,
            px(x),
            h - m + 18.0,
            format_sig(x)
        );
    }
    for y in [y0, y1] {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="12" text-anchor="end">{}</text>"#,
            m - 6.0,
            py(y) + 4.0,
            format_sig((y * 1e4).round() / 1e4)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="13" text-anchor="middle">knob</text>"#,
        w / 2.0,
        h - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="15" y="{}" font-size="13" text-anchor="middle" transform="rotate(-90 15 {})">relative error</text>"#,
        h / 2.0,
        h / 2.0
    );
    for (i, policy) in report.policies().into_iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let points: Vec<String> = report
            .series(policy)
            .iter()
            .map(|r| format!("{:.2},{:.2}", px(r.knob), py(r.relative_error)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" stroke="{color}" stroke-width="2" fill="none"/>"#,
            points.join(" ")
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="12" fill="{color}">{}</text>"#,
            w - m - 110.0,
            m + 16.0 * i as f64,
            policy.label()
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

pub fn emit_svg(report: &ExperimentReport, path: &Path) -> Result<()> {
    write_file(path, &render_svg(report))
}

/// One line of a benchmark report.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRow {
    pub instance_id: String,
    pub kind: String,
    pub value: f64,
    pub mu_star: f64,
    pub slack: f64,
}

pub fn emit_benchmark_csv(rows: &[BenchmarkRow], path: &Path) -> Result<()> {
    let mut out = String::from(BENCHMARK_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            row.instance_id,
            row.kind,
            format_sig(row.value),
            format_sig(row.mu_star),
            format_sig(row.slack)
        );
    }
    write_file(path, &out)
}

pub fn emit_trajectory_csv(records: &[StepRecord], path: &Path) -> Result<()> {
    let mut out = String::from(TRAJECTORY_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.t,
            format_sig(r.value),
            format_sig(r.competitor_bid),
            format_sig(r.bid),
            u8::from(r.won),
            format_sig(r.payment),
            format_sig(r.reward),
            format_sig(r.gradient),
            format_sig(r.mu_after),
            format_sig(r.budget_after)
        );
    }
    write_file(path, &out)
}
