//! Minimal SVG line chart: fidelity against cycle count.

use std::fmt::Write as _;
use std::path::Path;

use super::{BaselineRow, HarnessError, ResultRow};

#[derive(Clone, Debug)]
pub struct PlotStyle {
    pub width: f64,
    pub height: f64,
    pub raw_color: &'static str,
    pub corrected_color: &'static str,
    pub baseline_color: &'static str,
    /// Dash patterns cycled over p2 levels.
    pub dashes: Vec<&'static str>,
}

impl Default for PlotStyle {
    fn default() -> Self {
        Self {
            width: 640.0,
            height: 420.0,
            raw_color: "#000000",
            corrected_color: "#1f5fbf",
            baseline_color: "#b03030",
            dashes: vec!["", "8 4", "2 3", "8 3 2 3"],
        }
    }
}

const MARGIN: f64 = 50.0;

/// One polyline per (p2, corrected?) series, plus one for the baseline.
pub fn render_svg(rows: &[ResultRow], baseline: &[BaselineRow], style: &PlotStyle) -> Result<String, HarnessError> {
    if rows.is_empty() && baseline.is_empty() {
        return Err(HarnessError::Empty);
    }
    let cycles = rows.iter().map(|r| r.cycles).chain(baseline.iter().map(|b| b.cycles));
    let (cmin, cmax) = cycles.fold((usize::MAX, 0), |(a, b), c| (a.min(c), b.max(c)));
    let fids = rows
        .iter()
        .flat_map(|r| [r.fid_raw, r.fid_corr])
        .chain(baseline.iter().map(|b| b.fidelity));
    let fmin = fids.fold(1.0f64, f64::min).min(0.95);
    let fmin = (fmin * 20.0).floor() / 20.0;
    let (w, h) = (style.width - 2.0 * MARGIN, style.height - 2.0 * MARGIN);
    let x = |c: usize| MARGIN + w * (c - cmin) as f64 / (cmax - cmin).max(1) as f64;
    let y = |f: f64| MARGIN + h * (1.0 - (f - fmin) / (1.0 - fmin).max(1e-9));

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif" font-size="11">"#,
        style.width, style.height
    );
    let _ = writeln!(
        s,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{w}" height="{h}" fill="none" stroke="#999"/>"##
    );
    for c in cmin..=cmax {
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{c}</text>"#, x(c), MARGIN + h + 16.0);
    }
    let steps = ((1.0 - fmin) / 0.05).round() as usize;
    for k in 0..=steps {
        let f = fmin + 0.05 * k as f64;
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{f:.2}</text>"#, MARGIN - 6.0, y(f) + 4.0);
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">cycles</text>"#,
        MARGIN + w / 2.0,
        style.height - 8.0
    );

    let mut levels: Vec<f64> = Vec::new();
    for r in rows {
        if !levels.contains(&r.p2) {
            levels.push(r.p2);
        }
    }
    let mut legend = 0;
    for (i, &p2) in levels.iter().enumerate() {
        let dash = style.dashes[i % style.dashes.len()];
        let series: Vec<&ResultRow> = rows.iter().filter(|r| r.p2 == p2).collect();
        for (corrected, color) in [(false, style.raw_color), (true, style.corrected_color)] {
            let pts: Vec<String> = series
                .iter()
                .map(|r| format!("{:.1},{:.1}", x(r.cycles), y(if corrected { r.fid_corr } else { r.fid_raw })))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" stroke-dasharray="{dash}" points="{}"/>"#,
                pts.join(" ")
            );
            let label = format!("p2={p2} {}", if corrected { "corrected" } else { "raw" });
            let ly = MARGIN + 14.0 * legend as f64 + 10.0;
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="{ly:.1}" fill="{color}">{label}</text>"#,
                MARGIN + w - 120.0
            );
            legend += 1;
        }
    }
    if !baseline.is_empty() {
        let pts: Vec<String> = baseline.iter().map(|b| format!("{:.1},{:.1}", x(b.cycles), y(b.fidelity))).collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-width="2" points="{}"/>"#,
            style.baseline_color,
            pts.join(" ")
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn write_svg(path: &Path, rows: &[ResultRow], baseline: &[BaselineRow], style: &PlotStyle) -> Result<(), HarnessError> {
    std::fs::write(path, render_svg(rows, baseline, style)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(cycles: usize, p2: f64) -> ResultRow {
        ResultRow {
            cycles,
            p2,
            fid_raw: 0.9,
            fid_raw_err: 0.0,
            fid_corr: 0.95,
            fid_corr_err: 0.0,
            shots: 1,
            seed: 0,
        }
    }

    #[test]
    fn one_polyline_per_series_with_distinct_styles() {
        let rows = [row(1, 0.001), row(2, 0.001), row(1, 0.01), row(2, 0.01)];
        let svg = render_svg(&rows, &[], &PlotStyle::default()).unwrap();
        let lines: Vec<&str> = svg.lines().filter(|l| l.starts_with("<polyline")).collect();
        assert_eq!(lines.len(), 4);
        let styles: std::collections::HashSet<String> =
            lines.iter().map(|l| l.split(" points").next().unwrap().to_string()).collect();
        assert_eq!(styles.len(), 4);
        assert!(render_svg(&[], &[], &PlotStyle::default()).is_err());
    }
}
