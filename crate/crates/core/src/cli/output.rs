//! CSV traces, single-line JSON summaries and SVG line plots.
//!
//! Plots are rendered from CSV text only, so regenerating a plot from a saved
//! CSV file reproduces it byte for byte.

use std::fmt::Write as _;

use crate::optimizers::RunReport;

/// Round-trippable float formatting (17 significant digits).
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_error(e: impl std::fmt::Display) -> String {
    format!("csv: {e}")
}

/// `iter,phi,gm_norm,perturbed_flag[,x_1..x_d]`; the flag marks iterations
/// inside an escape window.
pub fn trace_csv(report: &RunReport, with_points: bool) -> Result<String, String> {
    let dim = report.final_point.dim();
    let with_points = with_points && report.trace.iter().all(|r| r.point.is_some());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![
        "iter".to_string(),
        "phi".to_string(),
        "gm_norm".to_string(),
        "perturbed_flag".to_string(),
    ];
    if with_points {
        header.extend((1..=dim).map(|i| format!("x_{i}")));
    }
    w.write_record(&header).map_err(csv_error)?;
    for r in &report.trace {
        let mut row = vec![
            r.iter.to_string(),
            fmt_f64(r.phi),
            fmt_f64(r.gm_norm),
            u8::from(r.in_window).to_string(),
        ];
        if let (true, Some(p)) = (with_points, &r.point) {
            row.extend(p.iter().map(|v| fmt_f64(*v)));
        }
        w.write_record(&row).map_err(csv_error)?;
    }
    into_string(w)
}

fn into_string(w: csv::Writer<Vec<u8>>) -> Result<String, String> {
    let bytes = w.into_inner().map_err(csv_error)?;
    String::from_utf8(bytes).map_err(csv_error)
}

/// Long-format comparison table `method,iter,phi,gm_norm`.
pub fn compare_csv(reports: &[RunReport]) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["method", "iter", "phi", "gm_norm"])
        .map_err(csv_error)?;
    for rep in reports {
        for r in &rep.trace {
            w.write_record([
                rep.method.clone(),
                r.iter.to_string(),
                fmt_f64(r.phi),
                fmt_f64(r.gm_norm),
            ])
            .map_err(csv_error)?;
        }
    }
    into_string(w)
}

/// `eta,method,success_rate,trials`.
pub fn sweep_csv(rows: &[(f64, String, f64, usize)]) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["eta", "method", "success_rate", "trials"])
        .map_err(csv_error)?;
    for (eta, method, rate, trials) in rows {
        w.write_record([fmt_f64(*eta), method.clone(), fmt_f64(*rate), trials.to_string()])
            .map_err(csv_error)?;
    }
    into_string(w)
}

/// A named polyline.
pub type Series = (String, Vec<(f64, f64)>);

fn read_rows(csv_text: &str) -> Result<(csv::StringRecord, Vec<csv::StringRecord>), String> {
    let mut r = csv::Reader::from_reader(csv_text.as_bytes());
    let header = r.headers().map_err(csv_error)?.clone();
    let rows = r
        .records()
        .collect::<Result<Vec<_>, _>>()
        .map_err(csv_error)?;
    Ok((header, rows))
}

fn column(header: &csv::StringRecord, name: &str) -> Result<usize, String> {
    header
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| format!("csv: missing column {name}"))
}

fn num(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|e| format!("csv: bad number {s:?}: {e}"))
}

/// `phi` against iteration from a trace CSV.
pub fn trace_svg(csv_text: &str, title: &str) -> Result<String, String> {
    let (h, rows) = read_rows(csv_text)?;
    let (ci, cp) = (column(&h, "iter")?, column(&h, "phi")?);
    let pts = rows
        .iter()
        .map(|r| Ok((num(&r[ci])?, num(&r[cp])?)))
        .collect::<Result<Vec<_>, String>>()?;
    Ok(line_plot_svg(title, "iteration", "phi", &[("phi".to_string(), pts)]))
}

/// One `phi` curve per method from a comparison CSV.
pub fn compare_svg(csv_text: &str, title: &str) -> Result<String, String> {
    let (h, rows) = read_rows(csv_text)?;
    let (cm, ci, cp) = (column(&h, "method")?, column(&h, "iter")?, column(&h, "phi")?);
    let mut series: Vec<Series> = Vec::new();
    for r in &rows {
        let p = (num(&r[ci])?, num(&r[cp])?);
        match series.iter_mut().find(|(n, _)| n == &r[cm]) {
            Some((_, v)) => v.push(p),
            None => series.push((r[cm].to_string(), vec![p])),
        }
    }
    Ok(line_plot_svg(title, "iteration", "phi", &series))
}

/// Success rate against `log10(eta)` per method from a sweep CSV.
pub fn sweep_svg(csv_text: &str, title: &str) -> Result<String, String> {
    let (h, rows) = read_rows(csv_text)?;
    let (ce, cm, cr) = (
        column(&h, "eta")?,
        column(&h, "method")?,
        column(&h, "success_rate")?,
    );
    let mut series: Vec<Series> = Vec::new();
    for r in &rows {
        let p = (num(&r[ce])?.log10(), num(&r[cr])?);
        match series.iter_mut().find(|(n, _)| n == &r[cm]) {
            Some((_, v)) => v.push(p),
            None => series.push((r[cm].to_string(), vec![p])),
        }
    }
    Ok(line_plot_svg(title, "log10(eta)", "success rate", &series))
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// A plain SVG 1.1 line chart with axes, tick labels and a legend.
pub fn line_plot_svg(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    const W: f64 = 720.0;
    const H: f64 = 440.0;
    const L: f64 = 80.0;
    const R: f64 = 150.0;
    const T: f64 = 40.0;
    const B: f64 = 60.0;

    let finite = series
        .iter()
        .flat_map(|(_, p)| p.iter())
        .filter(|(x, y)| x.is_finite() && y.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in finite {
        x0 = x0.min(*x);
        x1 = x1.max(*x);
        y0 = y0.min(*y);
        y1 = y1.max(*y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let pw = W - L - R;
    let ph = H - T - B;
    let sx = |x: f64| L + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| T + ph - (y - y0) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">
<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>
<text x="{:.1}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        L + pw / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{L}" y="{T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let _ = writeln!(
            s,
            r##"<line x1="{0:.1}" y1="{1}" x2="{0:.1}" y2="{2}" stroke="#dddddd"/><text x="{0:.1}" y="{3}" font-family="sans-serif" font-size="11" text-anchor="middle">{4}</text>"##,
            sx(xv),
            T,
            T + ph,
            T + ph + 16.0,
            tick(xv)
        );
        let _ = writeln!(
            s,
            r##"<line x1="{1}" y1="{0:.1}" x2="{2}" y2="{0:.1}" stroke="#dddddd"/><text x="{3}" y="{4:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{5}</text>"##,
            sy(yv),
            L,
            L + pw,
            L - 6.0,
            sy(yv) + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#,
        L + pw / 2.0,
        H - 18.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{0:.1}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 18 {0:.1})">{1}</text>"#,
        T + ph / 2.0,
        escape(y_label)
    );
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = pts
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            path.join(" ")
        );
        let ly = T + 16.0 + 18.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{0}" y1="{1:.1}" x2="{2}" y2="{1:.1}" stroke="{color}" stroke-width="2"/><text x="{3}" y="{4:.1}" font-family="sans-serif" font-size="12">{5}</text>"#,
            L + pw + 12.0,
            ly,
            L + pw + 36.0,
            L + pw + 42.0,
            ly + 4.0,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn tick(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-2..1e4).contains(&a) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}
