use crate::sweep::{Row, SweepReport};
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

/// Writes `bytes` to a temporary file next to `path` and renames it.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Auxiliary column names across all rows, sorted.
fn aux_columns(rows: &[Row]) -> Vec<String> {
    let mut names: Vec<String> = rows.iter().flat_map(|r| r.aux.keys().cloned()).collect();
    names.sort();
    names.dedup();
    names
}

/// `k,measured,k_times_measured` followed by the sorted auxiliary columns.
/// Missing auxiliary values are empty.
pub fn to_csv(report: &SweepReport) -> String {
    let aux = aux_columns(&report.rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![
        "k".to_string(),
        "measured".into(),
        "k_times_measured".into(),
    ];
    header.extend(aux.iter().cloned());
    w.write_record(&header).expect("in-memory write");
    for r in &report.rows {
        let mut rec = vec![
            r.k.to_string(),
            format!("{:e}", r.measured),
            format!("{:e}", r.k_times_measured),
        ];
        rec.extend(
            aux.iter()
                .map(|n| r.aux.get(n).map(|v| format!("{v:e}")).unwrap_or_default()),
        );
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
}

pub fn to_json(report: &SweepReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const MARGIN: f64 = 60.0;

/// Log-log plot of measured against `k` with the fitted slope line.
pub fn to_svg(report: &SweepReport) -> String {
    let pts: Vec<(f64, f64)> = report
        .rows
        .iter()
        .filter(|r| r.measured.is_finite() && r.measured > 0.0)
        .map(|r| ((r.k as f64).log10(), r.measured.log10()))
        .collect();
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="14">{} (log-log)</text>"#,
        W / 2.0,
        report.experiment.name()
    );
    let (x0, y0, x1, y1) = (MARGIN, H - MARGIN, W - MARGIN / 2.0, MARGIN);
    let _ = writeln!(
        s,
        r#"<path d="M{x0} {y1} L{x0} {y0} L{x1} {y0}" stroke="black" fill="none"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">log10 k</text>"#,
        (x0 + x1) / 2.0,
        H - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="15" y="{}" font-family="sans-serif" font-size="12" transform="rotate(-90 15 {})">log10 measured</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );
    if pts.is_empty() {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">no positive measurements</text>"#,
            W / 2.0,
            H / 2.0
        );
        s.push_str("</svg>\n");
        return s;
    }
    let span = |v: &mut dyn Iterator<Item = f64>| {
        let (lo, hi) = v.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| {
            (a.min(x), b.max(x))
        });
        if hi - lo < 1e-9 {
            (lo - 0.5, hi + 0.5)
        } else {
            (lo - 0.05 * (hi - lo), hi + 0.05 * (hi - lo))
        }
    };
    let (xa, xb) = span(&mut pts.iter().map(|p| p.0));
    let (ya, yb) = span(&mut pts.iter().map(|p| p.1));
    let px = |x: f64| x0 + (x - xa) / (xb - xa) * (x1 - x0);
    let py = |y: f64| y0 - (y - ya) / (yb - ya) * (y0 - y1);
    for r in &report.rows {
        let x = px((r.k as f64).log10());
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="10">{}</text>"#,
            y0 + 14.0,
            r.k
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="10">{:.2}</text>"#,
        x0 - 4.0,
        py(ya),
        ya
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="10">{:.2}</text>"#,
        x0 - 4.0,
        py(yb),
        yb
    );
    for &(x, y) in &pts {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="steelblue"/>"#,
            px(x),
            py(y)
        );
    }
    if let Some(fit) = &report.slope {
        let used: Vec<&(f64, f64)> = pts
            .iter()
            .filter(|p| Some(10f64.powf(p.0).round() as usize) != fit.excluded_k)
            .collect();
        let n = used.len() as f64;
        let mx = used.iter().map(|p| p.0).sum::<f64>() / n;
        let my = used.iter().map(|p| p.1).sum::<f64>() / n;
        let line = |x: f64| my + fit.slope * (x - mx);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="firebrick" stroke-dasharray="6 3"/>"#,
            px(xa),
            py(line(xa)),
            px(xb),
            py(line(xb))
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="12" fill="firebrick">slope {:.3} ± {:.3}</text>"#,
            x1,
            y1 + 14.0,
            fit.slope,
            fit.half_width
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Writes `report.csv`, `report.json` and `plot.svg` into `dir`.
pub fn write_reports(dir: &Path, report: &SweepReport) -> io::Result<()> {
    std::fs::create_dir_all(dir)?;
    write_atomic(&dir.join("report.csv"), to_csv(report).as_bytes())?;
    write_atomic(&dir.join("report.json"), to_json(report).as_bytes())?;
    write_atomic(&dir.join("plot.svg"), to_svg(report).as_bytes())?;
    Ok(())
}
