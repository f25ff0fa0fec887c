//! Trajectory/report CSV files and the SVG convergence profile.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::harness::ExperimentReport;

pub const TRAJECTORY_HEADER: [&str; 6] = ["k", "gamma", "dist", "objective", "manifold_dim", "identified"];

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_err(e: impl std::fmt::Display) -> Error {
    Error::Csv(e.to_string())
}

/// One row per recorded iteration; `identified` is 1 from the
/// identification record onwards.
pub fn trajectory_csv(report: &ExperimentReport) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TRAJECTORY_HEADER).map_err(csv_err)?;
    let from = report.identification.record_index.unwrap_or(usize::MAX);
    for (i, r) in report.trajectory.records.iter().enumerate() {
        w.write_record([
            r.k.to_string(),
            num(r.gamma),
            r.dist.map(num).unwrap_or_default(),
            num(r.objective),
            r.manifold_dim.to_string(),
            if i >= from { "1".into() } else { "0".into() },
        ])
        .map_err(csv_err)?;
    }
    w.into_inner().map_err(csv_err)
}

pub fn report_csv(report: &ExperimentReport) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "value"]).map_err(csv_err)?;
    for (k, v) in report.key_values() {
        w.write_record([k, v]).map_err(csv_err)?;
    }
    w.into_inner().map_err(csv_err)
}

/// Recorded `(k, dist)` pairs and the identification iteration, read back
/// from a trajectory CSV. Only `k` and `dist` are required columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileData {
    pub points: Vec<(f64, f64)>,
    pub identified_at: Option<f64>,
}

pub fn read_profile(path: &Path) -> Result<ProfileData> {
    let mut rd = csv::Reader::from_path(path).map_err(csv_err)?;
    let headers = rd.headers().map_err(csv_err)?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let kc = col("k").ok_or_else(|| Error::Csv("missing column `k`".into()))?;
    let dc = col("dist").ok_or_else(|| Error::Csv("missing column `dist`".into()))?;
    let ic = col("identified");
    let mut points = Vec::new();
    let mut identified_at = None;
    for (line, rec) in rd.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let field = |c: usize| rec.get(c).unwrap_or("").trim();
        let k: f64 = field(kc)
            .parse()
            .map_err(|_| Error::Csv(format!("row {}: bad k {:?}", line + 2, field(kc))))?;
        if let Some(c) = ic {
            match field(c) {
                "1" => {
                    identified_at.get_or_insert(k);
                }
                "0" | "" => identified_at = None,
                other => return Err(Error::Csv(format!("row {}: bad identified flag {other:?}", line + 2))),
            }
        }
        if field(dc).is_empty() {
            continue;
        }
        let d: f64 = field(dc)
            .parse()
            .map_err(|_| Error::Csv(format!("row {}: bad dist {:?}", line + 2, field(dc))))?;
        points.push((k, d));
    }
    if points.is_empty() {
        return Err(Error::Csv("no distance values".into()));
    }
    Ok(ProfileData { points, identified_at })
}

/// Semi-log plot of `||x_k - x*||` against `k`. With a rate `rho` and an
/// identification iteration `K`, overlays `rho^(k-K) ||x_K - x*||` from `K`
/// and marks `K` with a vertical rule.
pub fn profile_svg(title: &str, data: &ProfileData, rho: Option<f64>) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const L: f64 = 70.0;
    const R: f64 = 20.0;
    const T: f64 = 40.0;
    const B: f64 = 50.0;
    let pts: Vec<(f64, f64)> = data.points.iter().filter(|p| p.1 > 0.0 && p.1.is_finite()).cloned().collect();
    let kmin = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min).min(data.identified_at.unwrap_or(f64::INFINITY));
    let kmax = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let (kmin, kmax) = if pts.is_empty() { (0.0, 1.0) } else if kmax > kmin { (kmin, kmax) } else { (kmin, kmin + 1.0) };
    let logs: Vec<f64> = pts.iter().map(|p| p.1.log10()).collect();
    let mut lo = logs.iter().cloned().fold(f64::INFINITY, f64::min).floor();
    let mut hi = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max).ceil();
    if !lo.is_finite() || !hi.is_finite() {
        lo = -1.0;
        hi = 0.0;
    }
    if hi <= lo {
        hi = lo + 1.0;
    }
    let sx = |k: f64| L + (k - kmin) / (kmax - kmin) * (W - L - R);
    let sy = |l: f64| T + (hi - l) / (hi - lo) * (H - T - B);
    let path = |p: &[(f64, f64)]| -> String {
        let mut d = String::new();
        for (i, (k, l)) in p.iter().enumerate() {
            let _ = write!(d, "{}{:.2},{:.2}", if i == 0 { "M" } else { " L" }, sx(*k), sy(*l));
        }
        d
    };

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(s, r#"<g class="axes" stroke="black" stroke-width="1">"#);
    let _ = writeln!(s, r#"<line x1="{L}" y1="{}" x2="{}" y2="{}"/>"#, H - B, W - R, H - B);
    let _ = writeln!(s, r#"<line x1="{L}" y1="{T}" x2="{L}" y2="{}"/>"#, H - B);
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g class="ticks" font-family="sans-serif" font-size="11">"#);
    let step = ((hi - lo) / 8.0).ceil().max(1.0);
    let mut e = lo;
    while e <= hi + 1e-9 {
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">1e{}</text>"#, L - 6.0, sy(e) + 4.0, e as i64);
        e += step;
    }
    let _ = writeln!(s, r#"<text x="{L}" y="{}" text-anchor="middle">{}</text>"#, H - B + 16.0, kmin);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, W - R, H - B + 16.0, kmax);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">k</text>"#, (L + W - R) / 2.0, H - 12.0);
    let _ = writeln!(s, "</g>");

    let observed: Vec<(f64, f64)> = pts.iter().map(|p| (p.0, p.1.log10())).collect();
    if !observed.is_empty() {
        let _ = writeln!(s, r##"<path class="observed" fill="none" stroke="#1f77b4" stroke-width="1.5" d="{}"/>"##, path(&observed));
    }
    if let Some(k) = data.identified_at {
        let _ = writeln!(s, r##"<line class="identification" x1="{x:.2}" y1="{T}" x2="{x:.2}" y2="{}" stroke="#888" stroke-dasharray="4 3"/>"##, H - B, x = sx(k));
        let anchor = pts.iter().find(|p| p.0 >= k);
        if let (Some(rho), Some(&(k0, d0))) = (rho.filter(|r| *r > 0.0), anchor) {
            let (l0, slope) = (d0.log10(), rho.log10());
            let end = l0 + (kmax - k0) * slope;
            let tail = if end >= lo { (kmax, end) } else { (k0 + (lo - l0) / slope, lo) };
            let line = [(k0, l0), tail];
            let _ = writeln!(s, r##"<path class="predicted" fill="none" stroke="#d62728" stroke-width="1.5" stroke-dasharray="6 4" d="{}"/>"##, path(&line));
        }
    }
    let _ = writeln!(s, r#"<g class="legend" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r##"<text x="{}" y="{}" fill="#1f77b4">observed</text>"##, W - R - 150.0, T + 14.0);
    if rho.is_some() {
        let _ = writeln!(s, r##"<text x="{}" y="{}" fill="#d62728">predicted rho={:.6}</text>"##, W - R - 150.0, T + 30.0, rho.unwrap_or(0.0));
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Plot data of a report held in memory.
pub fn report_profile(report: &ExperimentReport) -> ProfileData {
    let points = report.trajectory.records.iter().filter_map(|r| r.dist.map(|d| (r.k as f64, d))).collect();
    ProfileData { points, identified_at: report.identification.k.map(|k| k as f64) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_svg_is_well_formed() {
        let data = ProfileData { points: (0..20).map(|k| (k as f64, 0.5f64.powi(k))).collect(), identified_at: Some(0.0) };
        let svg = profile_svg("t<1>", &data, Some(0.5));
        assert!(svg.contains(r#"class="observed""#));
        assert!(svg.contains(r#"class="predicted""#));
        assert!(svg.contains("t&lt;1&gt;"));
    }
}
