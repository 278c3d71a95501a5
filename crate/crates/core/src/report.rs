//! File formats: trajectory CSV, convergence tables and static SVG plots.
//!
//! Trajectory CSV has the header `t,y1..yn,yp1..ypn` and one row per node;
//! numbers use 17 significant digits so a write/read cycle is lossless.

use std::fmt::Write as _;
use std::io;

use crate::error::{Error, Result};
use crate::picard::ConvergenceReport;
use crate::trajectory::Trajectory;

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_trajectory_csv<W: io::Write>(traj: &Trajectory, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let d = traj.dim;
    let mut header = vec!["t".to_string()];
    header.extend((1..=d).map(|i| format!("y{i}")));
    header.extend((1..=d).map(|i| format!("yp{i}")));
    w.write_record(&header)?;
    for i in 0..traj.len() {
        let mut row = Vec::with_capacity(1 + 2 * d);
        row.push(num(traj.time(i)));
        row.extend(traj.position(i).iter().map(|v| num(*v)));
        row.extend(traj.velocity(i).iter().map(|v| num(*v)));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn trajectory_csv(traj: &Trajectory) -> Result<String> {
    let mut buf = Vec::new();
    write_trajectory_csv(traj, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

/// Reads a trajectory CSV. Offsets are measured from `t0`.
pub fn read_trajectory_csv<R: io::Read>(input: R, field_name: &str, t0: f64) -> Result<Trajectory> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    let cols = header.len();
    if cols < 3 || cols % 2 == 0 || &header[0] != "t" {
        return Err(Error::Invalid(format!("unexpected trajectory header {header:?}")));
    }
    let d = (cols - 1) / 2;
    for i in 1..=d {
        if header[i] != format!("y{i}") || header[d + i] != format!("yp{i}") {
            return Err(Error::Invalid(format!("unexpected trajectory header {header:?}")));
        }
    }
    let mut offsets = Vec::new();
    let mut positions = Vec::new();
    let mut velocities = Vec::new();
    for record in r.records() {
        let record = record?;
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Invalid(format!("bad number `{s}`: {e}")))
        };
        offsets.push(parse(&record[0])? - t0);
        for i in 1..=d {
            positions.push(parse(&record[i])?);
            velocities.push(parse(&record[d + i])?);
        }
    }
    Trajectory::new(field_name, t0, d, offsets, positions, velocities)
}

/// Text table of increments against majorant terms, one row per iteration.
pub fn convergence_table(report: &ConvergenceReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:>4}  {:>24}  {:>24}  {:>5}", "j", "increment", "majorant", "ok");
    for (i, (inc, maj)) in report.increments.iter().zip(&report.majorant_terms).enumerate() {
        let ok = *inc <= *maj + report.quadrature_floor;
        let _ = writeln!(s, "{:>4}  {:>24.16e}  {:>24.16e}  {:>5}", i + 1, inc, maj, ok);
    }
    let _ = writeln!(
        s,
        "M = {:e}, K = {:e}, b = {:e}, L = {:e}, floor = {:e}, stop = {:?}",
        report.m_used, report.k_used, report.b_used, report.l_used, report.quadrature_floor, report.stop_reason
    );
    s
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
const W: f64 = 720.0;
const H: f64 = 300.0;
const PAD: f64 = 48.0;

struct Panel {
    x: (f64, f64),
    y: (f64, f64),
    top: f64,
}

impl Panel {
    fn new(xs: impl Iterator<Item = f64> + Clone, ys: impl Iterator<Item = f64> + Clone, top: f64) -> Self {
        let range = |it: &mut dyn Iterator<Item = f64>| {
            let (lo, hi) = it.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
            if !lo.is_finite() {
                (0.0, 1.0)
            } else if hi - lo < 1e-12 * (1.0 + lo.abs()) {
                (lo - 0.5, hi + 0.5)
            } else {
                (lo, hi)
            }
        };
        Self {
            x: range(&mut xs.clone()),
            y: range(&mut ys.clone()),
            top,
        }
    }

    fn px(&self, x: f64) -> f64 {
        PAD + (x - self.x.0) / (self.x.1 - self.x.0) * (W - 2.0 * PAD)
    }

    fn py(&self, y: f64) -> f64 {
        self.top + H - PAD - (y - self.y.0) / (self.y.1 - self.y.0) * (H - 2.0 * PAD)
    }

    fn frame(&self, s: &mut String, title: &str, xlabel: &str) {
        let (x0, x1) = (PAD, W - PAD);
        let (y0, y1) = (self.top + PAD, self.top + H - PAD);
        let _ = writeln!(
            s,
            r##"<rect x="{x0}" y="{y0}" width="{}" height="{}" fill="none" stroke="#444"/>"##,
            x1 - x0,
            y1 - y0
        );
        let _ = writeln!(s, r#"<text x="{x0}" y="{}" font-size="13">{}</text>"#, y0 - 8.0, escape(title));
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="11" text-anchor="middle">{}</text>"#, (x0 + x1) / 2.0, y1 + 30.0, escape(xlabel));
        for (v, anchor, x) in [(self.x.0, "start", x0), (self.x.1, "end", x1)] {
            let _ = writeln!(s, r#"<text x="{x}" y="{}" font-size="10" text-anchor="{anchor}">{v:.4}</text>"#, y1 + 14.0);
        }
        for (v, y) in [(self.y.0, y1), (self.y.1, y0)] {
            let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="10" text-anchor="end">{v:.4}</text>"#, x0 - 4.0, y + 3.0);
        }
    }

    fn polyline(&self, s: &mut String, pts: impl Iterator<Item = (f64, f64)>, color: &str, dashed: bool) {
        let coords: Vec<String> = pts.map(|(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y))).collect();
        let dash = if dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#,
            coords.join(" ")
        );
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Static SVG: position components against `t`, and for mirrored grids an
/// overlay of `y(t0 + tau)` (solid) with `sign * y(t0 - tau)` (dashed), so the
/// curves coincide for an even run with `sign = 1` or an odd run with `sign = -1`.
pub fn trajectory_svg(traj: &Trajectory, title: &str, mirror_sign: Option<f64>) -> String {
    let d = traj.dim;
    let overlay = mirror_sign.filter(|_| traj.is_symmetric());
    let height = if overlay.is_some() { 2.0 * H } else { H };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{height}" viewBox="0 0 {W} {height}" font-family="sans-serif">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let times = traj.times();
    let panel = Panel::new(times.iter().copied(), traj.positions().iter().copied(), 0.0);
    panel.frame(&mut s, title, "t");
    for c in 0..d {
        let pts = (0..traj.len()).map(|i| (times[i], traj.position(i)[c]));
        panel.polyline(&mut s, pts, PALETTE[c % PALETTE.len()], false);
    }

    if let Some(sign) = overlay {
        let mid = traj.len() / 2;
        let taus: Vec<f64> = traj.offsets()[mid..].to_vec();
        let ys = (0..traj.len()).flat_map(|i| traj.position(i).iter().map(move |v| *v * if i < mid { sign } else { 1.0 }));
        let lower = Panel::new(taus.iter().copied(), ys.collect::<Vec<_>>().into_iter(), H);
        let label = if sign < 0.0 { "y(t0 + tau) and -y(t0 - tau)" } else { "y(t0 + tau) and y(t0 - tau)" };
        lower.frame(&mut s, label, "tau");
        for c in 0..d {
            let color = PALETTE[c % PALETTE.len()];
            lower.polyline(&mut s, (0..=mid).map(|k| (taus[k], traj.position(mid + k)[c])), color, false);
            lower.polyline(&mut s, (0..=mid).map(|k| (taus[k], sign * traj.position(mid - k)[c])), color, true);
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Trajectory {
        let offsets: Vec<f64> = (-4..=4).map(|k| k as f64 * 0.1).collect();
        let positions: Vec<f64> = offsets.iter().flat_map(|t: &f64| [t.cos(), (3.0 * t).sin() / 7.0]).collect();
        let velocities: Vec<f64> = offsets.iter().flat_map(|t: &f64| [-t.sin(), (3.0 * t).cos() * 3.0 / 7.0]).collect();
        Trajectory::new("demo", 1.0 / 3.0, 2, offsets, positions, velocities).unwrap()
    }

    #[test]
    fn csv_round_trip_is_lossless() {
        let t = sample();
        let text = trajectory_csv(&t).unwrap();
        assert!(text.starts_with("t,y1,y2,yp1,yp2\n"));
        let back = read_trajectory_csv(text.as_bytes(), "demo", t.t0).unwrap();
        assert_eq!(back.positions(), t.positions());
        assert_eq!(back.velocities(), t.velocities());
        for (a, b) in back.times().iter().zip(t.times()) {
            assert!((a - b).abs() <= 1e-15);
        }
    }

    #[test]
    fn csv_rejects_bad_header() {
        assert!(read_trajectory_csv("t,x\n0,1\n".as_bytes(), "x", 0.0).is_err());
    }

    #[test]
    fn svg_has_overlay_for_mirrored_runs() {
        let t = sample();
        let svg = trajectory_svg(&t, "demo", Some(1.0));
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polyline").count(), 2 + 4);
        assert!(svg.contains("stroke-dasharray"));
        let plain = trajectory_svg(&t, "demo", None);
        assert_eq!(plain.matches("<polyline").count(), 2);
    }
}
