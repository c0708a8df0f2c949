//! CSV, JSON and SVG emitters. Every float is written with 17 significant
//! digits so files round-trip exactly and are byte-stable across runs.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use serde_json::{json, Map, Number, Value};
use viscoshear_core::calibrate::KstarCurve;
use viscoshear_core::rayleigh::EigenCurve;
use viscoshear_core::scenario::{Check, ScenarioReport};

/// `x` with 17 significant digits.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.filter(|v| v.is_finite()).map_or_else(|| "NA".to_string(), fmt)
}

/// JSON number with 17 significant digits; `null` for non-finite values.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(fmt(x).parse::<Number>().expect("formatted float is valid JSON"))
    } else {
        Value::Null
    }
}

fn num_opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

/// A table ready for CSV output and plotting.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Vec<Option<f64>> {
        let j = self.header.iter().position(|h| *h == name).expect("known column");
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn write_csv(&self, path: &Path) -> io::Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|v| fmt_opt(*v)))?;
        }
        w.flush()
    }
}

pub fn kstar_table(curve: &KstarCurve) -> Table {
    Table {
        header: vec!["t", "kstar", "lambda1", "lambda2"],
        rows: curve.points.iter().map(|p| vec![Some(p.t), p.kstar, Some(p.lambda1), Some(p.lambda2)]).collect(),
    }
}

pub fn eigencurve_table(curve: &EigenCurve) -> Table {
    Table {
        header: vec!["k", "c_i", "residual", "slope"],
        rows: curve
            .points
            .iter()
            .map(|&(k, c, r)| {
                let slope = curve.slope_samples.iter().find(|s| s.0 == k).map(|s| s.1);
                vec![Some(k), Some(c), Some(r), slope]
            })
            .collect(),
    }
}

pub fn check_json(c: &Check, stage: Option<&str>) -> Value {
    let mut m = Map::new();
    if let Some(s) = stage {
        m.insert("stage".into(), json!(s));
    }
    m.insert("name".into(), json!(c.name));
    m.insert("pass".into(), json!(c.pass));
    m.insert("measured".into(), num(c.measured));
    m.insert("band".into(), json!([num(c.band.0), num(c.band.1)]));
    m.insert("detail".into(), json!(c.detail));
    Value::Object(m)
}

pub fn report_json(r: &ScenarioReport) -> Value {
    let p = &r.params;
    json!({
        "kind": r.kind,
        "passed": r.passed(),
        "params": {
            "M": num(p.m),
            "gamma0": num(p.gamma0),
            "gamma1": num(p.gamma1),
            "gamma2": num(p.gamma2),
            "nu": num(p.nu),
        },
        "T": num(r.t_end),
        "Ttilde": num_opt(r.t_tilde),
        "kstar0": num_opt(r.kstar0),
        "kstarT": num_opt(r.kstar_t),
        "ci_at_k1": num_opt(r.ci_at_k1),
        "slope_at_k1": num_opt(r.slope_at_k1),
        "probe_root": r.probe_root.map_or(Value::Null, |(k, c)| json!({"k": num(k), "c_i": num(c)})),
        "checks": r.checks.iter().map(|c| check_json(c, None)).collect::<Vec<_>>(),
    })
}

pub fn write_json(value: &Value, path: &Path) -> io::Result<()> {
    let mut s = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
    s.push('\n');
    std::fs::write(path, s)
}

/// Static line plot of `y` against `x`; rows with a missing coordinate are
/// skipped.
pub fn svg_plot(title: &str, x_label: &str, y_label: &str, x: &[Option<f64>], y: &[Option<f64>]) -> String {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter_map(|(a, b)| Some(((*a)?, (*b)?)))
        .filter(|(a, b)| a.is_finite() && b.is_finite())
        .collect();
    let (w, h, pad) = (640.0, 400.0, 60.0);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#, w / 2.0, esc(title));
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#, w / 2.0, h - 12.0, esc(x_label));
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 16 {})">{}</text>"#,
        h / 2.0,
        h / 2.0,
        esc(y_label)
    );
    let _ = writeln!(s, r#"<rect x="{pad}" y="{pad}" width="{}" height="{}" fill="none" stroke="black"/>"#, w - 2.0 * pad, h - 2.0 * pad);
    if pts.is_empty() {
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13">no data</text>"#, w / 2.0, h / 2.0);
    } else {
        let range = |v: &mut dyn Iterator<Item = f64>| {
            let (lo, hi) = v.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
            if hi > lo { (lo, hi) } else { (lo - 0.5 * lo.abs().max(1e-300), hi + 0.5 * hi.abs().max(1e-300)) }
        };
        let (x0, x1) = range(&mut pts.iter().map(|p| p.0));
        let (y0, y1) = range(&mut pts.iter().map(|p| p.1));
        let sx = |v: f64| pad + (v - x0) / (x1 - x0) * (w - 2.0 * pad);
        let sy = |v: f64| h - pad - (v - y0) / (y1 - y0) * (h - 2.0 * pad);
        let path: Vec<String> = pts.iter().map(|&(a, b)| format!("{:.2},{:.2}", sx(a), sy(b))).collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="steelblue" stroke-width="2" points="{}"/>"#, path.join(" "));
        for &(a, b) in &pts {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"/>"#, sx(a), sy(b));
        }
        for (v, px, anchor, py) in [(x0, pad, "start", h - pad + 16.0), (x1, w - pad, "end", h - pad + 16.0)] {
            let _ = writeln!(s, r#"<text x="{px}" y="{py}" text-anchor="{anchor}" font-family="sans-serif" font-size="11">{v:.4e}</text>"#);
        }
        for (v, py) in [(y0, h - pad), (y1, pad + 10.0)] {
            let _ = writeln!(s, r#"<text x="{}" y="{py}" text-anchor="end" font-family="sans-serif" font-size="11">{v:.4e}</text>"#, pad - 4.0);
        }
    }
    s.push_str("</svg>\n");
    s
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 123456.789] {
            let s = fmt(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            assert_eq!(s.split('e').next().unwrap().trim_start_matches('-').len(), 18);
        }
        assert_eq!(num(f64::INFINITY), Value::Null);
        assert_eq!(fmt_opt(None), "NA");
    }

    #[test]
    fn svg_skips_missing_points() {
        let s = svg_plot("t", "x", "y", &[Some(0.0), Some(1.0), None], &[Some(1.0), None, Some(2.0)]);
        assert_eq!(s.matches("<circle").count(), 1);
        assert!(s.ends_with("</svg>\n"));
    }
}
