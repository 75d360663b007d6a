//! Minimal self-contained log-log scatter plots.

use std::fmt::Write;

use twomode::analysis::ScalingFit;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

pub struct PlotSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub fit: Option<ScalingFit>,
}

struct Axis {
    lo: f64,
    hi: f64,
}

impl Axis {
    /// Decade-aligned range covering the log10 of `values`.
    fn covering(values: impl Iterator<Item = f64>) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.filter(|v| *v > 0.0 && v.is_finite()) {
            lo = lo.min(v.log10());
            hi = hi.max(v.log10());
        }
        if !lo.is_finite() {
            return Self { lo: 0.0, hi: 1.0 };
        }
        let (mut lo, mut hi) = (lo.floor(), hi.ceil());
        if hi <= lo {
            lo -= 1.0;
            hi += 1.0;
        }
        Self { lo, hi }
    }

    fn frac(&self, v: f64) -> f64 {
        (v.log10() - self.lo) / (self.hi - self.lo)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn marker(out: &mut String, index: usize, x: f64, y: f64, color: &str) {
    let r = 4.0;
    let _ = match index % 4 {
        0 => writeln!(
            out,
            r#"<polygon points="{x:.2},{:.2} {:.2},{y:.2} {x:.2},{:.2} {:.2},{y:.2}" fill="none" stroke="{color}"/>"#,
            y - r,
            x + r,
            y + r,
            x - r
        ),
        1 => writeln!(
            out,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="{color}"/>"#,
            x - r,
            y - r,
            2.0 * r,
            2.0 * r
        ),
        2 => writeln!(
            out,
            r#"<path d="M{:.2},{y:.2}H{:.2}M{x:.2},{:.2}V{:.2}" stroke="{color}"/>"#,
            x - r,
            x + r,
            y - r,
            y + r
        ),
        _ => writeln!(
            out,
            r#"<polygon points="{x:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="none" stroke="{color}"/>"#,
            y - r,
            x + r,
            y + r,
            x - r,
            y + r
        ),
    };
}

/// Renders `series` on log-log axes with fitted lines and `(α, β)` labels.
pub fn loglog_plot(title: &str, x_label: &str, y_label: &str, series: &[PlotSeries]) -> String {
    let xs = Axis::covering(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let ys = Axis::covering(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let px = |v: f64| MARGIN_LEFT + xs.frac(v) * plot_w;
    let py = |v: f64| MARGIN_TOP + (1.0 - ys.frac(v)) * plot_h;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );

    for e in xs.lo as i32..=xs.hi as i32 {
        let x = px(10f64.powi(e));
        let _ = writeln!(
            out,
            r##"<line x1="{x:.2}" y1="{MARGIN_TOP}" x2="{x:.2}" y2="{:.2}" stroke="#ddd"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">1e{e}</text>"##,
            MARGIN_TOP + plot_h,
            MARGIN_TOP + plot_h + 18.0
        );
    }
    for e in ys.lo as i32..=ys.hi as i32 {
        let y = py(10f64.powi(e));
        let _ = writeln!(
            out,
            r##"<line x1="{MARGIN_LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">1e{e}</text>"##,
            MARGIN_LEFT + plot_w,
            MARGIN_LEFT - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 16.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">{}</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        escape(y_label)
    );

    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        for &(x, y) in s.points.iter().filter(|p| p.0 > 0.0 && p.1 > 0.0) {
            marker(&mut out, i, px(x), py(y), color);
        }
        let mut legend = escape(&s.label);
        if let Some(fit) = s.fit {
            let x_lo = s.points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
            let x_hi = s.points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
            let f = |x: f64| fit.alpha * x.powf(fit.beta);
            let _ = writeln!(
                out,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}"/>"#,
                px(x_lo),
                py(f(x_lo)),
                px(x_hi),
                py(f(x_hi))
            );
            let _ = write!(legend, ": (α, β) = ({:.6e}, {:.6})", fit.alpha, fit.beta);
        }
        let ly = MARGIN_TOP + 16.0 + 16.0 * i as f64;
        marker(&mut out, i, MARGIN_LEFT + 14.0, ly - 4.0, color);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{ly:.1}" fill="{color}">{legend}</text>"#,
            MARGIN_LEFT + 24.0
        );
    }
    out.push_str("</svg>\n");
    out
}
