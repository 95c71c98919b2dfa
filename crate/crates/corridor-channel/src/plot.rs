//! Self-contained SVG renderings of the report data: line charts for the
//! per-frequency fit parameters and per-distance descriptors, heatmaps for
//! the PDP and path-gain grids. No plotting dependency, just shapes.

use std::fmt::Write as _;

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 55.0;

const SERIES_COLORS: [&str; 5] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd"];

pub struct Series<'a> {
    pub label: &'a str,
    pub points: Vec<(f64, f64)>,
}

fn finite_bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values.filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo > hi {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn svg_header(out: &mut String, title: &str) {
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = write!(
        out,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/><text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn axes(out: &mut String, x_label: &str, y_label: &str, xr: (f64, f64), yr: (f64, f64)) {
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let _ = write!(
        out,
        r##"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#333"/>"##
    );
    for i in 0..=5 {
        let t = i as f64 / 5.0;
        let x = MARGIN_L + t * plot_w;
        let y = MARGIN_T + plot_h - t * plot_h;
        let xv = xr.0 + t * (xr.1 - xr.0);
        let yv = yr.0 + t * (yr.1 - yr.0);
        let _ = write!(
            out,
            r##"<line x1="{x:.1}" y1="{}" x2="{x:.1}" y2="{}" stroke="#ccc"/><text x="{x:.1}" y="{}" text-anchor="middle">{xv:.4}</text>"##,
            MARGIN_T,
            MARGIN_T + plot_h,
            MARGIN_T + plot_h + 16.0
        );
        let _ = write!(
            out,
            r##"<line x1="{MARGIN_L}" y1="{y:.1}" x2="{}" y2="{y:.1}" stroke="#ccc"/><text x="{}" y="{y:.1}" text-anchor="end" dominant-baseline="middle">{yv:.4}</text>"##,
            MARGIN_L + plot_w,
            MARGIN_L - 6.0
        );
    }
    let _ = write!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        MARGIN_L + plot_w / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = write!(
        out,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        MARGIN_T + plot_h / 2.0,
        MARGIN_T + plot_h / 2.0,
        escape(y_label)
    );
}

/// Renders one or more (x, y) series as polylines with a shared axis.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let xr = finite_bounds(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let yr = finite_bounds(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let sx = |x: f64| MARGIN_L + (x - xr.0) / (xr.1 - xr.0) * plot_w;
    let sy = |y: f64| MARGIN_T + plot_h - (y - yr.0) / (yr.1 - yr.0) * plot_h;

    let mut out = String::new();
    svg_header(&mut out, title);
    axes(&mut out, x_label, y_label, xr, yr);
    for (si, s) in series.iter().enumerate() {
        let color = SERIES_COLORS[si % SERIES_COLORS.len()];
        let mut path = String::new();
        for &(x, y) in s.points.iter().filter(|(x, y)| x.is_finite() && y.is_finite()) {
            let _ = write!(path, "{:.2},{:.2} ", sx(x), sy(y));
        }
        let _ = write!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            path.trim_end()
        );
        let _ = write!(
            out,
            r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
            MARGIN_L + 10.0,
            MARGIN_T + 16.0 + 15.0 * si as f64,
            escape(s.label)
        );
    }
    out.push_str("</svg>");
    out
}

/// Renders a row-major matrix as a heatmap. Rows map to `y_values`
/// (plotted bottom-up), columns to an `x0 + i·dx` axis; wide matrices are
/// max-pooled down to at most `max_cols` columns so peaks stay visible.
pub fn heatmap(
    title: &str,
    x_label: &str,
    y_label: &str,
    matrix: &[f64],
    y_values: &[f64],
    x0: f64,
    dx: f64,
    floor: f64,
) -> String {
    let rows = y_values.len();
    let cols = if rows == 0 { 0 } else { matrix.len() / rows };
    let max_cols = 600usize;
    let pool = cols.div_ceil(max_cols).max(1);
    let pooled_cols = cols.div_ceil(pool);

    let mut pooled = vec![floor; rows * pooled_cols];
    for r in 0..rows {
        for c in 0..cols {
            let v = matrix[r * cols + c];
            let slot = &mut pooled[r * pooled_cols + c / pool];
            if v > *slot {
                *slot = v;
            }
        }
    }
    let (lo, hi) = finite_bounds(pooled.iter().cloned().filter(|&v| v > floor));
    let lo = lo.max(hi - 80.0); // clip the color range to 80 dB of span

    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let cell_w = plot_w / pooled_cols as f64;
    let cell_h = plot_h / rows as f64;

    let mut out = String::new();
    svg_header(&mut out, title);
    for r in 0..rows {
        for c in 0..pooled_cols {
            let v = pooled[r * pooled_cols + c];
            let t = ((v - lo) / (hi - lo)).clamp(0.0, 1.0);
            // Dark blue to yellow ramp.
            let red = (255.0 * t) as u8;
            let green = (220.0 * t * t.sqrt() + 20.0 * (1.0 - t)) as u8;
            let blue = (90.0 * (1.0 - t) + 40.0) as u8;
            let x = MARGIN_L + c as f64 * cell_w;
            let y = MARGIN_T + plot_h - (r + 1) as f64 * cell_h;
            let _ = write!(
                out,
                r#"<rect x="{x:.1}" y="{y:.1}" width="{:.2}" height="{:.2}" fill="rgb({red},{green},{blue})"/>"#,
                cell_w + 0.05,
                cell_h + 0.05
            );
        }
    }
    let xr = (x0, x0 + dx * cols as f64);
    let yr = (y_values[0], y_values[rows - 1]);
    axes(&mut out, x_label, y_label, xr, yr);
    out.push_str("</svg>");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_chart_renders_all_series() {
        let svg = line_chart(
            "fit",
            "frequency, GHz",
            "exponent",
            &[
                Series { label: "pooled", points: vec![(250.0, -1.8), (330.0, -1.7)] },
                Series { label: "reference", points: vec![(250.0, -2.0), (330.0, -2.0)] },
            ],
        );
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("pooled"));
    }

    #[test]
    fn heatmap_pools_wide_matrices() {
        let rows = 3;
        let cols = 4000;
        let mut m = vec![-300.0; rows * cols];
        m[2 * cols + 1234] = -60.0;
        let svg = heatmap("pdp", "delay, m", "d, m", &m, &[1.0, 2.0, 3.0], 0.0, 0.01, -400.0);
        assert!(svg.contains("<rect"));
        // Pooled to <= 600 columns: 3 rows x 600 cells plus chrome.
        assert!(svg.matches("<rect").count() < 3 * 600 + 10);
    }

    #[test]
    fn degenerate_inputs_do_not_panic() {
        let svg = line_chart("empty", "x", "y", &[Series { label: "none", points: vec![] }]);
        assert!(svg.contains("</svg>"));
        let svg = line_chart(
            "flat",
            "x",
            "y",
            &[Series { label: "flat", points: vec![(1.0, 5.0), (2.0, 5.0)] }],
        );
        assert!(svg.contains("</svg>"));
    }
}
