//! Minimal self-contained SVG line plots.
//!
//! Just enough to eyeball a statistics curve next to its CSV: polylines
//! on a linear frame, tick labels, a legend, and optional dashed
//! vertical markers. Every figure this module draws comes verbatim from
//! points the caller also persists, so there is no hidden processing.

use crate::numstats::Provenance;

/// Canvas size and frame margins, in pixels.
const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 540.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 46.0;
const MARGIN_BOTTOM: f64 = 58.0;

/// Stroke color for the ensemble-averaged closed-form curve.
pub const ENSEMBLE_COLOR: &str = "#1f77b4";
/// Stroke color for asymptotic trend curves.
pub const TREND_COLOR: &str = "#ff7f0e";

/// Standard stroke colors by curve provenance.
pub fn provenance_color(provenance: Provenance) -> &'static str {
    match provenance {
        Provenance::Numeric => "#d62728",
        Provenance::TheoryOld => "#000000",
        Provenance::TheoryCoherent => "#2ca02c",
    }
}

/// One plotted line.
pub struct Series<'a> {
    pub label: String,
    pub color: &'a str,
    pub points: &'a [(f64, f64)],
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if (0.01..10_000.0).contains(&a) {
        let s = format!("{v:.3}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{v:.2e}")
    }
}

/// Render series and vertical markers into a standalone SVG document.
/// Non-finite points are skipped; a degenerate range is padded so a
/// single point still renders.
pub fn plot_svg(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series<'_>],
    vlines: &[f64],
) -> String {
    let finite = series
        .iter()
        .flat_map(|s| s.points.iter())
        .filter(|(x, y)| x.is_finite() && y.is_finite());
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in finite {
        x_min = x_min.min(x);
        x_max = x_max.max(x);
        y_min = y_min.min(y);
        y_max = y_max.max(y);
    }
    if !x_min.is_finite() {
        (x_min, x_max, y_min, y_max) = (0.0, 1.0, 0.0, 1.0);
    }
    if x_max - x_min <= 0.0 {
        let pad = x_min.abs().max(1.0) * 0.5;
        x_min -= pad;
        x_max += pad;
    }
    if y_max - y_min <= 0.0 {
        let pad = y_min.abs().max(1.0) * 0.5;
        y_min -= pad;
        y_max += pad;
    }
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_px = |x: f64, y: f64| {
        (
            MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w,
            MARGIN_TOP + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h,
        )
    };

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"13\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    out.push_str(&format!(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    ));
    // Frame.
    out.push_str(&format!(
        "<rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w}\" height=\"{plot_h}\" \
         fill=\"none\" stroke=\"#555\"/>\n"
    ));
    // Ticks and grid.
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = x_min + f * (x_max - x_min);
        let yv = y_min + f * (y_max - y_min);
        let (xp, _) = to_px(xv, y_min);
        let (_, yp) = to_px(x_min, yv);
        out.push_str(&format!(
            "<line x1=\"{xp:.2}\" y1=\"{}\" x2=\"{xp:.2}\" y2=\"{}\" stroke=\"#ddd\"/>\n",
            MARGIN_TOP,
            MARGIN_TOP + plot_h
        ));
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{yp:.2}\" x2=\"{}\" y2=\"{yp:.2}\" stroke=\"#ddd\"/>\n",
            MARGIN_LEFT,
            MARGIN_LEFT + plot_w
        ));
        out.push_str(&format!(
            "<text x=\"{xp:.2}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            MARGIN_TOP + plot_h + 18.0,
            fmt_tick(xv)
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>\n",
            MARGIN_LEFT - 6.0,
            yp + 4.0,
            fmt_tick(yv)
        ));
    }
    // Axis labels.
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    ));
    out.push_str(&format!(
        "<text x=\"18\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">{}</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        escape(y_label)
    ));
    // Vertical markers.
    for &v in vlines {
        if !v.is_finite() || v < x_min || v > x_max {
            continue;
        }
        let (xp, _) = to_px(v, y_min);
        out.push_str(&format!(
            "<line x1=\"{xp:.2}\" y1=\"{}\" x2=\"{xp:.2}\" y2=\"{}\" \
             stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n",
            MARGIN_TOP,
            MARGIN_TOP + plot_h
        ));
    }
    // Data.
    for s in series {
        let mut coords = String::new();
        for &(x, y) in s.points {
            if !x.is_finite() || !y.is_finite() {
                continue;
            }
            let (xp, yp) = to_px(x, y);
            coords.push_str(&format!("{xp:.2},{yp:.2} "));
        }
        out.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            s.color,
            coords.trim_end()
        ));
    }
    // Legend, top-right inside the frame. Series with empty labels are
    // drawn but not listed, so curve families need only one entry.
    for (i, s) in series.iter().filter(|s| !s.label.is_empty()).enumerate() {
        let ly = MARGIN_TOP + 18.0 + 18.0 * i as f64;
        let lx = MARGIN_LEFT + plot_w - 170.0;
        out.push_str(&format!(
            "<line x1=\"{lx}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
            lx + 24.0,
            s.color
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\">{}</text>\n",
            lx + 30.0,
            ly + 4.0,
            escape(&s.label)
        ));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_series_vlines_and_labels() {
        let a: Vec<(f64, f64)> = (0..50).map(|i| (i as f64, (i as f64).sin())).collect();
        let b: Vec<(f64, f64)> = (0..50).map(|i| (i as f64, 0.5)).collect();
        let svg = plot_svg(
            "variance <overlay>",
            "window width",
            "sigma",
            &[
                Series {
                    label: "numeric".into(),
                    color: provenance_color(Provenance::Numeric),
                    points: &a,
                },
                Series {
                    label: "theory".into(),
                    color: provenance_color(Provenance::TheoryOld),
                    points: &b,
                },
            ],
            &[10.0, 500.0],
        );
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        // One in-range marker drawn, the out-of-range one skipped.
        assert_eq!(svg.matches("stroke-dasharray").count(), 1);
        assert!(svg.contains("&lt;overlay&gt;"));
        assert!(!svg.contains("NaN"));
    }

    #[test]
    fn degenerate_input_still_renders() {
        let one = [(2.0e5, 37.0)];
        let svg = plot_svg(
            "single point",
            "x",
            "y",
            &[Series {
                label: "dot".into(),
                color: "#000",
                points: &one,
            }],
            &[],
        );
        assert!(svg.contains("<polyline"));
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
        let empty = plot_svg("empty", "x", "y", &[], &[]);
        assert!(empty.contains("</svg>"));
    }

    #[test]
    fn provenance_palette_is_distinct() {
        let colors = [
            provenance_color(Provenance::Numeric),
            provenance_color(Provenance::TheoryOld),
            provenance_color(Provenance::TheoryCoherent),
            ENSEMBLE_COLOR,
            TREND_COLOR,
        ];
        let distinct: std::collections::HashSet<&str> = colors.into_iter().collect();
        assert_eq!(distinct.len(), 5);
    }
}
