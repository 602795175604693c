//! Minimal SVG 1.1 scatter/line plot writer for band-function sweeps.
//!
//! No external plotting dependency: the CLI only needs axis-scaled polylines,
//! reference lines, and labels, all of which fit in a few hundred bytes of
//! hand-written SVG.

use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

/// A single series of (x, y) points drawn as a polyline with circle markers.
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub color: String,
}

/// Plot description: autoscaled axes over all series plus optional
/// horizontal/vertical reference lines (drawn dashed).
#[derive(Debug, Clone, Default)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub hlines: Vec<f64>,
    pub vlines: Vec<f64>,
}

impl Plot {
    fn bounds(&self) -> Option<(f64, f64, f64, f64)> {
        let mut xs: Vec<f64> = self
            .series
            .iter()
            .flat_map(|s| s.points.iter().map(|p| p.0))
            .chain(self.vlines.iter().copied())
            .filter(|v| v.is_finite())
            .collect();
        let mut ys: Vec<f64> = self
            .series
            .iter()
            .flat_map(|s| s.points.iter().map(|p| p.1))
            .chain(self.hlines.iter().copied())
            .filter(|v| v.is_finite())
            .collect();
        if xs.is_empty() || ys.is_empty() {
            return None;
        }
        xs.sort_by(f64::total_cmp);
        ys.sort_by(f64::total_cmp);
        let (mut x0, mut x1) = (xs[0], xs[xs.len() - 1]);
        let (mut y0, mut y1) = (ys[0], ys[ys.len() - 1]);
        if x1 - x0 < f64::EPSILON {
            x0 -= 0.5;
            x1 += 0.5;
        }
        if y1 - y0 < f64::EPSILON {
            y0 -= 0.5;
            y1 += 0.5;
        }
        let (px, py) = (0.05 * (x1 - x0), 0.05 * (y1 - y0));
        Some((x0 - px, x1 + px, y0 - py, y1 + py))
    }

    /// Renders the plot to a complete, standalone SVG document.
    pub fn render(&self) -> String {
        let (x0, x1, y0, y1) = self
            .bounds()
            .unwrap_or((0.0, 1.0, 0.0, 1.0));
        let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
        let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        );
        let _ = writeln!(
            out,
            r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
        );
        // axes
        let _ = writeln!(
            out,
            r#"<line x1="{m}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/><line x1="{m}" y1="{t}" x2="{m}" y2="{b}" stroke="black"/>"#,
            m = MARGIN,
            b = HEIGHT - MARGIN,
            r = WIDTH - MARGIN,
            t = MARGIN,
        );
        // tick labels at the corners of the data range
        let _ = writeln!(
            out,
            r#"<text x="{m}" y="{yb}" font-size="11" text-anchor="middle">{x0:.4}</text><text x="{r}" y="{yb}" font-size="11" text-anchor="middle">{x1:.4}</text>"#,
            m = MARGIN,
            r = WIDTH - MARGIN,
            yb = HEIGHT - MARGIN + 18.0,
        );
        let _ = writeln!(
            out,
            r#"<text x="{xl}" y="{b}" font-size="11" text-anchor="end">{y0:.4}</text><text x="{xl}" y="{t}" font-size="11" text-anchor="end">{y1:.4}</text>"#,
            xl = MARGIN - 6.0,
            b = HEIGHT - MARGIN,
            t = MARGIN + 4.0,
        );
        let _ = writeln!(
            out,
            r#"<text x="{cx}" y="24" font-size="15" text-anchor="middle">{}</text>"#,
            xml_escape(&self.title),
            cx = WIDTH / 2.0,
        );
        let _ = writeln!(
            out,
            r#"<text x="{cx}" y="{yb}" font-size="12" text-anchor="middle">{}</text>"#,
            xml_escape(&self.x_label),
            cx = WIDTH / 2.0,
            yb = HEIGHT - 14.0,
        );
        let _ = writeln!(
            out,
            r#"<text x="16" y="{cy}" font-size="12" text-anchor="middle" transform="rotate(-90 16 {cy})">{}</text>"#,
            xml_escape(&self.y_label),
            cy = HEIGHT / 2.0,
        );
        for &y in &self.hlines {
            let _ = writeln!(
                out,
                r#"<line x1="{m}" y1="{py}" x2="{r}" y2="{py}" stroke="gray" stroke-dasharray="5,4"/>"#,
                m = MARGIN,
                r = WIDTH - MARGIN,
                py = sy(y),
            );
        }
        for &x in &self.vlines {
            let _ = writeln!(
                out,
                r#"<line x1="{px}" y1="{t}" x2="{px}" y2="{b}" stroke="gray" stroke-dasharray="5,4"/>"#,
                t = MARGIN,
                b = HEIGHT - MARGIN,
                px = sx(x),
            );
        }
        for (i, s) in self.series.iter().enumerate() {
            let pts: String = s
                .points
                .iter()
                .filter(|p| p.0.is_finite() && p.1.is_finite())
                .map(|&(x, y)| format!("{:.2},{:.2} ", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
                pts.trim_end(),
                xml_escape(&s.color),
            );
            for &(x, y) in s.points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()) {
                let _ = writeln!(
                    out,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="{}"/>"#,
                    sx(x),
                    sy(y),
                    xml_escape(&s.color),
                );
            }
            let _ = writeln!(
                out,
                r#"<text x="{x}" y="{y}" font-size="12" fill="{}">{}</text>"#,
                xml_escape(&s.color),
                xml_escape(&s.label),
                x = WIDTH - MARGIN - 150.0,
                y = MARGIN + 16.0 * (i + 1) as f64,
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_plot() -> Plot {
        Plot {
            title: "λ₀/h vs 2mh".to_string(),
            x_label: "2mh".to_string(),
            y_label: "λ₀/h".to_string(),
            series: vec![Series {
                label: "ground band".to_string(),
                points: (0..20).map(|i| (i as f64 * 0.1, (i as f64 * 0.1 - 1.0).powi(2))).collect(),
                color: "steelblue".to_string(),
            }],
            hlines: vec![1.0],
            vlines: vec![0.5],
        }
    }

    #[test]
    fn render_has_required_structure() {
        let svg = sample_plot().render();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("<polyline"));
        assert!(svg.contains("stroke-dasharray"));
        assert!(svg.contains("λ₀/h"));
        // one dashed line per reference line plus 2 axes
        assert_eq!(svg.matches("<line").count(), 4);
    }

    #[test]
    fn render_is_deterministic_and_escapes() {
        let mut p = sample_plot();
        p.title = "a<b & \"c\"".to_string();
        let a = p.render();
        let b = p.render();
        assert_eq!(a, b);
        assert!(a.contains("a&lt;b &amp; &quot;c&quot;"));
        assert!(!a.contains("a<b"));
    }

    #[test]
    fn empty_plot_still_renders() {
        let svg = Plot::default().render();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("</svg>"));
    }

    #[test]
    fn degenerate_range_is_padded() {
        let p = Plot {
            series: vec![Series {
                label: "pt".into(),
                points: vec![(1.0, 2.0)],
                color: "red".into(),
            }],
            ..Plot::default()
        };
        let svg = p.render();
        assert!(svg.contains("<circle"));
    }
}
