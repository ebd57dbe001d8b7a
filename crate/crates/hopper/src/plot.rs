//! SVG plots of a run report: best fitness and vertex counts over steps.

use std::fmt::Write as _;

use crate::report::RunReport;

const W: f64 = 640.0;
const H: f64 = 240.0;
const PAD: f64 = 40.0;

struct Axis {
    lo: f64,
    hi: f64,
}

impl Axis {
    fn of(values: impl Iterator<Item = f64>) -> Axis {
        let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if !lo.is_finite() {
            return Axis { lo: 0.0, hi: 1.0 };
        }
        if hi - lo < 1e-12 {
            return Axis { lo: lo - 0.5, hi: hi + 0.5 };
        }
        Axis { lo, hi }
    }

    fn map(&self, v: f64, from: f64, to: f64) -> f64 {
        from + (v - self.lo) / (self.hi - self.lo) * (to - from)
    }
}

/// One staircase panel with its top edge at `top`.
fn panel(out: &mut String, top: f64, title: &str, points: &[(f64, f64)], x: &Axis, colour: &str) {
    let y = Axis::of(points.iter().map(|p| p.1));
    let (left, right, bottom) = (PAD, W - PAD / 2.0, top + H - PAD);
    let _ = writeln!(out, r##"<rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="#888"/>"##, right - left, bottom - top);
    let _ = writeln!(out, r##"<text x="{left}" y="{}" font-size="12">{title}</text>"##, top - 6.0);
    let _ = writeln!(out, r##"<text x="4" y="{}" font-size="10">{:.3}</text>"##, top + 10.0, y.hi);
    let _ = writeln!(out, r##"<text x="4" y="{bottom}" font-size="10">{:.3}</text>"##, y.lo);
    let mut path = String::new();
    let mut prev: Option<f64> = None;
    for &(px, py) in points {
        let (sx, sy) = (x.map(px, left, right), y.map(py, bottom, top));
        match prev {
            None => {
                let _ = write!(path, "M{sx:.1},{sy:.1}");
            }
            Some(last) => {
                let _ = write!(path, " L{sx:.1},{last:.1} L{sx:.1},{sy:.1}");
            }
        }
        prev = Some(sy);
    }
    if let Some(last) = prev {
        let _ = write!(path, " L{right:.1},{last:.1}");
    }
    let _ = writeln!(out, r##"<path d="{path}" fill="none" stroke="{colour}" stroke-width="1.5"/>"##);
}

/// Best fitness and the vertex counts of the best polytope against the
/// step index.
pub fn render_svg(report: &RunReport) -> String {
    let t = &report.best_trajectory;
    let x = Axis::of(t.iter().map(|p| p.hop as f64).chain([report.counts.steps as f64]));
    let fitness: Vec<(f64, f64)> = t.iter().map(|p| (p.hop as f64, p.fitness)).collect();
    let vertices: Vec<(f64, f64)> = t.iter().map(|p| (p.hop as f64, p.vertex_counts.iter().sum::<usize>() as f64)).collect();
    let mut out = String::new();
    let _ = writeln!(out, r##"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{}" font-family="sans-serif">"##, 2.0 * H + PAD);
    panel(&mut out, PAD, "best fitness", &fitness, &x, "#1f77b4");
    panel(&mut out, PAD + H, "vertices of best", &vertices, &x, "#d62728");
    let _ = writeln!(out, r##"<text x="{}" y="{}" font-size="10">step {:.0}</text>"##, W - 2.5 * PAD, 2.0 * H + PAD - 4.0, x.hi);
    out.push_str("</svg>\n");
    out
}
