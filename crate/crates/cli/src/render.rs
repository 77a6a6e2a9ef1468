//! SVG output for groves and Aztec diamond tilings.
//!
//! Coordinates are written with three decimals so equal inputs give
//! byte-identical documents.

use std::fmt::Write;

use grove_core::aztec::{classify, AztecTiling, DominoClass};
use grove_core::grove::frozen_edges;
use grove_core::lattice::label_endpoints;
use grove_core::{Bias, Family, Grove, VertexCoord};

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

#[derive(Clone, Debug)]
pub struct GroveSvgOptions {
    /// Length of a lattice edge in pixels.
    pub pixel: f64,
    pub highlight_frozen: bool,
    /// Inscribed boundary for this bias, if any.
    pub overlay: Option<Bias>,
}

impl Default for GroveSvgOptions {
    fn default() -> Self {
        Self {
            pixel: 8.0,
            highlight_frozen: false,
            overlay: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TilingSvgOptions {
    /// Side of a cell in pixels.
    pub pixel: f64,
    pub overlay: bool,
}

impl Default for TilingSvgOptions {
    fn default() -> Self {
        Self {
            pixel: 6.0,
            overlay: false,
        }
    }
}

fn family_color(f: Family) -> &'static str {
    match f {
        Family::A => "#1f77b4",
        Family::B => "#d62728",
        Family::C => "#2ca02c",
    }
}

fn class_color(c: DominoClass) -> &'static str {
    match c {
        DominoClass::North => "#e4572e",
        DominoClass::South => "#f3a712",
        DominoClass::East => "#29335c",
        DominoClass::West => "#669bbc",
    }
}

struct Frame {
    scale: f64,
    margin: f64,
}

impl Frame {
    /// Planar position of a vertex: the corner `(0, 0, -n)` at the bottom,
    /// horizontal edges horizontal.
    fn vertex(&self, v: VertexCoord) -> (f64, f64) {
        let (a, _, c) = (-v.i as f64, -v.j as f64, -v.k as f64);
        (
            self.margin + (a + c / 2.0) * self.scale,
            self.margin + c * SQRT3_2 * self.scale,
        )
    }

    /// Point of the plane `x + y + z = -1`, scaled to order `n`.
    fn plane(&self, n: f64, p: [f64; 3]) -> (f64, f64) {
        let (a, c) = (-p[0] * n, -p[2] * n);
        (
            self.margin + (a + c / 2.0) * self.scale,
            self.margin + c * SQRT3_2 * self.scale,
        )
    }
}

fn header(out: &mut String, width: f64, height: f64) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.3}" height="{height:.3}" viewBox="0 0 {width:.3} {height:.3}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
}

/// Value of the ellipse form at a plane point; negative inside.
fn ellipse_form(bias: &Bias, p: [f64; 3]) -> f64 {
    let [a, b, c] = bias.as_f64();
    let (r, s, t) = ((b + c) * p[0], (a + c) * p[1], (a + b) * p[2]);
    (r * r + s * s + t * t) / 2.0 - (r * s + r * t + s * t)
}

/// Boundary points found by bisection along rays from the center.
fn ellipse_outline(bias: &Bias, steps: usize) -> Vec<[f64; 3]> {
    let center = [-1.0 / 3.0; 3];
    // Orthonormal directions in the plane.
    let u = [1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt(), 0.0];
    let w = [1.0 / 6f64.sqrt(), 1.0 / 6f64.sqrt(), -2.0 / 6f64.sqrt()];
    (0..steps)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / steps as f64;
            let d: Vec<f64> = (0..3).map(|i| th.cos() * u[i] + th.sin() * w[i]).collect();
            let at = |t: f64| [center[0] + t * d[0], center[1] + t * d[1], center[2] + t * d[2]];
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..60 {
                let mid = (lo + hi) / 2.0;
                if ellipse_form(bias, at(mid)) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            at(lo)
        })
        .collect()
}

pub fn render_grove_svg(g: &Grove, options: &GroveSvgOptions) -> String {
    let n = g.order();
    let nf = n as f64;
    let frame = Frame {
        scale: options.pixel,
        margin: options.pixel,
    };
    let width = nf * options.pixel + 2.0 * frame.margin;
    let height = nf * SQRT3_2 * options.pixel + 2.0 * frame.margin;
    let mut out = String::new();
    header(&mut out, width, height);

    let frozen = options.highlight_frozen.then(|| frozen_edges(g));
    let stroke = (options.pixel / 6.0).max(0.5);
    writeln!(out, r#"<g stroke-linecap="round">"#).unwrap();
    for e in g.edges() {
        let (u, v) = label_endpoints(n, e).expect("grove labels are in range");
        let ((x0, y0), (x1, y1)) = (frame.vertex(u), frame.vertex(v));
        let (color, width, class) = match &frozen {
            Some(fr) if fr.family(e.family).contains(&(e.first, e.second)) => {
                (family_color(e.family), 2.0 * stroke, "edge frozen")
            }
            Some(_) => ("#9a9a9a", stroke, "edge"),
            None => (family_color(e.family), stroke, "edge"),
        };
        writeln!(
            out,
            r#"<line class="{class}" x1="{x0:.3}" y1="{y0:.3}" x2="{x1:.3}" y2="{y1:.3}" stroke="{color}" stroke-width="{width:.3}"/>"#
        )
        .unwrap();
    }
    writeln!(out, "</g>").unwrap();

    let radius = (options.pixel / 8.0).max(0.4);
    writeln!(out, r##"<g fill="#222">"##).unwrap();
    for a in 0..=n {
        for b in 0..=n - a {
            let (x, y) = frame.vertex(VertexCoord::from_magnitudes(a, b, n - a - b));
            writeln!(out, r#"<circle class="vertex" cx="{x:.3}" cy="{y:.3}" r="{radius:.3}"/>"#).unwrap();
        }
    }
    writeln!(out, "</g>").unwrap();

    if let Some(bias) = &options.overlay {
        let style = r##"fill="none" stroke="#000" stroke-dasharray="4 3""##;
        if bias.is_uniform() {
            let (cx, cy) = (frame.margin + nf / 2.0 * frame.scale, frame.margin + nf * SQRT3_2 / 3.0 * frame.scale);
            let r = nf / (2.0 * 3f64.sqrt()) * frame.scale;
            writeln!(out, r#"<circle class="overlay" cx="{cx:.3}" cy="{cy:.3}" r="{r:.3}" {style}/>"#).unwrap();
        } else {
            let points: Vec<String> = ellipse_outline(bias, 180)
                .into_iter()
                .map(|p| {
                    let (x, y) = frame.plane(nf, p);
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            writeln!(out, r#"<polygon class="overlay" points="{}" {style}/>"#, points.join(" ")).unwrap();
        }
    }
    writeln!(out, "</svg>").unwrap();
    out
}

pub fn render_tiling_svg(t: &AztecTiling, options: &TilingSvgOptions) -> String {
    let n = t.order() as f64;
    let px = options.pixel;
    let margin = px;
    let side = 2.0 * n * px + 2.0 * margin;
    let mut out = String::new();
    header(&mut out, side, side);
    // Cell (X, Y) in doubled coordinates spans [(X-1)/2, (X+1)/2] horizontally.
    let sx = |x: f64| margin + (x + n) * px;
    let sy = |y: f64| margin + (n - y) * px;
    writeln!(out, r##"<g stroke="#333" stroke-width="{:.3}">"##, (px / 10.0).max(0.3)).unwrap();
    for d in t.dominoes() {
        let cells = d.cells();
        let xs = cells.iter().map(|c| c.0);
        let ys = cells.iter().map(|c| c.1);
        let (x_lo, x_hi) = (xs.clone().min().unwrap(), xs.max().unwrap());
        let (y_lo, y_hi) = (ys.clone().min().unwrap(), ys.max().unwrap());
        let left = sx((x_lo - 1) as f64 / 2.0);
        let top = sy((y_hi + 1) as f64 / 2.0);
        let w = (x_hi - x_lo + 2) as f64 / 2.0 * px;
        let h = (y_hi - y_lo + 2) as f64 / 2.0 * px;
        let class = classify(t, d).expect("domino belongs to the tiling");
        writeln!(
            out,
            r#"<rect class="domino {class}" x="{left:.3}" y="{top:.3}" width="{w:.3}" height="{h:.3}" fill="{}"/>"#,
            class_color(class)
        )
        .unwrap();
    }
    writeln!(out, "</g>").unwrap();
    if options.overlay {
        let c = margin + n * px;
        let r = (n + 1.0) / 2f64.sqrt() * px;
        writeln!(
            out,
            r##"<circle class="overlay" cx="{c:.3}" cy="{c:.3}" r="{r:.3}" fill="none" stroke="#000" stroke-dasharray="4 3"/>"##
        )
        .unwrap();
    }
    writeln!(out, "</svg>").unwrap();
    out
}
