//! SVG drawings of torus graphs on their fundamental domain or on a k×k
//! block of copies of it.

use std::fmt::Write as _;

use crate::coherence::VertexWeights;
use crate::geometry::{IVec2, TorusShape, Vec2};
use crate::graph::{Dart, TorusGraph};

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    /// Number of domain copies along each lattice direction.
    pub patch: usize,
    pub scale: f64,
    pub show_dual: bool,
    pub show_weights: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            patch: 1,
            scale: 240.0,
            show_dual: false,
            show_weights: false,
        }
    }
}

const MARGIN: f64 = 16.0;
const PRIMAL_COLOR: &str = "#1f3a93";
const DUAL_COLOR: &str = "#c0392b";

struct Canvas {
    scale: f64,
    min: Vec2,
    max_y: f64,
    out: String,
}

impl Canvas {
    fn x(&self, p: Vec2) -> f64 {
        (p.x - self.min.x) * self.scale + MARGIN
    }

    fn y(&self, p: Vec2) -> f64 {
        (self.max_y - p.y) * self.scale + MARGIN
    }

    fn point(&self, p: Vec2) -> String {
        format!("{:.4} {:.4}", self.x(p), self.y(p))
    }
}

/// Pieces of the segment `a → a + delta` cut where it crosses the boundary
/// of the region `M·[0, k]²`, each moved back into the region.
fn wrapped_segments(shape: &TorusShape, k: usize, a: Vec2, delta: Vec2) -> Vec<(Vec2, Vec2)> {
    let kf = k as f64;
    let s0 = shape.lattice_coords(a);
    let s1 = shape.lattice_coords(a + delta);
    let mut cuts = vec![0.0, 1.0];
    for (lo, hi) in [(s0.x, s1.x), (s0.y, s1.y)] {
        if lo == hi {
            continue;
        }
        let (from, to) = (lo.min(hi) / kf, lo.max(hi) / kf);
        let mut m = from.floor() + 1.0;
        while m < to {
            let t = (m * kf - lo) / (hi - lo);
            if t > 0.0 && t < 1.0 {
                cuts.push(t);
            }
            m += 1.0;
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let mid = s0 + (s1 - s0) * (0.5 * (w[0] + w[1]));
            let shift = IVec2::new(
                (mid.x / kf).floor() as i64 * k as i64,
                (mid.y / kf).floor() as i64 * k as i64,
            );
            let back = shape.translation(shift);
            (a + delta * w[0] - back, a + delta * w[1] - back)
        })
        .collect()
}

fn lifts(k: usize) -> impl Iterator<Item = IVec2> {
    let k = k as i64;
    (0..k).flat_map(move |j| (0..k).map(move |i| IVec2::new(i, j)))
}

fn draw_graph(canvas: &mut Canvas, g: &TorusGraph, k: usize, class: &str, vertex_class: &str) {
    let shape = *g.shape();
    for e in 0..g.edge_count() {
        let d = Dart::reference(e);
        let delta = g.displacement(d);
        for n in lifts(k) {
            let a = g.position(g.tail(d)) + shape.translation(n);
            for (p, q) in wrapped_segments(&shape, k, a, delta) {
                let (p, q) = (canvas.point(p), canvas.point(q));
                writeln!(
                    canvas.out,
                    r#"<path class="{class}" data-edge="{}" d="M {p} L {q}"/>"#,
                    g.edge_name(e)
                )
                .unwrap();
            }
        }
    }
    for v in 0..g.vertex_count() {
        for n in lifts(k) {
            let p = g.position(v) + shape.translation(n);
            writeln!(
                canvas.out,
                r#"<circle class="{vertex_class}" data-vertex="{}" cx="{:.4}" cy="{:.4}" r="3"/>"#,
                g.vertex_name(v),
                canvas.x(p),
                canvas.y(p)
            )
            .unwrap();
        }
    }
}

/// Renders `g` and, when the options ask for them, the dual drawn on the
/// same torus and the power circles of the weights.
pub fn render_svg(
    g: &TorusGraph,
    dual: Option<&TorusGraph>,
    weights: Option<&VertexWeights>,
    options: &RenderOptions,
) -> String {
    let k = options.patch.max(1);
    let shape = *g.shape();
    let corners: Vec<Vec2> = [(0, 0), (1, 0), (1, 1), (0, 1)]
        .iter()
        .map(|&(i, j)| shape.translation(IVec2::new(i * k as i64, j * k as i64)))
        .collect();
    let min = Vec2::new(
        corners.iter().map(|c| c.x).fold(f64::INFINITY, f64::min),
        corners.iter().map(|c| c.y).fold(f64::INFINITY, f64::min),
    );
    let max = Vec2::new(
        corners
            .iter()
            .map(|c| c.x)
            .fold(f64::NEG_INFINITY, f64::max),
        corners
            .iter()
            .map(|c| c.y)
            .fold(f64::NEG_INFINITY, f64::max),
    );
    let width = (max.x - min.x) * options.scale + 2.0 * MARGIN;
    let height = (max.y - min.y) * options.scale + 2.0 * MARGIN;
    let mut canvas = Canvas {
        scale: options.scale,
        min,
        max_y: max.y,
        out: String::new(),
    };

    writeln!(canvas.out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        canvas.out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.4}" height="{height:.4}" viewBox="0 0 {width:.4} {height:.4}">"#
    )
    .unwrap();
    writeln!(
        canvas.out,
        "<style>.domain{{fill:none;stroke:#888;stroke-width:1.5}} .cell{{fill:none;stroke:#ccc;stroke-dasharray:4 3}} \
.edge{{stroke:{PRIMAL_COLOR};stroke-width:1.5}} .vertex{{fill:{PRIMAL_COLOR}}} \
.dual-edge{{stroke:{DUAL_COLOR};stroke-width:1}} .dual-vertex{{fill:{DUAL_COLOR}}} \
.weight{{fill:none;stroke:#27ae60;stroke-dasharray:2 2}}</style>"
    )
    .unwrap();

    for n in lifts(k) {
        if k == 1 {
            break;
        }
        let cell: Vec<String> = [(0, 0), (1, 0), (1, 1), (0, 1)]
            .iter()
            .map(|&(i, j)| canvas.point(shape.translation(n + IVec2::new(i, j))))
            .collect();
        writeln!(
            canvas.out,
            r#"<path class="cell" d="M {} Z"/>"#,
            cell.join(" L ")
        )
        .unwrap();
    }
    let outline: Vec<String> = corners.iter().map(|c| canvas.point(*c)).collect();
    writeln!(
        canvas.out,
        r#"<path class="domain" d="M {} Z"/>"#,
        outline.join(" L ")
    )
    .unwrap();

    if options.show_weights {
        if let Some(w) = weights {
            for v in 0..g.vertex_count() {
                let pi = w.get(v);
                if pi <= 0.0 {
                    continue;
                }
                let r = (2.0 * pi).sqrt() * options.scale;
                for n in lifts(k) {
                    let p = g.position(v) + shape.translation(n);
                    writeln!(
                        canvas.out,
                        r#"<circle class="weight" cx="{:.4}" cy="{:.4}" r="{r:.4}"/>"#,
                        canvas.x(p),
                        canvas.y(p)
                    )
                    .unwrap();
                }
            }
        }
    }
    draw_graph(&mut canvas, g, k, "edge", "vertex");
    if options.show_dual {
        if let Some(d) = dual {
            draw_graph(&mut canvas, d, k, "dual-edge", "dual-vertex");
        }
    }
    canvas.out.push_str("</svg>\n");
    canvas.out
}
