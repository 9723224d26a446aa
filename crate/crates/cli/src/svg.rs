//! Static SVG pictures of `Δ⁻` against `Δ⁺ - m` in a two-dimensional `M`.
//!
//! Polygons are clipped to the viewport with exact rationals; only the final pixel
//! coordinates are rounded.

use std::fmt::Write;

use num_rational::Ratio;
use toric_cohom::cohomology::{h0_containment, DegreeBox};
use toric_cohom::{LatticePolyhedron, MVec, VirtualPolyhedron};

type Q = Ratio<i128>;

const SCALE: i64 = 40;
const LEGEND: i64 = 48;

const STYLE: &str = "\
.grid { stroke: #d6dcc8; stroke-width: 1 }
.lattice { fill: #8c8c8c }
.difference { fill: #f2a7a7; stroke: none }
.covered { fill: #c8c8c8; stroke: none }
.minus { fill: none; stroke: #202020; stroke-width: 2 }
.plus { fill: #6b8fd6; fill-opacity: 0.25; stroke: #c62828; stroke-width: 2.5; stroke-dasharray: 6 3 }
.legend { font-family: monospace; font-size: 13px; fill: #202020 }";

/// Half-plane `<a, x> >= b`.
#[derive(Clone, Debug)]
struct HalfPlane {
    a: [Q; 2],
    b: Q,
}

impl HalfPlane {
    fn eval(&self, p: &[Q; 2]) -> Q {
        self.a[0] * p[0] + self.a[1] * p[1] - self.b
    }
}

/// `<x, ρ> >= min <P, ρ> - <shift, ρ>` on every ray; this is all of `P - shift` because
/// `P` is compatible with the fan.
fn inequalities(l: &VirtualPolyhedron, p: &LatticePolyhedron, shift: &MVec) -> Vec<HalfPlane> {
    l.fan()
        .rays()
        .iter()
        .map(|r| {
            let c = r.coords();
            let min = p.support_min(r).expect("compatible polyhedron");
            let s = shift.coords()[0] * c[0] + shift.coords()[1] * c[1];
            HalfPlane {
                a: [Q::from(c[0] as i128), Q::from(c[1] as i128)],
                b: Q::from((min - s) as i128),
            }
        })
        .collect()
}

fn clip(mut poly: Vec<[Q; 2]>, h: &HalfPlane) -> Vec<[Q; 2]> {
    let zero = Q::from(0);
    let mut out = Vec::with_capacity(poly.len() + 1);
    if poly.is_empty() {
        return out;
    }
    poly.push(poly[0]);
    for w in poly.windows(2) {
        let (p, q) = (w[0], w[1]);
        let (fp, fq) = (h.eval(&p), h.eval(&q));
        if fp >= zero {
            out.push(p);
        }
        if (fp < zero && fq > zero) || (fp > zero && fq < zero) {
            let t = fp / (fp - fq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out.dedup();
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

fn region(view: &DegreeBox, planes: &[HalfPlane]) -> Vec<[Q; 2]> {
    let (lo, hi) = (view.lo().coords(), view.hi().coords());
    let q = |x: i64| Q::from(x as i128);
    let rect = vec![
        [q(lo[0]), q(lo[1])],
        [q(hi[0]), q(lo[1])],
        [q(hi[0]), q(hi[1])],
        [q(lo[0]), q(hi[1])],
    ];
    planes.iter().fold(rect, clip)
}

struct Canvas<'a> {
    view: &'a DegreeBox,
    out: String,
}

impl Canvas<'_> {
    fn px(&self, p: &[Q; 2]) -> (f64, f64) {
        let f = |r: Q| *r.numer() as f64 / *r.denom() as f64;
        let (x0, y1) = (self.view.lo().coords()[0], self.view.hi().coords()[1]);
        (
            (f(p[0]) - x0 as f64) * SCALE as f64,
            (y1 as f64 - f(p[1])) * SCALE as f64,
        )
    }

    fn polygon(&mut self, class: &str, poly: &[[Q; 2]]) {
        match poly {
            [] => {}
            [p] => {
                let (x, y) = self.px(p);
                writeln!(
                    self.out,
                    r#"<circle class="{class}" cx="{x:.2}" cy="{y:.2}" r="4"/>"#
                )
                .unwrap();
            }
            _ => {
                let pts: Vec<String> = poly
                    .iter()
                    .map(|p| {
                        let (x, y) = self.px(p);
                        format!("{x:.2},{y:.2}")
                    })
                    .collect();
                writeln!(
                    self.out,
                    r#"<polygon class="{class}" points="{}"/>"#,
                    pts.join(" ")
                )
                .unwrap();
            }
        }
    }
}

/// The picture for bundle `l` in degree `m`; `view` is the drawn region of `M_ℝ`.
pub fn render(l: &VirtualPolyhedron, m: &MVec, title: &str, view: &DegreeBox) -> String {
    assert_eq!(l.dim(), 2, "rendering needs rank 2");
    let (lo, hi) = (view.lo().coords(), view.hi().coords());
    let width = (hi[0] - lo[0]) * SCALE;
    let height = (hi[1] - lo[1]) * SCALE;
    let mut c = Canvas {
        view,
        out: String::new(),
    };
    writeln!(
        c.out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{}" viewBox="0 0 {width} {}">"#,
        height + LEGEND,
        height + LEGEND
    )
    .unwrap();
    writeln!(c.out, "<style>\n{STYLE}\n</style>").unwrap();

    writeln!(c.out, r#"<g class="grid">"#).unwrap();
    for x in lo[0]..=hi[0] {
        let px = (x - lo[0]) * SCALE;
        writeln!(c.out, r#"<line x1="{px}" y1="0" x2="{px}" y2="{height}"/>"#).unwrap();
    }
    for y in lo[1]..=hi[1] {
        let py = (hi[1] - y) * SCALE;
        writeln!(c.out, r#"<line x1="0" y1="{py}" x2="{width}" y2="{py}"/>"#).unwrap();
    }
    writeln!(c.out, "</g>").unwrap();

    let zero = MVec::zero(2);
    let minus_planes = inequalities(l, l.minus(), &zero);
    let plus_planes = inequalities(l, l.plus(), m);
    let minus = region(view, &minus_planes);
    let both: Vec<HalfPlane> = minus_planes.iter().chain(&plus_planes).cloned().collect();
    let covered = region(view, &both);
    let plus = region(view, &plus_planes);

    // Δ⁻ in the highlight colour, then the part inside Δ⁺ - m painted over
    c.polygon("difference", &minus);
    c.polygon("covered", &covered);
    c.polygon("minus", &minus);
    c.polygon("plus", &plus);

    writeln!(c.out, r#"<g class="lattice">"#).unwrap();
    for x in lo[0]..=hi[0] {
        for y in lo[1]..=hi[1] {
            let (px, py) = ((x - lo[0]) * SCALE, (hi[1] - y) * SCALE);
            writeln!(c.out, r#"<circle cx="{px}" cy="{py}" r="2"/>"#).unwrap();
        }
    }
    writeln!(c.out, "</g>").unwrap();

    let note = if h0_containment(l, m) == 1 {
        "H⁰ contribution: Δ⁻ ⊆ Δ⁺ − m"
    } else {
        "highlighted: Δ⁻ ∖ (Δ⁺ − m)"
    };
    writeln!(
        c.out,
        r#"<text class="legend" x="6" y="{}">{} at m = {m}</text>"#,
        height + 18,
        escape(title)
    )
    .unwrap();
    writeln!(
        c.out,
        r#"<text class="legend" x="6" y="{}">{note}</text>"#,
        height + 38
    )
    .unwrap();
    c.out.push_str("</svg>\n");
    c.out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
