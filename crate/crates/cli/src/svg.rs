//! Standalone SVG figures. Output depends only on the inputs: coordinates
//! are printed with fixed precision and elements are emitted in a fixed
//! order.

use std::fmt::Write as _;

use segmap::som::{CodeBook, Topology};

/// Ordered class palette; class `c` always gets `PALETTE[c % len]`.
pub const PALETTE: [&str; 10] =
    ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];

/// Gray tone for class `c` of `k`, light to dark.
pub fn gray(c: usize, k: usize) -> String {
    let t = if k <= 1 { 0.5 } else { c as f64 / (k - 1) as f64 };
    let v = (235.0 - t * 175.0).round() as u8;
    format!("#{v:02x}{v:02x}{v:02x}")
}

pub fn color(c: usize) -> String {
    PALETTE[c % PALETTE.len()].to_string()
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub struct Svg {
    width: f64,
    height: f64,
    body: String,
}

impl Svg {
    pub fn new(width: f64, height: f64) -> Self {
        Self { width, height, body: String::new() }
    }

    pub fn raw(&mut self, element: &str) {
        self.body.push_str(element);
        self.body.push('\n');
    }

    pub fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str, stroke: &str) {
        let _ = writeln!(
            self.body,
            r#"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" fill="{fill}" stroke="{stroke}"/>"#
        );
    }

    pub fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str, extra: &str) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{stroke}"{extra}/>"#
        );
    }

    pub fn polyline(&mut self, points: &[(f64, f64)], stroke: &str, width: f64) {
        let pts: Vec<String> = points.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="{width:.2}"/>"#,
            pts.join(" ")
        );
    }

    pub fn circle(&mut self, cx: f64, cy: f64, r: f64, fill: &str) {
        let _ = writeln!(self.body, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{r:.2}" fill="{fill}"/>"#);
    }

    pub fn text(&mut self, x: f64, y: f64, size: f64, anchor: &str, content: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{x:.2}" y="{y:.2}" font-size="{size:.1}" font-family="sans-serif" text-anchor="{anchor}">{}</text>"#,
            escape(content)
        );
    }

    pub fn finish(self) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.body,
            w = self.width,
            h = self.height
        )
    }
}

fn grid_shape(topology: &Topology) -> (usize, usize) {
    match *topology {
        Topology::Grid2d { rows, cols } => (rows, cols),
        Topology::Chain { length } => (1, length),
    }
}

const CELL: f64 = 90.0;
const MARGIN: f64 = 30.0;

fn cell_origin(topology: &Topology, unit: usize) -> (f64, f64) {
    let (r, c) = topology.position(unit);
    (MARGIN + c as f64 * CELL, MARGIN + r as f64 * CELL)
}

fn value_range<'a>(values: impl Iterator<Item = &'a f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() || hi - lo < 1e-12 {
        (lo.min(0.0) - 1.0, hi.max(0.0) + 1.0)
    } else {
        (lo, hi)
    }
}

/// One small profile panel per unit, laid out like the map, on a common
/// vertical scale.
pub fn profiles(cb: &CodeBook, codes: &[String], classes: Option<(&[usize], usize)>) -> String {
    let (rows, cols) = grid_shape(cb.topology());
    let mut svg = Svg::new(2.0 * MARGIN + cols as f64 * CELL, 2.0 * MARGIN + rows as f64 * CELL + 20.0);
    let (lo, hi) = value_range(cb.weights().iter());
    let d = cb.dimension();
    svg.text(MARGIN, 20.0, 12.0, "start", &format!("Code-vector profiles ({} variables: {})", d, codes.join(" ")));
    for (u, w) in cb.vectors().enumerate() {
        let (x0, y0) = cell_origin(cb.topology(), u);
        let fill = match classes {
            Some((labels, k)) => gray(labels[u], k),
            None => "#ffffff".into(),
        };
        svg.rect(x0, y0, CELL, CELL, &fill, "#444444");
        let zero = y0 + 8.0 + (hi / (hi - lo)) * (CELL - 16.0);
        if lo < 0.0 && hi > 0.0 {
            svg.line(x0 + 4.0, zero, x0 + CELL - 4.0, zero, "#999999", r#" stroke-dasharray="2,2""#);
        }
        let points: Vec<(f64, f64)> = w
            .iter()
            .enumerate()
            .map(|(j, &v)| {
                let x = x0 + 6.0 + (CELL - 12.0) * if d > 1 { j as f64 / (d - 1) as f64 } else { 0.5 };
                let y = y0 + 8.0 + (hi - v) / (hi - lo) * (CELL - 16.0);
                (x, y)
            })
            .collect();
        svg.polyline(&points, "#000000", 1.2);
        svg.text(x0 + 4.0, y0 + 12.0, 9.0, "start", &(u + 1).to_string());
    }
    svg.finish()
}

/// Map cells shaded by class, gray tones by default.
pub fn partition(topology: &Topology, labels: &[usize], k: usize, colored: bool) -> String {
    let (rows, cols) = grid_shape(topology);
    let legend = 24.0 * k as f64;
    let mut svg = Svg::new(2.0 * MARGIN + cols as f64 * CELL + 120.0, (2.0 * MARGIN + rows as f64 * CELL).max(legend + 2.0 * MARGIN));
    svg.text(MARGIN, 20.0, 12.0, "start", &format!("Partition of the map into {k} classes"));
    let tone = |c: usize| if colored { color(c) } else { gray(c, k) };
    for (u, &c) in labels.iter().enumerate() {
        let (x0, y0) = cell_origin(topology, u);
        svg.rect(x0, y0, CELL, CELL, &tone(c), "#ffffff");
        svg.text(x0 + CELL / 2.0, y0 + CELL / 2.0 + 5.0, 14.0, "middle", &(c + 1).to_string());
    }
    let lx = 2.0 * MARGIN + cols as f64 * CELL;
    for c in 0..k {
        let y = MARGIN + 24.0 * c as f64;
        svg.rect(lx, y, 16.0, 16.0, &tone(c), "#444444");
        svg.text(lx + 22.0, y + 12.0, 11.0, "start", &format!("class {}", c + 1));
    }
    svg.finish()
}

/// Successive map positions of each individual, drawn as arrows between
/// unit centers over the (optionally shaded) grid.
pub fn trajectories(topology: &Topology, background: Option<(&[usize], usize)>, paths: &[(String, Vec<usize>)]) -> String {
    let (rows, cols) = grid_shape(topology);
    let legend = 18.0 * paths.len() as f64;
    let mut svg = Svg::new(2.0 * MARGIN + cols as f64 * CELL + 160.0, (2.0 * MARGIN + rows as f64 * CELL).max(legend + 2.0 * MARGIN));
    svg.raw(
        r##"<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z" fill="#333333"/></marker></defs>"##,
    );
    svg.text(MARGIN, 20.0, 12.0, "start", "Trajectories on the map");
    for u in 0..topology.unit_count() {
        let (x0, y0) = cell_origin(topology, u);
        let fill = match background {
            Some((labels, k)) => gray(labels[u], k),
            None => "#f4f4f4".into(),
        };
        svg.rect(x0, y0, CELL, CELL, &fill, "#ffffff");
    }
    let n = paths.len().max(1) as f64;
    for (p, (id, units)) in paths.iter().enumerate() {
        let stroke = color(p);
        // small per-individual offset keeps shared moves distinguishable
        let off = (p as f64 - (n - 1.0) / 2.0) * 6.0;
        let center = |u: usize| {
            let (x, y) = cell_origin(topology, u);
            (x + CELL / 2.0 + off, y + CELL / 2.0 + off)
        };
        if let Some(&first) = units.first() {
            let (x, y) = center(first);
            svg.circle(x, y, 4.0, &stroke);
        }
        for w in units.windows(2) {
            if w[0] == w[1] {
                continue;
            }
            let (x1, y1) = center(w[0]);
            let (x2, y2) = center(w[1]);
            svg.line(x1, y1, x2, y2, &stroke, r#" stroke-width="2" marker-end="url(#arrow)""#);
        }
        let lx = 2.0 * MARGIN + cols as f64 * CELL;
        let ly = MARGIN + 18.0 * p as f64;
        svg.line(lx, ly + 8.0, lx + 20.0, ly + 8.0, &stroke, r#" stroke-width="2""#);
        let labels: Vec<String> = units.iter().map(|u| (u + 1).to_string()).collect();
        svg.text(lx + 26.0, ly + 12.0, 10.0, "start", &format!("{id}: {}", labels.join("-")));
    }
    svg.finish()
}

/// Horizontal bars, one per class.
pub fn bars(title: &str, labels: &[String], values: &[f64]) -> String {
    let h = 24.0;
    let width = 520.0;
    let mut svg = Svg::new(width, 2.0 * MARGIN + h * labels.len() as f64 + 10.0);
    svg.text(MARGIN, 20.0, 12.0, "start", title);
    let max = values.iter().copied().fold(0.0, f64::max).max(1e-12);
    for (c, (l, &v)) in labels.iter().zip(values).enumerate() {
        let y = MARGIN + h * c as f64;
        svg.text(MARGIN + 40.0, y + 15.0, 11.0, "end", l);
        let w = (width - 2.0 * MARGIN - 110.0) * v / max;
        svg.rect(MARGIN + 48.0, y + 3.0, w, h - 6.0, &color(c), "none");
        svg.text(MARGIN + 54.0 + w, y + 15.0, 10.0, "start", &format!("{v}"));
    }
    svg.finish()
}

/// One curve per class across the variables, shared scale.
pub fn class_curves(title: &str, codes: &[String], curves: &[(String, Vec<f64>)]) -> String {
    let (w, h) = (640.0, 360.0);
    let (left, right, top, bottom) = (50.0, 110.0, 40.0, 70.0);
    let mut svg = Svg::new(w, h);
    svg.text(left, 20.0, 12.0, "start", title);
    let (lo, hi) = value_range(curves.iter().flat_map(|(_, v)| v.iter()));
    let d = codes.len();
    let px = |j: usize| left + (w - left - right) * if d > 1 { j as f64 / (d - 1) as f64 } else { 0.5 };
    let py = |v: f64| top + (hi - v) / (hi - lo) * (h - top - bottom);
    svg.rect(left, top, w - left - right, h - top - bottom, "none", "#444444");
    if lo < 0.0 && hi > 0.0 {
        svg.line(left, py(0.0), w - right, py(0.0), "#999999", r#" stroke-dasharray="3,3""#);
    }
    svg.text(left - 4.0, py(hi) + 4.0, 9.0, "end", &format!("{hi:.2}"));
    svg.text(left - 4.0, py(lo) + 4.0, 9.0, "end", &format!("{lo:.2}"));
    for (j, code) in codes.iter().enumerate() {
        let x = px(j);
        let y = h - bottom + 12.0;
        svg.raw(&format!(
            r#"<text x="{x:.2}" y="{y:.2}" font-size="9.0" font-family="sans-serif" text-anchor="end" transform="rotate(-60 {x:.2} {y:.2})">{}</text>"#,
            escape(code)
        ));
    }
    for (c, (name, values)) in curves.iter().enumerate() {
        let pts: Vec<(f64, f64)> = values.iter().enumerate().map(|(j, &v)| (px(j), py(v))).collect();
        svg.polyline(&pts, &color(c), 1.8);
        let ly = top + 16.0 * c as f64;
        svg.line(w - right + 10.0, ly + 6.0, w - right + 28.0, ly + 6.0, &color(c), r#" stroke-width="2""#);
        svg.text(w - right + 32.0, ly + 10.0, 10.0, "start", name);
    }
    svg.finish()
}

/// Variables on two principal axes inside the unit correlation circle.
pub fn projection(points: &[(String, f64, f64)], axis_labels: (&str, &str)) -> String {
    let size = 460.0;
    let r = (size - 2.0 * MARGIN - 40.0) / 2.0;
    let (cx, cy) = (size / 2.0, size / 2.0);
    let mut svg = Svg::new(size, size);
    svg.raw(&format!(r##"<circle cx="{cx:.2}" cy="{cy:.2}" r="{r:.2}" fill="none" stroke="#444444"/>"##));
    svg.line(cx - r, cy, cx + r, cy, "#999999", "");
    svg.line(cx, cy - r, cx, cy + r, "#999999", "");
    svg.text(cx + r, cy + 16.0, 11.0, "end", axis_labels.0);
    svg.text(cx + 6.0, cy - r - 4.0, 11.0, "start", axis_labels.1);
    for (code, x, y) in points {
        let (px, py) = (cx + x * r, cy - y * r);
        svg.line(cx, cy, px, py, "#1f77b4", r#" stroke-width="0.8""#);
        svg.circle(px, py, 2.5, "#1f77b4");
        svg.text(px + 4.0, py - 4.0, 9.0, "start", code);
    }
    svg.finish()
}
