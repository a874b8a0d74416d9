//! Self-contained SVG output: phase diagrams, polar trajectories and radar
//! charts. Output depends only on the input values.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::measures::{MeasureSet, PolarPoint};
use crate::sweep::{Phase, PhaseGrid};

const FONT: &str = "font-family=\"sans-serif\" font-size=\"12\"";

fn phase_color(p: Phase) -> &'static str {
    match p {
        Phase::Nihilism => "#d9d9d9",
        Phase::Atomism => "#4e79a7",
        Phase::Mixism => "#59a14f",
        Phase::Mobism => "#e15759",
    }
}

/// Fixed-precision coordinate formatting keeps files small and stable.
fn c(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn header(out: &mut String, w: u32, h: u32) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    let _ = writeln!(
        out,
        "<rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"white\"/>"
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Phase diagram with `g` on the horizontal and `d` on the vertical axis.
///
/// Points on the mesh lattice get a full cell; off-lattice points are drawn
/// afterwards as half-size cells.
pub fn render_phase_svg(grid: &PhaseGrid) -> Result<String> {
    if grid.points.is_empty() {
        return Err(Error::EmptyInput("phase grid has no points".into()));
    }
    let (left, top, size) = (60.0, 30.0, 440.0);
    let step = grid.grid_step.unwrap_or(0.1);
    let on_lattice = |v: f64| ((v / step).round() * step - v).abs() < 1e-9;
    let to_x = |g: f64| left + g * size;
    let to_y = |d: f64| top + (1.0 - d) * size;

    let mut out = String::new();
    header(&mut out, 660, 530);
    let _ = writeln!(out, "<g id=\"cells\">");
    let mut ordered: Vec<_> = grid.points.iter().collect();
    ordered.sort_by_key(|p| !(on_lattice(p.g) && on_lattice(p.d)));
    for p in ordered {
        let cell = if on_lattice(p.g) && on_lattice(p.d) {
            step
        } else {
            step / 2.0
        } * size;
        let _ = writeln!(
            out,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" stroke=\"white\" stroke-width=\"0.5\"><title>g={} d={} {}</title></rect>",
            c(to_x(p.g) - cell / 2.0),
            c(to_y(p.d) - cell / 2.0),
            c(cell),
            c(cell),
            phase_color(p.phase),
            p.g,
            p.d,
            p.phase
        );
    }
    let _ = writeln!(out, "</g>");

    // Axes with ticks every 0.1.
    let _ = writeln!(out, "<g id=\"axes\" stroke=\"black\" fill=\"none\">");
    let _ = writeln!(
        out,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
        c(left - size * step / 2.0),
        c(top - size * step / 2.0),
        c(size * (1.0 + step)),
        c(size * (1.0 + step))
    );
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "<g id=\"labels\" {FONT} text-anchor=\"middle\">");
    let base = top + size + size * step / 2.0;
    for i in 0..=10 {
        let v = i as f64 / 10.0;
        let _ = writeln!(out, "<text x=\"{}\" y=\"{}\">{v:.1}</text>", c(to_x(v)), c(base + 16.0));
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\">{v:.1}</text>",
            c(left - size * step / 2.0 - 18.0),
            c(to_y(v) + 4.0)
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\">g</text>",
        c(left + size / 2.0),
        c(base + 34.0)
    );
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\">d</text>",
        c(left - size * step / 2.0 - 40.0),
        c(top + size / 2.0)
    );
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, "<g id=\"legend\" {FONT}>");
    for (i, phase) in Phase::ALL.iter().enumerate() {
        let y = top + 20.0 + 24.0 * i as f64;
        let _ = writeln!(
            out,
            "<rect x=\"545\" y=\"{}\" width=\"14\" height=\"14\" fill=\"{}\" stroke=\"black\" stroke-width=\"0.5\"/>",
            c(y),
            phase_color(*phase)
        );
        let _ = writeln!(out, "<text x=\"566\" y=\"{}\">{phase}</text>", c(y + 11.0));
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    Ok(out)
}

/// Polar trajectory: `x = r cos θ`, `y = r sin θ`, joined in time order.
///
/// θ lies in `[0, π/2]` for non-negative vectors, so the plot is a quarter
/// plane with reference arcs of constant `r` and rays of constant θ.
pub fn render_trajectory_svg(points: &[PolarPoint]) -> Result<String> {
    if points.is_empty() {
        return Err(Error::EmptyInput("trajectory has no points".into()));
    }
    let (left, bottom, size) = (60.0, 470.0, 420.0);
    let r_max = points.iter().map(|p| p.r).fold(0.0, f64::max);
    let r_axis = nice_ceiling(r_max.max(1e-12));
    let scale = size / r_axis;
    let to_svg = |(x, y): (f64, f64)| (left + x * scale, bottom - y * scale);

    let mut out = String::new();
    header(&mut out, 540, 530);
    let _ = writeln!(
        out,
        "<g id=\"grid\" stroke=\"#bbbbbb\" fill=\"none\" stroke-width=\"0.8\">"
    );
    for i in 1..=4 {
        let r = r_axis * i as f64 / 4.0;
        let (x0, y0) = to_svg((r, 0.0));
        let (x1, y1) = to_svg((0.0, r));
        let _ = writeln!(
            out,
            "<path d=\"M {} {} A {} {} 0 0 0 {} {}\"/>",
            c(x0),
            c(y0),
            c(r * scale),
            c(r * scale),
            c(x1),
            c(y1)
        );
    }
    for deg in [15, 30, 45, 60, 75] {
        let t = (deg as f64).to_radians();
        let (x, y) = to_svg((r_axis * t.cos(), r_axis * t.sin()));
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            c(left),
            c(bottom),
            c(x),
            c(y)
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "<g id=\"axes\" stroke=\"black\">");
    let _ = writeln!(
        out,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
        c(left),
        c(bottom),
        c(left + size),
        c(bottom)
    );
    let _ = writeln!(
        out,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
        c(left),
        c(bottom),
        c(left),
        c(bottom - size)
    );
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "<g id=\"labels\" {FONT}>");
    for i in 1..=4 {
        let r = r_axis * i as f64 / 4.0;
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
            c(left + r * scale),
            c(bottom + 16.0),
            fmt_tick(r)
        );
    }
    for deg in [15, 30, 45, 60, 75] {
        let t = (deg as f64).to_radians();
        let (x, y) = to_svg((r_axis * 1.04 * t.cos(), r_axis * 1.04 * t.sin()));
        let _ = writeln!(out, "<text x=\"{}\" y=\"{}\">{deg}°</text>", c(x), c(y));
    }
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">r (θ = 0)</text>",
        c(left + size / 2.0),
        c(bottom + 36.0)
    );
    let _ = writeln!(out, "</g>");

    let path: Vec<String> = points
        .iter()
        .map(|p| {
            let (x, y) = to_svg(p.to_cartesian());
            format!("{},{}", c(x), c(y))
        })
        .collect();
    let _ = writeln!(
        out,
        "<polyline id=\"trajectory\" points=\"{}\" fill=\"none\" stroke=\"#e15759\" stroke-width=\"1\"/>",
        path.join(" ")
    );
    let (sx, sy) = to_svg(points[0].to_cartesian());
    let (ex, ey) = to_svg(points[points.len() - 1].to_cartesian());
    let _ = writeln!(
        out,
        "<circle id=\"start\" cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"#4e79a7\"/>",
        c(sx),
        c(sy)
    );
    let _ = writeln!(
        out,
        "<circle id=\"end\" cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"#e15759\"/>",
        c(ex),
        c(ey)
    );
    out.push_str("</svg>\n");
    Ok(out)
}

fn nice_ceiling(v: f64) -> f64 {
    let mag = 10f64.powf(v.log10().floor());
    for m in [1.0, 2.0, 2.5, 5.0, 10.0] {
        if m * mag >= v {
            return m * mag;
        }
    }
    10.0 * mag
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Radar axes, in charting order.
pub const RADAR_AXES: [&str; 9] = [
    "mu_I", "var_I", "mu_L", "var_L", "mu_LR", "var_LR", "mu_S", "var_S", "m_mix",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RadarInput {
    pub label: String,
    pub values: [f64; 9],
}

impl RadarInput {
    pub fn from_measures(label: impl Into<String>, m: &MeasureSet) -> Self {
        Self {
            label: label.into(),
            values: [
                m.mu_info,
                m.var_info,
                m.mu_euclid,
                m.var_euclid,
                m.mu_rel,
                m.var_rel,
                m.mu_sim,
                m.var_sim,
                m.m_mix,
            ],
        }
    }
}

/// Divides every axis by its maximum across the inputs; axes whose maximum
/// is not positive stay 0.
pub fn normalize_radar(inputs: &[RadarInput]) -> Vec<RadarInput> {
    let mut max = [0.0f64; 9];
    for inp in inputs {
        for (m, v) in max.iter_mut().zip(inp.values) {
            *m = m.max(v);
        }
    }
    inputs
        .iter()
        .map(|inp| {
            let mut values = [0.0; 9];
            for (k, v) in values.iter_mut().enumerate() {
                *v = if max[k] > 0.0 {
                    (inp.values[k] / max[k]).clamp(0.0, 1.0)
                } else {
                    0.0
                };
            }
            RadarInput {
                label: inp.label.clone(),
                values,
            }
        })
        .collect()
}

/// `label,<axes...>` CSV of (usually normalized) radar values.
pub fn radar_csv(inputs: &[RadarInput]) -> String {
    let mut out = String::from("label");
    for a in RADAR_AXES {
        let _ = write!(out, ",{a}");
    }
    out.push('\n');
    for inp in inputs {
        out.push_str(&inp.label.replace([',', '\n'], " "));
        for v in inp.values {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

const SERIES_COLORS: [&str; 8] = [
    "#1b7837", "#7fbf7b", "#e66101", "#fdb863", "#2166ac", "#92c5de", "#762a83", "#b2182b",
];

/// Radar chart of already-normalized inputs.
pub fn render_radar_svg(normalized: &[RadarInput]) -> Result<String> {
    if normalized.is_empty() {
        return Err(Error::EmptyInput("radar chart needs at least one input".into()));
    }
    let (cx, cy, radius) = (260.0, 260.0, 180.0);
    let axis_point = |k: usize, v: f64| {
        let angle = -std::f64::consts::FRAC_PI_2 + std::f64::consts::TAU * k as f64 / 9.0;
        (cx + radius * v * angle.cos(), cy + radius * v * angle.sin())
    };
    let mut out = String::new();
    header(&mut out, 720, 520);
    let _ = writeln!(out, "<g id=\"web\" stroke=\"#bbbbbb\" fill=\"none\">");
    for ring in 1..=4 {
        let pts: Vec<String> = (0..9)
            .map(|k| {
                let (x, y) = axis_point(k, ring as f64 / 4.0);
                format!("{},{}", c(x), c(y))
            })
            .collect();
        let _ = writeln!(out, "<polygon points=\"{}\"/>", pts.join(" "));
    }
    for k in 0..9 {
        let (x, y) = axis_point(k, 1.0);
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            c(cx),
            c(cy),
            c(x),
            c(y)
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "<g id=\"axis-labels\" {FONT} text-anchor=\"middle\">");
    for (k, name) in RADAR_AXES.iter().enumerate() {
        let (x, y) = axis_point(k, 1.12);
        let _ = writeln!(out, "<text x=\"{}\" y=\"{}\">{name}</text>", c(x), c(y + 4.0));
    }
    let _ = writeln!(out, "</g>");
    for (i, inp) in normalized.iter().enumerate() {
        let color = SERIES_COLORS[i % SERIES_COLORS.len()];
        let pts: Vec<String> = inp
            .values
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                let (x, y) = axis_point(k, v);
                format!("{},{}", c(x), c(y))
            })
            .collect();
        let _ = writeln!(
            out,
            "<polygon class=\"series\" points=\"{}\" fill=\"{color}\" fill-opacity=\"0.15\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
            pts.join(" ")
        );
    }
    let _ = writeln!(out, "<g id=\"legend\" {FONT}>");
    for (i, inp) in normalized.iter().enumerate() {
        let y = 40.0 + 22.0 * i as f64;
        let color = SERIES_COLORS[i % SERIES_COLORS.len()];
        let _ = writeln!(
            out,
            "<rect x=\"500\" y=\"{}\" width=\"14\" height=\"14\" fill=\"{color}\"/>",
            c(y)
        );
        let _ = writeln!(
            out,
            "<text x=\"520\" y=\"{}\">{}</text>",
            c(y + 11.0),
            escape(&inp.label)
        );
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    Ok(out)
}
