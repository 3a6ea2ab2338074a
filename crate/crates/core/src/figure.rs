//! CSV curves and static SVG drawings of protocols.

use std::fmt::Write as _;

use crate::geometry::Point;
use crate::protocols::Protocol;

const MARGIN: f64 = 0.12;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

/// `s,evac_time` rows with a header line.
pub fn curve_csv(curve: &[(f64, f64)]) -> String {
    let mut out = String::with_capacity(curve.len() * 40 + 16);
    out.push_str("s,evac_time\n");
    for (s, t) in curve {
        let _ = writeln!(out, "{s},{t}");
    }
    out
}

/// Shape outline, one stroke per robot, labeled landmarks, and red crosses at
/// `worst_exits` (arc coordinates). `scale` is pixels per unit length.
pub fn protocol_svg(protocol: &Protocol, worst_exits: &[f64], scale: f64) -> String {
    let shape = &protocol.shape;
    let top = shape.vertices.iter().map(|(_, p)| p.y).fold(0.0, f64::max);
    let w = (1.0 + 2.0 * MARGIN) * scale;
    let h = (top + 2.0 * MARGIN) * scale;
    let px = |p: Point| ((p.x + MARGIN) * scale, (top + MARGIN - p.y) * scale);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1}" height="{h:.1}" viewBox="0 0 {w:.1} {h:.1}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let outline: Vec<String> = shape
        .vertices
        .iter()
        .map(|(_, p)| {
            let (x, y) = px(*p);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(
        svg,
        r#"<polygon points="{}" fill="none" stroke="black" stroke-width="2"/>"#,
        outline.join(" ")
    );
    let font = (scale * 0.04).max(8.0);
    for (label, p) in &shape.vertices {
        let (x, y) = px(*p);
        let dx = if p.x < 0.5 { -font } else { font * 0.4 };
        let dy = if p.y > 0.5 { -font * 0.3 } else { font };
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="{font:.1}" font-family="sans-serif">{label}</text>"#,
            x + dx,
            y + dy
        );
    }

    for (i, t) in protocol.trajectories.iter().enumerate() {
        let pts: Vec<String> = t
            .waypoints()
            .iter()
            .map(|wp| {
                let (x, y) = px(wp.point);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="robot" data-robot="{i}" points="{}" fill="none" stroke="{}" stroke-width="1.5" stroke-opacity="0.8"/>"#,
            pts.join(" "),
            COLORS[i % COLORS.len()]
        );
    }

    let r = (scale * 0.008).max(2.0);
    let (cx, cy) = px(shape.centroid);
    let _ = writeln!(
        svg,
        r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{r:.1}" fill="black"/><text x="{:.2}" y="{:.2}" font-size="{font:.1}" font-family="sans-serif">O</text>"#,
        cx + r,
        cy - r
    );
    for (name, p) in &protocol.landmarks {
        let (x, y) = px(*p);
        let _ = writeln!(
            svg,
            r#"<circle class="waypoint" cx="{x:.2}" cy="{y:.2}" r="{r:.1}" fill="gray"/><text x="{:.2}" y="{:.2}" font-size="{:.1}" font-family="sans-serif" fill="gray">{name}</text>"#,
            x + r,
            y - r,
            font * 0.8
        );
    }

    let c = r * 2.0;
    for s in worst_exits {
        let (x, y) = px(shape.point_at_arc(*s));
        let _ = writeln!(
            svg,
            r#"<path class="worst-exit" d="M{:.2},{:.2} L{:.2},{:.2} M{:.2},{:.2} L{:.2},{:.2}" stroke="red" stroke-width="2.5"/>"#,
            x - c,
            y - c,
            x + c,
            y + c,
            x - c,
            y + c,
            x + c,
            y - c
        );
    }
    svg.push_str("</svg>\n");
    svg
}
