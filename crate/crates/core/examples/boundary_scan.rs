//! Writes the evacuation-time curve of a protocol as CSV and draws it as SVG.
//!
//! `cargo run --release --example boundary_scan -- out_dir`

use std::path::PathBuf;

use evacsim::analysis::{scan_curve, worst_case};
use evacsim::figure::{curve_csv, protocol_svg};
use evacsim::geometry::Shape;
use evacsim::protocols::{build_early_meeting, build_square_detour, build_triangle_detour1};

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "scan_out".into()));
    std::fs::create_dir_all(&dir)?;
    let protocols = [
        ("detour1", build_triangle_detour1(0.70745).unwrap()),
        ("square_detour", build_square_detour(0.1556, 0.501).unwrap()),
        (
            "early3",
            build_early_meeting(&Shape::triangle(), 3, 0.38601).unwrap(),
        ),
    ];
    for (name, p) in &protocols {
        let curve = scan_curve(p, 2000);
        let report = worst_case(p, 2000, 1e-7);
        std::fs::write(dir.join(format!("{name}.csv")), curve_csv(&curve))?;
        std::fs::write(
            dir.join(format!("{name}.svg")),
            protocol_svg(p, &report.worst_exits, 400.0),
        )?;
        println!(
            "{name}: {} samples, worst {:.6}",
            curve.len(),
            report.worst_time
        );
    }
    println!("wrote {}", dir.display());
    Ok(())
}
