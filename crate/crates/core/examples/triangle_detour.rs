//! Two robots in the triangle with one detour each: build, scan, compare with
//! the closed-form critical times.

use evacsim::analysis::{critical_times, worst_case};
use evacsim::protocols::{build_triangle_detour1, Layout};
use evacsim::simulator::evac_time;

fn main() -> evacsim::Result<()> {
    let z = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(0.70745);
    let p = build_triangle_detour1(z)?;
    if let Layout::TriangleDetour1(d) = &p.layout {
        println!(
            "z = {z}: detour length {:.6}, t1 = {:.7}, t2 = {:.7}",
            d.detour_len, d.t1, d.t2
        );
        println!(
            "p2 = ({:.6}, {:.6}), r2 = ({:.6}, {:.6})",
            d.p2.x, d.p2.y, d.r2.x, d.r2.y
        );
    }
    for (name, s) in [("B", 0.0), ("C", 1.0), ("A", 2.0)] {
        println!("exit at {name}: {:.7}", evac_time(&p, s));
    }
    let report = worst_case(&p, 10_000, 1e-7);
    println!(
        "worst case {:.7} at arcs {:?}",
        report.worst_time, report.worst_exits
    );
    println!("margin over the lower bound: {:.4}", report.margin);
    for c in critical_times(&p).unwrap().entries {
        println!(
            "  {:<8} {:.7} at s = {:.5} ({:?})",
            c.name, c.time, c.exit, c.approach
        );
    }
    Ok(())
}
