//! Coordinate-descent refinement of the two-detour triangle protocol, using the
//! full boundary scan as the objective.

use evacsim::analysis::worst_case;
use evacsim::optimizer::{refine, Family, Objective};
use evacsim::protocols::build_triangle_detour2;

fn main() -> evacsim::Result<()> {
    let objective = Objective::WorstCaseSim {
        samples_per_unit: 2000,
        refine_tol: 1e-8,
    };
    let r = refine(Family::Detour2, objective, &[0.66, 0.90], 1e-6)?;
    for step in r.trace.iter().step_by(4) {
        println!("b = {:?} -> {:.7}", step.params, step.value);
    }
    let (b1, b2) = (r.param("b1"), r.param("b2"));
    let p = build_triangle_detour2(b1, b2)?;
    let report = worst_case(&p, 10_000, 1e-7);
    println!(
        "b1 = {b1:.6}, b2 = {b2:.6}: worst case {:.7} ({} evaluations)",
        report.worst_time, r.evaluations
    );
    Ok(())
}
