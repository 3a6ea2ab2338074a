//! Early-meeting protocols for three to five robots: optimize the start of the
//! common section in the triangle, and use the centered section in the square.

use evacsim::analysis::worst_case;
use evacsim::geometry::{Shape, ShapeKind};
use evacsim::optimizer::{grid_search, refine, Family, Objective, ParamRange, ParamSpace};
use evacsim::protocols::{build_early_meeting, symmetric_common_section_start, Layout};

fn main() -> evacsim::Result<()> {
    let tri = Shape::triangle();
    for k in 3..=5 {
        let fam = Family::Early {
            shape: ShapeKind::Triangle,
            k,
        };
        let space = ParamSpace {
            params: vec![ParamRange::new("p1", 0.01, 0.99, 0.01)],
        };
        let coarse = grid_search(&space, fam, Objective::CriticalFormulaMax)?;
        let fine = refine(
            fam,
            Objective::CriticalFormulaMax,
            &[coarse.param("p1")],
            1e-10,
        )?;
        let p = build_early_meeting(&tri, k, fine.param("p1"))?;
        let Layout::EarlyMeeting(spec) = &p.layout else {
            unreachable!()
        };
        let report = worst_case(&p, 10_000, 1e-7);
        println!(
            "triangle k={k}: |Bp1| = {:.5}, p2 = {:.5}, breaks {:.5?}, worst {:.7}",
            spec.p1, spec.p2, spec.breaks, report.worst_time
        );
    }
    let sq = Shape::square();
    let a = symmetric_common_section_start(&sq);
    for k in 3..=4 {
        let p = build_early_meeting(&sq, k, a)?;
        let Layout::EarlyMeeting(spec) = &p.layout else {
            unreachable!()
        };
        println!(
            "square k={k}: |Dp1| = {a:.5}, breaks {:.5?}, worst {:.7}",
            spec.breaks,
            worst_case(&p, 10_000, 1e-7).worst_time
        );
    }
    Ok(())
}
