//! Equal-travel partitions for k = 2..8 in both shapes, against sqrt(3) + 3/k.

use evacsim::analysis::worst_case;
use evacsim::geometry::Shape;
use evacsim::protocols::{build_equal_travel, Layout};

fn main() -> evacsim::Result<()> {
    for shape in [Shape::triangle(), Shape::square()] {
        for k in 2..=8 {
            let p = build_equal_travel(&shape, k)?;
            let Layout::EqualTravel(spec) = &p.layout else {
                unreachable!()
            };
            let w = worst_case(&p, 5000, 1e-7).worst_time;
            print!(
                "{} k={k}: travel {:.5}, worst {w:.5}",
                shape.kind, spec.travel_times[0]
            );
            if shape.kind == evacsim::ShapeKind::Triangle {
                print!(" (bound {:.5})", 3f64.sqrt() + 3.0 / k as f64);
            }
            println!();
        }
    }
    Ok(())
}
