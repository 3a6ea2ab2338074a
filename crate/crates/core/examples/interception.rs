//! Earliest interception of a moving robot, and how it shows up in an
//! evacuation: the finder's events and both arrival times.

use evacsim::geometry::{BoundaryCoord, Point};
use evacsim::protocols::build_triangle_detour1;
use evacsim::simulator::{earliest_interception, evacuate};
use evacsim::trajectory::{Trajectory, Waypoint};

fn main() -> evacsim::Result<()> {
    let target = Trajectory::new(vec![
        Waypoint::new(Point::new(1.0, 0.0), 0.0),
        Waypoint::new(Point::new(1.0, 1.0), 1.0),
        Waypoint::new(Point::new(0.0, 1.0), 2.0),
    ])?;
    for free_from in [0.0, 0.5, 1.0] {
        match earliest_interception(Point::new(0.0, 0.0), free_from, &target) {
            Some(hit) => println!(
                "free at {free_from}: caught at t = {:.6} at ({:.4}, {:.4})",
                hit.time, hit.point.x, hit.point.y
            ),
            None => println!("free at {free_from}: never"),
        }
    }
    let p = build_triangle_detour1(0.70745)?;
    let r = evacuate(&p, BoundaryCoord(1.4))?;
    println!("{}", serde_json::to_string_pretty(&r).unwrap());
    Ok(())
}
