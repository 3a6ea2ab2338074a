//! Hand-written schedules in the text format, wrapped as a protocol and scanned.

use evacsim::analysis::worst_case;
use evacsim::geometry::Shape;
use evacsim::protocols::build_custom;
use evacsim::trajectory::{format_trajectories, parse_trajectories};

fn main() -> evacsim::Result<()> {
    let y = 3f64.sqrt() / 6.0;
    let x = 3f64.sqrt() / 3.0;
    let apex = 3f64.sqrt() / 2.0;
    // both robots walk to the middle of BC, split, and meet again at A
    let text = format!(
        "# robot: (x,y)@t; ...\n\
         0: (0.5,{y})@0; (0.5,0)@{y}; (0,0)@{t1}; (0.5,{apex})@{t2}; (0.5,{y})@{t3}\n\
         1: (0.5,{y})@0; (0.5,0)@{y}; (1,0)@{t1}; (0.5,{apex})@{t2}; (0.5,{y})@{t3}\n",
        t1 = y + 0.5,
        t2 = y + 1.5,
        t3 = y + 1.5 + x,
    );
    let trajs: Vec<_> = parse_trajectories(&text)?
        .into_iter()
        .map(|(_, t)| t)
        .collect();
    print!("{}", format_trajectories(&trajs));
    let p = build_custom(&Shape::triangle(), trajs)?;
    let r = worst_case(&p, 5000, 1e-7);
    println!(
        "custom split: worst {:.6} at {:?}",
        r.worst_time, r.worst_exits
    );

    let bad = "0: (0.5,0.3)@0; (0.5,0)@0.1\n";
    println!("too fast: {}", parse_trajectories(bad).unwrap_err());
    Ok(())
}
