//! The two-robot square protocol: the detour geometry, its four candidate
//! times, and what the simulator sees on either side of J.

use evacsim::analysis::{critical_times_square, one_sided_limit, worst_case};
use evacsim::protocols::{build_square_detour, Layout};
use evacsim::simulator::evac_time;

fn main() -> evacsim::Result<()> {
    let (p, q) = (0.1556, 0.5010);
    let proto = build_square_detour(p, q)?;
    let Layout::SquareDetour(d) = &proto.layout else {
        unreachable!()
    };
    for (name, pt) in [
        ("E", d.e),
        ("G", d.g),
        ("H", d.h),
        ("I", d.i),
        ("J", d.j),
        ("K", d.k),
    ] {
        println!("{name} = ({:.6}, {:.6})", pt.x, pt.y);
    }
    println!("detour length {:.6}", d.scalars.detour);
    for c in critical_times_square(p, q)?.entries {
        println!("closed form {:<3} {:.7}", c.name, c.time);
    }
    let j = 1.0 + q;
    println!(
        "simulated at J: left {:.7}, at {:.7}, right {:.7}",
        one_sided_limit(&proto, j, -1.0),
        evac_time(&proto, j),
        one_sided_limit(&proto, j, 1.0)
    );
    let r = worst_case(&proto, 10_000, 1e-7);
    println!(
        "worst case {:.7} at {:?}, margin {:.4}",
        r.worst_time, r.worst_exits, r.margin
    );
    Ok(())
}
