//! Replays the published 2000 x 12000 square grid and prints its result lines.

use std::time::Instant;

use evacsim::optimizer::appendix_a_replay;

fn main() {
    let t0 = Instant::now();
    let r = appendix_a_replay();
    for line in r.lines() {
        println!("{line}");
    }
    eprintln!("{} cells in {:.2} s", r.cells, t0.elapsed().as_secs_f64());
}
