//! Runs an optimization described by a JSON document, as `evacsim optimize
//! --config` does. Pass a path to use another document.
//!
//! The square objective is flat in `q` wherever the time at `C` binds, so the
//! built-in document uses a fine grid near the optimum instead of refinement.

use evacsim::optimizer::{run_config, OptConfig};

const CONFIG: &str = r#"{
    "family": "square-detour",
    "space": [
        {"name": "p", "lo": 0.150, "hi": 0.160, "step": 0.0001},
        {"name": "q", "lo": 0.450, "hi": 0.550, "step": 0.0001}
    ],
    "objective": {"kind": "critical-formula-max"},
    "refine": false
}"#;

fn main() -> evacsim::Result<()> {
    let path = std::env::args().nth(1);
    let text = match &path {
        Some(p) => {
            std::fs::read_to_string(p).map_err(|e| evacsim::EvacError::Config(e.to_string()))?
        }
        None => CONFIG.to_string(),
    };
    let cfg = OptConfig::from_json(&text)?;
    let r = run_config(&cfg)?;
    println!("{}", r.to_json());
    Ok(())
}
