//! Face-to-face evacuation of robots from a unit equilateral triangle or unit
//! square: protocol construction, simulation, worst-case analysis and
//! parameter search.
//!
//! ```
//! use evacsim::protocols::build_triangle_detour1;
//! use evacsim::analysis::worst_case;
//!
//! let protocol = build_triangle_detour1(0.70745).unwrap();
//! let report = worst_case(&protocol, 200, 1e-7);
//! assert!((report.worst_time - 2.3866).abs() < 5e-4);
//! ```

pub mod analysis;
pub mod cli;
pub mod error;
pub mod figure;
pub mod geometry;
pub mod numeric;
pub mod optimizer;
pub mod protocols;
pub mod simulator;
pub mod trajectory;

pub use error::{EvacError, Result};
pub use geometry::{dist, make_shape, BoundaryCoord, Point, Shape, ShapeKind};
pub use protocols::Protocol;
pub use simulator::{evacuate, EvacuationResult};
pub use trajectory::Trajectory;
