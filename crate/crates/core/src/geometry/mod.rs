//! Exact geometric predicates and the verification stack.

pub mod obstacle;
pub mod rational;
pub mod region;
pub mod verify;
pub mod visibility;

pub use rational::{Rat, RationalPoint};
pub use region::{region_of, HalfPlane, Region, RegionError};
pub use verify::{chord_is_good, is_plane_oor, segment_intersects_outer, VerificationReport, VerifyError};
pub use obstacle::{build_obstacle, ObstacleError, SimplePolygon};
pub use visibility::{visibility_graph, VisibilityError};
