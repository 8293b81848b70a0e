//! Prominent echos and the topology they predict.

mod echo;
mod regions;
mod verify;

pub use echo::{detect_prominent_echos, EchoSupport};
pub use regions::{threshold_regions, Side};
pub use verify::{
    check_death_bound, check_death_bound_sigmas, expected_betti, injectivity_condition,
    self_intersection_scan, DeathVerdict, EchoEntry, EchoReport, SelfIntersection, Verdict,
};
