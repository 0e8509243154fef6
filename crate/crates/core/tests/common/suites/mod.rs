//! One checker per acceptance criterion. Each `run` panics with the first
//! counterexample and otherwise returns a one-line summary.

pub mod identities;
pub mod reward_cases;
