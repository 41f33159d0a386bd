//! Symbolic core: noncommutative algebra, central series, and the FW derivations.

pub mod comparator;
pub mod concretizer;
pub mod eriksen;
pub mod fseries;
pub mod ncalg;
pub mod report;
pub mod stepwise;
pub mod targets;
