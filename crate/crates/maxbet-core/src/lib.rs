//! Exact-arithmetic engine for the three-player maximal-bet (all-in) gambler's
//! ruin game.
//!
//! The crate certifies stack-swap inequalities for the first-elimination
//! probability of player 1. Everything that feeds a certified bound is exact:
//! arbitrary-precision rationals, integer-coefficient linear forms, exact
//! Fourier-Motzkin feasibility, exhaustive face enumeration of the induced
//! hyperplane arrangement, and a branch-and-bound MILP solver whose
//! relaxations are themselves exact. A Monte Carlo simulator and a pointwise
//! probability recursion provide independent cross-checks.
//!
//! Modules:
//! - [`algebra`]: rationals, linear forms, inequalities, regions, exact
//!   feasibility and interior-point queries.
//! - [`expansion`]: unrolls the per-round elimination recursion into signed
//!   indicator sums over polyhedral cones.
//! - [`arrangement`]: enumerates every face of the induced arrangement and
//!   minimizes the piecewise-constant sum exactly; hosts the mesh-refinement
//!   loop.
//! - [`milp`]: exact MILP models over hyperplane-side binaries, epsilon
//!   reduction of strict constraints, branch-and-bound with anytime lower
//!   bounds, and the two-part decomposition used for the headline bounds.
//! - [`sim`]: game simulation and the exact pointwise recursion.
//! - [`exec`]: data-parallel helpers with a sequential fallback.

pub mod algebra;
pub mod arrangement;
pub mod exec;
pub mod expansion;
pub mod milp;
pub mod sim;

pub use algebra::{AlgebraError, Ineq, LinForm, Point, Rat, Region, Rel};
pub use arrangement::{Cell, Hyperplane, MeshItUpResult, MinReport, Sign};
pub use expansion::{IndicatorTerm, PiecewiseSum, Substitution, TermSign};
pub use milp::{BnBResult, BnBStatus, Decomposition, MilpModel};
pub use sim::{GameState, SimConfig, SimStats};
