//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "maxbet",
    version,
    about = "Exact certification engine for the three-player maximal-bet gambler's ruin game"
)]
pub struct Cli {
    /// Worker threads for parallel sections (0 keeps the library default).
    /// Certified outputs are identical for any setting.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Certify a swap bound and write a .cert file. Exit code 0 means
    /// certified, 1 not certified, 2 input error.
    Certify(CertifyArgs),
    /// Refine the mesh round by round until the exact minimum clears the
    /// tail allowance.
    Meshitup(MeshitupArgs),
    /// Minimize one objective exactly, by face enumeration or by the MILP
    /// solver.
    Minimize(MinimizeArgs),
    /// Export the lattice heatmap data (delta_n - alpha_n on x+y+z = total)
    /// as CSV.
    Heatmap(HeatmapArgs),
    /// Monte Carlo simulation of the game with reproducible streams.
    Simulate(SimulateArgs),
    /// Cross-validate the independent computation routes against each other.
    Selfcheck(SelfcheckArgs),
    /// Run the mesh loop for the open conjecture f(x,y,z) > f(y,y,z).
    Conjecture(ConjectureArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    /// f(x,y,z) > f(y,x,z) on 0 < x < y < z.
    LemmaXy,
    /// f(y,x,z) > f(z,x,y) on 0 < x < y < z.
    LemmaYz,
    /// Both swap inequalities chained.
    #[value(name = "theorem-1")]
    Theorem1,
    /// User-supplied substitutions (--s and --t required).
    Custom,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Two-MILP decomposition (previous round plus level difference).
    Decomposed,
    /// Exhaustive face enumeration.
    Oracle,
    /// Single full MILP solve.
    Milp,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    /// Claim to certify.
    #[arg(value_enum)]
    pub claim: Claim,
    #[arg(long, value_enum, default_value_t = Method::Decomposed)]
    pub method: Method,
    /// Round horizon of the bound.
    #[arg(long, default_value_t = 4)]
    pub n: u32,
    /// Certificate output path (defaults to <claim>.cert).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also run the other methods and abort on any disagreement.
    #[arg(long)]
    pub cross_check: bool,
    /// Substitution for the positive side (custom claims).
    #[arg(long)]
    pub s: Option<String>,
    /// Substitution for the negative side (custom claims).
    #[arg(long)]
    pub t: Option<String>,
    /// Ambient domain as a constraint list (defaults to 0<x<y<z).
    #[arg(long)]
    pub domain: Option<String>,
}

#[derive(Args, Debug)]
pub struct MeshitupArgs {
    #[arg(long, default_value = "(x,y,z)")]
    pub s: String,
    #[arg(long, default_value = "(y,x,z)")]
    pub t: String,
    /// Ambient domain as a constraint list of homogeneous comparisons.
    #[arg(long, default_value = "0<x<y<z")]
    pub domain: String,
    #[arg(long, default_value_t = 6)]
    pub max_n: u32,
    /// Terminate on min >= alpha_n instead of strict >.
    #[arg(long)]
    pub weak: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    /// Partial-sum difference through round n.
    Delta,
    /// Level difference h_n(s) - h_n(t) only.
    LevelDiff,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinimizeMethod {
    Oracle,
    Milp,
}

#[derive(Args, Debug)]
pub struct MinimizeArgs {
    #[arg(long, default_value_t = 3)]
    pub n: u32,
    #[arg(long, value_enum, default_value_t = Objective::Delta)]
    pub objective: Objective,
    #[arg(long, value_enum, default_value_t = MinimizeMethod::Oracle)]
    pub method: MinimizeMethod,
    /// Include the cap row delta_n <= alpha_n (MILP only).
    #[arg(long)]
    pub cap: bool,
    /// Stop the solver after this many nodes and report the anytime bound.
    #[arg(long)]
    pub node_budget: Option<u64>,
    #[arg(long, default_value = "(x,y,z)")]
    pub s: String,
    #[arg(long, default_value = "(y,x,z)")]
    pub t: String,
    #[arg(long, default_value = "0<x<y<z")]
    pub domain: String,
}

#[derive(Args, Debug)]
pub struct HeatmapArgs {
    /// Conserved stack total of the lattice slice.
    #[arg(long, default_value_t = 2000)]
    pub total: u64,
    #[arg(long, default_value_t = 4)]
    pub n: u32,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    pub x: u64,
    pub y: u64,
    pub z: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 64)]
    pub max_rounds: u32,
}

#[derive(Args, Debug)]
pub struct SelfcheckArgs {
    /// Deliberately flip one indicator sign in one MILP model; the
    /// oracle/MILP equivalence check must then fail.
    #[arg(long)]
    pub inject_fault: bool,
}

#[derive(Args, Debug)]
pub struct ConjectureArgs {
    /// Horizon for the search; the paper's own run stayed open through 6.
    #[arg(long, default_value_t = 4)]
    pub max_n: u32,
}
