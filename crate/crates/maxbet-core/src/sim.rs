//! Monte Carlo simulation of the maximal-bet game and an exact pointwise
//! recursion for partial elimination probabilities.
//!
//! Both exist to cross-validate the symbolic machinery: the simulator checks
//! distributional claims statistically, and [`exact_partial_sum`] computes
//! the same quantities as the indicator expansion by direct recursion on
//! concrete rationals, with no regions anywhere.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{rat, Rat};
use crate::exec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("cannot step a terminal state (some stack is zero)")]
    TerminalState,
}

/// Stacks of the three players. Integer starts stay integer under maximal
/// bets, and the total is conserved, so `u64` arithmetic is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameState {
    stacks: [u64; 3],
}

impl GameState {
    pub fn new(stacks: [u64; 3]) -> Self {
        GameState { stacks }
    }

    pub fn stacks(&self) -> [u64; 3] {
        self.stacks
    }

    pub fn total(&self) -> u64 {
        self.stacks.iter().sum()
    }

    /// Index of a player with an empty stack, if any.
    pub fn eliminated(&self) -> Option<usize> {
        self.stacks.iter().position(|&s| s == 0)
    }
}

const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Applies one of the six equally likely outcomes: `outcome / 2` selects the
/// betting pair, `outcome % 2` the coin. The bet is the poorer player's whole
/// stack, so outcomes are uniform regardless of how the stacks are ordered.
pub fn step_outcome(state: &GameState, outcome: u8) -> Result<GameState, SimError> {
    debug_assert!(outcome < 6);
    if state.eliminated().is_some() {
        return Err(SimError::TerminalState);
    }
    let (i, j) = PAIRS[(outcome / 2) as usize];
    let bet = state.stacks[i].min(state.stacks[j]);
    let mut stacks = state.stacks;
    let (winner, loser) = if outcome % 2 == 0 { (i, j) } else { (j, i) };
    stacks[winner] = stacks[winner].checked_add(bet).expect("total is conserved");
    stacks[loser] -= bet;
    Ok(GameState { stacks })
}

/// One game round with a fresh uniform draw.
pub fn step(state: &GameState, rng: &mut impl Rng) -> Result<GameState, SimError> {
    step_outcome(state, rng.gen_range(0..6))
}

/// Result of a single simulated episode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EpisodeOutcome {
    /// First player to reach zero, or `None` if censored at the round cap.
    pub loser: Option<usize>,
    /// Player holding the whole total at the end, or `None` if censored.
    pub winner: Option<usize>,
    /// Round in which the loser was eliminated (1-based).
    pub elimination_round: Option<u32>,
    pub rounds_played: u32,
}

/// Plays an episode from `start` until the winner is decided or `max_rounds`
/// betting rounds have been played. After the first elimination the two
/// remaining players keep betting maximally until one holds everything.
pub fn run_episode(start: &GameState, rng: &mut impl Rng, max_rounds: u32) -> EpisodeOutcome {
    let mut state = *start;
    let mut rounds = 0u32;
    let mut loser = None;
    let mut elimination_round = None;
    while rounds < max_rounds {
        state = step(&state, rng).expect("state is non-terminal inside the loop");
        rounds += 1;
        if let Some(out) = state.eliminated() {
            loser = Some(out);
            elimination_round = Some(rounds);
            break;
        }
    }
    let Some(out) = loser else {
        return EpisodeOutcome { loser: None, winner: None, elimination_round: None, rounds_played: rounds };
    };
    // Heads-up phase between the two survivors.
    let (p, q) = match out {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let total = start.total();
    let mut winner = None;
    while rounds < max_rounds {
        if state.stacks[p] == total {
            winner = Some(p);
            break;
        }
        if state.stacks[q] == total {
            winner = Some(q);
            break;
        }
        let bet = state.stacks[p].min(state.stacks[q]);
        let p_wins = rng.gen_range(0..2u8) == 0;
        let (w, l) = if p_wins { (p, q) } else { (q, p) };
        state.stacks[w] += bet;
        state.stacks[l] -= bet;
        rounds += 1;
    }
    if winner.is_none() {
        if state.stacks[p] == total {
            winner = Some(p);
        } else if state.stacks[q] == total {
            winner = Some(q);
        }
    }
    EpisodeOutcome { loser: Some(out), winner, elimination_round, rounds_played: rounds }
}

/// Simulation parameters. Episodes are seeded per index from the master
/// seed, so statistics do not depend on how work is split across threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub seed: u64,
    pub trials: u64,
    pub max_rounds: u32,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { seed: 0, trials: 100_000, max_rounds: 64 }
    }
}

/// Aggregated counts over a batch of episodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimStats {
    pub trials: u64,
    pub loser_freq: [u64; 3],
    pub winner_freq: [u64; 3],
    /// Episodes with no elimination before the round cap.
    pub censored: u64,
    /// Episodes whose loser was decided but whose heads-up phase was cut off.
    pub winner_censored: u64,
    /// `elim_hist_p1[r - 1]` counts episodes where player 1 was eliminated in
    /// exactly round `r`.
    pub elim_hist_p1: Vec<u64>,
}

impl SimStats {
    fn zero(max_rounds: u32) -> Self {
        SimStats {
            trials: 0,
            loser_freq: [0; 3],
            winner_freq: [0; 3],
            censored: 0,
            winner_censored: 0,
            elim_hist_p1: vec![0; max_rounds as usize],
        }
    }

    fn merge(mut self, other: SimStats) -> SimStats {
        self.trials += other.trials;
        for i in 0..3 {
            self.loser_freq[i] += other.loser_freq[i];
            self.winner_freq[i] += other.winner_freq[i];
        }
        self.censored += other.censored;
        self.winner_censored += other.winner_censored;
        for (a, b) in self.elim_hist_p1.iter_mut().zip(other.elim_hist_p1) {
            *a += b;
        }
        self
    }

    fn record(&mut self, outcome: &EpisodeOutcome) {
        self.trials += 1;
        match outcome.loser {
            Some(p) => {
                self.loser_freq[p] += 1;
                if p == 0 {
                    let round = outcome.elimination_round.expect("loser implies a round") as usize;
                    self.elim_hist_p1[round - 1] += 1;
                }
                match outcome.winner {
                    Some(w) => self.winner_freq[w] += 1,
                    None => self.winner_censored += 1,
                }
            }
            None => self.censored += 1,
        }
    }
}

/// Runs `cfg.trials` independent episodes from `start`. Episode `i` draws
/// from a ChaCha stream with stream id `i`, so the result is bit-identical
/// for any worker count.
pub fn simulate(start: [u64; 3], cfg: &SimConfig) -> SimStats {
    debug_assert!(cfg.trials >= 1);
    let state = GameState::new(start);
    let chunk: u64 = 4096;
    let chunks = cfg.trials.div_ceil(chunk);
    exec::map_reduce_range(
        chunks,
        |c| {
            let mut local = SimStats::zero(cfg.max_rounds);
            let lo = c * chunk;
            let hi = (lo + chunk).min(cfg.trials);
            for episode in lo..hi {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(episode);
                let outcome = run_episode(&state, &mut rng, cfg.max_rounds);
                local.record(&outcome);
            }
            local
        },
        || SimStats::zero(cfg.max_rounds),
        SimStats::merge,
    )
}

/// Point estimate of the probability that player 1 is the first eliminated.
#[derive(Debug, Clone)]
pub struct FEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub stats: SimStats,
}

/// Estimates `f(x, y, z)` by simulation, with the binomial standard error.
/// Censored episodes stay in the denominator and are reported in the stats.
pub fn estimate_f(x: u64, y: u64, z: u64, cfg: &SimConfig) -> FEstimate {
    let stats = simulate([x, y, z], cfg);
    let n = stats.trials as f64;
    let p = stats.loser_freq[0] as f64 / n;
    FEstimate { estimate: p, stderr: (p * (1.0 - p) / n).sqrt(), stats }
}

/// Exact probability that player 1 is eliminated within the first `n` rounds,
/// by direct memoized recursion on concrete rational stacks. Independent of
/// the symbolic expansion: no regions, no indicators, just arithmetic.
pub struct ExactRecursion {
    memo: HashMap<(u32, [Rat; 3]), Rat>,
}

impl Default for ExactRecursion {
    fn default() -> Self {
        Self::new()
    }
}

impl ExactRecursion {
    pub fn new() -> Self {
        ExactRecursion { memo: HashMap::new() }
    }

    /// `h_n`: probability of elimination in exactly round `n`.
    pub fn round_probability(&mut self, n: u32, stacks: &[Rat; 3]) -> Rat {
        debug_assert!(n >= 1);
        use num::{Signed, Zero};
        let [a, b, c] = stacks;
        if !a.is_positive() || !b.is_positive() || !c.is_positive() {
            return Rat::zero();
        }
        if let Some(hit) = self.memo.get(&(n, stacks.clone())) {
            return hit.clone();
        }
        let value = if n == 1 {
            let hits = (a <= b) as i64 + (a <= c) as i64;
            rat(hits, 6)
        } else {
            let children: [[Rat; 3]; 6] = [
                [a + a, b - a, c.clone()],
                [a + a, b.clone(), c - a],
                [a - b, b + b, c.clone()],
                [a.clone(), b + b, c - b],
                [a - c, b.clone(), c + c],
                [a.clone(), b - c, c + c],
            ];
            let mut sum = Rat::zero();
            for child in &children {
                sum += self.round_probability(n - 1, child);
            }
            sum / rat(6, 1)
        };
        self.memo.insert((n, stacks.clone()), value.clone());
        value
    }

    /// `sum_{j<=n} h_j`: elimination within the first `n` rounds. `n = 0`
    /// gives the empty sum.
    pub fn partial_sum(&mut self, n: u32, stacks: &[Rat; 3]) -> Rat {
        use num::Zero;
        let mut total = Rat::zero();
        for j in 1..=n {
            total += self.round_probability(j, stacks);
        }
        total
    }
}

/// One-shot convenience wrapper around [`ExactRecursion::partial_sum`].
pub fn exact_partial_sum(n: u32, stacks: &[Rat; 3]) -> Rat {
    ExactRecursion::new().partial_sum(n, stacks)
}

/// Deterministic seeded sample of rational points with `0 < x < y < z`,
/// shared by the cross-validation checks.
pub fn sample_v_points(count: usize, seed: u64) -> Vec<crate::algebra::Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count);
    while points.len() < count {
        let den = rng.gen_range(1..=24u64);
        let mut nums = [0u64; 3];
        for n in &mut nums {
            *n = rng.gen_range(1..=240u64);
        }
        nums.sort_unstable();
        if nums[0] == nums[1] || nums[1] == nums[2] {
            continue;
        }
        points.push(crate::algebra::Point::new(
            Rat::new(nums[0].into(), den.into()),
            Rat::new(nums[1].into(), den.into()),
            Rat::new(nums[2].into(), den.into()),
        ));
    }
    points
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat_int;

    fn rats(x: i64, y: i64, z: i64) -> [Rat; 3] {
        [rat_int(x), rat_int(y), rat_int(z)]
    }

    #[test]
    fn step_successors_of_1_2_3() {
        let state = GameState::new([1, 2, 3]);
        let mut seen = Vec::new();
        for outcome in 0..6 {
            seen.push(step_outcome(&state, outcome).unwrap().stacks());
        }
        for expected in [[0, 3, 3], [2, 1, 3], [0, 2, 4], [2, 2, 2], [1, 0, 5], [1, 4, 1]] {
            assert!(seen.contains(&expected), "missing successor {expected:?}");
        }
        for s in seen {
            assert_eq!(s.iter().sum::<u64>(), 6);
        }
    }

    #[test]
    fn equal_stacks_end_in_one_round() {
        let state = GameState::new([1, 1, 1]);
        for outcome in 0..6 {
            let next = step_outcome(&state, outcome).unwrap();
            assert!(next.eliminated().is_some());
        }
    }

    #[test]
    fn step_rejects_terminal_state() {
        let state = GameState::new([0, 3, 3]);
        assert_eq!(step_outcome(&state, 0), Err(SimError::TerminalState));
    }

    #[test]
    fn episodes_respect_round_cap_and_conservation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let outcome = run_episode(&GameState::new([4, 5, 6]), &mut rng, 16);
            assert!(outcome.rounds_played <= 16);
        }
    }

    #[test]
    fn symmetric_start_loses_one_third() {
        let cfg = SimConfig { seed: 42, trials: 100_000, max_rounds: 64 };
        let est = estimate_f(1, 1, 1, &cfg);
        assert!((est.estimate - 1.0 / 3.0).abs() < 3.0 * est.stderr + 1e-9);
        assert_eq!(est.stats.censored, 0, "equal stacks always end in round one");
    }

    #[test]
    fn simulation_is_deterministic_in_seed() {
        let cfg = SimConfig { seed: 9, trials: 20_000, max_rounds: 64 };
        let a = simulate([4, 5, 6], &cfg);
        let b = simulate([4, 5, 6], &cfg);
        assert_eq!(a, b);
    }

    #[test]
    fn exact_partial_sums_match_hand_values() {
        assert_eq!(exact_partial_sum(1, &rats(4, 5, 6)), rat(1, 3));
        assert_eq!(exact_partial_sum(2, &rats(4, 5, 6)), rat(13, 36));
    }

    #[test]
    fn exact_recursion_last_two_arguments_symmetric() {
        let mut rec = ExactRecursion::new();
        assert_eq!(
            rec.partial_sum(2, &rats(5, 4, 6)),
            rec.partial_sum(2, &rats(5, 6, 4))
        );
        assert_eq!(
            rec.partial_sum(4, &rats(3, 7, 11)),
            rec.partial_sum(4, &rats(3, 11, 7))
        );
    }

    #[test]
    fn exact_recursion_handles_nonpositive_stacks() {
        assert_eq!(exact_partial_sum(3, &rats(0, 5, 6)), rat_int(0));
        assert_eq!(exact_partial_sum(3, &[rat(-1, 2), rat_int(5), rat_int(6)]), rat_int(0));
    }
}
