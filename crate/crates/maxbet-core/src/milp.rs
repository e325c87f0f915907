//! Exact mixed-integer models for minimizing the indicator sums, and a
//! branch-and-bound solver over exact rational relaxations.
//!
//! A model has continuous variables (x, y, z), one binary literal per
//! canonical (hyperplane, side, strictness) triple, and one binary per
//! indicator region linked to its literals by conjunction. Strict
//! inequalities are epsilon-reduced (`f > 0` becomes `f >= eps`); because
//! every constraint is homogeneous, positive scaling makes the reduced model
//! attain exactly the original optimum, so the solver can work with the
//! strict homogeneous system internally and scale witnesses at the end.
//!
//! The solver branches on literals directly: fixing a literal activates its
//! inequality in the node, fixing it off activates the complement. Node
//! feasibility is the same exact Fourier-Motzkin query used everywhere else,
//! node selection is best-bound with a deterministic tie-break, and the
//! reported bound is valid at any node budget.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, BTreeMap};
use std::fmt;

use num::{BigInt, One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{
    region_interior_point, Ineq, LinForm, Point, Rat, Region, Rel,
};
use crate::arrangement::{
    collect_hyperplanes, literal_sat, region_literals, sign_vector, Hyperplane,
};
use crate::expansion::{
    alpha, build_delta, build_level_diff, ExpansionError, PiecewiseSum, Substitution, TermSign,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MilpError {
    #[error("constraint has a free constant term; the epsilon reduction needs homogeneous input")]
    InhomogeneousConstraint,
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("decomposition needs at least two rounds")]
    TooFewRounds,
    #[error("ambient domain is infeasible")]
    InfeasibleAmbient,
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
}

/// Comparison operator for model-level constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Ge,
    Gt,
    Le,
    Lt,
}

/// A constraint `form op rhs` on the continuous variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineConstraint {
    pub form: LinForm,
    pub op: CmpOp,
    pub rhs: Rat,
}

impl fmt::Display for AffineConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.op {
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
            CmpOp::Le => "<=",
            CmpOp::Lt => "<",
        };
        write!(f, "{} {} {}", self.form, op, self.rhs)
    }
}

impl AffineConstraint {
    pub fn from_ineq(ineq: &Ineq) -> Self {
        let op = match ineq.rel() {
            Rel::Ge => CmpOp::Ge,
            Rel::Gt => CmpOp::Gt,
        };
        AffineConstraint { form: ineq.form().clone(), op, rhs: Rat::zero() }
    }
}

/// Replaces strict comparisons against zero by weak comparisons against
/// `+-epsilon`; weak constraints pass through unchanged. Inputs with a free
/// constant are rejected: the scale-invariance argument that makes the
/// reduction lossless needs every constraint homogeneous.
pub fn eps_reduce(
    constraints: &[AffineConstraint],
    epsilon: &Rat,
) -> Result<Vec<AffineConstraint>, MilpError> {
    if !epsilon.is_positive() {
        return Err(MilpError::NonPositiveEpsilon);
    }
    constraints
        .iter()
        .map(|c| {
            if !c.rhs.is_zero() {
                return Err(MilpError::InhomogeneousConstraint);
            }
            let (op, rhs) = match c.op {
                CmpOp::Gt => (CmpOp::Ge, epsilon.clone()),
                CmpOp::Lt => (CmpOp::Le, -epsilon.clone()),
                op => (op, Rat::zero()),
            };
            Ok(AffineConstraint { form: c.form.clone(), op, rhs })
        })
        .collect()
}

/// A binary decision `[orientation * hyperplane (strict ? > : >=) 0]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Literal {
    pub hyperplane: usize,
    pub orientation: i8,
    pub strict: bool,
}

/// One indicator-region binary: the conjunction of its literals, weighted by
/// `sign * (1/6)^level` in the objective.
#[derive(Debug, Clone)]
pub struct RegionVar {
    pub literals: Vec<usize>,
    pub level: u32,
    pub sign: TermSign,
}

impl RegionVar {
    pub fn coefficient(&self) -> Rat {
        let c = crate::expansion::level_coefficient(self.level);
        match self.sign {
            TermSign::Plus => c,
            TermSign::Minus => -c,
        }
    }
}

/// An exact MILP instance.
#[derive(Debug, Clone)]
pub struct MilpModel {
    pub hyperplanes: Vec<Hyperplane>,
    pub literals: Vec<Literal>,
    pub regions: Vec<RegionVar>,
    /// Always-active continuous constraints, in original homogeneous form.
    pub ambient: Region,
    /// The same constraints after epsilon reduction, as recorded in the
    /// solvable model.
    pub ambient_reduced: Vec<AffineConstraint>,
    /// When present: `sum coef * b_region <= cap`.
    pub cap: Option<Rat>,
    pub objective_offset: Rat,
    pub epsilon: Rat,
}

impl MilpModel {
    /// Builds the model for the objective encoded by a piecewise sum.
    pub fn from_piecewise(ps: &PiecewiseSum, cap: Option<Rat>) -> Result<Self, MilpError> {
        let hyperplanes = collect_hyperplanes(ps);
        let index: BTreeMap<LinForm, usize> =
            hyperplanes.iter().enumerate().map(|(i, h)| (h.form().clone(), i)).collect();
        let mut literal_ids: BTreeMap<Literal, usize> = BTreeMap::new();
        let mut regions = Vec::with_capacity(ps.terms.len());
        for term in &ps.terms {
            let mut ids = Vec::new();
            for (hyperplane, orientation, strict) in region_literals(&term.region, &index) {
                let literal = Literal { hyperplane, orientation, strict };
                let next = literal_ids.len();
                ids.push(*literal_ids.entry(literal).or_insert(next));
            }
            ids.sort_unstable();
            ids.dedup();
            regions.push(RegionVar { literals: ids, level: term.level, sign: term.sign });
        }
        let mut literals = vec![Literal { hyperplane: 0, orientation: 1, strict: false }; literal_ids.len()];
        for (literal, id) in literal_ids {
            literals[id] = literal;
        }
        let epsilon = Rat::one();
        let raw: Vec<AffineConstraint> =
            ps.ambient.constraints().map(AffineConstraint::from_ineq).collect();
        let ambient_reduced = eps_reduce(&raw, &epsilon)?;
        Ok(MilpModel {
            hyperplanes,
            literals,
            regions,
            ambient: ps.ambient.clone(),
            ambient_reduced,
            cap,
            objective_offset: Rat::zero(),
            epsilon,
        })
    }

    pub fn with_objective_offset(mut self, offset: Rat) -> Self {
        self.objective_offset = offset;
        self
    }

    /// Flips the objective coefficient of one region binary. This is a
    /// consistency-check hook: a flipped model must disagree with the
    /// arrangement oracle.
    pub fn negate_region_coefficient(&mut self, region: usize) {
        let sign = match self.regions[region].sign {
            TermSign::Plus => TermSign::Minus,
            TermSign::Minus => TermSign::Plus,
        };
        self.regions[region].sign = sign;
    }

    /// Conjunction-linking rows `b_R <= b_l` and
    /// `b_R >= sum b_l - (m - 1)`, rendered per region. Regions with no
    /// literals are free binaries and get no rows.
    pub fn linking_rows(&self) -> Vec<String> {
        let mut rows = Vec::new();
        for (r, region) in self.regions.iter().enumerate() {
            for &l in &region.literals {
                rows.push(format!("b_r{} <= b_l{}", r, l));
            }
            if !region.literals.is_empty() {
                let sum: Vec<String> =
                    region.literals.iter().map(|l| format!("b_l{}", l)).collect();
                rows.push(format!(
                    "b_r{} >= {} - {}",
                    r,
                    sum.join(" + "),
                    region.literals.len() - 1
                ));
            }
        }
        rows
    }

    /// Big-M linearization of the indicator constraints for variables boxed
    /// in `[-box_radius, box_radius]`: for each literal,
    /// `g + M*(1 - b) >= rhs_on` and `g - M*b <= rhs_off`, where `g` is the
    /// oriented hyperplane form. Kept for comparison with the lazy
    /// activation the solver uses.
    pub fn big_m_constraints(&self, box_radius: &Rat) -> Vec<BigMConstraint> {
        self.literals
            .iter()
            .enumerate()
            .map(|(id, lit)| {
                let form = if lit.orientation >= 0 {
                    self.hyperplanes[lit.hyperplane].form().clone()
                } else {
                    self.hyperplanes[lit.hyperplane].form().neg()
                };
                let (a, b, c) = form.coeffs();
                let reach = Rat::from(a.abs() + b.abs() + c.abs()) * box_radius;
                let m = reach + &self.epsilon;
                let rhs_on = if lit.strict { self.epsilon.clone() } else { Rat::zero() };
                let rhs_off = if lit.strict { Rat::zero() } else { -self.epsilon.clone() };
                BigMConstraint { literal: id, form, m, rhs_on, rhs_off }
            })
            .collect()
    }

    fn objective_denominator_level(&self) -> u32 {
        self.regions.iter().map(|r| r.level).max().unwrap_or(0)
    }
}

/// Big-M rows for one literal binary `b`:
/// `form + m*(1-b) >= rhs_on` and `form - m*b <= rhs_off`.
#[derive(Debug, Clone)]
pub struct BigMConstraint {
    pub literal: usize,
    pub form: LinForm,
    pub m: Rat,
    pub rhs_on: Rat,
    pub rhs_off: Rat,
}

impl BigMConstraint {
    /// Checks both rows at a concrete point and binary value.
    pub fn holds_at(&self, p: &Point, active: bool) -> bool {
        let g = self.form.eval(p);
        let on = if active { g.clone() } else { &g + &self.m };
        let off = if active { &g - &self.m } else { g.clone() };
        on >= self.rhs_on && off <= self.rhs_off
    }
}

/// Full model: objective is the partial-sum difference through round `n`,
/// optionally with the cap row `delta_n <= alpha_n`.
pub fn build_milp_full(
    n: u32,
    s: &Substitution,
    t: &Substitution,
    ambient: &Region,
    include_cap: bool,
) -> Result<MilpModel, MilpError> {
    let ps = build_delta(n, s, t, ambient)?;
    let cap = include_cap.then(|| alpha(n));
    MilpModel::from_piecewise(&ps, cap)
}

/// Level difference model: objective is `h_n(s) - h_n(t)`, no cap.
pub fn build_milp_h_diff(
    n: u32,
    s: &Substitution,
    t: &Substitution,
    ambient: &Region,
) -> Result<MilpModel, MilpError> {
    let ps = build_level_diff(n, s, t, ambient)?;
    MilpModel::from_piecewise(&ps, None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BnBStatus {
    Optimal,
    Infeasible,
    /// Search stopped at the node budget; `value` is a valid global lower
    /// bound on the optimum.
    BoundOnly,
}

/// Outcome of a branch-and-bound run. Whatever the status, `value` is a
/// valid lower bound on the true optimum (and equals it when `Optimal`);
/// for `Infeasible` the value carries no meaning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BnBResult {
    pub status: BnBStatus,
    pub value: Rat,
    pub witness: Option<Point>,
    pub node_count: u64,
}

// Sign-set masks. Bits: 1 = Neg, 2 = Zero, 4 = Pos. Only contiguous sets
// arise (literal truth sets and their complements are intervals in the
// order Neg < Zero < Pos, and intervals are closed under intersection).
const MASK_ALL: u8 = 0b111;

fn literal_true_mask(lit: &Literal) -> u8 {
    match (lit.orientation > 0, lit.strict) {
        (true, true) => 0b100,
        (true, false) => 0b110,
        (false, true) => 0b001,
        (false, false) => 0b011,
    }
}

fn mask_constraints(mask: u8, hyperplane: &Hyperplane, out: &mut Vec<Ineq>) {
    let form = hyperplane.form();
    match mask {
        0b111 => {}
        0b110 => out.push(Ineq::ge(form.clone()).expect("nonzero")),
        0b011 => out.push(Ineq::le(form.clone()).expect("nonzero")),
        0b100 => out.push(Ineq::gt(form.clone()).expect("nonzero")),
        0b001 => out.push(Ineq::lt(form.clone()).expect("nonzero")),
        0b010 => {
            out.push(Ineq::ge(form.clone()).expect("nonzero"));
            out.push(Ineq::le(form.clone()).expect("nonzero"));
        }
        _ => unreachable!("empty or non-interval sign mask"),
    }
}

#[derive(Debug)]
struct Node {
    bound: Rat,
    allowed: Vec<u8>,
}

#[derive(PartialEq, Eq)]
struct NodeKey(Rat, u64);

impl Ord for NodeKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

impl PartialOrd for NodeKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum LitStatus {
    True,
    False,
    Open,
}

/// Scales a witness so that every strict inequality active under its own
/// sign assignment clears the model epsilon. Homogeneity keeps the objective
/// and all signs unchanged.
fn scale_witness_for_eps(model: &MilpModel, w: &Point) -> Point {
    let mut needed: Vec<Rat> = Vec::new();
    let mut push_value = |v: Rat| {
        debug_assert!(v.is_positive());
        needed.push(v);
    };
    for lit in &model.literals {
        let form = model.hyperplanes[lit.hyperplane].form();
        let oriented = if lit.orientation > 0 { form.eval(w) } else { -form.eval(w) };
        if lit.strict && oriented.is_positive() {
            // Literal holds strictly: after reduction it reads `>= eps`.
            push_value(oriented);
        } else if !lit.strict && oriented.is_negative() {
            // Weak literal fails, so its strict complement is active.
            push_value(-oriented);
        }
    }
    for constraint in model.ambient.constraints() {
        if constraint.is_strict() {
            push_value(constraint.form().eval(w));
        }
    }
    let mut k = Rat::one();
    for v in needed {
        let ratio = &model.epsilon / v;
        if ratio > k {
            k = ratio;
        }
    }
    w.scale(&k)
}

/// Exact branch-and-bound. Deterministic: best-bound node selection with
/// creation-order tie-breaks, a fixed branching rule, and exact arithmetic
/// throughout, so the result is a function of the model and budget alone.
pub fn solve(model: &MilpModel, node_budget: Option<u64>) -> BnBResult {
    let hyperplane_count = model.hyperplanes.len();
    let max_level = model.objective_denominator_level();
    let six = BigInt::from(6);
    let denom = num::pow::pow(six.clone(), max_level as usize);
    let denom_rat = Rat::from(denom.clone());
    let weights: Vec<BigInt> = model
        .regions
        .iter()
        .map(|region| {
            let w = num::pow::pow(six.clone(), (max_level - region.level) as usize);
            match region.sign {
                TermSign::Plus => w,
                TermSign::Minus => -w,
            }
        })
        .collect();
    // Cap threshold on the raw objective numerator: sum <= cap becomes
    // numer <= cap * denom.
    let cap_scaled: Option<Rat> = model.cap.as_ref().map(|cap| cap * &denom_rat);

    let all_negative_numer: BigInt =
        weights.iter().filter(|w| w.is_negative()).fold(BigInt::zero(), |acc, w| acc + w);
    let root_bound = Rat::new(all_negative_numer, denom.clone()) + &model.objective_offset;

    let mut queue: BinaryHeap<Reverse<NodeKey>> = BinaryHeap::new();
    let mut nodes: BTreeMap<u64, Node> = BTreeMap::new();
    let mut next_seq = 0u64;
    let push_node = |queue: &mut BinaryHeap<Reverse<NodeKey>>,
                          nodes: &mut BTreeMap<u64, Node>,
                          next_seq: &mut u64,
                          bound: Rat,
                          allowed: Vec<u8>| {
        let seq = *next_seq;
        *next_seq += 1;
        queue.push(Reverse(NodeKey(bound.clone(), seq)));
        nodes.insert(seq, Node { bound, allowed });
    };
    push_node(&mut queue, &mut nodes, &mut next_seq, root_bound, vec![MASK_ALL; hyperplane_count]);

    let mut incumbent: Option<(Rat, Point)> = None;
    let mut node_count = 0u64;

    let final_bound = loop {
        let Some(Reverse(NodeKey(_, seq))) = queue.pop() else {
            break None; // queue exhausted: search is complete
        };
        let node = nodes.remove(&seq).expect("queued node exists");
        if let Some(budget) = node_budget {
            if node_count >= budget {
                // Count this node and everything still queued as open.
                let mut open_min = node.bound.clone();
                for Reverse(NodeKey(bound, _)) in queue.iter() {
                    if *bound < open_min {
                        open_min = bound.clone();
                    }
                }
                break Some(open_min);
            }
        }
        node_count += 1;

        // Pruning by incumbent uses the recorded (parent) bound first.
        if let Some((best, _)) = &incumbent {
            if &node.bound >= best {
                continue;
            }
        }

        // Continuous feasibility of the activated constraints.
        let mut activated: Vec<Ineq> = Vec::new();
        for (h, &mask) in node.allowed.iter().enumerate() {
            if mask != MASK_ALL {
                mask_constraints(mask, &model.hyperplanes[h], &mut activated);
            }
        }
        let node_region = Region::from_ineqs(activated);
        let Some(witness) = region_interior_point(&node_region, &model.ambient) else {
            continue;
        };

        // Literal and region status under the sign-set assignment.
        let statuses: Vec<LitStatus> = model
            .literals
            .iter()
            .map(|lit| {
                let mask = node.allowed[lit.hyperplane];
                let truth = literal_true_mask(lit);
                if mask & !truth == 0 {
                    LitStatus::True
                } else if mask & truth == 0 {
                    LitStatus::False
                } else {
                    LitStatus::Open
                }
            })
            .collect();

        let mut lb_numer = BigInt::zero();
        let mut open_regions: Vec<usize> = Vec::new();
        for (r, region) in model.regions.iter().enumerate() {
            let mut all_true = true;
            let mut any_false = false;
            for &l in &region.literals {
                match statuses[l] {
                    LitStatus::True => {}
                    LitStatus::False => {
                        any_false = true;
                        break;
                    }
                    LitStatus::Open => all_true = false,
                }
            }
            if any_false {
                continue; // binary forced to 0
            }
            if all_true && !region.literals.is_empty() {
                lb_numer += &weights[r]; // binary forced to 1
                continue;
            }
            // Open region, or a literal-free region (a free binary): the
            // bound takes negative weights at 1 and positive ones at 0.
            if weights[r].is_negative() {
                lb_numer += &weights[r];
            }
            if !region.literals.is_empty() {
                open_regions.push(r);
            }
        }
        let lb_raw = Rat::new(lb_numer.clone(), denom.clone());
        if let Some(cap) = &cap_scaled {
            if Rat::from(lb_numer.clone()) > *cap {
                continue; // no completion can satisfy the cap row
            }
        }
        let lb = &lb_raw + &model.objective_offset;
        if let Some((best, _)) = &incumbent {
            if &lb >= best {
                continue;
            }
        }

        // The witness is a genuine ambient point: its completion value is an
        // incumbent candidate.
        let wsigns = sign_vector(&model.hyperplanes, &witness);
        let mut value_numer = BigInt::zero();
        for (r, region) in model.regions.iter().enumerate() {
            if region.literals.is_empty() {
                // Free binary: minimization picks it negative-side.
                if weights[r].is_negative() {
                    value_numer += &weights[r];
                }
                continue;
            }
            let sat = region.literals.iter().all(|&l| {
                let lit = &model.literals[l];
                literal_sat(wsigns[lit.hyperplane], lit.orientation, lit.strict)
            });
            if sat {
                value_numer += &weights[r];
            }
        }
        let cap_ok = match &cap_scaled {
            Some(cap) => Rat::from(value_numer.clone()) <= *cap,
            None => true,
        };
        let value = Rat::new(value_numer, denom.clone()) + &model.objective_offset;
        if cap_ok && incumbent.as_ref().is_none_or(|(best, _)| value < *best) {
            incumbent = Some((value.clone(), witness.clone()));
        }

        // Node closed exactly when its witness attains the node bound.
        if cap_ok && value == lb {
            continue;
        }
        if open_regions.is_empty() {
            // All regions resolved: every completion in this node has value
            // lb; the witness already recorded it (or the cap rejected it).
            continue;
        }

        // Branch on the open literal occurring in the most open
        // negative-weight regions (all open regions if none are negative),
        // ties to the smallest literal id.
        let mut tally: BTreeMap<usize, usize> = BTreeMap::new();
        let negatives: Vec<usize> = open_regions
            .iter()
            .copied()
            .filter(|&r| weights[r].is_negative())
            .collect();
        let pool = if negatives.is_empty() { &open_regions } else { &negatives };
        for &r in pool {
            for &l in &model.regions[r].literals {
                if statuses[l] == LitStatus::Open {
                    *tally.entry(l).or_insert(0) += 1;
                }
            }
        }
        let (&branch_lit, _) = tally
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .expect("open region has an open literal");
        let lit = &model.literals[branch_lit];
        let truth = literal_true_mask(lit);
        for mask in [truth, !truth & MASK_ALL] {
            let refined = node.allowed[lit.hyperplane] & mask;
            if refined == 0 {
                continue;
            }
            let mut allowed = node.allowed.clone();
            allowed[lit.hyperplane] = refined;
            push_node(&mut queue, &mut nodes, &mut next_seq, lb.clone(), allowed);
        }
    };

    match final_bound {
        Some(open_min) => {
            let value = match &incumbent {
                Some((best, _)) if *best < open_min => best.clone(),
                _ => open_min,
            };
            BnBResult {
                status: BnBStatus::BoundOnly,
                value,
                witness: incumbent.map(|(_, w)| scale_witness_for_eps(model, &w)),
                node_count,
            }
        }
        None => match incumbent {
            Some((value, w)) => BnBResult {
                status: BnBStatus::Optimal,
                value,
                witness: Some(scale_witness_for_eps(model, &w)),
                node_count,
            },
            None => BnBResult {
                status: BnBStatus::Infeasible,
                value: Rat::zero(),
                witness: None,
                node_count,
            },
        },
    }
}

/// The two-part decomposition: a lower bound on `delta_n - alpha_n` as
/// `min(delta_{n-1} - alpha_{n-1}) + min(h_n(s) - h_n(t)) + alpha_n`, valid
/// even when the two minimizers live in different cells.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// Lower bound on `delta_n - alpha_n`.
    pub bound: Rat,
    /// (previous-round minimum shifted by its allowance, level difference
    /// minimum).
    pub parts: (BnBResult, BnBResult),
}

pub fn certify_decomposed(
    n: u32,
    s: &Substitution,
    t: &Substitution,
    ambient: &Region,
) -> Result<Decomposition, MilpError> {
    if n < 2 {
        return Err(MilpError::TooFewRounds);
    }
    let prev = build_milp_full(n - 1, s, t, ambient, false)?
        .with_objective_offset(-alpha(n - 1));
    let part1 = solve(&prev, None);
    let diff = build_milp_h_diff(n, s, t, ambient)?;
    let part2 = solve(&diff, None);
    if part1.status != BnBStatus::Optimal || part2.status != BnBStatus::Optimal {
        return Err(MilpError::InfeasibleAmbient);
    }
    let bound = &part1.value + &part2.value + alpha(n);
    Ok(Decomposition { bound, parts: (part1, part2) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::arrangement::global_min;

    #[test]
    fn eps_reduce_examples() {
        let eps = Rat::one();
        let strict = vec![AffineConstraint {
            form: LinForm::new(1, -1, 0),
            op: CmpOp::Gt,
            rhs: Rat::zero(),
        }];
        let reduced = eps_reduce(&strict, &eps).unwrap();
        assert_eq!(reduced[0].op, CmpOp::Ge);
        assert_eq!(reduced[0].rhs, Rat::one());

        // x <= y normalizes to y - x >= 0 and passes through unchanged.
        let weak = vec![AffineConstraint::from_ineq(&Ineq::le(LinForm::new(1, -1, 0)).unwrap())];
        let reduced = eps_reduce(&weak, &eps).unwrap();
        assert_eq!(reduced[0].op, CmpOp::Ge);
        assert_eq!(reduced[0].rhs, Rat::zero());

        let v: Vec<AffineConstraint> =
            Region::v().constraints().map(AffineConstraint::from_ineq).collect();
        let reduced = eps_reduce(&v, &eps).unwrap();
        assert!(reduced.iter().all(|c| c.op == CmpOp::Ge && c.rhs == Rat::one()));
    }

    #[test]
    fn eps_reduce_rejects_free_constants() {
        let bad = vec![AffineConstraint {
            form: LinForm::new(1, -1, 0),
            op: CmpOp::Gt,
            rhs: rat(1, 2),
        }];
        assert_eq!(eps_reduce(&bad, &Rat::one()), Err(MilpError::InhomogeneousConstraint));
        assert_eq!(
            eps_reduce(&[], &Rat::zero()),
            Err(MilpError::NonPositiveEpsilon)
        );
    }

    #[test]
    fn full_model_round_one_shape() {
        let model = build_milp_full(
            1,
            &Substitution::identity(),
            &Substitution::swap_xy(),
            &Region::v(),
            false,
        )
        .unwrap();
        // Of the four round-one comparisons, y <= x is infeasible under V
        // and pruned at expansion; three binaries remain.
        assert_eq!(model.regions.len(), 3);
        for region in &model.regions {
            let c = region.coefficient();
            assert!(c == rat(1, 6) || c == rat(-1, 6));
        }
        // x <= y shares its hyperplane with the ambient constraint x < y;
        // together with x, x - z and y - z that makes four.
        assert_eq!(model.hyperplanes.len(), 4);
        assert!(!model.linking_rows().is_empty());
    }

    #[test]
    fn cap_toggle() {
        let with = build_milp_full(
            2,
            &Substitution::identity(),
            &Substitution::swap_xy(),
            &Region::v(),
            true,
        )
        .unwrap();
        assert_eq!(with.cap, Some(alpha(2)));
        let without = build_milp_full(
            2,
            &Substitution::identity(),
            &Substitution::swap_xy(),
            &Region::v(),
            false,
        )
        .unwrap();
        assert_eq!(without.cap, None);
    }

    #[test]
    fn free_binary_minimizes_to_zero() {
        // One binary with coefficient +1/6 and no linking: optimum 0 at b=0.
        let ps = PiecewiseSum { ambient: Region::v(), terms: Vec::new() };
        let mut model = MilpModel::from_piecewise(&ps, None).unwrap();
        model.regions.push(RegionVar { literals: Vec::new(), level: 1, sign: TermSign::Plus });
        let result = solve(&model, None);
        assert_eq!(result.status, BnBStatus::Optimal);
        assert_eq!(result.value, Rat::zero());
    }

    #[test]
    fn identical_substitutions_have_zero_optimum() {
        let model = build_milp_h_diff(
            2,
            &Substitution::identity(),
            &Substitution::identity(),
            &Region::v(),
        )
        .unwrap();
        let result = solve(&model, None);
        assert_eq!(result.status, BnBStatus::Optimal);
        assert_eq!(result.value, Rat::zero());
    }

    #[test]
    fn solver_matches_oracle_on_delta_2() {
        let s = Substitution::identity();
        let t = Substitution::swap_xy();
        let ps = build_delta(2, &s, &t, &Region::v()).unwrap();
        let oracle = global_min(&ps).unwrap();
        let model = build_milp_full(2, &s, &t, &Region::v(), false).unwrap();
        let solved = solve(&model, None);
        assert_eq!(solved.status, BnBStatus::Optimal);
        assert_eq!(solved.value, oracle.min_value);
        let w = solved.witness.unwrap();
        assert!(Region::v().sat(&w));
        assert_eq!(ps.evaluate(&w).unwrap(), solved.value);
    }

    #[test]
    fn anytime_bound_is_valid() {
        let s = Substitution::identity();
        let t = Substitution::swap_xy();
        let model = build_milp_full(2, &s, &t, &Region::v(), false).unwrap();
        let full = solve(&model, None);
        assert_eq!(full.status, BnBStatus::Optimal);
        for budget in [1, full.node_count / 2] {
            let truncated = solve(&model, Some(budget.max(1)));
            assert!(truncated.value <= full.value);
        }
    }

    #[test]
    fn witness_cleares_epsilon_after_scaling() {
        let s = Substitution::identity();
        let t = Substitution::swap_xy();
        let model = build_milp_full(1, &s, &t, &Region::v(), false).unwrap();
        let solved = solve(&model, None);
        let w = solved.witness.unwrap();
        for c in &model.ambient_reduced {
            let v = c.form.eval(&w);
            match c.op {
                CmpOp::Ge => assert!(v >= c.rhs),
                CmpOp::Le => assert!(v <= c.rhs),
                _ => panic!("reduced constraints are weak"),
            }
        }
    }

    #[test]
    fn big_m_rows_hold_at_solution() {
        let s = Substitution::identity();
        let t = Substitution::swap_xy();
        let model = build_milp_full(1, &s, &t, &Region::v(), false).unwrap();
        let solved = solve(&model, None);
        let w = solved.witness.unwrap();
        // Box radius comfortably containing the witness.
        let radius = [w.x.clone(), w.y.clone(), w.z.clone()]
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap()
            * rat(2, 1);
        let signs = sign_vector(&model.hyperplanes, &w);
        for row in model.big_m_constraints(&radius) {
            let lit = &model.literals[row.literal];
            let active = literal_sat(signs[lit.hyperplane], lit.orientation, lit.strict);
            assert!(row.holds_at(&w, active), "big-M row violated: {}", row.form);
        }
    }
}
