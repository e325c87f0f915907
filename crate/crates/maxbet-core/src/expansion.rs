//! Unrolls the round-by-round elimination probability into signed indicator
//! sums over polyhedral cones.
//!
//! `h_n` (elimination of player 1 in exactly round `n`) expands, by the
//! six-branch transition recursion, into a sum of `(1/6)^n` times indicators
//! of homogeneous regions: strict positivity of all three stack forms at
//! every level of the expansion path plus one final weak comparison from the
//! base case. The partial-sum difference between two substitutions is then a
//! piecewise-constant function represented term by term.

use std::collections::HashMap;
use std::fmt;

use num::{BigInt, One, Zero};
use thiserror::Error;

use crate::algebra::{
    implied_by, rat, region_feasible, AlgebraError, Ineq, LinForm, Point, Rat, Region,
};
use crate::exec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExpansionError {
    #[error("round index must be at least 1")]
    ZeroRounds,
    #[error("point lies outside the ambient domain")]
    PointOutsideAmbient,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Tail allowance `(1/2)^n * (4/5)`: the most the unresolved game after
/// round `n` can contribute to the elimination probability.
pub fn alpha(n: u32) -> Rat {
    debug_assert!(n >= 1);
    rat(1, 2).pow(n as i32) * rat(4, 5)
}

/// Level coefficient `(1/6)^level`.
pub fn level_coefficient(level: u32) -> Rat {
    rat(1, 6).pow(level as i32)
}

/// The three stack expressions fed to the recursion, as linear forms of the
/// ambient coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    forms: [LinForm; 3],
}

impl Substitution {
    pub fn new(s1: LinForm, s2: LinForm, s3: LinForm) -> Self {
        Substitution { forms: [s1, s2, s3] }
    }

    /// `(x, y, z)`
    pub fn identity() -> Self {
        Substitution::new(LinForm::x(), LinForm::y(), LinForm::z())
    }

    /// `(y, x, z)`: player 1 swaps stacks with player 2.
    pub fn swap_xy() -> Self {
        Substitution::new(LinForm::y(), LinForm::x(), LinForm::z())
    }

    /// `(y, z, x)`
    pub fn rotate_yzx() -> Self {
        Substitution::new(LinForm::y(), LinForm::z(), LinForm::x())
    }

    /// `(z, y, x)`
    pub fn swap_zyx() -> Self {
        Substitution::new(LinForm::z(), LinForm::y(), LinForm::x())
    }

    pub fn forms(&self) -> &[LinForm; 3] {
        &self.forms
    }

    /// Evaluates the three stack forms at an ambient point.
    pub fn apply(&self, p: &Point) -> (Rat, Rat, Rat) {
        (self.forms[0].eval(p), self.forms[1].eval(p), self.forms[2].eval(p))
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.forms[0], self.forms[1], self.forms[2])
    }
}

/// Sign of an indicator term in a piecewise sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermSign {
    Plus,
    Minus,
}

impl TermSign {
    pub fn factor(self) -> i64 {
        match self {
            TermSign::Plus => 1,
            TermSign::Minus => -1,
        }
    }
}

/// One indicator: `sign * (1/6)^level * [point in region]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IndicatorTerm {
    pub level: u32,
    pub sign: TermSign,
    pub region: Region,
}

/// A signed sum of indicator terms over a common ambient domain.
#[derive(Debug, Clone)]
pub struct PiecewiseSum {
    pub ambient: Region,
    pub terms: Vec<IndicatorTerm>,
}

impl PiecewiseSum {
    /// Exact value at an ambient point. Points outside the ambient are
    /// rejected: pruned terms make the representation meaningless there.
    pub fn evaluate(&self, p: &Point) -> Result<Rat, ExpansionError> {
        if !self.ambient.sat(p) {
            return Err(ExpansionError::PointOutsideAmbient);
        }
        // Sum over a common denominator 6^max_level to stay in integers.
        let max_level = self.terms.iter().map(|t| t.level).max().unwrap_or(0);
        let mut numer = BigInt::zero();
        let six = BigInt::from(6);
        for term in &self.terms {
            if term.region.sat(p) {
                let weight = num::pow::pow(six.clone(), (max_level - term.level) as usize);
                match term.sign {
                    TermSign::Plus => numer += weight,
                    TermSign::Minus => numer -= weight,
                }
            }
        }
        Ok(Rat::new(numer, num::pow::pow(six, max_level as usize)))
    }
}

/// Expands `h_n` under a substitution into indicator terms, pruning terms
/// whose region is infeasible within the ambient and dropping positivity
/// constraints the ambient already implies.
pub fn expand_h(
    n: u32,
    sub: &Substitution,
    ambient: &Region,
) -> Result<Vec<IndicatorTerm>, ExpansionError> {
    expand_h_opts(n, sub, ambient, true)
}

/// Expansion with pruning and redundancy filtering disabled; every path of
/// the recursion is kept verbatim. Exists so that cross-validation can check
/// that pruning never changes an evaluated value.
pub fn expand_h_keeping_infeasible(
    n: u32,
    sub: &Substitution,
    ambient: &Region,
) -> Result<Vec<IndicatorTerm>, ExpansionError> {
    expand_h_opts(n, sub, ambient, false)
}

fn expand_h_opts(
    n: u32,
    sub: &Substitution,
    ambient: &Region,
    prune: bool,
) -> Result<Vec<IndicatorTerm>, ExpansionError> {
    if n == 0 {
        return Err(ExpansionError::ZeroRounds);
    }
    let mut expander = Expander { ambient, prune, memo: HashMap::new() };
    let fragments = expander.fragments(&sub.forms.clone(), n);
    let terms: Vec<Option<IndicatorTerm>> = exec::map_collect(&fragments, |fragment| {
        let region = Region::from_ineqs(fragment.iter().cloned());
        if prune && !region_feasible(&region, ambient) {
            return None;
        }
        Some(IndicatorTerm { level: n, sign: TermSign::Plus, region })
    });
    let mut terms: Vec<IndicatorTerm> = terms.into_iter().flatten().collect();
    terms.sort();
    Ok(terms)
}

struct Expander<'a> {
    ambient: &'a Region,
    prune: bool,
    memo: HashMap<([LinForm; 3], u32), Vec<Vec<Ineq>>>,
}

impl Expander<'_> {
    /// Constraint fragments for the expansion of `h_n` at a stack triple.
    /// Each fragment is the constraint list of one surviving recursion path:
    /// non-redundant positivity at each level plus the base comparison.
    fn fragments(&mut self, triple: &[LinForm; 3], n: u32) -> Vec<Vec<Ineq>> {
        // Scale invariance: a common positive factor does not change the
        // expansion, so key the memo on the reduced triple.
        let key = (reduce_triple(triple), n);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let result = self.fragments_uncached(&key.0, n);
        self.memo.insert(key, result.clone());
        result
    }

    fn fragments_uncached(&mut self, triple: &[LinForm; 3], n: u32) -> Vec<Vec<Ineq>> {
        // Positivity of all three stacks at this level. A stack form that is
        // identically zero kills the branch outright.
        let mut positivity = Vec::new();
        for form in triple {
            if form.is_zero() {
                return Vec::new();
            }
            let constraint = Ineq::gt(form.clone()).expect("nonzero form");
            if self.prune {
                let alone = Region::from_ineqs([constraint.clone()]);
                if !region_feasible(&alone, self.ambient) {
                    return Vec::new();
                }
                if implied_by(&constraint, self.ambient) {
                    continue;
                }
            }
            positivity.push(constraint);
        }
        if n == 1 {
            let [a, b, c] = triple;
            let mut out = Vec::with_capacity(2);
            for other in [b, c] {
                let mut fragment = positivity.clone();
                let diff = other.sub(a);
                if !diff.is_zero() {
                    fragment.push(Ineq::ge(diff).expect("nonzero form"));
                }
                // An identically-zero difference means the comparison always
                // holds; the fragment is just the positivity constraints.
                out.push(fragment);
            }
            return out;
        }
        let mut out = Vec::new();
        for child in successors(triple) {
            for child_fragment in self.fragments(&child, n - 1) {
                let mut fragment = positivity.clone();
                fragment.extend(child_fragment);
                out.push(fragment);
            }
        }
        out
    }
}

/// The six parent-argument triples of the recursion: one per (betting pair,
/// coin outcome). Branches whose poorer-player assumption fails are harmless
/// because their positivity constraint is unsatisfiable.
fn successors(triple: &[LinForm; 3]) -> [[LinForm; 3]; 6] {
    let [a, b, c] = triple;
    [
        [a.double(), b.sub(a), c.clone()],
        [a.double(), b.clone(), c.sub(a)],
        [a.sub(b), b.double(), c.clone()],
        [a.clone(), b.double(), c.sub(b)],
        [a.sub(c), b.clone(), c.double()],
        [a.clone(), b.sub(c), c.double()],
    ]
}

fn reduce_triple(triple: &[LinForm; 3]) -> [LinForm; 3] {
    let mut g = BigInt::zero();
    for form in triple {
        let (a, b, c) = form.coeffs();
        g = num::Integer::gcd(&g, a);
        g = num::Integer::gcd(&g, b);
        g = num::Integer::gcd(&g, c);
    }
    if g.is_zero() || g.is_one() {
        return triple.clone();
    }
    let scale = |f: &LinForm| {
        let (a, b, c) = f.coeffs();
        LinForm::new(a / &g, b / &g, c / &g)
    };
    [scale(&triple[0]), scale(&triple[1]), scale(&triple[2])]
}

/// Builds the partial-sum difference `sum_{j<=n} h_j(s) - sum_{j<=n} h_j(t)`
/// as a piecewise sum over the ambient domain.
pub fn build_delta(
    n: u32,
    s: &Substitution,
    t: &Substitution,
    ambient: &Region,
) -> Result<PiecewiseSum, ExpansionError> {
    if n == 0 {
        return Err(ExpansionError::ZeroRounds);
    }
    let mut terms = Vec::new();
    for j in 1..=n {
        terms.extend(expand_h(j, s, ambient)?);
    }
    for j in 1..=n {
        terms.extend(expand_h(j, t, ambient)?.into_iter().map(|mut term| {
            term.sign = TermSign::Minus;
            term
        }));
    }
    Ok(PiecewiseSum { ambient: ambient.clone(), terms })
}

/// The level-`n` slice of the difference: `h_n(s) - h_n(t)` only.
pub fn build_level_diff(
    n: u32,
    s: &Substitution,
    t: &Substitution,
    ambient: &Region,
) -> Result<PiecewiseSum, ExpansionError> {
    if n == 0 {
        return Err(ExpansionError::ZeroRounds);
    }
    let mut terms = expand_h(n, s, ambient)?;
    terms.extend(expand_h(n, t, ambient)?.into_iter().map(|mut term| {
        term.sign = TermSign::Minus;
        term
    }));
    Ok(PiecewiseSum { ambient: ambient.clone(), terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat_int;

    fn ge(a: i64, b: i64, c: i64) -> Ineq {
        Ineq::ge(LinForm::new(a, b, c)).unwrap()
    }

    fn single(ineq: Ineq) -> Region {
        Region::from_ineqs([ineq])
    }

    #[test]
    fn alpha_values() {
        assert_eq!(alpha(1), rat(2, 5));
        assert_eq!(alpha(3), rat(1, 10));
        assert_eq!(alpha(4), rat(1, 20));
    }

    #[test]
    fn expand_h1_identity() {
        let terms = expand_h(1, &Substitution::identity(), &Region::v()).unwrap();
        assert_eq!(terms.len(), 2);
        let regions: Vec<&Region> = terms.iter().map(|t| &t.region).collect();
        // x <= y and x <= z; positivity is implied by V and dropped.
        assert!(regions.contains(&&single(ge(-1, 1, 0))));
        assert!(regions.contains(&&single(ge(-1, 0, 1))));
        assert!(terms.iter().all(|t| t.level == 1 && t.sign == TermSign::Plus));
    }

    #[test]
    fn expand_h2_identity_matches_hand_expansion() {
        let terms = expand_h(2, &Substitution::identity(), &Region::v()).unwrap();
        let expected = [
            ge(-1, 2, 0),  // x <= 2y
            ge(-1, -1, 1), // x <= z - y
            ge(-3, 1, 0),  // 3x <= y
            ge(-2, 0, 1),  // 2x <= z
            ge(-2, 1, 0),  // 2x <= y
            ge(-3, 0, 1),  // 3x <= z
        ];
        assert_eq!(terms.len(), 6);
        for ineq in expected {
            assert!(
                terms.iter().any(|t| t.region == single(ineq.clone())),
                "missing comparison {ineq}"
            );
        }
    }

    #[test]
    fn expand_h2_swapped_prunes_impossible_comparison() {
        let terms = expand_h(2, &Substitution::swap_xy(), &Region::v()).unwrap();
        // 2y <= x is infeasible under x < y and gets pruned; five comparisons
        // survive: 3y <= z, y <= 3x, y - x <= z, y <= 2x, y <= z - x.
        assert_eq!(terms.len(), 5);
        let expected = [
            ge(0, -3, 1),
            ge(3, -1, 0),
            ge(1, -1, 1),
            ge(2, -1, 0),
            ge(-1, -1, 1),
        ];
        for ineq in expected {
            assert!(
                terms.iter().any(|t| t.region == single(ineq.clone())),
                "missing comparison {ineq}"
            );
        }
        assert!(!terms.iter().any(|t| t.region == single(ge(1, -2, 0))));
    }

    #[test]
    fn term_count_bound_under_trivial_ambient() {
        for n in 1..=3 {
            let terms = expand_h(n, &Substitution::identity(), &Region::empty()).unwrap();
            assert!(terms.len() as u64 <= 2 * 6u64.pow(n - 1));
        }
    }

    #[test]
    fn zero_rounds_rejected() {
        assert_eq!(
            expand_h(0, &Substitution::identity(), &Region::v()),
            Err(ExpansionError::ZeroRounds)
        );
    }

    #[test]
    fn delta_1_is_constant_one_sixth() {
        let ps =
            build_delta(1, &Substitution::identity(), &Substitution::swap_xy(), &Region::v())
                .unwrap();
        for p in [Point::from_ints(1, 2, 3), Point::from_ints(4, 5, 6), Point::from_ints(2, 9, 11)]
        {
            assert_eq!(ps.evaluate(&p).unwrap(), rat(1, 6));
        }
    }

    #[test]
    fn delta_2_at_4_5_6() {
        let ps =
            build_delta(2, &Substitution::identity(), &Substitution::swap_xy(), &Region::v())
                .unwrap();
        assert_eq!(ps.evaluate(&Point::from_ints(4, 5, 6)).unwrap(), rat(1, 9));
        // Scale invariance: same value at twice the point.
        assert_eq!(ps.evaluate(&Point::from_ints(8, 10, 12)).unwrap(), rat(1, 9));
    }

    #[test]
    fn delta_of_identical_substitutions_is_zero() {
        let ps =
            build_delta(2, &Substitution::identity(), &Substitution::identity(), &Region::v())
                .unwrap();
        assert_eq!(ps.evaluate(&Point::from_ints(4, 5, 6)).unwrap(), rat_int(0));
    }

    #[test]
    fn empty_sum_evaluates_to_zero() {
        let ps = PiecewiseSum { ambient: Region::v(), terms: Vec::new() };
        assert_eq!(ps.evaluate(&Point::from_ints(1, 2, 3)).unwrap(), rat_int(0));
    }

    #[test]
    fn evaluate_rejects_point_outside_ambient() {
        let ps =
            build_delta(1, &Substitution::identity(), &Substitution::swap_xy(), &Region::v())
                .unwrap();
        assert_eq!(
            ps.evaluate(&Point::from_ints(2, 1, 3)),
            Err(ExpansionError::PointOutsideAmbient)
        );
    }

    #[test]
    fn degenerate_substitution_with_identical_forms() {
        // t = (y, y, z): the base comparison y <= y is vacuous and must not
        // panic; h_1(y,y,z) = 1/6 * (1 + [y <= z]) on V, which is 2/6.
        let t = Substitution::new(LinForm::y(), LinForm::y(), LinForm::z());
        let terms = expand_h(1, &t, &Region::v()).unwrap();
        let ps = PiecewiseSum { ambient: Region::v(), terms };
        assert_eq!(ps.evaluate(&Point::from_ints(1, 2, 3)).unwrap(), rat(2, 6));
    }
}
