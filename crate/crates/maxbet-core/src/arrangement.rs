//! Face enumeration of the hyperplane arrangement induced by a piecewise sum,
//! exact global minimization over the ambient domain, and the mesh-refinement
//! loop that finds the first round count whose minimum clears the tail
//! allowance.
//!
//! All hyperplanes pass through the origin, so positive scaling moves every
//! nonzero ambient point onto one of the normalization slices used by the
//! feasibility machinery. On each slice the arrangement is an affine line
//! arrangement in at most two coordinates; vertices are pairwise
//! intersections, edges are the pieces between consecutive crossings along a
//! line, and full-dimensional cells are reached by stepping off an edge
//! midpoint by half the distance to the nearest crossing. Every face of the
//! arrangement inside the ambient is realized by at least one generated
//! candidate point, so collecting candidates by sign vector enumerates the
//! faces exactly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{BigInt, Integer, One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{self, LinForm, Point, Rat, Region};
use crate::exec;
use crate::expansion::{
    alpha, build_delta, ExpansionError, PiecewiseSum, Substitution, TermSign,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("ambient domain is infeasible; the sum has no cells")]
    EmptyAmbient,
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
}

/// A hyperplane through the origin in canonical orientation (gcd-reduced,
/// first nonzero coefficient positive).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperplane {
    form: LinForm,
}

impl Hyperplane {
    /// Canonicalizes an arbitrary nonzero form; `None` for the zero form.
    pub fn from_form(form: &LinForm) -> Option<Hyperplane> {
        if form.is_zero() {
            return None;
        }
        Some(Hyperplane { form: form.canonical().0 })
    }

    pub fn form(&self) -> &LinForm {
        &self.form
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = 0", self.form)
    }
}

/// Side of a hyperplane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Sign::Neg => '-',
            Sign::Zero => '0',
            Sign::Pos => '+',
        };
        write!(f, "{}", c)
    }
}

/// Renders a sign vector as a compact string such as `+-0+`.
pub fn signs_to_string(signs: &[Sign]) -> String {
    signs.iter().map(|s| s.to_string()).collect()
}

/// One face of the arrangement: the sign of every hyperplane (aligned with
/// the hyperplane list the enumeration was called with) plus a rational
/// representative realizing exactly those signs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub signs: Vec<Sign>,
    pub rep: Point,
}

/// Result of an exact global minimization of a piecewise sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinReport {
    pub min_value: Rat,
    pub witness: Point,
    pub witness_signs: Vec<Sign>,
    /// Number of enumerated faces, lower-dimensional ones included.
    pub cell_count: usize,
    pub hyperplane_count: usize,
}

/// Canonical deduplicated hyperplanes of every term constraint plus the
/// ambient boundaries, in a fixed sorted order.
pub fn collect_hyperplanes(ps: &PiecewiseSum) -> Vec<Hyperplane> {
    let mut set: BTreeSet<Hyperplane> = BTreeSet::new();
    for term in &ps.terms {
        for constraint in term.region.constraints() {
            set.extend(Hyperplane::from_form(constraint.form()));
        }
    }
    for constraint in ps.ambient.constraints() {
        set.extend(Hyperplane::from_form(constraint.form()));
    }
    set.into_iter().collect()
}

/// Numerators of a point after clearing a positive common denominator; signs
/// of form evaluations can then be read off integer dot products.
fn point_numerators(p: &Point) -> [BigInt; 3] {
    let d = p.x.denom().lcm(p.y.denom()).lcm(p.z.denom());
    let scale = |r: &Rat| r.numer() * (&d / r.denom());
    [scale(&p.x), scale(&p.y), scale(&p.z)]
}

fn form_sign_at(form: &LinForm, nums: &[BigInt; 3]) -> Sign {
    let (a, b, c) = form.coeffs();
    let v = a * &nums[0] + b * &nums[1] + c * &nums[2];
    match v.sign() {
        num::bigint::Sign::Minus => Sign::Neg,
        num::bigint::Sign::NoSign => Sign::Zero,
        num::bigint::Sign::Plus => Sign::Pos,
    }
}

/// Sign vector of a point over a hyperplane list.
pub fn sign_vector(hyperplanes: &[Hyperplane], p: &Point) -> Vec<Sign> {
    let nums = point_numerators(p);
    hyperplanes.iter().map(|h| form_sign_at(h.form(), &nums)).collect()
}

/// A line on a two-variable slice: `p*t0 + q*t1 + k = 0`.
struct SliceLine {
    p: BigInt,
    q: BigInt,
    k: BigInt,
}

impl SliceLine {
    fn value(&self, t: &[Rat; 2]) -> Rat {
        Rat::from(self.p.clone()) * &t[0] + Rat::from(self.q.clone()) * &t[1]
            + Rat::from(self.k.clone())
    }

    /// A fixed base point of the line.
    fn base(&self) -> [Rat; 2] {
        if !self.q.is_zero() {
            [Rat::zero(), -Rat::new(self.k.clone(), self.q.clone())]
        } else {
            [-Rat::new(self.k.clone(), self.p.clone()), Rat::zero()]
        }
    }

    /// A direction vector along the line.
    fn direction(&self) -> [Rat; 2] {
        [Rat::from(self.q.clone()), -Rat::from(self.p.clone())]
    }

    /// The gradient (normal) direction.
    fn normal(&self) -> [Rat; 2] {
        [Rat::from(self.p.clone()), Rat::from(self.q.clone())]
    }
}

fn add_scaled(base: &[Rat; 2], dir: &[Rat; 2], t: &Rat) -> [Rat; 2] {
    [&base[0] + &dir[0] * t, &base[1] + &dir[1] * t]
}

/// Candidate points on a ray `base + s*dir` half way to the nearest crossing
/// on each side (one unit out when a side is crossing-free).
fn side_probes(lines: &[SliceLine], at: &[Rat; 2], dir: &[Rat; 2]) -> Vec<[Rat; 2]> {
    let mut nearest_pos: Option<Rat> = None;
    let mut nearest_neg: Option<Rat> = None;
    for line in lines {
        let slope = Rat::from(line.p.clone()) * &dir[0] + Rat::from(line.q.clone()) * &dir[1];
        if slope.is_zero() {
            continue;
        }
        let value = line.value(at);
        if value.is_zero() {
            continue;
        }
        let s = -value / slope;
        if s.is_positive() {
            if nearest_pos.as_ref().is_none_or(|cur| &s < cur) {
                nearest_pos = Some(s);
            }
        } else if nearest_neg.as_ref().is_none_or(|cur| &s > cur) {
            nearest_neg = Some(s);
        }
    }
    let two = Rat::from(BigInt::from(2));
    let plus = nearest_pos.map_or(Rat::one(), |s| s / &two);
    let minus = nearest_neg.map_or(-Rat::one(), |s| s / &two);
    vec![add_scaled(at, dir, &plus), add_scaled(at, dir, &minus)]
}

/// All candidate points of the 2D sweep on one slice: pairwise intersections,
/// midpoints between consecutive crossings along every line (with probes one
/// unit beyond the extremes), and half-step offsets to both sides of every
/// such midpoint.
fn sweep_2d(lines: &[SliceLine]) -> Vec<[Rat; 2]> {
    let mut vertices: Vec<[Rat; 2]> = Vec::new();
    for (i, a) in lines.iter().enumerate() {
        for b in lines.iter().skip(i + 1) {
            let det = &a.p * &b.q - &b.p * &a.q;
            if det.is_zero() {
                continue;
            }
            let det = Rat::from(det);
            let t0 = Rat::from(&b.q * -&a.k + &a.q * &b.k) / det.clone();
            let t1 = Rat::from(&a.p * -&b.k + &b.p * &a.k) / det;
            vertices.push([t0, t1]);
        }
    }

    let indices: Vec<usize> = (0..lines.len()).collect();
    let per_line: Vec<Vec<[Rat; 2]>> = exec::map_collect(&indices, |&li| {
        let line = &lines[li];
        let base = line.base();
        let dir = line.direction();
        let mut crossings: BTreeSet<Rat> = BTreeSet::new();
        for (mi, other) in lines.iter().enumerate() {
            if mi == li {
                continue;
            }
            let slope =
                Rat::from(other.p.clone()) * &dir[0] + Rat::from(other.q.clone()) * &dir[1];
            if slope.is_zero() {
                continue;
            }
            crossings.insert(-other.value(&base) / slope);
        }
        let ts: Vec<Rat> = crossings.into_iter().collect();
        let mut params: Vec<Rat> = Vec::new();
        if ts.is_empty() {
            params.push(Rat::zero());
        } else {
            params.push(ts.first().unwrap() - Rat::one());
            for pair in ts.windows(2) {
                params.push((&pair[0] + &pair[1]) / Rat::from(BigInt::from(2)));
            }
            params.push(ts.last().unwrap() + Rat::one());
        }
        let mut out = Vec::new();
        let normal = line.normal();
        for t in params {
            let on_line = add_scaled(&base, &dir, &t);
            out.extend(side_probes(lines, &on_line, &normal));
            out.push(on_line);
        }
        out
    });

    let mut candidates = vertices;
    candidates.extend(per_line.into_iter().flatten());
    candidates
}

/// Candidate points of the 1D sweep: every crossing, midpoints between
/// consecutive crossings, and probes beyond the extremes.
fn sweep_1d(restrictions: &[(BigInt, BigInt)]) -> Vec<Rat> {
    let mut crossings: BTreeSet<Rat> = BTreeSet::new();
    for (c, k) in restrictions {
        if !c.is_zero() {
            crossings.insert(-Rat::new(k.clone(), c.clone()));
        }
    }
    let ts: Vec<Rat> = crossings.into_iter().collect();
    if ts.is_empty() {
        return vec![Rat::zero()];
    }
    let mut out = Vec::new();
    out.push(ts.first().unwrap() - Rat::one());
    for pair in ts.windows(2) {
        out.push(pair[0].clone());
        out.push((&pair[0] + &pair[1]) / Rat::from(BigInt::from(2)));
    }
    out.push(ts.last().unwrap().clone());
    out.push(ts.last().unwrap() + Rat::one());
    out
}

/// Every sign vector over `hyperplanes` realizable by a point of the ambient
/// domain, lower-dimensional faces included, each with a deterministic
/// representative (the lexicographically smallest candidate realizing it).
pub fn enumerate_cells(hyperplanes: &[Hyperplane], ambient: &Region) -> Vec<Cell> {
    // The ambient boundaries take part in the sweep geometry even when the
    // caller's list omits them: candidate completeness needs ambient
    // membership to be constant between consecutive crossings.
    let mut geometry: BTreeSet<LinForm> =
        hyperplanes.iter().map(|h| h.form().clone()).collect();
    for constraint in ambient.constraints() {
        geometry.insert(constraint.form().canonical().0);
    }
    let geometry: Vec<LinForm> = geometry.into_iter().collect();

    let mut faces: BTreeMap<Vec<Sign>, Point> = BTreeMap::new();
    let mut absorb = |batch: Vec<Option<(Vec<Sign>, Point)>>| {
        for (signs, point) in batch.into_iter().flatten() {
            faces
                .entry(signs)
                .and_modify(|cur| {
                    if point < *cur {
                        *cur = point.clone();
                    }
                })
                .or_insert(point);
        }
    };

    for slice in &algebra::SLICES {
        let Some(seed) = algebra::seed_on_slice(ambient.constraints(), slice) else {
            continue;
        };
        let mut points3: Vec<Point> = vec![algebra::slice_point(slice, &seed)];
        match slice.cols.len() {
            2 => {
                let lines: Vec<SliceLine> = geometry
                    .iter()
                    .filter_map(|form| {
                        let (coeffs, k) = algebra::restrict_form(form, slice);
                        if coeffs[0].is_zero() && coeffs[1].is_zero() {
                            return None;
                        }
                        Some(SliceLine { p: coeffs[0].clone(), q: coeffs[1].clone(), k })
                    })
                    .collect();
                for t in sweep_2d(&lines) {
                    points3.push(algebra::slice_point(slice, &t));
                }
            }
            1 => {
                let restrictions: Vec<(BigInt, BigInt)> = geometry
                    .iter()
                    .map(|form| {
                        let (coeffs, k) = algebra::restrict_form(form, slice);
                        (coeffs[0].clone(), k)
                    })
                    .collect();
                for t in sweep_1d(&restrictions) {
                    points3.push(algebra::slice_point(slice, &[t]));
                }
            }
            _ => {}
        }
        let batch = exec::map_collect(&points3, |p| {
            if !ambient.sat(p) {
                return None;
            }
            Some((sign_vector(hyperplanes, p), p.clone()))
        });
        absorb(batch);
    }

    let origin = Point::origin();
    if ambient.sat(&origin) {
        absorb(vec![Some((sign_vector(hyperplanes, &origin), origin))]);
    }

    faces.into_iter().map(|(signs, rep)| Cell { signs, rep }).collect()
}

/// A term's requirements as (hyperplane index, orientation, strictness)
/// literals; satisfaction is then a lookup in a face's sign vector.
pub(crate) fn region_literals(
    region: &Region,
    index: &BTreeMap<LinForm, usize>,
) -> Vec<(usize, i8, bool)> {
    region
        .constraints()
        .map(|constraint| {
            let (canonical, orientation) = constraint.form().canonical();
            let idx = *index.get(&canonical).expect("hyperplane collected for every constraint");
            (idx, orientation, constraint.is_strict())
        })
        .collect()
}

/// Whether a constraint literal `orientation * h (strict ? > : >=) 0` holds
/// on a given side of its hyperplane.
pub fn literal_sat(sign: Sign, orientation: i8, strict: bool) -> bool {
    if orientation > 0 {
        if strict {
            sign == Sign::Pos
        } else {
            sign != Sign::Neg
        }
    } else if strict {
        sign == Sign::Neg
    } else {
        sign != Sign::Pos
    }
}

/// Exact global minimum of a piecewise sum over its ambient domain.
///
/// The sum is constant on every face of its arrangement, so the minimum over
/// the ambient equals the minimum over face representatives. The witness is
/// the lexicographically smallest representative attaining it.
pub fn global_min(ps: &PiecewiseSum) -> Result<MinReport, ArrangementError> {
    let hyperplanes = collect_hyperplanes(ps);
    let cells = enumerate_cells(&hyperplanes, &ps.ambient);
    if cells.is_empty() {
        return Err(ArrangementError::EmptyAmbient);
    }
    let index: BTreeMap<LinForm, usize> =
        hyperplanes.iter().enumerate().map(|(i, h)| (h.form().clone(), i)).collect();

    let max_level = ps.terms.iter().map(|t| t.level).max().unwrap_or(0);
    let six = BigInt::from(6);
    let terms: Vec<(BigInt, Vec<(usize, i8, bool)>)> = ps
        .terms
        .iter()
        .map(|term| {
            let weight = num::pow::pow(six.clone(), (max_level - term.level) as usize);
            let weight = match term.sign {
                TermSign::Plus => weight,
                TermSign::Minus => -weight,
            };
            (weight, region_literals(&term.region, &index))
        })
        .collect();

    let numerators: Vec<BigInt> = exec::map_collect(&cells, |cell| {
        let mut numerator = BigInt::zero();
        for (weight, literals) in &terms {
            if literals.iter().all(|&(idx, orient, strict)| {
                literal_sat(cell.signs[idx], orient, strict)
            }) {
                numerator += weight;
            }
        }
        numerator
    });

    let mut best = 0usize;
    for i in 1..cells.len() {
        let better = match numerators[i].cmp(&numerators[best]) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Equal => cells[i].rep < cells[best].rep,
            std::cmp::Ordering::Greater => false,
        };
        if better {
            best = i;
        }
    }

    let min_value = Rat::new(numerators[best].clone(), num::pow::pow(six, max_level as usize));
    let witness = cells[best].rep.clone();
    assert_eq!(
        ps.evaluate(&witness).expect("witness lies in the ambient"),
        min_value,
        "face-literal evaluation must agree with direct evaluation at the witness"
    );
    Ok(MinReport {
        min_value,
        witness,
        witness_signs: cells[best].signs.clone(),
        cell_count: cells.len(),
        hyperplane_count: hyperplanes.len(),
    })
}

/// Per-round record of the mesh loop.
#[derive(Debug, Clone)]
pub struct LevelReport {
    pub n: u32,
    pub alpha: Rat,
    pub report: MinReport,
}

/// Outcome of [`meshitup`].
#[derive(Debug, Clone)]
pub enum MeshItUpResult {
    /// First `n` whose exact minimum clears the tail allowance, with that
    /// minimum.
    Found { n: u32, bound: Rat, per_level: Vec<LevelReport> },
    NotFoundWithin { max_n: u32, per_level: Vec<LevelReport> },
}

/// Refines the mesh round by round, starting at `n = 2`, until the exact
/// minimum of the partial-sum difference exceeds the tail allowance
/// (`>=` instead of `>` when `weak` is set), or `max_n` is exhausted.
pub fn meshitup(
    s: &Substitution,
    t: &Substitution,
    ambient: &Region,
    max_n: u32,
    weak: bool,
) -> Result<MeshItUpResult, ArrangementError> {
    debug_assert!(max_n >= 2);
    let mut per_level = Vec::new();
    for n in 2..=max_n {
        let ps = build_delta(n, s, t, ambient)?;
        let report = global_min(&ps)?;
        let allowance = alpha(n);
        let clears = if weak {
            report.min_value >= allowance
        } else {
            report.min_value > allowance
        };
        let bound = report.min_value.clone();
        per_level.push(LevelReport { n, alpha: allowance, report });
        if clears {
            return Ok(MeshItUpResult::Found { n, bound, per_level });
        }
    }
    Ok(MeshItUpResult::NotFoundWithin { max_n, per_level })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, region_interior_point, Ineq};
    use crate::expansion::{build_level_diff, IndicatorTerm};

    fn form(a: i64, b: i64, c: i64) -> LinForm {
        LinForm::new(a, b, c)
    }

    fn hp(a: i64, b: i64, c: i64) -> Hyperplane {
        Hyperplane::from_form(&form(a, b, c)).unwrap()
    }

    #[test]
    fn collect_single_term_under_v() {
        let ps = PiecewiseSum {
            ambient: Region::v(),
            terms: vec![IndicatorTerm {
                level: 1,
                sign: TermSign::Plus,
                region: Region::from_ineqs([Ineq::le(form(1, -1, 0)).unwrap()]),
            }],
        };
        let hs = collect_hyperplanes(&ps);
        assert_eq!(hs, vec![hp(1, -1, 0), hp(1, 0, 0), hp(0, 1, -1)].into_iter().collect::<BTreeSet<_>>().into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn collect_delta_1_shares_swapped_hyperplane() {
        let ps = build_delta(1, &Substitution::identity(), &Substitution::swap_xy(), &Region::v())
            .unwrap();
        let hs = collect_hyperplanes(&ps);
        let expected: BTreeSet<Hyperplane> =
            [hp(1, 0, 0), hp(1, -1, 0), hp(1, 0, -1), hp(0, 1, -1)].into_iter().collect();
        assert_eq!(hs.iter().cloned().collect::<BTreeSet<_>>(), expected);
        assert_eq!(hs.len(), 4);
    }

    #[test]
    fn collect_empty_sum_keeps_ambient() {
        let ps = PiecewiseSum { ambient: Region::v(), terms: Vec::new() };
        let hs = collect_hyperplanes(&ps);
        let expected: BTreeSet<Hyperplane> =
            [hp(1, 0, 0), hp(1, -1, 0), hp(0, 1, -1)].into_iter().collect();
        assert_eq!(hs.iter().cloned().collect::<BTreeSet<_>>(), expected);
    }

    #[test]
    fn enumerate_forced_sign() {
        // V forces x < y, so the only face of {x - y} is negative.
        let cells = enumerate_cells(&[hp(1, -1, 0)], &Region::v());
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].signs, vec![Sign::Neg]);
    }

    #[test]
    fn enumerate_three_faces_of_a_cutting_line() {
        let cells = enumerate_cells(&[hp(2, -1, 0)], &Region::v());
        let signs: BTreeSet<Vec<Sign>> = cells.iter().map(|c| c.signs.clone()).collect();
        assert_eq!(
            signs,
            [vec![Sign::Neg], vec![Sign::Zero], vec![Sign::Pos]].into_iter().collect()
        );
        for cell in &cells {
            assert!(Region::v().sat(&cell.rep));
            assert_eq!(sign_vector(&[hp(2, -1, 0)], &cell.rep), cell.signs);
        }
    }

    #[test]
    fn enumerate_pair_with_forced_component() {
        let hs = [hp(1, -1, 0), hp(2, -1, 0)];
        let cells = enumerate_cells(&hs, &Region::v());
        let signs: BTreeSet<Vec<Sign>> = cells.iter().map(|c| c.signs.clone()).collect();
        assert_eq!(
            signs,
            [
                vec![Sign::Neg, Sign::Neg],
                vec![Sign::Neg, Sign::Zero],
                vec![Sign::Neg, Sign::Pos],
            ]
            .into_iter()
            .collect()
        );
    }

    #[test]
    fn representatives_match_recorded_signs() {
        let ps = build_delta(2, &Substitution::identity(), &Substitution::swap_xy(), &Region::v())
            .unwrap();
        let hs = collect_hyperplanes(&ps);
        let cells = enumerate_cells(&hs, &ps.ambient);
        assert!(!cells.is_empty());
        for cell in &cells {
            assert!(ps.ambient.sat(&cell.rep));
            assert_eq!(sign_vector(&hs, &cell.rep), cell.signs);
        }
    }

    #[test]
    fn global_min_of_delta_1_is_constant() {
        let ps = build_delta(1, &Substitution::identity(), &Substitution::swap_xy(), &Region::v())
            .unwrap();
        let report = global_min(&ps).unwrap();
        assert_eq!(report.min_value, rat(1, 6));
    }

    #[test]
    fn global_min_matches_pointwise_samples() {
        let ps = build_delta(2, &Substitution::identity(), &Substitution::swap_xy(), &Region::v())
            .unwrap();
        let report = global_min(&ps).unwrap();
        // The minimum is a lower bound at sampled points.
        for p in [Point::from_ints(4, 5, 6), Point::from_ints(1, 2, 3), Point::from_ints(3, 5, 19)]
        {
            assert!(ps.evaluate(&p).unwrap() >= report.min_value);
        }
        assert_eq!(ps.evaluate(&report.witness).unwrap(), report.min_value);
    }

    #[test]
    fn meshitup_identical_substitutions_never_terminates() {
        let result = meshitup(
            &Substitution::identity(),
            &Substitution::identity(),
            &Region::v(),
            3,
            false,
        )
        .unwrap();
        match result {
            MeshItUpResult::NotFoundWithin { max_n, per_level } => {
                assert_eq!(max_n, 3);
                assert!(per_level.iter().all(|l| l.report.min_value.is_zero()));
            }
            MeshItUpResult::Found { .. } => panic!("identical substitutions give zero forever"),
        }
    }

    #[test]
    fn level_diff_minimum_is_nonpositive_for_swap() {
        // h_2(x,y,z) - h_2(y,x,z) has both signs on V; its minimum is < 0.
        let ps = build_level_diff(
            2,
            &Substitution::identity(),
            &Substitution::swap_xy(),
            &Region::v(),
        )
        .unwrap();
        let report = global_min(&ps).unwrap();
        assert!(report.min_value.is_negative());
        let w = region_interior_point(&Region::empty(), &Region::v()).unwrap();
        assert!(ps.evaluate(&w).unwrap() >= report.min_value);
    }
}
