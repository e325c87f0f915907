//! Exact rational arithmetic, homogeneous linear forms over (x, y, z),
//! inequalities against zero, and conjunctions of those (regions).
//!
//! Every predicate here is decided exactly. Feasibility of a region is a
//! Fourier-Motzkin elimination over normalization slices of the cone: all
//! constraints are homogeneous, so a nonzero satisfying point can be scaled
//! by a positive rational onto one of finitely many affine slices, and each
//! slice turns the question into a small inhomogeneous system in at most two
//! free variables.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational; always in lowest terms with a positive
/// denominator (maintained by the underlying `Ratio` representation).
pub type Rat = BigRational;

/// Shorthand for a small rational constant.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer-valued rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    /// The all-zero linear form cannot be used in an inequality: `0 > 0` and
    /// `0 >= 0` are constants, not constraints.
    #[error("the zero form cannot appear in an inequality")]
    ZeroForm,
}

/// A homogeneous integer linear form `a*x + b*y + c*z`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinForm {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl LinForm {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        LinForm { a: a.into(), b: b.into(), c: c.into() }
    }

    /// The form `x`.
    pub fn x() -> Self {
        LinForm::new(1, 0, 0)
    }

    /// The form `y`.
    pub fn y() -> Self {
        LinForm::new(0, 1, 0)
    }

    /// The form `z`.
    pub fn z() -> Self {
        LinForm::new(0, 0, 1)
    }

    pub fn coeffs(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, p: &Point) -> Rat {
        Rat::from(self.a.clone()) * &p.x
            + Rat::from(self.b.clone()) * &p.y
            + Rat::from(self.c.clone()) * &p.z
    }

    pub fn add(&self, other: &LinForm) -> LinForm {
        LinForm::new(&self.a + &other.a, &self.b + &other.b, &self.c + &other.c)
    }

    pub fn sub(&self, other: &LinForm) -> LinForm {
        LinForm::new(&self.a - &other.a, &self.b - &other.b, &self.c - &other.c)
    }

    pub fn neg(&self) -> LinForm {
        LinForm::new(-&self.a, -&self.b, -&self.c)
    }

    pub fn double(&self) -> LinForm {
        LinForm::new(&self.a * 2, &self.b * 2, &self.c * 2)
    }

    /// Divides the coefficients by their (positive) gcd. The zero form is
    /// returned unchanged.
    pub fn reduced(&self) -> LinForm {
        let g = self.a.gcd(&self.b).gcd(&self.c);
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        LinForm::new(&self.a / &g, &self.b / &g, &self.c / &g)
    }

    /// Canonical representative of the hyperplane `{self = 0}`: gcd-reduced
    /// with the first nonzero coefficient positive. Returns the canonical
    /// form together with the orientation of `self` relative to it (+1 when
    /// `self` is a positive multiple, -1 otherwise).
    pub fn canonical(&self) -> (LinForm, i8) {
        let r = self.reduced();
        let lead = [&r.a, &r.b, &r.c].into_iter().find(|v| !v.is_zero());
        match lead {
            Some(v) if v.is_negative() => (r.neg(), -1),
            _ => (r, 1),
        }
    }
}

impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (coef, var) in [(&self.a, "x"), (&self.b, "y"), (&self.c, "z")] {
            if coef.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " {} ", if coef.is_negative() { "-" } else { "+" })?;
            } else if coef.is_negative() {
                write!(f, "-")?;
            }
            let abs = coef.abs();
            if !abs.is_one() {
                write!(f, "{}", abs)?;
            }
            write!(f, "{}", var)?;
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Comparison of a form against zero. Forms compared with `<=` or `<` are
/// stored negated, so only these two relations exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rel {
    /// `form >= 0`
    Ge,
    /// `form > 0`
    Gt,
}

/// A normalized homogeneous inequality `form rel 0`.
///
/// Normalization divides the coefficients by their gcd and keeps the
/// orientation; applying it twice is the identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ineq {
    form: LinForm,
    rel: Rel,
}

impl Ineq {
    pub fn new(form: LinForm, rel: Rel) -> Result<Self, AlgebraError> {
        if form.is_zero() {
            return Err(AlgebraError::ZeroForm);
        }
        Ok(Ineq { form: form.reduced(), rel })
    }

    /// `form >= 0`
    pub fn ge(form: LinForm) -> Result<Self, AlgebraError> {
        Ineq::new(form, Rel::Ge)
    }

    /// `form > 0`
    pub fn gt(form: LinForm) -> Result<Self, AlgebraError> {
        Ineq::new(form, Rel::Gt)
    }

    /// `form <= 0`, stored as `-form >= 0`.
    pub fn le(form: LinForm) -> Result<Self, AlgebraError> {
        Ineq::new(form.neg(), Rel::Ge)
    }

    /// `form < 0`, stored as `-form > 0`.
    pub fn lt(form: LinForm) -> Result<Self, AlgebraError> {
        Ineq::new(form.neg(), Rel::Gt)
    }

    pub fn form(&self) -> &LinForm {
        &self.form
    }

    pub fn rel(&self) -> Rel {
        self.rel
    }

    pub fn is_strict(&self) -> bool {
        self.rel == Rel::Gt
    }

    /// The negation: `not (f >= 0)` is `-f > 0`, `not (f > 0)` is `-f >= 0`.
    pub fn negated(&self) -> Ineq {
        let rel = match self.rel {
            Rel::Ge => Rel::Gt,
            Rel::Gt => Rel::Ge,
        };
        Ineq { form: self.form.neg(), rel }
    }

    /// Exact satisfaction test at a point.
    pub fn sat(&self, p: &Point) -> bool {
        let v = self.form.eval(p);
        match self.rel {
            Rel::Ge => !v.is_negative(),
            Rel::Gt => v.is_positive(),
        }
    }
}

impl fmt::Display for Ineq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.rel {
            Rel::Ge => ">=",
            Rel::Gt => ">",
        };
        write!(f, "{} {} 0", self.form, op)
    }
}

/// A rational point of the ambient space.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
    pub z: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat, z: Rat) -> Self {
        Point { x, y, z }
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
        Point::new(rat_int(x), rat_int(y), rat_int(z))
    }

    pub fn origin() -> Self {
        Point::new(Rat::zero(), Rat::zero(), Rat::zero())
    }

    /// Componentwise scaling by a rational factor.
    pub fn scale(&self, k: &Rat) -> Point {
        Point::new(&self.x * k, &self.y * k, &self.z * k)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// A conjunction of inequalities. Constraints are deduplicated by their
/// normalized (form, relation) pair; a point satisfies the region iff it
/// satisfies every constraint.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Region {
    constraints: std::collections::BTreeSet<Ineq>,
}

impl Region {
    pub fn empty() -> Self {
        Region::default()
    }

    pub fn from_ineqs(ineqs: impl IntoIterator<Item = Ineq>) -> Self {
        Region { constraints: ineqs.into_iter().collect() }
    }

    /// The ambient domain `V = {0 < x < y < z}`.
    pub fn v() -> Self {
        Region::from_ineqs([
            Ineq::gt(LinForm::x()).unwrap(),
            Ineq::gt(LinForm::y().sub(&LinForm::x())).unwrap(),
            Ineq::gt(LinForm::z().sub(&LinForm::y())).unwrap(),
        ])
    }

    pub fn insert(&mut self, ineq: Ineq) {
        self.constraints.insert(ineq);
    }

    pub fn constraints(&self) -> impl Iterator<Item = &Ineq> + Clone {
        self.constraints.iter()
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// Constraint-set union; the result is satisfied exactly by points
    /// satisfying both operands.
    pub fn intersect(&self, other: &Region) -> Region {
        let mut constraints = self.constraints.clone();
        constraints.extend(other.constraints.iter().cloned());
        Region { constraints }
    }

    pub fn sat(&self, p: &Point) -> bool {
        self.constraints.iter().all(|c| c.sat(p))
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.constraints.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, "}}")
    }
}

/// Exact feasibility of `r` within `ambient`: true iff some point satisfies
/// every constraint of both.
pub fn region_feasible(r: &Region, ambient: &Region) -> bool {
    region_interior_point(r, ambient).is_some()
}

/// Deterministic exact witness for `r` within `ambient`, or `None` iff the
/// conjunction is infeasible. Strict constraints are satisfied strictly.
pub fn region_interior_point(r: &Region, ambient: &Region) -> Option<Point> {
    feasible_point(r.constraints().chain(ambient.constraints()))
}

/// True iff `ineq` holds at every point of `ambient`.
pub fn implied_by(ineq: &Ineq, ambient: &Region) -> bool {
    let negated = Region::from_ineqs([ineq.negated()]);
    !region_feasible(&negated, ambient)
}

// ---------------------------------------------------------------------------
// Fourier-Motzkin over normalization slices.
//
// A homogeneous system has a nonzero solution iff it has one on a slice
// where either x+y+z = +-1, or x+y+z = 0 and x = +-1, or x = 0 and y = +-1
// (positive scaling moves any nonzero point onto exactly one of these).
// The remaining candidate is the origin, which satisfies a system iff the
// system has no strict constraint.
// ---------------------------------------------------------------------------

/// Affine parameterization of a slice: `(x,y,z) = base + sum_k t_k * col_k`.
pub(crate) struct Slice {
    pub(crate) base: [i64; 3],
    pub(crate) cols: &'static [[i64; 3]],
}

pub(crate) const SLICES: [Slice; 6] = [
    // x + y + z = 1
    Slice { base: [0, 0, 1], cols: &[[1, 0, -1], [0, 1, -1]] },
    // x + y + z = -1
    Slice { base: [0, 0, -1], cols: &[[1, 0, -1], [0, 1, -1]] },
    // x + y + z = 0, x = 1
    Slice { base: [1, 0, -1], cols: &[[0, 1, -1]] },
    // x + y + z = 0, x = -1
    Slice { base: [-1, 0, 1], cols: &[[0, 1, -1]] },
    // x = 0, y = 1, z = -1
    Slice { base: [0, 1, -1], cols: &[] },
    // x = 0, y = -1, z = 1
    Slice { base: [0, -1, 1], cols: &[] },
];

/// One inequality row in slice coordinates: `sum coeffs[k]*t_k + cst (>|>=) 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Row {
    coeffs: Vec<BigInt>,
    cst: BigInt,
    strict: bool,
}

impl Row {
    /// Scale by the positive gcd of all entries so duplicates collide.
    fn normalized(mut self) -> Row {
        let mut g = self.cst.abs();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        if !g.is_zero() && !g.is_one() {
            for c in &mut self.coeffs {
                *c /= &g;
            }
            self.cst /= &g;
        }
        self
    }
}

/// Deduplicate rows, keeping the strict version when both relations occur.
/// Returns `None` if a trivially false row (`0 > 0` or `k (>|>=) 0` with bad
/// `k`) is present.
fn clean_rows(rows: Vec<Row>) -> Option<Vec<Row>> {
    let mut dedup: BTreeMap<(Vec<BigInt>, BigInt), bool> = BTreeMap::new();
    for row in rows {
        let row = row.normalized();
        if row.coeffs.iter().all(|c| c.is_zero()) {
            let ok = if row.strict { row.cst.is_positive() } else { !row.cst.is_negative() };
            if !ok {
                return None;
            }
            continue;
        }
        let entry = dedup.entry((row.coeffs, row.cst)).or_insert(false);
        *entry |= row.strict;
    }
    Some(
        dedup
            .into_iter()
            .map(|((coeffs, cst), strict)| Row { coeffs, cst, strict })
            .collect(),
    )
}

/// Lower/upper bound bookkeeping for a single variable. `bound` is the value,
/// `strict` whether the variable must differ from it.
#[derive(Debug, Clone)]
struct Bound {
    value: Rat,
    strict: bool,
}

fn tighten_lower(current: &mut Option<Bound>, candidate: Bound) {
    let replace = match current {
        None => true,
        Some(b) => candidate.value > b.value || (candidate.value == b.value && candidate.strict),
    };
    if replace {
        *current = Some(candidate);
    }
}

fn tighten_upper(current: &mut Option<Bound>, candidate: Bound) {
    let replace = match current {
        None => true,
        Some(b) => candidate.value < b.value || (candidate.value == b.value && candidate.strict),
    };
    if replace {
        *current = Some(candidate);
    }
}

/// Deterministic pick inside an interval: midpoint when both ends are finite,
/// one unit inside a half line, zero on the full line, the endpoint itself
/// when the interval degenerates to a point.
fn pick_in_interval(lo: &Option<Bound>, hi: &Option<Bound>) -> Option<Rat> {
    match (lo, hi) {
        (None, None) => Some(Rat::zero()),
        (Some(l), None) => Some(&l.value + Rat::one()),
        (None, Some(u)) => Some(&u.value - Rat::one()),
        (Some(l), Some(u)) => {
            if l.value < u.value {
                Some((&l.value + &u.value) / rat_int(2))
            } else if l.value == u.value && !l.strict && !u.strict {
                Some(l.value.clone())
            } else {
                None
            }
        }
    }
}

/// Solve a system of rows over one free variable; rows must have exactly one
/// coefficient column.
fn solve_1d(rows: &[Row]) -> Option<Rat> {
    let mut lo: Option<Bound> = None;
    let mut hi: Option<Bound> = None;
    for row in rows {
        let c = &row.coeffs[0];
        debug_assert!(!c.is_zero());
        let bound = Bound {
            value: -Rat::new(row.cst.clone(), BigInt::one()) / Rat::from(c.clone()),
            strict: row.strict,
        };
        if c.is_positive() {
            tighten_lower(&mut lo, bound);
        } else {
            tighten_upper(&mut hi, bound);
        }
    }
    pick_in_interval(&lo, &hi)
}

/// Eliminate the first variable of a two-variable system, producing rows in
/// the remaining variable.
fn eliminate_first(rows: &[Row]) -> Vec<Row> {
    let mut lowers = Vec::new();
    let mut uppers = Vec::new();
    let mut rest = Vec::new();
    for row in rows {
        let c0 = &row.coeffs[0];
        if c0.is_positive() {
            lowers.push(row);
        } else if c0.is_negative() {
            uppers.push(row);
        } else {
            rest.push(Row {
                coeffs: vec![row.coeffs[1].clone()],
                cst: row.cst.clone(),
                strict: row.strict,
            });
        }
    }
    for lower in &lowers {
        for upper in &uppers {
            // (-u0) * lower + l0 * upper cancels the first variable; both
            // multipliers are positive so the direction is preserved.
            let lm = -&upper.coeffs[0];
            let um = lower.coeffs[0].clone();
            rest.push(Row {
                coeffs: vec![&lower.coeffs[1] * &lm + &upper.coeffs[1] * &um],
                cst: &lower.cst * &lm + &upper.cst * &um,
                strict: lower.strict || upper.strict,
            });
        }
    }
    rest
}

/// Solve the slice-restricted system, returning values of the free variables.
fn solve_slice(rows: Vec<Row>) -> Option<Vec<Rat>> {
    let rows = clean_rows(rows)?;
    let nfree = rows.first().map_or(0, |r| r.coeffs.len());
    match nfree {
        0 => Some(Vec::new()),
        1 => {
            let one_d = clean_rows(rows)?;
            solve_1d(&one_d).map(|t| vec![t])
        }
        2 => {
            let reduced = clean_rows(eliminate_first(&rows))?;
            let t1 = if reduced.is_empty() { Rat::zero() } else { solve_1d(&reduced)? };
            // Back-substitute t1 and bound the first variable.
            let mut lo: Option<Bound> = None;
            let mut hi: Option<Bound> = None;
            for row in &rows {
                let c0 = &row.coeffs[0];
                if c0.is_zero() {
                    continue;
                }
                let inner = Rat::from(row.coeffs[1].clone()) * &t1 + Rat::from(row.cst.clone());
                let bound = Bound { value: -inner / Rat::from(c0.clone()), strict: row.strict };
                if c0.is_positive() {
                    tighten_lower(&mut lo, bound);
                } else {
                    tighten_upper(&mut hi, bound);
                }
            }
            let t0 = pick_in_interval(&lo, &hi)?;
            Some(vec![t0, t1])
        }
        _ => unreachable!("slices have at most two free variables"),
    }
}

pub(crate) fn slice_point(slice: &Slice, t: &[Rat]) -> Point {
    let mut coords = [Rat::zero(), Rat::zero(), Rat::zero()];
    for (i, coord) in coords.iter_mut().enumerate() {
        let mut v = rat_int(slice.base[i]);
        for (k, tk) in t.iter().enumerate() {
            v += rat_int(slice.cols[k][i]) * tk;
        }
        *coord = v;
    }
    Point::new(coords[0].clone(), coords[1].clone(), coords[2].clone())
}

/// Restriction of a form to slice coordinates: per-variable coefficients and
/// the constant term.
pub(crate) fn restrict_form(form: &LinForm, slice: &Slice) -> (Vec<BigInt>, BigInt) {
    let (a, b, c) = form.coeffs();
    let dot = |v: &[i64; 3]| a * v[0] + b * v[1] + c * v[2];
    (slice.cols.iter().map(|col| dot(col)).collect(), dot(&slice.base))
}

fn row_for_slice(ineq: &Ineq, slice: &Slice) -> Row {
    let (coeffs, cst) = restrict_form(ineq.form(), slice);
    Row { coeffs, cst, strict: ineq.is_strict() }
}

/// Deterministic point of `constraints` restricted to one slice, in slice
/// coordinates, or `None` if the restriction is infeasible.
pub(crate) fn seed_on_slice<'a>(
    constraints: impl Iterator<Item = &'a Ineq>,
    slice: &Slice,
) -> Option<Vec<Rat>> {
    solve_slice(constraints.map(|iq| row_for_slice(iq, slice)).collect())
}

/// Core exact feasibility query over an iterator of homogeneous constraints.
/// Deterministic: slices are tried in a fixed order and each pick is a fixed
/// function of the interval bounds.
pub(crate) fn feasible_point<'a>(
    constraints: impl Iterator<Item = &'a Ineq> + Clone,
) -> Option<Point> {
    for slice in &SLICES {
        let rows: Vec<Row> = constraints.clone().map(|iq| row_for_slice(iq, slice)).collect();
        if let Some(t) = solve_slice(rows) {
            let p = slice_point(slice, &t);
            debug_assert!(constraints.clone().all(|iq| iq.sat(&p)), "witness must satisfy system");
            return Some(p);
        }
    }
    if constraints.clone().all(|iq| !iq.is_strict()) {
        return Some(Point::origin());
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(a: i64, b: i64, c: i64) -> LinForm {
        LinForm::new(a, b, c)
    }

    #[test]
    fn eval_form_examples() {
        let p = Point::from_ints(4, 5, 6);
        assert_eq!(f(1, -1, 0).eval(&p), rat_int(-1));
        assert_eq!(f(0, 0, 0).eval(&Point::from_ints(1, 2, 3)), rat_int(0));
        assert_eq!(f(2, 1, -1).eval(&p), rat_int(7));
    }

    #[test]
    fn zero_form_rejected() {
        assert_eq!(Ineq::gt(f(0, 0, 0)), Err(AlgebraError::ZeroForm));
    }

    #[test]
    fn normalization_is_idempotent() {
        let iq = Ineq::ge(f(4, -6, 2)).unwrap();
        assert_eq!(iq.form(), &f(2, -3, 1));
        let again = Ineq::new(iq.form().clone(), iq.rel()).unwrap();
        assert_eq!(iq, again);
    }

    #[test]
    fn canonical_orientation() {
        let (h, orient) = f(-2, 2, 0).canonical();
        assert_eq!(h, f(1, -1, 0));
        assert_eq!(orient, -1);
        let (h2, o2) = f(0, 3, -6).canonical();
        assert_eq!(h2, f(0, 1, -2));
        assert_eq!(o2, 1);
    }

    #[test]
    fn feasible_contradicts_ambient() {
        // x - y > 0 contradicts x < y in V.
        let r = Region::from_ineqs([Ineq::gt(f(1, -1, 0)).unwrap()]);
        assert!(!region_feasible(&r, &Region::v()));
    }

    #[test]
    fn feasible_with_witness() {
        // x <= z - y, satisfied e.g. at (1, 2, 4).
        let r = Region::from_ineqs([Ineq::le(f(1, 1, -1)).unwrap()]);
        assert!(region_feasible(&r, &Region::v()));
        let w = region_interior_point(&r, &Region::v()).unwrap();
        assert!(r.sat(&w) && Region::v().sat(&w));
        let witness = Point::from_ints(1, 2, 4);
        assert!(r.sat(&witness) && Region::v().sat(&witness));
    }

    #[test]
    fn contradictory_pair_infeasible() {
        let r = Region::from_ineqs([
            Ineq::ge(f(1, -1, 0)).unwrap(), // x - y >= 0
            Ineq::gt(f(-1, 1, 0)).unwrap(), // y - x > 0
        ]);
        assert!(!region_feasible(&r, &Region::empty()));
    }

    #[test]
    fn interior_point_examples() {
        let p = region_interior_point(&Region::empty(), &Region::v()).unwrap();
        assert!(Region::v().sat(&p));

        let infeasible = Region::from_ineqs([Ineq::gt(f(1, -1, 0)).unwrap()]);
        assert_eq!(region_interior_point(&infeasible, &Region::v()), None);

        // 3x <= y
        let r = Region::from_ineqs([Ineq::le(f(3, -1, 0)).unwrap()]);
        let w = region_interior_point(&r, &Region::v()).unwrap();
        assert!(r.sat(&w) && Region::v().sat(&w));
    }

    #[test]
    fn intersect_dedups_and_preserves_conjunction() {
        let a = Region::from_ineqs([Ineq::gt(f(1, -1, 0)).unwrap()]);
        let same = a.intersect(&a);
        assert_eq!(same.len(), 1);

        let v = Region::v();
        assert_eq!(Region::empty().intersect(&v), v);

        // x <= y and y <= x: feasible only on the boundary x = y.
        let both = Region::from_ineqs([
            Ineq::le(f(1, -1, 0)).unwrap(),
            Ineq::le(f(-1, 1, 0)).unwrap(),
        ]);
        assert_eq!(both.len(), 2);
        let w = region_interior_point(&both, &Region::empty()).unwrap();
        assert_eq!(w.x, w.y);
    }

    #[test]
    fn boundary_point_respects_weak_vs_strict() {
        // x = y exactly, plus strict z - y > 0: witness must have x == y < z.
        let r = Region::from_ineqs([
            Ineq::ge(f(1, -1, 0)).unwrap(),
            Ineq::ge(f(-1, 1, 0)).unwrap(),
            Ineq::gt(f(0, -1, 1)).unwrap(),
        ]);
        let w = region_interior_point(&r, &Region::empty()).unwrap();
        assert_eq!(w.x, w.y);
        assert!(w.z > w.y);
    }

    #[test]
    fn cone_outside_positive_sum_slice() {
        // All-negative orthant: no point with x+y+z = 1, but feasible.
        let r = Region::from_ineqs([
            Ineq::lt(f(1, 0, 0)).unwrap(),
            Ineq::lt(f(0, 1, 0)).unwrap(),
            Ineq::lt(f(0, 0, 1)).unwrap(),
        ]);
        let w = region_interior_point(&r, &Region::empty()).unwrap();
        assert!(w.x.is_negative() && w.y.is_negative() && w.z.is_negative());
    }

    #[test]
    fn origin_only_cone() {
        // x = 0, y = 0, z = 0 forced by weak constraints.
        let r = Region::from_ineqs([
            Ineq::ge(f(1, 0, 0)).unwrap(),
            Ineq::le(f(1, 0, 0)).unwrap(),
            Ineq::ge(f(0, 1, 0)).unwrap(),
            Ineq::le(f(0, 1, 0)).unwrap(),
            Ineq::ge(f(0, 0, 1)).unwrap(),
            Ineq::le(f(0, 0, 1)).unwrap(),
        ]);
        assert_eq!(region_interior_point(&r, &Region::empty()), Some(Point::origin()));
        // Adding a strict constraint makes it infeasible.
        let mut strict = r.clone();
        strict.insert(Ineq::gt(f(1, 0, 0)).unwrap());
        assert!(!region_feasible(&strict, &Region::empty()));
    }

    #[test]
    fn implication_check() {
        let v = Region::v();
        assert!(implied_by(&Ineq::gt(f(0, 1, 0)).unwrap(), &v)); // y > 0
        assert!(implied_by(&Ineq::gt(f(0, 0, 1)).unwrap(), &v)); // z > 0
        assert!(implied_by(&Ineq::gt(f(-1, 0, 1)).unwrap(), &v)); // z - x > 0
        assert!(!implied_by(&Ineq::ge(f(-2, 1, 0)).unwrap(), &v)); // y >= 2x
    }
}
