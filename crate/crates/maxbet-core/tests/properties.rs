//! Property tests for the exact algebra layer: arithmetic exactness,
//! feasibility soundness and completeness, homogeneity, and conjunction
//! semantics.

use maxbet_core::algebra::{
    rat_int, region_feasible, region_interior_point, Ineq, LinForm, Point, Rat, Region, Rel,
};
use num::{BigInt, Signed, Zero};
use proptest::prelude::*;

fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-1000i64..1000, 1i64..200).prop_map(|(n, d)| Rat::new(BigInt::from(n), BigInt::from(d)))
}

fn form_strategy() -> impl Strategy<Value = LinForm> {
    (-4i64..=4, -4i64..=4, -4i64..=4)
        .prop_filter("nonzero form", |(a, b, c)| (*a, *b, *c) != (0, 0, 0))
        .prop_map(|(a, b, c)| LinForm::new(a, b, c))
}

fn ineq_strategy() -> impl Strategy<Value = Ineq> {
    (form_strategy(), prop::bool::ANY).prop_map(|(form, strict)| {
        Ineq::new(form, if strict { Rel::Gt } else { Rel::Ge }).unwrap()
    })
}

fn region_strategy(max_constraints: usize) -> impl Strategy<Value = Region> {
    prop::collection::vec(ineq_strategy(), 0..=max_constraints).prop_map(Region::from_ineqs)
}

proptest! {
    #[test]
    fn addition_and_multiplication_are_exact(p in rat_strategy(), q in rat_strategy()) {
        prop_assert_eq!((&p + &q) - &q, p.clone());
        if !q.is_zero() {
            prop_assert_eq!((&p * &q) / &q, p);
        }
    }

    #[test]
    fn feasibility_soundness(r in region_strategy(5)) {
        // Whenever a region is feasible, the returned point satisfies every
        // constraint, strictness included.
        if let Some(w) = region_interior_point(&r, &Region::v()) {
            prop_assert!(r.sat(&w), "witness violates region {}", r);
            prop_assert!(Region::v().sat(&w), "witness violates ambient");
        }
    }

    #[test]
    fn witnesses_scale_positively(r in region_strategy(4), num in 1i64..50, den in 1i64..50) {
        // All constraints compare against zero, so satisfaction is invariant
        // under positive scaling of the witness.
        if let Some(w) = region_interior_point(&r, &Region::v()) {
            let k = Rat::new(BigInt::from(num), BigInt::from(den));
            let scaled = w.scale(&k);
            prop_assert!(r.sat(&scaled) && Region::v().sat(&scaled));
        }
    }

    #[test]
    fn intersection_is_conjunction(
        r1 in region_strategy(3),
        r2 in region_strategy(3),
        x in rat_strategy(),
        y in rat_strategy(),
        z in rat_strategy(),
    ) {
        let p = Point::new(x, y, z);
        let both = r1.intersect(&r2);
        prop_assert_eq!(both.sat(&p), r1.sat(&p) && r2.sat(&p));
    }

    #[test]
    fn evaluation_is_linear(f in form_strategy(), g in form_strategy(), x in rat_strategy(), y in rat_strategy(), z in rat_strategy()) {
        let p = Point::new(x, y, z);
        prop_assert_eq!(f.add(&g).eval(&p), f.eval(&p) + g.eval(&p));
        prop_assert_eq!(f.neg().eval(&p), -f.eval(&p));
    }
}

/// Exhaustive sign-pattern check against a dense lattice of the simplex
/// slice: every pattern the solver calls feasible must have a verifiable
/// witness, every pattern it calls infeasible must have no lattice point,
/// and every lattice point's own pattern must be called feasible.
#[test]
fn sign_patterns_agree_with_lattice_search() {
    let hyperplanes = [
        LinForm::new(1, -1, 0),  // x - y
        LinForm::new(2, -1, 0),  // 2x - y
        LinForm::new(1, 1, -1),  // x + y - z
        LinForm::new(3, 0, -1),  // 3x - z
    ];
    let v = Region::v();

    // Lattice of V with x + y + z = 60 (denominator irrelevant: everything
    // is homogeneous).
    let mut lattice: Vec<Point> = Vec::new();
    for i in 1i64..60 {
        for j in (i + 1)..60 {
            let k = 60 - i - j;
            if k > j {
                lattice.push(Point::from_ints(i, j, k));
            }
        }
    }

    let signs_at = |p: &Point| -> Vec<i8> {
        hyperplanes
            .iter()
            .map(|h| {
                let value = h.eval(p);
                if value.is_positive() {
                    1
                } else if value.is_negative() {
                    -1
                } else {
                    0
                }
            })
            .collect()
    };

    let pattern_region = |pattern: &[i8]| {
        let mut region = Region::empty();
        for (h, &s) in hyperplanes.iter().zip(pattern) {
            match s {
                1 => region.insert(Ineq::gt(h.clone()).unwrap()),
                -1 => region.insert(Ineq::lt(h.clone()).unwrap()),
                _ => {
                    region.insert(Ineq::ge(h.clone()).unwrap());
                    region.insert(Ineq::le(h.clone()).unwrap());
                }
            }
        }
        region
    };

    let mut feasible_patterns = 0;
    for code in 0..3u32.pow(4) {
        let mut pattern = Vec::new();
        let mut rest = code;
        for _ in 0..4 {
            pattern.push([-1i8, 0, 1][(rest % 3) as usize]);
            rest /= 3;
        }
        let region = pattern_region(&pattern);
        let claimed = region_interior_point(&region, &v);
        let lattice_hit = lattice.iter().find(|p| signs_at(p) == pattern);
        match claimed {
            Some(w) => {
                feasible_patterns += 1;
                assert!(region.sat(&w) && v.sat(&w), "unsound witness for {pattern:?}");
                assert_eq!(signs_at(&w), pattern, "witness realizes a different pattern");
            }
            None => {
                assert!(
                    lattice_hit.is_none(),
                    "pattern {pattern:?} realized at {} but claimed infeasible",
                    lattice_hit.unwrap()
                );
            }
        }
    }
    assert!(feasible_patterns > 5, "the arrangement should have many realizable patterns");

    // Coverage direction: each lattice point's own pattern is feasible.
    for p in lattice.iter().step_by(17) {
        let region = pattern_region(&signs_at(p));
        assert!(region_feasible(&region, &v), "pattern of {} rejected", p);
    }
}

#[test]
fn interior_point_is_deterministic() {
    let r = Region::from_ineqs([Ineq::le(LinForm::new(3, -1, 0)).unwrap()]);
    let a = region_interior_point(&r, &Region::v()).unwrap();
    let b = region_interior_point(&r, &Region::v()).unwrap();
    assert_eq!(a, b);
    assert_eq!(rat_int(0), Rat::zero());
}
