use std::time::Instant;
use maxbet_core::algebra::Region;
use maxbet_core::arrangement::global_min;
use maxbet_core::expansion::{alpha, build_delta, Substitution};
use maxbet_core::milp::{build_milp_full, solve};

fn main() {
    let v = Region::v();
    let id = Substitution::identity();
    let swap = Substitution::swap_xy();
    let yzx = Substitution::rotate_yzx();
    let zyx = Substitution::swap_zyx();

    for (name, s, t) in [("xy", &id, &swap), ("yz", &yzx, &zyx)] {
        let t0 = Instant::now();
        let ps = build_delta(4, s, t, &v).unwrap();
        let built = t0.elapsed();
        let t1 = Instant::now();
        let report = global_min(&ps).unwrap();
        println!(
            "[{name}] delta_4 oracle: terms={} hyps={} cells={} min={} (> alpha4 {}? {}) witness={} (build {:?}, min {:?})",
            ps.terms.len(), report.hyperplane_count, report.cell_count,
            report.min_value, alpha(4), report.min_value > alpha(4), report.witness, built, t1.elapsed()
        );

        let t2 = Instant::now();
        let model = build_milp_full(4, s, t, &v, true).unwrap();
        let res = solve(&model, None);
        println!(
            "[{name}] milp delta_4 cap: lits={} regions={} status={:?} value={} nodes={} ({:?})",
            model.literals.len(), model.regions.len(), res.status, res.value, res.node_count, t2.elapsed()
        );
    }
}
