//! Implementations behind the CLI subcommands. Semantic output goes to
//! stdout and is deterministic for a given configuration regardless of the
//! worker count; progress and timing chatter goes to stderr.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use num::ToPrimitive;

use maxbet_core::algebra::{rat_int, Rat, Region};
use maxbet_core::arrangement::{
    collect_hyperplanes, global_min, meshitup, sign_vector, signs_to_string, MeshItUpResult,
};
use maxbet_core::expansion::{
    alpha, build_delta, build_level_diff, PiecewiseSum, Substitution, TermSign,
};
use maxbet_core::milp::{
    build_milp_full, build_milp_h_diff, certify_decomposed, solve, BnBResult, BnBStatus,
};
use maxbet_core::sim::{estimate_f, sample_v_points, ExactRecursion, SimConfig};

use crate::certificate::{Certificate, PartRecord};
use crate::cli::{CertifyArgs, Claim, ConjectureArgs, HeatmapArgs, Method, MeshitupArgs,
    MinimizeArgs, MinimizeMethod, Objective, SelfcheckArgs, SimulateArgs};
use crate::parse;

pub const EXIT_CERTIFIED: i32 = 0;
pub const EXIT_NOT_CERTIFIED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

/// Substitution pair behind a named claim.
fn claim_pair(claim: Claim, args: &CertifyArgs) -> Result<Vec<(String, Substitution, Substitution)>, String> {
    match claim {
        Claim::LemmaXy => {
            Ok(vec![("lemma-xy".into(), Substitution::identity(), Substitution::swap_xy())])
        }
        Claim::LemmaYz => {
            Ok(vec![("lemma-yz".into(), Substitution::rotate_yzx(), Substitution::swap_zyx())])
        }
        Claim::Theorem1 => Ok(vec![
            ("lemma-xy".into(), Substitution::identity(), Substitution::swap_xy()),
            ("lemma-yz".into(), Substitution::rotate_yzx(), Substitution::swap_zyx()),
        ]),
        Claim::Custom => {
            let s = args.s.as_deref().ok_or("--s is required for a custom claim")?;
            let t = args.t.as_deref().ok_or("--t is required for a custom claim")?;
            let s = parse::parse_substitution(s).map_err(|e| e.to_string())?;
            let t = parse::parse_substitution(t).map_err(|e| e.to_string())?;
            Ok(vec![("custom".into(), s, t)])
        }
    }
}

fn parse_domain(text: Option<&str>) -> Result<Region, String> {
    match text {
        None => Ok(Region::v()),
        Some(text) => parse::parse_region(text).map_err(|e| e.to_string()),
    }
}

fn input_error(message: impl std::fmt::Display) -> Result<i32> {
    eprintln!("error: {}", message);
    Ok(EXIT_INPUT_ERROR)
}

struct PipelineOutcome {
    bound: Rat,
    recombination: Option<Rat>,
    parts: Vec<PartRecord>,
}

fn part_from_bnb(
    name: &str,
    result: &BnBResult,
    model_hyperplanes: &[maxbet_core::arrangement::Hyperplane],
) -> PartRecord {
    let status = match result.status {
        BnBStatus::Optimal => "optimal",
        BnBStatus::Infeasible => "infeasible",
        BnBStatus::BoundOnly => "bound-only",
    };
    PartRecord {
        name: name.into(),
        value: result.value.clone(),
        status: status.into(),
        node_count: Some(result.node_count),
        cell_count: None,
        hyperplane_count: model_hyperplanes.len(),
        witness: result.witness.clone(),
        witness_signs: result
            .witness
            .as_ref()
            .map(|w| signs_to_string(&sign_vector(model_hyperplanes, w))),
    }
}

/// Runs one lower-bound pipeline for `delta_n` over the ambient.
fn run_pipeline(
    method: Method,
    n: u32,
    s: &Substitution,
    t: &Substitution,
    ambient: &Region,
) -> Result<PipelineOutcome> {
    match method {
        Method::Decomposed => {
            let d = certify_decomposed(n, s, t, ambient)?;
            let prev_model = build_milp_full(n - 1, s, t, ambient, false)?;
            let diff_model = build_milp_h_diff(n, s, t, ambient)?;
            let parts = vec![
                part_from_bnb(
                    &format!("delta-{}-shifted-min", n - 1),
                    &d.parts.0,
                    &prev_model.hyperplanes,
                ),
                part_from_bnb(
                    &format!("h-{}-difference-min", n),
                    &d.parts.1,
                    &diff_model.hyperplanes,
                ),
            ];
            Ok(PipelineOutcome {
                bound: &d.bound + alpha(n),
                recombination: Some(d.bound),
                parts,
            })
        }
        Method::Oracle => {
            let ps = build_delta(n, s, t, ambient)?;
            let report = global_min(&ps)?;
            let parts = vec![PartRecord {
                name: format!("delta-{}-min", n),
                value: report.min_value.clone(),
                status: "optimal".into(),
                node_count: None,
                cell_count: Some(report.cell_count),
                hyperplane_count: report.hyperplane_count,
                witness: Some(report.witness.clone()),
                witness_signs: Some(signs_to_string(&report.witness_signs)),
            }];
            Ok(PipelineOutcome { bound: report.min_value, recombination: None, parts })
        }
        Method::Milp => {
            let model = build_milp_full(n, s, t, ambient, false)?;
            let result = solve(&model, None);
            anyhow::ensure!(
                result.status == BnBStatus::Optimal,
                "full MILP did not close: {:?}",
                result.status
            );
            let parts = vec![part_from_bnb(
                &format!("delta-{}-min", n),
                &result,
                &model.hyperplanes,
            )];
            Ok(PipelineOutcome { bound: result.value.clone(), recombination: None, parts })
        }
    }
}

/// Consistency check across methods: the capped-off MILP optimum must equal
/// the oracle minimum exactly, and the decomposed bound can only be weaker.
fn cross_check(n: u32, s: &Substitution, t: &Substitution, ambient: &Region) -> Result<(), String> {
    let oracle = run_pipeline(Method::Oracle, n, s, t, ambient).map_err(|e| e.to_string())?;
    let milp = run_pipeline(Method::Milp, n, s, t, ambient).map_err(|e| e.to_string())?;
    if oracle.bound != milp.bound {
        return Err(format!(
            "oracle minimum {} and MILP optimum {} disagree",
            oracle.bound, milp.bound
        ));
    }
    let decomposed = run_pipeline(Method::Decomposed, n, s, t, ambient).map_err(|e| e.to_string())?;
    if decomposed.bound > oracle.bound {
        return Err(format!(
            "decomposed bound {} exceeds the exact minimum {}",
            decomposed.bound, oracle.bound
        ));
    }
    Ok(())
}

pub fn cmd_certify(args: &CertifyArgs) -> Result<i32> {
    let started = Instant::now();
    let pairs = match claim_pair(args.claim, args) {
        Ok(pairs) => pairs,
        Err(message) => return input_error(message),
    };
    let ambient = match parse_domain(args.domain.as_deref()) {
        Ok(region) => region,
        Err(message) => return input_error(message),
    };
    let n = args.n;
    if n < 2 && args.method == Method::Decomposed {
        return input_error("decomposed certification needs --n >= 2");
    }

    let claim_name = match args.claim {
        Claim::LemmaXy => "lemma-xy",
        Claim::LemmaYz => "lemma-yz",
        Claim::Theorem1 => "theorem-1",
        Claim::Custom => "custom",
    };
    let method_name = match args.method {
        Method::Decomposed => "decomposed",
        Method::Oracle => "oracle",
        Method::Milp => "milp",
    };

    let allowance = alpha(n);
    let mut parts = Vec::new();
    let mut bounds = Vec::new();
    let mut recombination: Option<Rat> = None;
    for (name, s, t) in &pairs {
        if args.cross_check {
            if let Err(diagnostic) = cross_check(n, s, t, &ambient) {
                eprintln!("cross-check failed for {}: {}", name, diagnostic);
                return Ok(EXIT_NOT_CERTIFIED);
            }
            eprintln!("cross-check ok for {}", name);
        }
        let outcome = run_pipeline(args.method, n, s, t, &ambient)?;
        if pairs.len() == 1 {
            recombination = outcome.recombination.clone();
            parts.extend(outcome.parts);
        } else {
            for mut part in outcome.parts {
                part.name = format!("{}/{}", name, part.name);
                parts.push(part);
            }
        }
        bounds.push((name.clone(), outcome.bound, s.to_string(), t.to_string()));
    }

    // The binding bound: for multi-pair claims every pair must clear alpha_n.
    let bound = bounds.iter().map(|(_, b, _, _)| b.clone()).min().expect("at least one pair");
    let certified = bound > allowance;

    println!("claim: {}", claim_name);
    println!("method: {}", method_name);
    println!("n: {}", n);
    for (name, b, _, _) in &bounds {
        println!("bound[{}]: {}", name, b);
    }
    println!("alpha_{}: {}", n, allowance);
    if let Some(r) = &recombination {
        println!("recombination: {}", r);
    }
    println!("certified: {}", certified);

    let (s_text, t_text) = if pairs.len() == 1 {
        (bounds[0].2.clone(), bounds[0].3.clone())
    } else {
        ("per-part".into(), "per-part".into())
    };
    let hyperplane_count = {
        let (_, s, t) = &pairs[0];
        collect_hyperplanes(&build_delta(n, s, t, &ambient)?).len()
    };
    let mut config = format!("certify {} --method {} --n {}", claim_name, method_name, n);
    if let Some(s) = &args.s {
        config.push_str(&format!(" --s '{}'", s));
    }
    if let Some(t) = &args.t {
        config.push_str(&format!(" --t '{}'", t));
    }
    if let Some(domain) = &args.domain {
        config.push_str(&format!(" --domain '{}'", domain));
    }
    let certificate = Certificate {
        claim: claim_name.into(),
        certified,
        n,
        method: method_name.into(),
        s: s_text,
        t: t_text,
        domain: ambient.to_string(),
        alpha_n: allowance,
        bound,
        recombination,
        parts,
        hyperplane_count,
        config,
        wall_time_ms: started.elapsed().as_millis(),
    };
    let path = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.cert", claim_name)));
    if let Err(e) = fs::write(&path, certificate.render()) {
        eprintln!("error: cannot write certificate {}: {}", path.display(), e);
        return Ok(EXIT_INPUT_ERROR);
    }
    eprintln!("certificate written to {} in {:?}", path.display(), started.elapsed());
    Ok(if certified { EXIT_CERTIFIED } else { EXIT_NOT_CERTIFIED })
}

pub fn cmd_meshitup(args: &MeshitupArgs) -> Result<i32> {
    let s = match parse::parse_substitution(&args.s) {
        Ok(s) => s,
        Err(e) => return input_error(e),
    };
    let t = match parse::parse_substitution(&args.t) {
        Ok(t) => t,
        Err(e) => return input_error(e),
    };
    let ambient = match parse_domain(Some(&args.domain)) {
        Ok(region) => region,
        Err(message) => return input_error(message),
    };
    if args.max_n < 2 {
        return input_error("--max-n must be at least 2");
    }
    println!("s: {}", s);
    println!("t: {}", t);
    println!("domain: {}", ambient);
    println!("test: min delta_n {} alpha_n", if args.weak { ">=" } else { ">" });
    let result = meshitup(&s, &t, &ambient, args.max_n, args.weak)?;
    let per_level = match &result {
        MeshItUpResult::Found { per_level, .. } => per_level,
        MeshItUpResult::NotFoundWithin { per_level, .. } => per_level,
    };
    for level in per_level {
        let verdict = {
            let clears = if args.weak {
                level.report.min_value >= level.alpha
            } else {
                level.report.min_value > level.alpha
            };
            if clears {
                "stop"
            } else {
                "continue"
            }
        };
        println!(
            "n={}: min={} alpha={} hyperplanes={} cells={} witness={} verdict={}",
            level.n,
            level.report.min_value,
            level.alpha,
            level.report.hyperplane_count,
            level.report.cell_count,
            level.report.witness,
            verdict
        );
    }
    match result {
        MeshItUpResult::Found { n, bound, .. } => {
            println!("result: n={} bound={}", n, bound);
            Ok(EXIT_CERTIFIED)
        }
        MeshItUpResult::NotFoundWithin { max_n, .. } => {
            println!("result: not-found-within max_n={}", max_n);
            Ok(EXIT_NOT_CERTIFIED)
        }
    }
}

pub fn cmd_minimize(args: &MinimizeArgs) -> Result<i32> {
    let s = match parse::parse_substitution(&args.s) {
        Ok(s) => s,
        Err(e) => return input_error(e),
    };
    let t = match parse::parse_substitution(&args.t) {
        Ok(t) => t,
        Err(e) => return input_error(e),
    };
    let ambient = match parse_domain(Some(&args.domain)) {
        Ok(region) => region,
        Err(message) => return input_error(message),
    };
    if args.n < 1 {
        return input_error("--n must be at least 1");
    }
    let objective = match args.objective {
        Objective::Delta => "delta",
        Objective::LevelDiff => "level-diff",
    };
    println!("objective: {}_{}", objective, args.n);
    println!("s: {}", s);
    println!("t: {}", t);
    match args.method {
        MinimizeMethod::Oracle => {
            let ps = build_piecewise(args.objective, args.n, &s, &t, &ambient)?;
            let report = global_min(&ps)?;
            println!("method: oracle");
            println!("min: {}", report.min_value);
            println!("witness: {}", report.witness);
            println!("witness_signs: {}", signs_to_string(&report.witness_signs));
            println!("hyperplanes: {}", report.hyperplane_count);
            println!("cells: {}", report.cell_count);
        }
        MinimizeMethod::Milp => {
            let model = match args.objective {
                Objective::Delta => build_milp_full(args.n, &s, &t, &ambient, args.cap)?,
                Objective::LevelDiff => build_milp_h_diff(args.n, &s, &t, &ambient)?,
            };
            let result = solve(&model, args.node_budget);
            println!("method: milp");
            println!(
                "status: {}",
                match result.status {
                    BnBStatus::Optimal => "optimal",
                    BnBStatus::Infeasible => "infeasible",
                    BnBStatus::BoundOnly => "bound-only",
                }
            );
            if result.status != BnBStatus::Infeasible {
                println!("value: {}", result.value);
            }
            if let Some(w) = &result.witness {
                println!("witness: {}", w);
            }
            println!("nodes: {}", result.node_count);
            println!("literals: {}", model.literals.len());
            println!("regions: {}", model.regions.len());
        }
    }
    Ok(EXIT_CERTIFIED)
}

fn build_piecewise(
    objective: Objective,
    n: u32,
    s: &Substitution,
    t: &Substitution,
    ambient: &Region,
) -> Result<PiecewiseSum> {
    Ok(match objective {
        Objective::Delta => build_delta(n, s, t, ambient)?,
        Objective::LevelDiff => build_level_diff(n, s, t, ambient)?,
    })
}

pub fn cmd_heatmap(args: &HeatmapArgs) -> Result<i32> {
    if args.total < 6 {
        return input_error("--total must be at least 6 (smallest strict triple is 1+2+3)");
    }
    let started = Instant::now();
    let s = Substitution::identity();
    let t = Substitution::swap_xy();
    let ps = build_delta(args.n, &s, &t, &Region::v())?;
    let allowance = alpha(args.n);

    // Terms with small integer coefficients admit a fast integer
    // satisfaction test at integer lattice points.
    let max_level = ps.terms.iter().map(|t| t.level).max().unwrap_or(0);
    let mut fast_terms: Vec<(i64, Vec<(i128, i128, i128, bool)>)> = Vec::new();
    for term in &ps.terms {
        let weight = 6i64.pow(max_level - term.level)
            * match term.sign {
                TermSign::Plus => 1,
                TermSign::Minus => -1,
            };
        let mut constraints = Vec::new();
        for c in term.region.constraints() {
            let (a, b, cc) = c.form().coeffs();
            let (a, b, cc) = (
                a.to_i128().context("coefficient exceeds the fast path")?,
                b.to_i128().context("coefficient exceeds the fast path")?,
                cc.to_i128().context("coefficient exceeds the fast path")?,
            );
            constraints.push((a, b, cc, c.is_strict()));
        }
        fast_terms.push((weight, constraints));
    }
    let denom = rat_int(6).pow(max_level as i32);

    let mut lattice: Vec<(u64, u64, u64)> = Vec::new();
    for x in 1..=args.total / 3 {
        for y in (x + 1).. {
            let Some(rest) = args.total.checked_sub(x + y) else {
                break;
            };
            if rest <= y {
                break;
            }
            lattice.push((x, y, rest));
        }
    }

    let rows = maxbet_core::exec::map_collect(&lattice, |&(x, y, z)| {
        let (xi, yi, zi) = (x as i128, y as i128, z as i128);
        let mut numer = 0i64;
        for (weight, constraints) in &fast_terms {
            let sat = constraints.iter().all(|&(a, b, c, strict)| {
                let v = a * xi + b * yi + c * zi;
                if strict {
                    v > 0
                } else {
                    v >= 0
                }
            });
            if sat {
                numer += weight;
            }
        }
        let value = Rat::new(num::BigInt::from(numer), num::BigInt::from(1)) / &denom - &allowance;
        let decimal = value.numer().to_f64().unwrap_or(f64::NAN)
            / value.denom().to_f64().unwrap_or(f64::NAN);
        format!("{},{},{},{},{}", x, y, z, value, decimal)
    });

    let mut out = String::from("x,y,z,delta_minus_alpha,delta_minus_alpha_decimal\n");
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    if let Err(e) = fs::write(&args.out, out) {
        eprintln!("error: cannot write {}: {}", args.out.display(), e);
        return Ok(EXIT_INPUT_ERROR);
    }
    eprintln!(
        "wrote {} lattice rows for total={} n={} in {:?}",
        lattice.len(),
        args.total,
        args.n,
        started.elapsed()
    );
    Ok(EXIT_CERTIFIED)
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<i32> {
    if args.x < 1 || args.y < 1 || args.z < 1 {
        return input_error("all three stacks must be positive");
    }
    if args.trials < 1 {
        return input_error("--trials must be at least 1");
    }
    let cfg = SimConfig { seed: args.seed, trials: args.trials, max_rounds: args.max_rounds };
    let est = estimate_f(args.x, args.y, args.z, &cfg);
    let stats = &est.stats;
    let n = stats.trials as f64;
    println!(
        "start: ({}, {}, {}) trials: {} seed: {} max_rounds: {}",
        args.x, args.y, args.z, args.trials, args.seed, args.max_rounds
    );
    println!("estimate_f: {:.6} stderr: {:.6}", est.estimate, est.stderr);
    for (label, freq) in [("loser", &stats.loser_freq), ("winner", &stats.winner_freq)] {
        let fractions: Vec<String> =
            freq.iter().map(|&c| format!("{:.6}", c as f64 / n)).collect();
        println!("{}_freq: p1={} p2={} p3={}", label, fractions[0], fractions[1], fractions[2]);
    }
    println!("censored: {} winner_censored: {}", stats.censored, stats.winner_censored);

    let total = (args.x + args.y + args.z) as f64;
    let expected = args.x as f64 / total;
    let observed = stats.winner_freq[0] as f64 / n;
    let sigma = (expected * (1.0 - expected) / n).sqrt();
    let ok = (observed - expected).abs() <= 3.0 * sigma;
    println!(
        "martingale_check: observed={:.6} expected={:.6} tolerance={:.6} verdict={}",
        observed,
        expected,
        3.0 * sigma,
        if ok { "PASS" } else { "FAIL" }
    );

    let hist: Vec<String> = stats
        .elim_hist_p1
        .iter()
        .take(8)
        .map(|&c| format!("{:.6}", c as f64 / n))
        .collect();
    println!("p1_elimination_by_round: {}", hist.join(" "));
    Ok(if ok { EXIT_CERTIFIED } else { EXIT_NOT_CERTIFIED })
}

pub fn cmd_selfcheck(args: &SelfcheckArgs) -> Result<i32> {
    let started = Instant::now();
    let v = Region::v();
    let pairs = [
        ("xy", Substitution::identity(), Substitution::swap_xy()),
        ("yz", Substitution::rotate_yzx(), Substitution::swap_zyx()),
    ];
    let mut failures = 0u32;
    let mut check = |name: String, ok: bool| {
        println!("check {}: {}", name, if ok { "ok" } else { "FAILED" });
        if !ok {
            failures += 1;
        }
    };

    // Oracle vs MILP exact equality, n <= 3, both substitution pairs.
    for (label, s, t) in &pairs {
        for n in 1..=3u32 {
            let ps = build_delta(n, s, t, &v)?;
            let oracle = global_min(&ps)?;
            let mut model = build_milp_full(n, s, t, &v, false)?;
            if args.inject_fault && *label == "xy" && n == 2 {
                model.negate_region_coefficient(0);
            }
            let solved = solve(&model, None);
            check(
                format!("oracle-vs-milp[{} n={}]", label, n),
                solved.status == BnBStatus::Optimal && solved.value == oracle.min_value,
            );
        }
    }

    // Symbolic evaluation vs the pointwise recursion, exact equality.
    let points = sample_v_points(25, 11);
    let mut recursion = ExactRecursion::new();
    for (label, s, t) in &pairs {
        for n in 1..=3u32 {
            let ps = build_delta(n, s, t, &v)?;
            let ok = points.iter().all(|p| {
                let symbolic = ps.evaluate(p).expect("sampled inside V");
                let (s1, s2, s3) = s.apply(p);
                let (t1, t2, t3) = t.apply(p);
                let pointwise = recursion.partial_sum(n, &[s1, s2, s3])
                    - recursion.partial_sum(n, &[t1, t2, t3]);
                symbolic == pointwise
            });
            check(format!("symbolic-vs-pointwise[{} n={}]", label, n), ok);
        }
    }

    // Scale invariance of the piecewise sum.
    let ps = build_delta(3, &pairs[0].1, &pairs[0].2, &v)?;
    let scales = [maxbet_core::algebra::rat(2, 1), maxbet_core::algebra::rat(1, 3), maxbet_core::algebra::rat(7, 5)];
    let ok = points.iter().take(10).all(|p| {
        let base = ps.evaluate(p).expect("inside V");
        scales.iter().all(|k| ps.evaluate(&p.scale(k)).expect("scaled point stays in V") == base)
    });
    check("scale-invariance[n=3]".into(), ok);

    // Region-count bounds.
    for n in 1..=3u32 {
        let ps = build_delta(n, &pairs[0].1, &pairs[0].2, &v)?;
        let bound = (12 * (6u64.pow(n) - 1)) as f64 / 5.0;
        check(
            format!("region-count[n={}]", n),
            (ps.terms.len() as f64) <= bound,
        );
    }

    eprintln!("selfcheck finished in {:?}", started.elapsed());
    if failures == 0 {
        println!("selfcheck: all checks passed");
        Ok(EXIT_CERTIFIED)
    } else {
        println!("selfcheck: {} check(s) FAILED", failures);
        Ok(EXIT_NOT_CERTIFIED)
    }
}

pub fn cmd_conjecture(args: &ConjectureArgs) -> Result<i32> {
    // f(x,y,z) > f(y,y,z): same engine, t replaces the first stack by y.
    let s = Substitution::identity();
    let t = Substitution::new(
        maxbet_core::algebra::LinForm::y(),
        maxbet_core::algebra::LinForm::y(),
        maxbet_core::algebra::LinForm::z(),
    );
    if args.max_n < 2 {
        return input_error("--max-n must be at least 2");
    }
    eprintln!(
        "note: the conjecture search is known not to terminate through n = 6; \
         cost grows roughly six-fold per round"
    );
    let meshitup_args = MeshitupArgs {
        s: s.to_string(),
        t: t.to_string(),
        domain: "0<x<y<z".into(),
        max_n: args.max_n,
        weak: false,
    };
    cmd_meshitup(&meshitup_args)
}

/// Writes stdout-style lines to a file, used by tests.
#[allow(dead_code)]
pub fn write_lines(path: &Path, lines: &[String]) -> Result<()> {
    let mut f = fs::File::create(path)?;
    for line in lines {
        writeln!(f, "{}", line)?;
    }
    Ok(())
}
