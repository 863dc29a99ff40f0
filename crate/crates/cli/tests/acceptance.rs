//! Acceptance suite: one line per criterion, nonzero exit on any failure.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use transport_cli::format::{parse_instance, serialize_instance};
use transport_cli::{EXIT_INPUT, EXIT_OK, EXIT_PRECONDITION, EXIT_VIOLATED};
use transport_core::hungarian::{
    self, aggregate_assignment_solution, delta_adjust, expand_to_assignment, reduce_matrix,
    solve_assignment, LineCover, PinnedCover, SolveOptions, DEFAULT_EXPANSION_CAP,
};
use transport_core::nwcorner::{self, MongeMode, Shape};
use transport_core::oracle::{
    enumerate_assignment, enumerate_optimum, enumerate_optimum_with, OracleLimits,
};
use transport_core::sampling::{
    random_feasible_plan, random_integer_matrix, random_marginals, random_sorted_rationals,
};
use transport_core::{int, DualCertificate, Matrix, Rational, TransportInstance, TransportPlan};

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn example() -> TransportInstance {
    TransportInstance::new(
        Matrix::from_i64(3, 4, &[10, 7, 3, 6, 1, 6, 8, 3, 7, 4, 5, 3]),
        [3, 5, 7].map(int).to_vec(),
        [3, 2, 6, 4].map(int).to_vec(),
    )
    .unwrap()
}

fn hand_pins() -> SolveOptions {
    SolveOptions {
        pinned_covers: vec![
            PinnedCover {
                rows: vec![0],
                cols: vec![0, 1, 3],
            },
            PinnedCover {
                rows: vec![0, 2],
                cols: vec![0],
            },
        ],
    }
}

fn random_instance(rng: &mut StdRng, cost: Matrix, eta: u64) -> TransportInstance {
    let supply = random_marginals(rng, cost.rows(), eta);
    let demand = random_marginals(rng, cost.cols(), eta);
    TransportInstance::new(cost, supply, demand).unwrap()
}

fn random_general(rng: &mut StdRng, max_dim: usize, max_eta: u64) -> TransportInstance {
    let (m, n) = (rng.gen_range(1..=max_dim), rng.gen_range(1..=max_dim));
    let cost = random_integer_matrix(rng, m, n, -5, 9);
    let eta = rng.gen_range(1..=max_eta);
    random_instance(rng, cost, eta)
}

const SHAPES: [Shape; 3] = [Shape::Square, Shape::Abs, Shape::PositivePart];

fn convex_diff_instances() -> Vec<TransportInstance> {
    let mut rng = StdRng::seed_from_u64(0x3a11);
    (0..200)
        .map(|k| {
            let (m, n) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            let x = random_sorted_rationals(&mut rng, m, 6, 3);
            let y = random_sorted_rationals(&mut rng, n, 6, 3);
            let shape = SHAPES[k % 3];
            let cost = nwcorner::convex_diff_cost(&x, &y, |t| shape.eval(t)).unwrap();
            let eta = rng.gen_range(1..=10);
            random_instance(&mut rng, cost, eta)
        })
        .collect()
}

fn expansion_instances() -> Vec<TransportInstance> {
    let mut rng = StdRng::seed_from_u64(0x7e7);
    (0..100).map(|_| random_general(&mut rng, 4, 10)).collect()
}

fn example_pinned() -> Outcome {
    let start = Instant::now();
    let inst = example();
    let r = reduce_matrix(inst.cost());
    let reduced_example = Matrix::from_i64(3, 4, &[7, 3, 0, 3, 0, 4, 7, 2, 4, 0, 2, 0]);
    let first_adjusted = Matrix::from_i64(3, 4, &[9, 5, 0, 5, 0, 4, 5, 2, 4, 0, 0, 0]);
    let second_adjusted = Matrix::from_i64(3, 4, &[11, 5, 0, 5, 0, 2, 3, 0, 6, 0, 0, 0]);
    ensure!(
        r.reduced == reduced_example,
        "reduced matrix\n{}",
        r.reduced
    );
    ensure!(*inst.eta() == int(15), "eta = {}", inst.eta());

    let (s, d) = inst.integral_marginals().unwrap();
    let first = hungarian::min_weight_zero_cover(&r.reduced, inst.supply(), inst.demand()).unwrap();
    ensure!(
        first.cover.weight == 12,
        "first cover weight {}",
        first.cover.weight
    );

    let c1 = LineCover::new(vec![0], vec![0, 1, 3], &s, &d).unwrap();
    let (t3, _) = delta_adjust(&r.reduced, &c1, 15).unwrap();
    ensure!(t3 == first_adjusted, "after first delta\n{t3}");
    let c2 = LineCover::new(vec![0, 2], vec![0], &s, &d).unwrap();
    let (t4, _) = delta_adjust(&t3, &c2, 15).unwrap();
    ensure!(t4 == second_adjusted, "after second delta\n{t4}");

    let sol = hungarian::solve_weighted_hungarian_with(&inst, &hand_pins()).unwrap();
    let mats: Vec<&Matrix> = sol.trace.iterations.iter().map(|it| &it.reduced).collect();
    ensure!(
        mats == vec![&reduced_example, &first_adjusted, &second_adjusted],
        "solver trace diverges"
    );
    ensure!(
        sol.trace.iterations[0].cover.weight == 12,
        "solver first weight"
    );
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!(
        "reduced and adjusted matrices exact, weight 12, eta 15, {elapsed:.2?}"
    ))
}

fn example_optimum() -> Outcome {
    let inst = example();
    let sol = hungarian::solve_weighted_hungarian(&inst).unwrap();
    ensure!(
        inst.is_feasible(&sol.plan).unwrap().is_feasible(),
        "hungarian plan infeasible"
    );
    let cost = inst.plan_cost(&sol.plan).unwrap();
    let limits = OracleLimits {
        max_eta: 15,
        max_cells: 12,
    };
    let oracle = enumerate_optimum_with(&inst, limits).unwrap();
    ensure!(
        cost == oracle.optimum,
        "hungarian {cost} vs oracle {}",
        oracle.optimum
    );
    let reference = TransportPlan::from_entries(
        [
            ((0, 2), 3),
            ((1, 0), 3),
            ((2, 1), 2),
            ((2, 2), 3),
            ((1, 3), 2),
            ((2, 3), 2),
        ]
        .map(|(c, q)| (c, int(q))),
    )
    .unwrap();
    ensure!(
        inst.is_feasible(&reference).unwrap().is_feasible(),
        "reference plan infeasible"
    );
    let reference_cost = inst.plan_cost(&reference).unwrap();
    ensure!(
        reference_cost == oracle.optimum,
        "reference plan costs {reference_cost}"
    );
    Ok(format!("hungarian = oracle = reference plan = {cost}"))
}

fn convex_diff_nw() -> Outcome {
    let start = Instant::now();
    let instances = convex_diff_instances();
    for (k, inst) in instances.iter().enumerate() {
        let nw = inst.plan_cost(&nwcorner::north_west_corner(inst)).unwrap();
        let opt = enumerate_optimum(inst).unwrap().optimum;
        ensure!(
            nw == opt,
            "instance {k}: nw {nw} vs oracle {opt}\n{}",
            serialize_instance(inst)
        );
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    Ok(format!(
        "{} instances, nw = oracle, {elapsed:.2?}",
        instances.len()
    ))
}

fn monge_suite() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x1e44a);
    let mut holding = 0;
    for k in 0..1000 {
        let (m, n) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        // Narrow ranges plus sorted sums keep a share of the samples Monge.
        let cost = if k % 2 == 0 {
            random_integer_matrix(&mut rng, m, n, 0, 3)
        } else {
            let x = random_sorted_rationals(&mut rng, m, 4, 1);
            let y = random_sorted_rationals(&mut rng, n, 4, 1);
            let base = nwcorner::convex_diff_cost(&x, &y, |t| Shape::Square.eval(t)).unwrap();
            let noise = random_integer_matrix(&mut rng, m, n, 0, 1);
            Matrix::from_fn(m, n, |i, j| &base[(i, j)] + &noise[(i, j)])
        };
        let adjacent = nwcorner::check_monge(&cost, MongeMode::Adjacent);
        let exhaustive = nwcorner::check_monge(&cost, MongeMode::Exhaustive);
        ensure!(
            adjacent.holds == exhaustive.holds,
            "matrix {k}: modes disagree\n{cost}"
        );
        if exhaustive.holds {
            holding += 1;
            let eta = rng.gen_range(1..=8);
            let inst = random_instance(&mut rng, cost, eta);
            let nw = inst.plan_cost(&nwcorner::north_west_corner(&inst)).unwrap();
            let opt = enumerate_optimum(&inst).unwrap().optimum;
            ensure!(nw == opt, "matrix {k}: nw {nw} vs oracle {opt}");
        }
    }
    ensure!(holding > 0, "no Monge samples drawn");
    Ok(format!(
        "1000 matrices, modes agree, {holding} Monge with nw = oracle"
    ))
}

fn sum_cost_degenerate() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5c0);
    for k in 0..100 {
        let (m, n) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let x = random_sorted_rationals(&mut rng, m, 9, 4);
        let y = random_sorted_rationals(&mut rng, n, 9, 4);
        let eta = rng.gen_range(1..=20);
        let inst = random_instance(&mut rng, nwcorner::sum_cost(&x, &y), eta);
        let expected: Rational = inst
            .supply()
            .iter()
            .zip(&x)
            .map(|(a, v)| a * v)
            .sum::<Rational>()
            + inst
                .demand()
                .iter()
                .zip(&y)
                .map(|(b, v)| b * v)
                .sum::<Rational>();
        for p in 0..20 {
            let plan = random_feasible_plan(&mut rng, &inst);
            ensure!(
                inst.is_feasible(&plan).unwrap().is_feasible(),
                "instance {k} plan {p} infeasible"
            );
            let cost = inst.plan_cost(&plan).unwrap();
            ensure!(
                cost == expected,
                "instance {k} plan {p}: {cost} vs {expected}"
            );
        }
    }
    Ok("100 instances x 20 plans equal sum a_i x_i + sum b_j y_j".into())
}

/// Cheapest set of lines covering every zero, by trying all subsets.
fn brute_min_cover(reduced: &Matrix, supply: &[u64], demand: &[u64]) -> u64 {
    let (m, n) = (reduced.rows(), reduced.cols());
    let mut best = u64::MAX;
    for mask in 0u32..(1 << (m + n)) {
        let row = |i: usize| mask >> i & 1 == 1;
        let col = |j: usize| mask >> (m + j) & 1 == 1;
        let covers = reduced
            .iter_cells()
            .all(|(i, j, v)| *v != int(0) || row(i) || col(j));
        if covers {
            let w = (0..m).filter(|&i| row(i)).map(|i| supply[i]).sum::<u64>()
                + (0..n).filter(|&j| col(j)).map(|j| demand[j]).sum::<u64>();
            best = best.min(w);
        }
    }
    best
}

fn konig_egervary() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x4e6);
    let mut pool = vec![example()];
    pool.extend(convex_diff_instances());
    pool.extend(expansion_instances());
    pool.extend((0..200).map(|_| random_general(&mut rng, 4, 12)));
    let mut iterations = 0;
    for (k, inst) in pool.iter().enumerate() {
        let (s, d) = inst.integral_marginals().unwrap();
        let sol = hungarian::solve_weighted_hungarian(inst).unwrap();
        for (t, it) in sol.trace.iterations.iter().enumerate() {
            iterations += 1;
            ensure!(
                it.max_flow == it.cover.weight && it.min_cut_weight == it.cover.weight,
                "instance {k} iteration {t}: flow {} cut {} cover {}",
                it.max_flow,
                it.min_cut_weight,
                it.cover.weight
            );
            let brute = brute_min_cover(&it.reduced, &s, &d);
            ensure!(
                brute == it.max_flow,
                "instance {k} iteration {t}: brute cover {brute} vs flow {}",
                it.max_flow
            );
        }
    }
    Ok(format!(
        "{} instances, {iterations} iterations, max flow = min cover",
        pool.len()
    ))
}

fn expansion_equivalence() -> Outcome {
    for (k, inst) in expansion_instances().iter().enumerate() {
        let e = expand_to_assignment(inst, DEFAULT_EXPANSION_CAP).unwrap();
        let a = solve_assignment(&e.cost).unwrap();
        let plan = aggregate_assignment_solution(&a.permutation, &e).unwrap();
        ensure!(
            inst.is_feasible(&plan).unwrap().is_feasible(),
            "instance {k}: aggregate infeasible"
        );
        let aggregated = inst.plan_cost(&plan).unwrap();
        let hung = inst
            .plan_cost(&hungarian::solve_weighted_hungarian(inst).unwrap().plan)
            .unwrap();
        let opt = enumerate_optimum(inst).unwrap().optimum;
        ensure!(
            aggregated == hung && hung == opt && a.cost == opt,
            "instance {k}: expansion {aggregated}, hungarian {hung}, oracle {opt}"
        );
    }
    Ok("100 instances, expansion = hungarian = oracle".into())
}

fn check_certificate(
    rng: &mut StdRng,
    inst: &TransportInstance,
    plan: &TransportPlan,
    cert: &DualCertificate,
    label: &str,
) -> Result<(), String> {
    let report = inst
        .verify_optimal(plan, cert)
        .map_err(|e| format!("{label}: {e}"))?;
    ensure!(
        report.is_optimal(),
        "{label}: {}",
        report.violation.unwrap()
    );
    let bound = cert.dual_objective(inst);
    for p in 0..10 {
        let other = random_feasible_plan(rng, inst);
        let cost = inst.plan_cost(&other).unwrap();
        ensure!(
            bound <= cost,
            "{label}: weak duality fails on plan {p}: {bound} > {cost}"
        );
    }
    Ok(())
}

fn certificates() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0xce47);
    let mut general = vec![example()];
    general.extend((0..100).map(|_| random_general(&mut rng, 4, 10)));
    let mut checked = 0;
    for (k, inst) in general.iter().enumerate() {
        let sol = if k == 0 {
            hungarian::solve_weighted_hungarian_with(inst, &hand_pins()).unwrap()
        } else {
            hungarian::solve_weighted_hungarian(inst).unwrap()
        };
        check_certificate(
            &mut rng,
            inst,
            &sol.plan,
            &sol.certificate,
            &format!("hungarian {k}"),
        )?;
        if let Some(greedy) = &sol.trace.greedy_plan {
            check_certificate(
                &mut rng,
                inst,
                greedy,
                &sol.certificate,
                &format!("greedy {k}"),
            )?;
        }
        let limits = OracleLimits {
            max_eta: 15,
            max_cells: 16,
        };
        let oracle = enumerate_optimum_with(inst, limits).unwrap();
        check_certificate(
            &mut rng,
            inst,
            &oracle.plan,
            &sol.certificate,
            &format!("oracle {k}"),
        )?;
        let e = expand_to_assignment(inst, DEFAULT_EXPANSION_CAP).unwrap();
        let a = solve_assignment(&e.cost).unwrap();
        let plan = aggregate_assignment_solution(&a.permutation, &e).unwrap();
        check_certificate(
            &mut rng,
            inst,
            &plan,
            &sol.certificate,
            &format!("expansion {k}"),
        )?;
        checked += 4;
    }
    for (k, inst) in convex_diff_instances().iter().enumerate().take(100) {
        let (plan, hints) = nwcorner::north_west_corner_basis(inst);
        let cert = inst.compute_duals_from_plan(&plan, &hints).unwrap();
        check_certificate(&mut rng, inst, &plan, &cert, &format!("nw {k}"))?;
        checked += 1;
    }
    Ok(format!(
        "{checked} solver outputs certified, weak duality on 10 plans each"
    ))
}

fn assignment_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xa55);
    for (order, count) in [(4, 100), (5, 20)] {
        for k in 0..count {
            let c = random_integer_matrix(&mut rng, order, order, -10, 30);
            let a = solve_assignment(&c).unwrap();
            let (_, best) = enumerate_assignment(&c).unwrap();
            let realised: Rational = a
                .permutation
                .iter()
                .enumerate()
                .map(|(i, &j)| c[(i, j)].clone())
                .sum();
            ensure!(
                a.cost == best && realised == best,
                "{order}x{order} matrix {k}: {} vs {best}",
                a.cost
            );
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(format!(
        "100 4x4 and 20 5x5 match enumeration, {elapsed:.2?}"
    ))
}

fn cli_contract() -> Outcome {
    let example = common::fixture("instances/example.txt")
        .to_string_lossy()
        .into_owned();
    let args = [
        "solve",
        &example,
        "--method",
        "hungarian",
        "--trace",
        "--certificate",
        "--pin-cover",
        "1:1,2,4",
        "--pin-cover",
        "1,3:1",
    ];
    let golden =
        std::fs::read_to_string(common::fixture("golden/example_hungarian_trace.txt")).unwrap();
    for run in 0..2 {
        let (code, stdout, stderr) = common::transport(&args);
        ensure!(code == EXIT_OK, "trace run exited {code}: {stderr}");
        ensure!(
            stdout == golden,
            "trace run {run} differs from golden output"
        );
    }

    let mut corpus = 0;
    for entry in std::fs::read_dir(common::fixture("instances")).unwrap() {
        let path = entry.unwrap().path();
        let inst =
            parse_instance(&std::fs::read_to_string(&path).unwrap()).map_err(|e| e.to_string())?;
        let again = parse_instance(&serialize_instance(&inst)).map_err(|e| e.to_string())?;
        ensure!(again == inst, "round trip changes {}", path.display());
        corpus += 1;
    }

    let fractional = common::fixture("instances/fractional.txt")
        .to_string_lossy()
        .into_owned();
    let constant = common::fixture("instances/constant.txt")
        .to_string_lossy()
        .into_owned();
    let expectations: [(&[&str], i32); 6] = [
        (&["check-monge", &constant], EXIT_OK),
        (&["check-monge", &example], EXIT_VIOLATED),
        (&["solve", "/nonexistent/instance.txt"], EXIT_INPUT),
        (&["solve", &example, "--bogus"], EXIT_INPUT),
        (
            &["solve", &fractional, "--method", "hungarian"],
            EXIT_PRECONDITION,
        ),
        (
            &["solve", &example, "--method", "oracle"],
            EXIT_PRECONDITION,
        ),
    ];
    for (args, want) in expectations {
        let (code, _, _) = common::transport(args);
        ensure!(code == want, "{args:?} exited {code}, expected {want}");
    }
    Ok(format!(
        "golden trace stable, {corpus} fixtures round-trip, exit codes 0/1/2/3 honored"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("AC1", "worked example trace", example_pinned),
        ("AC2", "worked example optimum", example_optimum),
        ("AC3", "convex difference costs", convex_diff_nw),
        ("AC4", "Monge check and NW optimality", monge_suite),
        ("AC5", "sum cost degeneracy", sum_cost_degenerate),
        ("AC6", "weighted Konig-Egervary", konig_egervary),
        ("AC7", "block expansion", expansion_equivalence),
        ("AC8", "certificate soundness", certificates),
        ("AC9", "assignment oracle", assignment_oracle),
        ("AC10", "CLI contract", cli_contract),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (id, name, check) in criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("[PASS] {id} {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("[FAIL] {id} {name}: {detail}");
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
