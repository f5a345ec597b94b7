//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the report is always printed. All
//! comparisons are exact; the only tolerances are the wall-clock limits of
//! criteria 1 and 4 and the `b·ε` bound of criterion 7.

mod common;

use std::time::{Duration, Instant};

use padic_amoeba::amoeba::{branch_piece_set, build_digit_tree, zeros, NodeKind, PlanarAmoeba};
use padic_amoeba::arrangement::{
    column_oracle_components, count_complement, grid_oracle_auto, FaceCount,
};
use padic_amoeba::extremal::select_prime;
use padic_amoeba::geometry::Point;
use padic_amoeba::padic::digit;
use padic_amoeba::rational::{frac, int};
use padic_amoeba::trop::{witness_error, witness_index_set, DiscriminantMap};
use padic_amoeba::{Error, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

/// Wall-clock limits.
const RS_LIMIT: Duration = Duration::from_secs(1);
const EXTREMAL_K3_LIMIT: Duration = Duration::from_secs(2);
/// Largest grid the uniform-grid oracle is asked to fill.
const GRID_POINTS: usize = 20_000_000;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let a = PlanarAmoeba::from_kernel(&six_term_b(), prime(3)).map_err(|e| e.to_string())?;
    let c = count_complement(&a.graph, 3).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    check(
        c.bounded == 2,
        format!("bounded = {}, expected 2", c.bounded),
    )?;
    check(
        took < RS_LIMIT,
        format!("took {took:?}, limit {RS_LIMIT:?}"),
    )?;
    Ok(format!("bounded = 2, total = {}, {took:.2?}", c.total))
}

fn criterion_2() -> Outcome {
    let p = prime(3);
    let table = [
        (frac(1, 3), [1, 0, 0, 0]),
        (frac(11, 35), [0, 1, 2, 2]),
        (int(1), [0, 1, 0, 0]),
        (frac(3, 11), [0, 0, 2, 1]),
        (int(0), [0, 0, 0, 0]),
    ];
    for (z, want) in &table {
        let got: Vec<u64> = (-1..=2).map(|i| digit(z, p, i)).collect();
        check(
            got == want,
            format!("digits of {z}: {got:?}, expected {want:?}"),
        )?;
    }
    // forms with zeros 1, 11/35, 3/11, 1/3, 0 (plus one constant form)
    let z = zeros(&padic_amoeba::linalg::AffineFormSystem::new(six_term_b()).unwrap())
        .map_err(|e| e.to_string())?;
    let t = build_digit_tree(&z, p).map_err(|e| e.to_string())?;
    let root = t.root();
    let kids = t.children(root);
    check(t.depth(root) == Some(-1), "root depth is not -1")?;
    check(kids.len() == 2, "root does not split in two")?;
    check(
        t.node(kids[1].1).kind == NodeKind::Leaf { form: 3 } && kids[1].0 == 1,
        "1/3 does not split off at the root",
    )?;
    let mid = kids[0].1;
    check(t.depth(mid) == Some(0), "second split is not at index 0")?;
    let grand: Vec<(u64, Vec<usize>, Option<i64>)> = t
        .children(mid)
        .iter()
        .map(|&(d, c)| (d, t.leaves_under(c), t.depth(c)))
        .collect();
    check(
        grand == vec![(0, vec![2, 5], Some(1)), (1, vec![0, 1], Some(1))],
        format!("lower splits differ: {grand:?}"),
    )?;
    Ok("digit table and tree shape match".into())
}

fn criterion_3() -> Outcome {
    let map = DiscriminantMap::from_kernel(&worked_b(), prime(2)).unwrap();
    let star = map.transformed(&[0]).map_err(|e| e.to_string())?;
    let exact = star.eval_exact(&[int(8)]).map_err(|e| e.to_string())?;
    let want = vec![int(9), int(-129)];
    check(exact == want, format!("F*(8) = {exact:?}"))?;
    let trop = map
        .transformed(&[2])
        .map_err(|e| e.to_string())?
        .tropicalize()
        .eval(&[int(4)])
        .map_err(|e| e.to_string())?;
    check(trop == want, format!("phi(4) = {trop:?}"))?;
    Ok("F*(8) = phi(4) = (9, -129)".into())
}

fn criterion_4() -> Outcome {
    let mut notes = Vec::new();
    for k in [2usize, 3, 4] {
        let start = Instant::now();
        let run = select_prime(k).map_err(|e| e.to_string())?;
        let took = start.elapsed();
        let need = k * k + k + 1;
        check(
            run.count.total >= need,
            format!("k = {k}: total {} < {need}", run.count.total),
        )?;
        if k == 3 {
            check(
                took < EXTREMAL_K3_LIMIT,
                format!("k = 3 took {took:?}, limit {EXTREMAL_K3_LIMIT:?}"),
            )?;
        }
        notes.push(format!(
            "k={k} p={} total={} (>= {need}) {took:.2?}",
            run.family.prime, run.count.total
        ));
    }
    Ok(notes.join("; "))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0usize;
    for trial in 0..200 {
        let inst = random_instance(&mut rng, 8, 2, 3);
        let a = inst.amoeba();
        let c = count_complement(&a.graph, inst.n).map_err(|e| e.to_string())?;
        check(
            c.within_bound(),
            format!(
                "instance {trial} (n = {}): total {} > {}",
                inst.n, c.total, c.bound_value
            ),
        )?;
        let edges = a.graph.edge_count();
        check(
            edges <= 2 * inst.n + 4,
            format!(
                "instance {trial} (n = {}): {edges} edges > {}",
                inst.n,
                2 * inst.n + 4
            ),
        )?;
        worst = worst.max(c.total);
    }
    Ok(format!("200 instances within bound; largest total {worst}"))
}

fn oracle_agree(
    name: &str,
    a: &PlanarAmoeba,
    n: usize,
    grid_runs: &mut usize,
) -> std::result::Result<(), String> {
    let c = count_complement(&a.graph, n).map_err(|e| format!("{name}: {e}"))?;
    let want = FaceCount {
        total: c.total,
        bounded: c.bounded,
    };
    let col = column_oracle_components(&a.graph).map_err(|e| format!("{name}: {e}"))?;
    check(
        col == want,
        format!("{name}: column oracle {col:?} vs {want:?}"),
    )?;
    match grid_oracle_auto(&a.graph, GRID_POINTS) {
        Ok(Some(grid)) => {
            *grid_runs += 1;
            check(
                grid.total == c.total,
                format!("{name}: grid oracle {grid:?} vs {want:?}"),
            )
        }
        Ok(None) => Ok(()),
        Err(e) => Err(format!("{name}: grid oracle failed: {e}")),
    }
}

fn criterion_6() -> Outcome {
    let mut grid_runs = 0;
    let fixtures = planar_fixtures();
    for (name, b, p, n) in &fixtures {
        let a = PlanarAmoeba::from_kernel(b, *p).map_err(|e| format!("{name}: {e}"))?;
        oracle_agree(name, &a, *n, &mut grid_runs)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for trial in 0..50 {
        let inst = random_instance(&mut rng, 4, 2, 2);
        oracle_agree(
            &format!("random {trial}"),
            &inst.amoeba(),
            inst.n,
            &mut grid_runs,
        )?;
    }
    let total_instances = fixtures.len() + 50;
    let mut evals = 0;
    while evals < 1000 {
        let inst = random_instance(&mut rng, 6, 2, 3);
        let a = inst.amoeba();
        for _ in 0..20 {
            let lam = random_lambda(&mut rng, &a.zeros, inst.prime);
            let v = a
                .map
                .eval_exact(std::slice::from_ref(&lam))
                .map_err(|e| e.to_string())?;
            let pt = Point::new(v[0].clone(), v[1].clone());
            check(
                a.graph.contains(&pt),
                format!("F({lam}) = {pt} is off the graph"),
            )?;
            evals += 1;
        }
    }
    Ok(format!(
        "column oracle agrees on {total_instances} instances, grid oracle on the {grid_runs} \
         small enough to fill; {evals} evaluations on the graph"
    ))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let epsilons = [int(1), frac(1, 2), frac(1, 10)];
    let mut done = 0;
    let mut by_m = [0usize; 2];
    while done < 100 {
        let m = if done % 2 == 0 { 2 } else { 3 };
        let inst = random_instance(&mut rng, 4, m, 3);
        let map = inst.map();
        let lam: Vec<Rational> = if m == 2 {
            let z = zeros(map.forms()).map_err(|e| e.to_string())?;
            vec![random_lambda(&mut rng, &z, inst.prime)]
        } else {
            (0..m - 1)
                .map(|_| frac(rng.gen_range(-300..=300), rng.gen_range(1..=40)))
                .collect()
        };
        let eps = epsilons[rng.gen_range(0..epsilons.len())].clone();
        let w = match witness_index_set(&map, &lam, &eps) {
            Ok(w) => w,
            Err(Error::UndefinedPoint { .. }) => continue,
            Err(e) => return Err(format!("witness failed: {e}")),
        };
        let err = witness_error(&map, &lam, &w).map_err(|e| e.to_string())?;
        let bound = &w.constant * &eps;
        check(
            err <= bound,
            format!("error {err} exceeds b*eps = {bound} at {lam:?}"),
        )?;
        by_m[m - 2] += 1;
        done += 1;
    }
    Ok(format!(
        "100 witnesses within b*eps ({} with m=2, {} with m=3)",
        by_m[0], by_m[1]
    ))
}

fn criterion_8() -> Outcome {
    let check_one = |name: &str, map: &DiscriminantMap| -> std::result::Result<(), String> {
        let a = PlanarAmoeba::new(map.clone()).map_err(|e| format!("{name}: {e}"))?;
        let from_tree = branch_piece_set(map, &a.tree).map_err(|e| format!("{name}: {e}"))?;
        check(
            from_tree == a.graph.piece_set(),
            format!("{name}: tree pieces differ from assembled pieces"),
        )
    };
    let fixtures = planar_fixtures();
    for (name, b, p, _) in &fixtures {
        check_one(name, &DiscriminantMap::from_kernel(b, *p).unwrap())?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for trial in 0..100 {
        let inst = random_instance(&mut rng, 8, 2, 3);
        check_one(&format!("random {trial}"), &inst.map())?;
    }
    Ok(format!(
        "{} fixtures and 100 random instances match",
        fixtures.len()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("six-term example reproduction", criterion_1),
        ("digit-tree fixture", criterion_2),
        ("worked example values", criterion_3),
        ("extremal lower bound", criterion_4),
        ("upper bound sweep", criterion_5),
        ("oracle equivalence", criterion_6),
        ("witness soundness", criterion_7),
        ("tree/curve equivalence", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
