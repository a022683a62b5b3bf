//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use beliefcnf::fixtures::{self, A, B, C, D, F, G};
use beliefcnf::{
    augmented_graph, brute_force_cpe, conditional_cnf_probability, elim_hidden, extract_clauses, gen_instance,
    induced_width, min_degree_order, Action, Algorithm, CnfFormula, EngineConfig, IBound, Literal, NetworkParams,
    Ordering, Provenance, QueryParams, RunStats, Solver, VariableId,
};
use common::{agrees, mean, median, oracle_suite, REL_TOL};

/// Wall-clock budget for the 200-instance oracle comparison.
const SUITE_BUDGET: Duration = Duration::from_secs(60);
/// Each timed evaluation is repeated this many times and the minimum kept.
const TIMING_REPS: usize = 3;
/// A clause extracted from a CPT must hold with probability 1 up to this.
const EXTRACTION_TOL: f64 = 1e-12;
/// Absolute tolerance for the two-node values that are exact in decimal.
const POINT_TOL: f64 = 1e-12;
/// Tolerance for P(A | A∨B), which is quoted to six decimals.
const CONDITIONAL_TOL: f64 = 1e-6;
const TREND_INSTANCES: u64 = 50;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cpe(i: IBound) -> Solver {
    Solver::new(Algorithm::Cpe).with_config(EngineConfig::default().with_i_bound(i))
}

fn fig_order() -> Ordering {
    Ordering::new(vec![A, C, B, D, F, G]).unwrap()
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let suite = oracle_suite();
    let solvers = [
        ("cpe(0)", cpe(IBound::Bounded(0))),
        ("cpe(2)", cpe(IBound::Bounded(2))),
        ("cpe(unbounded)", cpe(IBound::Unbounded)),
        ("cpe-d", Solver::new(Algorithm::CpeD)),
        ("hidden", Solver::new(Algorithm::Hidden)),
    ];
    let mut zero = 0;
    for inst in &suite {
        let want = brute_force_cpe(&inst.net, &inst.phi).map_err(|e| e.to_string())?;
        zero += (want == 0.0) as usize;
        for (name, s) in &solvers {
            let got = s
                .probability(&inst.net, &inst.phi)
                .map_err(|e| format!("seed {}: {e}", inst.seed))?;
            ensure(agrees(got, want), || {
                format!(
                    "seed {} {name}: {got:e} vs oracle {want:e} (rel tol {REL_TOL:e})",
                    inst.seed
                )
            })?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < SUITE_BUDGET, || {
        format!("took {elapsed:?}, budget {SUITE_BUDGET:?}")
    })?;
    Ok(format!(
        "{} instances x 5 algorithms within rel {REL_TOL:e} ({zero} with P=0) in {:.1}s",
        suite.len(),
        elapsed.as_secs_f64()
    ))
}

fn trace_of_example_query() -> Outcome {
    let net = fixtures::figure_one_positive();
    let run = cpe(IBound::Bounded(0))
        .with_ordering(fig_order())
        .trace(&net, &fixtures::example_query())
        .map_err(|e| e.to_string())?;
    let got: Vec<BTreeSet<VariableId>> = run
        .trace
        .iter()
        .filter(|e| e.action == Action::Sum)
        .map(|e| e.scope.iter().copied().collect())
        .collect();
    let want: Vec<BTreeSet<VariableId>> = [&[F, D][..], &[B, C, D], &[A, B, C], &[A, C], &[A], &[]]
        .iter()
        .map(|s| s.iter().copied().collect())
        .collect();
    ensure(got == want, || format!("lambda scopes {got:?}, expected {want:?}"))?;
    Ok("lambda scopes (F,D),(B,C,D),(A,B,C),(A,C),(A),scalar".into())
}

fn hybrid_unit_derivation() -> Outcome {
    let net = fixtures::figure_one_hybrid();
    let mut phi = CnfFormula::new();
    phi.add_unit(Literal::neg(G), Provenance::Query);
    let run = Solver::new(Algorithm::CpeD)
        .with_ordering(fig_order())
        .trace(&net, &phi)
        .map_err(|e| e.to_string())?;
    let units: BTreeSet<Literal> = run
        .trace
        .iter()
        .flat_map(|e| e.derived.iter().filter_map(|c| c.as_unit()))
        .collect();
    ensure(
        units.contains(&Literal::neg(F)) && units.contains(&Literal::neg(D)),
        || format!("derived units {units:?} lack ~F or ~D"),
    )?;
    let s = &run.stats;
    ensure(s.derived_units >= 2, || format!("U = {}", s.derived_units))?;
    ensure(s.mf == 2, || format!("cpe-d mf = {}, expected 2", s.mf))?;
    let (_, plain) = cpe(IBound::Bounded(0))
        .with_ordering(fig_order())
        .evaluate(&net, &phi)
        .map_err(|e| e.to_string())?;
    ensure(plain.mf == 3, || format!("cpe mf = {}, expected 3", plain.mf))?;
    Ok(format!("cpe-d derives ~F,~D with U={} mf=2; cpe mf=3", s.derived_units))
}

fn timed(f: impl Fn() -> beliefcnf::Result<(f64, RunStats)>) -> Result<(f64, RunStats), String> {
    let mut best: Option<(f64, RunStats)> = None;
    for _ in 0..TIMING_REPS {
        let (p, s) = f().map_err(|e| e.to_string())?;
        if best.as_ref().is_none_or(|(_, b)| s.elapsed < b.elapsed) {
            best = Some((p, s));
        }
    }
    Ok(best.expect("at least one repetition"))
}

fn cpe_versus_hidden() -> Outcome {
    let np = NetworkParams {
        vars: 30,
        max_family: 4,
        det_frac: 0.0,
    };
    let qp = QueryParams {
        clauses: 30,
        observations: 9,
    };
    let (mut t_cpe, mut t_hidden, mut units) = (Vec::new(), Vec::new(), Vec::new());
    for k in 0..TREND_INSTANCES {
        let (net, phi) = gen_instance(np, qp, 1000 + k).map_err(|e| e.to_string())?;
        let solver = cpe(IBound::Bounded(0));
        let (_, s) = timed(|| solver.evaluate(&net, &phi))?;
        let (_, h) = timed(|| elim_hidden(&net, &phi, &EngineConfig::default()))?;
        t_cpe.push(s.seconds());
        t_hidden.push(h.seconds());
        units.push(s.derived_units as f64);
    }
    let (mc, mh, mu) = (median(t_cpe), median(t_hidden), mean(&units));
    ensure(mc <= mh, || format!("median cpe {mc:.6}s > median hidden {mh:.6}s"))?;
    ensure(mu >= 1.0, || format!("mean U = {mu:.2}"))?;
    Ok(format!("median time cpe {mc:.6}s <= hidden {mh:.6}s, mean U {mu:.2}"))
}

fn extraction_shrinks_factors() -> Outcome {
    let np = NetworkParams {
        vars: 30,
        max_family: 4,
        det_frac: 0.75,
    };
    let qp = QueryParams {
        clauses: 0,
        observations: 6,
    };
    let (mut mf_d, mut mf_0, mut extracted) = (Vec::new(), Vec::new(), Vec::new());
    // instances whose evidence is consistent, reported separately since
    // cpe-d often refutes the rest before building any factor
    let (mut live_d, mut live_0) = (Vec::new(), Vec::new());
    for k in 0..TREND_INSTANCES {
        let (net, phi) = gen_instance(np, qp, 2000 + k).map_err(|e| e.to_string())?;
        let (pd, d) = Solver::new(Algorithm::CpeD)
            .evaluate(&net, &phi)
            .map_err(|e| e.to_string())?;
        let (p0, s) = cpe(IBound::Bounded(0))
            .evaluate(&net, &phi)
            .map_err(|e| e.to_string())?;
        ensure(agrees(pd, p0), || {
            format!("seed {}: cpe-d {pd:e} vs cpe {p0:e}", 2000 + k)
        })?;
        mf_d.push(d.mf as f64);
        mf_0.push(s.mf as f64);
        extracted.push(d.extracted as f64);
        if p0 > 0.0 {
            live_d.push(d.mf as f64);
            live_0.push(s.mf as f64);
        }
    }
    let (md, m0, mean_f) = (median(mf_d), median(mf_0), mean(&extracted));
    ensure(md < m0, || format!("median mf cpe-d {md} not below cpe(0) {m0}"))?;
    ensure(mean_f > 0.0, || "no clauses extracted".into())?;
    let live = match live_d.len() {
        0 => "no instance has P>0".to_string(),
        n => format!("on the {n} with P>0: {} vs {}", median(live_d), median(live_0)),
    };
    Ok(format!(
        "median mf cpe-d {md} < cpe(0) {m0} ({live}), mean F {mean_f:.1}"
    ))
}

fn extraction_soundness() -> Outcome {
    let mut checked = 0;
    for inst in oracle_suite() {
        for c in extract_clauses(&inst.net).clauses() {
            let single = CnfFormula::from_clauses([c.clone()], Provenance::Query);
            let p = brute_force_cpe(&inst.net, &single).map_err(|e| e.to_string())?;
            ensure((p - 1.0).abs() <= EXTRACTION_TOL, || {
                format!("seed {}: P({c}) = {p}", inst.seed)
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} extracted clauses hold with probability 1"))
}

fn width_bound() -> Outcome {
    let mut worst_slack = usize::MAX;
    let mut runs = 0;
    for inst in oracle_suite() {
        let mut phi = CnfFormula::new();
        for (c, p) in inst.phi.entries().iter().filter(|(_, p)| *p != Provenance::Evidence) {
            phi.push(c.clone(), *p);
        }
        let g = augmented_graph(&inst.net, &phi).map_err(|e| e.to_string())?;
        let o = min_degree_order(&g);
        let w = induced_width(&g, &o).map_err(|e| e.to_string())?;
        for i in [IBound::Bounded(0), IBound::Bounded(2), IBound::Unbounded] {
            let cfg = EngineConfig::default().with_i_bound(i).without_reorder();
            let (_, s) = beliefcnf::elim_cpe(&inst.net, &phi, &o, &cfg).map_err(|e| e.to_string())?;
            ensure(s.mf <= w, || {
                format!("seed {} i={i}: mf {} > width {w}", inst.seed, s.mf)
            })?;
            worst_slack = worst_slack.min(w - s.mf);
            runs += 1;
        }
    }
    Ok(format!(
        "{runs} runs without reordering, mf <= induced width (min slack {worst_slack})"
    ))
}

fn cli(args: &[&str], dir: &Path) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_beliefcnf"))
        .args(args)
        .current_dir(dir)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!(
            "{args:?} exited {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        )
    })?;
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

fn read(path: impl AsRef<Path>) -> Result<Vec<u8>, String> {
    std::fs::read(path.as_ref()).map_err(|e| format!("{}: {e}", path.as_ref().display()))
}

fn without_time(csv: &[u8]) -> Vec<String> {
    String::from_utf8_lossy(csv)
        .lines()
        .map(|l| {
            let mut cols: Vec<&str> = l.split(',').collect();
            cols.remove(3);
            cols.join(",")
        })
        .collect()
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    for args in [
        &["--vars", "5", "--seed", "7"][..],
        &[
            "--vars",
            "20",
            "--clauses",
            "8",
            "--obs",
            "4",
            "--det-frac",
            "0.5",
            "--seed",
            "99",
        ],
    ] {
        for prefix in ["first", "second"] {
            let mut full = vec!["gen"];
            full.extend_from_slice(args);
            full.extend(["--out-prefix", prefix]);
            cli(&full, d)?;
        }
        for ext in ["net", "cnf"] {
            let (a, b) = (
                read(d.join(format!("first.{ext}")))?,
                read(d.join(format!("second.{ext}")))?,
            );
            ensure(a == b, || format!("gen {args:?} wrote different .{ext} files"))?;
        }
    }
    let spec = "seed = 3\ninstances = 6\nvars = 10\nmax_family = 3\ndet_frac = 0.5\nclauses = 4\nobs = 2\n\n\
                [[runs]]\nalg = \"cpe\"\n\n[[runs]]\nalg = \"cpe\"\ni_bound = \"unbounded\"\n\n\
                [[runs]]\nalg = \"cpe-d\"\n\n[[runs]]\nalg = \"hidden\"\n\n[[runs]]\nalg = \"brute\"\n";
    std::fs::write(d.join("bench.toml"), spec).map_err(|e| e.to_string())?;
    cli(&["bench", "--spec", "bench.toml", "--csv", "a.csv"], d)?;
    cli(&["bench", "--spec", "bench.toml", "--csv", "b.csv"], d)?;
    let (a, b) = (
        without_time(&read(d.join("a.csv"))?),
        without_time(&read(d.join("b.csv"))?),
    );
    ensure(a == b, || "bench CSV differs outside time_s".into())?;
    ensure(a.len() == 31, || {
        format!("expected 30 rows plus header, got {}", a.len())
    })?;
    Ok("gen files byte-identical; bench CSV identical modulo time_s".into())
}

fn two_node_values() -> Outcome {
    let net = fixtures::two_node();
    let a = CnfFormula::from_clauses([beliefcnf::Clause::unit(Literal::pos(0))], Provenance::Query);
    let b = CnfFormula::from_clauses([beliefcnf::Clause::unit(Literal::pos(1))], Provenance::Query);
    let mut a_or_b = CnfFormula::new();
    a_or_b.add([Literal::pos(0), Literal::pos(1)], Provenance::Query);
    for alg in Algorithm::ALL {
        let s = Solver::new(alg);
        let p = s.probability(&net, &a_or_b).map_err(|e| e.to_string())?;
        ensure((p - 0.68).abs() <= POINT_TOL, || format!("{alg}: P(A or B) = {p}"))?;
        let given = conditional_cnf_probability(&net, &a, &a_or_b, &s)
            .map_err(|e| e.to_string())?
            .ok_or("P(A or B) reported zero")?;
        ensure((given - 0.882353).abs() <= CONDITIONAL_TOL, || {
            format!("{alg}: P(A | A or B) = {given}")
        })?;
        let b_given_a = conditional_cnf_probability(&net, &b, &a, &s)
            .map_err(|e| e.to_string())?
            .ok_or("P(A) reported zero")?;
        ensure((b_given_a - 0.9).abs() <= POINT_TOL, || {
            format!("{alg}: P(B | A) = {b_given_a}")
        })?;
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    std::fs::write(dir.path().join("two.net"), beliefcnf::serialize_network(&net)).map_err(|e| e.to_string())?;
    std::fs::write(dir.path().join("ab.cnf"), "p cnf 2 1\n1 2 0\n").map_err(|e| e.to_string())?;
    for alg in Algorithm::ALL {
        let out = cli(
            &["eval", "--net", "two.net", "--cnf", "ab.cnf", "--alg", alg.name()],
            dir.path(),
        )?;
        ensure(out == "0.680000000000\n", || {
            format!("eval --alg {alg} printed {out:?}")
        })?;
    }
    Ok("P(A or B)=0.68, P(A | A or B)=0.882353, P(B | A)=0.9 for every algorithm and via eval".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence on 200 small instances", oracle_equivalence),
        ("bucket trace of (B|C)&(G|D)&(~D|~B)", trace_of_example_query),
        ("unit derivation in the hybrid network under ~G", hybrid_unit_derivation),
        ("cpe no slower than hidden <30,4,0>/<30,9>", cpe_versus_hidden),
        (
            "cpe-d smaller factors <30,4,0.75> with 6 observations",
            extraction_shrinks_factors,
        ),
        ("extracted clauses have probability 1", extraction_soundness),
        ("factor arity bounded by induced width", width_bound),
        ("seeded determinism of gen and bench", determinism),
        ("two-node point values", two_node_values),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
