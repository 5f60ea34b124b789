//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` are still run and reported; the
//! process fails if any other criterion fails or if a known failure starts
//! passing.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use seqrel::bench::{bench_point, cost_model, loglog_slope, make_family, monomials_up_to, reference_value, BenchOptions, Family, FamilySpec};
use seqrel::bms::{format_trace, run_bms, run_bms_linalg, run_bms_tweaked, run_bms_with, stopping_bound, BmsOptions, Variant};
use seqrel::compare::{gorenstein_test, run_algorithm, verify_relation_set, Algorithm, Bound, GorensteinVerdict};
use seqrel::field::{PrimeField, Rationals};
use seqrel::monomial::{Monomial, MonomialSet};
use seqrel::order::MonomialOrder;
use seqrel::poly::{inter_reduce, is_zero_dimensional, Poly, RelationSet};
use seqrel::rank_solver::run_rank_solver;
use seqrel::sequence::{random_from_lms, Generator, SequenceOracle};
use seqrel::sfglm::{run_sfglm, run_sfglm_tweaked};

const KNOWN_FAILURES: &[u32] = &[10];

fn drl() -> MonomialOrder {
    "drl(y<x)".parse().unwrap()
}

fn mono(o: &MonomialOrder, s: &str) -> Monomial {
    o.parse_monomial(s).unwrap()
}

fn set(o: &MonomialOrder, v: &[&str]) -> MonomialSet {
    MonomialSet::sorted(v.iter().map(|s| mono(o, s)), o)
}

fn texts(k: &Rationals, r: &RelationSet<BigRational>) -> Vec<String> {
    r.texts(k)
}

fn parse_all(k: &Rationals, o: &MonomialOrder, v: &[&str]) -> Vec<Poly<BigRational>> {
    v.iter().map(|p| Poly::parse(k, o, p).unwrap()).collect()
}

/// The six built-in oracles with an order and a BMS bound for each.
fn builtins() -> Vec<(Generator, MonomialOrder, &'static str)> {
    vec![
        (Generator::Binomial, drl(), "x^5"),
        (Generator::Pow23, drl(), "x^3"),
        (Generator::Sq, drl(), "y^5"),
        (Generator::Step, drl(), "x^3"),
        (Generator::Fib4, "lex(z<y<x)".parse().unwrap(), "z^6"),
        (Generator::Kron, drl(), "x^4"),
    ]
}

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn criterion_1() -> Result<String, String> {
    let k = Rationals::new();
    let o = drl();
    let seq = SequenceOracle::generator(&k, Generator::Binomial);
    let run = run_bms_with(&seq, &o, &mono(&o, "x^3"), &BmsOptions { variant: Variant::Plain, trace: true }).map_err(|e| e.to_string())?;
    check(texts(&k, &run.relations) == ["y^2", "x*y - y - 1", "x^2 - 2*x + 1"], format!("relations {:?}", texts(&k, &run.relations)))?;
    let shifts: Vec<String> = run.relations.relations.iter().map(|r| r.shift.to_text(&o)).collect();
    check(shifts == ["x", "x", "x"], format!("shifts {shifts:?}"))?;
    let adds: Vec<String> = run.trace.iter().filter(|s| !s.staircase_additions().is_empty()).map(|s| o.format_monomial(&s.m)).collect();
    check(adds == ["1", "x*y"], format!("staircase additions at {adds:?}"))?;
    let combined: Vec<String> = run.trace.iter().filter(|s| !s.combinations().is_empty()).map(|s| o.format_monomial(&s.m)).collect();
    check(combined == ["x", "x*y", "x^2*y"], format!("combinations at {combined:?}"))?;
    let log = format_trace(&k, &o, &run.trace);
    check(log.lines().filter(|l| l.starts_with("monomial ")).count() == 10, "trace log has one block per monomial")?;
    Ok("3 relations, shift x; additions at 1, x*y; updates at x, x*y, x^2*y".into())
}

fn criterion_2() -> Result<String, String> {
    let k = Rationals::new();
    let o = drl();
    let deg = |d| o.monomials_of_degree_at_most(d);
    let cases: Vec<(Generator, MonomialSet, Vec<&str>)> = vec![
        (Generator::Pow23, deg(2), vec!["y - 3", "x^2 - 4*x + 4"]),
        (Generator::Binomial, deg(2), vec!["x*y - y - 1"]),
        (Generator::Sq, deg(3), vec!["x*y - x - y + 1", "x^2 - y^2 - 2*x + 2*y", "y^3 - 3*y^2 + 3*y - 1"]),
        (Generator::Step, set(&o, &["1", "y", "x", "y^2"]), vec!["y^2 - 2*y + 1"]),
    ];
    for (g, t, want) in cases {
        let start = Instant::now();
        let seq = SequenceOracle::generator(&k, g);
        let r = run_sfglm(&seq, &o, &t).map_err(|e| e.to_string())?;
        check(r.gb == parse_all(&k, &o, &want), format!("{}: {:?}", g.name(), r.gb.iter().map(|p| p.to_text(&k, &o)).collect::<Vec<_>>()))?;
        check(start.elapsed() < Duration::from_secs(1), format!("{} too slow", g.name()))?;
    }
    // shape position: the x and y relations lie outside T
    let o3: MonomialOrder = "drl(z<y<x)".parse().unwrap();
    let d = 4;
    let t = MonomialSet::sorted((0..=d + 2).map(|e| Monomial::from_exps(vec![0, 0, e])), &o3);
    let seq = SequenceOracle::generator(&k, Generator::Fib4);
    let r = run_sfglm_tweaked(&seq, &o3, &t).map_err(|e| e.to_string())?;
    let mut got = r.gb.clone();
    let mut want = parse_all(&k, &o3, &["z^2 - z - 1", "y - 1", "x - 3*z - 2"]);
    let key = |p: &Poly<BigRational>| p.to_text(&k, &o3);
    got.sort_by_key(key);
    want.sort_by_key(key);
    check(got == want, format!("fib4: {:?}", got.iter().map(key).collect::<Vec<_>>()))?;
    Ok("5 goldens exact over Q".into())
}

fn criterion_3() -> Result<String, String> {
    let k = Rationals::new();
    let o = drl();
    let step = SequenceOracle::generator(&k, Generator::Step);
    let r = run_sfglm_tweaked(&step, &o, &set(&o, &["1", "y", "x", "y^2"])).map_err(|e| e.to_string())?;
    check(r.gb == parse_all(&k, &o, &["y^2 - 2*y + 1", "x*y - x - y + 1"]), "tweaked step relations")?;
    check(r.rejected.iter().map(|(c, _)| o.format_monomial(c)).collect::<Vec<_>>() == ["x^2"], "x^2 rejected")?;
    let sq = SequenceOracle::generator(&k, Generator::Sq);
    let t = run_bms_tweaked(&sq, &o, &mono(&o, "y^5")).map_err(|e| e.to_string())?;
    check(t.polys() == parse_all(&k, &o, &["x*y - x - y + 1", "x^2 - y^2 - 2*x + 2*y", "y^3 - 3*y^2 + 3*y - 1"]), "tweaked BMS on sq")?;
    for (g, ord, b) in builtins() {
        let seq = SequenceOracle::generator(&k, g);
        let bound = mono(&ord, b);
        let plain = run_bms(&seq, &ord, &bound).map_err(|e| e.to_string())?;
        let tweaked = run_bms_tweaked(&seq, &ord, &bound).map_err(|e| e.to_string())?;
        check(tweaked.polys() == inter_reduce(&k, &plain.polys(), &ord), format!("tweaked BMS differs on {}", g.name()))?;
    }
    Ok("step, sq and all six oracles".into())
}

fn criterion_4() -> Result<String, String> {
    let k = Rationals::new();
    let o = drl();
    let seq = SequenceOracle::generator(&k, Generator::Binomial);
    for (b, want) in [("x^7", [5, 3, 3]), ("x^5", [3, 2, 2])] {
        let r = run_bms(&seq, &o, &mono(&o, b)).map_err(|e| e.to_string())?;
        let lead: Vec<String> = r.leading_monomials().iter().map(|m| o.format_monomial(m)).collect();
        check(lead[0] == "x*y", format!("first relation {lead:?}"))?;
        let degs: Vec<u32> = r
            .relations
            .iter()
            .map(|x| match &x.shift {
                seqrel::poly::Shift::UpTo(m) => m.degree(),
                _ => u32::MAX,
            })
            .collect();
        check(degs == want, format!("bound {b}: shift degrees {degs:?}"))?;
    }
    Ok("(5, 3, 3) and (3, 2, 2)".into())
}

fn criterion_5() -> Result<String, String> {
    let k = PrimeField::new(65537).unwrap();
    let algos = [Algorithm::Bms, Algorithm::Sfglm];
    let mut points = 0;
    for (n, top) in [(2usize, 10u32), (3, 6)] {
        for f in Family::ALL {
            for d in f.min_degree()..=top {
                let rows = bench_point(&k, &FamilySpec { family: f, n, d, seed: d as u64 }, &algos, BenchOptions::default()).map_err(|e| e.to_string())?;
                for r in rows {
                    let want = reference_value("queries", f, n, d, r.algorithm).ok_or_else(|| format!("no reference for {f} n={n} d={d}"))?;
                    check(r.queries == want, format!("{f} n={n} d={d} {}: {} queries, expected {want}", r.algorithm, r.queries))?;
                    if r.algorithm == Algorithm::Sfglm {
                        check(r.queries == monomials_up_to(n, 2 * r.dmax), "closed form")?;
                    }
                    points += 1;
                }
            }
        }
    }
    Ok(format!("{points} grid points exact"))
}

fn criterion_6() -> Result<String, String> {
    let k = PrimeField::new(65537).unwrap();
    let mut count = 0;
    for f in Family::ALL {
        for i in 0..50u64 {
            let d = f.min_degree() + (i as u32) % (6 - f.min_degree());
            let inst = make_family(&k, &FamilySpec { family: f, n: 2, d, seed: 1000 + i }).map_err(|e| e.to_string())?;
            let bound = stopping_bound(&inst.gb, &inst.order).map_err(|e| e.to_string())?;
            let a = run_bms(&inst.oracle, &inst.order, &bound).map_err(|e| e.to_string())?;
            let b = run_bms_linalg(&inst.oracle, &inst.order, &bound).map_err(|e| e.to_string())?;
            check(a == b, format!("bms vs linalg on {f} d={d} seed {i}"))?;
            let r = run_rank_solver(&inst.oracle, &inst.order, &bound).map_err(|e| e.to_string())?;
            check(r.staircase == a.staircase && r.leading_monomials() == a.leading_monomials(), format!("rank solver on {f} d={d} seed {i}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} random ideals"))
}

fn all_algorithms<F: seqrel::field::Field>(oracle: &SequenceOracle<F>, ord: &MonomialOrder, m: &Monomial, t: &MonomialSet) -> Result<usize, String> {
    let mut n = 0;
    for a in Algorithm::ALL {
        let bound = if a.takes_term_set() { Bound::Terms(t.clone()) } else { Bound::Monomial(m.clone()) };
        let run = match run_algorithm(oracle, ord, a, &bound, false) {
            Ok(r) => r,
            // an in-T inconsistency is a refusal, not a relation
            Err(seqrel::compare::CompareError::Sfglm(seqrel::sfglm::SfglmError::Inconsistent(..))) => continue,
            Err(e) => return Err(format!("{a}: {e}")),
        };
        check(verify_relation_set(oracle, &run.relations).map_err(|e| e.to_string())?, format!("{a} emitted an invalid certificate"))?;
        n += run.relations.relations.len();
    }
    Ok(n)
}

fn criterion_7() -> Result<String, String> {
    let q = Rationals::new();
    let mut checked = 0;
    for (g, ord, b) in builtins() {
        let seq = SequenceOracle::generator(&q, g);
        let m = mono(&ord, b);
        let t = if g == Generator::Fib4 {
            MonomialSet::sorted((0..=6).map(|e| Monomial::from_exps(vec![0, 0, e])), &ord)
        } else {
            ord.monomials_of_degree_at_most(3)
        };
        checked += all_algorithms(&seq, &ord, &m, &t)?;
    }
    let k = PrimeField::new(65537).unwrap();
    let o = drl();
    for seed in 0..100u64 {
        let (a, b, c) = (1 + seed % 4, 1 + (seed / 4) % 4, seed % 3);
        // a staircase cut out by x^a, y^b and possibly a mixed corner
        let mut lms = vec![Monomial::from_exps(vec![a as u32, 0]), Monomial::from_exps(vec![0, b as u32])];
        if c > 0 && a > 1 && b > 1 {
            lms.push(Monomial::from_exps(vec![1, c as u32]));
        }
        let (seq, gb) = random_from_lms(&k, &MonomialSet::sorted(lms, &o), &o, seed).map_err(|e| e.to_string())?;
        let bound = stopping_bound(&gb, &o).map_err(|e| e.to_string())?;
        let t = o.monomials_of_degree_at_most(seqrel::bench::d_max(&gb, &o));
        checked += all_algorithms(&seq, &o, &bound, &t)?;
    }
    Ok(format!("{checked} relations certified"))
}

fn criterion_8() -> Result<String, String> {
    let q = Rationals::new();
    for (g, ord, b) in builtins() {
        let seq = SequenceOracle::generator(&q, g);
        let r = run_bms(&seq, &ord, &mono(&ord, b)).map_err(|e| e.to_string())?;
        check(is_zero_dimensional(&r.polys(), &ord), format!("BMS on {} not zero-dimensional", g.name()))?;
    }
    let k = PrimeField::new(65537).unwrap();
    for f in Family::ALL {
        let inst = make_family(&k, &FamilySpec { family: f, n: 2, d: 5, seed: 3 }).map_err(|e| e.to_string())?;
        let r = run_bms(&inst.oracle, &inst.order, &mono(&inst.order, "y^2")).map_err(|e| e.to_string())?;
        check(is_zero_dimensional(&r.polys(), &inst.order), "BMS at a short bound")?;
    }
    let o = drl();
    let bin = SequenceOracle::generator(&q, Generator::Binomial);
    let r = run_sfglm(&bin, &o, &o.monomials_of_degree_at_most(3)).map_err(|e| e.to_string())?;
    check(!is_zero_dimensional(&r.gb, &o), "Scalar-FGLM on binomial deg <= 3 should be positive-dimensional")?;
    Ok("BMS always closed; Scalar-FGLM binomial open".into())
}

fn criterion_9() -> Result<String, String> {
    let k = PrimeField::new(65537).unwrap();
    let o = drl();
    let parse = |s: &str| s.split(',').map(|p| Poly::parse(&k, &o, p).unwrap()).collect::<Vec<_>>();
    let bad = gorenstein_test(&k, &parse("x^2,x*y,y^2"), &o, 10, 2024).map_err(|e| e.to_string())?;
    check(bad.verdict == GorensteinVerdict::NotGorenstein, "<x^2, xy, y^2> verdict")?;
    check(bad.trial_sizes.len() == 10 && bad.trial_sizes.iter().all(|&s| s < bad.staircase_size), format!("trial sizes {:?}", bad.trial_sizes))?;
    let good = gorenstein_test(&k, &parse("y^2,x^2"), &o, 10, 2024).map_err(|e| e.to_string())?;
    check(good.verdict == GorensteinVerdict::GorensteinLikely, "<y^2, x^2> verdict")?;
    let again = gorenstein_test(&k, &parse("x^2,x*y,y^2"), &o, 10, 2024).map_err(|e| e.to_string())?;
    check(again == bad, "determinism under seed")?;
    Ok(format!("trial sizes {:?} vs {:?}", bad.trial_sizes, good.trial_sizes))
}

fn criterion_10() -> Result<String, String> {
    let k = PrimeField::new(65537).unwrap();
    let mut report = Vec::new();
    let mut ok = true;
    for f in Family::ALL {
        for a in [Algorithm::Bms, Algorithm::Sfglm] {
            let mut measured = Vec::new();
            let mut model = Vec::new();
            for d in 4..=10u32 {
                let spec = FamilySpec { family: f, n: 2, d, seed: d as u64 };
                let row = bench_point(&k, &spec, &[a], BenchOptions::default()).map_err(|e| e.to_string())?.remove(0);
                let inst = make_family(&k, &spec).map_err(|e| e.to_string())?;
                measured.push((d as f64, row.mults as f64));
                model.push((d as f64, cost_model(a, &inst.gb, &inst.order, inst.staircase_size)));
            }
            let (sm, se) = (loglog_slope(&measured).unwrap(), loglog_slope(&model).unwrap());
            let hit = (sm - se).abs() <= 0.5;
            ok &= hit;
            report.push(format!("{f}/{a} {sm:.2} vs {se:.2}{}", if hit { "" } else { " (off)" }));
        }
    }
    let line = report.join("; ");
    if ok {
        Ok(line)
    } else {
        Err(line)
    }
}

fn main() {
    let criteria: [(u32, fn() -> Result<String, String>, u64); 10] = [
        (1, criterion_1, 1),
        (2, criterion_2, 5),
        (3, criterion_3, 2),
        (4, criterion_4, 1),
        (5, criterion_5, 30),
        (6, criterion_6, 60),
        (7, criterion_7, 60),
        (8, criterion_8, 5),
        (9, criterion_9, 5),
        (10, criterion_10, 120),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut unexpected = Vec::new();
    for (id, f, limit) in criteria {
        let name = format!("criterion {id}");
        if !filter.is_empty() && !filter.iter().any(|x| name.contains(x.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > Duration::from_secs(limit) => Err(format!("{msg}; took {elapsed:.2?}, limit {limit}s")),
            other => other,
        };
        let known = KNOWN_FAILURES.contains(&id);
        match &outcome {
            Ok(msg) => println!("{name}: PASS ({elapsed:.2?}) {msg}"),
            Err(msg) => println!("{name}: FAIL{} ({elapsed:.2?}) {msg}", if known { " [known]" } else { "" }),
        }
        if outcome.is_ok() == known {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
