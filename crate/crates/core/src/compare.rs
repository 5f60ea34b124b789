//! Cross-algorithm checks: shift certificates, ideal containment, the
//! Gorenstein test, and a uniform runner producing comparison reports.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::bms::{format_trace, run_bms_with, BmsError, BmsOptions, Variant};
use crate::field::{Field, OpCounts};
use crate::monomial::{border, finite_staircase, stabilize, Monomial, MonomialSet};
use crate::order::MonomialOrder;
use crate::poly::{is_zero_dimensional, normal_form, Poly, PolyError, Relation, RelationSet, Shift};
use crate::rank_solver::{run_rank_solver, RankSolverError};
use crate::sequence::{random_initial, SequenceError, SequenceOracle};
use crate::sfglm::{run_sfglm, run_sfglm_tweaked, SfglmError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompareError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Bms(#[from] BmsError),
    #[error(transparent)]
    Sfglm(#[from] SfglmError),
    #[error(transparent)]
    Rank(#[from] RankSolverError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("{0}")]
    Invalid(String),
}

impl CompareError {
    /// The oracle error underneath, if any.
    pub fn sequence_error(&self) -> Option<&SequenceError> {
        match self {
            CompareError::Sequence(e)
            | CompareError::Bms(BmsError::Sequence(e))
            | CompareError::Sfglm(SfglmError::Sequence(e))
            | CompareError::Rank(RankSolverError::Sequence(e)) => Some(e),
            _ => None,
        }
    }
}

/// True iff `[m g] = 0` for every `m` in `shifts`.
pub fn verify_shift<F: Field>(oracle: &SequenceOracle<F>, g: &Poly<F::Elem>, shifts: &MonomialSet) -> Result<bool, SequenceError> {
    let k = oracle.field();
    for m in shifts {
        if !k.is_zero(&oracle.bracket(g, m)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks every relation of `set` against its own certificate.
pub fn verify_relation_set<F: Field>(oracle: &SequenceOracle<F>, set: &RelationSet<F::Elem>) -> Result<bool, CompareError> {
    for r in &set.relations {
        let shifts = r.shift.shifts(&set.order).map_err(PolyError::from)?;
        if !verify_shift(oracle, &r.poly, &shifts)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn total_degree<E: Clone + PartialEq>(p: &Poly<E>) -> u32 {
    p.support().map(Monomial::degree).max().unwrap_or(0)
}

/// Whether each element of `small` is `sum h_g g` over `g` in `big` with
/// every product of total degree at most `window`.
pub fn ideal_contains_at_truncation<F: Field>(k: &F, big: &[Poly<F::Elem>], small: &[Poly<F::Elem>], ord: &MonomialOrder, window: u32) -> bool {
    // echelon form of all admissible products, keyed by leading monomial
    let mut pivots: BTreeMap<Monomial, Poly<F::Elem>> = BTreeMap::new();
    let reduce = |mut p: Poly<F::Elem>, pivots: &BTreeMap<Monomial, Poly<F::Elem>>| -> Poly<F::Elem> {
        let mut done = Poly::zero();
        while let Ok((m, c)) = p.lt(ord).map(|(m, c)| (m.clone(), c.clone())) {
            match pivots.get(&m) {
                Some(piv) => p = p.sub_scaled_shifted(k, &c, &ord.one(), piv),
                None => {
                    done.add_term(k, m.clone(), &c);
                    p = p.sub(k, &Poly::term(k, m, c));
                }
            }
        }
        done
    };
    for g in big.iter().filter(|g| !g.is_zero()) {
        let dg = total_degree(g);
        if dg > window {
            continue;
        }
        for mu in ord.monomials_of_degree_at_most(window - dg) {
            let r = reduce(g.mul_monomial(&mu), &pivots);
            if let Ok(lm) = r.lm(ord).cloned() {
                pivots.insert(lm, r.make_monic(k, ord));
            }
        }
    }
    small.iter().all(|f| f.is_zero() || (total_degree(f) <= window && reduce(f.clone(), &pivots).is_zero()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GorensteinVerdict {
    GorensteinLikely,
    NotGorenstein,
}

impl fmt::Display for GorensteinVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GorensteinVerdict::GorensteinLikely => "Gorenstein-likely",
            GorensteinVerdict::NotGorenstein => "NotGorenstein",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GorensteinReport {
    pub verdict: GorensteinVerdict,
    /// Staircase size of the relation ideal found in each trial.
    pub trial_sizes: Vec<usize>,
    pub staircase_size: usize,
}

/// Random sequences with relations `J`: if one of them has a strictly larger
/// relation ideal in every trial, `J` is not Gorenstein.
pub fn gorenstein_test<F: Field>(k: &F, gb: &[Poly<F::Elem>], ord: &MonomialOrder, trials: usize, seed: u64) -> Result<GorensteinReport, CompareError> {
    let lms: Vec<Monomial> = gb.iter().filter(|g| !g.is_zero()).map(|g| g.lm(ord).expect("nonzero").clone()).collect();
    let stair = finite_staircase(&lms, ord).ok_or(SequenceError::PositiveDimensional)?;
    // shifts covering S*S and the border, closed under division
    let mut t: Vec<Monomial> = Vec::new();
    for a in &stair {
        for b in &stair {
            t.push(a.mul(b));
        }
    }
    t.extend(border(&stair, ord));
    let t = stabilize(&MonomialSet::sorted(t, ord), ord);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sizes = Vec::with_capacity(trials);
    for _ in 0..trials {
        let spec = random_initial(k, gb, ord, &mut rng)?;
        let oracle = SequenceOracle::from_ideal(&k.detached(), &spec)?;
        let r = run_sfglm(&oracle, ord, &t)?;
        for g in gb {
            // J is always among the relations
            debug_assert!(normal_form(oracle.field(), g, &r.gb, ord).is_zero());
        }
        sizes.push(r.useful_staircase.len());
    }
    let verdict = if sizes.iter().any(|&s| s < stair.len()) {
        GorensteinVerdict::NotGorenstein
    } else {
        GorensteinVerdict::GorensteinLikely
    };
    Ok(GorensteinReport {
        verdict,
        trial_sizes: sizes,
        staircase_size: stair.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Bms,
    BmsLinalg,
    BmsTweaked,
    Sfglm,
    SfglmTweaked,
    Rank,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Bms,
        Algorithm::BmsLinalg,
        Algorithm::BmsTweaked,
        Algorithm::Sfglm,
        Algorithm::SfglmTweaked,
        Algorithm::Rank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Bms => "bms",
            Algorithm::BmsLinalg => "bms-linalg",
            Algorithm::BmsTweaked => "bms-tweaked",
            Algorithm::Sfglm => "sfglm",
            Algorithm::SfglmTweaked => "sfglm-tweaked",
            Algorithm::Rank => "rank",
        }
    }

    /// Whether the algorithm takes a set of shifts rather than a stopping
    /// monomial.
    pub fn takes_term_set(self) -> bool {
        matches!(self, Algorithm::Sfglm | Algorithm::SfglmTweaked)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = CompareError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s.trim())
            .ok_or_else(|| CompareError::Invalid(format!("unknown algorithm `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    Monomial(Monomial),
    Terms(MonomialSet),
}

#[derive(Debug, Clone)]
pub struct AlgoRun<E> {
    pub algorithm: Algorithm,
    pub relations: RelationSet<E>,
    pub queries: u64,
    pub ops: OpCounts,
    pub certified: bool,
    pub zero_dimensional: bool,
    /// Rejected out-of-T candidates (tweaked Scalar-FGLM).
    pub rejected: Vec<(Monomial, Monomial)>,
    pub trace: Option<String>,
}

/// Runs one algorithm on a freshly reset oracle, recording queries and
/// field operations, then checks every certificate.
pub fn run_algorithm<F: Field>(oracle: &SequenceOracle<F>, ord: &MonomialOrder, algo: Algorithm, bound: &Bound, trace: bool) -> Result<AlgoRun<F::Elem>, CompareError> {
    oracle.reset();
    let k = oracle.field();
    let before = k.counter().snapshot();
    let mut rejected = Vec::new();
    let mut trace_text = None;
    let relations = match (algo, bound) {
        (Algorithm::Bms | Algorithm::BmsLinalg | Algorithm::BmsTweaked, Bound::Monomial(m)) => {
            let variant = match algo {
                Algorithm::BmsLinalg => Variant::Linalg,
                Algorithm::BmsTweaked => Variant::Tweaked,
                _ => Variant::Plain,
            };
            let run = run_bms_with(oracle, ord, m, &BmsOptions { variant, trace })?;
            if trace {
                trace_text = Some(format_trace(k, ord, &run.trace));
            }
            run.relations
        }
        (Algorithm::Rank, Bound::Monomial(m)) => run_rank_solver(oracle, ord, m)?,
        (Algorithm::Sfglm | Algorithm::SfglmTweaked, Bound::Terms(t)) => {
            let r = if algo == Algorithm::Sfglm { run_sfglm(oracle, ord, t)? } else { run_sfglm_tweaked(oracle, ord, t)? };
            rejected = r.rejected.clone();
            r.relation_set(ord)
        }
        _ => return Err(CompareError::Invalid(format!("{algo} needs a {} bound", if algo.takes_term_set() { "term-set" } else { "monomial" }))),
    };
    let ops = k.counter().snapshot().since(&before);
    let queries = oracle.queries();
    let certified = verify_relation_set(oracle, &relations)?;
    let zero_dimensional = is_zero_dimensional(&relations.polys(), ord);
    Ok(AlgoRun {
        algorithm: algo,
        relations,
        queries,
        ops,
        certified,
        zero_dimensional,
        rejected,
        trace: trace_text,
    })
}

#[derive(Debug, Clone)]
pub struct ComparisonReport<E> {
    pub runs: Vec<AlgoRun<E>>,
    /// `(i, j, holds)`: the ideal of run `i` lies in the ideal of run `j`
    /// within the degree window.
    pub containment: Vec<(usize, usize, bool)>,
    pub window: u32,
}

pub fn compare<F: Field>(oracle: &SequenceOracle<F>, ord: &MonomialOrder, runs: &[(Algorithm, Bound)]) -> Result<ComparisonReport<F::Elem>, CompareError> {
    let k = oracle.field();
    let done: Vec<AlgoRun<F::Elem>> = runs.iter().map(|(a, b)| run_algorithm(oracle, ord, *a, b, false)).collect::<Result<_, _>>()?;
    let window = done
        .iter()
        .flat_map(|r| r.relations.relations.iter().map(|x| total_degree(&x.poly)))
        .max()
        .unwrap_or(0)
        + 1;
    let mut containment = Vec::new();
    for (i, a) in done.iter().enumerate() {
        for (j, b) in done.iter().enumerate() {
            if i != j {
                let holds = ideal_contains_at_truncation(&k.detached(), &b.relations.polys(), &a.relations.polys(), ord, window);
                containment.push((i, j, holds));
            }
        }
    }
    Ok(ComparisonReport {
        runs: done,
        containment,
        window,
    })
}

fn monomials_json(ord: &MonomialOrder, s: &[Monomial]) -> Value {
    Value::Array(s.iter().map(|m| Value::String(ord.format_monomial(m))).collect())
}

fn shift_json(ord: &MonomialOrder, s: &Shift) -> Value {
    match s {
        Shift::Zero => json!({"kind": "zero"}),
        Shift::UpTo(m) => json!({"kind": "up_to", "monomial": ord.format_monomial(m)}),
        Shift::Set(set) => json!({"kind": "set", "monomials": monomials_json(ord, set.as_slice())}),
    }
}

pub fn relation_set_to_json<F: Field>(k: &F, set: &RelationSet<F::Elem>) -> Value {
    let ord = &set.order;
    json!({
        "order": ord.to_string(),
        "field": k.spec().to_string(),
        "relations": set.relations.iter().map(|r| json!({
            "poly": r.poly.to_text(k, ord),
            "leading_monomial": r.poly.lm(ord).map(|m| ord.format_monomial(m)).unwrap_or_default(),
            "shift": shift_json(ord, &r.shift),
        })).collect::<Vec<_>>(),
        "staircase": monomials_json(ord, set.staircase.as_slice()),
        "open": monomials_json(ord, &set.open),
    })
}

/// Inverse of [`relation_set_to_json`]; the field must match the document.
pub fn relation_set_from_json<F: Field>(k: &F, v: &Value) -> Result<RelationSet<F::Elem>, CompareError> {
    let bad = |s: &str| CompareError::Invalid(format!("relation set JSON: {s}"));
    let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
    let ord: MonomialOrder = obj
        .get("order")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("missing order"))?
        .parse()
        .map_err(|e: crate::order::OrderError| bad(&e.to_string()))?;
    if let Some(f) = obj.get("field").and_then(Value::as_str) {
        if f != k.spec().to_string() {
            return Err(bad(&format!("field {f} does not match {}", k.spec())));
        }
    }
    let mono = |v: &Value| -> Result<Monomial, CompareError> {
        let s = v.as_str().ok_or_else(|| bad("monomial must be a string"))?;
        ord.parse_monomial(s).map_err(|e| bad(&e.to_string()))
    };
    let monos = |v: Option<&Value>| -> Result<Vec<Monomial>, CompareError> {
        match v {
            None => Ok(Vec::new()),
            Some(Value::Array(a)) => a.iter().map(mono).collect(),
            Some(_) => Err(bad("expected an array of monomials")),
        }
    };
    let mut relations = Vec::new();
    for r in obj.get("relations").and_then(Value::as_array).ok_or_else(|| bad("missing relations"))? {
        let text = r.get("poly").and_then(Value::as_str).ok_or_else(|| bad("missing poly"))?;
        let poly = Poly::parse(k, &ord, text)?;
        if poly.is_zero() {
            return Err(bad("zero relation"));
        }
        let s = r.get("shift").ok_or_else(|| bad("missing shift"))?;
        let shift = match s.get("kind").and_then(Value::as_str) {
            Some("zero") => Shift::Zero,
            Some("up_to") => Shift::UpTo(mono(s.get("monomial").ok_or_else(|| bad("missing shift monomial"))?)?),
            Some("set") => Shift::Set(MonomialSet::sorted(monos(s.get("monomials"))?, &ord)),
            _ => return Err(bad("unknown shift kind")),
        };
        relations.push(Relation { poly, shift });
    }
    let staircase = MonomialSet::sorted(monos(obj.get("staircase"))?, &ord);
    let open = monos(obj.get("open"))?;
    Ok(RelationSet {
        relations,
        staircase,
        order: ord,
        open,
    })
}

pub fn ops_json(ops: &OpCounts) -> Value {
    json!({
        "additions": ops.additions,
        "multiplications": ops.multiplications,
        "inversions": ops.inversions,
    })
}

pub fn run_to_json<F: Field>(k: &F, run: &AlgoRun<F::Elem>) -> Value {
    let ord = &run.relations.order;
    let mut v = json!({
        "algorithm": run.algorithm.name(),
        "result": relation_set_to_json(k, &run.relations),
        "queries": run.queries,
        "ops": ops_json(&run.ops),
        "certified": run.certified,
        "zero_dimensional": run.zero_dimensional,
    });
    if !run.rejected.is_empty() {
        v["rejected"] = run
            .rejected
            .iter()
            .map(|(c, r)| json!({"candidate": ord.format_monomial(c), "failing_row": ord.format_monomial(r)}))
            .collect();
    }
    v
}

pub fn report_to_json<F: Field>(k: &F, report: &ComparisonReport<F::Elem>) -> Value {
    json!({
        "runs": report.runs.iter().map(|r| run_to_json(k, r)).collect::<Vec<_>>(),
        "window": report.window,
        "containment": report.containment.iter().map(|(i, j, h)| json!({
            "ideal_of": report.runs[*i].algorithm.name(),
            "contained_in": report.runs[*j].algorithm.name(),
            "holds": h,
        })).collect::<Vec<_>>(),
    })
}

/// Column-aligned text rendering of a run.
pub fn run_to_text<F: Field>(k: &F, run: &AlgoRun<F::Elem>) -> String {
    let ord = &run.relations.order;
    let polys: Vec<String> = run.relations.relations.iter().map(|r| r.poly.to_text(k, ord)).collect();
    let width = polys.iter().map(String::len).max().unwrap_or(0);
    let mut out = format!("{}\n", run.algorithm);
    for (p, r) in polys.iter().zip(&run.relations.relations) {
        out.push_str(&format!("  {p:<width$}  shift {}\n", r.shift.to_text(ord)));
    }
    for m in &run.relations.open {
        out.push_str(&format!("  open: {}\n", ord.format_monomial(m)));
    }
    out.push_str(&format!(
        "  staircase size {}  queries {}  mults {}  adds {}  certified {}  zero-dimensional {}\n",
        run.relations.staircase.len(),
        run.queries,
        run.ops.multiplications,
        run.ops.additions,
        run.certified,
        run.zero_dimensional
    ));
    out
}

/// Pairs of runs whose polynomial sets differ.
pub fn differing_outputs<E: Clone + PartialEq>(report: &ComparisonReport<E>) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..report.runs.len() {
        for j in i + 1..report.runs.len() {
            let (a, b) = (&report.runs[i].relations, &report.runs[j].relations);
            let same = a.relations.len() == b.relations.len() && a.polys().iter().all(|p| b.polys().contains(p));
            if !same {
                out.push((i, j));
            }
        }
    }
    out
}

/// Sorts polynomials by leading monomial.
pub fn sort_by_lm<E: Clone + PartialEq>(polys: &mut [Poly<E>], ord: &MonomialOrder) {
    polys.sort_by(|a, b| match (a.lm(ord), b.lm(ord)) {
        (Ok(x), Ok(y)) => ord.cmp(x, y),
        _ => Ordering::Equal,
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::sequence::Generator;

    fn drl() -> MonomialOrder {
        "drl(y<x)".parse().unwrap()
    }

    fn polys(k: &Rationals, o: &MonomialOrder, s: &[&str]) -> Vec<Poly<num_rational::BigRational>> {
        s.iter().map(|p| Poly::parse(k, o, p).unwrap()).collect()
    }

    #[test]
    fn shift_verification() {
        let k = Rationals::new();
        let o = drl();
        let bin = SequenceOracle::generator(&k, Generator::Binomial);
        let pascal = Poly::parse(&k, &o, "x*y - y - 1").unwrap();
        assert!(verify_shift(&bin, &pascal, &o.monomials_of_degree_at_most(5)).unwrap());
        let g = Poly::parse(&k, &o, "x^2 - x").unwrap();
        let one = MonomialSet::sorted([o.one()], &o);
        assert!(verify_shift(&bin, &g, &one).unwrap());
        let two = MonomialSet::sorted([o.one(), o.parse_monomial("y").unwrap()], &o);
        assert!(!verify_shift(&bin, &g, &two).unwrap());
        assert_eq!(bin.bracket(&g, &o.parse_monomial("y").unwrap()).unwrap(), k.one());
        assert!(verify_shift(&bin, &Poly::zero(), &two).unwrap());
    }

    #[test]
    fn containment() {
        let k = Rationals::new();
        let o = drl();
        let big = polys(&k, &o, &["x*y - y - 1"]);
        let small = polys(&k, &o, &["x*y - y - 1", "y^3", "x^3 - 3*x^2 + 3*x - 1"]);
        assert!(!ideal_contains_at_truncation(&k, &big, &small, &o, 6));
        assert!(ideal_contains_at_truncation(&k, &small, &big, &o, 6));
        assert!(ideal_contains_at_truncation(&k, &small, &small, &o, 3));
        assert!(ideal_contains_at_truncation(&k, &big, &[], &o, 0));
        // y*(xy - y - 1) + (xy - y - 1) needs degree 3
        let combo = polys(&k, &o, &["x*y^2 + x*y - y^2 - 2*y - 1"]);
        assert!(!ideal_contains_at_truncation(&k, &big, &combo, &o, 2));
        assert!(ideal_contains_at_truncation(&k, &big, &combo, &o, 3));
    }

    #[test]
    fn gorenstein() {
        let k = PrimeField::new(65537).unwrap();
        let o = drl();
        let parse = |s: &str| s.split(',').map(|p| Poly::parse(&k, &o, p).unwrap()).collect::<Vec<_>>();
        let r = gorenstein_test(&k, &parse("x^2,x*y,y^2"), &o, 10, 7).unwrap();
        assert_eq!(r.verdict, GorensteinVerdict::NotGorenstein);
        assert!(r.trial_sizes.iter().all(|&s| s < 3));
        let r = gorenstein_test(&k, &parse("y^2,x^2"), &o, 10, 7).unwrap();
        assert_eq!(r.verdict, GorensteinVerdict::GorensteinLikely);
        let r = gorenstein_test(&k, &parse("x - 5,y + 2"), &o, 3, 1).unwrap();
        assert_eq!(r.verdict, GorensteinVerdict::GorensteinLikely);
        assert!(gorenstein_test(&k, &parse("x*y"), &o, 1, 1).is_err());
    }

    #[test]
    fn runner_and_reports() {
        let k = Rationals::new();
        let o = drl();
        let bin = SequenceOracle::generator(&k, Generator::Binomial);
        let x5 = Bound::Monomial(o.parse_monomial("x^5").unwrap());
        let t3 = Bound::Terms(o.monomials_of_degree_at_most(3));
        let rep = compare(&bin, &o, &[(Algorithm::Bms, x5.clone()), (Algorithm::Sfglm, t3.clone())]).unwrap();
        assert!(rep.runs[0].zero_dimensional);
        assert!(!rep.runs[1].zero_dimensional);
        assert!(rep.runs.iter().all(|r| r.certified));
        // sFGLM ideal inside BMS ideal, not the other way round
        assert!(rep.containment.contains(&(1, 0, true)));
        assert!(rep.containment.contains(&(0, 1, false)));
        assert_eq!(rep.runs[1].queries, 28);
        let same = compare(&bin, &o, &[(Algorithm::Bms, x5.clone()), (Algorithm::Bms, x5.clone())]).unwrap();
        assert!(differing_outputs(&same).is_empty());
        assert_eq!(same.runs[0].queries, same.runs[1].queries);
        assert!(run_algorithm(&bin, &o, Algorithm::Sfglm, &x5, false).is_err());
        let text = run_to_text(&k, &rep.runs[0]);
        assert!(text.contains("x*y - y - 1"));
        let v = report_to_json(&k, &rep);
        assert_eq!(v["runs"][0]["algorithm"], "bms");
    }

    #[test]
    fn json_round_trip() {
        let k = Rationals::new();
        let o = drl();
        let sq = SequenceOracle::generator(&k, Generator::Sq);
        for (a, b) in [
            (Algorithm::Bms, Bound::Monomial(o.parse_monomial("y^5").unwrap())),
            (Algorithm::Sfglm, Bound::Terms(o.monomials_of_degree_at_most(3))),
        ] {
            let run = run_algorithm(&sq, &o, a, &b, false).unwrap();
            let v = relation_set_to_json(&k, &run.relations);
            let back = relation_set_from_json(&k, &v).unwrap();
            assert_eq!(back, run.relations);
            assert_eq!(verify_relation_set(&sq, &back).unwrap(), run.certified);
        }
        let f = PrimeField::new(7).unwrap();
        let v = json!({"order": "drl(y<x)", "field": "Q", "relations": []});
        assert!(relation_set_from_json(&f, &v).is_err());
    }

    #[test]
    fn algorithm_names() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("nope".parse::<Algorithm>().is_err());
    }
}
