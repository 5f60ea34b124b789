//! Benchmark families, query and operation accounting, CSV output.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use num_integer::binomial;

use crate::bms::stopping_bound;
use crate::compare::{run_algorithm, Algorithm, Bound, CompareError};
use crate::field::Field;
use crate::monomial::{finite_staircase, Monomial, MonomialSet};
use crate::order::MonomialOrder;
use crate::poly::Poly;
use crate::sequence::{random_from_lms, SequenceError, SequenceOracle};

/// Reference counts for the families, as `kind,family,n,d,algorithm,value`.
pub const REFERENCE_CSV: &str = include_str!("../data/reference.csv");

pub const CSV_HEADER: &str = "family,n,d,algorithm,queries,mults,adds,staircase_size,dmax,wall_ms";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Rectangle,
    LShape,
    Simplex,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Rectangle, Family::LShape, Family::Simplex];

    pub fn name(self) -> &'static str {
        match self {
            Family::Rectangle => "rectangle",
            Family::LShape => "lshape",
            Family::Simplex => "simplex",
        }
    }

    /// Smallest `d` for which the family is defined.
    pub fn min_degree(self) -> u32 {
        match self {
            Family::Rectangle => 4,
            _ => 2,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = CompareError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "rectangle" => Ok(Family::Rectangle),
            "lshape" => Ok(Family::LShape),
            "simplex" => Ok(Family::Simplex),
            _ => Err(CompareError::Invalid(format!("unknown family `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
    pub d: u32,
    pub seed: u64,
}

fn pure(n: usize, var: usize, e: u32) -> Monomial {
    let mut exps = vec![0; n];
    exps[var] = e;
    Monomial::from_exps(exps)
}

/// Leading monomials of the family's Gröbner basis (variables x, y, z are
/// indices 0, 1, 2).
pub fn family_lms(spec: &FamilySpec, ord: &MonomialOrder) -> Result<MonomialSet, CompareError> {
    let (n, d) = (spec.n, spec.d);
    if !(n == 2 || n == 3) || d < 2 {
        return Err(CompareError::Invalid(format!("family needs n in {{2, 3}} and d >= 2, got n={n}, d={d}")));
    }
    let lms: Vec<Monomial> = match spec.family {
        Family::Rectangle => {
            let mut v = vec![pure(n, 0, d), pure(n, 1, d / 2)];
            if n == 3 {
                v.push(pure(n, 2, d.div_ceil(3)));
            }
            v
        }
        Family::LShape => {
            let mut v: Vec<Monomial> = (0..n).map(|i| pure(n, i, d)).collect();
            for i in 0..n {
                for j in i + 1..n {
                    v.push(pure(n, i, 1).mul(&pure(n, j, 1)));
                }
            }
            v
        }
        Family::Simplex => ord.monomials_of_degree_at_most(d).into_iter().filter(|m| m.degree() == d).collect(),
    };
    Ok(MonomialSet::sorted(lms, ord))
}

pub struct Instance<F: Field> {
    pub oracle: SequenceOracle<F>,
    pub gb: Vec<Poly<F::Elem>>,
    pub staircase_size: usize,
    pub order: MonomialOrder,
}

pub fn make_family<F: Field>(k: &F, spec: &FamilySpec) -> Result<Instance<F>, CompareError> {
    let ord = MonomialOrder::drl_n(spec.n);
    let lms = family_lms(spec, &ord)?;
    let (oracle, gb) = random_from_lms(k, &lms, &ord, spec.seed)?;
    let staircase_size = finite_staircase(lms.as_slice(), &ord).ok_or(SequenceError::PositiveDimensional)?.len();
    Ok(Instance {
        oracle,
        gb,
        staircase_size,
        order: ord,
    })
}

/// Largest degree among the staircase and the leading monomials of `gb`.
pub fn d_max<E: Clone + PartialEq>(gb: &[Poly<E>], ord: &MonomialOrder) -> u32 {
    let lms: Vec<Monomial> = gb.iter().filter_map(|g| g.lm(ord).ok().cloned()).collect();
    let stair = finite_staircase(&lms, ord).unwrap_or_default();
    lms.iter().chain(stair.iter()).map(Monomial::degree).max().unwrap_or(0)
}

/// The bound each algorithm receives on a family instance: BMS-type runs
/// go to the end of the degree block of the stopping monomial, Scalar-FGLM
/// gets every monomial of degree at most `d_max`.
pub fn family_bound<E: Clone + PartialEq>(algo: Algorithm, gb: &[Poly<E>], ord: &MonomialOrder) -> Result<Bound, CompareError> {
    if algo.takes_term_set() {
        Ok(Bound::Terms(ord.monomials_of_degree_at_most(d_max(gb, ord))))
    } else {
        let deg = stopping_bound(gb, ord)?.degree();
        Ok(Bound::Monomial(pure(ord.nvars(), ord.largest_var(), deg)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub family: Family,
    pub n: usize,
    pub d: u32,
    pub algorithm: Algorithm,
    pub queries: u64,
    pub mults: u64,
    pub adds: u64,
    pub staircase_size: usize,
    pub dmax: u32,
    pub wall_ms: u64,
}

impl BenchRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.family, self.n, self.d, self.algorithm, self.queries, self.mults, self.adds, self.staircase_size, self.dmax, self.wall_ms
        )
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BenchOptions {
    /// Record wall-clock time; off by default so output is reproducible.
    pub timing: bool,
}

/// Runs `algos` on one family instance.
pub fn bench_point<F: Field>(k: &F, spec: &FamilySpec, algos: &[Algorithm], opts: BenchOptions) -> Result<Vec<BenchRow>, CompareError> {
    let k = k.detached();
    let inst = make_family(&k, spec)?;
    let dmax = d_max(&inst.gb, &inst.order);
    let mut rows = Vec::with_capacity(algos.len());
    for &algo in algos {
        let bound = family_bound(algo, &inst.gb, &inst.order)?;
        let start = Instant::now();
        let run = run_algorithm(&inst.oracle, &inst.order, algo, &bound, false)?;
        let wall_ms = if opts.timing { start.elapsed().as_millis() as u64 } else { 0 };
        if !run.certified {
            return Err(CompareError::Invalid(format!("{algo} produced an uncertified relation on {} d={}", spec.family, spec.d)));
        }
        rows.push(BenchRow {
            family: spec.family,
            n: spec.n,
            d: spec.d,
            algorithm: algo,
            queries: run.queries,
            mults: run.ops.multiplications,
            adds: run.ops.additions,
            staircase_size: inst.staircase_size,
            dmax,
            wall_ms,
        });
    }
    Ok(rows)
}

/// Runs a grid of points on worker threads; rows come back in grid order.
pub fn bench<F: Field>(k: &F, specs: &[FamilySpec], algos: &[Algorithm], opts: BenchOptions) -> Result<Vec<BenchRow>, CompareError> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(specs.len().max(1));
    let mut slots: Vec<Option<Result<Vec<BenchRow>, CompareError>>> = vec![None; specs.len()];
    std::thread::scope(|s| {
        for (w, chunk) in slots.chunks_mut(specs.len().div_ceil(workers).max(1)).enumerate() {
            let base = w * specs.len().div_ceil(workers).max(1);
            s.spawn(move || {
                for (i, slot) in chunk.iter_mut().enumerate() {
                    *slot = Some(bench_point(k, &specs[base + i], algos, opts));
                }
            });
        }
    });
    let mut out = Vec::new();
    for r in slots.into_iter().flatten() {
        out.extend(r?);
    }
    Ok(out)
}

pub fn write_csv<W: Write>(mut w: W, rows: &[BenchRow]) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", r.to_csv())?;
    }
    Ok(())
}

/// Whitespace-separated columns `d queries mults` per algorithm, for
/// plotting tools.
pub fn plot_columns(rows: &[BenchRow], algo: Algorithm) -> String {
    let mut out = String::from("# d queries mults staircase_size\n");
    for r in rows.iter().filter(|r| r.algorithm == algo) {
        out.push_str(&format!("{} {} {} {}\n", r.d, r.queries, r.mults, r.staircase_size));
    }
    out
}

/// `binom(n + k, n)`, the number of monomials of degree at most `k`.
pub fn monomials_up_to(n: usize, k: u32) -> u64 {
    binomial(n as u64 + k as u64, n as u64)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Growth model for the multiplication count of one run:
/// `|S|^2 |LM(G)|` for BMS-type algorithms, plus `|T|^3` for Scalar-FGLM
/// with `T` all monomials of degree at most `d_max`.
pub fn cost_model<E: Clone + PartialEq>(algo: Algorithm, gb: &[Poly<E>], ord: &MonomialOrder, staircase_size: usize) -> f64 {
    let s = staircase_size as f64;
    let lm = gb.len() as f64;
    let base = s * s * lm;
    if algo.takes_term_set() {
        let t = monomials_up_to(ord.nvars(), d_max(gb, ord)) as f64;
        t.powi(3) + base
    } else {
        base
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceRow {
    pub kind: String,
    pub family: Family,
    pub n: usize,
    pub d: u32,
    pub algorithm: Algorithm,
    pub value: u64,
}

pub fn parse_reference(text: &str) -> Result<Vec<ReferenceRow>, CompareError> {
    let bad = |line: &str| CompareError::Invalid(format!("bad reference line `{line}`"));
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#') && !l.starts_with("kind,"))
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 6 {
                return Err(bad(line));
            }
            Ok(ReferenceRow {
                kind: f[0].to_string(),
                family: f[1].parse()?,
                n: f[2].parse().map_err(|_| bad(line))?,
                d: f[3].parse().map_err(|_| bad(line))?,
                algorithm: f[4].parse()?,
                value: f[5].parse().map_err(|_| bad(line))?,
            })
        })
        .collect()
}

/// Reference value for a grid point, if recorded.
pub fn reference_value(kind: &str, family: Family, n: usize, d: u32, algo: Algorithm) -> Option<u64> {
    parse_reference(REFERENCE_CSV)
        .ok()?
        .into_iter()
        .find(|r| r.kind == kind && r.family == family && r.n == n && r.d == d && r.algorithm == algo)
        .map(|r| r.value)
}

/// Parses `a..b` (exclusive) or `a..=b`; an empty range is allowed.
pub fn parse_degree_range(s: &str) -> Result<std::ops::RangeInclusive<u32>, CompareError> {
    let bad = || CompareError::Invalid(format!("bad degree range `{s}`"));
    let s = s.trim();
    if let Some((a, b)) = s.split_once("..=") {
        return Ok(a.trim().parse().map_err(|_| bad())?..=b.trim().parse().map_err(|_| bad())?);
    }
    if let Some((a, b)) = s.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().parse().map_err(|_| bad())?;
        return Ok(match b.checked_sub(1) {
            Some(hi) => a..=hi,
            None => std::ops::RangeInclusive::new(1, 0),
        });
    }
    let d: u32 = s.parse().map_err(|_| bad())?;
    Ok(d..=d)
}
