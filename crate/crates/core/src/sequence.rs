//! Sequence oracles: closed-form generators, finite tables and sequences
//! defined by a Gröbner basis plus initial values. Every oracle memoizes
//! the entries it hands out and counts distinct indices.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::field::{Field, FieldError};
use crate::monomial::{border, finite_staircase, Monomial, MonomialSet};
use crate::order::{MonomialOrder, OrderError};
use crate::poly::{inter_reduce, Poly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SequenceError {
    #[error("index {index:?} is outside the table (shape {shape:?}); a table of shape {needed:?} is needed")]
    BoundExceeded {
        index: Vec<u32>,
        shape: Vec<usize>,
        needed: Vec<usize>,
    },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator `{0}` takes no parameter `{1}`")]
    UnknownParameter(String, String),
    #[error("index has {got} coordinates, sequence has dimension {want}")]
    Dimension { got: usize, want: usize },
    #[error("the leading monomials do not close a finite staircase")]
    PositiveDimensional,
    #[error("initial values must cover exactly the staircase: {0}")]
    InitialMismatch(String),
    #[error("invalid table: {0}")]
    BadTable(String),
    #[error("invalid sequence spec: {0}")]
    BadSpec(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// The built-in closed-form sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// `C(i, j)`
    Binomial,
    /// `2^i 3^j (i+1)`
    Pow23,
    /// `i^2 + j^2 - 1`
    Sq,
    /// `i^2 + j + [3i + 2j > 9]`
    Step,
    /// `F_{4i+k}` over `(i, j, k)`
    Fib4,
    /// `[i = j = 1]`
    Kron,
}

impl Generator {
    pub const ALL: [Generator; 6] = [
        Generator::Binomial,
        Generator::Pow23,
        Generator::Sq,
        Generator::Step,
        Generator::Fib4,
        Generator::Kron,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Generator::Binomial => "binomial",
            Generator::Pow23 => "pow23",
            Generator::Sq => "sq",
            Generator::Step => "step",
            Generator::Fib4 => "fib4",
            Generator::Kron => "kron",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, SequenceError> {
        Generator::ALL
            .into_iter()
            .find(|g| g.name() == name)
            .ok_or_else(|| SequenceError::UnknownGenerator(name.to_string()))
    }

    pub fn dim(self) -> usize {
        match self {
            Generator::Fib4 => 3,
            _ => 2,
        }
    }

    /// The order the examples for this sequence are phrased in.
    pub fn default_order(self) -> MonomialOrder {
        match self {
            Generator::Fib4 => MonomialOrder::drl(&["z", "y", "x"]),
            _ => MonomialOrder::drl(&["y", "x"]),
        }
    }

    /// Whether the examples need fractions (so Q is the natural field).
    pub fn wants_rationals(self) -> bool {
        matches!(self, Generator::Sq)
    }

    pub fn value(self, idx: &[u32]) -> BigInt {
        let (i, j) = (idx[0] as u64, idx[1] as u64);
        match self {
            Generator::Binomial => binomial(i, j),
            Generator::Pow23 => BigInt::from(2u32).pow(i as u32) * BigInt::from(3u32).pow(j as u32) * BigInt::from(i + 1),
            Generator::Sq => BigInt::from(i * i + j * j) - 1,
            Generator::Step => BigInt::from(i * i + j + u64::from(3 * i + 2 * j > 9)),
            Generator::Fib4 => fibonacci(4 * i + idx[2] as u64),
            Generator::Kron => BigInt::from(u8::from(i == 1 && j == 1)),
        }
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for t in 0..k {
        acc = acc * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    acc
}

fn fibonacci(n: u64) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..n {
        let c = &a + &b;
        a = std::mem::replace(&mut b, c);
    }
    a
}

/// Sequence defined by a Gröbner basis and its values on the staircase.
#[derive(Debug, Clone)]
pub struct IdealSpec<E> {
    pub gb: Vec<Poly<E>>,
    pub order: MonomialOrder,
    pub initial: BTreeMap<Monomial, E>,
}

enum Source<F: Field> {
    Closed(Generator),
    Func(Box<dyn Fn(&[u32]) -> F::Elem + Send + Sync>),
    Table { shape: Vec<usize>, entries: Vec<F::Elem> },
    Ideal(IdealSource<F>),
}

struct IdealSource<F: Field> {
    /// Monic, reduced, sorted ascending by leading monomial.
    gb: Vec<(Monomial, Vec<(Monomial, F::Elem)>)>,
    values: Mutex<HashMap<Monomial, F::Elem>>,
}

/// A memoizing sequence provider with a distinct-query counter.
pub struct SequenceOracle<F: Field> {
    field: F,
    gen_field: F,
    dim: usize,
    source: Source<F>,
    memo: Mutex<HashMap<Vec<u32>, F::Elem>>,
    queries: AtomicU64,
}

impl<F: Field> std::fmt::Debug for SequenceOracle<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match &self.source {
            Source::Closed(g) => g.name(),
            Source::Func(_) => "function",
            Source::Table { .. } => "table",
            Source::Ideal(_) => "ideal",
        };
        f.debug_struct("SequenceOracle")
            .field("dim", &self.dim)
            .field("source", &kind)
            .field("queries", &self.queries())
            .finish()
    }
}

impl<F: Field> SequenceOracle<F> {
    fn with_source(field: &F, dim: usize, source: Source<F>) -> Self {
        SequenceOracle {
            gen_field: field.detached(),
            field: field.clone(),
            dim,
            source,
            memo: Mutex::new(HashMap::new()),
            queries: AtomicU64::new(0),
        }
    }

    /// Oracle over `field`; bracket evaluations are counted on its counter.
    pub fn generator(field: &F, g: Generator) -> Self {
        Self::with_source(field, g.dim(), Source::Closed(g))
    }

    pub fn make_generator(field: &F, name: &str, params: &Value) -> Result<Self, SequenceError> {
        let g = Generator::from_name(name)?;
        if let Some(obj) = params.as_object() {
            if let Some(k) = obj.keys().next() {
                return Err(SequenceError::UnknownParameter(name.into(), k.clone()));
            }
        } else if !params.is_null() {
            return Err(SequenceError::BadSpec("params must be an object".into()));
        }
        Ok(Self::generator(field, g))
    }

    pub fn from_fn<G>(field: &F, dim: usize, f: G) -> Self
    where
        G: Fn(&[u32]) -> F::Elem + Send + Sync + 'static,
    {
        Self::with_source(field, dim, Source::Func(Box::new(f)))
    }

    pub fn zero(field: &F, dim: usize) -> Self {
        let z = field.zero();
        Self::from_fn(field, dim, move |_| z.clone())
    }

    /// Finite table in row-major order (last coordinate fastest).
    pub fn table(field: &F, shape: Vec<usize>, entries: Vec<F::Elem>) -> Result<Self, SequenceError> {
        if shape.is_empty() {
            return Err(SequenceError::BadTable("empty shape".into()));
        }
        let size = shape.iter().try_fold(1usize, |a, &d| a.checked_mul(d));
        if size != Some(entries.len()) {
            return Err(SequenceError::BadTable(format!(
                "shape {shape:?} needs {} entries, got {}",
                size.map_or("too many".to_string(), |s| s.to_string()),
                entries.len()
            )));
        }
        Ok(Self::with_source(field, shape.len(), Source::Table { shape, entries }))
    }

    /// Sequence whose relation ideal contains `spec.gb`, with the given
    /// staircase values.
    pub fn from_ideal(field: &F, spec: &IdealSpec<F::Elem>) -> Result<Self, SequenceError> {
        let ord = &spec.order;
        let k = field.detached();
        let gb = inter_reduce(&k, &spec.gb, ord);
        let lms: Vec<Monomial> = gb.iter().map(|g| g.lm(ord).expect("nonzero").clone()).collect();
        let stair = finite_staircase(&lms, ord).ok_or(SequenceError::PositiveDimensional)?;
        let keys: Vec<&Monomial> = spec.initial.keys().collect();
        if keys.len() != stair.len() || !keys.iter().all(|m| stair.contains(m, ord)) {
            let want: Vec<String> = stair.iter().map(|m| ord.format_monomial(m)).collect();
            let got: Vec<String> = keys.iter().map(|m| ord.format_monomial(m)).collect();
            return Err(SequenceError::InitialMismatch(format!("staircase {want:?}, given {got:?}")));
        }
        let rules = gb
            .iter()
            .map(|g| {
                let lm = g.lm(ord).expect("nonzero").clone();
                let tail = g.terms().filter(|(m, _)| **m != lm).map(|(m, c)| (m.clone(), c.clone())).collect();
                (lm, tail)
            })
            .collect();
        let values = spec.initial.iter().map(|(m, v)| (m.clone(), v.clone())).collect();
        Ok(Self::with_source(
            field,
            ord.nvars(),
            Source::Ideal(IdealSource {
                gb: rules,
                values: Mutex::new(values),
            }),
        ))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Number of distinct indices served so far.
    pub fn queries(&self) -> u64 {
        self.queries.load(AtomicOrdering::Relaxed)
    }

    /// Forgets memoized entries and resets the counter.
    pub fn reset(&self) {
        self.memo.lock().expect("memo lock").clear();
        self.queries.store(0, AtomicOrdering::Relaxed);
    }

    pub fn query(&self, idx: &[u32]) -> Result<F::Elem, SequenceError> {
        if idx.len() != self.dim {
            return Err(SequenceError::Dimension {
                got: idx.len(),
                want: self.dim,
            });
        }
        if let Some(v) = self.memo.lock().expect("memo lock").get(idx) {
            return Ok(v.clone());
        }
        let v = self.compute(idx)?;
        let mut memo = self.memo.lock().expect("memo lock");
        if memo.insert(idx.to_vec(), v.clone()).is_none() {
            self.queries.fetch_add(1, AtomicOrdering::Relaxed);
        }
        Ok(v)
    }

    pub fn query_monomial(&self, m: &Monomial) -> Result<F::Elem, SequenceError> {
        self.query(m.exps())
    }

    fn compute(&self, idx: &[u32]) -> Result<F::Elem, SequenceError> {
        match &self.source {
            Source::Closed(g) => Ok(self.gen_field.from_bigint(&g.value(idx))),
            Source::Func(f) => Ok(f(idx)),
            Source::Table { shape, entries } => {
                let mut flat = 0usize;
                for (&i, &d) in idx.iter().zip(shape) {
                    if i as usize >= d {
                        let needed = idx.iter().zip(shape).map(|(&i, &d)| d.max(i as usize + 1)).collect();
                        return Err(SequenceError::BoundExceeded {
                            index: idx.to_vec(),
                            shape: shape.clone(),
                            needed,
                        });
                    }
                    flat = flat * d + i as usize;
                }
                Ok(entries[flat].clone())
            }
            Source::Ideal(src) => Ok(src.value(&self.gen_field, &Monomial::from_exps(idx.to_vec()))),
        }
    }

    /// `[shift * f] = sum_k c_k u_{k + shift}`.
    pub fn bracket(&self, f: &Poly<F::Elem>, shift: &Monomial) -> Result<F::Elem, SequenceError> {
        let k = &self.field;
        let mut acc = k.zero();
        for (m, c) in f.terms() {
            let u = self.query_monomial(&m.mul(shift))?;
            if !k.is_zero(&u) {
                let prod = k.mul(c, &u);
                acc = k.add(&acc, &prod);
            }
        }
        Ok(acc)
    }
}

impl<F: Field> IdealSource<F> {
    fn value(&self, k: &F, target: &Monomial) -> F::Elem {
        let mut values = self.values.lock().expect("value lock");
        let mut stack = vec![target.clone()];
        while let Some(m) = stack.last().cloned() {
            if values.contains_key(&m) {
                stack.pop();
                continue;
            }
            let (lm, tail) = self
                .gb
                .iter()
                .find(|(lm, _)| lm.divides(&m))
                .expect("monomials outside the staircase are divisible by a leading monomial");
            let t = m.checked_div(lm).expect("divides");
            let missing: Vec<Monomial> = tail.iter().map(|(s, _)| s.mul(&t)).filter(|s| !values.contains_key(s)).collect();
            if !missing.is_empty() {
                stack.extend(missing);
                continue;
            }
            let mut acc = k.zero();
            for (s, c) in tail {
                let u = &values[&s.mul(&t)];
                acc = k.sub(&acc, &k.mul(c, u));
            }
            values.insert(m, acc);
            stack.pop();
        }
        values[target].clone()
    }
}

/// Random zero-dimensional sequence whose relation ideal has exactly the
/// staircase cut out by `lms`.
///
/// The ideal is that of a grid of distinct points indexed by the staircase,
/// which is radical and has the same leading monomials for every order.
/// Returns the oracle and the reduced Gröbner basis.
pub fn random_from_lms<F: Field>(
    field: &F,
    lms: &MonomialSet,
    ord: &MonomialOrder,
    seed: u64,
) -> Result<(SequenceOracle<F>, Vec<Poly<F::Elem>>), SequenceError> {
    let k = field.detached();
    let n = ord.nvars();
    let stair = finite_staircase(lms.as_slice(), ord).ok_or(SequenceError::PositiveDimensional)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let caps: Vec<u32> = (0..n).map(|i| stair.iter().map(|m| m.exps()[i] + 1).max().unwrap_or(0)).collect();
    let coords: Vec<Vec<F::Elem>> = caps
        .iter()
        .map(|&c| {
            let mut vals: Vec<F::Elem> = Vec::new();
            while vals.len() < c as usize {
                let v = k.random(&mut rng);
                if !vals.contains(&v) {
                    vals.push(v);
                }
            }
            vals
        })
        .collect();
    let basis = if stair.is_empty() {
        vec![Poly::monomial(&k, ord.one())]
    } else {
        border(&stair, ord)
            .iter()
            .map(|b| {
                let mut f = Poly::monomial(&k, ord.one());
                for (v, &e) in b.exps().iter().enumerate() {
                    for a in coords[v].iter().take(e as usize) {
                        let lin = Poly::from_terms(&k, [(Monomial::var(n, v), k.one()), (ord.one(), k.neg(a))]);
                        f = mul_poly(&k, &f, &lin);
                    }
                }
                f
            })
            .collect()
    };
    let gb = inter_reduce(&k, &basis, ord);
    let points: Vec<(Vec<F::Elem>, F::Elem)> = stair
        .iter()
        .map(|m| {
            let p = m.exps().iter().enumerate().map(|(v, &e)| coords[v][e as usize].clone()).collect();
            let c = loop {
                let c = k.random(&mut rng);
                if !k.is_zero(&c) {
                    break c;
                }
            };
            (p, c)
        })
        .collect();
    let initial = stair
        .iter()
        .map(|m| {
            let mut acc = k.zero();
            for (p, c) in &points {
                let mut term = c.clone();
                for (v, &e) in m.exps().iter().enumerate() {
                    for _ in 0..e {
                        term = k.mul(&term, &p[v]);
                    }
                }
                acc = k.add(&acc, &term);
            }
            (m.clone(), acc)
        })
        .collect();
    let spec = IdealSpec {
        gb: gb.clone(),
        order: ord.clone(),
        initial,
    };
    Ok((SequenceOracle::from_ideal(field, &spec)?, gb))
}

fn mul_poly<F: Field>(k: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    let mut out = Poly::zero();
    for (m, c) in b.terms() {
        out = out.add(k, &a.mul_monomial(m).scale(k, c));
    }
    out
}

/// Random values for the staircase of `gb` (for the Gorenstein test and
/// generic sequences with prescribed relations).
pub fn random_initial<F: Field>(
    field: &F,
    gb: &[Poly<F::Elem>],
    ord: &MonomialOrder,
    rng: &mut dyn RngCore,
) -> Result<IdealSpec<F::Elem>, SequenceError> {
    let lms: Vec<Monomial> = gb.iter().filter(|g| !g.is_zero()).map(|g| g.lm(ord).expect("nonzero").clone()).collect();
    let stair = finite_staircase(&lms, ord).ok_or(SequenceError::PositiveDimensional)?;
    let initial = stair.iter().map(|m| (m.clone(), field.random(rng))).collect();
    Ok(IdealSpec {
        gb: gb.to_vec(),
        order: ord.clone(),
        initial,
    })
}

/// A sequence description read from JSON.
pub enum SequenceSpec<E> {
    Generator { name: String, params: Value },
    Ideal(IdealSpec<E>),
    Table { shape: Vec<usize>, entries: Vec<E> },
}

/// Parses `{"generator": ..., "params": ...}`, `{"ideal": {gb, order, initial}}`
/// or a finite table `{"dim", "field", "shape", "entries"}`.
pub fn parse_sequence_spec<F: Field>(field: &F, v: &Value) -> Result<SequenceSpec<F::Elem>, SequenceError> {
    let bad = |s: &str| SequenceError::BadSpec(s.to_string());
    let obj = v.as_object().ok_or_else(|| bad("expected a JSON object"))?;
    if let Some(name) = obj.get("generator") {
        let name = name.as_str().ok_or_else(|| bad("generator must be a string"))?;
        return Ok(SequenceSpec::Generator {
            name: name.to_string(),
            params: obj.get("params").cloned().unwrap_or(Value::Null),
        });
    }
    if let Some(ideal) = obj.get("ideal") {
        let order: MonomialOrder = ideal
            .get("order")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("ideal.order must be a string"))?
            .parse()?;
        let gb = ideal
            .get("gb")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("ideal.gb must be an array"))?
            .iter()
            .map(|g| match g {
                Value::String(s) => Poly::parse(field, &order, s),
                other => Poly::from_json(field, &order, other),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut initial = BTreeMap::new();
        let init = ideal.get("initial").ok_or_else(|| bad("ideal.initial is missing"))?;
        let init = init.as_object().ok_or_else(|| bad("ideal.initial must map monomials to values"))?;
        for (m, val) in init {
            let val = match val {
                Value::String(s) => field.parse_elem(s)?,
                Value::Number(x) => field.parse_elem(&x.to_string())?,
                _ => return Err(bad("initial values must be numbers or strings")),
            };
            initial.insert(order.parse_monomial(m)?, val);
        }
        return Ok(SequenceSpec::Ideal(IdealSpec { gb, order, initial }));
    }
    if obj.contains_key("entries") {
        let (shape, entries) = parse_table(field, v)?;
        return Ok(SequenceSpec::Table { shape, entries });
    }
    Err(bad("expected `generator`, `ideal` or a table"))
}

/// Reads a finite-table document; `field` must match the table's field if
/// the document names one.
pub fn parse_table<F: Field>(field: &F, v: &Value) -> Result<(Vec<usize>, Vec<F::Elem>), SequenceError> {
    let bad = |s: &str| SequenceError::BadTable(s.to_string());
    let shape: Vec<usize> = v
        .get("shape")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("shape must be an array"))?
        .iter()
        .map(|d| d.as_u64().and_then(|d| usize::try_from(d).ok()).ok_or_else(|| bad("shape entries must be non-negative integers")))
        .collect::<Result<_, _>>()?;
    if let Some(dim) = v.get("dim") {
        if dim.as_u64() != Some(shape.len() as u64) {
            return Err(bad("dim does not match shape"));
        }
    }
    if let Some(spec) = v.get("field") {
        let spec: crate::field::FieldSpec = spec.as_str().ok_or_else(|| bad("field must be a string"))?.parse()?;
        if spec != field.spec() {
            return Err(bad(&format!("table is over {spec}, run is over {}", field.spec())));
        }
    }
    let entries = v
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("entries must be an array"))?
        .iter()
        .map(|e| match e {
            Value::String(s) => field.parse_elem(s).map_err(SequenceError::from),
            Value::Number(x) => field.parse_elem(&x.to_string()).map_err(SequenceError::from),
            _ => Err(bad("entries must be numbers or strings")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let size = shape.iter().try_fold(1usize, |a, &d| a.checked_mul(d));
    if size != Some(entries.len()) {
        return Err(bad("entry count does not match shape"));
    }
    Ok((shape, entries))
}

impl<E> SequenceSpec<E> {
    pub fn into_oracle<F: Field<Elem = E>>(self, field: &F) -> Result<SequenceOracle<F>, SequenceError> {
        match self {
            SequenceSpec::Generator { name, params } => SequenceOracle::make_generator(field, &name, &params),
            SequenceSpec::Ideal(spec) => SequenceOracle::from_ideal(field, &spec),
            SequenceSpec::Table { shape, entries } => SequenceOracle::table(field, shape, entries),
        }
    }
}
