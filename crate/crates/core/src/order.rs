//! Monomial orders (DRL, LEX, weight matrices), successor walks and the
//! text syntax for orders and monomials.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::{format_ratio, parse_rational};
use crate::monomial::{Monomial, MonomialSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrderError {
    #[error("invalid order spec `{0}`")]
    Syntax(String),
    #[error("weight matrix must be {0}x{0}")]
    MatrixShape(usize),
    #[error("weight matrix is singular")]
    Singular,
    #[error("weight matrix does not define a monomial order (a variable is not above 1)")]
    NotMonomialOrder,
    #[error("operation needs a weight order (finite down-sets); {0} is not one")]
    Unsupported(String),
    #[error("cannot parse monomial `{0}`")]
    BadMonomial(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderKind {
    Drl,
    Lex,
    /// Rows as written (rational) and the same rows scaled to integers.
    Weight {
        rows: Vec<Vec<BigRational>>,
        scaled: Vec<Vec<i128>>,
    },
}

/// A monomial order together with its variable names and precedence.
///
/// Ring variables are indexed canonically (`x, y, z` or `x1..xn`), while
/// `precedence` lists ring indices from the largest variable to the
/// smallest one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOrder {
    kind: OrderKind,
    names: Vec<String>,
    precedence: Vec<usize>,
}

impl MonomialOrder {
    /// Builds an order; `smallest_first` names the variables as in
    /// `z<y<x`.
    pub fn new(kind: OrderKind, smallest_first: &[&str]) -> Result<Self, OrderError> {
        let listed: Vec<String> = smallest_first.iter().rev().map(|s| s.to_string()).collect();
        if listed.is_empty() {
            return Err(OrderError::Syntax("no variables".into()));
        }
        for (i, a) in listed.iter().enumerate() {
            let ok = !a.is_empty()
                && a.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && a.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok || listed[..i].contains(a) {
                return Err(OrderError::Syntax(listed.join("<")));
            }
        }
        let names = canonical_names(&listed);
        let precedence = listed
            .iter()
            .map(|v| names.iter().position(|n| n == v).expect("name present"))
            .collect();
        let n = names.len();
        if let OrderKind::Weight { rows, .. } = &kind {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(OrderError::MatrixShape(n));
            }
            if determinant(rows).is_zero() {
                return Err(OrderError::Singular);
            }
            // each variable must sit above 1: first nonzero entry per column positive
            for c in 0..n {
                let first = rows.iter().map(|r| &r[c]).find(|v| !v.is_zero());
                if !first.is_some_and(|v| v.is_positive()) {
                    return Err(OrderError::NotMonomialOrder);
                }
            }
        }
        Ok(MonomialOrder { kind, names, precedence })
    }

    pub fn drl(smallest_first: &[&str]) -> Self {
        Self::new(OrderKind::Drl, smallest_first).expect("valid variable list")
    }

    pub fn lex(smallest_first: &[&str]) -> Self {
        Self::new(OrderKind::Lex, smallest_first).expect("valid variable list")
    }

    pub fn weight(rows: Vec<Vec<BigRational>>, smallest_first: &[&str]) -> Result<Self, OrderError> {
        let scaled = rows
            .iter()
            .map(|r| {
                let l = r.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
                r.iter()
                    .map(|v| (v * BigRational::from_integer(l.clone())).to_integer().to_i128())
                    .collect::<Option<Vec<i128>>>()
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| OrderError::Syntax("weight entries too large".into()))?;
        Self::new(OrderKind::Weight { rows, scaled }, smallest_first)
    }

    /// `drl` with `n` variables named canonically, `x_n < ... < x_1`.
    pub fn drl_n(n: usize) -> Self {
        let names = default_names(n);
        let refs: Vec<&str> = names.iter().rev().map(String::as_str).collect();
        Self::drl(&refs)
    }

    pub fn kind(&self) -> &OrderKind {
        &self.kind
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Ring indices from the largest variable to the smallest.
    pub fn precedence(&self) -> &[usize] {
        &self.precedence
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn one(&self) -> Monomial {
        Monomial::one(self.nvars())
    }

    pub fn largest_var(&self) -> usize {
        self.precedence[0]
    }

    pub fn smallest_var(&self) -> usize {
        *self.precedence.last().expect("at least one variable")
    }

    fn permuted(&self, m: &Monomial) -> impl DoubleEndedIterator<Item = u32> + '_ {
        let e = m.exps().to_vec();
        self.precedence.iter().map(move |&i| e[i])
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.nvars(), b.nvars());
        match &self.kind {
            OrderKind::Drl => a.degree().cmp(&b.degree()).then_with(|| {
                for &i in self.precedence.iter().rev() {
                    let (ea, eb) = (a.exps()[i], b.exps()[i]);
                    if ea != eb {
                        return eb.cmp(&ea);
                    }
                }
                Ordering::Equal
            }),
            OrderKind::Lex => {
                for &i in &self.precedence {
                    let (ea, eb) = (a.exps()[i], b.exps()[i]);
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                }
                Ordering::Equal
            }
            OrderKind::Weight { scaled, .. } => {
                for row in scaled {
                    let wa = self.dot(row, a);
                    let wb = self.dot(row, b);
                    if wa != wb {
                        return wa.cmp(&wb);
                    }
                }
                Ordering::Equal
            }
        }
    }

    fn dot(&self, row: &[i128], m: &Monomial) -> i128 {
        row.iter().zip(self.permuted(m)).map(|(w, e)| w * e as i128).sum()
    }

    pub fn max<'a>(&self, a: &'a Monomial, b: &'a Monomial) -> &'a Monomial {
        if self.cmp(a, b) == Ordering::Less {
            b
        } else {
            a
        }
    }

    pub fn is_weight_order(&self) -> bool {
        match &self.kind {
            OrderKind::Drl => true,
            OrderKind::Lex => self.nvars() == 1,
            OrderKind::Weight { scaled, .. } => scaled[0].iter().all(|&w| w > 0),
        }
    }

    fn unsupported(&self) -> OrderError {
        OrderError::Unsupported(self.to_string())
    }

    /// The least monomial strictly above `m`.
    pub fn successor(&self, m: &Monomial) -> Result<Monomial, OrderError> {
        match &self.kind {
            OrderKind::Drl => Ok(self.drl_successor(m)),
            OrderKind::Lex if self.nvars() == 1 => Ok(m.mul_var(0)),
            OrderKind::Lex => Err(self.unsupported()),
            OrderKind::Weight { scaled, .. } => {
                if !self.is_weight_order() {
                    return Err(self.unsupported());
                }
                let w0 = &scaled[0];
                let lo = self.dot(w0, m);
                let hi = lo + w0.iter().min().copied().expect("nonempty row");
                let mut best: Option<Monomial> = None;
                self.for_each_in_weight_band(w0, lo, hi, &mut |c| {
                    if self.cmp(&c, m) == Ordering::Greater
                        && best.as_ref().is_none_or(|b| self.cmp(&c, b) == Ordering::Less)
                    {
                        best = Some(c);
                    }
                });
                Ok(best.expect("m times the lightest variable lies in the band"))
            }
        }
    }

    fn drl_successor(&self, m: &Monomial) -> Monomial {
        let n = self.nvars();
        // r[0] is the exponent of the smallest variable
        let mut r: Vec<u32> = self.permuted(m).rev().collect();
        match (0..n.saturating_sub(1)).rev().find(|&i| r[i] > 0) {
            Some(i) => {
                r[i] -= 1;
                let tail: u32 = r[i + 1..].iter().sum();
                r[i + 1] = 1 + tail;
                for v in &mut r[i + 2..] {
                    *v = 0;
                }
            }
            None => {
                let d = m.degree();
                r = vec![0; n];
                r[0] = d + 1;
            }
        }
        let mut exps = vec![0; n];
        for (k, &i) in self.precedence.iter().rev().enumerate() {
            exps[i] = r[k];
        }
        Monomial::from_exps(exps)
    }

    fn for_each_in_weight_band(&self, w: &[i128], lo: i128, hi: i128, f: &mut dyn FnMut(Monomial)) {
        let n = self.nvars();
        let mut perm_exps = vec![0u32; n];
        fn rec(
            k: usize,
            acc: i128,
            w: &[i128],
            lo: i128,
            hi: i128,
            e: &mut Vec<u32>,
            emit: &mut dyn FnMut(&[u32]),
        ) {
            if k == w.len() {
                if acc >= lo {
                    emit(e);
                }
                return;
            }
            let mut v = 0u32;
            while acc + w[k] * v as i128 <= hi {
                e[k] = v;
                rec(k + 1, acc + w[k] * v as i128, w, lo, hi, e, emit);
                v += 1;
            }
            e[k] = 0;
        }
        let prec = self.precedence.clone();
        rec(0, 0, w, lo, hi, &mut perm_exps, &mut |pe| {
            let mut exps = vec![0; n];
            for (k, &i) in prec.iter().enumerate() {
                exps[i] = pe[k];
            }
            f(Monomial::from_exps(exps));
        });
    }

    /// All monomials `⪯ bound`, ascending.
    ///
    /// For LEX this is only finite when `bound` is a power of the smallest
    /// variable, which is the one case accepted.
    pub fn enumerate_up_to(&self, bound: &Monomial) -> Result<MonomialSet, OrderError> {
        match &self.kind {
            OrderKind::Lex => {
                let s = self.smallest_var();
                if bound.is_one() || bound.pure_power_var() == Some(s) || self.nvars() == 1 {
                    let k = bound.exps()[s];
                    let items = (0..=k).map(|e| {
                        let mut exps = vec![0; self.nvars()];
                        exps[s] = e;
                        Monomial::from_exps(exps)
                    });
                    return Ok(MonomialSet::sorted(items, self));
                }
                Err(self.unsupported())
            }
            OrderKind::Drl => {
                let mut out = vec![self.one()];
                while self.cmp(out.last().expect("nonempty"), bound) == Ordering::Less {
                    let next = self.drl_successor(out.last().expect("nonempty"));
                    out.push(next);
                }
                if self.cmp(out.last().expect("nonempty"), bound) == Ordering::Greater {
                    out.pop();
                }
                Ok(MonomialSet::sorted(out, self))
            }
            OrderKind::Weight { scaled, .. } => {
                if !self.is_weight_order() {
                    return Err(self.unsupported());
                }
                let hi = self.dot(&scaled[0], bound);
                let mut out = Vec::new();
                self.for_each_in_weight_band(&scaled[0], 0, hi, &mut |c| {
                    if self.cmp(&c, bound) != Ordering::Greater {
                        out.push(c);
                    }
                });
                Ok(MonomialSet::sorted(out, self))
            }
        }
    }

    /// All monomials of total degree at most `d`.
    pub fn monomials_of_degree_at_most(&self, d: u32) -> MonomialSet {
        let n = self.nvars();
        let mut out = vec![self.one()];
        let mut layer = vec![self.one()];
        for _ in 0..d {
            let mut next = std::collections::BTreeSet::new();
            for m in &layer {
                for i in 0..n {
                    next.insert(m.mul_var(i));
                }
            }
            layer = next.into_iter().collect();
            out.extend(layer.iter().cloned());
        }
        MonomialSet::sorted(out, self)
    }

    pub fn parse_monomial(&self, s: &str) -> Result<Monomial, OrderError> {
        let bad = || OrderError::BadMonomial(s.to_string());
        let t = s.trim();
        let mut exps = vec![0u32; self.nvars()];
        if t == "1" {
            return Ok(Monomial::from_exps(exps));
        }
        if t.is_empty() {
            return Err(bad());
        }
        for factor in t.split('*') {
            let factor = factor.trim();
            let (name, pow) = match factor.split_once('^') {
                Some((v, p)) => (v.trim(), p.trim().parse::<u32>().map_err(|_| bad())?),
                None => (factor, 1),
            };
            if name == "1" && pow >= 1 {
                continue;
            }
            let i = self
                .var_index(name)
                .ok_or_else(|| OrderError::UnknownVariable(name.to_string()))?;
            exps[i] = exps[i].checked_add(pow).ok_or_else(bad)?;
        }
        Ok(Monomial::from_exps(exps))
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = self
            .precedence
            .iter()
            .filter(|&&i| m.exps()[i] > 0)
            .map(|&i| match m.exps()[i] {
                1 => self.names[i].clone(),
                e => format!("{}^{}", self.names[i], e),
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

fn default_names(n: usize) -> Vec<String> {
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

fn canonical_names(listed: &[String]) -> Vec<String> {
    let n = listed.len();
    let mut sorted = listed.to_vec();
    sorted.sort();
    let abc = default_names(n.min(3));
    if n <= 3 && sorted == abc {
        return abc;
    }
    let indexed: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let mut idx_sorted = indexed.clone();
    idx_sorted.sort();
    if sorted == idx_sorted {
        return indexed;
    }
    listed.to_vec()
}

fn determinant(rows: &[Vec<BigRational>]) -> BigRational {
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            for k in c..n {
                let v = &f * &a[c][k];
                a[r][k] -= v;
            }
        }
    }
    det
}

impl FromStr for MonomialOrder {
    type Err = OrderError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || OrderError::Syntax(s.to_string());
        let t = s.trim();
        let open = t.find('(').ok_or_else(bad)?;
        let body = t[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let head = t[..open].trim().to_ascii_lowercase();
        let (matrix, vars) = match head.as_str() {
            "weight" => {
                let (m, v) = body.rsplit_once(';').ok_or_else(bad)?;
                (Some(m.trim()), v)
            }
            "drl" | "lex" => (None, body),
            _ => return Err(bad()),
        };
        let names: Vec<&str> = vars.split('<').map(str::trim).collect();
        if names.iter().any(|v| v.is_empty()) {
            return Err(bad());
        }
        match (head.as_str(), matrix) {
            ("drl", None) => MonomialOrder::new(OrderKind::Drl, &names),
            ("lex", None) => MonomialOrder::new(OrderKind::Lex, &names),
            (_, Some(m)) => MonomialOrder::weight(parse_matrix(m).ok_or_else(bad)?, &names),
            _ => Err(bad()),
        }
    }
}

fn parse_matrix(s: &str) -> Option<Vec<Vec<BigRational>>> {
    let inner = s.trim().strip_prefix('[')?.strip_suffix(']')?.trim();
    let mut rows = Vec::new();
    let mut rest = inner;
    while !rest.is_empty() {
        let r = rest.strip_prefix('[')?;
        let close = r.find(']')?;
        let row = r[..close]
            .split(',')
            .map(parse_rational)
            .collect::<Option<Vec<_>>>()?;
        rows.push(row);
        rest = r[close + 1..].trim_start();
        if let Some(after) = rest.strip_prefix(',') {
            rest = after.trim_start();
            if rest.is_empty() {
                return None;
            }
        } else if !rest.is_empty() {
            return None;
        }
    }
    (!rows.is_empty()).then_some(rows)
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<&str> = self.precedence.iter().rev().map(|&i| self.names[i].as_str()).collect();
        let vars = vars.join("<");
        match &self.kind {
            OrderKind::Drl => write!(f, "drl({vars})"),
            OrderKind::Lex => write!(f, "lex({vars})"),
            OrderKind::Weight { rows, .. } => {
                let rows: Vec<String> = rows
                    .iter()
                    .map(|r| format!("[{}]", r.iter().map(format_ratio).collect::<Vec<_>>().join(",")))
                    .collect();
                write!(f, "weight([{}];{vars})", rows.join(","))
            }
        }
    }
}
