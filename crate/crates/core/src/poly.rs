//! Sparse multivariate polynomials, reduction and relation sets.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Signed};
use serde_json::{json, Value};

use crate::field::{format_ratio, parse_rational, Field, FieldError};
use crate::monomial::{finite_staircase, staircase_below, Monomial, MonomialSet};
use crate::order::{MonomialOrder, OrderError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("zero polynomial has no leading term")]
    Zero,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("cannot parse polynomial `{0}`")]
    Syntax(String),
}

/// A polynomial as a map from exponent vectors to nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly<E> {
    terms: BTreeMap<Monomial, E>,
}

impl<E: Clone> Default for Poly<E> {
    fn default() -> Self {
        Poly { terms: BTreeMap::new() }
    }
}

impl<E: Clone + PartialEq> Poly<E> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term<F: Field<Elem = E>>(k: &F, m: Monomial, c: E) -> Self {
        let mut p = Self::zero();
        if !k.is_zero(&c) {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn monomial<F: Field<Elem = E>>(k: &F, m: Monomial) -> Self {
        Self::term(k, m, k.one())
    }

    pub fn from_terms<F: Field<Elem = E>, I: IntoIterator<Item = (Monomial, E)>>(k: &F, items: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in items {
            p.add_term(k, m, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&E> {
        self.terms.get(m)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &E)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    /// Terms sorted descending under `ord`.
    pub fn sorted_terms(&self, ord: &MonomialOrder) -> Vec<(&Monomial, &E)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| ord.cmp(b.0, a.0));
        v
    }

    pub fn lm(&self, ord: &MonomialOrder) -> Result<&Monomial, PolyError> {
        self.terms
            .keys()
            .max_by(|a, b| ord.cmp(a, b))
            .ok_or(PolyError::Zero)
    }

    pub fn lc(&self, ord: &MonomialOrder) -> Result<&E, PolyError> {
        let m = self.lm(ord)?;
        Ok(&self.terms[m])
    }

    pub fn lt(&self, ord: &MonomialOrder) -> Result<(&Monomial, &E), PolyError> {
        let m = self.lm(ord)?;
        Ok((m, &self.terms[m]))
    }

    /// `self += c * m`.
    pub fn add_term<F: Field<Elem = E>>(&mut self, k: &F, m: Monomial, c: &E) {
        if k.is_zero(c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = k.add(v, c);
                if k.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add<F: Field<Elem = E>>(&self, k: &F, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(k, m.clone(), c);
        }
        out
    }

    pub fn sub<F: Field<Elem = E>>(&self, k: &F, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(k, m.clone(), &k.neg(c));
        }
        out
    }

    pub fn scale<F: Field<Elem = E>>(&self, k: &F, c: &E) -> Self {
        if k.is_zero(c) {
            return Self::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), k.mul(v, c))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Poly {
            terms: self.terms.iter().map(|(t, v)| (t.mul(m), v.clone())).collect(),
        }
    }

    /// `self - c * m * other`, the reduction/combination kernel.
    pub fn sub_scaled_shifted<F: Field<Elem = E>>(&self, k: &F, c: &E, m: &Monomial, other: &Self) -> Self {
        let mut out = self.clone();
        if k.is_zero(c) {
            return out;
        }
        for (t, v) in &other.terms {
            let prod = k.mul(c, v);
            out.add_term(k, t.mul(m), &k.neg(&prod));
        }
        out
    }

    pub fn make_monic<F: Field<Elem = E>>(&self, k: &F, ord: &MonomialOrder) -> Self {
        match self.lc(ord) {
            Ok(c) if *c != k.one() => {
                let inv = k.inv(c).expect("leading coefficient is nonzero");
                self.scale(k, &inv)
            }
            _ => self.clone(),
        }
    }

    pub fn to_text<F: Field<Elem = E>>(&self, k: &F, ord: &MonomialOrder) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.sorted_terms(ord).into_iter().enumerate() {
            let r = k.to_ratio(c);
            let neg = r.is_negative();
            let a = r.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = ord.format_monomial(m);
            if m.is_one() {
                out.push_str(&format_ratio(&a));
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", format_ratio(&a), mono));
            }
        }
        out
    }

    pub fn parse<F: Field<Elem = E>>(k: &F, ord: &MonomialOrder, text: &str) -> Result<Self, PolyError> {
        let bad = || PolyError::Syntax(text.to_string());
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !cur.ends_with('^') {
                if !cur.is_empty() {
                    pieces.push((neg, std::mem::take(&mut cur)));
                } else if !pieces.is_empty() || neg {
                    return Err(bad());
                }
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(bad());
        }
        pieces.push((neg, cur));
        let mut p = Self::zero();
        for (neg, piece) in pieces {
            let mut coeff = num_rational::BigRational::one();
            let mut mono = ord.one();
            for factor in piece.split('*') {
                if factor.is_empty() {
                    return Err(bad());
                }
                if factor.starts_with(|c: char| c.is_ascii_digit()) {
                    coeff *= parse_rational(factor).ok_or_else(bad)?;
                } else {
                    mono = mono.mul(&ord.parse_monomial(factor)?);
                }
            }
            if neg {
                coeff = -coeff;
            }
            let c = k.from_ratio(&coeff)?;
            p.add_term(k, mono, &c);
        }
        Ok(p)
    }

    pub fn to_json<F: Field<Elem = E>>(&self, k: &F, ord: &MonomialOrder) -> Value {
        Value::Array(
            self.sorted_terms(ord)
                .into_iter()
                .map(|(m, c)| json!({"monomial": ord.format_monomial(m), "coefficient": format_ratio(&k.to_ratio(c))}))
                .collect(),
        )
    }

    pub fn from_json<F: Field<Elem = E>>(k: &F, ord: &MonomialOrder, v: &Value) -> Result<Self, PolyError> {
        let bad = || PolyError::Syntax(v.to_string());
        let arr = v.as_array().ok_or_else(bad)?;
        let mut p = Self::zero();
        for t in arr {
            let m = t.get("monomial").and_then(Value::as_str).ok_or_else(bad)?;
            let c = match t.get("coefficient").ok_or_else(bad)? {
                Value::String(s) => k.parse_elem(s)?,
                Value::Number(n) => k.parse_elem(&n.to_string())?,
                _ => return Err(bad()),
            };
            p.add_term(k, ord.parse_monomial(m)?, &c);
        }
        Ok(p)
    }
}

/// `f1 - (e1/e2) * f2`.
pub fn combine_failing<F: Field>(k: &F, f1: &Poly<F::Elem>, f2: &Poly<F::Elem>, e1: &F::Elem, e2: &F::Elem) -> Result<Poly<F::Elem>, FieldError> {
    let c = k.div(e1, e2)?;
    Ok(f1.sub_scaled_shifted(k, &c, &Monomial::one(nvars_of(f1, f2)), f2))
}

fn nvars_of<E>(a: &Poly<E>, b: &Poly<E>) -> usize {
    a.terms.keys().chain(b.terms.keys()).next().map_or(0, Monomial::nvars)
}

/// Remainder and quotients of multivariate division of `f` by `g`.
///
/// The largest reducible monomial is treated first and the divisor with the
/// smallest leading monomial is used.
pub fn divide<F: Field>(k: &F, f: &Poly<F::Elem>, g: &[Poly<F::Elem>], ord: &MonomialOrder) -> (Poly<F::Elem>, Vec<Poly<F::Elem>>) {
    let mut divisors: Vec<(usize, Monomial, F::Elem)> = g
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(i, p)| {
            let (m, c) = p.lt(ord).expect("nonzero");
            (i, m.clone(), c.clone())
        })
        .collect();
    divisors.sort_by(|a, b| ord.cmp(&a.1, &b.1));
    let mut quotients = vec![Poly::zero(); g.len()];
    let mut rem = Poly::zero();
    let mut p = f.clone();
    while let Ok((m, c)) = p.lt(ord) {
        let (m, c) = (m.clone(), c.clone());
        match divisors.iter().find(|d| d.1.divides(&m)) {
            Some((i, lm, lc)) => {
                let q = k.div(&c, lc).expect("nonzero leading coefficient");
                let t = m.checked_div(lm).expect("divides");
                p = p.sub_scaled_shifted(k, &q, &t, &g[*i]);
                quotients[*i].add_term(k, t, &q);
            }
            None => {
                p.terms.remove(&m);
                rem.terms.insert(m, c);
            }
        }
    }
    (rem, quotients)
}

pub fn normal_form<F: Field>(k: &F, f: &Poly<F::Elem>, g: &[Poly<F::Elem>], ord: &MonomialOrder) -> Poly<F::Elem> {
    divide(k, f, g, ord).0
}

/// Autoreduced, monic version of `g`, sorted by leading monomial: every
/// element is fully reduced by the others and zero remainders are dropped.
pub fn inter_reduce<F: Field>(k: &F, g: &[Poly<F::Elem>], ord: &MonomialOrder) -> Vec<Poly<F::Elem>> {
    let mut polys: Vec<Poly<F::Elem>> = g.iter().filter(|p| !p.is_zero()).map(|p| p.make_monic(k, ord)).collect();
    loop {
        polys.sort_by(|a, b| ord.cmp(a.lm(ord).expect("nonzero"), b.lm(ord).expect("nonzero")));
        polys.dedup();
        let mut changed = false;
        let mut i = 0;
        while i < polys.len() {
            let others: Vec<Poly<F::Elem>> = polys.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
            let r = normal_form(k, &polys[i], &others, ord);
            if r != polys[i] {
                changed = true;
                if r.is_zero() {
                    polys.remove(i);
                    continue;
                }
                polys[i] = r.make_monic(k, ord);
            }
            i += 1;
        }
        if !changed {
            return polys;
        }
    }
}

/// Staircase of the leading monomials of `g`: the full finite staircase when
/// it is closed, otherwise the part below `bound`.
pub fn staircase_of<E: Clone + PartialEq>(g: &[Poly<E>], ord: &MonomialOrder, bound: Option<&Monomial>) -> Result<MonomialSet, PolyError> {
    let lms: Vec<Monomial> = g.iter().filter(|p| !p.is_zero()).map(|p| p.lm(ord).expect("nonzero").clone()).collect();
    if let Some(s) = finite_staircase(&lms, ord) {
        return Ok(match bound {
            Some(b) => MonomialSet::sorted(s.into_vec().into_iter().filter(|m| ord.cmp(m, b) != Ordering::Greater), ord),
            None => s,
        });
    }
    let b = bound.ok_or_else(|| PolyError::Order(OrderError::Unsupported("unbounded staircase".into())))?;
    Ok(staircase_below(&lms, b, ord)?)
}

/// How far a relation is known to hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shift {
    /// Never tested: the relation was only added for its leading monomial.
    Zero,
    /// Valid for every shift `t ⪯ v`.
    UpTo(Monomial),
    /// Valid for every shift in the set.
    Set(MonomialSet),
}

impl Shift {
    /// The shift monomials covered by the certificate.
    pub fn shifts(&self, ord: &MonomialOrder) -> Result<MonomialSet, OrderError> {
        match self {
            Shift::Zero => Ok(MonomialSet::new()),
            Shift::UpTo(v) => ord.enumerate_up_to(v),
            Shift::Set(s) => Ok(s.clone()),
        }
    }

    pub fn to_text(&self, ord: &MonomialOrder) -> String {
        match self {
            Shift::Zero => "0".into(),
            Shift::UpTo(v) => ord.format_monomial(v),
            Shift::Set(s) => format!("{{{}}}", s.iter().map(|m| ord.format_monomial(m)).collect::<Vec<_>>().join(", ")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation<E> {
    pub poly: Poly<E>,
    pub shift: Shift,
}

/// Output of every solver: relations with certificates, the staircase and
/// diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSet<E> {
    pub relations: Vec<Relation<E>>,
    pub staircase: MonomialSet,
    pub order: MonomialOrder,
    /// Leading monomials for which no valid relation could be solved.
    pub open: Vec<Monomial>,
}

impl<E: Clone + PartialEq> RelationSet<E> {
    pub fn polys(&self) -> Vec<Poly<E>> {
        self.relations.iter().map(|r| r.poly.clone()).collect()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.relations.iter().map(|r| r.poly.lm(&self.order).expect("nonzero relation").clone()).collect()
    }

    pub fn is_minimal(&self) -> bool {
        let lms = self.leading_monomials();
        lms.iter().enumerate().all(|(i, a)| lms.iter().enumerate().all(|(j, b)| i == j || !a.divides(b)))
    }

    pub fn to_text<F: Field<Elem = E>>(&self, k: &F) -> String {
        let mut out = String::new();
        for r in &self.relations {
            out.push_str(&format!("{}    [shift {}]\n", r.poly.to_text(k, &self.order), r.shift.to_text(&self.order)));
        }
        out
    }

    /// Relations rendered as text, in output order.
    pub fn texts<F: Field<Elem = E>>(&self, k: &F) -> Vec<String> {
        self.relations.iter().map(|r| r.poly.to_text(k, &self.order)).collect()
    }
}

pub fn is_zero_dimensional<E: Clone + PartialEq>(g: &[Poly<E>], ord: &MonomialOrder) -> bool {
    let mut covered = vec![false; ord.nvars()];
    for p in g.iter().filter(|p| !p.is_zero()) {
        let lm = p.lm(ord).expect("nonzero");
        if lm.is_one() {
            return true;
        }
        if let Some(i) = lm.pure_power_var() {
            covered[i] = true;
        }
    }
    !covered.is_empty() && covered.iter().all(|&c| c)
}
