//! Exponent vectors and divisibility-based set utilities (staircases,
//! borders, corner sets).

use std::collections::BTreeSet;
use std::fmt;

use crate::order::MonomialOrder;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MonomialError {
    #[error("{divisor} does not divide {dividend}")]
    NotDivisible { divisor: String, dividend: String },
    #[error("dimension mismatch: {0} vs {1} variables")]
    Dimension(usize, usize),
}

/// `x^i` as the exponent vector `i`, indexed by ring variable.
///
/// The derived `Ord` is a structural order on exponent vectors used for
/// map keys; it is not a monomial order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial { exps: vec![0; n] }
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut exps = vec![0; n];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Index of the variable if this monomial is a pure power `x_i^k`, k > 0.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut nz = self.exps.iter().enumerate().filter(|(_, &e)| e > 0);
        let (i, _) = nz.next()?;
        nz.next().is_none().then_some(i)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.nvars(), other.nvars());
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `self / divisor`, or `None` when the division is not exact.
    pub fn checked_div(&self, divisor: &Monomial) -> Option<Monomial> {
        divisor.divides(self).then(|| Monomial {
            exps: self.exps.iter().zip(&divisor.exps).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn quotient(&self, divisor: &Monomial) -> Result<Monomial, MonomialError> {
        self.checked_div(divisor)
            .ok_or_else(|| MonomialError::NotDivisible {
                divisor: format!("{divisor:?}"),
                dividend: format!("{self:?}"),
            })
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn mul_var(&self, i: usize) -> Monomial {
        let mut exps = self.exps.clone();
        exps[i] += 1;
        Monomial { exps }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect(),
        }
    }

    /// All divisors, including 1 and the monomial itself.
    pub fn divisors(&self) -> Vec<Monomial> {
        let mut out = vec![Monomial::one(self.nvars())];
        for (i, &e) in self.exps.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
            for d in &out {
                for k in 0..=e {
                    let mut exps = d.exps.clone();
                    exps[i] = k;
                    next.push(Monomial { exps });
                }
            }
            out = next;
        }
        out
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{:?}", self.exps)
    }
}

/// Distinct monomials kept sorted ascending under the order used to build
/// the set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MonomialSet {
    elems: Vec<Monomial>,
}

impl MonomialSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn sorted<I: IntoIterator<Item = Monomial>>(items: I, ord: &MonomialOrder) -> Self {
        let mut elems: Vec<Monomial> = items.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        elems.sort_by(|a, b| ord.cmp(a, b));
        MonomialSet { elems }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Monomial> {
        self.elems.iter()
    }

    pub fn as_slice(&self) -> &[Monomial] {
        &self.elems
    }

    pub fn contains(&self, m: &Monomial, ord: &MonomialOrder) -> bool {
        self.position(m, ord).is_some()
    }

    pub fn position(&self, m: &Monomial, ord: &MonomialOrder) -> Option<usize> {
        self.elems.binary_search_by(|e| ord.cmp(e, m)).ok()
    }

    pub fn max(&self) -> Option<&Monomial> {
        self.elems.last()
    }

    pub fn min(&self) -> Option<&Monomial> {
        self.elems.first()
    }

    pub fn union(&self, other: &MonomialSet, ord: &MonomialOrder) -> MonomialSet {
        MonomialSet::sorted(self.elems.iter().chain(&other.elems).cloned(), ord)
    }

    pub fn difference(&self, other: &MonomialSet, ord: &MonomialOrder) -> MonomialSet {
        MonomialSet {
            elems: self.elems.iter().filter(|m| !other.contains(m, ord)).cloned().collect(),
        }
    }

    pub fn into_vec(self) -> Vec<Monomial> {
        self.elems
    }
}

impl IntoIterator for MonomialSet {
    type Item = Monomial;
    type IntoIter = std::vec::IntoIter<Monomial>;

    fn into_iter(self) -> Self::IntoIter {
        self.elems.into_iter()
    }
}

impl<'a> IntoIterator for &'a MonomialSet {
    type Item = &'a Monomial;
    type IntoIter = std::slice::Iter<'a, Monomial>;

    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

/// Divisor closure of `s`.
pub fn stabilize(s: &MonomialSet, ord: &MonomialOrder) -> MonomialSet {
    let mut all = BTreeSet::new();
    for m in s {
        if all.contains(m) {
            continue;
        }
        all.extend(m.divisors());
    }
    MonomialSet::sorted(all, ord)
}

pub fn is_stable(s: &MonomialSet, ord: &MonomialOrder) -> bool {
    let members: BTreeSet<&Monomial> = s.iter().collect();
    s.iter().all(|m| {
        (0..m.nvars()).all(|i| {
            if m.exps()[i] == 0 {
                return true;
            }
            let mut e = m.exps().to_vec();
            e[i] -= 1;
            members.contains(&Monomial::from_exps(e))
        })
    }) && (s.is_empty() || s.contains(&Monomial::one(ord.nvars()), ord))
}

/// Minimal monomials outside the stable set `s`.
pub fn border(s: &MonomialSet, ord: &MonomialOrder) -> MonomialSet {
    let n = ord.nvars();
    if s.is_empty() {
        return MonomialSet::sorted([Monomial::one(n)], ord);
    }
    let members: BTreeSet<&Monomial> = s.iter().collect();
    let mut cand = BTreeSet::new();
    for m in s {
        for i in 0..n {
            let t = m.mul_var(i);
            if !members.contains(&t) {
                cand.insert(t);
            }
        }
    }
    let cand: Vec<Monomial> = cand.into_iter().collect();
    let minimal = cand
        .iter()
        .filter(|t| !cand.iter().any(|u| u != *t && u.divides(t)))
        .cloned();
    MonomialSet::sorted(minimal, ord)
}

/// Maximal elements under divisibility (the corner set of a staircase).
pub fn max_divisibility(s: &MonomialSet, ord: &MonomialOrder) -> MonomialSet {
    let keep = s
        .iter()
        .filter(|m| !s.iter().any(|o| o != *m && m.divides(o)))
        .cloned();
    MonomialSet::sorted(keep, ord)
}

pub fn min_divisibility(s: &MonomialSet, ord: &MonomialOrder) -> MonomialSet {
    let keep = s
        .iter()
        .filter(|m| !s.iter().any(|o| o != *m && o.divides(m)))
        .cloned();
    MonomialSet::sorted(keep, ord)
}

/// Monomials `⪯ bound` not divisible by any of `lms`.
pub fn staircase_below(lms: &[Monomial], bound: &Monomial, ord: &MonomialOrder) -> Result<MonomialSet, crate::order::OrderError> {
    let all = ord.enumerate_up_to(bound)?;
    Ok(MonomialSet::sorted(
        all.into_vec().into_iter().filter(|m| !lms.iter().any(|l| l.divides(m))),
        ord,
    ))
}

/// The full finite staircase of a set of leading monomials, or `None` when
/// some variable has no pure power among them.
pub fn finite_staircase(lms: &[Monomial], ord: &MonomialOrder) -> Option<MonomialSet> {
    let n = ord.nvars();
    let mut caps = vec![None::<u32>; n];
    for l in lms {
        if l.is_one() {
            return Some(MonomialSet::new());
        }
        if let Some(i) = l.pure_power_var() {
            let e = l.exps()[i];
            caps[i] = Some(caps[i].map_or(e, |c: u32| c.min(e)));
        }
    }
    let caps: Vec<u32> = caps.into_iter().collect::<Option<_>>()?;
    let mut out = vec![Monomial::one(n)];
    let mut frontier = vec![Monomial::one(n)];
    let mut seen: BTreeSet<Monomial> = frontier.iter().cloned().collect();
    if lms.iter().any(|l| l.divides(&out[0])) {
        return Some(MonomialSet::new());
    }
    while let Some(m) = frontier.pop() {
        for i in 0..n {
            if m.exps()[i] + 1 >= caps[i] {
                continue;
            }
            let t = m.mul_var(i);
            if seen.contains(&t) || lms.iter().any(|l| l.divides(&t)) {
                continue;
            }
            seen.insert(t.clone());
            out.push(t.clone());
            frontier.push(t);
        }
    }
    Some(MonomialSet::sorted(out, ord))
}
