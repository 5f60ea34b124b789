//! The Berlekamp–Massey–Sakata algorithm, its matrix-vector variant and
//! the inter-reducing variant.

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::field::Field;
use crate::hankel::MultiHankel;
use crate::monomial::{border, finite_staircase, max_divisibility, stabilize, Monomial, MonomialSet};
use crate::order::{MonomialOrder, OrderError};
use crate::poly::{inter_reduce, Poly, PolyError, Relation, RelationSet, Shift};
use crate::sequence::{SequenceError, SequenceOracle};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BmsError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// A relation that failed, stored normalized so that its bracket at the
/// failing shift is 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailRecord<E> {
    pub h: Poly<E>,
    /// `fail(h) / LM(h)`.
    pub ratio: Monomial,
    pub fail_at: Monomial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BmsState<E> {
    /// Current relations, ascending by leading monomial.
    pub g: Vec<Poly<E>>,
    pub records: Vec<FailRecord<E>>,
    pub staircase: MonomialSet,
    /// Last processed monomial.
    pub m: Option<Monomial>,
}

impl<E: Clone + PartialEq> BmsState<E> {
    pub fn new<F: Field<Elem = E>>(k: &F, ord: &MonomialOrder) -> Self {
        BmsState {
            g: vec![Poly::monomial(k, ord.one())],
            records: Vec::new(),
            staircase: MonomialSet::new(),
            m: None,
        }
    }
}

/// How brackets are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Evaluator {
    /// `[q g]` straight from the oracle.
    #[default]
    Bracket,
    /// `H_{{q}, supp g} * coeffs(g)`.
    Hankel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    #[default]
    Plain,
    Linalg,
    Tweaked,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UpdateKind {
    Translate,
    Combine,
}

/// Per-monomial events, in processing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent<E> {
    Fail { lm: Monomial, value: E },
    Succeed { lm: Monomial },
    StaircaseAdd(Vec<Monomial>),
    Update { before: Poly<E>, after: Poly<E>, kind: UpdateKind },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep<E> {
    pub m: Monomial,
    pub events: Vec<TraceEvent<E>>,
    /// Relations after the step.
    pub g: Vec<Poly<E>>,
}

impl<E: Clone + PartialEq> TraceStep<E> {
    pub fn staircase_additions(&self) -> Vec<Monomial> {
        self.events
            .iter()
            .flat_map(|e| match e {
                TraceEvent::StaircaseAdd(v) => v.clone(),
                _ => Vec::new(),
            })
            .collect()
    }

    pub fn combinations(&self) -> Vec<&Poly<E>> {
        self.events
            .iter()
            .filter_map(|e| match e {
                TraceEvent::Update { after, kind: UpdateKind::Combine, .. } => Some(after),
                _ => None,
            })
            .collect()
    }
}

pub fn format_trace<F: Field>(k: &F, ord: &MonomialOrder, trace: &[TraceStep<F::Elem>]) -> String {
    let mono = |m: &Monomial| ord.format_monomial(m);
    let poly = |p: &Poly<F::Elem>| p.to_text(k, ord);
    let mut out = String::new();
    for step in trace {
        let _ = writeln!(out, "monomial {}", mono(&step.m));
        for e in &step.events {
            let _ = match e {
                TraceEvent::Fail { lm, value } => writeln!(out, "  relation with LM {} fails: {}", mono(lm), k.format(value)),
                TraceEvent::Succeed { lm } => writeln!(out, "  relation with LM {} succeeds", mono(lm)),
                TraceEvent::StaircaseAdd(v) => {
                    writeln!(out, "  staircase gains {}", v.iter().map(mono).collect::<Vec<_>>().join(", "))
                }
                TraceEvent::Update { before, after, kind } => {
                    let how = match kind {
                        UpdateKind::Translate => "translate",
                        UpdateKind::Combine => "combine",
                    };
                    writeln!(out, "  {} -> {} ({how})", poly(before), poly(after))
                }
            };
        }
        let _ = writeln!(out, "  G = {{{}}}", step.g.iter().map(poly).collect::<Vec<_>>().join(", "));
    }
    out
}

#[derive(Debug, Clone)]
pub struct BmsOptions {
    pub variant: Variant,
    pub trace: bool,
}

impl Default for BmsOptions {
    fn default() -> Self {
        BmsOptions {
            variant: Variant::Plain,
            trace: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BmsRun<E> {
    pub relations: RelationSet<E>,
    pub trace: Vec<TraceStep<E>>,
    pub state: BmsState<E>,
}

fn evaluate<F: Field>(oracle: &SequenceOracle<F>, ord: &MonomialOrder, g: &Poly<F::Elem>, q: &Monomial, how: Evaluator) -> Result<F::Elem, SequenceError> {
    match how {
        Evaluator::Bracket => oracle.bracket(g, q),
        Evaluator::Hankel => {
            let k = oracle.field();
            let terms = g.sorted_terms(ord);
            let cols: Vec<Monomial> = terms.iter().map(|(m, _)| (*m).clone()).collect();
            let h = MultiHankel::build(oracle, std::slice::from_ref(q), &cols)?;
            let mut acc = k.zero();
            for (v, (_, c)) in h.entries[0].iter().zip(&terms) {
                if !k.is_zero(v) {
                    acc = k.add(&acc, &k.mul(c, v));
                }
            }
            Ok(acc)
        }
    }
}

fn lm<'a, E: Clone + PartialEq>(p: &'a Poly<E>, ord: &MonomialOrder) -> &'a Monomial {
    p.lm(ord).expect("relations are nonzero")
}

/// One iteration at monomial `m`.
pub fn step<F: Field>(
    state: &mut BmsState<F::Elem>,
    m: &Monomial,
    oracle: &SequenceOracle<F>,
    ord: &MonomialOrder,
    how: Evaluator,
    events: Option<&mut Vec<TraceEvent<F::Elem>>>,
) -> Result<(), BmsError> {
    let k = oracle.field();
    let mut log = Vec::new();
    let mut discrepancy: Vec<Option<F::Elem>> = Vec::with_capacity(state.g.len());
    let mut records = state.records.clone();
    for g in &state.g {
        let l = lm(g, ord);
        let Some(q) = m.checked_div(l) else {
            discrepancy.push(None);
            continue;
        };
        let e = evaluate(oracle, ord, g, &q, how)?;
        if k.is_zero(&e) {
            log.push(TraceEvent::Succeed { lm: l.clone() });
        } else {
            log.push(TraceEvent::Fail { lm: l.clone(), value: e.clone() });
            let inv = k.inv(&e).map_err(PolyError::from)?;
            records.push(FailRecord {
                h: g.scale(k, &inv),
                ratio: q,
                fail_at: m.clone(),
            });
        }
        discrepancy.push(Some(e));
    }

    let records = prune(records, ord);
    let ratios = MonomialSet::sorted(records.iter().map(|r| r.ratio.clone()), ord);
    let staircase = stabilize(&ratios.union(&state.staircase, ord), ord);
    let added: Vec<Monomial> = staircase.difference(&state.staircase, ord).into_vec();
    if !added.is_empty() {
        log.push(TraceEvent::StaircaseAdd(added));
    }

    let mut next = Vec::new();
    for b in border(&staircase, ord) {
        let (i, g) = state
            .g
            .iter()
            .enumerate()
            .filter(|(_, g)| lm(g, ord).divides(&b))
            .min_by(|(_, a), (_, c)| ord.cmp(lm(a, ord), lm(c, ord)))
            .ok_or_else(|| BmsError::Internal(format!("no relation divides border monomial {}", ord.format_monomial(&b))))?;
        let t = b.checked_div(lm(g, ord)).expect("divides");
        let translated = g.mul_monomial(&t);
        let (new, kind) = match (&discrepancy[i], m.checked_div(&b)) {
            (Some(e), Some(q)) if !k.is_zero(e) => {
                let h = state
                    .records
                    .iter()
                    .filter(|h| q.divides(&h.ratio))
                    .max_by(|a, c| ord.cmp(&a.fail_at, &c.fail_at))
                    .ok_or_else(|| BmsError::Internal(format!("no fail record to repair {} at {}", ord.format_monomial(&b), ord.format_monomial(m))))?;
                let mu = h.ratio.checked_div(&q).expect("divides");
                (translated.sub_scaled_shifted(k, e, &mu, &h.h), UpdateKind::Combine)
            }
            _ => (translated, UpdateKind::Translate),
        };
        if new != *g {
            log.push(TraceEvent::Update {
                before: g.clone(),
                after: new.clone(),
                kind,
            });
        }
        next.push(new);
    }
    state.g = next;
    state.records = records;
    state.staircase = staircase;
    state.m = Some(m.clone());
    if let Some(ev) = events {
        ev.extend(log);
    }
    Ok(())
}

/// Among equal ratios keep the smaller leading monomial, then keep only the
/// divisibility-maximal ratios.
fn prune<E: Clone + PartialEq>(records: Vec<FailRecord<E>>, ord: &MonomialOrder) -> Vec<FailRecord<E>> {
    let mut best: Vec<FailRecord<E>> = Vec::new();
    for r in records {
        match best.iter_mut().find(|b| b.ratio == r.ratio) {
            Some(b) => {
                if ord.cmp(lm(&r.h, ord), lm(&b.h, ord)) == Ordering::Less {
                    *b = r;
                }
            }
            None => best.push(r),
        }
    }
    let ratios = MonomialSet::sorted(best.iter().map(|r| r.ratio.clone()), ord);
    let keep = max_divisibility(&ratios, ord);
    best.retain(|r| keep.contains(&r.ratio, ord));
    best.sort_by(|a, b| ord.cmp(&a.ratio, &b.ratio));
    best
}

/// Monomials `⪯ bound` in increasing order: via successor when the order
/// supports it, otherwise from the finite enumeration.
pub fn walk_up_to(ord: &MonomialOrder, bound: &Monomial) -> Result<Vec<Monomial>, OrderError> {
    if ord.is_weight_order() {
        let mut out = Vec::new();
        let mut m = ord.one();
        while ord.cmp(&m, bound) != Ordering::Greater {
            let next = ord.successor(&m)?;
            out.push(m);
            m = next;
        }
        Ok(out)
    } else {
        Ok(ord.enumerate_up_to(bound)?.into_vec())
    }
}

/// The ≺-largest `t` with `t * l ⪯ bound`, given `visited` ascending.
fn achieved_shift(l: &Monomial, visited: &[Monomial]) -> Shift {
    visited
        .iter()
        .rev()
        .find_map(|m| m.checked_div(l))
        .map_or(Shift::Zero, Shift::UpTo)
}

pub fn run_bms_with<F: Field>(
    oracle: &SequenceOracle<F>,
    ord: &MonomialOrder,
    bound: &Monomial,
    opts: &BmsOptions,
) -> Result<BmsRun<F::Elem>, BmsError> {
    let k = oracle.field();
    let how = match opts.variant {
        Variant::Linalg => Evaluator::Hankel,
        _ => Evaluator::Bracket,
    };
    let visited = walk_up_to(ord, bound)?;
    let mut state = BmsState::new(k, ord);
    let mut trace = Vec::new();
    for m in &visited {
        let mut events = Vec::new();
        step(&mut state, m, oracle, ord, how, opts.trace.then_some(&mut events))?;
        if opts.variant == Variant::Tweaked {
            let mut g = inter_reduce(k, &state.g, ord);
            g.sort_by(|a, b| ord.cmp(lm(a, ord), lm(b, ord)));
            state.g = g;
        }
        if opts.trace {
            trace.push(TraceStep {
                m: m.clone(),
                events,
                g: state.g.clone(),
            });
        }
    }
    let relations = state
        .g
        .iter()
        .map(|g| Relation {
            poly: g.clone(),
            shift: achieved_shift(lm(g, ord), &visited),
        })
        .collect();
    let set = RelationSet {
        relations,
        staircase: state.staircase.clone(),
        order: ord.clone(),
        open: Vec::new(),
    };
    Ok(BmsRun {
        relations: set,
        trace,
        state,
    })
}

pub fn run_bms<F: Field>(oracle: &SequenceOracle<F>, ord: &MonomialOrder, bound: &Monomial) -> Result<RelationSet<F::Elem>, BmsError> {
    Ok(run_bms_with(oracle, ord, bound, &BmsOptions::default())?.relations)
}

pub fn run_bms_linalg<F: Field>(oracle: &SequenceOracle<F>, ord: &MonomialOrder, bound: &Monomial) -> Result<RelationSet<F::Elem>, BmsError> {
    let opts = BmsOptions {
        variant: Variant::Linalg,
        trace: false,
    };
    Ok(run_bms_with(oracle, ord, bound, &opts)?.relations)
}

pub fn run_bms_tweaked<F: Field>(oracle: &SequenceOracle<F>, ord: &MonomialOrder, bound: &Monomial) -> Result<RelationSet<F::Elem>, BmsError> {
    let opts = BmsOptions {
        variant: Variant::Tweaked,
        trace: false,
    };
    Ok(run_bms_with(oracle, ord, bound, &opts)?.relations)
}

/// `s_max * max(g_max, s_max)` for the staircase of `gb`.
pub fn stopping_bound<E: Clone + PartialEq>(gb: &[Poly<E>], ord: &MonomialOrder) -> Result<Monomial, BmsError> {
    let lms: Vec<Monomial> = gb.iter().filter(|p| !p.is_zero()).map(|p| lm(p, ord).clone()).collect();
    let stair = finite_staircase(&lms, ord).ok_or(SequenceError::PositiveDimensional)?;
    let s_max = stair.max().cloned().unwrap_or_else(|| ord.one());
    let g_max = lms
        .iter()
        .max_by(|a, b| ord.cmp(a, b))
        .cloned()
        .ok_or(SequenceError::PositiveDimensional)?;
    Ok(s_max.mul(ord.max(&g_max, &s_max)))
}
