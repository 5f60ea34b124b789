//! Staircase discovery by rank comparisons of growing multi-Hankel
//! matrices, with relations solved only at the end.

use std::cmp::Ordering;

use crate::bms::walk_up_to;
use crate::field::Field;
use crate::hankel::{IncrementalSystem, RowStatus};
use crate::monomial::{border, stabilize, Monomial, MonomialSet};
use crate::order::{MonomialOrder, OrderError};
use crate::poly::{Poly, Relation, RelationSet, Shift};
use crate::sequence::{SequenceError, SequenceOracle};

pub use crate::hankel::staircase_membership_test;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RankSolverError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// One rank comparison: `rank H_{V u {q}, S}` against the same rows with
/// the column `lm` appended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankEvent {
    pub m: Monomial,
    pub lm: Monomial,
    pub q: Monomial,
    pub rank: usize,
    pub rank_with_lm: usize,
}

#[derive(Debug, Clone)]
pub struct RankRun<E> {
    pub relations: RelationSet<E>,
    pub events: Vec<RankEvent>,
}

/// A border candidate with its validated shifts.
struct Candidate<F: Field> {
    lm: Monomial,
    /// Staircase monomials below `lm`: the unknowns.
    cols: Vec<Monomial>,
    v: Vec<Monomial>,
    sys: IncrementalSystem<F>,
}

impl<F: Field> Candidate<F> {
    fn new(lm: Monomial, staircase: &MonomialSet, ord: &MonomialOrder) -> Self {
        let cols: Vec<Monomial> = staircase.iter().filter(|s| ord.cmp(s, &lm) == Ordering::Less).cloned().collect();
        let sys = IncrementalSystem::new(cols.len());
        Candidate { lm, cols, v: Vec::new(), sys }
    }

    fn push_row(&mut self, oracle: &SequenceOracle<F>, q: &Monomial) -> Result<RowStatus, SequenceError> {
        let k = oracle.field();
        let row: Vec<F::Elem> = self.cols.iter().map(|s| oracle.query_monomial(&q.mul(s))).collect::<Result<_, _>>()?;
        let rhs = k.neg(&oracle.query_monomial(&q.mul(&self.lm))?);
        Ok(self.sys.add_row(k, &row, &rhs))
    }
}

pub fn run_rank_solver_with<F: Field>(oracle: &SequenceOracle<F>, ord: &MonomialOrder, bound: &Monomial) -> Result<RankRun<F::Elem>, RankSolverError> {
    let k = oracle.field();
    let visited = walk_up_to(ord, bound)?;
    let mut staircase = MonomialSet::new();
    let mut g: Vec<Candidate<F>> = vec![Candidate::new(ord.one(), &staircase, ord)];
    let mut events = Vec::new();

    for (idx, m) in visited.iter().enumerate() {
        let mut grown: Vec<Monomial> = Vec::new();
        for c in g.iter_mut() {
            let Some(q) = m.checked_div(&c.lm) else { continue };
            let status = c.push_row(oracle, &q)?;
            events.push(RankEvent {
                m: m.clone(),
                lm: c.lm.clone(),
                q: q.clone(),
                rank: c.sys.rank(),
                rank_with_lm: c.sys.augmented_rank(),
            });
            if status == RowStatus::Inconsistent {
                grown.push(q);
            } else {
                c.v.push(q);
            }
        }
        if grown.is_empty() {
            continue;
        }
        staircase = stabilize(&staircase.union(&MonomialSet::sorted(grown, ord), ord), ord);
        let seen = &visited[..=idx];
        g = border(&staircase, ord)
            .into_iter()
            .map(|lm| {
                let mut c = Candidate::new(lm.clone(), &staircase, ord);
                for mu in seen.iter().take_while(|mu| ord.cmp(&mu.mul(&lm), m) != Ordering::Greater) {
                    if c.push_row(oracle, mu)? != RowStatus::Inconsistent {
                        c.v.push(mu.clone());
                    }
                }
                Ok(c)
            })
            .collect::<Result<_, SequenceError>>()?;
    }

    let mut relations = Vec::new();
    let mut open = Vec::new();
    for c in &g {
        match c.sys.solve(k) {
            Some(alpha) => {
                let mut p = Poly::monomial(k, c.lm.clone());
                for (s, a) in c.cols.iter().zip(&alpha) {
                    p.add_term(k, s.clone(), a);
                }
                let shift = c.v.iter().max_by(|a, b| ord.cmp(a, b)).cloned().map_or(Shift::Zero, Shift::UpTo);
                relations.push(Relation { poly: p, shift });
            }
            None => open.push(c.lm.clone()),
        }
    }
    Ok(RankRun {
        relations: RelationSet {
            relations,
            staircase,
            order: ord.clone(),
            open,
        },
        events,
    })
}

pub fn run_rank_solver<F: Field>(oracle: &SequenceOracle<F>, ord: &MonomialOrder, bound: &Monomial) -> Result<RelationSet<F::Elem>, RankSolverError> {
    Ok(run_rank_solver_with(oracle, ord, bound)?.relations)
}
