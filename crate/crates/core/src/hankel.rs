//! Multi-Hankel matrices `H_{U,T}` and the exact elimination routines
//! built on them: column rank profiles, kernels, relation solves and an
//! incremental row-by-row system.

use std::collections::HashMap;

use crate::field::Field;
use crate::monomial::{Monomial, MonomialSet};
use crate::order::MonomialOrder;
use crate::poly::Poly;
use crate::sequence::{SequenceError, SequenceOracle};

/// Dense `|U| x |T|` matrix with `entry(r, c) = u_{U[r] * T[c]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiHankel<E> {
    pub rows: Vec<Monomial>,
    pub cols: Vec<Monomial>,
    pub entries: Vec<Vec<E>>,
}

impl<E: Clone + PartialEq> MultiHankel<E> {
    pub fn build<F: Field<Elem = E>>(oracle: &SequenceOracle<F>, rows: &[Monomial], cols: &[Monomial]) -> Result<Self, SequenceError> {
        let mut entries = Vec::with_capacity(rows.len());
        for r in rows {
            let mut line = Vec::with_capacity(cols.len());
            for c in cols {
                line.push(oracle.query_monomial(&r.mul(c))?);
            }
            entries.push(line);
        }
        let h = MultiHankel {
            rows: rows.to_vec(),
            cols: cols.to_vec(),
            entries,
        };
        debug_assert!(h.hankel_consistent(10));
        Ok(h)
    }

    pub fn from_sets<F: Field<Elem = E>>(oracle: &SequenceOracle<F>, rows: &MonomialSet, cols: &MonomialSet) -> Result<Self, SequenceError> {
        Self::build(oracle, rows.as_slice(), cols.as_slice())
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    /// Checks up to `limit` pairs of cells whose labels multiply to the same
    /// monomial.
    pub fn hankel_consistent(&self, limit: usize) -> bool {
        let mut first: HashMap<Monomial, (usize, usize)> = HashMap::new();
        let mut checked = 0;
        for (r, rl) in self.rows.iter().enumerate() {
            for (c, cl) in self.cols.iter().enumerate() {
                let key = rl.mul(cl);
                match first.get(&key) {
                    Some(&(r0, c0)) => {
                        if self.entries[r0][c0] != self.entries[r][c] {
                            return false;
                        }
                        checked += 1;
                        if checked >= limit {
                            return true;
                        }
                    }
                    None => {
                        first.insert(key, (r, c));
                    }
                }
            }
        }
        true
    }

    pub fn to_text<F: Field<Elem = E>>(&self, k: &F, ord: &MonomialOrder) -> String {
        let head: Vec<String> = std::iter::once(String::new())
            .chain(self.cols.iter().map(|c| ord.format_monomial(c)))
            .collect();
        let mut grid = vec![head];
        for (r, line) in self.rows.iter().zip(&self.entries) {
            grid.push(std::iter::once(ord.format_monomial(r)).chain(line.iter().map(|v| k.format(v))).collect());
        }
        let widths: Vec<usize> = (0..grid[0].len()).map(|j| grid.iter().map(|row| row[j].len()).max().unwrap_or(0)).collect();
        grid.iter()
            .map(|row| {
                row.iter()
                    .zip(&widths)
                    .map(|(cell, w)| format!("{cell:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn to_csv<F: Field<Elem = E>>(&self, k: &F, ord: &MonomialOrder) -> String {
        let mut out = String::from("row");
        for c in &self.cols {
            out.push(',');
            out.push_str(&ord.format_monomial(c));
        }
        out.push('\n');
        for (r, line) in self.rows.iter().zip(&self.entries) {
            out.push_str(&ord.format_monomial(r));
            for v in line {
                out.push(',');
                out.push_str(&k.format(v));
            }
            out.push('\n');
        }
        out
    }
}

/// Rank and column rank profile (greedy left-to-right independent columns)
/// of a dense matrix. Uses fraction-free elimination when the field asks
/// for it.
pub fn column_rank_profile<F: Field>(k: &F, m: &[Vec<F::Elem>]) -> (usize, Vec<usize>) {
    if k.prefers_fraction_free() {
        bareiss_profile(k, m)
    } else {
        gauss_profile(k, m)
    }
}

fn gauss_profile<F: Field>(k: &F, m: &[Vec<F::Elem>]) -> (usize, Vec<usize>) {
    let mut a: Vec<Vec<F::Elem>> = m.to_vec();
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut profile = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !k.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, p);
        let inv = k.inv(&a[r][c]).expect("pivot is nonzero");
        for i in r + 1..nrows {
            if k.is_zero(&a[i][c]) {
                continue;
            }
            let f = k.mul(&a[i][c], &inv);
            let (top, bottom) = a.split_at_mut(i);
            let prow = &top[r];
            let row = &mut bottom[0];
            row[c] = k.zero();
            for j in c + 1..ncols {
                if !k.is_zero(&prow[j]) {
                    row[j] = k.sub_mul(&row[j], &f, &prow[j]);
                }
            }
        }
        profile.push(c);
        r += 1;
    }
    (profile.len(), profile)
}

fn bareiss_profile<F: Field>(k: &F, m: &[Vec<F::Elem>]) -> (usize, Vec<usize>) {
    let mut a: Vec<Vec<F::Elem>> = m.to_vec();
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut profile = Vec::new();
    let mut prev = k.one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !k.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for i in r + 1..nrows {
            let (top, bottom) = a.split_at_mut(i);
            let prow = &top[r];
            let row = &mut bottom[0];
            let lead = row[c].clone();
            for j in c + 1..ncols {
                // (piv * a_ij - a_ic * a_rj) / prev, exact
                let t = k.mul(&piv, &row[j]);
                let t = k.sub_mul(&t, &lead, &prow[j]);
                row[j] = k.div(&t, &prev).expect("previous pivot is nonzero");
            }
            row[c] = k.zero();
        }
        prev = piv;
        profile.push(c);
        r += 1;
    }
    (profile.len(), profile)
}

pub fn rank<F: Field>(k: &F, m: &[Vec<F::Elem>]) -> usize {
    column_rank_profile(k, m).0
}

/// A basis of the right kernel, one vector per non-pivot column.
pub fn kernel_basis<F: Field>(k: &F, m: &[Vec<F::Elem>], ncols: usize) -> Vec<Vec<F::Elem>> {
    let mut a: Vec<Vec<F::Elem>> = m.to_vec();
    let nrows = a.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !k.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, p);
        let inv = k.inv(&a[r][c]).expect("nonzero pivot");
        for j in c..ncols {
            a[r][j] = k.mul(&a[r][j], &inv);
        }
        for i in 0..nrows {
            if i == r || k.is_zero(&a[i][c]) {
                continue;
            }
            let f = a[i][c].clone();
            for j in c..ncols {
                let v = k.sub_mul(&a[i][j], &f, &a[r][j]);
                a[i][j] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![k.zero(); ncols];
            v[free] = k.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = k.neg(&a[row][free]);
            }
            v
        })
        .collect()
}

/// Outcome of adding a row to an [`IncrementalSystem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    NewPivot,
    Redundant,
    Inconsistent,
}

/// `A x = b` grown one row at a time, kept in echelon form.
///
/// Pivot rows are normalized and vanish on the pivot columns of every
/// earlier pivot, so new rows are reduced in insertion order.
#[derive(Debug, Clone)]
pub struct IncrementalSystem<F: Field> {
    ncols: usize,
    pivots: Vec<(usize, Vec<F::Elem>, F::Elem)>,
    inconsistent: bool,
    rows: usize,
}

impl<F: Field> IncrementalSystem<F> {
    pub fn new(ncols: usize) -> Self {
        IncrementalSystem {
            ncols,
            pivots: Vec::new(),
            inconsistent: false,
            rows: 0,
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Rank of `A`.
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Rank of `[A | b]`.
    pub fn augmented_rank(&self) -> usize {
        self.pivots.len() + usize::from(self.inconsistent)
    }

    pub fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }

    pub fn add_row(&mut self, k: &F, row: &[F::Elem], rhs: &F::Elem) -> RowStatus {
        debug_assert_eq!(row.len(), self.ncols);
        self.rows += 1;
        let mut r = row.to_vec();
        let mut b = rhs.clone();
        for (c, prow, pb) in &self.pivots {
            if k.is_zero(&r[*c]) {
                continue;
            }
            let f = r[*c].clone();
            for j in 0..self.ncols {
                if !k.is_zero(&prow[j]) {
                    r[j] = k.sub_mul(&r[j], &f, &prow[j]);
                }
            }
            b = k.sub_mul(&b, &f, pb);
        }
        match r.iter().position(|v| !k.is_zero(v)) {
            Some(c) => {
                let inv = k.inv(&r[c]).expect("nonzero");
                for v in r.iter_mut().skip(c) {
                    if !k.is_zero(v) {
                        *v = k.mul(v, &inv);
                    }
                }
                b = k.mul(&b, &inv);
                self.pivots.push((c, r, b));
                RowStatus::NewPivot
            }
            None if k.is_zero(&b) => RowStatus::Redundant,
            None => {
                self.inconsistent = true;
                RowStatus::Inconsistent
            }
        }
    }

    /// A solution with free variables set to zero, or `None` if the system
    /// is inconsistent.
    pub fn solve(&self, k: &F) -> Option<Vec<F::Elem>> {
        if self.inconsistent {
            return None;
        }
        let mut x = vec![k.zero(); self.ncols];
        for (c, prow, b) in self.pivots.iter().rev() {
            let mut v = b.clone();
            for j in 0..self.ncols {
                if j != *c && !k.is_zero(&prow[j]) && !k.is_zero(&x[j]) {
                    v = k.sub_mul(&v, &prow[j], &x[j]);
                }
            }
            x[*c] = v;
        }
        Some(x)
    }
}

/// A nonsingular square system, inverted once and then solved for many
/// right-hand sides.
#[derive(Debug, Clone)]
pub struct SquareSolver<E> {
    inverse: Vec<Vec<E>>,
}

impl<E: Clone + PartialEq> SquareSolver<E> {
    /// `None` if `a` is singular.
    pub fn new<F: Field<Elem = E>>(k: &F, a: &[Vec<E>]) -> Option<Self> {
        let n = a.len();
        let mut m: Vec<Vec<E>> = a
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..n).map(|j| if i == j { k.one() } else { k.zero() }));
                r
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&i| !k.is_zero(&m[i][c]))?;
            m.swap(c, p);
            let inv = k.inv(&m[c][c]).expect("nonzero pivot");
            for v in m[c].iter_mut().skip(c) {
                if !k.is_zero(v) {
                    *v = k.mul(v, &inv);
                }
            }
            for i in 0..n {
                if i == c || k.is_zero(&m[i][c]) {
                    continue;
                }
                let f = m[i][c].clone();
                let (pivot, row) = if i < c {
                    let (top, bottom) = m.split_at_mut(c);
                    (&bottom[0], &mut top[i])
                } else {
                    let (top, bottom) = m.split_at_mut(i);
                    (&top[c], &mut bottom[0])
                };
                for j in c..2 * n {
                    if !k.is_zero(&pivot[j]) {
                        row[j] = k.sub_mul(&row[j], &f, &pivot[j]);
                    }
                }
            }
        }
        Some(SquareSolver {
            inverse: m.into_iter().map(|r| r[n..].to_vec()).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.inverse.len()
    }

    /// `x` with `a x = b`.
    pub fn solve<F: Field<Elem = E>>(&self, k: &F, b: &[E]) -> Vec<E> {
        self.inverse
            .iter()
            .map(|row| {
                let mut acc = k.zero();
                for (a, v) in row.iter().zip(b) {
                    if !k.is_zero(a) && !k.is_zero(v) {
                        acc = k.add(&acc, &k.mul(a, v));
                    }
                }
                acc
            })
            .collect()
    }
}

/// Result of solving for a relation `t + sum alpha_s s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solved<E> {
    Relation(Poly<E>),
    /// The first row label that made the system inconsistent.
    Inconsistent(Monomial),
}

/// Solves `H_{rows,S} alpha + H_{rows,{t}} = 0`, processing rows in order.
pub fn solve_relation<F: Field>(
    oracle: &SequenceOracle<F>,
    s: &[Monomial],
    rows: &[Monomial],
    t: &Monomial,
) -> Result<Solved<F::Elem>, SequenceError> {
    let k = oracle.field();
    let mut sys = IncrementalSystem::<F>::new(s.len());
    for r in rows {
        let line: Vec<F::Elem> = s.iter().map(|c| oracle.query_monomial(&r.mul(c))).collect::<Result<_, _>>()?;
        let rhs = k.neg(&oracle.query_monomial(&r.mul(t))?);
        if sys.add_row(k, &line, &rhs) == RowStatus::Inconsistent {
            return Ok(Solved::Inconsistent(r.clone()));
        }
    }
    let alpha = sys.solve(k).expect("consistent");
    let mut p = Poly::monomial(k, t.clone());
    for (m, a) in s.iter().zip(alpha) {
        p.add_term(k, m.clone(), &a);
    }
    Ok(Solved::Relation(p))
}

/// The first row `r` with `[r * g] != 0`, if any.
pub fn first_failing_row<F: Field>(oracle: &SequenceOracle<F>, g: &Poly<F::Elem>, rows: &[Monomial]) -> Result<Option<Monomial>, SequenceError> {
    let k = oracle.field();
    for r in rows {
        if !k.is_zero(&oracle.bracket(g, r)?) {
            return Ok(Some(r.clone()));
        }
    }
    Ok(None)
}

/// True iff `H_{rows,S} alpha = -H_{rows,{lm}}` has no solution, i.e. no
/// relation with leading monomial `lm` and tail on `S` holds on `rows`.
pub fn staircase_membership_test<F: Field>(
    oracle: &SequenceOracle<F>,
    s: &[Monomial],
    lm: &Monomial,
    rows: &[Monomial],
) -> Result<bool, SequenceError> {
    Ok(matches!(solve_relation(oracle, s, rows, lm)?, Solved::Inconsistent(_)))
}
