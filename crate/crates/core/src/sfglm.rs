//! Scalar-FGLM: relations read off the kernel structure of `H_{T,T}`.

use std::cmp::Ordering;

use crate::field::Field;
use crate::hankel::{column_rank_profile, MultiHankel, SquareSolver};
use crate::monomial::{stabilize, Monomial, MonomialSet};
use crate::order::MonomialOrder;
use crate::poly::{Poly, Relation, RelationSet, Shift};
use crate::sequence::{SequenceError, SequenceOracle};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SfglmError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error("the shift set is not stable by division")]
    NotStable,
    #[error("relation for {0} does not hold on row {1}")]
    Inconsistent(String, String),
    #[error("H_{{S,S}} is singular")]
    Singular,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SfglmResult<E> {
    pub gb: Vec<Poly<E>>,
    /// Column rank profile of `H_{T,T}`.
    pub useful_staircase: MonomialSet,
    /// Its stabilization.
    pub staircase: MonomialSet,
    pub t: MonomialSet,
    /// Candidates outside `T` whose relation failed, with the first failing row.
    pub rejected: Vec<(Monomial, Monomial)>,
}

impl<E: Clone + PartialEq> SfglmResult<E> {
    /// Every relation carries the certificate "shift T".
    pub fn relation_set(&self, ord: &MonomialOrder) -> RelationSet<E> {
        RelationSet {
            relations: self
                .gb
                .iter()
                .map(|g| Relation {
                    poly: g.clone(),
                    shift: Shift::Set(self.t.clone()),
                })
                .collect(),
            staircase: self.staircase.clone(),
            order: ord.clone(),
            open: Vec::new(),
        }
    }
}

pub fn useful_staircase<F: Field>(oracle: &SequenceOracle<F>, ord: &MonomialOrder, t: &MonomialSet) -> Result<MonomialSet, SequenceError> {
    let h = MultiHankel::from_sets(oracle, t, t)?;
    let (_, prof) = column_rank_profile(oracle.field(), &h.entries);
    Ok(MonomialSet::sorted(prof.into_iter().map(|i| t.as_slice()[i].clone()), ord))
}

pub fn run_sfglm<F: Field>(oracle: &SequenceOracle<F>, ord: &MonomialOrder, t: &MonomialSet) -> Result<SfglmResult<F::Elem>, SfglmError> {
    run(oracle, ord, t, false)
}

pub fn run_sfglm_tweaked<F: Field>(oracle: &SequenceOracle<F>, ord: &MonomialOrder, t: &MonomialSet) -> Result<SfglmResult<F::Elem>, SfglmError> {
    run(oracle, ord, t, true)
}

fn run<F: Field>(oracle: &SequenceOracle<F>, ord: &MonomialOrder, t: &MonomialSet, tweaked: bool) -> Result<SfglmResult<F::Elem>, SfglmError> {
    if !crate::monomial::is_stable(t, ord) {
        return Err(SfglmError::NotStable);
    }
    let k = oracle.field();
    let s = useful_staircase(oracle, ord, t)?;
    let closed = stabilize(&s, ord);
    let mut result = SfglmResult {
        gb: Vec::new(),
        useful_staircase: s.clone(),
        staircase: closed.clone(),
        t: t.clone(),
        rejected: Vec::new(),
    };
    if s.is_empty() {
        result.gb.push(Poly::monomial(k, ord.one()));
        return Ok(result);
    }

    let hss = MultiHankel::from_sets(oracle, &s, &s)?;
    let solver = SquareSolver::new(k, &hss.entries).ok_or(SfglmError::Singular)?;
    let extra_rows: Vec<Monomial> = t.iter().filter(|m| !s.contains(m, ord)).cloned().collect();

    let mut candidates: Vec<Monomial> = t.iter().filter(|m| !closed.contains(m, ord)).cloned().collect();
    if tweaked {
        for m in &closed {
            for i in 0..ord.nvars() {
                let c = m.mul_var(i);
                if !closed.contains(&c, ord) {
                    candidates.push(c);
                }
            }
        }
    }
    let mut candidates = MonomialSet::sorted(candidates, ord).into_vec();

    while !candidates.is_empty() {
        let c = candidates.remove(0);
        let rhs: Vec<F::Elem> = s
            .iter()
            .map(|r| oracle.query_monomial(&r.mul(&c)).map(|v| k.neg(&v)))
            .collect::<Result<_, _>>()?;
        let alpha = solver.solve(k, &rhs);
        let mut g = Poly::monomial(k, c.clone());
        for (m, a) in s.iter().zip(&alpha) {
            g.add_term(k, m.clone(), a);
        }
        let failing = crate::hankel::first_failing_row(oracle, &g, &extra_rows)?;
        let in_t = t.contains(&c, ord);
        match failing {
            None => result.gb.push(g),
            Some(row) if in_t => {
                return Err(SfglmError::Inconsistent(ord.format_monomial(&c), ord.format_monomial(&row)));
            }
            Some(row) => result.rejected.push((c.clone(), row)),
        }
        candidates.retain(|m| !c.divides(m));
        candidates.sort_by(|a, b| ord.cmp(a, b));
    }
    result.gb.sort_by(|a, b| {
        let (la, lb) = (a.lm(ord).expect("nonzero"), b.lm(ord).expect("nonzero"));
        ord.cmp(la, lb)
    });
    debug_assert!(result.gb.windows(2).all(|w| ord.cmp(w[0].lm(ord).unwrap(), w[1].lm(ord).unwrap()) == Ordering::Less));
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::hankel::kernel_basis;
    use crate::poly::{divide, inter_reduce, is_zero_dimensional};
    use crate::sequence::{random_from_lms, Generator};
    use proptest::prelude::*;

    fn drl() -> MonomialOrder {
        "drl(y<x)".parse().unwrap()
    }

    fn set(o: &MonomialOrder, v: &[&str]) -> MonomialSet {
        MonomialSet::sorted(v.iter().map(|s| o.parse_monomial(s).unwrap()), o)
    }

    fn names(o: &MonomialOrder, s: &MonomialSet) -> Vec<String> {
        s.iter().map(|m| o.format_monomial(m)).collect()
    }

    fn texts(k: &Rationals, o: &MonomialOrder, r: &SfglmResult<num_rational::BigRational>) -> Vec<String> {
        r.gb.iter().map(|g| g.to_text(k, o)).collect()
    }

    #[test]
    fn goldens() {
        let k = Rationals::new();
        let o = drl();
        let deg = |d| o.monomials_of_degree_at_most(d);
        let cases: Vec<(Generator, MonomialSet, Vec<&str>)> = vec![
            (Generator::Pow23, deg(2), vec!["y - 3", "x^2 - 4*x + 4"]),
            (Generator::Binomial, deg(2), vec!["x*y - y - 1"]),
            (Generator::Binomial, deg(3), vec!["x*y - y - 1"]),
            (Generator::Step, set(&o, &["1", "y", "x", "y^2"]), vec!["y^2 - 2*y + 1"]),
            (Generator::Sq, deg(3), vec!["x*y - x - y + 1", "x^2 - y^2 - 2*x + 2*y", "y^3 - 3*y^2 + 3*y - 1"]),
        ];
        for (g, t, want) in cases {
            let seq = SequenceOracle::generator(&k, g);
            let r = run_sfglm(&seq, &o, &t).unwrap();
            assert_eq!(texts(&k, &o, &r), want, "{}", g.name());
        }
        let seq = SequenceOracle::generator(&k, Generator::Binomial);
        let r = run_sfglm(&seq, &o, &deg(3)).unwrap();
        assert!(!is_zero_dimensional(&r.gb, &o));
    }

    #[test]
    fn fib4_shape_position() {
        let k = Rationals::new();
        let d = 4;
        for spec in ["drl(z<y<x)", "lex(z<y<x)"] {
            let o: MonomialOrder = spec.parse().unwrap();
            let t = o.enumerate_up_to(&o.parse_monomial(&format!("z^{}", d + 2)).unwrap()).unwrap();
            let t = MonomialSet::sorted(t.into_iter().filter(|m| m.exps()[0] == 0 && m.exps()[1] == 0), &o);
            let seq = SequenceOracle::generator(&k, Generator::Fib4);
            let r = run_sfglm_tweaked(&seq, &o, &t).unwrap();
            let mut got = texts(&k, &o, &r);
            got.sort();
            assert_eq!(got, ["x - 3*z - 2", "y - 1", "z^2 - z - 1"], "{spec}");
            let plain = run_sfglm(&seq, &o, &t).unwrap();
            assert_eq!(texts(&k, &o, &plain), ["z^2 - z - 1"]);
        }
    }

    #[test]
    fn tweaked_examples() {
        let k = Rationals::new();
        let o = drl();
        let step = SequenceOracle::generator(&k, Generator::Step);
        let r = run_sfglm_tweaked(&step, &o, &set(&o, &["1", "y", "x", "y^2"])).unwrap();
        assert_eq!(texts(&k, &o, &r), ["y^2 - 2*y + 1", "x*y - x - y + 1"]);
        assert_eq!(r.rejected, vec![(o.parse_monomial("x^2").unwrap(), o.parse_monomial("y^2").unwrap())]);
        let bin = SequenceOracle::generator(&k, Generator::Binomial);
        let r = run_sfglm_tweaked(&bin, &o, &o.monomials_of_degree_at_most(3)).unwrap();
        assert_eq!(texts(&k, &o, &r), ["x*y - y - 1", "y^4", "x^4 - 4*x^3 + 6*x^2 - 4*x + 1"]);
        let pow = SequenceOracle::generator(&k, Generator::Pow23);
        let t = o.monomials_of_degree_at_most(2);
        assert_eq!(run_sfglm_tweaked(&pow, &o, &t).unwrap().gb, run_sfglm(&pow, &o, &t).unwrap().gb);
    }

    #[test]
    fn useful_staircases() {
        let k = Rationals::new();
        let o = drl();
        let kron = SequenceOracle::generator(&k, Generator::Kron);
        let t = set(&o, &["1", "y", "x", "y^2"]);
        let s = useful_staircase(&kron, &o, &t).unwrap();
        assert_eq!(names(&o, &s), ["y", "x"]);
        assert_eq!(names(&o, &stabilize(&s, &o)), ["1", "y", "x"]);
        let bin = SequenceOracle::generator(&k, Generator::Binomial);
        assert_eq!(names(&o, &useful_staircase(&bin, &o, &o.monomials_of_degree_at_most(2)).unwrap()), ["1", "y", "x", "y^2", "x^2"]);
        let step = SequenceOracle::generator(&k, Generator::Step);
        assert_eq!(names(&o, &useful_staircase(&step, &o, &t).unwrap()), ["1", "y", "x"]);
    }

    #[test]
    fn degenerate_inputs() {
        let k = Rationals::new();
        let o = drl();
        let zero = SequenceOracle::zero(&k, 2);
        let r = run_sfglm(&zero, &o, &o.monomials_of_degree_at_most(2)).unwrap();
        assert_eq!(texts(&k, &o, &r), ["1"]);
        assert_eq!(run_sfglm(&zero, &o, &set(&o, &["y"])), Err(SfglmError::NotStable));
    }

    #[test]
    fn kernel_span_matches_output() {
        // relations supported in T with shift T = ideal generated by the
        // output, restricted to supports in T
        let k = PrimeField::new(101).unwrap();
        let o = drl();
        for g in [Generator::Binomial, Generator::Pow23, Generator::Kron, Generator::Sq] {
            let seq = SequenceOracle::generator(&k, g);
            let t = o.monomials_of_degree_at_most(3);
            let r = run_sfglm(&seq, &o, &t).unwrap();
            let h = MultiHankel::from_sets(&seq, &t, &t).unwrap();
            let ker = kernel_basis(&k, &h.entries, t.len());
            for v in &ker {
                let f = Poly::from_terms(&k, t.iter().cloned().zip(v.iter().cloned()));
                let (rem, _) = divide(&k, &f, &r.gb, &o);
                assert!(rem.is_zero(), "{}", g.name());
            }
            // every multiple of an output relation staying in T is in the kernel
            let mut count = 0;
            for gpoly in &r.gb {
                for m in &t {
                    let p = gpoly.mul_monomial(m);
                    if p.support().all(|s| t.contains(s, &o)) {
                        count += 1;
                        for row in &t {
                            assert!(k.is_zero(&seq.bracket(&p, row).unwrap()));
                        }
                    }
                }
            }
            assert!(count >= ker.len());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn certified_and_reduced(seed in 0u64..1000, a in 1u32..4, b in 1u32..4) {
            let k = PrimeField::new(65537).unwrap();
            let o = drl();
            let lms = MonomialSet::sorted([Monomial::from_exps(vec![a, 0]), Monomial::from_exps(vec![0, b])], &o);
            let (seq, gb) = random_from_lms(&k, &lms, &o, seed).unwrap();
            let t = o.monomials_of_degree_at_most(a.max(b) + a + b);
            let r = run_sfglm(&seq, &o, &t).unwrap();
            for g in &r.gb {
                for m in &t {
                    prop_assert!(k.is_zero(&seq.bracket(g, m).unwrap()));
                }
            }
            let mut red = inter_reduce(&k, &r.gb, &o);
            red.sort_by(|x, y| o.cmp(x.lm(&o).unwrap(), y.lm(&o).unwrap()));
            prop_assert_eq!(&red, &r.gb);
            prop_assert_eq!(&r.gb, &gb);
        }
    }
}
