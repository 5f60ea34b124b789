//! Cross-module laws checked on random instances.

use std::collections::BTreeMap;

use num_integer::binomial;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use seqrel::bench::{d_max, make_family, Family, FamilySpec};
use seqrel::bms::{run_bms, stopping_bound};
use seqrel::compare::{gorenstein_test, run_algorithm, Algorithm, Bound, GorensteinVerdict};
use seqrel::field::{Field, Fp, PrimeField, Rationals};
use seqrel::monomial::{finite_staircase, Monomial, MonomialSet};
use seqrel::order::MonomialOrder;
use seqrel::poly::{inter_reduce, is_zero_dimensional, Poly, Shift};
use seqrel::sequence::{Generator, IdealSpec, SequenceOracle};
use seqrel::sfglm::run_sfglm_tweaked;

fn fp() -> PrimeField {
    PrimeField::new(65537).unwrap()
}

fn family(i: u8) -> Family {
    Family::ALL[i as usize % 3]
}

fn z_pow(e: u32) -> Monomial {
    Monomial::from_exps(vec![0, 0, e])
}

/// `<g(z), y - f2(z), x - f1(z)>` with `g` a product of distinct linear
/// factors, and the oracle of a sequence with random initial values.
fn shape_position(k: &PrimeField, d: u32, zero_tail: bool, seed: u64) -> (SequenceOracle<PrimeField>, Vec<Poly<Fp>>, MonomialOrder) {
    let ord: MonomialOrder = "lex(z<y<x)".parse().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut roots: Vec<Fp> = Vec::new();
    while roots.len() < d as usize {
        let r = k.random(&mut rng);
        if !roots.contains(&r) {
            roots.push(r);
        }
    }
    let mut g = Poly::monomial(k, ord.one());
    for r in &roots {
        let lin = Poly::from_terms(k, [(z_pow(1), k.one()), (ord.one(), k.neg(r))]);
        let mut next = Poly::zero();
        for (m, c) in lin.terms() {
            next = next.add(k, &g.mul_monomial(m).scale(k, c));
        }
        g = next;
    }
    let tail = |rng: &mut ChaCha8Rng| -> Poly<Fp> {
        if zero_tail {
            Poly::zero()
        } else {
            Poly::from_terms(k, (0..d).map(|e| (z_pow(e), k.random(rng))))
        }
    };
    let var = |i: usize| Monomial::var(3, i);
    let y = Poly::monomial(k, var(1)).sub(k, &tail(&mut rng));
    let x = Poly::monomial(k, var(0)).sub(k, &tail(&mut rng));
    let gb = inter_reduce(k, &[g, y, x], &ord);
    let initial: BTreeMap<Monomial, Fp> = (0..d).map(|e| (z_pow(e), k.random(&mut rng))).collect();
    let spec = IdealSpec {
        gb: gb.clone(),
        order: ord.clone(),
        initial,
    };
    (SequenceOracle::from_ideal(k, &spec).unwrap(), gb, ord)
}

fn sorted(mut v: Vec<Poly<Fp>>, k: &PrimeField, ord: &MonomialOrder) -> Vec<String> {
    let mut out: Vec<String> = v.drain(..).map(|p| p.to_text(k, ord)).collect();
    out.sort();
    out
}

#[test]
fn binomial_shift_law() {
    let k = Rationals::new();
    let o: MonomialOrder = "drl(y<x)".parse().unwrap();
    let seq = SequenceOracle::generator(&k, Generator::Binomial);
    for d in [3u32, 4] {
        let r = run_bms(&seq, &o, &o.parse_monomial(&format!("x^{}", 2 * d - 1)).unwrap()).unwrap();
        let lms: Vec<String> = r.leading_monomials().iter().map(|m| o.format_monomial(m)).collect();
        assert_eq!(lms, ["x*y".to_string(), format!("y^{d}"), format!("x^{d}")]);
        let degs: Vec<u32> = r
            .relations
            .iter()
            .map(|x| match &x.shift {
                Shift::UpTo(m) => m.degree(),
                other => panic!("unexpected shift {other:?}"),
            })
            .collect();
        assert_eq!(degs, [2 * d - 3, d - 1, d - 1]);
    }
}

#[test]
fn gorenstein_defect_is_structural() {
    let k = fp();
    let o: MonomialOrder = "drl(y<x)".parse().unwrap();
    let j: Vec<Poly<Fp>> = ["x^2", "x*y", "y^2"].iter().map(|s| Poly::parse(&k, &o, s).unwrap()).collect();
    for seed in 0..20 {
        let r = gorenstein_test(&k, &j, &o, 3, seed).unwrap();
        assert_eq!(r.verdict, GorensteinVerdict::NotGorenstein);
        assert!(r.trial_sizes.iter().all(|&s| s < 3));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bms_queries_within_window(f in 0u8..3, d in 2u32..6, n in 2usize..4, seed in 0u64..1000) {
        let fam = family(f);
        let d = d.max(fam.min_degree());
        let k = fp();
        let inst = make_family(&k, &FamilySpec { family: fam, n, d, seed }).unwrap();
        let lms: Vec<Monomial> = inst.gb.iter().map(|g| g.lm(&inst.order).unwrap().clone()).collect();
        let d_s = finite_staircase(&lms, &inst.order).unwrap().iter().map(Monomial::degree).max().unwrap_or(0);
        let dm = d_max(&inst.gb, &inst.order);
        let bound = stopping_bound(&inst.gb, &inst.order).unwrap();
        let run = run_algorithm(&inst.oracle, &inst.order, Algorithm::Bms, &Bound::Monomial(bound), false).unwrap();
        let lo = binomial((n as u32 + d_s + dm - 1) as u64, n as u64);
        let hi = binomial((n as u32 + d_s + dm) as u64, n as u64);
        prop_assert!(lo <= run.queries && run.queries <= hi, "{} not in [{lo}, {hi}]", run.queries);
        prop_assert!(is_zero_dimensional(&run.relations.polys(), &inst.order));
        prop_assert_eq!(inter_reduce(&k, &run.relations.polys(), &inst.order), inst.gb.clone());
    }

    #[test]
    fn replay_on_warm_oracle(f in 0u8..3, d in 2u32..5, seed in 0u64..1000, a in 0usize..6) {
        let fam = family(f);
        let d = d.max(fam.min_degree());
        let k = fp();
        let inst = make_family(&k, &FamilySpec { family: fam, n: 2, d, seed }).unwrap();
        let algo = Algorithm::ALL[a];
        let bound = seqrel::bench::family_bound(algo, &inst.gb, &inst.order).unwrap();
        let first = run_algorithm(&inst.oracle, &inst.order, algo, &bound, false).unwrap();
        let second = run_algorithm(&inst.oracle, &inst.order, algo, &bound, false).unwrap();
        prop_assert_eq!(&first.relations, &second.relations);
        prop_assert_eq!(first.queries, second.queries);
        prop_assert_eq!(first.ops, second.ops);
    }

    #[test]
    fn shape_position_law(d in 2u32..6, zero_tail in any::<bool>(), seed in 0u64..1000) {
        let k = fp();
        let (seq, gb, ord) = shape_position(&k, d, zero_tail, seed);
        let t = MonomialSet::sorted((0..=d + 2).map(z_pow), &ord);
        let sf = run_sfglm_tweaked(&seq, &ord, &t).unwrap();
        prop_assert_eq!(sorted(sf.gb.clone(), &k, &ord), sorted(gb.clone(), &k, &ord));

        // BMS sees only the z-subsequence, so it needs 2d of its terms
        let bms = run_bms(&seq, &ord, &z_pow((2 * d).max(d + 2))).unwrap();
        let g = gb.iter().find(|p| p.lm(&ord).unwrap() == &z_pow(d)).unwrap().clone();
        let expect = vec![g, Poly::monomial(&k, Monomial::var(3, 1)), Poly::monomial(&k, Monomial::var(3, 0))];
        prop_assert_eq!(sorted(bms.polys(), &k, &ord), sorted(expect, &k, &ord));
        let equal = sorted(bms.polys(), &k, &ord) == sorted(gb.clone(), &k, &ord);
        prop_assert_eq!(equal, zero_tail);
    }
}
