//! Acceptance gate: one test per criterion, each printing a single
//! `criterion N: PASS` line (visible with `--nocapture`; the harness line
//! per test doubles as the pass/fail record).

use std::time::Duration;

use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sdfkit::bounds::{
    alon_tournament_bound, check_final_contradiction, matolcsi_ruzsa_bound,
    proof_inequality_report, theorem_bound,
};
use sdfkit::construct::{product_construct, ramsey_construct};
use sdfkit::modarith::Modulus;
use sdfkit::quadchar::{full_residue_pair_sum, inner_pair_sum, is_special_pair, CharProduct};
use sdfkit::search::{brute_force_oracle, greedy_lower, max_sdf_exact, Budget};
use sdfkit::sdf::is_valid_set;
use sdfkit::tournament::{
    alon_polynomials_rank, paley_tournament, random_digraph, sdf_set_to_family, verify_lemma,
    ProductGraph,
};

fn small_primes(limit: u64) -> Vec<u64> {
    (2..=limit)
        .filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0))
        .collect()
}

fn odd_squarefree(limit: u64) -> Vec<Modulus> {
    (3..=limit)
        .step_by(2)
        .filter_map(|m| Modulus::new(m).ok())
        .collect()
}

#[test]
fn criterion_01_pair_sum_two_case_identity() {
    for p in small_primes(100).into_iter().filter(|&p| p > 2) {
        for b1 in 0..p {
            for b2 in 0..p {
                let expected = if is_special_pair(b1, b2, p) {
                    p as i64 - 1
                } else {
                    -1
                };
                assert_eq!(inner_pair_sum(b1, b2, p), expected, "p={p} b=({b1},{b2})");
            }
        }
    }
    println!("criterion 1: PASS (pair-sum identity, odd primes <= 100, exact)");
}

#[test]
fn criterion_02_pair_sum_factorization() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for md in odd_squarefree(1000) {
        let m = md.value();
        let n = md.n();
        for _ in 0..50 {
            let mask = rng.gen_range(1usize..1 << n);
            let indices: Vec<usize> =
                (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
            let cp = CharProduct::new(md.clone(), &indices).unwrap();
            let b1 = rng.gen_range(0..m);
            let b2 = rng.gen_range(0..m);
            let direct = full_residue_pair_sum(b1, b2, &cp);
            let product: i64 = indices
                .iter()
                .map(|&i| {
                    let p = md.primes()[i - 1];
                    inner_pair_sum(b1 % p, b2 % p, p)
                })
                .product();
            assert_eq!(direct, product, "m={m} D={indices:?} b=({b1},{b2})");
        }
    }
    println!("criterion 2: PASS (pair-sum factorization, odd squarefree m <= 1000, 50 samples each)");
}

#[test]
fn criterion_03_oracle_equivalence() {
    let budget = Budget::default();
    for md in odd_squarefree(40) {
        let oracle = brute_force_oracle(&md).unwrap();
        let exact = max_sdf_exact(&md, &budget).unwrap();
        assert!(exact.exact, "m={}", md.value());
        assert_eq!(exact.size, oracle.size, "m={}", md.value());
        assert_eq!(exact.best_set, oracle.best_set, "m={}", md.value());
    }
    println!("criterion 3: PASS (branch-and-bound matches the brute-force oracle, m <= 40)");
}

#[test]
fn criterion_04_bound_caging() {
    let budget = Budget::new(100_000, Duration::from_millis(500));
    for md in odd_squarefree(1000) {
        let m = md.value();
        let r = max_sdf_exact(&md, &budget).unwrap();
        let f = r.size as u64;
        assert!(f >= 1);
        assert!(
            !theorem_bound(&md).lt_integer(&f.into()),
            "m={m}: F>={f} violates the main bound"
        );
        if matolcsi_ruzsa_bound(&md).is_some() {
            assert!(
                (f as u128) * (f as u128) < m as u128,
                "m={m}: F>={f} not strictly below sqrt(m)"
            );
        }
        if let Some(t) = alon_tournament_bound(&md) {
            assert!(f <= t.to_u64().unwrap(), "m={m}: F>={f} above tournament bound");
        }
    }
    println!("criterion 4: PASS (F caged by every applicable bound, m <= 1000, zero violations)");
}

#[test]
fn criterion_05_singletons_for_3_mod_4_primes() {
    let budget = Budget::default();
    for p in small_primes(200).into_iter().filter(|&p| p % 4 == 3) {
        let r = max_sdf_exact(&Modulus::new(p).unwrap(), &budget).unwrap();
        assert!(r.exact, "p={p}");
        assert_eq!(r.size, 1, "p={p}");
    }
    println!("criterion 5: PASS (F(p) = 1 for primes p = 3 mod 4, p <= 200)");
}

#[test]
fn criterion_06_contradiction_arithmetic() {
    let rep = check_final_contradiction(&Modulus::new(15).unwrap(), 837).unwrap();
    assert!(rep.sigma_at_least_099);
    assert!(rep.sigma >= 0.99);
    assert!(rep.holds, "L={} R={}", rep.l_lower, rep.r_upper);
    println!("criterion 6: PASS (n=2 closing contradiction, m=15, |A|=837, directed rounding)");
}

#[test]
fn criterion_07_proof_inequalities() {
    let primes = small_primes(200);
    let odd: Vec<u64> = primes.iter().copied().filter(|&p| p > 2).collect();
    for n in 1..=12 {
        let rep = proof_inequality_report(&odd[..n]).unwrap();
        assert!(rep.pass, "first {n} odd primes: {:?}", rep.checks);
    }
    let pool: Vec<u64> = small_primes(500).into_iter().filter(|&p| p > 2).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..100 {
        let n = rng.gen_range(1usize..=8);
        let mut tuple: Vec<u64> = pool
            .choose_multiple(&mut rng, n)
            .copied()
            .collect();
        tuple.sort_unstable();
        let rep = proof_inequality_report(&tuple).unwrap();
        assert!(rep.pass, "trial {trial}, primes {tuple:?}");
    }
    println!("criterion 7: PASS (intermediate inequalities, n = 1..12 and 100 random tuples)");
}

#[test]
fn criterion_08_constructions() {
    let budget = Budget::default();

    for m1 in (3u64..=333).step_by(2) {
        let Ok(md1) = Modulus::new(m1) else { continue };
        for m2 in (m1..=1000 / m1).step_by(2) {
            let Ok(md2) = Modulus::new(m2) else { continue };
            if sdfkit::modarith::gcd(m1, m2) != 1 {
                continue;
            }
            let a1 = greedy_lower(&md1, None).unwrap();
            let a2 = greedy_lower(&md2, None).unwrap();
            let prod = product_construct(&[a1.clone(), a2.clone()]).unwrap();
            assert!(is_valid_set(&prod).is_valid(), "product {m1}x{m2}");
            assert_eq!(prod.len(), a1.len() * a2.len());
        }
    }

    for p in small_primes(10_000).into_iter().filter(|&p| p % 4 == 1) {
        let r = ramsey_construct(p).unwrap();
        assert!(is_valid_set(&r.set).is_valid(), "ramsey p={p}");
        assert!(r.set.len() >= r.guarantee, "ramsey p={p}");
    }

    for m1 in (3u64..=13).step_by(2) {
        let Ok(md1) = Modulus::new(m1) else { continue };
        for m2 in (m1 + 2..=40 / m1).step_by(2) {
            if sdfkit::modarith::gcd(m1, m2) != 1 {
                continue;
            }
            let Ok(md12) = Modulus::new(m1 * m2) else { continue };
            let md2 = Modulus::new(m2).unwrap();
            let f1 = max_sdf_exact(&md1, &budget).unwrap().size;
            let f2 = max_sdf_exact(&md2, &budget).unwrap().size;
            let f12 = max_sdf_exact(&md12, &budget).unwrap().size;
            assert!(f12 >= f1 * f2, "F({}) < F({m1})F({m2})", m1 * m2);
        }
    }

    println!("criterion 8: PASS (product and clique constructions valid; F supermultiplicative)");
}

#[test]
fn criterion_09_covering_family_rank() {
    for seed in 0u64..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(1usize..=2);
        let sizes: Vec<usize> = if k == 1 {
            vec![rng.gen_range(2..=12)]
        } else {
            let a = rng.gen_range(2..=4);
            let b = rng.gen_range(2..=12 / a);
            vec![a, b]
        };
        let factors: Vec<_> = sizes.iter().map(|&s| random_digraph(s, &mut rng)).collect();
        let product = ProductGraph::new(factors).unwrap();
        let rep = verify_lemma(&product, 1 << 20, seed).unwrap();
        assert!(rep.exhaustive, "seed {seed}");
        assert!(rep.holds, "seed {seed}: |S|={} > bound {}", rep.family_size, rep.bound);
        assert_eq!(rep.rank, rep.family_size, "seed {seed}");
    }

    let budget = Budget::default();
    for m in [21u64, 33, 57, 69, 77] {
        let md = Modulus::new(m).unwrap();
        let factors: Vec<_> = md
            .primes()
            .iter()
            .map(|&p| paley_tournament(p).unwrap())
            .collect();
        let product = ProductGraph::new(factors).unwrap();
        let rep = verify_lemma(&product, 1 << 20, m).unwrap();
        assert!(rep.holds, "m={m}: |S|={} > bound {}", rep.family_size, rep.bound);
        assert_eq!(rep.rank, rep.family_size, "m={m}");

        let best = max_sdf_exact(&md, &budget).unwrap();
        let (prod2, family) = sdf_set_to_family(&best.candidate_set().unwrap()).unwrap();
        assert!(family.len() as u64 <= prod2.outdegree_bound(), "m={m}");
        assert_eq!(alon_polynomials_rank(&family, &prod2).unwrap(), family.len(), "m={m}");
    }

    println!("criterion 9: PASS (covering families obey the product bound with full rank)");
}

#[test]
fn criterion_10_note() {
    println!(
        "criterion 10: NOTE (the headline bound is asymptotic; acceptance rests on \
         criteria 1-9, which exercise its full proof machinery at small scale)"
    );
}
