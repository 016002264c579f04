//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its elapsed time and asserting the stated budget.

use evenodd::approx::{
    adaptive_success_target, density_lower_bound, estimate_parity_count, required_guaranteed_samples,
    ApproxOptions, SamplingMode,
};
use evenodd::combin::binom_big;
use evenodd::decide::{decide_parity, DecideOptions, DecisionRoute};
use evenodd::exact::{
    colour_pattern_census, count_multicolour_cliques, count_parity_both, count_parity_subsets,
    EnumOptions,
};
use evenodd::gf2::{count_zeros, count_zeros_by_sweep, encode_polynomial, total_even_subgraphs};
use evenodd::graph::{generate, Colouring, GraphSpec, ParityTarget};
use evenodd::lattice::{
    decomposition_check, det_via_formula, meet_matrix, upward_closure_of_support, LatticeFn,
};
use evenodd::reduction::{
    build_reduction_matrix, exact_oracle, pad_instance, run_reduction, ReductionOptions,
};
use evenodd::Error;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::time::Instant;

const TARGETS: [ParityTarget; 2] = [ParityTarget::Even, ParityTarget::Odd];

fn finish(criterion: &str, start: Instant, limit_ms: u128) {
    let elapsed = start.elapsed().as_millis();
    println!("criterion {criterion}: PASS ({elapsed} ms, limit {limit_ms} ms)");
    assert!(
        elapsed < limit_ms,
        "criterion {criterion} exceeded its time budget: {elapsed} ms >= {limit_ms} ms"
    );
}

/// Splitmix-style value stream so instance parameters are reproducible
/// without pulling a full RNG into the test.
fn mix(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

#[test]
fn criterion_1_decision_agrees_with_counting_oracle() {
    let start = Instant::now();
    let eopts = EnumOptions {
        budget: None,
        workers: 1,
    };
    let dopts = DecideOptions::with_witness();
    for i in 0..500u64 {
        let n = 1 + (mix(i) % 18) as usize;
        let p = (mix(i.wrapping_add(7919)) % 1000) as f64 / 1000.0;
        let g = generate(&GraphSpec::Gnp { n, p, seed: i }).unwrap();
        for k in 1..=6usize {
            let (even, odd) = count_parity_both(&g, k, &eopts).unwrap();
            for (target, count) in [(ParityTarget::Even, &even), (ParityTarget::Odd, &odd)] {
                let d = decide_parity(&g, k, target, &dopts).unwrap();
                assert_eq!(
                    d.answer,
                    *count > BigUint::ZERO,
                    "instance {i}: n={n} k={k} {target}"
                );
                if let Some(w) = d.witness {
                    assert_eq!(w.len(), k);
                    assert!(target.matches(g.induced_edge_count(&w)));
                }
            }
        }
    }
    finish("1 (decision == counting oracle, 500 graphs)", start, 60_000);
}

/// The characterisations' case table at n = 64 for k = 3..6: for each
/// generator class, whether a target-parity k-subset exists.
fn expected_answer(class: &GraphSpec, k: usize, target: ParityTarget) -> bool {
    let c2 = (k * (k - 1) / 2) as u64;
    let c2_odd = c2 % 2 == 1;
    match (class, target) {
        (GraphSpec::Clique(_), ParityTarget::Even) => !c2_odd,
        (GraphSpec::Clique(_), ParityTarget::Odd) => c2_odd,
        (GraphSpec::Independent(_), ParityTarget::Even) => true,
        (GraphSpec::Independent(_), ParityTarget::Odd) => false,
        (GraphSpec::TwoCliques(a, b), _) => {
            // achievable counts are C(k,2) - i(k-i)
            (k.saturating_sub(*b)..=k.min(*a))
                .any(|i| target.matches(c2 - (i as u64) * (k - i) as u64))
        }
        (GraphSpec::CompleteBipartite(a, b), _) => (k.saturating_sub(*b)..=k.min(*a))
            .any(|i| target.matches((i as u64) * (k - i) as u64)),
        (GraphSpec::Gnp { .. }, _) => unreachable!("not a structured class"),
    }
}

#[test]
fn criterion_2_characterisation_at_threshold() {
    let start = Instant::now();
    let classes = [
        GraphSpec::Clique(64),
        GraphSpec::TwoCliques(32, 32),
        GraphSpec::Independent(64),
        GraphSpec::CompleteBipartite(32, 32),
    ];
    let dopts = DecideOptions::default();

    // the corollaries' case tables across k mod 4 in {3,0,1,2} via k=3..6
    for k in 3..=6usize {
        for class in &classes {
            let g = generate(class).unwrap();
            for target in TARGETS {
                let d = decide_parity(&g, k, target, &dopts).unwrap();
                let want = expected_answer(class, k, target);
                assert_eq!(d.answer, want, "class {class:?} k={k} {target}");
                // n = 64 < 2^(2k) for k >= 4: only the fast path may answer
                assert_eq!(
                    d.route,
                    DecisionRoute::ClassFastPath,
                    "class {class:?} k={k} must be decided structurally"
                );
            }
        }
    }

    // sanity of the table itself for k = 3 against exhaustive counts
    for class in &classes {
        let g = generate(class).unwrap();
        let (even, odd) = count_parity_both(&g, 3, &EnumOptions::default()).unwrap();
        assert_eq!(
            expected_answer(class, 3, ParityTarget::Even),
            even > BigUint::ZERO
        );
        assert_eq!(
            expected_answer(class, 3, ParityTarget::Odd),
            odd > BigUint::ZERO
        );
    }

    // flipping any single edge of clique(64) or two_cliques(32,32) turns
    // decide_even(.,3) from NO to YES
    for base in [GraphSpec::Clique(64), GraphSpec::TwoCliques(32, 32)] {
        let g = generate(&base).unwrap();
        assert!(!decide_parity(&g, 3, ParityTarget::Even, &dopts).unwrap().answer);
        for u in 0..64 {
            for v in u + 1..64 {
                let mut flipped = g.clone();
                flipped.flip_edge(u, v);
                let d = decide_parity(&flipped, 3, ParityTarget::Even, &dopts).unwrap();
                assert!(d.answer, "flip ({u},{v}) of {base:?} must create an even 3-subset");
            }
        }
    }
    finish("2 (characterisation case table + edge flips)", start, 120_000);
}

#[test]
fn criterion_3_density_lower_bound_spot_check() {
    let start = Instant::now();
    let bound = density_lower_bound(3, 64).unwrap();
    assert!(bound.applicable);
    assert_eq!(
        bound.bound,
        BigRational::new(BigInt::from(41664u64), BigInt::from(19327352832u64))
    );
    // the bound as an integer count threshold: ceil(41664/19327352832) = 1
    let threshold = bound.bound.ceil().to_integer();
    assert_eq!(threshold, BigInt::one());

    let eopts = EnumOptions {
        budget: None,
        workers: 1,
    };
    // 100 random graphs at n = 64, k = 3: even count is 0 or >= threshold
    for i in 0..100u64 {
        let p = (mix(i.wrapping_add(31)) % 1000) as f64 / 1000.0;
        let g = generate(&GraphSpec::Gnp {
            n: 64,
            p,
            seed: 5000 + i,
        })
        .unwrap();
        let even = count_parity_subsets(&g, 3, ParityTarget::Even, &eopts).unwrap();
        assert!(
            even.is_zero() || BigInt::from(even.clone()) >= threshold,
            "instance {i}"
        );
    }

    // every perturbed instance from criterion 2 has an even count >= 1
    let bases = [GraphSpec::Clique(64), GraphSpec::TwoCliques(32, 32)];
    std::thread::scope(|scope| {
        for w in 0..8usize {
            let eopts = eopts.clone();
            let bases = &bases;
            scope.spawn(move || {
                for base in bases {
                    let g = generate(base).unwrap();
                    let mut idx = 0usize;
                    for u in 0..64 {
                        for v in u + 1..64 {
                            idx += 1;
                            if idx % 8 != w {
                                continue;
                            }
                            let mut flipped = g.clone();
                            flipped.flip_edge(u, v);
                            let even =
                                count_parity_subsets(&flipped, 3, ParityTarget::Even, &eopts)
                                    .unwrap();
                            assert!(even >= BigUint::one(), "flip ({u},{v}) of {base:?}");
                        }
                    }
                }
            });
        }
    });
    finish("3 (density lower bound spot check)", start, 30_000);
}

#[test]
fn criterion_4_gf2_identity() {
    let start = Instant::now();
    let eopts = EnumOptions {
        budget: None,
        workers: 1,
    };
    // total even subgraphs == sum over k of exact counts, 100 random graphs
    for i in 0..100u64 {
        let n = 1 + (mix(i.wrapping_add(101)) % 14) as usize;
        let p = (mix(i.wrapping_add(997)) % 1000) as f64 / 1000.0;
        let g = generate(&GraphSpec::Gnp {
            n,
            p,
            seed: 9000 + i,
        })
        .unwrap();
        let mut sum = BigUint::one(); // the empty set is the k = 0 term
        for k in 1..=n {
            sum += count_parity_subsets(&g, k, ParityTarget::Even, &eopts).unwrap();
        }
        assert_eq!(total_even_subgraphs(&g).unwrap(), sum, "instance {i} n={n}");
    }
    // count_zeros matches the 2^n sweep up to n = 16
    for i in 0..20u64 {
        let n = 1 + (mix(i.wrapping_add(55)) % 16) as usize;
        let p = (mix(i.wrapping_add(56)) % 1000) as f64 / 1000.0;
        let g = generate(&GraphSpec::Gnp {
            n,
            p,
            seed: 11000 + i,
        })
        .unwrap();
        let q = encode_polynomial(&g);
        assert_eq!(count_zeros(&q), count_zeros_by_sweep(&q), "instance {i}");
    }
    finish("4 (GF(2) zero-count identities)", start, 60_000);
}

#[test]
fn criterion_5_lattice_identities() {
    let start = Instant::now();
    for i in 0..200u64 {
        let ground = 1 + (mix(i.wrapping_add(3)) % 4) as usize; // 1..=4
        let values: Vec<BigInt> = (0..1u64 << ground)
            .map(|m| BigInt::from((mix(i * 37 + m) % 21) as i64 - 10))
            .collect();
        let f = LatticeFn::new(ground, values).unwrap();
        let s = upward_closure_of_support(&f);
        if !s.is_empty() {
            let a = meet_matrix(&s, &f).unwrap();
            assert_eq!(
                det_via_formula(&s, &f).unwrap(),
                a.det_exact(),
                "instance {i} ground {ground}"
            );
        }
        let report = decomposition_check(&s, &f).unwrap();
        assert!(report.holds, "instance {i}: mismatch {:?}", report.first_mismatch);
    }
    finish("5 (lattice determinant + decomposition identities)", start, 30_000);
}

#[test]
fn criterion_6_reduction_end_to_end() {
    let start = Instant::now();
    let eopts = EnumOptions {
        budget: None,
        workers: 1,
    };
    let ropts = ReductionOptions::default();
    for i in 0..100u64 {
        let k = 2 + (i % 3) as usize; // 2, 3, 4
        let n = (k + 2) + (mix(i.wrapping_add(13)) % (13 - k as u64 - 1)) as usize;
        let p = 0.2 + (mix(i.wrapping_add(17)) % 700) as f64 / 1000.0;
        let g = generate(&GraphSpec::Gnp {
            n,
            p,
            seed: 20000 + i,
        })
        .unwrap();
        let colours: Vec<usize> = (0..n).map(|v| v % k + 1).collect();
        let f = Colouring::new(k, colours).unwrap();
        let brute = count_multicolour_cliques(&g, &f, k, &eopts).unwrap();
        let census = colour_pattern_census(&g, &f, k, &eopts).unwrap();
        for target in TARGETS {
            let oracle = exact_oracle(k, target, eopts.clone());
            let run = run_reduction(&g, &f, k, target, &oracle, &ropts).unwrap();
            assert_eq!(run.multicolour_cliques, brute, "instance {i} k={k} {target}");
            let expected_calls = if target == ParityTarget::Even {
                1usize << (k * (k - 1) / 2)
            } else {
                (1usize << (k * (k - 1) / 2)) - 1
            };
            assert_eq!(run.oracle_calls, expected_calls);

            // A (N from the independent census) must reproduce z exactly
            let a = build_reduction_matrix(k, target, &run.family).unwrap();
            let n_census: Vec<BigInt> = run
                .family
                .iter()
                .map(|pat| BigInt::from(census.count(pat).clone()))
                .collect();
            let az = a.mul_vec(&n_census);
            for (row, (got, zi)) in az.iter().zip(&run.z).enumerate() {
                assert_eq!(
                    got,
                    &BigInt::from(zi.clone()),
                    "A·N != z at row {row}, instance {i} k={k} {target}"
                );
            }
        }
    }
    // padding preserves multicolour clique counts on 50 instances
    for i in 0..50u64 {
        let k = 2 + (i % 3) as usize;
        let n = k + 3 + (mix(i.wrapping_add(23)) % 6) as usize;
        let p = 0.3 + (mix(i.wrapping_add(29)) % 600) as f64 / 1000.0;
        let g = generate(&GraphSpec::Gnp {
            n,
            p,
            seed: 30000 + i,
        })
        .unwrap();
        let colours: Vec<usize> = (0..n).map(|v| v % k + 1).collect();
        let f = Colouring::new(k, colours).unwrap();
        let before = count_multicolour_cliques(&g, &f, k, &eopts).unwrap();
        let k_prime = k + 1 + (i % 2) as usize;
        let (pg, pf) = pad_instance(&g, &f, k, k_prime).unwrap();
        let after = count_multicolour_cliques(&pg, &pf, k_prime, &eopts).unwrap();
        assert_eq!(before, after, "padding instance {i} k={k} -> {k_prime}");
    }
    finish("6 (reduction end-to-end + padding)", start, 300_000);
}

#[test]
fn criterion_7_fptras_statistical_contract() {
    let start = Instant::now();
    let eopts = EnumOptions {
        budget: None,
        workers: 1,
    };
    assert_eq!(adaptive_success_target(0.1, 0.05).unwrap(), 1218);
    let total = binom_big(30, 4);
    let min_density = BigRational::new(BigInt::one(), BigInt::from(100));
    let mut checked = 0usize;
    for i in 0..10u64 {
        let g = generate(&GraphSpec::Gnp {
            n: 30,
            p: 0.5,
            seed: 40000 + i,
        })
        .unwrap();
        for target in TARGETS {
            let exact = count_parity_subsets(&g, 4, target, &eopts).unwrap();
            let truth = BigRational::from_integer(BigInt::from(exact.clone()));
            let density = &truth / BigRational::from_integer(BigInt::from(total.clone()));
            assert!(
                density >= min_density,
                "instance {i} {target} density too small for the contract"
            );
            checked += 1;

            let hits = std::thread::scope(|scope| {
                let handles: Vec<_> = (0..4u64)
                    .map(|w| {
                        let g = &g;
                        let truth = truth.clone();
                        scope.spawn(move || {
                            let mut local = 0u32;
                            for trial in (w * 25)..((w + 1) * 25) {
                                let opts = ApproxOptions {
                                    eps: 0.1,
                                    delta: 0.05,
                                    mode: SamplingMode::Adaptive,
                                    seed: (50000 + i) * 1000 + trial,
                                    ..Default::default()
                                };
                                let est = estimate_parity_count(g, 4, target, &opts).unwrap();
                                let rel = ((est.value - &truth) / &truth).abs();
                                if rel <= BigRational::new(BigInt::from(1), BigInt::from(10)) {
                                    local += 1;
                                }
                            }
                            local
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().unwrap()).sum::<u32>()
            });
            assert!(
                hits >= 92,
                "instance {i} {target}: only {hits}/100 trials within 10%"
            );
        }
    }
    assert_eq!(checked, 20);
    finish("7 (FPTRAS adaptive-mode coverage, 20 instances x 100 trials)", start, 600_000);
}

#[test]
fn criterion_8_guaranteed_mode_honesty() {
    let start = Instant::now();
    let required = required_guaranteed_samples(4, 30, 0.1, 0.05).unwrap();
    // 1/mu_min alone is 2^33 * 16 * 900; the Hoeffding count must dwarf it
    let inv_mu = (BigUint::one() << 33) * BigUint::from(16u32) * BigUint::from(900u32);
    assert!(
        required > inv_mu,
        "required {required} should exceed 1/mu = {inv_mu}"
    );

    let g = generate(&GraphSpec::Gnp {
        n: 30,
        p: 0.5,
        seed: 60000,
    })
    .unwrap();
    let opts = ApproxOptions {
        eps: 0.1,
        delta: 0.05,
        mode: SamplingMode::Guaranteed,
        seed: 1,
        ..Default::default()
    };
    match estimate_parity_count(&g, 4, ParityTarget::Even, &opts) {
        Err(Error::GuaranteedInfeasible { required: r, cap }) => {
            assert_eq!(r, required);
            assert_eq!(cap, opts.guaranteed_cap);
        }
        other => panic!("expected a guaranteed-mode refusal, got {other:?}"),
    }
    finish("8 (guaranteed-mode refusal without force)", start, 1_000);
}
