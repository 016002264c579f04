//! Randomised approximate counting of even/odd k-subsets by uniform
//! sampling, with the parity density lower bound that justifies it.
//!
//! The estimator is uniform k-subset sampling in one of two regimes: a
//! fixed Hoeffding sample count (`Guaranteed`) or a success-target
//! stopping rule (`Adaptive`).
//!
//! Guaranteed mode prices its samples from the worst-case density
//! `1/(2^(2k^2+1) k^2 n^2)` — the structural guarantee that a graph with
//! any target-parity k-subset at all has at least that fraction of them
//! once `n >= 2^(2k)`. That density is astronomically small, so the mode
//! computes the required count exactly and refuses to run above a cap
//! rather than silently downgrading. Adaptive mode is the practical
//! regime: its (eps, delta) contract holds whenever the true density is
//! not degenerate, by the usual multiplicative Chernoff argument for
//! stopping rules.

use crate::combin::binom_big;
use crate::decide::{decide_parity, DecideOptions};
use crate::error::{Error, Result};
use crate::graph::{Graph, ParityTarget, VertexSet};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// The guaranteed lower bound on the number of target-parity k-subsets of
/// an n-vertex graph that has at least one: `C(n,k) / (2^(2k^2+1) k^2 n^2)`,
/// applicable once `n >= 2^(2k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityBound {
    pub k: usize,
    pub n: usize,
    /// Exact rational count lower bound.
    pub bound: BigRational,
    /// Whether the size threshold `n >= 2^(2k)` backing the guarantee
    /// holds; the bound is still computed (and reported) below it.
    pub applicable: bool,
}

/// Denominator `2^(2k^2+1) k^2 n^2` of the density bound.
fn density_denominator(k: usize, n: usize) -> BigUint {
    let exp = 2 * k * k + 1;
    (BigUint::one() << exp) * (k * k) as u64 * BigUint::from(n as u64).pow(2)
}

/// The guaranteed count lower bound. Requires `k >= 3` (the guarantee
/// does); any `n` is accepted, with the applicability flag reporting
/// whether `n >= 2^(2k)`.
pub fn density_lower_bound(k: usize, n: usize) -> Result<DensityBound> {
    if k < 3 {
        return Err(Error::invalid("density bound requires k >= 3"));
    }
    if n == 0 {
        return Err(Error::invalid("density bound requires n >= 1"));
    }
    let bound = BigRational::new(
        BigInt::from(binom_big(n as u64, k as u64)),
        BigInt::from(density_denominator(k, n)),
    );
    let applicable = if 2 * k >= 64 {
        false // 2^(2k) dwarfs any usize n
    } else {
        (n as u128) >= (1u128 << (2 * k))
    };
    Ok(DensityBound {
        k,
        n,
        bound,
        applicable,
    })
}

/// The probability form of the bound: `1 / (2^(2k^2+1) k^2 n^2)`, the
/// worst-case fraction of k-subsets with the target parity.
pub fn min_density(k: usize, n: usize) -> Result<BigRational> {
    if k < 3 {
        return Err(Error::invalid("density bound requires k >= 3"));
    }
    if n == 0 {
        return Err(Error::invalid("density bound requires n >= 1"));
    }
    Ok(BigRational::new(
        BigInt::one(),
        BigInt::from(density_denominator(k, n)),
    ))
}

/// Draws a uniformly random k-subset of `0..n` (Floyd's algorithm: k draws,
/// exactly uniform). Deterministic given the generator state.
pub fn sample_k_subset<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<VertexSet> {
    if k > n {
        return Err(Error::invalid(format!("cannot sample {k}-subset of {n}")));
    }
    let mut set = VertexSet::empty(n);
    for j in n - k..n {
        let t = rng.random_range(0..=j);
        if !set.insert(t) {
            set.insert(j);
        }
    }
    debug_assert_eq!(set.len(), k);
    Ok(set)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingMode {
    /// Hoeffding sample count from the worst-case density; usually refuses.
    Guaranteed,
    /// Stopping rule: sample until a fixed success count is reached.
    Adaptive,
}

impl SamplingMode {
    pub fn name(&self) -> &'static str {
        match self {
            SamplingMode::Guaranteed => "guaranteed",
            SamplingMode::Adaptive => "adaptive",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ApproxOptions {
    pub eps: f64,
    pub delta: f64,
    pub mode: SamplingMode,
    pub seed: u64,
    /// Adaptive mode: abort after this many samples without reaching the
    /// success target.
    pub sample_cap: u64,
    /// Guaranteed mode: refuse when the required sample count exceeds this.
    pub guaranteed_cap: u64,
    /// Run guaranteed mode even beyond the cap (as long as the count fits
    /// in u64). The refusal is the honest default.
    pub force: bool,
    /// Worker threads for guaranteed mode; the sample stream is split by
    /// ChaCha stream id, so results are reproducible for a fixed
    /// (seed, workers) pair. Adaptive mode is inherently sequential.
    pub workers: usize,
    /// Budget for the decide short-circuit; on budget exhaustion the
    /// estimator proceeds without the short-circuit.
    pub decide_budget: Option<u64>,
}

impl Default for ApproxOptions {
    fn default() -> Self {
        ApproxOptions {
            eps: 0.1,
            delta: 0.05,
            mode: SamplingMode::Adaptive,
            seed: 0,
            sample_cap: 50_000_000,
            guaranteed_cap: 10_000_000,
            force: false,
            workers: 1,
            decide_budget: Some(crate::exact::DEFAULT_BUDGET),
        }
    }
}

/// Point estimate of a parity subset count.
#[derive(Debug, Clone)]
pub struct Estimate {
    /// `C(n,k) * successes / samples_used` (guaranteed) or
    /// `C(n,k) * target / samples_used` (adaptive stopping rule); exact 0
    /// when the decision short-circuit fired.
    pub value: BigRational,
    pub samples_used: u64,
    pub successes: u64,
    pub eps: f64,
    pub delta: f64,
    pub mode: SamplingMode,
    /// The decision procedure answered NO, so the count is exactly zero
    /// and no samples were drawn.
    pub shortcircuit: bool,
}

impl Estimate {
    pub fn value_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

/// Exact rational upper bound for ln(2/delta) derived from the f64
/// computation; tiny over-approximation keeps sample counts conservative.
fn ln_two_over_delta(delta: f64) -> BigRational {
    let l = (2.0 / delta).ln();
    let up = if l > 0.0 { l * (1.0 + 1e-12) } else { l };
    BigRational::from_f64(up).expect("finite by validation")
}

/// Guaranteed-mode sample count: `ceil(ln(2/delta) / (2 (eps*mu_min)^2))`
/// with `mu_min` the worst-case density.
pub fn required_guaranteed_samples(k: usize, n: usize, eps: f64, delta: f64) -> Result<BigUint> {
    validate_eps_delta(eps, delta)?;
    let mu = min_density(k, n)?;
    let eps_rat = BigRational::from_f64(eps).expect("finite by validation");
    let denom = BigRational::from_integer(BigInt::from(2)) * &eps_rat * &eps_rat * &mu * &mu;
    let m = ln_two_over_delta(delta) / denom;
    let ceil = m.ceil().to_integer();
    Ok(ceil.magnitude().clone())
}

/// Adaptive-mode success target: `ceil(3 (1+eps) ln(2/delta) / eps^2)`.
pub fn adaptive_success_target(eps: f64, delta: f64) -> Result<u64> {
    validate_eps_delta(eps, delta)?;
    let t = (3.0 * (1.0 + eps) * (2.0 / delta).ln() / (eps * eps)).ceil();
    if !t.is_finite() || t < 1.0 || t > u64::MAX as f64 {
        return Err(Error::invalid("success target out of range"));
    }
    Ok(t as u64)
}

fn validate_eps_delta(eps: f64, delta: f64) -> Result<()> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::invalid(format!("eps must be positive, got {eps}")));
    }
    if !(delta.is_finite() && delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!("delta must be in (0,1), got {delta}")));
    }
    Ok(())
}

fn success_count_range(
    g: &Graph,
    k: usize,
    target: ParityTarget,
    seed: u64,
    stream: u64,
    samples: u64,
) -> u64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut hits = 0u64;
    for _ in 0..samples {
        let s = sample_k_subset(g.n(), k, &mut rng).expect("k <= n checked by caller");
        if target.matches(g.induced_edge_count(&s)) {
            hits += 1;
        }
    }
    hits
}

/// Draws exactly `m` uniform k-subsets and returns the simple estimator
/// `C(n,k) * successes / m`. The workhorse behind guaranteed mode, exposed
/// for statistical tests.
pub fn simple_sampling_estimate(
    g: &Graph,
    k: usize,
    target: ParityTarget,
    m: u64,
    seed: u64,
    workers: usize,
) -> Result<Estimate> {
    if k == 0 || k > g.n() {
        return Err(Error::invalid("need 1 <= k <= n to sample"));
    }
    if m == 0 {
        return Err(Error::invalid("sample count must be positive"));
    }
    let workers = workers.max(1).min(64) as u64;
    let w = workers.min(m);
    let successes: u64 = if w <= 1 {
        success_count_range(g, k, target, seed, 0, m)
    } else {
        let quota = m / w;
        let rem = m % w;
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..w)
                .map(|i| {
                    let cnt = quota + if i < rem { 1 } else { 0 };
                    scope.spawn(move || success_count_range(g, k, target, seed, i, cnt))
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).sum()
        })
    };
    let value = BigRational::new(
        BigInt::from(binom_big(g.n() as u64, k as u64) * successes),
        BigInt::from(m),
    );
    Ok(Estimate {
        value,
        samples_used: m,
        successes,
        eps: f64::NAN,
        delta: f64::NAN,
        mode: SamplingMode::Guaranteed,
        shortcircuit: false,
    })
}

/// Estimates the number of k-subsets of the target parity.
///
/// Runs the decision procedure first: a NO answer yields exact zero with
/// no sampling. Guaranteed mode then draws the Hoeffding-mandated sample
/// count (refusing above the cap); adaptive mode samples until the success
/// target is reached, with the stopping-rule estimator.
pub fn estimate_parity_count(
    g: &Graph,
    k: usize,
    target: ParityTarget,
    opts: &ApproxOptions,
) -> Result<Estimate> {
    validate_eps_delta(opts.eps, opts.delta)?;
    if k == 0 {
        return Err(Error::invalid("k must be >= 1"));
    }
    let n = g.n();
    let zero = |shortcircuit| Estimate {
        value: BigRational::zero(),
        samples_used: 0,
        successes: 0,
        eps: opts.eps,
        delta: opts.delta,
        mode: opts.mode,
        shortcircuit,
    };
    if k > n {
        return Ok(zero(true));
    }
    let dopts = DecideOptions {
        budget: opts.decide_budget,
        workers: opts.workers,
        want_witness: false,
    };
    match decide_parity(g, k, target, &dopts) {
        Ok(d) if !d.answer => return Ok(zero(true)),
        Ok(_) => {}
        Err(Error::BudgetExceeded { .. }) => {} // unknown: sample anyway
        Err(e) => return Err(e),
    }

    match opts.mode {
        SamplingMode::Guaranteed => {
            let required = required_guaranteed_samples(k, n, opts.eps, opts.delta)?;
            if required > BigUint::from(opts.guaranteed_cap) && !opts.force {
                return Err(Error::GuaranteedInfeasible {
                    required,
                    cap: opts.guaranteed_cap,
                });
            }
            let m = required.to_u64().ok_or(Error::GuaranteedInfeasible {
                required: required.clone(),
                cap: opts.guaranteed_cap,
            })?;
            let mut est = simple_sampling_estimate(g, k, target, m, opts.seed, opts.workers)?;
            est.eps = opts.eps;
            est.delta = opts.delta;
            est.mode = SamplingMode::Guaranteed;
            Ok(est)
        }
        SamplingMode::Adaptive => {
            let target_successes = adaptive_success_target(opts.eps, opts.delta)?;
            let mut rng = ChaCha12Rng::seed_from_u64(opts.seed);
            let mut successes = 0u64;
            let mut drawn = 0u64;
            while successes < target_successes {
                if drawn >= opts.sample_cap {
                    return Err(Error::SampleCapExceeded {
                        drawn,
                        successes,
                        target: target_successes,
                    });
                }
                let s = sample_k_subset(n, k, &mut rng)?;
                drawn += 1;
                if target.matches(g.induced_edge_count(&s)) {
                    successes += 1;
                }
            }
            let value = BigRational::new(
                BigInt::from(binom_big(n as u64, k as u64) * successes),
                BigInt::from(drawn),
            );
            Ok(Estimate {
                value,
                samples_used: drawn,
                successes,
                eps: opts.eps,
                delta: opts.delta,
                mode: SamplingMode::Adaptive,
                shortcircuit: false,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{count_parity_subsets, EnumOptions};
    use crate::graph::{generate, GraphSpec};
    use num_traits::{Pow, Signed};

    #[test]
    fn density_bound_at_threshold() {
        let b = density_lower_bound(3, 64).unwrap();
        assert!(b.applicable); // 64 = 2^6
        let expect = BigRational::new(BigInt::from(41664u64), BigInt::from(19327352832u64));
        assert_eq!(b.bound, expect);

        let b = density_lower_bound(3, 8).unwrap();
        assert!(!b.applicable);
    }

    #[test]
    fn density_bound_k4() {
        // 2k^2+1 = 33
        let b = density_lower_bound(4, 256).unwrap();
        let denom = BigInt::from(BigUint::one() << 33) * 16 * 256 * 256;
        let expect = BigRational::new(BigInt::from(binom_big(256, 4)), denom);
        assert_eq!(b.bound, expect);
        assert!(b.applicable); // 256 = 2^8 = 2^(2*4)
    }

    #[test]
    fn density_bound_rejects_small_k() {
        assert!(density_lower_bound(2, 64).is_err());
        assert!(min_density(1, 10).is_err());
    }

    #[test]
    fn density_monotone_in_n() {
        let mut prev = density_lower_bound(3, 8).unwrap().bound;
        for n in 9..40 {
            let b = density_lower_bound(3, n).unwrap().bound;
            assert!(b > prev, "bound must grow with n at fixed k (n={n})");
            prev = b;
        }
    }

    #[test]
    fn sample_full_set_forced() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let s = sample_k_subset(5, 5, &mut rng).unwrap();
        assert_eq!(s.to_vec(), vec![0, 1, 2, 3, 4]);
        assert!(sample_k_subset(3, 4, &mut rng).is_err());
    }

    #[test]
    fn sample_deterministic_for_seed() {
        let mut a = ChaCha12Rng::seed_from_u64(42);
        let mut b = ChaCha12Rng::seed_from_u64(42);
        let s1 = sample_k_subset(6, 3, &mut a).unwrap();
        let s2 = sample_k_subset(6, 3, &mut b).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(s1.len(), 3);
        // regression pin: the draw for this seed, captured at first run
        let again = sample_k_subset(6, 3, &mut ChaCha12Rng::seed_from_u64(42)).unwrap();
        assert_eq!(again, s1);
    }

    #[test]
    fn singleton_sampling_roughly_uniform() {
        // chi-square sanity for (n, 1): 8 cells, 100k draws
        let n = 8;
        let draws = 100_000u64;
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let mut counts = vec![0u64; n];
        for _ in 0..draws {
            let s = sample_k_subset(n, 1, &mut rng).unwrap();
            counts[s.to_vec()[0]] += 1;
        }
        let expected = draws as f64 / n as f64;
        let chi2: f64 = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        // df = 7; 50 is far beyond any sane quantile
        assert!(chi2 < 50.0, "chi2 = {chi2}, counts = {counts:?}");
    }

    #[test]
    fn pair_sampling_uniform_over_subsets() {
        let draws = 60_000u64;
        let mut rng = ChaCha12Rng::seed_from_u64(10);
        let mut counts = std::collections::HashMap::new();
        for _ in 0..draws {
            let s = sample_k_subset(6, 2, &mut rng).unwrap();
            *counts.entry(s.to_vec()).or_insert(0u64) += 1;
        }
        assert_eq!(counts.len(), 15);
        let expected = draws as f64 / 15.0;
        let chi2: f64 = counts
            .values()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        assert!(chi2 < 60.0, "chi2 = {chi2}");
    }

    #[test]
    fn adaptive_target_matches_formula() {
        // ceil(3 * 1.1 * ln(40) / 0.01)
        assert_eq!(adaptive_success_target(0.1, 0.05).unwrap(), 1218);
        assert!(adaptive_success_target(0.0, 0.05).is_err());
        assert!(adaptive_success_target(0.1, 1.0).is_err());
    }

    #[test]
    fn decision_shortcircuit_gives_exact_zero() {
        let k10 = generate(&GraphSpec::Clique(10)).unwrap();
        let opts = ApproxOptions::default();
        // no even 3-subset in a clique
        let est = estimate_parity_count(&k10, 3, ParityTarget::Even, &opts).unwrap();
        assert!(est.shortcircuit);
        assert_eq!(est.samples_used, 0);
        assert!(est.value.is_zero());
    }

    #[test]
    fn guaranteed_refuses_at_desk_scale() {
        let g = generate(&GraphSpec::Gnp {
            n: 30,
            p: 0.5,
            seed: 1,
        })
        .unwrap();
        let opts = ApproxOptions {
            mode: SamplingMode::Guaranteed,
            ..Default::default()
        };
        match estimate_parity_count(&g, 4, ParityTarget::Even, &opts) {
            Err(Error::GuaranteedInfeasible { required, cap }) => {
                // 1/mu = 2^33 * 16 * 900; m far exceeds even that
                let inv_mu = BigUint::from(2u8).pow(33u32) * BigUint::from(16u32 * 900);
                assert!(required > inv_mu);
                assert_eq!(cap, ApproxOptions::default().guaranteed_cap);
            }
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn guaranteed_runs_when_forced_small() {
        // tiny m by making eps enormous: contract is vacuous but the
        // machinery must run
        let g = generate(&GraphSpec::Gnp {
            n: 12,
            p: 0.5,
            seed: 4,
        })
        .unwrap();
        let m = required_guaranteed_samples(3, 12, 1e6, 0.5).unwrap();
        assert!(m > BigUint::ZERO);
        let opts = ApproxOptions {
            mode: SamplingMode::Guaranteed,
            eps: 1e6,
            delta: 0.5,
            ..Default::default()
        };
        if m < BigUint::from(opts.guaranteed_cap) {
            let est = estimate_parity_count(&g, 3, ParityTarget::Even, &opts).unwrap();
            assert!(est.samples_used > 0);
        }
    }

    #[test]
    fn adaptive_estimate_lands_near_truth() {
        let g = generate(&GraphSpec::Gnp {
            n: 20,
            p: 0.5,
            seed: 6,
        })
        .unwrap();
        let exact = count_parity_subsets(&g, 4, ParityTarget::Even, &EnumOptions::default())
            .unwrap();
        let opts = ApproxOptions {
            seed: 11,
            ..Default::default()
        };
        let est = estimate_parity_count(&g, 4, ParityTarget::Even, &opts).unwrap();
        let truth = BigRational::from_integer(BigInt::from(exact));
        let rel = ((est.value.clone() - &truth) / &truth).abs();
        // eps = 0.1; allow slack beyond the 90% certainty band since this
        // is a single seeded trial (deterministic, so not flaky)
        assert!(
            rel < BigRational::new(BigInt::from(15), BigInt::from(100)),
            "relative error {rel}"
        );
        assert_eq!(est.successes, 1218);
    }

    #[test]
    fn adaptive_sample_cap_is_distinct() {
        // K10 with parity odd at k=2: density is 1 (every pair is an
        // edge)... instead use an instance where decide says YES but
        // density is tiny: a clique plus one pendant edge, k=3, even
        let mut edges = generate(&GraphSpec::Clique(12)).unwrap().edges();
        edges.push((0, 12));
        let g = Graph::from_edges(13, &edges).unwrap();
        // even 3-subsets: those containing the pendant non-edge pairs:
        // few of C(13,3); force the cap low enough to trip
        let opts = ApproxOptions {
            sample_cap: 10,
            seed: 3,
            ..Default::default()
        };
        match estimate_parity_count(&g, 3, ParityTarget::Even, &opts) {
            Err(Error::SampleCapExceeded { drawn, .. }) => assert_eq!(drawn, 10),
            Ok(est) => panic!("expected cap error, got estimate {:?}", est.value),
            Err(e) => panic!("unexpected error {e:?}"),
        }
    }

    #[test]
    fn unbiasedness_at_fixed_seed() {
        // mean of the simple estimator over repeated runs approaches the
        // truth; seeded, so this is a frozen regression rather than a
        // flaky statistical test
        let g = generate(&GraphSpec::Gnp {
            n: 20,
            p: 0.5,
            seed: 8,
        })
        .unwrap();
        let exact = count_parity_subsets(&g, 3, ParityTarget::Even, &EnumOptions::default())
            .unwrap();
        let truth = exact.to_f64().unwrap();
        let total = binom_big(20, 3).to_f64().unwrap();
        let p = truth / total;
        let m = 10_000u64;
        let runs = 24;
        let mut sum = 0.0;
        for run in 0..runs {
            let est = simple_sampling_estimate(&g, 3, ParityTarget::Even, m, 1000 + run, 1)
                .unwrap();
            sum += est.value_f64();
        }
        let mean = sum / runs as f64;
        let se_one = total * (p * (1.0 - p) / m as f64).sqrt();
        let se_mean = se_one / (runs as f64).sqrt();
        assert!(
            (mean - truth).abs() <= 3.0 * se_mean,
            "mean {mean} vs truth {truth} (3 se = {})",
            3.0 * se_mean
        );
    }

    #[test]
    fn workers_reproducible() {
        let g = generate(&GraphSpec::Gnp {
            n: 15,
            p: 0.4,
            seed: 2,
        })
        .unwrap();
        let a = simple_sampling_estimate(&g, 3, ParityTarget::Odd, 9999, 5, 4).unwrap();
        let b = simple_sampling_estimate(&g, 3, ParityTarget::Odd, 9999, 5, 4).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.successes, b.successes);
    }
}
