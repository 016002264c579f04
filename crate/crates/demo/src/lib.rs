//! WebAssembly bindings for the browser demo: three interactive operations,
//! each a pure JSON-string function so the page needs no framework and the
//! logic is testable on the host target.
//!
//! Build for the web with `wasm-pack build --target web` (see the README);
//! the package also compiles natively so `cargo test` exercises the API.

use evenodd::approx::{adaptive_success_target, sample_k_subset};
use evenodd::decide::{decide_parity, classify, DecideOptions};
use evenodd::exact::{count_parity_subsets, edge_count_histogram, EnumOptions};
use evenodd::gf2::total_even_subgraphs;
use evenodd::graph::{generate, Graph, GraphSpec, ParityTarget};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

/// Interactive limits: the page stays responsive below these.
const MAX_N: usize = 48;
const MAX_K: usize = 10;
const MAX_SUBSETS: u64 = 5_000_000;

#[derive(Deserialize)]
struct GraphRequest {
    class: String,
    #[serde(default)]
    n: usize,
    #[serde(default)]
    a: usize,
    #[serde(default)]
    b: usize,
    #[serde(default)]
    p: f64,
    #[serde(default)]
    seed: u64,
}

impl GraphRequest {
    fn build(&self) -> Result<Graph, String> {
        let spec = match self.class.as_str() {
            "clique" => GraphSpec::Clique(self.n),
            "independent" => GraphSpec::Independent(self.n),
            "two-cliques" => GraphSpec::TwoCliques(self.a, self.b),
            "bipartite" => GraphSpec::CompleteBipartite(self.a, self.b),
            "gnp" => GraphSpec::Gnp {
                n: self.n,
                p: self.p,
                seed: self.seed,
            },
            other => return Err(format!("unknown graph class `{other}`")),
        };
        let g = generate(&spec).map_err(|e| e.to_string())?;
        if g.n() == 0 {
            return Err("the graph is empty; raise n".into());
        }
        if g.n() > MAX_N {
            return Err(format!("n = {} exceeds the demo limit {MAX_N}", g.n()));
        }
        Ok(g)
    }
}

fn parity_from(s: &str) -> Result<ParityTarget, String> {
    match s {
        "even" => Ok(ParityTarget::Even),
        "odd" => Ok(ParityTarget::Odd),
        other => Err(format!("parity must be even|odd, got `{other}`")),
    }
}

fn check_k(g: &Graph, k: usize) -> Result<(), String> {
    if k == 0 || k > MAX_K {
        return Err(format!("k must be in 1..={MAX_K}"));
    }
    let planned = evenodd::combin::binom(g.n() as u64, k as u64);
    if planned > MAX_SUBSETS as u128 {
        return Err(format!(
            "C({},{k}) = {planned} subsets exceeds the demo limit {MAX_SUBSETS}",
            g.n()
        ));
    }
    Ok(())
}

fn err_json(msg: &str) -> String {
    serde_json::json!({ "error": msg }).to_string()
}

#[derive(Deserialize)]
struct CensusRequest {
    #[serde(flatten)]
    graph: GraphRequest,
    k: usize,
}

#[derive(Serialize)]
struct CensusResponse {
    n: usize,
    edges: u64,
    k: usize,
    /// Histogram entry e = number of k-subsets inducing exactly e edges,
    /// as decimal strings (counts can exceed 2^53).
    bins: Vec<String>,
    even_total: String,
    odd_total: String,
    total_even_all_sizes: String,
    edge_list: Vec<(usize, usize)>,
}

/// Edge-count histogram over all k-subsets of a generated graph.
#[wasm_bindgen]
pub fn census_json(input: &str) -> String {
    match census_impl(input) {
        Ok(s) => s,
        Err(m) => err_json(&m),
    }
}

fn census_impl(input: &str) -> Result<String, String> {
    let req: CensusRequest = serde_json::from_str(input).map_err(|e| e.to_string())?;
    let g = req.graph.build()?;
    check_k(&g, req.k)?;
    let opts = EnumOptions {
        budget: Some(MAX_SUBSETS),
        workers: 1,
    };
    let hist = edge_count_histogram(&g, req.k, &opts).map_err(|e| e.to_string())?;
    let mut even = BigUint::ZERO;
    let mut odd = BigUint::ZERO;
    for (e, c) in hist.iter().enumerate() {
        if e % 2 == 0 {
            even += c;
        } else {
            odd += c;
        }
    }
    let resp = CensusResponse {
        n: g.n(),
        edges: g.edge_count(),
        k: req.k,
        bins: hist.iter().map(|c| c.to_string()).collect(),
        even_total: even.to_string(),
        odd_total: odd.to_string(),
        total_even_all_sizes: total_even_subgraphs(&g)
            .map_err(|e| e.to_string())?
            .to_string(),
        edge_list: g.edges(),
    };
    serde_json::to_string(&resp).map_err(|e| e.to_string())
}

#[derive(Deserialize)]
struct DecideRequest {
    #[serde(flatten)]
    graph: GraphRequest,
    k: usize,
    parity: String,
}

#[derive(Serialize)]
struct DecideResponse {
    n: usize,
    edges: u64,
    k: usize,
    parity: String,
    answer: bool,
    route: String,
    class: String,
    witness: Option<Vec<usize>>,
    witness_edge_count: Option<u64>,
    edge_list: Vec<(usize, usize)>,
}

/// Decide whether any k-subset of the target parity exists, with a witness.
#[wasm_bindgen]
pub fn decide_json(input: &str) -> String {
    match decide_impl(input) {
        Ok(s) => s,
        Err(m) => err_json(&m),
    }
}

fn decide_impl(input: &str) -> Result<String, String> {
    let req: DecideRequest = serde_json::from_str(input).map_err(|e| e.to_string())?;
    let g = req.graph.build()?;
    let target = parity_from(&req.parity)?;
    if req.k == 0 || req.k > MAX_K {
        return Err(format!("k must be in 1..={MAX_K}"));
    }
    let opts = DecideOptions {
        budget: Some(MAX_SUBSETS),
        workers: 1,
        want_witness: true,
    };
    let d = decide_parity(&g, req.k, target, &opts).map_err(|e| e.to_string())?;
    let witness = d.witness.as_ref().map(|w| w.to_vec());
    let witness_edge_count = d.witness.as_ref().map(|w| g.induced_edge_count(w));
    let resp = DecideResponse {
        n: g.n(),
        edges: g.edge_count(),
        k: req.k,
        parity: req.parity,
        answer: d.answer,
        route: d.route.name().to_string(),
        class: classify(&g).name().to_string(),
        witness,
        witness_edge_count,
        edge_list: g.edges(),
    };
    serde_json::to_string(&resp).map_err(|e| e.to_string())
}

#[derive(Deserialize)]
struct EstimateRequest {
    #[serde(flatten)]
    graph: GraphRequest,
    k: usize,
    parity: String,
    eps: f64,
    delta: f64,
    #[serde(default)]
    sampler_seed: u64,
}

#[derive(Serialize)]
struct EstimateResponse {
    n: usize,
    k: usize,
    parity: String,
    exact: String,
    exact_f64: f64,
    target_successes: u64,
    samples_used: u64,
    final_estimate: f64,
    /// (samples drawn, running estimate) checkpoints of the adaptive run.
    trajectory: Vec<(u64, f64)>,
    band_low: f64,
    band_high: f64,
    within_band: bool,
}

/// Run the adaptive estimator while recording its convergence trajectory,
/// next to the exact count for comparison.
#[wasm_bindgen]
pub fn estimate_trajectory_json(input: &str) -> String {
    match estimate_impl(input) {
        Ok(s) => s,
        Err(m) => err_json(&m),
    }
}

fn estimate_impl(input: &str) -> Result<String, String> {
    let req: EstimateRequest = serde_json::from_str(input).map_err(|e| e.to_string())?;
    let g = req.graph.build()?;
    let target = parity_from(&req.parity)?;
    check_k(&g, req.k)?;
    if req.k > g.n() {
        return Err("k exceeds the vertex count".into());
    }

    let opts = EnumOptions {
        budget: Some(MAX_SUBSETS),
        workers: 1,
    };
    let exact = count_parity_subsets(&g, req.k, target, &opts).map_err(|e| e.to_string())?;
    let exact_f64 = exact.to_f64().unwrap_or(f64::NAN);

    let target_successes =
        adaptive_success_target(req.eps, req.delta).map_err(|e| e.to_string())?;
    let total = evenodd::combin::binom(g.n() as u64, req.k as u64) as f64;

    let mut rng = ChaCha12Rng::seed_from_u64(req.sampler_seed);
    let mut successes = 0u64;
    let mut drawn = 0u64;
    let mut trajectory = Vec::new();
    let cap = if exact_f64 == 0.0 { 0 } else { 2_000_000u64 };
    let mut next_checkpoint = 1u64;
    while successes < target_successes && drawn < cap {
        let s = sample_k_subset(g.n(), req.k, &mut rng).map_err(|e| e.to_string())?;
        drawn += 1;
        if target.matches(g.induced_edge_count(&s)) {
            successes += 1;
        }
        if drawn == next_checkpoint || successes == target_successes {
            trajectory.push((drawn, total * successes as f64 / drawn as f64));
            // ~120 log-spaced checkpoints keep the payload small
            next_checkpoint = (next_checkpoint as f64 * 1.06).ceil() as u64;
        }
    }
    if successes < target_successes && exact_f64 > 0.0 {
        return Err(format!(
            "sampler cap ({cap}) hit before {target_successes} successes; the density is too small for the demo"
        ));
    }
    let final_estimate = if drawn == 0 {
        0.0
    } else {
        total * successes as f64 / drawn as f64
    };
    let band_low = (1.0 - req.eps) * exact_f64;
    let band_high = (1.0 + req.eps) * exact_f64;
    let resp = EstimateResponse {
        n: g.n(),
        k: req.k,
        parity: req.parity,
        exact: exact.to_string(),
        exact_f64,
        target_successes,
        samples_used: drawn,
        final_estimate,
        trajectory,
        band_low,
        band_high,
        within_band: final_estimate >= band_low && final_estimate <= band_high,
    };
    serde_json::to_string(&resp).map_err(|e| e.to_string())
}
