#![allow(dead_code)]

use beliefcnf::{gen_instance, BeliefNetwork, CnfFormula, NetworkParams, QueryParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Relative agreement required between an elimination result and the oracle.
pub const REL_TOL: f64 = 1e-9;
/// Below this both values count as zero; sums of non-negative terms only
/// reach it through underflow.
pub const ZERO_FLOOR: f64 = 1e-300;

pub fn agrees(got: f64, want: f64) -> bool {
    if want.abs() < ZERO_FLOOR {
        return got.abs() < ZERO_FLOOR;
    }
    ((got - want) / want).abs() <= REL_TOL
}

pub struct SuiteInstance {
    pub seed: u64,
    pub network: NetworkParams,
    pub query: QueryParams,
    pub net: BeliefNetwork,
    pub phi: CnfFormula,
}

pub const SUITE_SIZE: usize = 200;
const SUITE_SEED: u64 = 0x5EED_0001;

/// 200 small instances: n in [4,12], f in [2,4], d in {0, 0.5, 0.9},
/// c in [0,6], e in [0,3]. Instance k is generated from seed k.
pub fn oracle_suite() -> Vec<SuiteInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    (0..SUITE_SIZE as u64)
        .map(|seed| {
            let network = NetworkParams {
                vars: rng.gen_range(4..=12),
                max_family: rng.gen_range(2..=4),
                det_frac: [0.0, 0.5, 0.9][rng.gen_range(0..3)],
            };
            let query = QueryParams {
                clauses: rng.gen_range(0..=6),
                observations: rng.gen_range(0..=3),
            };
            let (net, phi) = gen_instance(network, query, seed).expect("suite parameters are valid");
            SuiteInstance {
                seed,
                network,
                query,
                net,
                phi,
            }
        })
        .collect()
}

pub fn median(mut xs: Vec<f64>) -> f64 {
    assert!(!xs.is_empty());
    xs.sort_by(|a, b| a.total_cmp(b));
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}
