//! Random benchmark instances.
//!
//! A network is described by `⟨n, f, d⟩`: `n` variables in a fixed order,
//! families of at most `f` variables with parents drawn from earlier
//! variables, and a fraction `d` of deterministic CPT rows. A query is
//! described by `⟨c, e⟩`: `c` random 3-clauses plus `e` observations.
//!
//! All randomness comes from ChaCha8 seeded with `seed_from_u64`, as
//! implemented by `rand_chacha` 0.3 with `rand` 0.8 sampling. The identifier
//! [`RNG_ALGORITHM`] is written into generated files.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BeliefNetwork, CnfFormula, Cpt, Literal, Provenance, VariableId};

pub const RNG_ALGORITHM: &str = "chacha8-rand0.8";

/// Offset mixed into a seed to derive the query stream from the network seed.
pub const QUERY_SEED_OFFSET: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams {
    pub vars: usize,
    pub max_family: usize,
    pub det_frac: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryParams {
    pub clauses: usize,
    pub observations: usize,
}

/// Owns one random stream; successive calls continue the stream.
#[derive(Clone, Debug)]
pub struct InstanceGenerator {
    rng: ChaCha8Rng,
}

impl InstanceGenerator {
    pub fn new(seed: u64) -> Self {
        InstanceGenerator {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn network(&mut self, p: NetworkParams) -> Result<BeliefNetwork> {
        if p.vars == 0 || p.max_family == 0 || !(0.0..=1.0).contains(&p.det_frac) {
            return Err(Error::InvalidParameter(format!(
                "network needs n >= 1, f >= 1, d in [0,1]; got n={} f={} d={}",
                p.vars, p.max_family, p.det_frac
            )));
        }
        let rng = &mut self.rng;
        let mut cpts = Vec::with_capacity(p.vars);
        for i in 0..p.vars {
            let k = rng.gen_range(0..=(p.max_family - 1).min(i));
            let mut parents: Vec<VariableId> = sample(rng, i, k).into_iter().map(VariableId).collect();
            parents.sort();
            let table = (0..1usize << k)
                .map(|_| {
                    if rng.gen_bool(p.det_frac) {
                        if rng.gen_bool(0.5) {
                            1.0
                        } else {
                            0.0
                        }
                    } else {
                        loop {
                            let x: f64 = rng.gen();
                            if x > 0.0 {
                                break x;
                            }
                        }
                    }
                })
                .collect();
            cpts.push(Cpt::new(i, parents, table)?);
        }
        BeliefNetwork::new(p.vars, cpts)
    }

    pub fn query(&mut self, net: &BeliefNetwork, p: QueryParams) -> Result<CnfFormula> {
        let n = net.len();
        if p.observations > n || (p.clauses > 0 && n < 3) {
            return Err(Error::InvalidParameter(format!(
                "query needs e <= n and n >= 3 when c > 0; got n={n} c={} e={}",
                p.clauses, p.observations
            )));
        }
        let rng = &mut self.rng;
        let mut phi = CnfFormula::new();
        for _ in 0..p.clauses {
            let vars = sample(rng, n, 3);
            let lits: Vec<Literal> = vars.into_iter().map(|v| Literal::new(v, rng.gen_bool(0.5))).collect();
            phi.add(lits, Provenance::Query);
        }
        for v in sample(rng, n, p.observations) {
            phi.add_unit(Literal::new(v, rng.gen_bool(0.5)), Provenance::Evidence);
        }
        Ok(phi)
    }
}

pub fn gen_network(n: usize, f: usize, d: f64, seed: u64) -> Result<BeliefNetwork> {
    InstanceGenerator::new(seed).network(NetworkParams {
        vars: n,
        max_family: f,
        det_frac: d,
    })
}

pub fn gen_query(net: &BeliefNetwork, c: usize, e: usize, seed: u64) -> Result<CnfFormula> {
    InstanceGenerator::new(seed).query(
        net,
        QueryParams {
            clauses: c,
            observations: e,
        },
    )
}

/// Network from `seed`, query from `seed ^ QUERY_SEED_OFFSET`.
pub fn gen_instance(net: NetworkParams, query: QueryParams, seed: u64) -> Result<(BeliefNetwork, CnfFormula)> {
    let bn = InstanceGenerator::new(seed).network(net)?;
    let phi = InstanceGenerator::new(seed ^ QUERY_SEED_OFFSET).query(&bn, query)?;
    Ok((bn, phi))
}
