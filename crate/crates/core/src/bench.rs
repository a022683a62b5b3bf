//! Batch evaluation driven by a TOML spec, written as CSV.
//!
//! ```toml
//! seed = 1
//! instances = 10
//! vars = 30
//! max_family = 4
//! det_frac = 0.0
//! clauses = 30
//! obs = 9
//!
//! [[runs]]
//! alg = "cpe"
//! i_bound = 0
//!
//! [[runs]]
//! alg = "hidden"
//! ```
//!
//! Instance `k` is generated from seed `seed + k`. When `[[files]]` entries
//! are present they replace the generated instances.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::engine::EngineConfig;
use crate::error::{Error, Result};
use crate::generator::{gen_instance, NetworkParams, QueryParams};
use crate::io::{format_probability, read_dimacs, read_network};
use crate::model::{BeliefNetwork, CnfFormula};
use crate::resolution::IBound;
use crate::solver::{Algorithm, Solver};

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub alg: String,
    #[serde(default)]
    pub i_bound: IBound,
    #[serde(default = "yes")]
    pub reorder: bool,
}

impl RunSpec {
    pub fn solver(&self) -> Result<Solver> {
        let mut cfg = EngineConfig::default().with_i_bound(self.i_bound);
        if !self.reorder {
            cfg = cfg.without_reorder();
        }
        Ok(Solver::new(self.alg.parse::<Algorithm>()?).with_config(cfg))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFiles {
    pub net: PathBuf,
    pub cnf: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchSpec {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub instances: usize,
    #[serde(default)]
    pub vars: usize,
    #[serde(default = "default_family")]
    pub max_family: usize,
    #[serde(default)]
    pub det_frac: f64,
    #[serde(default)]
    pub clauses: usize,
    #[serde(default)]
    pub obs: usize,
    #[serde(default)]
    pub files: Vec<InstanceFiles>,
    pub runs: Vec<RunSpec>,
}

fn default_family() -> usize {
    3
}

impl BenchSpec {
    pub fn parse(text: &str) -> Result<BenchSpec> {
        toml::from_str(text).map_err(|e| Error::InvalidParameter(format!("bench spec: {e}")))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<BenchSpec> {
        BenchSpec::parse(&std::fs::read_to_string(path)?)
    }

    pub fn network_params(&self) -> NetworkParams {
        NetworkParams {
            vars: self.vars,
            max_family: self.max_family,
            det_frac: self.det_frac,
        }
    }

    pub fn query_params(&self) -> QueryParams {
        QueryParams {
            clauses: self.clauses,
            observations: self.obs,
        }
    }

    /// Loads or generates every instance. Relative file paths resolve
    /// against `base`.
    pub fn instances(&self, base: &Path) -> Result<Vec<(BeliefNetwork, CnfFormula)>> {
        if !self.files.is_empty() {
            return self
                .files
                .iter()
                .map(|f| {
                    Ok((
                        read_network(base.join(&f.net))?,
                        read_dimacs(base.join(&f.cnf))?.formula,
                    ))
                })
                .collect();
        }
        (0..self.instances)
            .map(|k| {
                gen_instance(
                    self.network_params(),
                    self.query_params(),
                    self.seed.wrapping_add(k as u64),
                )
            })
            .collect()
    }
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub instance: usize,
    pub alg: String,
    pub i_bound: String,
    pub time_s: String,
    pub mf: usize,
    #[serde(rename = "C")]
    pub derived_clauses: usize,
    #[serde(rename = "U")]
    pub derived_units: usize,
    #[serde(rename = "F")]
    pub extracted: usize,
    #[serde(rename = "O")]
    pub observations: usize,
    pub result: String,
}

/// Evaluates every run on every instance, one instance at a time.
pub fn run_bench(spec: &BenchSpec, base: &Path) -> Result<Vec<BenchRow>> {
    let solvers = spec.runs.iter().map(RunSpec::solver).collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for (k, (net, phi)) in spec.instances(base)?.iter().enumerate() {
        for (run, solver) in spec.runs.iter().zip(&solvers) {
            let (p, stats) = solver.evaluate(net, phi)?;
            rows.push(BenchRow {
                instance: k,
                alg: solver.algorithm.name().to_string(),
                i_bound: run.i_bound.to_string(),
                time_s: format!("{:.6}", stats.seconds()),
                mf: stats.mf,
                derived_clauses: stats.derived_clauses,
                derived_units: stats.derived_units,
                extracted: stats.extracted,
                observations: stats.observations,
                result: format_probability(p),
            });
        }
    }
    Ok(rows)
}

pub fn write_csv<W: std::io::Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.into()))?;
    }
    w.flush()?;
    Ok(())
}
