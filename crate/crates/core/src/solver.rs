use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::engine::{elim_cpe, run_trace, EngineConfig, Run, RunStats};
use crate::error::{Error, Result};
use crate::graph::{augmented_graph, min_degree_order, Ordering};
use crate::model::{BeliefNetwork, CnfFormula};
use crate::oracle::brute_force_cpe;
use crate::transforms::{elim_cpe_d, elim_hidden, extract_clauses, hidden_instance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Bucket elimination with unit resolution and optional BDR(i).
    Cpe,
    /// [`Algorithm::Cpe`] plus clauses extracted from the CPTs.
    CpeD,
    /// Clauses embedded as evidence-fixed hidden variables.
    Hidden,
    /// Enumeration of all assignments.
    Brute,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Cpe, Algorithm::CpeD, Algorithm::Hidden, Algorithm::Brute];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Cpe => "cpe",
            Algorithm::CpeD => "cpe-d",
            Algorithm::Hidden => "hidden",
            Algorithm::Brute => "brute",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown algorithm `{s}`")))
    }
}

/// An algorithm with its engine configuration and ordering choice.
///
/// Without an explicit ordering, `cpe` and `cpe-d` use the min-degree order
/// of the augmented graph and `hidden` the min-degree order of the embedded
/// network.
#[derive(Clone, Debug, PartialEq)]
pub struct Solver {
    pub algorithm: Algorithm,
    pub config: EngineConfig,
    pub ordering: Option<Ordering>,
}

impl Solver {
    pub fn new(algorithm: Algorithm) -> Self {
        Solver {
            algorithm,
            config: EngineConfig::default(),
            ordering: None,
        }
    }

    pub fn with_config(mut self, config: EngineConfig) -> Self {
        self.config = config;
        self
    }

    pub fn with_ordering(mut self, ordering: Ordering) -> Self {
        self.ordering = Some(ordering);
        self
    }

    fn ordering_for(&self, net: &BeliefNetwork, formula: &CnfFormula) -> Result<Ordering> {
        match &self.ordering {
            Some(o) => Ok(o.clone()),
            None => Ok(min_degree_order(&augmented_graph(net, formula)?)),
        }
    }

    fn reject_fixed_ordering(&self) -> Result<()> {
        match self.ordering {
            Some(_) => Err(Error::InvalidParameter(
                "hidden computes its own ordering over the embedded network".into(),
            )),
            None => Ok(()),
        }
    }

    pub fn evaluate(&self, net: &BeliefNetwork, formula: &CnfFormula) -> Result<(f64, RunStats)> {
        match self.algorithm {
            Algorithm::Cpe => elim_cpe(net, formula, &self.ordering_for(net, formula)?, &self.config),
            Algorithm::CpeD => elim_cpe_d(net, formula, &self.ordering_for(net, formula)?, &self.config),
            Algorithm::Hidden => {
                self.reject_fixed_ordering()?;
                elim_hidden(net, formula, &self.config)
            }
            Algorithm::Brute => {
                let start = Instant::now();
                let p = brute_force_cpe(net, formula)?;
                let stats = RunStats {
                    elapsed: start.elapsed(),
                    result: p,
                    observations: formula.count_query_units(),
                    ..RunStats::default()
                };
                Ok((p, stats))
            }
        }
    }

    /// Evaluates and records the bucket trace. For `hidden` the trace is over
    /// the embedded network; `brute` has no buckets and is rejected.
    pub fn trace(&self, net: &BeliefNetwork, formula: &CnfFormula) -> Result<Run> {
        match self.algorithm {
            Algorithm::Cpe => run_trace(net, formula, &self.ordering_for(net, formula)?, &self.config),
            Algorithm::CpeD => {
                let combined = formula.and(&extract_clauses(net));
                run_trace(net, &combined, &self.ordering_for(net, formula)?, &self.config)
            }
            Algorithm::Hidden => {
                self.reject_fixed_ordering()?;
                let (embedded, units, order) = hidden_instance(net, formula)?;
                let mut run = run_trace(&embedded, &units, &order, &self.config)?;
                run.stats.observations = formula.count_query_units();
                Ok(run)
            }
            Algorithm::Brute => Err(Error::InvalidParameter("brute force has no bucket trace".into())),
        }
    }

    pub fn probability(&self, net: &BeliefNetwork, formula: &CnfFormula) -> Result<f64> {
        self.evaluate(net, formula).map(|(p, _)| p)
    }
}
