//! Exact probability of CNF queries over belief networks.
//!
//! Given a network over binary variables and a formula φ in conjunctive
//! normal form, [`elim_cpe`] computes `P(φ)` by bucket elimination. Clauses
//! ride along in the buckets: unit clauses become observations, bounded
//! resolution can derive more of them, and buckets holding a unit are
//! processed early. Variants:
//!
//! * [`elim_cpe_d`] first turns the 0/1 entries of the CPTs into clauses.
//! * [`elim_hidden`] encodes each clause as an observed hidden variable.
//! * [`brute_force_cpe`] enumerates every assignment; it is the test oracle.
//!
//! ```
//! use beliefcnf::{elim_cpe, fixtures, CnfFormula, EngineConfig, Literal, Ordering, Provenance};
//!
//! let net = fixtures::two_node();
//! let mut phi = CnfFormula::new();
//! phi.add([Literal::pos(0), Literal::pos(1)], Provenance::Query);
//! let (p, _) = elim_cpe(&net, &phi, &Ordering::identity(2), &EngineConfig::default()).unwrap();
//! assert!((p - 0.68).abs() < 1e-12);
//! ```

pub mod bench;
pub mod cli;
pub mod engine;
pub mod error;
pub mod factor;
pub mod fixtures;
pub mod generator;
pub mod graph;
pub mod io;
pub mod model;
pub mod oracle;
pub mod resolution;
pub mod solver;
pub mod transforms;

pub use engine::{elim_cpe, run_trace, Action, EngineConfig, Run, RunStats, TraceEvent};
pub use error::{Error, Result};
pub use factor::Factor;
pub use generator::{gen_instance, gen_network, gen_query, InstanceGenerator, NetworkParams, QueryParams};
pub use graph::{augmented_graph, induced_width, min_degree_order, moral_graph, Ordering, UndirectedGraph};
pub use io::{format_probability, parse_dimacs, parse_network, serialize_cnf, serialize_network};
pub use model::{
    validate_network, Assignment, BeliefNetwork, Clause, CnfFormula, Cpt, CptKind, Literal, Provenance, VariableId,
};
pub use oracle::brute_force_cpe;
pub use resolution::{bdr_step, resolve, unit_resolve, IBound};
pub use solver::{Algorithm, Solver};
pub use transforms::{
    belief_given_cnf, conditional_cnf_probability, elim_cpe_d, elim_hidden, extract_clauses, hidden_embed,
};
