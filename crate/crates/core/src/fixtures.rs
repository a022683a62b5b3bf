//! Small reference networks used by the tests, examples, and documentation.
//!
//! The six-variable network has families `P(a)`, `P(b|a)`, `P(c|a)`,
//! `P(d|b,a)`, `P(f|c,b)`, `P(g|f,d)` and numbers its variables
//! `A=0, B=1, C=2, D=3, F=4, G=5` (there is no `E`).

use crate::model::{BeliefNetwork, CnfFormula, Cpt, Literal, Provenance, VariableId};

pub const A: VariableId = VariableId(0);
pub const B: VariableId = VariableId(1);
pub const C: VariableId = VariableId(2);
pub const D: VariableId = VariableId(3);
pub const F: VariableId = VariableId(4);
pub const G: VariableId = VariableId(5);

/// `P(A=1)=0.6`, `P(B=1|A=0)=0.2`, `P(B=1|A=1)=0.9`.
pub fn two_node() -> BeliefNetwork {
    BeliefNetwork::new(
        2,
        vec![
            Cpt::root(0, 0.6).unwrap(),
            Cpt::new(1, vec![VariableId(0)], vec![0.2, 0.9]).unwrap(),
        ],
    )
    .unwrap()
}

fn figure_one(c_table: Vec<f64>, g_table: Vec<f64>) -> BeliefNetwork {
    BeliefNetwork::new(
        6,
        vec![
            Cpt::root(A, 0.3).unwrap(),
            Cpt::new(B, vec![A], vec![0.4, 0.7]).unwrap(),
            Cpt::new(C, vec![A], c_table).unwrap(),
            Cpt::new(D, vec![B, A], vec![0.1, 0.35, 0.6, 0.8]).unwrap(),
            Cpt::new(F, vec![C, B], vec![0.25, 0.45, 0.65, 0.9]).unwrap(),
            Cpt::new(G, vec![F, D], g_table).unwrap(),
        ],
    )
    .unwrap()
}

/// The six-variable network with every CPT strictly positive.
pub fn figure_one_positive() -> BeliefNetwork {
    figure_one(vec![0.55, 0.2], vec![0.15, 0.5, 0.7, 0.95])
}

/// The hybrid variant: `C` is mixed with `P(C=1|A=0)=1`, `P(C=1|A=1)=0.5`,
/// and `G = D ∨ F` is deterministic.
pub fn figure_one_hybrid() -> BeliefNetwork {
    figure_one(vec![1.0, 0.5], vec![0.0, 1.0, 1.0, 1.0])
}

/// `(B ∨ C) ∧ (G ∨ D) ∧ (¬D ∨ ¬B)`.
pub fn example_query() -> CnfFormula {
    let mut phi = CnfFormula::new();
    phi.add([Literal::pos(B), Literal::pos(C)], Provenance::Query);
    phi.add([Literal::pos(G), Literal::pos(D)], Provenance::Query);
    phi.add([Literal::neg(D), Literal::neg(B)], Provenance::Query);
    phi
}
