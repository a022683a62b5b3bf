//! P(A or B) on a two-variable network, with every algorithm.

use beliefcnf::{belief_given_cnf, Algorithm, BeliefNetwork, CnfFormula, Cpt, Literal, Provenance, Solver, VariableId};

fn main() -> beliefcnf::Result<()> {
    // A -> B, P(A=1) = 0.6, P(B=1 | A=0) = 0.2, P(B=1 | A=1) = 0.9
    let net = BeliefNetwork::new(
        2,
        vec![Cpt::root(0, 0.6)?, Cpt::new(1, vec![VariableId(0)], vec![0.2, 0.9])?],
    )?;

    let mut phi = CnfFormula::new();
    phi.add([Literal::pos(0), Literal::pos(1)], Provenance::Query);

    for alg in Algorithm::ALL {
        let (p, stats) = Solver::new(alg).evaluate(&net, &phi)?;
        println!(
            "{alg:>7}  P(A or B) = {p:.6}  mf={} C={} U={}",
            stats.mf, stats.derived_clauses, stats.derived_units
        );
    }

    let [p0, p1] = belief_given_cnf(&net, &phi, VariableId(0), &Solver::new(Algorithm::Cpe))?.expect("P(phi) > 0");
    println!("P(A | A or B) = [{p0:.6}, {p1:.6}]");
    Ok(())
}
