//! Beliefs conditioned on a CNF formula instead of plain evidence.

use beliefcnf::fixtures::{self, B, C, D, G};
use beliefcnf::{belief_given_cnf, conditional_cnf_probability, Algorithm, CnfFormula, Literal, Provenance, Solver};

fn main() -> beliefcnf::Result<()> {
    let net = fixtures::figure_one_positive();
    let solver = Solver::new(Algorithm::Cpe);

    // evidence: "B or C" and "G implies D"
    let mut psi = CnfFormula::new();
    psi.add([Literal::pos(B), Literal::pos(C)], Provenance::Evidence);
    psi.add([Literal::neg(G), Literal::pos(D)], Provenance::Evidence);
    println!("P(psi) = {:.6}", solver.probability(&net, &psi)?);

    for v in net.variables() {
        match belief_given_cnf(&net, &psi, v, &solver)? {
            Some([p0, p1]) => println!("P(x{v} | psi) = [{p0:.6}, {p1:.6}]"),
            None => println!("P(x{v} | psi) undefined"),
        }
    }

    let mut phi = CnfFormula::new();
    phi.add([Literal::neg(D), Literal::neg(B)], Provenance::Query);
    let p = conditional_cnf_probability(&net, &phi, &psi, &solver)?.expect("P(psi) > 0");
    println!("P(not D or not B | psi) = {p:.6}");
    Ok(())
}
