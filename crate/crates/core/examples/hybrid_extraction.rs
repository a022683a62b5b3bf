//! Clause extraction on a network with deterministic CPTs. Observing G=0
//! where G = D or F lets unit resolution conclude D=0 and F=0 before any
//! summation, so the largest function shrinks.

use beliefcnf::fixtures::{self, A, B, C, D, F, G};
use beliefcnf::{extract_clauses, Algorithm, CnfFormula, Literal, Ordering, Provenance, Solver};

fn main() -> beliefcnf::Result<()> {
    let net = fixtures::figure_one_hybrid();
    let order = Ordering::new(vec![A, C, B, D, F, G])?;

    println!("extracted clauses:");
    for c in extract_clauses(&net).clauses() {
        println!("  {c}");
    }

    let mut phi = CnfFormula::new();
    phi.add_unit(Literal::neg(G), Provenance::Query);
    for alg in [Algorithm::Cpe, Algorithm::CpeD] {
        let solver = Solver::new(alg).with_ordering(order.clone());
        let run = solver.trace(&net, &phi)?;
        println!(
            "\n{alg}: P(not G) = {:.12}  mf={} U={} F={}",
            run.probability, run.stats.mf, run.stats.derived_units, run.stats.extracted
        );
        for e in &run.trace {
            println!("  {e}");
        }
    }
    Ok(())
}
