//! Bucket-by-bucket trace of (B or C) and (G or D) and (not D or not B)
//! on the six-variable diamond network, along the ordering A,C,B,D,F,G.

use beliefcnf::fixtures::{self, A, B, C, D, F, G};
use beliefcnf::{run_trace, EngineConfig, Ordering};

fn main() -> beliefcnf::Result<()> {
    let net = fixtures::figure_one_positive();
    let phi = fixtures::example_query();
    let order = Ordering::new(vec![A, C, B, D, F, G])?;

    println!(
        "phi = {}",
        phi.clauses().map(|c| c.to_string()).collect::<Vec<_>>().join(" & ")
    );
    // variables are printed by index: A=0 B=1 C=2 D=3 F=4 G=5
    let run = run_trace(&net, &phi, &order, &EngineConfig::default())?;
    for event in &run.trace {
        println!("{event}");
    }
    println!("P(phi) = {:.12}", run.probability);
    println!("largest function: {} variables", run.stats.mf);
    Ok(())
}
