//! Sweeps the resolution bound i on one random instance. The probability
//! never changes; derived clauses and units do.

use beliefcnf::{gen_instance, Algorithm, EngineConfig, IBound, NetworkParams, QueryParams, Solver};

fn main() -> beliefcnf::Result<()> {
    let (net, phi) = gen_instance(
        NetworkParams {
            vars: 40,
            max_family: 4,
            det_frac: 0.0,
        },
        QueryParams {
            clauses: 40,
            observations: 10,
        },
        17,
    )?;

    println!(
        "{:>10} {:>16} {:>6} {:>4} {:>4} {:>10}",
        "i", "P(phi)", "C", "U", "mf", "time_s"
    );
    let bounds = (0..=4).map(IBound::Bounded).chain([IBound::Unbounded]);
    for i in bounds {
        let solver = Solver::new(Algorithm::Cpe).with_config(EngineConfig::default().with_i_bound(i));
        let (p, s) = solver.evaluate(&net, &phi)?;
        println!(
            "{:>10} {p:>16.10e} {:>6} {:>4} {:>4} {:>10.6}",
            i.to_string(),
            s.derived_clauses,
            s.derived_units,
            s.mf,
            s.seconds()
        );
    }
    Ok(())
}
