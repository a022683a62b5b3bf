//! Two-terminal reliability as a CNF query. Each link is a variable that is
//! 1 when the link works; links fail more often in a storm. The terminals
//! are connected iff every s-t cut keeps at least one working link, which is
//! one clause per minimal cut.

use beliefcnf::{Algorithm, BeliefNetwork, Clause, CnfFormula, Cpt, Literal, Provenance, Solver, VariableId};

// nodes 0=s, 1=a, 2=b, 3=t
const LINKS: [(usize, usize); 5] = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)];
const STORM: usize = LINKS.len();

fn connected(up: u32) -> bool {
    let mut reach = 1u32;
    loop {
        let before = reach;
        for (i, &(a, b)) in LINKS.iter().enumerate() {
            if up >> i & 1 == 1 && (reach >> a & 1 == 1 || reach >> b & 1 == 1) {
                reach |= 1 << a | 1 << b;
            }
        }
        if reach == before {
            return reach >> 3 & 1 == 1;
        }
    }
}

fn main() -> beliefcnf::Result<()> {
    let mut cpts = vec![Cpt::root(STORM, 0.2)?];
    for i in 0..LINKS.len() {
        // P(link works | no storm), P(link works | storm)
        cpts.push(Cpt::new(i, vec![VariableId(STORM)], vec![0.95, 0.7])?);
    }
    let net = BeliefNetwork::new(LINKS.len() + 1, cpts)?;

    // a cut is a set of failed links that disconnects; keep the minimal ones
    let all = (1u32 << LINKS.len()) - 1;
    let cuts: Vec<u32> = (0..=all).filter(|&down| !connected(all & !down)).collect();
    let minimal: Vec<u32> = cuts
        .iter()
        .copied()
        .filter(|&c| !cuts.iter().any(|&d| d != c && d & c == d))
        .collect();

    let mut phi = CnfFormula::new();
    for cut in &minimal {
        let lits = (0..LINKS.len()).filter(|i| cut >> i & 1 == 1).map(Literal::pos);
        phi.push(Clause::new(lits).expect("positive literals"), Provenance::Query);
        println!(
            "cut {:?}",
            (0..LINKS.len())
                .filter(|i| cut >> i & 1 == 1)
                .map(|i| LINKS[i])
                .collect::<Vec<_>>()
        );
    }

    let (p, stats) = Solver::new(Algorithm::Cpe).evaluate(&net, &phi)?;
    let brute = Solver::new(Algorithm::Brute).probability(&net, &phi)?;
    println!("P(s connected to t) = {p:.9} (enumeration {brute:.9}, mf={})", stats.mf);
    Ok(())
}
