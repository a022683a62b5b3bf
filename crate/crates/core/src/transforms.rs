//! Network-level constructions around the engine: clauses extracted from
//! deterministic CPT entries, clauses embedded as hidden CPT variables, and
//! beliefs conditioned on CNF evidence.

use std::collections::BTreeSet;

use crate::engine::{elim_cpe, EngineConfig, RunStats};
use crate::error::Result;
use crate::graph::{min_degree_order, moral_graph, Ordering};
use crate::model::{BeliefNetwork, Clause, CnfFormula, Cpt, Literal, Provenance, VariableId};
use crate::solver::Solver;

/// Above this many parents a CPT's clauses are emitted one per entry instead
/// of being merged into prime implicants.
const PRIME_MERGE_MAX_PARENTS: usize = 12;

/// Clauses implied with certainty by the network.
///
/// Every entry with `P(x_i | x_pa) = 1` yields `x_pa → x_i`. Entries with the
/// same child value are merged: the clauses emitted are `¬t ∨ x_i` for each
/// prime implicant `t` of the set of parent rows forcing `x_i`, so the OR
/// gate `G = D ∨ F` becomes `(¬D ∨ G)`, `(¬F ∨ G)`, `(D ∨ F ∨ ¬G)`.
/// The result is deduplicated and tagged [`Provenance::Extracted`].
pub fn extract_clauses(net: &BeliefNetwork) -> CnfFormula {
    let mut seen = BTreeSet::new();
    let mut out = CnfFormula::new();
    for cpt in net.cpts() {
        for value in [true, false] {
            let rows: Vec<usize> = (0..cpt.rows()).filter(|&r| cpt.prob(r, value) == 1.0).collect();
            if rows.is_empty() {
                continue;
            }
            let k = cpt.parents().len();
            let cubes = if k <= PRIME_MERGE_MAX_PARENTS {
                prime_implicants(k, &rows)
            } else {
                rows.iter()
                    .map(|&r| Cube {
                        care: (1 << k) - 1,
                        bits: r,
                    })
                    .collect()
            };
            for cube in cubes {
                let clause = cube_clause(cpt, cube, value);
                if seen.insert(clause.clone()) {
                    out.push(clause, Provenance::Extracted);
                }
            }
        }
    }
    out
}

/// A product term over parent positions: bit `k-1-j` of `care` is set when
/// parent `j` is fixed, to the matching bit of `bits`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Cube {
    care: usize,
    bits: usize,
}

fn prime_implicants(k: usize, rows: &[usize]) -> Vec<Cube> {
    let full = (1usize << k) - 1;
    let mut level: BTreeSet<Cube> = rows.iter().map(|&r| Cube { care: full, bits: r }).collect();
    let mut primes = BTreeSet::new();
    while !level.is_empty() {
        let cubes: Vec<Cube> = level.iter().copied().collect();
        let mut merged = vec![false; cubes.len()];
        let mut next = BTreeSet::new();
        for i in 0..cubes.len() {
            for j in i + 1..cubes.len() {
                let (a, b) = (cubes[i], cubes[j]);
                if a.care != b.care {
                    continue;
                }
                let diff = a.bits ^ b.bits;
                if diff.count_ones() == 1 {
                    next.insert(Cube {
                        care: a.care & !diff,
                        bits: a.bits & !diff,
                    });
                    merged[i] = true;
                    merged[j] = true;
                }
            }
        }
        primes.extend(cubes.iter().zip(&merged).filter(|(_, &m)| !m).map(|(c, _)| *c));
        level = next;
    }
    primes.into_iter().collect()
}

fn cube_clause(cpt: &Cpt, cube: Cube, value: bool) -> Clause {
    let k = cpt.parents().len();
    let lits = cpt
        .parents()
        .iter()
        .enumerate()
        .filter(|(j, _)| (cube.care >> (k - 1 - j)) & 1 == 1)
        .map(|(j, &p)| Literal::new(p, (cube.bits >> (k - 1 - j)) & 1 == 0))
        .chain(std::iter::once(Literal::new(cpt.child(), value)));
    Clause::new(lits).expect("child literal is distinct from parent literals")
}

/// Elim-CPE on `φ ∧ extract_clauses(net)`. Extracted clauses take part in
/// unit resolution and bounded resolution but, unless
/// `extracted_clauses_in_sum` is set, not in summation constraints.
pub fn elim_cpe_d(
    net: &BeliefNetwork,
    formula: &CnfFormula,
    o: &Ordering,
    cfg: &EngineConfig,
) -> Result<(f64, RunStats)> {
    let combined = formula.and(&extract_clauses(net));
    elim_cpe(net, &combined, o, cfg)
}

/// Adds one hidden variable per clause, numbered from `net.len()` in clause
/// order, whose parents are the clause's variables and whose CPT is the
/// clause's truth table. The returned evidence sets every hidden variable
/// to 1.
pub fn hidden_embed(net: &BeliefNetwork, formula: &CnfFormula) -> Result<(BeliefNetwork, Vec<Literal>)> {
    net.check_formula(formula)?;
    let n = net.len();
    let mut cpts = net.cpts().to_vec();
    let mut evidence = Vec::with_capacity(formula.len());
    for (j, clause) in formula.clauses().enumerate() {
        let h = VariableId(n + j);
        let parents: Vec<VariableId> = clause.variables().collect();
        let k = parents.len();
        let table = (0..1usize << k)
            .map(|row| {
                let sat = clause
                    .literals()
                    .iter()
                    .enumerate()
                    .any(|(i, l)| l.holds((row >> (k - 1 - i)) & 1 == 1));
                if sat {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        cpts.push(Cpt::new(h, parents, table)?);
        evidence.push(Literal::pos(h));
    }
    Ok((BeliefNetwork::new(n + formula.len(), cpts)?, evidence))
}

/// Embeds φ with [`hidden_embed`], orders the embedded network by min-degree
/// on its moral graph, and runs plain elimination with the hidden variables
/// observed.
pub fn elim_hidden(net: &BeliefNetwork, formula: &CnfFormula, cfg: &EngineConfig) -> Result<(f64, RunStats)> {
    let (embedded, units, order) = hidden_instance(net, formula)?;
    let (p, mut stats) = elim_cpe(&embedded, &units, &order, cfg)?;
    stats.observations = formula.count_query_units();
    Ok((p, stats))
}

/// The embedded network, its evidence as unit clauses, and the ordering
/// [`elim_hidden`] eliminates along.
pub fn hidden_instance(net: &BeliefNetwork, formula: &CnfFormula) -> Result<(BeliefNetwork, CnfFormula, Ordering)> {
    let (embedded, evidence) = hidden_embed(net, formula)?;
    let order = min_degree_order(&moral_graph(&embedded));
    let mut units = CnfFormula::new();
    for lit in evidence {
        units.add_unit(lit, Provenance::Evidence);
    }
    Ok((embedded, units, order))
}

/// `P(X = x | φ)` for `x = 0, 1`, or `None` when `P(φ) = 0`.
pub fn belief_given_cnf(
    net: &BeliefNetwork,
    formula: &CnfFormula,
    x: VariableId,
    solver: &Solver,
) -> Result<Option<[f64; 2]>> {
    net.check_formula(&CnfFormula::from_clauses(
        [Clause::unit(Literal::pos(x))],
        Provenance::Query,
    ))?;
    let mut joint = [0.0; 2];
    for (value, slot) in [false, true].into_iter().zip(joint.iter_mut()) {
        let mut phi = formula.clone();
        phi.add_unit(Literal::new(x, value), Provenance::Query);
        *slot = solver.probability(net, &phi)?;
    }
    let total = joint[0] + joint[1];
    if total == 0.0 {
        return Ok(None);
    }
    Ok(Some([joint[0] / total, joint[1] / total]))
}

/// `P(φ | ψ) = P(φ ∧ ψ) / P(ψ)`, or `None` when `P(ψ) = 0`.
pub fn conditional_cnf_probability(
    net: &BeliefNetwork,
    phi: &CnfFormula,
    psi: &CnfFormula,
    solver: &Solver,
) -> Result<Option<f64>> {
    let denom = solver.probability(net, psi)?;
    if denom == 0.0 {
        return Ok(None);
    }
    Ok(Some(solver.probability(net, &phi.and(psi))? / denom))
}
