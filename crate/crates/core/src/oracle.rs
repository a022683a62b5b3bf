//! Exhaustive enumeration, for checking the elimination algorithms on small
//! instances.

use crate::error::{Error, Result};
use crate::model::{Assignment, BeliefNetwork, CnfFormula, VariableId};

pub const MAX_ORACLE_VARS: usize = 25;

fn guard(what: &'static str, size: usize) -> Result<()> {
    if size > MAX_ORACLE_VARS {
        return Err(Error::TooLarge {
            what,
            size,
            limit: MAX_ORACLE_VARS,
        });
    }
    Ok(())
}

/// Positive and negative literal masks per clause, bit `i` for variable `i`.
fn clause_masks(formula: &CnfFormula, bit: impl Fn(VariableId) -> usize) -> Vec<(u32, u32)> {
    formula
        .clauses()
        .map(|c| {
            c.literals().iter().fold((0, 0), |(p, n), l| {
                let m = 1u32 << bit(l.var);
                if l.positive {
                    (p | m, n)
                } else {
                    (p, n | m)
                }
            })
        })
        .collect()
}

fn satisfies(masks: &[(u32, u32)], x: u32) -> bool {
    masks.iter().all(|&(p, n)| (x & p) | (!x & n) != 0)
}

struct JointTable {
    families: Vec<(usize, Vec<usize>, Vec<f64>)>,
}

impl JointTable {
    fn new(net: &BeliefNetwork) -> Self {
        JointTable {
            families: net
                .cpts()
                .iter()
                .map(|c| {
                    (
                        c.child().0,
                        c.parents().iter().map(|p| p.0).collect(),
                        c.table().to_vec(),
                    )
                })
                .collect(),
        }
    }

    /// `Π_i P(x_i | x_pa_i)` for a total assignment packed into bits.
    fn joint(&self, x: u32) -> f64 {
        let mut p = 1.0;
        for (child, parents, table) in &self.families {
            let row = parents.iter().fold(0usize, |r, &q| (r << 1) | ((x >> q) & 1) as usize);
            let p1 = table[row];
            p *= if (x >> child) & 1 == 1 { p1 } else { 1.0 - p1 };
            if p == 0.0 {
                break;
            }
        }
        p
    }
}

/// `P(φ)` as the sum of the joint probability over every total assignment
/// that satisfies φ.
pub fn brute_force_cpe(net: &BeliefNetwork, formula: &CnfFormula) -> Result<f64> {
    guard("network", net.len())?;
    net.check_formula(formula)?;
    let masks = clause_masks(formula, |v| v.0);
    let table = JointTable::new(net);
    Ok((0..1u32 << net.len())
        .filter(|&x| satisfies(&masks, x))
        .map(|x| table.joint(x))
        .sum())
}

/// All total assignments over `vars` that satisfy every clause. Clauses must
/// only mention variables in `vars`.
pub fn enumerate_models(formula: &CnfFormula, vars: &[VariableId]) -> Result<Vec<Assignment>> {
    guard("model enumeration", vars.len())?;
    if let Some(v) = formula.variables().into_iter().find(|v| !vars.contains(v)) {
        return Err(Error::UnknownVariable(v));
    }
    let masks = clause_masks(formula, |v| vars.iter().position(|&u| u == v).expect("checked above"));
    Ok((0..1u32 << vars.len())
        .filter(|&x| satisfies(&masks, x))
        .map(|x| vars.iter().enumerate().map(|(i, &v)| (v, (x >> i) & 1 == 1)).collect())
        .collect())
}

/// Marginal probability of a partial assignment, by summing the joint over
/// every completion.
pub fn marginal_probability(net: &BeliefNetwork, evidence: &Assignment) -> Result<f64> {
    guard("network", net.len())?;
    let (mut care, mut want) = (0u32, 0u32);
    for (v, value) in evidence.iter() {
        if !net.contains(v) {
            return Err(Error::UnknownVariable(v));
        }
        care |= 1 << v.0;
        want |= (value as u32) << v.0;
    }
    let table = JointTable::new(net);
    Ok((0..1u32 << net.len())
        .filter(|&x| x & care == want)
        .map(|x| table.joint(x))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{Clause, Literal, Provenance};

    fn or_ab() -> CnfFormula {
        let mut f = CnfFormula::new();
        f.add([Literal::pos(0), Literal::pos(1)], Provenance::Query);
        f
    }

    #[test]
    fn two_node_values() {
        let net = fixtures::two_node();
        // 0.54 + 0.06 + 0.08
        assert!((brute_force_cpe(&net, &or_ab()).unwrap() - 0.68).abs() < 1e-12);
        assert!((brute_force_cpe(&net, &CnfFormula::new()).unwrap() - 1.0).abs() < 1e-12);
        let mut empty = or_ab();
        empty.push(Clause::empty(), Provenance::Query);
        assert_eq!(brute_force_cpe(&net, &empty).unwrap(), 0.0);
    }

    #[test]
    fn model_enumeration() {
        let vars = [VariableId(0), VariableId(1)];
        assert_eq!(enumerate_models(&or_ab(), &vars).unwrap().len(), 3);
        let mut contra = CnfFormula::new();
        contra.add_unit(Literal::pos(0), Provenance::Query);
        contra.add_unit(Literal::neg(0), Provenance::Query);
        assert!(enumerate_models(&contra, &vars).unwrap().is_empty());
        let five: Vec<_> = (0..5).map(VariableId).collect();
        assert_eq!(enumerate_models(&CnfFormula::new(), &five).unwrap().len(), 32);
        assert!(enumerate_models(&or_ab(), &vars[..1]).is_err());
    }

    #[test]
    fn size_guard() {
        let vars: Vec<_> = (0..26).map(VariableId).collect();
        assert!(matches!(
            enumerate_models(&CnfFormula::new(), &vars),
            Err(Error::TooLarge { size: 26, .. })
        ));
    }

    #[test]
    fn two_paths_agree_on_figure_one() {
        for net in [fixtures::figure_one_positive(), fixtures::figure_one_hybrid()] {
            assert!((brute_force_cpe(&net, &CnfFormula::new()).unwrap() - 1.0).abs() < 1e-12);
            let phi = fixtures::example_query();
            let q: Vec<_> = phi.variables().into_iter().collect();
            let via_models: f64 = enumerate_models(&phi, &q)
                .unwrap()
                .iter()
                .map(|m| marginal_probability(&net, m).unwrap())
                .sum();
            assert!((brute_force_cpe(&net, &phi).unwrap() - via_models).abs() < 1e-12);
        }
    }
}
