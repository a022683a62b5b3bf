//! Belief networks over binary variables and CNF formulas over the same
//! variables.
//!
//! Table indexing convention, shared by [`Cpt`] and [`Factor`](crate::Factor):
//! rows enumerate assignments to an ordered list of variables
//! lexicographically, the first variable most significant and value `0`
//! before `1`. For a CPT with parents `(p1, p2)` the rows are therefore
//! `p1=0,p2=0`, `p1=0,p2=1`, `p1=1,p2=0`, `p1=1,p2=1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::Factor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VariableId(pub usize);

impl VariableId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VariableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for VariableId {
    fn from(i: usize) -> Self {
        VariableId(i)
    }
}

/// A propositional literal: `var` when `positive`, `¬var` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: VariableId,
    pub positive: bool,
}

impl Literal {
    pub fn new(var: impl Into<VariableId>, positive: bool) -> Self {
        Literal {
            var: var.into(),
            positive,
        }
    }

    pub fn pos(var: impl Into<VariableId>) -> Self {
        Self::new(var, true)
    }

    pub fn neg(var: impl Into<VariableId>) -> Self {
        Self::new(var, false)
    }

    pub fn negate(self) -> Self {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }

    /// The value of `var` that makes this literal true.
    pub fn value(self) -> bool {
        self.positive
    }

    pub fn holds(self, value: bool) -> bool {
        value == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.var)
        } else {
            write!(f, "~{}", self.var)
        }
    }
}

/// A normalized disjunction of literals.
///
/// Literals are sorted by variable and each variable occurs at most once, so a
/// clause is never a tautology. The empty clause is unsatisfiable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Clause {
    literals: Vec<Literal>,
}

/// Outcome of evaluating a clause under a partial assignment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClauseStatus {
    Satisfied,
    Violated,
    Undetermined,
    Unit(Literal),
}

impl Clause {
    /// Normalizes `literals`: duplicates merge, and `None` is returned when the
    /// disjunction is a tautology.
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Option<Clause> {
        let mut lits: Vec<Literal> = literals.into_iter().collect();
        lits.sort();
        lits.dedup();
        if lits.windows(2).any(|w| w[0].var == w[1].var) {
            return None;
        }
        Some(Clause { literals: lits })
    }

    pub fn empty() -> Clause {
        Clause::default()
    }

    pub fn unit(lit: Literal) -> Clause {
        Clause { literals: vec![lit] }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn as_unit(&self) -> Option<Literal> {
        match self.literals.as_slice() {
            [l] => Some(*l),
            _ => None,
        }
    }

    pub fn variables(&self) -> impl Iterator<Item = VariableId> + '_ {
        self.literals.iter().map(|l| l.var)
    }

    /// The literal this clause holds on `var`, if any.
    pub fn literal_on(&self, var: VariableId) -> Option<Literal> {
        self.literals
            .binary_search_by_key(&var, |l| l.var)
            .ok()
            .map(|i| self.literals[i])
    }

    pub fn mentions(&self, var: VariableId) -> bool {
        self.literal_on(var).is_some()
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.literal_on(lit.var) == Some(lit)
    }

    /// The clause with the literal on `var` removed.
    pub fn without(&self, var: VariableId) -> Clause {
        Clause {
            literals: self.literals.iter().copied().filter(|l| l.var != var).collect(),
        }
    }

    pub fn status(&self, assignment: &Assignment) -> ClauseStatus {
        let mut open = None;
        let mut open_count = 0;
        for &lit in &self.literals {
            match assignment.get(lit.var) {
                Some(v) if lit.holds(v) => return ClauseStatus::Satisfied,
                Some(_) => {}
                None => {
                    open_count += 1;
                    open = Some(lit);
                }
            }
        }
        match (open_count, open) {
            (0, _) => ClauseStatus::Violated,
            (1, Some(l)) => ClauseStatus::Unit(l),
            _ => ClauseStatus::Undetermined,
        }
    }

    /// True iff some literal holds under a total assignment over the clause.
    pub fn satisfied_by(&self, assignment: &Assignment) -> bool {
        self.status(assignment) == ClauseStatus::Satisfied
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// Where a clause came from. Extracted clauses are redundant with the
/// network and can be kept out of summation constraints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Query,
    Evidence,
    Extracted,
    Derived,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::Query => "query",
            Provenance::Evidence => "evidence",
            Provenance::Extracted => "extracted",
            Provenance::Derived => "derived",
        }
    }
}

/// A conjunction of clauses, each tagged with its provenance.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfFormula {
    clauses: Vec<(Clause, Provenance)>,
}

impl CnfFormula {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_clauses(clauses: impl IntoIterator<Item = Clause>, provenance: Provenance) -> Self {
        let mut f = Self::new();
        for c in clauses {
            f.push(c, provenance);
        }
        f
    }

    pub fn push(&mut self, clause: Clause, provenance: Provenance) {
        self.clauses.push((clause, provenance));
    }

    /// Adds the normalized disjunction of `literals`. Returns `false` if it was
    /// a tautology and therefore dropped.
    pub fn add(&mut self, literals: impl IntoIterator<Item = Literal>, provenance: Provenance) -> bool {
        match Clause::new(literals) {
            Some(c) => {
                self.push(c, provenance);
                true
            }
            None => false,
        }
    }

    pub fn add_unit(&mut self, lit: Literal, provenance: Provenance) {
        self.push(Clause::unit(lit), provenance);
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn entries(&self) -> &[(Clause, Provenance)] {
        &self.clauses
    }

    pub fn clauses(&self) -> impl Iterator<Item = &Clause> + '_ {
        self.clauses.iter().map(|(c, _)| c)
    }

    pub fn variables(&self) -> BTreeSet<VariableId> {
        self.clauses().flat_map(|c| c.variables()).collect()
    }

    pub fn max_variable(&self) -> Option<VariableId> {
        self.clauses().flat_map(|c| c.variables()).max()
    }

    /// The conjunction `self ∧ other`, provenance preserved.
    pub fn and(&self, other: &CnfFormula) -> CnfFormula {
        let mut out = self.clone();
        out.clauses.extend(other.clauses.iter().cloned());
        out
    }

    pub fn count_units(&self) -> usize {
        self.clauses().filter(|c| c.as_unit().is_some()).count()
    }

    /// Unit clauses that came from the query or from evidence.
    pub fn count_query_units(&self) -> usize {
        self.clauses
            .iter()
            .filter(|(c, p)| c.len() == 1 && matches!(p, Provenance::Query | Provenance::Evidence))
            .count()
    }

    pub fn satisfied_by(&self, assignment: &Assignment) -> bool {
        self.clauses().all(|c| c.satisfied_by(assignment))
    }
}

/// A partial assignment of binary values.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: BTreeMap<VariableId, bool>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, var: VariableId) -> Option<bool> {
        self.values.get(&var).copied()
    }

    pub fn set(&mut self, var: impl Into<VariableId>, value: bool) -> &mut Self {
        self.values.insert(var.into(), value);
        self
    }

    pub fn with(mut self, var: impl Into<VariableId>, value: bool) -> Self {
        self.set(var, value);
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VariableId, bool)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }
}

impl FromIterator<(VariableId, bool)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (VariableId, bool)>>(iter: I) -> Self {
        Assignment {
            values: iter.into_iter().collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CptKind {
    /// No entry is 0 or 1.
    Positive,
    /// Some, but not all, entries are 0 or 1.
    Mixed,
    /// Every entry is 0 or 1.
    Deterministic,
}

/// `P(child | parents)` for a binary child. `table[row]` holds
/// `P(child = 1 | row)`; the complement is implied.
#[derive(Clone, Debug, PartialEq)]
pub struct Cpt {
    child: VariableId,
    parents: Vec<VariableId>,
    table: Vec<f64>,
}

impl Cpt {
    pub fn new(child: impl Into<VariableId>, parents: Vec<VariableId>, table: Vec<f64>) -> Result<Cpt> {
        let child = child.into();
        let mut seen = BTreeSet::new();
        for &p in &parents {
            if p == child || !seen.insert(p) {
                return Err(Error::ShapeMismatch {
                    var: child,
                    detail: format!("parent {p} repeated or equal to child"),
                });
            }
        }
        if parents.len() >= usize::BITS as usize - 1 || table.len() != 1usize << parents.len() {
            return Err(Error::ShapeMismatch {
                var: child,
                detail: format!(
                    "{} parents need {} rows, table has {}",
                    parents.len(),
                    1u128 << parents.len().min(100),
                    table.len()
                ),
            });
        }
        for (row, &value) in table.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::OutOfRange { var: child, row, value });
            }
        }
        Ok(Cpt { child, parents, table })
    }

    /// A root CPT with `P(child = 1) = p1`.
    pub fn root(child: impl Into<VariableId>, p1: f64) -> Result<Cpt> {
        Cpt::new(child, Vec::new(), vec![p1])
    }

    pub fn child(&self) -> VariableId {
        self.child
    }

    pub fn parents(&self) -> &[VariableId] {
        &self.parents
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn rows(&self) -> usize {
        self.table.len()
    }

    /// `P(child = value | row)`.
    pub fn prob(&self, row: usize, value: bool) -> f64 {
        if value {
            self.table[row]
        } else {
            1.0 - self.table[row]
        }
    }

    /// The value of parent `k` (position in the parent list) in `row`.
    pub fn parent_value(&self, row: usize, k: usize) -> bool {
        let shift = self.parents.len() - 1 - k;
        (row >> shift) & 1 == 1
    }

    pub fn row_index(&self, assignment: &Assignment) -> Result<usize> {
        let mut row = 0;
        for &p in &self.parents {
            let v = assignment.get(p).ok_or(Error::MissingAssignment(p))?;
            row = (row << 1) | v as usize;
        }
        Ok(row)
    }

    /// `P(child = a(child) | parents per a)`.
    pub fn lookup(&self, assignment: &Assignment) -> Result<f64> {
        let v = assignment.get(self.child).ok_or(Error::MissingAssignment(self.child))?;
        Ok(self.prob(self.row_index(assignment)?, v))
    }

    pub fn classify(&self) -> CptKind {
        let extreme = self.table.iter().filter(|&&p| p == 0.0 || p == 1.0).count();
        if extreme == self.table.len() {
            CptKind::Deterministic
        } else if extreme > 0 {
            CptKind::Mixed
        } else {
            CptKind::Positive
        }
    }

    pub fn family(&self) -> impl Iterator<Item = VariableId> + '_ {
        self.parents.iter().copied().chain(std::iter::once(self.child))
    }

    /// The CPT as a factor over `(parents..., child)`.
    pub fn to_factor(&self) -> Factor {
        let mut scope = self.parents.clone();
        scope.push(self.child);
        let values = self.table.iter().flat_map(|&p1| [1.0 - p1, p1]).collect();
        Factor::new(scope, values).expect("CPT tables are valid factors")
    }
}

/// A directed acyclic network of binary variables `0..n`, one CPT each.
#[derive(Clone, Debug, PartialEq)]
pub struct BeliefNetwork {
    cpts: Vec<Cpt>,
    topo: Vec<VariableId>,
}

impl BeliefNetwork {
    /// Builds and validates a network over `n` variables. `cpts` may come in
    /// any order but must cover every variable exactly once.
    pub fn new(n: usize, cpts: Vec<Cpt>) -> Result<BeliefNetwork> {
        let mut slots: Vec<Option<Cpt>> = vec![None; n];
        for cpt in cpts {
            let c = cpt.child();
            if c.0 >= n {
                return Err(Error::UnknownVariable(c));
            }
            if let Some(&p) = cpt.parents().iter().find(|p| p.0 >= n) {
                return Err(Error::UnknownVariable(p));
            }
            if slots[c.0].is_some() {
                return Err(Error::ShapeMismatch {
                    var: c,
                    detail: "more than one CPT".into(),
                });
            }
            slots[c.0] = Some(cpt);
        }
        let cpts = slots
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.ok_or(Error::MissingCpt(VariableId(i))))
            .collect::<Result<Vec<_>>>()?;
        let topo = topological_order(&cpts)?;
        Ok(BeliefNetwork { cpts, topo })
    }

    pub fn len(&self) -> usize {
        self.cpts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cpts.is_empty()
    }

    pub fn variables(&self) -> impl Iterator<Item = VariableId> {
        (0..self.cpts.len()).map(VariableId)
    }

    pub fn cpt(&self, var: VariableId) -> &Cpt {
        &self.cpts[var.0]
    }

    pub fn cpts(&self) -> &[Cpt] {
        &self.cpts
    }

    pub fn parents(&self, var: VariableId) -> &[VariableId] {
        self.cpts[var.0].parents()
    }

    pub fn contains(&self, var: VariableId) -> bool {
        var.0 < self.cpts.len()
    }

    /// Parents before children, ties by index.
    pub fn topological_order(&self) -> &[VariableId] {
        &self.topo
    }

    /// Fails with [`Error::UnknownVariable`] if `formula` mentions a variable
    /// outside the network.
    pub fn check_formula(&self, formula: &CnfFormula) -> Result<()> {
        match formula.max_variable() {
            Some(v) if !self.contains(v) => Err(Error::UnknownVariable(v)),
            _ => Ok(()),
        }
    }
}

/// Re-runs every structural check on an already-built network: acyclicity,
/// table shapes, and probability ranges.
pub fn validate_network(net: &BeliefNetwork) -> Result<()> {
    for cpt in net.cpts() {
        Cpt::new(cpt.child(), cpt.parents().to_vec(), cpt.table().to_vec())?;
    }
    BeliefNetwork::new(net.len(), net.cpts().to_vec()).map(|_| ())
}

fn topological_order(cpts: &[Cpt]) -> Result<Vec<VariableId>> {
    let n = cpts.len();
    let mut indegree: Vec<usize> = cpts.iter().map(|c| c.parents().len()).collect();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for c in cpts {
        for p in c.parents() {
            children[p.0].push(c.child().0);
        }
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(VariableId(v));
        for &c in &children[v] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.insert(c);
            }
        }
    }
    if order.len() < n {
        let stuck = (0..n).find(|&i| indegree[i] > 0).expect("some node is on a cycle");
        return Err(Error::Cycle(VariableId(stuck)));
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize) -> VariableId {
        VariableId(i)
    }

    fn two_node() -> BeliefNetwork {
        BeliefNetwork::new(
            2,
            vec![
                Cpt::root(0, 0.6).unwrap(),
                Cpt::new(1, vec![v(0)], vec![0.2, 0.9]).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn valid_two_node_network() {
        let net = two_node();
        assert!(validate_network(&net).is_ok());
        assert_eq!(net.topological_order(), &[v(0), v(1)]);
    }

    #[test]
    fn two_cycle_is_rejected() {
        let err = BeliefNetwork::new(
            2,
            vec![
                Cpt::new(0, vec![v(1)], vec![0.5, 0.5]).unwrap(),
                Cpt::new(1, vec![v(0)], vec![0.5, 0.5]).unwrap(),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Cycle(_)));
        assert!(err.to_string().contains("cycle"));
    }

    #[test]
    fn out_of_range_entry_is_rejected() {
        let err = Cpt::new(1, vec![v(0)], vec![0.2, 1.3]).unwrap_err();
        assert!(matches!(err, Error::OutOfRange { var, row: 1, .. } if var == v(1)));
        assert!(err.to_string().contains("out of range"));
        assert!(matches!(Cpt::root(0, f64::NAN), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn shape_mismatch_and_missing_cpt() {
        assert!(matches!(
            Cpt::new(1, vec![v(0)], vec![0.2]),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(matches!(
            BeliefNetwork::new(2, vec![Cpt::root(0, 0.5).unwrap()]),
            Err(Error::MissingCpt(VariableId(1)))
        ));
    }

    #[test]
    fn cpt_lookup_reads_table_or_complement() {
        let net = two_node();
        let b = net.cpt(v(1));
        // brute-force walk of the table rows
        let mut found = None;
        for row in 0..b.rows() {
            if b.parent_value(row, 0) {
                found = Some(b.table()[row]);
            }
        }
        let a = Assignment::new().with(0, true).with(1, true);
        assert_eq!(b.lookup(&a).unwrap(), found.unwrap());
        assert_eq!(b.lookup(&a).unwrap(), 0.9);
        let a = Assignment::new().with(0, true).with(1, false);
        assert!((b.lookup(&a).unwrap() - 0.1).abs() < 1e-12);
        let a = Assignment::new().with(0, false);
        assert!((net.cpt(v(0)).lookup(&a).unwrap() - 0.4).abs() < 1e-12);
        assert!(matches!(
            b.lookup(&Assignment::new().with(1, true)),
            Err(Error::MissingAssignment(VariableId(0)))
        ));
    }

    #[test]
    fn classify_kinds() {
        // G = D or F, parents (D, F)
        let g = Cpt::new(5, vec![v(3), v(4)], vec![0.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(g.classify(), CptKind::Deterministic);
        let c = Cpt::new(2, vec![v(0)], vec![1.0, 0.5]).unwrap();
        assert_eq!(c.classify(), CptKind::Mixed);
        let p = Cpt::new(2, vec![v(0)], vec![0.5, 0.5]).unwrap();
        assert_eq!(p.classify(), CptKind::Positive);
    }

    #[test]
    fn clause_normalization() {
        let c = Clause::new([Literal::pos(2), Literal::neg(1), Literal::pos(2)]).unwrap();
        assert_eq!(c.literals(), &[Literal::neg(1), Literal::pos(2)]);
        assert!(Clause::new([Literal::pos(1), Literal::neg(1)]).is_none());
        assert_eq!(c.to_string(), "(~1|2)");
    }

    #[test]
    fn clause_status_cases() {
        // (¬D ∨ G) with G=0 leaves ¬D
        let c = Clause::new([Literal::neg(3), Literal::pos(5)]).unwrap();
        let a = Assignment::new().with(5, false);
        assert_eq!(c.status(&a), ClauseStatus::Unit(Literal::neg(3)));
        let c = Clause::new([Literal::pos(1), Literal::pos(2)]).unwrap();
        assert_eq!(c.status(&Assignment::new().with(1, true)), ClauseStatus::Satisfied);
        assert_eq!(c.status(&Assignment::new()), ClauseStatus::Undetermined);
        assert_eq!(Clause::empty().status(&Assignment::new()), ClauseStatus::Violated);
        assert_eq!(
            Clause::empty().status(&Assignment::new().with(0, true)),
            ClauseStatus::Violated
        );
    }

    #[test]
    fn cpt_factor_layout() {
        let f = two_node().cpt(v(1)).to_factor();
        assert_eq!(f.scope(), &[v(0), v(1)]);
        let expect = [0.8, 0.2, 0.1, 0.9];
        for (a, b) in f.values().iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
