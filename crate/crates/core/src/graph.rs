//! Interaction graphs and elimination orderings.
//!
//! Orderings are read the way buckets are laid out: position 0 is the first
//! bucket and elimination runs from the last position back to the first.

use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{BeliefNetwork, CnfFormula, VariableId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    adjacency: Vec<BTreeSet<usize>>,
}

impl UndirectedGraph {
    pub fn new(n: usize) -> Self {
        UndirectedGraph {
            adjacency: vec![BTreeSet::new(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    /// Self-loops are ignored.
    pub fn add_edge(&mut self, a: VariableId, b: VariableId) {
        if a != b {
            self.adjacency[a.0].insert(b.0);
            self.adjacency[b.0].insert(a.0);
        }
    }

    pub fn add_clique(&mut self, nodes: &[VariableId]) {
        for (i, &a) in nodes.iter().enumerate() {
            for &b in &nodes[i + 1..] {
                self.add_edge(a, b);
            }
        }
    }

    pub fn has_edge(&self, a: VariableId, b: VariableId) -> bool {
        self.adjacency[a.0].contains(&b.0)
    }

    pub fn neighbors(&self, v: VariableId) -> impl Iterator<Item = VariableId> + '_ {
        self.adjacency[v.0].iter().map(|&i| VariableId(i))
    }

    pub fn degree(&self, v: VariableId) -> usize {
        self.adjacency[v.0].len()
    }

    /// Edges as `(a, b)` pairs with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(VariableId, VariableId)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| {
                ns.iter()
                    .filter(move |&&b| a < b)
                    .map(move |&b| (VariableId(a), VariableId(b)))
            })
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn is_subgraph_of(&self, other: &UndirectedGraph) -> bool {
        self.len() == other.len() && self.adjacency.iter().zip(&other.adjacency).all(|(a, b)| a.is_subset(b))
    }
}

/// A permutation of `0..n` with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ordering {
    order: Vec<VariableId>,
    position: Vec<usize>,
}

impl Ordering {
    pub fn new(order: Vec<VariableId>) -> Result<Ordering> {
        let n = order.len();
        let mut position = vec![usize::MAX; n];
        for (pos, &v) in order.iter().enumerate() {
            if v.0 >= n {
                return Err(Error::UnknownVariable(v));
            }
            if position[v.0] != usize::MAX {
                return Err(Error::InvalidParameter(format!(
                    "variable {v} appears twice in ordering"
                )));
            }
            position[v.0] = pos;
        }
        Ok(Ordering { order, position })
    }

    pub fn identity(n: usize) -> Ordering {
        Ordering {
            order: (0..n).map(VariableId).collect(),
            position: (0..n).collect(),
        }
    }

    pub fn from_indices(indices: &[usize]) -> Result<Ordering> {
        Ordering::new(indices.iter().copied().map(VariableId).collect())
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn position(&self, v: VariableId) -> usize {
        self.position[v.0]
    }

    pub fn variables(&self) -> &[VariableId] {
        &self.order
    }

    /// Variables in the order their buckets are processed (last position first).
    pub fn elimination_sequence(&self) -> impl Iterator<Item = VariableId> + '_ {
        self.order.iter().rev().copied()
    }

    /// Parses the ordering file format: one variable index per line, first
    /// line is the first bucket. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Ordering> {
        let mut indices = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let idx = line.parse::<usize>().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("expected a variable index, found `{line}`"),
            })?;
            indices.push(idx);
        }
        Ordering::from_indices(&indices)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Ordering> {
        Ordering::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        self.order.iter().map(|v| format!("{v}\n")).collect()
    }
}

/// Marries the parents in every family and drops edge directions.
pub fn moral_graph(net: &BeliefNetwork) -> UndirectedGraph {
    let mut g = UndirectedGraph::new(net.len());
    for cpt in net.cpts() {
        let family: Vec<VariableId> = cpt.family().collect();
        g.add_clique(&family);
    }
    g
}

/// The moral graph plus a clique over the variables of each clause.
pub fn augmented_graph(net: &BeliefNetwork, formula: &CnfFormula) -> Result<UndirectedGraph> {
    net.check_formula(formula)?;
    let mut g = moral_graph(net);
    for clause in formula.clauses() {
        let vars: Vec<VariableId> = clause.variables().collect();
        g.add_clique(&vars);
    }
    Ok(g)
}

/// Greedy min-degree ordering. The node selected first is eliminated first,
/// so it lands in the last position. Ties go to the smallest index.
pub fn min_degree_order(g: &UndirectedGraph) -> Ordering {
    let n = g.len();
    let mut adj = g.adjacency.clone();
    let mut alive: BTreeSet<(usize, usize)> = (0..n).map(|v| (adj[v].len(), v)).collect();
    let mut selection = Vec::with_capacity(n);
    while let Some((_, v)) = alive.pop_first() {
        selection.push(VariableId(v));
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        let mut touched: BTreeSet<usize> = BTreeSet::new();
        for &a in &nbrs {
            touched.insert(a);
            alive.remove(&(adj[a].len(), a));
        }
        for &a in &nbrs {
            adj[a].remove(&v);
            for &b in &nbrs {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
        adj[v].clear();
        for a in touched {
            alive.insert((adj[a].len(), a));
        }
    }
    selection.reverse();
    Ordering::new(selection).expect("selection is a permutation")
}

/// Width of the ordered graph itself, without fill edges.
pub fn width(g: &UndirectedGraph, o: &Ordering) -> Result<usize> {
    check_sizes(g, o)?;
    Ok(o.variables()
        .iter()
        .map(|&v| g.neighbors(v).filter(|&u| o.position(u) < o.position(v)).count())
        .max()
        .unwrap_or(0))
}

pub fn induced_width(g: &UndirectedGraph, o: &Ordering) -> Result<usize> {
    adjusted_induced_width(g, o, &BTreeSet::new())
}

/// Induced width where observed nodes add no fill edges and contribute zero
/// width. They remain neighbors of the nodes processed before them.
pub fn adjusted_induced_width(g: &UndirectedGraph, o: &Ordering, observed: &BTreeSet<VariableId>) -> Result<usize> {
    check_sizes(g, o)?;
    let mut adj = g.adjacency.clone();
    let mut w = 0;
    for v in o.elimination_sequence() {
        let pv = o.position(v);
        let earlier: Vec<usize> = adj[v.0].iter().copied().filter(|&u| o.position[u] < pv).collect();
        if observed.contains(&v) {
            continue;
        }
        w = w.max(earlier.len());
        for &a in &earlier {
            for &b in &earlier {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
    }
    Ok(w)
}

fn check_sizes(g: &UndirectedGraph, o: &Ordering) -> Result<()> {
    if g.len() != o.len() {
        return Err(Error::OrderingMismatch {
            expected: g.len(),
            found: o.len(),
        });
    }
    Ok(())
}
