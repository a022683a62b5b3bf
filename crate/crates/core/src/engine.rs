//! Bucket elimination for the probability of a CNF formula.
//!
//! Every CPT and clause sits in the bucket of its latest variable in the
//! ordering. Buckets are processed from the last position back to the first.
//! A bucket holding a unit clause is *observed*: its factors are instantiated
//! and its clauses unit-resolved. Any other bucket is *summed*: its variable
//! is summed out of the product of its factors, restricted to the
//! assignments that satisfy its clauses. Unit clauses derived along the way
//! move their buckets to the front of the processing queue.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{Factor, MAX_FACTOR_ARITY};
use crate::graph::{adjusted_induced_width, augmented_graph, induced_width, Ordering};
use crate::model::{BeliefNetwork, Clause, CnfFormula, Literal, Provenance, VariableId};
use crate::resolution::{bdr_step, IBound};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineConfig {
    /// Bounded directional resolution level; `Bounded(0)` is unit
    /// resolution only.
    pub i_bound: IBound,
    /// Process buckets with unit clauses as soon as they appear.
    pub dynamic_reorder: bool,
    /// Let extracted clauses constrain summations instead of only driving
    /// resolution.
    pub extracted_clauses_in_sum: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            i_bound: IBound::Bounded(0),
            dynamic_reorder: true,
            extracted_clauses_in_sum: false,
        }
    }
}

impl EngineConfig {
    pub fn with_i_bound(mut self, i_bound: IBound) -> Self {
        self.i_bound = i_bound;
        self
    }

    pub fn without_reorder(mut self) -> Self {
        self.dynamic_reorder = false;
        self
    }
}

/// Counters for one evaluation.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    /// Wall-clock time of partitioning and bucket processing.
    #[serde(rename = "time_s", with = "duration_secs")]
    pub elapsed: Duration,
    /// Arity of the largest factor created.
    pub mf: usize,
    /// Derived clauses, units included.
    #[serde(rename = "C")]
    pub derived_clauses: usize,
    /// Derived unit clauses.
    #[serde(rename = "U")]
    pub derived_units: usize,
    /// Distinct clauses extracted from CPTs.
    #[serde(rename = "F")]
    pub extracted: usize,
    /// Unit clauses in the query or evidence.
    #[serde(rename = "O")]
    pub observations: usize,
    pub result: f64,
    /// Induced width of the augmented graph along the given ordering.
    pub static_width: usize,
    /// Adjusted induced width along the order buckets were actually
    /// processed in, with observed buckets discounted.
    pub processed_width: usize,
}

mod duration_secs {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_secs_f64(f64::deserialize(d)?))
    }
}

impl RunStats {
    pub fn seconds(&self) -> f64 {
        self.elapsed.as_secs_f64()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BucketClause {
    pub clause: Clause,
    pub provenance: Provenance,
    /// Used for resolution only, never as a summation constraint.
    pub exempt: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bucket {
    pub variable: VariableId,
    pub factors: Vec<Factor>,
    pub clauses: Vec<BucketClause>,
    pub unit: Option<Literal>,
}

impl Bucket {
    pub fn new(variable: VariableId) -> Self {
        Bucket {
            variable,
            factors: Vec::new(),
            clauses: Vec::new(),
            unit: None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty() && self.clauses.is_empty() && self.unit.is_none()
    }
}

/// What a summed bucket produces.
#[derive(Clone, Debug, PartialEq)]
pub struct Elimination {
    pub lambda: Option<Factor>,
    /// Bounded-resolution resolvents on the bucket variable, with their
    /// exemption flag.
    pub derived: Vec<(Clause, bool)>,
}

/// What an observed bucket produces.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Observation {
    pub factors: Vec<Factor>,
    /// Unit-resolved clauses that were not satisfied, with their exemption flag.
    pub clauses: Vec<(Clause, bool)>,
    pub contradiction: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    Sum,
    Observe,
    Resolve,
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Action::Sum => "sum",
            Action::Observe => "observe",
            Action::Resolve => "resolve",
        })
    }
}

/// One processed bucket.
///
/// For `sum` the scope is the generated function's; for `observe` it is the
/// union of the instantiated factors' scopes; for `resolve` (a bucket with
/// clauses but nothing to sum) it is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEvent {
    pub bucket: VariableId,
    pub action: Action,
    pub scope: Vec<VariableId>,
    pub derived: Vec<Clause>,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let scope: Vec<String> = self.scope.iter().map(|v| v.to_string()).collect();
        let derived: Vec<String> = self.derived.iter().map(|c| c.to_string()).collect();
        write!(
            f,
            "bucket={} action={} scope={} derived={}",
            self.bucket,
            self.action,
            scope.join(","),
            derived.join(",")
        )
    }
}

/// Computes the function of a summed bucket: for every assignment of the
/// other variables, the sum over the bucket variable's values that satisfy
/// every non-exempt clause of the product of the bucket's factors.
///
/// A bucket with constraining clauses but no factors yields the 0/1
/// indicator of the clauses being satisfiable by some value of the bucket
/// variable. A bucket with neither yields no function.
pub fn eliminate_bucket(b: &Bucket, cfg: &EngineConfig) -> Result<Elimination> {
    let x = b.variable;
    let derived = if cfg.i_bound.is_zero() {
        Vec::new()
    } else {
        let all: Vec<Clause> = b.clauses.iter().map(|c| c.clause.clone()).collect();
        let strict: Vec<Clause> = b
            .clauses
            .iter()
            .filter(|c| !c.exempt)
            .map(|c| c.clause.clone())
            .collect();
        let strict_res = bdr_step(&strict, x, cfg.i_bound);
        bdr_step(&all, x, cfg.i_bound)
            .into_iter()
            .map(|c| {
                let exempt = !strict_res.contains(&c);
                (c, exempt)
            })
            .collect()
    };

    let constraints: Vec<&Clause> = b.clauses.iter().filter(|c| !c.exempt).map(|c| &c.clause).collect();
    if b.factors.is_empty() && constraints.is_empty() {
        return Ok(Elimination { lambda: None, derived });
    }

    let scope: Vec<VariableId> = b
        .factors
        .iter()
        .flat_map(|f| f.scope().iter().copied())
        .chain(constraints.iter().flat_map(|c| c.variables()))
        .filter(|&v| v != x)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if scope.len() > MAX_FACTOR_ARITY {
        return Err(Error::TooLarge {
            what: "generated function",
            size: scope.len(),
            limit: MAX_FACTOR_ARITY,
        });
    }

    // Bit 0 of a combined index holds x; scope[k] sits at bit len-k so the
    // scope index `u` is simply `m >> 1`.
    let k = scope.len();
    let bit_of = |v: VariableId| -> u32 {
        if v == x {
            0
        } else {
            (k - scope.binary_search(&v).expect("variable in scope")) as u32
        }
    };
    let factor_bits: Vec<Vec<u32>> = b
        .factors
        .iter()
        .map(|f| f.scope().iter().map(|&v| bit_of(v)).collect())
        .collect();
    let clause_masks: Vec<(u64, u64)> = constraints
        .iter()
        .map(|c| {
            c.literals().iter().fold((0u64, 0u64), |(p, n), l| {
                let m = 1u64 << bit_of(l.var);
                if l.positive {
                    (p | m, n)
                } else {
                    (p, n | m)
                }
            })
        })
        .collect();

    let indicator = b.factors.is_empty();
    let mut values = vec![0.0; 1 << k];
    for (u, slot) in values.iter_mut().enumerate() {
        for xv in 0..2u64 {
            let m = ((u as u64) << 1) | xv;
            if !clause_masks.iter().all(|&(p, n)| (m & p) | (!m & n) != 0) {
                continue;
            }
            if indicator {
                *slot = 1.0;
                break;
            }
            let mut prod = 1.0;
            for (f, bits) in b.factors.iter().zip(&factor_bits) {
                let idx = bits
                    .iter()
                    .fold(0usize, |acc, &bit| (acc << 1) | ((m >> bit) & 1) as usize);
                prod *= f.values()[idx];
                if prod == 0.0 {
                    break;
                }
            }
            *slot += prod;
        }
    }
    Ok(Elimination {
        lambda: Some(Factor::from_parts(scope, values)),
        derived,
    })
}

/// Instantiates the bucket variable to the unit's value in every factor and
/// unit-resolves every clause.
pub fn process_observed_bucket(b: &Bucket, unit: Literal) -> Observation {
    let mut out = Observation {
        factors: b.factors.iter().map(|f| f.restrict(unit.var, unit.value())).collect(),
        ..Observation::default()
    };
    for bc in &b.clauses {
        match bc.clause.literal_on(unit.var) {
            Some(l) if l == unit => {}
            Some(_) => {
                let r = bc.clause.without(unit.var);
                out.contradiction |= r.is_empty();
                out.clauses.push((r, bc.exempt));
            }
            None => out.clauses.push((bc.clause.clone(), bc.exempt)),
        }
    }
    out
}

/// Buckets for one evaluation plus the processing queue.
#[derive(Clone, Debug)]
pub struct BucketSchedule {
    ordering: Ordering,
    buckets: Vec<Bucket>,
    processed: Vec<bool>,
    promoted: VecDeque<VariableId>,
    cursor: usize,
    scalars: Vec<f64>,
    contradiction: bool,
    cfg: EngineConfig,
    sequence: Vec<VariableId>,
    observed: BTreeSet<VariableId>,
    stats: RunStats,
}

/// Partitions with the default configuration.
pub fn partition_buckets(net: &BeliefNetwork, formula: &CnfFormula, o: &Ordering) -> Result<BucketSchedule> {
    BucketSchedule::build(net, formula, o, EngineConfig::default())
}

impl BucketSchedule {
    pub fn build(net: &BeliefNetwork, formula: &CnfFormula, o: &Ordering, cfg: EngineConfig) -> Result<Self> {
        net.check_formula(formula)?;
        if o.len() != net.len() {
            return Err(Error::OrderingMismatch {
                expected: net.len(),
                found: o.len(),
            });
        }
        let n = net.len();
        let mut s = BucketSchedule {
            ordering: o.clone(),
            buckets: (0..n).map(|i| Bucket::new(VariableId(i))).collect(),
            processed: vec![false; n],
            promoted: VecDeque::new(),
            cursor: n,
            scalars: Vec::new(),
            contradiction: false,
            cfg,
            sequence: Vec::with_capacity(n),
            observed: BTreeSet::new(),
            stats: RunStats::default(),
        };
        for cpt in net.cpts() {
            s.place_factor(cpt.to_factor());
        }
        let mut units = Vec::new();
        for (clause, prov) in formula.entries() {
            let exempt = *prov == Provenance::Extracted && !cfg.extracted_clauses_in_sum;
            units.extend(s.place_clause(clause.clone(), *prov, exempt));
        }
        s.promote(units);
        Ok(s)
    }

    pub fn ordering(&self) -> &Ordering {
        &self.ordering
    }

    pub fn bucket(&self, v: VariableId) -> &Bucket {
        &self.buckets[v.0]
    }

    /// Buckets in ordering positions, first bucket first.
    pub fn buckets(&self) -> impl Iterator<Item = &Bucket> + '_ {
        self.ordering.variables().iter().map(|v| &self.buckets[v.0])
    }

    /// Buckets waiting at the front of the processing queue.
    pub fn promoted(&self) -> Vec<VariableId> {
        self.promoted.iter().copied().filter(|v| !self.processed[v.0]).collect()
    }

    pub fn is_contradicted(&self) -> bool {
        self.contradiction
    }

    fn latest(&self, vars: impl Iterator<Item = VariableId>) -> Option<VariableId> {
        vars.max_by_key(|&v| self.ordering.position(v))
    }

    fn place_factor(&mut self, f: Factor) {
        debug_assert!(f.scope().iter().all(|v| !self.processed[v.0]));
        match self.latest(f.scope().iter().copied()) {
            Some(v) => self.buckets[v.0].factors.push(f),
            None => self.scalars.push(f.values()[0]),
        }
    }

    /// Files a clause; returns the literal if it set a new unit.
    fn place_clause(&mut self, clause: Clause, provenance: Provenance, exempt: bool) -> Option<Literal> {
        if clause.is_empty() {
            self.contradiction = true;
            return None;
        }
        if let Some(lit) = clause.as_unit() {
            let bucket = &mut self.buckets[lit.var.0];
            return match bucket.unit {
                Some(u) if u == lit => None,
                Some(_) => {
                    self.contradiction = true;
                    None
                }
                None => {
                    bucket.unit = Some(lit);
                    Some(lit)
                }
            };
        }
        let v = self.latest(clause.variables()).expect("non-empty clause");
        self.buckets[v.0].clauses.push(BucketClause {
            clause,
            provenance,
            exempt,
        });
        None
    }

    fn promote(&mut self, mut units: Vec<Literal>) {
        if !self.cfg.dynamic_reorder {
            return;
        }
        units.sort_by_key(|l| std::cmp::Reverse(self.ordering.position(l.var)));
        self.promoted.extend(units.into_iter().map(|l| l.var));
    }

    fn next_bucket(&mut self) -> Option<VariableId> {
        while let Some(v) = self.promoted.pop_front() {
            if !self.processed[v.0] {
                return Some(v);
            }
        }
        while self.cursor > 0 {
            self.cursor -= 1;
            let v = self.ordering.variables()[self.cursor];
            if !self.processed[v.0] {
                return Some(v);
            }
        }
        None
    }

    fn note_factor(&mut self, f: &Factor) {
        self.stats.mf = self.stats.mf.max(f.arity());
    }

    fn file_derived(&mut self, clauses: Vec<(Clause, bool)>) -> Vec<Literal> {
        let mut units = Vec::new();
        for (c, exempt) in clauses {
            self.stats.derived_clauses += 1;
            if let Some(u) = self.place_clause(c, Provenance::Derived, exempt) {
                self.stats.derived_units += 1;
                units.push(u);
            }
        }
        units
    }

    fn observe(&mut self, v: VariableId, unit: Literal, trace: &mut Option<&mut Vec<TraceEvent>>) {
        let mut bucket = std::mem::replace(&mut self.buckets[v.0], Bucket::new(v));
        // Items in later, still unprocessed buckets may mention v when v was
        // promoted ahead of them.
        for (i, other) in self.buckets.iter_mut().enumerate() {
            if self.processed[i] || i == v.0 {
                continue;
            }
            let (hit, keep): (Vec<Factor>, Vec<Factor>) = std::mem::take(&mut other.factors)
                .into_iter()
                .partition(|f| f.mentions(v));
            other.factors = keep;
            bucket.factors.extend(hit);
            let (hit, keep): (Vec<BucketClause>, Vec<BucketClause>) = std::mem::take(&mut other.clauses)
                .into_iter()
                .partition(|c| c.clause.mentions(v));
            other.clauses = keep;
            bucket.clauses.extend(hit);
        }

        let out = process_observed_bucket(&bucket, unit);
        self.observed.insert(v);
        let mut scope = BTreeSet::new();
        for f in out.factors {
            if !f.is_scalar() {
                self.note_factor(&f);
            }
            scope.extend(f.scope().iter().copied());
            self.place_factor(f);
        }
        // every clause gathered here mentions v, so all survivors are new
        let changed = out.clauses;
        if let Some(t) = trace.as_deref_mut() {
            t.push(TraceEvent {
                bucket: v,
                action: Action::Observe,
                scope: scope.into_iter().collect(),
                derived: changed.iter().map(|(c, _)| c.clone()).collect(),
            });
        }
        if out.contradiction {
            self.contradiction = true;
            return;
        }
        let units = self.file_derived(changed);
        self.promote(units);
    }

    fn sum(&mut self, v: VariableId, trace: &mut Option<&mut Vec<TraceEvent>>) -> Result<()> {
        let bucket = std::mem::replace(&mut self.buckets[v.0], Bucket::new(v));
        let out = eliminate_bucket(&bucket, &self.cfg)?;
        let action = if out.lambda.is_some() {
            Action::Sum
        } else {
            Action::Resolve
        };
        if out.lambda.is_none() && out.derived.is_empty() && bucket.clauses.is_empty() {
            return Ok(());
        }
        if let Some(t) = trace.as_deref_mut() {
            t.push(TraceEvent {
                bucket: v,
                action,
                scope: out.lambda.as_ref().map(|f| f.scope().to_vec()).unwrap_or_default(),
                derived: out.derived.iter().map(|(c, _)| c.clone()).collect(),
            });
        }
        if let Some(lambda) = out.lambda {
            self.note_factor(&lambda);
            self.place_factor(lambda);
        }
        if out.derived.iter().any(|(c, _)| c.is_empty()) {
            self.contradiction = true;
            return Ok(());
        }
        let units = self.file_derived(out.derived);
        self.promote(units);
        Ok(())
    }

    /// Processes every bucket and returns `P(φ)`.
    fn run(&mut self, mut trace: Option<&mut Vec<TraceEvent>>) -> Result<f64> {
        if self.contradiction {
            return Ok(0.0);
        }
        while let Some(v) = self.next_bucket() {
            self.processed[v.0] = true;
            self.sequence.push(v);
            match self.buckets[v.0].unit {
                Some(unit) => self.observe(v, unit, &mut trace),
                None => self.sum(v, &mut trace)?,
            }
            if self.contradiction {
                return Ok(0.0);
            }
        }
        Ok(self.scalars.iter().product())
    }
}

/// Result of one traced evaluation.
#[derive(Clone, Debug)]
pub struct Run {
    pub probability: f64,
    pub stats: RunStats,
    pub trace: Vec<TraceEvent>,
}

fn evaluate(
    net: &BeliefNetwork,
    formula: &CnfFormula,
    o: &Ordering,
    cfg: &EngineConfig,
    want_trace: bool,
) -> Result<Run> {
    let mut trace = Vec::new();
    let start = Instant::now();
    let mut schedule = BucketSchedule::build(net, formula, o, *cfg)?;
    let p = schedule.run(want_trace.then_some(&mut trace))?;
    let elapsed = start.elapsed();

    let mut stats = std::mem::take(&mut schedule.stats);
    stats.elapsed = elapsed;
    stats.result = p;
    stats.observations = formula.count_query_units();
    stats.extracted = formula
        .entries()
        .iter()
        .filter(|(_, prov)| *prov == Provenance::Extracted)
        .count();
    let g = augmented_graph(net, formula)?;
    stats.static_width = induced_width(&g, o)?;
    let mut seq = schedule.sequence.clone();
    // buckets never reached after a contradiction go last in processing order
    seq.extend(o.elimination_sequence().filter(|v| !schedule.processed[v.0]));
    seq.reverse();
    stats.processed_width = adjusted_induced_width(&g, &Ordering::new(seq)?, &schedule.observed)?;
    Ok(Run {
        probability: p,
        stats,
        trace,
    })
}

/// `P(φ)` by bucket elimination with unit resolution and, when the i-bound is
/// positive, bounded directional resolution.
pub fn elim_cpe(
    net: &BeliefNetwork,
    formula: &CnfFormula,
    o: &Ordering,
    cfg: &EngineConfig,
) -> Result<(f64, RunStats)> {
    let run = evaluate(net, formula, o, cfg, false)?;
    Ok((run.probability, run.stats))
}

/// Same as [`elim_cpe`] but records one [`TraceEvent`] per processed bucket.
pub fn run_trace(net: &BeliefNetwork, formula: &CnfFormula, o: &Ordering, cfg: &EngineConfig) -> Result<Run> {
    evaluate(net, formula, o, cfg, true)
}
