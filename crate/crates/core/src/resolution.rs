//! Clause algebra: pairwise resolution, unit resolution, and one directional
//! step of bounded resolution.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Clause, Literal, VariableId};

/// Largest resolvent kept by bounded resolution.
///
/// `Bounded(0)` disables resolution beyond unit propagation; `Unbounded`
/// keeps every resolvent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum IBound {
    Bounded(usize),
    Unbounded,
}

impl IBound {
    pub fn admits(self, size: usize) -> bool {
        match self {
            IBound::Bounded(i) => size <= i,
            IBound::Unbounded => true,
        }
    }

    pub fn is_zero(self) -> bool {
        self == IBound::Bounded(0)
    }
}

impl Default for IBound {
    fn default() -> Self {
        IBound::Bounded(0)
    }
}

impl fmt::Display for IBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IBound::Bounded(i) => write!(f, "{i}"),
            IBound::Unbounded => write!(f, "unbounded"),
        }
    }
}

// Serialized as a bare integer or the string "unbounded".
impl Serialize for IBound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            IBound::Bounded(i) => s.serialize_u64(*i as u64),
            IBound::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

impl<'de> Deserialize<'de> for IBound {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(usize),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(i) => Ok(IBound::Bounded(i)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl std::str::FromStr for IBound {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unbounded" | "n" => Ok(IBound::Unbounded),
            _ => s
                .parse()
                .map(IBound::Bounded)
                .map_err(|_| Error::InvalidParameter(format!("bad i-bound `{s}`"))),
        }
    }
}

/// Resolves `c1` and `c2` on `pivot`. `Ok(None)` means the resolvent is a
/// tautology.
pub fn resolve(c1: &Clause, c2: &Clause, pivot: VariableId) -> Result<Option<Clause>> {
    match (c1.literal_on(pivot), c2.literal_on(pivot)) {
        (Some(a), Some(b)) if a.positive != b.positive => {}
        _ => return Err(Error::InvalidPivot(pivot)),
    }
    Ok(Clause::new(
        c1.literals()
            .iter()
            .chain(c2.literals())
            .copied()
            .filter(|l| l.var != pivot),
    ))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UnitResolution {
    /// Clauses not satisfied by the unit, with its negation removed.
    pub surviving: Vec<Clause>,
    /// Distinct unit clauses among the survivors that were shortened.
    pub new_units: Vec<Literal>,
    pub contradiction: bool,
}

pub fn unit_resolve(clauses: &[Clause], unit: Literal) -> UnitResolution {
    let mut out = UnitResolution::default();
    for c in clauses {
        match c.literal_on(unit.var) {
            Some(l) if l == unit => {}
            Some(_) => {
                let r = c.without(unit.var);
                if r.is_empty() {
                    out.contradiction = true;
                } else if let Some(u) = r.as_unit() {
                    if !out.new_units.contains(&u) {
                        out.new_units.push(u);
                    }
                }
                out.surviving.push(r);
            }
            None => out.surviving.push(c.clone()),
        }
    }
    out
}

/// All pairwise resolvents on `pivot` with at most `bound` literals, in a
/// deterministic order and without duplicates. Clauses that do not mention
/// `pivot` are ignored.
pub fn bdr_step(bucket_clauses: &[Clause], pivot: VariableId, bound: IBound) -> Vec<Clause> {
    let (pos, neg): (Vec<&Clause>, Vec<&Clause>) = bucket_clauses
        .iter()
        .filter(|c| c.mentions(pivot))
        .partition(|c| c.contains(Literal::pos(pivot)));
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for p in &pos {
        for n in &neg {
            if let Ok(Some(r)) = resolve(p, n, pivot) {
                if bound.admits(r.len()) && seen.insert(r.clone()) {
                    out.push(r);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cl(lits: &[i32]) -> Clause {
        Clause::new(lits.iter().map(|&x| Literal::new(x.unsigned_abs() as usize, x > 0))).unwrap()
    }

    fn v(i: usize) -> VariableId {
        VariableId(i)
    }

    // P=1, Q=2, R=3
    #[test]
    fn resolve_examples() {
        assert_eq!(resolve(&cl(&[1, 2]), &cl(&[-2, 3]), v(2)).unwrap(), Some(cl(&[1, 3])));
        // (¬D ∨ G), (¬G) on G
        assert_eq!(resolve(&cl(&[-3, 5]), &cl(&[-5]), v(5)).unwrap(), Some(cl(&[-3])));
        assert_eq!(resolve(&cl(&[1, 2]), &cl(&[-2, -1]), v(2)).unwrap(), None);
        assert!(matches!(
            resolve(&cl(&[1, 2]), &cl(&[2, 3]), v(2)),
            Err(Error::InvalidPivot(_))
        ));
        assert!(resolve(&cl(&[1]), &cl(&[-2]), v(2)).is_err());
    }

    #[test]
    fn unit_resolve_examples() {
        // D=3, F=4, G=5
        let r = unit_resolve(&[cl(&[-3, 5]), cl(&[-4, 5]), cl(&[-5, 3, 4])], Literal::neg(5));
        assert_eq!(r.surviving, vec![cl(&[-3]), cl(&[-4])]);
        assert_eq!(r.new_units, vec![Literal::neg(3), Literal::neg(4)]);
        assert!(!r.contradiction);

        let r = unit_resolve(&[cl(&[1, 2])], Literal::pos(1));
        assert!(r.surviving.is_empty() && r.new_units.is_empty());

        let r = unit_resolve(&[cl(&[-1])], Literal::pos(1));
        assert!(r.contradiction);
    }

    #[test]
    fn bdr_examples() {
        let b = [cl(&[1, 2]), cl(&[-2, 3])];
        assert_eq!(bdr_step(&b, v(2), IBound::Bounded(2)), vec![cl(&[1, 3])]);
        assert!(bdr_step(&b, v(2), IBound::Bounded(1)).is_empty());
        // A=4, B=5, C=6, D=7, Q=2
        let b = [cl(&[4, 5, 2]), cl(&[-2, 6, 7])];
        assert!(bdr_step(&b, v(2), IBound::Bounded(3)).is_empty());
        assert_eq!(bdr_step(&b, v(2), IBound::Unbounded).len(), 1);
        // duplicates collapse
        let b = [cl(&[1, 2]), cl(&[1, 2, 3]), cl(&[-2, 1])];
        assert_eq!(bdr_step(&b, v(2), IBound::Unbounded), vec![cl(&[1]), cl(&[1, 3])]);
    }

    #[test]
    fn ibound_parsing() {
        assert_eq!("3".parse::<IBound>().unwrap(), IBound::Bounded(3));
        assert_eq!("unbounded".parse::<IBound>().unwrap(), IBound::Unbounded);
        assert!("x".parse::<IBound>().is_err());
        assert_eq!(IBound::Unbounded.to_string(), "unbounded");
    }

    const NVARS: usize = 6;

    fn clause_strategy() -> impl Strategy<Value = Clause> {
        prop::collection::vec((0..NVARS, any::<bool>()), 0..4).prop_filter_map("tautology", |ls| {
            Clause::new(ls.into_iter().map(|(v, s)| Literal::new(v, s)))
        })
    }

    fn sat(c: &Clause, bits: u32) -> bool {
        c.literals().iter().any(|l| ((bits >> l.var.0) & 1 == 1) == l.positive)
    }

    fn models(cs: &[Clause], fixed: Option<Literal>) -> BTreeSet<u32> {
        (0..1u32 << NVARS)
            .filter(|&b| cs.iter().all(|c| sat(c, b)))
            .filter(|&b| fixed.is_none_or(|l| ((b >> l.var.0) & 1 == 1) == l.positive))
            .collect()
    }

    proptest! {
        #[test]
        fn resolvent_is_sound(a in clause_strategy(), b in clause_strategy(), pivot in 0..NVARS) {
            if let Ok(r) = resolve(&a, &b, v(pivot)) {
                for bits in 0..1u32 << NVARS {
                    if sat(&a, bits) && sat(&b, bits) {
                        prop_assert!(r.as_ref().is_none_or(|r| sat(r, bits)));
                    }
                }
            }
        }

        #[test]
        fn unit_resolution_preserves_models(cs in prop::collection::vec(clause_strategy(), 0..6),
                                            var in 0..NVARS, sign in any::<bool>()) {
            let unit = Literal::new(var, sign);
            let r = unit_resolve(&cs, unit);
            let before = models(&cs, Some(unit));
            let after = models(&r.surviving, Some(unit));
            prop_assert_eq!(before.is_empty(), r.contradiction || after.is_empty());
            prop_assert_eq!(before, after);
            prop_assert!(r.surviving.iter().all(|c| !c.mentions(v(var))));
        }

        #[test]
        fn bdr_adds_only_implied_clauses(cs in prop::collection::vec(clause_strategy(), 0..6),
                                         pivot in 0..NVARS, i in 0usize..5) {
            let bound = if i == 4 { IBound::Unbounded } else { IBound::Bounded(i) };
            let extra = bdr_step(&cs, v(pivot), bound);
            let mut all = cs.clone();
            all.extend(extra.iter().cloned());
            prop_assert_eq!(models(&cs, None), models(&all, None));
            prop_assert!(extra.iter().all(|c| bound.admits(c.len()) && !c.mentions(v(pivot))));
        }
    }
}
