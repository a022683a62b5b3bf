use std::fmt;

use crate::error::{Error, Result};
use crate::model::{Assignment, VariableId};

/// Largest scope a factor may have before allocation is refused.
pub const MAX_FACTOR_ARITY: usize = 30;

/// A nonnegative table over an ordered scope of binary variables, indexed
/// lexicographically with the first scope variable most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    scope: Vec<VariableId>,
    values: Vec<f64>,
}

impl Factor {
    pub fn new(scope: Vec<VariableId>, values: Vec<f64>) -> Result<Factor> {
        if scope.len() > MAX_FACTOR_ARITY {
            return Err(Error::TooLarge {
                what: "factor scope",
                size: scope.len(),
                limit: MAX_FACTOR_ARITY,
            });
        }
        let mut sorted = scope.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::ShapeMismatch {
                var: w[0],
                detail: "variable repeated in factor scope".into(),
            });
        }
        if values.len() != 1 << scope.len() {
            return Err(Error::ShapeMismatch {
                var: scope.first().copied().unwrap_or(VariableId(0)),
                detail: format!("factor over {} variables has {} entries", scope.len(), values.len()),
            });
        }
        if let Some((row, &value)) = values.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::OutOfRange {
                var: scope.first().copied().unwrap_or(VariableId(0)),
                row,
                value,
            });
        }
        Ok(Factor { scope, values })
    }

    pub(crate) fn from_parts(scope: Vec<VariableId>, values: Vec<f64>) -> Factor {
        debug_assert_eq!(values.len(), 1 << scope.len());
        Factor { scope, values }
    }

    pub fn scalar(value: f64) -> Factor {
        Factor {
            scope: Vec::new(),
            values: vec![value],
        }
    }

    pub fn scope(&self) -> &[VariableId] {
        &self.scope
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn arity(&self) -> usize {
        self.scope.len()
    }

    pub fn is_scalar(&self) -> bool {
        self.scope.is_empty()
    }

    /// The single entry of an empty-scope factor.
    pub fn scalar_value(&self) -> Option<f64> {
        self.is_scalar().then(|| self.values[0])
    }

    pub fn mentions(&self, var: VariableId) -> bool {
        self.scope.contains(&var)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn value(&self, assignment: &Assignment) -> Result<f64> {
        let mut idx = 0;
        for &v in &self.scope {
            let bit = assignment.get(v).ok_or(Error::MissingAssignment(v))?;
            idx = (idx << 1) | bit as usize;
        }
        Ok(self.values[idx])
    }

    /// Instantiates `var = value`; the scope loses `var`. Factors that do not
    /// mention `var` come back unchanged.
    pub fn restrict(&self, var: VariableId, value: bool) -> Factor {
        let Some(pos) = self.scope.iter().position(|&v| v == var) else {
            return self.clone();
        };
        let k = self.scope.len();
        let shift = k - 1 - pos;
        let low_mask = (1usize << shift) - 1;
        let bit = (value as usize) << shift;
        let values = (0..1usize << (k - 1))
            .map(|i| {
                let high = (i >> shift) << (shift + 1);
                self.values[high | bit | (i & low_mask)]
            })
            .collect();
        let mut scope = self.scope.clone();
        scope.remove(pos);
        Factor { scope, values }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f(")?;
        for (i, v) in self.scope.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize) -> VariableId {
        VariableId(i)
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(Factor::new(vec![v(0)], vec![1.0]).is_err());
        assert!(Factor::new(vec![v(0)], vec![1.0, -0.5]).is_err());
        assert!(Factor::new(vec![v(0)], vec![1.0, f64::INFINITY]).is_err());
        assert!(Factor::new(vec![v(0), v(0)], vec![1.0; 4]).is_err());
        assert_eq!(Factor::new(vec![], vec![0.3]).unwrap().scalar_value(), Some(0.3));
    }

    #[test]
    fn restrict_middle_variable() {
        // values indexed by (a, b, c) with a most significant
        let f = Factor::new(vec![v(0), v(1), v(2)], (0..8).map(|i| i as f64).collect()).unwrap();
        let g = f.restrict(v(1), true);
        assert_eq!(g.scope(), &[v(0), v(2)]);
        assert_eq!(g.values(), &[2.0, 3.0, 6.0, 7.0]);
        let h = f.restrict(v(0), false).restrict(v(2), true);
        assert_eq!(h.scope(), &[v(1)]);
        assert_eq!(h.values(), &[1.0, 3.0]);
        assert_eq!(f.restrict(v(9), true), f);
    }

    #[test]
    fn value_lookup_matches_restriction() {
        let f = Factor::new(vec![v(3), v(1)], vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let a = Assignment::new().with(3, true).with(1, false);
        assert_eq!(f.value(&a).unwrap(), 0.3);
        assert_eq!(f.restrict(v(3), true).restrict(v(1), false).scalar_value(), Some(0.3));
    }
}
