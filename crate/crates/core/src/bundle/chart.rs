use std::collections::BTreeSet;

use super::BundleError;
use crate::superalg::{MultiWeight, Parity, Variable};

/// An ordered list of homogeneous coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateSystem {
    name: String,
    arity: usize,
    variables: Vec<Variable>,
}

impl CoordinateSystem {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        CoordinateSystem {
            name: name.into(),
            arity,
            variables: Vec::new(),
        }
    }

    /// Builds a chart from existing variables, keeping their ranks.
    pub fn from_variables(
        name: impl Into<String>,
        arity: usize,
        variables: Vec<Variable>,
    ) -> Result<Self, BundleError> {
        let mut seen = BTreeSet::new();
        for v in &variables {
            if !seen.insert(v.name().to_string()) {
                return Err(BundleError::DuplicateVariable(v.name().to_string()));
            }
            if v.weight().arity() > arity {
                return Err(BundleError::WeightArity {
                    variable: v.name().to_string(),
                    arity,
                });
            }
        }
        Ok(CoordinateSystem {
            name: name.into(),
            arity,
            variables,
        })
    }

    /// Appends a coordinate whose rank is its position.
    pub fn with(mut self, name: &str, weight: impl Into<MultiWeight>, parity: Parity) -> Self {
        let rank = u32::try_from(self.variables.len()).expect("chart too large");
        self.variables.push(Variable::ranked(rank, name, weight, parity));
        self
    }

    pub fn even(self, name: &str, weight: impl Into<MultiWeight>) -> Self {
        self.with(name, weight, Parity::Even)
    }

    pub fn odd(self, name: &str, weight: impl Into<MultiWeight>) -> Self {
        self.with(name, weight, Parity::Odd)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        CoordinateSystem {
            name: name.into(),
            ..self.clone()
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Variable> {
        self.variables.iter().find(|v| v.name() == name)
    }

    /// Looks up a coordinate by name, panicking if it is absent.
    pub fn var(&self, name: &str) -> &Variable {
        self.get(name)
            .unwrap_or_else(|| panic!("no coordinate `{name}` in chart `{}`", self.name))
    }

    pub fn contains(&self, v: &Variable) -> bool {
        self.variables.contains(v)
    }

    pub fn var_set(&self) -> BTreeSet<Variable> {
        self.variables.iter().cloned().collect()
    }

    /// Coordinates of total weight zero.
    pub fn base(&self) -> Vec<Variable> {
        self.variables
            .iter()
            .filter(|v| v.weight().is_zero())
            .cloned()
            .collect()
    }

    pub fn non_base(&self) -> Vec<Variable> {
        self.variables
            .iter()
            .filter(|v| !v.weight().is_zero())
            .cloned()
            .collect()
    }

    /// Maximal total weight among the coordinates.
    pub fn degree(&self) -> u64 {
        self.variables
            .iter()
            .map(|v| v.weight().total())
            .max()
            .unwrap_or(0)
    }

    pub fn filtered(&self, keep: impl Fn(&Variable) -> bool) -> CoordinateSystem {
        CoordinateSystem {
            name: self.name.clone(),
            arity: self.arity,
            variables: self.variables.iter().filter(|v| keep(v)).cloned().collect(),
        }
    }

    /// Next free rank for appended coordinates.
    pub fn next_rank(&self) -> u32 {
        self.variables.iter().map(|v| v.rank() + 1).max().unwrap_or(0)
    }

    /// A name built from `stem` by prefixing `prefix` until it is unused.
    pub fn fresh_name(taken: &BTreeSet<String>, prefix: &str, stem: &str) -> String {
        let mut name = format!("{prefix}{stem}");
        while taken.contains(&name) {
            name = format!("{prefix}{name}");
        }
        name
    }

    pub fn names(&self) -> BTreeSet<String> {
        self.variables.iter().map(|v| v.name().to_string()).collect()
    }
}
