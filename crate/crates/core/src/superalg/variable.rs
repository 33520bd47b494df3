use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::weight::{MultiWeight, Parity};

#[derive(Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct VarData {
    rank: u32,
    name: String,
    weight: MultiWeight,
    parity: Parity,
}

/// A homogeneous coordinate: a name with a weight and a parity.
///
/// Variables order by their declaration rank and then by name. That order is
/// the one monomials are written in, so it fixes every reordering sign.
#[derive(Clone)]
pub struct Variable(Arc<VarData>);

impl Variable {
    pub fn new(name: impl Into<String>, weight: impl Into<MultiWeight>, parity: Parity) -> Self {
        Variable::ranked(0, name, weight, parity)
    }

    pub fn even(name: impl Into<String>, weight: impl Into<MultiWeight>) -> Self {
        Variable::new(name, weight, Parity::Even)
    }

    pub fn odd(name: impl Into<String>, weight: impl Into<MultiWeight>) -> Self {
        Variable::new(name, weight, Parity::Odd)
    }

    pub fn ranked(
        rank: u32,
        name: impl Into<String>,
        weight: impl Into<MultiWeight>,
        parity: Parity,
    ) -> Self {
        Variable(Arc::new(VarData {
            rank,
            name: name.into(),
            weight: weight.into(),
            parity,
        }))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn weight(&self) -> &MultiWeight {
        &self.0.weight
    }

    pub fn parity(&self) -> Parity {
        self.0.parity
    }

    pub fn is_odd(&self) -> bool {
        self.0.parity.is_odd()
    }

    pub fn rank(&self) -> u32 {
        self.0.rank
    }

    pub fn with_parity(&self, parity: Parity) -> Variable {
        Variable::ranked(self.rank(), self.name(), self.weight().clone(), parity)
    }

    pub fn with_weight(&self, weight: impl Into<MultiWeight>) -> Variable {
        Variable::ranked(self.rank(), self.name(), weight, self.parity())
    }

    pub fn with_rank(&self, rank: u32) -> Variable {
        Variable::ranked(rank, self.name(), self.weight().clone(), self.parity())
    }

    pub fn renamed(&self, name: impl Into<String>) -> Variable {
        Variable::ranked(self.rank(), name, self.weight().clone(), self.parity())
    }

    /// Whether the parity equals the given weight component mod 2.
    pub fn parity_follows_component(&self, component: usize) -> bool {
        Parity::from_bit(u64::from(self.weight().component(component))) == self.parity()
    }
}

impl PartialEq for Variable {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Variable {}

impl Hash for Variable {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl PartialOrd for Variable {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Variable {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            Ordering::Equal
        } else {
            self.0.cmp(&other.0)
        }
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
