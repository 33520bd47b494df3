use std::fmt;
use std::ops::Add;

/// Grassmann parity, an element of ℤ₂.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u64) -> Self {
        if bit % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Self {
        self + Parity::Odd
    }

    /// The Koszul sign `(-1)^{|a||b|}`.
    pub fn koszul(a: Parity, b: Parity) -> i32 {
        if a.is_odd() && b.is_odd() {
            -1
        } else {
            1
        }
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(u64::from(self.bit() + rhs.bit()))
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// A tuple of nonnegative weights.
///
/// Entries beyond the stored ones are zero, so `(1)`, `(1,0)` and `(1,0,0)`
/// denote the same weight. This lets objects of different grading arity
/// (a graded bundle and its vertical bundle, say) share coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiWeight(Vec<u32>);

impl MultiWeight {
    pub fn new(entries: impl Into<Vec<u32>>) -> Self {
        let mut v = entries.into();
        while v.last() == Some(&0) {
            v.pop();
        }
        MultiWeight(v)
    }

    pub fn zero() -> Self {
        MultiWeight(Vec::new())
    }

    pub fn single(w: u32) -> Self {
        MultiWeight::new(vec![w])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn component(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Smallest arity that represents this weight without loss.
    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&w| u64::from(w)).sum()
    }

    pub fn padded(&self, arity: usize) -> Vec<u32> {
        (0..arity.max(self.0.len())).map(|i| self.component(i)).collect()
    }

    /// Component-wise partial order.
    pub fn precedes(&self, other: &MultiWeight) -> bool {
        (0..self.0.len().max(other.0.len())).all(|i| self.component(i) <= other.component(i))
    }

    /// Adds a signed shift, returning `None` if a component would go negative.
    pub fn shifted(&self, shift: &WeightShift) -> Option<MultiWeight> {
        let n = self.0.len().max(shift.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let v = i64::from(self.component(i)) + shift.component(i);
            if v < 0 {
                return None;
            }
            out.push(u32::try_from(v).ok()?);
        }
        Some(MultiWeight::new(out))
    }

    /// Signed difference `self − other`.
    pub fn minus(&self, other: &MultiWeight) -> WeightShift {
        let n = self.0.len().max(other.0.len());
        WeightShift::new(
            (0..n)
                .map(|i| i64::from(self.component(i)) - i64::from(other.component(i)))
                .collect::<Vec<_>>(),
        )
    }

    pub fn render(&self, arity: usize) -> String {
        let parts: Vec<String> = self.padded(arity).iter().map(u32::to_string).collect();
        format!("({})", parts.join(","))
    }
}

impl Add for &MultiWeight {
    type Output = MultiWeight;
    fn add(self, rhs: &MultiWeight) -> MultiWeight {
        let n = self.0.len().max(rhs.0.len());
        MultiWeight::new((0..n).map(|i| self.component(i) + rhs.component(i)).collect::<Vec<_>>())
    }
}

impl Add for MultiWeight {
    type Output = MultiWeight;
    fn add(self, rhs: MultiWeight) -> MultiWeight {
        &self + &rhs
    }
}

impl fmt::Display for MultiWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(1))
    }
}

impl From<u32> for MultiWeight {
    fn from(w: u32) -> Self {
        MultiWeight::single(w)
    }
}

impl<const N: usize> From<[u32; N]> for MultiWeight {
    fn from(w: [u32; N]) -> Self {
        MultiWeight::new(w.to_vec())
    }
}

/// A signed weight tuple, used for the weight of derivations and brackets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightShift(Vec<i64>);

impl WeightShift {
    pub fn new(entries: impl Into<Vec<i64>>) -> Self {
        let mut v = entries.into();
        while v.last() == Some(&0) {
            v.pop();
        }
        WeightShift(v)
    }

    pub fn zero() -> Self {
        WeightShift(Vec::new())
    }

    pub fn component(&self, i: usize) -> i64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn padded(&self, arity: usize) -> Vec<i64> {
        (0..arity.max(self.0.len())).map(|i| self.component(i)).collect()
    }

    pub fn render(&self, arity: usize) -> String {
        let parts: Vec<String> = self.padded(arity).iter().map(i64::to_string).collect();
        format!("({})", parts.join(","))
    }
}

impl Add for &WeightShift {
    type Output = WeightShift;
    fn add(self, rhs: &WeightShift) -> WeightShift {
        let n = self.0.len().max(rhs.0.len());
        WeightShift::new((0..n).map(|i| self.component(i) + rhs.component(i)).collect::<Vec<_>>())
    }
}

impl<const N: usize> From<[i64; N]> for WeightShift {
    fn from(w: [i64; N]) -> Self {
        WeightShift::new(w.to_vec())
    }
}

impl From<&MultiWeight> for WeightShift {
    fn from(w: &MultiWeight) -> Self {
        WeightShift::new(w.0.iter().map(|&x| i64::from(x)).collect::<Vec<_>>())
    }
}
