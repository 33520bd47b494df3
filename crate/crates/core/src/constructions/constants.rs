use crate::superalg::{integer, Rational, SuperPolynomial};
use num_traits::Zero;

/// Structure constants `c^k_{ij}` of a bracket on a `d`-dimensional space,
/// `[e_i, e_j] = Σ_k c^k_{ij} e_k`, indices from 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    dim: usize,
    c: Vec<Rational>,
}

impl StructureConstants {
    pub fn zero(dim: usize) -> Self {
        StructureConstants {
            dim,
            c: vec![Rational::zero(); dim * dim * dim],
        }
    }

    pub fn abelian(dim: usize) -> Self {
        Self::zero(dim)
    }

    /// `[e_i, e_j] = ε_{ijk} e_k`.
    pub fn so3() -> Self {
        let mut s = Self::zero(3);
        s.set_bracket(0, 1, 2, integer(1));
        s.set_bracket(1, 2, 0, integer(1));
        s.set_bracket(2, 0, 1, integer(1));
        s
    }

    /// Basis `(h, e, f)`: `[h,e] = 2e`, `[h,f] = −2f`, `[e,f] = h`.
    pub fn sl2() -> Self {
        let mut s = Self::zero(3);
        s.set_bracket(0, 1, 1, integer(2));
        s.set_bracket(0, 2, 2, integer(-2));
        s.set_bracket(1, 2, 0, integer(1));
        s
    }

    /// `[x, y] = z`.
    pub fn heisenberg() -> Self {
        let mut s = Self::zero(3);
        s.set_bracket(0, 1, 2, integer(1));
        s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        assert!(i < self.dim && j < self.dim && k < self.dim, "structure constant index out of range");
        (i * self.dim + j) * self.dim + k
    }

    /// `c^k_{ij}`.
    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.c[self.index(i, j, k)]
    }

    /// Sets `c^k_{ij}` alone.
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Rational) {
        let idx = self.index(i, j, k);
        self.c[idx] = value;
    }

    /// Sets `c^k_{ij} = value` and `c^k_{ji} = −value`.
    pub fn set_bracket(&mut self, i: usize, j: usize, k: usize, value: Rational) {
        self.set(j, i, k, -value.clone());
        self.set(i, j, k, value);
    }

    /// Adds `delta` to `c^k_{ij}` and subtracts it from `c^k_{ji}`.
    pub fn perturbed(&self, i: usize, j: usize, k: usize, delta: Rational) -> Self {
        let mut out = self.clone();
        let v = self.get(i, j, k) + &delta;
        out.set_bracket(i, j, k, v);
        out
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| (0..self.dim).all(|k| (self.get(i, j, k) + self.get(j, i, k)).is_zero()))
        })
    }

    /// `Σ_m c^m_{ij} c^l_{mk} + cyclic(i,j,k)` for every `(i, j, k, l)`.
    pub fn jacobi_residual(&self) -> Vec<((usize, usize, usize, usize), Rational)> {
        let d = self.dim;
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let mut sum = Rational::zero();
                        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                            for m in 0..d {
                                sum += self.get(a, b, m) * self.get(m, c, l);
                            }
                        }
                        if !sum.is_zero() {
                            out.push(((i, j, k, l), sum));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_jacobi(&self) -> bool {
        self.jacobi_residual().is_empty()
    }

    /// `[u, v]^k = c^k_{ij} u^i v^j` on polynomial coefficient vectors.
    pub fn bracket(&self, u: &[SuperPolynomial], v: &[SuperPolynomial]) -> Vec<SuperPolynomial> {
        let mut out = vec![SuperPolynomial::zero(); self.dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                let uv = &u[i] * &v[j];
                if uv.is_zero() {
                    continue;
                }
                for (k, slot) in out.iter_mut().enumerate() {
                    let c = self.get(i, j, k);
                    if !c.is_zero() {
                        *slot += &uv.scale(c);
                    }
                }
            }
        }
        out
    }
}
