use super::form::Frac;
use super::poly::{QuotElem, Ring};

/// 2x2 matrix over the fraction field of the quotient ring.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix2 {
    pub e: [[Frac; 2]; 2],
}

impl Matrix2 {
    pub fn new(a: Frac, b: Frac, c: Frac, d: Frac) -> Self {
        Matrix2 { e: [[a, b], [c, d]] }
    }

    pub fn scalar(s: Frac) -> Self {
        Self::new(s.clone(), Frac::zero(), Frac::zero(), s)
    }

    /// `[[1, u], [0, 1]]`.
    pub fn upper(u: Frac) -> Self {
        Self::new(Frac::one(), u, Frac::zero(), Frac::one())
    }

    /// `[[0, b], [c, 0]]`.
    pub fn antidiag(b: Frac, c: Frac) -> Self {
        Self::new(Frac::zero(), b, c, Frac::zero())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let at = |i: usize, j: usize| self.e[i][0].mul(&o.e[0][j]).add(&self.e[i][1].mul(&o.e[1][j]));
        Self::new(at(0, 0), at(0, 1), at(1, 0), at(1, 1))
    }

    pub fn sub(&self, o: &Self) -> Self {
        let at = |i: usize, j: usize| self.e[i][j].sub(&o.e[i][j]);
        Self::new(at(0, 0), at(0, 1), at(1, 0), at(1, 1))
    }

    pub fn det(&self) -> Frac {
        self.e[0][0].mul(&self.e[1][1]).sub(&self.e[0][1].mul(&self.e[1][0]))
    }

    pub fn trace(&self) -> Frac {
        self.e[0][0].add(&self.e[1][1])
    }

    /// `AB - BA`.
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// Entrywise cross-multiplied differences, reduced.
    pub fn witnesses(&self, o: &Self, ring: &Ring) -> Vec<QuotElem> {
        (0..4).map(|k| self.e[k / 2][k % 2].witness(&o.e[k / 2][k % 2], ring)).collect()
    }
}
