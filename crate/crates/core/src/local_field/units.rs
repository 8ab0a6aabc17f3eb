//! The finite group `(Z/p^m)^x` and its characters.

use std::collections::HashMap;

use num_complex::Complex64;

use super::character::RootOfUnity;
use super::padic::pow_u128;

/// `(Z/p^m)^x` written as a product of cyclic groups, with discrete logs.
#[derive(Debug, Clone)]
pub struct UnitGroup {
    p: u64,
    level: u32,
    modulus: u128,
    orders: Vec<u64>,
    elements: Vec<u128>,
    logs: HashMap<u128, Vec<u64>>,
}

fn order_mod(g: u128, m: u128) -> u64 {
    let mut x = g % m;
    let mut k = 1;
    while x != 1 % m {
        x = x * g % m;
        k += 1;
    }
    k
}

fn primitive_root(p: u64) -> u128 {
    (1..p as u128).find(|&g| order_mod(g, p as u128) == p - 1).unwrap_or(1)
}

impl UnitGroup {
    pub fn new(p: u64, level: u32) -> Self {
        let modulus = pow_u128(p, level);
        let gens: Vec<(u128, u64)> = if level == 0 {
            vec![]
        } else if p == 2 {
            match level {
                1 => vec![],
                2 => vec![(3, 2)],
                _ => vec![(modulus - 1, 2), (5, 1u64 << (level - 2))],
            }
        } else {
            let mut g = primitive_root(p);
            if level >= 2 && order_mod(g, (p * p) as u128) != p * (p - 1) {
                g += p as u128;
            }
            vec![(g % modulus, ((p - 1) as u128 * pow_u128(p, level - 1)) as u64)]
        };
        let mut elements = vec![1 % modulus.max(2)];
        if modulus == 1 {
            elements = vec![0];
        }
        let mut logs: HashMap<u128, Vec<u64>> = HashMap::new();
        let mut exps: Vec<Vec<u64>> = vec![vec![]];
        for &(g, ord) in &gens {
            let mut next_el = Vec::with_capacity(elements.len() * ord as usize);
            let mut next_ex = Vec::with_capacity(elements.len() * ord as usize);
            for (x, e) in elements.iter().zip(&exps) {
                let mut y = *x;
                for k in 0..ord {
                    next_el.push(y);
                    let mut ek = e.clone();
                    ek.push(k);
                    next_ex.push(ek);
                    y = y * g % modulus;
                }
            }
            elements = next_el;
            exps = next_ex;
        }
        for (x, e) in elements.iter().zip(exps) {
            logs.insert(*x, e);
        }
        let mut sorted = elements.clone();
        sorted.sort_unstable();
        UnitGroup { p, level, modulus, orders: gens.iter().map(|g| g.1).collect(), elements: sorted, logs }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Unit residues in increasing order (`[0]` at level 0).
    pub fn elements(&self) -> &[u128] {
        &self.elements
    }

    /// All characters, each given by its exponent vector.
    pub fn characters(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for &ord in &self.orders {
            out = out.into_iter().flat_map(|c: Vec<u64>| (0..ord).map(move |k| [c.clone(), vec![k]].concat())).collect();
        }
        out
    }

    /// `chi_k(u)` for a unit residue `u` as a root of unity. Only the p-power
    /// part is exact; for odd p the prime-to-p part is returned in `value`.
    pub fn value(&self, chi: &[u64], u: u128) -> Complex64 {
        let e = &self.logs[&(u % self.modulus)];
        let mut theta = 0.0;
        for ((k, x), ord) in chi.iter().zip(e).zip(&self.orders) {
            theta += (*k as f64) * (*x as f64) / (*ord as f64);
        }
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * theta.fract())
    }

    /// The conductor exponent of `chi`: the least `a` with `chi` trivial on
    /// `1 + p^a`.
    pub fn conductor(&self, chi: &[u64]) -> u32 {
        if chi.iter().all(|&k| k == 0) {
            return 0;
        }
        for a in 1..=self.level {
            let step = pow_u128(self.p, a);
            let trivial = self
                .elements
                .iter()
                .filter(|&&u| u % step == 1 % step)
                .all(|&u| (self.value(chi, u) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            if trivial {
                return a;
            }
        }
        self.level
    }

    pub fn is_trivial(chi: &[u64]) -> bool {
        chi.iter().all(|&k| k == 0)
    }

    /// Exact form of `chi` on `1 + p Z_p` when it factors through p-power roots.
    pub fn root_of_unity(&self, chi: &[u64], u: u128) -> Option<RootOfUnity> {
        let e = &self.logs[&(u % self.modulus)];
        let mut acc = RootOfUnity::one(self.p);
        for ((k, x), ord) in chi.iter().zip(e).zip(&self.orders) {
            let mut o = *ord;
            let mut lvl = 0;
            while o % self.p == 0 {
                o /= self.p;
                lvl += 1;
            }
            if o != 1 {
                return None;
            }
            acc = acc.mul(&RootOfUnity::new(self.p, (*k as u128) * (*x as u128), lvl));
        }
        Some(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_match_euler_phi() {
        assert_eq!(UnitGroup::new(5, 2).order(), 20);
        assert_eq!(UnitGroup::new(2, 4).order(), 8);
        assert_eq!(UnitGroup::new(3, 0).order(), 1);
        assert_eq!(UnitGroup::new(2, 1).order(), 1);
    }

    #[test]
    fn characters_are_orthogonal() {
        for (p, m) in [(3, 2), (2, 3), (5, 1), (2, 2)] {
            let g = UnitGroup::new(p, m);
            let chars = g.characters();
            assert_eq!(chars.len(), g.order());
            for a in &chars {
                for b in &chars {
                    let s: Complex64 = g.elements().iter().map(|&u| g.value(a, u) * g.value(b, u).conj()).sum();
                    let want = if a == b { g.order() as f64 } else { 0.0 };
                    assert!((s - want).norm() < 1e-9, "{p} {m}");
                }
            }
        }
    }

    #[test]
    fn conductor_of_legendre_is_one() {
        let g = UnitGroup::new(5, 2);
        let legendre = vec![10];
        assert_eq!(g.conductor(&legendre), 1);
        assert_eq!(g.conductor(&[1]), 2);
        assert_eq!(g.conductor(&[0]), 0);
    }
}
