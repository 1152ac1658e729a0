use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{is_prime, AbelianGroupStructure};

/// `G = Z/p^{k_1} x ... x Z/p^{k_d}`, elements written as exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupSpec", into = "GroupSpec")]
pub struct FiniteAbelianPGroup {
    p: u64,
    exponents: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct GroupSpec {
    p: u64,
    exponents: Vec<u32>,
}

impl TryFrom<GroupSpec> for FiniteAbelianPGroup {
    type Error = crate::Error;
    fn try_from(s: GroupSpec) -> Result<Self> {
        FiniteAbelianPGroup::new(s.p, s.exponents)
    }
}

impl From<FiniteAbelianPGroup> for GroupSpec {
    fn from(g: FiniteAbelianPGroup) -> Self {
        GroupSpec { p: g.p, exponents: g.exponents }
    }
}

impl FiniteAbelianPGroup {
    pub fn new(p: u64, exponents: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(invalid(format!("group prime {p} is not prime")));
        }
        if exponents.iter().any(|&k| k == 0) {
            return Err(invalid("cyclic factor exponents must be >= 1"));
        }
        let log: u32 = exponents.iter().sum();
        if p.checked_pow(log).is_none() {
            return Err(invalid("group order overflows u64"));
        }
        Ok(FiniteAbelianPGroup { p, exponents })
    }

    pub fn trivial(p: u64) -> Self {
        FiniteAbelianPGroup { p, exponents: Vec::new() }
    }

    /// `(Z/p^k)^d`
    pub fn homocyclic(p: u64, k: u32, d: usize) -> Result<Self> {
        Self::new(p, vec![k; d])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Number of cyclic factors `d`.
    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    /// Order of the i-th cyclic factor, `p^{k_i}`.
    pub fn factor_order(&self, i: usize) -> u64 {
        self.p.pow(self.exponents[i])
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.exponents.iter().sum())
    }

    pub fn structure(&self) -> AbelianGroupStructure {
        AbelianGroupStructure::from_prime_power_exponents(self.p, self.exponents.iter().copied())
    }

    /// All elements in lexicographic order of exponent vectors.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let radices: Vec<u64> = (0..self.rank()).map(|i| self.factor_order(i)).collect();
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut cur = vec![0u64; radices.len()];
        loop {
            out.push(cur.clone());
            let mut i = radices.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < radices[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    /// The group with every factor exponent raised by `shift`.
    pub fn raised(&self, shift: u32) -> Result<Self> {
        Self::new(self.p, self.exponents.iter().map(|k| k + shift).collect())
    }
}
