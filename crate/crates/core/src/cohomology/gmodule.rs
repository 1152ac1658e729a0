use serde::{Deserialize, Serialize};

use crate::algebra::FiniteAbelianPGroup;
use crate::error::{invalid, Error, Result};
use crate::linalg::{is_prime, AbelianGroupStructure, PrimePowerMatrix, PrimePowerRing};

/// A finite abelian l-group `B = Z/l^{a_1} + ... + Z/l^{a_n}` (invariant-factor
/// basis) with commuting actions of the generators `γ_i` of a finite abelian
/// p-group. Matrices act on row vectors: `x -> x * A_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GModuleSpec", into = "GModuleSpec")]
pub struct GModuleData {
    group: FiniteAbelianPGroup,
    l: u64,
    module: AbelianGroupStructure,
    exponents: Vec<u32>,
    ring: PrimePowerRing,
    actions: Vec<PrimePowerMatrix>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GModuleSpec {
    group: FiniteAbelianPGroup,
    l: u64,
    /// Invariant factors of the module.
    module: Vec<u64>,
    actions: Vec<Vec<Vec<i64>>>,
}

impl TryFrom<GModuleSpec> for GModuleData {
    type Error = Error;
    fn try_from(s: GModuleSpec) -> Result<Self> {
        if s.module.iter().any(|&d| d < 2) {
            return Err(invalid("module invariant factors must exceed 1"));
        }
        let module = AbelianGroupStructure::from_cyclic_orders(s.module.iter().copied());
        if module.invariant_factors() != s.module.as_slice() {
            return Err(invalid(format!(
                "module must be given by its invariant factors in ascending divisibility order, e.g. {:?}",
                module.invariant_factors()
            )));
        }
        GModuleData::new(s.group, s.l, module, s.actions)
    }
}

impl From<GModuleData> for GModuleSpec {
    fn from(g: GModuleData) -> Self {
        let actions = (0..g.actions.len()).map(|i| g.action_rows(i)).collect();
        GModuleSpec { group: g.group, l: g.l, module: g.module.invariant_factors().to_vec(), actions }
    }
}

impl GModuleData {
    pub fn new(
        group: FiniteAbelianPGroup,
        l: u64,
        module: AbelianGroupStructure,
        actions: Vec<Vec<Vec<i64>>>,
    ) -> Result<Self> {
        if !is_prime(l) {
            return Err(invalid(format!("coefficient prime {l} is not prime")));
        }
        let exponents = if module.is_trivial() {
            Vec::new()
        } else {
            if module.invariant_factors().iter().any(|&d| !is_power_of(d, l)) {
                return Err(invalid(format!("module {module} is not an {l}-group")));
            }
            module.prime_power_exponents(l)
        };
        let top = exponents.iter().copied().max().unwrap_or(1);
        let ring = PrimePowerRing::new(l, top)?;
        let n = exponents.len();
        if actions.len() != group.rank() {
            return Err(Error::DimensionMismatch(format!(
                "{} action matrices for a group of rank {}",
                actions.len(),
                group.rank()
            )));
        }
        let mut mats = Vec::with_capacity(actions.len());
        for (index, rows) in actions.iter().enumerate() {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::DimensionMismatch(format!("action {index} is not {n} x {n}")));
            }
            let m = PrimePowerMatrix::from_rows(ring, n, rows)?;
            for i in 0..n {
                for j in 0..n {
                    let need = exponents[j].saturating_sub(exponents[i]);
                    let x = m.get(i, j) % l.pow(exponents[j]);
                    if x % l.pow(need) != 0 {
                        return Err(Error::InvalidAction {
                            index,
                            reason: format!("entry ({i},{j}) must be divisible by {l}^{need} to be well defined"),
                        });
                    }
                }
            }
            mats.push(normalize(&m, &exponents));
        }
        let gm = GModuleData { group, l, module, exponents, ring, actions: mats };
        gm.validate_actions()?;
        Ok(gm)
    }

    /// `G` acting trivially on `B`.
    pub fn trivial_action(group: FiniteAbelianPGroup, l: u64, module: AbelianGroupStructure) -> Result<Self> {
        let n = module.rank();
        let id: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
        let d = group.rank();
        Self::new(group, l, module, vec![id; d])
    }

    fn validate_actions(&self) -> Result<()> {
        let id = self.identity();
        for (i, a) in self.actions.iter().enumerate() {
            let order = self.group.factor_order(i);
            if self.power(a, order) != id {
                return Err(Error::InvalidAction {
                    index: i,
                    reason: format!("its order does not divide {order}"),
                });
            }
        }
        for i in 0..self.actions.len() {
            for k in i + 1..self.actions.len() {
                if self.compose(&self.actions[i], &self.actions[k]) != self.compose(&self.actions[k], &self.actions[i]) {
                    return Err(Error::NonCommutingActions(i, k));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &FiniteAbelianPGroup {
        &self.group
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn p(&self) -> u64 {
        self.group.p()
    }

    pub fn module(&self) -> &AbelianGroupStructure {
        &self.module
    }

    /// `a_i` with the i-th summand `Z/l^{a_i}`.
    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// `Z/l^a` with `l^a` the exponent of `B`; all matrices live here.
    pub fn ring(&self) -> PrimePowerRing {
        self.ring
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    pub fn action(&self, i: usize) -> &PrimePowerMatrix {
        &self.actions[i]
    }

    pub fn actions(&self) -> &[PrimePowerMatrix] {
        &self.actions
    }

    pub fn action_rows(&self, i: usize) -> Vec<Vec<i64>> {
        self.actions[i].row_vecs().into_iter().map(|r| r.into_iter().map(|x| x as i64).collect()).collect()
    }

    pub fn is_trivial_action(&self) -> bool {
        let id = self.identity();
        self.actions.iter().all(|a| *a == id)
    }

    pub fn identity(&self) -> PrimePowerMatrix {
        PrimePowerMatrix::identity(self.ring, self.rank())
    }

    /// `x -> (x a) b`.
    pub fn compose(&self, a: &PrimePowerMatrix, b: &PrimePowerMatrix) -> PrimePowerMatrix {
        normalize(&a.mul(b).expect("square matrices of equal size"), &self.exponents)
    }

    pub fn power(&self, a: &PrimePowerMatrix, mut e: u64) -> PrimePowerMatrix {
        let mut acc = self.identity();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.compose(&acc, &base);
            }
            base = self.compose(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn add(&self, a: &PrimePowerMatrix, b: &PrimePowerMatrix) -> PrimePowerMatrix {
        let r = self.ring;
        let entries = a.entries().iter().zip(b.entries()).map(|(&x, &y)| r.add(x, y)).collect();
        let m = PrimePowerMatrix::new(r, a.rows(), a.cols(), entries).expect("same shape");
        normalize(&m, &self.exponents)
    }

    pub fn scale(&self, a: &PrimePowerMatrix, c: u64) -> PrimePowerMatrix {
        let r = self.ring;
        let entries = a.entries().iter().map(|&x| r.mul(x, c)).collect();
        let m = PrimePowerMatrix::new(r, a.rows(), a.cols(), entries).expect("same shape");
        normalize(&m, &self.exponents)
    }

    /// `A - I`.
    pub fn minus_identity(&self, a: &PrimePowerMatrix) -> PrimePowerMatrix {
        let minus_one = self.ring.neg(1 % self.ring.modulus());
        self.add(a, &self.scale(&self.identity(), minus_one))
    }

    /// `sum_{t < |C_i|} A_i^t`, built as a product of p-blocks.
    pub fn norm(&self, i: usize) -> PrimePowerMatrix {
        let p = self.p();
        let mut acc = self.identity();
        let mut step = self.actions[i].clone();
        for _ in 0..self.group.exponents()[i] {
            // acc <- acc * (I + S + ... + S^{p-1}), S = A^{p^j}
            let mut block = self.identity();
            let mut s_pow = self.identity();
            for _ in 1..p {
                s_pow = self.compose(&s_pow, &step);
                block = self.add(&block, &s_pow);
            }
            acc = self.compose(&acc, &block);
            step = self.power(&step, p);
        }
        acc
    }

    /// `A^{-1} = A^{|C_i| - 1}`.
    pub fn inverse_action(&self, i: usize) -> PrimePowerMatrix {
        self.power(&self.actions[i], self.group.factor_order(i) - 1)
    }

    /// Relations `l^{a_i} e_i` of `copies` stacked copies of `B`, as rows in `(Z/l^a)^{copies * n}`.
    pub fn relations(&self, copies: usize) -> PrimePowerMatrix {
        let n = self.rank();
        let mut rows = Vec::new();
        for c in 0..copies {
            for (i, &a) in self.exponents.iter().enumerate() {
                let x = self.ring.p_power(a);
                if x != 0 {
                    let mut row = vec![0u64; copies * n];
                    row[c * n + i] = x;
                    rows.push(row);
                }
            }
        }
        PrimePowerMatrix::from_row_vecs(self.ring, copies * n, rows)
    }

    /// Dual module `Hom(B, Q/Z)` in the dual basis, with the contragredient action.
    pub fn dual(&self) -> GModuleData {
        let n = self.rank();
        let r = self.ring;
        let mut actions = Vec::with_capacity(self.actions.len());
        for i in 0..self.actions.len() {
            let inv = self.inverse_action(i);
            let mut c = PrimePowerMatrix::zeros(r, n, n);
            for (a, &ea) in self.exponents.iter().enumerate() {
                for (b, &eb) in self.exponents.iter().enumerate() {
                    // <γ e_x, γ* φ_y> = <e_x, φ_y> gives C_ab = (A^{-1})_ba * l^{e_b - e_a}
                    let x = inv.get(b, a);
                    let v = if eb >= ea {
                        r.mul(x, r.p_power(eb - ea))
                    } else {
                        x / r.p_power(ea - eb)
                    };
                    c.set(a, b, v % self.l.pow(eb));
                }
            }
            actions.push(c);
        }
        GModuleData {
            group: self.group.clone(),
            l: self.l,
            module: self.module.clone(),
            exponents: self.exponents.clone(),
            ring: r,
            actions,
        }
    }
}

/// Reduces column `j` modulo `l^{a_j}`.
pub(crate) fn normalize(m: &PrimePowerMatrix, exponents: &[u32]) -> PrimePowerMatrix {
    let r = m.ring();
    let n = exponents.len();
    let mut out = m.clone();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let modulus = r.p_power(exponents[j % n]);
            if modulus != 0 {
                out.set(i, j, m.get(i, j) % modulus);
            }
        }
    }
    out
}

fn is_power_of(mut d: u64, l: u64) -> bool {
    while d % l == 0 {
        d /= l;
    }
    d == 1
}
