use super::gmodule::{normalize, GModuleData};
use crate::error::Result;
use crate::linalg::{AbelianGroupStructure, PrimePowerMatrix};

/// Degrees `0..=3` of `Hom_G(P, B)` where `P` is the tensor product of the
/// 2-periodic resolutions of the cyclic factors. Degree `n` is a sum of copies
/// of `B` indexed by multi-indices `j` with `|j| = n`; the block from `j` to
/// `j + e_i` is `±(A_i - 1)` for even `j_i` and `±N_i` for odd `j_i`, with
/// sign `(-1)^{j_1 + ... + j_{i-1}}`.
#[derive(Clone, Debug)]
pub struct PeriodicComplex {
    gm: GModuleData,
    components: Vec<Vec<Vec<u32>>>,
    differentials: Vec<PrimePowerMatrix>,
}

/// Multi-indices of total degree `n` in `d` slots, lexicographic.
pub fn multi_indices(d: usize, n: u32) -> Vec<Vec<u32>> {
    if d == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=n).rev() {
        for mut rest in multi_indices(d - 1, n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl PeriodicComplex {
    pub fn new(gm: &GModuleData) -> Self {
        let norms: Vec<PrimePowerMatrix> = (0..gm.group().rank()).map(|i| gm.norm(i)).collect();
        Self::with_norms(gm, &norms)
    }

    /// Builds the complex with the given norm blocks (the inflation tower
    /// rescales them).
    pub(crate) fn with_norms(gm: &GModuleData, norms: &[PrimePowerMatrix]) -> Self {
        let d = gm.group().rank();
        let n = gm.rank();
        let r = gm.ring();
        let components: Vec<Vec<Vec<u32>>> = (0..=3).map(|deg| multi_indices(d, deg)).collect();
        let shifts: Vec<PrimePowerMatrix> = gm.actions().iter().map(|a| gm.minus_identity(a)).collect();
        let mut differentials = Vec::with_capacity(3);
        for deg in 0..3 {
            let (src, dst) = (&components[deg], &components[deg + 1]);
            let mut m = PrimePowerMatrix::zeros(r, src.len() * n, dst.len() * n);
            for (s, j) in src.iter().enumerate() {
                let mut prefix = 0u32;
                for i in 0..d {
                    let mut target = j.clone();
                    target[i] += 1;
                    let t = dst.iter().position(|x| *x == target).expect("degree + 1 component");
                    let block = if j[i] % 2 == 0 { &shifts[i] } else { &norms[i] };
                    let negate = prefix % 2 == 1;
                    for a in 0..n {
                        for b in 0..n {
                            let x = block.get(a, b);
                            m.set(s * n + a, t * n + b, if negate { r.neg(x) } else { x });
                        }
                    }
                    prefix += j[i];
                }
            }
            differentials.push(normalize(&m, gm.exponents()));
        }
        PeriodicComplex { gm: gm.clone(), components, differentials }
    }

    pub fn module(&self) -> &GModuleData {
        &self.gm
    }

    pub fn components(&self, deg: usize) -> &[Vec<u32>] {
        &self.components[deg]
    }

    /// `d^deg : C^deg -> C^{deg+1}` for `deg` in `0..3`.
    pub fn differential(&self, deg: usize) -> &PrimePowerMatrix {
        &self.differentials[deg]
    }

    fn copies(&self, deg: usize) -> usize {
        self.components[deg].len()
    }

    /// `d^{k+1} ∘ d^k = 0` on `B`, for `k = 0, 1`.
    pub fn is_complex(&self) -> bool {
        (0..2).all(|k| {
            let comp = self.differentials[k].mul(&self.differentials[k + 1]).expect("composable");
            normalize(&comp, self.gm.exponents()).is_zero()
        })
    }

    /// Cocycles in `C^deg`, as a span in `(Z/l^a)^{copies * n}` containing the relations.
    pub fn cocycles(&self, deg: usize) -> PrimePowerMatrix {
        preimage(&self.differentials[deg], &self.gm.relations(self.copies(deg + 1)))
    }

    /// Coboundaries plus relations in `C^deg`.
    pub fn coboundaries(&self, deg: usize) -> PrimePowerMatrix {
        let rel = self.gm.relations(self.copies(deg));
        if deg == 0 {
            return rel.howell_form();
        }
        self.differentials[deg - 1].vstack(&rel).expect("same width").howell_form()
    }

    /// `H^deg` for `deg` in `0..=2`.
    pub fn cohomology(&self, deg: usize) -> Result<AbelianGroupStructure> {
        if self.gm.rank() == 0 {
            return Ok(AbelianGroupStructure::trivial());
        }
        AbelianGroupStructure::quotient(&self.coboundaries(deg), &self.cocycles(deg))
    }
}

/// `{x : x * d ∈ span(rel)}`.
pub(crate) fn preimage(d: &PrimePowerMatrix, rel: &PrimePowerMatrix) -> PrimePowerMatrix {
    let stacked = d.vstack(rel).expect("same width");
    stacked.kernel_basis().column_range(0, d.rows()).howell_form()
}
