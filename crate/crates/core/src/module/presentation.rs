use serde::{Deserialize, Serialize};

use crate::algebra::{is_unit, FiniteLevelRing, RingElement};
use crate::error::{invalid, Error, Result};
use crate::linalg::PrimePowerMatrix;

/// Minors are expanded by cofactors; presentations with more generators are rejected.
pub const MAX_GENERATORS: usize = 5;

/// A module given as the cokernel of `Λ^a -> Λ^b`: `a` relation rows, each a
/// vector of `b` ring elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    ring: FiniteLevelRing,
    relations: usize,
    generators: usize,
    entries: Vec<RingElement>,
}

impl ModulePresentation {
    pub fn new(ring: &FiniteLevelRing, generators: usize, rows: Vec<Vec<RingElement>>) -> Result<Self> {
        if generators > MAX_GENERATORS {
            return Err(Error::SizeCap(format!("{generators} generators exceeds the cap of {MAX_GENERATORS}")));
        }
        let relations = rows.len();
        let mut entries = Vec::with_capacity(relations * generators);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != generators {
                return Err(Error::DimensionMismatch(format!(
                    "relation {i} has {} entries, expected {generators}",
                    row.len()
                )));
            }
            for x in row {
                ring.check_element(&x)?;
                entries.push(ring.reduce(&x));
            }
        }
        Ok(ModulePresentation { ring: ring.clone(), relations, generators, entries })
    }

    /// The free module `Λ^b` (no relations).
    pub fn free(ring: &FiniteLevelRing, generators: usize) -> Result<Self> {
        Self::new(ring, generators, Vec::new())
    }

    pub fn ring(&self) -> &FiniteLevelRing {
        &self.ring
    }

    pub fn relations(&self) -> usize {
        self.relations
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn entry(&self, i: usize, j: usize) -> &RingElement {
        &self.entries[i * self.generators + j]
    }

    pub fn row(&self, i: usize) -> &[RingElement] {
        &self.entries[i * self.generators..(i + 1) * self.generators]
    }

    pub fn rows(&self) -> Vec<Vec<RingElement>> {
        (0..self.relations).map(|i| self.row(i).to_vec()).collect()
    }

    /// Same module with the entrywise map `f` applied into `target`.
    pub fn map_entries(&self, target: &FiniteLevelRing, f: impl Fn(&[u64]) -> RingElement) -> Result<Self> {
        let rows = (0..self.relations).map(|i| self.row(i).iter().map(|x| f(x)).collect()).collect();
        Self::new(target, self.generators, rows)
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &ModulePresentation) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch("direct sum over different rings".into()));
        }
        let b = self.generators + other.generators;
        let zero = self.ring.zero();
        let mut rows = Vec::new();
        for i in 0..self.relations {
            let mut row = self.row(i).to_vec();
            row.extend(std::iter::repeat(zero.clone()).take(other.generators));
            rows.push(row);
        }
        for i in 0..other.relations {
            let mut row = vec![zero.clone(); self.generators];
            row.extend(other.row(i).iter().cloned());
            rows.push(row);
        }
        Self::new(&self.ring, b, rows)
    }

    /// The relation module inside `Λ^b`, as a `Z/l^N`-span of coefficient vectors
    /// of length `b * basis_len` (generator-major).
    pub fn relation_lattice(&self) -> PrimePowerMatrix {
        let n = self.ring.basis_len();
        let mut vecs = Vec::with_capacity(self.relations * n);
        for i in 0..self.relations {
            for b in 0..n {
                let mut v = Vec::with_capacity(self.generators * n);
                for x in self.row(i) {
                    v.extend(self.ring.shift(x, b));
                }
                vecs.push(v);
            }
        }
        PrimePowerMatrix::from_row_vecs(self.ring.coeff_ring(), self.generators * n, vecs).howell_form()
    }

    /// Whether `f` kills every generator of the presented module.
    pub fn annihilated_by(&self, f: &[u64]) -> bool {
        let lattice = self.relation_lattice();
        let n = self.ring.basis_len();
        (0..self.generators).all(|j| {
            let mut v = vec![0u64; self.generators * n];
            v[j * n..(j + 1) * n].copy_from_slice(&self.ring.reduce(f));
            lattice.howell_solve(&v).is_some()
        })
    }
}

/// `Λ^r ⊕ ⨁ Λ/(g_i^{e_i})`. The `g_i` are treated as opaque nonzero nonunits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementaryModuleSpec {
    pub free_rank: usize,
    pub torsion_factors: Vec<(RingElement, u32)>,
}

impl ElementaryModuleSpec {
    pub fn torsion(factors: Vec<(RingElement, u32)>) -> Self {
        ElementaryModuleSpec { free_rank: 0, torsion_factors: factors }
    }

    pub fn is_torsion(&self) -> bool {
        self.free_rank == 0
    }

    pub fn validate(&self, ring: &FiniteLevelRing) -> Result<()> {
        for (i, (g, e)) in self.torsion_factors.iter().enumerate() {
            ring.check_element(g)?;
            if *e == 0 {
                return Err(invalid(format!("factor {i} has multiplicity 0")));
            }
            if ring.is_zero(&ring.reduce(g)) {
                return Err(invalid(format!("factor {i} is zero")));
            }
            if is_unit(ring, g) {
                return Err(invalid(format!("factor {i} is a unit")));
            }
        }
        Ok(())
    }
}

/// Zero columns for the free part, `g_i^{e_i}` on the diagonal of the torsion part.
pub fn elementary_presentation(ring: &FiniteLevelRing, spec: &ElementaryModuleSpec) -> Result<ModulePresentation> {
    spec.validate(ring)?;
    let r = spec.free_rank;
    let b = r + spec.torsion_factors.len();
    let mut rows = Vec::with_capacity(spec.torsion_factors.len());
    for (i, (g, e)) in spec.torsion_factors.iter().enumerate() {
        let mut row = vec![ring.zero(); b];
        row[r + i] = ring.pow(g, *e as u64);
        rows.push(row);
    }
    ModulePresentation::new(ring, b, rows)
}
