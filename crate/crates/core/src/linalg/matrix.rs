use std::fmt;

use serde::{Deserialize, Serialize};

use super::ring::PrimePowerRing;
use crate::error::{Error, Result};

/// Dense row-major matrix over Z/p^N. Vectors are rows and act on the left:
/// a matrix `m` defines the map `x -> x * m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePowerMatrix {
    ring: PrimePowerRing,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

/// How two row spans sit relative to each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpanRelation {
    Equal,
    AContainsB,
    BContainsA,
    Incomparable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmoduleComparison {
    pub relation: SpanRelation,
    pub intersection: PrimePowerMatrix,
}

/// `U * m * V = D` with `U`, `V` invertible.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: PrimePowerMatrix,
    pub d: PrimePowerMatrix,
    pub v: PrimePowerMatrix,
}

impl SmithForm {
    /// Valuations of the diagonal entries, `N` standing for zero.
    pub fn diagonal_valuations(&self) -> Vec<u32> {
        let r = self.d.ring;
        (0..self.d.rows.min(self.d.cols))
            .map(|i| r.valuation(self.d.get(i, i)))
            .collect()
    }
}

impl PrimePowerMatrix {
    pub fn zeros(ring: PrimePowerRing, rows: usize, cols: usize) -> Self {
        PrimePowerMatrix { ring, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(ring: PrimePowerRing, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from residues, reducing every entry.
    pub fn new(ring: PrimePowerRing, rows: usize, cols: usize, entries: Vec<u64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let entries = entries.into_iter().map(|x| ring.reduce(x)).collect();
        Ok(PrimePowerMatrix { ring, rows, cols, entries })
    }

    /// Builds a matrix from signed integer rows; all rows must share a length.
    pub fn from_rows<R: AsRef<[i64]>>(ring: PrimePowerRing, cols: usize, rows: &[R]) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            entries.extend(row.iter().map(|&x| ring.from_i64(x)));
        }
        Ok(PrimePowerMatrix { ring, rows: rows.len(), cols, entries })
    }

    pub fn from_row_vecs(ring: PrimePowerRing, cols: usize, rows: Vec<Vec<u64>>) -> Self {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols);
            entries.extend(row.into_iter().map(|x| ring.reduce(x)));
        }
        PrimePowerMatrix { ring, rows: n, cols, entries }
    }

    pub fn ring(&self) -> PrimePowerRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.entries[i * self.cols + j] = self.ring.reduce(x);
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &PrimePowerMatrix) -> Result<PrimePowerMatrix> {
        if self.cols != other.rows || self.ring != other.ring {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let r = self.ring;
        let m = r.modulus() as u128;
        let mut out = Self::zeros(r, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let idx = i * other.cols + j;
                        out.entries[idx] = ((out.entries[idx] as u128 + a as u128 * b as u128) % m) as u64;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.rows);
        let r = self.ring;
        let mut out = vec![0; self.cols];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = r.add(*o, r.mul(a, self.get(i, j)));
            }
        }
        out
    }

    pub fn transpose(&self) -> PrimePowerMatrix {
        let mut t = Self::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &PrimePowerMatrix) -> Result<PrimePowerMatrix> {
        self.check_ambient(other)?;
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(PrimePowerMatrix { ring: self.ring, rows: self.rows + other.rows, cols: self.cols, entries })
    }

    /// Columns `start..end`.
    pub fn column_range(&self, start: usize, end: usize) -> PrimePowerMatrix {
        let cols = end - start;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            entries.extend_from_slice(&self.row(i)[start..end]);
        }
        PrimePowerMatrix { ring: self.ring, rows: self.rows, cols, entries }
    }

    /// Reinterprets the entries over `Z/p^k` for `k <= N` (entrywise reduction).
    pub fn reduce_to(&self, ring: PrimePowerRing) -> Result<PrimePowerMatrix> {
        if ring.p() != self.ring.p() || ring.precision() > self.ring.precision() {
            return Err(Error::RingMismatch("reduction requires same prime and lower precision".into()));
        }
        let entries = self.entries.iter().map(|&x| ring.reduce(x)).collect();
        Ok(PrimePowerMatrix { ring, rows: self.rows, cols: self.cols, entries })
    }

    fn check_ambient(&self, other: &PrimePowerMatrix) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!(
                "Z/{} vs Z/{}",
                self.ring.modulus(),
                other.ring.modulus()
            )));
        }
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "ambient ranks {} and {}",
                self.cols, other.cols
            )));
        }
        Ok(())
    }

    /// Howell normal form: the canonical generating set of the row span.
    ///
    /// Rows are in echelon form with strictly increasing pivot columns, every
    /// pivot is a power `p^v`, entries above a pivot are reduced into `0..p^v`,
    /// and for each pivot column `c` the rows with pivot `>= c` span exactly the
    /// vectors of the span whose first `c` coordinates vanish. Two matrices have
    /// the same row span iff their Howell forms are equal.
    pub fn howell_form(&self) -> PrimePowerMatrix {
        let r = self.ring;
        let n = r.precision();
        let cols = self.cols;
        let mut pending: Vec<Vec<u64>> =
            self.row_vecs().into_iter().filter(|row| row.iter().any(|&x| x != 0)).collect();
        let mut basis: Vec<(usize, u32, Vec<u64>)> = Vec::new();

        for c in 0..cols {
            let best = pending
                .iter()
                .enumerate()
                .filter(|(_, row)| row[c] != 0)
                .min_by_key(|(_, row)| r.valuation(row[c]))
                .map(|(i, _)| i);
            let Some(best) = best else { continue };
            let mut pivot = pending.swap_remove(best);
            let (v, unit) = r.split(pivot[c]);
            let unit_inv = r.inv(unit);
            for x in pivot.iter_mut() {
                *x = r.mul(*x, unit_inv);
            }
            let pv = r.p_power(v);
            for row in pending.iter_mut() {
                if row[c] != 0 {
                    let f = row[c] / pv;
                    axpy(r, row, r.neg(f), &pivot);
                }
            }
            if v > 0 {
                let s = r.p_power(n - v);
                let sat: Vec<u64> = pivot.iter().map(|&x| r.mul(x, s)).collect();
                pending.push(sat);
            }
            pending.retain(|row| row.iter().any(|&x| x != 0));
            basis.push((c, v, pivot));
        }
        debug_assert!(pending.is_empty());

        for i in 0..basis.len() {
            let (c, v, _) = basis[i];
            let pv = r.p_power(v);
            let (above, rest) = basis.split_at_mut(i);
            let pivot_row = &rest[0].2;
            for (_, _, row) in above.iter_mut() {
                let q = row[c] / pv;
                if q != 0 {
                    axpy(r, row, r.neg(q), pivot_row);
                }
            }
        }

        PrimePowerMatrix::from_row_vecs(r, cols, basis.into_iter().map(|(_, _, row)| row).collect())
    }

    /// `log_p` of the number of elements in the row span.
    pub fn span_log_cardinality(&self) -> u32 {
        let h = self.howell_form();
        h.howell_log_cardinality()
    }

    /// Same as [`span_log_cardinality`](Self::span_log_cardinality) for a matrix already in Howell form.
    pub fn howell_log_cardinality(&self) -> u32 {
        let r = self.ring;
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let lead = row.iter().find(|&&x| x != 0).copied().unwrap_or(0);
                r.precision() - r.valuation(lead)
            })
            .sum()
    }

    /// Reduces `x` against a matrix in Howell form. Returns the coefficients
    /// `a` with `x = a * self` when `x` lies in the span.
    pub fn howell_solve(&self, x: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(x.len(), self.cols);
        let r = self.ring;
        let mut rem = x.to_vec();
        let mut coeffs = vec![0; self.rows];
        for i in 0..self.rows {
            let row = self.row(i);
            let c = row.iter().position(|&e| e != 0).expect("Howell rows are nonzero");
            if rem[..c].iter().any(|&e| e != 0) {
                return None;
            }
            let pv = row[c];
            if rem[c] % pv != 0 {
                return None;
            }
            let q = rem[c] / pv;
            if q != 0 {
                axpy(r, &mut rem, r.neg(q), row);
            }
            coeffs[i] = q;
        }
        rem.iter().all(|&e| e == 0).then_some(coeffs)
    }

    /// Membership of `x` in the row span (any matrix).
    pub fn span_contains(&self, x: &[u64]) -> bool {
        self.howell_form().howell_solve(x).is_some()
    }

    /// Smith normal form `U * m * V = D`. Diagonal entries are powers of p with
    /// nondecreasing exponents; zeros come last.
    pub fn smith_normal_form(&self) -> SmithForm {
        let r = self.ring;
        let (rows, cols) = (self.rows, self.cols);
        let mut d = self.clone();
        let mut u = Self::identity(r, rows);
        let mut v = Self::identity(r, cols);
        for k in 0..rows.min(cols) {
            let mut best: Option<(usize, usize, u32)> = None;
            for i in k..rows {
                for j in k..cols {
                    let x = d.get(i, j);
                    if x != 0 {
                        let val = r.valuation(x);
                        if best.map_or(true, |b| val < b.2) {
                            best = Some((i, j, val));
                        }
                    }
                }
            }
            let Some((bi, bj, val)) = best else { break };
            d.swap_rows(k, bi);
            u.swap_rows(k, bi);
            d.swap_cols(k, bj);
            v.swap_cols(k, bj);
            let (_, unit) = r.split(d.get(k, k));
            let ui = r.inv(unit);
            d.scale_row(k, ui);
            u.scale_row(k, ui);
            let pv = r.p_power(val);
            for i in k + 1..rows {
                let x = d.get(i, k);
                if x != 0 {
                    let f = r.neg(x / pv);
                    d.add_row_multiple(i, k, f);
                    u.add_row_multiple(i, k, f);
                }
            }
            for j in k + 1..cols {
                let x = d.get(k, j);
                if x != 0 {
                    let f = r.neg(x / pv);
                    d.add_col_multiple(j, k, f);
                    v.add_col_multiple(j, k, f);
                }
            }
        }
        SmithForm { u, d, v }
    }

    /// Rows span the left kernel `{x : x * self = 0}`, in Howell form.
    pub fn kernel_basis(&self) -> PrimePowerMatrix {
        let r = self.ring;
        let n = r.precision();
        let snf = self.smith_normal_form();
        let diag = self.rows.min(self.cols);
        let mut gens = Vec::new();
        for k in 0..self.rows {
            let scale = if k < diag {
                let a = r.valuation(snf.d.get(k, k));
                r.p_power(n - a)
            } else {
                1
            };
            if scale != 0 {
                gens.push(snf.u.row(k).iter().map(|&x| r.mul(x, scale)).collect());
            }
        }
        PrimePowerMatrix::from_row_vecs(r, self.rows, gens).howell_form()
    }

    /// Decides containment between the row spans of `self` (A) and `other` (B)
    /// and computes their intersection.
    pub fn submodule_compare(&self, other: &PrimePowerMatrix) -> Result<SubmoduleComparison> {
        self.check_ambient(other)?;
        let ha = self.howell_form();
        let hb = other.howell_form();
        let a_in_b = (0..ha.rows).all(|i| hb.howell_solve(ha.row(i)).is_some());
        let b_in_a = (0..hb.rows).all(|i| ha.howell_solve(hb.row(i)).is_some());
        let relation = match (a_in_b, b_in_a) {
            (true, true) => SpanRelation::Equal,
            (false, true) => SpanRelation::AContainsB,
            (true, false) => SpanRelation::BContainsA,
            (false, false) => SpanRelation::Incomparable,
        };
        let intersection = match relation {
            SpanRelation::Equal | SpanRelation::BContainsA => ha,
            SpanRelation::AContainsB => hb,
            SpanRelation::Incomparable => intersect_spans(&ha, &hb)?,
        };
        Ok(SubmoduleComparison { relation, intersection })
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub(crate) fn scale_row(&mut self, i: usize, f: u64) {
        let r = self.ring;
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.entries[idx] = r.mul(self.entries[idx], f);
        }
    }

    /// row_dst += f * row_src
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, f: u64) {
        let r = self.ring;
        for j in 0..self.cols {
            let s = self.entries[src * self.cols + j];
            let idx = dst * self.cols + j;
            self.entries[idx] = r.add(self.entries[idx], r.mul(f, s));
        }
    }

    /// col_dst += f * col_src
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, f: u64) {
        let r = self.ring;
        for i in 0..self.rows {
            let s = self.entries[i * self.cols + src];
            let idx = i * self.cols + dst;
            self.entries[idx] = r.add(self.entries[idx], r.mul(f, s));
        }
    }
}

/// Intersection of two row spans as `{x*A : (x, y) in ker [A; B]}`.
fn intersect_spans(a: &PrimePowerMatrix, b: &PrimePowerMatrix) -> Result<PrimePowerMatrix> {
    if a.rows == 0 || b.rows == 0 {
        return Ok(PrimePowerMatrix::zeros(a.ring, 0, a.cols));
    }
    let stacked = a.vstack(b)?;
    let kernel = stacked.kernel_basis();
    let left = kernel.column_range(0, a.rows);
    Ok(left.mul(a)?.howell_form())
}

pub(crate) fn axpy(r: PrimePowerRing, y: &mut [u64], a: u64, x: &[u64]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        if xi != 0 {
            *yi = r.add(*yi, r.mul(a, xi));
        }
    }
}

impl fmt::Display for PrimePowerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "] mod {}", self.ring.modulus())
    }
}
