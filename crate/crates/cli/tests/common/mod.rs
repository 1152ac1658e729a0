//! Brute-force oracles and random instance generators for the acceptance suite.
#![allow(dead_code)]

use std::collections::HashSet;

use rand::rngs::StdRng;
use rand::Rng;

use iwasawa_core::algebra::FiniteAbelianPGroup;
use iwasawa_core::carlitz::structure_from_orders;
use iwasawa_core::cohomology::GModuleData;
use iwasawa_core::{AbelianGroupStructure, PrimePowerMatrix};

pub type Mat = Vec<Vec<i64>>;

/// `B = ⊕ Z/l^{a_j}` with elements as residue vectors; the action is `x -> x A`.
#[derive(Clone, Debug)]
pub struct Coeffs {
    pub l: u64,
    pub exps: Vec<u32>,
    pub mods: Vec<u64>,
}

impl Coeffs {
    pub fn new(l: u64, exps: Vec<u32>) -> Self {
        let mods = exps.iter().map(|&a| l.pow(a)).collect();
        Coeffs { l, exps, mods }
    }

    pub fn rank(&self) -> usize {
        self.exps.len()
    }

    pub fn size(&self) -> u64 {
        self.mods.iter().product()
    }

    pub fn decode(&self, mut idx: u64) -> Vec<u64> {
        self.mods
            .iter()
            .map(|&m| {
                let x = idx % m;
                idx /= m;
                x
            })
            .collect()
    }

    pub fn encode(&self, x: &[u64]) -> u64 {
        x.iter().zip(&self.mods).rev().fold(0, |acc, (&c, &m)| acc * m + c)
    }

    pub fn elements(&self) -> Vec<Vec<u64>> {
        (0..self.size()).map(|i| self.decode(i)).collect()
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).zip(&self.mods).map(|((a, b), m)| (a + b) % m).collect()
    }

    pub fn sub(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).zip(&self.mods).map(|((a, b), m)| (a + m - b) % m).collect()
    }

    pub fn scale(&self, x: &[u64], c: u64) -> Vec<u64> {
        x.iter().zip(&self.mods).map(|(&a, &m)| (a * (c % m)) % m).collect()
    }

    pub fn act(&self, x: &[u64], a: &Mat) -> Vec<u64> {
        (0..self.rank())
            .map(|j| {
                let m = self.mods[j] as i64;
                let s: i64 = (0..self.rank()).map(|i| (x[i] as i64 * a[i][j]).rem_euclid(m)).sum();
                s.rem_euclid(m) as u64
            })
            .collect()
    }

    pub fn is_zero(&self, x: &[u64]) -> bool {
        x.iter().all(|&c| c == 0)
    }

    /// Order of `x`, a power of `l`.
    pub fn order(&self, x: &[u64]) -> u64 {
        let mut o = 1;
        let mut y = x.to_vec();
        while !self.is_zero(&y) {
            y = self.scale(&y, self.l);
            o *= self.l;
        }
        o
    }

    pub fn mat_mul(&self, a: &Mat, b: &Mat) -> Mat {
        let n = self.rank();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let m = self.mods[j] as i64;
                        (0..n).map(|k| (a[i][k] * b[k][j]).rem_euclid(m)).sum::<i64>().rem_euclid(m)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn identity(&self) -> Mat {
        let n = self.rank();
        (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
    }

    pub fn mat_pow(&self, a: &Mat, e: u64) -> Mat {
        let mut acc = self.identity();
        for _ in 0..e {
            acc = self.mat_mul(&acc, a);
        }
        acc
    }

    /// Structure of a subgroup given by its element list.
    pub fn subgroup_structure(&self, elems: &[Vec<u64>]) -> AbelianGroupStructure {
        structure_from_orders(elems.iter().map(|x| self.order(x))).unwrap()
    }

    /// Structure of `B / S` for a subgroup `S` given by its element list.
    pub fn quotient_structure(&self, sub: &[Vec<u64>]) -> AbelianGroupStructure {
        let in_sub: HashSet<u64> = sub.iter().map(|x| self.encode(x)).collect();
        let mut seen = vec![false; self.size() as usize];
        let mut orders = Vec::new();
        for idx in 0..self.size() {
            if seen[idx as usize] {
                continue;
            }
            let b = self.decode(idx);
            for s in sub {
                seen[self.encode(&self.add(&b, s)) as usize] = true;
            }
            let mut o = 1;
            let mut y = b.clone();
            while !in_sub.contains(&self.encode(&y)) {
                y = self.scale(&y, self.l);
                o *= self.l;
            }
            orders.push(o);
        }
        structure_from_orders(orders).unwrap()
    }

    /// Subgroup generated by `gens`.
    pub fn span(&self, gens: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let mut seen = vec![false; self.size() as usize];
        seen[0] = true;
        let mut out = vec![vec![0u64; self.rank()]];
        for g in gens {
            if seen[self.encode(g) as usize] {
                continue;
            }
            // S + <g> = union of the cosets S + k g until k g lands in S
            let base = out.len();
            let mut kg = g.clone();
            while !seen[self.encode(&kg) as usize] {
                for i in 0..base {
                    let y = self.add(&out[i], &kg);
                    seen[self.encode(&y) as usize] = true;
                    out.push(y);
                }
                kg = self.add(&kg, g);
            }
        }
        out
    }
}

pub fn coeffs_of(gm: &GModuleData) -> Coeffs {
    Coeffs::new(gm.l(), gm.exponents().to_vec())
}

pub fn actions_of(gm: &GModuleData) -> Vec<Mat> {
    (0..gm.group().rank()).map(|i| gm.action_rows(i)).collect()
}

/// `Σ_{t < n} x A^t`.
pub fn norm_apply(c: &Coeffs, x: &[u64], a: &Mat, n: u64) -> Vec<u64> {
    let mut acc = vec![0u64; c.rank()];
    let mut y = x.to_vec();
    for _ in 0..n {
        acc = c.add(&acc, &y);
        y = c.act(&y, a);
    }
    acc
}

/// `|H^1(G, B)|` as `|Z^1| / |B^1|`, with `Z^1` the tuples `(b_i)` satisfying
/// `N_i b_i = 0` and `b_i (A_j - 1) = b_j (A_i - 1)`.
pub fn brute_h1_order(gm: &GModuleData) -> u64 {
    let c = coeffs_of(gm);
    let acts = actions_of(gm);
    let d = acts.len();
    let orders: Vec<u64> = (0..d).map(|i| gm.group().factor_order(i)).collect();
    let elems = c.elements();
    let shift = |x: &[u64], a: &Mat| c.sub(&c.act(x, a), x);
    let candidates: Vec<Vec<usize>> = (0..d)
        .map(|i| (0..elems.len()).filter(|&k| c.is_zero(&norm_apply(&c, &elems[k], &acts[i], orders[i]))).collect())
        .collect();
    let mut count = 0u64;
    let mut tuple = vec![0usize; d];
    fn rec(
        pos: usize,
        tuple: &mut Vec<usize>,
        candidates: &[Vec<usize>],
        ok: &dyn Fn(&[usize], usize) -> bool,
        count: &mut u64,
    ) {
        if pos == candidates.len() {
            *count += 1;
            return;
        }
        for &k in &candidates[pos] {
            tuple[pos] = k;
            if ok(tuple, pos) {
                rec(pos + 1, tuple, candidates, ok, count);
            }
        }
    }
    let ok = |t: &[usize], pos: usize| {
        (0..pos).all(|j| shift(&elems[t[pos]], &acts[j]) == shift(&elems[t[j]], &acts[pos]))
    };
    rec(0, &mut tuple, &candidates, &ok, &mut count);
    let coboundaries: HashSet<Vec<Vec<u64>>> =
        elems.iter().map(|b| acts.iter().map(|a| shift(b, a)).collect()).collect();
    count / coboundaries.len() as u64
}

/// `|Hom(G, B)| = ∏ gcd(|C_i|, l^{a_j})`.
pub fn hom_order(group: &FiniteAbelianPGroup, c: &Coeffs) -> u64 {
    let mut out = 1;
    for i in 0..group.rank() {
        for &m in &c.mods {
            out *= gcd(group.factor_order(i), m);
        }
    }
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Random well-defined endomorphism: `X_ij` divisible by `l^{max(0, a_j - a_i)}`.
pub fn random_endomorphism(c: &Coeffs, rng: &mut StdRng) -> Mat {
    let n = c.rank();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let need = c.exps[j].saturating_sub(c.exps[i]);
                    (c.l.pow(need) * rng.gen_range(0..c.mods[j]) % c.mods[j]) as i64
                })
                .collect()
        })
        .collect()
}

/// Commuting actions for `l = p`: powers of one unipotent `Y = 1 + lX`,
/// sometimes times `-1` when `p = 2`.
pub fn random_p_actions(group: &FiniteAbelianPGroup, c: &Coeffs, rng: &mut StdRng) -> Vec<Mat> {
    let n = c.rank();
    let x = random_endomorphism(c, rng);
    let id = c.identity();
    let y: Mat = (0..n)
        .map(|i| (0..n).map(|j| (id[i][j] + c.l as i64 * x[i][j]).rem_euclid(c.mods[j] as i64)).collect())
        .collect();
    let mut t = 0u32;
    let mut z = y.clone();
    while z != id {
        z = c.mat_pow(&z, c.l);
        t += 1;
    }
    let ord_y = c.l.pow(t);
    (0..group.rank())
        .map(|i| {
            let k = group.exponents()[i];
            let step = c.l.pow(t.saturating_sub(k));
            let e = rng.gen_range(0..c.l.pow(k.min(t)).max(1)) * step % ord_y.max(1);
            let mut a = c.mat_pow(&y, e);
            if c.l == 2 && rng.gen_bool(0.3) {
                for row in a.iter_mut() {
                    for (j, v) in row.iter_mut().enumerate() {
                        *v = (-*v).rem_euclid(c.mods[j] as i64);
                    }
                }
            }
            a
        })
        .collect()
}

/// Units of `Z/l^a` of order dividing `p`.
pub fn p_torsion_units(l: u64, a: u32, p: u64) -> Vec<u64> {
    let m = l.pow(a);
    (1..m).filter(|&u| u % l != 0 && pow_mod(u, p, m) == 1).collect()
}

fn pow_mod(b: u64, e: u64, m: u64) -> u64 {
    (0..e).fold(1 % m, |acc, _| acc * b % m)
}

/// Commuting actions for `l != p`: block diagonal, with `1 x 1` blocks of
/// `p`-torsion units and `2 x 2` blocks (coordinate swap for `p = 2`, a
/// root of `X^2 + X + 1` for `p = 3`) on equal-exponent neighbours.
pub fn random_coprime_actions(group: &FiniteAbelianPGroup, c: &Coeffs, rng: &mut StdRng) -> Vec<Mat> {
    let p = group.p();
    let n = c.rank();
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < n {
        if i + 1 < n && c.exps[i] == c.exps[i + 1] && (p == 2 || p == 3) && rng.gen_bool(0.5) {
            blocks.push((i, 2));
            i += 2;
        } else {
            blocks.push((i, 1));
            i += 1;
        }
    }
    (0..group.rank())
        .map(|_| {
            let mut a = vec![vec![0i64; n]; n];
            for &(s, len) in &blocks {
                let m = c.mods[s] as i64;
                if len == 1 {
                    let units = p_torsion_units(c.l, c.exps[s], p);
                    a[s][s] = units[rng.gen_range(0..units.len())] as i64;
                } else {
                    let base: Mat = if p == 2 { vec![vec![0, 1], vec![1, 0]] } else { vec![vec![0, 1], vec![-1, -1]] };
                    let mut blk = vec![vec![1i64, 0], vec![0, 1]];
                    for _ in 0..rng.gen_range(0..p) {
                        blk = (0..2)
                            .map(|r| (0..2).map(|q| (0..2).map(|k| blk[r][k] * base[k][q]).sum::<i64>()).collect())
                            .collect();
                    }
                    for r in 0..2 {
                        for q in 0..2 {
                            a[s + r][s + q] = blk[r][q].rem_euclid(m);
                        }
                    }
                }
            }
            a
        })
        .collect()
}

/// Non-empty ascending exponent list with total at most `max_log`.
pub fn random_exponents(rng: &mut StdRng, max_log: u32, max_rank: usize) -> Vec<u32> {
    let rank = rng.gen_range(1..=max_rank);
    let mut exps = Vec::new();
    let mut budget = max_log;
    for _ in 0..rank {
        if budget == 0 {
            break;
        }
        let a = rng.gen_range(1..=budget.min(3));
        exps.push(a);
        budget -= a;
    }
    exps.sort();
    exps
}

pub fn gmodule(group: FiniteAbelianPGroup, c: &Coeffs, actions: Vec<Mat>) -> GModuleData {
    let module = AbelianGroupStructure::from_prime_power_exponents(c.l, c.exps.iter().copied());
    let gm = GModuleData::new(group, c.l, module, actions).expect("generated actions are valid");
    assert_eq!(gm.exponents(), &c.exps[..]);
    gm
}

/// Every vector of `(Z/p^N)^n`, indexed in mixed radix.
pub struct Ambient {
    pub modulus: u64,
    pub n: usize,
}

impl Ambient {
    pub fn size(&self) -> u64 {
        self.modulus.pow(self.n as u32)
    }

    pub fn encode(&self, x: &[u64]) -> usize {
        x.iter().rev().fold(0u64, |acc, &c| acc * self.modulus + c) as usize
    }

    pub fn decode(&self, mut idx: u64) -> Vec<u64> {
        (0..self.n)
            .map(|_| {
                let c = idx % self.modulus;
                idx /= self.modulus;
                c
            })
            .collect()
    }

    /// Membership bitmap of the row span of `m`.
    pub fn span(&self, m: &PrimePowerMatrix) -> Vec<bool> {
        let gens = m.row_vecs();
        let mut seen = vec![false; self.size() as usize];
        seen[0] = true;
        let mut queue = vec![vec![0u64; self.n]];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i].clone();
            for g in &gens {
                let y: Vec<u64> = x.iter().zip(g).map(|(a, b)| (a + b) % self.modulus).collect();
                let e = self.encode(&y);
                if !seen[e] {
                    seen[e] = true;
                    queue.push(y);
                }
            }
            i += 1;
        }
        seen
    }
}

pub fn count(bits: &[bool]) -> u64 {
    bits.iter().filter(|&&b| b).count() as u64
}
