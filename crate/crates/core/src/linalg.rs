//! Linear algebra over Z_p on dense residue vectors.

use std::cmp::Ordering;

/// Modular inverse of a nonzero residue.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

pub fn pow_mod(mut a: u32, mut e: u32, p: u32) -> u32 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

/// `dst += c * src` modulo p.
pub fn axpy(dst: &mut [u8], c: u32, src: &[u8], p: u32) {
    if c == 0 {
        return;
    }
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = ((*d as u32 + c * s as u32) % p) as u8;
    }
}

pub fn scale(v: &mut [u8], c: u32, p: u32) {
    for x in v.iter_mut() {
        *x = (*x as u32 * c % p) as u8;
    }
}

pub fn dot(a: &[u8], b: &[u8], p: u32) -> u32 {
    a.iter().zip(b).map(|(&x, &y)| x as u32 * y as u32).sum::<u32>() % p
}

/// A subspace of Z_p^dim kept in reduced row echelon form.
///
/// Rows are sorted by pivot column, so two subspaces are equal iff their
/// bases are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    p: u32,
    dim: usize,
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: u32, dim: usize) -> Self {
        Subspace { p, dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(p: u32, dim: usize) -> Self {
        let mut s = Self::zero(p, dim);
        for k in 0..dim {
            let mut v = vec![0u8; dim];
            v[k] = 1;
            s.insert(&v);
        }
        s
    }

    pub fn from_vectors<'a>(p: u32, dim: usize, vs: impl IntoIterator<Item = &'a [u8]>) -> Self {
        let mut s = Self::zero(p, dim);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis in place.
    pub fn reduce(&self, v: &mut [u8]) {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc] as u32;
            if c != 0 {
                axpy(v, self.p - c, row, self.p);
            }
        }
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns true when the rank grew.
    pub fn insert(&mut self, v: &[u8]) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(w[pc] as u32, self.p);
        scale(&mut w, inv, self.p);
        for row in self.rows.iter_mut() {
            let c = row[pc] as u32;
            if c != 0 {
                axpy(row, self.p - c, &w, self.p);
            }
        }
        let at = self.pivots.partition_point(|&q| q < pc);
        self.pivots.insert(at, pc);
        self.rows.insert(at, w);
        true
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rank() <= other.rank() && self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r);
        }
        s
    }

    /// Basis of `{x : <row, x> = 0 for every basis row}`.
    pub fn annihilator(&self) -> Subspace {
        let p = self.p;
        let mut out = Subspace::zero(p, self.dim);
        let free: Vec<usize> = (0..self.dim).filter(|c| !self.pivots.contains(c)).collect();
        for &f in &free {
            let mut v = vec![0u8; self.dim];
            v[f] = 1;
            for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                v[pc] = ((p - row[f] as u32) % p) as u8;
            }
            out.insert(&v);
        }
        out
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let ann = other.annihilator();
        let p = self.p;
        // Coefficient vectors c with sum c_k row_k orthogonal to every annihilator row.
        let k = self.rows.len();
        let mut constraints = Subspace::zero(p, k);
        for a in ann.basis() {
            let v: Vec<u8> = self.rows.iter().map(|r| dot(a, r, p) as u8).collect();
            constraints.insert(&v);
        }
        let kernel = constraints.annihilator();
        let mut out = Subspace::zero(p, self.dim);
        for c in kernel.basis() {
            let mut v = vec![0u8; self.dim];
            for (j, &cj) in c.iter().enumerate() {
                axpy(&mut v, cj as u32, &self.rows[j], p);
            }
            out.insert(&v);
        }
        out
    }

    /// Number of elements, `p^rank`, if it fits.
    pub fn size(&self) -> Option<u64> {
        (self.p as u64).checked_pow(self.rank() as u32)
    }

    /// All elements in lexicographic order of their coordinates over the basis.
    pub fn elements(&self) -> Vec<Vec<u8>> {
        let k = self.rank();
        let total = (self.p as usize).pow(k as u32);
        let mut out = Vec::with_capacity(total);
        let mut coeffs = vec![0u32; k];
        for _ in 0..total {
            let mut v = vec![0u8; self.dim];
            for (j, &c) in coeffs.iter().enumerate() {
                axpy(&mut v, c, &self.rows[j], self.p);
            }
            out.push(v);
            for c in coeffs.iter_mut().rev() {
                *c += 1;
                if *c < self.p {
                    break;
                }
                *c = 0;
            }
        }
        out
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.p, self.dim, self.rows.len(), &self.rows).cmp(&(other.p, other.dim, other.rows.len(), &other.rows))
    }
}

/// Sparse linear combination of tracked source vectors: `(source, coefficient)`.
pub type Combo = Vec<(usize, u8)>;

fn combo_axpy(dst: &mut Combo, c: u32, src: &Combo, p: u32) {
    if c == 0 {
        return;
    }
    for &(k, a) in src {
        let add = (c * a as u32 % p) as u8;
        match dst.binary_search_by_key(&k, |e| e.0) {
            Ok(i) => {
                let v = ((dst[i].1 as u32 + add as u32) % p) as u8;
                if v == 0 {
                    dst.remove(i);
                } else {
                    dst[i].1 = v;
                }
            }
            Err(i) => {
                if add != 0 {
                    dst.insert(i, (k, add));
                }
            }
        }
    }
}

/// Echelon basis that remembers how each row arose from the inserted sources.
#[derive(Clone, Debug)]
pub struct TrackedBasis {
    p: u32,
    dim: usize,
    rows: Vec<(Vec<u8>, Combo)>,
    pivots: Vec<usize>,
    sources: usize,
}

impl TrackedBasis {
    pub fn new(p: u32, dim: usize) -> Self {
        TrackedBasis { p, dim, rows: Vec::new(), pivots: Vec::new(), sources: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn sources(&self) -> usize {
        self.sources
    }

    /// Registers the next source vector; returns true if it was independent.
    pub fn push(&mut self, v: &[u8]) -> bool {
        let id = self.sources;
        self.sources += 1;
        let mut w = v.to_vec();
        let mut combo: Combo = vec![(id, 1)];
        for ((row, rc), &pc) in self.rows.iter().zip(&self.pivots) {
            let c = w[pc] as u32;
            if c != 0 {
                axpy(&mut w, self.p - c, row, self.p);
                combo_axpy(&mut combo, self.p - c, rc, self.p);
            }
        }
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(w[pc] as u32, self.p);
        scale(&mut w, inv, self.p);
        for e in combo.iter_mut() {
            e.1 = (e.1 as u32 * inv % self.p) as u8;
        }
        // Keep earlier rows reduced at this pivot so `express` is a single pass.
        for (row, rc) in self.rows.iter_mut() {
            let c = row[pc] as u32;
            if c != 0 {
                axpy(row, self.p - c, &w, self.p);
                combo_axpy(rc, self.p - c, &combo, self.p);
            }
        }
        let at = self.pivots.partition_point(|&q| q < pc);
        self.pivots.insert(at, pc);
        self.rows.insert(at, (w, combo));
        true
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        self.express(v).is_some()
    }

    /// Writes `v` as a combination of the pushed sources, if possible.
    pub fn express(&self, v: &[u8]) -> Option<Combo> {
        debug_assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        let mut out: Combo = Vec::new();
        for ((row, rc), &pc) in self.rows.iter().zip(&self.pivots) {
            let c = w[pc] as u32;
            if c != 0 {
                axpy(&mut w, self.p - c, row, self.p);
                combo_axpy(&mut out, c, rc, self.p);
            }
        }
        w.iter().all(|&x| x == 0).then_some(out)
    }

    pub fn subspace(&self) -> Subspace {
        Subspace::from_vectors(self.p, self.dim, self.rows.iter().map(|(r, _)| r.as_slice()))
    }
}
