//! Dense linear algebra over a prime field `Z/p`.
//!
//! Vectors are plain `Vec<u32>` with entries in `0..p`. Subspaces are kept in
//! reduced row echelon form so that two spaces are equal exactly when their
//! bases are equal.

pub(crate) fn mod_inv(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    mod_pow(a, p - 2, p)
}

pub(crate) fn mod_pow(base: u32, mut exp: u32, p: u32) -> u32 {
    let mut acc: u64 = 1;
    let mut b = base as u64 % p as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u64;
        }
        b = b * b % p as u64;
        exp >>= 1;
    }
    acc as u32
}

#[inline]
pub(crate) fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

/// `dst += c * src` entrywise.
#[inline]
pub(crate) fn axpy(dst: &mut [u32], c: u32, src: &[u32], p: u32) {
    if c == 0 {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        *d = ((*d as u64 + c as u64 * *s as u64) % p as u64) as u32;
    }
}

/// A subspace of `(Z/p)^n` in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rref {
    p: u32,
    ncols: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Rref {
    pub fn zero(p: u32, ncols: usize) -> Self {
        Rref {
            p,
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(p: u32, ncols: usize) -> Self {
        let rows = (0..ncols)
            .map(|i| {
                let mut v = vec![0; ncols];
                v[i] = 1;
                v
            })
            .collect();
        Rref {
            p,
            ncols,
            rows,
            pivots: (0..ncols).collect(),
        }
    }

    pub fn span<I, V>(p: u32, ncols: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[u32]>,
    {
        let mut space = Rref::zero(p, ncols);
        for v in vectors {
            space.insert(v.as_ref());
        }
        space
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Residue of `v` after eliminating against the basis.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let mut r = v.to_vec();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = r[piv];
            if c != 0 {
                axpy(&mut r, self.p - c, row, self.p);
            }
        }
        r
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the space.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        let coords: Vec<u32> = self.pivots.iter().map(|&piv| v[piv]).collect();
        let mut rebuilt = vec![0; self.ncols];
        for (row, &c) in self.rows.iter().zip(&coords) {
            axpy(&mut rebuilt, c, row, self.p);
        }
        (rebuilt == v).then_some(coords)
    }

    /// Adds `v` to the space; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.ncols, "vector length mismatch");
        let mut r = self.reduce(v);
        let Some(piv) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = mod_inv(r[piv], self.p);
        for x in r.iter_mut() {
            *x = mul_mod(*x, inv, self.p);
        }
        for row in self.rows.iter_mut() {
            let c = row[piv];
            if c != 0 {
                axpy(row, self.p - c, &r, self.p);
            }
        }
        let at = self.pivots.partition_point(|&q| q < piv);
        self.rows.insert(at, r);
        self.pivots.insert(at, piv);
        true
    }

    pub fn is_subspace_of(&self, other: &Rref) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Rref) -> Rref {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r);
        }
        s
    }

    pub fn intersect(&self, other: &Rref) -> Rref {
        let mut stacked: Vec<Vec<u32>> = self.rows.clone();
        stacked.extend(other.rows.iter().cloned());
        let combos = nullspace(self.p, &stacked);
        let k = self.rows.len();
        let vectors = combos.into_iter().map(|c| {
            let mut v = vec![0; self.ncols];
            for (row, &ci) in self.rows.iter().zip(&c[..k]) {
                axpy(&mut v, ci, row, self.p);
            }
            v
        });
        Rref::span(self.p, self.ncols, vectors)
    }

    /// Number of vectors in the space, if it fits in `u64`.
    pub fn cardinality(&self) -> Option<u64> {
        (self.p as u64).checked_pow(self.dim() as u32)
    }

    /// Every vector of the space, in lexicographic order of the coordinate
    /// tuples (last basis vector varies fastest).
    pub fn elements(&self) -> Vec<Vec<u32>> {
        let k = self.dim();
        let total = self.cardinality().expect("space too large to enumerate") as usize;
        let mut out = Vec::with_capacity(total);
        let mut digits = vec![0u32; k];
        for _ in 0..total {
            let mut v = vec![0; self.ncols];
            for (row, &c) in self.rows.iter().zip(&digits) {
                axpy(&mut v, c, row, self.p);
            }
            out.push(v);
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < self.p {
                    break;
                }
                *d = 0;
            }
        }
        out
    }
}

/// All coefficient vectors `c` with `sum c_i rows_i = 0`, as a basis of the
/// left kernel.
pub(crate) fn nullspace(p: u32, rows: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let k = rows.len();
    if k == 0 {
        return Vec::new();
    }
    let n = rows[0].len();
    let mut aug: Vec<Vec<u32>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend((0..k).map(|j| u32::from(i == j)));
            v
        })
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(pr) = (rank..k).find(|&r| aug[r][col] != 0) else {
            continue;
        };
        aug.swap(rank, pr);
        let inv = mod_inv(aug[rank][col], p);
        for x in aug[rank].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = aug[rank].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let c = p - row[col];
                axpy(row, c, &pivot_row, p);
            }
        }
        rank += 1;
    }
    aug[rank..].iter().map(|r| r[n..].to_vec()).collect()
}

/// Right kernel of a `rows x n` matrix: all `x` with `M x = 0`.
pub(crate) fn right_kernel(p: u32, matrix: &[Vec<u32>], n: usize) -> Vec<Vec<u32>> {
    // transpose, then take the left kernel
    let cols: Vec<Vec<u32>> = (0..n)
        .map(|j| matrix.iter().map(|r| r[j]).collect())
        .collect();
    if matrix.is_empty() {
        return Rref::full(p, n).rows().to_vec();
    }
    nullspace(p, &cols)
}
