//! Exact linear algebra over `Q`, `Z` and `F_p`.
//!
//! Matrices are row-major `Vec<Vec<_>>` and act on row vectors from the right.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::zhnf;

pub type QVec = Vec<BigRational>;
pub type QMat = Vec<QVec>;

pub fn q(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn qzero(n: usize) -> QVec {
    vec![BigRational::zero(); n]
}

pub fn qidentity(n: usize) -> QMat {
    (0..n)
        .map(|i| {
            let mut r = qzero(n);
            r[i] = BigRational::one();
            r
        })
        .collect()
}

pub fn vec_mat(v: &[BigRational], m: &[QVec]) -> QVec {
    let cols = m.first().map_or(0, Vec::len);
    let mut out = qzero(cols);
    for (x, row) in v.iter().zip(m) {
        if x.is_zero() {
            continue;
        }
        for (o, y) in out.iter_mut().zip(row) {
            *o += x * y;
        }
    }
    out
}

pub fn mat_mul(a: &[QVec], b: &[QVec]) -> QMat {
    a.iter().map(|row| vec_mat(row, b)).collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Inverse of a square matrix, or `None` if singular.
pub fn inverse(m: &[QVec]) -> Option<QMat> {
    let n = m.len();
    let mut a: QMat = m.to_vec();
    let mut inv = qidentity(n);
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        inv.swap(c, p);
        let piv = a[c][c].clone();
        for j in 0..n {
            a[c][j] = &a[c][j] / &piv;
            inv[c][j] = &inv[c][j] / &piv;
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
                let t = &f * &inv[c][j];
                inv[i][j] -= t;
            }
        }
    }
    Some(inv)
}

pub fn determinant(m: &[QVec]) -> BigRational {
    let n = m.len();
    let mut a: QMat = m.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(c, p);
            det = -det;
        }
        let piv = a[c][c].clone();
        det *= &piv;
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &piv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

pub fn rank(m: &[QVec]) -> usize {
    let mut a: QMat = m.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &piv;
            for j in c..cols {
                let t = &f * &a[r][j];
                a[i][j] -= t;
            }
        }
        r += 1;
    }
    r
}

/// Common denominator of a set of rational vectors.
pub fn lcm_den<'a>(rows: impl IntoIterator<Item = &'a QVec>) -> BigInt {
    let mut l = BigInt::one();
    for r in rows {
        for x in r {
            l = l.lcm(x.denom());
        }
    }
    l
}

/// A full-rank `Z`-lattice in `Q^dim`: `(1/den)·rowspace(basis)` with `basis` in HNF.
///
/// `den` is the least positive integer making the lattice integral, so equal
/// lattices have identical representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QLattice {
    den: BigInt,
    basis: Vec<Vec<BigInt>>,
}

impl QLattice {
    /// The lattice spanned by `gens`, or `None` when they do not span `Q^dim`.
    pub fn from_rows(gens: &[QVec], dim: usize) -> Option<QLattice> {
        if gens.is_empty() {
            return None;
        }
        let l = lcm_den(gens);
        let ints: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|r| r.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect())
            .collect();
        let h = zhnf(&ints);
        if h.len() != dim {
            return None;
        }
        Some(Self::from_hnf(l, h))
    }

    fn from_hnf(den: BigInt, basis: Vec<Vec<BigInt>>) -> QLattice {
        let mut g = den.clone();
        for r in &basis {
            for x in r {
                g = g.gcd(x);
            }
        }
        if g.is_one() {
            return QLattice { den, basis };
        }
        QLattice {
            den: &den / &g,
            basis: basis.iter().map(|r| r.iter().map(|x| x / &g).collect()).collect(),
        }
    }

    pub fn standard(dim: usize) -> QLattice {
        QLattice {
            den: BigInt::one(),
            basis: (0..dim)
                .map(|i| (0..dim).map(|j| BigInt::from((i == j) as i32)).collect())
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn int_basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn rows(&self) -> QMat {
        self.basis
            .iter()
            .map(|r| r.iter().map(|x| BigRational::new(x.clone(), self.den.clone())).collect())
            .collect()
    }

    /// Coordinates of `v` in the basis, if `v` lies in the rational span (always, full rank).
    pub fn coords(&self, v: &[BigRational]) -> QVec {
        // triangular back-substitution on the HNF
        let n = self.dim();
        let mut rest: QVec = v.iter().map(|x| x * BigRational::from_integer(self.den.clone())).collect();
        let mut out = qzero(n);
        for i in 0..n {
            let piv = self.pivot_col(i);
            let c = &rest[piv] / BigRational::from_integer(self.basis[i][piv].clone());
            if !c.is_zero() {
                for (r, b) in rest.iter_mut().zip(&self.basis[i]) {
                    *r -= &c * BigRational::from_integer(b.clone());
                }
            }
            out[i] = c;
        }
        out
    }

    fn pivot_col(&self, i: usize) -> usize {
        self.basis[i].iter().position(|x| !x.is_zero()).expect("HNF rows are nonzero")
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.coords(v).iter().all(|c| c.is_integer())
    }

    pub fn contains_lattice(&self, other: &QLattice) -> bool {
        other.rows().iter().all(|r| self.contains(r))
    }

    pub fn sum(&self, other: &QLattice) -> QLattice {
        let mut rows = self.rows();
        rows.extend(other.rows());
        QLattice::from_rows(&rows, self.dim()).expect("sum of full lattices is full")
    }

    pub fn scale(&self, k: &BigRational) -> QLattice {
        assert!(!k.is_zero(), "scaling by zero");
        let rows: QMat = self.rows().iter().map(|r| r.iter().map(|x| x * k).collect()).collect();
        QLattice::from_rows(&rows, self.dim()).expect("nonzero scaling keeps rank")
    }

    /// Dual lattice `{v : ⟨v, m⟩ ∈ Z for all m}`.
    pub fn dual(&self) -> QLattice {
        let inv = inverse(&self.rows()).expect("full rank");
        QLattice::from_rows(&transpose(&inv), self.dim()).expect("dual is full")
    }

    pub fn intersect(&self, other: &QLattice) -> QLattice {
        self.dual().sum(&other.dual()).dual()
    }

    /// Covolume `|det(basis)|`.
    pub fn volume(&self) -> BigRational {
        let mut v = BigRational::one();
        for i in 0..self.dim() {
            v *= BigRational::new(self.basis[i][self.pivot_col(i)].clone(), self.den.clone());
        }
        v
    }

    /// Least positive integer `r` with `r·self ⊆ other`.
    pub fn scaling_into(&self, other: &QLattice) -> BigInt {
        let mut l = BigInt::one();
        for r in self.rows() {
            for c in other.coords(&r) {
                l = l.lcm(c.denom());
            }
        }
        l
    }
}

/// `{v ∈ Q^n : v·T_k ∈ L_k for every k}` for maps `T_k : Q^n → Q^{m_k}`.
///
/// The conditions say that `v` pairs integrally with the columns of
/// `T_k·B_k^{-1}`, so the solution set is the dual of the lattice those
/// columns span. `None` when the columns do not span `Q^n`.
pub fn preimage(n: usize, constraints: &[(&[QVec], &QLattice)]) -> Option<QLattice> {
    let mut cols: QMat = Vec::new();
    for (t, target) in constraints {
        let binv = inverse(&target.rows()).expect("target is full rank");
        let s = mat_mul(t, &binv);
        cols.extend(transpose(&s));
    }
    let cols: QMat = cols.into_iter().filter(|c| c.iter().any(|x| !x.is_zero())).collect();
    if cols.is_empty() {
        return None;
    }
    Some(QLattice::from_rows(&cols, n)?.dual())
}

// ---- F_p ----

pub fn modp(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    u64::try_from(&r).expect("residue fits")
}

pub fn inv_modp(a: u64, p: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(p as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(p as i128) as u64
}

/// A subspace of `F_p^dim` held in reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpSpace {
    p: u64,
    dim: usize,
    rows: Vec<Vec<u64>>,
}

impl FpSpace {
    pub fn zero(p: u64, dim: usize) -> Self {
        FpSpace { p, dim, rows: Vec::new() }
    }

    pub fn full(p: u64, dim: usize) -> Self {
        let rows = (0..dim).map(|i| (0..dim).map(|j| (i == j) as u64).collect()).collect();
        FpSpace { p, dim, rows }
    }

    pub fn span(p: u64, dim: usize, gens: impl IntoIterator<Item = Vec<u64>>) -> Self {
        let mut s = Self::zero(p, dim);
        for g in gens {
            s.insert(g);
        }
        s
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ambient(&self) -> usize {
        self.dim
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    /// Reduce `v` modulo the space; zero iff `v` is in it.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut v: Vec<u64> = v.iter().map(|x| x % p).collect();
        for r in &self.rows {
            let c = r.iter().position(|&x| x != 0).expect("nonzero row");
            let f = v[c];
            if f != 0 {
                for (x, y) in v.iter_mut().zip(r) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_space(&self, other: &FpSpace) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// Add `v`; returns whether the space grew.
    pub fn insert(&mut self, v: Vec<u64>) -> bool {
        let p = self.p;
        let mut v = self.reduce(&v);
        let Some(c) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_modp(v[c], p);
        for x in v.iter_mut() {
            *x = *x * inv % p;
        }
        for r in self.rows.iter_mut() {
            let f = r[c];
            if f != 0 {
                for (x, y) in r.iter_mut().zip(&v) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        let pos = self
            .rows
            .iter()
            .position(|r| r.iter().position(|&x| x != 0).unwrap() > c)
            .unwrap_or(self.rows.len());
        self.rows.insert(pos, v);
        true
    }

    pub fn add(&self, other: &FpSpace) -> FpSpace {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r.clone());
        }
        s
    }
}

/// Left kernel `{c : Σ_i c_i·rows[i] = 0}` of a matrix over `F_p`, as coefficient vectors.
pub fn left_kernel_modp(rows: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    // augment with identity and eliminate
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v: Vec<u64> = r.iter().map(|x| x % p).collect();
            v.extend((0..n).map(|j| (i == j) as u64));
            v
        })
        .collect();
    let mut r = 0;
    for c in 0..m {
        let Some(piv) = (r..n).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = inv_modp(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        let pr = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        r += 1;
    }
    a[r..].iter().map(|row| row[m..].to_vec()).collect()
}

/// Enumerate all vectors of `F_p^dim` in lexicographic order.
pub fn all_vectors(p: u64, dim: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = (p as u128).pow(dim as u32);
    (0..total).map(move |mut k| {
        let mut v = vec![0u64; dim];
        for x in v.iter_mut().rev() {
            *x = (k % p as u128) as u64;
            k /= p as u128;
        }
        v
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qv(xs: &[i64]) -> QVec {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn lattice_canonical_denominator() {
        let l = QLattice::from_rows(&[vec![BigRational::new(1.into(), 2.into())]], 1).unwrap();
        assert_eq!(l.den(), &BigInt::from(2));
        let m = QLattice::from_rows(&[vec![q(2)], vec![q(3)]], 1).unwrap();
        assert_eq!(m, QLattice::standard(1));
    }

    #[test]
    fn intersection_and_dual() {
        let a = QLattice::from_rows(&[qv(&[2])], 1).unwrap();
        let b = QLattice::from_rows(&[qv(&[3])], 1).unwrap();
        assert_eq!(a.intersect(&b), QLattice::from_rows(&[qv(&[6])], 1).unwrap());
        assert_eq!(a.dual(), QLattice::from_rows(&[vec![BigRational::new(1.into(), 2.into())]], 1).unwrap());
    }

    #[test]
    fn preimage_of_doubling() {
        let two = vec![qv(&[2, 0]), qv(&[0, 2])];
        let target = QLattice::standard(2);
        let out = preimage(2, &[(&two, &target)]).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(out, QLattice::standard(2).scale(&half));
        assert!(preimage(2, &[(&vec![qv(&[1, 0]), qv(&[0, 0])][..], &target)]).is_none());
    }

    #[test]
    fn fp_kernel() {
        let rows = vec![vec![1, 1], vec![1, 1], vec![0, 1]];
        let k = left_kernel_modp(&rows, 2);
        assert_eq!(k, vec![vec![1, 1, 0]]);
        let s = FpSpace::span(3, 3, [vec![1, 2, 0], vec![2, 1, 0]]);
        assert_eq!(s.dimension(), 1);
        assert!(s.contains(&[2, 1, 0]));
    }
}
