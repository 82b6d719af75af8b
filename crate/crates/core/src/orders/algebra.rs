//! An order viewed through its own `Z`-basis: integral structure constants,
//! and the finite algebra `Λ/pΛ` they induce.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::crystal::CrystalRing;
use crate::exactalg::linalg::{all_vectors, determinant, left_kernel_modp, modp, FpSpace, QLattice, QVec};
use crate::lattice::FullLattice;

pub(crate) struct OrderAlgebra {
    order: FullLattice,
    basis: Vec<QVec>,
    /// `consts[i][j]` = coordinates of `b_i·b_j`.
    consts: Vec<Vec<Vec<BigInt>>>,
}

impl OrderAlgebra {
    pub fn new(order: &FullLattice) -> Self {
        let ring = order.ring();
        let basis = order.basis();
        let lat = order.qlattice();
        let consts = basis
            .iter()
            .map(|x| {
                basis
                    .iter()
                    .map(|y| {
                        lat.coords(&ring.mul_flat(x, y))
                            .into_iter()
                            .map(|c| {
                                assert!(c.is_integer(), "lattice is not closed under multiplication");
                                c.to_integer()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        OrderAlgebra {
            order: order.clone(),
            basis,
            consts,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn ring(&self) -> &Arc<CrystalRing> {
        self.order.ring()
    }

    /// Coordinates of `1`.
    pub fn one(&self) -> Vec<BigInt> {
        self.order
            .qlattice()
            .coords(&self.ring().flat_one())
            .into_iter()
            .map(|c| c.to_integer())
            .collect()
    }

    /// Coordinates of the generator `θ` of `R` (of `1` when `R = Z`).
    pub fn theta(&self) -> Vec<BigInt> {
        self.order
            .qlattice()
            .coords(&self.ring().flat_theta())
            .into_iter()
            .map(|c| c.to_integer())
            .collect()
    }

    pub fn mul(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let n = self.dim();
        let mut out = vec![BigInt::zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let f = xi * yj;
                for (o, c) in out.iter_mut().zip(&self.consts[i][j]) {
                    *o += &f * c;
                }
            }
        }
        out
    }

    pub fn mul_modp(&self, x: &[u64], y: &[u64], p: u64) -> Vec<u64> {
        let n = self.dim();
        let mut out = vec![0u64; n];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let f = xi * yj % p;
                for (o, c) in out.iter_mut().zip(&self.consts[i][j]) {
                    *o = (*o + f * modp(c, p)) % p;
                }
            }
        }
        out
    }

    pub fn pow_modp(&self, x: &[u64], e: u64, p: u64) -> Vec<u64> {
        let mut acc: Vec<u64> = self.one().iter().map(|c| modp(c, p)).collect();
        for _ in 0..e {
            acc = self.mul_modp(&acc, x, p);
        }
        acc
    }

    /// Integer matrix of `y ↦ x·y` on row vectors.
    fn left_matrix(&self, x: &[BigInt]) -> Vec<Vec<BigInt>> {
        (0..self.dim())
            .map(|j| {
                let mut e = vec![BigInt::zero(); self.dim()];
                e[j] = BigInt::one();
                self.mul(x, &e)
            })
            .collect()
    }

    /// Regular trace `Tr(L_x)`.
    pub fn trace(&self, x: &[BigInt]) -> BigInt {
        let n = self.dim();
        let mut t = BigInt::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..n {
                t += xi * &self.consts[i][j][j];
            }
        }
        t
    }

    /// `det(Tr(b_i b_j))`.
    pub fn discriminant(&self) -> BigInt {
        let n = self.dim();
        let m: Vec<QVec> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::from_integer(self.trace(&self.consts[i][j])))
                    .collect()
            })
            .collect();
        determinant(&m).to_integer()
    }

    /// The sublattice `S + pΛ` for a subspace `S` of `Λ/pΛ`.
    pub fn lift(&self, s: &FpSpace) -> FullLattice {
        let p = BigRational::from_integer(BigInt::from(s.p()));
        let mut rows: Vec<QVec> = self.basis.iter().map(|b| b.iter().map(|x| x * &p).collect()).collect();
        for v in s.basis() {
            rows.push(self.combine(v));
        }
        let lat = QLattice::from_rows(&rows, self.dim()).expect("contains pΛ");
        FullLattice::from_closed(self.ring(), lat)
    }

    fn combine(&self, v: &[u64]) -> QVec {
        let mut out = vec![BigRational::zero(); self.dim()];
        for (c, b) in v.iter().zip(&self.basis) {
            if *c != 0 {
                let c = BigRational::from_integer(BigInt::from(*c));
                for (o, x) in out.iter_mut().zip(b) {
                    *o += &c * x;
                }
            }
        }
        out
    }

    /// Image of a sublattice `M ⊆ Λ` in `Λ/pΛ`.
    pub fn reduce_lattice(&self, m: &FullLattice, p: u64) -> FpSpace {
        let lat = self.order.qlattice();
        FpSpace::span(
            p,
            self.dim(),
            m.basis().iter().map(|r| {
                lat.coords(r)
                    .iter()
                    .map(|c| {
                        assert!(c.is_integer(), "sublattice expected");
                        modp(&c.to_integer(), p)
                    })
                    .collect()
            }),
        )
    }

    /// `rad(Λ/pΛ)` by iterated trace kernels.
    ///
    /// `I_i = {x ∈ I_{i-1} : g_i(x·b_j) = 0 for all j}` where
    /// `g_i(x) = Tr(L_x^{p^i})/p^i mod p`, for `i = 0..⌊log_p dim⌋`.
    pub fn radical_space(&self, p: u64) -> FpSpace {
        let n = self.dim();
        let mut levels = 0u32;
        while (p as u128).pow(levels + 1) <= n as u128 {
            levels += 1;
        }
        let mut cur = FpSpace::full(p, n);
        let pb = BigInt::from(p);
        for i in 0..=levels {
            let q = num_traits::pow(pb.clone(), i as usize);
            let e = p.pow(i);
            let basis = cur.basis().to_vec();
            let rows: Vec<Vec<u64>> = basis
                .iter()
                .map(|v| {
                    let x: Vec<BigInt> = v.iter().map(|&c| BigInt::from(c)).collect();
                    (0..n)
                        .map(|j| {
                            let mut bj = vec![BigInt::zero(); n];
                            bj[j] = BigInt::one();
                            let xb = self.mul(&x, &bj);
                            let t = matrix_power_trace(&self.left_matrix(&xb), e);
                            let (quot, rem) = t.div_mod_floor(&q);
                            debug_assert!(rem.is_zero(), "trace not divisible by p^i");
                            modp(&quot, p)
                        })
                        .collect()
                })
                .collect();
            let ker = left_kernel_modp(&rows, p);
            cur = FpSpace::span(
                p,
                n,
                ker.iter().map(|c| {
                    let mut v = vec![0u64; n];
                    for (ci, b) in c.iter().zip(&basis) {
                        for (o, x) in v.iter_mut().zip(b) {
                            *o = (*o + ci * x) % p;
                        }
                    }
                    v
                }),
            );
        }
        cur
    }

    pub fn radical(&self, p: u64) -> FullLattice {
        self.lift(&self.radical_space(p))
    }

    /// Subspaces `P/pΛ` of the maximal two-sided ideals `P ⊇ pΛ`, given `J/pΛ`.
    pub fn maximal_ideal_spaces(&self, p: u64, jbar: &FpSpace) -> Vec<FpSpace> {
        let n = self.dim();
        let unit = |j: usize| {
            let mut e = vec![0u64; n];
            e[j] = 1;
            e
        };
        let sub = |x: &[u64], y: &[u64]| -> Vec<u64> { x.iter().zip(y).map(|(a, b)| (a + p - b) % p).collect() };
        // center of Λ/J
        let rows: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                (0..n)
                    .flat_map(|j| {
                        let (ei, ej) = (unit(i), unit(j));
                        jbar.reduce(&sub(&self.mul_modp(&ei, &ej, p), &self.mul_modp(&ej, &ei, p)))
                    })
                    .collect()
            })
            .collect();
        let center = FpSpace::span(p, n, left_kernel_modp(&rows, p));
        // Berlekamp subalgebra {z : z^p = z}
        let zb = center.basis().to_vec();
        let rows: Vec<Vec<u64>> = zb.iter().map(|z| jbar.reduce(&sub(&self.pow_modp(z, p, p), z))).collect();
        let fixed = FpSpace::span(
            p,
            n,
            left_kernel_modp(&rows, p).iter().map(|c| {
                let mut v = vec![0u64; n];
                for (ci, z) in c.iter().zip(&zb) {
                    for (o, x) in v.iter_mut().zip(z) {
                        *o = (*o + ci * x) % p;
                    }
                }
                v
            }),
        );
        let blocks = fixed.dimension() - jbar.dimension();
        let one: Vec<u64> = self.one().iter().map(|c| modp(c, p)).collect();
        let mut idems = vec![one.clone()];
        for w in fixed.basis() {
            if idems.len() == blocks {
                break;
            }
            let mut next = Vec::new();
            for e in &idems {
                for c in 0..p {
                    let mut wc = w.clone();
                    for (x, o) in wc.iter_mut().zip(&one) {
                        *x = (*x + (p - c) * o) % p;
                    }
                    let f = sub(&one, &self.pow_modp(&wc, p - 1, p));
                    let ef = jbar.reduce(&self.mul_modp(e, &f, p));
                    if ef.iter().any(|&x| x != 0) {
                        next.push(ef);
                    }
                }
            }
            idems = next;
        }
        assert_eq!(idems.len(), blocks, "central idempotents do not split Λ/J");
        idems
            .iter()
            .map(|e| {
                let ce = sub(&one, e);
                let mut s = jbar.clone();
                for j in 0..n {
                    s.insert(self.mul_modp(&ce, &unit(j), p));
                }
                s
            })
            .collect()
    }

    /// Closure of `s` under left multiplication by `Λ` and right multiplication by `θ`.
    pub fn left_bimodule_closure(&self, s: &FpSpace) -> FpSpace {
        let p = s.p();
        let n = self.dim();
        let theta: Vec<u64> = self.theta().iter().map(|c| modp(c, p)).collect();
        let mut out = s.clone();
        let mut work: Vec<Vec<u64>> = s.basis().to_vec();
        while let Some(v) = work.pop() {
            let mut images = Vec::with_capacity(n + 1);
            for j in 0..n {
                let mut e = vec![0u64; n];
                e[j] = 1;
                images.push(self.mul_modp(&e, &v, p));
            }
            images.push(self.mul_modp(&v, &theta, p));
            for w in images {
                if out.insert(w.clone()) {
                    work.push(w);
                }
            }
        }
        out
    }

    /// A maximal proper left-`Λ`, right-`R` submodule of `Λ/pΛ` containing `start`.
    pub fn maximal_left_submodule(&self, start: &FpSpace) -> Option<FpSpace> {
        let p = start.p();
        let n = self.dim();
        let mut cur = self.left_bimodule_closure(start);
        if cur.is_full() {
            return None;
        }
        'grow: loop {
            let comp = complement(&cur);
            for coeffs in all_vectors(p, comp.len()) {
                // one representative per line
                match coeffs.iter().find(|&&c| c != 0) {
                    Some(&1) => {}
                    _ => continue,
                }
                let mut v = vec![0u64; n];
                for (c, b) in coeffs.iter().zip(&comp) {
                    for (o, x) in v.iter_mut().zip(b) {
                        *o = (*o + c * x) % p;
                    }
                }
                let mut t = cur.clone();
                t.insert(v);
                let t = self.left_bimodule_closure(&t);
                if !t.is_full() {
                    cur = t;
                    continue 'grow;
                }
            }
            return Some(cur);
        }
    }
}

/// Unit vectors completing a basis of `s` to the ambient space.
pub(crate) fn complement(s: &FpSpace) -> Vec<Vec<u64>> {
    let n = s.ambient();
    let pivots: Vec<usize> = s
        .basis()
        .iter()
        .map(|r| r.iter().position(|&x| x != 0).expect("nonzero"))
        .collect();
    (0..n)
        .filter(|j| !pivots.contains(j))
        .map(|j| {
            let mut e = vec![0u64; n];
            e[j] = 1;
            e
        })
        .collect()
}

fn matrix_power_trace(m: &[Vec<BigInt>], e: u64) -> BigInt {
    let n = m.len();
    let mut acc: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect();
    for _ in 0..e {
        acc = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(BigInt::zero(), |s, k| s + &acc[i][k] * &m[k][j]))
                    .collect()
            })
            .collect();
    }
    (0..n).fold(BigInt::zero(), |s, i| s + &acc[i][i])
}

/// Rational primes dividing a nonzero integer.
pub(crate) fn prime_support(n: &BigInt) -> Vec<u64> {
    crate::exactalg::factor_integer(n)
        .into_iter()
        .map(|(p, _)| p.to_u64().expect("desk-scale prime"))
        .collect()
}
