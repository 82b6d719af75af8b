//! Full `R`-lattices in `A` and their calculus: sums, intersections,
//! products, left/right orders and inverses.
//!
//! A lattice is kept as a canonical `Z`-lattice in flattened coordinates
//! (see [`crate::crystal`]). Being an `R`-bimodule means closure under left
//! and right multiplication by `θ`, which generators are saturated against on
//! construction.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::crystal::{AElement, CrystalRing};
use crate::exactalg::linalg::{mat_mul, preimage, QLattice, QMat, QVec};
use crate::exactalg::{hnf, KElem, RElem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("generators do not span A over K")]
    NotFull,
    #[error("lattices belong to different rings")]
    RingMismatch,
    #[error("linear system is rank deficient")]
    RankDeficient,
}

#[derive(Clone)]
pub struct FullLattice {
    ring: Arc<CrystalRing>,
    lat: QLattice,
}

impl fmt::Debug for FullLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FullLattice")
            .field("den", self.lat.den())
            .field("basis", &self.lat.int_basis())
            .finish()
    }
}

impl PartialEq for FullLattice {
    fn eq(&self, other: &Self) -> bool {
        self.lat == other.lat && same_ring(&self.ring, &other.ring)
    }
}

impl Eq for FullLattice {}

impl PartialOrd for FullLattice {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by canonical form (denominator, then basis).
impl Ord for FullLattice {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lat.cmp(&other.lat)
    }
}

impl std::hash::Hash for FullLattice {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.lat.hash(state);
    }
}

fn same_ring(a: &Arc<CrystalRing>, b: &Arc<CrystalRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// `{v ∈ Q^n : v·T ∈ L}` for a map `T` acting on row vectors.
///
/// Fails with `RankDeficient` when `T` is not injective, in which case the
/// solution set is not a lattice.
pub fn integral_solution(t: &[QVec], target: &QLattice) -> Result<QLattice, LatticeError> {
    preimage(t.len(), &[(t, target)]).ok_or(LatticeError::RankDeficient)
}

impl FullLattice {
    /// The bimodule generated by `gens`.
    pub fn from_generators(ring: &Arc<CrystalRing>, gens: &[AElement]) -> Result<Self, LatticeError> {
        if gens.iter().any(|g| g.coeffs().len() != ring.order()) {
            return Err(LatticeError::RingMismatch);
        }
        let flat: Vec<QVec> = gens.iter().map(|g| ring.to_flat(g)).collect();
        Self::from_flat(ring, &flat)
    }

    /// The bimodule generated by flattened vectors.
    pub fn from_flat(ring: &Arc<CrystalRing>, gens: &[QVec]) -> Result<Self, LatticeError> {
        let theta = ring.flat_theta();
        let mut rows = Vec::with_capacity(4 * gens.len());
        for x in gens {
            rows.push(x.clone());
            if ring.base().is_quadratic() {
                let tx = ring.mul_flat(&theta, x);
                rows.push(ring.mul_flat(x, &theta));
                rows.push(ring.mul_flat(&tx, &theta));
                rows.push(tx);
            }
        }
        let lat = QLattice::from_rows(&rows, ring.flat_dim()).ok_or(LatticeError::NotFull)?;
        Ok(FullLattice { ring: ring.clone(), lat })
    }

    /// Wraps a `Z`-lattice already known to be `θ`-stable on both sides.
    pub(crate) fn from_closed(ring: &Arc<CrystalRing>, lat: QLattice) -> Self {
        debug_assert!(is_theta_stable(ring, &lat));
        FullLattice { ring: ring.clone(), lat }
    }

    /// `⊕_g R u_g`.
    pub fn standard(ring: &Arc<CrystalRing>) -> Self {
        FullLattice {
            ring: ring.clone(),
            lat: QLattice::standard(ring.flat_dim()),
        }
    }

    pub fn ring(&self) -> &Arc<CrystalRing> {
        &self.ring
    }

    pub fn qlattice(&self) -> &QLattice {
        &self.lat
    }

    pub fn den(&self) -> &BigInt {
        self.lat.den()
    }

    pub fn int_basis(&self) -> &[Vec<BigInt>] {
        self.lat.int_basis()
    }

    /// `Z`-basis in flattened coordinates.
    pub fn basis(&self) -> QMat {
        self.lat.rows()
    }

    pub fn basis_elements(&self) -> Vec<AElement> {
        self.basis().iter().map(|r| self.ring.from_flat(r)).collect()
    }

    /// Canonical HNF of `den·M` as a left `R`-module, rows over `{u_g}`.
    pub fn r_hnf(&self) -> Vec<Vec<RElem>> {
        let r = self.ring.base();
        let den = BigRational::from_integer(self.den().clone());
        let rows: Vec<Vec<RElem>> = self
            .basis()
            .iter()
            .map(|v| {
                let x = self.ring.from_flat(&v.iter().map(|c| c * &den).collect::<Vec<_>>());
                x.coeffs()
                    .iter()
                    .map(|k| k.to_r().expect("scaled basis is integral"))
                    .collect()
            })
            .collect();
        hnf(r, &rows)
    }

    fn check(&self, other: &FullLattice) -> Result<(), LatticeError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(LatticeError::RingMismatch)
        }
    }

    pub fn member(&self, x: &AElement) -> Result<bool, LatticeError> {
        if x.coeffs().len() != self.ring.order() {
            return Err(LatticeError::RingMismatch);
        }
        Ok(self.lat.contains(&self.ring.to_flat(x)))
    }

    pub fn member_flat(&self, v: &[BigRational]) -> bool {
        self.lat.contains(v)
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &FullLattice) -> Result<bool, LatticeError> {
        self.check(other)?;
        Ok(self.lat.contains_lattice(&other.lat))
    }

    pub fn sum(&self, other: &FullLattice) -> Result<FullLattice, LatticeError> {
        self.check(other)?;
        Ok(FullLattice {
            ring: self.ring.clone(),
            lat: self.lat.sum(&other.lat),
        })
    }

    pub fn intersect(&self, other: &FullLattice) -> Result<FullLattice, LatticeError> {
        self.check(other)?;
        Ok(FullLattice {
            ring: self.ring.clone(),
            lat: self.lat.intersect(&other.lat),
        })
    }

    /// `q·M` for a nonzero rational `q`.
    pub fn scale_rational(&self, q: &BigRational) -> FullLattice {
        FullLattice {
            ring: self.ring.clone(),
            lat: self.lat.scale(q),
        }
    }

    /// `k·M` for nonzero `k ∈ K`; again a bimodule because `R` is commutative.
    pub fn scale(&self, k: &KElem) -> Result<FullLattice, LatticeError> {
        if k.is_zero() {
            return Err(LatticeError::NotFull);
        }
        let x = self.ring.to_flat(&self.ring.scalar(k.clone()));
        let rows: Vec<QVec> = self.basis().iter().map(|m| self.ring.mul_flat(&x, m)).collect();
        Self::from_flat(&self.ring, &rows)
    }

    /// Bimodule generated by `x·M`.
    pub fn left_mul_elem(&self, x: &AElement) -> Result<FullLattice, LatticeError> {
        let xf = self.ring.to_flat(x);
        let rows: Vec<QVec> = self.basis().iter().map(|m| self.ring.mul_flat(&xf, m)).collect();
        Self::from_flat(&self.ring, &rows)
    }

    /// Bimodule generated by `M·x`.
    pub fn right_mul_elem(&self, x: &AElement) -> Result<FullLattice, LatticeError> {
        let xf = self.ring.to_flat(x);
        let rows: Vec<QVec> = self.basis().iter().map(|m| self.ring.mul_flat(m, &xf)).collect();
        Self::from_flat(&self.ring, &rows)
    }

    /// `M·N`, spanned by products of basis vectors.
    pub fn mul(&self, other: &FullLattice) -> Result<FullLattice, LatticeError> {
        self.check(other)?;
        let (a, b) = (self.basis(), other.basis());
        let mut rows = Vec::with_capacity(a.len() * b.len());
        for x in &a {
            for y in &b {
                rows.push(self.ring.mul_flat(x, y));
            }
        }
        let lat = QLattice::from_rows(&rows, self.ring.flat_dim()).ok_or(LatticeError::NotFull)?;
        Ok(FullLattice::from_closed(&self.ring, lat))
    }

    /// `O_l(M) = {x : xM ⊆ M}`.
    pub fn left_order(&self) -> FullLattice {
        let maps: Vec<QMat> = self.basis().iter().map(|m| self.ring.right_mult_matrix(m)).collect();
        self.solve(&maps, &self.lat)
    }

    /// `O_r(M) = {x : Mx ⊆ M}`.
    pub fn right_order(&self) -> FullLattice {
        let maps: Vec<QMat> = self.basis().iter().map(|m| self.ring.left_mult_matrix(m)).collect();
        self.solve(&maps, &self.lat)
    }

    /// `M^{-1}` computed as `{x : Mx ⊆ O_l(M)}`.
    pub fn inverse_lattice(&self) -> FullLattice {
        let maps: Vec<QMat> = self.basis().iter().map(|m| self.ring.left_mult_matrix(m)).collect();
        self.solve(&maps, &self.left_order().lat)
    }

    /// `M^{-1}` by its definition `{x : MxM ⊆ M}`.
    pub fn inverse_definitional(&self) -> FullLattice {
        let b = self.basis();
        let mut maps = Vec::with_capacity(b.len() * b.len());
        for mi in &b {
            let l = self.ring.left_mult_matrix(mi);
            for mj in &b {
                maps.push(mat_mul(&l, &self.ring.right_mult_matrix(mj)));
            }
        }
        self.solve(&maps, &self.lat)
    }

    /// `M^{-1}` computed as `{x : xM ⊆ O_r(M)}`.
    pub fn inverse_right_form(&self) -> FullLattice {
        let maps: Vec<QMat> = self.basis().iter().map(|m| self.ring.right_mult_matrix(m)).collect();
        self.solve(&maps, &self.right_order().lat)
    }

    fn solve(&self, maps: &[QMat], target: &QLattice) -> FullLattice {
        let cons: Vec<(&[QVec], &QLattice)> = maps.iter().map(|t| (t.as_slice(), target)).collect();
        // M is full and A is unital, so the stacked map is injective.
        let lat = preimage(self.ring.flat_dim(), &cons).expect("stacked system has full rank");
        FullLattice::from_closed(&self.ring, lat)
    }

    pub fn contains_one(&self) -> bool {
        self.lat.contains(&self.ring.flat_one())
    }

    pub fn is_order(&self) -> bool {
        if !self.contains_one() {
            return false;
        }
        let b = self.basis();
        b.iter().all(|x| b.iter().all(|y| self.lat.contains(&self.ring.mul_flat(x, y))))
    }

    /// `ΛM ⊆ M` and `MΛ ⊆ M`.
    pub fn is_two_sided_ideal_of(&self, order: &FullLattice) -> Result<bool, LatticeError> {
        Ok(self.is_left_module_of(order)? && self.is_right_module_of(order)?)
    }

    /// `ΛM ⊆ M`.
    pub fn is_left_module_of(&self, order: &FullLattice) -> Result<bool, LatticeError> {
        self.check(order)?;
        Ok(self.closed_under(order, true))
    }

    /// `MΛ ⊆ M`.
    pub fn is_right_module_of(&self, order: &FullLattice) -> Result<bool, LatticeError> {
        self.check(order)?;
        Ok(self.closed_under(order, false))
    }

    fn closed_under(&self, order: &FullLattice, left: bool) -> bool {
        let (ob, mb) = (order.basis(), self.basis());
        ob.iter().all(|l| {
            mb.iter().all(|m| {
                let p = if left { self.ring.mul_flat(l, m) } else { self.ring.mul_flat(m, l) };
                self.lat.contains(&p)
            })
        })
    }

    /// Least positive integers `(r, s)` with `rM ⊆ N` and `Ms ⊆ N`.
    ///
    /// Rational integers are central, so both coincide.
    pub fn scaling_witness(&self, other: &FullLattice) -> Result<(BigInt, BigInt), LatticeError> {
        self.check(other)?;
        let r = self.lat.scaling_into(&other.lat);
        Ok((r.clone(), r))
    }

    /// Generalized index `[N : M] = vol(M)/vol(N)` of `self = M` relative to `other = N`.
    pub fn index_in(&self, other: &FullLattice) -> Result<BigRational, LatticeError> {
        self.check(other)?;
        Ok(self.lat.volume() / other.lat.volume())
    }

    /// `[N : M]` as an integer when `M ⊆ N`.
    pub fn int_index_in(&self, other: &FullLattice) -> Result<BigInt, LatticeError> {
        let q = self.index_in(other)?;
        debug_assert!(q.is_integer());
        Ok(q.to_integer())
    }

    pub fn is_integral_in(&self, order: &FullLattice) -> Result<bool, LatticeError> {
        order.contains(self)
    }

    /// Smallest positive integer `k` with `k·Λ ⊆ M`, when `M` is a sublattice of `Λ`.
    pub fn exponent_in(&self, order: &FullLattice) -> Result<BigInt, LatticeError> {
        order.scaling_witness(self).map(|(r, _)| r)
    }

    pub fn is_one(&self) -> bool {
        self.lat.den().is_one()
            && self
                .lat
                .int_basis()
                .iter()
                .enumerate()
                .all(|(i, r)| r.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() }))
    }
}

fn is_theta_stable(ring: &CrystalRing, lat: &QLattice) -> bool {
    let theta = ring.flat_theta();
    lat.rows()
        .iter()
        .all(|v| lat.contains(&ring.mul_flat(&theta, v)) && lat.contains(&ring.mul_flat(v, &theta)))
}

impl fmt::Display for FullLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .r_hnf()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "(1/{})·{{{}}}", self.den(), rows.join(", "))
    }
}
