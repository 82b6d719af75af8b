//! Maximal orders and their Ideals: maximization, primes, two-sided and
//! left factorization, proper products and the conjugation map between the
//! Ideal groups of two maximal orders.

mod algebra;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::lattice::{FullLattice, LatticeError};

pub(crate) use algebra::prime_support;
use algebra::OrderAlgebra;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdersError {
    #[error("lattice is not an order")]
    NotOrder,
    #[error("order is not maximal")]
    NotMaximal,
    #[error("lattice is not a two-sided Ideal of the order")]
    NotTwoSided,
    #[error("lattice is not an integral left Ideal of the order")]
    NotLeftIdeal,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Evidence that an order is maximal: the discriminant and the primes at
/// which the maximization loop was run to a fixpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalCertificate {
    pub discriminant: BigInt,
    pub primes: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderHandle {
    lattice: FullLattice,
    certificate: Option<MaximalCertificate>,
}

impl OrderHandle {
    pub fn new(lattice: FullLattice) -> Result<Self, OrdersError> {
        if !lattice.is_order() {
            return Err(OrdersError::NotOrder);
        }
        Ok(OrderHandle {
            lattice,
            certificate: None,
        })
    }

    /// Wraps `lattice` with a certificate if it is a maximal order.
    pub fn maximal(lattice: FullLattice) -> Result<Self, OrdersError> {
        let h = maximize(&lattice)?;
        if h.lattice != lattice {
            return Err(OrdersError::NotMaximal);
        }
        Ok(h)
    }

    pub fn lattice(&self) -> &FullLattice {
        &self.lattice
    }

    pub fn certificate(&self) -> Option<&MaximalCertificate> {
        self.certificate.as_ref()
    }

    pub fn is_certified(&self) -> bool {
        self.certificate.is_some()
    }

    fn require_maximal(&self) -> Result<(), OrdersError> {
        if self.certificate.is_none() {
            return Err(OrdersError::NotMaximal);
        }
        Ok(())
    }
}

/// A maximal two-sided Ideal of a maximal order, with the rational prime below it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeIdeal {
    pub below: u64,
    pub ideal: FullLattice,
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P[{}]{}", self.below, self.ideal)
    }
}

/// `Π P^e` over distinct primes, sorted canonically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealFactorization {
    pub factors: Vec<(PrimeIdeal, i64)>,
    pub product: FullLattice,
}

impl IdealFactorization {
    /// Multiply the factors back together in the stored order.
    pub fn reassemble(&self, order: &FullLattice) -> Result<FullLattice, LatticeError> {
        reassemble(order, self.factors.iter().map(|(p, e)| (&p.ideal, *e)))
    }

    pub fn total_exponent(&self) -> i64 {
        self.factors.iter().map(|(_, e)| e).sum()
    }
}

/// `Π X^e` in the given order; negative exponents use the inverse.
pub fn reassemble<'a>(
    order: &FullLattice,
    factors: impl IntoIterator<Item = (&'a FullLattice, i64)>,
) -> Result<FullLattice, LatticeError> {
    let mut acc = order.clone();
    for (x, e) in factors {
        let base = if e < 0 { x.inverse_lattice() } else { x.clone() };
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
    }
    Ok(acc)
}

/// `|det(Tr(b_i b_j))|` over a `Z`-basis of the order.
pub fn discriminant(order: &FullLattice) -> Result<BigInt, OrdersError> {
    if !order.is_order() {
        return Err(OrdersError::NotOrder);
    }
    Ok(OrderAlgebra::new(order).discriminant().abs())
}

/// The lift `J ⊇ pΛ` of the Jacobson radical of `Λ/pΛ`.
pub fn radical_mod_p(order: &FullLattice, p: u64) -> Result<FullLattice, OrdersError> {
    check_prime(p)?;
    if !order.is_order() {
        return Err(OrdersError::NotOrder);
    }
    Ok(OrderAlgebra::new(order).radical(p))
}

fn check_prime(p: u64) -> Result<(), OrdersError> {
    if !crate::exactalg::is_prime_u64(p) {
        return Err(OrdersError::NotPrime(p));
    }
    Ok(())
}

/// Maximal two-sided ideals of `Λ` containing `pΛ`, sorted.
fn maximal_ideals(alg: &OrderAlgebra, p: u64) -> Vec<FullLattice> {
    let jbar = alg.radical_space(p);
    let mut out: Vec<FullLattice> = alg
        .maximal_ideal_spaces(p, &jbar)
        .iter()
        .map(|s| alg.lift(s))
        .collect();
    out.sort();
    out
}

/// A maximal order containing `order`.
///
/// For each prime dividing the discriminant, `Λ` is replaced by the left
/// order of its `p`-radical until that stabilizes; then by the left or right
/// order of a maximal ideal above `p` while one of those is larger.
pub fn maximize(order: &FullLattice) -> Result<OrderHandle, OrdersError> {
    let disc = discriminant(order)?;
    let primes = prime_support(&disc);
    let mut lam = order.clone();
    for &p in &primes {
        'outer: loop {
            let alg = OrderAlgebra::new(&lam);
            let o = alg.radical(p).left_order();
            if o != lam {
                lam = o;
                continue;
            }
            for m in maximal_ideals(&alg, p) {
                for o in [m.left_order(), m.right_order()] {
                    if o != lam {
                        lam = o;
                        continue 'outer;
                    }
                }
            }
            break;
        }
    }
    let discriminant = discriminant(&lam)?;
    Ok(OrderHandle {
        lattice: lam,
        certificate: Some(MaximalCertificate { discriminant, primes }),
    })
}

pub fn is_maximal(order: &FullLattice) -> Result<bool, OrdersError> {
    Ok(maximize(order)?.lattice == *order)
}

/// The maximal two-sided Ideals `P ⊇ pΛ` of a maximal order.
pub fn primes_above(order: &OrderHandle, p: u64) -> Result<Vec<PrimeIdeal>, OrdersError> {
    order.require_maximal()?;
    check_prime(p)?;
    let alg = OrderAlgebra::new(&order.lattice);
    Ok(maximal_ideals(&alg, p)
        .into_iter()
        .map(|ideal| PrimeIdeal { below: p, ideal })
        .collect())
}

fn check_two_sided(order: &FullLattice, m: &FullLattice) -> Result<(), OrdersError> {
    if !m.is_two_sided_ideal_of(order)? {
        return Err(OrdersError::NotTwoSided);
    }
    Ok(())
}

/// Prime factorization of a two-sided Ideal, dividing out the smallest
/// available prime first.
pub fn factor_two_sided(order: &OrderHandle, m: &FullLattice) -> Result<IdealFactorization, OrdersError> {
    factor_two_sided_with(order, m, |_| 0)
}

/// As [`factor_two_sided`], with `choose` picking which of the primes
/// currently containing the ideal is divided out next. Candidates are passed
/// sorted by `(p, canonical basis)`.
pub fn factor_two_sided_with(
    order: &OrderHandle,
    m: &FullLattice,
    mut choose: impl FnMut(&[PrimeIdeal]) -> usize,
) -> Result<IdealFactorization, OrdersError> {
    order.require_maximal()?;
    let lam = &order.lattice;
    check_two_sided(lam, m)?;
    // a fractional Ideal is d^{-1}·(dM) with dM integral
    let d = m.qlattice().scaling_into(lam.qlattice());
    let mut counts: BTreeMap<PrimeIdeal, i64> = BTreeMap::new();
    let mut cache: BTreeMap<u64, Vec<PrimeIdeal>> = BTreeMap::new();
    let integral = m.scale_rational(&BigRational::from_integer(d.clone()));
    divide_out(order, &integral, 1, &mut counts, &mut cache, &mut choose)?;
    if !d.is_one() {
        let dl = lam.scale_rational(&BigRational::from_integer(d));
        divide_out(order, &dl, -1, &mut counts, &mut cache, &mut choose)?;
    }
    let factors: Vec<(PrimeIdeal, i64)> = counts.into_iter().filter(|(_, e)| *e != 0).collect();
    Ok(IdealFactorization {
        product: reassemble(lam, factors.iter().map(|(p, e)| (&p.ideal, *e)))?,
        factors,
    })
}

fn divide_out(
    order: &OrderHandle,
    m: &FullLattice,
    sign: i64,
    counts: &mut BTreeMap<PrimeIdeal, i64>,
    cache: &mut BTreeMap<u64, Vec<PrimeIdeal>>,
    choose: &mut impl FnMut(&[PrimeIdeal]) -> usize,
) -> Result<(), OrdersError> {
    let lam = &order.lattice;
    let mut cur = m.clone();
    while cur != *lam {
        let index = cur.int_index_in(lam)?;
        let mut candidates = Vec::new();
        for p in prime_support(&index) {
            if let Entry::Vacant(v) = cache.entry(p) {
                v.insert(primes_above(order, p)?);
            }
            for pr in &cache[&p] {
                if pr.ideal.contains(&cur)? {
                    candidates.push(pr.clone());
                }
            }
        }
        assert!(!candidates.is_empty(), "proper two-sided Ideal lies in no prime");
        let pick = choose(&candidates).min(candidates.len() - 1);
        let pr = candidates.swap_remove(pick);
        cur = cur.mul(&pr.ideal.inverse_lattice())?;
        *counts.entry(pr).or_insert(0) += sign;
    }
    Ok(())
}

/// A proper product of maximal integral left Ideals equal to `m`.
///
/// Peels a maximal left Ideal `N ⊇ M` of `Λ`, then continues with
/// `N^{-1}M` inside `O_r(N)`.
pub fn factor_left_ideal(order: &OrderHandle, m: &FullLattice) -> Result<Vec<FullLattice>, OrdersError> {
    order.require_maximal()?;
    let lam = order.lattice.clone();
    if !lam.contains(m)? || !m.is_left_module_of(&lam)? {
        return Err(OrdersError::NotLeftIdeal);
    }
    let mut factors = Vec::new();
    let (mut lam, mut cur) = (lam, m.clone());
    while cur != lam {
        let n = maximal_left_ideal_over(&lam, &cur)?;
        let next = n.inverse_lattice().mul(&cur)?;
        lam = n.right_order();
        cur = next;
        factors.push(n);
        if !lam.contains(&cur)? {
            return Err(OrdersError::NotMaximal);
        }
    }
    Ok(factors)
}

/// A maximal proper left Ideal `N` of `Λ` (closed under right `R`) with `M ⊆ N`.
pub fn maximal_left_ideal_over(order: &FullLattice, m: &FullLattice) -> Result<FullLattice, OrdersError> {
    let index = m.int_index_in(order)?;
    let p = *prime_support(&index).first().ok_or(OrdersError::NotLeftIdeal)?;
    let alg = OrderAlgebra::new(order);
    let start = alg.reduce_lattice(m, p).add(&alg.radical_space(p));
    let s = alg.maximal_left_submodule(&start).ok_or(OrdersError::NotLeftIdeal)?;
    Ok(alg.lift(&s))
}

/// `O_r(M_i) = O_l(M_{i+1})` for consecutive factors.
pub fn proper_product_check(factors: &[FullLattice]) -> bool {
    factors.windows(2).all(|w| w[0].right_order() == w[1].left_order())
}

/// `M_{12} = Λ1·Λ2`, a normal Ideal with left order `Λ1` and right order `Λ2`.
pub fn connect_orders(a: &OrderHandle, b: &OrderHandle) -> Result<FullLattice, OrdersError> {
    a.require_maximal()?;
    b.require_maximal()?;
    let m = a.lattice.mul(&b.lattice)?;
    if m.left_order() != a.lattice || m.right_order() != b.lattice {
        return Err(OrdersError::NotMaximal);
    }
    Ok(m)
}

/// `X ↦ M^{-1}XM` for `M = Λ1·Λ2`.
pub fn phi_map(a: &OrderHandle, b: &OrderHandle, x: &FullLattice) -> Result<FullLattice, OrdersError> {
    let m = connect_orders(a, b)?;
    phi_map_via(&a.lattice, &m, x)
}

/// `X ↦ M^{-1}XM` for a given connecting Ideal `M` with left order `Λ1`.
pub fn phi_map_via(source: &FullLattice, m: &FullLattice, x: &FullLattice) -> Result<FullLattice, OrdersError> {
    check_two_sided(source, x)?;
    Ok(m.inverse_lattice().mul(x)?.mul(m)?)
}

/// For normal Ideals `M ⊆ N`, the integral Ideals `B = M(Λ3·M)^{-1}` and
/// `C = N^{-1}M` with `M = B·N·C`, where `Λ3 = O_l(N)`.
pub fn sandwich_factors(m: &FullLattice, n: &FullLattice) -> Result<(FullLattice, FullLattice), OrdersError> {
    let l3 = n.left_order();
    let b = m.mul(&l3.mul(m)?.inverse_lattice())?;
    let c = n.inverse_lattice().mul(m)?;
    Ok((b, c))
}

#[cfg(test)]
mod tests;
