//! Brute-force enumeration at desk scale, used to cross-check the main algorithms.
//!
//! Everything here works on finite quotients `L/pL` or `(1/p)L/L` written in the
//! lattice's own basis: a candidate is an `F_p`-subspace closed under a list of
//! integer matrices, grown one vector at a time.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::exactalg::is_prime_u64;
use crate::exactalg::linalg::{all_vectors, inverse, mat_mul, modp, FpSpace, QMat, QVec};
use crate::lattice::{FullLattice, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration budget of {0} candidates exceeded")]
    BudgetExceeded(u64),
    #[error("budget bounds must be positive")]
    InvalidBudget,
    #[error("lattice is not an order")]
    NotOrder,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumBudget {
    pub max_index: u64,
    pub max_candidates: u64,
}

impl EnumBudget {
    pub fn new(max_index: u64, max_candidates: u64) -> Result<Self, OracleError> {
        if max_index == 0 || max_candidates == 0 {
            return Err(OracleError::InvalidBudget);
        }
        Ok(EnumBudget { max_index, max_candidates })
    }

    /// Index bound with a generous candidate allowance.
    pub fn index(max_index: u64) -> Self {
        EnumBudget { max_index: max_index.max(1), max_candidates: 2_000_000 }
    }
}

struct Counter {
    used: u64,
    limit: u64,
}

impl Counter {
    fn new(b: &EnumBudget) -> Self {
        Counter { used: 0, limit: b.max_candidates }
    }

    fn tick(&mut self) -> Result<(), OracleError> {
        self.used += 1;
        if self.used > self.limit {
            return Err(OracleError::BudgetExceeded(self.limit));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Flat maps `T` rewritten in the basis of `lat` and reduced mod `p`.
fn action_mod_p(lat: &FullLattice, maps: &[QMat], p: u64) -> Vec<Vec<Vec<u64>>> {
    let b = lat.basis();
    let binv = inverse(&b).expect("full rank");
    maps.iter()
        .map(|t| {
            mat_mul(&mat_mul(&b, t), &binv)
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|x| {
                            assert!(x.is_integer(), "lattice is not stable under the action");
                            modp(&x.to_integer(), p)
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn apply(v: &[u64], m: &[Vec<u64>], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; m[0].len()];
    for (x, row) in v.iter().zip(m) {
        if *x != 0 {
            for (o, y) in out.iter_mut().zip(row) {
                *o = (*o + x * y) % p;
            }
        }
    }
    out
}

fn closure(s: &FpSpace, v: Vec<u64>, mats: &[Vec<Vec<u64>>]) -> FpSpace {
    let p = s.p();
    let mut space = s.clone();
    let mut stack = vec![v];
    while let Some(w) = stack.pop() {
        let w = space.reduce(&w);
        if space.insert(w.clone()) {
            stack.extend(mats.iter().map(|m| apply(&w, m, p)));
        }
    }
    space
}

/// Nonzero vectors on the non-pivot coordinates of `s`, one per line.
fn complement_lines(s: &FpSpace) -> impl Iterator<Item = Vec<u64>> + '_ {
    let pivots: Vec<usize> = s.basis().iter().map(|r| r.iter().position(|&x| x != 0).unwrap()).collect();
    let free: Vec<usize> = (0..s.ambient()).filter(|c| !pivots.contains(c)).collect();
    let dim = s.ambient();
    all_vectors(s.p(), free.len())
        .filter(|w| w.iter().find(|&&x| x != 0) == Some(&1))
        .map(move |w| {
            let mut v = vec![0u64; dim];
            for (c, x) in free.iter().zip(w) {
                v[*c] = x;
            }
            v
        })
}

/// All subspaces of `F_p^dim` of dimension at most `max_dim` closed under `mats`, zero included.
fn invariant_subspaces(
    mats: &[Vec<Vec<u64>>],
    p: u64,
    dim: usize,
    max_dim: usize,
    counter: &mut Counter,
) -> Result<Vec<FpSpace>, OracleError> {
    let zero = FpSpace::zero(p, dim);
    let mut seen: HashSet<FpSpace> = HashSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    let mut out = Vec::new();
    while let Some(s) = queue.pop_front() {
        if s.dimension() < max_dim {
            for v in complement_lines(&s) {
                counter.tick()?;
                let t = closure(&s, v, mats);
                if t.dimension() <= max_dim && seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
        out.push(s);
    }
    out.sort_by(|a, b| (a.dimension(), a.basis()).cmp(&(b.dimension(), b.basis())));
    Ok(out)
}

fn lift(lat: &FullLattice, s: &FpSpace) -> Vec<QVec> {
    let b = lat.basis();
    s.basis()
        .iter()
        .map(|w| {
            let mut v = vec![BigRational::zero(); b.len()];
            for (k, x) in w.iter().enumerate() {
                if *x != 0 {
                    let c = BigRational::from_integer(BigInt::from(*x));
                    for (o, y) in v.iter_mut().zip(&b[k]) {
                        *o += &c * y;
                    }
                }
            }
            v
        })
        .collect()
}

/// `pL + lift(S)`.
fn sublattice(lat: &FullLattice, s: &FpSpace) -> Result<FullLattice, OracleError> {
    let p = BigRational::from_integer(BigInt::from(s.p()));
    let mut gens: Vec<QVec> = lat.basis().iter().map(|r| r.iter().map(|x| x * &p).collect()).collect();
    gens.extend(lift(lat, s));
    Ok(FullLattice::from_flat(lat.ring(), &gens)?)
}

/// `L + (1/p)·lift(S)`.
fn superlattice(lat: &FullLattice, s: &FpSpace) -> Result<FullLattice, OracleError> {
    let p = BigRational::from_integer(BigInt::from(s.p()));
    let mut gens = lat.basis();
    gens.extend(lift(lat, s).into_iter().map(|v| v.into_iter().map(|x| x / &p).collect::<QVec>()));
    Ok(FullLattice::from_flat(lat.ring(), &gens)?)
}

fn bimodule_maps(lat: &FullLattice) -> Vec<QMat> {
    let ring = lat.ring();
    let t = ring.flat_theta();
    vec![ring.left_mult_matrix(&t), ring.right_mult_matrix(&t)]
}

fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| is_prime_u64(p)).collect()
}

fn max_power(p: u64, bound: u64) -> usize {
    let mut k = 0;
    let mut x = 1u64;
    while x.saturating_mul(p) <= bound {
        x *= p;
        k += 1;
    }
    k
}

/// R-bimodule lattices strictly containing `M` with index at most `max_index`, sorted.
pub fn enumerate_superlattices(m: &FullLattice, budget: &EnumBudget) -> Result<Vec<FullLattice>, OracleError> {
    let mut counter = Counter::new(budget);
    let mut found: BTreeSet<FullLattice> = BTreeSet::new();
    let mut queue: VecDeque<(FullLattice, u64)> = VecDeque::from([(m.clone(), 1)]);
    while let Some((lat, idx)) = queue.pop_front() {
        let room = budget.max_index / idx;
        for p in primes_up_to(room) {
            let mats = action_mod_p(&lat, &bimodule_maps(&lat), p);
            let max_dim = max_power(p, room);
            for s in invariant_subspaces(&mats, p, lat.basis().len(), max_dim, &mut counter)? {
                if s.dimension() == 0 {
                    continue;
                }
                let n = superlattice(&lat, &s)?;
                let index = idx * p.pow(s.dimension() as u32);
                if found.insert(n.clone()) {
                    queue.push_back((n, index));
                }
            }
        }
    }
    Ok(found.into_iter().collect())
}

fn order_maps(order: &FullLattice, left: bool, right: bool) -> Vec<QMat> {
    let ring = order.ring();
    let mut maps = Vec::new();
    for b in order.basis() {
        if left {
            maps.push(ring.left_mult_matrix(&b));
        }
        if right {
            maps.push(ring.right_mult_matrix(&b));
        }
    }
    maps
}

/// Two-sided ideals of `Λ/pΛ`, returned as their preimages `pΛ ⊆ I ⊆ Λ`, sorted by size.
pub fn enumerate_two_sided_ideals_mod_p(
    order: &FullLattice,
    p: u64,
    budget: &EnumBudget,
) -> Result<Vec<FullLattice>, OracleError> {
    if !is_prime_u64(p) {
        return Err(OracleError::NotPrime(p));
    }
    if !order.is_order() {
        return Err(OracleError::NotOrder);
    }
    let mut counter = Counter::new(budget);
    let dim = order.basis().len();
    let mats = action_mod_p(order, &order_maps(order, true, true), p);
    invariant_subspaces(&mats, p, dim, dim, &mut counter)?
        .iter()
        .map(|s| sublattice(order, s))
        .collect()
}

/// `Λ` is not contained in any larger order of index at most `max_index`.
pub fn certify_maximal(order: &FullLattice, budget: &EnumBudget) -> Result<bool, OracleError> {
    if !order.is_order() {
        return Err(OracleError::NotOrder);
    }
    Ok(!enumerate_superlattices(order, budget)?.iter().any(FullLattice::is_order))
}

/// Orders strictly containing `Λ` with index at most `max_index`.
pub fn enumerate_overorders(order: &FullLattice, budget: &EnumBudget) -> Result<Vec<FullLattice>, OracleError> {
    if !order.is_order() {
        return Err(OracleError::NotOrder);
    }
    Ok(enumerate_superlattices(order, budget)?.into_iter().filter(FullLattice::is_order).collect())
}

fn exponent(m: &FullLattice, order: &FullLattice) -> u64 {
    m.exponent_in(order).ok().and_then(|e| e.to_u64()).unwrap_or(u64::MAX)
}

/// Proper integral one-sided Ideals `kΛ ⊆ M ⊊ Λ` with `k ≤ max_exponent` a product of `primes`.
///
/// `M` is built by prime steps `pL ⊆ M ⊊ L`; the step at `p` is skipped when it
/// cannot keep the exponent within the bound, since it raises the `p`-part to at least `p`.
pub fn enumerate_one_sided_ideals(
    order: &FullLattice,
    side: Side,
    max_exponent: u64,
    primes: &[u64],
    budget: &EnumBudget,
) -> Result<Vec<FullLattice>, OracleError> {
    if let Some(&p) = primes.iter().find(|&&p| !is_prime_u64(p)) {
        return Err(OracleError::NotPrime(p));
    }
    if !order.is_order() {
        return Err(OracleError::NotOrder);
    }
    let ring = order.ring();
    let theta = ring.flat_theta();
    let mut maps = order_maps(order, side == Side::Left, side == Side::Right);
    maps.push(match side {
        Side::Left => ring.right_mult_matrix(&theta),
        Side::Right => ring.left_mult_matrix(&theta),
    });
    let mut counter = Counter::new(budget);
    let mut found: BTreeSet<FullLattice> = BTreeSet::new();
    let mut queue = VecDeque::from([order.clone()]);
    while let Some(lat) = queue.pop_front() {
        let e = exponent(&lat, order);
        for &p in primes {
            let floor = if e.is_multiple_of(p) { e } else { e.saturating_mul(p) };
            if floor > max_exponent {
                continue;
            }
            let mats = action_mod_p(&lat, &maps, p);
            let dim = lat.basis().len();
            for s in invariant_subspaces(&mats, p, dim, dim, &mut counter)? {
                if s.is_full() {
                    continue;
                }
                let m = sublattice(&lat, &s)?;
                if exponent(&m, order) <= max_exponent && found.insert(m.clone()) {
                    queue.push_back(m);
                }
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Maximal elements among the proper Ideals in `list` containing `pΛ`.
pub fn maximal_above(order: &FullLattice, list: &[FullLattice], p: u64) -> Vec<FullLattice> {
    let floor = order.scale_rational(&BigRational::from_integer(BigInt::from(p)));
    let above: Vec<&FullLattice> = list
        .iter()
        .filter(|m| *m != order && m.contains(&floor).unwrap_or(false))
        .collect();
    above
        .iter()
        .filter(|m| !above.iter().any(|n| n != *m && n.contains(m).unwrap_or(false)))
        .map(|m| (*m).clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::fixtures;
    use crate::exactalg::linalg::q;
    use crate::lattice::tests::{hurwitz, ring};
    use crate::orders::{is_maximal, maximize, primes_above, radical_mod_p, OrderHandle};

    #[test]
    fn superlattices() {
        let t3 = ring(fixtures::t3());
        let l0 = FullLattice::standard(&t3);
        let h = hurwitz(&t3);
        let sup = enumerate_superlattices(&l0, &EnumBudget::index(2)).unwrap();
        assert!(sup.contains(&h));
        let t1 = ring(fixtures::t1());
        let z = FullLattice::standard(&t1);
        let sup = enumerate_superlattices(&z, &EnumBudget::index(3)).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        let third = BigRational::new(1.into(), 3.into());
        assert_eq!(sup, {
            let mut v = vec![z.scale_rational(&half), z.scale_rational(&third)];
            v.sort();
            v
        });
        assert!(enumerate_superlattices(&z, &EnumBudget::index(1)).unwrap().is_empty());
        // Z/4 and (Z/2)² quotients are both reached
        assert_eq!(enumerate_superlattices(&z, &EnumBudget::index(4)).unwrap().len(), 3);
    }

    #[test]
    fn budgets() {
        let t3 = ring(fixtures::t3());
        let l0 = FullLattice::standard(&t3);
        let tight = EnumBudget::new(4, 10).unwrap();
        assert_eq!(enumerate_superlattices(&l0, &tight).unwrap_err(), OracleError::BudgetExceeded(10));
        assert_eq!(certify_maximal(&l0, &tight).unwrap_err(), OracleError::BudgetExceeded(10));
        assert_eq!(EnumBudget::new(0, 5).unwrap_err(), OracleError::InvalidBudget);
    }

    #[test]
    fn two_sided_mod_p() {
        let t3 = ring(fixtures::t3());
        let h = hurwitz(&t3);
        let ideals = enumerate_two_sided_ideals_mod_p(&h, 3, &EnumBudget::index(1)).unwrap();
        assert_eq!(ideals, vec![h.scale_rational(&q(3)), h.clone()]);
        let l0 = FullLattice::standard(&t3);
        let ideals = enumerate_two_sided_ideals_mod_p(&l0, 2, &EnumBudget::index(1)).unwrap();
        assert!(ideals.contains(&radical_mod_p(&l0, 2).unwrap()));
        let t1 = ring(fixtures::t1());
        let z = FullLattice::standard(&t1);
        let ideals = enumerate_two_sided_ideals_mod_p(&z, 5, &EnumBudget::index(1)).unwrap();
        assert_eq!(ideals, vec![z.scale_rational(&q(5)), z.clone()]);
        assert_eq!(enumerate_two_sided_ideals_mod_p(&z, 6, &EnumBudget::index(1)).unwrap_err(), OracleError::NotPrime(6));
    }

    #[test]
    fn maximality_certificates() {
        let t3 = ring(fixtures::t3());
        let h = hurwitz(&t3);
        let l0 = FullLattice::standard(&t3);
        assert!(certify_maximal(&h, &EnumBudget::index(4)).unwrap());
        assert!(!certify_maximal(&l0, &EnumBudget::index(2)).unwrap());
        assert_eq!(enumerate_overorders(&l0, &EnumBudget::index(4)).unwrap(), vec![h.clone()]);
        let t1 = ring(fixtures::t1());
        assert!(certify_maximal(&FullLattice::standard(&t1), &EnumBudget::index(5)).unwrap());
        for c in [fixtures::t2(), fixtures::u2_eq_5()] {
            let a = ring(c);
            let std = FullLattice::standard(&a);
            let over = enumerate_overorders(&std, &EnumBudget::index(4)).unwrap();
            assert_eq!(over, vec![maximize(&std).unwrap().lattice().clone()]);
            assert!(certify_maximal(&over[0], &EnumBudget::index(4)).unwrap());
            assert!(!is_maximal(&std).unwrap());
        }
    }

    #[test]
    fn primes_match_enumeration() {
        let t3 = ring(fixtures::t3());
        let h = OrderHandle::maximal(hurwitz(&t3)).unwrap();
        let t2 = ring(fixtures::t2());
        let zz = maximize(&FullLattice::standard(&t2)).unwrap();
        for (ord, p) in [(&h, 2u64), (&h, 3), (&zz, 2), (&zz, 3)] {
            let all = enumerate_two_sided_ideals_mod_p(ord.lattice(), p, &EnumBudget::index(1)).unwrap();
            let maxi = maximal_above(ord.lattice(), &all, p);
            let mut expected: Vec<FullLattice> = primes_above(ord, p).unwrap().into_iter().map(|x| x.ideal).collect();
            expected.sort();
            assert_eq!(maxi, expected);
            // Λ/P is simple: only P and Λ lie between
            for pr in &expected {
                let between: Vec<_> = all.iter().filter(|x| x.contains(pr).unwrap()).collect();
                assert_eq!(between.len(), 2);
            }
        }
    }

    #[test]
    fn left_ideals_of_hurwitz() {
        let t3 = ring(fixtures::t3());
        let h = hurwitz(&t3);
        let budget = EnumBudget::index(1);
        // 2-adically all powers of P2; at 3 only 3H and 9H since i is inert; at 5 two eigenlines; 7H
        let ls = enumerate_one_sided_ideals(&h, Side::Left, 9, &[2, 3, 5, 7], &budget).unwrap();
        assert!(enumerate_one_sided_ideals(&h, Side::Left, 9, &[7], &EnumBudget::new(1, 100).unwrap()).is_err());
        assert_eq!(ls.len(), 14);
        for m in &ls {
            assert!(m.is_left_module_of(&h).unwrap());
            assert_ne!(m.inverse_lattice(), h);
        }
        let rs = enumerate_one_sided_ideals(&h, Side::Right, 9, &[2, 3, 5, 7], &budget).unwrap();
        assert_eq!(rs.len(), 14);
        // maximal left Ideals above 2 and 5 are maximal right Ideals of their right orders
        for p in [2u64, 5] {
            for n in maximal_above(&h, &ls, p) {
                let r = n.right_order();
                let rights = enumerate_one_sided_ideals(&r, Side::Right, p, &[p], &budget).unwrap();
                let above: Vec<_> = rights.iter().filter(|x| x.contains(&n).unwrap()).collect();
                assert_eq!(above, vec![&n]);
            }
        }
    }
}
