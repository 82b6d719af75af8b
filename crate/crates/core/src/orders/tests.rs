use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::*;
use crate::crystal::{fixtures, CrystalRing};
use crate::exactalg::linalg::q;
use crate::lattice::tests::{el, hurwitz, kq, ring};

fn quaternions() -> (Arc<CrystalRing>, FullLattice, OrderHandle) {
    let a = ring(fixtures::t3());
    let l0 = FullLattice::standard(&a);
    let h = OrderHandle::maximal(hurwitz(&a)).unwrap();
    (a, l0, h)
}

fn half_idempotent_order(a: &Arc<CrystalRing>) -> FullLattice {
    FullLattice::from_generators(a, &[a.one(), el(a, &[(1, 0, 2), (1, 0, 2)])]).unwrap()
}

#[test]
fn discriminants() {
    let t1 = ring(fixtures::t1());
    assert_eq!(discriminant(&FullLattice::standard(&t1)).unwrap(), BigInt::from(1));
    let t2 = ring(fixtures::t2());
    assert_eq!(discriminant(&FullLattice::standard(&t2)).unwrap(), BigInt::from(4));
    let (_, l0, h) = quaternions();
    // trace form diag(4,-4,-4,-4) on 1, i, j, ij
    assert_eq!(discriminant(&l0).unwrap(), BigInt::from(256));
    // index 2 divides it by 2²
    assert_eq!(discriminant(h.lattice()).unwrap(), BigInt::from(64));
    assert!(discriminant(&l0.scale_rational(&q(2))).is_err());
}

#[test]
fn radicals() {
    let (a, l0, h) = quaternions();
    let j = radical_mod_p(&l0, 2).unwrap();
    let expected = FullLattice::from_generators(
        &a,
        &[
            el(&a, &[(1, 1, 1), (0, 0, 1)]),
            el(&a, &[(0, 0, 1), (1, 1, 1)]),
            el(&a, &[(1, 0, 1), (1, 0, 1)]),
            el(&a, &[(2, 0, 1), (0, 0, 1)]),
        ],
    )
    .unwrap();
    assert_eq!(j, expected);
    assert_eq!(radical_mod_p(h.lattice(), 3).unwrap(), h.lattice().scale_rational(&q(3)));
    let t1 = ring(fixtures::t1());
    let z = FullLattice::standard(&t1);
    assert_eq!(radical_mod_p(&z, 5).unwrap(), z.scale_rational(&q(5)));
    assert_eq!(radical_mod_p(&z, 4).unwrap_err(), OrdersError::NotPrime(4));
}

#[test]
fn maximize_fixtures() {
    let (a, l0, h) = quaternions();
    let m = maximize(&l0).unwrap();
    assert_eq!(m.lattice(), h.lattice());
    assert_eq!(l0.int_index_in(m.lattice()).unwrap(), BigInt::from(2));
    assert_eq!(maximize(m.lattice()).unwrap().lattice(), m.lattice());
    assert!(!is_maximal(&l0).unwrap());
    assert!(is_maximal(h.lattice()).unwrap());
    assert!(OrderHandle::maximal(l0.clone()).is_err());
    let _ = a;
    for c in [fixtures::t2(), fixtures::u2_eq_5()] {
        let r = ring(c);
        let std = FullLattice::standard(&r);
        let m = maximize(&std).unwrap();
        assert_eq!(*m.lattice(), half_idempotent_order(&r));
        assert_eq!(std.int_index_in(m.lattice()).unwrap(), BigInt::from(2));
    }
    let t1 = ring(fixtures::t1());
    assert!(is_maximal(&FullLattice::standard(&t1)).unwrap());
}

#[test]
fn primes_of_hurwitz() {
    let (_, _, h) = quaternions();
    let hl = h.lattice();
    let p2 = primes_above(&h, 2).unwrap();
    assert_eq!(p2.len(), 1);
    assert_eq!(p2[0].ideal, hl.scale(&kq(1, 1, 1)).unwrap());
    assert_eq!(p2[0].ideal.mul(&p2[0].ideal).unwrap(), hl.scale_rational(&q(2)));
    for p in [3u64, 7] {
        let ps = primes_above(&h, p).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].ideal, hl.scale_rational(&q(p as i64)));
    }
    let t1 = ring(fixtures::t1());
    let z = OrderHandle::maximal(FullLattice::standard(&t1)).unwrap();
    let p7 = primes_above(&z, 7).unwrap();
    assert_eq!(p7.len(), 1);
    assert_eq!(p7[0].ideal, z.lattice().scale_rational(&q(7)));
    let uncertified = OrderHandle::new(hl.clone()).unwrap();
    assert_eq!(primes_above(&uncertified, 2).unwrap_err(), OrdersError::NotMaximal);
}

#[test]
fn split_primes_in_group_ring_maximal_order() {
    // Z × Z has two primes above every p
    let t2 = ring(fixtures::t2());
    let m = maximize(&FullLattice::standard(&t2)).unwrap();
    for p in [2u64, 3, 5] {
        let ps = primes_above(&m, p).unwrap();
        assert_eq!(ps.len(), 2, "p = {p}");
        let prod = ps[0].ideal.mul(&ps[1].ideal).unwrap();
        assert_eq!(prod, m.lattice().scale_rational(&q(p as i64)));
    }
}

#[test]
fn two_sided_factorizations() {
    let (_, _, h) = quaternions();
    let hl = h.lattice();
    let p2 = primes_above(&h, 2).unwrap().remove(0);
    let p3 = primes_above(&h, 3).unwrap().remove(0);
    let f = factor_two_sided(&h, &hl.scale_rational(&q(2))).unwrap();
    assert_eq!(f.factors, vec![(p2.clone(), 2)]);
    let six = hl.scale_rational(&q(6));
    let f = factor_two_sided(&h, &six).unwrap();
    assert_eq!(f.factors, vec![(p2.clone(), 2), (p3.clone(), 1)]);
    assert_eq!(f.product, six);
    assert_eq!(f.reassemble(hl).unwrap(), six);
    assert!(factor_two_sided(&h, hl).unwrap().factors.is_empty());
    // fractional: (1/2)·P2 = P2^{-1}
    let half_p2 = p2.ideal.scale_rational(&BigRational::new(1.into(), 2.into()));
    let f = factor_two_sided(&h, &half_p2).unwrap();
    assert_eq!(f.factors, vec![(p2.clone(), -1)]);
    // a left-only ideal is rejected
    let n = maximal_left_ideal_over(hl, &hl.scale_rational(&q(5))).unwrap();
    assert_eq!(factor_two_sided(&h, &n).unwrap_err(), OrdersError::NotTwoSided);
}

#[test]
fn left_factorizations() {
    let (_, _, h) = quaternions();
    let hl = h.lattice();
    let p2 = primes_above(&h, 2).unwrap().remove(0).ideal;
    assert_eq!(factor_left_ideal(&h, &p2).unwrap(), vec![p2.clone()]);
    let two = hl.scale_rational(&q(2));
    let fs = factor_left_ideal(&h, &two).unwrap();
    assert_eq!(fs.len(), 2);
    assert!(proper_product_check(&fs));
    assert_eq!(reassemble(hl, fs.iter().map(|f| (f, 1))).unwrap(), two);
    // 3H has no intermediate left ideal stable under right multiplication by i
    assert_eq!(factor_left_ideal(&h, &hl.scale_rational(&q(3))).unwrap().len(), 1);
    let five = hl.scale_rational(&q(5));
    let fs = factor_left_ideal(&h, &five).unwrap();
    assert_eq!(fs.len(), 2);
    assert!(proper_product_check(&fs));
    assert_eq!(fs[0].left_order(), *hl);
    assert_eq!(fs[1].right_order(), *hl);
    assert_eq!(reassemble(hl, fs.iter().map(|f| (f, 1))).unwrap(), five);
    let t1 = ring(fixtures::t1());
    let z = OrderHandle::maximal(FullLattice::standard(&t1)).unwrap();
    let fs = factor_left_ideal(&z, &z.lattice().scale_rational(&q(4))).unwrap();
    let two_z = z.lattice().scale_rational(&q(2));
    assert_eq!(fs, vec![two_z.clone(), two_z]);
    assert_eq!(
        factor_left_ideal(&h, &hl.scale_rational(&BigRational::new(1.into(), 2.into()))).unwrap_err(),
        OrdersError::NotLeftIdeal
    );
}

fn conjugate(a: &Arc<CrystalRing>, h: &FullLattice) -> FullLattice {
    // x = 2+i; x^{-1} = (2-i)/5
    let x = el(a, &[(2, 1, 1), (0, 0, 1)]);
    let xinv = el(a, &[(2, -1, 5), (0, 0, 1)]);
    h.left_mul_elem(&x).unwrap().right_mul_elem(&xinv).unwrap()
}

#[test]
fn conjugate_orders_and_phi() {
    let (a, _, h) = quaternions();
    let hl = h.lattice();
    let hp = conjugate(&a, hl);
    assert_ne!(hp, *hl);
    assert!(hp.is_order());
    let hp = OrderHandle::maximal(hp).unwrap();
    let m = connect_orders(&h, &hp).unwrap();
    assert_eq!(m.left_order(), *hl);
    assert_eq!(m.right_order(), *hp.lattice());
    assert_eq!(connect_orders(&h, &h).unwrap(), *hl);
    let two = hl.scale_rational(&q(2));
    assert_eq!(phi_map(&h, &hp, &two).unwrap(), hp.lattice().scale_rational(&q(2)));
    let p2 = primes_above(&h, 2).unwrap().remove(0).ideal;
    let image = phi_map(&h, &hp, &p2).unwrap();
    assert_eq!(primes_above(&hp, 2).unwrap().remove(0).ideal, image);
    assert_eq!(phi_map(&h, &h, &p2).unwrap(), p2);
    // independence of the connecting Ideal
    let m2 = m.scale(&kq(1, 1, 1)).unwrap();
    assert_eq!(phi_map_via(hl, &m2, &p2).unwrap(), image);
}

#[test]
fn sandwich_reassembles() {
    let (_, _, h) = quaternions();
    let hl = h.lattice();
    let p2 = primes_above(&h, 2).unwrap().remove(0).ideal;
    let m = hl.scale_rational(&q(6));
    let (b, c) = sandwich_factors(&m, &p2).unwrap();
    assert!(hl.contains(&b).unwrap() && hl.contains(&c).unwrap());
    assert_eq!(b.mul(&p2).unwrap().mul(&c).unwrap(), m);
    assert!(proper_product_check(&[b, p2, c]));
}
