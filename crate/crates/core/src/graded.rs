//! Graded lattices `⊕_g I_g u_g`, stored by their fractional-ideal components.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::crystal::CrystalRing;
use crate::exactalg::linalg::{preimage, QLattice, QVec};
use crate::exactalg::{FracIdeal, KElem, RElem, RingSpec};
use crate::lattice::{FullLattice, LatticeError};
use crate::orders::prime_support;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("lattice is not graded")]
    NotGraded,
    #[error("components do not form a graded order")]
    NotGrOrder,
    #[error("graded order is not gr-maximal")]
    NotGrMaximal,
    #[error("not a graded two-sided Ideal of the order")]
    NotTwoSided,
    #[error("{} gr-maximal orders contain the input", .0.len())]
    Ambiguous(Vec<GradedLattice>),
    #[error("the zero ideal")]
    ZeroIdeal,
    #[error("component count does not match the group")]
    RingMismatch,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedLattice {
    components: Vec<FracIdeal>,
}

impl GradedLattice {
    pub fn new(components: Vec<FracIdeal>) -> Self {
        GradedLattice { components }
    }

    /// `⊕_g R u_g`.
    pub fn standard(ring: &CrystalRing) -> Self {
        GradedLattice::new(vec![FracIdeal::unit(); ring.order()])
    }

    pub fn components(&self) -> &[FracIdeal] {
        &self.components
    }

    pub fn component(&self, g: usize) -> &FracIdeal {
        &self.components[g]
    }

    /// `k·Γ` for `k ∈ K^G` (or any `k` when the action is trivial).
    pub fn scale(&self, ring: &RingSpec, k: &FracIdeal) -> Self {
        GradedLattice::new(self.components.iter().map(|i| i.mul(ring, k)).collect())
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, ring: &RingSpec, other: &GradedLattice) -> bool {
        self.components.iter().zip(&other.components).all(|(a, b)| a.is_subset_of(ring, b))
    }
}

impl fmt::Display for GradedLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn check(ring: &CrystalRing, g: &GradedLattice) -> Result<(), GradedError> {
    if g.components.len() != ring.order() {
        return Err(GradedError::RingMismatch);
    }
    Ok(())
}

/// `I_g = {a ∈ K : a·u_g ∈ M}`.
pub fn component_ideal(m: &FullLattice, g: usize) -> FracIdeal {
    let ring = m.ring();
    let deg = ring.base().degree();
    let dim = ring.flat_dim();
    let embed: Vec<QVec> = (0..deg)
        .map(|i| {
            let mut v = vec![BigRational::zero(); dim];
            v[g * deg + i] = BigRational::one();
            v
        })
        .collect();
    let slice: QLattice = preimage(deg, &[(&embed, m.qlattice())]).expect("embedding is injective");
    let r = ring.base();
    slice
        .rows()
        .iter()
        .map(|v| r.kfrom_coords(v))
        .filter(|k| !k.is_zero())
        .map(|k| FracIdeal::new(r, &k).expect("nonzero"))
        .reduce(|a, b| a.add(r, &b))
        .expect("full lattice meets every component")
}

pub fn from_graded(ring: &Arc<CrystalRing>, g: &GradedLattice) -> Result<FullLattice, GradedError> {
    check(ring, g)?;
    let gens: Vec<_> = g
        .components
        .iter()
        .enumerate()
        .map(|(h, i)| ring.homogeneous(h, i.gen().clone()))
        .collect();
    Ok(FullLattice::from_generators(ring, &gens)?)
}

/// Components `I_g` of `M`, whether or not `M` is graded.
fn slices(m: &FullLattice) -> GradedLattice {
    GradedLattice::new((0..m.ring().order()).map(|g| component_ideal(m, g)).collect())
}

pub fn is_graded(m: &FullLattice) -> bool {
    from_graded(m.ring(), &slices(m)).map(|x| x == *m).unwrap_or(false)
}

pub fn to_graded(m: &FullLattice) -> Result<GradedLattice, GradedError> {
    let s = slices(m);
    if from_graded(m.ring(), &s)? != *m {
        return Err(GradedError::NotGraded);
    }
    Ok(s)
}

/// `(ΓΔ)_k = Σ_{gh=k} I_g·σ_g(J_h)·α(g,h)`.
pub fn gr_mul(ring: &CrystalRing, a: &GradedLattice, b: &GradedLattice) -> Result<GradedLattice, GradedError> {
    check(ring, a)?;
    check(ring, b)?;
    let r = ring.base();
    let n = ring.order();
    let mut out: Vec<Option<FracIdeal>> = vec![None; n];
    for g in 0..n {
        for h in 0..n {
            let k = ring.group().op(g, h);
            let alpha = FracIdeal::from_r(r, ring.alpha(g, h)).expect("cocycle entries are nonzero");
            let term = a.components[g]
                .mul(r, &b.components[h].apply(r, ring.sigma(g)))
                .mul(r, &alpha);
            out[k] = Some(match out[k].take() {
                None => term,
                Some(x) => x.add(r, &term),
            });
        }
    }
    Ok(GradedLattice::new(out.into_iter().map(|x| x.expect("every degree is hit")).collect()))
}

/// `I_e = (1)` and `I_g·σ_g(I_h)·α(g,h) ⊆ I_{gh}`.
pub fn gr_validate_order(ring: &CrystalRing, g: &GradedLattice) -> bool {
    if check(ring, g).is_err() || g.components[0] != FracIdeal::unit() {
        return false;
    }
    match gr_mul(ring, g, g) {
        Ok(sq) => sq.is_subset_of(ring.base(), g),
        Err(_) => false,
    }
}

/// `Γ^{-1} = {x : ΓxΓ ⊆ Γ}` computed one degree at a time: `b·u_h` lies in
/// it iff `σ_g(b) ∈ I_{ghk}·(I_g·σ_{gh}(I_k)·α(g,h)·α(gh,k))^{-1}` for all `g, k`.
pub fn gr_inverse(ring: &CrystalRing, m: &GradedLattice) -> Result<GradedLattice, GradedError> {
    check(ring, m)?;
    let r = ring.base();
    let n = ring.order();
    let grp = ring.group();
    let mut out = Vec::with_capacity(n);
    for h in 0..n {
        let mut acc: Option<FracIdeal> = None;
        for g in 0..n {
            let gh = grp.op(g, h);
            for k in 0..n {
                let ghk = grp.op(gh, k);
                let alpha = ring_ideal(r, &r.mul(ring.alpha(g, h), ring.alpha(gh, k)));
                let denom = m.components[g]
                    .mul(r, &m.components[k].apply(r, ring.sigma(gh)))
                    .mul(r, &alpha);
                // σ_g is an involution or the identity
                let bound = m.components[ghk].div(r, &denom).apply(r, ring.sigma(g));
                acc = Some(match acc {
                    None => bound,
                    Some(x) => x.intersect(r, &bound),
                });
            }
        }
        out.push(acc.expect("group is nonempty"));
    }
    Ok(GradedLattice::new(out))
}

fn ring_ideal(r: &RingSpec, x: &RElem) -> FracIdeal {
    FracIdeal::from_r(r, x).expect("nonzero")
}

/// Canonical prime `σ(π)`.
fn apply_prime(r: &RingSpec, sigma: crate::exactalg::SigmaAction, pi: &RElem) -> RElem {
    r.canonical_associate(&r.apply(sigma, pi))
}

/// Primes appearing in `Γ` or `α`, closed under the action.
fn support(ring: &CrystalRing, g: &GradedLattice) -> Vec<RElem> {
    let r = ring.base();
    let mut s: Vec<RElem> = Vec::new();
    let push = |pi: RElem, s: &mut Vec<RElem>| {
        for t in ring.actions() {
            let q = apply_prime(r, *t, &pi);
            if !s.contains(&q) {
                s.push(q);
            }
        }
    };
    for i in &g.components {
        for pi in i.support(r) {
            push(pi, &mut s);
        }
    }
    for a in ring.cocycle().iter().flatten() {
        for pi in r.prime_divisors(a) {
            push(pi, &mut s);
        }
    }
    s.sort();
    s
}

/// Orbits of the action on `primes`, each sorted.
fn orbits(ring: &CrystalRing, primes: &[RElem]) -> Vec<Vec<RElem>> {
    let r = ring.base();
    let mut seen: Vec<RElem> = Vec::new();
    let mut out = Vec::new();
    for pi in primes {
        if seen.contains(pi) {
            continue;
        }
        let mut orbit: Vec<RElem> = Vec::new();
        for t in ring.actions() {
            let q = apply_prime(r, *t, pi);
            if !orbit.contains(&q) {
                orbit.push(q);
            }
        }
        orbit.sort();
        seen.extend(orbit.iter().cloned());
        out.push(orbit);
    }
    out
}

/// Valuation vectors `v[g][q]` on one orbit satisfying the gr-order conditions
/// with `v[e] = 0`, inside the box `lo ≤ v ≤ hi`.
fn feasible_on_orbit(ring: &CrystalRing, orbit: &[RElem], lo: &[Vec<i64>], hi: &[Vec<i64>]) -> Vec<Vec<Vec<i64>>> {
    let r = ring.base();
    let n = ring.order();
    let m = orbit.len();
    let idx = |pi: &RElem| orbit.iter().position(|x| x == pi).expect("orbit is closed");
    let conj: Vec<Vec<usize>> = (0..n)
        .map(|g| orbit.iter().map(|q| idx(&apply_prime(r, ring.sigma(g), q))).collect())
        .collect();
    let alpha: Vec<Vec<Vec<i64>>> = (0..n)
        .map(|g| {
            (0..n)
                .map(|h| orbit.iter().map(|q| r.valuation(ring.alpha(g, h), q) as i64).collect())
                .collect()
        })
        .collect();
    let ok = |v: &[Vec<i64>]| {
        (0..n).all(|g| {
            (0..n).all(|h| {
                let k = ring.group().op(g, h);
                // v_q(σ_g(J)) = v_{σ_g^{-1}(q)}(J), and σ_g is an involution
                (0..m).all(|q| v[g][q] + v[h][conj[g][q]] + alpha[g][h][q] >= v[k][q])
            })
        })
    };
    let vars: Vec<(usize, usize)> = (1..n).flat_map(|g| (0..m).map(move |q| (g, q))).collect();
    let mut out = Vec::new();
    let mut v = vec![vec![0i64; m]; n];
    fn rec(
        i: usize,
        vars: &[(usize, usize)],
        v: &mut Vec<Vec<i64>>,
        lo: &[Vec<i64>],
        hi: &[Vec<i64>],
        ok: &dyn Fn(&[Vec<i64>]) -> bool,
        out: &mut Vec<Vec<Vec<i64>>>,
    ) {
        if i == vars.len() {
            if ok(v) {
                out.push(v.clone());
            }
            return;
        }
        let (g, q) = vars[i];
        for x in lo[g][q]..=hi[g][q] {
            v[g][q] = x;
            rec(i + 1, vars, v, lo, hi, ok, out);
        }
    }
    rec(0, &vars, &mut v, lo, hi, &ok, &mut out);
    out
}

/// Valuations of one candidate at the primes of an orbit, per component.
type ValuationBox = Vec<Vec<i64>>;

/// The gr-maximal orders containing the gr-order `Γ`.
///
/// For each orbit of primes in the support, the componentwise-minimal
/// valuation vectors (largest ideals) that still satisfy the order conditions
/// are found by exhaustive search in a finite box: above by `Γ`, below by
/// the pairing `J_g·σ_g(J_{g^{-1}})·α(g,g^{-1}) ⊆ (1)`.
pub fn gr_maximal_overorders(ring: &CrystalRing, g: &GradedLattice) -> Result<Vec<GradedLattice>, GradedError> {
    if !gr_validate_order(ring, g) {
        return Err(GradedError::NotGrOrder);
    }
    let r = ring.base();
    let n = ring.order();
    // per orbit: its primes and the minimal valuation vectors
    let mut per_orbit: Vec<(Vec<RElem>, Vec<ValuationBox>)> = Vec::new();
    for orbit in orbits(ring, &support(ring, g)) {
        let m = orbit.len();
        let hi: Vec<Vec<i64>> = (0..n)
            .map(|h| orbit.iter().map(|q| g.components[h].valuation_at(r, q)).collect())
            .collect();
        let lo: Vec<Vec<i64>> = (0..n)
            .map(|h| {
                let hinv = ring.group().inv(h);
                (0..m)
                    .map(|qi| {
                        let q = &orbit[qi];
                        let q2 = apply_prime(r, ring.sigma(h), q);
                        let j = orbit.iter().position(|x| *x == q2).expect("closed");
                        -(r.valuation(ring.alpha(h, hinv), q) as i64) - hi[hinv][j]
                    })
                    .collect()
            })
            .collect();
        let feas = feasible_on_orbit(ring, &orbit, &lo, &hi);
        let minimal: Vec<Vec<Vec<i64>>> = feas
            .iter()
            .filter(|v| {
                !feas
                    .iter()
                    .any(|w| w != *v && w.iter().flatten().zip(v.iter().flatten()).all(|(a, b)| a <= b))
            })
            .cloned()
            .collect();
        per_orbit.push((orbit, minimal));
    }
    let mut combos: Vec<Vec<FracIdeal>> = vec![vec![FracIdeal::unit(); n]];
    for (orbit, minimal) in &per_orbit {
        let mut next = Vec::new();
        for base in &combos {
            for v in minimal {
                let comps: Vec<FracIdeal> = (0..n)
                    .map(|h| {
                        let vals: Vec<(RElem, i64)> =
                            orbit.iter().cloned().zip(v[h].iter().copied()).collect();
                        base[h].mul(r, &FracIdeal::from_valuations(r, &vals))
                    })
                    .collect();
                next.push(comps);
            }
        }
        combos = next;
    }
    let mut out: Vec<GradedLattice> = combos.into_iter().map(GradedLattice::new).collect();
    out.sort();
    Ok(out)
}

pub fn gr_maximize(ring: &CrystalRing, g: &GradedLattice) -> Result<GradedLattice, GradedError> {
    let mut all = gr_maximal_overorders(ring, g)?;
    if all.len() == 1 {
        Ok(all.remove(0))
    } else {
        Err(GradedError::Ambiguous(all))
    }
}

pub fn gr_is_maximal(ring: &CrystalRing, g: &GradedLattice) -> Result<bool, GradedError> {
    Ok(gr_maximal_overorders(ring, g)? == vec![g.clone()])
}

fn require_gr_maximal(ring: &CrystalRing, g: &GradedLattice) -> Result<(), GradedError> {
    if !gr_is_maximal(ring, g)? {
        return Err(GradedError::NotGrMaximal);
    }
    Ok(())
}

/// `ΓJ ⊆ J` and `JΓ ⊆ J`.
pub fn gr_is_two_sided(ring: &CrystalRing, order: &GradedLattice, j: &GradedLattice) -> Result<bool, GradedError> {
    let r = ring.base();
    Ok(gr_mul(ring, order, j)?.is_subset_of(r, j) && gr_mul(ring, j, order)?.is_subset_of(r, j))
}

/// Graded two-sided ideals `J` with `pΓ ⊆ J ⊆ Γ`, including both ends.
pub fn gr_ideals_between(ring: &CrystalRing, order: &GradedLattice, p: u64) -> Result<Vec<GradedLattice>, GradedError> {
    let r = ring.base();
    let n = ring.order();
    let primes: Vec<(RElem, i64)> = r
        .factor_rational_prime(p)
        .map_err(|_| GradedError::ZeroIdeal)?
        .into_iter()
        .map(|f| (f.prime, f.exponent as i64))
        .collect();
    let vars: Vec<(usize, usize)> = (0..n).flat_map(|g| (0..primes.len()).map(move |q| (g, q))).collect();
    let mut out = Vec::new();
    let total: usize = vars.iter().map(|&(_, q)| primes[q].1 as usize + 1).product();
    for mut code in 0..total {
        let mut comps = order.components.clone();
        for &(g, q) in &vars {
            let span = primes[q].1 as usize + 1;
            let e = (code % span) as i64;
            code /= span;
            comps[g] = comps[g].mul(r, &FracIdeal::from_valuations(r, &[(primes[q].0.clone(), e)]));
        }
        let j = GradedLattice::new(comps);
        if gr_is_two_sided(ring, order, &j)? {
            out.push(j);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// The gr-prime Ideals above `p`: maximal proper graded two-sided Ideals containing `pΓ`.
pub fn gr_primes_above(ring: &CrystalRing, order: &GradedLattice, p: u64) -> Result<Vec<GradedLattice>, GradedError> {
    require_gr_maximal(ring, order)?;
    let r = ring.base();
    let proper: Vec<GradedLattice> = gr_ideals_between(ring, order, p)?
        .into_iter()
        .filter(|j| j != order)
        .collect();
    Ok(proper
        .iter()
        .filter(|j| !proper.iter().any(|k| k != *j && j.is_subset_of(r, k)))
        .cloned()
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedFactorization {
    pub factors: Vec<(GradedLattice, i64)>,
    pub product: GradedLattice,
}

fn gr_reassemble(ring: &CrystalRing, order: &GradedLattice, f: &[(GradedLattice, i64)]) -> Result<GradedLattice, GradedError> {
    let mut acc = order.clone();
    for (p, e) in f {
        let base = if *e < 0 { gr_inverse(ring, p)? } else { p.clone() };
        for _ in 0..e.unsigned_abs() {
            acc = gr_mul(ring, &acc, &base)?;
        }
    }
    Ok(acc)
}

/// `[Γ : M]` as a rational number, through component norms.
fn gr_index(ring: &CrystalRing, order: &GradedLattice, m: &GradedLattice) -> BigRational {
    let r = ring.base();
    order
        .components
        .iter()
        .zip(&m.components)
        .map(|(a, b)| b.norm(r) / a.norm(r))
        .fold(BigRational::one(), |x, y| x * y)
}

pub fn gr_factor(ring: &CrystalRing, order: &GradedLattice, m: &GradedLattice) -> Result<GradedFactorization, GradedError> {
    gr_factor_with(ring, order, m, |_| 0)
}

/// As [`gr_factor`], with `choose` picking the next gr-prime among those containing the ideal.
pub fn gr_factor_with(
    ring: &CrystalRing,
    order: &GradedLattice,
    m: &GradedLattice,
    mut choose: impl FnMut(&[GradedLattice]) -> usize,
) -> Result<GradedFactorization, GradedError> {
    check(ring, m)?;
    require_gr_maximal(ring, order)?;
    if !gr_is_two_sided(ring, order, m)? {
        return Err(GradedError::NotTwoSided);
    }
    let r = ring.base();
    // smallest positive integer d with dM ⊆ Γ
    let d = m
        .components
        .iter()
        .zip(&order.components)
        .map(|(a, b)| a.div(r, b).gen().den().clone())
        .fold(BigInt::one(), num_integer::lcm);
    let dk = FracIdeal::from_r(r, &RElem::from_int(d.clone())).expect("positive");
    let mut counts: BTreeMap<GradedLattice, i64> = BTreeMap::new();
    let mut cache: BTreeMap<u64, Vec<GradedLattice>> = BTreeMap::new();
    gr_divide_out(ring, order, &m.scale(r, &dk), 1, &mut counts, &mut cache, &mut choose)?;
    if !d.is_one() {
        gr_divide_out(ring, order, &order.scale(r, &dk), -1, &mut counts, &mut cache, &mut choose)?;
    }
    let factors: Vec<(GradedLattice, i64)> = counts.into_iter().filter(|(_, e)| *e != 0).collect();
    Ok(GradedFactorization {
        product: gr_reassemble(ring, order, &factors)?,
        factors,
    })
}

fn gr_divide_out(
    ring: &CrystalRing,
    order: &GradedLattice,
    m: &GradedLattice,
    sign: i64,
    counts: &mut BTreeMap<GradedLattice, i64>,
    cache: &mut BTreeMap<u64, Vec<GradedLattice>>,
    choose: &mut impl FnMut(&[GradedLattice]) -> usize,
) -> Result<(), GradedError> {
    let r = ring.base();
    let mut cur = m.clone();
    while cur != *order {
        let index = gr_index(ring, order, &cur);
        debug_assert!(index.is_integer());
        let mut candidates = Vec::new();
        for p in prime_support(&index.to_integer()) {
            if let Entry::Vacant(v) = cache.entry(p) {
                v.insert(gr_primes_above(ring, order, p)?);
            }
            candidates.extend(cache[&p].iter().filter(|q| cur.is_subset_of(r, q)).cloned());
        }
        assert!(!candidates.is_empty(), "proper graded Ideal lies in no gr-prime");
        let pick = choose(&candidates).min(candidates.len() - 1);
        let pr = candidates.swap_remove(pick);
        cur = gr_mul(ring, &cur, &gr_inverse(ring, &pr)?)?;
        *counts.entry(pr).or_insert(0) += sign;
    }
    Ok(())
}

/// Components of the two-sided ideal of `Γ` generated by homogeneous elements
/// `a·u_h`; a component is `None` when it is zero.
pub fn graded_ideal_generated(
    ring: &CrystalRing,
    order: &GradedLattice,
    gens: &[(usize, KElem)],
) -> Result<Vec<Option<FracIdeal>>, GradedError> {
    check(ring, order)?;
    let r = ring.base();
    let n = ring.order();
    let grp = ring.group();
    let mut out: Vec<Option<FracIdeal>> = vec![None; n];
    for (h, a) in gens {
        if a.is_zero() {
            continue;
        }
        let ai = FracIdeal::new(r, a).expect("nonzero");
        // I_g u_g · a u_h · I_l u_l
        for g in 0..n {
            let gh = grp.op(g, *h);
            for l in 0..n {
                let k = grp.op(gh, l);
                let alpha = ring_ideal(r, &r.mul(ring.alpha(g, *h), ring.alpha(gh, l)));
                let term = order.components[g]
                    .mul(r, &ai.apply(r, ring.sigma(g)))
                    .mul(r, &order.components[l].apply(r, ring.sigma(gh)))
                    .mul(r, &alpha);
                out[k] = Some(match out[k].take() {
                    None => term,
                    Some(x) => x.add(r, &term),
                });
            }
        }
    }
    Ok(out)
}

/// Whether the two-sided ideal generated by the given homogeneous elements
/// is full, i.e. meets every `K u_g`.
pub fn graded_ideal_is_full(
    ring: &CrystalRing,
    order: &GradedLattice,
    gens: &[(usize, KElem)],
) -> Result<bool, GradedError> {
    let comps = graded_ideal_generated(ring, order, gens)?;
    if comps.iter().all(Option::is_none) {
        return Err(GradedError::ZeroIdeal);
    }
    Ok(comps.iter().all(Option::is_some))
}

/// `X ↦ M^{-1}XM` for `M = Γ1·Γ2`.
pub fn gr_phi_map(
    ring: &CrystalRing,
    a: &GradedLattice,
    b: &GradedLattice,
    x: &GradedLattice,
) -> Result<GradedLattice, GradedError> {
    let m = gr_mul(ring, a, b)?;
    gr_phi_map_via(ring, a, &m, x)
}

pub fn gr_phi_map_via(
    ring: &CrystalRing,
    source: &GradedLattice,
    m: &GradedLattice,
    x: &GradedLattice,
) -> Result<GradedLattice, GradedError> {
    if !gr_is_two_sided(ring, source, x)? {
        return Err(GradedError::NotTwoSided);
    }
    let minv = gr_inverse(ring, m)?;
    gr_mul(ring, &gr_mul(ring, &minv, x)?, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::fixtures;
    use crate::lattice::tests::{hurwitz, kq, ring};
    use crate::orders::is_maximal;
    use proptest::prelude::*;

    fn id(r: &RingSpec, a: i64, b: i64, d: i64) -> FracIdeal {
        FracIdeal::new(r, &kq(a, b, d)).unwrap()
    }

    fn gl(r: &RingSpec, c: &[(i64, i64, i64)]) -> GradedLattice {
        GradedLattice::new(c.iter().map(|&(a, b, d)| id(r, a, b, d)).collect())
    }

    #[test]
    fn gradedness() {
        let a = ring(fixtures::t3());
        let l0 = FullLattice::standard(&a);
        assert!(is_graded(&l0));
        assert_eq!(to_graded(&l0).unwrap(), GradedLattice::standard(&a));
        assert_eq!(from_graded(&a, &to_graded(&l0).unwrap()).unwrap(), l0);
        let h = hurwitz(&a);
        assert!(!is_graded(&h));
        assert_eq!(to_graded(&h).unwrap_err(), GradedError::NotGraded);
        // the e-slice of H is still Z[i]: (1+i)/2 only appears with a u_g part
        assert_eq!(component_ideal(&h, 0), FracIdeal::unit());
    }

    #[test]
    fn graded_products() {
        let a = ring(fixtures::t3());
        let r = a.base();
        let p = gl(r, &[(1, 1, 1), (1, 1, 1)]);
        assert_eq!(gr_mul(&a, &p, &p).unwrap(), gl(r, &[(2, 0, 1), (2, 0, 1)]));
        let std = GradedLattice::standard(&a);
        assert_eq!(gr_mul(&a, &p, &std).unwrap(), p);
        let t2 = ring(fixtures::t2());
        let z = t2.base();
        let x = gl(z, &[(1, 0, 1), (2, 0, 1)]);
        assert_eq!(gr_mul(&t2, &x, &x).unwrap(), x);
    }

    #[test]
    fn graded_order_validation() {
        let a = ring(fixtures::t3());
        let r = a.base();
        assert!(gr_validate_order(&a, &GradedLattice::standard(&a)));
        // 1/(1+i) = (1-i)/2
        assert!(!gr_validate_order(&a, &gl(r, &[(1, 0, 1), (1, -1, 2)])));
        // (2+i)/(2-i) = (3+4i)/5
        assert!(gr_validate_order(&a, &gl(r, &[(1, 0, 1), (3, 4, 5)])));
    }

    #[test]
    fn gr_maximal_examples() {
        for c in [fixtures::t2(), fixtures::t3(), fixtures::u2_eq_5()] {
            let a = ring(c);
            let std = GradedLattice::standard(&a);
            assert_eq!(gr_maximize(&a, &std).unwrap(), std);
            assert!(gr_is_maximal(&a, &std).unwrap());
        }
        let t2 = ring(fixtures::t2());
        let z = t2.base();
        let small = gl(z, &[(1, 0, 1), (2, 0, 1)]);
        assert!(!gr_is_maximal(&t2, &small).unwrap());
        assert_eq!(gr_maximize(&t2, &small).unwrap(), GradedLattice::standard(&t2));
        assert!(!is_maximal(&from_graded(&t2, &GradedLattice::standard(&t2)).unwrap()).unwrap());
    }

    #[test]
    fn ambiguous_gr_maximize() {
        // 5 = (2+i)(2-i) and σ swaps the factors, so J_g may trade valuation between them
        let a = ring(fixtures::t3());
        let r = a.base();
        let start = gl(r, &[(1, 0, 1), (5, 0, 1)]);
        let all = gr_maximal_overorders(&a, &start).unwrap();
        assert_eq!(all.len(), 3);
        assert!(all.contains(&GradedLattice::standard(&a)));
        assert!(all.contains(&gl(r, &[(1, 0, 1), (3, 4, 5)])));
        assert!(all.contains(&gl(r, &[(1, 0, 1), (3, -4, 5)])));
        match gr_maximize(&a, &start) {
            Err(GradedError::Ambiguous(v)) => assert_eq!(v, all),
            other => panic!("expected Ambiguous, got {other:?}"),
        }
        // u² = 4 over Z: J_g = (1/2) is allowed
        let mut c = fixtures::t2();
        c.cocycle[1][1] = RElem::from_int(4);
        let b = ring(c);
        let z = b.base();
        let out = gr_maximize(&b, &GradedLattice::standard(&b)).unwrap();
        assert_eq!(out, gl(z, &[(1, 0, 1), (1, 0, 2)]));
    }

    #[test]
    fn inverse_is_graded() {
        let a = ring(fixtures::t3());
        let r = a.base();
        let p = gl(r, &[(1, 1, 1), (1, 1, 1)]);
        let inv = gr_inverse(&a, &p).unwrap();
        assert_eq!(inv, gl(r, &[(1, -1, 2), (1, -1, 2)]));
        let full = from_graded(&a, &p).unwrap();
        assert_eq!(to_graded(&full.inverse_lattice()).unwrap(), inv);
    }

    #[test]
    fn gr_primes() {
        let a = ring(fixtures::t3());
        let r = a.base();
        let std = GradedLattice::standard(&a);
        assert_eq!(gr_primes_above(&a, &std, 2).unwrap(), vec![gl(r, &[(1, 1, 1), (1, 1, 1)])]);
        assert_eq!(gr_primes_above(&a, &std, 5).unwrap(), vec![gl(r, &[(5, 0, 1), (5, 0, 1)])]);
        let t2 = ring(fixtures::t2());
        let z = t2.base();
        let s2 = GradedLattice::standard(&t2);
        assert_eq!(gr_primes_above(&t2, &s2, 3).unwrap(), vec![gl(z, &[(3, 0, 1), (3, 0, 1)])]);
        let small = gl(z, &[(1, 0, 1), (2, 0, 1)]);
        assert_eq!(gr_primes_above(&t2, &small, 3).unwrap_err(), GradedError::NotGrMaximal);
    }

    #[test]
    fn graded_factorizations() {
        let a = ring(fixtures::t3());
        let r = a.base();
        let std = GradedLattice::standard(&a);
        let p2 = gl(r, &[(1, 1, 1), (1, 1, 1)]);
        let p5 = gl(r, &[(5, 0, 1), (5, 0, 1)]);
        let two = gl(r, &[(2, 0, 1), (2, 0, 1)]);
        assert_eq!(gr_factor(&a, &std, &two).unwrap().factors, vec![(p2.clone(), 2)]);
        let ten = gl(r, &[(10, 0, 1), (10, 0, 1)]);
        let f = gr_factor(&a, &std, &ten).unwrap();
        assert_eq!(f.factors, vec![(p2.clone(), 2), (p5, 1)]);
        assert_eq!(f.product, ten);
        assert!(gr_factor(&a, &std, &std).unwrap().factors.is_empty());
        let half = gl(r, &[(1, 0, 2), (1, 0, 2)]);
        assert_eq!(gr_factor(&a, &std, &half).unwrap().factors, vec![(p2, -2)]);
    }

    #[test]
    fn generated_ideals_are_full() {
        let a = ring(fixtures::t3());
        let r = a.base();
        let std = GradedLattice::standard(&a);
        assert!(graded_ideal_is_full(&a, &std, &[(1, kq(1, 1, 1))]).unwrap());
        let comps = graded_ideal_generated(&a, &std, &[(1, kq(1, 1, 1))]).unwrap();
        assert_eq!(comps, vec![Some(id(r, 1, 1, 1)), Some(id(r, 1, 1, 1))]);
        assert_eq!(
            graded_ideal_is_full(&a, &std, &[(0, KElem::zero())]).unwrap_err(),
            GradedError::ZeroIdeal
        );
    }

    #[test]
    fn graded_phi() {
        let a = ring(fixtures::t3());
        let r = a.base();
        let std = GradedLattice::standard(&a);
        let conj = gl(r, &[(1, 0, 1), (3, 4, 5)]);
        assert!(gr_is_maximal(&a, &conj).unwrap());
        let p2 = gl(r, &[(1, 1, 1), (1, 1, 1)]);
        let image = gr_phi_map(&a, &std, &conj, &p2).unwrap();
        assert!(gr_is_two_sided(&a, &conj, &image).unwrap());
        assert_eq!(gr_primes_above(&a, &conj, 2).unwrap(), vec![image.clone()]);
        let m = gr_mul(&a, &std, &conj).unwrap();
        let m2 = m.scale(r, &id(r, 1, 1, 1));
        assert_eq!(gr_phi_map_via(&a, &std, &m2, &p2).unwrap(), image);
    }

    #[test]
    fn factorization_is_order_independent() {
        let a = ring(fixtures::t3());
        let r = a.base();
        let std = GradedLattice::standard(&a);
        let m = gl(r, &[(20, 0, 1), (20, 0, 1)]);
        let first = gr_factor(&a, &std, &m).unwrap();
        let mut turn = 0usize;
        let last = gr_factor_with(&a, &std, &m, |c| {
            turn += 1;
            (turn * 7) % c.len()
        })
        .unwrap();
        assert_eq!(first, last);
        let p2 = gl(r, &[(1, 1, 1), (1, 1, 1)]);
        let p5 = gl(r, &[(5, 0, 1), (5, 0, 1)]);
        assert_eq!(gr_mul(&a, &p2, &p5).unwrap(), gr_mul(&a, &p5, &p2).unwrap());
    }

    #[test]
    fn graded_phi_is_bijective_on_ideals() {
        let a = ring(fixtures::t3());
        let r = a.base();
        let std = GradedLattice::standard(&a);
        let conj = gl(r, &[(1, 0, 1), (3, 4, 5)]);
        for p in [2u64, 5] {
            let src = gr_ideals_between(&a, &std, p).unwrap();
            let dst = gr_ideals_between(&a, &conj, p).unwrap();
            let mut image: Vec<_> = src.iter().map(|x| gr_phi_map(&a, &std, &conj, x).unwrap()).collect();
            image.sort();
            assert_eq!(image, dst);
            let back: Vec<_> = image.iter().map(|x| gr_phi_map(&a, &conj, &std, x).unwrap()).collect();
            let mut back = back;
            back.sort();
            assert_eq!(back, src);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn bridge_coherence(which in 0usize..4, raw in prop::collection::vec((-9i64..=9, -9i64..=9, 1i64..=6), 4)) {
            let (_, c) = fixtures::all().swap_remove(which);
            let a = ring(c);
            let r = a.base();
            let n = a.order();
            let comps: Vec<FracIdeal> = raw.iter().take(n).map(|&(x, y, d)| {
                let y = if r.is_quadratic() { y } else { 0 };
                FracIdeal::new(r, &kq(if x == 0 && y == 0 { 1 } else { x }, y, d)).unwrap()
            }).collect();
            let other: Vec<FracIdeal> = raw.iter().skip(2).take(n).map(|&(x, y, d)| {
                let y = if r.is_quadratic() { y } else { 0 };
                FracIdeal::new(r, &kq(d, if x == 0 { 0 } else { y }, 1)).unwrap()
            }).collect();
            prop_assume!(other.len() == n);
            let g = GradedLattice::new(comps);
            let h = GradedLattice::new(other);
            let fg = from_graded(&a, &g).unwrap();
            let fh = from_graded(&a, &h).unwrap();
            prop_assert_eq!(to_graded(&fg).unwrap(), g.clone());
            prop_assert_eq!(from_graded(&a, &gr_mul(&a, &g, &h).unwrap()).unwrap(), fg.mul(&fh).unwrap());
            let inv = fg.inverse_lattice();
            prop_assert!(is_graded(&inv));
            prop_assert_eq!(to_graded(&inv).unwrap(), gr_inverse(&a, &g).unwrap());
            prop_assert!(is_graded(&fg.left_order()) && is_graded(&fg.right_order()));
        }
    }
}
