//! Exact arithmetic over the supported base rings.
//!
//! A base ring `R` is either `Z` or the maximal order `Z[θ]` of a
//! norm-Euclidean quadratic field. Elements are stored in the basis `{1, θ}`
//! with `θ² = tθ − n`. The quotient field `K` is represented by elements of
//! `R` over a positive integer denominator.

mod hnf;
mod ideal;
pub mod linalg;

pub use hnf::{hnf, zhnf};
pub use ideal::FracIdeal;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Squarefree `d` for which `Q(√d)` has a norm-Euclidean ring of integers.
pub const SUPPORTED_D: [i64; 9] = [-11, -7, -3, -2, -1, 2, 3, 5, 13];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivByZero,
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("the zero ideal has no inverse")]
    ZeroIdeal,
    #[error("d = {0} is not a supported norm-Euclidean discriminant")]
    UnsupportedRing(i64),
    #[error("element is not integral over the base ring")]
    NotIntegral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingKind {
    RationalIntegers,
    Quadratic,
}

/// The base ring together with the minimal polynomial of its generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingSpec {
    kind: RingKind,
    d: i64,
    half_basis: bool,
    theta_trace: i64,
    theta_norm: i64,
}

/// `a + bθ ∈ R`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RElem {
    pub a: BigInt,
    pub b: BigInt,
}

/// `num / den ∈ K` with `den > 0` and content of `(num.a, num.b, den)` equal to one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KElem {
    num: RElem,
    den: BigInt,
}

/// An automorphism of `R`: identity or `θ ↦ t − θ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SigmaAction {
    pub conjugates: bool,
}

/// One prime of `R` lying over a rational prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFactor {
    pub prime: RElem,
    pub exponent: u32,
    pub residue_degree: u32,
}

impl SigmaAction {
    pub const IDENTITY: SigmaAction = SigmaAction { conjugates: false };
    pub const CONJUGATION: SigmaAction = SigmaAction { conjugates: true };

    pub fn compose(self, other: SigmaAction) -> SigmaAction {
        SigmaAction {
            conjugates: self.conjugates ^ other.conjugates,
        }
    }
}

impl RElem {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        RElem {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn from_int(a: impl Into<BigInt>) -> Self {
        RElem::new(a, 0)
    }

    pub fn zero() -> Self {
        RElem::new(0, 0)
    }

    pub fn one() -> Self {
        RElem::new(1, 0)
    }

    pub fn theta() -> Self {
        RElem::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn content(&self) -> BigInt {
        self.a.gcd(&self.b)
    }

    fn scale(&self, k: &BigInt) -> RElem {
        RElem {
            a: &self.a * k,
            b: &self.b * k,
        }
    }

    fn div_exact_int(&self, k: &BigInt) -> RElem {
        RElem {
            a: &self.a / k,
            b: &self.b / k,
        }
    }
}

impl fmt::Display for RElem {
    /// Prints the `a+b*T` literal accepted by the spec-file parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let theta = if self.b.is_one() {
            "T".to_string()
        } else if self.b == -BigInt::one() {
            "-T".to_string()
        } else {
            format!("{}*T", self.b)
        };
        if self.a.is_zero() {
            write!(f, "{theta}")
        } else if self.b.is_negative() {
            write!(f, "{}{}", self.a, theta)
        } else {
            write!(f, "{}+{}", self.a, theta)
        }
    }
}

impl KElem {
    pub fn num(&self) -> &RElem {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn new(num: RElem, den: impl Into<BigInt>) -> Result<Self, ArithError> {
        let den = den.into();
        if den.is_zero() {
            return Err(ArithError::DivByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: RElem, den: BigInt) -> Self {
        let (num, den) = if den.is_negative() {
            (num.scale(&-BigInt::one()), -den)
        } else {
            (num, den)
        };
        if num.is_zero() {
            return KElem {
                num: RElem::zero(),
                den: BigInt::one(),
            };
        }
        let g = num.content().gcd(&den);
        KElem {
            num: num.div_exact_int(&g),
            den: den / g,
        }
    }

    pub fn from_r(x: RElem) -> Self {
        KElem {
            num: x,
            den: BigInt::one(),
        }
        .renormalize()
    }

    fn renormalize(self) -> Self {
        Self::normalized(self.num, self.den)
    }

    pub fn from_int(a: impl Into<BigInt>) -> Self {
        Self::from_r(RElem::from_int(a))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// The element as an element of `R`, if it is integral.
    pub fn to_r(&self) -> Option<RElem> {
        self.is_integral().then(|| self.num.clone())
    }
}

impl fmt::Display for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else if self.num.b.is_zero() {
            write!(f, "{}/{}", self.num.a, self.den)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

/// Round `n/d` (with `d > 0`) to the nearest integer, ties toward −∞.
fn round_half_down(n: &BigInt, d: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    // ceil((2n − d) / 2d)
    let num = &two * n - d;
    let den = &two * d;
    -((-num).div_floor(&den))
}

impl RingSpec {
    pub fn integers() -> Self {
        RingSpec {
            kind: RingKind::RationalIntegers,
            d: 1,
            half_basis: false,
            theta_trace: 0,
            theta_norm: 0,
        }
    }

    pub fn quadratic(d: i64) -> Result<Self, ArithError> {
        if !SUPPORTED_D.contains(&d) {
            return Err(ArithError::UnsupportedRing(d));
        }
        let half_basis = d.rem_euclid(4) == 1;
        let (theta_trace, theta_norm) = if half_basis {
            (1, (1 - d) / 4)
        } else {
            (0, -d)
        };
        Ok(RingSpec {
            kind: RingKind::Quadratic,
            d,
            half_basis,
            theta_trace,
            theta_norm,
        })
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn half_basis(&self) -> bool {
        self.half_basis
    }

    pub fn theta_trace(&self) -> i64 {
        self.theta_trace
    }

    pub fn theta_norm(&self) -> i64 {
        self.theta_norm
    }

    /// Rank of `R` as a `Z`-module.
    pub fn degree(&self) -> usize {
        match self.kind {
            RingKind::RationalIntegers => 1,
            RingKind::Quadratic => 2,
        }
    }

    pub fn is_quadratic(&self) -> bool {
        self.kind == RingKind::Quadratic
    }

    fn t(&self) -> BigInt {
        BigInt::from(self.theta_trace)
    }

    fn n(&self) -> BigInt {
        BigInt::from(self.theta_norm)
    }

    /// `t² − 4n`, the discriminant of the minimal polynomial of `θ`.
    pub fn poly_discriminant(&self) -> BigInt {
        self.t() * self.t() - BigInt::from(4) * self.n()
    }

    // ---- R arithmetic ----

    pub fn add(&self, x: &RElem, y: &RElem) -> RElem {
        RElem {
            a: &x.a + &y.a,
            b: &x.b + &y.b,
        }
    }

    pub fn sub(&self, x: &RElem, y: &RElem) -> RElem {
        RElem {
            a: &x.a - &y.a,
            b: &x.b - &y.b,
        }
    }

    pub fn neg(&self, x: &RElem) -> RElem {
        RElem {
            a: -&x.a,
            b: -&x.b,
        }
    }

    pub fn mul(&self, x: &RElem, y: &RElem) -> RElem {
        let bd = &x.b * &y.b;
        RElem {
            a: &x.a * &y.a - &bd * self.n(),
            b: &x.a * &y.b + &x.b * &y.a + &bd * self.t(),
        }
    }

    pub fn mul_int(&self, x: &RElem, k: &BigInt) -> RElem {
        x.scale(k)
    }

    pub fn pow(&self, x: &RElem, e: u32) -> RElem {
        let mut acc = RElem::one();
        for _ in 0..e {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// The nontrivial automorphism `θ ↦ t − θ`.
    pub fn conj(&self, x: &RElem) -> RElem {
        RElem {
            a: &x.a + &x.b * self.t(),
            b: -&x.b,
        }
    }

    pub fn apply(&self, sigma: SigmaAction, x: &RElem) -> RElem {
        if sigma.conjugates && self.is_quadratic() {
            self.conj(x)
        } else {
            x.clone()
        }
    }

    /// Field norm `N(x) = x·conj(x)`; for `Z` this is `x` itself.
    pub fn norm(&self, x: &RElem) -> BigInt {
        match self.kind {
            RingKind::RationalIntegers => x.a.clone(),
            RingKind::Quadratic => {
                &x.a * &x.a + &x.a * &x.b * self.t() + &x.b * &x.b * self.n()
            }
        }
    }

    pub fn abs_norm(&self, x: &RElem) -> BigInt {
        self.norm(x).abs()
    }

    /// `x / y` if it lies in `R`.
    pub fn div_exact(&self, x: &RElem, y: &RElem) -> Result<Option<RElem>, ArithError> {
        if y.is_zero() {
            return Err(ArithError::DivByZero);
        }
        let (num, n) = self.quotient_parts(x, y);
        if num.a.is_multiple_of(&n) && num.b.is_multiple_of(&n) {
            Ok(Some(num.div_exact_int(&n)))
        } else {
            Ok(None)
        }
    }

    pub fn divides(&self, y: &RElem, x: &RElem) -> bool {
        !y.is_zero() && matches!(self.div_exact(x, y), Ok(Some(_)))
    }

    /// `x / y = num / n` with `n = N(y) > 0` after sign adjustment.
    fn quotient_parts(&self, x: &RElem, y: &RElem) -> (RElem, BigInt) {
        match self.kind {
            RingKind::RationalIntegers => {
                if y.a.is_negative() {
                    (self.neg(x), -&y.a)
                } else {
                    (x.clone(), y.a.clone())
                }
            }
            RingKind::Quadratic => {
                let num = self.mul(x, &self.conj(y));
                let n = self.norm(y);
                if n.is_negative() {
                    (self.neg(&num), -n)
                } else {
                    (num, n)
                }
            }
        }
    }

    /// Euclidean division `x = q·y + r` with `|N(r)| < |N(y)|`.
    ///
    /// The quotient starts from rounding each coordinate of `x/y` to the
    /// nearest integer (ties toward −∞). If that remainder is not small
    /// enough, nearby lattice points are searched and the remainder of least
    /// norm wins, ties broken by the remainder's coordinates. Both steps are
    /// invariant under `x ↦ x + ky`, so the remainder is a canonical residue.
    pub fn euclid_divmod(&self, x: &RElem, y: &RElem) -> Result<(RElem, RElem), ArithError> {
        if y.is_zero() {
            return Err(ArithError::DivByZero);
        }
        let (num, n) = self.quotient_parts(x, y);
        let q0 = RElem {
            a: round_half_down(&num.a, &n),
            b: round_half_down(&num.b, &n),
        };
        let ny = self.abs_norm(y);
        let r0 = self.sub(x, &self.mul(&q0, y));
        if self.abs_norm(&r0) < ny || self.kind == RingKind::RationalIntegers {
            return Ok((q0, r0));
        }
        let mut best: Option<(BigInt, RElem, RElem)> = None;
        for da in -2i32..=2 {
            for db in -2i32..=2 {
                let q = RElem {
                    a: &q0.a + da,
                    b: &q0.b + db,
                };
                let r = self.sub(x, &self.mul(&q, y));
                let nr = self.abs_norm(&r);
                let better = match &best {
                    None => true,
                    Some((bn, _, br)) => nr < *bn || (nr == *bn && r < *br),
                };
                if better {
                    best = Some((nr, q, r));
                }
            }
        }
        let (nr, q, r) = best.expect("search window is nonempty");
        debug_assert!(nr < ny, "norm-Euclidean search failed for {x} / {y}");
        Ok((q, r))
    }

    pub fn gcd(&self, x: &RElem, y: &RElem) -> RElem {
        let (mut a, mut b) = (x.clone(), y.clone());
        while !b.is_zero() {
            let (_, r) = self.euclid_divmod(&a, &b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        self.canonical_associate(&a)
    }

    /// Units of `R` when the unit group is finite.
    pub fn finite_units(&self) -> Option<Vec<RElem>> {
        match self.kind {
            RingKind::RationalIntegers => Some(vec![RElem::one(), RElem::from_int(-1)]),
            RingKind::Quadratic if self.d < 0 => {
                let mut units = vec![RElem::one(), RElem::from_int(-1)];
                match self.d {
                    -1 => {
                        units.push(RElem::theta());
                        units.push(RElem::new(0, -1));
                    }
                    -3 => {
                        // θ is a primitive sixth root of unity; θ² = θ − 1.
                        units.push(RElem::new(0, 1));
                        units.push(RElem::new(0, -1));
                        units.push(RElem::new(-1, 1));
                        units.push(RElem::new(1, -1));
                    }
                    _ => {}
                }
                Some(units)
            }
            RingKind::Quadratic => None,
        }
    }

    /// Fundamental unit `ε > 1` under the embedding sending `θ` to the larger root.
    pub fn fundamental_unit(&self) -> Option<RElem> {
        match (self.kind, self.d) {
            (RingKind::Quadratic, 2) => Some(RElem::new(1, 1)),
            (RingKind::Quadratic, 3) => Some(RElem::new(2, 1)),
            (RingKind::Quadratic, 5) => Some(RElem::new(0, 1)),
            (RingKind::Quadratic, 13) => Some(RElem::new(1, 1)),
            _ => None,
        }
    }

    pub fn is_unit(&self, x: &RElem) -> bool {
        self.abs_norm(x).is_one()
    }

    pub fn unit_inverse(&self, u: &RElem) -> RElem {
        debug_assert!(self.is_unit(u));
        match self.kind {
            RingKind::RationalIntegers => u.clone(),
            RingKind::Quadratic => {
                let c = self.conj(u);
                if self.norm(u).is_negative() {
                    self.neg(&c)
                } else {
                    c
                }
            }
        }
    }

    /// Canonical representative of the associate class of `x`.
    pub fn canonical_associate(&self, x: &RElem) -> RElem {
        let u = self.canonical_unit(x);
        self.mul(&u, x)
    }

    /// A unit `u` such that `u·x` is the canonical associate of `x`.
    pub fn canonical_unit(&self, x: &RElem) -> RElem {
        if x.is_zero() {
            return RElem::one();
        }
        if let Some(units) = self.finite_units() {
            let mut best: Option<(RElem, RElem)> = None;
            for u in units {
                let y = self.mul(&u, x);
                let better = match &best {
                    None => true,
                    Some((_, by)) => self.angle_less(&y, by),
                };
                if better {
                    best = Some((u, y));
                }
            }
            return best.expect("unit list is nonempty").0;
        }
        let eps = self.fundamental_unit().expect("real quadratic ring");
        let eps_inv = self.unit_inverse(&eps);
        let mut u = RElem::one();
        let mut y = x.clone();
        while !self.balanced_from_below(&y) {
            y = self.mul(&y, &eps);
            u = self.mul(&u, &eps);
        }
        loop {
            let z = self.mul(&y, &eps_inv);
            if self.balanced_from_below(&z) {
                y = z;
                u = self.mul(&u, &eps_inv);
            } else {
                break;
            }
        }
        if self.real_embedding_sign(&y) < 0 {
            u = self.neg(&u);
        }
        u
    }

    /// For real quadratic rings: `|σ₁(y)| ≥ |σ₂(y)|`.
    fn balanced_from_below(&self, y: &RElem) -> bool {
        let s = &y.b * (BigInt::from(2) * &y.a + &y.b * self.t());
        !s.is_negative()
    }

    /// Sign of `a + bθ₁` for the larger real root `θ₁`.
    fn real_embedding_sign(&self, y: &RElem) -> i32 {
        // 2(a + bθ₁) = X + b√Δ
        let x = BigInt::from(2) * &y.a + &y.b * self.t();
        let disc = self.poly_discriminant();
        let sx = sign(&x);
        let sb = sign(&y.b);
        if sx == sb || sb == 0 {
            return sx;
        }
        if sx == 0 {
            return sb;
        }
        let lhs = &x * &x;
        let rhs = &y.b * &y.b * disc;
        if lhs > rhs {
            sx
        } else {
            sb
        }
    }

    /// Complex-argument order on imaginary quadratic (or rational) elements, angles in `[0, 2π)`.
    fn angle_less(&self, x: &RElem, y: &RElem) -> bool {
        let (xr, xi) = self.planar(x);
        let (yr, yi) = self.planar(y);
        let hx = half_plane(&xr, &xi);
        let hy = half_plane(&yr, &yi);
        if hx != hy {
            return hx < hy;
        }
        let cross = &xr * &yi - &xi * &yr;
        if !cross.is_zero() {
            return cross.is_positive();
        }
        x < y
    }

    /// Coordinates proportional to (real part, imaginary part); the imaginary
    /// axis is scaled by a positive constant, which preserves argument order.
    fn planar(&self, x: &RElem) -> (BigInt, BigInt) {
        (BigInt::from(2) * &x.a + &x.b * self.t(), x.b.clone())
    }

    // ---- K arithmetic ----

    pub fn kadd(&self, x: &KElem, y: &KElem) -> KElem {
        let num = self.add(&x.num.scale(&y.den), &y.num.scale(&x.den));
        KElem::normalized(num, &x.den * &y.den)
    }

    pub fn ksub(&self, x: &KElem, y: &KElem) -> KElem {
        self.kadd(x, &self.kneg(y))
    }

    pub fn kneg(&self, x: &KElem) -> KElem {
        KElem {
            num: self.neg(&x.num),
            den: x.den.clone(),
        }
    }

    pub fn kmul(&self, x: &KElem, y: &KElem) -> KElem {
        KElem::normalized(self.mul(&x.num, &y.num), &x.den * &y.den)
    }

    pub fn kinv(&self, x: &KElem) -> Result<KElem, ArithError> {
        if x.is_zero() {
            return Err(ArithError::DivByZero);
        }
        let (num, n) = self.quotient_parts(&RElem::from_int(x.den.clone()), &x.num);
        Ok(KElem::normalized(num, n))
    }

    pub fn kdiv(&self, x: &KElem, y: &KElem) -> Result<KElem, ArithError> {
        Ok(self.kmul(x, &self.kinv(y)?))
    }

    pub fn kapply(&self, sigma: SigmaAction, x: &KElem) -> KElem {
        KElem::normalized(self.apply(sigma, &x.num), x.den.clone())
    }

    pub fn kfrom_r(&self, x: &RElem) -> KElem {
        KElem::from_r(x.clone())
    }

    /// Rational coordinates of `x` in the basis `{1, θ}` (length `degree()`).
    pub fn kcoords(&self, x: &KElem) -> Vec<num_rational::BigRational> {
        use num_rational::BigRational;
        let mut out = vec![BigRational::new(x.num.a.clone(), x.den.clone())];
        if self.is_quadratic() {
            out.push(BigRational::new(x.num.b.clone(), x.den.clone()));
        }
        out
    }

    pub fn kfrom_coords(&self, coords: &[num_rational::BigRational]) -> KElem {
        let a = &coords[0];
        let zero = num_rational::BigRational::zero();
        let b = coords.get(1).unwrap_or(&zero);
        let den = a.denom().lcm(b.denom());
        let na = a.numer() * (&den / a.denom());
        let nb = b.numer() * (&den / b.denom());
        KElem::normalized(RElem { a: na, b: nb }, den)
    }

    /// Canonical associate of a nonzero element of `K` (units act on the numerator).
    pub fn kcanonical(&self, x: &KElem) -> KElem {
        KElem::normalized(self.canonical_associate(&x.num), x.den.clone())
    }

    /// Primes of `R` above the rational prime `p`.
    pub fn factor_rational_prime(&self, p: u64) -> Result<Vec<PrimeFactor>, ArithError> {
        if !is_prime_u64(p) {
            return Err(ArithError::NotPrime(BigInt::from(p)));
        }
        let pb = RElem::from_int(p);
        if !self.is_quadratic() {
            return Ok(vec![PrimeFactor {
                prime: pb,
                exponent: 1,
                residue_degree: 1,
            }]);
        }
        let t = self.theta_trace.rem_euclid(p as i64) as u64;
        let n = self.theta_norm.rem_euclid(p as i64) as u64;
        let p128 = p as u128;
        let roots: Vec<u64> = (0..p)
            .filter(|&x| {
                let x = x as u128;
                let v = (x * x + (p128 - t as u128) * x + n as u128) % p128;
                v == 0
            })
            .collect();
        let prime_for_root = |r: u64| {
            let lin = RElem::new(-BigInt::from(r), 1);
            self.gcd(&pb, &lin)
        };
        Ok(match roots.len() {
            0 => vec![PrimeFactor {
                prime: self.canonical_associate(&pb),
                exponent: 1,
                residue_degree: 2,
            }],
            1 => vec![PrimeFactor {
                prime: prime_for_root(roots[0]),
                exponent: 2,
                residue_degree: 1,
            }],
            _ => {
                let mut primes: Vec<RElem> = roots.iter().map(|&r| prime_for_root(r)).collect();
                primes.sort();
                primes
                    .into_iter()
                    .map(|prime| PrimeFactor {
                        prime,
                        exponent: 1,
                        residue_degree: 1,
                    })
                    .collect()
            }
        })
    }

    /// Exponent of the prime `pi` in `x` (`x ≠ 0`).
    pub fn valuation(&self, x: &RElem, pi: &RElem) -> u32 {
        assert!(!x.is_zero(), "valuation of zero");
        let mut v = 0;
        let mut y = x.clone();
        while let Ok(Some(q)) = self.div_exact(&y, pi) {
            y = q;
            v += 1;
        }
        v
    }

    /// All primes of `R` dividing `x`, each once, canonical and sorted.
    pub fn prime_divisors(&self, x: &RElem) -> Vec<RElem> {
        let mut out = Vec::new();
        if x.is_zero() {
            return out;
        }
        let norm = self.abs_norm(x);
        for (p, _) in factor_integer(&norm) {
            let p = u64::try_from(&p).expect("desk-scale prime");
            for f in self.factor_rational_prime(p).expect("prime") {
                if self.divides(&f.prime, x) && !out.contains(&f.prime) {
                    out.push(f.prime);
                }
            }
        }
        out.sort();
        out
    }
}

fn sign(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn half_plane(re: &BigInt, im: &BigInt) -> u8 {
    if im.is_positive() || (im.is_zero() && re.is_positive()) {
        0
    } else {
        1
    }
}

pub fn is_prime_u64(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2u64;
    while q * q <= p {
        if p.is_multiple_of(q) {
            return false;
        }
        q += 1;
    }
    true
}

/// Trial-division factorization of `|n|` (`n ≠ 0`), primes ascending.
pub fn factor_integer(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut q = BigInt::from(2);
    while &q * &q <= n {
        let mut e = 0;
        while n.is_multiple_of(&q) {
            n /= &q;
            e += 1;
        }
        if e > 0 {
            out.push((q.clone(), e));
        }
        q += 1;
    }
    if !n.is_one() {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gauss() -> RingSpec {
        RingSpec::quadratic(-1).unwrap()
    }

    #[test]
    fn integer_division() {
        let z = RingSpec::integers();
        let (q, r) = z.euclid_divmod(&RElem::from_int(7), &RElem::from_int(2)).unwrap();
        // 7/2 = 3.5 rounds down on the tie
        assert_eq!((q, r), (RElem::from_int(3), RElem::from_int(1)));
    }

    #[test]
    fn gaussian_division_by_one_plus_i() {
        let r = gauss();
        let y = RElem::new(1, 1);
        let (q, rem) = r.euclid_divmod(&RElem::from_int(5), &y).unwrap();
        assert_eq!(r.add(&r.mul(&q, &y), &rem), RElem::from_int(5));
        assert!(r.abs_norm(&rem) < BigInt::from(2));
        // oracle: the four floor/ceil candidates around 5/(1+i) = 5/2 − 5/2·i
        let best = [(2, -3), (2, -2), (3, -3), (3, -2)]
            .iter()
            .map(|&(a, b)| r.abs_norm(&r.sub(&RElem::from_int(5), &r.mul(&RElem::new(a, b), &y))))
            .min()
            .unwrap();
        assert_eq!(r.abs_norm(&rem), best);
    }

    #[test]
    fn division_by_unit_and_zero() {
        let r = gauss();
        let x = RElem::new(4, -7);
        assert_eq!(r.euclid_divmod(&x, &RElem::one()).unwrap(), (x.clone(), RElem::zero()));
        assert_eq!(r.euclid_divmod(&x, &RElem::zero()), Err(ArithError::DivByZero));
    }

    #[test]
    fn gaussian_prime_splitting() {
        let r = gauss();
        let two = r.factor_rational_prime(2).unwrap();
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].exponent, 2);
        assert_eq!(r.abs_norm(&two[0].prime), BigInt::from(2));
        let five = r.factor_rational_prime(5).unwrap();
        assert_eq!(five.len(), 2);
        let prod = r.mul(&five[0].prime, &five[1].prime);
        assert!(r.is_unit(&r.div_exact(&prod, &RElem::from_int(5)).unwrap().unwrap()));
        assert!(!r.divides(&five[0].prime, &five[1].prime));
        let three = r.factor_rational_prime(3).unwrap();
        assert_eq!(three, vec![PrimeFactor { prime: RElem::from_int(3), exponent: 1, residue_degree: 2 }]);
        assert_eq!(r.factor_rational_prime(9), Err(ArithError::NotPrime(BigInt::from(9))));
    }

    #[test]
    fn residue_degrees_sum_to_two() {
        for d in SUPPORTED_D {
            let r = RingSpec::quadratic(d).unwrap();
            for p in [2u64, 3, 5, 7, 11, 13, 17] {
                let fs = r.factor_rational_prime(p).unwrap();
                let total: u32 = fs.iter().map(|f| f.exponent * f.residue_degree).sum();
                assert_eq!(total, 2, "d={d} p={p}");
                let mut prod = RElem::one();
                for f in &fs {
                    prod = r.mul(&prod, &r.pow(&f.prime, f.exponent));
                }
                assert!(r.is_unit(&r.div_exact(&prod, &RElem::from_int(p)).unwrap().unwrap()), "d={d} p={p}");
            }
        }
    }

    #[test]
    fn canonical_associates_are_class_invariant() {
        for d in SUPPORTED_D {
            let r = RingSpec::quadratic(d).unwrap();
            let x = RElem::new(7, -3);
            let c = r.canonical_associate(&x);
            let mut units = r.finite_units().unwrap_or_default();
            if let Some(e) = r.fundamental_unit() {
                let ei = r.unit_inverse(&e);
                units = vec![RElem::one(), RElem::from_int(-1), e.clone(), ei.clone(), r.mul(&e, &e), r.neg(&r.mul(&ei, &ei))];
            }
            for u in units {
                assert_eq!(r.canonical_associate(&r.mul(&u, &x)), c, "d={d}");
            }
        }
    }

    #[test]
    fn k_inverse() {
        let r = gauss();
        let x = KElem::from_r(RElem::new(1, 1));
        let inv = r.kinv(&x).unwrap();
        assert_eq!(inv, KElem::new(RElem::new(1, -1), 2).unwrap());
        assert_eq!(r.kmul(&x, &inv), KElem::one());
    }

    proptest! {
        #[test]
        fn euclidean_property(d in prop::sample::select(SUPPORTED_D.to_vec()), xa in -500i64..500, xb in -500i64..500, ya in -60i64..60, yb in -60i64..60) {
            let r = RingSpec::quadratic(d).unwrap();
            let x = RElem::new(xa, xb);
            let y = RElem::new(ya, yb);
            prop_assume!(!y.is_zero());
            let (q, rem) = r.euclid_divmod(&x, &y).unwrap();
            prop_assert_eq!(r.add(&r.mul(&q, &y), &rem), x.clone());
            prop_assert!(r.abs_norm(&rem) < r.abs_norm(&y));
            // canonical residue: shifting x by a multiple of y keeps the remainder
            let k = RElem::new(xb % 7, xa % 5);
            let shifted = r.add(&x, &r.mul(&k, &y));
            prop_assert_eq!(r.euclid_divmod(&shifted, &y).unwrap().1, rem);
        }
    }
}
