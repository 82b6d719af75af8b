use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{ArithError, KElem, RElem, RingSpec, SigmaAction};

/// A nonzero principal fractional ideal of `R`, stored by its canonical generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FracIdeal {
    gen: KElem,
}

impl FracIdeal {
    pub fn new(ring: &RingSpec, gen: &KElem) -> Result<Self, ArithError> {
        if gen.is_zero() {
            return Err(ArithError::ZeroIdeal);
        }
        Ok(FracIdeal {
            gen: ring.kcanonical(gen),
        })
    }

    pub fn from_r(ring: &RingSpec, x: &RElem) -> Result<Self, ArithError> {
        Self::new(ring, &KElem::from_r(x.clone()))
    }

    pub fn unit() -> Self {
        FracIdeal { gen: KElem::one() }
    }

    pub fn gen(&self) -> &KElem {
        &self.gen
    }

    pub fn mul(&self, ring: &RingSpec, other: &FracIdeal) -> FracIdeal {
        FracIdeal {
            gen: ring.kcanonical(&ring.kmul(&self.gen, &other.gen)),
        }
    }

    pub fn mul_elem(&self, ring: &RingSpec, x: &KElem) -> Result<FracIdeal, ArithError> {
        Self::new(ring, &ring.kmul(&self.gen, x))
    }

    pub fn invert(&self, ring: &RingSpec) -> FracIdeal {
        FracIdeal {
            gen: ring.kcanonical(&ring.kinv(&self.gen).expect("ideal generator is nonzero")),
        }
    }

    pub fn div(&self, ring: &RingSpec, other: &FracIdeal) -> FracIdeal {
        self.mul(ring, &other.invert(ring))
    }

    pub fn pow(&self, ring: &RingSpec, e: i64) -> FracIdeal {
        let base = if e < 0 { self.invert(ring) } else { self.clone() };
        let mut acc = FracIdeal::unit();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(ring, &base);
        }
        acc
    }

    /// Sum of ideals, i.e. the gcd of the generators.
    pub fn add(&self, ring: &RingSpec, other: &FracIdeal) -> FracIdeal {
        let (a, b, den) = common_den(&self.gen, &other.gen);
        let g = ring.gcd(&a, &b);
        FracIdeal {
            gen: ring.kcanonical(&KElem::new(g, den).expect("positive denominator")),
        }
    }

    /// Intersection of ideals, i.e. the lcm of the generators.
    pub fn intersect(&self, ring: &RingSpec, other: &FracIdeal) -> FracIdeal {
        let sum = self.add(ring, other);
        self.mul(ring, other).div(ring, &sum)
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, ring: &RingSpec, other: &FracIdeal) -> bool {
        ring.kdiv(&self.gen, &other.gen).expect("nonzero").is_integral()
    }

    pub fn contains_elem(&self, ring: &RingSpec, x: &KElem) -> bool {
        ring.kdiv(x, &self.gen).expect("nonzero").is_integral()
    }

    pub fn is_integral(&self) -> bool {
        self.gen.is_integral()
    }

    pub fn apply(&self, ring: &RingSpec, sigma: SigmaAction) -> FracIdeal {
        FracIdeal {
            gen: ring.kcanonical(&ring.kapply(sigma, &self.gen)),
        }
    }

    /// Exponent of the prime `pi` of `R` in this ideal (may be negative).
    pub fn valuation_at(&self, ring: &RingSpec, pi: &RElem) -> i64 {
        let num = ring.valuation(self.gen.num(), pi) as i64;
        let den = ring.valuation(&RElem::from_int(self.gen.den().clone()), pi) as i64;
        num - den
    }

    /// Absolute norm `[R : I]` extended multiplicatively to fractional ideals.
    pub fn norm(&self, ring: &RingSpec) -> BigRational {
        let n = ring.abs_norm(self.gen.num());
        let d = num_traits::pow(self.gen.den().clone(), ring.degree());
        BigRational::new(n, d)
    }

    /// Primes of `R` at which this ideal has nonzero valuation.
    pub fn support(&self, ring: &RingSpec) -> Vec<RElem> {
        let mut out = ring.prime_divisors(self.gen.num());
        for p in ring.prime_divisors(&RElem::from_int(self.gen.den().clone())) {
            if !out.contains(&p) {
                out.push(p);
            }
        }
        out.sort();
        out
    }

    /// The ideal `Π π^{e_π}` for a valuation vector.
    pub fn from_valuations(ring: &RingSpec, vals: &[(RElem, i64)]) -> FracIdeal {
        let mut acc = FracIdeal::unit();
        for (pi, e) in vals {
            let p = FracIdeal::from_r(ring, pi).expect("prime is nonzero");
            acc = acc.mul(ring, &p.pow(ring, *e));
        }
        acc
    }
}

impl fmt::Display for FracIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.gen)
    }
}

fn common_den(x: &KElem, y: &KElem) -> (RElem, RElem, BigInt) {
    use num_integer::Integer;
    let den = x.den().lcm(y.den());
    let sx = &den / x.den();
    let sy = &den / y.den();
    let a = RElem::new(&x.num().a * &sx, &x.num().b * &sx);
    let b = RElem::new(&y.num().a * &sy, &y.num().b * &sy);
    (a, b, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gauss() -> RingSpec {
        RingSpec::quadratic(-1).unwrap()
    }

    fn id(ring: &RingSpec, a: i64, b: i64) -> FracIdeal {
        FracIdeal::from_r(ring, &RElem::new(a, b)).unwrap()
    }

    #[test]
    fn integer_product() {
        let z = RingSpec::integers();
        assert_eq!(id(&z, 2, 0).mul(&z, &id(&z, 3, 0)), id(&z, 6, 0));
        assert_eq!(id(&z, -6, 0), id(&z, 6, 0));
    }

    #[test]
    fn invert_one_plus_i() {
        let r = gauss();
        let p = id(&r, 1, 1);
        let inv = p.invert(&r);
        let expected = FracIdeal::new(&r, &KElem::new(RElem::new(1, -1), 2).unwrap()).unwrap();
        assert_eq!(inv, expected);
        assert_eq!(p.mul(&r, &inv), FracIdeal::unit());
    }

    #[test]
    fn valuation_of_five() {
        let r = gauss();
        let primes = r.factor_rational_prime(5).unwrap();
        for f in primes {
            assert_eq!(id(&r, 5, 0).valuation_at(&r, &f.prime), 1);
        }
        let half = FracIdeal::new(&r, &KElem::new(RElem::one(), 2).unwrap()).unwrap();
        assert_eq!(half.valuation_at(&r, &RElem::new(1, 1)), -2);
    }

    #[test]
    fn zero_ideal_rejected() {
        let r = gauss();
        assert_eq!(FracIdeal::new(&r, &KElem::zero()), Err(ArithError::ZeroIdeal));
    }

    #[test]
    fn gcd_and_lcm() {
        let r = gauss();
        assert_eq!(id(&r, 4, 0).add(&r, &id(&r, 6, 0)), id(&r, 2, 0));
        assert_eq!(id(&r, 4, 0).intersect(&r, &id(&r, 6, 0)), id(&r, 12, 0));
        assert!(id(&r, 2, 0).is_subset_of(&r, &id(&r, 1, 1)));
        assert!(!id(&r, 1, 1).is_subset_of(&r, &id(&r, 2, 0)));
    }

    proptest! {
        #[test]
        fn group_laws(d in prop::sample::select(crate::exactalg::SUPPORTED_D.to_vec()),
                      a in -30i64..30, b in -30i64..30, c in -30i64..30, e in -30i64..30, den in 1i64..9) {
            let r = RingSpec::quadratic(d).unwrap();
            prop_assume!(a != 0 || b != 0);
            prop_assume!(c != 0 || e != 0);
            let x = FracIdeal::new(&r, &KElem::new(RElem::new(a, b), den).unwrap()).unwrap();
            let y = FracIdeal::from_r(&r, &RElem::new(c, e)).unwrap();
            prop_assert_eq!(x.mul(&r, &y), y.mul(&r, &x));
            prop_assert_eq!(x.mul(&r, &FracIdeal::unit()), x.clone());
            prop_assert_eq!(x.mul(&r, &x.invert(&r)), FracIdeal::unit());
            prop_assert_eq!(x.mul(&r, &y).mul(&r, &x), x.mul(&r, &y.mul(&r, &x)));
            let s = x.add(&r, &y);
            prop_assert!(x.is_subset_of(&r, &s) && y.is_subset_of(&r, &s));
        }
    }
}
