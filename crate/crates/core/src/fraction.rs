//! Left fractions g^-1 f over K[x;sigma,delta]: exact arithmetic in the Ore
//! quotient division ring. No canonical reduced form is kept; equality is
//! always the LCLM cross-multiplication test.

use std::fmt;

use crate::error::{CoreError, Result};
use crate::skewpoly::{same_ring, SkewPoly, SkewRing};

/// g^-1 f with g nonzero.
#[derive(Clone)]
pub struct LeftFraction {
    den: SkewPoly,
    num: SkewPoly,
}

impl LeftFraction {
    pub fn new(den: SkewPoly, num: SkewPoly) -> Result<LeftFraction> {
        if den.is_zero() {
            return Err(CoreError::DivisionByZero);
        }
        assert!(same_ring(&den.ring, &num.ring), "ring mismatch");
        Ok(LeftFraction { den, num })
    }

    pub fn from_poly(p: SkewPoly) -> LeftFraction {
        let den = p.ring.one();
        LeftFraction { den, num: p }
    }

    pub fn one(ring: &SkewRing) -> LeftFraction {
        LeftFraction::from_poly(ring.one())
    }

    pub fn zero(ring: &SkewRing) -> LeftFraction {
        LeftFraction::from_poly(ring.zero())
    }

    pub fn ring(&self) -> &SkewRing {
        &self.num.ring
    }

    pub fn den(&self) -> &SkewPoly {
        &self.den
    }

    pub fn num(&self) -> &SkewPoly {
        &self.num
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &LeftFraction) -> Result<LeftFraction> {
        let (m, u, v) = self.den.lclm(&other.den)?;
        Ok(LeftFraction { den: m, num: u.mul(&self.num).add(&v.mul(&other.num)) })
    }

    pub fn neg(&self) -> LeftFraction {
        LeftFraction { den: self.den.clone(), num: self.num.neg() }
    }

    pub fn sub(&self, other: &LeftFraction) -> Result<LeftFraction> {
        self.add(&other.neg())
    }

    /// (g^-1 f)(d^-1 c): commute f past d^-1 through the LCLM relation
    /// u'f = v'd, i.e. f d^-1 = u'^-1 v'.
    pub fn mul(&self, other: &LeftFraction) -> Result<LeftFraction> {
        if self.num.is_zero() || other.num.is_zero() {
            return Ok(LeftFraction::zero(self.ring()));
        }
        let (_, u, v) = self.num.lclm(&other.den)?;
        Ok(LeftFraction { den: u.mul(&self.den), num: v.mul(&other.num) })
    }

    pub fn inv(&self) -> Result<LeftFraction> {
        if self.num.is_zero() {
            return Err(CoreError::NotAUnit("zero fraction".into()));
        }
        Ok(LeftFraction { den: self.num.clone(), num: self.den.clone() })
    }

    /// Ground-truth identity test: with (m,u,v) = lclm(g1,g2), compare
    /// u f1 and v f2 coefficientwise.
    pub fn eq_frac(&self, other: &LeftFraction) -> bool {
        let (_, u, v) = self.den.lclm(&other.den).expect("denominators nonzero");
        u.mul(&self.num) == v.mul(&other.num)
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// Strip common left factors of x and scale the denominator's constant
    /// term to 1 when possible. Used to present products of pro-unipotents
    /// with numerator and denominator congruent to 1 mod x.
    pub fn unit_normalize(&self) -> Result<LeftFraction> {
        let mut den = self.den.clone();
        let mut num = self.num.clone();
        // common left factor x: g = x g' has coefficients g'_i = sigma^-1(g_{i+1})
        while den.valuation().map_or(false, |v| v > 0) && num.valuation().map_or(false, |v| v > 0) {
            den = strip_left_x(&den)?;
            num = strip_left_x(&num)?;
        }
        let c0 = den.coeff(0);
        if c0.is_zero() {
            return Ok(LeftFraction { den, num });
        }
        let inv = c0.inv()?;
        Ok(LeftFraction { den: den.scale_left(&inv), num: num.scale_left(&inv) })
    }
}

fn strip_left_x(f: &SkewPoly) -> Result<SkewPoly> {
    let ring = f.ring.clone();
    let mut out = ring.zero();
    for (d, c) in f.coeffs() {
        debug_assert!(d >= 1);
        out = out.add(&ring.monomial(d - 1, ring.sigma.apply_power(c, -1)?));
    }
    Ok(out)
}

impl fmt::Display for LeftFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})^-1 * ({})", self.den, self.num)
        }
    }
}

impl fmt::Debug for LeftFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
