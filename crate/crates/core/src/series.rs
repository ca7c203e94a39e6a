//! Truncated skew power series K[[x;sigma]] (automorphism type only) with
//! explicit precision. Fast falsification arena for word identities:
//! truncation can disprove an identity, never certify one.

use std::fmt;

use crate::error::{CoreError, Result};
use crate::field::FieldElem;
use crate::skewpoly::{same_ring, SkewPoly, SkewRing};

/// Coefficients c_0 .. c_{N-1}; precision N >= 1.
#[derive(Clone)]
pub struct SkewSeries {
    pub ring: SkewRing,
    coeffs: Vec<FieldElem>,
}

impl PartialEq for SkewSeries {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}
impl Eq for SkewSeries {}

impl SkewSeries {
    pub fn zero(ring: &SkewRing, prec: usize) -> Result<SkewSeries> {
        if !ring.delta.is_zero() {
            return Err(CoreError::DerivationNotZero);
        }
        assert!(prec >= 1, "precision must be at least 1");
        Ok(SkewSeries { ring: ring.clone(), coeffs: vec![FieldElem::zero(&ring.field); prec] })
    }

    pub fn one(ring: &SkewRing, prec: usize) -> Result<SkewSeries> {
        let mut s = Self::zero(ring, prec)?;
        s.coeffs[0] = FieldElem::one(&ring.field);
        Ok(s)
    }

    pub fn from_poly(p: &SkewPoly, prec: usize) -> Result<SkewSeries> {
        let mut s = Self::zero(&p.ring, prec)?;
        for (d, c) in p.coeffs() {
            if d < prec {
                s.coeffs[d] = c.clone();
            }
        }
        Ok(s)
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> &FieldElem {
        &self.coeffs[k]
    }

    pub fn truncate(&self, prec: usize) -> Result<SkewSeries> {
        if prec > self.precision() {
            return Err(CoreError::PrecisionIncrease { from: self.precision(), to: prec });
        }
        Ok(SkewSeries { ring: self.ring.clone(), coeffs: self.coeffs[..prec].to_vec() })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Least k with c_k != 0, or None when every stored coefficient
    /// vanishes ("valuation >= precision").
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &SkewSeries) -> SkewSeries {
        assert!(same_ring(&self.ring, &other.ring), "ring mismatch");
        let prec = self.precision().min(other.precision());
        let coeffs = (0..prec).map(|k| self.coeffs[k].add(&other.coeffs[k])).collect();
        SkewSeries { ring: self.ring.clone(), coeffs }
    }

    pub fn neg(&self) -> SkewSeries {
        SkewSeries { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn sub(&self, other: &SkewSeries) -> SkewSeries {
        self.add(&other.neg())
    }

    /// Coefficient k of the product is sum_{i+j=k} c_i(f) sigma^i(c_j(g)).
    pub fn mul(&self, other: &SkewSeries) -> SkewSeries {
        assert!(same_ring(&self.ring, &other.ring), "ring mismatch");
        let prec = self.precision().min(other.precision());
        let sigma = &self.ring.sigma;
        let zero = FieldElem::zero(&self.ring.field);
        let mut coeffs = vec![zero; prec];
        for (i, a) in self.coeffs.iter().enumerate().take(prec) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(prec - i) {
                if b.is_zero() {
                    continue;
                }
                let tw = sigma.apply_power(b, i as i64).expect("sigma total on K");
                coeffs[i + j] = coeffs[i + j].add(&a.mul(&tw));
            }
        }
        SkewSeries { ring: self.ring.clone(), coeffs }
    }

    /// Inverse of a unit, by the triangular system
    /// c_0 b_n = -sum_{i>=1} c_i sigma^i(b_{n-i}).
    pub fn invert(&self) -> Result<SkewSeries> {
        if self.coeffs[0].is_zero() {
            return Err(CoreError::NotAUnit("zero constant term".into()));
        }
        let prec = self.precision();
        let sigma = &self.ring.sigma;
        let c0_inv = self.coeffs[0].inv()?;
        let mut b: Vec<FieldElem> = Vec::with_capacity(prec);
        b.push(c0_inv.clone());
        for n in 1..prec {
            let mut acc = FieldElem::zero(&self.ring.field);
            for i in 1..=n {
                if self.coeffs[i].is_zero() {
                    continue;
                }
                let tw = sigma.apply_power(&b[n - i], i as i64)?;
                acc = acc.add(&self.coeffs[i].mul(&tw));
            }
            b.push(c0_inv.mul(&acc.neg()));
        }
        Ok(SkewSeries { ring: self.ring.clone(), coeffs: b })
    }

    pub fn pow(&self, e: usize) -> Result<SkewSeries> {
        let mut r = SkewSeries::one(&self.ring, self.precision())?;
        for _ in 0..e {
            r = r.mul(self);
        }
        Ok(r)
    }
}

impl fmt::Display for SkewSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            wrote = true;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{k}")?,
            }
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.precision())
    }
}

impl fmt::Debug for SkewSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios;

    #[test]
    fn twist_in_multiplication() {
        // SC-B: x * t = (t+1) x at any precision
        let ring = scenarios::sc_b();
        let t = FieldElem::var(&ring.field, "t").unwrap();
        let x = SkewSeries::from_poly(&ring.x(), 4).unwrap();
        let ts = SkewSeries::from_poly(&ring.from_elem(t.clone()), 4).unwrap();
        let prod = x.mul(&ts);
        let expect = SkewSeries::from_poly(
            &ring.monomial(1, t.add(&FieldElem::one(&ring.field))),
            4,
        )
        .unwrap();
        assert_eq!(prod, expect);
    }

    #[test]
    fn shift_twist_sc_c() {
        // (t0 x)(t0 x) = t0 t1 x^2
        let ring = scenarios::sc_c();
        let t0 = FieldElem::indexed_var(&ring.field, 0).unwrap();
        let f = SkewSeries::from_poly(&ring.monomial(1, t0.clone()), 4).unwrap();
        let prod = f.mul(&f);
        let t1 = FieldElem::indexed_var(&ring.field, 1).unwrap();
        let expect = SkewSeries::from_poly(&ring.monomial(2, t0.mul(&t1)), 4).unwrap();
        assert_eq!(prod, expect);
    }

    #[test]
    fn mul_by_one_keeps_precision() {
        let ring = scenarios::sc_b();
        let t = FieldElem::var(&ring.field, "t").unwrap();
        let f = SkewSeries::from_poly(&ring.monomial(3, t), 7).unwrap();
        let one = SkewSeries::one(&ring, 9).unwrap();
        let prod = f.mul(&one);
        assert_eq!(prod.precision(), 7);
        assert_eq!(prod, f);
    }

    #[test]
    fn geometric_inverse() {
        // (1 - x)^-1 = 1 + x + x^2 + x^3 over any sigma (coefficients are 1)
        let ring = scenarios::sc_b();
        let f = ring.one().sub(&ring.x());
        let s = SkewSeries::from_poly(&f, 4).unwrap();
        let inv = s.invert().unwrap();
        let one = FieldElem::one(&ring.field);
        for k in 0..4 {
            assert_eq!(inv.coeff(k), &one);
        }
        assert!(s.mul(&inv).is_one());
    }

    #[test]
    fn twisted_inverse_sc_b() {
        // (1 + t x)^-1 @N=3 = 1 + 4t x + (t^2 + t) x^2 over F5
        let ring = scenarios::sc_b();
        let t = FieldElem::var(&ring.field, "t").unwrap();
        let f = ring.one().add(&ring.monomial(1, t.clone()));
        let s = SkewSeries::from_poly(&f, 3).unwrap();
        let inv = s.invert().unwrap();
        assert_eq!(inv.coeff(0), &FieldElem::one(&ring.field));
        assert_eq!(inv.coeff(1), &t.mul(&FieldElem::from_i64(&ring.field, 4)));
        assert_eq!(inv.coeff(2), &t.mul(&t).add(&t));
        assert!(s.mul(&inv).is_one());
    }

    #[test]
    fn invert_one_is_one() {
        let ring = scenarios::sc_c();
        let one = SkewSeries::one(&ring, 6).unwrap();
        assert!(one.invert().unwrap().is_one());
    }

    #[test]
    fn valuation_cases() {
        let ring = scenarios::commutative_q();
        let one = FieldElem::one(&ring.field);
        let f = ring.monomial(3, one.clone()).add(&ring.monomial(5, one));
        assert_eq!(SkewSeries::from_poly(&f, 8).unwrap().valuation(), Some(3));
        assert_eq!(SkewSeries::zero(&ring, 8).unwrap().valuation(), None);
    }

    #[test]
    fn sanchez_generator_valuation() {
        // u - 1 for u = 1 + t0 t1 x^3 has valuation 3
        let ring = scenarios::sc_c();
        let t0 = FieldElem::indexed_var(&ring.field, 0).unwrap();
        let t1 = FieldElem::indexed_var(&ring.field, 1).unwrap();
        let u = ring.one().add(&ring.monomial(3, t0.mul(&t1)));
        let s = SkewSeries::from_poly(&u, 8).unwrap();
        let one = SkewSeries::one(&ring, 8).unwrap();
        assert_eq!(s.sub(&one).valuation(), Some(3));
    }

    #[test]
    fn truncate_and_errors() {
        let ring = scenarios::commutative_q();
        let one = FieldElem::one(&ring.field);
        let f = ring.one().add(&ring.x()).add(&ring.monomial(2, one));
        let s = SkewSeries::from_poly(&f, 3).unwrap();
        let t = s.truncate(2).unwrap();
        assert_eq!(t, SkewSeries::from_poly(&ring.one().add(&ring.x()), 2).unwrap());
        assert!(matches!(
            s.truncate(5),
            Err(CoreError::PrecisionIncrease { from: 3, to: 5 })
        ));
    }

    #[test]
    fn from_poly_commutes_with_mul() {
        use crate::field::sample_poly;
        use rand::SeedableRng;
        let ring = scenarios::sc_b();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let f = random_skew_poly(&ring, &mut rng, 4);
            let g = random_skew_poly(&ring, &mut rng, 4);
            let n = 6;
            let lhs = SkewSeries::from_poly(&f.mul(&g), n).unwrap();
            let rhs = SkewSeries::from_poly(&f, n).unwrap().mul(&SkewSeries::from_poly(&g, n).unwrap());
            assert_eq!(lhs, rhs);
        }

        fn random_skew_poly(
            ring: &SkewRing,
            rng: &mut rand_chacha::ChaCha8Rng,
            max_deg: usize,
        ) -> crate::skewpoly::SkewPoly {
            let mut p = ring.zero();
            for d in 0..=max_deg {
                let c = sample_poly(&ring.field, rng, 2);
                p = p.add(&ring.monomial(d, FieldElem::from_poly(&ring.field, c)));
            }
            p
        }
    }
}
