//! Pro-unipotent units (1+a)(1+b)^-1 of the Ore quotient ring, their group
//! calculus, and lifting through graded homomorphisms.

use std::collections::HashMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::field::{sample_elem, FieldElem};
use crate::fraction::LeftFraction;
use crate::mpoly::MPoly;
use crate::scalar::Scalar;
use crate::series::SkewSeries;
use crate::skewpoly::{same_ring, SkewPoly, SkewRing};

/// u = (1+a)(1+b)^-1 with a, b of positive x-valuation; delta = 0.
#[derive(Clone, PartialEq, Eq)]
pub struct ProUnipotent {
    a: SkewPoly,
    b: SkewPoly,
}

impl ProUnipotent {
    pub fn new(a: SkewPoly, b: SkewPoly) -> Result<ProUnipotent> {
        assert!(same_ring(&a.ring, &b.ring), "ring mismatch");
        if !a.ring.delta.is_zero() {
            return Err(CoreError::DerivationNotZero);
        }
        if a.valuation() == Some(0) || b.valuation() == Some(0) {
            return Err(CoreError::NonzeroConstantTerm);
        }
        Ok(ProUnipotent { a, b })
    }

    pub fn ring(&self) -> &SkewRing {
        &self.a.ring
    }

    pub fn numer_part(&self) -> &SkewPoly {
        &self.a
    }

    pub fn denom_part(&self) -> &SkewPoly {
        &self.b
    }

    pub fn inv(&self) -> ProUnipotent {
        ProUnipotent { a: self.b.clone(), b: self.a.clone() }
    }

    pub fn to_series(&self, prec: usize) -> Result<SkewSeries> {
        let ring = self.ring();
        let num = SkewSeries::from_poly(&ring.one().add(&self.a), prec)?;
        let den = SkewSeries::from_poly(&ring.one().add(&self.b), prec)?;
        Ok(num.mul(&den.invert()?))
    }

    /// (1+a)(1+b)^-1 as a left fraction, normalized so numerator and
    /// denominator are congruent to 1 mod x.
    pub fn to_left_fraction(&self) -> Result<LeftFraction> {
        let ring = self.ring();
        let f = ring.one().add(&self.a);
        let d = ring.one().add(&self.b);
        // u f = v d, so f d^-1 = u^-1 v
        let (_, u, v) = f.lclm(&d)?;
        LeftFraction::new(u, v)?.unit_normalize()
    }

    /// Exact product in Frac(R), numerator and denominator both = 1 mod x.
    pub fn mul(&self, other: &ProUnipotent) -> Result<LeftFraction> {
        assert!(same_ring(self.ring(), other.ring()), "ring mismatch");
        self.to_left_fraction()?.mul(&other.to_left_fraction()?)?.unit_normalize()
    }
}

impl fmt::Display for ProUnipotent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(1 + {})(1 + {})^-1", self.a, self.b)
    }
}

impl fmt::Debug for ProUnipotent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Graded homomorphism R[x;sigma] -> S[x;tau]: a coefficient map phi given
/// on generators, with an explicit section iota (phi . iota = id). The
/// section is supplied, never guessed, so lifts are deterministic.
pub struct GradedHom {
    pub source: SkewRing,
    pub target: SkewRing,
    /// phi: image of each source variable slot in the target field.
    pub coeff_images: HashMap<usize, FieldElem>,
    /// iota: image of each target variable slot in the source field.
    pub section_images: HashMap<usize, FieldElem>,
}

impl GradedHom {
    pub fn new(
        source: &SkewRing,
        target: &SkewRing,
        coeff_images: HashMap<usize, FieldElem>,
        section_images: HashMap<usize, FieldElem>,
    ) -> Result<GradedHom> {
        if source.field.coeff_ctx() != target.field.coeff_ctx() {
            return Err(CoreError::RingMismatch(
                "graded hom requires matching coefficient domains".into(),
            ));
        }
        if !source.delta.is_zero() || !target.delta.is_zero() {
            return Err(CoreError::DerivationNotZero);
        }
        Ok(GradedHom {
            source: source.clone(),
            target: target.clone(),
            coeff_images,
            section_images,
        })
    }

    /// Identity hom on a ring.
    pub fn identity(ring: &SkewRing) -> GradedHom {
        let images: HashMap<usize, FieldElem> = ring
            .field
            .materialized_vars()
            .into_iter()
            .map(|s| (s, FieldElem::var_slot(&ring.field, s)))
            .collect();
        GradedHom {
            source: ring.clone(),
            target: ring.clone(),
            coeff_images: images.clone(),
            section_images: images,
        }
    }

    fn map_elem(
        elem: &FieldElem,
        to: &crate::field::Field,
        images: &HashMap<usize, FieldElem>,
        who: &str,
    ) -> Result<FieldElem> {
        let map_poly = |p: &MPoly| -> Result<FieldElem> {
            let mut acc = FieldElem::zero(to);
            for t in p.terms() {
                let mut m = FieldElem::from_scalar(to, transport_scalar(&t.coeff, to)?);
                for (slot, &e) in t.exps.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    let img = images.get(&slot).ok_or_else(|| match who {
                        "section" => CoreError::SectionUndefined(format!("slot {slot}")),
                        _ => CoreError::HomUndefined(format!("slot {slot}")),
                    })?;
                    m = m.mul(&img.pow(e as i64)?);
                }
                acc = acc.add(&m);
            }
            Ok(acc)
        };
        let num = map_poly(elem.num())?;
        let den = map_poly(elem.den())?;
        if den.is_zero() {
            return Err(match who {
                "section" => CoreError::SectionUndefined(elem.to_string()),
                _ => CoreError::HomUndefined(elem.to_string()),
            });
        }
        num.div(&den)
    }

    pub fn apply_coeff(&self, elem: &FieldElem) -> Result<FieldElem> {
        Self::map_elem(elem, &self.target.field, &self.coeff_images, "phi")
    }

    pub fn section_coeff(&self, elem: &FieldElem) -> Result<FieldElem> {
        Self::map_elem(elem, &self.source.field, &self.section_images, "section")
    }

    /// phi extended gradedly: coefficientwise on x-powers.
    pub fn apply_poly(&self, p: &SkewPoly) -> Result<SkewPoly> {
        let mut out = self.target.zero();
        for (d, c) in p.coeffs() {
            out = out.add(&self.target.monomial(d, self.apply_coeff(c)?));
        }
        Ok(out)
    }

    /// phi-hat on truncated series.
    pub fn apply_series(&self, s: &SkewSeries) -> Result<SkewSeries> {
        let mut out = SkewSeries::zero(&self.target, s.precision())?;
        for k in 0..s.precision() {
            let c = self.apply_coeff(s.coeff(k))?;
            out = out.add(&SkewSeries::from_poly(&self.target.monomial(k, c), s.precision())?);
        }
        Ok(out)
    }

    /// Validity sampling: phi . sigma = tau . phi on generators, and
    /// phi . iota = id on generators plus random elements.
    pub fn check(&self, trials: u32, seed: u64) -> std::result::Result<(), String> {
        let err = |e: CoreError| e.to_string();
        for slot in self.source.field.materialized_vars() {
            let v = FieldElem::var_slot(&self.source.field, slot);
            let lhs = self.apply_coeff(&self.source.sigma.apply(&v).map_err(err)?).map_err(err)?;
            let rhs = self.target.sigma.apply(&self.apply_coeff(&v).map_err(err)?).map_err(err)?;
            if lhs != rhs {
                return Err(format!(
                    "phi does not intertwine sigma/tau on {}: {lhs} != {rhs}",
                    self.source.field.var_name(slot)
                ));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in 0..trials {
            let s = if i == 0 {
                FieldElem::one(&self.target.field)
            } else {
                sample_elem(&self.target.field, &mut rng, 2)
            };
            let round = self.apply_coeff(&self.section_coeff(&s).map_err(err)?).map_err(err)?;
            if round != s {
                return Err(format!("phi(iota({s})) = {round} != {s}"));
            }
        }
        Ok(())
    }

    /// Lift a pro-unipotent unit along the section: coefficients of both
    /// parts are pulled back through iota. phi-hat of the result recovers
    /// the input to any precision.
    pub fn lift(&self, u: &ProUnipotent) -> Result<ProUnipotent> {
        assert!(same_ring(u.ring(), &self.target), "lift expects a unit of the target ring");
        let pull = |p: &SkewPoly| -> Result<SkewPoly> {
            let mut out = self.source.zero();
            for (d, c) in p.coeffs() {
                out = out.add(&self.source.monomial(d, self.section_coeff(c)?));
            }
            Ok(out)
        };
        ProUnipotent::new(pull(u.numer_part())?, pull(u.denom_part())?)
    }
}

/// Move a scalar between fields with equal coefficient context.
fn transport_scalar(s: &Scalar, to: &crate::field::Field) -> Result<Scalar> {
    if s.ctx() != *to.coeff_ctx() {
        return Err(CoreError::RingMismatch("scalar context differs between fields".into()));
    }
    Ok(s.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios;

    #[test]
    fn constructor_guards() {
        let ring = scenarios::sc_c();
        let x = ring.x();
        let u = ProUnipotent::new(x.clone(), x.clone()).unwrap();
        assert!(u.to_series(8).unwrap().is_one());
        // constant term rejected
        let bad = ring.one().add(&ring.x());
        assert!(matches!(
            ProUnipotent::new(bad, ring.zero()),
            Err(CoreError::NonzeroConstantTerm)
        ));
        // derivation-type ring rejected
        let dring = scenarios::sc_a();
        assert!(matches!(
            ProUnipotent::new(dring.x(), dring.zero()),
            Err(CoreError::DerivationNotZero)
        ));
    }

    #[test]
    fn sanchez_literal_series() {
        // a = t0 t1 x^3, b = 0: u = 1 + t0 t1 x^3 on the nose
        let ring = scenarios::sc_c();
        let t0 = FieldElem::indexed_var(&ring.field, 0).unwrap();
        let t1 = FieldElem::indexed_var(&ring.field, 1).unwrap();
        let u = ProUnipotent::new(ring.monomial(3, t0.mul(&t1)), ring.zero()).unwrap();
        let s = u.to_series(8).unwrap();
        let expect =
            SkewSeries::from_poly(&ring.one().add(&ring.monomial(3, t0.mul(&t1))), 8).unwrap();
        assert_eq!(s, expect);
    }

    #[test]
    fn geometric_series_cases() {
        let ring = scenarios::sc_b();
        // (1+0)(1+x)^-1 = 1 - x + x^2 - x^3
        let u = ProUnipotent::new(ring.zero(), ring.x()).unwrap();
        let s = u.to_series(4).unwrap();
        for k in 0..4 {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(s.coeff(k), &FieldElem::from_i64(&ring.field, sign));
        }
        // inverse of (1+tx): matches the series_invert example
        let t = FieldElem::var(&ring.field, "t").unwrap();
        let v = ProUnipotent::new(ring.zero(), ring.monomial(1, t.clone())).unwrap();
        let sv = v.to_series(3).unwrap();
        assert_eq!(sv.coeff(1), &t.mul(&FieldElem::from_i64(&ring.field, 4)));
        assert_eq!(sv.coeff(2), &t.mul(&t).add(&t));
    }

    #[test]
    fn group_laws_exact() {
        let ring = scenarios::sc_c();
        let t0 = FieldElem::indexed_var(&ring.field, 0).unwrap();
        let u = ProUnipotent::new(ring.monomial(1, t0.clone()), ring.monomial(2, t0)).unwrap();
        // inverse swaps the parts
        assert_eq!(u.inv().numer_part(), u.denom_part());
        // u * u^-1 = 1 exactly
        let prod = u.mul(&u.inv()).unwrap();
        assert!(prod.eq_frac(&LeftFraction::one(&ring)));
        // product parts are 1 mod x
        assert!(prod.den().coeff(0).is_one());
        assert!(prod.num().coeff(0).is_one());
    }

    #[test]
    fn commutative_units_commute() {
        let ring = scenarios::commutative_q();
        let one = FieldElem::one(&ring.field);
        let u = ProUnipotent::new(ring.x(), ring.zero()).unwrap();
        let v = ProUnipotent::new(ring.monomial(2, one), ring.zero()).unwrap();
        let uv = u.mul(&v).unwrap();
        let vu = v.mul(&u).unwrap();
        assert!(uv.eq_frac(&vu));
    }

    #[test]
    fn unipotent_filtration() {
        let ring = scenarios::sc_b();
        let t = FieldElem::var(&ring.field, "t").unwrap();
        let u = ProUnipotent::new(ring.monomial(1, t.clone()), ring.monomial(2, t)).unwrap();
        let n = 12;
        let s = u.to_series(n).unwrap();
        let one = SkewSeries::one(&ring, n).unwrap();
        let d = s.sub(&one);
        for e in 1..=n {
            let p = d.pow(e).unwrap();
            assert!(p.valuation().map_or(true, |v| v >= e));
        }
    }

    #[test]
    fn identity_hom_lift_is_identity() {
        let ring = scenarios::sc_b();
        let t = FieldElem::var(&ring.field, "t").unwrap();
        let h = GradedHom::identity(&ring);
        h.check(16, 1).unwrap();
        let u = ProUnipotent::new(ring.monomial(1, t), ring.zero()).unwrap();
        let lifted = h.lift(&u).unwrap();
        assert_eq!(&lifted, &u);
    }

    #[test]
    fn f4_graded_hom_lift() {
        // R = F4(y), sigma Frobenius fixing y; S = F4; phi: y -> 0,
        // constant-inclusion section. u = (1 + w x)(1 + w^2 x)^-1.
        let source = scenarios::f4_poly_ring();
        let target = scenarios::f4_ring();
        let ys = source.field.named_slot("y").unwrap();
        let h = GradedHom::new(
            &source,
            &target,
            HashMap::from([(ys, FieldElem::zero(&target.field))]),
            HashMap::new(),
        )
        .unwrap();
        h.check(16, 5).unwrap();
        let w = FieldElem::from_scalar(
            &target.field,
            Scalar::Ff(match target.field.coeff_ctx() {
                crate::scalar::CoeffCtx::Ff(c) => c.gen(),
                _ => unreachable!(),
            }),
        );
        let u = ProUnipotent::new(
            target.monomial(1, w.clone()),
            target.monomial(1, w.mul(&w)),
        )
        .unwrap();
        let lifted = h.lift(&u).unwrap();
        // phi-hat recovers u at N = 16
        let down = h.apply_series(&lifted.to_series(16).unwrap()).unwrap();
        assert_eq!(down, u.to_series(16).unwrap());
    }

    #[test]
    fn perturbed_preimage_still_projects() {
        // manual preimage a' = w + y instead of iota(w) = w: phi-hat still
        // recovers u, mirroring the free choice of preimages in lifting
        let source = scenarios::f4_poly_ring();
        let target = scenarios::f4_ring();
        let ys = source.field.named_slot("y").unwrap();
        let h = GradedHom::new(
            &source,
            &target,
            HashMap::from([(ys, FieldElem::zero(&target.field))]),
            HashMap::new(),
        )
        .unwrap();
        let gen_of = |ring: &SkewRing| match ring.field.coeff_ctx() {
            crate::scalar::CoeffCtx::Ff(c) => {
                FieldElem::from_scalar(&ring.field, Scalar::Ff(c.gen()))
            }
            _ => unreachable!(),
        };
        let w_t = gen_of(&target);
        let w_s = gen_of(&source);
        let y = FieldElem::var(&source.field, "y").unwrap();
        let u = ProUnipotent::new(
            target.monomial(1, w_t.clone()),
            target.monomial(1, w_t.mul(&w_t)),
        )
        .unwrap();
        let manual = ProUnipotent::new(
            source.monomial(1, w_s.add(&y)),
            source.monomial(1, w_s.mul(&w_s)),
        )
        .unwrap();
        let down = h.apply_series(&manual.to_series(16).unwrap()).unwrap();
        assert_eq!(down, u.to_series(16).unwrap());
    }
}
