//! Skew polynomials K[x;sigma,delta]: multiplication under the defining
//! relation x*a = sigma(a)x + delta(a), right Euclidean division, GCRD and
//! LCLM, and the folklore Ore normalization.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::auto::{Automorphism, SigmaDerivation};
use crate::error::{CoreError, Result};
use crate::field::{same_field, Field, FieldElem};

pub struct SkewPolyRing {
    pub field: Field,
    pub sigma: Arc<Automorphism>,
    pub delta: Arc<SigmaDerivation>,
    pub laurent: bool,
}

pub type SkewRing = Arc<SkewPolyRing>;

impl SkewPolyRing {
    pub fn new(
        field: &Field,
        sigma: Arc<Automorphism>,
        delta: Arc<SigmaDerivation>,
        laurent: bool,
    ) -> Result<SkewRing> {
        if laurent && !delta.is_zero() {
            return Err(CoreError::Invalid("laurent ring requires delta = 0".into()));
        }
        if !same_field(sigma.field(), field) || !same_field(delta.field(), field) {
            return Err(CoreError::RingMismatch("sigma/delta defined over a different field".into()));
        }
        Ok(Arc::new(SkewPolyRing { field: field.clone(), sigma, delta, laurent }))
    }

    pub fn automorphism_type(field: &Field, sigma: Arc<Automorphism>) -> SkewRing {
        let delta = SigmaDerivation::zero(field, &sigma);
        SkewPolyRing::new(field, sigma, delta, false).expect("valid ring")
    }

    pub fn zero(self: &SkewRing) -> SkewPoly {
        SkewPoly { ring: self.clone(), coeffs: BTreeMap::new() }
    }

    pub fn one(self: &SkewRing) -> SkewPoly {
        self.from_elem(FieldElem::one(&self.field))
    }

    pub fn x(self: &SkewRing) -> SkewPoly {
        self.monomial(1, FieldElem::one(&self.field))
    }

    pub fn from_elem(self: &SkewRing, c: FieldElem) -> SkewPoly {
        self.monomial(0, c)
    }

    pub fn from_i64(self: &SkewRing, v: i64) -> SkewPoly {
        self.from_elem(FieldElem::from_i64(&self.field, v))
    }

    pub fn monomial(self: &SkewRing, deg: usize, c: FieldElem) -> SkewPoly {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(deg, c);
        }
        SkewPoly { ring: self.clone(), coeffs }
    }
}

pub fn same_ring(a: &SkewRing, b: &SkewRing) -> bool {
    Arc::ptr_eq(a, b)
}

/// Left-coefficient skew polynomial: f = sum c_i x^i.
#[derive(Clone)]
pub struct SkewPoly {
    pub ring: SkewRing,
    coeffs: BTreeMap<usize, FieldElem>,
}

impl PartialEq for SkewPoly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}
impl Eq for SkewPoly {}

impl SkewPoly {
    pub fn coeff(&self, deg: usize) -> FieldElem {
        self.coeffs.get(&deg).cloned().unwrap_or_else(|| FieldElem::zero(&self.ring.field))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (usize, &FieldElem)> {
        self.coeffs.iter().map(|(&d, c)| (d, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.degree() == Some(0) && self.coeff(0).is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.keys().next().copied()
    }

    pub fn leading_coeff(&self) -> FieldElem {
        match self.degree() {
            Some(d) => self.coeff(d),
            None => FieldElem::zero(&self.ring.field),
        }
    }

    fn insert(coeffs: &mut BTreeMap<usize, FieldElem>, deg: usize, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        match coeffs.remove(&deg) {
            None => {
                coeffs.insert(deg, c);
            }
            Some(prev) => {
                let s = prev.add(&c);
                if !s.is_zero() {
                    coeffs.insert(deg, s);
                }
            }
        }
    }

    pub fn add(&self, other: &SkewPoly) -> SkewPoly {
        assert!(same_ring(&self.ring, &other.ring), "ring mismatch");
        let mut coeffs = self.coeffs.clone();
        for (&d, c) in &other.coeffs {
            Self::insert(&mut coeffs, d, c.clone());
        }
        SkewPoly { ring: self.ring.clone(), coeffs }
    }

    pub fn neg(&self) -> SkewPoly {
        SkewPoly {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|(&d, c)| (d, c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &SkewPoly) -> SkewPoly {
        self.add(&other.neg())
    }

    /// Left multiplication by a base-field element: a * (c x^k) = (a c) x^k.
    pub fn scale_left(&self, a: &FieldElem) -> SkewPoly {
        if a.is_zero() {
            return self.ring.zero();
        }
        SkewPoly {
            ring: self.ring.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(&d, c)| (d, a.mul(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// x * f, one application of the defining relation.
    fn x_mul(&self) -> Result<SkewPoly> {
        let mut coeffs = BTreeMap::new();
        for (&d, c) in &self.coeffs {
            Self::insert(&mut coeffs, d + 1, self.ring.sigma.apply(c)?);
            if !self.ring.delta.is_zero() {
                Self::insert(&mut coeffs, d, self.ring.delta.apply(c)?);
            }
        }
        Ok(SkewPoly { ring: self.ring.clone(), coeffs })
    }

    /// x^i * f. With delta = 0 this is the direct twist sigma^i.
    pub fn xpow_mul(&self, i: usize) -> Result<SkewPoly> {
        if self.ring.delta.is_zero() {
            let mut coeffs = BTreeMap::new();
            for (&d, c) in &self.coeffs {
                Self::insert(&mut coeffs, d + i, self.ring.sigma.apply_power(c, i as i64)?);
            }
            return Ok(SkewPoly { ring: self.ring.clone(), coeffs });
        }
        let mut f = self.clone();
        for _ in 0..i {
            f = f.x_mul()?;
        }
        Ok(f)
    }

    /// Product under x*a = sigma(a)x + delta(a), extended additively.
    pub fn mul(&self, other: &SkewPoly) -> SkewPoly {
        assert!(same_ring(&self.ring, &other.ring), "ring mismatch");
        let mut acc = self.ring.zero();
        for (&d, c) in &self.coeffs {
            let piece = other.xpow_mul(d).expect("sigma/delta total on K").scale_left(c);
            acc = acc.add(&piece);
        }
        acc
    }

    pub fn pow(&self, e: usize) -> SkewPoly {
        let mut r = self.ring.one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Leading coefficient scaled to 1 (left scaling).
    pub fn monic(&self) -> SkewPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading_coeff();
        self.scale_left(&lc.inv().expect("nonzero leading coefficient"))
    }

    /// Right Euclidean division: f = q*g + r with deg r < deg g.
    pub fn right_divide(&self, g: &SkewPoly) -> Result<(SkewPoly, SkewPoly)> {
        assert!(same_ring(&self.ring, &g.ring), "ring mismatch");
        if g.is_zero() {
            return Err(CoreError::DivisionByZero);
        }
        let dg = g.degree().unwrap();
        let mut q = self.ring.zero();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dg {
                break;
            }
            let e = dr - dg;
            // leading term of (c x^e) * g is c sigma^e(lc_g) x^dr
            let twisted = self.ring.sigma.apply_power(&g.leading_coeff(), e as i64)?;
            let c = r.leading_coeff().div(&twisted)?;
            let term = self.ring.monomial(e, c);
            q = q.add(&term);
            r = r.sub(&term.mul(g));
        }
        Ok((q, r))
    }

    /// Monic greatest common right divisor.
    pub fn gcrd(&self, other: &SkewPoly) -> SkewPoly {
        let (mut f, mut g) = (self.clone(), other.clone());
        while !g.is_zero() {
            let (_, r) = f.right_divide(&g).expect("g nonzero");
            f = g;
            g = r;
        }
        f.monic()
    }

    /// Least common left multiple with cofactors: m = u*f = v*g, monic, of
    /// minimal degree.
    pub fn lclm(&self, other: &SkewPoly) -> Result<(SkewPoly, SkewPoly, SkewPoly)> {
        if self.is_zero() || other.is_zero() {
            return Err(CoreError::DivisionByZero);
        }
        // extended right Euclid; r_i = u_i*f + v_i*g throughout
        let ring = &self.ring;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut u0, mut u1) = (ring.one(), ring.zero());
        let (mut v0, mut v1) = (ring.zero(), ring.one());
        while !r1.is_zero() {
            let (q, r2) = r0.right_divide(&r1)?;
            let u2 = u0.sub(&q.mul(&u1));
            let v2 = v0.sub(&q.mul(&v1));
            r0 = r1;
            r1 = r2;
            u0 = u1;
            u1 = u2;
            v0 = v1;
            v1 = v2;
        }
        // now u1*f + v1*g = 0, so u1*f = (-v1)*g is the lclm
        let mut u = u1;
        let mut v = v1.neg();
        let m = u.mul(self);
        let lc = m.leading_coeff();
        let inv = lc.inv().expect("lclm has nonzero leading coefficient");
        u = u.scale_left(&inv);
        v = v.scale_left(&inv);
        Ok((m.scale_left(&inv), u, v))
    }
}

impl fmt::Display for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&d, c) in self.coeffs.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{d}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Outcome of the folklore normalization of K[x;sigma,delta].
#[derive(Clone, Debug)]
pub enum NormalizationResult {
    Commutative,
    DerivationType,
    AutomorphismType,
    /// delta is the inner sigma-derivation delta_w; with y = x + w the ring
    /// is K[y;sigma] and y*a = sigma(a)*y.
    TwistedReduced { w: FieldElem },
    /// sigma != id but the candidate w failed on some generator.
    Unreduced { witness: String },
}

/// Classify the ring, reducing sigma != id, delta != 0 to automorphism type
/// via the inner-derivation candidate w = delta(c)/(sigma(c)-c) for the
/// first generator c moved by sigma.
pub fn normalize_ore(ring: &SkewRing) -> Result<NormalizationResult> {
    let sigma_id = ring.sigma.is_identity();
    let delta_zero = ring.delta.is_zero();
    if sigma_id && delta_zero {
        return Ok(NormalizationResult::Commutative);
    }
    if sigma_id {
        return Ok(NormalizationResult::DerivationType);
    }
    if delta_zero {
        return Ok(NormalizationResult::AutomorphismType);
    }
    let moved = ring
        .field
        .materialized_vars()
        .into_iter()
        .find_map(|slot| {
            let vv = FieldElem::var_slot(&ring.field, slot);
            match ring.sigma.apply(&vv) {
                Ok(img) if img != vv => Some((vv, img)),
                _ => None,
            }
        });
    let (c, sc) = match moved {
        Some(p) => p,
        None => {
            return Ok(NormalizationResult::Unreduced {
                witness: "sigma moves no materialized generator".into(),
            })
        }
    };
    let w = ring.delta.apply(&c)?.div(&sc.sub(&c))?;
    // verify delta = delta_w on every generator
    for slot in ring.field.materialized_vars() {
        let a = FieldElem::var_slot(&ring.field, slot);
        let lhs = ring.delta.apply(&a)?;
        let rhs = w.mul(&ring.sigma.apply(&a)?.sub(&a));
        if lhs != rhs {
            return Ok(NormalizationResult::Unreduced {
                witness: format!(
                    "generator {}: delta = {} but w(sigma - id) = {}",
                    ring.field.var_name(slot),
                    lhs,
                    rhs
                ),
            });
        }
    }
    Ok(NormalizationResult::TwistedReduced { w })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios;

    #[test]
    fn defining_relation_sc_b() {
        // x * t = (t+1) x over F5(t), sigma: t -> t+1
        let ring = scenarios::sc_b();
        let t = ring.from_elem(FieldElem::var(&ring.field, "t").unwrap());
        let prod = ring.x().mul(&t);
        let t1 = FieldElem::var(&ring.field, "t").unwrap().add(&FieldElem::one(&ring.field));
        assert_eq!(prod, ring.monomial(1, t1));
    }

    #[test]
    fn defining_relation_sc_a() {
        // x * t = t x + 1 over Q(t), delta = d/dt
        let ring = scenarios::sc_a();
        let tv = FieldElem::var(&ring.field, "t").unwrap();
        let t = ring.from_elem(tv.clone());
        let prod = ring.x().mul(&t);
        let expect = ring.monomial(1, tv).add(&ring.one());
        assert_eq!(prod, expect);
    }

    #[test]
    fn product_example_sc_b() {
        // (x + t + 1)(x - t) = x^2 - (t^2 + t)
        let ring = scenarios::sc_b();
        let tv = FieldElem::var(&ring.field, "t").unwrap();
        let one = FieldElem::one(&ring.field);
        let f = ring.x().add(&ring.from_elem(tv.add(&one)));
        let g = ring.x().sub(&ring.from_elem(tv.clone()));
        let prod = f.mul(&g);
        let expect = ring.monomial(2, one).sub(&ring.from_elem(tv.mul(&tv).add(&tv)));
        assert_eq!(prod, expect);
    }

    #[test]
    fn right_division_sc_b() {
        // x^2 = (x + t + 1)(x - t) + (t^2 + t)
        let ring = scenarios::sc_b();
        let tv = FieldElem::var(&ring.field, "t").unwrap();
        let one = FieldElem::one(&ring.field);
        let f = ring.monomial(2, one.clone());
        let g = ring.x().sub(&ring.from_elem(tv.clone()));
        let (q, r) = f.right_divide(&g).unwrap();
        assert_eq!(q, ring.x().add(&ring.from_elem(tv.add(&one))));
        assert_eq!(r, ring.from_elem(tv.mul(&tv).add(&tv)));
        // round-trip
        assert_eq!(q.mul(&g).add(&r), f);
    }

    #[test]
    fn low_degree_division_is_trivial() {
        let ring = scenarios::sc_b();
        let f = ring.x();
        let g = ring.monomial(2, FieldElem::one(&ring.field));
        let (q, r) = f.right_divide(&g).unwrap();
        assert!(q.is_zero());
        assert_eq!(r, f);
    }

    #[test]
    fn gcrd_commutative_specialization() {
        // sigma = id, delta = 0 over Q: gcrd(x^2 - 1, x - 1) = x - 1
        let ring = scenarios::commutative_q();
        let one = ring.one();
        let f = ring.monomial(2, FieldElem::one(&ring.field)).sub(&one);
        let g = ring.x().sub(&one);
        assert_eq!(f.gcrd(&g), g);
        // gcrd(f, 0) is the monic multiple of f
        let h = ring.monomial(1, FieldElem::from_i64(&ring.field, 3));
        assert_eq!(h.gcrd(&ring.zero()), ring.x());
    }

    #[test]
    fn gcrd_coprime_sc_b() {
        let ring = scenarios::sc_b();
        let tv = FieldElem::var(&ring.field, "t").unwrap();
        let f = ring.x().sub(&ring.from_elem(tv.clone()));
        let g = ring.x().sub(&ring.from_elem(tv.add(&FieldElem::one(&ring.field))));
        assert!(f.gcrd(&g).is_one());
    }

    #[test]
    fn lclm_commutative() {
        // lclm(x, x+1) = x^2 + x
        let ring = scenarios::commutative_q();
        let f = ring.x();
        let g = ring.x().add(&ring.one());
        let (m, u, v) = f.lclm(&g).unwrap();
        let expect = ring.monomial(2, FieldElem::one(&ring.field)).add(&ring.x());
        assert_eq!(m, expect);
        assert_eq!(u.mul(&f), m);
        assert_eq!(v.mul(&g), m);
    }

    #[test]
    fn lclm_of_equal_inputs() {
        let ring = scenarios::sc_b();
        let tv = FieldElem::var(&ring.field, "t").unwrap();
        let f = ring.monomial(1, tv).add(&ring.one());
        let (m, _, _) = f.lclm(&f).unwrap();
        assert_eq!(m, f.monic());
    }

    #[test]
    fn lclm_sc_b_degree_identity() {
        let ring = scenarios::sc_b();
        let tv = FieldElem::var(&ring.field, "t").unwrap();
        let f = ring.x().sub(&ring.from_elem(tv.clone()));
        let g = ring.x().sub(&ring.from_elem(tv.add(&FieldElem::one(&ring.field))));
        let (m, u, v) = f.lclm(&g).unwrap();
        assert_eq!(m.degree(), Some(2));
        assert_eq!(u.mul(&f), m);
        assert_eq!(v.mul(&g), m);
    }

    #[test]
    fn normalize_classification() {
        assert!(matches!(normalize_ore(&scenarios::sc_a()).unwrap(), NormalizationResult::DerivationType));
        assert!(matches!(
            normalize_ore(&scenarios::commutative_q()).unwrap(),
            NormalizationResult::Commutative
        ));
        assert!(matches!(
            normalize_ore(&scenarios::sc_b()).unwrap(),
            NormalizationResult::AutomorphismType
        ));
    }

    #[test]
    fn normalize_twisted_reduced_sc_d() {
        // sigma: t -> t+1, delta(t) = t gives w = t and y = x + t with
        // y*t = (t+1)*y
        let ring = scenarios::sc_d_with_inner_delta();
        let tv = FieldElem::var(&ring.field, "t").unwrap();
        match normalize_ore(&ring).unwrap() {
            NormalizationResult::TwistedReduced { w } => {
                assert_eq!(w, tv);
                // verify (x + w) * t = (t+1) * (x + w) by expansion
                let y = ring.x().add(&ring.from_elem(w));
                let lhs = y.mul(&ring.from_elem(tv.clone()));
                let st = tv.add(&FieldElem::one(&ring.field));
                let rhs = y.scale_left(&st);
                assert_eq!(lhs, rhs);
            }
            other => panic!("expected TwistedReduced, got {other:?}"),
        }
    }

    #[test]
    fn normalize_unreduced_surfaced() {
        let ring = scenarios::sc_d_with_non_inner_delta();
        assert!(matches!(normalize_ore(&ring).unwrap(), NormalizationResult::Unreduced { .. }));
    }
}
