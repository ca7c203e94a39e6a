//! Ready-made rings used across the test suites, benches, and docs.

use std::collections::HashMap;

use crate::auto::{AutoOrder, Automorphism, ExtensionLaw, SigmaDerivation};
use crate::field::{FieldDescriptor, FieldElem};
use crate::scalar::CoeffCtx;
use crate::skewpoly::{SkewPolyRing, SkewRing};

/// Q(t), sigma = id, delta = d/dt.
pub fn sc_a() -> SkewRing {
    let f = FieldDescriptor::rationals(&["t"]);
    let sigma = Automorphism::identity(&f);
    let slot = f.named_slot("t").unwrap();
    let delta = SigmaDerivation::new(
        &f,
        &sigma,
        HashMap::from([(slot, FieldElem::one(&f))]),
        ExtensionLaw::Twisted,
    );
    SkewPolyRing::new(&f, sigma, delta, false).unwrap()
}

/// F5(t), sigma: t -> t+1 (order 5), delta = 0.
pub fn sc_b() -> SkewRing {
    let f = FieldDescriptor::prime_field(5, &["t"]);
    let slot = f.named_slot("t").unwrap();
    let t = FieldElem::var(&f, "t").unwrap();
    let one = FieldElem::one(&f);
    let sigma = Automorphism::subst(
        &f,
        HashMap::from([(slot, t.add(&one))]),
        HashMap::from([(slot, t.sub(&one))]),
        AutoOrder::Finite(5),
    );
    SkewPolyRing::automorphism_type(&f, sigma)
}

/// F5(t_i : i in Z), sigma the shift t_i -> t_{i+1}, delta = 0.
pub fn sc_c() -> SkewRing {
    let f = FieldDescriptor::indexed(CoeffCtx::Ff(crate::ff::FfCtx::prime(5)), "t");
    let sigma = Automorphism::shift(&f, 1);
    SkewPolyRing::automorphism_type(&f, sigma)
}

/// Q(t), sigma: t -> t+1, delta = 0.
pub fn sc_d() -> SkewRing {
    let f = FieldDescriptor::rationals(&["t"]);
    let slot = f.named_slot("t").unwrap();
    let t = FieldElem::var(&f, "t").unwrap();
    let one = FieldElem::one(&f);
    let sigma = Automorphism::subst(
        &f,
        HashMap::from([(slot, t.add(&one))]),
        HashMap::from([(slot, t.sub(&one))]),
        AutoOrder::Infinite,
    );
    SkewPolyRing::automorphism_type(&f, sigma)
}

/// Q(u,v), sigma: u -> u, v -> uv, delta = 0.
pub fn sc_e() -> SkewRing {
    let f = FieldDescriptor::rationals(&["u", "v"]);
    let us = f.named_slot("u").unwrap();
    let vs = f.named_slot("v").unwrap();
    let u = FieldElem::var(&f, "u").unwrap();
    let v = FieldElem::var(&f, "v").unwrap();
    let sigma = Automorphism::subst(
        &f,
        HashMap::from([(us, u.clone()), (vs, u.mul(&v))]),
        HashMap::from([(us, u.clone()), (vs, v.div(&u).unwrap())]),
        AutoOrder::Infinite,
    );
    SkewPolyRing::automorphism_type(&f, sigma)
}

/// Q(t) with sigma = id, delta = 0: the commutative specialization.
pub fn commutative_q() -> SkewRing {
    let f = FieldDescriptor::rationals(&["t"]);
    let sigma = Automorphism::identity(&f);
    SkewPolyRing::automorphism_type(&f, sigma)
}

/// SC-D plus the inner derivation delta(t) = t (so w = t).
pub fn sc_d_with_inner_delta() -> SkewRing {
    let base = sc_d();
    let f = &base.field;
    let slot = f.named_slot("t").unwrap();
    let t = FieldElem::var(f, "t").unwrap();
    let delta = SigmaDerivation::new(
        f,
        &base.sigma,
        HashMap::from([(slot, t)]),
        ExtensionLaw::Twisted,
    );
    SkewPolyRing::new(f, base.sigma.clone(), delta, false).unwrap()
}

/// Q(t,u), sigma moves only t, delta touches u: not an inner derivation.
pub fn sc_d_with_non_inner_delta() -> SkewRing {
    let f = FieldDescriptor::rationals(&["t", "u"]);
    let ts = f.named_slot("t").unwrap();
    let us = f.named_slot("u").unwrap();
    let t = FieldElem::var(&f, "t").unwrap();
    let u = FieldElem::var(&f, "u").unwrap();
    let one = FieldElem::one(&f);
    let sigma = Automorphism::subst(
        &f,
        HashMap::from([(ts, t.add(&one)), (us, u.clone())]),
        HashMap::from([(ts, t.sub(&one)), (us, u.clone())]),
        AutoOrder::Infinite,
    );
    let delta = SigmaDerivation::new(
        &f,
        &sigma,
        HashMap::from([(ts, t), (us, one)]),
        ExtensionLaw::Twisted,
    );
    SkewPolyRing::new(&f, sigma, delta, false).unwrap()
}

/// F4(y) with sigma the Frobenius on constants, y fixed. Hosts the graded
/// homomorphism y -> 0 onto F4 used by the lifting suites.
pub fn f4_poly_ring() -> SkewRing {
    let f = FieldDescriptor::gf(2, 2, &["y"]);
    let sigma = Automorphism::frobenius(&f, 1);
    SkewPolyRing::automorphism_type(&f, sigma)
}

/// F4 itself (no variables), sigma = Frobenius.
pub fn f4_ring() -> SkewRing {
    let f = FieldDescriptor::gf(2, 2, &[]);
    let sigma = Automorphism::frobenius(&f, 1);
    SkewPolyRing::automorphism_type(&f, sigma)
}
