//! Base fields K: prime fields, GF(p^k), and multivariate rational function
//! fields over them, including an indexed variable family t_i (i in Z)
//! materialized lazily.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::ff::FfCtx;
use crate::mpoly::{gcd, MPoly};
use crate::scalar::{CoeffCtx, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarName {
    Named(String),
    Indexed(i64),
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarName::Named(s) => write!(f, "{s}"),
            VarName::Indexed(i) => write!(f, "t[{i}]"),
        }
    }
}

#[derive(Default)]
struct Registry {
    names: Vec<VarName>,
    by_name: HashMap<String, usize>,
    by_index: HashMap<i64, usize>,
}

/// Descriptor of a base field K. The variable registry is append-only: slots
/// are assigned in registration order, which fixes the global monomial order.
pub struct FieldDescriptor {
    ctx: CoeffCtx,
    indexed_family: Option<String>,
    registry: RwLock<Registry>,
}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldDescriptor(char {}, vars ", self.ctx.characteristic())?;
        for v in self.materialized_vars() {
            write!(f, "{} ", self.var_name(v))?;
        }
        write!(f, ")")
    }
}

pub type Field = Arc<FieldDescriptor>;

impl FieldDescriptor {
    pub fn rationals(vars: &[&str]) -> Field {
        Self::with_ctx(CoeffCtx::Rat, vars)
    }

    pub fn prime_field(p: u64, vars: &[&str]) -> Field {
        Self::with_ctx(CoeffCtx::Ff(FfCtx::prime(p)), vars)
    }

    pub fn gf(p: u64, k: usize, vars: &[&str]) -> Field {
        Self::with_ctx(CoeffCtx::Ff(FfCtx::extension_default(p, k)), vars)
    }

    pub fn with_ctx(ctx: CoeffCtx, vars: &[&str]) -> Field {
        let desc = FieldDescriptor {
            ctx,
            indexed_family: None,
            registry: RwLock::new(Registry::default()),
        };
        for v in vars {
            desc.register_named(v);
        }
        Arc::new(desc)
    }

    /// Field with an indexed family `base[i]`, i in Z, materialized on demand.
    pub fn indexed(ctx: CoeffCtx, base: &str) -> Field {
        Arc::new(FieldDescriptor {
            ctx,
            indexed_family: Some(base.to_string()),
            registry: RwLock::new(Registry::default()),
        })
    }

    pub fn coeff_ctx(&self) -> &CoeffCtx {
        &self.ctx
    }

    pub fn characteristic(&self) -> u64 {
        self.ctx.characteristic()
    }

    pub fn indexed_family(&self) -> Option<&str> {
        self.indexed_family.as_deref()
    }

    fn register_named(&self, name: &str) -> usize {
        let mut reg = self.registry.write().unwrap();
        if let Some(&s) = reg.by_name.get(name) {
            return s;
        }
        let slot = reg.names.len();
        reg.names.push(VarName::Named(name.to_string()));
        reg.by_name.insert(name.to_string(), slot);
        slot
    }

    /// Materialize (or look up) the indexed variable `base[i]`.
    pub fn indexed_slot(&self, i: i64) -> Result<usize> {
        if self.indexed_family.is_none() {
            return Err(CoreError::VarUndefined(format!("t[{i}] (no indexed family declared)")));
        }
        let mut reg = self.registry.write().unwrap();
        if let Some(&s) = reg.by_index.get(&i) {
            return Ok(s);
        }
        let slot = reg.names.len();
        reg.names.push(VarName::Indexed(i));
        reg.by_index.insert(i, slot);
        Ok(slot)
    }

    pub fn named_slot(&self, name: &str) -> Result<usize> {
        let reg = self.registry.read().unwrap();
        reg.by_name
            .get(name)
            .copied()
            .ok_or_else(|| CoreError::VarUndefined(name.to_string()))
    }

    pub fn var_name(&self, slot: usize) -> VarName {
        self.registry.read().unwrap().names[slot].clone()
    }

    pub fn materialized_vars(&self) -> Vec<usize> {
        (0..self.registry.read().unwrap().names.len()).collect()
    }

    pub fn num_vars(&self) -> usize {
        self.registry.read().unwrap().names.len()
    }
}

/// Whether two descriptors denote the same field object.
pub fn same_field(a: &Field, b: &Field) -> bool {
    Arc::ptr_eq(a, b)
}

/// Exact element of K in canonical form: coprime numerator/denominator with
/// monic denominator under the global graded-lex order.
#[derive(Clone)]
pub struct FieldElem {
    pub field: Field,
    num: MPoly,
    den: MPoly,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}
impl Eq for FieldElem {}

impl FieldElem {
    pub fn from_parts(field: &Field, num: MPoly, den: MPoly) -> Result<FieldElem> {
        if den.is_zero() {
            return Err(CoreError::DivisionByZero);
        }
        let mut e = FieldElem { field: field.clone(), num, den };
        e.normalize();
        Ok(e)
    }

    pub fn from_poly(field: &Field, num: MPoly) -> FieldElem {
        let den = MPoly::one(field.coeff_ctx());
        FieldElem { field: field.clone(), num, den }
    }

    pub fn zero(field: &Field) -> FieldElem {
        Self::from_poly(field, MPoly::zero(field.coeff_ctx()))
    }

    pub fn one(field: &Field) -> FieldElem {
        Self::from_poly(field, MPoly::one(field.coeff_ctx()))
    }

    pub fn from_i64(field: &Field, v: i64) -> FieldElem {
        Self::from_poly(field, MPoly::from_i64(field.coeff_ctx(), v))
    }

    pub fn from_scalar(field: &Field, s: Scalar) -> FieldElem {
        Self::from_poly(field, MPoly::from_scalar(field.coeff_ctx(), s))
    }

    pub fn var(field: &Field, name: &str) -> Result<FieldElem> {
        let slot = field.named_slot(name)?;
        Ok(Self::from_poly(field, MPoly::var(field.coeff_ctx(), slot)))
    }

    pub fn indexed_var(field: &Field, i: i64) -> Result<FieldElem> {
        let slot = field.indexed_slot(i)?;
        Ok(Self::from_poly(field, MPoly::var(field.coeff_ctx(), slot)))
    }

    pub fn var_slot(field: &Field, slot: usize) -> FieldElem {
        Self::from_poly(field, MPoly::var(field.coeff_ctx(), slot))
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = MPoly::one(&self.num.ctx);
            return;
        }
        let g = gcd(&self.num, &self.den);
        if !g.is_one() {
            self.num = self.num.exact_div(&g).expect("gcd divides numerator");
            self.den = self.den.exact_div(&g).expect("gcd divides denominator");
        }
        let lc = self.den.leading_coeff();
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero denominator");
            self.num = self.num.mul_scalar(&inv);
            self.den = self.den.mul_scalar(&inv);
        }
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&MPoly> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn add(&self, other: &FieldElem) -> FieldElem {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        FieldElem::from_parts(&self.field, num, den).expect("nonzero denominator")
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FieldElem {
        FieldElem { field: self.field.clone(), num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        let num = self.num.mul(&other.num);
        let den = self.den.mul(&other.den);
        FieldElem::from_parts(&self.field, num, den).expect("nonzero denominator")
    }

    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(CoreError::DivisionByZero);
        }
        FieldElem::from_parts(&self.field, self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<FieldElem> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut r = FieldElem::one(&self.field);
        for _ in 0..e.unsigned_abs() {
            r = r.mul(&base);
        }
        Ok(r)
    }
}

/// Deterministic sampling of field elements, used by the probabilistic
/// validators and property suites.
pub fn sample_elem(field: &Field, rng: &mut ChaCha8Rng, max_deg: u32) -> FieldElem {
    let num = sample_poly(field, rng, max_deg);
    loop {
        let den = sample_poly(field, rng, max_deg);
        if !den.is_zero() {
            return FieldElem::from_parts(field, num, den).unwrap();
        }
    }
}

pub fn sample_poly(field: &Field, rng: &mut ChaCha8Rng, max_deg: u32) -> MPoly {
    let ctx = field.coeff_ctx();
    let vars = field.materialized_vars();
    let mut acc = MPoly::from_i64(ctx, rng.gen_range(-4..=4));
    if vars.is_empty() {
        return acc;
    }
    let nterms = rng.gen_range(1..=3);
    for _ in 0..nterms {
        let mut mono = MPoly::from_i64(ctx, rng.gen_range(-4..=4));
        let deg = rng.gen_range(0..=max_deg);
        for _ in 0..deg {
            let v = vars[rng.gen_range(0..vars.len())];
            mono = mono.mul(&MPoly::var(ctx, v));
        }
        acc = acc.add(&mono);
    }
    acc
}

pub fn sample_nonzero_elem(field: &Field, rng: &mut ChaCha8Rng, max_deg: u32) -> FieldElem {
    loop {
        let e = sample_elem(field, rng, max_deg);
        if !e.is_zero() {
            return e;
        }
    }
}

// ---- display ----

impl FieldDescriptor {
    pub fn fmt_poly(&self, p: &MPoly) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, t) in p.terms().iter().enumerate() {
            let neg = t.coeff.is_display_negative();
            if i == 0 {
                if neg {
                    out.push_str("-");
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let c = t.coeff.abs_display();
            let mut factors: Vec<String> = vec![];
            if t.exps.iter().all(|&e| e == 0) {
                factors.push(format!("{c}"));
            } else {
                if !c.is_one() {
                    factors.push(format!("{c}"));
                }
                for (slot, &e) in t.exps.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    let name = self.var_name(slot);
                    if e == 1 {
                        factors.push(format!("{name}"));
                    } else {
                        factors.push(format!("{name}^{e}"));
                    }
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.field.fmt_poly(&self.num);
        if self.den.is_one() {
            write!(f, "({n})")
        } else {
            write!(f, "({n})/({})", self.field.fmt_poly(&self.den))
        }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn canonical_form_common_factor() {
        // a/b equals (ca)/(cb)
        let f = FieldDescriptor::rationals(&["t"]);
        let t = FieldElem::var(&f, "t").unwrap();
        let one = FieldElem::one(&f);
        let a = t.add(&one);
        let b = t.mul(&t).sub(&one);
        let x = a.div(&b).unwrap();
        let c = t.add(&FieldElem::from_i64(&f, 7));
        let y = a.mul(&c).div(&b.mul(&c)).unwrap();
        assert_eq!(x, y);
        // 1/(t-1) after cancellation
        assert_eq!(x, one.div(&t.sub(&one)).unwrap());
    }

    #[test]
    fn normalization_idempotent() {
        let f = FieldDescriptor::prime_field(5, &["t"]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let a = sample_elem(&f, &mut rng, 3);
            let renorm = FieldElem::from_parts(&f, a.num().clone(), a.den().clone()).unwrap();
            assert_eq!(a, renorm);
        }
    }

    #[test]
    fn field_axioms_sampled() {
        let f = FieldDescriptor::rationals(&["t", "u"]);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = sample_elem(&f, &mut rng, 2);
            let b = sample_elem(&f, &mut rng, 2);
            let c = sample_elem(&f, &mut rng, 2);
            assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            if !a.is_zero() {
                assert!(a.mul(&a.inv().unwrap()).is_one());
            }
        }
    }

    #[test]
    fn indexed_family_materializes() {
        let f = FieldDescriptor::indexed(CoeffCtx::Ff(crate::ff::FfCtx::prime(5)), "t");
        let t0 = FieldElem::indexed_var(&f, 0).unwrap();
        let t3 = FieldElem::indexed_var(&f, 3).unwrap();
        let t0b = FieldElem::indexed_var(&f, 0).unwrap();
        assert_eq!(t0, t0b);
        assert_ne!(t0, t3);
        assert_eq!(f.num_vars(), 2);
    }
}
