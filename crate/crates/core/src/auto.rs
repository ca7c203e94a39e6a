//! Automorphisms of the base field and sigma-derivations, with probabilistic
//! validators for user-supplied rules.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::field::{sample_elem, Field, FieldElem, VarName};
use crate::mpoly::MPoly;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AutoOrder {
    Finite(u64),
    Infinite,
    Unknown,
}

#[derive(Clone)]
pub enum AutoRule {
    Identity,
    /// Per-variable images with the inverse rule alongside.
    Subst {
        images: HashMap<usize, FieldElem>,
        inverses: HashMap<usize, FieldElem>,
    },
    /// Indexed family shift t[i] -> t[i + offset].
    Shift { offset: i64 },
    /// p^e-power map on constants, identity on variables (GF(p^k) bases).
    Frobenius { e: u32 },
}

pub struct Automorphism {
    field: Field,
    rule: AutoRule,
    order: AutoOrder,
    // sigma^n(var) cache; the principal performance lever for series work
    power_cache: RwLock<HashMap<(usize, i64), FieldElem>>,
}

impl fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.rule {
            AutoRule::Identity => "identity",
            AutoRule::Subst { .. } => "subst",
            AutoRule::Shift { .. } => "shift",
            AutoRule::Frobenius { .. } => "frobenius",
        };
        write!(f, "Automorphism({kind}, order {:?})", self.order)
    }
}

impl Automorphism {
    pub fn identity(field: &Field) -> Arc<Automorphism> {
        Arc::new(Automorphism {
            field: field.clone(),
            rule: AutoRule::Identity,
            order: AutoOrder::Finite(1),
            power_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn subst(
        field: &Field,
        images: HashMap<usize, FieldElem>,
        inverses: HashMap<usize, FieldElem>,
        order: AutoOrder,
    ) -> Arc<Automorphism> {
        Arc::new(Automorphism {
            field: field.clone(),
            rule: AutoRule::Subst { images, inverses },
            order,
            power_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn shift(field: &Field, offset: i64) -> Arc<Automorphism> {
        Arc::new(Automorphism {
            field: field.clone(),
            rule: AutoRule::Shift { offset },
            order: if offset == 0 { AutoOrder::Finite(1) } else { AutoOrder::Infinite },
            power_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn frobenius(field: &Field, e: u32) -> Arc<Automorphism> {
        let k = field.coeff_ctx().prime_components() as u64;
        let order = k / num::integer::gcd(k, e as u64);
        Arc::new(Automorphism {
            field: field.clone(),
            rule: AutoRule::Frobenius { e },
            order: AutoOrder::Finite(order.max(1)),
            power_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rule(&self) -> &AutoRule {
        &self.rule
    }

    pub fn declared_order(&self) -> AutoOrder {
        self.order
    }

    pub fn is_identity(&self) -> bool {
        match &self.rule {
            AutoRule::Identity => true,
            AutoRule::Shift { offset } => *offset == 0,
            AutoRule::Frobenius { e } => *e == 0,
            AutoRule::Subst { images, .. } => images
                .iter()
                .all(|(&s, img)| img == &FieldElem::var_slot(&self.field, s)),
        }
    }

    /// sigma^power(var slot), cached.
    pub fn var_image(&self, slot: usize, power: i64) -> Result<FieldElem> {
        if power == 0 {
            return Ok(FieldElem::var_slot(&self.field, slot));
        }
        if let Some(e) = self.power_cache.read().unwrap().get(&(slot, power)) {
            return Ok(e.clone());
        }
        let img = match &self.rule {
            AutoRule::Identity => FieldElem::var_slot(&self.field, slot),
            AutoRule::Shift { offset } => match self.field.var_name(slot) {
                VarName::Indexed(i) => {
                    let j = self.field.indexed_slot(i + offset * power)?;
                    FieldElem::var_slot(&self.field, j)
                }
                VarName::Named(n) => return Err(CoreError::RuleUndefined(n)),
            },
            AutoRule::Frobenius { .. } => FieldElem::var_slot(&self.field, slot),
            AutoRule::Subst { images, inverses } => {
                let step: i64 = if power > 0 { 1 } else { -1 };
                let table = if power > 0 { images } else { inverses };
                let base = table
                    .get(&slot)
                    .ok_or_else(|| CoreError::RuleUndefined(self.field.var_name(slot).to_string()))?
                    .clone();
                if power == step {
                    base
                } else {
                    // sigma^power(v) = sigma^(power-step)(sigma^step(v))
                    self.apply_power(&base, power - step)?
                }
            }
        };
        self.power_cache.write().unwrap().insert((slot, power), img.clone());
        Ok(img)
    }

    /// sigma^power applied to a field element.
    pub fn apply_power(&self, a: &FieldElem, power: i64) -> Result<FieldElem> {
        if power == 0 || self.is_identity() {
            return Ok(a.clone());
        }
        match &self.rule {
            AutoRule::Identity => Ok(a.clone()),
            AutoRule::Frobenius { e } => {
                let total = (*e as i64) * power;
                let k = self.field.coeff_ctx().prime_components() as i64;
                let eff = total.rem_euclid(k) as u32;
                Ok(map_scalars(a, |s| match s {
                    Scalar::Ff(x) => Scalar::Ff(x.frobenius(eff)),
                    s => s.clone(),
                }))
            }
            AutoRule::Shift { .. } | AutoRule::Subst { .. } => {
                let num = self.subst_poly(a.num(), power)?;
                let den = self.subst_poly(a.den(), power)?;
                num.div(&den).map_err(|_| {
                    CoreError::Invalid("automorphism image has zero denominator".into())
                })
            }
        }
    }

    pub fn apply(&self, a: &FieldElem) -> Result<FieldElem> {
        self.apply_power(a, 1)
    }

    fn subst_poly(&self, p: &MPoly, power: i64) -> Result<FieldElem> {
        let mut acc = FieldElem::zero(&self.field);
        for t in p.terms() {
            let mut m = FieldElem::from_scalar(&self.field, t.coeff.clone());
            for (slot, &e) in t.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let img = self.var_image(slot, power)?;
                m = m.mul(&img.pow(e as i64)?);
            }
            acc = acc.add(&m);
        }
        Ok(acc)
    }

    /// Probabilistic validation: inverse composition on materialized
    /// variables and random elements, homomorphism law on random pairs.
    /// Returns the first failing witness.
    pub fn check_automorphism(&self, trials: u32, seed: u64) -> std::result::Result<(), String> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for slot in self.field.materialized_vars() {
            let v = FieldElem::var_slot(&self.field, slot);
            let round = self
                .apply_power(&self.apply(&v).map_err(|e| e.to_string())?, -1)
                .map_err(|e| e.to_string())?;
            if round != v {
                return Err(format!(
                    "inverse(rule({})) = {} != {}",
                    self.field.var_name(slot),
                    round,
                    v
                ));
            }
            let round2 = self
                .apply(&self.apply_power(&v, -1).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            if round2 != v {
                return Err(format!("rule(inverse({})) != identity", self.field.var_name(slot)));
            }
        }
        for _ in 0..trials {
            let a = sample_elem(&self.field, &mut rng, 2);
            let b = sample_elem(&self.field, &mut rng, 2);
            let sa = self.apply(&a).map_err(|e| e.to_string())?;
            let sb = self.apply(&b).map_err(|e| e.to_string())?;
            if self.apply(&a.add(&b)).map_err(|e| e.to_string())? != sa.add(&sb) {
                return Err(format!("additivity fails at a={a}, b={b}"));
            }
            if self.apply(&a.mul(&b)).map_err(|e| e.to_string())? != sa.mul(&sb) {
                return Err(format!("multiplicativity fails at a={a}, b={b}"));
            }
            let round = self.apply_power(&sa, -1).map_err(|e| e.to_string())?;
            if round != a {
                return Err(format!("inverse(rule(a)) != a at a={a}"));
            }
        }
        Ok(())
    }
}

fn map_scalars(a: &FieldElem, f: impl Fn(&Scalar) -> Scalar) -> FieldElem {
    let conv = |p: &MPoly| {
        MPoly::from_terms(
            &p.ctx,
            p.terms().iter().map(|t| (t.exps.clone(), f(&t.coeff))).collect(),
        )
    };
    FieldElem::from_parts(&a.field, conv(a.num()), conv(a.den())).expect("denominator stays nonzero")
}

/// How a sigma-derivation extends from variable images to all of K. The
/// untwisted law exists only to model invalid user input in validators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtensionLaw {
    Twisted,
    Untwisted,
}

pub struct SigmaDerivation {
    field: Field,
    sigma: Arc<Automorphism>,
    images: HashMap<usize, FieldElem>,
    law: ExtensionLaw,
    zero: bool,
}

impl SigmaDerivation {
    pub fn zero(field: &Field, sigma: &Arc<Automorphism>) -> Arc<SigmaDerivation> {
        Arc::new(SigmaDerivation {
            field: field.clone(),
            sigma: sigma.clone(),
            images: HashMap::new(),
            law: ExtensionLaw::Twisted,
            zero: true,
        })
    }

    pub fn new(
        field: &Field,
        sigma: &Arc<Automorphism>,
        images: HashMap<usize, FieldElem>,
        law: ExtensionLaw,
    ) -> Arc<SigmaDerivation> {
        let zero = images.values().all(|v| v.is_zero());
        Arc::new(SigmaDerivation { field: field.clone(), sigma: sigma.clone(), images, law, zero })
    }

    /// The inner derivation delta_w(a) = w (sigma(a) - a).
    pub fn from_w(field: &Field, sigma: &Arc<Automorphism>, w: &FieldElem) -> Result<Arc<SigmaDerivation>> {
        let mut images = HashMap::new();
        for slot in field.materialized_vars() {
            let v = FieldElem::var_slot(field, slot);
            images.insert(slot, w.mul(&sigma.apply(&v)?.sub(&v)));
        }
        Ok(SigmaDerivation::new(field, sigma, images, ExtensionLaw::Twisted))
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn sigma(&self) -> &Arc<Automorphism> {
        &self.sigma
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn var_image(&self, slot: usize) -> FieldElem {
        self.images.get(&slot).cloned().unwrap_or_else(|| FieldElem::zero(&self.field))
    }

    pub fn apply(&self, a: &FieldElem) -> Result<FieldElem> {
        if self.zero {
            return Ok(FieldElem::zero(&self.field));
        }
        let dp = self.apply_poly(a.num())?;
        if a.den().is_one() {
            return Ok(dp);
        }
        // delta(p/q) from delta(q (p/q)) = delta(p):
        //   twisted:   delta(p) = delta(q)(p/q) + sigma(q) delta(p/q)
        //   untwisted: delta(p) = delta(q)(p/q) + q delta(p/q)
        let dq = self.apply_poly(a.den())?;
        let q = FieldElem::from_poly(&self.field, a.den().clone());
        let twist_q = match self.law {
            ExtensionLaw::Twisted => self.sigma.apply(&q)?,
            ExtensionLaw::Untwisted => q,
        };
        dp.sub(&dq.mul(a)).div(&twist_q)
    }

    fn apply_poly(&self, p: &MPoly) -> Result<FieldElem> {
        let mut acc = FieldElem::zero(&self.field);
        for t in p.terms() {
            // flatten the monomial into variable factors
            let mut factors = vec![];
            for (slot, &e) in t.exps.iter().enumerate() {
                for _ in 0..e {
                    factors.push(slot);
                }
            }
            let d = self.apply_monomial(&factors)?;
            acc = acc.add(&d.mul(&FieldElem::from_scalar(&self.field, t.coeff.clone())));
        }
        Ok(acc)
    }

    fn apply_monomial(&self, factors: &[usize]) -> Result<FieldElem> {
        if factors.is_empty() {
            return Ok(FieldElem::zero(&self.field));
        }
        let v = FieldElem::var_slot(&self.field, factors[0]);
        let dv = self.var_image(factors[0]);
        if factors.len() == 1 {
            return Ok(dv);
        }
        let rest: FieldElem = factors[1..]
            .iter()
            .fold(FieldElem::one(&self.field), |acc, &s| acc.mul(&FieldElem::var_slot(&self.field, s)));
        let drest = self.apply_monomial(&factors[1..])?;
        // delta(v * rest) = delta(v) rest + sigma(v) delta(rest)
        let twist_v = match self.law {
            ExtensionLaw::Twisted => self.sigma.apply(&v)?,
            ExtensionLaw::Untwisted => v,
        };
        Ok(dv.mul(&rest).add(&twist_v.mul(&drest)))
    }

    /// Probabilistic Leibniz validation; reports the failing pair.
    pub fn check_sigma_derivation(&self, trials: u32, seed: u64) -> std::result::Result<(), String> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in 0..trials {
            // first trial uses the simplest witness pair (a, a) on a variable
            let (a, b) = if i == 0 {
                match self.field.materialized_vars().first() {
                    Some(&s) => {
                        let v = FieldElem::var_slot(&self.field, s);
                        (v.clone(), v)
                    }
                    None => continue,
                }
            } else {
                (sample_elem(&self.field, &mut rng, 2), sample_elem(&self.field, &mut rng, 2))
            };
            let lhs = self.apply(&a.mul(&b)).map_err(|e| e.to_string())?;
            let rhs = self
                .apply(&a)
                .map_err(|e| e.to_string())?
                .mul(&b)
                .add(&self.sigma.apply(&a).map_err(|e| e.to_string())?.mul(&self.apply(&b).map_err(|e| e.to_string())?));
            if lhs != rhs {
                return Err(format!("Leibniz fails at a={a}, b={b}: {lhs} != {rhs}"));
            }
            let add_lhs = self.apply(&a.add(&b)).map_err(|e| e.to_string())?;
            let add_rhs =
                self.apply(&a).map_err(|e| e.to_string())?.add(&self.apply(&b).map_err(|e| e.to_string())?);
            if add_lhs != add_rhs {
                return Err(format!("additivity fails at a={a}, b={b}"));
            }
        }
        Ok(())
    }
}
