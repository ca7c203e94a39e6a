//! Dense-exponent multivariate polynomials over a coefficient field, with a
//! fixed global graded-lex order. Canonical form (sorted terms, no zeros,
//! trimmed exponent vectors) makes equality a plain comparison.

use std::cmp::Ordering;

use smallvec::SmallVec;

use crate::scalar::{CoeffCtx, Scalar};

pub type Exps = SmallVec<[u32; 4]>;

fn trim_exps(e: &mut Exps) {
    while e.last() == Some(&0) {
        e.pop();
    }
}

/// Graded-lex, slot 0 most significant. Returns Greater when `a` is the
/// larger monomial.
pub fn cmp_mono(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&x| x as u64).sum();
    let db: u64 = b.iter().map(|&x| x as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    let n = a.len().max(b.len());
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        match x.cmp(&y) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Term {
    pub exps: Exps,
    pub coeff: Scalar,
}

/// Terms sorted descending under `cmp_mono`; no zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    pub ctx: CoeffCtx,
    terms: Vec<Term>,
}

impl MPoly {
    pub fn zero(ctx: &CoeffCtx) -> MPoly {
        MPoly { ctx: ctx.clone(), terms: vec![] }
    }

    pub fn one(ctx: &CoeffCtx) -> MPoly {
        MPoly::from_scalar(ctx, ctx.one())
    }

    pub fn from_scalar(ctx: &CoeffCtx, s: Scalar) -> MPoly {
        if s.is_zero() {
            return MPoly::zero(ctx);
        }
        MPoly { ctx: ctx.clone(), terms: vec![Term { exps: Exps::new(), coeff: s }] }
    }

    pub fn from_i64(ctx: &CoeffCtx, v: i64) -> MPoly {
        MPoly::from_scalar(ctx, ctx.from_i64(v))
    }

    pub fn var(ctx: &CoeffCtx, slot: usize) -> MPoly {
        MPoly::var_pow(ctx, slot, 1)
    }

    pub fn var_pow(ctx: &CoeffCtx, slot: usize, e: u32) -> MPoly {
        if e == 0 {
            return MPoly::one(ctx);
        }
        let mut exps: Exps = SmallVec::new();
        exps.resize(slot + 1, 0);
        exps[slot] = e;
        MPoly { ctx: ctx.clone(), terms: vec![Term { exps, coeff: ctx.one() }] }
    }

    pub fn from_terms(ctx: &CoeffCtx, terms: Vec<(Exps, Scalar)>) -> MPoly {
        let mut out: Vec<Term> = terms
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(mut e, c)| {
                trim_exps(&mut e);
                Term { exps: e, coeff: c }
            })
            .collect();
        out.sort_by(|x, y| cmp_mono(&y.exps, &x.exps));
        // merge equal monomials
        let mut merged: Vec<Term> = Vec::with_capacity(out.len());
        for t in out {
            if let Some(last) = merged.last_mut() {
                if last.exps == t.exps {
                    last.coeff = last.coeff.add(&t.coeff);
                    if last.coeff.is_zero() {
                        merged.pop();
                    }
                    continue;
                }
            }
            merged.push(t);
        }
        MPoly { ctx: ctx.clone(), terms: merged }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|t| t.exps.is_empty())
    }

    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(self.ctx.zero());
        }
        if self.is_constant() {
            return Some(self.terms[0].coeff.clone());
        }
        None
    }

    pub fn is_one(&self) -> bool {
        self.as_scalar().map_or(false, |s| s.is_one())
    }

    pub fn leading(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Scalar {
        self.terms.first().map(|t| t.coeff.clone()).unwrap_or_else(|| self.ctx.zero())
    }

    pub fn total_degree(&self) -> u64 {
        self.terms
            .iter()
            .map(|t| t.exps.iter().map(|&x| x as u64).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn max_slot(&self) -> Option<usize> {
        self.terms.iter().filter_map(|t| {
            t.exps.iter().rposition(|&e| e > 0)
        }).max()
    }

    pub fn degree_in(&self, slot: usize) -> u32 {
        self.terms
            .iter()
            .map(|t| t.exps.get(slot).copied().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut terms: Vec<(Exps, Scalar)> = Vec::with_capacity(self.terms.len() + other.terms.len());
        for t in self.terms.iter().chain(other.terms.iter()) {
            terms.push((t.exps.clone(), t.coeff.clone()));
        }
        MPoly::from_terms(&self.ctx, terms)
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|t| Term { exps: t.exps.clone(), coeff: t.coeff.neg() }).collect(),
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn mul_scalar(&self, s: &Scalar) -> MPoly {
        if s.is_zero() {
            return MPoly::zero(&self.ctx);
        }
        MPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term { exps: t.exps.clone(), coeff: t.coeff.mul(s) })
                .filter(|t| !t.coeff.is_zero())
                .collect(),
        }
    }

    pub fn mul_mono(&self, exps: &[u32], s: &Scalar) -> MPoly {
        if s.is_zero() {
            return MPoly::zero(&self.ctx);
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let n = t.exps.len().max(exps.len());
                let mut e: Exps = SmallVec::with_capacity(n);
                for i in 0..n {
                    e.push(t.exps.get(i).copied().unwrap_or(0) + exps.get(i).copied().unwrap_or(0));
                }
                trim_exps(&mut e);
                (e, t.coeff.mul(s))
            })
            .collect();
        MPoly::from_terms(&self.ctx, terms)
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        if self.is_zero() || other.is_zero() {
            return MPoly::zero(&self.ctx);
        }
        let mut terms: Vec<(Exps, Scalar)> = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let n = a.exps.len().max(b.exps.len());
                let mut e: Exps = SmallVec::with_capacity(n);
                for i in 0..n {
                    e.push(a.exps.get(i).copied().unwrap_or(0) + b.exps.get(i).copied().unwrap_or(0));
                }
                trim_exps(&mut e);
                terms.push((e, a.coeff.mul(&b.coeff)));
            }
        }
        MPoly::from_terms(&self.ctx, terms)
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut r = MPoly::one(&self.ctx);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Leading coefficient scaled to 1.
    pub fn monic(&self) -> MPoly {
        match self.leading() {
            None => self.clone(),
            Some(t) => {
                let inv = t.coeff.inv().expect("nonzero leading coefficient");
                self.mul_scalar(&inv)
            }
        }
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &MPoly) -> Option<MPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut q: Vec<(Exps, Scalar)> = vec![];
        let dl = d.leading().unwrap().clone();
        while let Some(rl) = rem.leading() {
            let n = rl.exps.len();
            if dl.exps.len() > n {
                return None;
            }
            let mut e: Exps = SmallVec::with_capacity(n);
            for i in 0..n {
                let a = rl.exps[i];
                let b = dl.exps.get(i).copied().unwrap_or(0);
                if b > a {
                    return None;
                }
                e.push(a - b);
            }
            trim_exps(&mut e);
            let c = rl.coeff.div(&dl.coeff);
            rem = rem.sub(&d.mul_mono(&e, &c));
            q.push((e, c));
        }
        Some(MPoly::from_terms(&self.ctx, q))
    }

    /// Coefficients of `self` viewed as univariate in `slot`, low to high;
    /// entries are polynomials not involving `slot`.
    pub fn coeffs_in(&self, slot: usize) -> Vec<MPoly> {
        let d = self.degree_in(slot) as usize;
        let mut out: Vec<Vec<(Exps, Scalar)>> = vec![vec![]; d + 1];
        for t in &self.terms {
            let e = t.exps.get(slot).copied().unwrap_or(0) as usize;
            let mut rest = t.exps.clone();
            if slot < rest.len() {
                rest[slot] = 0;
            }
            trim_exps(&mut rest);
            out[e].push((rest, t.coeff.clone()));
        }
        out.into_iter().map(|ts| MPoly::from_terms(&self.ctx, ts)).collect()
    }

    pub fn from_coeffs_in(ctx: &CoeffCtx, slot: usize, coeffs: &[MPoly]) -> MPoly {
        let mut terms = vec![];
        for (e, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let m = c.mul(&MPoly::var_pow(ctx, slot, e as u32));
            for t in m.terms {
                terms.push((t.exps, t.coeff));
            }
        }
        MPoly::from_terms(ctx, terms)
    }

    /// Rebuild with variable slots renumbered through `f` (used by shift
    /// automorphisms on indexed families).
    pub fn remap_slots(&self, f: impl Fn(usize) -> usize) -> MPoly {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut e: Exps = SmallVec::new();
                for (i, &x) in t.exps.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    let j = f(i);
                    if e.len() <= j {
                        e.resize(j + 1, 0);
                    }
                    e[j] += x;
                }
                (e, t.coeff.clone())
            })
            .collect();
        MPoly::from_terms(&self.ctx, terms)
    }

    pub fn eval_scalars(&self, point: &[Scalar]) -> Scalar {
        let mut acc = self.ctx.zero();
        for t in &self.terms {
            let mut m = t.coeff.clone();
            for (i, &e) in t.exps.iter().enumerate() {
                for _ in 0..e {
                    m = m.mul(&point[i]);
                }
            }
            acc = acc.add(&m);
        }
        acc
    }
}

/// Pseudo-remainder of `f` by `g` as univariate polynomials in `slot`.
fn prem(f: &MPoly, g: &MPoly, slot: usize) -> MPoly {
    let dg = g.degree_in(slot);
    let gc = g.coeffs_in(slot);
    let lc = gc.last().unwrap().clone();
    let mut r = f.clone();
    while !r.is_zero() {
        let dr = r.degree_in(slot);
        if dr < dg {
            break;
        }
        let rc = r.coeffs_in(slot);
        let rl = rc.last().unwrap().clone();
        // r := lc*r - rl * x^(dr-dg) * g
        let shift = MPoly::var_pow(&f.ctx, slot, dr - dg);
        r = r.mul(&lc).sub(&g.mul(&rl).mul(&shift));
    }
    r
}

fn content_in(f: &MPoly, slot: usize) -> MPoly {
    let mut c = MPoly::zero(&f.ctx);
    for coeff in f.coeffs_in(slot) {
        if coeff.is_zero() {
            continue;
        }
        c = gcd(&c, &coeff);
        if c.is_one() {
            break;
        }
    }
    c
}

/// Monic gcd under the global graded-lex order. Primitive PRS, recursing on
/// the highest variable present.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one(&a.ctx);
    }
    let m = a.max_slot().unwrap_or(0).max(b.max_slot().unwrap_or(0));
    let ca = content_in(a, m);
    let cb = content_in(b, m);
    let cont = gcd(&ca, &cb);
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");
    let (mut f, mut g) = if pa.degree_in(m) >= pb.degree_in(m) { (pa, pb) } else { (pb, pa) };
    loop {
        if g.degree_in(m) == 0 {
            // in particular handles coprime case (nonzero constant w.r.t. m)
            if g.is_zero() {
                break;
            }
            return cont.monic();
        }
        let r = prem(&f, &g, m);
        if r.is_zero() {
            break;
        }
        f = g;
        g = if r.degree_in(m) == 0 {
            r
        } else {
            let rc = content_in(&r, m);
            r.exact_div(&rc).expect("content divides")
        };
    }
    let gc = content_in(&g, m);
    let gp = g.exact_div(&gc).expect("content divides");
    cont.mul(&gp).monic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FfCtx;

    fn q() -> CoeffCtx {
        CoeffCtx::Rat
    }

    #[test]
    fn canonical_ordering_and_merge() {
        let ctx = q();
        let t = MPoly::var(&ctx, 0);
        let p = t.mul(&t).add(&t).add(&t).add(&MPoly::one(&ctx)); // t^2 + 2t + 1
        assert_eq!(p.terms().len(), 3);
        assert_eq!(p.leading().unwrap().exps.as_slice(), &[2][..]);
        let sq = t.add(&MPoly::one(&ctx)).pow(2);
        assert_eq!(p, sq);
    }

    #[test]
    fn exact_div_roundtrip() {
        let ctx = q();
        let t = MPoly::var(&ctx, 0);
        let u = MPoly::var(&ctx, 1);
        let f = t.add(&u).mul(&t.sub(&u)); // t^2 - u^2
        assert_eq!(f.exact_div(&t.add(&u)).unwrap(), t.sub(&u));
        assert!(f.exact_div(&t.add(&MPoly::one(&ctx))).is_none());
    }

    #[test]
    fn gcd_univariate() {
        let ctx = q();
        let t = MPoly::var(&ctx, 0);
        let one = MPoly::one(&ctx);
        let f = t.pow(2).sub(&one); // (t-1)(t+1)
        let g = t.sub(&one).mul(&t.add(&MPoly::from_i64(&ctx, 2)));
        assert_eq!(gcd(&f, &g), t.sub(&one));
    }

    #[test]
    fn gcd_multivariate() {
        let ctx = q();
        let t = MPoly::var(&ctx, 0);
        let u = MPoly::var(&ctx, 1);
        let d = t.mul(&u).add(&MPoly::one(&ctx)); // tu + 1
        let f = d.mul(&t.pow(2).add(&u));
        let g = d.mul(&u.pow(3).sub(&t));
        let h = gcd(&f, &g);
        assert_eq!(h, d.monic());
    }

    #[test]
    fn gcd_mod_p() {
        let ctx = CoeffCtx::Ff(FfCtx::prime(5));
        let t = MPoly::var(&ctx, 0);
        let one = MPoly::one(&ctx);
        let f = t.pow(5).sub(&t); // splits completely over F5
        let g = t.pow(2).sub(&t);
        let h = gcd(&f, &g);
        assert_eq!(h, g.monic());
        assert_eq!(gcd(&one, &f), one);
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        let ctx = q();
        let t = MPoly::var(&ctx, 0);
        let u = MPoly::var(&ctx, 1);
        assert_eq!(gcd(&t, &u), MPoly::one(&ctx));
        assert_eq!(gcd(&t.add(&MPoly::one(&ctx)), &t), MPoly::one(&ctx));
    }
}
