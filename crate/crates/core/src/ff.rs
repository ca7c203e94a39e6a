//! Finite fields GF(p^k) with an explicitly pinned monic modulus.
//!
//! Elements are polynomials in a generator `w` modulo the context's
//! irreducible polynomial. `k = 1` (empty modulus) is the prime field case
//! and stays on the single-word fast path.

use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

/// Context for GF(p^k). `modulus` holds the lower coefficients of the monic
/// degree-k modulus `w^k + m[k-1] w^{k-1} + ... + m[0]`; an empty modulus
/// means the prime field F_p.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct FfCtx {
    pub p: u64,
    pub modulus: Vec<u64>,
}

impl FfCtx {
    pub fn prime(p: u64) -> Arc<FfCtx> {
        assert!(is_prime(p), "characteristic must be prime");
        Arc::new(FfCtx { p, modulus: vec![] })
    }

    /// GF(p^k) with the given monic modulus (lower coefficients, length k).
    pub fn extension(p: u64, modulus: Vec<u64>) -> Arc<FfCtx> {
        assert!(is_prime(p));
        assert!(!modulus.is_empty());
        let modulus: Vec<u64> = modulus.iter().map(|&c| c % p).collect();
        Arc::new(FfCtx { p, modulus })
    }

    /// GF(p^k) with the lexicographically smallest monic irreducible modulus.
    /// Deterministic, so results are reproducible without a pinned file.
    pub fn extension_default(p: u64, k: usize) -> Arc<FfCtx> {
        if k <= 1 {
            return FfCtx::prime(p);
        }
        let modulus = smallest_irreducible(p, k);
        Arc::new(FfCtx { p, modulus })
    }

    pub fn degree(&self) -> usize {
        self.modulus.len().max(1)
    }

    /// Field size p^k as u128.
    pub fn size(&self) -> u128 {
        (self.p as u128).pow(self.degree() as u32)
    }

    pub fn zero(self: &Arc<Self>) -> FfElem {
        FfElem { ctx: self.clone(), c: SmallVec::new() }
    }

    pub fn one(self: &Arc<Self>) -> FfElem {
        self.from_u64(1)
    }

    pub fn from_u64(self: &Arc<Self>, v: u64) -> FfElem {
        let v = v % self.p;
        let mut c = SmallVec::new();
        if v != 0 {
            c.push(v);
        }
        FfElem { ctx: self.clone(), c }
    }

    pub fn from_i64(self: &Arc<Self>, v: i64) -> FfElem {
        let p = self.p as i64;
        self.from_u64(v.rem_euclid(p) as u64)
    }

    /// The generator `w` (only meaningful for k > 1).
    pub fn gen(self: &Arc<Self>) -> FfElem {
        assert!(!self.modulus.is_empty(), "prime field has no generator");
        FfElem { ctx: self.clone(), c: SmallVec::from_slice(&[0, 1]) }
    }

    /// Element from low-to-high coefficients of a polynomial in `w`.
    pub fn from_coeffs(self: &Arc<Self>, coeffs: &[u64]) -> FfElem {
        let mut c: SmallVec<[u64; 2]> = coeffs.iter().map(|&v| v % self.p).collect();
        reduce(self, &mut c);
        FfElem { ctx: self.clone(), c }
    }

    /// All field elements in a fixed order (coefficient-lex, low digit fastest).
    pub fn iter_elems(self: &Arc<Self>) -> impl Iterator<Item = FfElem> {
        let ctx = self.clone();
        let k = self.degree();
        let p = self.p;
        let total = self.size();
        (0..total).map(move |mut n| {
            let mut c: SmallVec<[u64; 2]> = SmallVec::new();
            for _ in 0..k {
                c.push((n % p as u128) as u64);
                n /= p as u128;
            }
            trim(&mut c);
            FfElem { ctx: ctx.clone(), c }
        })
    }
}

/// Element of GF(p^k): coefficients low-to-high, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FfElem {
    pub ctx: Arc<FfCtx>,
    c: SmallVec<[u64; 2]>,
}

fn trim(c: &mut SmallVec<[u64; 2]>) {
    while c.last() == Some(&0) {
        c.pop();
    }
}

fn reduce(ctx: &FfCtx, c: &mut SmallVec<[u64; 2]>) {
    let k = ctx.modulus.len();
    if k == 0 {
        c.truncate(1);
        trim(c);
        return;
    }
    let p = ctx.p;
    while c.len() > k {
        let top = c.pop().unwrap();
        if top != 0 {
            let d = c.len() - k;
            for (j, &m) in ctx.modulus.iter().enumerate() {
                let sub = mulmod(top, m, p);
                c[d + j] = (c[d + j] + p - sub) % p;
            }
        }
    }
    trim(c);
}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    // deterministic Miller-Rabin for u64
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'wit: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'wit;
            }
        }
        return false;
    }
    true
}

impl FfElem {
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    fn check_ctx(&self, other: &FfElem) {
        assert!(
            Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx,
            "finite field context mismatch"
        );
    }

    pub fn add(&self, other: &FfElem) -> FfElem {
        self.check_ctx(other);
        let p = self.ctx.p;
        let n = self.c.len().max(other.c.len());
        let mut c: SmallVec<[u64; 2]> = SmallVec::new();
        for i in 0..n {
            let a = self.c.get(i).copied().unwrap_or(0);
            let b = other.c.get(i).copied().unwrap_or(0);
            c.push((a + b) % p);
        }
        trim(&mut c);
        FfElem { ctx: self.ctx.clone(), c }
    }

    pub fn neg(&self) -> FfElem {
        let p = self.ctx.p;
        let c = self.c.iter().map(|&a| (p - a) % p).collect();
        FfElem { ctx: self.ctx.clone(), c }
    }

    pub fn sub(&self, other: &FfElem) -> FfElem {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FfElem) -> FfElem {
        self.check_ctx(other);
        if self.is_zero() || other.is_zero() {
            return self.ctx.zero();
        }
        let p = self.ctx.p;
        let mut c: SmallVec<[u64; 2]> = SmallVec::new();
        c.resize(self.c.len() + other.c.len() - 1, 0);
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                c[i + j] = (c[i + j] + mulmod(a, b, p)) % p;
            }
        }
        reduce(&self.ctx, &mut c);
        FfElem { ctx: self.ctx.clone(), c }
    }

    pub fn inv(&self) -> Option<FfElem> {
        if self.is_zero() {
            return None;
        }
        let p = self.ctx.p;
        if self.ctx.modulus.is_empty() {
            return Some(FfElem {
                ctx: self.ctx.clone(),
                c: SmallVec::from_slice(&[powmod(self.c[0], p - 2, p)]),
            });
        }
        // extended Euclid in F_p[w] against the modulus
        let mut m: Vec<u64> = self.ctx.modulus.clone();
        m.push(1);
        let a: Vec<u64> = self.c.to_vec();
        let (g, _, t) = poly_ext_gcd(&m, &a, p);
        assert_eq!(g.len(), 1, "modulus not coprime to element; modulus reducible?");
        let ginv = powmod(g[0], p - 2, p);
        let mut c: SmallVec<[u64; 2]> = t.iter().map(|&x| mulmod(x, ginv, p)).collect();
        reduce(&self.ctx, &mut c);
        Some(FfElem { ctx: self.ctx.clone(), c })
    }

    pub fn pow(&self, mut e: u128) -> FfElem {
        let mut base = self.clone();
        let mut r = self.ctx.one();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        r
    }

    /// q-power Frobenius, q = p^e.
    pub fn frobenius(&self, e: u32) -> FfElem {
        self.pow((self.ctx.p as u128).pow(e))
    }
}

/// Extended gcd of dense low-to-high polynomials over F_p.
/// Returns (g, s, t) with s*a + t*b = g.
fn poly_ext_gcd(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    fn deg(v: &[u64]) -> Option<usize> {
        v.iter().rposition(|&c| c != 0)
    }
    fn trimv(mut v: Vec<u64>) -> Vec<u64> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }
    let (mut r0, mut r1) = (trimv(a.to_vec()), trimv(b.to_vec()));
    let (mut s0, mut s1) = (vec![1u64], vec![]);
    let (mut t0, mut t1) = (vec![], vec![1u64]);
    while !r1.is_empty() {
        // divide r0 by r1
        let d1 = deg(&r1).unwrap();
        let lc1_inv = powmod(r1[d1], p - 2, p);
        let mut q = vec![0u64; r0.len().saturating_sub(d1)];
        let mut rem = r0.clone();
        while let Some(d0) = deg(&rem) {
            if d0 < d1 {
                break;
            }
            let f = mulmod(rem[d0], lc1_inv, p);
            q[d0 - d1] = f;
            for (j, &c) in r1.iter().enumerate() {
                let idx = d0 - d1 + j;
                rem[idx] = (rem[idx] + p - mulmod(f, c, p)) % p;
            }
        }
        let rem = trimv(rem);
        let sub = |x0: &[u64], x1: &[u64], q: &[u64]| -> Vec<u64> {
            // x0 - q*x1
            let mut out = x0.to_vec();
            let qlen = q.len();
            let need = if x1.is_empty() { 0 } else { qlen + x1.len() - 1 };
            if out.len() < need {
                out.resize(need, 0);
            }
            for (i, &qi) in q.iter().enumerate() {
                if qi == 0 {
                    continue;
                }
                for (j, &xj) in x1.iter().enumerate() {
                    out[i + j] = (out[i + j] + p - mulmod(qi, xj, p)) % p;
                }
            }
            trimv(out)
        };
        let s2 = sub(&s0, &s1, &q);
        let t2 = sub(&t0, &t1, &q);
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    (r0, s0, t0)
}

/// Lexicographically smallest monic irreducible of degree k over F_p,
/// returned as its lower coefficients.
pub fn smallest_irreducible(p: u64, k: usize) -> Vec<u64> {
    let mut lower = vec![0u64; k];
    loop {
        if is_irreducible(&lower, p) {
            return lower;
        }
        // increment lower coefficients, low digit fastest
        let mut i = 0;
        loop {
            lower[i] += 1;
            if lower[i] < p {
                break;
            }
            lower[i] = 0;
            i += 1;
            assert!(i < k, "no irreducible of degree {k} over F_{p}?");
        }
    }
}

fn is_irreducible(lower: &[u64], p: u64) -> bool {
    let k = lower.len();
    if lower[0] == 0 {
        return false; // divisible by w
    }
    let ctx = Arc::new(FfCtx { p, modulus: lower.to_vec() });
    // w^(p^k) == w, and w^(p^(k/q)) - w a unit (no common root) for prime q | k
    let w = ctx.gen();
    if w.frobenius(k as u32) != w {
        return false;
    }
    let mut kk = k;
    let mut q = 2;
    let mut prime_divs = vec![];
    while kk > 1 {
        if kk % q == 0 {
            prime_divs.push(q);
            while kk % q == 0 {
                kk /= q;
            }
        }
        q += 1;
    }
    for q in prime_divs {
        let e = (k / q) as u32;
        let d = w.frobenius(e).sub(&w);
        // gcd(w^(p^e) - w, modulus) must be 1: since modulus may be reducible
        // here, test via polynomial gcd directly
        if d.is_zero() {
            return false;
        }
        let mut m: Vec<u64> = lower.to_vec();
        m.push(1);
        let (g, _, _) = poly_ext_gcd(&m, d.coeffs(), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

impl fmt::Debug for FfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.c.len() == 1 {
            return write!(f, "{}", self.c[0]);
        }
        let mut first = true;
        for (i, &c) in self.c.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 if c == 1 => write!(f, "w")?,
                1 => write!(f, "{c}*w")?,
                _ if c == 1 => write!(f, "w^{i}")?,
                _ => write!(f, "{c}*w^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_arithmetic() {
        // F4 with modulus w^2 + w + 1
        let ctx = FfCtx::extension(2, vec![1, 1]);
        let w = ctx.gen();
        let w2 = w.mul(&w);
        // w^2 = w + 1
        assert_eq!(w2, ctx.from_coeffs(&[1, 1]));
        // w^3 = 1
        assert_eq!(w2.mul(&w), ctx.one());
        // inverse of w is w^2
        assert_eq!(w.inv().unwrap(), w2);
    }

    #[test]
    fn prime_field_inverse() {
        let ctx = FfCtx::prime(5);
        for v in 1..5 {
            let a = ctx.from_u64(v);
            assert_eq!(a.mul(&a.inv().unwrap()), ctx.one());
        }
    }

    #[test]
    fn smallest_irreducible_deg2_f2() {
        // x^2 + x + 1 is the only irreducible quadratic over F2
        assert_eq!(smallest_irreducible(2, 2), vec![1, 1]);
    }

    #[test]
    fn frobenius_fixes_prime_field() {
        let ctx = FfCtx::extension_default(3, 2);
        for v in 0..3 {
            let a = ctx.from_u64(v);
            assert_eq!(a.frobenius(1), a);
        }
        let w = ctx.gen();
        assert_ne!(w.frobenius(1), w);
        assert_eq!(w.frobenius(2), w);
    }

    #[test]
    fn all_elems_enumerated_once() {
        let ctx = FfCtx::extension_default(2, 2);
        let v: Vec<_> = ctx.iter_elems().collect();
        assert_eq!(v.len(), 4);
        for a in &v {
            assert_eq!(v.iter().filter(|b| *b == a).count(), 1);
        }
    }
}
