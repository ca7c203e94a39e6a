//! Coefficient scalars: exact rationals in characteristic 0, GF(p^k)
//! elements otherwise.

use std::fmt;
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::ff::{FfCtx, FfElem};

/// The coefficient domain a polynomial lives over.
#[derive(Clone, Debug)]
pub enum CoeffCtx {
    Rat,
    Ff(Arc<FfCtx>),
}

impl PartialEq for CoeffCtx {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (CoeffCtx::Rat, CoeffCtx::Rat) => true,
            (CoeffCtx::Ff(a), CoeffCtx::Ff(b)) => Arc::ptr_eq(a, b) || a == b,
            _ => false,
        }
    }
}
impl Eq for CoeffCtx {}

impl CoeffCtx {
    pub fn characteristic(&self) -> u64 {
        match self {
            CoeffCtx::Rat => 0,
            CoeffCtx::Ff(c) => c.p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            CoeffCtx::Rat => Scalar::Rat(BigRational::zero()),
            CoeffCtx::Ff(c) => Scalar::Ff(c.zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            CoeffCtx::Rat => Scalar::Rat(BigRational::one()),
            CoeffCtx::Ff(c) => Scalar::Ff(c.one()),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            CoeffCtx::Rat => Scalar::Rat(BigRational::from(BigInt::from(v))),
            CoeffCtx::Ff(c) => Scalar::Ff(c.from_i64(v)),
        }
    }

    /// Number of prime-field components an element carries (1, or k for
    /// GF(p^k)); used when flattening to prime-field coordinates.
    pub fn prime_components(&self) -> usize {
        match self {
            CoeffCtx::Rat => 1,
            CoeffCtx::Ff(c) => c.degree(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Ff(FfElem),
}

impl Scalar {
    pub fn ctx(&self) -> CoeffCtx {
        match self {
            Scalar::Rat(_) => CoeffCtx::Rat,
            Scalar::Ff(e) => CoeffCtx::Ff(e.ctx.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Ff(e) => e.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Ff(e) => e == &e.ctx.one(),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Ff(a), Scalar::Ff(b)) => Scalar::Ff(a.add(b)),
            _ => panic!("scalar context mismatch"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            (Scalar::Ff(a), Scalar::Ff(b)) => Scalar::Ff(a.sub(b)),
            _ => panic!("scalar context mismatch"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Ff(a) => Scalar::Ff(a.neg()),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Ff(a), Scalar::Ff(b)) => Scalar::Ff(a.mul(b)),
            _ => panic!("scalar context mismatch"),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(a) => {
                if a.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(a.recip()))
                }
            }
            Scalar::Ff(a) => a.inv().map(Scalar::Ff),
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv().expect("division by zero scalar"))
    }

    /// Coordinates over the prime subfield, indexed by component.
    /// Rationals are their own single coordinate; GF(p^k) elements flatten to
    /// k residues mod p (as prime-field scalars of the same p).
    pub fn prime_coords(&self) -> Vec<(usize, Scalar)> {
        match self {
            Scalar::Rat(_) => vec![(0, self.clone())],
            Scalar::Ff(e) => {
                let prime = FfCtx::prime(e.ctx.p);
                e.coeffs()
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| (i, Scalar::Ff(prime.from_u64(c))))
                    .collect()
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Ff(e) => {
                if e.coeffs().len() > 1 {
                    write!(f, "({e})")
                } else {
                    write!(f, "{e}")
                }
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Scalar {
    /// True when printed without a leading minus (rationals only; finite
    /// field scalars always print as residues).
    pub fn is_display_negative(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_negative(),
            Scalar::Ff(_) => false,
        }
    }

    pub fn abs_display(&self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(r.abs()),
            s => s.clone(),
        }
    }
}
