//! Scenario files: a line-oriented `key = value` format in named sections
//! `[field] [sigma] [delta] [generators] [params]`, parsed and validated
//! into live ring objects. The digest hashes a canonical re-serialization,
//! so it is stable under whitespace and comment changes.

use std::collections::HashMap;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use sha2::{Digest, Sha256};

use orefree_core::auto::{AutoOrder, Automorphism, ExtensionLaw, SigmaDerivation};
use orefree_core::constructions::{monomial_subst, sanchez_pair};
use orefree_core::ff::FfCtx;
use orefree_core::field::{Field, FieldDescriptor};
use orefree_core::parse::{parse_elem, parse_poly};
use orefree_core::prounip::ProUnipotent;
use orefree_core::skewpoly::{SkewPolyRing, SkewRing};
use orefree_core::CoeffCtx;

#[derive(Clone, Debug, Default)]
pub struct RawScenario {
    /// section -> ordered (key, value, line) entries
    pub sections: Vec<(String, Vec<(String, String, usize)>)>,
}

impl RawScenario {
    pub fn section(&self, name: &str) -> Option<&[(String, String, usize)]> {
        self.sections
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, kv)| kv.as_slice())
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.section(section)?
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, v, _)| v.as_str())
    }

    /// Whitespace- and comment-insensitive content hash.
    pub fn digest(&self) -> String {
        let mut canon = String::new();
        for (name, kv) in &self.sections {
            canon.push_str(&format!("[{name}]\n"));
            let mut sorted: Vec<_> = kv.iter().collect();
            sorted.sort_by(|a, b| a.0.cmp(&b.0));
            for (k, v, _) in sorted {
                let v: String = v.split_whitespace().collect::<Vec<_>>().join(" ");
                canon.push_str(&format!("{k}={v}\n"));
            }
        }
        let mut h = Sha256::new();
        h.update(canon.as_bytes());
        format!("{:x}", h.finalize())
    }
}

pub fn parse_scenario_text(text: &str) -> Result<RawScenario> {
    let mut raw = RawScenario::default();
    let mut current: Option<usize> = None;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let name = name.trim().to_string();
            if raw.sections.iter().any(|(n, _)| *n == name) {
                bail!("line {lineno}: duplicate section [{name}]");
            }
            raw.sections.push((name, Vec::new()));
            current = Some(raw.sections.len() - 1);
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("line {lineno}: expected `key = value` or `[section]`, got {line:?}");
        };
        let Some(cur) = current else {
            bail!("line {lineno}: entry before any [section] header");
        };
        raw.sections[cur]
            .1
            .push((k.trim().to_string(), v.trim().to_string(), lineno));
    }
    Ok(raw)
}

#[derive(Clone, Debug)]
pub struct Params {
    pub max_len: usize,
    pub precision: usize,
    pub exact_on_unresolved: bool,
}

pub struct Scenario {
    pub raw: RawScenario,
    pub ring: SkewRing,
    pub generators: Option<(ProUnipotent, ProUnipotent)>,
    pub params: Params,
}

fn build_field(raw: &RawScenario) -> Result<Field> {
    let p: u64 = raw
        .get("field", "characteristic")
        .unwrap_or("0")
        .parse()
        .context("characteristic must be a nonnegative integer")?;
    let ext: usize = raw.get("field", "extension").unwrap_or("1").parse()?;
    let ctx = if p == 0 {
        if ext != 1 {
            bail!("extension fields require positive characteristic");
        }
        CoeffCtx::Rat
    } else if ext == 1 {
        CoeffCtx::Ff(FfCtx::prime(p))
    } else if let Some(m) = raw.get("field", "modulus") {
        let coeffs: Vec<u64> = m
            .split(',')
            .map(|s| s.trim().parse().context("modulus coefficient"))
            .collect::<Result<_>>()?;
        if coeffs.len() != ext + 1 {
            bail!("modulus must list {} coefficients, constant first", ext + 1);
        }
        CoeffCtx::Ff(FfCtx::extension(p, coeffs))
    } else {
        CoeffCtx::Ff(FfCtx::extension_default(p, ext))
    };
    match (raw.get("field", "vars"), raw.get("field", "indexed")) {
        (Some(_), Some(_)) => bail!("give either `vars` or `indexed`, not both"),
        (None, Some(base)) => Ok(FieldDescriptor::indexed(ctx, base)),
        (vars, None) => {
            let names: Vec<&str> = vars
                .map(|v| v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect())
                .unwrap_or_default();
            Ok(FieldDescriptor::with_ctx(ctx, &names))
        }
    }
}

fn build_sigma(raw: &RawScenario, field: &Field, seed: u64) -> Result<Arc<Automorphism>> {
    let Some(entries) = raw.section("sigma") else {
        return Ok(Automorphism::identity(field));
    };
    if let Some(rule) = raw.get("sigma", "rule") {
        let sigma = match rule {
            "identity" => Automorphism::identity(field),
            "shift" => {
                if field.indexed_family().is_none() {
                    bail!("shift rule requires an indexed variable family");
                }
                let off: i64 = raw.get("sigma", "offset").unwrap_or("1").parse()?;
                Automorphism::shift(field, off)
            }
            "frobenius" => {
                let e: u32 = raw.get("sigma", "power").unwrap_or("1").parse()?;
                if field.characteristic() == 0 {
                    bail!("frobenius rule requires positive characteristic");
                }
                Automorphism::frobenius(field, e)
            }
            "monomial" => {
                let m = raw
                    .get("sigma", "matrix")
                    .ok_or_else(|| anyhow!("monomial rule requires `matrix = a b; c d`"))?;
                let rows: Vec<Vec<i64>> = m
                    .split(';')
                    .map(|r| {
                        r.split_whitespace()
                            .map(|x| x.parse().context("matrix entry"))
                            .collect()
                    })
                    .collect::<Result<_>>()?;
                monomial_subst(field, &rows)?
            }
            other => bail!("unknown sigma rule {other:?}"),
        };
        sigma
            .check_automorphism(32, seed)
            .map_err(|w| anyhow!("sigma failed validation: {w}"))?;
        return Ok(sigma);
    }

    // per-variable images: `t = expr` plus `inv.t = expr`
    let tmp = elem_parser_ring(field)?;
    let mut images = HashMap::new();
    let mut inverses = HashMap::new();
    for (k, v, line) in entries {
        let (map, name) = match k.strip_prefix("inv.") {
            Some(n) => (&mut inverses, n),
            None => (&mut images, k.as_str()),
        };
        let slot = field
            .named_slot(name)
            .map_err(|_| anyhow!("line {line}: unknown variable {name}"))?;
        let e = parse_elem(&tmp, v).map_err(|e| anyhow!("line {line}: {e}"))?;
        map.insert(slot, e);
    }
    if images.is_empty() {
        return Ok(Automorphism::identity(field));
    }
    for slot in images.keys() {
        if !inverses.contains_key(slot) {
            bail!(
                "sigma image for {} given without an inverse image (`inv.{}`)",
                field.var_name(*slot),
                field.var_name(*slot)
            );
        }
    }
    let sigma = Automorphism::subst(field, images, inverses, AutoOrder::Unknown);
    sigma
        .check_automorphism(32, seed)
        .map_err(|w| anyhow!("sigma failed validation: {w}"))?;
    Ok(sigma)
}

// identity-sigma scratch ring for parsing x-free expressions
fn elem_parser_ring(field: &Field) -> Result<SkewRing> {
    Ok(SkewPolyRing::automorphism_type(field, Automorphism::identity(field)))
}

fn build_delta(
    raw: &RawScenario,
    field: &Field,
    sigma: &Arc<Automorphism>,
    seed: u64,
) -> Result<Arc<SigmaDerivation>> {
    let Some(entries) = raw.section("delta") else {
        return Ok(SigmaDerivation::zero(field, sigma));
    };
    let tmp = elem_parser_ring(field)?;
    let mut images = HashMap::new();
    for (k, v, line) in entries {
        let slot = field
            .named_slot(k)
            .map_err(|_| anyhow!("line {line}: unknown variable {k}"))?;
        let e = parse_elem(&tmp, v).map_err(|e| anyhow!("line {line}: {e}"))?;
        images.insert(slot, e);
    }
    if images.is_empty() {
        return Ok(SigmaDerivation::zero(field, sigma));
    }
    let delta = SigmaDerivation::new(field, sigma, images, ExtensionLaw::Twisted);
    delta
        .check_sigma_derivation(32, seed)
        .map_err(|w| anyhow!("delta failed the Leibniz sampling: {w}"))?;
    Ok(delta)
}

/// A generator expression: `sanchez_pair(c)` (fills both slots) or a
/// pro-unipotent literal `(1 + A)`, `(1 + B)^-1`, `(1 + A)*(1 + B)^-1`.
enum GenExpr {
    Pair(ProUnipotent, ProUnipotent),
    One(ProUnipotent),
}

fn parse_generator(ring: &SkewRing, text: &str) -> Result<GenExpr> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("sanchez_pair") {
        let inner = rest
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| anyhow!("sanchez_pair expects a parenthesized argument"))?;
        let c = parse_elem(ring, inner)?;
        let (u, v) = sanchez_pair(ring, &c)?;
        return Ok(GenExpr::Pair(u, v));
    }
    let part = |s: &str| -> Result<orefree_core::SkewPoly> {
        let p = parse_poly(ring, s)?;
        if !p.coeff(0).is_one() {
            bail!("pro-unipotent factor must have constant term 1: {s}");
        }
        Ok(p.sub(&ring.one()))
    };
    // split `A * B^-1` at the last top-level `*` whose right side ends ^-1
    if let Some(stripped) = text.strip_suffix("^-1") {
        let mut depth = 0i32;
        let mut split = None;
        for (i, ch) in stripped.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '*' if depth == 0 => split = Some(i),
                _ => {}
            }
        }
        let (num_txt, den_txt) = match split {
            Some(i) => (&stripped[..i], &stripped[i + 1..]),
            None => ("1", stripped),
        };
        let u = ProUnipotent::new(part(num_txt)?, part(den_txt)?)?;
        return Ok(GenExpr::One(u));
    }
    Ok(GenExpr::One(ProUnipotent::new(part(text)?, ring.zero())?))
}

fn build_generators(
    raw: &RawScenario,
    ring: &SkewRing,
) -> Result<Option<(ProUnipotent, ProUnipotent)>> {
    let Some(entries) = raw.section("generators") else {
        return Ok(None);
    };
    if let Some(pair) = raw.get("generators", "pair") {
        match parse_generator(ring, pair)? {
            GenExpr::Pair(u, v) => return Ok(Some((u, v))),
            GenExpr::One(_) => bail!("`pair` must be a construction call yielding two units"),
        }
    }
    let mut u = None;
    let mut v = None;
    for (k, val, line) in entries {
        let g = parse_generator(ring, val).map_err(|e| anyhow!("line {line}: {e}"))?;
        match (k.to_ascii_lowercase().as_str(), g) {
            ("u", GenExpr::One(g)) => u = Some(g),
            ("v", GenExpr::One(g)) => v = Some(g),
            ("u" | "v", GenExpr::Pair(a, b)) => {
                u = Some(a);
                v = Some(b);
            }
            (other, _) => bail!("line {line}: unknown generator key {other:?}"),
        }
    }
    match (u, v) {
        (Some(u), Some(v)) => Ok(Some((u, v))),
        (None, None) => Ok(None),
        _ => bail!("generators section must define both U and V"),
    }
}

fn build_params(raw: &RawScenario) -> Result<Params> {
    let get = |k: &str, d: &str| raw.get("params", k).unwrap_or(d).to_string();
    Ok(Params {
        max_len: get("L", "5").parse().context("params.L")?,
        precision: get("N", "30").parse().context("params.N")?,
        exact_on_unresolved: get("exact", "true").parse().context("params.exact")?,
    })
}

pub fn load_scenario(text: &str, seed: u64) -> Result<Scenario> {
    let raw = parse_scenario_text(text)?;
    let field = build_field(&raw)?;
    let sigma = build_sigma(&raw, &field, seed)?;
    let delta = build_delta(&raw, &field, &sigma, seed)?;
    let laurent = raw
        .get("field", "laurent")
        .unwrap_or("false")
        .parse()
        .context("field.laurent")?;
    let ring = SkewPolyRing::new(&field, sigma, delta, laurent)?;
    let generators = build_generators(&raw, &ring)?;
    let params = build_params(&raw)?;
    Ok(Scenario { raw, ring, generators, params })
}

#[cfg(test)]
mod tests {
    use super::*;
    use orefree_core::field::FieldElem;

    const SC_B: &str = "
[field]
characteristic = 5
vars = t
[sigma]
t = t + 1
inv.t = t - 1
[generators]
pair = sanchez_pair(t)
[params]
L = 3
N = 12
";

    #[test]
    fn sc_b_roundtrip() {
        let sc = load_scenario(SC_B, 1).unwrap();
        assert_eq!(sc.params.max_len, 3);
        let (u, _) = sc.generators.unwrap();
        let t = FieldElem::var(&sc.ring.field, "t").unwrap();
        let s1 = sc.ring.sigma.apply(&t).unwrap();
        assert_eq!(u.numer_part(), &sc.ring.monomial(3, t.mul(&s1)));
    }

    #[test]
    fn digest_ignores_whitespace_and_comments() {
        let a = parse_scenario_text(SC_B).unwrap();
        let b = parse_scenario_text(&SC_B.replace(" = ", "=").replace('\n', "\n\n"))
            .unwrap();
        let c = parse_scenario_text(&SC_B.replace("t + 1", "t + 1  # shift")).unwrap();
        assert_eq!(a.digest(), b.digest());
        assert_eq!(a.digest(), c.digest());
        let d = parse_scenario_text(&SC_B.replace("L = 3", "L = 4")).unwrap();
        assert_ne!(a.digest(), d.digest());
    }

    #[test]
    fn bad_sigma_is_rejected() {
        let text = SC_B.replace("t = t + 1", "t = t^2").replace("inv.t = t - 1", "inv.t = t");
        let err = match load_scenario(&text, 1) {
            Err(e) => e.to_string(),
            Ok(_) => panic!("expected validation failure"),
        };
        assert!(err.contains("sigma failed validation"), "{err}");
    }

    #[test]
    fn shift_family_and_literals() {
        let text = "
[field]
characteristic = 5
indexed = t
[sigma]
rule = shift
[generators]
u = (1 + t[0]*x)
v = (1 + t[0]*x)*(1 + t[1]*x^2)^-1
[params]
L = 2
N = 8
";
        let sc = load_scenario(text, 1).unwrap();
        let (u, v) = sc.generators.unwrap();
        let t0 = FieldElem::indexed_var(&sc.ring.field, 0).unwrap();
        let t1 = FieldElem::indexed_var(&sc.ring.field, 1).unwrap();
        assert_eq!(u.numer_part(), &sc.ring.monomial(1, t0.clone()));
        assert!(u.denom_part().is_zero());
        assert_eq!(v.numer_part(), &sc.ring.monomial(1, t0));
        assert_eq!(v.denom_part(), &sc.ring.monomial(2, t1));
    }

    #[test]
    fn derivation_scenario() {
        let text = "
[field]
vars = t
[delta]
t = 1
[generators]
[params]
";
        let sc = load_scenario(text, 1).unwrap();
        assert!(sc.ring.sigma.is_identity());
        assert!(!sc.ring.delta.is_zero());
        assert!(sc.generators.is_none());
    }
}
