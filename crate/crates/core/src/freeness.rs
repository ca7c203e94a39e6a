//! Relation search among two pro-unipotent units: reduced-word enumeration,
//! series-first falsification with exact certification, and linear
//! independence of monomial words in a free associative algebra.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::fraction::LeftFraction;
use crate::prounip::ProUnipotent;
use crate::scalar::Scalar;
use crate::series::SkewSeries;
use crate::skewpoly::{same_ring, SkewPoly};

/// Letters in declaration order: U < U^-1 < V < V^-1.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Letter {
    U,
    Uinv,
    V,
    Vinv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::U, Letter::Uinv, Letter::V, Letter::Vinv];

    pub fn inverse(self) -> Letter {
        match self {
            Letter::U => Letter::Uinv,
            Letter::Uinv => Letter::U,
            Letter::V => Letter::Vinv,
            Letter::Vinv => Letter::V,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::U => write!(f, "U"),
            Letter::Uinv => write!(f, "U^-1"),
            Letter::V => write!(f, "V"),
            Letter::Vinv => write!(f, "V^-1"),
        }
    }
}

/// Reduced word: no adjacent cancelling pair.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Word> {
        let w = Word(letters);
        if !w.is_reduced() {
            return Err(CoreError::Invalid("word is not reduced".into()));
        }
        Ok(w)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != p[1].inverse())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }
}

// Length-then-lex, the canonical certificate order.
impl Ord for Word {
    fn cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// All reduced words of length 1..=L in length-then-lex order;
/// count = 2(3^L - 1).
pub fn enumerate_reduced_words(max_len: usize) -> Vec<Word> {
    assert!(max_len >= 1, "max_len must be at least 1");
    let mut out: Vec<Word> = Vec::new();
    let mut level: Vec<Word> = Letter::ALL.iter().map(|&l| Word(vec![l])).collect();
    for _ in 1..=max_len {
        out.extend(level.iter().cloned());
        let mut next = Vec::with_capacity(level.len() * 3);
        for w in &level {
            let last = *w.0.last().unwrap();
            for &l in &Letter::ALL {
                if l != last.inverse() {
                    let mut v = w.0.clone();
                    v.push(l);
                    next.push(Word(v));
                }
            }
        }
        level = next;
    }
    out
}

fn letter_series(l: Letter, u: &ProUnipotent, v: &ProUnipotent, n: usize) -> Result<SkewSeries> {
    match l {
        Letter::U => u.to_series(n),
        Letter::Uinv => u.inv().to_series(n),
        Letter::V => v.to_series(n),
        Letter::Vinv => v.inv().to_series(n),
    }
}

/// Truncated series value of a word; the embedding into Frac(K[[x;sigma]]).
pub fn evaluate_word_series(
    w: &Word,
    u: &ProUnipotent,
    v: &ProUnipotent,
    n: usize,
) -> Result<SkewSeries> {
    assert!(same_ring(u.ring(), v.ring()), "ring mismatch");
    let mut acc = SkewSeries::one(u.ring(), n)?;
    for &l in &w.0 {
        acc = acc.mul(&letter_series(l, u, v, n)?);
    }
    Ok(acc)
}

/// Exact value of a word in Frac(R); the ground truth for relations.
pub fn evaluate_word_exact(w: &Word, u: &ProUnipotent, v: &ProUnipotent) -> Result<LeftFraction> {
    assert!(same_ring(u.ring(), v.ring()), "ring mismatch");
    let mut acc = LeftFraction::one(u.ring());
    for &l in &w.0 {
        let f = match l {
            Letter::U => u.to_left_fraction()?,
            Letter::Uinv => u.inv().to_left_fraction()?,
            Letter::V => v.to_left_fraction()?,
            Letter::Vinv => v.inv().to_left_fraction()?,
        };
        acc = acc.mul(&f)?;
    }
    Ok(acc)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    /// Word is not 1; witness is the valuation of (value - 1), or None when
    /// the witness came from exact arithmetic beyond the series window.
    Nontrivial { valuation: Option<usize> },
    /// Exact-certified relation.
    Relation,
    /// Series could not falsify and exact fallback was disabled.
    Unresolved,
}

impl Verdict {
    fn name(&self) -> &'static str {
        match self {
            Verdict::Nontrivial { .. } => "NONTRIVIAL",
            Verdict::Relation => "RELATION",
            Verdict::Unresolved => "UNRESOLVED",
        }
    }

    fn witness(&self) -> String {
        match self {
            Verdict::Nontrivial { valuation: Some(k) } => format!("valuation {k}"),
            Verdict::Nontrivial { valuation: None } => "exact".into(),
            Verdict::Relation => "exact".into(),
            Verdict::Unresolved => String::new(),
        }
    }
}

#[derive(Clone, Serialize, Deserialize, Debug)]
pub struct WordEntry {
    pub word: String,
    pub verdict: String,
    pub witness: String,
}

#[derive(Clone, Serialize, Deserialize, Debug)]
pub struct Certificate {
    pub scenario: String,
    pub generators: Vec<String>,
    #[serde(rename = "L")]
    pub max_len: usize,
    #[serde(rename = "N")]
    pub precision: usize,
    pub words: Vec<WordEntry>,
    pub status: String,
    pub timestamp: String,
}

impl Certificate {
    pub fn relation_found(&self) -> bool {
        self.status == "RELATION_FOUND"
    }

    pub fn unresolved_present(&self) -> bool {
        self.status == "UNRESOLVED_PRESENT"
    }

    pub fn first_relation(&self) -> Option<&WordEntry> {
        self.words.iter().find(|e| e.verdict == "RELATION")
    }
}

fn series_verdict(value: &SkewSeries) -> Option<usize> {
    let one = SkewSeries::one(&value.ring, value.precision()).expect("delta is zero here");
    value.sub(&one).valuation()
}

// DFS over one subtree of the reduced-word tree; one series multiplication
// per node via the cached prefix product.
fn dfs_subtree(
    prefix: Word,
    prefix_series: SkewSeries,
    max_len: usize,
    letters: &[SkewSeries; 4],
    out: &mut Vec<(Word, Option<usize>)>,
) {
    if prefix.len() >= max_len {
        return;
    }
    let last = *prefix.0.last().unwrap();
    for (i, &l) in Letter::ALL.iter().enumerate() {
        if l == last.inverse() {
            continue;
        }
        let mut v = prefix.0.clone();
        v.push(l);
        let w = Word(v);
        let s = prefix_series.mul(&letters[i]);
        out.push((w.clone(), series_verdict(&s)));
        dfs_subtree(w, s, max_len, letters, out);
    }
}

/// Series-first relation search. Deterministic for fixed inputs regardless
/// of `jobs` (0 = library default): subtree results are re-sorted into
/// length-then-lex order at assembly.
pub fn search_relations(
    u: &ProUnipotent,
    v: &ProUnipotent,
    max_len: usize,
    precision: usize,
    exact_on_unresolved: bool,
    jobs: usize,
) -> Result<Certificate> {
    assert!(same_ring(u.ring(), v.ring()), "ring mismatch");
    assert!(max_len >= 1, "max_len must be at least 1");
    assert!(precision >= 2, "precision must be at least 2");

    let letters: [SkewSeries; 4] = [
        letter_series(Letter::U, u, v, precision)?,
        letter_series(Letter::Uinv, u, v, precision)?,
        letter_series(Letter::V, u, v, precision)?,
        letter_series(Letter::Vinv, u, v, precision)?,
    ];

    // Roots at depth 2 (12 subtrees) balance well; depths 1 and 2 are
    // evaluated inline since they are only 16 words.
    let mut flat: Vec<(Word, Option<usize>)> = Vec::new();
    let mut roots: Vec<(Word, SkewSeries)> = Vec::new();
    for (i, &l) in Letter::ALL.iter().enumerate() {
        let w1 = Word(vec![l]);
        let s1 = letters[i].clone();
        flat.push((w1.clone(), series_verdict(&s1)));
        if max_len < 2 {
            continue;
        }
        for (j, &l2) in Letter::ALL.iter().enumerate() {
            if l2 == l.inverse() {
                continue;
            }
            let mut v2 = w1.0.clone();
            v2.push(l2);
            let w2 = Word(v2);
            let s2 = s1.mul(&letters[j]);
            flat.push((w2.clone(), series_verdict(&s2)));
            roots.push((w2, s2));
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CoreError::Invalid(format!("worker pool: {e}")))?;
    let sub: Vec<Vec<(Word, Option<usize>)>> = pool.install(|| {
        roots
            .into_par_iter()
            .map(|(w, s)| {
                let mut local = Vec::new();
                dfs_subtree(w, s, max_len, &letters, &mut local);
                local
            })
            .collect()
    });
    for chunk in sub {
        flat.extend(chunk);
    }
    flat.sort_by(|a, b| a.0.cmp(&b.0));

    let mut entries = Vec::with_capacity(flat.len());
    let mut any_relation = false;
    let mut any_unresolved = false;
    for (w, val) in flat {
        let verdict = match val {
            Some(k) => Verdict::Nontrivial { valuation: Some(k) },
            None if exact_on_unresolved => {
                if evaluate_word_exact(&w, u, v)?.is_one() {
                    Verdict::Relation
                } else {
                    Verdict::Nontrivial { valuation: None }
                }
            }
            None => Verdict::Unresolved,
        };
        match verdict {
            Verdict::Relation => any_relation = true,
            Verdict::Unresolved => any_unresolved = true,
            _ => {}
        }
        entries.push(WordEntry {
            word: w.to_string(),
            verdict: verdict.name().into(),
            witness: verdict.witness(),
        });
    }

    let status = if any_relation {
        "RELATION_FOUND".to_string()
    } else if any_unresolved {
        "UNRESOLVED_PRESENT".to_string()
    } else {
        format!("NO_RELATION_UP_TO({max_len},{precision})")
    };
    Ok(Certificate {
        scenario: String::new(),
        generators: vec![u.to_string(), v.to_string()],
        max_len,
        precision,
        words: entries,
        status,
        timestamp: String::new(),
    })
}

#[derive(Clone, Serialize, Deserialize, Debug)]
pub struct IndependenceReport {
    pub independent: bool,
    pub word_count: usize,
    /// On failure: the vanishing combination, as (word, coefficient) pairs
    /// over the prime field.
    pub dependency: Option<Vec<(String, String)>>,
}

type Col = (usize, Vec<u32>, usize);

/// Linear independence over the prime field of all monomial words of length
/// 1..=max_len in the given skew polynomials.
pub fn free_algebra_independence(elems: &[SkewPoly], max_len: usize) -> Result<IndependenceReport> {
    assert!(!elems.is_empty(), "need at least one element");
    for e in elems {
        assert!(same_ring(&e.ring, &elems[0].ring), "ring mismatch");
        if e.is_zero() {
            return Err(CoreError::Invalid("elements must be nonzero".into()));
        }
    }
    let ring = &elems[0].ring;
    if !ring.delta.is_zero() {
        return Err(CoreError::DerivationNotZero);
    }

    // All index words of length 1..=max_len, with their evaluated products.
    let mut words: Vec<(Vec<usize>, SkewPoly)> = Vec::new();
    let mut level: Vec<(Vec<usize>, SkewPoly)> =
        elems.iter().enumerate().map(|(i, e)| (vec![i], e.clone())).collect();
    for _ in 1..=max_len {
        words.extend(level.iter().cloned());
        let mut next = Vec::with_capacity(level.len() * elems.len());
        for (w, p) in &level {
            for (i, e) in elems.iter().enumerate() {
                let mut v = w.clone();
                v.push(i);
                next.push((v, p.mul(e)));
            }
        }
        level = next;
    }

    // Common denominator across every coefficient of every product, so
    // rows live in the polynomial ring.
    let ctx = ring.field.coeff_ctx().clone();
    let mut common = crate::mpoly::MPoly::one(&ctx);
    for (_, p) in &words {
        for (_, c) in p.coeffs() {
            let g = crate::mpoly::gcd(&common, c.den());
            common = common.mul(&c.den().exact_div(&g).expect("gcd divides"));
        }
    }

    // Row per word: prime-field coordinates keyed by (x-degree, monomial,
    // prime component).
    let rows: Vec<BTreeMap<Col, Scalar>> = words
        .iter()
        .map(|(_, p)| {
            let mut row = BTreeMap::new();
            for (d, c) in p.coeffs() {
                let cleared =
                    c.num().mul(&common.exact_div(c.den()).expect("common denominator"));
                for t in cleared.terms() {
                    for (comp, s) in t.coeff.prime_coords() {
                        let key = (d, t.exps.to_vec(), comp);
                        let entry = row.entry(key).or_insert_with(|| s.ctx().zero());
                        *entry = entry.add(&s);
                    }
                }
            }
            row.retain(|_, s| !s.is_zero());
            row
        })
        .collect();

    let word_label = |w: &[usize]| -> String {
        w.iter().map(|&i| format!("({})", elems[i])).collect::<String>()
    };

    // Gaussian elimination with an augmented combination vector; a row that
    // reduces to zero yields the dependency certificate.
    let mut basis: Vec<(Col, BTreeMap<Col, Scalar>, Vec<Scalar>)> = Vec::new();
    let prime_ctx = match words[0].1.coeffs().next() {
        Some((_, c)) => match c.num().leading_coeff().prime_coords().first() {
            Some((_, s)) => s.ctx(),
            None => ctx.clone(),
        },
        None => ctx.clone(),
    };
    for (ri, mut row) in rows.into_iter().enumerate() {
        let mut comb: Vec<Scalar> = vec![prime_ctx.zero(); words.len()];
        comb[ri] = prime_ctx.one();
        loop {
            let Some((pivot, lead)) = row.iter().next().map(|(k, v)| (k.clone(), v.clone()))
            else {
                // Dependent: emit the combination.
                let dep: Vec<(String, String)> = comb
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| !s.is_zero())
                    .map(|(i, s)| (word_label(&words[i].0), s.to_string()))
                    .collect();
                return Ok(IndependenceReport {
                    independent: false,
                    word_count: words.len(),
                    dependency: Some(dep),
                });
            };
            match basis.iter().find(|(p, _, _)| *p == pivot) {
                None => {
                    let inv = lead.inv().expect("nonzero pivot");
                    let row: BTreeMap<Col, Scalar> =
                        row.iter().map(|(k, v)| (k.clone(), v.mul(&inv))).collect();
                    let comb: Vec<Scalar> = comb.iter().map(|s| s.mul(&inv)).collect();
                    basis.push((pivot, row, comb));
                    break;
                }
                Some((_, brow, bcomb)) => {
                    for (k, v) in brow {
                        let entry = row.entry(k.clone()).or_insert_with(|| prime_ctx.zero());
                        *entry = entry.sub(&v.mul(&lead));
                    }
                    row.retain(|_, s| !s.is_zero());
                    for (c, b) in comb.iter_mut().zip(bcomb) {
                        *c = c.sub(&b.mul(&lead));
                    }
                }
            }
        }
    }
    Ok(IndependenceReport { independent: true, word_count: words.len(), dependency: None })
}
