//! `orefree` command line: verify (relation search with certificate),
//! normalize (ring classification), compute (canonical forms), and
//! twisted-points (finite-field Frobenius-twist search).

pub mod scenario;

use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};

use orefree_core::constructions::{twisted_point_search, RatMap, TwistedPointQuery};
use orefree_core::freeness::{search_relations, Certificate};
use orefree_core::parse::parse_fraction;
use orefree_core::skewpoly::{normalize_ore, NormalizationResult};

use scenario::{load_scenario, Scenario};

#[derive(Parser)]
#[command(name = "orefree", version, about = "Relation search in Ore extension division rings")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for all randomized validators.
    #[arg(long, global = true, default_value_t = 0xC0FFEE)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Scenario file.
    scenario: PathBuf,
    /// Override max word length L.
    #[arg(long)]
    max_len: Option<usize>,
    /// Override series precision N.
    #[arg(long)]
    precision: Option<usize>,
    /// Force exact fallback on unresolved words.
    #[arg(long)]
    exact: bool,
    /// Write the certificate here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = library default).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Search for relations among the scenario's generators and emit a
    /// certificate. Exit 0: none found up to (L,N); 2: relation found;
    /// 3: unresolved words present.
    Verify(VerifyArgs),
    /// Classify the scenario ring, reducing inner derivations.
    Normalize { scenario: PathBuf },
    /// Evaluate a skew expression to canonical form.
    Compute { scenario: PathBuf, expr: String },
    /// Exhaustive twisted-point search over F_{q^k}.
    TwistedPoints {
        /// Prime base field order.
        #[arg(long)]
        q: u64,
        /// Coordinate maps, one per dimension, e.g. "x + 1" or "(x^2+1)/x".
        #[arg(long = "map", required = true)]
        maps: Vec<String>,
        /// Avoidance polynomials; matching points are skipped.
        #[arg(long = "avoid")]
        avoid: Vec<String>,
        #[arg(long, default_value_t = 1)]
        m_max: u32,
        #[arg(long, default_value_t = 2)]
        k_max: u32,
        /// Cap on enumerated points.
        #[arg(long, default_value_t = 1 << 24)]
        budget: u128,
        /// Explicit irreducible modulus for the top extension, comma
        /// separated, constant coefficient first.
        #[arg(long)]
        modulus: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read_scenario(path: &PathBuf, seed: u64) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read scenario file {}", path.display()))?;
    load_scenario(&text, seed)
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display()))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.write_all(b"\n")?;
        }
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, seed: u64) -> Result<i32> {
    let sc = read_scenario(&args.scenario, seed)?;
    let (u, v) = sc
        .generators
        .as_ref()
        .ok_or_else(|| anyhow!("scenario has no [generators] section"))?;
    let max_len = args.max_len.unwrap_or(sc.params.max_len);
    let precision = args.precision.unwrap_or(sc.params.precision);
    let exact = args.exact || sc.params.exact_on_unresolved;
    if sc.ring.field.characteristic() == 0 && max_len > 4 {
        eprintln!(
            "warning: L = {max_len} over a characteristic-0 field; coefficients grow \
             quickly, consider a positive-characteristic scenario"
        );
    }
    let mut cert: Certificate = search_relations(u, v, max_len, precision, exact, args.jobs)?;
    cert.scenario = sc.raw.digest();
    cert.timestamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs().to_string())
        .unwrap_or_default();
    emit(&args.out, &serde_json::to_string_pretty(&cert)?)?;
    Ok(if cert.relation_found() {
        2
    } else if cert.unresolved_present() {
        3
    } else {
        0
    })
}

fn cmd_normalize(path: &PathBuf, seed: u64) -> Result<i32> {
    let sc = read_scenario(path, seed)?;
    match normalize_ore(&sc.ring)? {
        NormalizationResult::Commutative => println!("COMMUTATIVE: sigma = id, delta = 0"),
        NormalizationResult::DerivationType => {
            println!("DERIVATION_TYPE: K[x;delta] with sigma = id")
        }
        NormalizationResult::AutomorphismType => {
            println!("AUTOMORPHISM_TYPE: K[x;sigma] with delta = 0")
        }
        NormalizationResult::TwistedReduced { w } => {
            println!("TWISTED_REDUCED: delta is inner, w = {w}");
            println!("substitute y = x + {w}; then K[y;sigma] with y*a = sigma(a)*y");
        }
        NormalizationResult::Unreduced { witness } => {
            println!("UNREDUCED: {witness}");
        }
    }
    Ok(0)
}

fn cmd_compute(path: &PathBuf, expr: &str, seed: u64) -> Result<i32> {
    let sc = read_scenario(path, seed)?;
    let f = parse_fraction(&sc.ring, expr)?;
    // prefer polynomial form when the denominator is trivial
    if f.den().degree() == Some(0) {
        let c = f.den().coeff(0).inv()?;
        println!("{}", f.num().scale_left(&c));
    } else {
        println!("{f}");
    }
    Ok(0)
}

/// Map/avoidance expressions use variable `x` in dimension 1 and `x1..xd`
/// otherwise; coefficients must be integers.
fn parse_int_ratmap(dim: usize, text: &str) -> Result<RatMap> {
    use orefree_core::field::FieldDescriptor;
    use orefree_core::Scalar;
    let names: Vec<String> = if dim == 1 {
        vec!["x_".into()]
    } else {
        (1..=dim).map(|i| format!("x{i}")).collect()
    };
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let field = FieldDescriptor::rationals(&refs);
    // `x` is the skew indeterminate to the core parser, so rename it
    let text = if dim == 1 { text.replace('x', "x_") } else { text.to_string() };
    let ring = orefree_core::skewpoly::SkewPolyRing::automorphism_type(
        &field,
        orefree_core::auto::Automorphism::identity(&field),
    );
    let e = orefree_core::parse::parse_elem(&ring, &text)?;
    let to_int = |p: &orefree_core::MPoly| -> Result<Vec<(Vec<u32>, i64)>> {
        p.terms()
            .iter()
            .map(|t| {
                let c = match &t.coeff {
                    Scalar::Rat(r) if r.denom() == &num::BigInt::from(1) => {
                        i64::try_from(r.numer().clone())
                            .map_err(|_| anyhow!("coefficient out of range"))?
                    }
                    _ => return Err(anyhow!("map coefficients must be integers")),
                };
                Ok((t.exps.to_vec(), c))
            })
            .collect()
    };
    Ok(RatMap { num: to_int(e.num())?, den: to_int(e.den())? })
}

#[allow(clippy::too_many_arguments)]
fn cmd_twisted_points(
    q: u64,
    maps: &[String],
    avoid: &[String],
    m_max: u32,
    k_max: u32,
    budget: u128,
    modulus: &Option<String>,
    out: &Option<PathBuf>,
) -> Result<i32> {
    if !orefree_core::ff::is_prime(q) {
        return Err(anyhow!("--q must be prime; express q = p^e via --modulus scenarios"));
    }
    let dim = maps.len();
    let maps: Vec<RatMap> = maps
        .iter()
        .map(|m| parse_int_ratmap(dim, m))
        .collect::<Result<_>>()?;
    let avoid = avoid
        .iter()
        .map(|a| Ok(parse_int_ratmap(dim, a)?.num))
        .collect::<Result<_>>()?;
    let modulus = match modulus {
        Some(m) => Some(
            m.split(',')
                .map(|s| s.trim().parse::<u64>().context("modulus coefficient"))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let qry = TwistedPointQuery { p: q, e: 1, dim, maps, avoid, m_max, k_max, budget, modulus };
    let pl = twisted_point_search(&qry)?;
    emit(out, &serde_json::to_string_pretty(&pl)?)?;
    Ok(0)
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    let r = match &cli.command {
        Command::Verify(args) => cmd_verify(args, cli.seed),
        Command::Normalize { scenario } => cmd_normalize(scenario, cli.seed),
        Command::Compute { scenario, expr } => cmd_compute(scenario, expr, cli.seed),
        Command::TwistedPoints { q, maps, avoid, m_max, k_max, budget, modulus, out } => {
            cmd_twisted_points(*q, maps, avoid, *m_max, *k_max, *budget, modulus, out)
        }
    };
    match r {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}
