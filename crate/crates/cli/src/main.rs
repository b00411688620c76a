//! Command-line front end: homology, Novikov numbers, flow classification,
//! gluing verification, inequality checks, mapping tori, and a gallery of
//! built-in examples. Reports are deterministic given the same flags and
//! seed.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num::BigRational;
use serde::Serialize;
use serde_json::json;

use novmorse::cocycle::CellularCocycle;
use novmorse::complex::CellComplex;
use novmorse::fixtures;
use novmorse::flow::{
    carries_cocycle, classify_gradient_like, find_drift_cycle, morse_decomposition,
    CombinatorialFlow, Verdict, Witness,
};
use novmorse::gluing::{
    build_deformation_complex, cone_isomorphism_check, reconstruct_and_crosscheck,
    verify_gluing_identities, zero_evaluation_complex, GluingData,
};
use novmorse::homology::{homology, relative_homology, Coefficients};
use novmorse::monodromy::MonodromyRep;
use novmorse::morse::{
    check_alpha_morse_smale, check_classical_novikov, check_novikov_morse, identity_map,
    mapping_torus, vanishing_check, HyperbolicKind, MorseData, MorseSetEntry,
};
use novmorse::twisted::{integer_point, novikov_numbers};

#[derive(Parser)]
#[command(
    name = "novmorse",
    version,
    about = "Exact Novikov numbers, twisted homology, gluing verification, and flow classification on finite cell complexes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Homology of a complex file over Z, Q, or Z/p.
    Homology {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = CoeffArg::Z)]
        coeffs: CoeffArg,
        /// Modulus for Z/p coefficients.
        #[arg(long, default_value_t = 2)]
        prime: u64,
        /// Comma-separated cell ids of a subcomplex for relative homology.
        #[arg(long)]
        rel: Option<String>,
    },
    /// Novikov numbers of a complex with a cocycle (and optional monodromy).
    Novikov {
        complex: PathBuf,
        cocycle: PathBuf,
        #[arg(long)]
        monodromy: Option<PathBuf>,
        /// RNG seed for the evaluation points (required: no hidden entropy).
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
    /// Gradient-like classification of a combinatorial flow.
    ClassifyFlow { file: PathBuf },
    /// Check the carrying conditions of a flow at given parameters.
    Carries {
        file: PathBuf,
        #[arg(long)]
        rho: String,
        #[arg(long, default_value = "0")]
        lambda: String,
    },
    /// Verify the decomposition identities, cone isomorphisms, deformation
    /// ranks, zero-evaluation agreement, and the two-route crosscheck of a
    /// gluing datum.
    GlueVerify {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        prime: u64,
        /// Crosscheck evaluation point, comma-separated rationals.
        #[arg(long)]
        at: Option<String>,
    },
    /// Morse-type inequality checks from explicit data.
    VerifyInequalities {
        /// Morse data file; checked against --b as a Morse-type identity.
        #[arg(long)]
        morse: Option<PathBuf>,
        /// Homology polynomial (or Novikov numbers), comma-separated.
        #[arg(long)]
        b: Option<String>,
        /// Fixed-point counts by index for the classical check.
        #[arg(long)]
        counts: Option<String>,
        /// Periodic-orbit counts by index for the Morse-Smale-type check.
        #[arg(long)]
        orbits: Option<String>,
    },
    /// Mapping torus of a cellular automorphism, with the fiber class.
    MappingTorus {
        complex: PathBuf,
        /// JSON file {"f": {cell: cell}}; defaults to the identity.
        #[arg(long)]
        map: Option<PathBuf>,
        /// Compute Novikov numbers of the fiber class with this seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
    /// Run a built-in example end to end.
    Example {
        /// One of: circle-novikov, torus-novikov, torus-gluing, ex31-flow,
        /// ex32-flow, sphere-morse-smale, mapping-torus-id,
        /// mapping-torus-swap.
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        prime: u64,
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CoeffArg {
    Z,
    Q,
    Zp,
}

#[derive(Serialize)]
struct Report {
    schema: u32,
    command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    prime: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trials: Option<usize>,
    pass: bool,
    results: Vec<Item>,
}

#[derive(Serialize)]
struct Item {
    name: String,
    pass: bool,
    detail: serde_json::Value,
}

impl Item {
    fn new(name: &str, pass: bool, detail: serde_json::Value) -> Self {
        Item {
            name: name.to_string(),
            pass,
            detail,
        }
    }
}

fn to_value<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("report serialization")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(report) => {
            let rendered = match cli.format {
                Format::Json => serde_json::to_string_pretty(&report).expect("report") + "\n",
                Format::Text => render_text(&report),
            };
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &rendered) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{rendered}"),
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn render_text(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# novmorse {} (schema {})\n",
        report.command, report.schema
    ));
    if let Some(seed) = report.seed {
        out.push_str(&format!("seed: {seed}\n"));
    }
    if let Some(prime) = report.prime {
        out.push_str(&format!("prime: {prime}\n"));
    }
    if let Some(trials) = report.trials {
        out.push_str(&format!("trials: {trials}\n"));
    }
    for item in &report.results {
        let status = if item.pass { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "[{status}] {}: {}\n",
            item.name,
            compact(&item.detail)
        ));
        out.push_str(&inequality_table(&item.detail));
    }
    out.push_str(&format!(
        "overall: {}\n",
        if report.pass { "PASS" } else { "FAIL" }
    ));
    out
}

fn compact(v: &serde_json::Value) -> String {
    serde_json::to_string(v).expect("compact json")
}

/// Per-degree table for inequality reports: index side, homology side,
/// difference, and alternating slack.
fn inequality_table(detail: &serde_json::Value) -> String {
    let (Some(lhs), Some(rhs), Some(m), Some(slack)) = (
        detail["lhs"].as_array(),
        detail["rhs"].as_array(),
        detail["m"].as_array(),
        detail["slack"].as_array(),
    ) else {
        return String::new();
    };
    let mut out = String::from("        degree |   lhs   rhs     m slack\n");
    for j in 0..lhs.len() {
        out.push_str(&format!(
            "        {:>6} | {:>5} {:>5} {:>5} {:>5}\n",
            j,
            lhs[j].to_string(),
            rhs[j].to_string(),
            m[j].to_string(),
            slack[j].to_string()
        ));
    }
    if let Some(q) = detail["q"].as_array() {
        let qs: Vec<String> = q.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!("        quotient by (1+t): [{}]\n", qs.join(", ")));
    }
    out
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn parse_rational(s: &str) -> Result<BigRational> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|_| anyhow!("bad rational `{s}`"))
}

fn parse_rational_list(s: &str) -> Result<Vec<BigRational>> {
    s.split(',').map(parse_rational).collect()
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| anyhow!("bad count `{x}`"))
        })
        .collect()
}

fn run(command: &Command) -> Result<Report> {
    match command {
        Command::Homology {
            file,
            coeffs,
            prime,
            rel,
        } => {
            let complex = CellComplex::from_json(&read(file)?)?;
            let coefficients = match coeffs {
                CoeffArg::Z => Coefficients::Z,
                CoeffArg::Q => Coefficients::Q,
                CoeffArg::Zp => Coefficients::Zp(*prime),
            };
            let h = match rel {
                Some(ids) => {
                    let sub: BTreeSet<String> =
                        ids.split(',').map(|s| s.trim().to_string()).collect();
                    relative_homology(&complex, &sub, coefficients)?
                }
                None => homology(&complex, coefficients)?,
            };
            let euler = complex.euler_characteristic();
            Ok(Report {
                schema: 1,
                command: "homology".into(),
                seed: None,
                prime: matches!(coeffs, CoeffArg::Zp).then_some(*prime),
                trials: None,
                pass: true,
                results: vec![Item::new(
                    "homology",
                    true,
                    json!({"complex": complex.name, "result": to_value(&h), "euler": euler}),
                )],
            })
        }
        Command::Novikov {
            complex,
            cocycle,
            monodromy,
            seed,
            trials,
        } => {
            let x = CellComplex::from_json(&read(complex)?)?;
            let alpha = CellularCocycle::from_json(&read(cocycle)?)?;
            let rep = match monodromy {
                Some(path) => Some(MonodromyRep::from_json(&read(path)?)?),
                None => None,
            };
            let n = novikov_numbers(&x, &alpha, rep.as_ref(), *seed, *trials)?;
            Ok(Report {
                schema: 1,
                command: "novikov".into(),
                seed: Some(*seed),
                prime: None,
                trials: Some(*trials),
                pass: n.agreement,
                results: vec![Item::new("novikov-numbers", n.agreement, to_value(&n))],
            })
        }
        Command::ClassifyFlow { file } => {
            let flow = CombinatorialFlow::from_json(&read(file)?)?;
            let decomposition = morse_decomposition(&flow);
            let classification = classify_gradient_like(&flow)?;
            Ok(Report {
                schema: 1,
                command: "classify-flow".into(),
                seed: None,
                prime: None,
                trials: None,
                pass: true,
                results: vec![
                    Item::new("morse-decomposition", true, to_value(&decomposition)),
                    Item::new("classification", true, to_value(&classification)),
                ],
            })
        }
        Command::Carries { file, rho, lambda } => {
            let flow = CombinatorialFlow::from_json(&read(file)?)?;
            let report = carries_cocycle(&flow, &parse_rational(rho)?, &parse_rational(lambda)?)?;
            Ok(Report {
                schema: 1,
                command: "carries".into(),
                seed: None,
                prime: None,
                trials: None,
                pass: report.verdict,
                results: vec![Item::new(
                    "carries-cocycle",
                    report.verdict,
                    to_value(&report),
                )],
            })
        }
        Command::GlueVerify { file, prime, at } => {
            let gluing = GluingData::from_json(&read(file)?)?;
            let at = match at {
                Some(s) => parse_rational_list(s)?,
                None => default_crosscheck_point(gluing.rank()),
            };
            let results = glue_verify_items(&gluing, *prime, &at)?;
            let pass = results.iter().all(|i| i.pass);
            Ok(Report {
                schema: 1,
                command: "glue-verify".into(),
                seed: None,
                prime: Some(*prime),
                trials: None,
                pass,
                results,
            })
        }
        Command::VerifyInequalities {
            morse,
            b,
            counts,
            orbits,
        } => {
            let mut results = Vec::new();
            let b_list = b.as_deref().map(parse_usize_list).transpose()?;
            if let Some(path) = morse {
                let data = MorseData::from_json(&read(path)?)?;
                let b = b_list
                    .clone()
                    .ok_or_else(|| anyhow!("--morse requires --b (homology polynomial)"))?;
                let report = check_novikov_morse(&data, &b);
                results.push(Item::new(
                    "novikov-morse",
                    report.verdict,
                    to_value(&report),
                ));
                if let Some((c, a)) = data.hyperbolic_counts() {
                    let report = check_alpha_morse_smale(&c, &a, &b);
                    results.push(Item::new(
                        "alpha-morse-smale",
                        report.verdict,
                        to_value(&report),
                    ));
                }
            }
            if let Some(counts) = counts {
                let c = parse_usize_list(counts)?;
                let b = b_list
                    .clone()
                    .ok_or_else(|| anyhow!("--counts requires --b"))?;
                match orbits {
                    Some(orbits) => {
                        let a = parse_usize_list(orbits)?;
                        let report = check_alpha_morse_smale(&c, &a, &b);
                        results.push(Item::new(
                            "alpha-morse-smale",
                            report.verdict,
                            to_value(&report),
                        ));
                    }
                    None => {
                        let report = check_classical_novikov(&c, &b);
                        results.push(Item::new(
                            "classical-novikov",
                            report.verdict,
                            to_value(&report),
                        ));
                    }
                }
            }
            if results.is_empty() {
                bail!("nothing to check: pass --morse and/or --counts with --b");
            }
            let pass = results.iter().all(|i| i.pass);
            Ok(Report {
                schema: 1,
                command: "verify-inequalities".into(),
                seed: None,
                prime: None,
                trials: None,
                pass,
                results,
            })
        }
        Command::MappingTorus {
            complex,
            map,
            seed,
            trials,
        } => {
            let x = CellComplex::from_json(&read(complex)?)?;
            let f: BTreeMap<String, String> = match map {
                Some(path) => {
                    #[derive(serde::Deserialize)]
                    struct MapFile {
                        f: BTreeMap<String, String>,
                    }
                    let parsed: MapFile = serde_json::from_str(&read(path)?)?;
                    parsed.f
                }
                None => identity_map(&x),
            };
            let (torus, alpha) = mapping_torus(&x, &f)?;
            let mut results = vec![Item::new(
                "mapping-torus",
                true,
                json!({
                    "complex": serde_json::from_str::<serde_json::Value>(&torus.to_json())?,
                    "cocycle": to_value(&alpha),
                    "euler": torus.euler_characteristic(),
                }),
            )];
            if let Some(seed) = seed {
                let n = novikov_numbers(&torus, &alpha, None, *seed, *trials)?;
                let all_zero = n.b.iter().all(|&x| x == 0);
                results.push(Item::new("fiber-class-novikov", all_zero, to_value(&n)));
            }
            let pass = results.iter().all(|i| i.pass);
            Ok(Report {
                schema: 1,
                command: "mapping-torus".into(),
                seed: *seed,
                prime: None,
                trials: Some(*trials),
                pass,
                results,
            })
        }
        Command::Example {
            name,
            seed,
            prime,
            trials,
        } => {
            let results = run_example(name, *seed, *prime, *trials)?;
            let pass = results.iter().all(|i| i.pass);
            Ok(Report {
                schema: 1,
                command: format!("example {name}"),
                seed: Some(*seed),
                prime: Some(*prime),
                trials: Some(*trials),
                pass,
                results,
            })
        }
    }
}

fn default_crosscheck_point(s: usize) -> Vec<BigRational> {
    match s {
        1 => integer_point(&[2]),
        2 => integer_point(&[3, 5]),
        _ => {
            let primes = [3i64, 5, 7, 11, 13, 17, 19, 23, 29, 31];
            integer_point(&primes.iter().copied().cycle().take(s).collect::<Vec<_>>())
        }
    }
}

fn glue_verify_items(gluing: &GluingData, prime: u64, at: &[BigRational]) -> Result<Vec<Item>> {
    let mut items = Vec::new();
    gluing.validate()?;
    let s = gluing.rank();
    for k in 1..=s {
        let identities = verify_gluing_identities(gluing, k)?;
        items.push(Item::new(
            &format!("decomposition-identities-stage-{k}"),
            identities.passed,
            to_value(&identities),
        ));
        let cone = cone_isomorphism_check(gluing, k)?;
        let pass = cone.composites_are_identity && cone.chain_maps_commute && cone.ranks_agree;
        items.push(Item::new(
            &format!("cone-isomorphism-stage-{k}"),
            pass,
            to_value(&cone),
        ));
    }
    // deformation ranks must be stage-independent and equal H(X0)
    let base = homology(&gluing.domain, Coefficients::Q)?.ranks;
    let mut all_ranks = Vec::new();
    for k in 1..=s {
        let dk = build_deformation_complex(gluing, k)?;
        all_ranks.push(dk.homology_ranks(Coefficients::Q)?);
    }
    let rank_pass = all_ranks.iter().all(|r| {
        let n = r.len().max(base.len());
        (0..n).all(|i| r.get(i).copied().unwrap_or(0) == base.get(i).copied().unwrap_or(0))
    });
    items.push(Item::new(
        "deformation-ranks-stage-independent",
        rank_pass,
        json!({"stages": all_ranks, "domain": base}),
    ));
    let (_, zero) = zero_evaluation_complex(gluing, Coefficients::Zp(prime), None)?;
    items.push(Item::new(
        "zero-evaluation-agreement",
        zero.agree,
        to_value(&zero),
    ));
    let crosscheck = reconstruct_and_crosscheck(gluing, at)?;
    items.push(Item::new(
        "reconstruction-crosscheck",
        crosscheck.agree,
        to_value(&crosscheck),
    ));
    let ones = vec![BigRational::from(num::BigInt::from(1)); s];
    let betti_check = reconstruct_and_crosscheck(gluing, &ones)?;
    items.push(Item::new(
        "crosscheck-at-ones-gives-betti",
        betti_check.agree,
        to_value(&betti_check),
    ));
    Ok(items)
}

fn run_example(name: &str, seed: u64, prime: u64, trials: usize) -> Result<Vec<Item>> {
    match name {
        "circle-novikov" => {
            let circle = fixtures::circle();
            let alpha = CellularCocycle::new(1, &[("e", vec![1])]);
            let n = novikov_numbers(&circle, &alpha, None, seed, trials)?;
            let trivial = novikov_numbers(&circle, &CellularCocycle::zero(1), None, seed, trials)?;
            Ok(vec![
                Item::new("nontrivial-class", n.b == vec![0, 0], to_value(&n)),
                Item::new(
                    "trivial-class-betti",
                    trivial.b == vec![1, 1],
                    to_value(&trivial),
                ),
            ])
        }
        "torus-novikov" => {
            let torus = fixtures::torus();
            let fiber = CellularCocycle::new(1, &[("ea", vec![1])]);
            let full = CellularCocycle::new(2, &[("ea", vec![1, 0]), ("eb", vec![0, 1])]);
            let nf = novikov_numbers(&torus, &fiber, None, seed, trials)?;
            let n2 = novikov_numbers(&torus, &full, None, seed, trials)?;
            let trivial = novikov_numbers(&torus, &CellularCocycle::zero(1), None, seed, trials)?;
            Ok(vec![
                Item::new("fiber-class", nf.b == vec![0, 0, 0], to_value(&nf)),
                Item::new("rank-two-class", n2.b == vec![0, 0, 0], to_value(&n2)),
                Item::new(
                    "trivial-class-betti",
                    trivial.b == vec![1, 2, 1],
                    to_value(&trivial),
                ),
            ])
        }
        "torus-gluing" => {
            let gluing = fixtures::torus_gluing();
            let mut items = glue_verify_items(&gluing, prime, &integer_point(&[3, 5]))?;
            for p in [2u64, 3, 5] {
                if p == prime {
                    continue;
                }
                let (_, zero) = zero_evaluation_complex(&gluing, Coefficients::Zp(p), None)?;
                items.push(Item::new(
                    &format!("zero-evaluation-agreement-p{p}"),
                    zero.agree,
                    to_value(&zero),
                ));
            }
            Ok(items)
        }
        "ex31-flow" => {
            let flow = fixtures::ex31_flow();
            let carry = carries_cocycle(&flow, &parse_rational("1")?, &parse_rational("0")?)?;
            let class = classify_gradient_like(&flow)?;
            let gradient = class.verdict == Verdict::GradientLike;
            let potential_ok = match &class.witness {
                Witness::Potential(g) => flow
                    .edges
                    .iter()
                    .all(|e| e.from == e.to || g[&e.from] > g[&e.to]),
                _ => false,
            };
            Ok(vec![
                Item::new("carries", carry.verdict, to_value(&carry)),
                Item::new("gradient-like", gradient && potential_ok, to_value(&class)),
            ])
        }
        "ex32-flow" => {
            let flow = fixtures::ex32_flow();
            let carry = carries_cocycle(&flow, &parse_rational("2/3")?, &parse_rational("0")?)?;
            let class = classify_gradient_like(&flow)?;
            let not_gradient = class.verdict == Verdict::NotGradientLike;
            let drift = find_drift_cycle(&flow);
            let drift_ok = drift
                .as_ref()
                .map(|c| c.total == vec!["2".to_string()])
                .unwrap_or(false);
            Ok(vec![
                Item::new("carries", carry.verdict, to_value(&carry)),
                Item::new("not-gradient-like", not_gradient, to_value(&class)),
                Item::new("drift-cycle", drift_ok, to_value(&drift)),
            ])
        }
        "sphere-morse-smale" => {
            let data = MorseData {
                sets: vec![
                    MorseSetEntry::Hyperbolic {
                        kind: HyperbolicKind::Fixed,
                        index: 0,
                        count: 1,
                    },
                    MorseSetEntry::Hyperbolic {
                        kind: HyperbolicKind::Periodic,
                        index: 1,
                        count: 1,
                    },
                    MorseSetEntry::Hyperbolic {
                        kind: HyperbolicKind::Fixed,
                        index: 2,
                        count: 1,
                    },
                ],
            };
            let b = novikov_numbers(
                &fixtures::sphere(),
                &CellularCocycle::zero(1),
                None,
                seed,
                trials,
            )?;
            let morse = check_novikov_morse(&data, &b.b);
            let (c, a) = data.hyperbolic_counts().expect("hyperbolic data");
            let ms = check_alpha_morse_smale(&c, &a, &b.b);
            let p_at_minus_one: i64 =
                b.b.iter()
                    .enumerate()
                    .map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) })
                    .sum();
            let euler_ok =
                morse.euler_zero && p_at_minus_one == fixtures::sphere().euler_characteristic();
            Ok(vec![
                Item::new("betti-reference", b.b == vec![1, 0, 1], to_value(&b)),
                Item::new("novikov-morse", morse.verdict, to_value(&morse)),
                Item::new("alpha-morse-smale", ms.verdict, to_value(&ms)),
                Item::new("euler-poincare", euler_ok, json!({"chi": p_at_minus_one})),
            ])
        }
        "mapping-torus-id" => {
            let mut items = Vec::new();
            for (label, base) in [("point", fixtures::point()), ("circle", fixtures::circle())] {
                let f = identity_map(&base);
                let (torus, alpha) = mapping_torus(&base, &f)?;
                let flow = fixtures::suspension_flow(&base, &f);
                let report = vanishing_check(&flow, &torus, &alpha, seed, trials)?;
                items.push(Item::new(
                    &format!("vanishing-identity-on-{label}"),
                    report.all_zero,
                    to_value(&report),
                ));
            }
            Ok(items)
        }
        "mapping-torus-swap" => {
            let two = fixtures::two_points();
            let mut f = BTreeMap::new();
            f.insert("p".to_string(), "q".to_string());
            f.insert("q".to_string(), "p".to_string());
            let (torus, alpha) = mapping_torus(&two, &f)?;
            let flow = fixtures::suspension_flow(&two, &f);
            let report = vanishing_check(&flow, &torus, &alpha, seed, trials)?;
            let h = homology(&torus, Coefficients::Q)?;
            Ok(vec![
                Item::new("is-circle", h.ranks == vec![1, 1], to_value(&h)),
                Item::new(
                    "vanishing-two-point-swap",
                    report.all_zero,
                    to_value(&report),
                ),
            ])
        }
        other => bail!(
            "unknown example `{other}`; available: circle-novikov, torus-novikov, torus-gluing, \
             ex31-flow, ex32-flow, sphere-morse-smale, mapping-torus-id, mapping-torus-swap"
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_examples_pass() {
        for name in [
            "circle-novikov",
            "torus-novikov",
            "torus-gluing",
            "ex31-flow",
            "ex32-flow",
            "sphere-morse-smale",
            "mapping-torus-id",
            "mapping-torus-swap",
        ] {
            let items = run_example(name, 0, 2, 3).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(items.iter().all(|i| i.pass), "{name} failed");
        }
    }
}
