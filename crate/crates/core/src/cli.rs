//! The `leftorder` command line.
//!
//! Every command writes one JSON document `{command, config, result,
//! witnesses}` with sorted keys. Exit codes: 0 pass, 1 witness found, 2 usage
//! or resource error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::action::{self, ConeMap, ConstantMap, EquivarianceReport, IdentityMap, OrbitReport, OrbitSize, Strategy};
use crate::amalgam::{self, Amalgam, Malnormality};
use crate::census;
use crate::cone::{self, AxiomReport, AxiomViolation, Cone, Slope, SlopeDetection};
use crate::conrad::{self, Outcome, Subgroup};
use crate::error::{Error, Limits, Result};
use crate::freeprod::{self, ClosureVerdict, FreeProduct2, KernelBasisWord};
use crate::group::Group;
use crate::json::{cone_to_json, parse_cone, parse_group, parse_ses, parse_word, word_to_json};
use crate::word::Word;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_WITNESS: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug, Serialize)]
#[command(name = "leftorder", version, about = "Exact computations with left-orderings of groups")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Serialize)]
pub struct Common {
    /// Write the document here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Re-check every emitted witness against its cone.
    #[arg(long, global = true)]
    pub verify_witness: bool,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Sign of a word under a cone.
    Sign {
        #[arg(long)]
        cone: String,
        #[arg(long)]
        word: String,
    },
    /// Cone axioms on the ball of radius r.
    Axioms {
        #[arg(long)]
        cone: String,
        #[arg(long, default_value_t = 3)]
        r: usize,
    },
    /// Conjugation orbit of a cone.
    Orbit {
        /// Optional; must match the cone's group when given.
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        cone: String,
        /// Comma-separated words.
        #[arg(long)]
        conjugators: String,
        /// `descriptor` or `ball:R`.
        #[arg(long, default_value = "descriptor")]
        strategy: String,
        #[arg(long, default_value_t = 64)]
        max_size: usize,
    },
    /// Conradian condition on the ball.
    Conradian {
        #[arg(long)]
        cone: String,
        #[arg(long, default_value_t = 3)]
        r: usize,
    },
    /// Convexity of a cyclic subgroup.
    Convexity {
        #[arg(long)]
        cone: String,
        /// Generator of the cyclic subgroup.
        #[arg(long)]
        subgroup: String,
        #[arg(long, default_value_t = 4)]
        r: usize,
    },
    /// Slope detected by a cone on Z².
    Slope {
        #[arg(long)]
        cone: String,
        #[arg(long, default_value_t = 4)]
        r: usize,
    },
    /// Builds a lexicographic cone and checks its axioms.
    Lex {
        #[arg(long)]
        ses: String,
        #[arg(long)]
        kernel: String,
        #[arg(long)]
        quotient: String,
        #[arg(long, default_value_t = 3)]
        r: usize,
    },
    /// Rewrites a kernel element of a free product in the commutator basis.
    KernelDecompose {
        #[arg(long, default_value = "z*z")]
        group: String,
        #[arg(long)]
        word: String,
    },
    /// Conjugates a basis letter x[g, h].
    ConjBasis {
        #[arg(long, default_value = "z*z")]
        group: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        h: String,
        #[arg(long)]
        by: String,
    },
    /// Exponent-sum test for the normal closure of basis letters.
    ClosureCriterion {
        #[arg(long, default_value = "z*z")]
        group: String,
        /// A kernel element, as a word of the free product.
        #[arg(long)]
        word: String,
        /// Letters of S as `g|h`, separated by `;`.
        #[arg(long, default_value = "")]
        s: String,
    },
    /// Normal form in ⟨a, b | a^m = b^n⟩.
    AmalgamNf {
        #[arg(long, default_value_t = 2)]
        m: i64,
        #[arg(long, default_value_t = 2)]
        n: i64,
        #[arg(long)]
        word: String,
    },
    /// Malnormality of ⟨a⟩ in ⟨a, b | a^m = b^n⟩.
    Malnormal {
        #[arg(long, default_value_t = 2)]
        m: i64,
        #[arg(long, default_value_t = 2)]
        n: i64,
        #[arg(long, default_value_t = 4)]
        r: usize,
    },
    /// Enumerates ball cones and keeps those extending to a larger ball.
    Census {
        #[arg(long)]
        group: String,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        extend: Option<usize>,
    },
    /// Random checks of the conjugation identities in a free product.
    VerifyIdentities {
        #[arg(long, default_value = "z*z")]
        group: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 4)]
        max_exp: i64,
    },
    /// Equivariance of a cone map under the diagonal action.
    Equivariance {
        #[arg(long, default_value = "sol")]
        ses: String,
        /// `identity` or a quotient cone for a constant map.
        #[arg(long)]
        theta: String,
        /// Kernel cone the samples start from.
        #[arg(long)]
        cone: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Radius of the ball the sampled conjugators come from.
        #[arg(long, default_value_t = 2)]
        sample_radius: usize,
        #[arg(long, default_value_t = 3)]
        r: usize,
    },
}

/// The outcome of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dispatch {
    pub code: i32,
    pub document: String,
    pub out: Option<PathBuf>,
}

struct Report {
    result: Value,
    witnesses: Vec<Value>,
}

impl Report {
    fn pass(result: Value) -> Self {
        Report { result, witnesses: Vec::new() }
    }

    fn code(&self) -> i32 {
        if self.witnesses.is_empty() {
            EXIT_PASS
        } else {
            EXIT_WITNESS
        }
    }
}

/// Parses `argv` (program name first), runs the command and renders its
/// document. Nothing is written.
pub fn cli_dispatch<I, T>(argv: I) -> Dispatch
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
            return Dispatch { code, document: e.to_string(), out: None };
        }
    };
    let name = command_name(&cli.command);
    let config = serde_json::to_value(&cli).expect("arguments serialize");
    let (code, result, witnesses) = match execute(&cli) {
        Ok(report) => (report.code(), report.result, report.witnesses),
        Err(Error::OrbitUndecided(partial)) => {
            let result = json!({ "error": Error::OrbitUndecided(partial.clone()).to_string(), "partial": orbit_json(&partial) });
            (EXIT_ERROR, result, Vec::new())
        }
        Err(e) => (EXIT_ERROR, json!({ "error": e.to_string() }), Vec::new()),
    };
    let doc = json!({ "command": name, "config": config, "result": result, "witnesses": witnesses });
    let mut document = serde_json::to_string_pretty(&doc).expect("documents serialize");
    document.push('\n');
    Dispatch { code, document, out: cli.common.out.clone() }
}

/// Runs the command line and writes its document; returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let d = cli_dispatch(argv);
    match &d.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &d.document) {
                eprintln!("cannot write {}: {e}", path.display());
                return EXIT_ERROR;
            }
        }
        None if d.code == EXIT_ERROR => eprint!("{}", d.document),
        None => print!("{}", d.document),
    }
    d.code
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Sign { .. } => "sign",
        Command::Axioms { .. } => "axioms",
        Command::Orbit { .. } => "orbit",
        Command::Conradian { .. } => "conradian",
        Command::Convexity { .. } => "convexity",
        Command::Slope { .. } => "slope",
        Command::Lex { .. } => "lex",
        Command::KernelDecompose { .. } => "kernel-decompose",
        Command::ConjBasis { .. } => "conj-basis",
        Command::ClosureCriterion { .. } => "closure-criterion",
        Command::AmalgamNf { .. } => "amalgam-nf",
        Command::Malnormal { .. } => "malnormal",
        Command::Census { .. } => "census",
        Command::VerifyIdentities { .. } => "verify-identities",
        Command::Equivariance { .. } => "equivariance",
    }
}

fn execute(cli: &Cli) -> Result<Report> {
    let verify = cli.common.verify_witness;
    match &cli.command {
        Command::Sign { cone, word } => {
            let c = parse_cone(cone)?;
            let w = parse_word(&c.group(), word)?;
            let s = cone::cone_sign(&c, &w)?;
            Ok(Report::pass(json!({ "word": word_to_json(&c.group(), &w), "sign": s.symbol() })))
        }
        Command::Axioms { cone, r } => {
            let c = parse_cone(cone)?;
            axioms_report(&c, *r, verify)
        }
        Command::Orbit { group, cone, conjugators, strategy, max_size } => {
            let c = parse_cone(cone)?;
            let g = c.group();
            if let Some(name) = group {
                if parse_group(name)? != g {
                    return Err(Error::ContextMismatch(format!("cone lives on {:?}, not {name}", g)));
                }
            }
            let conj = conjugators
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| parse_word(&g, s))
                .collect::<Result<Vec<_>>>()?;
            let report = action::orbit(&c, &conj, parse_strategy(strategy)?, *max_size)?;
            Ok(Report::pass(orbit_json(&report)))
        }
        Command::Conradian { cone, r } => {
            let c = parse_cone(cone)?;
            let g = c.group();
            match conrad::conradian_check(&c, *r)? {
                Outcome::Pass(r) => Ok(Report::pass(json!({ "outcome": "pass", "radius": r }))),
                Outcome::Witness(v) => {
                    let mut w = json!({
                        "kind": "conradian-violation",
                        "g": word_to_json(&g, &v.g),
                        "h": word_to_json(&g, &v.h),
                        "radius": r,
                    });
                    if let Some((gk, hk)) = conrad::lex_witness_pattern(&c, &v)? {
                        w["in_kernel"] = json!([gk, hk]);
                    }
                    if verify {
                        w["verified"] = json!(v.verify(&c)?);
                    }
                    Ok(Report { result: json!({ "outcome": "witness", "radius": r }), witnesses: vec![w] })
                }
            }
        }
        Command::Convexity { cone, subgroup, r } => {
            let c = parse_cone(cone)?;
            let g = c.group();
            let gen = parse_word(&g, subgroup)?;
            let sub = Subgroup::cyclic(&g, &gen)?;
            match conrad::convexity_check(&c, &sub, *r)? {
                Outcome::Pass(r) => Ok(Report::pass(json!({ "outcome": "pass", "radius": r }))),
                Outcome::Witness(v) => {
                    let mut w = json!({
                        "kind": "convexity-violation",
                        "c1": word_to_json(&g, &v.c1),
                        "f": word_to_json(&g, &v.f),
                        "c2": word_to_json(&g, &v.c2),
                        "radius": r,
                    });
                    if verify {
                        w["verified"] = json!(v.verify(&c, &sub)?);
                    }
                    Ok(Report { result: json!({ "outcome": "witness", "radius": r }), witnesses: vec![w] })
                }
            }
        }
        Command::Slope { cone, r } => {
            let c = parse_cone(cone)?;
            Ok(Report::pass(detection_json(&cone::detect_slope(&c, *r)?)))
        }
        Command::Lex { ses, kernel, quotient, r } => {
            let ses = parse_ses(ses)?;
            let c = cone::lex_cone(ses, parse_cone(kernel)?, parse_cone(quotient)?)?;
            let mut report = axioms_report(&c, *r, verify)?;
            report.result["cone"] = cone_to_json(&c);
            Ok(report)
        }
        Command::KernelDecompose { group, word } => {
            let fp = FreeProduct2::from_group(&parse_group(group)?)?;
            let w = parse_word(&fp.group(), word)?;
            let k = freeprod::kernel_decompose(&fp, &w)?;
            Ok(Report::pass(basis_json(&fp, &k)?))
        }
        Command::ConjBasis { group, g, h, by } => {
            let fp = FreeProduct2::from_group(&parse_group(group)?)?;
            let (g, h) = (parse_factor(&fp, Side::G, g)?, parse_factor(&fp, Side::H, h)?);
            let by = parse_word(&fp.group(), by)?;
            let k = freeprod::conj_basis(&fp, (&g, &h), &by)?;
            let direct = freeprod::conj_basis_direct(&fp, (&g, &h), &by)?;
            let mut result = basis_json(&fp, &k)?;
            result["agrees_with_direct"] = json!(k == direct);
            Ok(Report::pass(result))
        }
        Command::ClosureCriterion { group, word, s } => {
            let fp = FreeProduct2::from_group(&parse_group(group)?)?;
            let w = parse_word(&fp.group(), word)?;
            let k = freeprod::kernel_decompose(&fp, &w)?;
            let mut labels = Vec::new();
            for item in s.split(';').filter(|x| !x.trim().is_empty()) {
                let (g, h) = item.split_once('|').ok_or_else(|| Error::Parse(format!("'{item}' is not g|h")))?;
                labels.push((parse_factor(&fp, Side::G, g)?, parse_factor(&fp, Side::H, h)?));
            }
            let mut result = basis_json(&fp, &k)?;
            match freeprod::normal_closure_criterion(&k, &labels) {
                ClosureVerdict::Consistent => {
                    result["verdict"] = json!("consistent");
                    Ok(Report::pass(result))
                }
                ClosureVerdict::Violates { g, h, sum } => {
                    result["verdict"] = json!("violates");
                    let mut w = json!({
                        "kind": "exponent-sum",
                        "g": word_to_json(&fp.group(), &fp.lift_g(&g)),
                        "h": word_to_json(&fp.group(), &fp.lift_h(&h)),
                        "sum": sum,
                    });
                    if verify {
                        w["verified"] = json!(freeprod::exponent_sum(&k, (&g, &h)) == sum && sum != 0);
                    }
                    Ok(Report { result, witnesses: vec![w] })
                }
            }
        }
        Command::AmalgamNf { m, n, word } => {
            let am = Amalgam::cyclic(*m, *n)?;
            let w = parse_word(&Group::free(2), word)?;
            let nf = amalgam::amalgam_normal_form(&am, &w)?;
            let factors: Vec<Value> = nf
                .factors
                .iter()
                .map(|(s, e)| json!([if *s == amalgam::Side::A { "a" } else { "b" }, e]))
                .collect();
            Ok(Report::pass(json!({
                "prefix": nf.prefix,
                "factors": factors,
                "length": nf.len(),
                "display": nf.display("c"),
            })))
        }
        Command::Malnormal { m, n, r } => {
            let am = Amalgam::cyclic(*m, *n)?;
            let f2 = Group::free(2);
            match amalgam::malnormality_check(&am, *r)? {
                Malnormality::Pass(r) => Ok(Report::pass(json!({ "outcome": "pass", "radius": r }))),
                Malnormality::Witness { a, w } => {
                    let mut wit = json!({
                        "kind": "malnormality-violation",
                        "a": word_to_json(&f2, &a),
                        "w": word_to_json(&f2, &w),
                        "radius": r,
                    });
                    if verify {
                        let conj = w.formal_inverse().concat(&a).concat(&w);
                        let ok = amalgam::amalgam_normal_form(&am, &conj)?.in_factor(amalgam::Side::A)
                            && !amalgam::amalgam_normal_form(&am, &w)?.in_factor(amalgam::Side::A)
                            && amalgam::amalgam_normal_form(&am, &a)? != amalgam::AmalgamForm { prefix: 0, factors: vec![] };
                        wit["verified"] = json!(ok);
                    }
                    Ok(Report { result: json!({ "outcome": "witness", "radius": r }), witnesses: vec![wit] })
                }
            }
        }
        Command::Census { group, r, extend } => {
            let g = parse_group(group)?;
            let limits = Limits::from_env();
            let cones = census::enumerate_ball_cones(&g, *r, &limits)?;
            let survivors = match extend {
                Some(t) => census::extendable_filter(&g, &cones, *t, &limits)?,
                None => cones.clone(),
            };
            Ok(Report::pass(json!({
                "radius": r,
                "extend": extend,
                "ball_cones": cones.len(),
                "survivors": survivors.len(),
                "digest": census::digest(&g, &survivors),
                "cones": survivors.iter().map(|c| c.to_json(&g)).collect::<Vec<_>>(),
            })))
        }
        Command::VerifyIdentities { group, samples, max_exp } => {
            let fp = FreeProduct2::from_group(&parse_group(group)?)?;
            verify_identities(&fp, *samples, *max_exp, cli.common.seed)
        }
        Command::Equivariance { ses, theta, cone, samples, sample_radius, r } => {
            let ses = parse_ses(ses)?;
            let p = parse_cone(cone)?;
            let total = ses.total();
            let ball: Vec<Word> = total.ball(*sample_radius)?.into_iter().skip(1).collect();
            if ball.is_empty() {
                return Err(Error::Parse("sample radius must be positive".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cli.common.seed);
            let pairs: Vec<(Word, Cone)> =
                (0..*samples).map(|_| (ball[rng.gen_range(0..ball.len())].clone(), p.clone())).collect();
            let map: Box<dyn ConeMap> = match theta.trim() {
                "identity" => Box::new(IdentityMap),
                t => Box::new(ConstantMap(parse_cone(t)?)),
            };
            match action::equivariance_check(map.as_ref(), &ses, &pairs, *r)? {
                EquivarianceReport::Pass { samples, radius } => {
                    Ok(Report::pass(json!({ "outcome": "pass", "samples": samples, "radius": radius })))
                }
                EquivarianceReport::Witness { g, cone, word } => {
                    let q = ses.quotient();
                    let w = json!({
                        "kind": "equivariance-violation",
                        "g": word_to_json(&total, &g),
                        "cone": cone_to_json(&cone),
                        "word": word.map(|w| word_to_json(&q, &w)),
                        "radius": r,
                    });
                    Ok(Report { result: json!({ "outcome": "witness", "radius": r }), witnesses: vec![w] })
                }
            }
        }
    }
}

fn parse_strategy(s: &str) -> Result<Strategy> {
    match s.trim() {
        "descriptor" => Ok(Strategy::DescriptorExact),
        t => t
            .strip_prefix("ball:")
            .and_then(|r| r.parse().ok())
            .map(Strategy::Ball)
            .ok_or_else(|| Error::Parse(format!("strategy '{t}' is neither 'descriptor' nor 'ball:R'"))),
    }
}

fn axioms_report(c: &Cone, r: usize, verify: bool) -> Result<Report> {
    let g = c.group();
    match cone::check_cone_axioms_on_ball(c, r)? {
        AxiomReport::Pass { radius } => Ok(Report::pass(json!({ "outcome": "pass", "radius": radius }))),
        AxiomReport::Witness(v) => {
            let mut w = match &v {
                AxiomViolation::Antisymmetry { w } => json!({ "kind": "antisymmetry", "w": word_to_json(&g, w) }),
                AxiomViolation::Closure { u, v, uv } => json!({
                    "kind": "closure",
                    "u": word_to_json(&g, u),
                    "v": word_to_json(&g, v),
                    "uv": word_to_json(&g, uv),
                }),
            };
            w["radius"] = json!(r);
            if verify {
                w["verified"] = json!(v.verify(c)?);
            }
            Ok(Report { result: json!({ "outcome": "witness", "radius": r }), witnesses: vec![w] })
        }
    }
}

pub fn orbit_json(report: &OrbitReport) -> Value {
    let group = report.representatives.first().map(|c| c.group());
    let (size, exceeded) = match report.size {
        OrbitSize::Exact(n) => (Some(n), false),
        OrbitSize::ExceededBound => (None, true),
    };
    json!({
        "size": size,
        "exceeded_bound": exceeded,
        "strategy": match report.strategy {
            Strategy::DescriptorExact => "descriptor".to_string(),
            Strategy::Ball(r) => format!("ball:{r}"),
        },
        "conjugators": report
            .conjugators
            .iter()
            .map(|w| group.as_ref().map(|g| word_to_json(g, w)).unwrap_or(Value::Null))
            .collect::<Vec<_>>(),
        "representatives": report.representatives.iter().map(cone_to_json).collect::<Vec<_>>(),
    })
}

pub fn slope_json(s: &Slope) -> Value {
    match s {
        Slope::Rational { p, q } => json!({ "rational": [p, q] }),
        Slope::Irrational(m) => json!({ "irrational": crate::json::surd_to_json(m), "display": format!("{s}") }),
    }
}

pub fn detection_json(d: &SlopeDetection) -> Value {
    match d {
        SlopeDetection::Rational { slope, variant } => {
            json!({ "kind": "rational", "slope": slope_json(slope), "variant": variant.symbol() })
        }
        SlopeDetection::Irrational { slope, sign } => {
            json!({ "kind": "irrational", "slope": slope_json(slope), "sign": sign.as_int() })
        }
        SlopeDetection::Candidate { from, to, radius, readings } => json!({
            "kind": "candidate",
            "from": from,
            "to": to,
            "radius": radius,
            "readings": readings
                .iter()
                .map(|(s, v)| json!({ "slope": slope_json(s), "variant": v.symbol() }))
                .collect::<Vec<_>>(),
        }),
    }
}

fn basis_json(fp: &FreeProduct2, k: &KernelBasisWord) -> Result<Value> {
    let letters: Vec<Value> = k
        .letters()
        .iter()
        .map(|l| {
            json!({
                "g": word_to_json(&fp.group(), &fp.lift_g(&l.g)),
                "h": word_to_json(&fp.group(), &fp.lift_h(&l.h)),
                "e": l.e,
            })
        })
        .collect();
    Ok(json!({
        "basis": letters,
        "display": k.display(fp),
        "expanded": word_to_json(&fp.group(), &k.expand(fp)?),
    }))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    G,
    H,
}

/// A word of one factor, written with the free product's generator names.
fn parse_factor(fp: &FreeProduct2, side: Side, s: &str) -> Result<Word> {
    let w = parse_word(&fp.group(), s)?;
    let off = fp.g.rank();
    let (lo, hi) = match side {
        Side::G => (0, off),
        Side::H => (off, off + fp.h.rank()),
    };
    if w.syllables().iter().any(|x| x.gen < lo || x.gen >= hi) {
        return Err(Error::Parse(format!("'{s}' does not lie in one factor")));
    }
    Ok(w.map_gens(|i| i - lo))
}

fn random_factor_word(rng: &mut ChaCha8Rng, g: &Group, max_exp: i64, nonidentity: bool) -> Result<Word> {
    let rank = g.rank();
    loop {
        let mut w = Word::identity();
        for _ in 0..rng.gen_range(1..=2) {
            w.push(rng.gen_range(0..rank), rng.gen_range(-max_exp..=max_exp));
        }
        let w = g.normalize(&w)?;
        if !nonidentity || !w.is_identity() {
            return Ok(w);
        }
    }
}

fn verify_identities(fp: &FreeProduct2, samples: usize, max_exp: i64, seed: u64) -> Result<Report> {
    if max_exp < 1 || fp.g.rank() == 0 || fp.h.rank() == 0 {
        return Err(Error::Parse("need max_exp >= 1 and nontrivial factors".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut witnesses = Vec::new();
    let mut passed = 0;
    for i in 0..samples {
        let g = random_factor_word(&mut rng, &fp.g, max_exp, true)?;
        let h = random_factor_word(&mut rng, &fp.h, max_exp, true)?;
        let a = random_factor_word(&mut rng, &fp.g, max_exp, false)?;
        let b = random_factor_word(&mut rng, &fp.h, max_exp, false)?;
        let check = freeprod::check_identities(fp, &g, &h, &a, &b)?;
        if check.all() {
            passed += 1;
        } else {
            witnesses.push(json!({
                "kind": "identity-failure",
                "instance": i,
                "g": word_to_json(&fp.group(), &fp.lift_g(&g)),
                "h": word_to_json(&fp.group(), &fp.lift_h(&h)),
                "a": word_to_json(&fp.group(), &fp.lift_g(&a)),
                "b": word_to_json(&fp.group(), &fp.lift_h(&b)),
                "by_a": check.by_a,
                "by_b": check.by_b,
                "by_ab": check.by_ab,
            }));
        }
    }
    Ok(Report { result: json!({ "instances": samples, "passed": passed }), witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Dispatch {
        cli_dispatch(std::iter::once("leftorder").chain(args.iter().copied()))
    }

    fn doc(d: &Dispatch) -> Value {
        serde_json::from_str(&d.document).unwrap()
    }

    #[test]
    fn documented_examples() {
        let d = run(&["axioms", "--cone", r#"{"kind":"klein","ex":1,"ey":1}"#, "--r", "3"]);
        assert_eq!(d.code, 0);
        assert_eq!(doc(&d)["result"]["outcome"], "pass");
        let d = run(&["orbit", "--group", "klein", "--cone", r#"{"kind":"klein","ex":1,"ey":1}"#, "--conjugators", "x,y"]);
        assert_eq!(d.code, 0);
        assert_eq!(doc(&d)["result"]["size"], 2);
        let d = run(&["census", "--group", "klein", "--r", "4", "--extend", "8"]);
        assert_eq!(d.code, 0);
        assert_eq!(doc(&d)["result"]["survivors"], 4);
    }

    #[test]
    fn envelope_keys() {
        let d = run(&["sign", "--cone", r#"{"kind":"slope","a":[2,3],"variant":"+-"}"#, "--word", "e1 e2^-1"]);
        let v = doc(&d);
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["command", "config", "result", "witnesses"]);
        assert_eq!(v["command"], "sign");
        assert_eq!(v["config"]["common"]["seed"], 0);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(&["frobnicate"]).code, 2);
        assert_eq!(run(&["axioms", "--cone", "{not json"]).code, 2);
        assert_eq!(run(&["malnormal", "--m", "2", "--n", "2"]).code, 1);
        assert_eq!(run(&["malnormal", "--m", "0", "--n", "0"]).code, 0);
        assert_eq!(run(&["kernel-decompose", "--word", "a"]).code, 2);
        let orbit_mismatch = run(&["orbit", "--group", "z2", "--cone", r#"{"kind":"klein","ex":1,"ey":1}"#, "--conjugators", "x"]);
        assert_eq!(orbit_mismatch.code, 2);
    }

    #[test]
    fn witnesses_verify() {
        let d = run(&["--verify-witness", "malnormal", "--m", "2", "--n", "2"]);
        assert_eq!(doc(&d)["witnesses"][0]["verified"], true);
        let d = run(&[
            "convexity",
            "--verify-witness",
            "--cone",
            r#"{"kind":"slope","a":[1,-1],"variant":"++"}"#,
            "--subgroup",
            "e1",
            "--r",
            "3",
        ]);
        assert_eq!(d.code, 1);
        assert_eq!(doc(&d)["witnesses"][0]["verified"], true);
    }

    #[test]
    fn kernel_commands() {
        let d = run(&["kernel-decompose", "--word", "a b a^-1 b^-1"]);
        assert_eq!(doc(&d)["result"]["display"], "x[a, b]");
        let d = run(&["conj-basis", "--g", "a", "--h", "b", "--by", "a b"]);
        assert_eq!(doc(&d)["result"]["agrees_with_direct"], true);
        let d = run(&["closure-criterion", "--word", "a b a^-1 b^-1", "--s", "a|b"]);
        assert_eq!(d.code, 0);
        let d = run(&["closure-criterion", "--word", "a b a^-1 b^-1", "--s", "a^2|b^2"]);
        assert_eq!(d.code, 1);
    }

    #[test]
    fn repeatable() {
        let args = ["verify-identities", "--samples", "50", "--seed", "7"];
        assert_eq!(run(&args), run(&args));
        assert_eq!(run(&args).code, 0);
    }
}
