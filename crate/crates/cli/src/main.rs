//! `affine-trees`: build contexts, run the verification suites, classify
//! maps and certify free products.
//!
//! Exit codes: 0 when everything passes, 1 when a violation is found, 2 on
//! input or spec errors.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use affine_trees::affine::AffineMap;
use affine_trees::combinators::{
    certify_free, fp_syllable_ball, FreeProductContext, FreenessReport,
};
use affine_trees::examples::{self, Built, FreeShiftLength, EXAMPLES};
use affine_trees::lyndon::{
    ancillary_a, ancillary_b, axiom_suite, prop_suite, word_ball, ActionContext, ActionSpec, Ball,
    BallTable, BaseChanged, FactorLength, LengthFunction, OrderHom, PerturbedLength, SuiteConfig,
    SuiteReport, WordLength,
};
use affine_trees::oag::OagDescriptor;
use affine_trees::trees::TreeSpace;
use affine_trees::Error;

#[derive(Parser)]
#[command(
    name = "affine-trees",
    version,
    about = "Exact affine actions on Lambda-trees"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the axiom and length-property suites on a word ball.
    Verify {
        #[command(flatten)]
        input: Input,
        /// Ball radius (syllables for free products).
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        radius: u32,
        /// Seed for sampled checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Classify a map, or every word of an action's ball.
    Classify {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        radius: u32,
        /// Classify this word only.
        #[arg(long)]
        word: Option<String>,
    },
    /// Certify freeness of a free product up to a radius.
    Freeproduct {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        radius: u32,
    },
    /// List or build the canonical examples.
    Examples {
        #[command(subcommand)]
        cmd: ExamplesCmd,
    },
}

#[derive(Subcommand)]
enum ExamplesCmd {
    List,
    Build {
        name: String,
        #[arg(long = "param", value_parser = parse_kv)]
        params: Vec<(String, String)>,
    },
}

#[derive(Args)]
struct Input {
    /// A registered example name.
    #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
    example: Option<String>,
    /// A JSON action spec, map spec or free-product spec.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Example parameter, `k=v`.
    #[arg(long = "param", value_parser = parse_kv)]
    params: Vec<(String, String)>,
}

fn parse_kv(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("expected k=v, got `{s}`"))
}

/// Failure modes mapped to exit codes.
enum Fail {
    Input(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Input(e.to_string())
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Self {
        Fail::Input(e.to_string())
    }
}

enum Subject {
    Action(ActionContext),
    Perturbed(PerturbedLength<ActionContext>),
    FreeShift(FreeShiftLength),
    FreeProduct(FreeProductContext),
    Map { space: TreeSpace, map: AffineMap },
}

fn load(input: &Input) -> Result<Subject, Fail> {
    if let Some(name) = &input.example {
        let params: BTreeMap<String, String> = input.params.iter().cloned().collect();
        return Ok(match examples::build(name, &params)? {
            Built::Action(c) => Subject::Action(c),
            Built::FreeShift(f) => Subject::FreeShift(f),
            Built::Map { space, map } => Subject::Map { space, map },
            Built::FreeProduct(fp) => Subject::FreeProduct(fp),
        });
    }
    if !input.params.is_empty() {
        return Err(Fail::Input("--param applies to --example only".into()));
    }
    let path = input
        .spec
        .as_ref()
        .expect("clap requires --example or --spec");
    let text =
        fs::read_to_string(path).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))?;
    if v.get("factors").is_some() {
        return Ok(Subject::FreeProduct(free_product_spec(&v)?));
    }
    if v.get("generators").is_some() {
        return Ok(action_subject(ActionSpec::from_value(&v)?)?);
    }
    let (space, map) = AffineMap::from_value(&v)?;
    Ok(Subject::Map { space, map })
}

fn action_subject(spec: ActionSpec) -> Result<Subject, Error> {
    if spec.overrides.is_empty() {
        Ok(Subject::Action(spec.context))
    } else {
        Ok(Subject::Perturbed(PerturbedLength::new(
            spec.context,
            spec.overrides,
        )?))
    }
}

fn factor<L: WordLength + Send + 'static>(
    l: L,
    hom: Option<OrderHom>,
) -> Result<Arc<dyn FactorLength>, Error> {
    Ok(match hom {
        None => Arc::new(l),
        Some(h) => Arc::new(BaseChanged::extended(l, h)?),
    })
}

/// `{name?, factors: [action spec, ...]}`. Factors over different groups
/// are combined in `Λ₁ × Λ₂` (two factors only).
fn free_product_spec(v: &Value) -> Result<FreeProductContext, Fail> {
    let specs = v
        .get("factors")
        .and_then(Value::as_array)
        .ok_or_else(|| Fail::Input("`factors` must be an array".into()))?;
    let specs: Vec<ActionSpec> = specs
        .iter()
        .map(ActionSpec::from_value)
        .collect::<Result<_, _>>()?;
    let descs: Vec<OagDescriptor> = specs.iter().map(|s| s.context.space.descriptor()).collect();
    let homs: Vec<Option<OrderHom>> = if descs.iter().all(|d| *d == descs[0]) {
        vec![None; descs.len()]
    } else if descs.len() == 2 {
        vec![
            Some(OrderHom::IntoLeft {
                right: descs[1].clone(),
            }),
            Some(OrderHom::IntoRight {
                left: descs[0].clone(),
            }),
        ]
    } else {
        return Err(Fail::Input(
            "factors over different groups: only two factors can be combined".into(),
        ));
    };
    let mut factors = Vec::new();
    for (spec, hom) in specs.into_iter().zip(homs) {
        factors.push(match action_subject(spec)? {
            Subject::Action(c) => factor(c, hom)?,
            Subject::Perturbed(p) => factor(p, hom)?,
            _ => unreachable!("action specs build actions"),
        });
    }
    let name = v
        .get("name")
        .and_then(Value::as_str)
        .unwrap_or("free_product");
    Ok(FreeProductContext::new(name, factors)?)
}

struct Report {
    body: String,
    pass: bool,
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<(), Fail> {
    match out {
        Some(p) => fs::write(p, body)?,
        None => {
            let mut s = std::io::stdout().lock();
            s.write_all(body.as_bytes())?;
        }
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn tsv_escape(s: &str) -> String {
    s.replace(['\t', '\n'], " ")
}

// verify

fn suite_tsv(rows: &mut String, reports: &[&SuiteReport]) {
    for r in reports {
        for c in &r.checks {
            rows.push_str(&format!(
                "# {}\t{}\t{}\t{}\t{}\n",
                r.suite, c.axiom, c.status, c.checked, c.violations
            ));
            for w in &c.witnesses {
                rows.push_str(&format!(
                    "#   {}\t{}\n",
                    tsv_escape(&w.elements.join(", ")),
                    tsv_escape(&w.detail)
                ));
            }
        }
    }
}

fn verify_generic<L: LengthFunction>(
    lf: &L,
    name: &str,
    ball: &Ball<L::Elem>,
    radius: u32,
    seed: u64,
    format: Format,
    classify: &(dyn Fn(&L::Elem) -> String + Sync),
) -> Result<Report, Fail> {
    let table = BallTable::build(lf, ball)?;
    let axioms = axiom_suite(lf, name, ball, &table);
    let props = prop_suite(
        lf,
        name,
        ball,
        &table,
        SuiteConfig {
            seed,
            ..SuiteConfig::default()
        },
    )?;
    let pass = axioms.passed && props.passed;
    let body = match format {
        Format::Json => pretty(&json!({
            "context": name,
            "provenance": lf.provenance(),
            "radius": radius,
            "ball_size": ball.len(),
            "passed": pass,
            "axioms": axioms,
            "properties": props,
        })),
        Format::Tsv => {
            let mut s = String::from("word\tL\ta\tb\tc_integral\tclassification\n");
            let n = ball.len();
            for (i, g) in ball.elems.iter().enumerate() {
                let integral = (0..n).all(|j| table.c(i, j).is_integral());
                s.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\n",
                    ball.labels[i],
                    table.length(i),
                    ancillary_a(lf, g)?,
                    ancillary_b(lf, g)?,
                    integral,
                    classify(g)
                ));
            }
            suite_tsv(&mut s, &[&axioms, &props]);
            s.push_str(&format!("# passed\t{pass}\n"));
            s
        }
    };
    Ok(Report { body, pass })
}

fn no_class<E>(_: &E) -> String {
    "-".into()
}

fn cmd_verify(input: &Input, radius: u32, seed: u64, format: Format) -> Result<Report, Fail> {
    let r = radius as usize;
    match load(input)? {
        Subject::Action(c) => {
            let (ball, _) = word_ball(&c, r)?;
            let classify = |g: &AffineMap| {
                g.classify()
                    .map(|c| c.tag().to_string())
                    .unwrap_or_else(|e| e.to_string())
            };
            verify_generic(&c, &c.name, &ball, radius, seed, format, &classify)
        }
        Subject::Perturbed(p) => {
            let (ball, _) = word_ball(&p, r)?;
            let name = format!("{} (with length overrides)", p.inner.name);
            verify_generic(&p, &name, &ball, radius, seed, format, &no_class)
        }
        Subject::FreeShift(f) => {
            let (ball, _) = word_ball(&f, r)?;
            verify_generic(
                &f,
                &format!("free_shift({})", f.n_range),
                &ball,
                radius,
                seed,
                format,
                &no_class,
            )
        }
        Subject::FreeProduct(fp) => {
            let ball = fp_syllable_ball(&fp, r, 2)?;
            verify_generic(
                &fp,
                &fp.name.clone(),
                &ball,
                radius,
                seed,
                format,
                &no_class,
            )
        }
        Subject::Map { .. } => Err(Fail::Input(
            "verify needs a length function, not a single map".into(),
        )),
    }
}

// classify

fn classify_map(space: &TreeSpace, map: &AffineMap, format: Format) -> Result<Report, Fail> {
    let c = map.classify()?;
    let verified = c.verify(map, space)?;
    let mut v = json!({
        "map": map.to_value(space),
        "classification": c.to_value(space),
        "verified": verified,
        "fixed_points": map.fixed_points()?.to_value(),
    });
    if let AffineMap::Linear(_) = map {
        v["rigid"] = json!(map.is_rigid()?);
    }
    if let TreeSpace::Star { rays, .. } = space {
        let mut per = Vec::new();
        for ray in 1..=*rays {
            if let Ok(rc) = map.classify_restricted_to_ray(ray) {
                per.push(json!({"ray": ray, "classification": rc.to_value(space)}));
            }
        }
        v["invariant_rays"] = Value::Array(per);
    }
    let body = match format {
        Format::Json => pretty(&v),
        Format::Tsv => format!(
            "map\tclassification\tverified\n{map}\t{}\t{verified}\n",
            c.tag()
        ),
    };
    Ok(Report {
        body,
        pass: verified,
    })
}

fn cmd_classify(
    input: &Input,
    radius: u32,
    word: Option<&str>,
    format: Format,
) -> Result<Report, Fail> {
    let ctx = match load(input)? {
        Subject::Map { space, map } => return classify_map(&space, &map, format),
        Subject::Action(c) => c,
        Subject::Perturbed(p) => p.inner,
        _ => return Err(Fail::Input("classify needs an action or a map".into())),
    };
    let words = match word {
        Some(w) => vec![ctx.parse(w)?],
        None => word_ball(&ctx, radius as usize)?.1,
    };
    let mut rows = Vec::new();
    let mut pass = true;
    let mut counts: BTreeMap<&'static str, usize> = BTreeMap::new();
    for w in &words {
        let g = ctx.realize(w)?;
        let c = g.classify()?;
        let verified = c.verify(&g, &ctx.space)?;
        pass &= verified;
        if !w.is_empty() {
            *counts.entry(c.tag()).or_default() += 1;
        }
        let rigid = match g {
            AffineMap::Linear(_) => Some(g.is_rigid()?),
            AffineMap::Star(_) => None,
        };
        rows.push((w.display(&ctx.alphabet).to_string(), c, verified, rigid));
    }
    let body = match format {
        Format::Json => pretty(&json!({
            "context": ctx.name,
            "words": rows.len(),
            "counts_nonidentity": counts,
            "classifications": rows.iter().map(|(w, c, v, r)| json!({
                "word": w,
                "classification": c.to_value(&ctx.space),
                "verified": v,
                "rigid": r,
            })).collect::<Vec<_>>(),
        })),
        Format::Tsv => {
            let mut s = String::from("word\tclassification\tverified\trigid\n");
            for (w, c, v, r) in &rows {
                let r = r.map(|b| b.to_string()).unwrap_or_else(|| "-".into());
                s.push_str(&format!("{w}\t{}\t{v}\t{r}\n", c.tag()));
            }
            s
        }
    };
    Ok(Report { body, pass })
}

// freeproduct

fn freeness_body(rep: &FreenessReport, format: Format) -> String {
    match format {
        Format::Json => pretty(&serde_json::to_value(rep).expect("serializable")),
        Format::Tsv => {
            let mut s = String::from("word\tsyllables\treduced_syllables\tfree\tb\tfailure\n");
            for v in &rep.verdicts {
                let failure = v
                    .failure
                    .as_ref()
                    .map(|f| match f.syllable {
                        Some(k) => format!("syllable {k}: {}", f.reason),
                        None => f.reason.clone(),
                    })
                    .unwrap_or_else(|| "-".into());
                s.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\n",
                    v.word,
                    v.syllables,
                    v.reduced_syllables,
                    v.free,
                    v.b.as_deref().unwrap_or("-"),
                    tsv_escape(&failure)
                ));
            }
            s.push_str(&format!("# {}\n", rep.summary()));
            s
        }
    }
}

fn cmd_freeproduct(input: &Input, radius: u32, format: Format) -> Result<Report, Fail> {
    let ctx = match load(input)? {
        Subject::FreeProduct(fp) => fp,
        Subject::Action(c) => {
            let name = c.name.clone();
            FreeProductContext::new(&name, vec![Arc::new(c)])?
        }
        Subject::Perturbed(p) => {
            let name = p.inner.name.clone();
            FreeProductContext::new(&name, vec![Arc::new(p)])?
        }
        Subject::FreeShift(f) => FreeProductContext::new("free_shift", vec![Arc::new(f)])?,
        Subject::Map { .. } => {
            return Err(Fail::Input(
                "freeproduct needs length functions, not a map".into(),
            ))
        }
    };
    let rep = certify_free(&ctx, radius as usize)?;
    eprintln!("{}", rep.summary());
    Ok(Report {
        body: freeness_body(&rep, format),
        pass: rep.free,
    })
}

// examples

fn cmd_examples(cmd: &ExamplesCmd, format: Format) -> Result<Report, Fail> {
    let body = match cmd {
        ExamplesCmd::List => match format {
            Format::Json => pretty(&Value::Array(
                EXAMPLES
                    .iter()
                    .map(|e| {
                        json!({
                            "name": e.name,
                            "kind": e.kind,
                            "summary": e.summary,
                            "params": e.params.iter().map(|p| json!({
                                "name": p.name, "default": p.default, "help": p.help,
                            })).collect::<Vec<_>>(),
                        })
                    })
                    .collect(),
            )),
            Format::Tsv => {
                let mut s = String::from("name\tkind\tparams\tsummary\n");
                for e in EXAMPLES {
                    let params: Vec<String> = e
                        .params
                        .iter()
                        .map(|p| format!("{}={}", p.name, p.default))
                        .collect();
                    s.push_str(&format!(
                        "{}\t{}\t{}\t{}\n",
                        e.name,
                        e.kind,
                        params.join(","),
                        e.summary
                    ));
                }
                s
            }
        },
        ExamplesCmd::Build { name, params } => {
            let params: BTreeMap<String, String> = params.iter().cloned().collect();
            pretty(&examples::build(name, &params)?.to_value())
        }
    };
    Ok(Report { body, pass: true })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .expect("thread pool is configured once");
    }
    let res = match &cli.cmd {
        Cmd::Verify {
            input,
            radius,
            seed,
        } => cmd_verify(input, *radius, *seed, cli.format),
        Cmd::Classify {
            input,
            radius,
            word,
        } => cmd_classify(input, *radius, word.as_deref(), cli.format),
        Cmd::Freeproduct { input, radius } => cmd_freeproduct(input, *radius, cli.format),
        Cmd::Examples { cmd } => cmd_examples(cmd, cli.format),
    };
    let res = res.and_then(|r| emit(&cli.out, &r.body).map(|_| r.pass));
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fail::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
