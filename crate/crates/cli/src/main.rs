use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use cellua::algebra::Axiom;
use cellua::alpha::{construct, verify_assumptions, AlphaConstruction};
use cellua::ingest::{load_file_over, Builtin};
use cellua::relations::{condition_c, format_partition, parabolic_blocks_on_lambda, run_all, Partition};
use cellua::repth::{csv_field, decomposition_matrix, linkage_partition, require_characteristic};
use cellua::{Algebra, AlphaDatum, Field, Report, Side};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact computations with cellular algebras and their α constructions.
#[derive(Parser)]
#[command(name = "cellua", version)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Check the cellular axioms
    Verify(Input),
    /// Check the assumptions on the α datum and report whether the
    /// idempotents detect the simples
    Assumptions(Input),
    /// Decomposition matrix of the algebra or of a constructed algebra
    Decomp(DecompArgs),
    /// Linkage classes of every algebra in play
    Blocks(Input),
    /// Dimensions and bases of the constructed algebras
    Alpha(Input),
    /// The full check suite
    Report(Input),
}

#[derive(Args)]
struct Input {
    /// A `.cell.json` or `.quiver.json` file
    #[arg(required_unless_present = "builtin", conflicts_with = "builtin")]
    file: Option<PathBuf>,
    /// `path-example` or `matrix:n=<n>,b=<b>`
    #[arg(long)]
    builtin: Option<Builtin>,
    /// `rational` or `fp:<p>`; files default to their own field
    #[arg(long)]
    field: Option<Field>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecompArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum, default_value_t = Which::Ambient)]
    algebra: Which,
    #[arg(long, value_enum, default_value_t = SideArg::Right)]
    side: SideArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Ambient,
    Levi,
    Parabolic,
    Quotient,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

/// Bad input that is not a `cellua::Error`.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// A computation finished and found something false.
struct Outcome {
    text: String,
    pass: bool,
}

impl Outcome {
    fn ok(text: String) -> Outcome {
        Outcome { text, pass: true }
    }
}

fn load(input: &Input) -> Result<(Algebra, Option<AlphaDatum>)> {
    let (alg, ad) = match (&input.file, input.builtin) {
        (_, Some(b)) => b.build(input.field.unwrap_or(Field::Rational))?,
        (Some(path), None) => load_file_over(path, input.field)?,
        (None, None) => return Err(Usage("give a file or --builtin".into()).into()),
    };
    require_characteristic(alg.field(), alg.dim())?;
    Ok((alg, ad))
}

fn need_alpha(ad: Option<AlphaDatum>) -> Result<AlphaDatum> {
    ad.ok_or_else(|| Usage("this verb needs an α datum (add an \"alpha\" section, or use matrix:n=<n>,b=<b>)".into()).into())
}

fn construction(alg: &Algebra, ad: &AlphaDatum) -> Result<std::result::Result<AlphaConstruction, Report>> {
    let r = verify_assumptions(alg, ad);
    if !r.all_pass() {
        return Ok(Err(r));
    }
    Ok(Ok(construct(alg, ad)?))
}

fn render_report(r: &Report, format: Option<Format>) -> Result<String> {
    Ok(match format {
        None => r.to_string(),
        Some(Format::Json) => serde_json::to_string_pretty(r)? + "\n",
        Some(Format::Csv) => {
            let mut s = String::from("kind,id,labels,result,witness\n");
            for c in &r.checks {
                let res = if c.pass { "PASS" } else { "FAIL" };
                let w = c.witness.as_deref().unwrap_or("");
                writeln!(s, "check,{},{},{res},{}", csv_field(&c.id), csv_field(&c.labels), csv_field(w))?;
            }
            for c in &r.conditions {
                let res = if c.holds { "HOLDS" } else { "FAILS" };
                writeln!(s, "condition,{},-,{res},{}", csv_field(&c.id), csv_field(&c.detail))?;
            }
            for i in &r.info {
                writeln!(s, "info,-,-,-,{}", csv_field(i))?;
            }
            s
        }
    })
}

fn report_outcome(r: &Report, format: Option<Format>) -> Result<Outcome> {
    Ok(Outcome {
        text: render_report(r, format)?,
        pass: r.all_pass(),
    })
}

fn verify(input: &Input) -> Result<Outcome> {
    let (alg, _) = load(input)?;
    let cr = alg.verify_cellular();
    let mut axioms = vec![Axiom::Unit, Axiom::Associativity];
    if alg.is_involutive() {
        axioms.push(Axiom::AntiAutomorphism);
    }
    axioms.extend([Axiom::RightCellRelation, Axiom::LeftCellRelation, Axiom::Ideal]);
    let mut r = Report::new();
    for ax in axioms {
        let id = format!("cellular-{ax}");
        let bad: Vec<_> = cr.violations.iter().filter(|v| v.axiom == ax).collect();
        if bad.is_empty() {
            r.check(&id, "-".into(), true);
        }
        for v in bad {
            r.outcome(&id, "-".into(), Err(v.witness.clone()));
        }
    }
    r.info(format!("dim {} over {}", alg.dim(), alg.field()));
    report_outcome(&r, input.format)
}

fn assumptions(input: &Input) -> Result<Outcome> {
    let (alg, ad) = load(input)?;
    let ad = need_alpha(ad)?;
    let mut r = verify_assumptions(&alg, &ad);
    let lp0 = decomposition_matrix(&alg, Side::Right)?.col_labels;
    let (holds, detail) = condition_c(&alg, &ad, &lp0);
    r.condition("idempotents-detect-simples", holds, detail);
    report_outcome(&r, input.format)
}

fn decomp(args: &DecompArgs) -> Result<Outcome> {
    let (alg, ad) = load(&args.input)?;
    let side = match args.side {
        SideArg::Left => Side::Left,
        SideArg::Right => Side::Right,
    };
    let d = if args.algebra == Which::Ambient {
        decomposition_matrix(&alg, side)?
    } else {
        let ad = need_alpha(ad)?;
        let cons = match construction(&alg, &ad)? {
            Ok(c) => c,
            Err(r) => return report_outcome(&r, args.input.format),
        };
        let sub = match args.algebra {
            Which::Levi => &cons.levi.algebra,
            Which::Parabolic => &cons.parabolic.algebra,
            Which::Quotient => &cons.quotient.algebra,
            Which::Ambient => unreachable!(),
        };
        decomposition_matrix(sub, side)?
    };
    Ok(Outcome::ok(match args.input.format {
        None => d.to_table(),
        Some(Format::Csv) => d.to_csv(),
        Some(Format::Json) => serde_json::to_string_pretty(&d)? + "\n",
    }))
}

fn sorted(classes: Vec<Vec<String>>) -> Partition {
    classes.into_iter().map(|c| c.into_iter().collect()).collect()
}

fn blocks(input: &Input) -> Result<Outcome> {
    let (alg, ad) = load(input)?;
    let mut rows: Vec<(&str, Partition)> =
        vec![("ambient", sorted(linkage_partition(&decomposition_matrix(&alg, Side::Right)?)))];
    if let Some(ad) = ad {
        match run_all(&alg, &ad)? {
            Ok(s) => {
                let d = &s.data;
                rows.push(("levi", sorted(linkage_partition(&d.levi.right.decomposition))));
                rows.push(("parabolic", sorted(linkage_partition(&d.parabolic.right.decomposition))));
                rows.push(("parabolic-on-lambda", parabolic_blocks_on_lambda(&s.construction, d)));
                rows.push(("quotient", sorted(linkage_partition(&d.quotient.right.decomposition))));
            }
            Err(r) => return report_outcome(&r, input.format),
        }
    }
    Ok(Outcome::ok(match input.format {
        None => rows
            .iter()
            .map(|(k, p)| format!("{k} {}\n", format_partition(p)))
            .collect(),
        Some(Format::Csv) => {
            let mut s = String::from("algebra,class,labels\n");
            for (k, p) in &rows {
                for (i, c) in p.iter().enumerate() {
                    let joined: Vec<&str> = c.iter().map(String::as_str).collect();
                    writeln!(s, "{k},{i},{}", csv_field(&joined.join(";")))?;
                }
            }
            s
        }
        Some(Format::Json) => {
            let m: serde_json::Map<String, serde_json::Value> = rows
                .iter()
                .map(|(k, p)| (k.to_string(), serde_json::to_value(p).expect("strings serialize")))
                .collect();
            serde_json::to_string_pretty(&m)? + "\n"
        }
    }))
}

fn alpha(input: &Input) -> Result<Outcome> {
    let (alg, ad) = load(input)?;
    let ad = need_alpha(ad)?;
    let cons = match construction(&alg, &ad)? {
        Ok(c) => c,
        Err(r) => return report_outcome(&r, input.format),
    };
    let rows = [
        ("ambient", &alg),
        ("levi", &cons.levi.algebra),
        ("parabolic", &cons.parabolic.algebra),
        ("quotient", &cons.quotient.algebra),
    ];
    Ok(Outcome::ok(match input.format {
        None => {
            let mut s = String::new();
            for (k, a) in rows {
                writeln!(s, "{k} {}", a.dim())?;
            }
            for (k, a) in rows {
                writeln!(s, "basis {k}: {}", a.names().join(" "))?;
            }
            s
        }
        Some(Format::Csv) => {
            let mut s = String::from("algebra,dim,basis\n");
            for (k, a) in rows {
                writeln!(s, "{k},{},{}", a.dim(), csv_field(&a.names().join(";")))?;
            }
            s
        }
        Some(Format::Json) => {
            let v: serde_json::Map<String, serde_json::Value> = rows
                .iter()
                .map(|(k, a)| (k.to_string(), serde_json::json!({ "dim": a.dim(), "basis": a.names() })))
                .collect();
            serde_json::to_string_pretty(&v)? + "\n"
        }
    }))
}

fn report(input: &Input) -> Result<Outcome> {
    let (alg, ad) = load(input)?;
    let ad = need_alpha(ad)?;
    let mut r = Report::new();
    let cr = alg.verify_cellular();
    r.check_with("cellular-axioms", "-".into(), cr.is_ok(), || {
        cr.violations
            .iter()
            .map(|v| format!("{}: {}", v.axiom, v.witness))
            .collect::<Vec<_>>()
            .join("; ")
    });
    if !cr.is_ok() {
        return report_outcome(&r, input.format);
    }
    match run_all(&alg, &ad)? {
        Ok(s) => r.extend(s.report),
        Err(a) => r.extend(a),
    }
    report_outcome(&r, input.format)
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("CELLUA_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Usage(format!("CELLUA_THREADS must be a number, got {v:?}")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    configure_threads()?;
    let (out, res) = match &cli.verb {
        Verb::Verify(i) => (&i.out, verify(i)?),
        Verb::Assumptions(i) => (&i.out, assumptions(i)?),
        Verb::Decomp(d) => (&d.input.out, decomp(d)?),
        Verb::Blocks(i) => (&i.out, blocks(i)?),
        Verb::Alpha(i) => (&i.out, alpha(i)?),
        Verb::Report(i) => (&i.out, report(i)?),
    };
    match out {
        Some(p) => std::fs::write(p, &res.text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{}", res.text),
    }
    Ok(res.pass)
}

/// 2 for bad input, 1 for everything else.
fn exit_code(e: &anyhow::Error) -> u8 {
    use cellua::Error as E;
    if e.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match e.downcast_ref::<E>() {
        Some(
            E::NotPrime(_)
            | E::Parse(_)
            | E::FieldMismatch { .. }
            | E::DimensionMismatch(_)
            | E::Schema { .. }
            | E::Io { .. }
            | E::Poset(_)
            | E::InvalidAlgebra(_)
            | E::UnknownLabel(_)
            | E::NotSaturated { .. }
            | E::CharacteristicTooSmall { .. }
            | E::LabelMismatch(_)
            | E::NotFiniteWithinCap { .. }
            | E::InvalidParameters(_)
            | E::InvalidAlpha(_),
        ) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
