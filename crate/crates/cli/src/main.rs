//! `qpc`: q-covers, q-exterior squares and q-tensor squares of polycyclic
//! groups from the command line.

use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qpc::pc::{parse_json, parse_presentation, to_json_value, to_text};
use qpc::qnu::{build_nu, build_nu_qperfect, build_tau, diagonal, tensor_square};
use qpc::qwedge::{build_wedge, exterior_center};
use qpc::structure::describe;
use qpc::{oracle, Error, PcPresentation};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "qpc",
    version,
    about = "Polycyclic q-covers, q-exterior squares and q-tensor squares"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Presentation file in the text or JSON format, or `-` for stdin.
    input: String,
    /// The modulus q (0 for the integral case).
    #[arg(long, default_value_t = 0)]
    q: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the consistency test and report failing overlaps.
    Check(Common),
    /// The q-cover E_q(G).
    Cover(Common),
    /// The q-exterior square.
    Wedge(Common),
    /// H_2(G, Z_q).
    H2(Common),
    /// The q-exterior center.
    Excenter(Common),
    /// Whether G is q-capable.
    Capable(Common),
    /// The presentation tau^q(G).
    Tau(Common),
    /// The group nu^q(G).
    Nu {
        #[command(flatten)]
        common: Common,
        /// Use tau^q(G) directly; G must be q-perfect.
        #[arg(long)]
        q_perfect_shortcut: bool,
    },
    /// The q-tensor square and its diagonal.
    Tensor(Common),
    /// Structure summary of a presentation.
    Describe(Common),
    /// Brute-force cross-checks on a small finite group.
    #[command(hide = true)]
    Oracle(Common),
}

enum Failure {
    Usage(String),
    Lib(Error),
    Io(io::Error),
    /// Already reported; exit with this code.
    Quiet(u8),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Syntax { .. }
        | Error::IndexOrdering { .. }
        | Error::DuplicateRelation { .. }
        | Error::Json(_)
        | Error::BadIndex { .. } => 2,
        Error::Inconsistent(_) | Error::Malformed(_) => 3,
        Error::Unsupported(_)
        | Error::TooLarge(_)
        | Error::CollectionBudget(_)
        | Error::NotQPerfect(_) => 4,
        Error::Verification(_) | Error::NonCentral(_) => 5,
        Error::Precondition(_) | Error::NonAbelian => 1,
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))
    }
}

fn parse(text: &str) -> Result<PcPresentation, Failure> {
    if text.trim_start().starts_with('{') {
        Ok(parse_json(text)?)
    } else {
        Ok(parse_presentation(text)?)
    }
}

fn load(c: &Common) -> Result<PcPresentation, Failure> {
    let p = parse(&read_input(&c.input)?)?;
    let report = p.consistency_report()?;
    if !report.is_consistent() {
        eprint!("input presentation is inconsistent:\n{}", report.render(&p));
        return Err(Failure::Quiet(3));
    }
    Ok(p)
}

fn emit(c: &Common, text: String, value: Value) -> Result<(), Failure> {
    let mut out = match c.format {
        Format::Text => text,
        Format::Json => serde_json::to_string_pretty(&value).expect("json renders"),
    };
    if !out.ends_with('\n') {
        out.push('\n');
    }
    match &c.output {
        Some(path) => std::fs::write(path, out)?,
        None => io::stdout().write_all(out.as_bytes())?,
    }
    Ok(())
}

fn emit_pres(c: &Common, p: &PcPresentation) -> Result<(), Failure> {
    emit(c, to_text(p), to_json_value(p))
}

fn structure_line(label: &str, p: &PcPresentation) -> Result<String, Failure> {
    Ok(format!("# {label}: {}\n", describe(p)?))
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Check(c) => {
            let p = parse(&read_input(&c.input)?)?;
            let report = p.consistency_report()?;
            let discrepancies: Vec<Value> = report
                .discrepancies
                .iter()
                .map(|d| {
                    json!({
                        "kind": d.kind.to_string(),
                        "generators": d.indices.iter().map(|i| p.names()[*i].clone()).collect::<Vec<_>>(),
                        "left": d.left.to_word().display_with(p.names()),
                        "right": d.right.to_word().display_with(p.names()),
                    })
                })
                .collect();
            let text = if report.is_consistent() {
                "consistent\n".to_string()
            } else {
                format!("inconsistent\n{}", report.render(&p))
            };
            emit(
                &c,
                text,
                json!({"group": p.name(), "consistent": report.is_consistent(), "discrepancies": discrepancies}),
            )?;
            if !report.is_consistent() {
                return Err(Failure::Quiet(3));
            }
        }
        Command::Cover(c) => {
            let g = load(&c)?;
            emit_pres(&c, &qpc::covers::q_cover(&g, c.q)?.pres)?;
        }
        Command::Wedge(c) => {
            let g = load(&c)?;
            emit_pres(&c, &build_wedge(&g, c.q)?.wedge_pres)?;
        }
        Command::H2(c) => {
            let g = load(&c)?;
            emit_pres(&c, &build_wedge(&g, c.q)?.h2()?)?;
        }
        Command::Excenter(c) => {
            let g = load(&c)?;
            let z = exterior_center(&g, c.q)?;
            let gens: Vec<String> = z
                .members()
                .iter()
                .map(|m| m.to_word().display_with(g.names()))
                .collect();
            let order = z.order().map(|o| o.to_string());
            let text = format!(
                "generators: {}\norder: {}\n",
                if gens.is_empty() {
                    "none".to_string()
                } else {
                    gens.join(", ")
                },
                order.clone().unwrap_or_else(|| "infinite".into())
            );
            emit(
                &c,
                text,
                json!({"group": g.name(), "q": c.q, "generators": gens, "order": order}),
            )?;
        }
        Command::Capable(c) => {
            let g = load(&c)?;
            let capable = exterior_center(&g, c.q)?.is_empty();
            emit(
                &c,
                capable.to_string(),
                json!({"group": g.name(), "q": c.q, "capable": capable}),
            )?;
        }
        Command::Tau(c) => {
            let g = load(&c)?;
            emit_pres(&c, &build_tau(&g, c.q)?.pres)?;
        }
        Command::Nu {
            common: c,
            q_perfect_shortcut,
        } => {
            let g = load(&c)?;
            let nu = if q_perfect_shortcut {
                build_nu_qperfect(&g, c.q)?
            } else {
                build_nu(&g, c.q)?
            };
            emit_pres(&c, &nu.pres)?;
        }
        Command::Tensor(c) => {
            let g = load(&c)?;
            let nu = build_nu(&g, c.q)?;
            let t = tensor_square(&nu);
            let d = diagonal(&nu)?;
            let text = format!(
                "{}{}{}# diagonal generators: {}\n",
                to_text(&t),
                structure_line("tensor", &t)?,
                structure_line("diagonal", &d)?,
                d.names().join(" ")
            );
            let value = json!({
                "tensor": to_json_value(&t),
                "tensor_structure": describe(&t)?,
                "diagonal": to_json_value(&d),
                "diagonal_structure": describe(&d)?,
            });
            emit(&c, text, value)?;
        }
        Command::Describe(c) => {
            let g = load(&c)?;
            let d = describe(&g)?;
            emit(
                &c,
                d.to_string(),
                serde_json::to_value(&d).expect("description serializes"),
            )?;
        }
        Command::Oracle(c) => {
            let g = load(&c)?;
            let table = oracle::enumerate(&g)?;
            let center = oracle::brute_center(&table)?;
            let abelian = table.is_abelian()?;
            let text = format!(
                "order: {}\nabelian: {abelian}\ncenter order: {}\n",
                table.order(),
                center.len()
            );
            emit(
                &c,
                text,
                json!({"order": table.order(), "abelian": abelian, "center_order": center.len()}),
            )?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Quiet(code)) => ExitCode::from(code),
    }
}
