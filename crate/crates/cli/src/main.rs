//! Command-line front end: fixture validation, group listings, sequence
//! verification with structured reports, and the combined diagram.
//!
//! Exit codes: 0 when every requested verdict passes, 1 on a verdict failure,
//! 2 on usage or parse errors.

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use picseq_core::fixture::Fixture;
use picseq_core::sequences::{self, SequenceReport};
use picseq_core::{Error, Extension};
use serde_json::json;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "picseq",
    version,
    about = "Verify the exact sequences of groups attached to an algebra extension with shared local units"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a fixture file, including any named bimodules and maps
    Check {
        fixture: PathBuf,
    },
    /// List the elements of one of the enumerable groups
    Groups {
        #[arg(long, value_enum)]
        which: Which,
        fixture: PathBuf,
    },
    /// Verify one or all of the four sequences
    VerifySeq {
        /// Sequence number 1-4, or "all"
        #[arg(long, value_parser = parse_seq)]
        n: SeqSelect,
        fixture: PathBuf,
        /// Write the structured JSON report to this path
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Emit the combined diagram of all four sequences
    Diagram {
        fixture: PathBuf,
        /// Write dot syntax to this path instead of printing text
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Inv,
    AutSr,
    AutRrings,
    KerD,
    KerHat,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy)]
enum SeqSelect {
    All,
    One(u8),
}

fn parse_seq(raw: &str) -> Result<SeqSelect, String> {
    match raw {
        "all" => Ok(SeqSelect::All),
        "1" => Ok(SeqSelect::One(1)),
        "2" => Ok(SeqSelect::One(2)),
        "3" => Ok(SeqSelect::One(3)),
        "4" => Ok(SeqSelect::One(4)),
        other => Err(format!("'{other}' is not a sequence selector (1, 2, 3, 4 or all)")),
    }
}

const EXIT_OK: i32 = 0;
const EXIT_VERDICT: i32 = 1;
const EXIT_USAGE: i32 = 2;

fn main() {
    let cli = Cli::parse(); // clap exits with 2 on usage errors
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            // parse and validation problems are usage-level failures
            if err.downcast_ref::<Error>().is_some() {
                EXIT_USAGE
            } else {
                EXIT_VERDICT
            }
        }
    };
    std::process::exit(code);
}

fn load_extension(path: &Path) -> anyhow::Result<(Fixture, Extension)> {
    let fixture = Fixture::parse_file(path)?;
    let ext = fixture
        .to_extension()
        .with_context(|| format!("fixture {} failed validation", fixture.name))?;
    Ok((fixture, ext))
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.cmd {
        Cmd::Check { fixture } => check(&fixture),
        Cmd::Groups { which, fixture } => groups(which, &fixture),
        Cmd::VerifySeq { n, fixture, report, format } => verify_seq(n, &fixture, report, format),
        Cmd::Diagram { fixture, dot } => diagram_cmd(&fixture, dot),
    }
}

fn check(path: &Path) -> anyhow::Result<i32> {
    // malformed files are usage errors; invariant violations are verdicts
    let fixture = Fixture::parse_file(path)?;
    let mut failed = false;
    match fixture.to_extension() {
        Ok(ext) => {
            println!(
                "extension: valid (dim S = {}, dim R = {}, {} local units)",
                ext.s().dim(),
                ext.r().dim(),
                ext.s().local_units().len()
            );
            for name in fixture.named_bimodules() {
                match fixture.realize_bimodule(&ext, &name) {
                    Ok(module) => println!(
                        "bimodule '{name}': valid (dim {}, unital: {})",
                        module.dim(),
                        module.check_unital()
                    ),
                    Err(e) => {
                        failed = true;
                        println!("bimodule '{name}': INVALID: {e}");
                    }
                }
            }
            for name in fixture.named_maps() {
                match fixture.realize_map(&ext, &name) {
                    Ok(map) => println!(
                        "map '{name}': valid (invertible: {})",
                        map.is_invertible()
                    ),
                    Err(e) => {
                        failed = true;
                        println!("map '{name}': INVALID: {e}");
                    }
                }
            }
        }
        Err(e) => {
            failed = true;
            println!("extension: INVALID\n{e}");
        }
    }
    Ok(if failed { EXIT_VERDICT } else { EXIT_OK })
}

fn groups(which: Which, path: &Path) -> anyhow::Result<i32> {
    let (_, ext) = load_extension(path)?;
    match which {
        Which::Inv => {
            let g = picseq_core::inv::inv_group(&ext)?;
            println!("Inv(R<=S): {} elements", g.order());
            for e in &g.elems {
                println!("  {}  (inverse {})", e.sub.render(), e.inverse.render());
            }
        }
        Which::AutSr => {
            let g = picseq_core::auts::aut_s_r(&ext)?;
            println!("Aut_SR(S): {} elements", g.order());
            for m in &g.mats {
                println!("  {}", m.render());
            }
        }
        Which::AutRrings => {
            let g = picseq_core::auts::aut_r_rings(&ext)?;
            println!("Aut_Rrings(S): {} elements", g.order());
            for m in &g.mats {
                println!("  {}", m.render());
            }
        }
        Which::KerD => {
            let aut = picseq_core::auts::aut_s_r(&ext)?;
            let inv = picseq_core::inv::inv_group(&ext)?;
            let hom = picseq_core::auts::d_hom(&ext, &aut, &inv)?;
            let kernel = hom.kernel();
            println!("Ker(D): {} elements", kernel.order());
            for k in kernel.keys() {
                println!("  {}", aut.by_key(k).expect("kernel key").render());
            }
        }
        Which::KerHat => {
            let aut = picseq_core::auts::aut_s_r(&ext)?;
            let rings = picseq_core::auts::aut_r_rings(&ext)?;
            let hom = picseq_core::auts::hat_hom(&ext, &aut, &rings)?;
            let kernel = hom.kernel();
            println!("Ker(hat): {} elements", kernel.order());
            for k in kernel.keys() {
                println!("  {}", aut.by_key(k).expect("kernel key").render());
            }
        }
    }
    Ok(EXIT_OK)
}

fn report_doc(fixture: &str, report: &SequenceReport) -> serde_json::Value {
    let mut doc = serde_json::to_value(report).expect("report serializes");
    doc.as_object_mut()
        .expect("report is an object")
        .insert("fixture".into(), json!(fixture));
    doc
}

fn verify_seq(
    n: SeqSelect,
    path: &Path,
    report_path: Option<PathBuf>,
    format: Format,
) -> anyhow::Result<i32> {
    let (fixture, ext) = load_extension(path)?;
    let reports = match n {
        SeqSelect::All => sequences::verify_all(&ext)?,
        SeqSelect::One(k) => vec![sequences::seq(&ext, k)?],
    };
    let docs: Vec<serde_json::Value> =
        reports.iter().map(|r| report_doc(&fixture.name, r)).collect();
    match format {
        Format::Text => {
            for r in &reports {
                print!("{}", r.render_text());
            }
        }
        Format::Json => println!("{}", serde_json::to_string_pretty(&docs)?),
    }
    if let Some(out) = report_path {
        std::fs::write(&out, serde_json::to_string_pretty(&docs)?)
            .with_context(|| format!("writing report to {}", out.display()))?;
    }
    let pass = reports.iter().all(|r| r.pass);
    Ok(if pass { EXIT_OK } else { EXIT_VERDICT })
}

fn diagram_cmd(path: &Path, dot: Option<PathBuf>) -> anyhow::Result<i32> {
    let (_, ext) = load_extension(path)?;
    let d = sequences::diagram(&ext)?;
    match dot {
        Some(out) => std::fs::write(&out, d.to_dot())
            .with_context(|| format!("writing dot to {}", out.display()))?,
        None => print!("{}", d.render_text()),
    }
    Ok(EXIT_OK)
}
