//! `revmap`: inspect involution-generated groups, enumerate reversing
//! triples, build the induced surface maps, classify them against the
//! canonical patterns, and run the named verification suites.
//!
//! Output is deterministic for a fixed command line: JSON lines for machine
//! consumption (sorted keys inside each line, no timestamps), aligned
//! columns for humans, CSV for summary tables. Suite failures embed a
//! reproduction command line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use revmap::map::invariants_record;
use revmap::{
    build_map, classify_map, coprime_filter, enumerate_reversing_triples, equivalence_classes,
    euler_characteristic, is_coprime_pair, map_invariants, parse_group_spec, structure_report,
    underlying_graph, verify_suite, LabeledGroup, MapKind, Report, ReversingTriple, Status,
    SweepConfig, SUITES,
};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "revmap",
    version,
    about = "Maps induced by involution triples in almost Sylow-cyclic groups",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a group and print its profile or structure report
    Group(GroupArgs),
    /// Enumerate the reversing triples of a group
    Triples(TriplesArgs),
    /// Build the map induced by one triple and print its invariants
    Map(MapArgs),
    /// Classify one map against the canonical family patterns
    Classify(ClassifyArgs),
    /// Run a named verification suite and report per-case results
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GroupOpt {
    /// Group spec: D:n, DxD:m,n, R3:m,n,l, S4C:m, MC:n,m,lambda, PERM:<file>
    #[arg(short = 'g', long = "group", visible_alias = "spec", value_name = "SPEC")]
    group: String,
}

impl GroupOpt {
    fn load(&self) -> Result<LabeledGroup> {
        parse_group_spec(&self.group).with_context(|| format!("loading group {}", self.group))
    }
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum GroupReport {
    Profile,
    Structure,
}

#[derive(Args)]
struct GroupArgs {
    #[command(flatten)]
    group: GroupOpt,
    /// Which report to print
    #[arg(long, value_enum, default_value = "profile")]
    report: GroupReport,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct TriplesArgs {
    #[command(flatten)]
    group: GroupOpt,
    /// Map kind the triples are enumerated for
    #[arg(long, value_parser = parse_kind, default_value = "rev")]
    kind: MapKind,
    /// Collapse the triples into equivalence classes
    #[arg(long)]
    classes: bool,
    /// Keep only triples passing the coprimality filter
    #[arg(long)]
    filtered: bool,
    /// Cap on automorphism-group search (overrides REVMAP_CAP)
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct MapArgs {
    #[command(flatten)]
    group: GroupOpt,
    #[arg(long, value_parser = parse_kind, default_value = "rev")]
    kind: MapKind,
    /// Triple as comma-separated words in the generator labels, e.g. u,v,abw
    #[arg(long, value_name = "W1,W2,W3")]
    triple: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    group: GroupOpt,
    #[arg(long, value_parser = parse_kind, default_value = "rev")]
    kind: MapKind,
    /// Triple as comma-separated words in the generator labels
    #[arg(long, value_name = "W1,W2,W3")]
    triple: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name; see --list for the catalog
    #[arg(long, required_unless_present = "list")]
    suite: Option<String>,
    /// Bound for the dihedral sweeps inside the suite
    #[arg(long)]
    max_n: Option<usize>,
    /// Cap on automorphism-group search (overrides REVMAP_CAP)
    #[arg(long)]
    cap: Option<usize>,
    /// Directory receiving <suite>.json and <suite>.csv artifacts
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// List the available suites and exit
    #[arg(long)]
    list: bool,
}

fn parse_kind(text: &str) -> std::result::Result<MapKind, String> {
    MapKind::from_str(text).map_err(|e| e.to_string())
}

/// Effective enumeration cap: explicit flag, then REVMAP_CAP, then the
/// library default.
fn effective_cap(flag: Option<usize>) -> Result<Option<usize>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("REVMAP_CAP") {
        Ok(text) => {
            let cap: usize = text
                .trim()
                .parse()
                .with_context(|| format!("REVMAP_CAP must be a positive integer, got '{text}'"))?;
            Ok(Some(cap))
        }
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(e).context("REVMAP_CAP is not valid unicode"),
    }
}

fn parse_triple(lg: &LabeledGroup, kind: MapKind, words: &str) -> Result<ReversingTriple> {
    let ids = lg.elements(words)?;
    if ids.len() != 3 {
        bail!("--triple needs exactly three comma-separated words, got {}", ids.len());
    }
    Ok(revmap::make_reversing_triple(&lg.group, kind, ids[0], ids[1], ids[2])?)
}

/// Aligned two-column text output.
fn print_kv(rows: &[(String, String)]) {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in rows {
        println!("{k:<width$}  {v}");
    }
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn cmd_group(args: &GroupArgs) -> Result<()> {
    let lg = args.group.load()?;
    match args.report {
        GroupReport::Profile => {
            let g = &lg.group;
            let involutions = g.involutions().len();
            let generators: BTreeMap<&str, u32> = lg
                .labels
                .iter()
                .map(|(label, &id)| (label.as_str(), g.order_of(id)))
                .collect();
            match args.format {
                Format::Json => {
                    let record = json!({
                        "group": lg.spec,
                        "order": g.order(),
                        "involutions": involutions,
                        "generator_orders": generators,
                    });
                    println!("{record}");
                }
                Format::Text => {
                    let mut rows = vec![
                        ("group".to_string(), lg.spec.clone()),
                        ("order".to_string(), g.order().to_string()),
                        ("involutions".to_string(), involutions.to_string()),
                    ];
                    for (label, order) in &generators {
                        rows.push((format!("|{label}|"), order.to_string()));
                    }
                    print_kv(&rows);
                }
                Format::Csv => bail!("csv output is only available for summary tables"),
            }
        }
        GroupReport::Structure => {
            let report = structure_report(&lg.group)?;
            match args.format {
                Format::Json => {
                    let mut value = serde_json::to_value(&report)?;
                    let obj = value.as_object_mut().expect("struct serializes to an object");
                    obj.insert("group".into(), json!(lg.spec));
                    println!("{value}");
                }
                Format::Text => {
                    let sylow = report
                        .sylow
                        .iter()
                        .map(|s| format!("p={} order={} {:?}", s.p, s.order, s.shape))
                        .collect::<Vec<_>>()
                        .join("; ");
                    print_kv(&[
                        ("group".to_string(), lg.spec.clone()),
                        ("order".to_string(), report.order.to_string()),
                        ("cyclic".to_string(), report.is_cyclic.to_string()),
                        ("dihedral".to_string(), report.is_dihedral.to_string()),
                        ("abelian".to_string(), report.is_abelian.to_string()),
                        ("solvable".to_string(), report.is_solvable.to_string()),
                        (
                            "almost-sylow-cyclic".to_string(),
                            report.is_almost_sylow_cyclic.to_string(),
                        ),
                        ("sylow".to_string(), sylow),
                        ("o2-order".to_string(), report.o2_order.to_string()),
                    ]);
                }
                Format::Csv => bail!("csv output is only available for summary tables"),
            }
        }
    }
    Ok(())
}

fn cmd_triples(args: &TriplesArgs) -> Result<()> {
    let lg = args.group.load()?;
    let g = &lg.group;
    let mut triples = enumerate_reversing_triples(g, args.kind);
    if args.filtered {
        triples = coprime_filter(g, args.kind, &triples)?;
    }
    let line_of = |t: ReversingTriple| -> Result<(i64, usize, bool)> {
        let (chi, edges) = euler_characteristic(g, args.kind, t)?;
        Ok((chi, edges, is_coprime_pair(chi, edges)))
    };
    if args.classes {
        let cap = effective_cap(args.cap)?;
        let classes = equivalence_classes(g, args.kind, &triples, cap)?;
        match args.format {
            Format::Json => {
                for class in &classes {
                    let r = class.representative;
                    let (chi, edges, coprime) = line_of(r)?;
                    println!(
                        "{}",
                        json!({
                            "chi": chi,
                            "coprime": coprime,
                            "edges": edges,
                            "rep": [r.x, r.y, r.z],
                            "size": class.members.len(),
                        })
                    );
                }
            }
            Format::Csv | Format::Text => {
                if args.format == Format::Csv {
                    println!("size,x,y,z,chi,edges,coprime");
                } else {
                    println!("{:>6} {:>5} {:>5} {:>5} {:>7} {:>6} {:>8}", "size", "x", "y", "z", "chi", "edges", "coprime");
                }
                for class in &classes {
                    let r = class.representative;
                    let (chi, edges, coprime) = line_of(r)?;
                    if args.format == Format::Csv {
                        println!("{},{},{},{},{chi},{edges},{coprime}", class.members.len(), r.x, r.y, r.z);
                    } else {
                        println!(
                            "{:>6} {:>5} {:>5} {:>5} {:>7} {:>6} {:>8}",
                            class.members.len(),
                            r.x,
                            r.y,
                            r.z,
                            chi,
                            edges,
                            coprime
                        );
                    }
                }
                if args.format == Format::Text {
                    println!(
                        "{} class(es) over {} triple(s), kind {}, group {}",
                        classes.len(),
                        triples.len(),
                        args.kind,
                        lg.spec
                    );
                }
            }
        }
    } else {
        match args.format {
            Format::Json => {
                for &t in &triples {
                    let (chi, edges, coprime) = line_of(t)?;
                    println!(
                        "{}",
                        json!({
                            "chi": chi,
                            "coprime": coprime,
                            "edges": edges,
                            "triple": [t.x, t.y, t.z],
                        })
                    );
                }
            }
            Format::Csv | Format::Text => {
                if args.format == Format::Csv {
                    println!("x,y,z,chi,edges,coprime");
                } else {
                    println!("{:>5} {:>5} {:>5} {:>7} {:>6} {:>8}", "x", "y", "z", "chi", "edges", "coprime");
                }
                for &t in &triples {
                    let (chi, edges, coprime) = line_of(t)?;
                    if args.format == Format::Csv {
                        println!("{},{},{},{chi},{edges},{coprime}", t.x, t.y, t.z);
                    } else {
                        println!("{:>5} {:>5} {:>5} {:>7} {:>6} {:>8}", t.x, t.y, t.z, chi, edges, coprime);
                    }
                }
                if args.format == Format::Text {
                    println!("{} triple(s), kind {}, group {}", triples.len(), args.kind, lg.spec);
                }
            }
        }
    }
    Ok(())
}

fn cmd_map(args: &MapArgs) -> Result<()> {
    let lg = args.group.load()?;
    let triple = parse_triple(&lg, args.kind, &args.triple)?;
    let map = build_map(&lg.group, args.kind, triple)?;
    let inv = map_invariants(&lg.group, &map);
    let graph = underlying_graph(&lg.group, &map);
    match args.format {
        Format::Json => {
            let mut record = invariants_record(&lg.spec, &inv, &triple);
            record.insert("face_class_sizes".into(), json!(inv.face_class_sizes));
            record.insert("graph".into(), json!(graph.to_string()));
            record.insert("words".into(), json!(args.triple));
            println!("{}", serde_json::to_string(&record)?);
        }
        Format::Text => {
            let stabilizers = inv
                .stabilizers
                .iter()
                .map(|s| format!("{} {}", s.role, s.order))
                .collect::<Vec<_>>()
                .join("; ");
            print_kv(&[
                ("group".to_string(), lg.spec.clone()),
                ("kind".to_string(), args.kind.to_string()),
                ("triple".to_string(), format!("{} = ({}, {}, {})", args.triple, triple.x, triple.y, triple.z)),
                ("vertices".to_string(), inv.num_vertices.to_string()),
                ("edges".to_string(), inv.num_edges.to_string()),
                ("faces".to_string(), format!("{} {:?}", inv.num_faces, inv.face_class_sizes)),
                ("chi".to_string(), inv.chi.to_string()),
                (
                    "orientable".to_string(),
                    inv.orientable.map_or("undefined".to_string(), |b| b.to_string()),
                ),
                ("coprime".to_string(), inv.coprime.to_string()),
                ("graph".to_string(), graph.to_string()),
                ("stabilizers".to_string(), stabilizers),
            ]);
        }
        Format::Csv => bail!("csv output is only available for summary tables"),
    }
    Ok(())
}

fn cmd_classify(args: &ClassifyArgs) -> Result<()> {
    let lg = args.group.load()?;
    let triple = parse_triple(&lg, args.kind, &args.triple)?;
    let out = classify_map(&lg, args.kind, triple)?;
    match args.format {
        Format::Json => {
            let mut value = serde_json::to_value(&out)?;
            let obj = value.as_object_mut().expect("struct serializes to an object");
            obj.insert("group".into(), json!(lg.spec));
            obj.insert("words".into(), json!(args.triple));
            println!("{value}");
        }
        Format::Text => {
            let params = out
                .tag
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(" ");
            let checks = out
                .checks
                .iter()
                .map(|(name, ok)| format!("{name}={ok}"))
                .collect::<Vec<_>>()
                .join(" ");
            let mut rows = vec![
                ("group".to_string(), lg.spec.clone()),
                ("kind".to_string(), args.kind.to_string()),
                ("triple".to_string(), args.triple.clone()),
                ("class".to_string(), format!("{:?}", out.class)),
                ("form".to_string(), format!("{:?}", out.tag.form)),
                ("ordered".to_string(), out.tag.ordered.to_string()),
                ("params".to_string(), params),
                ("witness".to_string(), out.tag.witness.is_some().to_string()),
                ("chi".to_string(), out.invariants.chi.to_string()),
                ("edges".to_string(), out.invariants.num_edges.to_string()),
                ("graph".to_string(), out.graph.to_string()),
                ("checks".to_string(), checks),
            ];
            if let Some(reason) = &out.reason {
                rows.push(("reason".to_string(), reason.clone()));
            }
            print_kv(&rows);
        }
        Format::Csv => bail!("csv output is only available for summary tables"),
    }
    Ok(())
}

fn report_csv(report: &Report) -> String {
    let mut text = String::from("suite,case,status,reason,repro\n");
    for case in &report.cases {
        let status = match case.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        };
        let _ = writeln!(
            text,
            "{},{},{status},{},{}",
            csv_field(&report.suite),
            csv_field(&case.name),
            csv_field(case.reason.as_deref().unwrap_or("")),
            csv_field(case.repro.as_deref().unwrap_or("")),
        );
    }
    text
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode> {
    if args.list {
        for suite in SUITES {
            println!("{suite}");
        }
        return Ok(ExitCode::SUCCESS);
    }
    let suite = args.suite.as_deref().expect("clap requires --suite without --list");
    let config = SweepConfig { max_n: args.max_n, cap: effective_cap(args.cap)? };
    let report = verify_suite(suite, &config)?;
    match args.format {
        Format::Json => {
            for case in &report.cases {
                println!("{}", serde_json::to_string(case)?);
            }
            println!(
                "{}",
                json!({
                    "suite": report.suite,
                    "passed": report.passed,
                    "failed": report.failed,
                    "skipped": report.skipped,
                })
            );
        }
        Format::Csv => print!("{}", report_csv(&report)),
        Format::Text => {
            let width = report.cases.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for case in &report.cases {
                let mut line = match case.status {
                    Status::Pass => format!("pass  {:<width$}", case.name),
                    Status::Fail => format!("FAIL  {:<width$}", case.name),
                    Status::Skip => format!("skip  {:<width$}", case.name),
                };
                if let Some(reason) = &case.reason {
                    let _ = write!(line, "  {reason}");
                }
                if case.status == Status::Fail {
                    if let Some(repro) = &case.repro {
                        let _ = write!(line, "  [repro: {repro}]");
                    }
                }
                println!("{}", line.trim_end());
            }
            println!(
                "suite {}: {} passed, {} failed, {} skipped",
                report.suite, report.passed, report.failed, report.skipped
            );
        }
    }
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)
            .with_context(|| format!("creating output directory {}", dir.display()))?;
        let json_path = dir.join(format!("{suite}.json"));
        fs::write(&json_path, serde_json::to_string_pretty(&report)?)
            .with_context(|| format!("writing {}", json_path.display()))?;
        let csv_path = dir.join(format!("{suite}.csv"));
        fs::write(&csv_path, report_csv(&report))
            .with_context(|| format!("writing {}", csv_path.display()))?;
    }
    if report.all_passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("suite {} has {} failing case(s)", report.suite, report.failed);
        Ok(ExitCode::FAILURE)
    }
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Group(args) => cmd_group(args).map(|()| ExitCode::SUCCESS),
        Command::Triples(args) => cmd_triples(args).map(|()| ExitCode::SUCCESS),
        Command::Map(args) => cmd_map(args).map(|()| ExitCode::SUCCESS),
        Command::Classify(args) => cmd_classify(args).map(|()| ExitCode::SUCCESS),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
