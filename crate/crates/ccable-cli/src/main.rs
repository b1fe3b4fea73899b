//! Command-line front end: check / enumerate / mesh / oracle / scan.
//!
//! Exit codes: 0 on success (CC-able, files written, verifications clean),
//! 1 for well-formed but infeasible instances or verifications that found
//! violations, 2 for usage and validation errors.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ccable::io::{
    outcome_document, parse_patch_input, write_mesh_obj, write_oracle_report,
    write_outcome_report, write_scan_report, write_svg_preview, OracleDocument, ReportFormat,
    ScanDocument, SpecEcho,
};
use ccable::mesh::{build_topology, embed_geometry, synthesize_boundary, BoundaryGeometry};
use ccable::oracle::{brute_force_solutions, OracleBudget};
use ccable::scan::{
    probe_equality_count, run_with_workers, scan_range, solve_auto, verify_octa_feasibility,
    verify_oracle_equivalence, verify_uniqueness, ScanRange, DEFAULT_INSTANCE_CAP,
};
use ccable::types::{Mode, OutcomeKind, PatchSpec, SolveOutcome, SubdivisionVector};

#[derive(Parser)]
#[command(
    name = "ccable",
    version,
    about = "Decide whether an n-sided patch admits a quadrangulation with a single \
             interior irregular vertex, enumerate the solutions, and build the meshes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide quadrangulability and print the outcome report.
    Check {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List every subdivision vector with its singularity class.
    Enumerate {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Cap on the number of listed solutions.
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Build the quad mesh and write it as OBJ (optionally an SVG preview).
    Mesh {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Family pick k0,k1 (defaults to the smallest valid pick).
        #[arg(long, value_name = "K0,K1")]
        pick: Option<String>,
        /// Rounds of uniform interior smoothing after the Coons embedding.
        #[arg(long, default_value_t = 0)]
        smooth: usize,
        /// Output OBJ path.
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Optional SVG preview path.
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
    },
    /// Enumerate solutions by brute force (ground truth for small patches).
    Oracle {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Cap on the number of candidate assignments visited.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Scan an instance box and run the selected verifications.
    Scan {
        /// Side count.
        #[arg(long)]
        n: usize,
        /// Smallest per-side edge count.
        #[arg(long)]
        min: i64,
        /// Largest per-side edge count.
        #[arg(long)]
        max: i64,
        /// Allow the irregular vertex on the boundary (s_i >= 0).
        #[arg(long)]
        non_strict: bool,
        /// Verifications to run (repeatable); with none, only the aggregate
        /// scan report is produced.
        #[arg(long = "verify", value_enum)]
        verify: Vec<Verification>,
        /// Worker threads (default: one per core). Results never depend on this.
        #[arg(long)]
        jobs: Option<usize>,
        /// Instance-count cap for the box.
        #[arg(long, default_value_t = DEFAULT_INSTANCE_CAP)]
        cap: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args)]
struct InstanceArgs {
    /// Comma-separated per-side edge counts, e.g. 6,4,3,5,4.
    #[arg(long, value_name = "E0,E1,...", conflicts_with = "input")]
    edges: Option<String>,
    /// Patch input document (JSON) instead of --edges.
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Allow the irregular vertex on the boundary (s_i >= 0).
    #[arg(long)]
    non_strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> ReportFormat {
        match f {
            Format::Text => ReportFormat::Text,
            Format::Json => ReportFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Verification {
    /// Compare both solvers against the brute-force oracle per instance.
    Oracle,
    /// No instance may have two or more solutions (n not divisible by 4).
    Uniqueness,
    /// Balanced octagons always admit a strict solution (n = 8).
    Feasibility,
    /// Tally zero components over all non-strict solutions.
    Equalities,
}

/// A fully resolved problem instance.
struct Instance {
    spec: PatchSpec,
    mode: Mode,
    boundary: Option<BoundaryGeometry>,
    pick: Option<(i64, i64)>,
}

fn parse_csv_i64(text: &str, what: &str) -> Result<Vec<i64>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<i64>()
                .with_context(|| format!("invalid {what} entry {part:?}"))
        })
        .collect()
}

fn resolve_instance(args: &InstanceArgs) -> Result<Instance> {
    let (spec, doc_mode, boundary, pick) = match (&args.edges, &args.input) {
        (Some(csv), None) => {
            let edges = parse_csv_i64(csv, "--edges")?;
            (PatchSpec::new(edges)?, None, None, None)
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            let parsed = parse_patch_input(&text)?;
            (parsed.spec, parsed.mode, parsed.boundary, parsed.pick)
        }
        (None, None) => bail!("one input is required: --edges or --input"),
        (Some(_), Some(_)) => unreachable!("clap rejects --edges with --input"),
    };
    let mode = if args.non_strict {
        Mode::NonStrict
    } else {
        doc_mode.unwrap_or(Mode::Strict)
    };
    Ok(Instance {
        spec,
        mode,
        boundary,
        pick,
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Check { instance, format } => {
            let inst = resolve_instance(&instance)?;
            let outcome = solve_auto(&inst.spec, inst.mode)?;
            let doc = outcome_document(&inst.spec, inst.mode, &outcome, 12);
            print!("{}", write_outcome_report(&doc, format.into()));
            Ok(exit_by_feasibility(&outcome))
        }
        Command::Enumerate {
            instance,
            limit,
            format,
        } => {
            let inst = resolve_instance(&instance)?;
            let outcome = solve_auto(&inst.spec, inst.mode)?;
            let doc = outcome_document(
                &inst.spec,
                inst.mode,
                &outcome,
                limit.unwrap_or(usize::MAX),
            );
            print!("{}", write_outcome_report(&doc, format.into()));
            Ok(exit_by_feasibility(&outcome))
        }
        Command::Mesh {
            instance,
            pick,
            smooth,
            out,
            svg,
        } => {
            let inst = resolve_instance(&instance)?;
            let pick = match pick {
                Some(csv) => {
                    let values = parse_csv_i64(&csv, "--pick")?;
                    if values.len() != 2 {
                        bail!("--pick takes exactly two integers, got {}", values.len());
                    }
                    Some((values[0], values[1]))
                }
                None => inst.pick,
            };
            let outcome = solve_auto(&inst.spec, inst.mode)?;
            let s = match select_solution(&outcome, pick)? {
                Some(s) => s,
                None => {
                    eprintln!("patch is not quadrangulable in {} mode", inst.mode);
                    return Ok(ExitCode::from(1));
                }
            };
            let mesh = build_topology(&inst.spec, &s)?;
            let boundary = inst
                .boundary
                .unwrap_or_else(|| synthesize_boundary(&inst.spec));
            let positioned = embed_geometry(&mesh, &boundary, smooth)?;
            let mut obj = Vec::new();
            write_mesh_obj(&positioned, &inst.spec, &s, &mut obj)?;
            fs::File::create(&out)
                .and_then(|mut f| f.write_all(&obj))
                .with_context(|| format!("cannot write {}", out.display()))?;
            if let Some(path) = svg {
                let mut bytes = Vec::new();
                write_svg_preview(&positioned, &mut bytes)?;
                fs::File::create(&path)
                    .and_then(|mut f| f.write_all(&bytes))
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle {
            instance,
            budget,
            format,
        } => {
            let inst = resolve_instance(&instance)?;
            let budget = budget
                .map(|max_candidates| OracleBudget { max_candidates })
                .unwrap_or_default();
            let solutions = brute_force_solutions(&inst.spec, inst.mode, budget)?;
            let doc = OracleDocument {
                spec: SpecEcho {
                    n: inst.spec.n(),
                    edges: inst.spec.edges().to_vec(),
                },
                mode: inst.mode,
                solution_count: solutions.len() as u64,
                solutions: solutions.iter().map(|s| s.values().to_vec()).collect(),
            };
            print!("{}", write_oracle_report(&doc, format.into()));
            Ok(if doc.solution_count > 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Scan {
            n,
            min,
            max,
            non_strict,
            verify,
            jobs,
            cap,
            format,
        } => {
            let range = ScanRange {
                n,
                e_min: min,
                e_max: max,
                mode: if non_strict {
                    Mode::NonStrict
                } else {
                    Mode::Strict
                },
            };
            let doc = run_with_workers(jobs, || build_scan_document(&range, &verify, cap))?;
            print!("{}", write_scan_report(&doc, format.into()));
            Ok(if doc.is_clean() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn exit_by_feasibility(outcome: &SolveOutcome) -> ExitCode {
    if outcome.is_ccable() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

/// Picks the subdivision vector to mesh: the unique solution, or a family
/// member (defaulting to the lexicographically smallest valid pick).
fn select_solution(
    outcome: &SolveOutcome,
    pick: Option<(i64, i64)>,
) -> Result<Option<SubdivisionVector>> {
    match &outcome.kind {
        OutcomeKind::Infeasible(_) => Ok(None),
        OutcomeKind::Unique(s) => {
            if pick.is_some() {
                bail!("--pick only applies to family outcomes; this instance is unique");
            }
            Ok(Some(s.clone()))
        }
        OutcomeKind::Family(family) => {
            let (k0, k1) = match pick {
                Some(p) => p,
                None => family
                    .smallest_pick()
                    .ok_or_else(|| anyhow!("family has no valid picks"))?,
            };
            match family.member(k0, k1) {
                Some(s) => Ok(Some(s)),
                None => bail!(
                    "pick ({k0},{k1}) is outside the valid intervals: k0 in {} and k1 in {}",
                    family.params()[0],
                    family.params()[1]
                ),
            }
        }
    }
}

fn build_scan_document(
    range: &ScanRange,
    verify: &[Verification],
    cap: u64,
) -> Result<ScanDocument> {
    let mut doc = ScanDocument::default();
    if verify.is_empty() {
        doc.scan = Some(scan_range(range, cap)?);
        return Ok(doc);
    }
    for kind in verify {
        match kind {
            Verification::Oracle => {
                doc.oracle_equivalence = Some(verify_oracle_equivalence(
                    range,
                    OracleBudget::default(),
                    cap,
                )?);
            }
            Verification::Uniqueness => {
                doc.uniqueness_violations =
                    Some(verify_uniqueness(range, OracleBudget::default(), cap)?);
            }
            Verification::Feasibility => {
                doc.feasibility_violations = Some(verify_octa_feasibility(range, cap)?);
            }
            Verification::Equalities => {
                doc.equalities = Some(probe_equality_count(range, cap)?);
            }
        }
    }
    Ok(doc)
}
