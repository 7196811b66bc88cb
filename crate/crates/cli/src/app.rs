//! Argument parsing and command dispatch.
//!
//! Exit codes: 0 = verdict true / success, 1 = verdict false or falsification
//! found, 2 = usage or input error, 3 = budget or cap exceeded.

use crate::format::{emit_instance, parse_instance};
use crate::report::{InstanceInfo, ReportDocument};
use clap::{Parser, Subcommand};
use gammaring_core::instances::by_recipe;
use gammaring_core::maps::{enumerate_maps_partitioned, MapRole};
use gammaring_core::structure::{center, is_commutative, is_prime, is_semiprime};
use gammaring_core::theorems::{
    search_counterexample, verify, verify_all, InstanceSource, SearchConfig, SearchTarget,
    TheoremId, TheoremOutcome, VerifyOpts,
};
use gammaring_core::{Error, GammaRing};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(
    name = "gammaring",
    version,
    about = "Workbench for finite gamma-rings: structure analysis, map enumeration, theorem verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,

    /// Element cap for center/element-exhaustive operations.
    #[arg(long, global = true)]
    pub cap: Option<u64>,

    /// Sample count for tuple checks above the exhaustive threshold.
    #[arg(long, global = true)]
    pub sample: Option<u64>,

    /// Worker threads for partitioned enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,

    /// RNG seed for sampled checks and random instances.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Node budget for backtracking map enumeration.
    #[arg(long, global = true)]
    pub budget: Option<u64>,

    /// Write the JSON report to this path.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,

    /// Record real wall time in the report (off by default so reports are
    /// byte-stable).
    #[arg(long, global = true)]
    pub timing: bool,

    /// Skip the associativity check when loading an instance file.
    #[arg(long, global = true)]
    pub skip_assoc: bool,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Check well-definedness and associativity of an instance file.
    Validate { file: PathBuf },
    /// Report center, commutativity, semiprimeness, and primeness.
    Analyze { file: PathBuf },
    /// Enumerate additive maps of the given role.
    EnumMaps {
        file: PathBuf,
        /// left_derivation | right_derivation | derivation | endomorphism | additive
        #[arg(long)]
        role: String,
        /// Keep only strong commutativity preserving maps.
        #[arg(long)]
        scp: bool,
    },
    /// Verify one theorem on the instance.
    Verify {
        file: PathBuf,
        #[arg(long)]
        theorem: String,
    },
    /// Verify every theorem whose hypotheses hold; report the rest as skipped.
    VerifyAll { file: PathBuf },
    /// Search seeded random instances for a counterexample to a conclusion
    /// with its hypothesis dropped.
    Search {
        /// left-derivation-not-central | scp-endo-defect-not-central |
        /// scp-derivation-on-noncommutative
        #[arg(long)]
        target: String,
        /// Number of seeded random instances to scan.
        #[arg(long, default_value_t = 50)]
        count: u32,
    },
    /// Emit a built-in recipe as an instance file.
    Instance {
        /// z2 | zq | dual | rect | paper-analog | prod-z2-z2 | prod-rect122-z2 | random
        recipe: String,
        /// Numeric recipe parameters (e.g. `rect 1 2 2`).
        params: Vec<u64>,
        /// Output path; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn opts_from(cli: &Cli) -> VerifyOpts {
    let mut o = VerifyOpts::default();
    if let Some(cap) = cli.cap {
        o.element_cap = cap;
    }
    if let Some(sample) = cli.sample {
        o.sample = sample;
    }
    if let Some(budget) = cli.budget {
        o.node_budget = budget;
    }
    o.seed = cli.seed;
    o.workers = cli.workers.max(1);
    o
}

fn load_instance(path: &Path, skip_assoc: bool) -> Result<GammaRing, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        reason: format!("cannot read {}: {e}", path.display()),
    })?;
    let gr = parse_instance(&text)?;
    let gr = if gr.name().is_none() {
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "unnamed".into());
        gr.with_name(stem)
    } else {
        gr
    };
    if !skip_assoc {
        // Populate the associativity cache now so failures surface as a
        // validate verdict or a NotValidated input error, not mid-command.
        let _ = gr.is_associative();
    }
    Ok(gr)
}

struct Outcome {
    doc: ReportDocument,
    human: String,
    exit: i32,
}

fn dispatch(cli: &Cli) -> Result<Outcome, Error> {
    let opts = opts_from(cli);
    match &cli.cmd {
        Cmd::Validate { file } => {
            let gr = load_instance(file, true)?;
            let mut doc = ReportDocument::new(InstanceInfo::of(&gr), "validate", cli.seed);
            let mut human = format!("instance {}: well-defined\n", doc.instance.name);
            if cli.skip_assoc {
                doc.hypothesis_notes.insert("associativity_checked".into(), false);
                human.push_str("associativity: skipped\n");
            } else {
                let r = gr.validate_associativity();
                doc.fold(&r, None);
                doc.hypothesis_notes.insert("associativity_checked".into(), true);
                human.push_str(if r.verdict {
                    "associativity: ok\n"
                } else {
                    "associativity: FAILS (see witness)\n"
                });
            }
            let exit = i32::from(!doc.verdict);
            Ok(Outcome { doc, human, exit })
        }
        Cmd::Analyze { file } => {
            let gr = load_instance(file, cli.skip_assoc)?;
            gr.ensure_validated()?;
            let mut doc = ReportDocument::new(InstanceInfo::of(&gr), "analyze", cli.seed);
            let z = center(&gr, opts.element_cap)?;
            let comm = is_commutative(&gr)?;
            let sp = is_semiprime(&gr, opts.table_cap)?;
            let p = is_prime(&gr, opts.table_cap)?;
            doc.hypothesis_notes.insert("commutative".into(), comm.verdict);
            doc.hypothesis_notes.insert("semiprime".into(), sp.verdict);
            doc.hypothesis_notes.insert("prime".into(), p.verdict);
            doc.counters.insert("m_order".into(), gr.m_group().order());
            doc.counters.insert("g_order".into(), gr.g_group().order());
            doc.counters.insert("center_order".into(), z.order() as u64);
            // Informational witnesses (e.g. a non-semiprime element); the
            // analyze verdict itself is always true.
            for r in [&comm, &sp, &p] {
                for w in &r.witnesses {
                    doc.push_witness(w.clone());
                }
            }
            let human = format!(
                "instance {}: |M|={} |G|={} |Z|={}\ncommutative: {}\nsemiprime: {}\nprime: {}\n",
                doc.instance.name,
                gr.m_group().order(),
                gr.g_group().order(),
                z.order(),
                comm.verdict,
                sp.verdict,
                p.verdict
            );
            Ok(Outcome { doc, human, exit: 0 })
        }
        Cmd::EnumMaps { file, role, scp } => {
            let gr = load_instance(file, cli.skip_assoc)?;
            let role: MapRole = role.parse()?;
            let maps =
                enumerate_maps_partitioned(&gr, role, *scp, opts.node_budget, opts.workers)?;
            let mut doc = ReportDocument::new(
                InstanceInfo::of(&gr),
                format!("enum-maps --role {}{}", role.as_str(), if *scp { " --scp" } else { "" }),
                cli.seed,
            );
            doc.counters.insert("maps_found".into(), maps.len() as u64);
            let mut human = format!(
                "{} maps with role {}{} on {}\n",
                maps.len(),
                role.as_str(),
                if *scp { " (scp)" } else { "" },
                doc.instance.name
            );
            for (n, f) in maps.iter().enumerate() {
                if n < 32 {
                    let mut w = gammaring_core::Witness::new(format!("map_{n}"));
                    for (i, img) in f.images().iter().enumerate() {
                        w = w.with(format!("image_{i}"), img);
                    }
                    doc.push_witness(w);
                    let imgs: Vec<String> = f
                        .images()
                        .iter()
                        .map(|e| format!("{:?}", e.coords))
                        .collect();
                    let _ = writeln!(human, "  map_{n}: {}", imgs.join(" "));
                } else if n == 32 {
                    human.push_str("  ... (truncated)\n");
                    break;
                }
            }
            Ok(Outcome { doc, human, exit: 0 })
        }
        Cmd::Verify { file, theorem } => {
            let gr = load_instance(file, cli.skip_assoc)?;
            let id: TheoremId = theorem.parse()?;
            let r = verify(&gr, id, &opts)?;
            let mut doc = ReportDocument::new(
                InstanceInfo::of(&gr),
                format!("verify --theorem {}", id.as_str()),
                cli.seed,
            );
            doc.fold(&r, None);
            let human = format!(
                "{} on {}: {}{}\n",
                id.as_str(),
                doc.instance.name,
                if r.verdict { "pass" } else { "FAIL" },
                if r.falsification { " (FALSIFICATION)" } else { "" }
            );
            let exit = i32::from(!r.verdict);
            Ok(Outcome { doc, human, exit })
        }
        Cmd::VerifyAll { file } => {
            let gr = load_instance(file, cli.skip_assoc)?;
            let outcomes = verify_all(&gr, &opts)?;
            let mut doc = ReportDocument::new(InstanceInfo::of(&gr), "verify-all", cli.seed);
            let mut human = format!("verify-all on {}:\n", doc.instance.name);
            for (id, outcome) in &outcomes {
                match outcome {
                    TheoremOutcome::Ran(r) => {
                        doc.fold(r, Some(id.as_str()));
                        let _ = writeln!(
                            human,
                            "  {}: {}{}",
                            id.as_str(),
                            if r.verdict { "pass" } else { "FAIL" },
                            if r.falsification { " (FALSIFICATION)" } else { "" }
                        );
                    }
                    TheoremOutcome::Skipped { failing_hypothesis } => {
                        doc.hypothesis_notes
                            .insert(format!("{}.skipped", id.as_str()), true);
                        let _ = writeln!(
                            human,
                            "  {}: skipped (hypothesis `{failing_hypothesis}` fails)",
                            id.as_str()
                        );
                    }
                }
            }
            let exit = i32::from(!doc.verdict);
            Ok(Outcome { doc, human, exit })
        }
        Cmd::Search { target, count } => {
            let target: SearchTarget = target.parse()?;
            let cfg = SearchConfig {
                target,
                source: InstanceSource::Random {
                    seed: cli.seed,
                    count: *count,
                },
                budget: opts.node_budget,
            };
            let r = search_counterexample(&cfg, &opts)?;
            let mut doc = ReportDocument::new(
                InstanceInfo::synthetic(format!("random[seed={},count={}]", cli.seed, count)),
                format!("search --target {}", target.as_str()),
                cli.seed,
            );
            doc.fold(&r, None);
            let human = if r.verdict {
                format!(
                    "search {}: no counterexample in {} instances ({} budget-exhausted)\n",
                    target.as_str(),
                    r.counters.get("instances_scanned").copied().unwrap_or(0),
                    r.counters.get("budget_exhausted").copied().unwrap_or(0)
                )
            } else {
                format!("search {}: COUNTEREXAMPLE FOUND (see witnesses)\n", target.as_str())
            };
            let exit = i32::from(!r.verdict);
            Ok(Outcome { doc, human, exit })
        }
        Cmd::Instance { recipe, params, out } => {
            let gr = by_recipe(recipe, params)?;
            let text = emit_instance(&gr);
            let doc = ReportDocument::new(
                InstanceInfo::of(&gr),
                format!("instance {recipe}"),
                cli.seed,
            );
            let human = match out {
                Some(path) => {
                    std::fs::write(path, &text).map_err(|e| Error::Parse {
                        line: 0,
                        reason: format!("cannot write {}: {e}", path.display()),
                    })?;
                    format!("wrote {} ({})\n", path.display(), doc.instance.name)
                }
                None => text,
            };
            Ok(Outcome { doc, human, exit: 0 })
        }
    }
}

/// Runs one parsed invocation: prints the human summary, writes the JSON
/// report when requested, and returns the process exit code.
pub fn execute(cli: &Cli) -> i32 {
    let start = Instant::now();
    match dispatch(cli) {
        Ok(mut outcome) => {
            if cli.timing {
                outcome.doc.elapsed = start.elapsed().as_millis() as u64;
            }
            print!("{}", outcome.human);
            if let Some(path) = &cli.json {
                if let Err(e) = std::fs::write(path, outcome.doc.to_json()) {
                    eprintln!("error: cannot write report {}: {e}", path.display());
                    return 2;
                }
            }
            outcome.exit
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::CapExceeded { .. } => 3,
                _ => 2,
            }
        }
    }
}
