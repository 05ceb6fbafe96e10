//! Command-line front end.
//!
//! Every command except `encode` prints a JSON report
//! `{schema_version, command, inputs, result, timing, version}`. `inputs`
//! holds the parsed inputs and the configuration, so `rerun` can recompute
//! `result` from a report alone. Exit codes: 0 decided positive or
//! consistent, 1 decided negative or a finding, 2 error.

mod files;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use files::{parse_sets, PolyFile};

use crate::audit::{run_suite, SuiteConfig};
use crate::cns::{cn1_certificate, cn2_witness, lason_witness};
use crate::dualcert::{build_dual_iso, dual_decide, enumerate_forbidden, DualOptions};
use crate::error::Error;
use crate::exactnum::{make_context, parse_rational};
use crate::galois::{build_galois_resolvent, resolvent_witness};
use crate::graphenc::{decode_adjacency, encode_adjacency, Digraph};
use crate::polyring::ExponentVector;
use crate::resolvent::{
    automorphism_group, brute_force_subiso, build_constraint, coset_reps, embeds, primal_run, PrimalOptions,
};
use crate::search::SearchOptions;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "nullstellen",
    version,
    about = "Exact Nullstellensatz certificates for graph problems"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// Guards and settings shared by all commands.
#[derive(Args, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_n_primal: u64,
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_n_dual: u64,
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_n_galois: u64,
    /// Largest grid or box an exhaustive search may visit.
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub grid_guard: u64,
    /// Use several threads; reports are identical either way.
    #[arg(long, global = true)]
    pub parallel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            max_n_primal: 6,
            max_n_dual: 4,
            max_n_galois: 3,
            grid_guard: 1_000_000,
            parallel: false,
        }
    }
}

impl RunConfig {
    fn primal(&self) -> PrimalOptions {
        PrimalOptions {
            max_n: self.max_n_primal as usize,
            parallel: self.parallel,
        }
    }

    fn dual(&self) -> DualOptions {
        DualOptions {
            max_n: self.max_n_dual as usize,
            parallel: self.parallel,
        }
    }

    fn search(&self) -> SearchOptions {
        SearchOptions {
            grid_guard: self.grid_guard,
            parallel: self.parallel,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the adjacency polynomial of a graph file.
    Encode {
        graph: PathBuf,
        /// Also decode the polynomial and print the recovered matrix.
        #[arg(long)]
        decode: bool,
    },
    /// Search for an embedding of B into A through coset representatives.
    Primal {
        a: PathBuf,
        b: PathBuf,
        /// Cross-check against brute-force search.
        #[arg(long)]
        check: bool,
    },
    /// Build f_B over the B-avoiding family and compare with brute force.
    Dual {
        a: PathBuf,
        b: PathBuf,
        /// Also build the isomorphism variant g_B.
        #[arg(long)]
        iso: bool,
        /// Write one graph file per family member into this directory.
        #[arg(long)]
        export_family: Option<PathBuf>,
    },
    /// Report |Aut f|, coset count and the number of factors evaluated.
    Profile { a: PathBuf, b: PathBuf },
    /// Build the Galois resolvent for r and search for a witness.
    Galois {
        /// Comma-separated rationals, e.g. `1,-1`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        r: Vec<String>,
        /// Expected length of r.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Divide a polynomial by the grid polynomials of a sets file.
    Cn1 { poly: PathBuf, sets: PathBuf },
    /// Find a nonvanishing grid point given a nonzero top coefficient.
    Cn2 {
        poly: PathBuf,
        /// Exponent vector, comma-separated.
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<u32>,
        sets: PathBuf,
        /// Only require t to be maximal in the support.
        #[arg(long)]
        lason: bool,
    },
    /// List Aut f and the coset representatives for a pair of graphs.
    Aut { a: PathBuf, b: PathBuf },
    /// Run the seeded cross-validation sweeps and report findings.
    Audit {
        /// Random n = 3 pairs in the primal sweep.
        #[arg(long, default_value_t = 200)]
        pairs: usize,
    },
    /// Recompute a report from its echoed inputs and compare results.
    Rerun { report: PathBuf },
}

/// The parsed inputs of a reportable command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Job {
    Primal {
        a: Digraph,
        b: Digraph,
        check: bool,
    },
    Dual {
        a: Digraph,
        b: Digraph,
        iso: bool,
    },
    Profile {
        a: Digraph,
        b: Digraph,
    },
    Galois {
        r: Vec<String>,
    },
    Cn1 {
        poly: PolyFile,
        sets: String,
    },
    Cn2 {
        poly: PolyFile,
        t: Vec<u32>,
        sets: String,
        lason: bool,
    },
    Aut {
        a: Digraph,
        b: Digraph,
    },
    Audit {
        pairs: usize,
    },
}

impl Job {
    pub fn name(&self) -> &'static str {
        match self {
            Job::Primal { .. } => "primal",
            Job::Dual { .. } => "dual",
            Job::Profile { .. } => "profile",
            Job::Galois { .. } => "galois",
            Job::Cn1 { .. } => "cn1",
            Job::Cn2 { .. } => "cn2",
            Job::Aut { .. } => "aut",
            Job::Audit { .. } => "audit",
        }
    }
}

/// A finished command: its payload and exit code.
pub struct Outcome {
    pub result: Value,
    pub exit: i32,
}

fn same_size(a: &Digraph, b: &Digraph) -> Result<(), Error> {
    if a.n() == b.n() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: a.n(),
            actual: b.n(),
        })
    }
}

/// Runs a job. The payload depends only on the job and the configuration.
pub fn execute(job: &Job, cfg: &RunConfig) -> Result<Outcome, Error> {
    match job {
        Job::Primal { a, b, check } => {
            same_size(a, b)?;
            let run = primal_run(a, b, &cfg.primal())?;
            let mut result = json!({
                "decision": if run.certificate.is_some() { "embedding" } else { "none" },
                "certificate": run.certificate.as_ref().map(|c| c.to_json()),
                "work": run.profile.to_json(),
            });
            let mut exit = if run.certificate.is_some() { 0 } else { 1 };
            if *check {
                let oracle = brute_force_subiso(a, b)?;
                let sound = run.certificate.as_ref().is_none_or(|c| embeds(a, b, &c.sigma));
                let agrees = sound && oracle.is_some() == run.certificate.is_some();
                result["oracle"] = json!({
                    "sigma": oracle.as_ref().map(|s| s.image().to_vec()),
                    "agrees": agrees,
                });
                if !agrees {
                    exit = 1;
                }
            }
            Ok(Outcome { result, exit })
        }
        Job::Dual { a, b, iso } => {
            same_size(a, b)?;
            let report = dual_decide(a, b, &cfg.dual())?;
            let mut result = report.to_json();
            result["family"] = json!(enumerate_forbidden(b, &cfg.dual())?
                .members
                .iter()
                .map(Digraph::code_string)
                .collect::<Vec<_>>());
            if *iso {
                result["g_B_is_zero"] = json!(build_dual_iso(a, b, &cfg.dual())?.poly.is_zero());
            }
            Ok(Outcome {
                result,
                exit: if report.consistent { 0 } else { 1 },
            })
        }
        Job::Profile { a, b } => {
            same_size(a, b)?;
            let profile = primal_run(a, b, &cfg.primal())?.profile;
            if !profile.lagrange_holds() {
                return Err(Error::SoundnessFailure("aut_order · coset_count ≠ n!".into()));
            }
            Ok(Outcome {
                result: profile.to_json(),
                exit: 0,
            })
        }
        Job::Galois { r } => {
            let r = r.iter().map(|v| parse_rational(v)).collect::<Result<Vec<_>, _>>()?;
            let inst = build_galois_resolvent(&r, cfg.max_n_galois as usize)?;
            let w = resolvent_witness(&inst, &cfg.search())?;
            let mut result = w.to_json(&r);
            result["degree"] = json!(inst.f_r.total_degree());
            Ok(Outcome { result, exit: 0 })
        }
        Job::Cn1 { poly, sets } => {
            let f = poly.polynomial()?;
            let grid = parse_sets(sets, &poly.context()?)?;
            let cert = cn1_certificate(&f, &grid, &cfg.search())?;
            let mut result = cert.to_json();
            result["reconstruction_checked"] = json!(cert.reconstruction_holds()?);
            result["degree_bounds_hold"] = json!(cert.degree_bounds_hold());
            Ok(Outcome { result, exit: 0 })
        }
        Job::Cn2 { poly, t, sets, lason } => {
            let f = poly.polynomial()?;
            let grid = parse_sets(sets, &poly.context()?)?;
            let t = ExponentVector(t.clone());
            let w = if *lason {
                lason_witness(&f, &t, &grid, &cfg.search())?
            } else {
                cn2_witness(&f, &t, &grid, &cfg.search())?
            };
            Ok(Outcome {
                result: w.to_json(),
                exit: 0,
            })
        }
        Job::Aut { a, b } => {
            same_size(a, b)?;
            let fc = build_constraint(a, b)?;
            let group = automorphism_group(&fc, &cfg.primal())?;
            let reps = coset_reps(&group, a.n())?;
            Ok(Outcome {
                result: json!({
                    "n": a.n(),
                    "aut_order": group.order(),
                    "elements": group.elements().iter().map(|p| p.image().to_vec()).collect::<Vec<_>>(),
                    "coset_reps": reps.iter().map(|p| p.image().to_vec()).collect::<Vec<_>>(),
                }),
                exit: 0,
            })
        }
        Job::Audit { pairs } => {
            let suite = SuiteConfig {
                seed: cfg.seed,
                random_pairs_n3: *pairs,
                primal: cfg.primal(),
                dual: cfg.dual(),
                search: cfg.search(),
                max_n_galois: cfg.max_n_galois as usize,
                ..SuiteConfig::default()
            };
            let report = run_suite(&suite)?;
            let hard = [
                "disagreements",
                "bad_certificates",
                "invariance_violations",
                "necessity_violations",
            ]
            .iter()
            .map(|k| report["primal"][k].as_u64().unwrap_or(0))
            .sum::<u64>()
                + report["cn1"]["remainder_mismatches"].as_u64().unwrap_or(0)
                + report["cn1"]["bad_certificates"].as_u64().unwrap_or(0)
                + report["dual"]["n3_edge_family_violations"].as_u64().unwrap_or(0);
            let product_findings = report["primal"]["product_counterexamples"]
                .as_array()
                .map_or(0, Vec::len);
            let dual_findings = report["dual"]["n2_edge_table"]
                .as_array()
                .map_or(0, |t| t.iter().filter(|r| r["consistent"] == false).count());
            let mut result = report;
            result["summary"] = json!({
                "hard_violations": hard,
                "product_counterexamples": product_findings,
                "dual_inconsistencies": dual_findings,
            });
            let exit = if hard + product_findings as u64 + dual_findings as u64 == 0 {
                0
            } else {
                1
            };
            Ok(Outcome { result, exit })
        }
    }
}

/// The report document for a finished job.
pub fn report(job: &Job, cfg: &RunConfig, outcome: &Outcome, elapsed_ms: f64) -> Value {
    let mut inputs = serde_json::to_value(job).expect("jobs serialize");
    inputs.as_object_mut().expect("tagged enum").remove("command");
    inputs["config"] = serde_json::to_value(cfg).expect("config serializes");
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": job.name(),
        "inputs": inputs,
        "result": outcome.result,
        "exit_code": outcome.exit,
        "timing": { "elapsed_ms": elapsed_ms },
        "version": env!("CARGO_PKG_VERSION"),
    })
}

/// Recovers the job and configuration echoed in a report.
pub fn job_from_report(report: &Value) -> Result<(Job, RunConfig), String> {
    let command = report["command"].as_str().ok_or("report has no `command`")?;
    let mut inputs = report["inputs"].clone();
    let obj = inputs.as_object_mut().ok_or("report has no `inputs` object")?;
    let cfg_value = obj.remove("config").ok_or("inputs lack `config`")?;
    obj.insert("command".into(), json!(command));
    let job: Job = serde_json::from_value(inputs).map_err(|e| format!("cannot replay inputs: {e}"))?;
    let cfg: RunConfig = serde_json::from_value(cfg_value).map_err(|e| format!("invalid config: {e}"))?;
    Ok((job, cfg))
}

fn load_job(command: Command) -> Result<Job, String> {
    use files::{read, read_graph};
    let parse_poly = |p: &Path| PolyFile::parse(&read(p)?).map_err(|e| format!("{}: {e}", p.display()));
    Ok(match command {
        Command::Primal { a, b, check } => Job::Primal {
            a: read_graph(&a)?,
            b: read_graph(&b)?,
            check,
        },
        Command::Dual { a, b, iso, .. } => Job::Dual {
            a: read_graph(&a)?,
            b: read_graph(&b)?,
            iso,
        },
        Command::Profile { a, b } => Job::Profile {
            a: read_graph(&a)?,
            b: read_graph(&b)?,
        },
        Command::Galois { r, n } => {
            if let Some(n) = n {
                if n != r.len() {
                    return Err(format!("--n {n} but r has {} entries", r.len()));
                }
            }
            Job::Galois { r }
        }
        Command::Cn1 { poly, sets } => Job::Cn1 {
            poly: parse_poly(&poly)?,
            sets: read(&sets)?,
        },
        Command::Cn2 { poly, t, sets, lason } => Job::Cn2 {
            poly: parse_poly(&poly)?,
            t,
            sets: read(&sets)?,
            lason,
        },
        Command::Aut { a, b } => Job::Aut {
            a: read_graph(&a)?,
            b: read_graph(&b)?,
        },
        Command::Audit { pairs } => Job::Audit { pairs },
        Command::Encode { .. } | Command::Rerun { .. } => unreachable!("handled before loading"),
    })
}

fn emit(text: &str, out_path: Option<&Path>, stdout: &mut dyn Write) -> Result<(), String> {
    match out_path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn encode_command(graph: &Path, decode: bool) -> Result<String, String> {
    let g = files::read_graph(graph)?;
    let ctx = make_context(g.n() as u32).map_err(|e| e.to_string())?;
    let poly = encode_adjacency(&g, &ctx).map_err(|e| e.to_string())?;
    let mut text = format!("{poly}\n");
    if decode {
        let back = decode_adjacency(&poly, g.n()).map_err(|e| e.to_string())?;
        if back != g {
            return Err("decoded matrix differs from the input".into());
        }
        text.push_str(&back.to_text());
    }
    Ok(text)
}

fn export_family(b: &Digraph, cfg: &RunConfig, dir: &Path) -> Result<(), String> {
    let family = enumerate_forbidden(b, &cfg.dual()).map_err(|e| e.to_string())?;
    std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    for (k, m) in family.members.iter().enumerate() {
        let path = dir.join(format!("member_{k:03}.txt"));
        std::fs::write(&path, m.to_text()).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<i32, String> {
    let cfg = cli.config;
    let out = cli.out.as_deref();
    let (job, cfg, previous) = match cli.command {
        Command::Encode { graph, decode } => {
            emit(&encode_command(&graph, decode)?, out, stdout)?;
            return Ok(0);
        }
        Command::Rerun { report } => {
            let text = files::read(&report)?;
            let value: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", report.display()))?;
            let (job, cfg) = job_from_report(&value)?;
            (job, cfg, Some(value["result"].clone()))
        }
        Command::Dual {
            ref b,
            export_family: Some(ref dir),
            ..
        } => {
            export_family(&files::read_graph(b)?, &cfg, dir)?;
            (load_job(cli.command)?, cfg, None)
        }
        command => (load_job(command)?, cfg, None),
    };
    let start = Instant::now();
    let outcome = execute(&job, &cfg).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let mut doc = report(&job, &cfg, &outcome, elapsed);
    let exit = match previous {
        None => outcome.exit,
        Some(prev) => {
            let same = prev == outcome.result;
            doc["rerun"] = json!({ "matches_previous": same });
            if same {
                0
            } else {
                1
            }
        }
    };
    emit(&pretty(&doc), out, stdout)?;
    Ok(exit)
}

/// Parses `args` and runs the command, writing to the given streams.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli, stdout) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}
