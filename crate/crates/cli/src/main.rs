//! `matroid-cb`: run the exchange, partition and path algorithms on
//! instance files and verify what they produce.
//!
//! Exit status: 0 on success, 1 when `verify` or `check-axioms` finds a
//! violation, 2 on an internal error or when a command's own output fails
//! its verifier, 3 on unreadable or malformed input or bad arguments.

mod files;
mod generate;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use matroid_cb::element::{ElementSet, GroundSet};
use matroid_cb::exchange::{kundu_lawler_greedy, kundu_lawler_ordered_full, ExchangeInstance, TieBreak};
use matroid_cb::graph::Graph;
use matroid_cb::graph_apps::{
    bipartite_partition_matroids, dominates, is_matching, merge_path_systems, ore_matching, strongly_maximal_above,
    ExchangeVariant, PathSystem, SmRoute, SmWitness,
};
use matroid_cb::oracle::gen::{InstanceSeed, Mix, Shape};
use matroid_cb::oracle::{
    check_axioms, check_rank_function, is_strongly_maximal_bruteforce, verify_family_cb, verify_kl, verify_partition,
    verify_paths, verify_sets, Names, Verdict, SM_LIMIT,
};
use matroid_cb::partition::{cantor_bernstein_sets, family_cb, solve_family, PartitionOptions, PartitionStep};
use matroid_cb::MatroidExpr;

use files::{KeyFile, PartitionInput};
use generate::GenKind;

#[derive(Parser)]
#[command(name = "matroid-cb", version, about = "Matroid exchange and partition algorithms")]
struct Cli {
    /// Print step counts to stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    /// Print verdicts as JSON instead of text.
    #[arg(long, global = true)]
    json_verdict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Common independent set spanning I0 in M0 and I1 in M1.
    KunduLawler {
        /// Instance file with `m0`, `m1`, `i0`, `i1`.
        #[arg(long, required_unless_present_all = ["m0", "m1"], conflicts_with_all = ["m0", "m1", "i0", "i1"])]
        instance: Option<PathBuf>,
        /// Matroid file for M0.
        #[arg(long, requires = "m1")]
        m0: Option<PathBuf>,
        #[arg(long, requires = "m0")]
        m1: Option<PathBuf>,
        /// Labels of I0, separated by spaces or commas.
        #[arg(long, allow_hyphen_values = true)]
        i0: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        i1: Option<String>,
        /// Use the order-guided variant instead of the greedy one.
        #[arg(long)]
        ordered: bool,
        /// Write the ordered run's steps to this file.
        #[arg(long, requires = "ordered")]
        trace: Option<PathBuf>,
        /// Break greedy ties at random from this seed instead of by least id.
        #[arg(long, conflicts_with = "ordered")]
        seed: Option<u64>,
    },
    /// Independent set whose spans cover F0 in M0 and F1 in M1.
    CantorBernstein {
        /// Instance file with `m0`, `m1`, `f0`, `f1`.
        #[arg(long)]
        instance: PathBuf,
    },
    /// Partition of E into sets T_i, one per matroid of the family.
    Partition {
        /// Instance file with `theta`, then `M i`, `P i`, `R i` and optional `N <e>` lines.
        #[arg(long)]
        instance: PathBuf,
        /// Write the recursion's steps to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Disjoint path system covering the terminals each input system covers.
    MergePaths {
        /// Instance file with `graph`, `p0`, `p1`.
        #[arg(long, required_unless_present_all = ["graph", "p0", "p1"], conflicts_with_all = ["graph", "p0", "p1"])]
        instance: Option<PathBuf>,
        /// Graph file with terminal sets `t0`, `t1`.
        #[arg(long, requires_all = ["p0", "p1"])]
        graph: Option<PathBuf>,
        /// Paths file: one path per line as vertex labels.
        #[arg(long, requires = "graph")]
        p0: Option<PathBuf>,
        #[arg(long, requires = "graph")]
        p1: Option<PathBuf>,
        #[arg(long)]
        ordered: bool,
    },
    /// Matching covering what I0 covers on one side and I1 on the other.
    OreMatching {
        /// Instance file with `graph`, `i0`, `i1`.
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        ordered: bool,
    },
    /// Strongly maximal common independent set dominating J.
    StronglyMaximal {
        /// Instance file with `m0`, `m1`, `j`.
        #[arg(long, required_unless_present_all = ["m0", "m1"], conflicts_with_all = ["m0", "m1", "j"])]
        instance: Option<PathBuf>,
        #[arg(long, requires = "m1")]
        m0: Option<PathBuf>,
        #[arg(long, requires = "m0")]
        m1: Option<PathBuf>,
        /// Labels of J.
        #[arg(long)]
        j: Option<String>,
        #[arg(long, value_enum, default_value_t = RouteArg::Proof)]
        route: RouteArg,
    },
    /// Exhaustively check the matroid axioms on a matroid file.
    CheckAxioms { file: PathBuf },
    /// Check a solution file against an instance.
    Verify {
        #[arg(value_enum)]
        kind: VerifyKind,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Write a seeded random instance to a directory.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        elements: usize,
        #[arg(long, default_value_t = 2)]
        indices: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, value_enum, default_value_t = MixArg::All)]
        mix: MixArg,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Proof,
    Augment,
}

#[derive(Clone, Copy, ValueEnum)]
enum MixArg {
    All,
    Graphic,
    Partition,
    Uniform,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyKind {
    Kl,
    Sets,
    Partition,
    Paths,
    Sm,
    Matching,
}

enum Status {
    Ok,
    Violation,
    SelfCheckFailed,
}

struct Ctx {
    verbose: u8,
    json: bool,
    out: String,
}

impl Ctx {
    fn line(&mut self, text: impl AsRef<str>) {
        self.out.push_str(text.as_ref());
        self.out.push('\n');
    }

    fn verdict(&mut self, v: &Verdict) -> Result<()> {
        if self.json {
            let json = serde_json::to_string(v)?;
            self.line(json);
        } else {
            let _ = write!(self.out, "{v}");
        }
        Ok(())
    }

    fn note(&self, text: impl AsRef<str>) {
        if self.verbose > 0 {
            eprintln!("{}", text.as_ref());
        }
    }

    /// Reports the verdict on the command's own output.
    fn produced(&mut self, v: Verdict) -> Result<Status> {
        self.verdict(&v)?;
        Ok(if v.pass { Status::Ok } else { Status::SelfCheckFailed })
    }

    /// Reports the verdict on a solution supplied by the user.
    fn checked(&mut self, v: Verdict) -> Result<Status> {
        self.verdict(&v)?;
        Ok(if v.pass { Status::Ok } else { Status::Violation })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    let mut ctx = Ctx {
        verbose: cli.verbose,
        json: cli.json_verdict,
        out: String::new(),
    };
    let result = run(cli.command, &mut ctx);
    print!("{}", ctx.out);
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Violation) => ExitCode::from(1),
        Ok(Status::SelfCheckFailed) => {
            eprintln!("error: output failed its own verification");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<matroid_cb::Error>() {
            return match err {
                matroid_cb::Error::Internal(_) => 2,
                _ => 3,
            };
        }
    }
    3
}

fn run(command: Command, ctx: &mut Ctx) -> Result<Status> {
    match command {
        Command::KunduLawler {
            instance,
            m0,
            m1,
            i0,
            i1,
            ordered,
            trace,
            seed,
        } => {
            let kf = source(instance, [("m0", path_text(m0)), ("m1", path_text(m1)), ("i0", i0), ("i1", i1)])?;
            let (inst, names) = load_exchange(&kf)?;
            let set = if ordered {
                let (set, tr) = kundu_lawler_ordered_full(&inst)?;
                tr.check_monovariant()?;
                ctx.note(format!("{} steps", tr.steps.len()));
                if let Some(path) = trace {
                    write_file(&path, &tr.to_text(&names))?;
                }
                set
            } else {
                let tie = seed.map_or(TieBreak::LeastId, TieBreak::Seeded);
                let outcome = kundu_lawler_greedy(&inst, tie)?;
                ctx.note(format!("{} iterations", outcome.iterations));
                outcome.set
            };
            ctx.line(format!("I: {}", names.format_set(&set)));
            ctx.produced(verify_kl(&inst, &set, Names(Some(&names))))
        }
        Command::CantorBernstein { instance } => {
            let (m0, m1, f0, f1, names) = load_sets(&KeyFile::load(&instance)?)?;
            let f = cantor_bernstein_sets(&m0, &m1, &f0, &f1)?;
            ctx.line(format!("F: {}", names.format_set(&f)));
            ctx.produced(verify_sets(&m0, &m1, &f0, &f1, &f, Names(Some(&names))))
        }
        Command::Partition { instance, trace } => {
            let mut names = GroundSet::new();
            let input = files::load_partition(&instance, &mut names)?;
            let (sets, verdict, steps) = solve_partition(&input, &names)?;
            for (i, t) in sets.iter().enumerate() {
                ctx.line(format!("T {i}: {}", names.format_set(t)));
            }
            if let Some(path) = trace {
                write_file(&path, &steps)?;
            }
            ctx.produced(verdict)
        }
        Command::MergePaths {
            instance,
            graph,
            p0,
            p1,
            ordered,
        } => {
            let kf = source(instance, [("graph", path_text(graph)), ("p0", path_text(p0)), ("p1", path_text(p1))])?;
            let (g, p0, p1) = load_paths(&kf)?;
            let out = merge_path_systems(&g, &p0, &p1, variant(ordered))?;
            ctx.out.push_str(&out.to_text(&g));
            ctx.produced(verify_paths(&g, &p0, &p1, &out))
        }
        Command::OreMatching { instance, ordered } => {
            let (g, inst, names) = load_matching(&KeyFile::load(&instance)?)?;
            let out = ore_matching(&g, &inst.i0, &inst.i1, variant(ordered))?;
            ctx.line(format!("I: {}", names.format_set(&out)));
            ctx.produced(verify_matching(&g, &inst, &out, &names))
        }
        Command::StronglyMaximal {
            instance,
            m0,
            m1,
            j,
            route,
        } => {
            let kf = source(instance, [("m0", path_text(m0)), ("m1", path_text(m1)), ("j", j)])?;
            let (m0, m1, j, names) = load_sm(&kf)?;
            let route = match route {
                RouteArg::Proof => SmRoute::Proof,
                RouteArg::Augment => SmRoute::Augment,
            };
            let w = strongly_maximal_above(&m0, &m1, &j, route)?;
            ctx.out.push_str(&witness_lines(&w, &names));
            let mut v = Verdict::new();
            v.require("witness", w.holds(&m0, &m1), || "E0/E1 do not certify I".into());
            v.merge(verify_sm(&m0, &m1, &j, &w.set, &names)?);
            ctx.produced(v)
        }
        Command::CheckAxioms { file } => {
            let mut names = GroundSet::new();
            let m = files::load_matroid_file(&file, &mut names)?;
            let mut v = check_axioms(&m)?;
            v.merge(check_rank_function(&m)?);
            ctx.checked(v)
        }
        Command::Verify {
            kind,
            instance,
            solution,
        } => {
            let text = files::read(&solution)?;
            let v = verify(kind, &instance, &text).with_context(|| format!("in {}", solution.display()))?;
            ctx.checked(v)
        }
        Command::Gen {
            kind,
            seed,
            elements,
            indices,
            density,
            mix,
            out,
        } => {
            let mix = match mix {
                MixArg::All => Mix::All,
                MixArg::Graphic => Mix::Graphic,
                MixArg::Partition => Mix::Partition,
                MixArg::Uniform => Mix::Uniform,
            };
            let shape = Shape {
                elements,
                indices,
                mix,
                density,
            };
            for path in generate::run(kind, InstanceSeed::new(seed, shape), &out)? {
                ctx.line(path.display().to_string());
            }
            Ok(Status::Ok)
        }
    }
}

fn variant(ordered: bool) -> ExchangeVariant {
    if ordered {
        ExchangeVariant::Ordered
    } else {
        ExchangeVariant::Greedy(TieBreak::LeastId)
    }
}

/// The instance file, or the same keys given as flags.
fn source<const N: usize>(instance: Option<PathBuf>, flags: [(&str, Option<String>); N]) -> Result<KeyFile> {
    match instance {
        Some(path) => KeyFile::load(&path),
        None => Ok(KeyFile::from_pairs(
            "command line",
            flags.into_iter().filter_map(|(k, v)| v.map(|v| (k, v))).collect(),
        )),
    }
}

fn path_text(p: Option<PathBuf>) -> Option<String> {
    p.map(|p| p.display().to_string())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load_exchange(kf: &KeyFile) -> Result<(ExchangeInstance, GroundSet)> {
    let mut names = GroundSet::new();
    let m0 = kf.matroid("m0", &mut names)?;
    let m1 = kf.matroid("m1", &mut names)?;
    let i0 = kf.set("i0", &names)?;
    let i1 = kf.set("i1", &names)?;
    let inst = ExchangeInstance::new(m0, m1, i0, i1)?;
    inst.validate()?;
    Ok((inst, names))
}

fn load_sets(kf: &KeyFile) -> Result<(MatroidExpr, MatroidExpr, ElementSet, ElementSet, GroundSet)> {
    let mut names = GroundSet::new();
    let m0 = kf.matroid("m0", &mut names)?;
    let m1 = kf.matroid("m1", &mut names)?;
    let f0 = kf.set("f0", &names)?;
    let f1 = kf.set("f1", &names)?;
    Ok((m0, m1, f0, f1, names))
}

fn load_sm(kf: &KeyFile) -> Result<(MatroidExpr, MatroidExpr, ElementSet, GroundSet)> {
    let mut names = GroundSet::new();
    let m0 = kf.matroid("m0", &mut names)?;
    let m1 = kf.matroid("m1", &mut names)?;
    let j = kf.set("j", &names)?;
    Ok((m0, m1, j, names))
}

fn load_paths(kf: &KeyFile) -> Result<(Arc<Graph>, PathSystem, PathSystem)> {
    let mut names = GroundSet::new();
    let g = files::load_graph_arc(&kf.dir.join(kf.require("graph")?), &mut names)?;
    let system = |key: &str| -> Result<PathSystem> {
        let file = kf.dir.join(kf.require(key)?);
        let text = files::read(&file)?;
        PathSystem::parse(&text, &g).with_context(|| format!("in {}", file.display()))
    };
    let p0 = system("p0")?;
    let p1 = system("p1")?;
    Ok((g, p0, p1))
}

fn load_matching(kf: &KeyFile) -> Result<(Arc<Graph>, ExchangeInstance, GroundSet)> {
    let mut names = GroundSet::new();
    let g = files::load_graph_arc(&kf.dir.join(kf.require("graph")?), &mut names)?;
    let (m0, m1) = bipartite_partition_matroids(&g)?;
    let i0 = kf.set("i0", &names)?;
    let i1 = kf.set("i1", &names)?;
    let inst = ExchangeInstance::new(m0, m1, i0, i1)?;
    Ok((g, inst, names))
}

/// A matching verdict: `out` is a matching and, read as a common
/// independent set of the two side matroids, spans `I0` and `I1`.
fn verify_matching(g: &Graph, inst: &ExchangeInstance, out: &ElementSet, names: &GroundSet) -> Verdict {
    let mut v = Verdict::new();
    v.require("matching", is_matching(g, out), || format!("{{{}}} shares a vertex", names.format_set(out)));
    v.merge(verify_kl(inst, out, Names(Some(names))));
    v
}

fn verify_sm(m0: &MatroidExpr, m1: &MatroidExpr, j: &ElementSet, i: &ElementSet, names: &GroundSet) -> Result<Verdict> {
    let mut v = Verdict::new();
    v.require("dominates-J", dominates(m0, m1, j, i), || {
        format!("J = {{{}}} is not spanned by I in both matroids", names.format_set(j))
    });
    if m0.ground().len() <= SM_LIMIT {
        let (brute, _) = is_strongly_maximal_bruteforce(m0, m1, i)?;
        v.merge(brute);
    }
    Ok(v)
}

fn solve_partition(input: &PartitionInput, names: &GroundSet) -> Result<(Vec<ElementSet>, Verdict, String)> {
    let mut trace = String::new();
    match input {
        PartitionInput::Family(inst) => {
            let solved = solve_family(inst, PartitionOptions::default())?;
            for (n, step) in solved.run.steps.iter().enumerate() {
                let text = match step {
                    PartitionStep::Remove { index, element } => format!("remove {} from T {index}", names.label(*element)),
                    PartitionStep::Add { index, element } => format!("add {} to T {index}", names.label(*element)),
                    PartitionStep::Exchange {
                        index,
                        entering,
                        leaving,
                        circuit,
                    } => format!(
                        "exchange in T {index}: +{} -{} circuit {{{}}}",
                        names.label(*entering),
                        names.label(*leaving),
                        names.format_set(circuit.elements())
                    ),
                };
                let _ = writeln!(trace, "step {}: {text}", n + 1);
            }
            let potentials: Vec<String> = solved.run.potentials.iter().map(i64::to_string).collect();
            let _ = writeln!(trace, "potentials: {}", potentials.join(" "));
            let v = verify_partition(inst, &solved.sets, Names(Some(names)));
            Ok((solved.sets, v, trace))
        }
        PartitionInput::FamilyCb(inst) => {
            let sets = family_cb(inst)?;
            let v = verify_family_cb(inst, &sets, Names(Some(names)));
            Ok((sets, v, trace))
        }
    }
}

fn verify(kind: VerifyKind, instance: &Path, solution: &str) -> Result<Verdict> {
    let kf = || KeyFile::load(instance);
    Ok(match kind {
        VerifyKind::Kl => {
            let (inst, names) = load_exchange(&kf()?)?;
            let i = files::parse_solution_set(solution, &names)?;
            verify_kl(&inst, &i, Names(Some(&names)))
        }
        VerifyKind::Sets => {
            let (m0, m1, f0, f1, names) = load_sets(&kf()?)?;
            let f = files::parse_solution_set(solution, &names)?;
            verify_sets(&m0, &m1, &f0, &f1, &f, Names(Some(&names)))
        }
        VerifyKind::Partition => {
            let mut names = GroundSet::new();
            let input = files::load_partition(instance, &mut names)?;
            let t = files::parse_partition_solution(solution, &names, input.theta())?;
            match &input {
                PartitionInput::Family(inst) => verify_partition(inst, &t, Names(Some(&names))),
                PartitionInput::FamilyCb(inst) => verify_family_cb(inst, &t, Names(Some(&names))),
            }
        }
        VerifyKind::Paths => {
            let (g, p0, p1) = load_paths(&kf()?)?;
            let out = PathSystem::parse(solution, &g)?;
            verify_paths(&g, &p0, &p1, &out)
        }
        VerifyKind::Sm => {
            let (m0, m1, j, names) = load_sm(&kf()?)?;
            let i = files::parse_solution_set(solution, &names)?;
            let mut v = Verdict::new();
            v.require("common-independent", m0.independent(&i) && m1.independent(&i), || {
                format!("{{{}}} is not independent in both matroids", names.format_set(&i))
            });
            if v.pass {
                v.merge(verify_sm(&m0, &m1, &j, &i, &names)?);
            }
            v
        }
        VerifyKind::Matching => {
            let (g, inst, names) = load_matching(&kf()?)?;
            let i = files::parse_solution_set(solution, &names)?;
            verify_matching(&g, &inst, &i, &names)
        }
    })
}

fn witness_lines(w: &SmWitness, names: &GroundSet) -> String {
    format!("I: {}\nE0: {}\nE1: {}\n", names.format_set(&w.set), names.format_set(&w.e0), names.format_set(&w.e1))
}
