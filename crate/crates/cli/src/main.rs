use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use vck::oracle::{exact_mis_weighted, fpt_mis};
use vck::{
    conflict_profile, cross_compose, emit_instance, emit_solution, enumerate_chunks, generate, kernelize, lift_is,
    lift_vc, pack_forest, parse_instance, parse_instance_with, parse_solution, parse_trace, perfect_matching_forest,
    serialize_trace, subdivide_to_p2split, to_is, to_vc, Error, GenConfig, Instance, KernelOptions, P2SplitInstance,
    ParseOptions, Problem, Solution, Vertex,
};

#[derive(Parser)]
#[command(name = "vck", version, about = "Vertex cover kernelization parameterized by a feedback vertex set")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce an instance to an equivalent kernel and write the trace.
    Kernelize(KernelizeArgs),
    /// Generate a random instance with a planted feedback vertex set.
    Gen(GenArgs),
    /// Check solutions against instances, given as INSTANCE SOLUTION pairs.
    Verify(VerifyArgs),
    /// Pack conflict structures into the forest of an instance.
    Pack(PackArgs),
    /// Compose P2-split instances into one weighted instance.
    Compose(ComposeArgs),
    /// Solve an instance exactly.
    Solve(SolveArgs),
    /// Lift a kernel solution back to the original instance.
    Lift(LiftArgs),
    /// Print structural statistics of an instance.
    Stats(StatsArgs),
}

#[derive(Args)]
struct InputArgs {
    input: PathBuf,
    /// Compute a feedback vertex set when the file has no `x` lines.
    #[arg(long)]
    auto_fvs: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    Is,
    Vc,
}

impl From<Form> for Problem {
    fn from(f: Form) -> Self {
        match f {
            Form::Is => Problem::IndependentSet,
            Form::Vc => Problem::VertexCover,
        }
    }
}

#[derive(Args)]
struct KernelizeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Form of the emitted kernel; defaults to the input's.
    #[arg(long, value_enum)]
    problem: Option<Form>,
    /// Skip the rules when the cleaned graph has at most |X|³ vertices.
    #[arg(long)]
    fast: bool,
    /// Never replace the kernel by a constant instance; needed for lifting.
    #[arg(long)]
    no_shortcut: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    /// Size of the planted feedback vertex set.
    #[arg(long, default_value_t = 4)]
    fvs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.9)]
    join: f64,
    #[arg(long, default_value_t = 4)]
    x_degree: usize,
    #[arg(long, default_value_t = 0.5)]
    x_density: f64,
    /// Vertex cover target; defaults to a feasible one.
    #[arg(long)]
    target: Option<i64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(required = true, num_args = 2..)]
    files: Vec<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct PackArgs {
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Args)]
struct ComposeArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Treat inputs as plain independent set instances and subdivide them.
    #[arg(long)]
    subdivide: bool,
    #[arg(long, value_enum, default_value = "is")]
    problem: Form,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Oracle,
    Fpt,
    KernelThenFpt,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "fpt")]
    method: Method,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LiftArgs {
    #[arg(long)]
    trace: PathBuf,
    #[arg(long)]
    kernel: PathBuf,
    #[arg(long)]
    solution: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Debug)]
enum Failure {
    Io(PathBuf, std::io::Error),
    Core(Error),
    /// A well-formed answer of NO, or a rejected solution.
    No(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::No(_) => 1,
            Failure::Io(..) => 3,
            Failure::Core(Error::Infeasible(_)) => 1,
            Failure::Core(Error::Invariant(_) | Error::MatchingNotMaximum) => 4,
            Failure::Core(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Io(p, e) => write!(f, "{}: {e}", p.display()),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::No(msg) => write!(f, "{msg}"),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(p.to_path_buf(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(args: &InputArgs) -> Result<Instance, Failure> {
    let text = read(&args.input)?;
    Ok(parse_instance_with(&text, ParseOptions { auto_fvs: args.auto_fvs })?)
}

fn kernelize_cmd(a: KernelizeArgs) -> Outcome {
    let inst = load(&a.input)?;
    let opts = KernelOptions { shortcut: !a.no_shortcut, fast: a.fast, output: a.problem.map(Into::into) };
    let k = kernelize(&inst, opts)?;
    let s = &k.summary;
    let constant_no = k.trace.trivial == Some(false);
    if !constant_no && s.n_out as u128 > s.bound {
        return Err(Error::Invariant(format!("kernel has {} vertices, above the bound {}", s.n_out, s.bound)).into());
    }
    let k_vc = to_vc(&inst).target;
    if opts.shortcut && !constant_no && s.n_out as i64 > 2 * k_vc {
        return Err(Error::Invariant(format!("kernel has {} vertices, above 2k = {}", s.n_out, 2 * k_vc)).into());
    }
    if let Some(t) = &a.trace {
        std::fs::write(t, serialize_trace(&k.trace)).map_err(|e| Failure::Io(t.clone(), e))?;
    }
    let text = emit_instance(&k.instance);
    match &a.out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Failure::Io(p.clone(), e))?;
            println!("{s}");
        }
        None => {
            print!("{text}");
            eprintln!("{s}");
        }
    }
    Ok(())
}

fn gen_cmd(a: GenArgs) -> Outcome {
    let cfg = GenConfig {
        n: a.n,
        planted_fvs: a.fvs,
        join: a.join,
        x_degree: a.x_degree,
        x_density: a.x_density,
        target: a.target,
        seed: a.seed,
    };
    let inst = generate(&cfg)?;
    write_or_print(a.out.as_deref(), &emit_instance(&inst))
}

/// `Ok(())` if the solution is feasible and meets the target.
fn check(inst: &Instance, sol: &Solution) -> Result<(), String> {
    let g = &inst.graph;
    if let Some(&v) = sol.vertices.iter().find(|&&v| !g.contains(v)) {
        return Err(format!("vertex {} is not in the graph", v + 1));
    }
    let mut set = sol.vertices.clone();
    set.sort_unstable();
    if set.windows(2).any(|w| w[0] == w[1]) {
        return Err("solution repeats a vertex".into());
    }
    let weight = inst.set_weight(&set);
    if weight != sol.value {
        return Err(format!("declared value {} but the vertices weigh {weight}", sol.value));
    }
    match inst.problem {
        Problem::VertexCover => {
            if let Some((u, v)) = g.uncovered_edge(&set) {
                return Err(format!("edge {} {} is not covered", u + 1, v + 1));
            }
            if weight as i64 > inst.target {
                return Err(format!("cover weight {weight} exceeds the target {}", inst.target));
            }
        }
        Problem::IndependentSet => {
            if let Some((u, v)) = g.independence_violation(&set) {
                return Err(format!("vertices {} and {} are adjacent", u + 1, v + 1));
            }
            if (weight as i64) < inst.target {
                return Err(format!("set weight {weight} is below the target {}", inst.target));
            }
        }
    }
    Ok(())
}

fn verify_pair(inst: &Path, sol: &Path) -> Result<Result<(), String>, Failure> {
    let instance = parse_instance_with(&read(inst)?, ParseOptions { auto_fvs: true })?;
    let solution = parse_solution(&read(sol)?)?;
    Ok(check(&instance, &solution))
}

fn verify_cmd(a: VerifyArgs) -> Outcome {
    if a.files.len() % 2 == 1 {
        return Err(Error::Validation("verify takes INSTANCE SOLUTION pairs".into()).into());
    }
    let pairs: Vec<(&PathBuf, &PathBuf)> = a.files.chunks(2).map(|c| (&c[0], &c[1])).collect();
    let jobs = a.jobs.max(1).min(pairs.len());
    let mut results: Vec<Option<Result<Result<(), String>, Failure>>> = (0..pairs.len()).map(|_| None).collect();
    let per = pairs.len().div_ceil(jobs);
    std::thread::scope(|scope| {
        for (slots, work) in results.chunks_mut(per).zip(pairs.chunks(per)) {
            scope.spawn(move || {
                for (slot, (i, s)) in slots.iter_mut().zip(work) {
                    *slot = Some(verify_pair(i, s));
                }
            });
        }
    });
    let mut failed = 0;
    for ((inst, _), r) in pairs.iter().zip(results) {
        match r.expect("every pair is checked") {
            Ok(Ok(())) => println!("OK {}", inst.display()),
            Ok(Err(why)) => {
                failed += 1;
                println!("FAIL {}: {why}", inst.display());
            }
            Err(e) => return Err(e),
        }
    }
    if failed > 0 {
        return Err(Failure::No(format!("{failed} of {} solutions rejected", pairs.len())));
    }
    Ok(())
}

fn pack_cmd(a: PackArgs) -> Outcome {
    let inst = load(&a.input)?;
    let f = inst.graph.delete_vertices(&inst.fvs)?;
    let m = perfect_matching_forest(&f)?.ok_or(Error::NotClean)?;
    let (structures, ledgers) = pack_forest(&f, &m)?;
    let mut out = String::new();
    for s in &structures {
        writeln!(out, "S {s}").unwrap();
    }
    for (tree, ledger) in ledgers.iter().enumerate() {
        for step in &ledger.steps {
            writeln!(out, "L {} {step}", tree + 1).unwrap();
        }
    }
    writeln!(out, "c {} structures in a forest of {} vertices", structures.len(), f.num_vertices()).unwrap();
    print!("{out}");
    Ok(())
}

fn compose_cmd(a: ComposeArgs) -> Outcome {
    let mut parts = Vec::with_capacity(a.inputs.len());
    for path in &a.inputs {
        let text = read(path)?;
        let part = if a.subdivide {
            let inst = to_is(&parse_instance_with(&text, ParseOptions { auto_fvs: true })?);
            if !inst.is_unweighted() {
                return Err(Error::Validation(format!("{}: weighted input", path.display())).into());
            }
            subdivide_to_p2split(&inst.graph.compact().0, inst.target)
        } else {
            P2SplitInstance::from_instance(&parse_instance(&text)?)?
        };
        parts.push(part);
    }
    let c = cross_compose(&parts)?;
    let inst = match a.problem {
        Form::Is => c.instance.clone(),
        Form::Vc => to_vc(&c.instance),
    };
    let header = format!(
        "c composite of {} inputs in {} slots; slot i uses selector s_j^(bit j of i), least significant bit first\n",
        c.inputs,
        c.slots()
    );
    write_or_print(a.out.as_deref(), &(header + &emit_instance(&inst)))
}

/// An optimal independent set of `inst` (in independent set form).
fn optimum(inst: &Instance, method: Method) -> Result<Vec<Vertex>, Failure> {
    match method {
        Method::Oracle => {
            let (compact, map) = inst.compacted();
            let w = compact.weights.clone().unwrap_or_else(|| vec![1; compact.graph.capacity()]);
            let (_, set) = exact_mis_weighted(&compact.graph, &w)?;
            Ok(set.into_iter().map(|v| map[v]).collect())
        }
        Method::Fpt => {
            if !inst.is_unweighted() {
                return Err(Error::Validation("the fpt method needs unit weights".into()).into());
            }
            Ok(fpt_mis(&inst.graph, &inst.fvs)?)
        }
        Method::KernelThenFpt => {
            let k =
                kernelize(inst, KernelOptions { output: Some(Problem::IndependentSet), ..KernelOptions::lifting() })?;
            let kernel_set = fpt_mis(&k.instance.graph, &k.instance.fvs)?;
            Ok(lift_is(&k.trace, &k.instance.graph, &kernel_set)?)
        }
    }
}

fn solve_cmd(a: SolveArgs) -> Outcome {
    let inst = load(&a.input)?;
    let is = to_is(&inst);
    let mut set = optimum(&is, a.method)?;
    if inst.problem == Problem::VertexCover {
        let mut inside = vec![false; inst.graph.capacity()];
        for &v in &set {
            inside[v] = true;
        }
        set = inst.graph.vertices().filter(|&v| !inside[v]).collect();
    }
    set.sort_unstable();
    let sol = Solution { value: inst.set_weight(&set), vertices: set };
    write_or_print(a.out.as_deref(), &emit_solution(&sol))?;
    check(&inst, &sol).map_err(|why| Failure::No(format!("NO: {why}")))
}

fn lift_cmd(a: LiftArgs) -> Outcome {
    let trace = parse_trace(&read(&a.trace)?)?;
    let kernel = parse_instance(&read(&a.kernel)?)?;
    let sol = parse_solution(&read(&a.solution)?)?;
    if kernel.problem != trace.kernel_problem {
        return Err(Error::Validation("kernel file and trace disagree on the problem".into()).into());
    }
    let lifted = match kernel.problem {
        Problem::IndependentSet => lift_is(&trace, &kernel.graph, &sol.vertices)?,
        Problem::VertexCover => lift_vc(&trace, &kernel.graph, &sol.vertices)?,
    };
    let set = if kernel.problem == trace.problem {
        lifted
    } else {
        let mut inside = vec![false; trace.n];
        for &v in &lifted {
            inside[v] = true;
        }
        (0..trace.n).filter(|&v| !inside[v]).collect()
    };
    let sol = Solution { value: set.len() as u64, vertices: set };
    write_or_print(a.out.as_deref(), &emit_solution(&sol))
}

fn stats_cmd(a: StatsArgs) -> Outcome {
    let inst = load(&a.input)?;
    let g = &inst.graph;
    let x = inst.fvs.len();
    let profile = conflict_profile(g, &inst.fvs)?;
    let active: usize = profile.iter().map(|t| t.conflicts).sum();
    let mut out = String::new();
    writeln!(out, "n {}", g.num_vertices()).unwrap();
    writeln!(out, "m {}", g.num_edges()).unwrap();
    writeln!(out, "x {x}").unwrap();
    writeln!(out, "chunks {}", enumerate_chunks(g, &inst.fvs).len()).unwrap();
    writeln!(out, "active {active}").unwrap();
    writeln!(out, "ceiling {}", x * x + x * x.saturating_sub(1) / 2 * x).unwrap();
    writeln!(out, "trees {}", profile.len()).unwrap();
    for t in profile.iter().filter(|t| t.conflicts > 0) {
        writeln!(out, "tree {} {} {}", t.min_vertex + 1, t.size, t.conflicts).unwrap();
    }
    print!("{out}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Kernelize(a) => kernelize_cmd(a),
        Command::Gen(a) => gen_cmd(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Pack(a) => pack_cmd(a),
        Command::Compose(a) => compose_cmd(a),
        Command::Solve(a) => solve_cmd(a),
        Command::Lift(a) => lift_cmd(a),
        Command::Stats(a) => stats_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("vck: {e}");
            ExitCode::from(e.code())
        }
    }
}
