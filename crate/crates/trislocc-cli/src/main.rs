use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use trislocc::hierarchy::{emit_graph, generic_chain, reach, reach_matrix, resource_report, ReachMatrix, ReachVerdict};
use trislocc::kcf::{assemble_kcf, equivalence_witness, kcf_reduce, KroneckerStructure};
use trislocc::pencil::{apply_bc, local_ranks, pencil_from_state, state_from_pencil};
use trislocc::slocc::{full_entanglement_check, generic_structure, slocc_equivalent, slocc_label};
use trislocc::transform::{verify_witness, SearchConfig, TransformWitness};
use trislocc::{Error, Pencil, StateTensor};

#[derive(Parser)]
#[command(name = "trislocc", version, about = "Kronecker forms and SLOCC reachability of 2 x m x n states")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// State, pencil or structure JSON. Repeat for commands taking two inputs; stdin if absent.
    #[arg(long, global = true)]
    input: Vec<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Cap on candidates examined by randomized searches.
    #[arg(long, global = true, default_value_t = 10_000)]
    budget: usize,

    #[arg(long, global = true)]
    m: Option<usize>,

    #[arg(long, global = true)]
    n: Option<usize>,
}

#[derive(Subcommand, Clone, Copy, PartialEq, Eq, Debug)]
enum Command {
    /// Kronecker canonical form of one input with the reducing operators.
    Kcf,
    /// SLOCC label of one state.
    Classify,
    /// Whether two states are SLOCC equivalent.
    Equiv,
    /// Reachability verdict from the first input to the second.
    Reach,
    /// The generic class of (m, n), or the chain of generic classes for m.
    Generic,
    /// Skeleton layers and verdicts between adjacent layers.
    Hierarchy,
    /// Common-resource report for 2 x m x m targets.
    Resource,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(String),
    Usage(String),
    /// A witness failed its own check. Should never happen.
    Unverified(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> &'static str {
        match self {
            Failure::Lib(e) => e.code(),
            Failure::Io(_) => "io_error",
            Failure::Usage(_) => "usage_error",
            Failure::Unverified(_) => "unverified_witness",
        }
    }

    fn exit(&self) -> u8 {
        match self {
            Failure::Lib(Error::NonSplitting(_)) => 2,
            Failure::Lib(Error::NotFullyEntangled { .. }) => 3,
            _ => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(s) | Failure::Usage(s) | Failure::Unverified(s) => s.clone(),
        }
    }
}

type Out = Result<String, Failure>;

/// Any of the three input encodings.
enum Input {
    State(StateTensor),
    Pencil(Pencil),
    Structure(KroneckerStructure),
}

impl Input {
    fn parse(text: &str) -> Result<Input, Failure> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let parse_err = |e: serde_json::Error| Failure::Lib(Error::Parse(e.to_string()));
        if v.get("amplitudes").is_some() {
            Ok(Input::State(serde_json::from_value(v).map_err(parse_err)?))
        } else if v.get("R").is_some() {
            Ok(Input::Pencil(serde_json::from_value(v).map_err(parse_err)?))
        } else if v.get("eps").is_some() {
            let mut ks: KroneckerStructure = serde_json::from_value(v).map_err(parse_err)?;
            ks.validate()?;
            ks.canonicalize();
            Ok(Input::Structure(ks))
        } else {
            Err(Error::Parse("expected a state (amplitudes), pencil (R, S) or structure (eps) object".into()).into())
        }
    }

    fn pencil(&self) -> Pencil {
        match self {
            Input::State(s) => pencil_from_state(s),
            Input::Pencil(p) => p.clone(),
            Input::Structure(ks) => assemble_kcf(ks),
        }
    }

    fn state(&self) -> StateTensor {
        match self {
            Input::State(s) => s.clone(),
            other => state_from_pencil(&other.pencil()),
        }
    }
}

fn read_inputs(paths: &[PathBuf], want: usize) -> Result<Vec<Input>, Failure> {
    let texts = if paths.is_empty() {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).map_err(|e| Failure::Io(e.to_string()))?;
        vec![buf]
    } else {
        paths
            .iter()
            .map(|p| std::fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))))
            .collect::<Result<Vec<_>, _>>()?
    };
    if texts.len() != want {
        return Err(Failure::Usage(format!("expected {want} --input file(s), got {}", texts.len())));
    }
    texts.iter().map(|t| Input::parse(t)).collect()
}

fn need(v: Option<usize>, flag: &str) -> Result<usize, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--{flag} is required")))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn no_dot(cmd: Command) -> Failure {
    Failure::Usage(format!("{cmd:?} has no dot output"))
}

fn run_kcf(cli: &Cli) -> Out {
    let input = read_inputs(&cli.input, 1)?.remove(0);
    let p = input.pencil();
    let red = kcf_reduce(&p)?;
    if apply_bc(&p, &red.b, &red.c)? != red.kcf {
        return Err(Failure::Unverified("kcf reduction does not reproduce the canonical form".into()));
    }
    match cli.format {
        Format::Json => Ok(to_json(&json!({
            "structure": red.structure,
            "blocks": red.structure.block_string(),
            "kcf": red.kcf,
            "B": red.b,
            "C": red.c,
        }))),
        Format::Text => Ok(format!("{}\n{}", red.structure.block_string(), red.kcf.pretty())),
        Format::Dot => Err(no_dot(Command::Kcf)),
    }
}

fn run_classify(cli: &Cli) -> Out {
    let s = read_inputs(&cli.input, 1)?.remove(0).state();
    let label = slocc_label(&s)?;
    match cli.format {
        Format::Json => {
            // The label normalizes eigenvalues; keep the ones of the input pencil alongside.
            let mut v = serde_json::to_value(&label).expect("serializable");
            v["kcf"] = serde_json::to_value(kcf_reduce(&pencil_from_state(&s))?.structure).expect("serializable");
            Ok(to_json(&v))
        }
        Format::Text => Ok(format!("2x{}x{}: {}", label.m, label.n, label.structure.block_string())),
        Format::Dot => Err(no_dot(Command::Classify)),
    }
}

fn run_equiv(cli: &Cli) -> Out {
    let inputs = read_inputs(&cli.input, 2)?;
    let eq = slocc_equivalent(&inputs[0].state(), &inputs[1].state())?;
    match cli.format {
        Format::Json => Ok(to_json(&json!({ "equivalent": eq }))),
        Format::Text => Ok(format!("equivalent: {eq}")),
        Format::Dot => Err(no_dot(Command::Equiv)),
    }
}

fn require_full(s: &StateTensor) -> Result<(), Failure> {
    if full_entanglement_check(s) {
        return Ok(());
    }
    Err(Error::NotFullyEntangled { ranks: local_ranks(s), m: s.m(), n: s.n() }.into())
}

/// Operators carrying `p` onto the canonical representative of its structure.
fn to_representative(p: &Pencil) -> Result<(KroneckerStructure, TransformWitness), Failure> {
    let red = kcf_reduce(p)?;
    let rep = assemble_kcf(&red.structure);
    let mut w = TransformWitness::from_bc(red.b, red.c);
    if red.kcf != rep {
        let (b, c) = equivalence_witness(&red.kcf, &rep)
            .ok_or_else(|| Failure::Unverified("canonical form differs from the representative".into()))?;
        w = w.then(&TransformWitness::from_bc(b, c));
    }
    Ok((red.structure, w))
}

fn invert(w: &TransformWitness) -> Option<TransformWitness> {
    Some(TransformWitness { a: w.a.inverse()?, b: w.b.inverse()?, c: w.c.inverse()? })
}

fn run_reach(cli: &Cli) -> Out {
    let inputs = read_inputs(&cli.input, 2)?;
    let (src, dst) = (inputs[0].state(), inputs[1].state());
    require_full(&src)?;
    require_full(&dst)?;
    let (src_ks, into_src) = to_representative(&pencil_from_state(&src))?;
    let (dst_ks, into_dst) = to_representative(&pencil_from_state(&dst))?;
    let verdict = reach(&src_ks, &dst_ks, SearchConfig { seed: cli.seed, budget: cli.budget });
    // Lift the representative-level witness to the given states.
    let lifted = match verdict.end_to_end() {
        Some(w) => {
            let back = invert(&into_dst).ok_or_else(|| Failure::Unverified("reduction is not invertible".into()))?;
            let full = into_src.then(&w).then(&back);
            if !verify_witness(&src, &full, &dst) {
                return Err(Failure::Unverified("reach witness failed verification".into()));
            }
            Some(full)
        }
        None => None,
    };
    match cli.format {
        Format::Json => {
            let mut v = serde_json::to_value(&verdict).expect("serializable");
            v["src"] = json!(src_ks.block_string());
            v["dst"] = json!(dst_ks.block_string());
            v["witness"] = serde_json::to_value(&lifted).expect("serializable");
            Ok(to_json(&v))
        }
        Format::Text => Ok(verdict_line(&src_ks.block_string(), &dst_ks.block_string(), &verdict)),
        Format::Dot => Err(no_dot(Command::Reach)),
    }
}

fn verdict_line(src: &str, dst: &str, v: &ReachVerdict) -> String {
    match v {
        ReachVerdict::Yes { method, .. } => format!("{src} -> {dst}: yes ({method})"),
        ReachVerdict::No(ob) => format!("{src} -> {dst}: no ({}; {})", ob.id.as_str(), ob.evidence),
        ReachVerdict::Unknown { note } => format!("{src} -> {dst}: unknown ({note})"),
    }
}

fn render_matrix(rm: &ReachMatrix, format: Format) -> String {
    match format {
        Format::Json => to_json(rm),
        Format::Dot => emit_graph(rm),
        Format::Text => {
            let mut lines = Vec::new();
            for ((m, n), sk) in &rm.layers {
                let names: Vec<String> = sk.iter().map(|s| s.name()).collect();
                lines.push(format!("2x{m}x{n} [{}]: {}", names.len(), names.join(", ")));
            }
            lines.extend(rm.edges.iter().map(|e| verdict_line(&e.src, &e.dst, &e.verdict)));
            lines.join("\n")
        }
    }
}

fn run_generic(cli: &Cli) -> Out {
    let m = need(cli.m, "m")?;
    let cfg = SearchConfig { seed: cli.seed, budget: cli.budget };
    match cli.n {
        Some(n) => {
            let ks = generic_structure(m, n)?;
            match cli.format {
                Format::Json => Ok(to_json(&ks)),
                Format::Text => Ok(ks.block_string()),
                Format::Dot => Err(no_dot(Command::Generic)),
            }
        }
        None => {
            let rm = generic_chain(m, cfg)?;
            for (e, (_, dst)) in rm.edges.iter().zip(rm.layers.iter().skip(1)) {
                let src_ks = generic_structure(m, dst[0].n + 1)?;
                if e.verdict.is_yes() && !trislocc::hierarchy::verify_verdict(&e.verdict, &src_ks, &dst[0].instantiate()) {
                    return Err(Failure::Unverified(format!("{} -> {} failed verification", e.src, e.dst)));
                }
            }
            Ok(render_matrix(&rm, cli.format))
        }
    }
}

fn run_hierarchy(cli: &Cli) -> Out {
    let m = need(cli.m, "m")?;
    let dims: Vec<(usize, usize)> = match cli.n {
        Some(n) if n > m => vec![(m, n), (m, n - 1)],
        Some(n) => vec![(m, n)],
        None => (m..=2 * m).rev().map(|n| (m, n)).collect(),
    };
    let rm = reach_matrix(&dims, SearchConfig { seed: cli.seed, budget: cli.budget })?;
    let layer = |name: &str| {
        rm.layers.iter().flat_map(|(_, sk)| sk).find(|s| s.name() == name).map(|s| s.instantiate())
    };
    for e in &rm.edges {
        if let (true, Some(a), Some(b)) = (e.verdict.is_yes(), layer(&e.src), layer(&e.dst)) {
            if !trislocc::hierarchy::verify_verdict(&e.verdict, &a, &b) {
                return Err(Failure::Unverified(format!("{} -> {} failed verification", e.src, e.dst)));
            }
        }
    }
    Ok(render_matrix(&rm, cli.format))
}

fn run_resource(cli: &Cli) -> Out {
    let m = need(cli.m, "m")?;
    let r = resource_report(m, SearchConfig { seed: cli.seed, budget: cli.budget })?;
    if let Some(c) = r.coverage.iter().chain(&r.teleportation).find(|c| c.verdict.is_yes() && !c.verified) {
        return Err(Failure::Unverified(format!("{} -> {} failed verification", c.src, c.dst)));
    }
    match cli.format {
        Format::Json => Ok(to_json(&r)),
        Format::Text => {
            let mut lines = vec![
                format!("resource {} (2x{}x{})", r.resource, r.resource_dims.0, r.resource_dims.1),
                format!("coverage: {}/{} reached", r.covered(), r.coverage.len()),
            ];
            lines.extend(r.coverage.iter().map(|c| format!("  {}", verdict_line(&c.src, &c.dst, &c.verdict))));
            if let Some(refused) = r.exception_refused {
                lines.push(format!("all-equal eigenvalue target refused by block construction: {refused}"));
            }
            let elim = |rows: &[trislocc::hierarchy::EliminationRow]| rows.iter().filter(|r| r.eliminated).count();
            lines.push(format!(
                "width {} candidates eliminated: {}/{}",
                2 * m - 3,
                elim(&r.narrow_candidates),
                r.narrow_candidates.len()
            ));
            lines.push(format!(
                "width {} candidates eliminated: {}/{}",
                2 * m - 1,
                elim(&r.wide_candidates),
                r.wide_candidates.len()
            ));
            let tele = r.teleportation.iter().filter(|c| c.verified).count();
            lines.push(format!("{m}L1 coverage: {tele}/{}", r.teleportation.len()));
            Ok(lines.join("\n"))
        }
        Format::Dot => Err(no_dot(Command::Resource)),
    }
}

fn run(cli: &Cli) -> Out {
    match cli.command {
        Command::Kcf => run_kcf(cli),
        Command::Classify => run_classify(cli),
        Command::Equiv => run_equiv(cli),
        Command::Reach => run_reach(cli),
        Command::Generic => run_generic(cli),
        Command::Hierarchy => run_hierarchy(cli),
        Command::Resource => run_resource(cli),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            // A closed pipe downstream is not an error of ours.
            let _ = writeln!(std::io::stdout().lock(), "{}", out.trim_end());
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", json!({ "error": f.code(), "message": f.message() }));
            ExitCode::from(f.exit())
        }
    }
}
