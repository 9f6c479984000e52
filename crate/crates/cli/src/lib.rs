//! The `awfslab` command line: every library operation on JSON instance
//! files, with canonical JSON reports and fixed exit codes
//! (0 pass, 1 fail with witness, 2 input error, 3 budget exhausted).

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

mod basic;
mod catgph;
mod corpus;
mod input;
mod jfib;
pub mod report;

pub use report::{Outcome, Status};

#[derive(Parser, Debug)]
#[command(name = "awfslab", version, about = "Lifting problems, algebraic fibrancy and the Cat/Gph adjunction on finite instances")]
pub struct Cli {
    /// Seed for randomised instances.
    #[arg(long, global = true, env = "AWFSLAB_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum ChoiceArg {
    #[default]
    First,
    Last,
}

impl From<ChoiceArg> for awfslab::lifting::Choice {
    fn from(c: ChoiceArg) -> Self {
        match c {
            ChoiceArg::First => awfslab::lifting::Choice::First,
            ChoiceArg::Last => awfslab::lifting::Choice::Last,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check an instance file: object, map, square, chosen-extension structure or lifting function.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Find a diagonal filler of a commuting square.
    Lift {
        #[arg(long)]
        square: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        choice: ChoiceArg,
    },
    /// Right lifting property of a map against generators; graph maps default to all monos within the probe bounds.
    Rlp {
        #[arg(long)]
        map: PathBuf,
        /// A generator file or one of: point, point_edge, cat, horns, boundaries.
        #[arg(long)]
        against: Option<String>,
        #[arg(long, default_value_t = 3)]
        probe_nodes: usize,
        #[arg(long, default_value_t = 3)]
        probe_edges: usize,
    },
    /// Small object argument factorisation of a map.
    Factorize(FactorizeArgs),
    /// Algebraically fibrant objects.
    Jfib {
        #[command(subcommand)]
        cmd: JfibCommand,
    },
    /// Categories, graphs and the free-category comonad.
    Catgph {
        #[command(subcommand)]
        cmd: CatgphCommand,
    },
    /// Run every command of a manifest and aggregate the results.
    Corpus {
        #[arg(long)]
        manifest: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct FactorizeArgs {
    #[arg(long)]
    pub map: PathBuf,
    /// A generator file or one of: point, point_edge, horns, boundaries.
    #[arg(long)]
    pub gens: String,
    #[arg(long, default_value_t = 5)]
    pub max_rounds: usize,
    /// Record existing fillers instead of attaching a cell for every problem.
    #[arg(long)]
    pub reuse_existing: bool,
    #[arg(long, value_enum, default_value_t)]
    pub choice: ChoiceArg,
    #[arg(long, default_value_t = 200_000)]
    pub problem_limit: usize,
    /// Include the full lifting-function table of the right factor.
    #[arg(long)]
    pub structure: bool,
}

#[derive(Subcommand, Debug)]
pub enum JfibCommand {
    /// Totality and correctness of a chosen-extension structure.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Whether a map preserves chosen extensions.
    Morphism {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
    },
    /// Extend structures along a mono `i: X -> Z` followed by a fibration `q: Z -> Y`.
    Extend {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long)]
        i: PathBuf,
        #[arg(long)]
        q: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        choice: ChoiceArg,
    },
    /// Fibrant replacement of an object by the small object argument.
    Replace {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        gens: String,
        #[arg(long, default_value_t = 5)]
        max_rounds: usize,
        /// Attach a cell for every problem, even solvable ones.
        #[arg(long)]
        free: bool,
    },
}

#[derive(Args, Debug, Clone, Copy)]
pub struct BoundsArgs {
    #[arg(long)]
    pub max_objects: Option<usize>,
    #[arg(long)]
    pub max_morphisms: Option<usize>,
    /// Non-identity endomorphisms per object.
    #[arg(long)]
    pub max_endo: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum CatgphCommand {
    /// Counit and coassociativity laws of the free-category comonad.
    ComonadLaws {
        #[arg(long, required_unless_present = "corpus", conflicts_with = "corpus")]
        cat: Option<PathBuf>,
        /// Sweep the generated corpus and seeded random categories.
        #[arg(long)]
        corpus: bool,
        #[command(flatten)]
        bounds: BoundsArgs,
        #[arg(long, default_value_t = 100)]
        random: usize,
        /// Also check that every perturbed comultiplication or counit is caught.
        #[arg(long)]
        mutations: bool,
        #[arg(long, default_value_t = 3)]
        max_nesting: usize,
    },
    /// The codiagonal of graphs: trivial fibration, not a weak equivalence.
    Counterexample {
        #[arg(long, default_value_t = 4)]
        probe_nodes: usize,
        #[arg(long, default_value_t = 4)]
        probe_edges: usize,
    },
    /// Lifting structures against the generating cofibrations versus sections of the underlying graph map.
    RmapIffSection {
        #[arg(long, required_unless_present = "corpus", conflicts_with = "corpus")]
        functor: Option<PathBuf>,
        #[arg(long)]
        corpus: bool,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    /// The mediating functor out of the free R-map, with a uniqueness count.
    FreeRmap {
        #[arg(long, requires = "rstruct", conflicts_with_all = ["corpus", "guard"])]
        g: Option<PathBuf>,
        #[arg(long, requires = "g")]
        rstruct: Option<PathBuf>,
        #[arg(long, conflicts_with = "guard")]
        corpus: bool,
        /// The two-lift instance where only the lifting condition singles out the mediator.
        #[arg(long)]
        guard: bool,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    /// Images of graph monos under the free category against trivial fibrations.
    FCofProbe {
        #[arg(long, default_value_t = 2)]
        probe_nodes: usize,
        #[arg(long, default_value_t = 2)]
        probe_edges: usize,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    /// Full and surjective on objects versus lifting against the generating cofibrations.
    TfibCheck {
        #[arg(long, required_unless_present = "corpus", conflicts_with = "corpus")]
        functor: Option<PathBuf>,
        #[arg(long)]
        corpus: bool,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
}

/// Where relative paths are resolved and which seed to use.
#[derive(Clone, Debug)]
pub struct Ctx {
    pub base: PathBuf,
    pub seed: u64,
}

impl Ctx {
    pub fn path(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }
}

fn dispatch(cli: &Cli, ctx: &Ctx) -> report::CmdResult {
    match &cli.command {
        Command::Validate { input } => basic::validate(ctx, input),
        Command::Lift { square, choice } => basic::lift(ctx, square, (*choice).into()),
        Command::Rlp {
            map,
            against,
            probe_nodes,
            probe_edges,
        } => basic::rlp(ctx, map, against.as_deref(), *probe_nodes, *probe_edges),
        Command::Factorize(a) => basic::factorize(ctx, a),
        Command::Jfib { cmd } => jfib::run(ctx, cmd),
        Command::Catgph { cmd } => catgph::run(ctx, cmd),
        Command::Corpus { manifest } => corpus::run(ctx, manifest),
    }
}

/// Parses `args` (without the program name) and runs the command with
/// relative paths resolved against `base`.
pub fn run_in(base: &Path, args: &[String]) -> Outcome {
    let argv = std::iter::once("awfslab".to_string()).chain(args.iter().cloned());
    match Cli::try_parse_from(argv) {
        Ok(cli) => {
            let ctx = Ctx {
                base: base.to_path_buf(),
                seed: cli.seed,
            };
            Outcome::new(args, dispatch(&cli, &ctx))
        }
        Err(e) => Outcome::new(args, Err(report::CliError::input("usage", e.to_string().lines().next().unwrap_or("").to_string()))),
    }
}

/// Runs with paths relative to the working directory.
pub fn run(args: &[String]) -> Outcome {
    run_in(Path::new(""), args)
}
