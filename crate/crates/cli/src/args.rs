use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rbsys::cohomology::{ComplexTag, DEFAULT_CAP};

/// Exact computations for finite-dimensional Rota-Baxter systems.
///
/// Exit status: 0 when every check passes, 1 when a mathematical check fails
/// (a witness is printed), 2 on unreadable or ill-shaped input or when a
/// size cap is hit.
#[derive(Debug, Parser)]
#[command(name = "rbsys", version)]
pub struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Highest cochain degree for cohomology, les and rba-embed.
    #[arg(long, global = true, default_value_t = 3)]
    pub max_degree: usize,

    /// Largest differential slice (rows or columns) that may be built.
    #[arg(long, global = true, env = "RBS_DIM_CAP", default_value_t = DEFAULT_CAP)]
    pub cap: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every axiom of each document; dependent documents are matched by hash to systems and bimodules given alongside them.
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// The ⋆-algebra a⋆b = R(a)b + aS(b), with R and S kept when they commute.
    Star {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The semidirect product system on A ⊕ M.
    Semidirect {
        #[command(flatten)]
        input: ModuleInput,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dimensions of cochains, ranks and cohomology in degrees 0..=max-degree.
    Cohomology {
        #[command(flatten)]
        input: ModuleInput,
        #[arg(long, value_enum, default_value_t = What::Rbs)]
        what: What,
    },
    /// Exactness of the long exact sequence HH -> H_RBS -> H_RBSO -> HH.
    Les {
        #[command(flatten)]
        input: ModuleInput,
    },
    /// Embedding of the Hochschild complex of (A, R + λ) into the system complex, for R of weight λ.
    /// Uses the multiplication and R of the system file; S is ignored.
    RbaEmbed {
        #[arg(long)]
        system: PathBuf,
        /// The weight λ, e.g. 0, 1 or "-1/2".
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
    },
    #[command(subcommand)]
    Deform(DeformCommand),
    #[command(subcommand)]
    Extend(ExtendCommand),
}

/// A system plus an optional bimodule; the regular bimodule is the default.
#[derive(Debug, Args)]
pub struct ModuleInput {
    #[arg(long)]
    pub system: PathBuf,
    /// Bimodule document; omitted means A over itself with R_M = R, S_M = S.
    #[arg(long)]
    pub module: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum What {
    Alg,
    Rbso,
    Rbs,
}

impl From<What> for ComplexTag {
    fn from(w: What) -> ComplexTag {
        match w {
            What::Alg => ComplexTag::Alg,
            What::Rbso => ComplexTag::Rbso,
            What::Rbs => ComplexTag::Rbs,
        }
    }
}

#[derive(Debug, Args)]
pub struct DeformInput {
    #[arg(long)]
    pub system: PathBuf,
    #[arg(long)]
    pub deformation: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum DeformCommand {
    /// Residuals of the associativity and operator equations at each order.
    Verify {
        #[command(flatten)]
        input: DeformInput,
    },
    /// The order-one coefficient as a 2-cochain of the regular bimodule, and its cocycle test.
    Infinitesimal {
        #[command(flatten)]
        input: DeformInput,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gauge the deformation to the constant one order by order.
    Rigidify {
        #[command(flatten)]
        input: DeformInput,
        /// Where to write the gauge on success.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a deformation of the operators only, and test its infinitesimal.
    OpVerify {
        #[command(flatten)]
        input: DeformInput,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExtendCommand {
    /// The extension A ⊕ M twisted by a 2-cocycle.
    Build {
        #[command(flatten)]
        input: ModuleInput,
        #[arg(long)]
        cocycle: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cocycle (and induced bimodule) of an extension through its section, or through a computed one.
    Extract {
        #[arg(long)]
        extension: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the induced bimodule.
        #[arg(long)]
        module_out: Option<PathBuf>,
    },
    /// The zero class and one extension per basis class of H²_RBS (finite fields only).
    Census {
        #[command(flatten)]
        input: ModuleInput,
        /// Directory receiving class-K.cocycle.json and class-K.extension.json.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Check that a given map is an isomorphism of extensions.
    CheckIso {
        #[arg(long)]
        first: PathBuf,
        #[arg(long)]
        second: PathBuf,
        /// Map document holding ζ from the first total space to the second.
        #[arg(long)]
        zeta: PathBuf,
    },
}
