//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a checked property fails (an
//! inconsistent structure, a failed union identity, or an empty baseline),
//! 2 on usage or parse errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ratsolve::bne::{enumerate_pure_bne, DEFAULT_BNE_CAP};
use ratsolve::format::{parse_generator, parse_input, write_input, InputFile};
use ratsolve::game::{BeliefRestriction, InformationStructure};
use ratsolve::oracle::{
    random_environment, random_structure, sample_structures_for_check, GeneratorSpec,
};
use ratsolve::report::{
    render_bne, render_bne_union, render_consistency, render_solve, render_union,
};
use ratsolve::robust::{canonical_structure, check_bne_union, check_union, is_consistent};
use ratsolve::solver::{solve_bfr, solve_delta_r, solve_icr};

#[derive(Parser)]
#[command(
    name = "ratsolve",
    version,
    about = "Exact rationalizability and equilibrium solver for two-player incomplete-information games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Concept {
    /// Belief-free rationalizability.
    Bfr,
    /// Rationalizability under the instance's belief restriction.
    Dr,
    /// Interim correlated rationalizability on the instance's structure.
    Icr,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenWhat {
    /// An environment alone.
    Env,
    /// An environment with a random information structure.
    Structure,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a rationalizability correspondence for an instance file.
    Solve {
        #[arg(value_enum)]
        concept: Concept,
        file: PathBuf,
        /// Print the per-round elimination trace.
        #[arg(long)]
        trace: bool,
        /// Print one justifying conjecture per surviving action.
        #[arg(long)]
        witnesses: bool,
    },
    /// Enumerate pure equilibria of the instance's Bayesian game.
    Bne {
        file: PathBuf,
        /// Stop after examining this many profile pairs.
        #[arg(long, default_value_t = DEFAULT_BNE_CAP)]
        cap: u64,
    },
    /// Check the instance's structure against its belief restriction.
    Consistent { file: PathBuf },
    /// Emit the canonical structure of the restricted solve as an
    /// instance file.
    Canonical { file: PathBuf },
    /// Verify a union identity by sampling information structures.
    Check {
        #[command(subcommand)]
        identity: Identity,
    },
    /// Generate a random instance file.
    Gen {
        #[arg(value_enum)]
        what: GenWhat,
        /// Generator spec file; built-in defaults when omitted.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum Identity {
    /// Interim sets across sampled structures against the baseline.
    Union {
        file: PathBuf,
        /// Number of structures to sample beside the canonical one.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Equilibrium-played actions across sampled structures against the
    /// baseline.
    BneUnion {
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Stop each enumeration after this many profile pairs.
        #[arg(long, default_value_t = DEFAULT_BNE_CAP)]
        cap: u64,
    },
}

fn load(path: &Path) -> Result<InputFile, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    parse_input(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn require_structure<'a>(
    input: &'a InputFile,
    path: &Path,
) -> Result<&'a InformationStructure, String> {
    input
        .structure
        .as_ref()
        .ok_or_else(|| format!("{}: instance has no [structure] section", path.display()))
}

fn restriction_or_default(input: &InputFile) -> BeliefRestriction {
    input
        .restriction
        .clone()
        .unwrap_or_else(|| BeliefRestriction::unrestricted(&input.env))
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Solve { concept, file, trace, witnesses } => {
            let input = load(&file)?;
            let (result, structure) = match concept {
                Concept::Bfr => (solve_bfr(&input.env), None),
                Concept::Dr => {
                    let restriction = restriction_or_default(&input);
                    (solve_delta_r(&input.env, &restriction), None)
                }
                Concept::Icr => {
                    let structure = require_structure(&input, &file)?;
                    (solve_icr(&input.env, structure), Some(structure))
                }
            };
            print!("{}", render_solve(&input.env, structure, &result, trace, witnesses));
            Ok(0)
        }
        Command::Bne { file, cap } => {
            let input = load(&file)?;
            let structure = require_structure(&input, &file)?;
            let result = enumerate_pure_bne(&input.env, structure, cap);
            print!("{}", render_bne(&input.env, structure, &result));
            Ok(0)
        }
        Command::Consistent { file } => {
            let input = load(&file)?;
            let structure = require_structure(&input, &file)?;
            let restriction = restriction_or_default(&input);
            let report = is_consistent(&input.env, &restriction, structure);
            print!("{}", render_consistency(&input.env, structure, &report));
            Ok(if report.consistent() { 0 } else { 1 })
        }
        Command::Canonical { file } => {
            let input = load(&file)?;
            let restriction = restriction_or_default(&input);
            let baseline = solve_delta_r(&input.env, &restriction);
            let canonical = canonical_structure(&input.env, &baseline)
                .map_err(|e| format!("{}: {e}", file.display()))?;
            let output = InputFile {
                env: input.env,
                restriction: input.restriction,
                structure: Some(canonical),
            };
            print!("{}", write_input(&output));
            Ok(0)
        }
        Command::Check { identity } => match identity {
            Identity::Union { file, samples, seed } => {
                let input = load(&file)?;
                let restriction = restriction_or_default(&input);
                let extra = sample_structures_for_check(
                    &input.env,
                    input.restriction.as_ref(),
                    samples,
                    seed,
                );
                let report = check_union(&input.env, &restriction, &extra)
                    .map_err(|e| format!("{}: {e}", file.display()))?;
                print!("{}", render_union(&input.env, &report, samples));
                Ok(if report.equal() { 0 } else { 1 })
            }
            Identity::BneUnion { file, samples, seed, cap } => {
                let input = load(&file)?;
                let restriction = restriction_or_default(&input);
                let extra = sample_structures_for_check(
                    &input.env,
                    input.restriction.as_ref(),
                    samples,
                    seed,
                );
                let report = check_bne_union(&input.env, &restriction, &extra, cap)
                    .map_err(|e| format!("{}: {e}", file.display()))?;
                print!("{}", render_bne_union(&input.env, &report, samples));
                Ok(if report.equal() { 0 } else { 1 })
            }
        },
        Command::Gen { what, spec, seed } => {
            let spec = match spec {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| format!("{}: {e}", path.display()))?;
                    parse_generator(&text).map_err(|e| format!("{}: {e}", path.display()))?
                }
                None => GeneratorSpec::default(),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let env = random_environment(&spec, &mut rng);
            let structure = match what {
                GenWhat::Env => None,
                GenWhat::Structure => Some(random_structure(
                    &env,
                    spec.num_signals,
                    spec.max_denominator,
                    &mut rng,
                )),
            };
            print!("{}", write_input(&InputFile { env, restriction: None, structure }));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
