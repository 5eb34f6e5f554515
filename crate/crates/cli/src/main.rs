//! `goedel-pal`: parse, evaluate, translate and check formulas of fuzzy
//! public announcement logic.
//!
//! Exit status: 0 on success (valid, accepted), 1 when a formula is refuted
//! or a proof rejected, 2 on usage or input errors.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use goedel_pal::calculus::{audit_soundness, check_proof, parse_proof, CheckOptions, SchemaDb};
use goedel_pal::checker::{
    check_equivalence, check_validity, Mode, ModelSpaceParams, Verdict, DEFAULT_BUDGET,
};
use goedel_pal::reduction::{check_measure_properties, complexity, translate, translate_trace};
use goedel_pal::syntax::{classify, print, AgentId, Formula};
use goedel_pal::{suite, KripkeModel, TruthValue};

#[derive(Parser)]
#[command(
    name = "goedel-pal",
    version,
    about = "Fuzzy public announcement logic over Goedel modal logic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical form and language membership of a formula.
    Parse(FormulaArg),
    /// Evaluate a formula at a world of a model.
    Eval {
        #[arg(long)]
        model: String,
        #[arg(long)]
        world: String,
        #[command(flatten)]
        formula: FormulaArg,
    },
    /// Print the model restricted by an announcement.
    Restrict {
        #[arg(long)]
        model: String,
        #[command(flatten)]
        formula: FormulaArg,
    },
    /// Eliminate announcements and value formulas.
    Translate {
        #[command(flatten)]
        formula: FormulaArg,
        /// Print each rewrite step before the result.
        #[arg(long)]
        trace: bool,
    },
    /// Print the complexity measure of a formula.
    Complexity {
        #[command(flatten)]
        formula: FormulaArg,
        /// Also print every measure inequality checked for the formula.
        #[arg(long)]
        lemma: bool,
    },
    /// Print the rewrite steps of the translation with their measures.
    Trace(FormulaArg),
    /// Search for a countermodel to the validity of a formula.
    CheckValid {
        #[command(flatten)]
        formula: FormulaArg,
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Search for a model where two formulas take different values.
    CheckEquiv {
        #[command(flatten)]
        formula: FormulaArg,
        /// The formula to compare against.
        #[arg(long)]
        other: String,
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Check a proof file line by line.
    CheckProof {
        #[arg(long)]
        proof: String,
        /// Also check every line semantically on a model space.
        #[arg(long)]
        audit: bool,
        /// Allow delta necessitation only on lines free of premises.
        #[arg(long)]
        strict_dnec: bool,
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Run the verification suite.
    Suite {
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

#[derive(Args)]
struct FormulaArg {
    /// Formula text; read from stdin when omitted.
    #[arg(long)]
    formula: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Random,
}

#[derive(Args)]
struct SpaceArgs {
    /// JSON file with the model-space parameters; overrides the flags below.
    #[arg(long)]
    params: Option<String>,
    #[arg(long, default_value_t = 2)]
    max_worlds: usize,
    /// Comma-separated truth values; 0 and 1 are always included.
    #[arg(long, value_delimiter = ',', default_value = "0,1/2,1")]
    chain: Vec<String>,
    /// Comma-separated agents (default: those of the formula, or `a`).
    #[arg(long, value_delimiter = ',')]
    agents: Vec<String>,
    /// Comma-separated atoms (default: those of the formula, or `p`).
    #[arg(long, value_delimiter = ',')]
    atoms: Vec<String>,
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: ModeArg,
    /// Number of models in random mode.
    #[arg(long, default_value_t = 1000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum number of models for exhaustive search.
    #[arg(long, env = "GOEDEL_PAL_BUDGET")]
    budget: Option<u64>,
}

/// Error carrying the exit status.
struct Failure(u8, String);

fn input(msg: impl ToString) -> Failure {
    Failure(2, msg.to_string())
}

fn read_formula(arg: &FormulaArg) -> Result<Formula, Failure> {
    let text = match &arg.formula {
        Some(t) => t.clone(),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(input)?;
            s
        }
    };
    text.trim()
        .parse()
        .map_err(|e| input(format!("formula: {e}")))
}

fn read_file(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(format!("{path}: {e}")))
}

fn load_model(path: &str) -> Result<KripkeModel, Failure> {
    KripkeModel::from_json(&read_file(path)?).map_err(|e| input(format!("{path}: {e}")))
}

impl SpaceArgs {
    fn params(&self, formulas: &[&Formula]) -> Result<ModelSpaceParams, Failure> {
        let mut params = if let Some(path) = &self.params {
            ModelSpaceParams::from_json(&read_file(path)?)
                .map_err(|e| input(format!("{path}: {e}")))?
        } else {
            let mut chain = vec![TruthValue::ZERO, TruthValue::ONE];
            for c in &self.chain {
                chain.push(
                    c.trim()
                        .parse()
                        .map_err(|e| input(format!("chain value `{c}`: {e}")))?,
                );
            }
            let agents = if self.agents.is_empty() {
                let mut found: Vec<AgentId> = formulas.iter().flat_map(|f| f.agents()).collect();
                if found.is_empty() {
                    found.push(AgentId::new("a").expect("valid"));
                }
                found
            } else {
                self.agents
                    .iter()
                    .map(|a| {
                        AgentId::new(a.trim()).ok_or_else(|| input(format!("invalid agent `{a}`")))
                    })
                    .collect::<Result<_, _>>()?
            };
            let atoms = if self.atoms.is_empty() {
                let mut found: Vec<String> = formulas.iter().flat_map(|f| f.atoms()).collect();
                if found.is_empty() {
                    found.push("p".into());
                }
                found
            } else {
                self.atoms.iter().map(|a| a.trim().to_string()).collect()
            };
            let mode = match self.mode {
                ModeArg::Exhaustive => Mode::Exhaustive,
                ModeArg::Random => Mode::Random {
                    samples: self.samples,
                    seed: self.seed,
                },
            };
            ModelSpaceParams {
                max_worlds: self.max_worlds,
                chain,
                agents,
                atoms,
                mode,
                budget: DEFAULT_BUDGET,
            }
        };
        if let Some(b) = self.budget {
            params.budget = b;
        }
        Ok(params)
    }
}

fn report(verdict: &Verdict) -> Result<(), Failure> {
    println!("{verdict}");
    if verdict.is_valid() {
        Ok(())
    } else {
        Err(Failure(1, String::new()))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Parse(arg) => {
            let f = read_formula(&arg)?;
            println!("{}", print(&f));
            let tags: Vec<String> = classify(&f).iter().map(|t| format!("{t:?}")).collect();
            println!("languages: {}", tags.join(" "));
        }
        Command::Eval {
            model,
            world,
            formula,
        } => {
            let m = load_model(&model)?;
            let f = read_formula(&formula)?;
            println!("{}", m.evaluate(&world, &f).map_err(input)?);
        }
        Command::Restrict { model, formula } => {
            let m = load_model(&model)?;
            let f = read_formula(&formula)?;
            println!("{}", m.restrict(&f).map_err(input)?.to_model().to_json());
        }
        Command::Translate { formula, trace } => {
            let f = read_formula(&formula)?;
            if trace {
                for s in translate_trace(&f) {
                    println!("{s}");
                }
            }
            println!("{}", translate(&f));
        }
        Command::Complexity { formula, lemma } => {
            let f = read_formula(&formula)?;
            println!("{}", complexity(&f));
            if lemma {
                let r = check_measure_properties(&f);
                for c in &r.checks {
                    println!("{c}");
                }
                if !r.all_hold() {
                    return Err(Failure(1, String::new()));
                }
            }
        }
        Command::Trace(arg) => {
            let f = read_formula(&arg)?;
            let steps = translate_trace(&f);
            for s in &steps {
                println!("{s}");
            }
            if !steps.iter().all(|s| s.respects_measure()) {
                return Err(Failure(1, "a step does not decrease the measure".into()));
            }
        }
        Command::CheckValid { formula, space } => {
            let f = read_formula(&formula)?;
            let params = space.params(&[&f])?;
            report(&check_validity(&f, &params).map_err(input)?)?;
        }
        Command::CheckEquiv {
            formula,
            other,
            space,
        } => {
            let f = read_formula(&formula)?;
            let g: Formula = other
                .trim()
                .parse()
                .map_err(|e| input(format!("other: {e}")))?;
            let params = space.params(&[&f, &g])?;
            report(&check_equivalence(&f, &g, &params).map_err(input)?)?;
        }
        Command::CheckProof {
            proof,
            audit,
            strict_dnec,
            space,
        } => {
            let p = parse_proof(&read_file(&proof)?).map_err(|e| input(format!("{proof}: {e}")))?;
            let db = SchemaDb::standard();
            let verdict = check_proof(
                &p,
                &db,
                CheckOptions {
                    strict_delta_nec: strict_dnec,
                },
            );
            println!("{verdict}");
            if !verdict.is_accepted() {
                return Err(Failure(1, String::new()));
            }
            if audit {
                let mut formulas: Vec<&Formula> = p.premises.iter().collect();
                formulas.extend(p.lines.iter().map(|l| &l.formula));
                let params = space.params(&formulas)?;
                let report = audit_soundness(&p, &params).map_err(input)?;
                let mut sound = true;
                for e in &report.entries {
                    let kind = if e.uses_premises {
                        "consequence"
                    } else {
                        "validity"
                    };
                    println!("line {} ({kind}): {}", e.line, e.verdict);
                    sound &= e.verdict.is_valid();
                }
                if !sound {
                    return Err(Failure(1, String::new()));
                }
            }
        }
        Command::Suite { only } => {
            let ids = if only.is_empty() {
                (1..=10).collect()
            } else {
                only
            };
            let mut all = true;
            for id in ids {
                if !(1..=10).contains(&id) {
                    return Err(input(format!("no criterion {id}")));
                }
                let o = suite::run(id);
                println!("{o}");
                all &= o.passed;
            }
            if !all {
                return Err(Failure(1, String::new()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            if !msg.is_empty() {
                eprintln!("goedel-pal: {msg}");
            }
            ExitCode::from(code)
        }
    }
}
