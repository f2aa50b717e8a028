//! `grz`: prove, check, transform and interpolate Grz proofs from the shell.
//!
//! Exit codes: 0 success / valid, 1 refuted / invalid, 2 error or resource limit.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use grz_core::calculus::System;
use grz_core::corpus::{random_cut_proofs, CorpusConfig};
use grz_core::interpolation::{lyndon, InterpolationError};
use grz_core::proofs::{CyclicProof, LazyProof, ProofStore, WfProof};
use grz_core::prover::{decide, find_countermodel, ProverConfig, ProverError, Verdict};
use grz_core::syntax::{parse_formula, parse_sequent, PolaritySets};
use grz_core::transforms::{inf_to_seq, FoldLimits, TransformError};

#[derive(Parser, Debug)]
#[command(name = "grz", version, about = "Cyclic proofs, cut elimination and interpolation for Grz")]
struct Cli {
    /// Proof-search node budget.
    #[arg(long, global = true, default_value_t = 2_000_000)]
    max_nodes: usize,
    /// Proof-search depth bound.
    #[arg(long, global = true, default_value_t = 100_000)]
    max_depth: usize,
    /// Fragment depth up to which transformed proofs are verified.
    #[arg(long, global = true, default_value_t = 20)]
    depth: usize,
    /// Largest countermodel (worlds) searched for.
    #[arg(long, global = true, default_value_t = 4)]
    model_size: usize,
    /// Proof-search timeout in seconds.
    #[arg(long, global = true)]
    timeout: Option<f64>,
    /// Write the result here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Seed for `corpus`.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Decide a formula or sequent: proof JSON (exit 0) or countermodel JSON (exit 1).
    Prove { goal: String },
    /// Check a proof file; prints the checker report.
    Check { file: PathBuf },
    /// Eliminate cuts: any proof in, cut-free regularized cyclic proof out.
    Cutfree { file: PathBuf },
    /// Slim a cyclic proof (box-rule contexts reduced to sets).
    Slim { file: PathBuf },
    /// Fold a cyclic proof into a regular one.
    Regularize { file: PathBuf },
    /// Translate between the finitary and the cyclic calculus.
    Translate {
        file: PathBuf,
        /// Target calculus; defaults to the other one.
        #[arg(long, value_enum)]
        to: Option<Target>,
    },
    /// Lyndon interpolant of `A → B`.
    Interpolate { a: String, b: String },
    /// Search for a finite countermodel (exit 0 when found, 1 otherwise).
    Countermodel { goal: String },
    /// Seeded random finitary proofs with cuts.
    Corpus {
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        cuts: usize,
        /// Size bound of the random theorems.
        #[arg(long, default_value_t = 11)]
        size: usize,
    },
    /// Graphviz rendering of a proof file.
    ExportDot { file: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    Seq,
    Inf,
}

/// Result of one verb: exit code and what to print.
struct Outcome {
    code: u8,
    text: String,
}

impl Outcome {
    fn json(code: u8, v: &Value) -> Self {
        Outcome {
            code,
            text: serde_json::to_string_pretty(v).expect("json") + "\n",
        }
    }
}

/// A loaded proof file: finitary proofs are kept as trees.
enum Loaded {
    Seq(WfProof),
    Inf(CyclicProof),
}

fn load(path: &PathBuf) -> Result<Loaded> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let g = CyclicProof::from_json(&v).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    Ok(match g.system {
        System::Seq | System::SeqCut => Loaded::Seq(WfProof::from_graph(&g).map_err(|e| anyhow!("{e}"))?),
        System::Inf | System::InfCut => Loaded::Inf(g),
    })
}

fn load_inf(path: &PathBuf) -> Result<CyclicProof> {
    match load(path)? {
        Loaded::Inf(p) => Ok(p),
        Loaded::Seq(_) => bail!("{}: expected a cyclic proof; use `translate` first", path.display()),
    }
}

fn report_json(r: &grz_core::proofs::Report) -> Value {
    json!({
        "ok": r.is_ok(),
        "violations": r.violations.iter().map(|v| json!({"kind": v.kind(), "message": v.to_string()})).collect::<Vec<_>>(),
    })
}

/// Serializes a lazy proof: exact folding when its graph is finite,
/// regularization otherwise.
fn fold(store: &ProofStore, h: LazyProof) -> Result<CyclicProof> {
    match store.to_cyclic(h, FoldLimits { max_nodes: 200_000 }) {
        Ok(p) => Ok(p),
        Err(_) => Ok(store.regularize(h, FoldLimits::default())?),
    }
}

fn emit_proof(p: &CyclicProof) -> Result<Outcome> {
    let r = p.check();
    if !r.is_ok() {
        bail!("internal error: produced proof does not check:\n{r}");
    }
    Ok(Outcome::json(0, &p.to_json()))
}

impl Cli {
    fn prover(&self) -> ProverConfig {
        ProverConfig {
            max_nodes: self.max_nodes,
            max_depth: self.max_depth,
            max_model_size: self.model_size,
            timeout: self.timeout.map(Duration::from_secs_f64),
        }
    }

    fn run(&self) -> Result<Outcome> {
        match &self.verb {
            Verb::Prove { goal } => {
                let goal = parse_sequent(goal)?;
                match decide(&goal, &self.prover()) {
                    // a proof is emitted as a plain proof document, so `check` reads it back
                    Ok(Verdict::Proof { proof }) => emit_proof(&proof),
                    Ok(v) => Ok(Outcome::json(1, &serde_json::to_value(&v)?)),
                    Err(e) => Ok(prover_failure(e)),
                }
            }
            Verb::Check { file } => {
                let r = match load(file)? {
                    Loaded::Seq(p) => p.check(),
                    Loaded::Inf(p) => p.check(),
                };
                Ok(Outcome::json(u8::from(!r.is_ok()), &report_json(&r)))
            }
            Verb::Cutfree { file } => {
                let store = ProofStore::new();
                let h = match load(file)? {
                    Loaded::Seq(p) => store.seq_to_inf(&p)?,
                    Loaded::Inf(p) => store.load_cyclic(&p).map_err(TransformError::Invalid)?,
                };
                let out = store.slim(store.ce(h));
                if !store.cutfree_to_depth(out, self.depth) {
                    bail!("internal error: cut left within depth {}", self.depth);
                }
                emit_proof(&store.regularize(out, FoldLimits::default())?)
            }
            Verb::Slim { file } => {
                let store = ProofStore::new();
                let h = store.load_cyclic(&load_inf(file)?).map_err(TransformError::Invalid)?;
                emit_proof(&fold(&store, store.slim(h))?)
            }
            Verb::Regularize { file } => {
                let store = ProofStore::new();
                let h = store.load_cyclic(&load_inf(file)?).map_err(TransformError::Invalid)?;
                emit_proof(&store.regularize(h, FoldLimits::default())?)
            }
            Verb::Translate { file, to } => match (load(file)?, to) {
                (Loaded::Seq(p), None | Some(Target::Inf)) => {
                    let store = ProofStore::new();
                    let h = store.seq_to_inf(&p)?;
                    emit_proof(&fold(&store, h)?)
                }
                (Loaded::Inf(p), None | Some(Target::Seq)) => {
                    let t = inf_to_seq(&p, &BTreeSet::new())?;
                    let r = t.check();
                    if !r.is_ok() {
                        bail!("internal error: translated proof does not check:\n{r}");
                    }
                    Ok(Outcome::json(0, &t.to_graph().to_json()))
                }
                (Loaded::Seq(_), Some(Target::Seq)) | (Loaded::Inf(_), Some(Target::Inf)) => {
                    bail!("proof is already in the requested calculus")
                }
            },
            Verb::Interpolate { a, b } => {
                let (a, b) = (parse_formula(a)?, parse_formula(b)?);
                match lyndon(&a, &b, &self.prover()) {
                    Ok(r) => {
                        let pol = |f| {
                            let p = PolaritySets::of_formula(f);
                            json!({"positive": p.pos, "negative": p.neg})
                        };
                        Ok(Outcome::json(
                            0,
                            &json!({
                                "interpolant": r.interpolant,
                                "polarity": {
                                    "interpolant": pol(&r.interpolant),
                                    "antecedent": pol(&a),
                                    "consequent": pol(&b),
                                },
                                "left_obligation": r.left_obligation,
                                "right_obligation": r.right_obligation,
                                "verified": true,
                            }),
                        ))
                    }
                    Err(InterpolationError::NotTheorem { model, world }) => Ok(Outcome::json(
                        1,
                        &json!({"verdict": "countermodel", "model": model, "world": world}),
                    )),
                    Err(InterpolationError::Prover(e)) => Ok(prover_failure(e)),
                    Err(e) => Err(e.into()),
                }
            }
            Verb::Countermodel { goal } => {
                let goal = parse_sequent(goal)?;
                Ok(match find_countermodel(&goal, self.model_size) {
                    Some((model, world)) => Outcome::json(0, &json!({"model": model, "world": world})),
                    None => Outcome::json(1, &json!({"model": null, "max_size": self.model_size})),
                })
            }
            Verb::Corpus { count, cuts, size } => {
                let proofs = random_cut_proofs(&CorpusConfig {
                    seed: self.seed,
                    count: *count,
                    formula_size: *size,
                    cuts: *cuts,
                    ..CorpusConfig::default()
                });
                let v: Vec<Value> = proofs.iter().map(|p| p.to_graph().to_json()).collect();
                Ok(Outcome::json(0, &Value::Array(v)))
            }
            Verb::ExportDot { file } => {
                let g = match load(file)? {
                    Loaded::Seq(p) => p.to_graph(),
                    Loaded::Inf(p) => p,
                };
                Ok(Outcome {
                    code: 0,
                    text: g.to_dot(),
                })
            }
        }
    }
}

fn prover_failure(e: ProverError) -> Outcome {
    eprintln!("grz: {e}");
    match e {
        ProverError::ResourceLimit { limit, partial } => Outcome::json(
            2,
            &json!({"error": "resource_limit", "limit": limit, "partial": partial.to_json()}),
        ),
        e => Outcome::json(2, &json!({"error": e.to_string()})),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // lazy transformers recurse deeply on large proofs
    let result = std::thread::Builder::new()
        .stack_size(256 << 20)
        .spawn(move || {
            let out = cli.run();
            (cli.output, out)
        })
        .expect("spawn worker")
        .join();
    let (output, out) = match result {
        Ok(r) => r,
        Err(_) => return ExitCode::from(2),
    };
    match out {
        Ok(o) => {
            let written = match &output {
                Some(path) => std::fs::write(path, &o.text).with_context(|| format!("writing {}", path.display())),
                None => {
                    print!("{}", o.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("grz: {e:#}");
                return ExitCode::from(2);
            }
            ExitCode::from(o.code)
        }
        Err(e) => {
            eprintln!("grz: {e:#}");
            ExitCode::from(2)
        }
    }
}
