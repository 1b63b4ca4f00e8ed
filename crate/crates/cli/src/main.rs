//! Command-line front end for the arc algebra library.

use std::fs;
use std::io::ErrorKind;
use std::process::ExitCode;

use arcalg::diagrams::{evaluate_with, generator_diagram, stack, Diagram, EvalOptions, Strategy};
use arcalg::expr::parse_expression;
use arcalg::presentations::{algebra_for_variant, independence_rank, MatrixRep, Report, Specialization, TorusVariant};
use arcalg::rewrite::DEFAULT_DEGREE_BOUND;
use arcalg::{AlgElement, Generator, PresentedAlgebra, Surface};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "arcalg", version, about = "Exact computation in Kauffman bracket arc algebras")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct AlgebraArgs {
    /// Surface as `genus,punctures`: 0,2 0,3 1,0 or 1,1.
    #[arg(long)]
    surface: Surface,
    /// Right-hand side of the torus commutation relations.
    #[arg(long, value_enum, default_value_t = Variant::Cyclic)]
    variant: Variant,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Cyclic,
    PaperIndex,
}

#[derive(Subcommand)]
enum Command {
    /// Print the normal form of an expression.
    Normalize {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(allow_hyphen_values = true)]
        expression: String,
    },
    /// Evaluate a diagram file in the arc algebra of its surface.
    EvalDiagram {
        file: String,
        /// Worker threads for the state sum.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Resolve in a random order seeded by this value instead of the canonical one.
        #[arg(long)]
        seed: Option<u64>,
        /// Print the unreduced sum of words instead of the normal form.
        #[arg(long)]
        raw: bool,
    },
    /// Check the presentation, and for spheres the diagram engine and independence.
    Verify {
        #[command(flatten)]
        algebra: AlgebraArgs,
    },
    /// Run completion on the defining relations and print the confluence report.
    Complete {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value_t = DEFAULT_DEGREE_BOUND)]
        degree_bound: usize,
    },
    /// Check that the matrix representation is a homomorphism.
    RepCheck,
}

enum Failure {
    Check(String),
    Input(String),
}

type Outcome = Result<String, Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn algebra(args: &AlgebraArgs) -> Result<PresentedAlgebra, Failure> {
    let variant = match args.variant {
        Variant::Cyclic => TorusVariant::Cyclic,
        Variant::PaperIndex => TorusVariant::PaperIndex,
    };
    algebra_for_variant(args.surface, variant).map_err(input)
}

fn terms_json(x: &AlgElement) -> serde_json::Value {
    x.terms().map(|(w, c)| json!({ "word": w.to_string(), "coefficient": c.to_string() })).collect()
}

fn report_output(report: &Report, json: bool) -> Outcome {
    let text = if json { serde_json::to_string_pretty(report).map_err(input)? } else { report.to_string() };
    if report.all_passed() {
        Ok(text)
    } else {
        Err(Failure::Check(text))
    }
}

fn normalize(args: &AlgebraArgs, expression: &str, json: bool) -> Outcome {
    let alg = algebra(args)?;
    let x = parse_expression(expression, &alg.generators, alg.arity()).map_err(input)?;
    let nf = alg.nf(&x).map_err(input)?;
    Ok(if json {
        json!({ "surface": alg.surface.to_string(), "normal_form": nf.to_string(), "terms": terms_json(&nf) }).to_string()
    } else {
        nf.to_string()
    })
}

fn eval_diagram(file: &str, jobs: usize, seed: Option<u64>, raw: bool, json: bool) -> Outcome {
    let text = fs::read_to_string(file).map_err(|e| match e.kind() {
        ErrorKind::NotFound => Failure::Input(format!("{file}: file not found")),
        _ => Failure::Input(format!("{file}: {e}")),
    })?;
    let d = Diagram::from_json(&text).map_err(input)?;
    let strategy = seed.map_or(Strategy::Canonical, Strategy::Random);
    let (x, stats) = evaluate_with(&d, &EvalOptions { strategy, jobs, raw }).map_err(input)?;
    Ok(if json {
        json!({ "punctures": d.n, "value": x.to_string(), "terms": terms_json(&x), "leaves": stats.leaves, "steps": stats.steps }).to_string()
    } else {
        x.to_string()
    })
}

fn engine_agreement(alg: &PresentedAlgebra) -> Result<Report, Failure> {
    let n = alg.arity();
    let gens: Vec<u32> = alg.generators.iter().map(|g| g.index).collect();
    let mut report = Report::default();
    for &i in &gens {
        for &j in &gens {
            let (Some(di), Some(dj)) = (generator_diagram(n, i), generator_diagram(n, j)) else { continue };
            let d = stack(&di, &dj).map_err(input)?;
            let got = evaluate_with(&d, &EvalOptions::default()).map_err(input)?.0;
            let want = alg.nf(&(&AlgElement::generator(n, Generator::alpha(i)) * &AlgElement::generator(n, Generator::alpha(j)))).map_err(input)?;
            let ok = got == want;
            let (gi, gj) = (Generator::alpha(i), Generator::alpha(j));
            report.push(format!("engine:{gi}*{gj}"), ok, (!ok).then(|| format!("{got} != {want}")));
        }
    }
    Ok(report)
}

fn verify(args: &AlgebraArgs, json: bool) -> Outcome {
    let alg = algebra(args)?;
    let mut report = alg.verify_presentation().map_err(input)?;
    if alg.surface.genus == 0 {
        report.extend(engine_agreement(&alg)?);
    } else {
        for (i, c) in alg.boundary_commutators().map_err(input)?.iter().enumerate() {
            report.push(format!("central:g{}", i + 1), c.is_zero(), (!c.is_zero()).then(|| c.to_string()));
        }
    }
    if alg.surface == Surface::SPHERE_3 {
        let specs = [
            Specialization::integers(2, &[3, 5, 7]),
            Specialization::integers(-3, &[1, -2, 4]),
            Specialization::integers(5, &[-1, 2, 3]),
        ];
        for (k, rank) in independence_rank(&specs).map_err(input)?.into_iter().enumerate() {
            report.push(format!("rank:{}", k + 1), rank == 4, (rank != 4).then(|| rank.to_string()));
        }
    }
    report_output(&report, json)
}

fn complete(args: &AlgebraArgs, degree_bound: usize, json: bool) -> Outcome {
    let alg = algebra(args)?;
    let (_, report) = alg.defining.complete(degree_bound).map_err(input)?;
    let text = if json {
        json!({
            "surface": alg.surface.to_string(),
            "degree_bound": report.degree_bound,
            "joinable": report.joinable.len(),
            "added": report.added.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            "failures": report.failures.iter().map(|f| json!({
                "overlap": f.pair.word.to_string(),
                "reason": f.reason,
                "difference": f.difference.to_string(),
            })).collect::<Vec<_>>(),
        })
        .to_string()
    } else {
        report.to_string().trim_end().to_string()
    };
    if report.is_confluent() {
        Ok(text)
    } else {
        Err(Failure::Check(text))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Normalize { algebra, expression } => normalize(algebra, expression, cli.json),
        Command::EvalDiagram { file, jobs, seed, raw } => eval_diagram(file, *jobs, *seed, *raw, cli.json),
        Command::Verify { algebra } => verify(algebra, cli.json),
        Command::Complete { algebra, degree_bound } => complete(algebra, *degree_bound, cli.json),
        Command::RepCheck => MatrixRep::new().verify_homomorphism().map_err(input).and_then(|r| report_output(&r, cli.json)),
    };
    match outcome {
        Ok(text) => {
            println!("{}", text.trim_end());
            ExitCode::SUCCESS
        }
        Err(Failure::Check(text)) => {
            println!("{}", text.trim_end());
            eprintln!("error: check failed");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
