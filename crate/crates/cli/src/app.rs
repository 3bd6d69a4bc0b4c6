//! Argument definitions and command execution.

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use parclass_core::canonical::{assemble, gjnf, EigenField};
use parclass_core::centralizer::{centralizer_dim, embed, generators};
use parclass_core::classes::{
    agl_class_count, agl_class_reps, check_dims, levi_reps, pair_class_count, pair_class_reps, Counting,
    OrbitCache,
};
use parclass_core::cocentralizer::{CocentElement, CocentShape};
use parclass_core::interp::count_poly;
use parclass_core::matproblem::{enumerate_orbits, type_classify, DEFAULT_BUDGET, MAX_BUDGET};
use parclass_core::matrix::{conjugator, Matrix, Similarity};
use parclass_core::oracle::{Oracle, DEFAULT_ORACLE_BUDGET};
use parclass_core::{Fe, Field, Partition, Poly};
use serde::Serialize;

use crate::error::CliError;
use crate::schema::{self, AglCountDoc, CentralizerDoc, OracleDoc, ParabolicCountDoc};

#[derive(Debug, Parser)]
#[command(name = "parclass", version, about = "Conjugacy classes of maximal parabolic subgroups of GL_n(F_q)")]
pub struct Cli {
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Cap on enumeration size (matrix-problem points, or group order for the oracle).
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// JSON output (the default for most commands).
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// CSV output for counts.
    #[arg(long, global = true)]
    pub csv: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generalized Jordan normal form of a matrix.
    Gjnf(GjnfArgs),
    /// Centralizer algebra of a Jordan type and its generators.
    Centralizer(CentralizerArgs),
    /// Cocentralizer matrix problems.
    Matprob {
        #[command(subcommand)]
        command: MatprobCommand,
    },
    /// Class representatives and counts.
    Classes {
        #[command(subcommand)]
        command: ClassesCommand,
    },
    /// Brute-force class partition for small groups.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    /// Field order, a prime power.
    #[arg(long)]
    pub q: u64,
    /// Work over F_(q^ext) instead.
    #[arg(long, default_value_t = 1)]
    pub ext: u32,
}

#[derive(Debug, Args)]
pub struct GjnfArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Rows separated by `;`, entries by spaces.
    #[arg(long)]
    pub matrix: String,
    /// Also print the normal form and a conjugating matrix X with X A X^-1 = N.
    #[arg(long)]
    pub certify: bool,
}

#[derive(Debug, Args)]
pub struct CentralizerArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub lambda: String,
    /// Irreducible eigenvalue polynomial, coefficients low-to-high (default: t-1).
    #[arg(long)]
    pub poly: Option<String>,
    #[arg(long)]
    pub list_generators: bool,
}

#[derive(Debug, Subcommand)]
pub enum MatprobCommand {
    /// Orbit representatives and sizes.
    Orbits {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        nu: String,
    },
    /// Finite / infinite type verdict.
    Classify {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        nu: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum ClassesCommand {
    /// Classes of P^(m,n)(F_q).
    Parabolic {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        field: FieldArgs,
        /// List representatives.
        #[arg(long)]
        reps: bool,
        /// Enumerate every matrix problem over its own field.
        #[arg(long)]
        exact: bool,
    },
    /// Class count of P^(m,n) as a polynomial in q.
    CountPoly {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Classes of AGL_n(F_q).
    Agl {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        reps: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    Parabolic {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        field: FieldArgs,
    },
    Agl {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        field: FieldArgs,
    },
}

fn open_field(f: &FieldArgs) -> Result<Field, CliError> {
    if f.ext == 0 {
        return Err(CliError::Usage("--ext must be at least 1".into()));
    }
    let order = f
        .q
        .checked_pow(f.ext)
        .ok_or_else(|| CliError::Usage(format!("{}^{} is too large", f.q, f.ext)))?;
    Ok(Field::of_order(order)?)
}

fn partition(s: &str) -> Result<Partition, CliError> {
    Ok(Partition::parse(s)?)
}

fn budget(cli: &Cli, default: u64) -> Result<u64, CliError> {
    let b = cli.budget.unwrap_or(default);
    if b > MAX_BUDGET {
        return Err(CliError::Usage(format!("--budget may be at most {MAX_BUDGET}")));
    }
    Ok(b)
}

fn json<T: Serialize>(v: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string(v)? + "\n")
}

fn no_csv(cli: &Cli, what: &str) -> Result<(), CliError> {
    if cli.csv {
        return Err(CliError::Usage(format!("CSV output is not available for {what}")));
    }
    Ok(())
}

/// Runs a parsed invocation and returns what should be printed.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        pool = pool.num_threads(t);
    }
    let pool = pool.build().map_err(|e| CliError::Threads(e.to_string()))?;
    pool.install(|| dispatch(cli))
}

fn dispatch(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Gjnf(a) => run_gjnf(cli, a),
        Command::Centralizer(a) => run_centralizer(cli, a),
        Command::Matprob { command } => match command {
            MatprobCommand::Orbits { field, mu, nu } => run_orbits(cli, field, mu, nu),
            MatprobCommand::Classify { mu, nu } => {
                no_csv(cli, "classify")?;
                let (mu, nu) = (partition(mu)?, partition(nu)?);
                json(&schema::verdict_json(&mu, &nu, &type_classify(&mu, &nu)))
            }
        },
        Command::Classes { command } => match command {
            ClassesCommand::Parabolic { m, n, field, reps, exact } => run_parabolic(cli, *m, *n, field, *reps, *exact),
            ClassesCommand::CountPoly { m, n } => run_count_poly(cli, *m, *n),
            ClassesCommand::Agl { n, field, reps } => run_agl(cli, *n, field, *reps),
        },
        Command::Oracle { command } => run_oracle(cli, command),
    }
}

fn run_gjnf(cli: &Cli, a: &GjnfArgs) -> Result<String, CliError> {
    no_csv(cli, "gjnf")?;
    let k = open_field(&a.field)?;
    let m = Matrix::parse(&k, &a.matrix)?;
    if !m.is_square() {
        return Err(CliError::Usage(format!("matrix is {}x{}, not square", m.rows(), m.cols())));
    }
    let g = gjnf(&k, &m)?;
    let doc = schema::gjnf_json(&k, &g);
    if !a.certify {
        return json(&doc);
    }
    #[derive(Serialize)]
    struct Certified {
        gjnf: Vec<schema::GjnfFactor>,
        normal_form: String,
        conjugator: Option<String>,
    }
    let nf = assemble(&k, &g);
    let x = match conjugator(&k, &m, &nf, cli.seed)? {
        Similarity::Similar(x) => Some(x.format(&k)),
        _ => None,
    };
    json(&Certified { gjnf: doc, normal_form: nf.format(&k), conjugator: x })
}

fn run_centralizer(cli: &Cli, a: &CentralizerArgs) -> Result<String, CliError> {
    no_csv(cli, "centralizer")?;
    let k = open_field(&a.field)?;
    let lambda = partition(&a.lambda)?;
    let p = match &a.poly {
        Some(s) => Poly::parse(&k, s)?,
        None => Poly::linear(&k, Fe::ONE),
    };
    let ef = EigenField::new(&k, &p)?;
    let gens = if a.list_generators {
        let mut docs = Vec::new();
        for g in generators(&lambda, ef.field()) {
            let mat = embed(&g.realized, &ef)?;
            docs.push(schema::generator_doc(&g, Some((&k, &mat))));
        }
        Some(docs)
    } else {
        None
    };
    json(&CentralizerDoc {
        lambda: lambda.parts().to_vec(),
        poly: p.format(&k),
        q: k.order(),
        dimension: centralizer_dim(&lambda, ef.degree()),
        generators: gens,
    })
}

fn rep_text(v: &CocentElement) -> String {
    let doc = schema::cocent_json(v);
    doc.entries.iter().map(|r| r.join(" ")).collect::<Vec<_>>().join(";")
}

fn run_orbits(cli: &Cli, f: &FieldArgs, mu: &str, nu: &str) -> Result<String, CliError> {
    no_csv(cli, "orbit sets")?;
    let k = open_field(f)?;
    let shape = CocentShape::new(&partition(mu)?, &partition(nu)?, &k)?;
    let set = enumerate_orbits(&shape, budget(cli, DEFAULT_BUDGET)?)?;
    if cli.json {
        return json(&schema::orbit_set_json(&set));
    }
    let mut out = format!("orbits {} (mu {}, nu {}, q {}, points {})\n", set.count(), shape.mu(), shape.nu(), k.order(), set.total);
    out.push_str("index\tsize\t0/1\trep\n");
    for (i, (r, s)) in set.reps.iter().zip(&set.sizes).enumerate() {
        let flag = if schema::is_zero_one(r) { "yes" } else { "no" };
        out.push_str(&format!("{i}\t{s}\t{flag}\t{}\n", rep_text(r)));
    }
    Ok(out)
}

fn new_cache(cli: &Cli, exact: bool) -> Result<OrbitCache, CliError> {
    let counting = if exact { Counting::Exact } else { Counting::FieldIndependent };
    Ok(OrbitCache::new(budget(cli, DEFAULT_BUDGET)?, counting))
}

fn run_parabolic(cli: &Cli, m: usize, n: usize, f: &FieldArgs, reps: bool, exact: bool) -> Result<String, CliError> {
    let k = open_field(f)?;
    check_dims(m, n)?;
    if reps {
        no_csv(cli, "representatives")?;
    }
    let pairs = levi_reps(m, n, &k);
    let cache_budget = budget(cli, DEFAULT_BUDGET)?;
    let counting = if exact { Counting::Exact } else { Counting::FieldIndependent };
    let mk = || OrbitCache::new(cache_budget, counting);
    let (count, rep_docs) = if reps {
        let lists: Vec<Vec<schema::ClassRepDoc>> = pairs
            .par_iter()
            .map_init(mk, |cache, (ga, gb)| {
                let r = pair_class_reps(&k, ga, gb, cache)?;
                Ok(r.iter().map(|c| schema::class_rep_json(&k, c)).collect())
            })
            .collect::<Result<_, CliError>>()?;
        let docs: Vec<_> = lists.into_iter().flatten().collect();
        (docs.len() as u128, Some(docs))
    } else {
        let counts: Vec<u128> = pairs
            .par_iter()
            .map_init(mk, |cache, (ga, gb)| pair_class_count(&k, ga, gb, cache))
            .collect::<Result<_, _>>()?;
        (counts.iter().sum(), None)
    };
    if cli.csv {
        return Ok(format!("m,n,q,count\n{m},{n},{},{count}\n", k.order()));
    }
    json(&ParabolicCountDoc { m, n, q: k.order(), count, reps: rep_docs })
}

fn run_count_poly(cli: &Cli, m: usize, n: usize) -> Result<String, CliError> {
    check_dims(m, n)?;
    let p = count_poly(m, n, &mut new_cache(cli, false)?)?;
    if cli.csv {
        let mut out = String::from("degree,coefficient\n");
        for (d, c) in p.coeffs.iter().enumerate() {
            out.push_str(&format!("{d},{c}\n"));
        }
        return Ok(out);
    }
    json(&schema::poly_json(m, n, &p))
}

fn run_agl(cli: &Cli, n: usize, f: &FieldArgs, reps: bool) -> Result<String, CliError> {
    let k = open_field(f)?;
    if reps {
        no_csv(cli, "representatives")?;
    }
    let count = agl_class_count(n, &k)?;
    if cli.csv {
        return Ok(format!("n,q,count\n{n},{},{count}\n", k.order()));
    }
    let reps = if reps { Some(agl_class_reps(n, &k)?.iter().map(|r| r.format(&k)).collect()) } else { None };
    json(&AglCountDoc { n, q: k.order(), count, reps })
}

fn run_oracle(cli: &Cli, cmd: &OracleCommand) -> Result<String, CliError> {
    let b = cli.budget.unwrap_or(DEFAULT_ORACLE_BUDGET);
    let (m, n, k, o) = match cmd {
        OracleCommand::Parabolic { m, n, field } => {
            let k = open_field(field)?;
            let o = Oracle::parabolic(*m, *n, &k, b)?;
            (*m, *n, k, o)
        }
        OracleCommand::Agl { n, field } => {
            let k = open_field(field)?;
            let o = Oracle::agl(*n, &k, b)?;
            (1, *n, k, o)
        }
    };
    if cli.csv {
        return Ok(format!("m,n,q,count\n{m},{n},{},{}\n", k.order(), o.count()));
    }
    json(&OracleDoc { m, n, q: k.order(), count: o.count(), group_order: o.group_order() })
}
