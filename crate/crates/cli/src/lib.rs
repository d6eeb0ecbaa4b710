//! Argument handling for the `ybx` binary. [`run`] takes the argument list and
//! output streams so tests can drive it in-process.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;
use ybx_core::acceptance::{format_table, run_all, Config};
use ybx_core::analysis::{bipartition_reports, is_entangling_with, EntanglementOptions};
use ybx_core::ansatz::{
    enumerate_equations, parse_assignments, search_permutation_images, substitute, SearchOptions, SparsityPattern,
};
use ybx_core::families::{build, Family, FamilyParams};
use ybx_core::sampling::DEFAULT_SEED;
use ybx_core::symmetry::{orbit_sample, parse_complex, parse_script};
use ybx_core::tensor::integer_root;
use ybx_core::verify::{
    verify_aybe_index, verify_aybe_matrix, verify_braid_relations, verify_bybe, verify_gybe, GybeSignature,
    DEFAULT_TOL,
};
use ybx_core::{CMat, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "ybx", version, about = "Build and check Yang-Baxter solutions on qudits")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Build a named solution family and write it as JSON.
    Construct(Common),
    /// Check a matrix against an equation.
    Verify(Common),
    /// Apply a script of symmetry operations, checking each step.
    Orbit {
        #[command(flatten)]
        common: Common,
        /// e.g. "scale:0,1;inverse;adjoint;localconj:@q.json"
        #[arg(long)]
        script: String,
    },
    /// Enumerate the polynomial system of a sparsity pattern.
    Ansatz {
        #[command(flatten)]
        common: Common,
        /// xshape, diagonal, full or empty
        #[arg(long, default_value = "xshape")]
        pattern: String,
        /// Print counts instead of the system.
        #[arg(long)]
        count: bool,
        /// Substitutions such as "r22=1,r55=1,r77=r44".
        #[arg(long)]
        subst: Option<String>,
    },
    /// Search permutation matrices for solutions.
    Search {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Report Schmidt-rank witnesses for a gate.
    Entangle {
        #[command(flatten)]
        common: Common,
        /// Gate file, optionally prefixed with '@'.
        #[arg(long)]
        gate: Option<String>,
    },
    /// Run the acceptance criteria.
    Selftest {
        #[command(flatten)]
        common: Common,
        /// Fewer random trials.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Eq {
    Bybe,
    Aybe,
    AybeIndex,
    Gybe,
    Braid,
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    d: Option<usize>,
    /// Signature "d,m,l".
    #[arg(long, value_parser = parse_sig)]
    sig: Option<GybeSignature>,
    #[arg(long)]
    family: Option<Family>,
    #[arg(long, value_parser = parse_value, allow_hyphen_values = true)]
    alpha: Option<Complex64>,
    #[arg(long, value_parser = parse_value, allow_hyphen_values = true)]
    beta: Option<Complex64>,
    #[arg(long, value_parser = parse_value, allow_hyphen_values = true)]
    gamma: Option<Complex64>,
    #[arg(long, value_parser = parse_value, allow_hyphen_values = true)]
    delta: Option<Complex64>,
    #[arg(long, value_parser = parse_value, allow_hyphen_values = true)]
    lambda: Option<Complex64>,
    #[arg(long = "in")]
    input: Option<String>,
    #[arg(short = 'o', long = "out")]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    eq: Option<Eq>,
    /// Strands for --eq braid.
    #[arg(long, default_value_t = 3)]
    strands: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    jobs: Option<usize>,
    /// Lift size caps.
    #[arg(long)]
    force: bool,
}

fn parse_sig(s: &str) -> Result<GybeSignature, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_value(s: &str) -> Result<Complex64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

/// Outcome of a verb: pass, or a check that ran and failed.
enum Verdict {
    Pass,
    Fail,
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

type CliResult = Result<Verdict, Error>;

fn file_arg(s: &str) -> &Path {
    Path::new(s.strip_prefix('@').unwrap_or(s))
}

fn read_matrix(path: &Path) -> Result<CMat, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    CMat::from_json(&text)
}

fn write_text(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

impl Common {
    fn params(&self, family: Family) -> FamilyParams {
        let mut p = FamilyParams::new(family);
        p.d = self.d;
        p.alpha = self.alpha.unwrap_or(p.alpha);
        p.beta = self.beta.unwrap_or(p.beta);
        p.gamma = self.gamma.unwrap_or(p.gamma);
        p.delta = self.delta.unwrap_or(p.delta);
        p.lambda = self.lambda.unwrap_or(p.lambda);
        p
    }

    /// The matrix from `--in`, or else the one built from `--family`.
    fn matrix(&self) -> Result<CMat, Error> {
        match (&self.input, self.family) {
            (Some(path), _) => read_matrix(file_arg(path)),
            (None, Some(f)) => build(&self.params(f)),
            (None, None) => Err(Error::InvalidArgument("need --in FILE or --family NAME".into())),
        }
    }

    fn sig_or_braided(&self, r: &CMat) -> Result<GybeSignature, Error> {
        if let Some(sig) = self.sig {
            return Ok(sig);
        }
        let d = integer_root(r.nrows(), 2).ok_or(Error::NotPerfectPower { dim: r.nrows(), exponent: 2 })?;
        GybeSignature::braided(d)
    }
}

fn emit(out: &mut dyn Write, value: &serde_json::Value) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value)?;
    writeln!(out, "{text}").map_err(|e| Error::InvalidArgument(e.to_string()))
}

fn construct(c: &Common, out: &mut dyn Write) -> CliResult {
    let family = c.family.ok_or_else(|| Error::InvalidArgument("construct needs --family".into()))?;
    let p = c.params(family);
    p.validate()?;
    let m = build(&p)?;
    match &c.output {
        Some(path) => write_text(path, &m.to_json())?,
        None => writeln!(out, "{}", m.to_json()).map_err(|e| Error::InvalidArgument(e.to_string()))?,
    }
    Ok(Verdict::Pass)
}

fn verify(c: &Common, out: &mut dyn Write) -> CliResult {
    let r = c.matrix()?;
    let eq = c.eq.unwrap_or(if c.sig.is_some() { Eq::Gybe } else { Eq::Bybe });
    let report = match eq {
        Eq::Bybe => verify_bybe(&r, c.tol)?,
        Eq::Aybe => verify_aybe_matrix(&r, c.tol)?,
        Eq::AybeIndex => verify_aybe_index(&r, c.tol)?,
        Eq::Gybe => {
            let sig = c.sig.ok_or_else(|| Error::InvalidArgument("--eq gybe needs --sig d,m,l".into()))?;
            verify_gybe(&r, sig, c.tol)?
        }
        Eq::Braid => {
            let sig = c.sig_or_braided(&r)?;
            let rep = verify_braid_relations(&r, sig, c.strands, c.tol, c.force)?;
            emit(out, &serde_json::to_value(&rep)?)?;
            return Ok(verdict(rep.passed));
        }
    };
    emit(out, &serde_json::to_value(&report)?)?;
    Ok(verdict(report.passed))
}

fn orbit(c: &Common, script: &str, out: &mut dyn Write) -> CliResult {
    let r = c.matrix()?;
    let sig = c.sig_or_braided(&r)?;
    let ops = parse_script(script, sig.m, |p| read_matrix(file_arg(p)))?;
    match orbit_sample(&r, sig, &ops, c.tol) {
        Ok(steps) => {
            let last = steps.last().cloned().unwrap_or(r);
            if let Some(path) = &c.output {
                write_text(path, &last.to_json())?;
            }
            let names: Vec<String> = ops.iter().map(ToString::to_string).collect();
            let residuals = steps
                .iter()
                .map(|m| verify_gybe(m, sig, c.tol).map(|rep| rep.residual_max))
                .collect::<Result<Vec<_>, _>>()?;
            emit(out, &json!({ "sig": sig.to_string(), "steps": names, "residuals": residuals, "passed": true }))?;
            Ok(Verdict::Pass)
        }
        Err(Error::OrbitBroken { step, op, residual, tol }) => {
            let value = json!({ "sig": sig.to_string(), "broken_at": step, "op": op, "residual": residual, "tol": tol, "passed": false });
            emit(out, &value)?;
            Ok(Verdict::Fail)
        }
        Err(e) => Err(e),
    }
}

fn ansatz(c: &Common, pattern: &str, count: bool, subst: Option<&str>, out: &mut dyn Write) -> CliResult {
    let sig = match c.sig {
        Some(s) => s,
        None => GybeSignature::new(2, 3, 2)?,
    };
    let pattern = SparsityPattern::named(pattern, sig.r_dim())?;
    let sys = enumerate_equations(&pattern, sig)?;
    let reduced = match subst {
        Some(s) => Some(substitute(&sys, &parse_assignments(s)?)?),
        None => None,
    };
    let shown = reduced.as_ref().unwrap_or(&sys);
    if let Some(path) = &c.output {
        write_text(path, &serde_json::to_string_pretty(&shown.to_json())?)?;
    }
    if count {
        let mut value = json!({
            "sig": sig.to_string(),
            "equations": sys.len(),
            "variables": sys.active_variables().len(),
        });
        if let Some(r) = &reduced {
            value["after_substitution"] = json!(r.len());
        }
        emit(out, &value)?;
    } else {
        emit(out, &shown.to_json())?;
    }
    Ok(Verdict::Pass)
}

fn search(c: &Common, limit: Option<usize>, out: &mut dyn Write) -> CliResult {
    let sig = c.sig.ok_or_else(|| Error::InvalidArgument("search needs --sig d,m,l".into()))?;
    let opts = SearchOptions { limit, force: c.force, jobs: c.jobs, tol: c.tol.min(1e-12) };
    let found = search_permutation_images(sig, opts)?;
    emit(out, &json!({ "sig": sig.to_string(), "count": found.len(), "permutations": found }))?;
    Ok(Verdict::Pass)
}

fn entangle(c: &Common, gate: Option<&str>, out: &mut dyn Write) -> CliResult {
    let u = match gate {
        Some(g) => read_matrix(file_arg(g))?,
        None => c.matrix()?,
    };
    let d = match c.d {
        Some(d) => d,
        None => integer_root(u.nrows(), 2).ok_or(Error::NotPerfectPower { dim: u.nrows(), exponent: 2 })?,
    };
    let opts = EntanglementOptions { seed: c.seed, ..Default::default() };
    let note = "entangling two-qudit gates are universal given all local gates";
    if u.nrows() == d * d {
        let rep = is_entangling_with(&u, d, &opts)?;
        emit(out, &json!({ "report": rep, "universality": note }))?;
    } else {
        let reps = bipartition_reports(&u, d, &opts)?;
        emit(out, &json!({ "bipartitions": reps, "universality": note }))?;
    }
    Ok(Verdict::Pass)
}

fn selftest(c: &Common, quick: bool, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let outcomes = run_all(&Config { quick, seed: c.seed });
    write!(out, "{}", format_table(&outcomes)).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let failed: Vec<String> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id.to_string()).collect();
    if !failed.is_empty() {
        let _ = writeln!(err, "failing criteria: {}", failed.join(", "));
    }
    Ok(verdict(failed.is_empty()))
}

/// Parses `args` (including the program name) and runs the verb. Returns the
/// process exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let result = match &cli.verb {
        Verb::Construct(c) => construct(c, out),
        Verb::Verify(c) => verify(c, out),
        Verb::Orbit { common, script } => orbit(common, script, out),
        Verb::Ansatz { common, pattern, count, subst } => ansatz(common, pattern, *count, subst.as_deref(), out),
        Verb::Search { common, limit } => search(common, *limit, out),
        Verb::Entangle { common, gate } => entangle(common, gate.as_deref(), out),
        Verb::Selftest { common, quick } => selftest(common, *quick, out, err),
    };
    match result {
        Ok(Verdict::Pass) => EXIT_OK,
        Ok(Verdict::Fail) => EXIT_FAILED,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
