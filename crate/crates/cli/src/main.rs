use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use relpurity::closure::{fsc_closure, generic_status, is_definable, pinj_basis, ClassDescriptor};
use relpurity::construct::{ar_translate, construct_d, construct_l, transpose};
use relpurity::decomp::decompose;
use relpurity::format::{
    declared_field, parse_matrix_set, parse_modules, parse_representation, parse_sequence, write_modules,
    write_representation,
};
use relpurity::kronecker::classify;
use relpurity::purity::{implies, implies_classes, implies_kronecker, ind_of_shape, ind_set, is_pure, Method, ShapeFamily, Source};
use relpurity::verify::{example_4_3, run_suite, SUITES};
use relpurity::{Error, Field, FieldSpec, Fp, Rationals, Representation};

#[derive(Parser)]
#[command(name = "relpurity", version, about = "Relative purity and Kronecker module computations")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Ground field (`gf5`, `gf 7`, `q`); files that name a field take precedence.
    #[arg(long, global = true)]
    field: Option<String>,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// L_H for every matrix of a matrix file.
    ConstructL {
        #[arg(long)]
        input: PathBuf,
    },
    /// D_H for every matrix of a matrix file.
    ConstructD {
        #[arg(long)]
        input: PathBuf,
    },
    /// Indecomposable summands with multiplicities.
    Decompose {
        #[arg(long)]
        input: PathBuf,
    },
    /// Kronecker descriptor of an indecomposable module.
    Classify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Auslander–Bridger transpose.
    Transpose {
        #[arg(long)]
        input: PathBuf,
    },
    /// Auslander–Reiten translate.
    Translate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Generator and relation counts.
    GenRel {
        #[arg(long)]
        input: PathBuf,
    },
    /// Purity of a short exact sequence with respect to a matrix set.
    IsPure {
        #[arg(long)]
        seq: PathBuf,
        #[arg(long)]
        matrices: PathBuf,
        /// `default` (hom, tensor), `all`, or a comma-separated list.
        #[arg(long, default_value = "default")]
        method: String,
    },
    /// Whether T-purity implies S-purity and conversely. Sources are matrix or
    /// module files, `shape:m,n` (with `aleph0` allowed) or `desc:<class>`.
    ComparePurity {
        #[arg(long)]
        t: String,
        #[arg(long)]
        s: String,
    },
    /// Indecomposable summands of L_H over all matrices of a shape.
    IndOfShape {
        #[arg(long)]
        shape: String,
    },
    /// Indecomposable relative pure-injectives of a finite class.
    PinjBasis {
        #[arg(long)]
        input: PathBuf,
    },
    /// Full-support closure of a class.
    Closure {
        #[arg(long)]
        descriptor: String,
    },
    /// Definability of the class of relative pure-injectives.
    Definable {
        #[arg(long)]
        descriptor: String,
    },
    /// Whether the generic module is relatively pure-injective.
    GenericStatus {
        #[arg(long)]
        descriptor: String,
    },
    /// Checks the four claims about (m,n)-purity over the Kronecker algebra.
    #[command(name = "example-4-3")]
    Example43 {
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Runs the property suites.
    Verify {
        /// A suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

/// Key-value report lines, printed as `key=value` or aligned text.
#[derive(Default)]
struct Report {
    lines: Vec<(String, String)>,
}

impl Report {
    fn new(seed: u64) -> Self {
        Report {
            lines: vec![("seed".into(), seed.to_string())],
        }
    }

    fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.lines.push((key.into(), value.to_string()));
    }

    fn render(&self, format: OutputFormat) -> String {
        let width = self.lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in &self.lines {
            match format {
                OutputFormat::Machine => out.push_str(&format!("{k}={v}\n")),
                OutputFormat::Text => out.push_str(&format!("{k:<width$}  {v}\n")),
            }
        }
        out
    }
}

enum Output {
    Report(Report),
    /// File-format text (representations).
    Document(String),
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: relpurity::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| match e {
        Error::Internal(_) => Failure::Internal(e.to_string()),
        _ => Failure::Input(format!("{}: {e}", path.display())),
    })
}

/// Field named in any input text, else `--field`, else GF(5).
fn choose_field(common: &Common, texts: &[(&Path, &str)]) -> Result<FieldSpec, Failure> {
    for (path, text) in texts {
        if let Some(spec) = declared_field(text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))? {
            return Ok(spec);
        }
    }
    match &common.field {
        Some(s) => FieldSpec::parse(s).map_err(|e| Failure::Input(format!("--field: {e}"))),
        None => Ok(FieldSpec::Prime(5)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok((out, ok)) => {
            let text = match out {
                Output::Report(r) => r.render(cli.common.format),
                Output::Document(d) => d,
            };
            if let Some(path) = &cli.common.output {
                if let Err(e) = fs::write(path, &text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{text}");
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

/// Source texts the command reads, used to pick the field.
fn inputs(cmd: &Command) -> Vec<PathBuf> {
    match cmd {
        Command::ConstructL { input }
        | Command::ConstructD { input }
        | Command::Decompose { input }
        | Command::Classify { input }
        | Command::Transpose { input }
        | Command::Translate { input }
        | Command::GenRel { input }
        | Command::PinjBasis { input } => vec![input.clone()],
        Command::IsPure { seq, matrices, .. } => vec![seq.clone(), matrices.clone()],
        Command::ComparePurity { t, s } => [t, s]
            .into_iter()
            .filter(|x| !x.starts_with("shape:") && !x.starts_with("desc:"))
            .map(PathBuf::from)
            .collect(),
        _ => Vec::new(),
    }
}

fn dispatch(cli: &Cli) -> Result<(Output, bool), Failure> {
    let paths = inputs(&cli.command);
    let mut texts = Vec::new();
    for p in &paths {
        texts.push(read(p)?);
    }
    let pairs: Vec<(&Path, &str)> = paths.iter().map(|p| p.as_path()).zip(texts.iter().map(|t| t.as_str())).collect();
    match choose_field(&cli.common, &pairs)? {
        FieldSpec::Prime(p) => run(cli, &Fp::new(p), &pairs),
        FieldSpec::Rationals => run(cli, &Rationals, &pairs),
    }
}

fn single<F: Field>(field: &F, pairs: &[(&Path, &str)]) -> Result<Representation<F>, Failure> {
    let (path, text) = pairs[0];
    in_file(path, parse_representation(text, field))
}

fn emit_modules<F: Field>(ms: &[Representation<F>]) -> Output {
    if ms.len() == 1 {
        Output::Document(write_representation(&ms[0]))
    } else {
        Output::Document(write_modules(ms))
    }
}

fn class_text(set: impl IntoIterator<Item = relpurity::kronecker::IndecompDescriptor>) -> String {
    ClassDescriptor::from_finite(set).to_string()
}

fn run<F: Field>(cli: &Cli, field: &F, pairs: &[(&Path, &str)]) -> Result<(Output, bool), Failure> {
    let seed = cli.common.seed;
    let mut rep = Report::new(seed);
    match &cli.command {
        Command::ConstructL { .. } | Command::ConstructD { .. } => {
            let (path, text) = pairs[0];
            let hs = in_file(path, parse_matrix_set(text, field))?;
            let left = matches!(cli.command, Command::ConstructL { .. });
            let ms: Vec<Representation<F>> =
                hs.matrices.iter().map(|h| if left { construct_l(h) } else { construct_d(h) }).collect();
            if ms.is_empty() {
                return Err(Failure::Input(format!("{}: no matrices", path.display())));
            }
            Ok((emit_modules(&ms), true))
        }
        Command::Transpose { .. } => Ok((Output::Document(write_representation(&transpose(&single(field, pairs)?))), true)),
        Command::Translate { .. } => {
            let m = single(field, pairs)?;
            if m.side() != relpurity::Side::Left {
                return Err(Failure::Input("translate expects a left module".into()));
            }
            Ok((Output::Document(write_representation(&ar_translate(&m))), true))
        }
        Command::Decompose { .. } => {
            let m = single(field, pairs)?;
            let d = decompose(&m, seed);
            rep.push("summands", d.summands.len());
            rep.push("pieces", d.pieces.len());
            let kron = m.quiver().is_kronecker();
            for (i, p) in d.pieces.iter().enumerate() {
                let k = i + 1;
                if kron {
                    let name = classify(&p.module).map_or_else(|e| format!("unclassified ({e})"), |c| c.to_string());
                    rep.push(format!("piece{k}"), name);
                }
                let dims: Vec<String> = p.module.dims().iter().map(|x| x.to_string()).collect();
                rep.push(format!("piece{k}.dims"), dims.join(","));
                rep.push(format!("piece{k}.multiplicity"), p.multiplicity);
            }
            Ok((Output::Report(rep), true))
        }
        Command::Classify { .. } => {
            let m = single(field, pairs)?;
            let d = classify(&m)?;
            match cli.common.format {
                OutputFormat::Text => Ok((Output::Document(format!("{d}\n")), true)),
                OutputFormat::Machine => {
                    rep.push("descriptor", d);
                    Ok((Output::Report(rep), true))
                }
            }
        }
        Command::GenRel { .. } => {
            let g = single(field, pairs)?.gen_rel();
            rep.push("gen", g.gen);
            rep.push("rel", g.rel);
            rep.push("Gen", g.gen_total);
            rep.push("Rel", g.rel_total);
            Ok((Output::Report(rep), true))
        }
        Command::IsPure { method, .. } => {
            let methods = Method::parse_list(method).map_err(|e| Failure::Input(format!("--method: {e}")))?;
            let s = in_file(pairs[0].0, parse_sequence(pairs[0].1, field))?;
            let hs = in_file(pairs[1].0, parse_matrix_set(pairs[1].1, field))?;
            let r = is_pure(&s, &hs, &methods)?;
            for (m, v) in &r.verdicts {
                rep.push(m.name(), if *v { "pure" } else { "impure" });
            }
            let verdict = match r.overall {
                Some(true) => "pure",
                Some(false) => "impure",
                None => "disagreement",
            };
            rep.push("verdict", verdict);
            if let Some(k) = r.witness {
                rep.push("witness", format!("H#{}", k + 1));
            }
            if let Some(k) = r.disagreement {
                rep.push("disagreement", format!("H#{}", k + 1));
            }
            Ok((Output::Report(rep), r.overall == Some(true)))
        }
        Command::ComparePurity { t, s } => {
            compare(field, seed, t, s, pairs, &mut rep)?;
            Ok((Output::Report(rep), true))
        }
        Command::IndOfShape { shape } => {
            let fam: ShapeFamily = shape.parse().map_err(|e| Failure::Input(format!("--shape: {e}")))?;
            rep.push("shape", fam);
            rep.push("ind", ind_of_shape(fam)?);
            Ok((Output::Report(rep), true))
        }
        Command::PinjBasis { .. } => {
            let (path, text) = pairs[0];
            let mods = if text.lines().any(|l| l.trim_start().starts_with("matrix")) {
                in_file(path, parse_matrix_set(text, field))?.l_modules()
            } else {
                in_file(path, parse_modules(text, field))?
            };
            rep.push("pinj", class_text(pinj_basis(&mods, seed)?));
            Ok((Output::Report(rep), true))
        }
        Command::Closure { descriptor } => {
            let c = parse_class(descriptor, field)?;
            rep.push("closure", fsc_closure(&c));
            Ok((Output::Report(rep), true))
        }
        Command::Definable { descriptor } => {
            let c = parse_class(descriptor, field)?;
            rep.push("definable", is_definable(&c));
            Ok((Output::Report(rep), true))
        }
        Command::GenericStatus { descriptor } => {
            let c = parse_class(descriptor, field)?;
            rep.push("generic_pure_injective", generic_status(&c)?);
            Ok((Output::Report(rep), true))
        }
        Command::Example43 { n } => {
            if *n == 0 {
                return Err(Failure::Input("--n must be positive".into()));
            }
            let r = example_4_3(field, *n, seed)?;
            rep.push("field", field.spec());
            rep.push("n", n);
            for line in r.machine().lines() {
                if let Some((k, v)) = line.split_once('=') {
                    rep.push(k, v);
                }
            }
            Ok((Output::Report(rep), r.passed()))
        }
        Command::Verify { suite } => {
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            let mut all_ok = true;
            let mut out = format!("seed={seed}\n");
            for name in names {
                let r = run_suite(name, seed)?;
                all_ok &= r.passed();
                match cli.common.format {
                    OutputFormat::Machine => out.push_str(&r.machine()),
                    OutputFormat::Text => {
                        out.push_str(&format!(
                            "{:<14} {}  ({} checks, {} failed)\n",
                            r.name,
                            if r.passed() { "pass" } else { "FAIL" },
                            r.cases,
                            r.failed
                        ));
                        for f in &r.failures {
                            out.push_str(&format!("    {f}\n"));
                        }
                    }
                }
            }
            out.push_str(&format!("verdict={}\n", if all_ok { "pass" } else { "fail" }));
            Ok((Output::Document(out), all_ok))
        }
    }
}

fn parse_class<F: Field>(text: &str, field: &F) -> Result<ClassDescriptor, Failure> {
    let c: ClassDescriptor = text.parse().map_err(|e| Failure::Input(format!("descriptor: {e}")))?;
    Ok(c.canonicalize_points(field)?)
}

enum Side<F: Field> {
    Concrete(Source<F>),
    Class(ClassDescriptor),
}

fn source<F: Field>(spec: &str, field: &F, pairs: &[(&Path, &str)]) -> Result<Side<F>, Failure> {
    if let Some(shape) = spec.strip_prefix("shape:") {
        let fam: ShapeFamily = shape.parse().map_err(|e| Failure::Input(format!("`{spec}`: {e}")))?;
        return Ok(Side::Class(ind_of_shape(fam)?));
    }
    if let Some(d) = spec.strip_prefix("desc:") {
        return Ok(Side::Class(parse_class(d, field)?));
    }
    let (path, text) = pairs
        .iter()
        .find(|(p, _)| p.as_os_str() == spec)
        .copied()
        .ok_or_else(|| Failure::Internal(format!("source `{spec}` was not read")))?;
    if text.lines().any(|l| l.trim_start().starts_with("matrix")) {
        Ok(Side::Concrete(Source::Matrices(in_file(path, parse_matrix_set(text, field))?)))
    } else {
        Ok(Side::Concrete(Source::Modules(in_file(path, parse_modules(text, field))?)))
    }
}

fn compare<F: Field>(field: &F, seed: u64, t: &str, s: &str, pairs: &[(&Path, &str)], rep: &mut Report) -> Result<(), Failure> {
    let (ts, ss) = (source(t, field, pairs)?, source(s, field, pairs)?);
    // Witnesses are members of one class outside the other and the projectives.
    let (forward, backward): (Option<String>, Option<String>) = match (&ts, &ss) {
        (Side::Concrete(a), Side::Concrete(b)) => {
            let kron = match a {
                Source::Matrices(m) => m.quiver.is_kronecker(),
                Source::Modules(v) => v.first().is_none_or(|m| m.base_quiver().is_kronecker()),
            };
            if kron {
                (
                    implies_kronecker(a, b, seed)?.map(|d| d.to_string()),
                    implies_kronecker(b, a, seed)?.map(|d| d.to_string()),
                )
            } else {
                let dims = |m: Representation<F>| format!("module with dims {:?}", m.dims());
                (implies(a, b, seed)?.map(dims), implies(b, a, seed)?.map(dims))
            }
        }
        _ => {
            let class = |x: &Side<F>| -> Result<ClassDescriptor, Failure> {
                match x {
                    Side::Class(c) => Ok(c.clone()),
                    Side::Concrete(src) => Ok(ClassDescriptor::from_finite(ind_set(src, seed)?)),
                }
            };
            let (a, b) = (class(&ts)?, class(&ss)?);
            rep.push("t_class", &a);
            rep.push("s_class", &b);
            (
                implies_classes(&a, &b, field).map(|d| d.to_string()),
                implies_classes(&b, &a, field).map(|d| d.to_string()),
            )
        }
    };
    rep.push("t_implies_s", forward.is_none());
    if let Some(w) = &forward {
        rep.push("witness", w);
    }
    rep.push("s_implies_t", backward.is_none());
    if let Some(w) = &backward {
        rep.push("converse_witness", w);
    }
    rep.push("equivalent", forward.is_none() && backward.is_none());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<(String, bool), Failure> {
        let mut argv = vec!["relpurity"];
        argv.extend_from_slice(args);
        let cli = Cli::try_parse_from(argv).expect("arguments parse");
        let (out, ok) = dispatch(&cli)?;
        let text = match out {
            Output::Report(r) => r.render(cli.common.format),
            Output::Document(d) => d,
        };
        Ok((text, ok))
    }

    fn temp(name: &str, body: &str) -> PathBuf {
        let path = std::env::temp_dir().join(format!("relpurity-{}-{name}", std::process::id()));
        fs::write(&path, body).expect("temp file");
        path
    }

    const SEQ: &str = "field gf 5\nquiver kronecker\nside left\nmodule A\ndims 1 0\nmodule B\ndims 2 1\narrow a\n1\n0\narrow b\n0\n1\nmodule C\ndims 1 1\narrow a\n0\narrow b\n1\nmap f\nvertex 1\n1\n0\nmap g\nvertex 1\n0 1\nvertex 2\n1\n";

    #[test]
    fn construct_l_emits_a_parsable_module() {
        let h = temp("pencil.txt", "field gf 5\nmatrix 1 1\na + 2*b\n");
        let (text, ok) = run_args(&["construct-l", "--input", h.to_str().unwrap()]).ok().unwrap();
        assert!(ok);
        let m = parse_representation(&text, &Fp::new(5)).unwrap();
        assert_eq!(m.dims(), [2, 1]);
    }

    #[test]
    fn impure_sequences_report_a_witness() {
        let s = temp("seq.txt", SEQ);
        let h = temp("a.txt", "field gf 5\nmatrix 1 1\nb\nmatrix 1 1\na\n");
        let args = ["is-pure", "--seq", s.to_str().unwrap(), "--matrices", h.to_str().unwrap(), "--format", "machine"];
        let (text, ok) = run_args(&args).ok().unwrap();
        assert!(!ok);
        assert!(text.contains("verdict=impure"));
        assert!(text.lines().any(|l| l.starts_with("witness=H#")));
    }

    #[test]
    fn bad_input_is_an_input_error() {
        let h = temp("bad.txt", "field gf 5\nmatrix 1 2\na\n");
        assert!(matches!(run_args(&["construct-l", "--input", h.to_str().unwrap()]), Err(Failure::Input(_))));
        assert!(matches!(run_args(&["ind-of-shape", "--shape", "2,aleph0"]), Err(Failure::Input(_))));
        assert!(matches!(run_args(&["generic-status", "--descriptor", "P*>=0"]), Err(Failure::Input(_))));
    }

    #[test]
    fn shapes_compare_with_a_witness() {
        let (text, ok) = run_args(&["compare-purity", "--t", "shape:1,1", "--s", "shape:aleph0,1", "--format", "machine"])
            .ok()
            .unwrap();
        assert!(ok);
        assert!(text.contains("t_implies_s=false\nwitness=I0\ns_implies_t=true\n"));
    }

    #[test]
    fn file_field_wins_over_the_flag() {
        let h = temp("gf7.txt", "field gf 7\nmatrix 1 1\na + 6*b\n");
        let (text, _) = run_args(&["construct-l", "--input", h.to_str().unwrap(), "--field", "gf3"]).ok().unwrap();
        assert!(text.starts_with("field gf 7\n"));
    }

    #[test]
    fn reports_carry_the_seed() {
        let (text, _) = run_args(&["closure", "--descriptor", "I*>=0", "--seed", "9", "--format", "machine"]).ok().unwrap();
        assert_eq!(text, "seed=9\nclosure=I*>=0 prufer[*] generic\n");
    }
}
