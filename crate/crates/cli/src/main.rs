//! `tlimm`: Temperley-Lieb immanants and %-immanants from the command line.
//!
//! Exit codes: 0 success, 2 parse error, 3 precondition or size limit, 4 mismatch or
//! failed verification.

use std::fmt::{self, Display, Write as _};
use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use tlimm::classify::{self, DecompositionKind};
use tlimm::immanant::{self, hull, Immanant, RationalMatrix, SkewShape};
use tlimm::limits;
use tlimm::tl::{self, NonCrossingMatching, Vertex};
use tlimm::verify::{self, Config, Suite};
use tlimm::Permutation;

#[derive(Parser)]
#[command(
    name = "tlimm",
    version,
    about = "Temperley-Lieb immanants and %-immanants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficient f_w(u) of x_u in Imm_w
    Coeff {
        w: String,
        u: String,
        #[arg(long, value_enum, default_value_t = Method::Oracle)]
        method: Method,
    },
    /// All coefficients of Imm_w
    Immanant {
        w: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// The smallest skew shape containing w
    Hull { w: String },
    /// The non-crossing matching beta(w)
    Ncm { w: String },
    /// Block parameters of a 321-, 1324-avoiding, 2143-containing permutation
    Classify { w: String },
    /// sign(w) Imm_w as a sum of at most two %-immanants
    Decompose {
        w: String,
        /// Skip the comparison against the computed immanant
        #[arg(long)]
        no_validate: bool,
    },
    /// Signed complementary-minor expansion of Imm_w
    Expand { w: String },
    /// 1324-relatedness classes of S_n with their hulls
    Classes { n: usize },
    /// Evaluate an immanant (JSON file) on a matrix (JSON file)
    Eval { immanant: String, matrix: String },
    /// Draw a matching, a hull or a decomposition
    Render {
        #[arg(value_enum)]
        object: Object,
        w: String,
        #[arg(long, value_enum, default_value_t = RenderFormat::Ascii)]
        format: RenderFormat,
    },
    /// Run acceptance suites
    Verify {
        /// A1..A10 or all
        #[arg(long, default_value = "all")]
        suite: String,
        /// Largest n checked (defaults per suite)
        #[arg(long)]
        n: Option<usize>,
        /// Worker threads
        #[arg(long)]
        jobs: Option<usize>,
        /// Random pairs for sampled checks
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// One JSON report per line
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Oracle,
    Formula,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Object {
    Ncm,
    Hull,
    Decompose,
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderFormat {
    Ascii,
    Svg,
}

#[derive(Debug)]
enum CliError {
    Parse(String),
    Precondition(String),
    Mismatch(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Mismatch(_) => 4,
        }
    }
}

impl Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) | CliError::Precondition(m) | CliError::Mismatch(m) => {
                f.write_str(m)
            }
        }
    }
}

fn pre(e: impl Display) -> CliError {
    CliError::Precondition(e.to_string())
}

fn parse_perm(s: &str) -> Result<Permutation, CliError> {
    s.parse()
        .map_err(|e| CliError::Parse(format!("{s:?}: {e}")))
}

fn within_limit(w: &Permutation) -> Result<(), CliError> {
    limits::check(w.n()).map_err(pre)
}

fn to_json(v: &impl serde::Serialize) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            if !out.is_empty() {
                println!("{out}");
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Mismatch(out)) => {
            println!("{out}");
            ExitCode::from(4)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cmd: Command) -> Result<String, CliError> {
    match cmd {
        Command::Coeff { w, u, method } => coeff(&parse_perm(&w)?, &parse_perm(&u)?, method),
        Command::Immanant { w, format } => {
            let w = parse_perm(&w)?;
            within_limit(&w)?;
            let f = immanant::tl_immanant(&w).map_err(pre)?;
            Ok(match format {
                Format::Json => to_json(&f),
                Format::Table => f
                    .terms()
                    .map(|(u, c)| format!("{u}\t{c}"))
                    .collect::<Vec<_>>()
                    .join("\n"),
            })
        }
        Command::Hull { w } => Ok(to_json(&hull(&parse_perm(&w)?))),
        Command::Ncm { w } => Ok(tl::beta(&parse_perm(&w)?).map_err(pre)?.to_string()),
        Command::Classify { w } => {
            let w = parse_perm(&w)?;
            Ok(to_json(&classify::classify_2143(&w).map_err(pre)?))
        }
        Command::Decompose { w, no_validate } => {
            Ok(to_json(&decompose(&parse_perm(&w)?, !no_validate)?))
        }
        Command::Expand { w } => expand(&parse_perm(&w)?),
        Command::Classes { n } => {
            let classes = immanant::related_classes(n).map_err(pre)?;
            let out: Vec<serde_json::Value> = classes
                .iter()
                .map(|c| json!({ "hull": hull(&c[0]), "members": c }))
                .collect();
            Ok(to_json(&out))
        }
        Command::Eval { immanant, matrix } => {
            let read =
                |p: &str| fs::read_to_string(p).map_err(|e| CliError::Parse(format!("{p}: {e}")));
            let f: Immanant = serde_json::from_str(&read(&immanant)?)
                .map_err(|e| CliError::Parse(format!("{immanant}: {e}")))?;
            let x = RationalMatrix::from_json(&read(&matrix)?)
                .map_err(|e| CliError::Parse(format!("{matrix}: {e}")))?;
            Ok(f.evaluate(&x).map_err(pre)?.to_string())
        }
        Command::Render { object, w, format } => render(object, &parse_perm(&w)?, format),
        Command::Verify {
            suite,
            n,
            jobs,
            samples,
            seed,
            json,
        } => {
            let suites: Vec<Suite> = if suite.eq_ignore_ascii_case("all") {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse().map_err(|e| CliError::Parse(format!("{e}")))?]
            };
            let defaults = Config::default();
            let cfg = Config {
                max_n: n,
                jobs,
                samples: samples.unwrap_or(defaults.samples),
                seed: seed.unwrap_or(defaults.seed),
                ..defaults
            };
            let mut lines = Vec::new();
            let mut failed = false;
            for s in suites {
                let r = verify::run(s, &cfg).map_err(pre)?;
                failed |= !r.passed();
                eprintln!("{} took {:.2}s", r.suite, r.elapsed.as_secs_f64());
                lines.push(if json { to_json(&r) } else { r.to_string() });
            }
            let out = lines.join("\n");
            if failed {
                Err(CliError::Mismatch(out))
            } else {
                Ok(out)
            }
        }
    }
}

fn coeff(w: &Permutation, u: &Permutation, method: Method) -> Result<String, CliError> {
    if w.n() != u.n() {
        return Err(pre(format!("{w} and {u} have different sizes")));
    }
    if !w.avoids_321() {
        return Err(pre(format!("{w} contains the pattern 321")));
    }
    within_limit(w)?;
    let oracle = || tl::f_coeff(w, u).map_err(pre);
    let formula = || classify::closed_form_coeff(w, u).map_err(pre);
    match method {
        Method::Oracle => Ok(oracle()?.to_string()),
        Method::Formula => Ok(formula()?.to_string()),
        Method::Both => {
            let (a, b) = (oracle()?, formula()?);
            if a == b {
                Ok(format!("{a} {b} OK"))
            } else {
                Err(CliError::Mismatch(format!("{a} {b} MISMATCH")))
            }
        }
    }
}

fn decompose(w: &Permutation, validate: bool) -> Result<classify::Decomposition, CliError> {
    if validate {
        within_limit(w)?;
    }
    let validate = validate && w.n() <= classify::VALIDATE_UP_TO;
    classify::decompose_with(w, validate).map_err(|e| match e {
        classify::ClassifyError::ValidationFailed(_) => CliError::Mismatch(e.to_string()),
        e => pre(e),
    })
}

fn expand(w: &Permutation) -> Result<String, CliError> {
    if w.avoids(&tlimm::perm::perm("2143")) {
        let (v, plan) = classify::reduce_to_special(w).map_err(pre)?;
        let terms: Vec<serde_json::Value> = classify::rect_cm_expansion(&v)
            .map_err(pre)?
            .into_iter()
            .map(|(i, j)| json!({ "rows": i, "cols": j }))
            .collect();
        Ok(to_json(&json!({
            "kind": "rect",
            "sign": w.sign(),
            "reduced": v,
            "transforms": plan,
            "terms": terms,
        })))
    } else {
        let terms = classify::cm_expansion(w).map_err(pre)?;
        Ok(to_json(
            &json!({ "kind": "cm", "sign": w.sign(), "terms": terms }),
        ))
    }
}

fn render(object: Object, w: &Permutation, format: RenderFormat) -> Result<String, CliError> {
    match (object, format) {
        (Object::Ncm, f) => {
            let m = tl::beta(w).map_err(pre)?;
            Ok(match f {
                RenderFormat::Ascii => ncm_ascii(&m),
                RenderFormat::Svg => ncm_svg(&m),
            })
        }
        (Object::Hull, RenderFormat::Ascii) => Ok(shape_ascii(&hull(w))),
        (Object::Hull, RenderFormat::Svg) => Ok(shapes_svg(&[hull(w)])),
        (Object::Decompose, f) => {
            let d = decompose(w, true)?;
            if d.kind == DecompositionKind::None {
                return Ok(format!("{w}: Imm_w is not a combination of %-immanants"));
            }
            Ok(match f {
                RenderFormat::Ascii => {
                    let sign = if d.sign == Some(-1) { "-" } else { "" };
                    let mut out =
                        format!("{sign}Imm_{w} = sum of {} %-immanant(s)", d.shapes.len());
                    for s in &d.shapes {
                        write!(out, "\n\n{s}\n{}", shape_ascii(s)).unwrap();
                    }
                    out
                }
                RenderFormat::Svg => shapes_svg(&d.shapes),
            })
        }
    }
}

/// Two columns, `1..n` and `1'..n'`; each pair shares a letter.
fn ncm_ascii(m: &NonCrossingMatching) -> String {
    let n = m.n();
    let mut tag = vec![' '; 2 * n + 1];
    for (k, (x, y)) in m.pairs().into_iter().enumerate() {
        let c = (b'a' + (k % 26) as u8) as char;
        tag[x.position(n)] = c;
        tag[y.position(n)] = c;
    }
    let width = n.to_string().len();
    let mut out = String::new();
    for i in 1..=n {
        let l = tag[Vertex::Unprimed(i).position(n)];
        let r = tag[Vertex::Primed(i).position(n)];
        writeln!(out, "{i:>width$} {l}   {r} {i}'").unwrap();
    }
    out.push_str(&m.to_string());
    out
}

fn ncm_svg(m: &NonCrossingMatching) -> String {
    let n = m.n();
    let (left, right, step) = (40.0, 200.0, 30.0);
    let y = |i: usize| step * i as f64;
    let x = |v: Vertex| {
        if matches!(v, Vertex::Unprimed(_)) {
            left
        } else {
            right
        }
    };
    let mut out = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="240" height="{}" font-family="monospace" font-size="12">"#,
        y(n + 1)
    );
    for (a, b) in m.pairs() {
        let (xa, ya, xb, yb) = (x(a), y(a.label()), x(b), y(b.label()));
        let (ca, cb) = if xa == xb {
            let bend = (15.0 * (a.label().abs_diff(b.label())) as f64).min(70.0);
            let bend = if xa == left { bend } else { -bend };
            (xa + bend, xb + bend)
        } else {
            (120.0, 120.0)
        };
        write!(
            out,
            r#"<path d="M {xa} {ya} C {ca} {ya}, {cb} {yb}, {xb} {yb}" fill="none" stroke="black"/>"#
        )
        .unwrap();
    }
    for i in 1..=n {
        write!(
            out,
            r#"<circle cx="{left}" cy="{0}" r="3"/><circle cx="{right}" cy="{0}" r="3"/><text x="{1}" y="{2}">{i}</text><text x="{3}" y="{2}">{i}'</text>"#,
            y(i),
            left - 25.0,
            y(i) + 4.0,
            right + 10.0
        )
        .unwrap();
    }
    out.push_str("</svg>");
    out
}

/// `#` for cells in the shape, `.` otherwise.
fn shape_ascii(s: &SkewShape) -> String {
    let n = s.n();
    (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| if s.contains(i, j) { "#" } else { "." })
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn shapes_svg(shapes: &[SkewShape]) -> String {
    let cell = 20;
    let n = shapes.first().map_or(0, |s| s.n());
    let gap = cell;
    let width = shapes.len() * (n * cell + gap) + gap;
    let height = n * cell + 2 * gap;
    let mut out =
        format!(r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">"#);
    for (k, s) in shapes.iter().enumerate() {
        let x0 = gap + k * (n * cell + gap);
        for i in 1..=n {
            for j in 1..=n {
                let fill = if s.contains(i, j) { "#999" } else { "white" };
                write!(
                    out,
                    r#"<rect x="{}" y="{}" width="{cell}" height="{cell}" fill="{fill}" stroke="black"/>"#,
                    x0 + (j - 1) * cell,
                    gap + (i - 1) * cell
                )
                .unwrap();
            }
        }
    }
    out.push_str("</svg>");
    out
}
