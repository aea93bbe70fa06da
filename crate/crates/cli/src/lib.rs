//! Command-line front end for `nearby-core`.
//!
//! [`run`] is the whole program; the binary only forwards `argv` and the
//! standard streams to it, which keeps every verb testable in-process.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use nearby_core::filtration::{
    check_admissible, class_of, constraints, fill_piece, kernel_k, psi_cofiltration,
    psi_filtration, weight_cofiltration_star, weight_filtration_shriek, Admissibility, Constraint,
    Filtration,
};
use nearby_core::kgroup::{
    format_twist, ic_to_shriek, ic_to_star, pi_class, psi_class, shriek_to_ic, star_to_ic,
    verify_all, verify_identity_named, IdentityReport, DEFAULT_BRANCH_CAP,
};
use nearby_core::monodromy::{grid, Arc, GridCell, JordanBlock};
use nearby_core::stalks::{
    complex_cohomology, e1_page, e2_abutment, psi_stalk_oracle, CohomologyProfile, E1Page,
    StalkTable,
};
use nearby_core::vanishing::{vanishing_report, CharacterDatum, DegreeInterval};
use nearby_core::{Characteristic, Class, Error, Stratum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "nearby",
    version,
    about = "Exact combinatorics of perverse nearby cycles on a semi-stable special fiber"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Dot,
}

#[derive(Args, Debug)]
struct Common {
    /// Number of branches of the special fiber.
    #[arg(long, default_value_t = 2)]
    r: u32,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Refuse branch counts above this.
    #[arg(long, default_value_t = DEFAULT_BRANCH_CAP)]
    max_r: u32,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ClassKind {
    /// The class of Ψ.
    Psi,
    /// `j_{I,!}Λ_I(twist)` expanded in the IC basis.
    Shriek,
    /// `j_{I,*}Λ_I(twist)` expanded in the IC basis.
    Star,
    /// `IC(I; twist)` expanded in the shriek basis.
    IcShriek,
    /// `IC(I; twist)` expanded in the star basis.
    IcStar,
    /// Kernel of `j_{I,!}Λ_I → IC(I; 0)`.
    Pi,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FiltrationKind {
    Psi,
    Cofil,
    Shriek,
    Star,
    Kernel,
    Fill,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Grothendieck-group classes.
    Class {
        #[arg(value_enum)]
        kind: ClassKind,
        #[command(flatten)]
        common: Common,
        #[arg(long = "I", value_delimiter = ',')]
        stratum: Option<Vec<u32>>,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        twist: i32,
    },
    /// Graded layers of a filtration, socle first.
    Filtration {
        #[arg(value_enum)]
        kind: FiltrationKind,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        select: FiltrationSelect,
    },
    /// Order constraints from non-split extensions inside Ψ.
    Constraints {
        #[command(flatten)]
        common: Common,
    },
    /// Admissibility of a filtration against the constraints.
    Check {
        #[arg(value_enum, required_unless_present = "input")]
        kind: Option<FiltrationKind>,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        select: FiltrationSelect,
        /// Filtration JSON file; `-` reads standard input.
        #[arg(long, conflicts_with = "kind")]
        input: Option<String>,
        /// Exchange two layers (0-based) before checking.
        #[arg(long, value_delimiter = ',', num_args = 1)]
        swap: Option<Vec<usize>>,
    },
    /// Stalk of Ψ at a point of Y_I^0, from the spectral sequence and from R^qΨ.
    Stalk {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        point: Point,
    },
    /// The E1 page of the stalk spectral sequence and its abutment.
    Ss {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        point: Point,
    },
    /// The monodromy operator on the graded grid.
    Monodromy {
        #[command(flatten)]
        common: Common,
    },
    /// Degree bounds for character-twisted nearby cycles.
    Vanishing {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        chi_support: Option<Vec<u32>>,
        /// Require the character to be generic.
        #[arg(long)]
        generic: bool,
    },
    /// Run identities from the built-in catalog.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Identity name, or `all`.
        #[arg(long, default_value = "all")]
        identity: String,
    },
    /// Graphviz picture of the grid, its constraints and the monodromy arcs.
    Diagram {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct FiltrationSelect {
    #[arg(long = "I", value_delimiter = ',')]
    stratum: Option<Vec<u32>>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    h: Option<u32>,
}

#[derive(Args, Debug)]
struct Point {
    #[arg(long = "I", value_delimiter = ',')]
    stratum: Option<Vec<u32>>,
    /// Relative dimension; defaults to r.
    #[arg(long, allow_negative_numbers = true)]
    d: Option<i32>,
    #[arg(long = "char", default_value_t = 0)]
    characteristic: u32,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = std::result::Result<(String, bool), Failure>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub label: String,
    pub r: u32,
    pub result: Admissibility,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StalkReport {
    pub char: Characteristic,
    pub abutment: StalkTable,
    pub oracle: StalkTable,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsReport {
    pub char: Characteristic,
    pub page: E1Page,
    pub cohomology: Vec<CohomologyProfile>,
    pub abutment: StalkTable,
    pub oracle: StalkTable,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonodromyReport {
    pub r: u32,
    pub cells: Vec<GridCell>,
    pub arcs: Vec<Arc>,
    pub kernel: Vec<GridCell>,
    pub jordan_type: Vec<JordanBlock>,
    pub nilpotency_order: u32,
}

/// Parses `args` (including the program name), runs the verb, and returns
/// the exit code. Data goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(cli.command) {
        Ok((text, passed)) => {
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_FAILED;
            }
            if passed {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn check_r(common: &Common) -> std::result::Result<(), Failure> {
    if common.r > common.max_r {
        return Err(Failure::Usage(format!(
            "--r {} exceeds --max-r {}; raise --max-r to allow it",
            common.r, common.max_r
        )));
    }
    Ok(())
}

fn stratum_arg(
    members: &Option<Vec<u32>>,
    r: u32,
    flag: &str,
) -> std::result::Result<Stratum, Failure> {
    match members {
        None => Err(Failure::Usage(format!("{flag} is required for this verb"))),
        Some(m) => Ok(Stratum::new(m.iter().copied(), r)?),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    text
}

fn only(format: Format, allowed: &[Format]) -> std::result::Result<(), Failure> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(Failure::Usage(
            format!("--format {format:?} is not available for this verb").to_lowercase(),
        ))
    }
}

fn execute(command: Command) -> Outcome {
    match command {
        Command::Class {
            kind,
            common,
            stratum,
            twist,
        } => {
            check_r(&common)?;
            only(common.format, &[Format::Table, Format::Json])?;
            let r = common.r;
            let need = || stratum_arg(&stratum, r, "--I");
            match kind {
                ClassKind::Psi => Ok((
                    render_class(&psi_class(r)?.twisted(twist), common.format),
                    true,
                )),
                ClassKind::Shriek => Ok((
                    render_class(&shriek_to_ic(&need()?, twist), common.format),
                    true,
                )),
                ClassKind::Star => Ok((
                    render_class(&star_to_ic(&need()?, twist), common.format),
                    true,
                )),
                ClassKind::IcShriek => Ok((
                    render_class(&ic_to_shriek(&need()?, twist), common.format),
                    true,
                )),
                ClassKind::IcStar => Ok((
                    render_class(&ic_to_star(&need()?, twist), common.format),
                    true,
                )),
                ClassKind::Pi => Ok((
                    render_class(&pi_class(&need()?).twisted(twist), common.format),
                    true,
                )),
            }
        }
        Command::Filtration {
            kind,
            common,
            select,
        } => {
            check_r(&common)?;
            only(common.format, &[Format::Table, Format::Json])?;
            let f = build_filtration(kind, common.r, &select)?;
            let text = match common.format {
                Format::Json => json(&f),
                _ => {
                    let mut s = f.to_string();
                    let _ = writeln!(s, "  class: {}", class_of(&f));
                    s
                }
            };
            Ok((text, true))
        }
        Command::Constraints { common } => {
            check_r(&common)?;
            only(common.format, &[Format::Table, Format::Json])?;
            let cs: Vec<Constraint> = constraints(common.r)?.into_iter().collect();
            let text = match common.format {
                Format::Json => json(&cs),
                _ => {
                    let mut s = format!("{} constraints for r = {}\n", cs.len(), common.r);
                    for c in &cs {
                        let _ = writeln!(s, "  slope {:+}  {c}", c.slope());
                    }
                    s
                }
            };
            Ok((text, true))
        }
        Command::Check {
            kind,
            common,
            select,
            input,
            swap,
        } => {
            check_r(&common)?;
            only(common.format, &[Format::Table, Format::Json])?;
            let mut f = match (kind, input) {
                (_, Some(path)) => read_filtration(&path)?,
                (Some(kind), None) => build_filtration(kind, common.r, &select)?,
                (None, None) => {
                    return Err(Failure::Usage("give a filtration kind or --input".into()))
                }
            };
            if f.r() > common.max_r {
                return Err(Failure::Usage(format!(
                    "filtration has r = {} above --max-r {}",
                    f.r(),
                    common.max_r
                )));
            }
            if let Some(pair) = swap {
                let [i, j] = pair[..] else {
                    return Err(Failure::Usage("--swap takes two layer indices".into()));
                };
                f = f.with_layers_swapped(i, j)?;
            }
            let result = check_admissible(&f, &constraints(f.r())?)?;
            let report = CheckReport {
                label: f.label().to_string(),
                r: f.r(),
                result,
            };
            let passed = report.result.admissible;
            let text = match common.format {
                Format::Json => json(&report),
                _ => {
                    let mut s = format!(
                        "{}: {} ({} constraints apply, {} violated)\n",
                        report.label,
                        if passed {
                            "admissible"
                        } else {
                            "NOT admissible"
                        },
                        report.result.checked,
                        report.result.violations.len()
                    );
                    for v in &report.result.violations {
                        let _ = writeln!(
                            s,
                            "  {}  (layers {} and {})",
                            v.constraint, v.earlier_layer, v.later_layer
                        );
                    }
                    s
                }
            };
            Ok((text, passed))
        }
        Command::Stalk { common, point } => {
            check_r(&common)?;
            only(common.format, &[Format::Table, Format::Json])?;
            let (i, d, char) = point_args(&common, &point)?;
            let abutment = e2_abutment(&i, d, char)?;
            let oracle = psi_stalk_oracle(&i, d)?;
            let matches = abutment == oracle;
            let report = StalkReport {
                char,
                abutment,
                oracle,
                matches,
            };
            let text = match common.format {
                Format::Json => json(&report),
                _ => {
                    let mut s = format!(
                        "stalk of Ψ at Y_{i}^0, r = {}, d = {d}, char {}\n",
                        common.r,
                        char.value()
                    );
                    s.push_str(&render_stalk(&report.abutment));
                    let _ = writeln!(
                        s,
                        "matches ∧^q R^1Ψ: {}",
                        if matches { "yes" } else { "NO" }
                    );
                    s
                }
            };
            Ok((text, matches))
        }
        Command::Ss { common, point } => {
            check_r(&common)?;
            only(common.format, &[Format::Table, Format::Json])?;
            let (i, d, char) = point_args(&common, &point)?;
            let page = e1_page(&i, d)?;
            let cohomology = page
                .rows
                .iter()
                .map(|row| complex_cohomology(&row.complex, char))
                .collect::<nearby_core::Result<Vec<_>>>()?;
            let abutment = e2_abutment(&i, d, char)?;
            let oracle = psi_stalk_oracle(&i, d)?;
            let matches = abutment == oracle;
            let report = SsReport {
                char,
                page,
                cohomology,
                abutment,
                oracle,
                matches,
            };
            let text = match common.format {
                Format::Json => json(&report),
                _ => render_ss(&report, &i),
            };
            Ok((text, matches))
        }
        Command::Monodromy { common } => {
            check_r(&common)?;
            only(common.format, &[Format::Table, Format::Json])?;
            let g = grid(common.r)?;
            let nilpotency_order = (1..=common.r)
                .find(|&j| g.rank_n(j) == 0)
                .unwrap_or(common.r);
            let report = MonodromyReport {
                r: common.r,
                cells: g.cells().to_vec(),
                arcs: g.arcs(),
                kernel: g.kernel_n(),
                jordan_type: g.jordan_type(),
                nilpotency_order,
            };
            let text = match common.format {
                Format::Json => json(&report),
                _ => {
                    let mut s = format!(
                        "monodromy grid, r = {}: {} cells\n",
                        report.r,
                        report.cells.len()
                    );
                    for h in 1..=report.r {
                        let row: Vec<String> = report
                            .cells
                            .iter()
                            .filter(|c| c.h == h)
                            .map(|c| format!("({},{}) {:>5}", c.h, c.k, format_twist(c.twist())))
                            .collect();
                        let _ = writeln!(s, "  level {h}: {}", row.join("  <-N-  "));
                    }
                    let kernel: Vec<String> = report.kernel.iter().map(|c| c.to_string()).collect();
                    let _ = writeln!(s, "ker N = {}", kernel.join(" "));
                    let jordan: Vec<String> = report
                        .jordan_type
                        .iter()
                        .map(|b| b.length.to_string())
                        .collect();
                    let _ = writeln!(s, "Jordan type: {}", jordan.join(" + "));
                    let _ = writeln!(s, "N^{} = 0", report.nilpotency_order);
                    s
                }
            };
            Ok((text, true))
        }
        Command::Vanishing {
            common,
            chi_support,
            generic,
        } => {
            check_r(&common)?;
            only(common.format, &[Format::Table, Format::Json])?;
            let support = match chi_support {
                Some(_) => stratum_arg(&chi_support, common.r, "--chi-support")?,
                None => Stratum::full(common.r)?,
            };
            let chi = if generic {
                CharacterDatum::new(support, true)?
            } else {
                CharacterDatum::from_support(support)
            };
            let report = vanishing_report(&chi)?;
            let bound = DegreeInterval::symmetric(support.len() as i32 - 1);
            let passed = report.concentration.is_subset(&bound);
            let text = match common.format {
                Format::Json => json(&report),
                _ => {
                    let mut s = format!(
                        "character supported on {support} ({}), r = {}\n",
                        if report.generic {
                            "generic"
                        } else {
                            "not generic"
                        },
                        report.r
                    );
                    for iv in &report.intervals {
                        let st = Stratum::new(iv.stratum.iter().copied(), report.r)?;
                        let _ = writeln!(s, "  IC_{st}: {}", iv.interval);
                    }
                    let _ = writeln!(s, "H^*(Ψ_χ) concentrated in {}", report.concentration);
                    s
                }
            };
            Ok((text, passed))
        }
        Command::Verify { common, identity } => {
            check_r(&common)?;
            only(common.format, &[Format::Table, Format::Json])?;
            let reports: Vec<IdentityReport> = if identity == "all" {
                verify_all(common.r)?
            } else {
                vec![verify_identity_named(&identity, common.r)?]
            };
            let passed = reports.iter().all(|r| r.passed);
            let text = match common.format {
                Format::Json => json(&reports),
                _ => {
                    let mut s = String::new();
                    for rep in &reports {
                        let _ = writeln!(
                            s,
                            "{:<14} r={} {:>6} instances  {}",
                            rep.identity,
                            rep.r,
                            rep.instances,
                            if rep.passed { "pass" } else { "FAIL" }
                        );
                        if let Some(c) = &rep.counterexample {
                            let _ = writeln!(s, "    at {}: {} != {}", c.instance, c.lhs, c.rhs);
                        }
                    }
                    s
                }
            };
            Ok((text, passed))
        }
        Command::Diagram { common } => {
            check_r(&common)?;
            only(common.format, &[Format::Table, Format::Dot])?;
            Ok((emit_diagram(common.r)?, true))
        }
    }
}

fn point_args(
    common: &Common,
    point: &Point,
) -> std::result::Result<(Stratum, i32, Characteristic), Failure> {
    let i = stratum_arg(&point.stratum, common.r, "--I")?;
    let d = point.d.unwrap_or(common.r as i32);
    let char = Characteristic::new(point.characteristic)?;
    Ok((i, d, char))
}

fn build_filtration(
    kind: FiltrationKind,
    r: u32,
    select: &FiltrationSelect,
) -> std::result::Result<Filtration, Failure> {
    let kh = || match (select.k, select.h) {
        (Some(k), Some(h)) => Ok((k, h)),
        _ => Err(Failure::Usage(
            "--k and --h are required for this filtration".into(),
        )),
    };
    Ok(match kind {
        FiltrationKind::Psi => psi_filtration(r)?,
        FiltrationKind::Cofil => psi_cofiltration(r)?,
        FiltrationKind::Shriek => {
            weight_filtration_shriek(&stratum_arg(&select.stratum, r, "--I")?)
        }
        FiltrationKind::Star => weight_cofiltration_star(&stratum_arg(&select.stratum, r, "--I")?),
        FiltrationKind::Kernel => {
            let (k, h) = kh()?;
            kernel_k(k, h, r)?
        }
        FiltrationKind::Fill => {
            let (k, h) = kh()?;
            fill_piece(k, h, r)?
        }
    })
}

fn read_filtration(path: &str) -> std::result::Result<Filtration, Failure> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| Failure::Usage(format!("reading standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("reading {path}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("parsing {path}: {e}")))
}

fn render_class<B: nearby_core::kgroup::Basis>(x: &Class<B>, format: Format) -> String {
    if format == Format::Json {
        return json(x);
    }
    let mut s = format!("{} terms, r = {}, {} basis\n", x.len(), x.r(), B::NAME);
    for (g, c) in x.terms() {
        let _ = writeln!(
            s,
            "  {c:>+5}  {}({};{})",
            B::SYMBOL,
            g.stratum,
            format_twist(g.twist)
        );
    }
    s
}

fn render_stalk(t: &StalkTable) -> String {
    let mut s = String::from("      q  twist   mult\n");
    for ((q, twist), m) in t.entries() {
        let _ = writeln!(s, "  {q:>5}  {:>5}  {m:>5}", format_twist(twist));
    }
    s
}

fn render_ss(report: &SsReport, i: &Stratum) -> String {
    let page = &report.page;
    let mut s = format!(
        "E1 page at Y_{i}^0, r = {}, d = {}, char {} (columns q = p - 1)\n",
        page.r,
        page.d,
        report.char.value()
    );
    let m = i.len();
    let _ = write!(s, "  {:<8}{:>6} |", "block", "twist");
    for q in 0..m {
        let _ = write!(s, "{:>6}", format!("q={q}"));
    }
    s.push_str(" | cohomology\n");
    for (row, h) in page.rows.iter().zip(&report.cohomology) {
        let _ = write!(
            s,
            "  {:<8}{:>6} |",
            format!("gr^{}_!", row.block),
            format_twist(row.twist)
        );
        for p in 1..=m {
            match p.checked_sub(row.complex.k()) {
                Some(idx) => {
                    let _ = write!(s, "{:>6}", row.complex.dims()[idx as usize]);
                }
                None => s.push_str(&format!("{:>6}", ".")),
            }
        }
        let dims: Vec<String> = h.dims.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(s, " | {}", dims.join(" "));
    }
    s.push_str("abutment:\n");
    s.push_str(&render_stalk(&report.abutment));
    let _ = writeln!(
        s,
        "matches ∧^q R^1Ψ: {}",
        if report.matches { "yes" } else { "NO" }
    );
    s
}

fn cell_of(piece: &nearby_core::IcClass) -> GridCell {
    let h = piece.stratum.len();
    let k = ((h as i32 - 1 - piece.twist) / 2 + 1) as u32;
    GridCell { h, k }
}

fn node_id(c: &GridCell) -> String {
    format!("c{}_{}", c.h, c.k)
}

/// DOT picture: one node per grid cell, a solid edge per constraint, and a
/// dashed edge per monodromy arc.
pub fn emit_diagram(r: u32) -> nearby_core::Result<String> {
    let g = grid(r)?;
    let cs: BTreeSet<Constraint> = constraints(r)?;
    let mut s = format!("digraph psi_r{r} {{\n  rankdir=BT;\n  node [shape=ellipse];\n");
    for c in g.cells() {
        let _ = writeln!(
            s,
            "  {} [label=\"({},{}) IC^({})({})\"];",
            node_id(c),
            c.h,
            c.k,
            c.h,
            format_twist(c.twist())
        );
    }
    for c in &cs {
        let _ = writeln!(
            s,
            "  {} -> {} [style=solid, label=\"{}>{}\"];",
            node_id(&cell_of(&c.earlier)),
            node_id(&cell_of(&c.later)),
            c.earlier.stratum,
            c.later.stratum
        );
    }
    for a in g.arcs() {
        let _ = writeln!(
            s,
            "  {} -> {} [style=dashed, label=\"N\"];",
            node_id(&a.from),
            node_id(&a.to)
        );
    }
    s.push_str("}\n");
    Ok(s)
}
