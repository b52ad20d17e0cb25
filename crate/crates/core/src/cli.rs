//! The `pgl2` command line.
//!
//! Every verb prints a header naming the field and its modulus so that
//! output is self-describing; `--json` switches to a machine format. Exit
//! status is 2 for usage errors, 1 when verification finds a predicted class
//! missing from the enumeration, 0 otherwise.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::addsub::AdditiveSubgroup;
use crate::atlas::{
    brute_force_atlas, predicted_atlas, verify, ClassDescriptor, Source, DEFAULT_ORACLE_CAP,
};
use crate::construct::{self, FamilyParams};
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::groups::{are_conjugate, closure, recognize, Family, Subgroup};
use crate::pgl2::{Pgl2, ProjMatrix};

#[derive(Parser, Debug)]
#[command(name = "pgl2", version, about = "Finite subgroups of PGL2 over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Field order as p^r, e.g. 3^2
    #[arg(long)]
    q: String,
    /// Machine-readable output
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Field parameters: modulus and primitive element
    FieldInfo {
        #[command(flatten)]
        common: Common,
    },
    /// Order of a projective matrix
    Order {
        #[command(flatten)]
        common: Common,
        /// Matrix as [[a,b],[c,d]] with integer-encoded entries
        #[arg(long)]
        matrix: String,
    },
    /// Recognize the subgroup generated by matrices
    Classify {
        #[command(flatten)]
        common: Common,
        /// Generators separated by ';'
        #[arg(long)]
        gens: String,
    },
    /// Build a subgroup of a given family
    Construct {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: Option<u64>,
        /// Additive subgroup as comma-separated encodings
        #[arg(long)]
        gamma: Option<String>,
        /// Dihedral twist, integer-encoded
        #[arg(long)]
        tau: Option<u64>,
        /// Subfield degree
        #[arg(long)]
        s: Option<u32>,
    },
    /// Conjugacy classes of subgroups
    Atlas {
        #[command(flatten)]
        common: Common,
        /// List the brute-force enumeration instead of the prediction
        #[arg(long)]
        brute: bool,
        /// Compare prediction and enumeration
        #[arg(long, conflicts_with = "brute")]
        verify: bool,
        /// Largest |PGL2(F_q)| the enumeration accepts
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        cap: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Trivial,
    Cyclic,
    Dihedral,
    SemiElementary,
    Borel,
    Tetrahedral,
    Octahedral,
    Icosahedral,
    Psl,
    Pgl,
}

enum Failure {
    Usage(String),
    Verification,
    // downstream reader went away; nothing left to report
    ClosedPipe,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Runs the CLI on `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Verification) => 1,
        Err(Failure::ClosedPipe) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn io(e: std::io::Error) -> Failure {
    if e.kind() == std::io::ErrorKind::BrokenPipe {
        return Failure::ClosedPipe;
    }
    Failure::Usage(format!("write failed: {e}"))
}

fn field_of(common: &Common) -> Result<Pgl2> {
    let (p, r) = Field::parse_order(&common.q)?;
    Pgl2::new(p, r)
}

#[derive(Serialize)]
struct FieldJson {
    p: u32,
    r: u32,
    q: u32,
    modulus: Vec<u32>,
}

fn field_json(g: &Pgl2) -> FieldJson {
    let f = g.field();
    FieldJson { p: f.p(), r: f.r(), q: f.q(), modulus: f.modulus().to_vec() }
}

fn header(g: &Pgl2) -> String {
    let f = g.field();
    let modulus: Vec<String> = f.modulus().iter().map(u32::to_string).collect();
    format!("GF({}^{}) modulus [{}]", f.p(), f.r(), modulus.join(","))
}

fn gens_text(gens: &[ProjMatrix]) -> String {
    let parts: Vec<String> = gens.iter().map(ProjMatrix::to_string).collect();
    parts.join(";")
}

fn gens_json(gens: &[ProjMatrix]) -> Vec<String> {
    gens.iter().map(ProjMatrix::to_string).collect()
}

fn emit_json(out: &mut dyn Write, value: &serde_json::Value) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    writeln!(out, "{text}").map_err(io)
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::FieldInfo { common } => field_info(&common, out),
        Command::Order { common, matrix } => order(&common, &matrix, out),
        Command::Classify { common, gens } => classify(&common, &gens, out),
        Command::Construct { common, family, n, gamma, tau, s } => {
            construct_verb(&common, family, n, gamma.as_deref(), tau, s, out)
        }
        Command::Atlas { common, brute, verify, cap } => atlas(&common, brute, verify, cap, out),
    }
}

fn field_info(common: &Common, out: &mut dyn Write) -> Outcome {
    let g = field_of(common)?;
    let f = g.field();
    let prim = f.primitive_element().encoding();
    if common.json {
        return emit_json(out, &json!({ "field": field_json(&g), "primitive_element": prim }));
    }
    writeln!(out, "{}", header(&g)).map_err(io)?;
    writeln!(out, "p = {}\nr = {}\nq = {}\nprimitive element = {prim}", f.p(), f.r(), f.q())
        .map_err(io)
}

fn order(common: &Common, matrix: &str, out: &mut dyn Write) -> Outcome {
    let g = field_of(common)?;
    let m = g.parse_matrix(matrix)?;
    let order = g.order(&m);
    if common.json {
        return emit_json(
            out,
            &json!({ "field": field_json(&g), "matrix": m.to_string(), "order": order }),
        );
    }
    writeln!(out, "{}", header(&g)).map_err(io)?;
    writeln!(out, "order {order}").map_err(io)
}

fn parse_gens(g: &Pgl2, text: &str) -> Result<Vec<ProjMatrix>> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| g.parse_matrix(s))
        .collect()
}

fn classify(common: &Common, gens: &str, out: &mut dyn Write) -> Outcome {
    let g = field_of(common)?;
    let gens = parse_gens(&g, gens)?;
    let group = closure(&g, &gens, None)?;
    let label = recognize(&group)?;
    let predicted = predicted_atlas(&g)?;
    let conjugate_of = predicted.iter().find_map(|c| {
        are_conjugate(&c.representative, &group).map(|u| (c.label.family.to_string(), u))
    });
    let profile: Vec<(u64, usize)> = group.order_profile().into_iter().collect();
    if common.json {
        let conj = conjugate_of.as_ref().map(|(l, u)| json!({ "class": l, "witness": u.to_string() }));
        return emit_json(
            out,
            &json!({
                "field": field_json(&g),
                "order": group.order(),
                "profile": profile,
                "label": label.family.to_string(),
                "params": label.family,
                "aliases": label.aliases.iter().map(Family::to_string).collect::<Vec<_>>(),
                "generators": gens_json(group.generators()),
                "canonical_conjugate_of": conj,
            }),
        );
    }
    writeln!(out, "{}", header(&g)).map_err(io)?;
    writeln!(out, "order {}", group.order()).map_err(io)?;
    let prof: Vec<String> = profile.iter().map(|(o, c)| format!("{o}:{c}")).collect();
    writeln!(out, "profile {}", prof.join(" ")).map_err(io)?;
    writeln!(out, "label {label}").map_err(io)?;
    if let Some((l, u)) = conjugate_of {
        writeln!(out, "conjugate of predicted class {l} via {u}").map_err(io)?;
    }
    Ok(())
}

fn construct_verb(
    common: &Common,
    family: FamilyArg,
    n: Option<u64>,
    gamma: Option<&str>,
    tau: Option<u64>,
    s: Option<u32>,
    out: &mut dyn Write,
) -> Outcome {
    let g = field_of(common)?;
    let f = g.field();
    let usage = |msg: &str| Err(Failure::Usage(format!("{family:?}: {msg}").to_lowercase()));
    let allowed: (bool, bool, bool, bool) = match family {
        FamilyArg::Cyclic => (true, false, false, false),
        FamilyArg::Dihedral => (true, false, true, false),
        FamilyArg::SemiElementary => (true, true, false, false),
        FamilyArg::Borel | FamilyArg::Psl | FamilyArg::Pgl => (false, false, false, true),
        _ => (false, false, false, false),
    };
    let given = (n.is_some(), gamma.is_some(), tau.is_some(), s.is_some());
    if (given.0 && !allowed.0) || (given.1 && !allowed.1) || (given.2 && !allowed.2) || (given.3 && !allowed.3) {
        return usage("option not accepted by this family");
    }
    let need_n = || n.ok_or_else(|| Failure::Usage("--n is required".into()));
    let need_s = || s.ok_or_else(|| Failure::Usage("--s is required".into()));
    let params = match family {
        FamilyArg::Trivial => FamilyParams::Trivial,
        FamilyArg::Cyclic => FamilyParams::Cyclic { n: need_n()? },
        FamilyArg::Dihedral => FamilyParams::Dihedral {
            n: need_n()?,
            tau: tau.map(|t| f.element(t)).transpose()?,
        },
        FamilyArg::SemiElementary => {
            let Some(text) = gamma else {
                return usage("--gamma is required");
            };
            FamilyParams::SemiElementary {
                gamma: AdditiveSubgroup::parse(f, text)?,
                n: n.unwrap_or(1),
            }
        }
        FamilyArg::Borel => FamilyParams::Borel { s: need_s()? },
        FamilyArg::Tetrahedral => FamilyParams::Tetrahedral,
        FamilyArg::Octahedral => FamilyParams::Octahedral,
        FamilyArg::Icosahedral => FamilyParams::Icosahedral,
        FamilyArg::Psl => FamilyParams::Psl { s: need_s()? },
        FamilyArg::Pgl => FamilyParams::Pgl { s: need_s()? },
    };
    let group = construct::build(&g, &params)?;
    let label = recognize(&group)?;
    if common.json {
        return emit_json(
            out,
            &json!({
                "field": field_json(&g),
                "label": label.family.to_string(),
                "params": label.family,
                "aliases": label.aliases.iter().map(Family::to_string).collect::<Vec<_>>(),
                "order": group.order(),
                "generators": gens_json(group.generators()),
            }),
        );
    }
    writeln!(out, "{}", header(&g)).map_err(io)?;
    writeln!(out, "label {label}").map_err(io)?;
    writeln!(out, "order {}", group.order()).map_err(io)?;
    writeln!(out, "generators {}", gens_text(group.generators())).map_err(io)
}

fn class_json(c: &ClassDescriptor) -> serde_json::Value {
    json!({
        "label": c.label.family.to_string(),
        "params": c.label.family,
        "aliases": c.label.aliases.iter().map(Family::to_string).collect::<Vec<_>>(),
        "order": c.order(),
        "class_size": c.class_size,
        "generators": gens_json(c.representative.generators()),
        "source": c.source,
    })
}

fn class_line(c: &ClassDescriptor) -> String {
    format!(
        "{} order={} class_size={} generators={}",
        c.label,
        c.order(),
        c.class_size,
        gens_text(c.representative.generators())
    )
}

fn atlas(common: &Common, brute: bool, check: bool, cap: u64, out: &mut dyn Write) -> Outcome {
    let g = field_of(common)?;
    if check {
        let report = verify(&g, cap)?;
        if common.json {
            let pairs: Vec<_> = report
                .matched
                .iter()
                .map(|m| json!({ "predicted": class_json(&m.predicted), "brute_force": class_json(&m.brute_force) }))
                .collect();
            emit_json(
                out,
                &json!({
                    "field": field_json(&g),
                    "matched": pairs,
                    "predicted_only": report.predicted_only.iter().map(class_json).collect::<Vec<_>>(),
                    "brute_only": report.brute_only.iter().map(class_json).collect::<Vec<_>>(),
                    "residual_notes": report.residual_notes,
                    "unexplained": report.unexplained,
                    "passed": report.passed(),
                }),
            )?;
        } else {
            writeln!(out, "{}", header(&g)).map_err(io)?;
            writeln!(
                out,
                "matched {} predicted_only {} brute_only {}",
                report.matched.len(),
                report.predicted_only.len(),
                report.brute_only.len()
            )
            .map_err(io)?;
            for m in &report.matched {
                writeln!(out, "matched {}", class_line(&m.brute_force)).map_err(io)?;
            }
            for c in &report.predicted_only {
                writeln!(out, "predicted only {}", class_line(c)).map_err(io)?;
            }
            for c in &report.brute_only {
                writeln!(out, "brute only {}", class_line(c)).map_err(io)?;
            }
            for note in &report.residual_notes {
                writeln!(out, "note {note}").map_err(io)?;
            }
            for note in &report.unexplained {
                writeln!(out, "unexplained {note}").map_err(io)?;
            }
            writeln!(out, "{}", if report.passed() { "PASS" } else { "FAIL" }).map_err(io)?;
        }
        return if report.passed() { Ok(()) } else { Err(Failure::Verification) };
    }
    let (source, classes) = if brute {
        (Source::BruteForce, brute_force_atlas(&g, cap)?)
    } else {
        (Source::Predicted, predicted_atlas(&g)?)
    };
    if common.json {
        return emit_json(
            out,
            &json!({
                "field": field_json(&g),
                "source": source,
                "classes": classes.iter().map(class_json).collect::<Vec<_>>(),
            }),
        );
    }
    writeln!(out, "{}", header(&g)).map_err(io)?;
    writeln!(out, "{} classes", classes.len()).map_err(io)?;
    for (i, c) in classes.iter().enumerate() {
        writeln!(out, "{:>3}. {}", i + 1, class_line(c)).map_err(io)?;
    }
    Ok(())
}

/// Representative of `group` as re-parsed from printed generators; used by
/// round-trip tests.
pub fn reparse(g: &Pgl2, printed: &str) -> Result<Subgroup> {
    closure(g, &parse_gens(g, printed)?, None)
}
