//! Batch command-line surface over the JSON formats. Every command
//! validates its inputs before computing and prints machine-readable JSON
//! (the `sl2 demo` prints a fixed text table). Exit codes: 0 success,
//! 1 check-failed, 2 invalid-input.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::dirac::{
    default_window, dirac_cohomology, dirac_element, dirac_square_check, vogan_check,
};
use crate::json::{
    a_to_json, family_from_json, family_to_json, ladder_from_json, poly_to_json,
    quadratic_from_json, report_to_json, ue_from_json, ue_to_json, FamilyJson, LadderJson, UeJson,
};
use crate::lie::{build_deformation_family, LieFamily, QuadraticSpaceFamily};
use crate::localize::{cohomology_localization_check, localized_dirac_check};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::sl2::{make_ladder, sl2_family, sl2_quadratic, LadderKind};
use crate::ue::{hc_homomorphism, hc_subfamily_check, to_constant_coordinates, verma_family};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;

#[derive(Parser)]
#[command(
    name = "dirac-families",
    about = "Exact Dirac operators and Dirac cohomology for algebraic families of Harish-Chandra pairs"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Family construction and validation.
    Family {
        #[command(subcommand)]
        command: FamilyCommand,
    },
    /// The Dirac element and its square identity.
    Dirac {
        #[command(subcommand)]
        command: DiracCommand,
    },
    /// Harish-Chandra image of an enveloping-algebra element.
    Hc(HcArgs),
    /// Dirac cohomology of a ladder module over a weight window.
    Cohomology(CohomologyArgs),
    /// Vogan-conjecture instance check for a ladder module.
    Vogan(ModuleArgs),
    /// Infinitesimal character of a truncated Verma-like family.
    Verma(VermaArgs),
    /// Localization checks over K[t, 1/t].
    Localize {
        #[command(subcommand)]
        command: LocalizeCommand,
    },
    /// Canned SL(2,R) runs.
    Sl2 {
        #[command(subcommand)]
        command: Sl2Command,
    },
}

#[derive(Subcommand)]
enum FamilyCommand {
    /// Build the deformation-like family g_(n) from a constant family.
    Build {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum DiracCommand {
    /// Print the Dirac element as a serialized tensor element.
    Element {
        #[arg(long)]
        family: PathBuf,
    },
    /// Verify the square identity; exit 0 iff it holds exactly.
    Square {
        #[arg(long)]
        family: PathBuf,
    },
}

#[derive(Args)]
struct HcArgs {
    #[arg(long)]
    family: PathBuf,
    /// Element JSON: [[exponent-vector, poly], ...] in family coordinates.
    #[arg(long)]
    element: PathBuf,
}

#[derive(Args)]
struct ModuleArgs {
    #[arg(long)]
    family: PathBuf,
    #[arg(long = "module")]
    module: PathBuf,
}

#[derive(Args)]
struct CohomologyArgs {
    #[arg(long)]
    family: PathBuf,
    #[arg(long = "module")]
    module: PathBuf,
    /// Inclusive weight window "a..b".
    #[arg(long)]
    window: String,
}

#[derive(Args)]
struct VermaArgs {
    #[arg(long)]
    family: PathBuf,
    /// Highest weight λ(h) as an exact scalar, e.g. "5" or "-3/2".
    #[arg(long)]
    lambda: String,
    #[arg(long)]
    truncate: usize,
}

#[derive(Subcommand)]
enum LocalizeCommand {
    /// Dirac transport check, plus the per-weight cohomology comparison
    /// when a module is given.
    Check {
        #[arg(long)]
        family: PathBuf,
        #[arg(long = "module")]
        module: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Sl2Command {
    /// Run the whole SL(2,R) suite and print the classification table.
    Demo,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn load_family(path: &Path) -> Result<(LieFamily, QuadraticSpaceFamily)> {
    let json: FamilyJson = read_json(path)?;
    let fam = family_from_json(&json)?;
    let diags = fam.validate();
    if !diags.is_empty() {
        return Err(Error::InvalidFamily(
            diags
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join("; "),
        ));
    }
    let q = quadratic_from_json(&json, &fam)?;
    Ok((fam, q))
}

fn parse_window(text: &str) -> Result<(i64, i64)> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| Error::InvalidInput(format!("window must be a..b, got {text:?}")))?;
    let lo: i64 = a
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad window bound {a:?}")))?;
    let hi: i64 = b
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad window bound {b:?}")))?;
    Ok((lo, hi))
}

/// Entry point used by the binary: returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok((output, code)) => {
            println!("{output}");
            code
        }
        Err(err) => {
            let diagnostic = json!({
                "error": err.to_string(),
                "kind": "invalid-input",
            });
            println!("{}", serde_json::to_string_pretty(&diagnostic).unwrap());
            EXIT_INVALID_INPUT
        }
    }
}

fn dispatch(cli: Cli) -> Result<(String, i32)> {
    match cli.command {
        Command::Family { command } => match command {
            FamilyCommand::Build { input, n, out } => family_build(&input, n, &out),
        },
        Command::Dirac { command } => match command {
            DiracCommand::Element { family } => dirac_element_cmd(&family),
            DiracCommand::Square { family } => dirac_square_cmd(&family),
        },
        Command::Hc(args) => hc_cmd(&args),
        Command::Cohomology(args) => cohomology_cmd(&args),
        Command::Vogan(args) => vogan_cmd(&args),
        Command::Verma(args) => verma_cmd(&args),
        Command::Localize { command } => match command {
            LocalizeCommand::Check { family, module } => {
                localize_cmd(&family, module.as_deref())
            }
        },
        Command::Sl2 { command } => match command {
            Sl2Command::Demo => Ok((sl2_demo()?, EXIT_OK)),
        },
    }
}

fn family_build(input: &Path, n: u32, out: &Path) -> Result<(String, i32)> {
    let json: FamilyJson = read_json(input)?;
    let constant = family_from_json(&json)?;
    let fam = build_deformation_family(&constant, n)?;
    let diags = fam.validate();
    let q = quadratic_from_json(&json, &fam).ok();
    let out_json = family_to_json(&fam, q.as_ref());
    std::fs::write(out, serde_json::to_string_pretty(&out_json)?)?;
    let report = json!({
        "written": out.display().to_string(),
        "n": n,
        "rank": fam.rank(),
        "diagnostics": diags.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
    });
    Ok((serde_json::to_string_pretty(&report)?, EXIT_OK))
}

fn dirac_element_cmd(family: &Path) -> Result<(String, i32)> {
    let (fam, q) = load_family(family)?;
    let d = dirac_element(&fam, &q)?;
    let report = json!({
        "dirac_element": a_to_json(&d),
        "pretty": d.display(&fam, &q).to_string(),
    });
    Ok((serde_json::to_string_pretty(&report)?, EXIT_OK))
}

fn dirac_square_cmd(family: &Path) -> Result<(String, i32)> {
    let (fam, q) = load_family(family)?;
    let (lhs, rhs, equal) = dirac_square_check(&fam, &q)?;
    let report = json!({
        "equal": equal,
        "lhs_2d_squared": a_to_json(&lhs),
        "rhs": a_to_json(&rhs),
    });
    let code = if equal { EXIT_OK } else { EXIT_CHECK_FAILED };
    Ok((serde_json::to_string_pretty(&report)?, code))
}

fn hc_cmd(args: &HcArgs) -> Result<(String, i32)> {
    let (fam, _) = load_family(&args.family)?;
    let elt_json: UeJson = read_json(&args.element)?;
    let elt = ue_from_json(&elt_json, fam.rank())?;
    let image = hc_homomorphism(&elt, &fam)?;
    let in_subfamily = hc_subfamily_check(&to_constant_coordinates(&elt, &fam), &fam)?;
    let report = json!({
        "hc_image": ue_to_json(image.as_ue()),
        "pretty": image.as_ue().display(&fam).to_string(),
        "in_cartan_subfamily": in_subfamily,
    });
    Ok((serde_json::to_string_pretty(&report)?, EXIT_OK))
}

fn cohomology_cmd(args: &CohomologyArgs) -> Result<(String, i32)> {
    let (fam, q) = load_family(&args.family)?;
    let ladder_json: LadderJson = read_json(&args.module)?;
    let ladder = ladder_from_json(&ladder_json)?;
    let window = parse_window(&args.window)?;
    let report = dirac_cohomology(&ladder, &fam, &q, window)?;
    Ok((
        serde_json::to_string_pretty(&report_to_json(&report))?,
        EXIT_OK,
    ))
}

fn vogan_cmd(args: &ModuleArgs) -> Result<(String, i32)> {
    let (fam, q) = load_family(&args.family)?;
    let ladder_json: LadderJson = read_json(&args.module)?;
    let ladder = ladder_from_json(&ladder_json)?;
    let report = vogan_check(&ladder, &fam, &q)?;
    let out = json!({
        "pass": report.pass,
        "casimir_scalar": poly_to_json(&report.omega),
        "lambda": report.lambda.values.iter().map(poly_to_json).collect::<Vec<_>>(),
        "weights": report
            .weights
            .iter()
            .map(|(mu, target, ok)| json!({
                "weight": mu,
                "target": target.to_string(),
                "conjugate": ok,
            }))
            .collect::<Vec<_>>(),
    });
    let code = if report.pass { EXIT_OK } else { EXIT_CHECK_FAILED };
    Ok((serde_json::to_string_pretty(&out)?, code))
}

fn verma_cmd(args: &VermaArgs) -> Result<(String, i32)> {
    let (fam, _) = load_family(&args.family)?;
    let lam: Scalar = args.lambda.parse()?;
    let cartan_size = fam
        .cartan
        .as_ref()
        .map(|c| c.h.len())
        .ok_or(Error::MissingCartan)?;
    if cartan_size != 1 {
        return Err(Error::InvalidInput(
            "--lambda takes a single scalar; this family has a larger Cartan".to_string(),
        ));
    }
    let verma = verma_family(&fam, vec![Poly::constant(lam)], args.truncate)?;
    let character = verma.infinitesimal_character(&fam)?;
    let scalar = verma.casimir_scalar(&fam)?;
    let report = json!({
        "infinitesimal_character": character.values.iter().map(poly_to_json).collect::<Vec<_>>(),
        "canonical_representative": character
            .canonicalize(&fam)
            .values
            .iter()
            .map(poly_to_json)
            .collect::<Vec<_>>(),
        "casimir_scalar": poly_to_json(&scalar),
        "truncation": args.truncate,
    });
    Ok((serde_json::to_string_pretty(&report)?, EXIT_OK))
}

fn localize_cmd(family: &Path, module: Option<&Path>) -> Result<(String, i32)> {
    let (fam, q) = load_family(family)?;
    let dirac_ok = localized_dirac_check(&fam, &q)?;
    let mut pass = dirac_ok;
    let cohomology_ok = match module {
        None => None,
        Some(path) => {
            let ladder_json: LadderJson = read_json(path)?;
            let ladder = ladder_from_json(&ladder_json)?;
            let window = default_window(&ladder.weights);
            let ok = cohomology_localization_check(&ladder, &fam, &q, window)?;
            pass &= ok;
            Some(ok)
        }
    };
    let report = json!({
        "dirac_transport": dirac_ok,
        "cohomology_localization": cohomology_ok,
        "pass": pass,
    });
    let code = if pass { EXIT_OK } else { EXIT_CHECK_FAILED };
    Ok((serde_json::to_string_pretty(&report)?, code))
}

/// The full SL(2,R) suite as a fixed-format table: deterministic output,
/// every line recomputed from scratch.
pub fn sl2_demo() -> Result<String> {
    let fam = sl2_family(1)?;
    let q = sl2_quadratic(&fam)?;
    let mut out = String::new();
    writeln!(out, "sl2 deformation family (n = 1)").unwrap();

    let (_, _, equal) = dirac_square_check(&fam, &q)?;
    writeln!(
        out,
        "square identity 2D^2 = Omega⊗1 - t^2·Delta(Omega_k) + t^2/8: {}",
        if equal { "PASS" } else { "FAIL" }
    )
    .unwrap();

    let omega = crate::ue::casimir(&fam)?;
    let hc = hc_homomorphism(&omega, &fam)?;
    let expected = {
        let mut e = crate::ue::UeElement::zero();
        e.add_term(vec![2, 0, 0], Poly::monomial(Scalar::from_ratio(1, 8), 2));
        e.add_term(vec![0, 0, 0], Poly::monomial(Scalar::from_ratio(-1, 8), 2));
        e
    };
    writeln!(
        out,
        "HC(Omega) = t^2/8·(h^2 - 1): {}",
        if hc.as_ue() == &expected { "PASS" } else { "FAIL" }
    )
    .unwrap();

    writeln!(out).unwrap();
    writeln!(
        out,
        "{:<10} {:<22} {:<10} vogan",
        "module", "H_D (weight: rank)", "casimir"
    )
    .unwrap();

    let mut rows: Vec<(String, LadderKind, i64)> = Vec::new();
    for m in 1..=3 {
        rows.push((format!("DS_{m}^+"), LadderKind::DiscreteSeriesUp, m));
        rows.push((format!("DS_{m}^-"), LadderKind::DiscreteSeriesDown, m));
        rows.push((format!("F_{m}"), LadderKind::Finite, m));
    }
    rows.push(("PS_even".to_string(), LadderKind::LatticeEven, 0));
    rows.push(("PS_odd".to_string(), LadderKind::LatticeOdd, 0));

    for (name, kind, m) in rows {
        let casimir_param = matches!(
            kind,
            LadderKind::LatticeEven | LadderKind::LatticeOdd
        )
        .then(|| Scalar::from_ratio(1, 2));
        let ladder = make_ladder(kind, m, casimir_param)?;
        let window = default_window(&ladder.weights);
        let report = dirac_cohomology(&ladder, &fam, &q, window)?;
        let h_d = if report.total_free_rank() == 0 {
            "0".to_string()
        } else {
            report
                .entries
                .iter()
                .filter(|e| e.free_rank > 0)
                .map(|e| format!("{}: {}", e.weight, e.free_rank))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let omega_str = {
            let w = ladder.casimir_scalar();
            if w.is_zero() {
                "0".to_string()
            } else {
                format!("({})t^2", w.coeff(2))
            }
        };
        let vogan_str = match vogan_check(&ladder, &fam, &q) {
            Ok(rep) => {
                let lam = rep
                    .lambda
                    .values
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                if rep.pass {
                    format!("PASS (lambda = {lam})")
                } else {
                    format!("FAIL (lambda = {lam})")
                }
            }
            Err(Error::EmptyCohomology) => "- (no cohomology)".to_string(),
            Err(e) => return Err(e),
        };
        writeln!(out, "{name:<10} {h_d:<22} {omega_str:<10} {vogan_str}").unwrap();
    }

    writeln!(out).unwrap();
    let loc = localized_dirac_check(&fam, &q)?;
    writeln!(
        out,
        "localized Dirac transport (psi ∘ loc)(D) = t·D_const: {}",
        if loc { "PASS" } else { "FAIL" }
    )
    .unwrap();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_parsing() {
        assert_eq!(parse_window("-3..5").unwrap(), (-3, 5));
        assert_eq!(parse_window(" 0 .. 10 ").unwrap(), (0, 10));
        assert!(parse_window("3").is_err());
        assert!(parse_window("a..b").is_err());
    }

    #[test]
    fn demo_is_deterministic_and_passes() {
        let a = sl2_demo().unwrap();
        let b = sl2_demo().unwrap();
        assert_eq!(a, b);
        assert!(a.contains("PASS"));
        assert!(!a.contains("FAIL"));
        // Theorem-style rows: DS_2^+ concentrated at weight 1, F_2 at ±3,
        // principal series zero.
        assert!(a.contains("DS_2^+"));
        assert!(a.lines().any(|l| l.starts_with("F_2") && l.contains("-3: 1, 3: 1")));
        assert!(a.lines().any(|l| l.starts_with("PS_even") && l.contains(" 0 ")));
    }
}
