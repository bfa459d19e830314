//! Command-line front end.
//!
//! Exit statuses: 0 success, 1 domain or validation error, 2 numeric
//! non-convergence, 3 violated hypothesis (e.g. an unbounded post-singular
//! set for `land`). Failures emit a JSON document with a `reason` code.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bounds::{kappa_annulus, kappa_bound, KappaBound};
use crate::error::{Error, ErrorClass, Result};
use crate::expfield::{ExpMap, PostsingularData, PreimageLadder};
use crate::hypgeo::{punctured_distance, ModelDomain};
use crate::landing::{land_ray_with, LandingCertificate, LandingOptions};
use crate::output::{complex, format_sig15, to_json};
use crate::rays::{fundamental_segment, trace_ray_report, ExternalAddress, RaySegment, DEFAULT_TRACE_TOL};
use crate::verify::{self, Suite, VerifyReport};
use crate::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// A parsed invocation.
#[derive(Debug, Clone, Parser)]
#[command(name = "raylander", version, about = "Hyperbolic contraction bounds and ray landing certificates for λe^z")]
pub struct CommandRequest {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the document here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Contraction factor κ(d), or the puncture-ladder bound from (r_n, δ).
    #[command(allow_negative_numbers = true)]
    Kappa(KappaArgs),
    /// Hyperbolic density of a model domain at a point.
    #[command(allow_negative_numbers = true)]
    Density(DensityArgs),
    /// Hyperbolic distance in a model domain.
    #[command(allow_negative_numbers = true)]
    Dist(DistArgs),
    /// Trace a ray point, or a fundamental segment with --samples.
    #[command(allow_negative_numbers = true)]
    Trace(TraceArgs),
    /// Land a periodic ray and certify the landing point.
    #[command(allow_negative_numbers = true)]
    Land(LandArgs),
    /// Orbit of the singular value 0 with a boundedness verdict.
    #[command(allow_negative_numbers = true)]
    Postsingular(PostsingularArgs),
    /// Preimage ladder of a point outside the post-singular disk.
    #[command(allow_negative_numbers = true)]
    Ladder(LadderArgs),
    /// Run property suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct KappaArgs {
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long)]
    pub r_n: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct DensityArgs {
    #[arg(long, value_parser = parse_domain)]
    pub domain: ModelDomain,
    #[arg(long)]
    pub re: f64,
    #[arg(long, default_value_t = 0.0)]
    pub im: f64,
}

#[derive(Debug, Clone, Args)]
pub struct DistArgs {
    #[arg(long, value_parser = parse_domain)]
    pub domain: ModelDomain,
    #[arg(long)]
    pub z_re: f64,
    #[arg(long, default_value_t = 0.0)]
    pub z_im: f64,
    #[arg(long)]
    pub w_re: f64,
    #[arg(long, default_value_t = 0.0)]
    pub w_im: f64,
}

#[derive(Debug, Clone, Args)]
pub struct LambdaArgs {
    #[arg(long)]
    pub lambda_re: f64,
    #[arg(long, default_value_t = 0.0)]
    pub lambda_im: f64,
}

#[derive(Debug, Clone, Args)]
pub struct AddressArgs {
    /// Comma-separated branch indices, e.g. `0,1`.
    #[arg(long)]
    pub address: String,
    /// Defaults to the number of entries.
    #[arg(long)]
    pub period: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub lambda: LambdaArgs,
    #[command(flatten)]
    pub address: AddressArgs,
    #[arg(long)]
    pub t: f64,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_TRACE_TOL)]
    pub tol: f64,
    /// Sample the fundamental segment `[t, F^k(t)]` instead of one point.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct LandArgs {
    #[command(flatten)]
    pub lambda: LambdaArgs,
    #[command(flatten)]
    pub address: AddressArgs,
    #[arg(long, default_value_t = 1.0)]
    pub t0: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 1000)]
    pub max_pullbacks: usize,
    #[arg(long, default_value_t = 16)]
    pub samples: usize,
}

#[derive(Debug, Clone, Args)]
pub struct PostsingularArgs {
    #[command(flatten)]
    pub lambda: LambdaArgs,
    #[arg(long, default_value_t = 1000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e6)]
    pub escape_radius: f64,
}

#[derive(Debug, Clone, Args)]
pub struct LadderArgs {
    #[command(flatten)]
    pub lambda: LambdaArgs,
    #[arg(long)]
    pub z0_re: f64,
    #[arg(long, default_value_t = 0.0)]
    pub z0_im: f64,
    #[arg(long, default_value_t = 0)]
    pub j_min: i64,
    #[arg(long, default_value_t = 10)]
    pub j_max: i64,
    /// Chart radius; defaults to 1 + the post-singular radius.
    #[arg(long)]
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all", value_parser = parse_suite)]
    pub suite: Suite,
}

fn parse_domain(s: &str) -> std::result::Result<ModelDomain, String> {
    ModelDomain::ALL
        .into_iter()
        .find(|d| d.name() == s)
        .ok_or_else(|| format!("unknown domain {s:?} (unit_disk, punctured_unit_disk, right_half_plane)"))
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub domain: ModelDomain,
    #[serde(with = "complex")]
    pub z: Point,
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub domain: ModelDomain,
    #[serde(with = "complex")]
    pub z: Point,
    #[serde(with = "complex")]
    pub w: Point,
    pub distance: f64,
    /// Minimizing deck shift (punctured disk only).
    pub deck_shift: Option<i64>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    #[serde(with = "complex")]
    pub lambda: Point,
    pub address: ExternalAddress,
    pub period: usize,
    pub t: f64,
    #[serde(with = "complex")]
    pub z: Point,
    pub depth: usize,
    pub change: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorDocument {
    pub error: String,
    pub reason: String,
    pub class: String,
}

/// Exit status and serialized document of one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub document: String,
}

pub fn exit_status(e: &Error) -> i32 {
    match e.class() {
        ErrorClass::Domain => 1,
        ErrorClass::Numeric => 2,
        ErrorClass::Hypothesis => 3,
    }
}

pub fn error_outcome(e: &Error) -> Outcome {
    let class = match e.class() {
        ErrorClass::Domain => "domain",
        ErrorClass::Numeric => "numeric",
        ErrorClass::Hypothesis => "hypothesis",
    };
    error_document(exit_status(e), e.to_string(), e.reason(), class)
}

pub fn error_document(status: i32, message: String, reason: &str, class: &str) -> Outcome {
    let doc = ErrorDocument {
        error: message,
        reason: reason.to_string(),
        class: class.to_string(),
    };
    Outcome {
        status,
        document: to_json(&doc).expect("error document serializes") + "\n",
    }
}

fn json<T: Serialize + DeserializeOwned>(value: &T) -> Result<String> {
    to_json(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::Invalid(format!("serialization failed: {e}")))
}

fn csv_table(header: [&str; 3], rows: impl Iterator<Item = [String; 3]>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| Error::Invalid(format!("csv: {e}"));
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.write_record(&row).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invalid(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Invalid(format!("csv: {e}")))
}

fn no_csv(format: Format, what: &str) -> Result<()> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(Error::Invalid(format!("{what} output is JSON only; csv is for tables"))),
    }
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Invalid(format!("--{name} must be finite")))
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Invalid(format!("--{name} must be finite and > 0")))
    }
}

impl LambdaArgs {
    fn map(&self) -> Result<ExpMap> {
        let re = finite("lambda-re", self.lambda_re)?;
        let im = finite("lambda-im", self.lambda_im)?;
        ExpMap::new(Point::new(re, im))
    }
}

impl AddressArgs {
    fn parse(&self) -> Result<ExternalAddress> {
        let n = self.address.split(',').count();
        ExternalAddress::parse(&self.address, self.period.unwrap_or(n))
    }
}

/// Runs one command and serializes its result.
pub fn run(request: &CommandRequest) -> Outcome {
    match execute(request) {
        Ok((status, document)) => Outcome { status, document },
        Err(e) => error_outcome(&e),
    }
}

fn execute(request: &CommandRequest) -> Result<(i32, String)> {
    let format = request.format;
    match &request.command {
        Command::Kappa(a) => {
            no_csv(format, "kappa")?;
            let bound: KappaBound = match (a.d, a.r_n) {
                (Some(d), None) if a.delta.is_none() => kappa_bound(finite("d", d)?)?,
                (None, Some(r)) => kappa_annulus(finite("r-n", r)?, finite("delta", a.delta.unwrap_or(0.0))?)?,
                _ => return Err(Error::Invalid("give either --d or --r-n [--delta]".into())),
            };
            Ok((0, json(&bound)?))
        }
        Command::Density(a) => {
            no_csv(format, "density")?;
            let z = Point::new(finite("re", a.re)?, finite("im", a.im)?);
            let density = a.domain.density(z)?;
            Ok((0, json(&DensityReport { domain: a.domain, z, density })?))
        }
        Command::Dist(a) => {
            no_csv(format, "dist")?;
            let z = Point::new(finite("z-re", a.z_re)?, finite("z-im", a.z_im)?);
            let w = Point::new(finite("w-re", a.w_re)?, finite("w-im", a.w_im)?);
            let mut report = DistanceReport {
                domain: a.domain,
                z,
                w,
                distance: a.domain.distance(z, w)?,
                deck_shift: None,
                warnings: Vec::new(),
            };
            if a.domain == ModelDomain::PuncturedUnitDisk {
                let pd = punctured_distance(z, w)?;
                report.deck_shift = Some(pd.deck_shift);
                if pd.at_cutoff() {
                    report.warnings.push("branch-cutoff-exceeded".into());
                }
            }
            Ok((0, json(&report)?))
        }
        Command::Trace(a) => {
            let m = a.lambda.map()?;
            let addr = a.address.parse()?;
            let t = positive("t", a.t)?;
            let tol = positive("tol", a.tol)?;
            match a.samples {
                Some(n) => {
                    let seg: RaySegment = fundamental_segment(&m, &addr, t, n)?;
                    let doc = match format {
                        Format::Json => json(&seg)?,
                        Format::Csv => seg.to_csv()?,
                    };
                    Ok((0, doc))
                }
                None => {
                    no_csv(format, "single-point trace")?;
                    let tr = trace_ray_report(&m, &addr, t, a.depth, tol)?;
                    let report = TraceReport {
                        lambda: m.lambda(),
                        period: addr.period(),
                        address: addr,
                        t,
                        z: tr.z,
                        depth: tr.depth,
                        change: tr.change,
                    };
                    Ok((0, json(&report)?))
                }
            }
        }
        Command::Land(a) => {
            no_csv(format, "landing certificate")?;
            let m = a.lambda.map()?;
            let addr = a.address.parse()?;
            let opts = LandingOptions {
                t0: positive("t0", a.t0)?,
                tol: positive("tol", a.tol)?,
                max_pullbacks: a.max_pullbacks,
                samples: a.samples,
                ..LandingOptions::default()
            };
            let cert: LandingCertificate = land_ray_with(&m, &addr, &opts)?;
            Ok((0, json(&cert)?))
        }
        Command::Postsingular(a) => {
            let m = a.lambda.map()?;
            let ps: PostsingularData = m.postsingular(a.max_iter, positive("escape-radius", a.escape_radius)?)?;
            let doc = match format {
                Format::Json => json(&ps)?,
                Format::Csv => csv_table(
                    ["n", "re", "im"],
                    ps.orbit
                        .iter()
                        .enumerate()
                        .map(|(n, z)| [n.to_string(), format_sig15(z.re), format_sig15(z.im)]),
                )?,
            };
            Ok((0, doc))
        }
        Command::Ladder(a) => {
            let m = a.lambda.map()?;
            let z0 = Point::new(finite("z0-re", a.z0_re)?, finite("z0-im", a.z0_im)?);
            if a.j_max <= a.j_min {
                return Err(Error::Invalid("--j-max must exceed --j-min".into()));
            }
            let radius = match a.radius {
                Some(r) => positive("radius", r)?,
                None => {
                    let ps = m.postsingular(1000, 1e6)?;
                    match ps.radius {
                        Some(r) if ps.bounded => 1.0 + r,
                        _ => return Err(Error::Hypothesis("postsingular-unbounded")),
                    }
                }
            };
            let ladder: PreimageLadder = m.preimage_ladder(z0, a.j_min..=a.j_max, radius)?;
            let doc = match format {
                Format::Json => json(&ladder)?,
                Format::Csv => csv_table(
                    ["j", "re", "im"],
                    ladder
                        .indices
                        .iter()
                        .zip(&ladder.points)
                        .map(|(j, z)| [j.to_string(), format_sig15(z.re), format_sig15(z.im)]),
                )?,
            };
            Ok((0, doc))
        }
        Command::Verify(a) => {
            let report: VerifyReport = verify::run(a.suite);
            let status = if report.passed { 0 } else { 1 };
            let doc = match format {
                Format::Json => json(&report)?,
                Format::Csv => csv_table(
                    ["suite", "check", "passed"],
                    report
                        .checks
                        .iter()
                        .map(|c| [c.suite.name().to_string(), c.name.clone(), c.passed.to_string()]),
                )?,
            };
            Ok((status, doc))
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Usage errors become exit 1 with reason `invalid-arguments`; help and
/// version requests return their text with exit 0.
pub fn run_args<I, T>(args: I) -> (Outcome, Option<PathBuf>)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match CommandRequest::try_parse_from(args) {
        Ok(req) => (run(&req), req.output.clone()),
        Err(e) => {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (
                    Outcome {
                        status: 0,
                        document: e.to_string(),
                    },
                    None,
                ),
                _ => (
                    error_document(1, e.to_string().trim().to_string(), "invalid-arguments", "domain"),
                    None,
                ),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> Outcome {
        let mut v = vec!["raylander"];
        v.extend_from_slice(args);
        run_args(v).0
    }

    #[test]
    fn kappa_command() {
        let out = run_cli(&["kappa", "--d", "1", "--format", "json"]);
        assert_eq!(out.status, 0);
        let doc: KappaBound = serde_json::from_str(&out.document).unwrap();
        assert_eq!(doc.d, 1.0);
        assert!((doc.kappa - 0.907_181_087_447_93).abs() < 1e-14);
        assert!(out.document.contains(r#""provenance":"lemma22""#));
        let out = run_cli(&["kappa", "--r-n", "0.0432139182637722", "--delta", "0"]);
        assert!(out.document.contains(r#""provenance":"prop27""#));
    }

    #[test]
    fn validation_errors_exit_one() {
        let out = run_cli(&["kappa", "--d", "-1"]);
        assert_eq!(out.status, 1);
        let doc: ErrorDocument = serde_json::from_str(&out.document).unwrap();
        assert_eq!(doc.reason, "domain-error");
        let out = run_cli(&["kappa", "--d", "1", "--r-n", "0.5"]);
        assert_eq!(out.status, 1);
        let out = run_cli(&["kappa", "--frobnicate"]);
        assert_eq!(out.status, 1);
        assert!(out.document.contains("invalid-arguments"));
        let out = run_cli(&["density", "--domain", "unit_disk", "--re", "1.5"]);
        assert_eq!(out.status, 1);
        assert!(out.document.contains("outside-domain"));
        let out = run_cli(&["kappa", "--d", "1", "--format", "csv"]);
        assert_eq!(out.status, 1);
    }

    #[test]
    fn density_and_distance() {
        let out = run_cli(&["density", "--domain", "unit_disk", "--re", "0.5"]);
        let doc: DensityReport = serde_json::from_str(&out.document).unwrap();
        assert!((doc.density - 8.0 / 3.0).abs() < 1e-14);
        let out = run_cli(&[
            "dist", "--domain", "punctured_unit_disk", "--z-re", "0.0432139182637722", "--w-re",
            "-0.0432139182637722",
        ]);
        assert_eq!(out.status, 0);
        let doc: DistanceReport = serde_json::from_str(&out.document).unwrap();
        assert!((doc.distance - 1.5f64.acosh()).abs() < 1e-12);
        assert!(doc.deck_shift.is_some());
    }

    #[test]
    fn negative_lambda_parts_parse() {
        let out = run_cli(&["postsingular", "--lambda-re", "-0.5", "--lambda-im", "-0.1", "--max-iter", "200"]);
        assert_eq!(out.status, 0, "{}", out.document);
    }

    #[test]
    fn trace_outputs() {
        let out = run_cli(&["trace", "--lambda-re", "0.2", "--address", "0", "--t", "10"]);
        let doc: TraceReport = serde_json::from_str(&out.document).unwrap();
        assert!((doc.z.re - 11.609_465_580_489_75).abs() < 1e-10);
        let out = run_cli(&["trace", "--lambda-re", "0.2", "--address", "0", "--t", "1", "--samples", "5", "--format", "csv"]);
        assert_eq!(out.status, 0);
        assert!(out.document.starts_with("t,re,im\n"));
    }

    #[test]
    fn land_exit_codes() {
        let out = run_cli(&[
            "land", "--lambda-re", "0.2", "--lambda-im", "0", "--address", "0", "--period", "1", "--t0", "1",
            "--tol", "1e-10",
        ]);
        assert_eq!(out.status, 0);
        let cert: LandingCertificate = serde_json::from_str(&out.document).unwrap();
        assert_eq!(cert.classification, crate::landing::Classification::Repelling);
        let out = run_cli(&["land", "--lambda-re", "3", "--address", "0"]);
        assert_eq!(out.status, 3);
        let doc: ErrorDocument = serde_json::from_str(&out.document).unwrap();
        assert_eq!(doc.reason, "postsingular-unbounded");
        let out = run_cli(&["land", "--lambda-re", "0.2", "--address", "0", "--max-pullbacks", "3"]);
        assert_eq!(out.status, 2);
    }

    #[test]
    fn ladder_default_radius() {
        let out = run_cli(&["ladder", "--lambda-re", "0.2", "--z0-re", "3", "--radius", "1"]);
        let doc: PreimageLadder = serde_json::from_str(&out.document).unwrap();
        assert_eq!(doc.points.len(), 11);
        let out = run_cli(&["ladder", "--lambda-re", "0.2", "--z0-re", "3"]);
        let doc: PreimageLadder = serde_json::from_str(&out.document).unwrap();
        assert!(doc.chart.radius > 1.25 && doc.chart.radius < 1.26);
    }
}
