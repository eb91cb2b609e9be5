//! Command pipelines for the hodgenorm binary.
//!
//! Three subcommands share the global options:
//!
//! * `norms`: per-homology-class l1/dual/harmonic/comass computations,
//! * `verify`: the inequality chain of a mesh against a manifold
//!   descriptor, one report per cohomology class,
//! * `straighten`: batch sampling of straightened hyperbolic simplices
//!   against the classical volume bound.
//!
//! Exit-code contract: 0 when everything computed and every asserted
//! invariant held, 1 when an invariant was violated, 2 on input errors
//! (bad files, bad flags). Reports are emitted as canonical JSON or as a
//! markdown rendering of the same data.

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use hodgenorm_core::bounds::{
    cheeger_bruteforce, verify_report, BoundEntry, ComputedNorms, ManifoldDescriptor,
};
use hodgenorm_core::homology::{cohomology_basis, homology_basis};
use hodgenorm_core::hyperbolic::{
    sample_ball, scale_volume, straight_simplex_volume_bound, StraightSimplex,
};
use hodgenorm_core::mesh::{parse_off, MeshFile};
use hodgenorm_core::norms::{l1_lower_via_harmonic, l1_seminorm, linf_dual, DualOutcome};
use hodgenorm_core::pointwise::{comass, comass_of_star, poincare_dual};
use hodgenorm_core::whitney::{harmonic_representative, inner, mass_matrix, spectral_lambda1};
use hodgenorm_core::{MetricComplex, SimplicialComplex};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(
    name = "hodgenorm",
    version,
    about = "Norms of homology classes on triangulated manifolds"
)]
pub struct Cli {
    /// Output format for reports
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Relative tolerance override (defaults: 1e-7 for duality products,
    /// 0.05 for verification entries, 1e-8 for quadrature)
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Override a named constant, e.g. --const C=2 or --const a=0.5
    #[arg(long = "const", global = true, value_parser = parse_const)]
    pub constants: Vec<(String, f64)>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute l1, dual, harmonic and comass data per homology class
    Norms {
        /// Mesh file (JSON schema, or OFF when the extension is .off)
        #[arg(long)]
        mesh: PathBuf,
        /// Homology degree p
        #[arg(long)]
        degree: usize,
        /// Restrict to one basis class by index
        #[arg(long)]
        class: Option<usize>,
    },
    /// Check the inequality chain against a manifold descriptor
    Verify {
        #[arg(long)]
        mesh: PathBuf,
        /// ManifoldDescriptor JSON file
        #[arg(long)]
        descriptor: PathBuf,
        /// Restrict to one cohomology basis class by index
        #[arg(long)]
        class: Option<usize>,
    },
    /// Sample straightened hyperbolic simplices against the volume bound
    Straighten {
        /// Simplex dimension (k >= 2)
        #[arg(long)]
        k: usize,
        /// Ambient hyperbolic dimension (k <= n <= 6)
        #[arg(long)]
        n: usize,
        /// Number of sampled simplices
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// RNG seed; falls back to HODGENORM_SEED, then 0
        #[arg(long)]
        seed: Option<u64>,
        /// Vertices are sampled in a ball of this radius
        #[arg(long, default_value_t = 2.0)]
        radius: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Markdown,
}

fn parse_const(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got {s:?}"))?;
    let value: f64 = value
        .parse()
        .map_err(|_| format!("constant {name:?} has a non-numeric value {value:?}"))?;
    if name.trim().is_empty() {
        return Err("constant name is empty".to_string());
    }
    Ok((name.trim().to_string(), value))
}

/// A finished run: the rendered report and whether any asserted
/// invariant was violated (exit code 1).
pub struct Outcome {
    pub body: String,
    pub violation: bool,
}

pub fn run(cli: Cli) -> anyhow::Result<Outcome> {
    if let Some(tol) = cli.tol {
        if !(tol > 0.0) {
            bail!("--tol must be positive, got {tol}");
        }
    }
    match &cli.command {
        Command::Norms { mesh, degree, class } => cmd_norms(&cli, mesh, *degree, *class),
        Command::Verify {
            mesh,
            descriptor,
            class,
        } => cmd_verify(&cli, mesh, descriptor, *class),
        Command::Straighten {
            k,
            n,
            count,
            seed,
            radius,
        } => cmd_straighten(&cli, *k, *n, *count, *seed, *radius),
    }
}

fn load_metric(path: &Path) -> anyhow::Result<MetricComplex> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading mesh file {}", path.display()))?;
    let mesh = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("off")) {
        parse_off(&text)?
    } else {
        MeshFile::from_json(&text)?
    };
    Ok(mesh.to_metric()?)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.6e}"))
}

// ---------------------------------------------------------------- norms

#[derive(Debug, Serialize)]
struct ClassNorms {
    class_index: usize,
    l1_upper: f64,
    l1_certified: bool,
    l1_exact: Option<String>,
    null_homologous: bool,
    dual_value: Option<f64>,
    dual_certified: bool,
    duality_product: Option<f64>,
    harmonic_norm: f64,
    harmonic_residual: f64,
    comass: f64,
    comass_exact: bool,
    comass_upper_bound: f64,
}

#[derive(Debug, Serialize)]
struct NormsReport {
    command: &'static str,
    mesh: String,
    degree: usize,
    betti: usize,
    duality_tolerance: f64,
    classes: Vec<ClassNorms>,
    invariants_held: bool,
}

/// Cochains dual to the homology basis: psi_j pairs to delta_jk against
/// the basis cycles, built from the cohomology basis by inverting the
/// pairing matrix.
fn pairing_duals(
    cocycles: &[hodgenorm_core::Cochain],
    cycles: &[hodgenorm_core::Chain],
    complex: &SimplicialComplex,
) -> anyhow::Result<Vec<hodgenorm_core::Cochain>> {
    let b = cycles.len();
    let pairing = DMatrix::from_fn(b, b, |i, j| cocycles[i].pair(&cycles[j]));
    let lu = pairing.transpose().lu();
    let mut duals = Vec::with_capacity(b);
    for j in 0..b {
        let mut e = DVector::zeros(b);
        e[j] = 1.0;
        let w = lu
            .solve(&e)
            .ok_or_else(|| anyhow!("homology/cohomology pairing matrix is singular"))?;
        let mut values = DVector::zeros(cocycles[0].values().len());
        for (i, coef) in w.iter().enumerate() {
            values += cocycles[i].values() * *coef;
        }
        duals.push(hodgenorm_core::Cochain::new(
            complex,
            cocycles[0].degree(),
            values,
        )?);
    }
    Ok(duals)
}

fn cmd_norms(
    cli: &Cli,
    mesh_path: &Path,
    degree: usize,
    class: Option<usize>,
) -> anyhow::Result<Outcome> {
    let metric = load_metric(mesh_path)?;
    let complex = metric.complex();
    if degree > complex.dimension() {
        bail!(
            "degree {degree} exceeds the mesh dimension {}",
            complex.dimension()
        );
    }
    let tol = cli.tol.unwrap_or(1e-7);
    let cycles = homology_basis(complex, degree)?;
    let cocycles = cohomology_basis(complex, degree)?;
    let b = cycles.len();
    if let Some(i) = class {
        if i >= b {
            bail!("class index {i} out of range: betti number is {b}");
        }
    }
    let duals = pairing_duals(&cocycles, &cycles, complex)?;
    let mass = mass_matrix(&metric, degree)?;
    let mut classes = Vec::new();
    let mut invariants_held = true;
    for i in 0..b {
        if class.is_some_and(|c| c != i) {
            continue;
        }
        let l1 = l1_seminorm(complex, &cycles[i])?;
        let dual = linf_dual(complex, &cycles[i])?;
        let rep = harmonic_representative(&metric, &duals[i])?;
        let harmonic = inner(&mass, rep.cochain.values(), rep.cochain.values())
            .max(0.0)
            .sqrt();
        let com = comass(&metric, &rep.cochain)?;
        let entry = match dual {
            DualOutcome::Bounded(d) => {
                let product = l1.value * d.value;
                if (product - 1.0).abs() > tol {
                    invariants_held = false;
                }
                ClassNorms {
                    class_index: i,
                    l1_upper: l1.value,
                    l1_certified: l1.certified,
                    l1_exact: l1.exact.map(|q| q.to_string()),
                    null_homologous: false,
                    dual_value: Some(d.value),
                    dual_certified: d.certified,
                    duality_product: Some(product),
                    harmonic_norm: harmonic,
                    harmonic_residual: rep.residual,
                    comass: com.value,
                    comass_exact: com.exact,
                    comass_upper_bound: com.upper_bound,
                }
            }
            DualOutcome::NullHomologous => ClassNorms {
                class_index: i,
                l1_upper: l1.value,
                l1_certified: l1.certified,
                l1_exact: l1.exact.map(|q| q.to_string()),
                null_homologous: true,
                dual_value: None,
                dual_certified: false,
                duality_product: None,
                harmonic_norm: harmonic,
                harmonic_residual: rep.residual,
                comass: com.value,
                comass_exact: com.exact,
                comass_upper_bound: com.upper_bound,
            },
        };
        classes.push(entry);
    }
    let report = NormsReport {
        command: "norms",
        mesh: mesh_path.display().to_string(),
        degree,
        betti: b,
        duality_tolerance: tol,
        classes,
        invariants_held,
    };
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report)?,
        Format::Markdown => norms_markdown(&report),
    };
    Ok(Outcome {
        body,
        violation: !report.invariants_held,
    })
}

fn norms_markdown(r: &NormsReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# Norms report");
    let _ = writeln!(s);
    let _ = writeln!(s, "- mesh: `{}`", r.mesh);
    let _ = writeln!(s, "- degree: {}", r.degree);
    let _ = writeln!(s, "- betti number: {}", r.betti);
    let _ = writeln!(s, "- duality tolerance: {:e}", r.duality_tolerance);
    let _ = writeln!(s, "- invariants held: {}", r.invariants_held);
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "| class | l1 upper | certified | exact | dual | product | harmonic | residual | comass | comass exact | comass upper |"
    );
    let _ = writeln!(
        s,
        "|------:|---------:|:---------:|:-----:|-----:|--------:|---------:|---------:|-------:|:------------:|-------------:|"
    );
    for c in &r.classes {
        let _ = writeln!(
            s,
            "| {} | {:.6e} | {} | {} | {} | {} | {:.6e} | {:.2e} | {:.6e} | {} | {:.6e} |",
            c.class_index,
            c.l1_upper,
            c.l1_certified,
            c.l1_exact.as_deref().unwrap_or("-"),
            if c.null_homologous {
                "null-homologous".to_string()
            } else {
                fmt_opt(c.dual_value)
            },
            fmt_opt(c.duality_product),
            c.harmonic_norm,
            c.harmonic_residual,
            c.comass,
            c.comass_exact,
            c.comass_upper_bound,
        );
    }
    s
}

// --------------------------------------------------------------- verify

#[derive(Debug, Serialize)]
struct ClassVerify {
    class_index: usize,
    harmonic_norm: f64,
    l1_upper: f64,
    gromov_lower: f64,
    comass: f64,
    entries: Vec<BoundEntry>,
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    command: &'static str,
    mesh: String,
    descriptor: String,
    tolerance: f64,
    lambda1: Option<f64>,
    cheeger: Option<f64>,
    classes: Vec<ClassVerify>,
    any_violated: bool,
}

fn cmd_verify(
    cli: &Cli,
    mesh_path: &Path,
    descriptor_path: &Path,
    class: Option<usize>,
) -> anyhow::Result<Outcome> {
    let metric = load_metric(mesh_path)?;
    let complex = metric.complex();
    let text = std::fs::read_to_string(descriptor_path)
        .with_context(|| format!("reading descriptor {}", descriptor_path.display()))?;
    let mut desc = ManifoldDescriptor::from_json(&text)?;
    for (name, value) in &cli.constants {
        desc.constants.insert(name.clone(), *value);
    }
    desc.validate()?;
    let n = complex.dimension();
    if desc.n != n {
        bail!(
            "descriptor dimension {} does not match the mesh dimension {n}",
            desc.n
        );
    }
    let p = desc.p;
    if p > n {
        bail!("descriptor degree {p} exceeds dimension {n}");
    }
    let tol = cli.tol.unwrap_or(0.05);
    let cocycles = cohomology_basis(complex, p)?;
    if let Some(i) = class {
        if i >= cocycles.len() {
            bail!(
                "class index {i} out of range: betti number is {}",
                cocycles.len()
            );
        }
    }
    let lambda1 = spectral_lambda1(&metric).ok();
    let cheeger = if complex.size(0) <= 20 {
        cheeger_bruteforce(&metric).ok()
    } else {
        None
    };
    let max_dual_vol = complex
        .simplices(n - p)
        .iter()
        .map(|s| metric.simplex_volume(s.vertices()))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0f64, f64::max);
    let mass = mass_matrix(&metric, p)?;
    let mut classes = Vec::new();
    let mut any_violated = false;
    for (i, cocycle) in cocycles.iter().enumerate() {
        if class.is_some_and(|c| c != i) {
            continue;
        }
        let rep = harmonic_representative(&metric, cocycle)?;
        let harmonic = inner(&mass, rep.cochain.values(), rep.cochain.values())
            .max(0.0)
            .sqrt();
        let com = comass(&metric, &rep.cochain)?;
        let star_com = comass_of_star(&metric, &rep.cochain)?;
        let dual_chain = poincare_dual(complex, cocycle)?;
        let l1 = l1_seminorm(complex, &dual_chain)?;
        let gromov_lower = l1_lower_via_harmonic(harmonic, star_com.upper_bound, max_dual_vol)?;
        let computed = ComputedNorms {
            harmonic_norm: Some(harmonic),
            l1_upper: Some(l1.value),
            gromov_lower: Some(gromov_lower),
            comass: Some(com.value),
            lambda1,
            cheeger,
        };
        let report = verify_report(&desc, &computed, tol)?;
        any_violated |= report.any_violated();
        classes.push(ClassVerify {
            class_index: i,
            harmonic_norm: harmonic,
            l1_upper: l1.value,
            gromov_lower,
            comass: com.value,
            entries: report.entries,
        });
    }
    let report = VerifyReport {
        command: "verify",
        mesh: mesh_path.display().to_string(),
        descriptor: descriptor_path.display().to_string(),
        tolerance: tol,
        lambda1,
        cheeger,
        classes,
        any_violated,
    };
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report)?,
        Format::Markdown => verify_markdown(&report),
    };
    Ok(Outcome {
        body,
        violation: report.any_violated,
    })
}

fn verify_markdown(r: &VerifyReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# Verification report");
    let _ = writeln!(s);
    let _ = writeln!(s, "- mesh: `{}`", r.mesh);
    let _ = writeln!(s, "- descriptor: `{}`", r.descriptor);
    let _ = writeln!(s, "- tolerance: {:e}", r.tolerance);
    let _ = writeln!(s, "- lambda1: {}", fmt_opt(r.lambda1));
    let _ = writeln!(s, "- cheeger (enumeration): {}", fmt_opt(r.cheeger));
    let _ = writeln!(s, "- any violated: {}", r.any_violated);
    for c in &r.classes {
        let _ = writeln!(s);
        let _ = writeln!(
            s,
            "## Class {} (harmonic {:.6e}, l1 upper {:.6e}, lower {:.6e}, comass {:.6e})",
            c.class_index, c.harmonic_norm, c.l1_upper, c.gromov_lower, c.comass
        );
        let _ = writeln!(s);
        let _ = writeln!(s, "| inequality | lhs | rhs | margin | status | citation |");
        let _ = writeln!(s, "|:-----------|----:|----:|-------:|:------:|:---------|");
        for e in &c.entries {
            let status = match e.status {
                hodgenorm_core::bounds::BoundStatus::Holds => "holds",
                hodgenorm_core::bounds::BoundStatus::Violated => "violated",
                hodgenorm_core::bounds::BoundStatus::NotApplicable => "not applicable",
            };
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} | {} |",
                e.inequality_id,
                fmt_opt(e.lhs),
                fmt_opt(e.rhs),
                fmt_opt(e.margin),
                status,
                e.provenance.replace('\n', " "),
            );
        }
    }
    s
}

// ----------------------------------------------------------- straighten

#[derive(Debug, Serialize)]
struct StraightenReport {
    command: &'static str,
    k: usize,
    n: usize,
    count: usize,
    seed: u64,
    radius: f64,
    curvature_scale: f64,
    bound: f64,
    max_volume: f64,
    mean_volume: f64,
    max_error_estimate: f64,
    all_below_bound: bool,
}

fn cmd_straighten(
    cli: &Cli,
    k: usize,
    n: usize,
    count: usize,
    seed: Option<u64>,
    radius: f64,
) -> anyhow::Result<Outcome> {
    if k < 2 {
        bail!("the volume bound needs k >= 2, got {k}");
    }
    if k > n || n > 6 {
        bail!("need k <= n <= 6, got k = {k}, n = {n}");
    }
    if !(radius > 0.0) || radius > 5.0 {
        bail!("radius must lie in (0, 5], got {radius}");
    }
    if count == 0 {
        bail!("count must be positive");
    }
    let seed = match seed {
        Some(s) => s,
        None => match std::env::var("HODGENORM_SEED") {
            Ok(text) => text
                .parse::<u64>()
                .map_err(|_| anyhow!("HODGENORM_SEED is not an integer: {text:?}"))?,
            Err(_) => 0,
        },
    };
    let a = cli
        .constants
        .iter()
        .rev()
        .find(|(name, _)| name == "a")
        .map_or(1.0, |(_, v)| *v);
    if !(a > 0.0) {
        bail!("curvature scale a must be positive, got {a}");
    }
    let quad_tol = cli.tol.unwrap_or(1e-8);
    let points = sample_ball(n, count * (k + 1), radius, seed);
    let bound = scale_volume(straight_simplex_volume_bound(k)?, a, k)?;
    let mut max_volume: f64 = 0.0;
    let mut sum = 0.0;
    let mut max_err: f64 = 0.0;
    for chunk in points.chunks_exact(k + 1) {
        let simplex = StraightSimplex::new(chunk.to_vec())?;
        let est = simplex.volume(quad_tol)?;
        let vol = scale_volume(est.value, a, k)?;
        max_volume = max_volume.max(vol);
        sum += vol;
        max_err = max_err.max(scale_volume(est.error, a, k)?);
    }
    let report = StraightenReport {
        command: "straighten",
        k,
        n,
        count,
        seed,
        radius,
        curvature_scale: a,
        bound,
        max_volume,
        mean_volume: sum / count as f64,
        max_error_estimate: max_err,
        all_below_bound: max_volume < bound,
    };
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report)?,
        Format::Markdown => straighten_markdown(&report),
    };
    Ok(Outcome {
        body,
        violation: !report.all_below_bound,
    })
}

fn straighten_markdown(r: &StraightenReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# Straightened simplex volumes");
    let _ = writeln!(s);
    let _ = writeln!(s, "| field | value |");
    let _ = writeln!(s, "|:------|------:|");
    let _ = writeln!(s, "| k | {} |", r.k);
    let _ = writeln!(s, "| n | {} |", r.n);
    let _ = writeln!(s, "| count | {} |", r.count);
    let _ = writeln!(s, "| seed | {} |", r.seed);
    let _ = writeln!(s, "| radius | {} |", r.radius);
    let _ = writeln!(s, "| curvature scale | {} |", r.curvature_scale);
    let _ = writeln!(s, "| bound | {:.12e} |", r.bound);
    let _ = writeln!(s, "| max volume | {:.12e} |", r.max_volume);
    let _ = writeln!(s, "| mean volume | {:.12e} |", r.mean_volume);
    let _ = writeln!(s, "| max error estimate | {:.3e} |", r.max_error_estimate);
    let _ = writeln!(s, "| all below bound | {} |", r.all_below_bound);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn const_parser() {
        assert_eq!(parse_const("C=2.5").unwrap(), ("C".to_string(), 2.5));
        assert_eq!(parse_const(" a =1").unwrap(), ("a".to_string(), 1.0));
        assert!(parse_const("C").is_err());
        assert!(parse_const("C=x").is_err());
        assert!(parse_const("=1").is_err());
    }

    #[test]
    fn cli_parses_the_advertised_surface() {
        let cli = Cli::try_parse_from([
            "hodgenorm",
            "norms",
            "--mesh",
            "m.json",
            "--degree",
            "1",
            "--class",
            "0",
            "--format",
            "markdown",
            "--tol",
            "1e-6",
            "--const",
            "C=2",
        ])
        .unwrap();
        assert_eq!(cli.format, Format::Markdown);
        assert_eq!(cli.tol, Some(1e-6));
        assert_eq!(cli.constants, vec![("C".to_string(), 2.0)]);
        match cli.command {
            Command::Norms { degree, class, .. } => {
                assert_eq!(degree, 1);
                assert_eq!(class, Some(0));
            }
            _ => panic!("wrong command"),
        }
        assert!(Cli::try_parse_from(["hodgenorm", "norms"]).is_err());
        let s = Cli::try_parse_from([
            "hodgenorm",
            "straighten",
            "--k",
            "2",
            "--n",
            "3",
            "--count",
            "10",
            "--seed",
            "7",
            "--radius",
            "1.5",
        ])
        .unwrap();
        match s.command {
            Command::Straighten { k, n, count, seed, radius } => {
                assert_eq!((k, n, count, seed, radius), (2, 3, 10, Some(7), 1.5));
            }
            _ => panic!("wrong command"),
        }
    }
}
