//! `designforge`: build, convert, project, bound and verify spherical and
//! Gaussian designs from the command line.

mod manifest;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use designforge_core::approx::{
    construct_l2_approx, construct_tensor_approx, epsilon_l2, multi_strength_tensor_construct,
    tensor_certificate, tensor_lower_bound, ApproxOutcome, APPROX_RETRIES,
};
use designforge_core::builders::{
    cross_polytope, gaussian_product_construction, read_signed, signed_design, write_signed,
};
use designforge_core::ffield::{read_array, twise_construct, twise_verify, write_array};
use designforge_core::gegenbauer::{
    approx_lower_bound, delsarte_bound, dim_p_gaussian, dim_p_sphere, expand_q_square,
    lp_bound_exact,
};
use designforge_core::kernel::{
    format_float, format_rational, parse_rational, read_design, write_design,
};
use designforge_core::moments::{gaussian_moment, radial_moment, sphere_moment};
use designforge_core::quad1d::{radial_design, unweighted_1d_gaussian_design, Quadrature};
use designforge_core::transfer::{
    gaussian_to_spherical, project_gaussian, project_spherical, spherical_to_gaussian,
    spherical_to_gaussian_unchecked,
};
use designforge_core::verify::{verify_design, Mode, DEFAULT_TOLERANCE};
use designforge_core::{Measure, MultiIndex, PiValue, WeightedPointSet};

#[derive(Parser)]
#[command(
    name = "designforge",
    version,
    about = "Construct, convert, project, bound and verify spherical and Gaussian designs.",
    long_about = "Construct, convert, project, bound and verify spherical and Gaussian designs.\n\n\
        Designs are plain text (`design v1`); randomized subcommands require --seed and every \
        command that writes --out also writes <out>.manifest.json with sha256 digests."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact moments of the sphere, the Gaussian exp(-pi|x|^2) and its radial law.
    #[command(subcommand)]
    Moments(MomentsCmd),
    /// One-dimensional rules: radial Gauss quadrature and unweighted Gaussian designs.
    #[command(subcommand)]
    Quad(QuadCmd),
    /// t-wise independent arrays over finite fields (orthogonal arrays of strength t).
    #[command(subcommand)]
    Twise(TwiseCmd),
    /// Concrete designs: cross-polytope, unweighted Gaussian product design, signed orbit design.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Spherical <-> Gaussian design conversion (radial Gauss rule / normalization).
    #[command(subcommand)]
    Convert(ConvertCmd),
    /// Project a design to its first k coordinates (spherical designs go through the Gaussian).
    Project(ProjectArgs),
    /// Check every monomial of degree <= t. Exit 0 pass, 1 fail, 2 error.
    Verify(VerifyArgs),
    /// Approximate-design certificate: Gegenbauer pair sum (l2) or tensor discrepancy (tensor).
    Certify(CertifyArgs),
    /// Size bounds: Delsarte, polynomial-space dimension, LP bound for approximate designs.
    #[command(subcommand)]
    Bound(BoundCmd),
    /// Random approximate designs with acceptance certificates.
    #[command(subcommand)]
    Approx(ApproxCmd),
}

#[derive(Subcommand)]
enum MomentsCmd {
    /// Average of x^alpha over the unit sphere S^{d-1}.
    Sphere {
        /// Exponents, comma separated; the dimension is their count.
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<u32>,
        /// Optional check on the dimension.
        #[arg(long)]
        d: Option<usize>,
    },
    /// Integral of x^alpha against exp(-pi|x|^2) dx.
    Gaussian {
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<u32>,
        #[arg(long)]
        d: Option<usize>,
    },
    /// E|x|^k for x ~ exp(-pi|x|^2) dx on R^d.
    Radial {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: u32,
    },
}

#[derive(Subcommand)]
enum QuadCmd {
    /// Gauss rule with ceil((t+1)/2) nodes for the radius |x| of the Gaussian on R^d.
    Radial {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        t: u32,
        /// Write `node weight` lines here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Numerical search for q equally weighted reals forming a 1-D Gaussian t-design.
    Search1d {
        #[arg(long)]
        t: u32,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum TwiseCmd {
    /// Rows of the dual of a t-wise independent vector set over F_q (`array v1` file).
    Construct {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exhaustive check that every set of <= t columns is uniform. Exit 0 pass, 1 fail.
    Verify {
        file: PathBuf,
        #[arg(long)]
        t: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    Sphere,
    Gaussian,
}

impl From<MeasureArg> for Measure {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Sphere => Measure::Sphere,
            MeasureArg::Gaussian => Measure::Gaussian,
        }
    }
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// The 2d points +-e_i with weights 1/(2d): an exact spherical 3-design.
    CrossPolytope {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Unweighted Gaussian t-design: a t-wise independent array over F_q with symbols
    /// mapped onto a q-point 1-D Gaussian t-design.
    Product {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also write the symbol array.
        #[arg(long)]
        array: Option<PathBuf>,
    },
    /// Signed design of strength 2t from hyperoctahedral orbits with exact weights.
    Signed {
        #[arg(long)]
        d: usize,
        /// Half the strength.
        #[arg(long)]
        t: u32,
        #[arg(long, value_enum)]
        measure: MeasureArg,
        #[arg(long)]
        seed: u64,
        /// Generators and weights (`signed v1`).
        #[arg(long)]
        out: PathBuf,
        /// Also write every orbit point as a design file.
        #[arg(long)]
        materialize: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ConvertCmd {
    /// Spherical t-design times the radial Gauss rule: a Gaussian t-design.
    S2g {
        input: PathBuf,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        out: PathBuf,
        /// Skip verifying the input first.
        #[arg(long)]
        no_check: bool,
    },
    /// Normalize a Gaussian t-design to the sphere with weights w|x|^s, s = 2 floor(t/2),
    /// then symmetrize.
    G2s {
        input: PathBuf,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ProjectArgs {
    input: PathBuf,
    #[arg(long)]
    k: usize,
    /// Strength to carry through (used for spherical input).
    #[arg(long)]
    t: u32,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Args)]
struct VerifyArgs {
    /// A `design v1` or `signed v1` file.
    input: PathBuf,
    #[arg(long)]
    t: u32,
    #[arg(long, value_enum, default_value = "float")]
    mode: ModeArg,
    /// Float-mode tolerance.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum CertifyMode {
    L2,
    Tensor,
}

#[derive(Args)]
struct CertifyArgs {
    input: PathBuf,
    #[arg(long, value_enum)]
    mode: CertifyMode,
    #[arg(long)]
    t: u32,
}

#[derive(Subcommand)]
enum BoundCmd {
    /// Delsarte lower bound on the size of a spherical t-design in R^d.
    Delsarte {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        t: u32,
    },
    /// Dimension of polynomials of degree <= t (restricted to the sphere by default).
    Dim {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        t: u32,
        #[arg(long, value_enum, default_value = "sphere")]
        measure: MeasureArg,
    },
    /// LP lower bound for eps-approximate t-designs from (Q_t)^2; exact when eps is rational.
    Lp {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        eps: String,
    },
    /// ceil(1/(eps^2 + c(d,t))) for tensor-approximate designs.
    Tensor {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        eps: f64,
    },
}

#[derive(Subcommand)]
enum ApproxCmd {
    /// ceil((dim P_t - 1)/eps^2) uniform points, resampled until the L2 certificate is <= eps.
    L2 {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = APPROX_RETRIES)]
        max_retries: usize,
    },
    /// ceil(eps^-2) uniform points with order-2t tensor discrepancy <= eps.
    Tensor {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Certify every order 2s, s <= t, with ceil(t eps^-2) points.
        #[arg(long)]
        multi: bool,
    },
}

type CliResult = Result<u8, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Records a run: `args` is argv without the program name.
struct Run<'a> {
    name: &'static str,
    args: &'a [String],
    seed: Option<u64>,
}

impl Run<'_> {
    fn finish(&self, inputs: &[&Path], outputs: &[&Path]) -> Result<(), String> {
        manifest::write_manifest(self.name, self.args, self.seed, inputs, outputs).map_err(err)
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_value(v: &PiValue) {
    println!("exact: {v}");
    println!("float: {}", format_float(v.to_f64()));
}

fn check_alpha(alpha: Vec<u32>, d: Option<usize>) -> Result<MultiIndex, String> {
    if let Some(d) = d {
        if d != alpha.len() {
            return Err(format!(
                "--alpha has {} entries but --d is {d}",
                alpha.len()
            ));
        }
    }
    Ok(MultiIndex::new(alpha))
}

fn quadrature_text(q: &Quadrature) -> String {
    let mut s = String::new();
    for (x, w) in q.nodes.iter().zip(&q.weights) {
        writeln!(s, "{} {}", format_float(*x), format_float(*w)).unwrap();
    }
    s
}

fn describe(x: &WeightedPointSet) -> String {
    format!(
        "{} {} design in R^{}: {} points",
        x.kind(),
        x.measure(),
        x.dimension(),
        x.len()
    )
}

fn approx_summary(o: &ApproxOutcome) {
    println!("points: {}", o.design.len());
    println!("attempts: {}", o.attempts);
    for c in &o.certificates {
        println!("{c}");
    }
}

fn run(cli: Cli, args: &[String]) -> CliResult {
    match cli.command {
        Command::Moments(m) => {
            match m {
                MomentsCmd::Sphere { alpha, d } => {
                    let a = check_alpha(alpha, d)?;
                    let dim = a.dim();
                    if dim == 0 {
                        return Err("--alpha needs at least one entry".into());
                    }
                    print_value(&PiValue::rational(sphere_moment(&a, dim)));
                }
                MomentsCmd::Gaussian { alpha, d } => {
                    print_value(&gaussian_moment(&check_alpha(alpha, d)?));
                }
                MomentsCmd::Radial { d, k } => {
                    if d == 0 {
                        return Err("--d must be at least 1".into());
                    }
                    print_value(&radial_moment(k, d));
                }
            }
            Ok(0)
        }
        Command::Quad(q) => {
            let (text, out, seed) = match q {
                QuadCmd::Radial { d, t, out } => (
                    quadrature_text(&radial_design(d, t).map_err(err)?),
                    out,
                    None,
                ),
                QuadCmd::Search1d { t, q, seed, out } => {
                    let xs = unweighted_1d_gaussian_design(t, q, seed).map_err(err)?;
                    let text: String = xs.iter().map(|x| format_float(*x) + "\n").collect();
                    (text, out, Some(seed))
                }
            };
            emit(&text, out.as_deref())?;
            if let Some(p) = &out {
                Run {
                    name: "quad",
                    args,
                    seed,
                }
                .finish(&[], &[p])?;
            }
            Ok(0)
        }
        Command::Twise(TwiseCmd::Construct { q, d, t, seed, out }) => {
            let a = twise_construct(q, d, t, seed).map_err(err)?;
            write_array(&a, &out).map_err(err)?;
            println!("{} rows over F_{q}, {d} columns, strength {t}", a.len());
            Run {
                name: "twise construct",
                args,
                seed: Some(seed),
            }
            .finish(&[], &[&out])?;
            Ok(0)
        }
        Command::Twise(TwiseCmd::Verify { file, t }) => {
            let a = read_array(&file).map_err(err)?;
            let outcome = twise_verify(&a, t);
            println!("{outcome}");
            Ok(if outcome.passed() { 0 } else { 1 })
        }
        Command::Construct(c) => construct(c, args),
        Command::Convert(ConvertCmd::S2g {
            input,
            t,
            out,
            no_check,
        }) => {
            let x = read_design(&input).map_err(err)?;
            let g = if no_check {
                spherical_to_gaussian_unchecked(&x, t)
            } else {
                spherical_to_gaussian(&x, t)
            }
            .map_err(err)?;
            write_design(&g, &out).map_err(err)?;
            println!("{}", describe(&g));
            Run {
                name: "convert s2g",
                args,
                seed: None,
            }
            .finish(&[&input], &[&out])?;
            Ok(0)
        }
        Command::Convert(ConvertCmd::G2s { input, t, out }) => {
            let x = read_design(&input).map_err(err)?;
            let s = gaussian_to_spherical(&x, t).map_err(err)?;
            write_design(&s, &out).map_err(err)?;
            println!("{}", describe(&s));
            Run {
                name: "convert g2s",
                args,
                seed: None,
            }
            .finish(&[&input], &[&out])?;
            Ok(0)
        }
        Command::Project(p) => {
            let x = read_design(&p.input).map_err(err)?;
            let y = match x.measure() {
                Measure::Sphere => project_spherical(&x, p.k, p.t),
                Measure::Gaussian => project_gaussian(&x, p.k),
            }
            .map_err(err)?;
            write_design(&y, &p.out).map_err(err)?;
            println!("{}", describe(&y));
            Run {
                name: "project",
                args,
                seed: None,
            }
            .finish(&[&p.input], &[&p.out])?;
            Ok(0)
        }
        Command::Verify(v) => verify(v),
        Command::Certify(c) => {
            let x = read_design(&c.input).map_err(err)?;
            let cert = match c.mode {
                CertifyMode::L2 => epsilon_l2(&x, c.t),
                CertifyMode::Tensor => tensor_certificate(&x, c.t),
            }
            .map_err(err)?;
            println!("{cert}");
            Ok(0)
        }
        Command::Bound(b) => {
            match b {
                BoundCmd::Delsarte { d, t } => println!("{}", delsarte_bound(d, t as usize)),
                BoundCmd::Dim { d, t, measure } => println!(
                    "{}",
                    match measure {
                        MeasureArg::Sphere => dim_p_sphere(d, t as usize),
                        MeasureArg::Gaussian => dim_p_gaussian(d, t as usize),
                    }
                ),
                BoundCmd::Lp { d, t, eps } => {
                    if let Some(e) = parse_rational(&eps) {
                        let g = expand_q_square(t as usize, d).map_err(err)?;
                        let b = lp_bound_exact(&g, &(&e * &e), 2 * t as usize).map_err(err)?;
                        println!("exact: {}", format_rational(&b));
                    }
                    let e: f64 = match parse_rational(&eps) {
                        Some(q) => designforge_core::kernel::rational_to_f64(&q),
                        None => eps.parse().map_err(|_| format!("bad --eps `{eps}`"))?,
                    };
                    let b = approx_lower_bound(d, t as usize, e).map_err(err)?;
                    println!("float: {}", format_float(b));
                }
                BoundCmd::Tensor { d, t, eps } => println!("{}", tensor_lower_bound(d, t, eps)),
            }
            Ok(0)
        }
        Command::Approx(a) => {
            let (o, out, seed) = match a {
                ApproxCmd::L2 {
                    d,
                    t,
                    eps,
                    seed,
                    out,
                    max_retries,
                } => (construct_l2_approx(d, t, eps, seed, max_retries), out, seed),
                ApproxCmd::Tensor {
                    d,
                    t,
                    eps,
                    seed,
                    out,
                    multi,
                } => {
                    let o = if multi {
                        multi_strength_tensor_construct(d, t, eps, seed)
                    } else {
                        construct_tensor_approx(d, t, eps, seed)
                    };
                    (o, out, seed)
                }
            };
            let o = o.map_err(err)?;
            write_design(&o.design, &out).map_err(err)?;
            approx_summary(&o);
            Run {
                name: "approx",
                args,
                seed: Some(seed),
            }
            .finish(&[], &[&out])?;
            Ok(0)
        }
    }
}

fn construct(c: ConstructCmd, args: &[String]) -> CliResult {
    match c {
        ConstructCmd::CrossPolytope { d, out } => {
            if d == 0 {
                return Err("--d must be at least 1".into());
            }
            let x = cross_polytope(d);
            write_design(&x, &out).map_err(err)?;
            println!("{}", describe(&x));
            Run {
                name: "construct cross-polytope",
                args,
                seed: None,
            }
            .finish(&[], &[&out])?;
        }
        ConstructCmd::Product {
            d,
            t,
            q,
            seed,
            out,
            array,
        } => {
            let p = gaussian_product_construction(d, t, q, seed).map_err(err)?;
            write_design(&p.design, &out).map_err(err)?;
            let mut outputs: Vec<&Path> = vec![&out];
            if let Some(a) = &array {
                write_array(&p.array, a).map_err(err)?;
                outputs.push(a);
            }
            println!("{}", describe(&p.design));
            Run {
                name: "construct product",
                args,
                seed: Some(seed),
            }
            .finish(&[], &outputs)?;
        }
        ConstructCmd::Signed {
            d,
            t,
            measure,
            seed,
            out,
            materialize,
        } => {
            let s = signed_design(d, t, measure.into(), seed).map_err(err)?;
            write_signed(&s, &out).map_err(err)?;
            let mut outputs: Vec<&Path> = vec![&out];
            if let Some(m) = &materialize {
                write_design(&s.materialize().map_err(err)?, m).map_err(err)?;
                outputs.push(m);
            }
            println!(
                "{} orbits, {} points, strength {}",
                s.generators.len(),
                s.materialized_len(),
                s.strength
            );
            Run {
                name: "construct signed",
                args,
                seed: Some(seed),
            }
            .finish(&[], &outputs)?;
        }
    }
    Ok(0)
}

fn verify(v: VerifyArgs) -> CliResult {
    let text =
        std::fs::read_to_string(&v.input).map_err(|e| format!("{}: {e}", v.input.display()))?;
    let mode = match v.mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Float => Mode::Float,
    };
    if text.starts_with("signed v1") {
        let s = read_signed(&v.input).map_err(err)?;
        if mode == Mode::Exact {
            let r = s.verify_exact(v.t).map_err(err)?;
            println!("mode: exact (orbit sums)");
            println!("strength: {}", v.t);
            println!("checked: {} monomials", r.checked);
            if let Some((alpha, diff)) = &r.failure {
                println!("worst: {} {alpha} residual {diff}", alpha.monomial());
            }
            println!("result: {}", if r.pass() { "pass" } else { "fail" });
            return Ok(if r.pass() { 0 } else { 1 });
        }
        let x = s.materialize_float().map_err(err)?;
        return report(&x, v.t, mode, v.tol);
    }
    let x = read_design(&v.input).map_err(err)?;
    report(&x, v.t, mode, v.tol)
}

fn report(x: &WeightedPointSet, t: u32, mode: Mode, tol: f64) -> CliResult {
    let r = verify_design(x, t, mode, tol).map_err(err)?;
    print!("{r}");
    Ok(if r.pass { 0 } else { 1 })
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match run(cli, &args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
