use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use halfspace_lab::calculus::{compare_zero_extension, SpectralFunction};
use halfspace_lab::experiments::{emit_csv, emit_svg, rates_path, run_case, ExperimentConfig, GenfuncChoice};
use halfspace_lab::genfunc::{estimate_decay, validate_orthonormality, validate_support_and_lower_bound};
use halfspace_lab::lattice::{HalfContinuumField, LatticeGrid, ReferenceGrid};
use halfspace_lab::operators::{StencilKind, StencilOperator};
use halfspace_lab::{Error, Result, C64};

#[derive(Parser)]
#[command(name = "halfspace-lab", version, about = "Half-space lattice Laplacians and resolvent convergence studies")]
struct Cli {
    /// Overrides the seed in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for output files without an explicit path in the config.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Shannon,
    Meyer,
}

#[derive(Clone, Copy, ValueEnum)]
enum OperatorName {
    Full,
    Dirichlet,
    Neumann,
}

#[derive(Subcommand)]
enum Command {
    /// Certify orthonormality, support and decay of a generating function.
    ValidateGenfunc {
        #[arg(long, value_enum, default_value = "meyer")]
        which: Which,
        #[arg(long, default_value_t = 1)]
        dim: usize,
    },
    /// Run a convergence study from a JSON config.
    Rate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print eigenvalues of a lattice operator.
    Spectrum {
        #[arg(long, value_enum, default_value = "dirichlet")]
        operator: OperatorName,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 0.25)]
        h: f64,
        /// Half extent N of the lattice.
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Print only the smallest and largest `count` eigenvalues.
        #[arg(long)]
        count: Option<usize>,
    },
    /// Distance between odd reflection and zero extension under Ψ(λ) = λ^{s/2}.
    CompareFractional {
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 1.0, 1.5, 2.0, 3.0, 4.0])]
        s: Vec<f64>,
        #[arg(long, default_value_t = 8.0)]
        half_length: f64,
        #[arg(long, default_value_t = 512)]
        samples: usize,
    },
}

fn validate_genfunc(which: Which, dim: usize) -> Result<bool> {
    let g = match which {
        Which::Shannon => GenfuncChoice::Shannon,
        Which::Meyer => GenfuncChoice::Meyer,
    }
    .build();
    let deviation = validate_orthonormality(&g, dim, 257)?;
    let cert = validate_support_and_lower_bound(&g, dim, 4097)?;
    let decay = estimate_decay(&g)?;
    println!("generating function: {}", g.name());
    println!("orthonormality deviation: {deviation:.3e}");
    println!("support radius: {:.6}", cert.support_radius);
    println!("lower bound c0 on [-pi/2, pi/2]^{dim}: {:.6}", cert.c0_measured);
    println!("decay exponent tau: {:.3} (r2 {:.4}, claimed {})", decay.tau, decay.r2, g.claimed_tau());
    println!("decay condition tau > d: {}", g.satisfies_decay(dim));
    Ok(deviation <= 1e-12)
}

fn rate(config: &Path, cli: &Cli) -> Result<bool> {
    let mut cfg = ExperimentConfig::from_path(config)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let stem = config.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "rate".into());
    let csv = cfg.output.csv.clone().unwrap_or_else(|| cli.out_dir.join(format!("{stem}.csv")));
    let svg = cfg.output.svg.clone().unwrap_or_else(|| cli.out_dir.join(format!("{stem}.svg")));
    for p in [&csv, &svg] {
        if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|source| Error::Io {
                path: dir.to_path_buf(),
                source,
            })?;
        }
    }
    let report = run_case(&cfg)?;
    for c in &report.cells {
        match &c.error {
            None => println!(
                "z = {:<8} h = {:<10} norm = {:.6e}  iterations = {:>4}  residual = {:.1e}",
                c.z, c.h, c.norm_estimate, c.iterations, c.residual_max
            ),
            Some(e) => println!("z = {:<8} h = {:<10} failed: {e}", c.z, c.h),
        }
    }
    for r in &report.rates {
        let verdict = if r.pass { "PASS" } else { "FAIL" };
        match (r.fit, &r.error) {
            (Some(f), _) => println!(
                "{verdict} {} d={} z={}: slope {:.3} (r2 {:.4}), band [{}, {}], expected {:.3}",
                report.case, report.dim, r.z, f.slope, f.r2, report.band.lo, report.band.hi, report.expected
            ),
            (None, e) => println!("{verdict} {} d={} z={}: {}", report.case, report.dim, r.z, e.as_deref().unwrap_or("no fit")),
        }
    }
    emit_csv(&report, &csv)?;
    emit_svg(&report, &svg)?;
    println!("wrote {}, {}, {}", csv.display(), rates_path(&csv).display(), svg.display());
    Ok(report.passed())
}

fn spectrum(op: OperatorName, dim: usize, h: f64, n: usize, count: Option<usize>) -> Result<()> {
    let kind = match op {
        OperatorName::Full => StencilKind::Full,
        OperatorName::Dirichlet => StencilKind::Dirichlet,
        OperatorName::Neumann => StencilKind::Neumann,
    };
    let op = StencilOperator::new(kind, LatticeGrid::new(dim, h, n)?);
    let ev = op.eigenvalues();
    let (lo, hi) = op.spectral_bounds();
    println!("{} eigenvalues, range [{lo:.12}, {hi:.12}]", ev.len());
    match count {
        Some(k) if 2 * k < ev.len() => {
            ev[..k].iter().for_each(|l| println!("{l:.12}"));
            println!("...");
            ev[ev.len() - k..].iter().for_each(|l| println!("{l:.12}"));
        }
        _ => ev.iter().for_each(|l| println!("{l:.12}")),
    }
    Ok(())
}

fn compare_fractional(s_list: &[f64], half_length: f64, samples: usize) -> Result<()> {
    let grid = ReferenceGrid::new(1, half_length, samples)?;
    // nonzero trace at the wall, so the two extensions differ
    let f = HalfContinuumField::from_fn(grid, |x| C64::new((-(x[0] - 0.5).powi(2)).exp(), 0.0));
    println!("s,distance");
    for &s in s_list {
        let psi = SpectralFunction::power(s)?;
        println!("{s},{:.6e}", compare_zero_extension(&psi, &f));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::ValidateGenfunc { which, dim } => validate_genfunc(*which, *dim),
        Command::Rate { config } => rate(config, cli),
        Command::Spectrum { operator, dim, h, n, count } => spectrum(*operator, *dim, *h, *n, *count).map(|_| true),
        Command::CompareFractional { s, half_length, samples } => compare_fractional(s, *half_length, *samples).map(|_| true),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
