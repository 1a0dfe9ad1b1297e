use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use rearrange_core::expr::sample_expression;
use rearrange_core::geometry::{
    gamma_for_case, read_constants, write_constants, ConstantsRecord, GammaCase, GammaCertificate,
    GammaInputs, IsoperimetricConstants,
};
use rearrange_core::grid::{read_grid, write_grid};
use rearrange_core::inequalities::{
    run_counterexample, vanishing_tolerance, verify_cor_1_6, verify_cor_2_2,
    verify_thm_1_1, verify_thm_1_2, verify_thm_1_3, verify_thm_1_4, verify_thm_2_1, write_reports,
    BoundarySet, CellSet, CounterexampleKind, InequalityReport, Verdict,
};
use rearrange_core::io::write_atomic;
use rearrange_core::numeric::fmt_real;
use rearrange_core::orlicz::{load_nfunc, verify_orlicz_local, verify_orlicz_polya_szego};
use rearrange_core::rearrange::{decreasing_rearrangement, schwarz, write_profile, StepProfile};
use rearrange_core::suite::{run_suite, SuiteConfig};
use rearrange_core::{Domain, GridFunction};

const EXIT_VIOLATED: u8 = 2;

#[derive(Parser)]
#[command(name = "rearrange", version, about = "Rearrangements of grid functions and checks of symmetrization estimates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a closed-form expression in x1..xn and r on a box or ball grid.
    Sample(SampleArgs),
    /// Write u* (RPROF), the symmetrized function on the ball (RGRID) and a summary.
    Symmetrize(SymmetrizeArgs),
    /// Run one verifier and write its report.
    Verify(VerifyArgs),
    /// Search Q and C for the input's domain and optionally certify gamma.
    Constants(ConstantsArgs),
    /// Truncated energies of the symmetrized counterexample profile.
    Counterexample(CounterexampleArgs),
    /// Run the built-in battery on the bundled fixtures.
    Suite(SuiteArgs),
}

#[derive(Args)]
struct Common {
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Also write CSV series for plotting.
    #[arg(long)]
    emit_plots: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    Box,
    Ball,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    expr: String,
    #[arg(long, value_enum, default_value = "box")]
    domain: Shape,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 1.0 / 64.0)]
    h: f64,
    /// Ball radius.
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// File to write.
    #[arg(long, default_value = "sample.rgrid")]
    output: PathBuf,
}

#[derive(Args)]
struct SymmetrizeArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    /// Grid file; `2.2` takes a second one.
    #[arg(long, required = true, num_args = 1)]
    input: Vec<PathBuf>,
    /// 1.1, 1.2, 1.3, 1.4, 1.6, 2.1, 2.2, orlicz-global or orlicz-local.
    #[arg(long)]
    thm: String,
    #[arg(long)]
    eps: Option<f64>,
    /// Case certifying gamma for 1.1, 1.6 and orlicz-global.
    #[arg(long = "case", default_value = "i")]
    case: GammaCase,
    /// N-function descriptor or NFUNC file.
    #[arg(long)]
    nfunc: Option<String>,
    /// RCONST file with Q and C; searched on the input domain if absent.
    #[arg(long)]
    constants: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ConstantsArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long = "case")]
    case: Option<GammaCase>,
    #[arg(long)]
    eps: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CounterexampleArgs {
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value = "interior")]
    kind: CounterexampleKind,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SuiteArgs {
    /// Spacing of the planar fixtures.
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[command(flatten)]
    common: Common,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::FAILURE;
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("REARRANGE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .with_context(|| format!("REARRANGE_THREADS={v} is not a thread count"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Sample(a) => cmd_sample(a),
        Command::Symmetrize(a) => cmd_symmetrize(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Constants(a) => cmd_constants(a),
        Command::Counterexample(a) => cmd_counterexample(a),
        Command::Suite(a) => cmd_suite(a),
    }
}

fn require_inputs<'a>(paths: impl IntoIterator<Item = &'a PathBuf>) -> Result<()> {
    for p in paths {
        if !p.is_file() {
            bail!("input {} does not exist", p.display());
        }
    }
    Ok(())
}

fn out_dir(c: &Common) -> Result<&Path> {
    std::fs::create_dir_all(&c.out).with_context(|| format!("creating {}", c.out.display()))?;
    Ok(&c.out)
}

fn load(path: &Path) -> Result<GridFunction> {
    read_grid(path).with_context(|| format!("reading {}", path.display()))
}

fn cmd_sample(a: SampleArgs) -> Result<u8> {
    let domain = match a.domain {
        Shape::Box => Domain::unit_box(a.n, (1.0 / a.h).round() as usize)?,
        Shape::Ball => Domain::ball(a.n, a.radius, a.h)?,
    };
    let u = sample_expression(&Arc::new(domain), &a.expr)?;
    write_grid(&u, &a.output)?;
    println!("{} cells, |Ω| = {}", u.values().len(), fmt_real(u.domain().measure()));
    Ok(0)
}

fn profile_csv(p: &StepProfile) -> String {
    let mut s = String::from("s,u_star\n");
    for (a, _, v) in p.intervals() {
        let _ = writeln!(s, "{},{}", fmt_real(a), fmt_real(v));
    }
    s
}

fn cmd_symmetrize(a: SymmetrizeArgs) -> Result<u8> {
    require_inputs([&a.input])?;
    let dir = out_dir(&a.common)?;
    let u = load(&a.input)?;
    let sym = schwarz(&u);
    let tilde = sym.resample()?;
    write_profile(sym.profile(), &dir.join("u_star.rprof"))?;
    write_grid(&tilde, &dir.join("u_tilde.rgrid"))?;
    let summary = format!(
        "measure={}\nball_radius={}\nl2={}\nl2_star={}\nl2_tilde_resampled={}\nmeasure_tilde_grid={}\n",
        fmt_real(u.domain().measure()),
        fmt_real(sym.ball().radius()),
        fmt_real(u.lp_norm(2.0)),
        fmt_real(sym.profile().lp_norm_pow(2.0).sqrt()),
        fmt_real(tilde.lp_norm(2.0)),
        fmt_real(tilde.domain().measure()),
    );
    write_atomic(&dir.join("summary.txt"), &summary)?;
    if a.common.emit_plots {
        write_atomic(&dir.join("u_star.csv"), &profile_csv(sym.profile()))?;
    }
    print!("{summary}");
    Ok(0)
}

/// Q and C from a file, or searched on the domain on first use.
struct Constants<'a> {
    file: Option<ConstantsRecord>,
    domain: &'a Arc<Domain>,
    searched: Option<IsoperimetricConstants>,
}

impl<'a> Constants<'a> {
    fn new(path: Option<&Path>, domain: &'a Arc<Domain>) -> Result<Self> {
        let file = path
            .map(|p| read_constants(p).with_context(|| format!("reading {}", p.display())))
            .transpose()?;
        Ok(Constants {
            file,
            domain,
            searched: None,
        })
    }

    fn searched(&mut self) -> Result<IsoperimetricConstants> {
        if self.searched.is_none() {
            self.searched = Some(IsoperimetricConstants::search(self.domain)?);
        }
        Ok(self.searched.unwrap())
    }

    fn q(&mut self) -> Result<f64> {
        match &self.file {
            Some(r) => Ok(r.q()?),
            None => Ok(self.searched()?.q),
        }
    }

    fn c(&mut self) -> Result<f64> {
        match &self.file {
            Some(r) => Ok(r.c()?),
            None => Ok(self.searched()?.c),
        }
    }
}

/// `ε` for a case: the flag when given, otherwise read off `u`.
fn case_eps(case: GammaCase, u: &GridFunction, eps: Option<f64>) -> Result<Option<f64>> {
    if eps.is_some() {
        return Ok(eps);
    }
    Ok(match case {
        GammaCase::I | GammaCase::II => None,
        GammaCase::III => Some(u.zero_set_measure(0.0)),
        GammaCase::IV => Some(BoundarySet::where_small(u, vanishing_tolerance(u)?).measure()),
        GammaCase::V => Some(CellSet::where_small(u, vanishing_tolerance(u)?).max_projection_measure().1),
    })
}

fn certificate(
    case: GammaCase,
    u: &GridFunction,
    eps: Option<f64>,
    k: &mut Constants,
) -> Result<GammaCertificate> {
    let d = u.domain();
    let mut inputs = GammaInputs::new(d.dim(), d.measure());
    if case != GammaCase::I {
        inputs = inputs.with_q(k.q()?);
    }
    if matches!(case, GammaCase::IV | GammaCase::V) {
        inputs = inputs.with_c(k.c()?);
    }
    if let Some(e) = case_eps(case, u, eps)? {
        inputs = inputs.with_eps(e);
    }
    Ok(gamma_for_case(case, inputs)?)
}

fn cmd_verify(a: VerifyArgs) -> Result<u8> {
    require_inputs(&a.input)?;
    if let Some(p) = &a.constants {
        require_inputs([p])?;
    }
    let dir = out_dir(&a.common)?;
    let u = load(&a.input[0])?;
    let mut k = Constants::new(a.constants.as_deref(), u.domain())?;
    let default_eps = || a.eps.unwrap_or(0.1 * u.domain().measure());
    let nfunc = || -> Result<_> {
        let d = a.nfunc.as_deref().ok_or_else(|| anyhow!("--nfunc is required for {}", a.thm))?;
        Ok(load_nfunc(d)?)
    };
    let report: InequalityReport = match a.thm.as_str() {
        "1.1" => verify_thm_1_1(&u, &certificate(a.case, &u, a.eps, &mut k)?)?,
        "1.2" => verify_thm_1_2(&u, k.q()?)?,
        "1.3" => {
            let f = BoundarySet::where_small(&u, vanishing_tolerance(&u)?);
            verify_thm_1_3(&u, k.q()?, k.c()?, &f)?
        }
        "1.4" => {
            let f = CellSet::where_small(&u, vanishing_tolerance(&u)?);
            verify_thm_1_4(&u, k.q()?, k.c()?, &f)?
        }
        "1.6" => verify_cor_1_6(&u, certificate(a.case, &u, a.eps, &mut k)?.gradient_constant())?,
        "2.1" => verify_thm_2_1(&u, k.q()?, default_eps())?,
        "2.2" => {
            let second = a.input.get(1).ok_or_else(|| anyhow!("2.2 compares two grids: pass --input twice"))?;
            let v = load(second)?;
            verify_cor_2_2(&u, &v, k.q()?, default_eps())?
        }
        "orlicz-global" => verify_orlicz_polya_szego(&u, &certificate(a.case, &u, a.eps, &mut k)?, &nfunc()?)?,
        "orlicz-local" => verify_orlicz_local(&u, k.q()?, default_eps(), &nfunc()?)?,
        other => bail!("unknown theorem tag `{other}`"),
    };
    let file = dir.join(format!("{}.rreport", report.name));
    write_reports(std::slice::from_ref(&report), &file)?;
    if a.common.emit_plots {
        let p = decreasing_rearrangement(&u);
        write_atomic(&dir.join(format!("{}.u_star.csv", report.name)), &profile_csv(&p))?;
    }
    println!(
        "{} {} lhs={} rhs={}",
        report.name,
        report.verdict,
        fmt_real(report.lhs),
        fmt_real(report.rhs)
    );
    Ok(if report.verdict == Verdict::Violated { EXIT_VIOLATED } else { 0 })
}

fn cmd_constants(a: ConstantsArgs) -> Result<u8> {
    require_inputs([&a.input])?;
    let dir = out_dir(&a.common)?;
    let u = load(&a.input)?;
    let searched = IsoperimetricConstants::search(u.domain())?;
    let mut record = ConstantsRecord::from_constants(&searched);
    if let Some(case) = a.case {
        let mut k = Constants {
            file: None,
            domain: u.domain(),
            searched: Some(searched),
        };
        record.gamma = Some(certificate(case, &u, a.eps, &mut k)?);
    }
    let path = dir.join("constants.rconst");
    write_constants(&record, &path)?;
    print!("{}", std::fs::read_to_string(&path)?);
    Ok(0)
}

fn series_csv(t: &rearrange_core::inequalities::CounterexampleTrace) -> String {
    let mut s = String::from("eps,E,source_E\n");
    for i in 0..t.eps.len() {
        let _ = writeln!(
            s,
            "{},{},{}",
            fmt_real(t.eps[i]),
            fmt_real(t.energies[i]),
            fmt_real(t.source_energies[i])
        );
    }
    s
}

fn cmd_counterexample(a: CounterexampleArgs) -> Result<u8> {
    let dir = out_dir(&a.common)?;
    let t = run_counterexample(a.n, a.kind)?;
    write_atomic(&dir.join(format!("counterexample_n{}.csv", a.n)), &t.to_csv())?;
    if a.common.emit_plots {
        write_atomic(&dir.join(format!("counterexample_n{}_series.csv", a.n)), &series_csv(&t))?;
    }
    println!(
        "n={} slope={} source_energy={}",
        a.n,
        fmt_real(t.slope),
        fmt_real(t.source_energy)
    );
    Ok(0)
}

fn cmd_suite(a: SuiteArgs) -> Result<u8> {
    let dir = out_dir(&a.common)?;
    let mut cfg = SuiteConfig::default();
    if let Some(h) = a.h {
        cfg.h = h;
    }
    if let Some(e) = a.eps {
        cfg.eps_fraction = e;
    }
    let out = run_suite(&cfg)?;
    write_reports(&out.reports, &dir.join("suite.rreport"))?;
    for t in &out.traces {
        write_atomic(&dir.join(format!("counterexample_n{}.csv", t.dim)), &t.to_csv())?;
        if a.common.emit_plots {
            write_atomic(&dir.join(format!("counterexample_n{}_series.csv", t.dim)), &series_csv(t))?;
        }
    }
    for (name, r) in &out.constants {
        write_constants(r, &dir.join(format!("constants_{name}.rconst")))?;
    }
    for r in &out.reports {
        println!("{:32} {:9} ratio={}", r.name, r.verdict.to_string(), fmt_real(r.ratio()));
    }
    Ok(if out.any_violated() { EXIT_VIOLATED } else { 0 })
}
