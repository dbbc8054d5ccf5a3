//! Command-line surface for the Grand Lebesgue space toolkit.
//!
//! Exit codes: 0 when every case passes (expected failures that are
//! confirmed count as passes), 1 when some case fails, 2 on usage or
//! configuration errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gls_core::analysis::{
    counterexample_campaign, fourier_campaign, normalized_psi_battery, scaling_campaign,
    uc_campaign, young_campaign, CampaignConfig, CounterexampleConfig, VerificationReport,
};
use gls_core::convolution::{convolve_grid, ConvMethod, ConvolutionPlan};
use gls_core::function::{sample, FamilySpec};
use gls_core::norms::{grand_norm_with, lp_norm, lp_norm_via_quadrature, GrandNormOptions};
use gls_core::psi::PsiSpec;
use gls_core::report::{curve_csv, fmt_f64, write_report, CampaignReport, ReportFormat};
use gls_core::{FunctionRep, GroupDomain};

#[derive(Parser)]
#[command(
    name = "gls",
    version,
    about = "Grand Lebesgue space norms, convolutions and inequality verification campaigns",
    long_about = None,
    after_help = "\
FAMILY mini-language   gaussian:SIGMA | power-tail:ALPHA | indicator:A:B | mixture:SEED:K
PSI mini-language      gaussian:SIGMA | power-m:M | critical:B:BETA | extremal:R | tilde | natural:FAMILY
Environment            GLS_THREADS caps campaign parallelism (0 = auto)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// L_p norm of a family member.
    Norm(NormArgs),
    /// Grand Lebesgue norm, emitted as JSON.
    GrandNorm(GrandNormArgs),
    /// Convolve two family members on a grid; emit samples as CSV.
    Convolve(ConvolveArgs),
    /// Run a verification campaign and emit its report.
    Verify(VerifyArgs),
    /// Run the degenerate-space counterexample campaign.
    Counterexample(CounterexampleArgs),
    /// Emit (p, |f|_p / psi(p)) curve data as CSV.
    Curve(CurveArgs),
}

#[derive(Args)]
struct NormArgs {
    /// Function (family mini-language).
    #[arg(long)]
    family: String,
    /// Exponent, p >= 1; `inf` for the essential supremum.
    #[arg(long)]
    p: String,
    /// Force quadrature even when a closed-form oracle exists.
    #[arg(long)]
    quadrature: bool,
    /// Evaluate on a sampled grid instead of the analytic representation.
    #[arg(long)]
    sampled: bool,
    #[arg(long, default_value_t = 16.0)]
    domain_l: f64,
    #[arg(long, default_value_t = 4096)]
    grid_n: usize,
}

#[derive(Args)]
struct GrandNormArgs {
    #[arg(long)]
    family: String,
    /// Generating function (psi mini-language).
    #[arg(long)]
    psi: String,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 64.0)]
    p_max: f64,
    #[arg(long, default_value_t = 257)]
    nodes: usize,
    #[arg(long)]
    quadrature: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Spectral,
    Direct,
}

#[derive(Args)]
struct ConvolveArgs {
    #[arg(long)]
    f: String,
    #[arg(long)]
    g: String,
    #[arg(long, value_enum, default_value_t = MethodArg::Spectral)]
    method: MethodArg,
    #[arg(long, default_value_t = 16.0)]
    domain_l: f64,
    #[arg(long, default_value_t = 4096)]
    grid_n: usize,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum CampaignArg {
    Young,
    Algebra,
    Scaling,
    Fourier,
    Uc,
}

#[derive(Args)]
struct VerifyArgs {
    /// Which inequality campaign to run.
    #[arg(value_enum)]
    campaign: CampaignArg,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Number of seeded function pairs (young / algebra).
    #[arg(long, default_value_t = 10)]
    pairs: usize,
    /// Comma-separated psi battery override (algebra only).
    #[arg(long)]
    psi: Option<String>,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 64.0)]
    domain_l: f64,
    #[arg(long, default_value_t = 16384)]
    grid_n: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CounterexampleArgs {
    /// Comma-separated truncation caps.
    #[arg(long, default_value = "100,1000,10000,100000")]
    x_list: String,
    /// Comma-separated exponents (needs values in (3/2, 3] and above 3).
    #[arg(long, default_value = "2,3,6")]
    p_list: String,
    #[arg(long, default_value_t = 1e-7)]
    rel_tol: f64,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    psi: String,
    #[arg(long, default_value_t = 64.0)]
    p_max: f64,
    #[arg(long, default_value_t = 257)]
    nodes: usize,
    /// Keep rows whose ratio is not finite (values appear as inf/nan).
    #[arg(long)]
    include_nonfinite: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    /// Usage or configuration problem: exit 2.
    Config(String),
    /// Verified failure in a campaign: exit 1.
    CasesFailed,
}

impl From<gls_core::Error> for Failure {
    fn from(e: gls_core::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

fn parse_exponent(s: &str) -> Result<f64, Failure> {
    if s == "inf" || s == "infinity" {
        return Ok(f64::INFINITY);
    }
    s.parse::<f64>()
        .map_err(|_| Failure::Config(format!("`{s}` is not an exponent")))
}

fn parse_f64_list(s: &str, what: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Config(format!("`{t}` is not a number in {what}")))
        })
        .collect()
}

fn write_out(path: &Option<PathBuf>, body: &str) -> Result<(), Failure> {
    match path {
        None => {
            print!("{body}");
            std::io::stdout().flush().map_err(|e| Failure::Config(e.to_string()))
        }
        Some(p) => std::fs::write(p, body)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", p.display()))),
    }
}

fn emit_campaign(
    seed: u64,
    config: BTreeMap<String, String>,
    cases: Vec<VerificationReport>,
    format: FormatArg,
    out: &Option<PathBuf>,
) -> Result<(), Failure> {
    let report = CampaignReport::new(seed, config, cases);
    let format = match format {
        FormatArg::Json => ReportFormat::Json,
        FormatArg::Csv => ReportFormat::Csv,
    };
    match out {
        None => {
            let mut stdout = std::io::stdout();
            write_report(&report, format, &mut stdout)
                .map_err(|e| Failure::Config(e.to_string()))?;
        }
        Some(p) => {
            gls_core::report::emit_report(&report, format, p)
                .map_err(|e| Failure::Config(format!("cannot write {}: {e}", p.display())))?;
        }
    }
    if report.all_pass() {
        Ok(())
    } else {
        Err(Failure::CasesFailed)
    }
}

fn build_function(spec: &str) -> Result<FunctionRep, Failure> {
    Ok(FamilySpec::parse(spec)?.build()?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Norm(a) => {
            let f = build_function(&a.family)?;
            let p = parse_exponent(&a.p)?;
            let value = if a.sampled {
                let d = GroupDomain::real_line(a.domain_l, a.grid_n)?;
                lp_norm(&FunctionRep::Sampled(sample(&f, d)?), p)?
            } else if a.quadrature {
                lp_norm_via_quadrature(&f, p)?
            } else {
                lp_norm(&f, p)?
            };
            println!("{}", fmt_f64(value));
            Ok(())
        }
        Command::GrandNorm(a) => {
            let f = build_function(&a.family)?;
            let spec = PsiSpec::parse(&a.psi)?;
            let opts = GrandNormOptions {
                tol: a.tol,
                nodes: a.nodes,
                p_max: a.p_max,
                use_oracle: !a.quadrature,
            };
            let r = grand_norm_with(&f, &spec, &opts)?;
            println!("{{");
            println!("  \"value\": {},", json_num(r.value));
            println!("  \"p_star\": {},", json_num(r.p_star));
            println!("  \"nodes_evaluated\": {},", r.nodes_evaluated);
            println!("  \"refinements\": {},", r.refinements);
            match r.tail_bound {
                Some(t) => println!("  \"tail_bound\": {},", json_num(t)),
                None => println!("  \"tail_bound\": null,"),
            }
            println!("  \"converged\": {},", r.converged);
            println!("  \"indeterminate_nodes\": {}", r.indeterminate_nodes);
            println!("}}");
            Ok(())
        }
        Command::Convolve(a) => {
            let d = GroupDomain::real_line(a.domain_l, a.grid_n)?;
            let f = sample(&build_function(&a.f)?, d)?;
            let g = sample(&build_function(&a.g)?, d)?;
            let plan = ConvolutionPlan {
                method: match a.method {
                    MethodArg::Spectral => ConvMethod::Spectral,
                    MethodArg::Direct => ConvMethod::DirectGrid,
                },
                ..ConvolutionPlan::default()
            };
            let h = convolve_grid(&f, &g, &plan)?;
            let mut body = String::from("x,value\n");
            for (x, v) in d.points().zip(h.values()) {
                body.push_str(&format!("{},{}\n", fmt_f64(x), fmt_f64(*v)));
            }
            write_out(&a.out, &body)
        }
        Command::Verify(a) => {
            let domain = GroupDomain::real_line(a.domain_l, a.grid_n)?;
            let cfg = CampaignConfig {
                seed: a.seed,
                pairs: a.pairs,
                domain,
                tol: a.tol,
            };
            let mut config = BTreeMap::new();
            config.insert("command".into(), format!("verify-{}", campaign_name(a.campaign)));
            config.insert("seed".into(), a.seed.to_string());
            config.insert("pairs".into(), a.pairs.to_string());
            config.insert("tol".into(), format!("{}", a.tol));
            config.insert("domain_l".into(), format!("{}", a.domain_l));
            config.insert("grid_n".into(), a.grid_n.to_string());
            config.insert("format".into(), format_name(a.format).into());
            config.insert("threads".into(), threads_config());
            let cases = match a.campaign {
                CampaignArg::Young => {
                    config.insert("psi".into(), "-".into());
                    young_campaign(&cfg)?
                }
                CampaignArg::Algebra => {
                    let battery = match &a.psi {
                        None => normalized_psi_battery(),
                        Some(list) => list
                            .split(',')
                            .map(|s| PsiSpec::parse(s.trim()))
                            .collect::<gls_core::Result<Vec<_>>>()?,
                    };
                    config.insert(
                        "psi".into(),
                        battery.iter().map(|s| s.label()).collect::<Vec<_>>().join(","),
                    );
                    algebra_campaign_with_battery(&cfg, &battery)?
                }
                CampaignArg::Scaling => {
                    config.insert("psi".into(), "-".into());
                    scaling_campaign(&cfg)?
                }
                CampaignArg::Fourier => {
                    config.insert("psi".into(), "-".into());
                    fourier_campaign(&cfg)?
                }
                CampaignArg::Uc => {
                    config.insert("psi".into(), "-".into());
                    uc_campaign(1e-3)?
                }
            };
            emit_campaign(a.seed, config, cases, a.format, &a.out)
        }
        Command::Counterexample(a) => {
            let cfg = CounterexampleConfig {
                x_list: parse_f64_list(&a.x_list, "--x-list")?,
                p_list: parse_f64_list(&a.p_list, "--p-list")?,
                rel_tol: a.rel_tol,
            };
            let mut config = BTreeMap::new();
            config.insert("command".into(), "counterexample".into());
            config.insert("x_list".into(), a.x_list.clone());
            config.insert("p_list".into(), a.p_list.clone());
            config.insert("rel_tol".into(), format!("{}", a.rel_tol));
            config.insert("format".into(), format_name(a.format).into());
            config.insert("threads".into(), threads_config());
            let cases = counterexample_campaign(&cfg)?;
            emit_campaign(0, config, cases, a.format, &a.out)
        }
        Command::Curve(a) => {
            let f = build_function(&a.family)?;
            let spec = PsiSpec::parse(&a.psi)?;
            let p_end = if spec.upper().is_finite() {
                spec.upper() - (spec.upper() - 1.0) * 1e-9
            } else {
                a.p_max
            };
            let nodes = a.nodes.max(2);
            let delta = gls_core::norms::GRID_DELTA;
            let (s_lo, s_hi) = (delta.ln(), (p_end - 1.0 + delta).ln());
            let mut points = Vec::with_capacity(nodes);
            for i in 0..nodes {
                let p = if i == 0 {
                    1.0
                } else if i == nodes - 1 {
                    p_end
                } else {
                    1.0 - delta + (s_lo + (s_hi - s_lo) * i as f64 / (nodes - 1) as f64).exp()
                };
                let num = lp_norm(&f, p)?;
                let den = spec.eval(p)?;
                let ratio = match gls_core::norms::extended_ratio(num, den) {
                    gls_core::norms::RatioOutcome::Finite(r) => r,
                    gls_core::norms::RatioOutcome::Infinite => f64::INFINITY,
                    gls_core::norms::RatioOutcome::Indeterminate => f64::NAN,
                };
                points.push((p, ratio));
            }
            write_out(&a.out, &curve_csv(&points, a.include_nonfinite))
        }
    }
}

fn algebra_campaign_with_battery(
    cfg: &CampaignConfig,
    battery: &[PsiSpec],
) -> gls_core::Result<Vec<VerificationReport>> {
    use gls_core::analysis::{mixture_pairs, verify_banach_algebra};
    use rayon::prelude::*;
    let pairs = mixture_pairs(cfg.seed, cfg.pairs);
    let cells: Vec<(usize, usize)> = (0..pairs.len())
        .flat_map(|i| (0..battery.len()).map(move |j| (i, j)))
        .collect();
    cells
        .par_iter()
        .map(|&(i, j)| {
            let (f, g) = &pairs[i];
            let mut rep = verify_banach_algebra(f, g, &battery[j], cfg.tol, cfg)?;
            rep.id = format!("algebra/pair{:02}/psi{}", i, j);
            rep = rep.provenance_entry("seed", format!("{}", cfg.seed));
            Ok(rep)
        })
        .collect()
}

fn campaign_name(c: CampaignArg) -> &'static str {
    match c {
        CampaignArg::Young => "young",
        CampaignArg::Algebra => "algebra",
        CampaignArg::Scaling => "scaling",
        CampaignArg::Fourier => "fourier",
        CampaignArg::Uc => "uc",
    }
}

fn format_name(f: FormatArg) -> &'static str {
    match f {
        FormatArg::Json => "json",
        FormatArg::Csv => "csv",
    }
}

fn threads_config() -> String {
    match std::env::var("GLS_THREADS") {
        Ok(v) => v,
        Err(_) => "auto".into(),
    }
}

fn json_num(x: f64) -> String {
    if x.is_finite() {
        fmt_f64(x)
    } else {
        format!("\"{}\"", fmt_f64(x))
    }
}

fn init_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("GLS_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .parse()
        .map_err(|_| Failure::Config(format!("GLS_THREADS must be a nonnegative integer, got `{raw}`")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse(); // clap exits with code 2 on usage errors
    if let Err(f) = init_threads() {
        if let Failure::Config(msg) = f {
            eprintln!("error: {msg}");
        }
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::CasesFailed) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
