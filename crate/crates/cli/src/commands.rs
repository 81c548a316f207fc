use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use routesim_core::bounds::BoundReport;
use routesim_core::sweep::{self, format_sig, RatioMode, SweepSpec};
use routesim_core::{
    evaluate_sita, evaluate_tags, optimal_sita_cutoff, optimal_tags_threshold, replicate,
    verify_bounds, BoundedPareto, Policy, PolicyEvaluation, SimConfig, SimResult, Station,
};
use serde_json::json;

use crate::args::{EvalArgs, OptimizeArgs, PointArgs, SimulateArgs, SweepArgs, VerifyArgs};

/// Environment variable that relative output paths resolve against.
pub const OUTPUT_DIR_ENV: &str = "ROUTESIM_OUTPUT_DIR";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Infeasible(String),
    BoundsFailed(usize),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::BoundsFailed(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Infeasible(m) => write!(f, "infeasible: {m}"),
            CliError::BoundsFailed(n) => write!(f, "{n} bound check(s) failed"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<routesim_core::Error> for CliError {
    fn from(e: routesim_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CmdResult = Result<(), CliError>;

pub fn resolve_output(path: &str) -> PathBuf {
    let p = Path::new(path);
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if p.is_relative() => Path::new(&dir).join(p),
        _ => p.to_path_buf(),
    }
}

fn write_file(path: &Path, contents: &str) -> CmdResult {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::Io(format!("{}: {e}", parent.display())))?;
    }
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn dist(point: &PointArgs) -> Result<BoundedPareto, CliError> {
    Ok(BoundedPareto::new(point.alpha, point.r)?)
}

fn explain(ev: &PolicyEvaluation) -> String {
    ev.unstable_stations()
        .iter()
        .map(|st| {
            let (name, load) = match st {
                Station::Server1 => ("server 1", ev.station1.load),
                Station::Server2 => ("server 2", ev.station2.load),
            };
            format!("{name} load {} >= 1", format_sig(load))
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn evaluate(policy: Policy, d: &BoundedPareto, lambda: f64, s: f64) -> Result<PolicyEvaluation, CliError> {
    Ok(match policy {
        Policy::Sita => evaluate_sita(d, lambda, s)?,
        Policy::Tags => evaluate_tags(d, lambda, s)?,
    })
}

fn evaluation_json(ev: &PolicyEvaluation) -> serde_json::Value {
    json!({
        "policy": ev.policy,
        "threshold": ev.threshold,
        "station1": ev.station1,
        "station2": ev.station2,
        "fraction_to_2": ev.fraction_to_2,
        "total_wait": ev.total_wait,
        "feasible": ev.is_feasible(),
        "unstable_stations": ev.unstable_stations(),
    })
}

fn print_evaluation(ev: &PolicyEvaluation) {
    eprintln!(
        "{} s={}: server1 load={} wait={} | server2 load={} wait={} | to server 2={} | mean wait={}",
        ev.policy,
        format_sig(ev.threshold),
        format_sig(ev.station1.load),
        format_sig(ev.station1.mean_wait),
        format_sig(ev.station2.load),
        format_sig(ev.station2.mean_wait),
        format_sig(ev.fraction_to_2),
        format_sig(ev.total_wait),
    );
}

pub fn eval(args: EvalArgs) -> CmdResult {
    let d = dist(&args.point)?;
    let ev = evaluate(args.point.policy.into(), &d, args.point.lambda, args.s)?;
    println!("{}", evaluation_json(&ev));
    print_evaluation(&ev);
    if !ev.is_feasible() {
        return Err(CliError::Infeasible(explain(&ev)));
    }
    Ok(())
}

pub fn optimize(args: OptimizeArgs) -> CmdResult {
    let d = dist(&args.point)?;
    let policy: Policy = args.point.policy.into();
    let lambda = args.point.lambda;
    let search = match policy {
        Policy::Sita => optimal_sita_cutoff(&d, lambda),
        Policy::Tags => optimal_tags_threshold(&d, lambda),
    };
    let search = match search {
        Ok(s) => s,
        Err(routesim_core::Error::NoFeasibleThreshold { r }) => {
            println!("{}", json!({ "policy": policy, "feasible": false }));
            return Err(CliError::Infeasible(format!("no stable threshold in [1, {r}]")));
        }
        Err(e) => return Err(e.into()),
    };
    let ev = evaluate(policy, &d, lambda, search.optimal_threshold)?;
    println!("{}", json!({ "search": search, "evaluation": evaluation_json(&ev) }));
    print_evaluation(&ev);
    Ok(())
}

fn load_spec(args: &SweepArgs) -> Result<SweepSpec, CliError> {
    let mut spec = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => SweepSpec::default(),
    };
    if let Some(a) = &args.alpha {
        spec.alpha_values = a.clone();
    }
    if let Some(l) = &args.lambda {
        spec.lambda_values = l.clone();
    }
    if let Some(v) = args.r_min {
        spec.r_grid.min = v;
    }
    if let Some(v) = args.r_max {
        spec.r_grid.max = v;
    }
    if let Some(v) = args.points {
        spec.r_grid.points = v;
    }
    if let Some(v) = args.spacing {
        spec.r_grid.spacing = v.into();
    }
    if let Some(v) = args.mode {
        spec.mode = v.into();
    }
    if args.sita_at_tags_threshold {
        spec.ratio_mode = RatioMode::SitaAtTagsThreshold;
    }
    if let Some(v) = args.jobs {
        spec.simulation.jobs = v;
    }
    if let Some(v) = args.seed {
        spec.simulation.seed = v;
    }
    if let Some(v) = &args.output {
        spec.output_path = v.clone();
    }
    spec.validate()?;
    Ok(spec)
}

pub fn sweep(args: SweepArgs) -> CmdResult {
    let spec = load_spec(&args)?;
    let rows = sweep::run_sweep(&spec)?;
    let csv_path = resolve_output(&spec.output_path);
    write_file(&csv_path, &sweep::to_csv(&rows, spec.mode))?;
    eprintln!("wrote {} rows to {}", rows.len(), csv_path.display());
    if let Some(script) = &args.plot_script {
        let script_path = resolve_output(script);
        let png = csv_path.with_extension("png");
        let text = sweep::gnuplot_script(
            &rows,
            &csv_path.display().to_string(),
            &png.display().to_string(),
        );
        write_file(&script_path, &text)?;
        eprintln!("wrote plot script to {}", script_path.display());
    }
    Ok(())
}

pub fn verify_bounds_cmd(args: VerifyArgs) -> CmdResult {
    let mut points = Vec::new();
    for &r in &args.r {
        if args.lambda_over_r.is_empty() {
            points.extend(args.lambda.iter().map(|&l| (r, l)));
        } else {
            points.extend(args.lambda_over_r.iter().map(|&c| (r, c / r)));
        }
    }

    let mut out = BoundReport::csv_header();
    out.push('\n');
    let mut checked = 0;
    let mut failures = 0;
    let mut tags_bound_failures = 0;
    for (r, lambda) in points {
        let report = BoundedPareto::new(1.0, r)
            .and_then(|d| verify_bounds(&d, lambda));
        match report {
            Ok(rep) => {
                checked += 1;
                out.push_str(&rep.to_csv());
                out.push('\n');
                if !rep.tags_bound_holds {
                    tags_bound_failures += 1;
                }
                if !rep.all_hold {
                    failures += 1;
                    eprintln!(
                        "FAIL r={} lambda={}: tags={} (lower {}), sita={} (upper {}{})",
                        format_sig(r),
                        format_sig(lambda),
                        format_sig(rep.computed_tags),
                        format_sig(rep.tags_lower),
                        format_sig(rep.computed_sita),
                        format_sig(rep.sita_upper),
                        if rep.sita_bound_asserted { "" } else { ", not asserted" },
                    );
                }
            }
            Err(e) => eprintln!("skip r={} lambda={}: {e}", format_sig(r), format_sig(lambda)),
        }
    }

    match &args.output {
        Some(path) => write_file(&resolve_output(path), &out)?,
        None => print!("{out}"),
    }
    println!(
        "summary: {checked} point(s) checked; TAGS lower bound {}; {failures} failing point(s)",
        if tags_bound_failures == 0 {
            "held at every point".to_string()
        } else {
            format!("failed at {tags_bound_failures} point(s)")
        }
    );
    if failures > 0 {
        return Err(CliError::BoundsFailed(failures));
    }
    Ok(())
}

fn sim_csv(cfg: &SimConfig, res: &SimResult, analytic: Option<(f64, f64)>) -> String {
    let mut header = String::from(
        "policy,alpha,r,lambda,s,seed,jobs,mean_wait,ci_halfwidth,station1_mean_wait,\
         station2_mean_wait,overflow_fraction,jobs_measured,unstable",
    );
    let mut row = vec![
        cfg.policy.to_string(),
        format_sig(cfg.dist.alpha()),
        format_sig(cfg.dist.r()),
        format_sig(cfg.arrival_rate),
        format_sig(cfg.threshold),
        cfg.seed.to_string(),
        cfg.num_jobs.to_string(),
        format_sig(res.mean_wait),
        format_sig(res.ci_halfwidth),
        format_sig(res.station1_mean_wait),
        format_sig(res.station2_mean_wait),
        format_sig(res.overflow_fraction),
        res.jobs_measured.to_string(),
        res.unstable.to_string(),
    ];
    if let Some((value, discrepancy)) = analytic {
        header.push_str(",analytic_wait,discrepancy_halfwidths");
        row.push(format_sig(value));
        row.push(format_sig(discrepancy));
    }
    format!("{header}\n{}\n", row.join(","))
}

pub fn simulate_cmd(args: SimulateArgs) -> CmdResult {
    let d = dist(&args.point)?;
    let policy: Policy = args.point.policy.into();
    let mut cfg = SimConfig::new(policy, d, args.point.lambda, args.s)
        .with_jobs(args.jobs)
        .with_seed(args.seed);
    if let Some(w) = args.warmup {
        cfg.warmup_jobs = w;
    }
    cfg.batches = args.batches;
    let res = replicate(&cfg, args.replications)?;

    let analytic = if args.compare_analytic {
        let ev = evaluate(policy, &d, args.point.lambda, args.s)?;
        let discrepancy = if res.ci_halfwidth > 0.0 {
            (res.mean_wait - ev.total_wait).abs() / res.ci_halfwidth
        } else if res.mean_wait == ev.total_wait {
            0.0
        } else {
            f64::INFINITY
        };
        Some((ev.total_wait, discrepancy))
    } else {
        None
    };

    let mut out = json!({ "config": cfg, "result": res });
    if let Some((value, discrepancy)) = analytic {
        out["analytic_wait"] = json!(value);
        out["discrepancy_halfwidths"] = json!(discrepancy);
    }
    println!("{out}");
    if res.unstable {
        eprintln!("warning: configuration overloads a server; estimates diverge");
    }
    if let Some(path) = &args.csv {
        write_file(&resolve_output(path), &sim_csv(&cfg, &res, analytic))?;
    }
    Ok(())
}
