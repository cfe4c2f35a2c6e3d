//! Subcommand orchestration.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use growth_lab::market::simulate_assets;
use growth_lab::paths::write_path_dump;
use growth_lab::{
    closed_form_value, fit_rate, gap_from_estimates, running_max, sandwich_check, sweep_expected_utility, write_sweep,
    ConstraintReport, DrawdownOptimal, FloorOptimal, MertonModel, NoiseBlock, Shifted, SweepReport, UtilityEstimate,
    ValueFunctionQuery, WealthModel,
};

use crate::error::{CliError, CliResult, EXIT_OK};
use crate::manifest::{RunManifest, Status, MANIFEST_FILE};
use crate::scenario::{Constraint, DrawdownConstraint, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Simulate,
    CerSweep,
    VerifyFloor,
    VerifyDrawdown,
    Asymptotics,
    Value,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::CerSweep => "cer-sweep",
            Command::VerifyFloor => "verify-floor",
            Command::VerifyDrawdown => "verify-drawdown",
            Command::Asymptotics => "asymptotics",
            Command::Value => "value",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out: PathBuf,
    pub workers: Option<usize>,
    pub force: bool,
}

/// Files written and a human-readable summary.
#[derive(Debug, Default)]
pub struct Outcome {
    pub outputs: Vec<String>,
    pub summary: String,
    violation: Option<String>,
}

impl Outcome {
    fn write(&mut self, dir: &Path, name: &str, contents: &[u8]) -> CliResult<()> {
        std::fs::write(dir.join(name), contents)?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    fn line(&mut self, text: impl AsRef<str>) {
        self.summary.push_str(text.as_ref());
        self.summary.push('\n');
    }
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn prepare_out_dir(out: &Path, force: bool) -> CliResult<()> {
    if out.exists() {
        if !out.is_dir() {
            return Err(CliError::Config(format!("--out {} is not a directory", out.display())));
        }
        let non_empty = std::fs::read_dir(out)?.next().is_some();
        if non_empty && !force {
            return Err(CliError::Config(format!(
                "output directory {} is not empty; pass --force to overwrite",
                out.display()
            )));
        }
        if non_empty {
            for entry in std::fs::read_dir(out)? {
                let path = entry?.path();
                if path.is_file() {
                    std::fs::remove_file(path)?;
                }
            }
        }
    }
    std::fs::create_dir_all(out)?;
    Ok(())
}

/// Runs `command` in a worker pool of the requested size, writing the
/// manifest before any computation and again when done.
pub fn execute(command: Command, scenario: &Scenario, opts: &RunOptions) -> CliResult<Outcome> {
    prepare_out_dir(&opts.out, opts.force)?;
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = opts.workers {
            if n == 0 {
                return Err(CliError::Config("--workers must be at least 1".into()));
            }
            b = b.num_threads(n);
        }
        b.build().map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))?
    };
    let mut manifest = RunManifest::start(command.name(), scenario.hash(), scenario.seed, pool.current_num_threads());
    manifest.write(&opts.out)?;

    let result = pool.install(|| dispatch(command, scenario, &opts.out));
    match &result {
        Ok(o) => {
            manifest.outputs = o.outputs.clone();
            match &o.violation {
                Some(_) => manifest.finish(Status::Complete, crate::error::EXIT_VIOLATION),
                None => manifest.finish(Status::Complete, EXIT_OK),
            }
        }
        Err(e) => manifest.finish(Status::Failed, e.exit_code()),
    }
    manifest.outputs.insert(0, MANIFEST_FILE.into());
    manifest.write(&opts.out)?;
    let outcome = result?;
    if let Some(v) = &outcome.violation {
        eprint!("{}", outcome.summary);
        return Err(CliError::Violation(v.clone()));
    }
    Ok(outcome)
}

fn dispatch(command: Command, s: &Scenario, dir: &Path) -> CliResult<Outcome> {
    match command {
        Command::Simulate => simulate(s, dir),
        Command::CerSweep => cer_sweep(s, dir),
        Command::VerifyFloor => verify_floor(s, dir),
        Command::VerifyDrawdown => verify_drawdown(s, dir),
        Command::Asymptotics => asymptotics(s, dir),
        Command::Value => value(s, dir),
    }
}

fn merton(s: &Scenario, p: f64) -> CliResult<MertonModel> {
    Ok(MertonModel::new(s.schedule.clone(), p, s.v0)?)
}

/// Exponent of the unconstrained optimiser `ξ̂` fed to the drawdown
/// transform: `p(1-α)`, exact for linear `w` and a reference otherwise.
fn drawdown_exponent(s: &Scenario, d: &DrawdownConstraint) -> f64 {
    s.p * (1.0 - d.alpha())
}

/// Long-run rate `|q|/(2(1-q))·mean ‖θ‖²` of the signed log value function.
fn closed_form_rate(s: &Scenario, q: f64) -> CliResult<f64> {
    let horizon = s.horizons.last();
    Ok(q.abs() / (2.0 * (1.0 - q)) * s.schedule.mean_theta_sq(horizon)?)
}

/// The scenario's wealth model under its constraint.
pub fn candidate_model(s: &Scenario) -> CliResult<Arc<dyn WealthModel>> {
    Ok(match &s.constraint {
        Constraint::None => Arc::new(merton(s, s.p)?),
        Constraint::Drawdown(d) => {
            Arc::new(DrawdownOptimal { xi: merton(s, drawdown_exponent(s, d))?, scale: d.scale.clone() })
        }
        Constraint::Floor(f) => {
            Arc::new(FloorOptimal::new(Shifted { inner: merton(s, s.p)?, delta: s.delta }, f.clone())?)
        }
    })
}

fn reference_rate(s: &Scenario) -> CliResult<f64> {
    match &s.constraint {
        Constraint::Drawdown(d) => closed_form_rate(s, drawdown_exponent(s, d)),
        _ => closed_form_rate(s, s.p),
    }
}

fn sweep(s: &Scenario, model: &dyn WealthModel) -> CliResult<Vec<UtilityEstimate>> {
    Ok(sweep_expected_utility(model, &s.utility(), &s.grid, &s.horizons, s.n_paths, s.seed)?)
}

fn fitted(s: &Scenario, estimates: &[UtilityEstimate]) -> CliResult<SweepReport> {
    let mut r = fit_rate(estimates, s.tail_fraction)?;
    r.seed = Some(s.seed);
    Ok(r)
}

fn sweep_bytes(r: &SweepReport) -> CliResult<Vec<u8>> {
    let mut buf = Vec::new();
    write_sweep(&mut buf, r)?;
    Ok(buf)
}

fn rate_lines(o: &mut Outcome, label: &str, r: &SweepReport, reference: f64) -> String {
    let rel = (r.fitted_rate - reference).abs() / reference.abs();
    let text = format!(
        "# growth-lab rate v1\nlabel={label}\nfitted_rate={}\nrate_std_error={}\nreference_rate={}\nrelative_error={}\nmax_residual={}\n",
        fmt17(r.fitted_rate),
        fmt17(r.rate_std_error),
        fmt17(reference),
        fmt17(rel),
        fmt17(r.max_residual),
    );
    o.line(format!(
        "{label}: fitted rate {:.6} ± {:.6}, closed form {:.6} (relative error {:.2}%)",
        r.fitted_rate,
        r.rate_std_error,
        reference,
        100.0 * rel
    ));
    text
}

fn simulate(s: &Scenario, dir: &Path) -> CliResult<Outcome> {
    let mut o = Outcome::default();
    let model = candidate_model(s)?;
    let n = s.dump_paths.min(s.n_paths);
    let initial = vec![1.0; s.schedule.dim()];
    for i in 0..n as u64 {
        let noise = NoiseBlock::generate(s.seed, i, &s.grid, s.schedule.dim());
        let mut buf = Vec::new();
        write_path_dump(&mut buf, &running_max(&model.wealth(&s.grid, &noise)?))?;
        o.write(dir, &format!("wealth_{i:04}.txt"), &buf)?;
        for (j, asset) in simulate_assets(&s.schedule, &s.grid, &noise, &initial)?.iter().enumerate() {
            let mut buf = Vec::new();
            write_path_dump(&mut buf, &running_max(asset))?;
            o.write(dir, &format!("asset_{j}_{i:04}.txt"), &buf)?;
        }
        if let Constraint::Floor(f) = &s.constraint {
            let mut buf = Vec::new();
            write_path_dump(&mut buf, &running_max(&f.floor_path(&s.grid, &noise)?))?;
            o.write(dir, &format!("floor_{i:04}.txt"), &buf)?;
        }
    }
    o.line(format!("simulated {n} paths into {}", dir.display()));
    Ok(o)
}

fn cer_sweep(s: &Scenario, dir: &Path) -> CliResult<Outcome> {
    let mut o = Outcome::default();
    let model = candidate_model(s)?;
    let r = fitted(s, &sweep(s, model.as_ref())?)?;
    o.write(dir, "sweep.csv", &sweep_bytes(&r)?)?;
    let text = rate_lines(&mut o, "candidate", &r, reference_rate(s)?);
    o.write(dir, "report.txt", text.as_bytes())?;
    Ok(o)
}

fn audit_text(o: &mut Outcome, label: &str, r: &ConstraintReport) -> String {
    o.line(format!(
        "{label}: {} paths, {} points, {} violations, worst margin {:.6e}",
        r.n_paths_checked, r.n_points_checked, r.n_violations, r.worst_margin
    ));
    r.to_string()
}

fn verify_floor(s: &Scenario, dir: &Path) -> CliResult<Outcome> {
    let Constraint::Floor(floor) = &s.constraint else {
        return Err(CliError::key("constraint", "verify-floor needs constraint = floor"));
    };
    let mut o = Outcome::default();
    let xi = Shifted { inner: merton(s, s.p)?, delta: s.delta };
    let model = FloorOptimal::new(xi, floor.clone())?;

    let dominating = model.audit_dominating(&s.grid, s.n_paths, s.seed)?;
    let text = audit_text(&mut o, "dominating wealth", &dominating);
    o.write(dir, "dominating.txt", text.as_bytes())?;
    let audit = model.audit(&s.grid, s.n_paths, s.seed)?;
    let text = audit_text(&mut o, "floor-optimal wealth", &audit);
    o.write(dir, "constraint.txt", text.as_bytes())?;

    let xi = Shifted { inner: merton(s, s.p)?, delta: s.delta };
    let est_xi = sweep(s, &xi)?;
    let est_v = sweep(s, &model)?;
    let r_xi = fitted(s, &est_xi)?;
    let r_v = fitted(s, &est_v)?;
    o.write(dir, "sweep_xi.csv", &sweep_bytes(&r_xi)?)?;
    o.write(dir, "sweep_floor.csv", &sweep_bytes(&r_v)?)?;

    let gap = gap_from_estimates(&est_v, &est_xi, s.tail_fraction)?;
    let gamma_log_eps = (s.p * floor.epsilon().ln()).abs();
    let mut text = String::from("# growth-lab gap v1\n# T,gap,std_error,bound,within_bound\n");
    let mut all_within = true;
    for ((t, g), se) in gap.horizons.iter().zip(&gap.gaps).zip(&gap.std_errors) {
        let bound = gamma_log_eps / t + 3.0 * se;
        let within = *g <= bound;
        all_within &= within;
        let _ = writeln!(text, "{},{},{},{},{within}", fmt17(*t), fmt17(*g), fmt17(*se), fmt17(bound));
    }
    let _ = writeln!(text, "# tail_slope={}", fmt17(gap.tail_slope));
    let _ = writeln!(text, "# statistic={}", fmt17(gap.statistic));
    let _ = writeln!(text, "# all_within_bound={all_within}");
    o.write(dir, "gap.txt", text.as_bytes())?;
    o.line(format!(
        "rate gap: tail slope {:.6}, largest tail gap {:.6}, within |p log eps|/T + 3SE at every horizon: {all_within}",
        gap.tail_slope, gap.statistic
    ));
    let text = rate_lines(&mut o, "floor-optimal", &r_v, reference_rate(s)?);
    o.write(dir, "report.txt", text.as_bytes())?;

    if audit.n_violations > 0 || dominating.n_violations > 0 {
        o.violation = Some(format!(
            "{} floor violations, {} by the dominating wealth",
            audit.n_violations, dominating.n_violations
        ));
    }
    Ok(o)
}

fn verify_drawdown(s: &Scenario, dir: &Path) -> CliResult<Outcome> {
    let Constraint::Drawdown(d) = &s.constraint else {
        return Err(CliError::key("constraint", "verify-drawdown needs constraint = drawdown"));
    };
    let mut o = Outcome::default();
    let model = DrawdownOptimal { xi: merton(s, drawdown_exponent(s, d))?, scale: d.scale.clone() };
    let audit = model.audit(&s.grid, s.n_paths, s.seed)?;
    let text = audit_text(&mut o, "drawdown-optimal wealth", &audit);
    o.write(dir, "constraint.txt", text.as_bytes())?;

    let r = fitted(s, &sweep(s, &model)?)?;
    o.write(dir, "sweep.csv", &sweep_bytes(&r)?)?;
    let mut text = rate_lines(&mut o, "drawdown-optimal", &r, reference_rate(s)?);
    let _ = writeln!(text, "alpha={}", fmt17(d.alpha()));
    let _ = writeln!(text, "closed_form_pair={}", d.linear);
    o.write(dir, "report.txt", text.as_bytes())?;
    if !d.linear {
        o.line("note: tabulated drawdown; the reference rate uses the bound alpha and is not certified");
    }
    if audit.n_violations > 0 {
        o.violation = Some(format!("{} drawdown violations", audit.n_violations));
    }
    Ok(o)
}

fn asymptotics(s: &Scenario, dir: &Path) -> CliResult<Outcome> {
    let alpha = match &s.constraint {
        Constraint::Drawdown(d) if d.linear => d.alpha(),
        _ => return Err(CliError::key("constraint", "asymptotics needs constraint = drawdown with drawdown.alpha")),
    };
    let mut o = Outcome::default();
    let r = sandwich_check(s.p, alpha, &s.schedule, &s.sandwich_horizons, None)
        .map_err(|e| CliError::key("sandwich.horizons", e))?;
    let mut text =
        String::from("# growth-lab sandwich v1\n# T,epsilon,lower,upper,log_gap,log_gap_over_log_t,ordered\n");
    for row in &r.rows {
        let _ = writeln!(
            text,
            "{},{},{},{},{},{},{}",
            fmt17(row.horizon),
            fmt17(row.epsilon),
            fmt17(row.lower),
            fmt17(row.upper),
            fmt17(row.log_gap),
            fmt17(row.log_gap_over_log_t),
            row.ordered
        );
        o.line(format!(
            "T = {:>8}: lower {:.6e}, upper {:.6e}, log gap / log T {:.6}",
            row.horizon, row.lower, row.upper, row.log_gap_over_log_t
        ));
    }
    let _ = writeln!(text, "# bound_constant={}", fmt17(r.bound_constant));
    o.write(dir, "sandwich.csv", text.as_bytes())?;
    o.line(format!("bound constant {:.6}", r.bound_constant));
    if !r.all_ordered() {
        return Err(growth_lab::Error::InvariantViolation("sandwich bounds out of order".into()).into());
    }
    Ok(o)
}

fn value(s: &Scenario, dir: &Path) -> CliResult<Outcome> {
    let mut o = Outcome::default();
    let mut text = String::from("# growth-lab value v1\n# T,value\n");
    for &t in s.horizons.horizons() {
        let v = closed_form_value(ValueFunctionQuery::new(s.v0, t, s.p)?, &s.schedule)?;
        let _ = writeln!(text, "{},{}", fmt17(t), fmt17(v));
        o.line(format!("T = {t}: V = {v:.12}"));
    }
    o.write(dir, "value.csv", text.as_bytes())?;
    Ok(o)
}
