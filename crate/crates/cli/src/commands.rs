use std::ffi::OsString;
use std::path::{Path, PathBuf};

use serde_json::json;
use sik_core::harness::report::{fmt_float, trace_csv, write_experiment};
use sik_core::harness::{extract_profiles, mae, restore_image, run_sweep, RestorationSetup, SetupParams};
use sik_core::simulation::{degrade as degrade_image, shepp_logan_variant, DegradationSpec, ImageGrid};
use sik_core::solvers::{
    evaluate_cost, initial_guess, solve, strategy_weights, IterationTrace, SolverConfig, Strategy,
};

use crate::error::{CliError, CliResult};
use crate::image_io::{image_to_csv, image_to_pgm, read_image, write_file};
use crate::manifest::RunManifest;
use crate::sweep_config::parse_sweep_config;
use crate::{DegradeArgs, PhantomArgs, RestoreArgs, SweepArgs};

pub const MIN_PHANTOM_SIZE: usize = 16;
pub const WORKERS_ENV: &str = "SIK_WORKERS";

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = OsString::from(prefix.as_os_str());
    s.push(suffix);
    PathBuf::from(s)
}

/// Writes `PREFIX.csv` and `PREFIX.pgm` and records them in the manifest.
fn write_image(prefix: &Path, image: &ImageGrid, manifest: &mut RunManifest) -> CliResult<()> {
    let csv = with_suffix(prefix, ".csv");
    let pgm = with_suffix(prefix, ".pgm");
    write_file(&csv, image_to_csv(image))?;
    let (bytes, scaling) = image_to_pgm(image);
    write_file(&pgm, bytes)?;
    manifest.output("image_csv", &csv).output("image_pgm", &pgm);
    manifest.pgm_scaling = Some(scaling);
    Ok(())
}

fn finish(manifest: &mut RunManifest, prefix: &Path) -> CliResult<()> {
    let path = with_suffix(prefix, ".manifest.json");
    manifest.output("manifest", &path);
    manifest.write(&path)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

pub fn phantom(args: &PhantomArgs) -> CliResult<()> {
    if args.size < MIN_PHANTOM_SIZE {
        return Err(CliError::usage(format!(
            "--size must be at least {MIN_PHANTOM_SIZE}, got {}",
            args.size
        )));
    }
    let variant = args.variant.into();
    let image = shepp_logan_variant(args.size, args.size, variant)?;
    let mut manifest = RunManifest::new("phantom", json!({ "size": args.size, "variant": variant }));
    write_image(&args.out, &image, &mut manifest)?;
    finish(&mut manifest, &args.out)
}

pub fn degrade(args: &DegradeArgs) -> CliResult<()> {
    let spec = DegradationSpec {
        kernel_size: args.kernel,
        boundary: args.boundary,
        sigma: args.sigma,
        seed: args.seed,
    };
    spec.validate().map_err(|e| CliError::usage(e.to_string()))?;
    let input = read_image(&args.input)?;
    let degraded = degrade_image(&input, &spec)?;
    let mut manifest = RunManifest::new("degrade", json!({ "degradation": spec }));
    manifest.input("image", &args.input).seed("noise", args.seed);
    write_image(&args.out, &degraded, &mut manifest)?;
    finish(&mut manifest, &args.out)
}

fn check_flag(strategy: Strategy, name: &str, value: Option<f64>, applies: bool) -> CliResult<()> {
    if value.is_some() && !applies {
        return Err(CliError::usage(format!("--{name} does not apply to strategy {strategy}")));
    }
    Ok(())
}

fn solver_config(args: &RestoreArgs) -> CliResult<SolverConfig> {
    let s = args.strategy;
    check_flag(s, "gamma", args.gamma, s.uses_gamma())?;
    check_flag(s, "delta", args.delta, s.uses_delta())?;
    check_flag(s, "p", args.p, s.uses_p())?;
    let defaults = SolverConfig::new(s);
    let required = |name: &str, v: Option<f64>, uses: bool, default: f64| match (uses, v) {
        (true, None) => Err(CliError::usage(format!("strategy {s} requires --{name}"))),
        (_, v) => Ok(v.unwrap_or(default)),
    };
    let config = SolverConfig {
        strategy: s,
        beta: args.beta,
        gamma: required("gamma", args.gamma, s.uses_gamma(), defaults.gamma)?,
        delta: required("delta", args.delta, s.uses_delta(), defaults.delta)?,
        p: args.p.unwrap_or(defaults.p),
        max_iters: args.iters,
        rel_change_tol: args.tol,
        seed: args.seed,
        trace_stride: args.trace_stride,
        ..defaults
    };
    config.validate().map_err(|e| CliError::usage(e.to_string()))?;
    Ok(config)
}

fn restore_config_json(args: &RestoreArgs, config: &SolverConfig, setup: &SetupParams) -> serde_json::Value {
    let s = config.strategy;
    json!({
        "strategy": s,
        "beta": config.beta,
        "gamma": s.uses_gamma().then_some(config.gamma),
        "delta": s.uses_delta().then_some(config.delta),
        "p": s.uses_p().then_some(config.p),
        "iters": config.max_iters,
        "tol": config.rel_change_tol,
        "seed": config.seed,
        "init": args.init,
        "step_safety": config.step_safety,
        "power_tol": config.power_tol,
        "power_max_iters": config.power_max_iters,
        "trace_stride": config.trace_stride,
        "record_timing": args.record_timing,
        "forward_model": setup,
    })
}

fn write_trace(prefix: &Path, trace: &IterationTrace, timing: bool, manifest: &mut RunManifest) -> CliResult<()> {
    let path = with_suffix(prefix, ".trace.csv");
    write_file(&path, trace_csv(trace, timing))?;
    manifest.output("trace_csv", &path);
    Ok(())
}

pub fn restore(args: &RestoreArgs) -> CliResult<()> {
    let config = solver_config(args)?;
    let params = SetupParams {
        kernel_size: args.kernel,
        boundary: args.boundary,
        haar_levels: args.levels,
    };
    let degraded = read_image(&args.input)?;
    let truth = args.truth.as_deref().map(read_image).transpose()?;
    if let Some(t) = &truth {
        if !t.same_shape(&degraded) {
            return Err(CliError::usage(format!(
                "truth is {}x{} but the degraded image is {}x{}",
                t.height(),
                t.width(),
                degraded.height(),
                degraded.width()
            )));
        }
    }
    let (h, w) = (degraded.height(), degraded.width());
    let setup = RestorationSetup::new(degraded, &params)?;
    let problem = &setup.problem;

    let mut manifest = RunManifest::new("restore", restore_config_json(args, &config, &params));
    manifest.input("degraded", &args.input).seed("power_iteration", config.seed);
    if let Some(t) = &args.truth {
        manifest.input("truth", t);
    }

    let x0 = initial_guess(problem, args.init)?;
    let out = match solve(problem, &config, &x0, truth.as_ref().map(|t| t.pixels())) {
        Ok(out) => out,
        Err(sik_core::Error::Diverged { iteration, trace }) => {
            write_trace(&args.out, &trace, args.record_timing, &mut manifest)?;
            if let serde_json::Value::Object(m) = &mut manifest.config {
                m.insert("diverged_at".into(), json!(iteration));
            }
            finish(&mut manifest, &args.out)?;
            return Err(CliError::Diverged { iteration, trace });
        }
        Err(e) => return Err(e.into()),
    };

    let restored = restore_image(&out.x, setup.wavelet.as_ref(), h, w)?;
    write_image(&args.out, &restored, &mut manifest)?;
    write_trace(&args.out, &out.trace, args.record_timing, &mut manifest)?;

    let profiles = extract_profiles(&restored);
    let mut text = String::from("index,central_row,central_col\n");
    for i in 0..profiles.central_row.len().max(profiles.central_col.len()) {
        let cell = |v: &[f64]| v.get(i).map(|&x| fmt_float(x)).unwrap_or_default();
        text.push_str(&format!("{i},{},{}\n", cell(&profiles.central_row), cell(&profiles.central_col)));
    }
    let profiles_path = with_suffix(&args.out, ".profiles.csv");
    write_file(&profiles_path, text)?;
    manifest.output("profiles_csv", &profiles_path);
    finish(&mut manifest, &args.out)?;

    let weights = strategy_weights(&out.x, &config)?;
    let cost = evaluate_cost(&out.x, &weights, problem, config.beta, config.gamma)?;
    println!("strategy={}", config.strategy);
    println!("iterations={}", out.iterations);
    println!("stopped_early={}", out.stopped_early);
    println!("lipschitz={}", fmt_float(out.lipschitz));
    println!("final_cost={}", fmt_float(cost.total));
    println!("final_fidelity={}", fmt_float(cost.fidelity));
    if let Some(t) = &truth {
        println!("mae={}", fmt_float(mae(&restored, t)?));
    }
    Ok(())
}

fn workers_override() -> CliResult<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::usage(format!("{WORKERS_ENV} must be a positive integer, got {v:?}"))),
        },
    }
}

pub fn sweep(args: &SweepArgs) -> CliResult<()> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| CliError::io(&args.config, e))?;
    let mut cfg = parse_sweep_config(&args.config, &text)?;
    if let Some(n) = workers_override()? {
        cfg.grid.workers = Some(n);
    }
    let (truth, setup) = RestorationSetup::phantom(cfg.size, cfg.variant, &cfg.degradation, cfg.levels)?;
    let degraded_mae = mae(&setup.degraded, &truth)?;
    eprintln!("sweeping {} cells on a {}x{} phantom", cfg.grid.cells().len(), cfg.size, cfg.size);
    let mut result = run_sweep(&setup.problem, &cfg.grid, &truth)?;
    result.metadata.degradation = Some(cfg.degradation);

    let mut manifest = RunManifest::new("sweep", serde_json::to_value(&cfg).map_err(|e| CliError::Core(e.into()))?);
    manifest
        .input("config", &args.config)
        .seed("noise", cfg.degradation.seed)
        .seed("power_iteration", cfg.grid.seed);
    write_experiment(&args.out, &result, cfg.record_timing)?;
    manifest
        .output("results_csv", &args.out.join("results.csv"))
        .output("metadata_json", &args.out.join("metadata.json"))
        .output("traces", &args.out.join("traces"));
    for (name, image) in [("truth", &truth), ("degraded", &setup.degraded)] {
        let path = args.out.join(format!("{name}.csv"));
        write_file(&path, image_to_csv(image))?;
        manifest.output(&format!("{name}_csv"), &path);
    }
    let manifest_path = args.out.join("manifest.json");
    manifest.output("manifest", &manifest_path);
    manifest.write(&manifest_path)?;
    eprintln!("wrote {}", args.out.display());

    println!("cells={}", result.cells.len());
    println!("diverged={}", result.cells.iter().filter(|c| c.diverged).count());
    println!("degraded_mae={}", fmt_float(degraded_mae));
    for s in Strategy::ALL.into_iter().filter(|s| cfg.grid.strategies.contains(s)) {
        let Some(best) = result.best(s) else {
            println!("best.{s}=none");
            continue;
        };
        println!("best.{s}.mae={}", fmt_float(best.final_mae));
        println!("best.{s}.beta={}", fmt_float(best.key.beta));
        if let Some(g) = best.key.gamma {
            println!("best.{s}.gamma={}", fmt_float(g));
        }
        if let Some(d) = best.key.delta {
            println!("best.{s}.delta={}", fmt_float(d));
        }
    }
    Ok(())
}
