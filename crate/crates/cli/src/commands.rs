use crate::config::{
    load, AdmissibleConfig, DiagnoseConfig, EvolveConfig, InitialData, ModesConfig, SampleConfig, TailsConfig,
    ZerosConfig,
};
use crate::failure::{BadConfig, Failure, Partial, Usage};
use crate::run_dir::RunDir;
use crate::{Command, Common};
use anyhow::{Context, Result};
use cylnlw::admissibility::{consistency_check, region_scan, ScanSpec, SpCase};
use cylnlw::bessel::bessel_zeros;
use cylnlw::diagnostics::{
    embedding_ratio, random_space_time_field, strichartz_ratio, truncation_study, DataSet, RatioReport,
};
use cylnlw::field::{read_snapshot, write_snapshot};
use cylnlw::highlow::{run, HighLowConfig};
use cylnlw::modes::{covering_mode_set, multiplicity_histogram};
use cylnlw::random::{sample_functional, Ensemble, TailReport};
use cylnlw::solver::Solver;
use cylnlw::{CoeffField, Transform};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde_json::json;
use std::f64::consts::PI;
use std::io::Write;
use std::sync::Arc;

pub fn dispatch(common: &Common, command: &Command) -> Result<(), Failure> {
    if let Some(threads) = common.threads {
        if threads == 0 {
            return Err(Usage("--threads must be positive".into()).into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().context("starting the thread pool")?;
    }
    match command {
        Command::Zeros { n_max } => zeros(common, *n_max),
        Command::Modes { n_max, nprime_max, z_max, k_max } => {
            let flags = match (n_max, nprime_max) {
                (Some(n_max), Some(nprime_max)) => {
                    Some(ModesConfig { n_max: *n_max, nprime_max: *nprime_max, z_max: *z_max, k_max: *k_max })
                }
                _ => None,
            };
            modes(common, flags)
        }
        Command::Sample => sample(common),
        Command::Tails => tails(common),
        Command::Evolve => evolve(common),
        Command::Highlow => highlow(common),
        Command::Admissible => admissible(common),
        Command::Diagnose => diagnose(common),
    }?;
    Ok(())
}

fn required_config<T: DeserializeOwned>(common: &Common) -> Result<T> {
    let path = common.config.as_deref().ok_or_else(|| Usage("this command needs --config PATH".into()))?;
    load(path)
}

fn required_out(common: &Common) -> Result<RunDir> {
    let out = common.out.as_deref().ok_or_else(|| Usage("this command needs --out DIR".into()))?;
    RunDir::create(out)
}

fn zeros(common: &Common, flag: Option<usize>) -> Result<()> {
    let cfg = match (flag, &common.config) {
        (Some(n_max), _) => ZerosConfig { n_max },
        (None, Some(path)) => load(path)?,
        (None, None) => return Err(Usage("zeros needs --n-max N or --config PATH".into()).into()),
    };
    if cfg.n_max == 0 {
        return Err(Usage("n_max must be at least 1".into()).into());
    }
    let lambdas = bessel_zeros(cfg.n_max)?;
    let table = |w: &mut dyn Write| -> std::io::Result<()> {
        writeln!(w, "n,lambda,deviation")?;
        for (i, l) in lambdas.iter().enumerate() {
            let n = (i + 1) as f64;
            writeln!(w, "{},{:.16e},{:.16e}", i + 1, l, l - (n * PI - PI / 4.0))?;
        }
        Ok(())
    };
    match &common.out {
        Some(out) => {
            let mut dir = RunDir::create(out)?;
            dir.write("zeros.csv", table)?;
            dir.finish("zeros", &cfg, None)
        }
        None => Ok(table(&mut std::io::stdout().lock())?),
    }
}

fn modes(common: &Common, flags: Option<ModesConfig>) -> Result<()> {
    let cfg = match (flags, &common.config) {
        (Some(cfg), _) => cfg,
        (None, Some(path)) => load(path)?,
        (None, None) => return Err(Usage("modes needs --n-max and --nprime-max, or --config PATH".into()).into()),
    };
    let set = cylnlw::build_modes(cfg.n_max, cfg.nprime_max, cfg.z_max)?;
    let listing = |w: &mut dyn Write| -> std::io::Result<()> {
        writeln!(w, "n,nprime,lambda,z")?;
        for m in set.modes() {
            writeln!(w, "{},{},{:.16e},{:.16e}", m.n, m.nprime, m.lambda, m.z)?;
        }
        Ok(())
    };
    let Some(out) = &common.out else {
        return Ok(listing(&mut std::io::stdout().lock())?);
    };
    let mut dir = RunDir::create(out)?;
    dir.write("modes.csv", listing)?;
    if let Some(k_max) = cfg.k_max {
        let hist = multiplicity_histogram(&covering_mode_set(k_max)?, k_max)?;
        dir.write("multiplicity.csv", |w| {
            writeln!(w, "k,count")?;
            hist.iter().enumerate().try_for_each(|(k, c)| writeln!(w, "{k},{c}"))
        })?;
    }
    dir.finish("modes", &cfg, None)
}

fn sample(common: &Common) -> Result<()> {
    let mut cfg: SampleConfig = required_config(common)?;
    if let Some(seed) = common.seed {
        cfg.ensemble.seed = seed;
    }
    let mut dir = required_out(common)?;
    let modes = Arc::new(cfg.modes.build()?);
    let e = &cfg.ensemble;
    let ens = Ensemble::new(e.alpha, e.flavor, Arc::clone(&modes), e.min_z, e.seed)?;
    let samples: Vec<CoeffField> = (0..cfg.count as u64).map(|i| ens.sample_halfwave(i)).collect::<Result<_, _>>()?;
    dir.write("samples.csv", |w| {
        let header: Vec<String> = cfg.s.iter().map(|s| format!("h{s}_norm")).collect();
        writeln!(w, "sample_id,{}", header.join(","))?;
        for (i, f) in samples.iter().enumerate() {
            let norms: Vec<String> = cfg.s.iter().map(|&s| format!("{:.16e}", f.hs_norm(s))).collect();
            writeln!(w, "{i},{}", norms.join(","))?;
        }
        Ok(())
    })?;
    if cfg.snapshots {
        for (i, f) in samples.iter().enumerate() {
            let mut buf = Vec::new();
            write_snapshot(f, &mut buf)?;
            dir.write(&format!("sample_{i:06}.bin"), |w| w.write_all(&buf))?;
        }
    }
    let expected: Vec<_> =
        cfg.s.iter().map(|&s| json!({"s": s, "mean_squared_norm": ens.expected_hs_squared(s)})).collect();
    dir.write_json("summary.json", &json!({"modes": modes.len(), "expected": expected}))?;
    dir.finish("sample", &cfg, None)
}

fn tails(common: &Common) -> Result<()> {
    let mut cfg: TailsConfig = required_config(common)?;
    if let Some(seed) = common.seed {
        cfg.ensemble.seed = seed;
    }
    let mut dir = required_out(common)?;
    let modes = Arc::new(cfg.modes.build()?);
    let tr = Transform::for_modes(Arc::clone(&modes), cfg.dealias)?;
    let e = &cfg.ensemble;
    let ens = Ensemble::new(e.alpha, e.flavor, Arc::clone(&modes), e.min_z, e.seed)?;
    let values = sample_functional(&ens, &cfg.functional, &tr, cfg.samples)?;
    let report = TailReport::from_values(cfg.functional.to_string(), &values, &cfg.lambda_grid);
    for warning in &report.warnings {
        log::warn!("{warning}");
    }
    dir.write("values.csv", |w| {
        writeln!(w, "sample_id,value")?;
        values.iter().enumerate().try_for_each(|(i, v)| writeln!(w, "{i},{v:.16e}"))
    })?;
    dir.write("tails.csv", |w| report.write_csv(w))?;
    dir.write_json("summary.json", &report.summary_json())?;
    dir.finish("tails", &cfg, None)
}

fn initial_data(data: &InitialData, modes: &Arc<cylnlw::ModeSet>) -> Result<CoeffField> {
    Ok(match data {
        InitialData::Ensemble { alpha, seed: s, sample_index, flavor, amplitude } => {
            let ens = Ensemble::new(*alpha, *flavor, Arc::clone(modes), 0.0, *s)?;
            ens.sample_halfwave(*sample_index)?.scale(Complex64::new(*amplitude, 0.0))
        }
        InitialData::Mode { n, nprime, re, im } => {
            CoeffField::delta(Arc::clone(modes), *n, *nprime)?.scale(Complex64::new(*re, *im))
        }
        InitialData::Snapshot { path } => {
            let file = std::fs::File::open(path)
                .map_err(|e| BadConfig(format!("cannot open snapshot {}: {e}", path.display())))?;
            read_snapshot(Arc::clone(modes), std::io::BufReader::new(file))?
        }
    })
}

fn evolve(common: &Common) -> Result<()> {
    let mut cfg: EvolveConfig = required_config(common)?;
    if let (Some(seed), InitialData::Ensemble { seed: s, .. }) = (common.seed, &mut cfg.data) {
        *s = seed;
    }
    let mut dir = required_out(common)?;
    let modes = Arc::new(cfg.modes.build()?);
    let u0 = initial_data(&cfg.data, &modes)?;
    let solver = Solver::new(Arc::clone(&modes), cfg.solver.clone())?;
    let traj = solver.local_solve(&u0, cfg.t0, cfg.t_final)?;
    dir.write("trajectory.csv", |w| traj.write_csv(w))?;
    let mut buf = Vec::new();
    write_snapshot(traj.final_state(), &mut buf)?;
    dir.write("final.bin", |w| w.write_all(&buf))?;
    dir.write_json(
        "summary.json",
        &json!({
            "steps": traj.times.len() - 1,
            "final_time": traj.final_time(),
            "max_relative_energy_drift": traj.max_relative_energy_drift(),
            "max_picard_iters": traj.picard_iters.iter().max(),
        }),
    )?;
    dir.finish("evolve", &cfg, None)
}

fn highlow(common: &Common) -> Result<()> {
    let mut cfg: HighLowConfig = required_config(common)?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    let mut dir = required_out(common)?;
    let out = run(&cfg)?;
    dir.write("highlow.csv", |w| out.write_csv(w))?;
    dir.write_json(
        "summary.json",
        &json!({
            "intervals": out.records.len(),
            "max_increment": out.max_increment(),
            "telescoping_defect": out.telescoping_defect(cfg.gamma),
            "partial": out.is_partial(),
            "error": out.error,
        }),
    )?;
    dir.finish("highlow", &cfg, out.error.as_deref())?;
    match &out.error {
        Some(e) => Err(Partial(format!("high/low run stopped early: {e}")).into()),
        None => Ok(()),
    }
}

fn admissible(common: &Common) -> Result<()> {
    let cfg: AdmissibleConfig = required_config(common)?;
    let mut dir = required_out(common)?;
    let report = region_scan(&cfg.scan)?;
    dir.write("region.csv", |w| report.write_csv(w))?;
    let mut summary = json!({
        "gwp_threshold": report.gwp_threshold,
        "g2_variant": cfg.scan.g2_variant,
        "g2_variant_disagreements": report.g2_variant_disagreements,
    });
    if let Some(c) = &cfg.consistency {
        let grid = ScanSpec {
            alpha_points: c.alpha_points,
            gamma_min: c.gamma_min,
            gamma_max: c.gamma_max,
            gamma_points: c.gamma_points,
            ..cfg.scan.clone()
        };
        let mut cases = Vec::new();
        for case in [SpCase::One, SpCase::Two, SpCase::Three] {
            let r = consistency_check(&grid.alphas(), &grid.gammas(), case, c.variant)?;
            cases.push(
                json!({"case": case, "checked": r.checked, "in_band": r.in_band, "disagreements": r.disagreements}),
            );
        }
        summary["consistency"] = json!(cases);
    }
    dir.write_json("summary.json", &summary)?;
    dir.finish("admissible", &cfg, None)
}

fn write_ratio_reports(dir: &mut RunDir, stem: &str, reports: &[RatioReport]) -> Result<()> {
    for (level, report) in reports.iter().enumerate() {
        dir.write(&format!("{stem}_level{level}.csv"), |w| report.write_csv(w))?;
    }
    Ok(())
}

fn diagnose(common: &Common) -> Result<()> {
    let mut cfg: DiagnoseConfig = required_config(common)?;
    if let Some(seed) = common.seed {
        if let Some(job) = &mut cfg.strichartz {
            if let DataSet::Ensemble { seed: s, .. } = &mut job.data {
                *s = seed;
            }
        }
        if let Some(job) = &mut cfg.embedding {
            job.seed = seed;
        }
    }
    if cfg.strichartz.is_none() && cfg.embedding.is_none() {
        return Err(BadConfig("diagnose needs a strichartz or an embedding block".into()).into());
    }
    let mut dir = required_out(common)?;
    let mut summary = serde_json::Map::new();
    if let Some(job) = &cfg.strichartz {
        let (trend, reports) = truncation_study(&(0..job.levels.len()).collect::<Vec<_>>(), |i| {
            let modes = Arc::new(job.levels[i].build()?);
            let tr = Transform::for_modes(Arc::clone(&modes), cfg.dealias)?;
            strichartz_ratio(&job.data.build(&modes)?, &job.spec, &tr)
        })?;
        write_ratio_reports(&mut dir, "strichartz", &reports)?;
        summary.insert("strichartz".into(), level_summary(&trend.maxima, &trend.relative_changes(), &reports));
    }
    if let Some(job) = &cfg.embedding {
        let (trend, reports) = truncation_study(&(0..job.levels.len()).collect::<Vec<_>>(), |i| {
            let modes = Arc::new(job.levels[i].build()?);
            let tr = Transform::for_modes(Arc::clone(&modes), cfg.dealias)?;
            let fields: Vec<_> =
                (0..job.samples as u64).map(|k| random_space_time_field(&modes, &job.spec, job.seed, k)).collect();
            embedding_ratio(&fields, &job.spec, &tr)
        })?;
        write_ratio_reports(&mut dir, "embedding", &reports)?;
        summary.insert("embedding".into(), level_summary(&trend.maxima, &trend.relative_changes(), &reports));
    }
    dir.write_json("summary.json", &summary)?;
    dir.finish("diagnose", &cfg, None)
}

fn level_summary(maxima: &[f64], changes: &[f64], reports: &[RatioReport]) -> serde_json::Value {
    json!({
        "maxima": maxima,
        "relative_changes": changes,
        "levels": reports.iter().map(RatioReport::summary_json).collect::<Vec<_>>(),
    })
}
