use serde_json::{json, Value};
use simon_anneal::analysis::{
    bench_to_csv, benchmark_solvers, better_fit, derive_seed, fit_summary_json, rows_to_csv,
    run_penalty_experiment, run_success_sweep, BenchConfig, ExperimentConfig, ExperimentRow,
};
use simon_anneal::exact::{enumerate_spectrum, solver, ExactOptions, DEFAULT_MAX_GROUND_STATES};
use simon_anneal::oracle::{bitstring, recover_period, Assignment};
use simon_anneal::sampler::{sampler, AnnealSchedule, SamplerOptions};
use simon_anneal::{
    build_qubo, validate_penalties, Error, OracleSpec, PenaltyConfig, QuboDocument, QuboModel, SchemeTag,
};

use crate::args::{
    BenchArgs, ExperimentArgs, ExperimentKind, Format, ModelArgs, PenaltyArgs, SampleArgs, SamplerArgs,
    ScheduleArgs, SolveArgs, SpectrumArgs,
};
use crate::output::{read_file, write_file, Context, Failure, Outcome};

/// Exit status of a solve whose ground level is not a single pair.
pub const NO_UNIQUE_PAIR: u8 = 1;

/// Stream used to derive the sampler's seed from the master seed, so
/// random penalty signs and sampler draws never share a stream.
const SAMPLER_STREAM: u64 = 1;

fn parse_penalties(list: &str) -> Outcome<Vec<f64>> {
    list.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Config(format!("penalty '{}' is not a number", s.trim())))
        })
        .collect()
}

/// Parses sizes such as `4,6,8`, `5..50:5` or `4..16`; ranges are inclusive.
pub fn parse_n_list(text: &str) -> Outcome<Vec<usize>> {
    let bad = |item: &str| Failure::Config(format!("cannot read size list item '{item}'"));
    let num = |s: &str, item: &str| s.trim().parse::<usize>().map_err(|_| bad(item));
    let mut ns = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((lo, rest)) = item.split_once("..") {
            let (hi, step) = match rest.split_once(':') {
                Some((hi, step)) => (num(hi, item)?, num(step, item)?),
                None => (num(rest, item)?, 1),
            };
            let lo = num(lo, item)?;
            if step == 0 || lo > hi {
                return Err(bad(item));
            }
            ns.extend((lo..=hi).step_by(step));
        } else {
            ns.push(num(item, item)?);
        }
    }
    if ns.is_empty() {
        return Err(Failure::Config("size list is empty".into()));
    }
    if let Some(&n) = ns.iter().find(|&&n| n < 2) {
        return Err(Failure::Config(format!("every size must be at least 2, got {n}")));
    }
    Ok(ns)
}

fn penalty_config(
    spec: &OracleSpec,
    scheme: &str,
    magnitude: f64,
    explicit: Option<&str>,
    seed: u64,
) -> Outcome<PenaltyConfig> {
    Ok(match explicit {
        Some(list) => PenaltyConfig::explicit(spec, parse_penalties(list)?)?,
        None => PenaltyConfig::from_scheme(spec, scheme, magnitude, seed)?,
    })
}

fn load_model(args: &ModelArgs, seed: u64) -> Outcome<(OracleSpec, PenaltyConfig, QuboModel)> {
    if let Some(path) = &args.qubo {
        let text = read_file(path)?;
        let doc = QuboDocument::from_json(&text)
            .map_err(|e| Failure::Io(format!("cannot parse {}: {e}", path.display())))?;
        return Ok(doc.to_parts()?);
    }
    let n = args.n.ok_or_else(|| Failure::Config("either --qubo or --n is required".into()))?;
    let spec = OracleSpec::new(n)?;
    let penalties = penalty_config(&spec, &args.scheme, args.magnitude, args.penalties.as_deref(), seed)?;
    let model = build_qubo(&spec, &penalties)?;
    Ok((spec, penalties, model))
}

fn schedule(args: &ScheduleArgs) -> Outcome<AnnealSchedule> {
    Ok(AnnealSchedule::new(
        args.beta_start,
        args.beta_end,
        args.sweeps,
        args.schedule.parse()?,
    )?)
}

fn sampler_options(schedule: AnnealSchedule, args: &SamplerArgs) -> Outcome<SamplerOptions> {
    let opts = SamplerOptions {
        schedule,
        bias: args.bias,
        ..SamplerOptions::default()
    };
    // construct once so a bad name or bias fails before any sampling
    sampler(&args.sampler, &opts)?;
    Ok(opts)
}

fn schedule_meta(s: &AnnealSchedule) -> Value {
    json!({
        "beta_start": s.beta_start(),
        "beta_end": s.beta_end(),
        "sweeps": s.sweeps(),
        "interpolation": s.interpolation(),
    })
}

pub fn build(ctx: &Context, args: &PenaltyArgs) -> Outcome<u8> {
    ctx.format(Format::Json, &[Format::Json])?;
    let spec = OracleSpec::new(args.n)?;
    let penalties = penalty_config(&spec, &args.scheme, args.magnitude, args.penalties.as_deref(), ctx.seed)?;
    let model = build_qubo(&spec, &penalties)?;
    let doc = QuboDocument::new(&spec, &penalties, &model).with_meta(ctx.meta(json!({
        "scheme": penalties.scheme(),
        "magnitude": penalties.magnitude(),
    })));
    let mut text = doc.to_json()?;
    text.push('\n');
    ctx.emit(&text)?;
    ctx.info(format!("{} variables", model.num_vars()));
    for w in validate_penalties(&spec, &penalties) {
        ctx.info(format!("warning: {w}"));
    }
    Ok(0)
}

pub fn spectrum(ctx: &Context, args: &SpectrumArgs) -> Outcome<u8> {
    let format = ctx.format(Format::Json, &[Format::Json, Format::Csv])?;
    let (spec, _, model) = load_model(&args.model, ctx.seed)?;
    let report = enumerate_spectrum(&model, &spec, args.cap)?;
    let text = match format {
        Format::Csv => report.to_csv(Some(&ctx.header())),
        Format::Json => report.to_json(args.states, Some(ctx.meta(json!({}))))? + "\n",
    };
    ctx.emit(&text)?;
    let ground = report.ground();
    ctx.info(format!(
        "ground energy {}: {} states, {} oracle-valid",
        ground.energy,
        ground.states.len(),
        report.valid_count(ground)
    ));
    Ok(0)
}

fn decomposition(spec: &OracleSpec, a: &Assignment) -> Value {
    json!({
        "bits": a.to_string(),
        "x": bitstring(a.inputs(spec)),
        "o": bitstring(a.outputs(spec)),
        "a": bitstring(a.ancillas(spec)),
    })
}

fn count_value(count: u128) -> Value {
    match u64::try_from(count) {
        Ok(c) => json!(c),
        Err(_) => json!(count.to_string()),
    }
}

pub fn solve(ctx: &Context, args: &SolveArgs) -> Outcome<u8> {
    let format = ctx.format.map(|_| ctx.format(Format::Json, &[Format::Json])).transpose()?;
    let (spec, _, model) = load_model(&args.model, ctx.seed)?;
    let solver = solver(
        &args.solver,
        &ExactOptions {
            enumeration_cap: args.cap,
            max_ground_states: args.max_ground_states,
        },
    )?;

    let (energy, degeneracy, states) = match solver.solve(&model, &spec) {
        Ok(sol) => (Some(sol.ground_energy), sol.degeneracy, sol.ground_states),
        Err(Error::DegeneracyTooLarge { count, .. }) => (None, count, Vec::new()),
        Err(e) => return Err(e.into()),
    };
    let period = match states.as_slice() {
        [a, b] => Some(recover_period(a.inputs(&spec), b.inputs(&spec))?),
        _ => None,
    };
    let code = match &period {
        Some(p) if p.iter().all(|&b| b == 1) => 0,
        _ => NO_UNIQUE_PAIR,
    };

    let text = if format == Some(Format::Json) {
        let report = json!({
            "meta": ctx.meta(json!({ "solver": solver.name() })),
            "n": spec.n(),
            "ground_energy": energy,
            "degeneracy": count_value(degeneracy),
            "ground_states": states.iter().map(|a| decomposition(&spec, a)).collect::<Vec<_>>(),
            "period": period.as_deref().map(bitstring),
            "unique_pair": period.is_some(),
        });
        serde_json::to_string_pretty(&report).map_err(Error::from)? + "\n"
    } else {
        let mut t = String::new();
        if let Some(e) = energy {
            t.push_str(&format!("ground energy: {e}\n"));
        }
        t.push_str(&format!("degeneracy: {degeneracy}\n"));
        match &period {
            Some(p) => {
                for (k, a) in states.iter().enumerate() {
                    t.push_str(&format!(
                        "ground state {}: {a}  x={} o={} a={}\n",
                        k + 1,
                        bitstring(a.inputs(&spec)),
                        bitstring(a.outputs(&spec)),
                        bitstring(a.ancillas(&spec))
                    ));
                }
                t.push_str(&format!("period: {}\n", bitstring(p)));
            }
            None => t.push_str("no unique ground pair\n"),
        }
        t
    };
    ctx.emit(&text)?;
    Ok(code)
}

pub fn sample(ctx: &Context, args: &SampleArgs) -> Outcome<u8> {
    let format = ctx.format(Format::Csv, &[Format::Csv, Format::Json])?;
    let opts = sampler_options(schedule(&args.schedule)?, &args.sampler)?;
    let (_, _, model) = load_model(&args.model, ctx.seed)?;
    let sampler_seed = derive_seed(ctx.seed, SAMPLER_STREAM);
    let set = sampler(&args.sampler.sampler, &opts)?.sample(&model, args.shots, sampler_seed)?;
    let text = match format {
        Format::Csv => set.to_csv(Some(&format!("{} sampler_seed={sampler_seed}", ctx.header()))),
        Format::Json => {
            let meta = ctx.meta(json!({
                "sampler": args.sampler.sampler,
                "sampler_seed": sampler_seed,
                "schedule": schedule_meta(&opts.schedule),
                "bias": opts.bias,
            }));
            set.to_json(Some(meta))? + "\n"
        }
    };
    ctx.emit(&text)?;
    ctx.info(format!(
        "{} shots, {} distinct states, lowest energy {}",
        args.shots,
        set.records.len(),
        set.lowest_energy().unwrap_or(f64::NAN)
    ));
    Ok(0)
}

fn rows_json(rows: &[ExperimentRow], timing: bool) -> Outcome<Value> {
    let mut rows = rows.to_vec();
    if !timing {
        for r in &mut rows {
            r.wall_time_s = 0.0;
        }
    }
    Ok(serde_json::to_value(rows).map_err(Error::from)?)
}

pub fn experiment(ctx: &Context, args: &ExperimentArgs) -> Outcome<u8> {
    let format = ctx.format(Format::Csv, &[Format::Csv, Format::Json])?;
    let ns = parse_n_list(&args.n_list)?;
    let schemes = args
        .schemes
        .split(',')
        .map(|s| s.trim().parse::<SchemeTag>().map_err(Failure::from))
        .collect::<Outcome<Vec<_>>>()?;
    let opts = sampler_options(schedule(&args.schedule)?, &args.sampler)?;
    if args.fit_out.is_some() && args.kind != ExperimentKind::Sweep {
        return Err(Failure::Config("--fit-out needs --kind sweep".into()));
    }
    let cfg = ExperimentConfig {
        shots: args.shots,
        schedule: opts.schedule.clone(),
        seed: ctx.seed,
        magnitude: args.magnitude,
        retries: args.retries,
        sampler: args.sampler.sampler.clone(),
        bias: args.sampler.bias,
    };
    let meta = ctx.meta(json!({ "schedule": schedule_meta(&cfg.schedule) }));

    let (rows, fits) = match args.kind {
        ExperimentKind::Penalty => (run_penalty_experiment(&ns, &schemes, &cfg)?, None),
        ExperimentKind::Sweep => {
            let sweep = run_success_sweep(&ns, &cfg)?;
            let summary = fit_summary_json(&sweep, Some(meta.clone()))?;
            let best = better_fit(&sweep.exponential, &sweep.gaussian);
            ctx.info(format!(
                "exponential r^2 {:.4}, gaussian r^2 {:.4}, preferred {}",
                sweep.exponential.r_squared, sweep.gaussian.r_squared, best.model
            ));
            if let Some(path) = &args.fit_out {
                write_file(path, &(summary.clone() + "\n"))?;
            }
            (sweep.rows, Some(summary))
        }
    };

    let text = match format {
        Format::Csv => rows_to_csv(&rows, Some(&ctx.header()), args.timing),
        Format::Json => {
            let mut doc = json!({ "meta": meta, "rows": rows_json(&rows, args.timing)? });
            if let Some(s) = &fits {
                let parsed: Value = serde_json::from_str(s).map_err(Error::from)?;
                doc["fits"] = parsed["fits"].clone();
                doc["preferred"] = parsed["preferred"].clone();
            }
            serde_json::to_string_pretty(&doc).map_err(Error::from)? + "\n"
        }
    };
    ctx.emit(&text)?;
    ctx.info(format!("{} rows", rows.len()));
    Ok(0)
}

pub fn bench(ctx: &Context, args: &BenchArgs) -> Outcome<u8> {
    let format = ctx.format(Format::Csv, &[Format::Csv, Format::Json])?;
    let ns = parse_n_list(&args.n_list)?;
    if args.repetitions == 0 {
        return Err(Failure::Config("repetitions must be at least 1".into()));
    }
    let cfg = BenchConfig {
        solvers: args.solvers.split(',').map(|s| s.trim().to_string()).collect(),
        exact: ExactOptions {
            enumeration_cap: args.cap,
            max_ground_states: DEFAULT_MAX_GROUND_STATES,
        },
        schedule: schedule(&args.schedule)?,
        seed: ctx.seed,
        batch_shots: args.batch_shots,
        max_shots: args.max_shots,
    };
    let rows = benchmark_solvers(&ns, args.repetitions, &cfg)?;
    let text = match format {
        Format::Csv => bench_to_csv(&rows, Some(&ctx.header())),
        Format::Json => {
            let doc = json!({
                "meta": ctx.meta(json!({ "repetitions": args.repetitions })),
                "rows": serde_json::to_value(&rows).map_err(Error::from)?,
            });
            serde_json::to_string_pretty(&doc).map_err(Error::from)? + "\n"
        }
    };
    ctx.emit(&text)?;
    Ok(0)
}
