//! The subcommands that compute something and return an [`Envelope`].

use maxwell_kinetics::distribution::{params_from_state, speed_cdf, speed_density, speed_mode};
use maxwell_kinetics::kinetics::{fever_report_for, reaction_time, tail_fraction_for};
use maxwell_kinetics::random_walk::{diffusion_coefficient_from_walk, diffusion_length, simulate_walks_with};
use maxwell_kinetics::sampler::sample_batch_with;
use maxwell_kinetics::units::amu_to_kg;
use maxwell_kinetics::{MaxwellParams, SeedSpec, TailModel, ThermalState, UnitSystem, WalkSpec, CHUNK_LEN};

use crate::args::{
    FeverArgs, PdfArgs, SampleArgs, SeedArgs, TailArgs, ThermalArgs, WalkArgs, DEFAULT_MASS_AMU, DEFAULT_TEMPERATURE_K,
};
use crate::output::{Body, Cell, Envelope, Fields, Table};
use crate::parallel::Rayon;
use crate::CliError;

fn unit_name(u: UnitSystem) -> &'static str {
    match u {
        UnitSystem::Si => "si",
        UnitSystem::Reduced => "reduced",
    }
}

fn default_temperature(reduced: bool) -> f64 {
    if reduced {
        1.0
    } else {
        DEFAULT_TEMPERATURE_K
    }
}

/// Resolves temperature and mass flags into a state, plus the parameter
/// fields that record it. Masses are recorded in kilograms (SI) or reduced
/// units.
pub fn resolve_thermal(t: &ThermalArgs) -> Result<(ThermalState, Fields), CliError> {
    let temperature = t.temperature.unwrap_or(default_temperature(t.reduced));
    let state = if t.reduced {
        ThermalState::reduced(temperature, t.mass.unwrap_or(1.0))?
    } else {
        let kg = match (t.mass_kg, t.mass_amu) {
            (Some(kg), _) => kg,
            (None, amu) => amu_to_kg(amu.unwrap_or(DEFAULT_MASS_AMU)),
        };
        ThermalState::si(temperature, kg)?
    };
    Ok((state, state_fields(&state)))
}

fn state_fields(state: &ThermalState) -> Fields {
    vec![
        ("unit_system", Cell::from(unit_name(state.unit_system()))),
        ("temperature", Cell::from(state.temperature())),
        ("mass", Cell::from(state.mass())),
    ]
}

fn seed_spec(s: &SeedArgs) -> (SeedSpec, Fields) {
    (
        SeedSpec::with_stream(s.seed, s.stream),
        vec![("seed", Cell::from(s.seed)), ("stream", Cell::from(s.stream))],
    )
}

pub fn pdf(a: &PdfArgs) -> Result<Envelope, CliError> {
    if a.points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let (state, mut parameters) = resolve_thermal(&a.thermal)?;
    let p = params_from_state(&state);
    let max_speed = a.max_speed.unwrap_or(4.0 * speed_mode(&p));
    if !(max_speed > 0.0 && max_speed.is_finite()) {
        return Err(CliError::Usage("--max-speed must be positive and finite".into()));
    }
    parameters.extend([
        ("c", Cell::from(p.c())),
        ("max_speed", Cell::from(max_speed)),
        ("points", Cell::from(a.points)),
    ]);
    let last = (a.points - 1) as f64;
    let rows = (0..a.points)
        .map(|i| {
            // The final grid point is exactly max_speed.
            let s = if i + 1 == a.points { max_speed } else { max_speed * i as f64 / last };
            Ok(vec![Cell::from(s), Cell::from(speed_density(s, &p)?), Cell::from(speed_cdf(s, &p)?)])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let table = Table {
        columns: vec!["speed", "speed_density", "speed_cdf"],
        rows,
        summary: None,
    };
    Ok(Envelope::new("pdf", parameters, Body::Rows(table)))
}

pub fn fever(a: &FeverArgs) -> Result<Envelope, CliError> {
    let model = TailModel::from(a.model);
    let r = fever_report_for(model, a.t_base, a.t_new, a.baseline_fraction)?;
    let parameters = vec![
        ("t_base", Cell::from(a.t_base)),
        ("t_new", Cell::from(a.t_new)),
        ("baseline_fraction", Cell::from(a.baseline_fraction)),
        ("model", Cell::from(model.name())),
    ];
    let report = vec![
        ("model", Cell::from(r.model.name())),
        ("t_base", Cell::from(r.t_base)),
        ("t_new", Cell::from(r.t_new)),
        ("lambda_base", Cell::from(r.lambda_base)),
        ("lambda_new", Cell::from(r.lambda_new)),
        ("fraction_base", Cell::from(r.fraction_base)),
        ("fraction_new", Cell::from(r.fraction_new)),
        ("ratio", Cell::from(r.ratio)),
        ("relative_change", Cell::from(r.relative_change)),
        ("percent_change", Cell::from(100.0 * r.relative_change)),
    ];
    Ok(Envelope::new("fever", parameters, Body::Report(report)))
}

pub fn sample(a: &SampleArgs) -> Result<Envelope, CliError> {
    let (p, mut parameters) = match a.c {
        Some(c) => (MaxwellParams::new(c)?, Vec::new()),
        None => {
            let (state, fields) = resolve_thermal(&a.thermal)?;
            (params_from_state(&state), fields)
        }
    };
    let (spec, seed_fields) = seed_spec(&a.seed);
    parameters.push(("c", Cell::from(p.c())));
    parameters.push(("count", Cell::from(a.count)));
    parameters.extend(seed_fields);
    parameters.push(("chunk_len", Cell::from(CHUNK_LEN)));

    let batch = sample_batch_with(&Rayon, a.count, &p, spec)?;
    let mut sums = [0.0; 4];
    let rows = batch
        .velocities()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let speed = v.speed();
            for (acc, x) in sums.iter_mut().zip([v.vx, v.vy, v.vz, speed]) {
                *acc += x;
            }
            vec![Cell::from(i), Cell::from(v.vx), Cell::from(v.vy), Cell::from(v.vz), Cell::from(speed)]
        })
        .collect();
    let n = batch.count() as f64;
    let mut summary = vec![Cell::from("mean")];
    summary.extend(sums.iter().map(|s| Cell::from(s / n)));
    let table = Table {
        columns: vec!["index", "vx", "vy", "vz", "speed"],
        rows,
        summary: Some(summary),
    };
    Ok(Envelope::new("sample", parameters, Body::Rows(table)))
}

pub fn tail(a: &TailArgs) -> Result<Envelope, CliError> {
    let model = TailModel::from(a.model);
    let mut parameters = Vec::new();
    let lambda = match (a.lambda, a.ea) {
        (Some(lambda), _) => lambda,
        (None, Some(ea)) => {
            let temperature = a.temperature.unwrap_or(default_temperature(a.reduced));
            let unit_system = if a.reduced { UnitSystem::Reduced } else { UnitSystem::Si };
            if !(temperature > 0.0 && temperature.is_finite()) {
                return Err(CliError::Usage("temperature must be positive and finite".into()));
            }
            parameters.extend([
                ("unit_system", Cell::from(unit_name(unit_system))),
                ("temperature", Cell::from(temperature)),
                ("ea", Cell::from(ea)),
            ]);
            ea / (unit_system.boltzmann() * temperature)
        }
        (None, None) => unreachable!("clap requires --lambda or --ea"),
    };
    parameters.extend([
        ("lambda", Cell::from(lambda)),
        ("model", Cell::from(model.name())),
        ("collision_time", Cell::from(a.collision_time)),
    ]);
    let fraction = tail_fraction_for(model, lambda)?;
    let time = reaction_time(fraction, a.collision_time)?;
    let report = vec![
        ("model", Cell::from(model.name())),
        ("lambda", Cell::from(lambda)),
        ("fraction", Cell::from(fraction)),
        ("collision_time", Cell::from(a.collision_time)),
        ("reaction_time", Cell::from(time)),
    ];
    Ok(Envelope::new("tail", parameters, Body::Report(report)))
}

pub fn walk(a: &WalkArgs) -> Result<Envelope, CliError> {
    let (spec_seed, seed_fields) = seed_spec(&a.seed);
    let spec = WalkSpec::new(a.steps, a.dim, a.step_length, a.trials, spec_seed)?;
    let diffusion = match a.step_time {
        Some(tau) => {
            let d = diffusion_coefficient_from_walk(a.step_length, tau, a.dim)?;
            let time = a.steps as f64 * tau;
            Some((tau, d, time, diffusion_length(d, time, a.dim)?))
        }
        None => None,
    };
    let mut parameters = vec![
        ("steps", Cell::from(a.steps)),
        ("dim", Cell::from(a.dim)),
        ("trials", Cell::from(a.trials)),
        ("step_length", Cell::from(a.step_length)),
    ];
    if let Some((tau, ..)) = diffusion {
        parameters.push(("step_time", Cell::from(tau)));
    }
    parameters.extend(seed_fields);
    parameters.push(("chunk_len", Cell::from(CHUNK_LEN)));

    let w = simulate_walks_with(&Rayon, &spec);
    const AXES: [&str; 3] = ["mean_displacement_x", "mean_displacement_y", "mean_displacement_z"];
    let mut report: Fields = AXES.iter().zip(&w.mean_displacement).map(|(k, m)| (*k, Cell::from(*m))).collect();
    report.extend([
        ("mean_squared_displacement", Cell::from(w.mean_squared_displacement)),
        ("expected_msd", Cell::from(a.steps as f64 * a.step_length * a.step_length)),
        ("variance_of_squared_displacement", Cell::from(w.variance_of_squared_displacement)),
        (
            "msd_standard_error",
            Cell::from((w.variance_of_squared_displacement / w.trials as f64).sqrt()),
        ),
        ("trials", Cell::from(w.trials)),
    ]);
    if let Some((_, d, time, length)) = diffusion {
        report.extend([
            ("diffusion_coefficient", Cell::from(d)),
            ("time", Cell::from(time)),
            ("diffusion_length", Cell::from(length)),
        ]);
    }
    Ok(Envelope::new("walk", parameters, Body::Report(report)))
}
