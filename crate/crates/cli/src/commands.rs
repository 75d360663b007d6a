use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use clap::ValueEnum;
use twomode::analysis::{
    default_n_grid, figure1, fit_series, run_sweep, Series, SweepConfig, SweepRecord, FIGURE1_TIMES,
};
use twomode::dynamics::{
    evolve_by_quadrature, evolve_dephasing, generator_matrix, EvolutionParams, GeneratorKind, DEFAULT_QUADRATURE_NODES,
};
use twomode::entanglement::negativity;
use twomode::fock::{cd_vacuum_state, BasisTag, BosonSector, ChangeBasis, DensityMatrix};
use twomode::metrology::{dissipative_qfi_dephasing_closed_form, qfi_bounds, LambdaMaxMode};

use crate::config::{parse_list, parse_n_list, resolve, resolve_opt, usage, FileConfig, Usage};
use crate::output::{num, opt_num, write_fits, write_sweep, writer};
use crate::svg::{loglog_plot, PlotSeries};
use crate::{
    Basis, Cli, Command, EvolveArgs, Figure1Args, FitArgs, LambdaMax, Method, NegativityArgs, PointArgs, QfiArgs,
    SeriesArg, SweepArgs,
};

pub fn run(cli: Cli) -> Result<()> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Evolve(args) => evolve(args, &file),
        Command::Qfi(args) => qfi(args, &file),
        Command::Negativity(args) => negativity_cmd(args, &file),
        Command::Sweep(args) => sweep(args, &file),
        Command::Fit(args) => fit(args, &file),
        Command::Figure1(args) => figure(args, &file),
    }
}

fn resolve_enum<T: ValueEnum>(flag: Option<T>, file: &FileConfig, key: &str, default: T) -> Result<T> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match file.get(key) {
        Some(raw) => {
            T::from_str(&raw.replace('_', "-"), true).map_err(|e| anyhow!(Usage(format!("config key `{key}`: {e}"))))
        }
        None => Ok(default),
    }
}

fn resolve_flag(flag: bool, file: &FileConfig, key: &str) -> Result<bool> {
    if flag {
        return Ok(true);
    }
    resolve(None, file, key, Some(false))
}

struct Point {
    n: usize,
    gamma: f64,
    t: f64,
    params: EvolutionParams,
}

fn point(args: &PointArgs, file: &FileConfig) -> Result<Point> {
    let n = resolve(args.n, file, "n", None)?;
    let gamma = resolve(args.gamma, file, "gamma", Some(1.0))?;
    let t = resolve(args.t, file, "t", None)?;
    let params = EvolutionParams::new(gamma, t)?;
    Ok(Point { n, gamma, t, params })
}

fn initial_state(n: usize) -> DensityMatrix {
    DensityMatrix::from_pure(&cd_vacuum_state(BosonSector::new(n), BasisTag::AB))
}

impl From<Basis> for BasisTag {
    fn from(b: Basis) -> Self {
        match b {
            Basis::AB => BasisTag::AB,
            Basis::CD => BasisTag::CD,
        }
    }
}

impl From<LambdaMax> for LambdaMaxMode {
    fn from(m: LambdaMax) -> Self {
        match m {
            LambdaMax::Exact => LambdaMaxMode::Exact,
            LambdaMax::DiagonalApprox => LambdaMaxMode::DiagonalApprox,
        }
    }
}

impl From<SeriesArg> for Series {
    fn from(s: SeriesArg) -> Self {
        match s {
            SeriesArg::Diss => Series::Diss,
            SeriesArg::Lower => Series::Lower,
            SeriesArg::PracticalLower => Series::PracticalLower,
            SeriesArg::Exact => Series::Exact,
        }
    }
}

fn series_name(s: Series) -> &'static str {
    match s {
        Series::Diss => "qfi_diss",
        Series::Lower => "qfi_lower",
        Series::PracticalLower => "qfi_practical_lower",
        Series::Exact => "qfi_exact",
    }
}

fn output_path(flag: Option<PathBuf>, file: &FileConfig) -> Result<Option<PathBuf>> {
    resolve_opt(flag, file, "output")
}

fn evolve(args: EvolveArgs, file: &FileConfig) -> Result<()> {
    let p = point(&args.point, file)?;
    let basis: BasisTag = resolve_enum(args.basis, file, "basis", Basis::AB)?.into();
    let method = resolve_enum(args.method, file, "method", Method::Closed)?;
    let rho0 = initial_state(p.n);
    let rho_t = match method {
        Method::Closed => evolve_dephasing(&rho0, p.params)?,
        Method::Quadrature => evolve_by_quadrature(&rho0, p.params, DEFAULT_QUADRATURE_NODES)?,
    }
    .change_basis(basis);

    let mut out = writer(output_path(args.output, file)?.as_deref())?;
    out.write_record(["k", "l", "re", "im"])?;
    for k in 0..rho_t.dim() {
        for l in 0..rho_t.dim() {
            let z = rho_t.get(k, l);
            out.write_record([k.to_string(), l.to_string(), num(z.re), num(z.im)])?;
        }
    }
    out.flush()?;
    Ok(())
}

fn qfi(args: QfiArgs, file: &FileConfig) -> Result<()> {
    let p = point(&args.point, file)?;
    if p.n == 0 {
        return usage("qfi needs N ≥ 1");
    }
    let mode: LambdaMaxMode = resolve_enum(args.lambda_max_mode, file, "lambda_max_mode", LambdaMax::Exact)?.into();
    let rho_t = evolve_dephasing(&initial_state(p.n), p.params)?;
    let gen = generator_matrix(BosonSector::new(p.n), GeneratorKind::Dephasing);
    let b = qfi_bounds(&rho_t, &gen, p.t, mode)?;
    let closed = dissipative_qfi_dephasing_closed_form(p.n, p.gamma, p.t)?;

    let mut out = writer(output_path(args.output, file)?.as_deref())?;
    out.write_record([
        "N",
        "gamma",
        "t",
        "purity",
        "qfi_diss",
        "qfi_closed_form",
        "qfi_lower",
        "qfi_practical_lower",
        "qfi_upper",
        "qfi_exact",
        "lambda_max",
        "lambda_min",
        "g",
        "lambda_max_mode",
    ])?;
    out.write_record([
        p.n.to_string(),
        num(p.gamma),
        num(p.t),
        num(b.purity),
        num(b.f_diss),
        num(closed),
        num(b.lower),
        num(b.practical_lower),
        opt_num(b.upper),
        opt_num(b.exact),
        num(b.lambda_max),
        num(b.lambda_min),
        num(b.g),
        mode.to_string(),
    ])?;
    out.flush()?;
    Ok(())
}

fn negativity_cmd(args: NegativityArgs, file: &FileConfig) -> Result<()> {
    let p = point(&args.point, file)?;
    let bases: Vec<BasisTag> = match resolve_opt(args.basis.map(|b| BasisTag::from(b).to_string()), file, "basis")? {
        Some(raw) => vec![raw.parse().map_err(|e| anyhow!(Usage(format!("{e}"))))?],
        None => vec![BasisTag::AB, BasisTag::CD],
    };
    let rho_t = evolve_dephasing(&initial_state(p.n), p.params)?;
    let mut out = writer(output_path(args.output, file)?.as_deref())?;
    out.write_record(["N", "gamma", "t", "bipartition", "negativity"])?;
    for basis in bases {
        let neg = negativity(&rho_t, basis);
        out.write_record([
            p.n.to_string(),
            num(p.gamma),
            num(p.t),
            basis.to_string(),
            num(neg.value()),
        ])?;
    }
    out.flush()?;
    Ok(())
}

fn sweep_config(
    n_list: Option<String>,
    gamma: Option<f64>,
    t_list: Option<String>,
    mode: Option<LambdaMax>,
    file: &FileConfig,
    defaults: (Vec<usize>, Vec<f64>),
) -> Result<SweepConfig> {
    let n_list = match resolve_opt(n_list, file, "n_list")? {
        Some(raw) => parse_n_list(&raw)?,
        None => defaults.0,
    };
    let t_list = match resolve_opt(t_list, file, "t_list")? {
        Some(raw) => parse_list::<f64>(&raw)?,
        None => defaults.1,
    };
    if n_list.is_empty() {
        return usage("N list is empty");
    }
    if t_list.is_empty() {
        return usage("t list is empty");
    }
    if n_list.contains(&0) {
        return usage("N list must not contain 0");
    }
    let gamma = resolve(gamma, file, "gamma", Some(1.0))?;
    let mut config = SweepConfig::new(n_list, gamma, t_list);
    config.lambda_max_mode = resolve_enum(mode, file, "lambda_max_mode", LambdaMax::Exact)?.into();
    Ok(config)
}

fn plot_series(records: &[SweepRecord], times: &[f64], series: Series) -> Vec<PlotSeries> {
    times
        .iter()
        .map(|&t| PlotSeries {
            label: format!("t = {t}"),
            points: records
                .iter()
                .filter(|r| r.t == t)
                .filter_map(|r| series.value(r).map(|v| (r.n as f64, v)))
                .collect(),
            fit: fit_series(records, t, series).ok(),
        })
        .collect()
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn sweep(args: SweepArgs, file: &FileConfig) -> Result<()> {
    let config = sweep_config(
        args.n_list,
        args.gamma,
        args.t_list,
        args.lambda_max_mode,
        file,
        (default_n_grid(), FIGURE1_TIMES.to_vec()),
    )?;
    let plot = resolve_flag(args.plot, file, "plot")?;
    let series: Series = resolve_enum(args.series, file, "series", SeriesArg::Diss)?.into();
    let output = output_path(args.output, file)?;
    if plot && output.is_none() {
        return usage("--plot needs --output so the SVG has somewhere to go");
    }

    let records = run_sweep(&config)?;
    write_sweep(&mut writer(output.as_deref())?, &records)?;
    if let Some(csv_path) = output.filter(|_| plot) {
        let svg = loglog_plot(
            &format!("{} vs N, γ = {}", series_name(series), config.gamma),
            "N",
            series_name(series),
            &plot_series(&records, &config.t_list, series),
        );
        write_text(&csv_path.with_extension("svg"), &svg)?;
    }
    Ok(())
}

fn fit(args: FitArgs, file: &FileConfig) -> Result<()> {
    let input: PathBuf = resolve(args.input, file, "input", None)?;
    let series: Series = resolve_enum(args.series, file, "series", SeriesArg::Diss)?.into();
    let records = crate::output::read_sweep(&input)?;
    let mut times: Vec<f64> = records.iter().map(|r| r.t).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let mut rows = Vec::new();
    for t in times {
        let f = fit_series(&records, t, series).with_context(|| format!("fitting t = {t}"))?;
        rows.push((series_name(series), t, f));
    }
    write_fits(&mut writer(output_path(args.output, file)?.as_deref())?, &rows)
}

fn figure(args: Figure1Args, file: &FileConfig) -> Result<()> {
    let config = sweep_config(
        args.n_list,
        args.gamma,
        args.t_list,
        args.lambda_max_mode,
        file,
        (default_n_grid(), FIGURE1_TIMES.to_vec()),
    )?;
    let dir: PathBuf = resolve(args.output_dir, file, "output_dir", Some(PathBuf::from(".")))?;
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;

    let fig = figure1(&config)?;
    write_sweep(&mut writer(Some(&dir.join("figure1.csv")))?, &fig.records)?;

    let mut rows = Vec::new();
    rows.extend(fig.lower_fits.iter().map(|&(t, f)| ("qfi_lower", t, f)));
    rows.extend(fig.diss_fits.iter().map(|&(t, f)| ("qfi_diss", t, f)));
    write_fits(&mut writer(Some(&dir.join("figure1_fits.csv")))?, &rows)?;

    let left = loglog_plot(
        &format!("Lower bound on the QFI (λ_max: {})", config.lambda_max_mode),
        "N",
        "F lower bound",
        &plot_series(&fig.records, &config.t_list, Series::Lower),
    );
    let right = loglog_plot(
        "Dissipative QFI",
        "N",
        "F",
        &plot_series(&fig.records, &config.t_list, Series::Diss),
    );
    write_text(&dir.join("figure1_left.svg"), &left)?;
    write_text(&dir.join("figure1_right.svg"), &right)?;

    let mut stdout = writer(None)?;
    write_fits(&mut stdout, &rows)
}
