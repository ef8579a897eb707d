use std::fmt;
use std::fs;
use std::path::Path;

use serde::Serialize;

use posmap::dynamics::{evolve_track, uniform_grid, ChannelFamily, TrackOptions};
use posmap::maps::{
    apply_on_first_leg, catalog, is_block_positive, is_co_cp, is_cp, is_decomposable, CatalogMap, ChoiMatrix,
    DecompositionVerdict, DykstraOptions, SeeSawOptions,
};
use posmap::matcore::{hermitian_eig, ComplexMatrix, Leg};
use posmap::measures::{
    dcoef_sup, eof_upper, negativity, ppt_test, MeasureOptions, MeasureReport, PptVerdict, RANK_TOL,
};
use posmap::states::{
    gibbs_state, ising_hamiltonian, make_named, xxz_hamiltonian, DensityMatrix, StateFamily, StateJson,
};

use crate::{
    BudgetArgs, Cli, Command, EvolveArgs, Format, MakeArgs, MapCmd, MapSource, MeasureArgs, ModelArgs, StateCmd, Which,
};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    NotConverged(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::NotConverged(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "{m}"),
            CliError::NotConverged(m) => write!(f, "not converged: {m}"),
        }
    }
}

impl From<posmap::Error> for CliError {
    fn from(e: posmap::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// What a command produced: a full document and a one-line summary.
struct Output {
    document: String,
    summary: String,
    /// Whether the document goes to stdout when no `--out` is given.
    primary: bool,
}

pub fn run(cli: &Cli) -> Result<()> {
    let (output, strict_failure) = match &cli.command {
        Command::State(StateCmd::Make(args)) => (state_make(cli, args)?, None),
        Command::State(StateCmd::Info { state }) => (state_info(cli, state)?, None),
        Command::Measure(args) => measure(cli, args)?,
        Command::Map(MapCmd::Check {
            source,
            restarts,
            max_iter,
        }) => (map_check(cli, source, *restarts, *max_iter)?, None),
        Command::Map(MapCmd::Apply { source, state }) => (map_apply(cli, source, state)?, None),
        Command::Evolve(args) => (evolve(cli, args)?, None),
    };
    emit(cli, &output)?;
    match strict_failure {
        Some(msg) => Err(CliError::NotConverged(msg)),
        None => Ok(()),
    }
}

fn emit(cli: &Cli, output: &Output) -> Result<()> {
    let mut doc = output.document.clone();
    if !doc.ends_with('\n') {
        doc.push('\n');
    }
    match &cli.out {
        Some(path) => {
            fs::write(path, doc).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
            println!("{}", output.summary);
        }
        None if output.primary => {
            print!("{doc}");
            eprintln!("{}", output.summary);
        }
        None => println!("{}", output.summary),
    }
    Ok(())
}

fn json_only(cli: &Cli, what: &str) -> Result<()> {
    if cli.format == Format::Csv {
        return Err(CliError::Input(format!("{what} has no csv form")));
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

/// Shortest decimal form with at most 12 fractional digits.
fn num(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn read_state(path: &Path) -> Result<DensityMatrix> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    DensityMatrix::from_json_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_choi(path: &Path) -> Result<ChoiMatrix> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    ChoiMatrix::from_json_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn missing(flag: &str, family: &str) -> CliError {
    CliError::Input(format!("--{flag} is required for {family}"))
}

fn hamiltonian(model: &ModelArgs) -> Result<ComplexMatrix> {
    Ok(match model.model.as_str() {
        "ising" => ising_hamiltonian(model.n, model.coupling, model.field)?,
        "xxz" => xxz_hamiltonian(model.n, model.coupling, model.delta)?,
        other => return Err(CliError::Input(format!("unknown model {other:?} (ising, xxz)"))),
    })
}

fn state_make(cli: &Cli, a: &MakeArgs) -> Result<Output> {
    json_only(cli, "state make")?;
    let fam = a.family.as_str();
    let state = match fam {
        "bell" => make_named(&StateFamily::Bell { k: a.k.unwrap_or(1) })?.state,
        "werner" => make_named(&StateFamily::Werner {
            p: a.p.ok_or_else(|| missing("p", fam))?,
        })?
        .state,
        "isotropic" => make_named(&StateFamily::Isotropic {
            d: a.d.unwrap_or(2),
            f: a.f.ok_or_else(|| missing("f", fam))?,
        })?
        .state,
        "max_mixed" => make_named(&StateFamily::MaxMixed {
            d1: a.d1.unwrap_or(2),
            d2: a.d2.unwrap_or(2),
        })?
        .state,
        "product" => {
            let left = read_state(a.left.as_deref().ok_or_else(|| missing("left", fam))?)?;
            let right = read_state(a.right.as_deref().ok_or_else(|| missing("right", fam))?)?;
            make_named(&StateFamily::Product(left, right))?.state
        }
        "random_separable" => make_named(&StateFamily::RandomSeparable {
            d1: a.d1.unwrap_or(2),
            d2: a.d2.unwrap_or(2),
            m: a.m.unwrap_or(4),
            seed: cli.seed,
        })?
        .state,
        "random_density" => {
            let (d1, d2) = (a.d1.unwrap_or(2), a.d2.unwrap_or(2));
            make_named(&StateFamily::RandomDensity {
                d1,
                d2,
                rank: a.rank.unwrap_or(d1 * d2),
                seed: cli.seed,
            })?
            .state
        }
        "gibbs" => {
            let n = a.model.n;
            let cut = a.cut.unwrap_or(n / 2);
            if cut > n {
                return Err(CliError::Input(format!("--cut {cut} exceeds the chain length {n}")));
            }
            let g = gibbs_state(&hamiltonian(&a.model)?, a.model.beta)?;
            DensityMatrix::new(g.into_matrix(), 1 << cut, 1 << (n - cut))?
        }
        other => {
            return Err(CliError::Input(format!(
                "unknown family {other:?} (bell, werner, isotropic, max_mixed, product, random_separable, random_density, gibbs)"
            )))
        }
    };
    let (d1, d2) = state.split();
    Ok(Output {
        document: state.to_json_string(),
        summary: format!("family={fam} d1={d1} d2={d2} trace={}", num(state.matrix().trace().re)),
        primary: true,
    })
}

#[derive(Serialize)]
struct InfoReport {
    d1: usize,
    d2: usize,
    trace: f64,
    rank: usize,
    entropy: f64,
    entropy_1: f64,
    entropy_2: f64,
}

fn state_info(cli: &Cli, path: &Path) -> Result<Output> {
    json_only(cli, "state info")?;
    let s = read_state(path)?;
    let (d1, d2) = s.split();
    let r = InfoReport {
        d1,
        d2,
        trace: s.matrix().trace().re,
        rank: s.rank(RANK_TOL),
        entropy: s.entropy(),
        entropy_1: s.restrict(Leg::First).entropy(),
        entropy_2: s.restrict(Leg::Second).entropy(),
    };
    Ok(Output {
        summary: format!(
            "trace={} rank={} entropy={} entropy_1={} entropy_2={}",
            num(r.trace),
            r.rank,
            num(r.entropy),
            num(r.entropy_1),
            num(r.entropy_2)
        ),
        document: to_json(&r),
        primary: false,
    })
}

fn measure_options(cli: &Cli, b: &BudgetArgs) -> MeasureOptions {
    MeasureOptions {
        k: b.k,
        restarts: b.restarts,
        iters: b.iters,
        seed: cli.seed,
        ..Default::default()
    }
}

fn report_document(cli: &Cli, r: &MeasureReport) -> Result<String> {
    Ok(match cli.format {
        Format::Json => r.to_json_string(),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["value", "converged", "restarts_used"])
                .and_then(|_| {
                    w.write_record([
                        r.value.to_string(),
                        r.converged.to_string(),
                        r.restarts_used.to_string(),
                    ])
                })
                .map_err(|e| CliError::Input(e.to_string()))?;
            String::from_utf8(w.into_inner().map_err(|e| CliError::Input(e.to_string()))?).expect("csv is utf-8")
        }
    })
}

fn measure(cli: &Cli, a: &MeasureArgs) -> Result<(Output, Option<String>)> {
    let s = read_state(&a.state)?;
    let opts = measure_options(cli, &a.budget);
    let (report, summary) = match a.which {
        Which::Ppt => {
            let o = ppt_test(&s);
            let verdict = match o.verdict {
                PptVerdict::Npt => "NPT",
                PptVerdict::Ppt => "PPT",
            };
            let mut summary = format!("lambda_min={} verdict={verdict}", num(o.min_eigenvalue));
            if !o.conclusive {
                summary.push_str(" conclusive=false");
            }
            (o.report(), summary)
        }
        Which::Negativity => {
            let v = negativity(&s);
            let r = MeasureReport {
                value: v,
                certificate: None,
                converged: true,
                restarts_used: 0,
            };
            (r, format!("negativity={}", num(v)))
        }
        Which::Eof => {
            let r = eof_upper(&s, &opts)?;
            let summary = format!("eof_upper={} converged={}", num(r.value), r.converged);
            (r, summary)
        }
        Which::DcoefSup => {
            let r = dcoef_sup(&s, &opts)?;
            let summary = format!("dcoef_sup={} converged={}", num(r.value), r.converged);
            (r, summary)
        }
    };
    let strict =
        (a.strict && !report.converged).then(|| format!("{:?} after {} restarts", a.which, report.restarts_used));
    Ok((
        Output {
            document: report_document(cli, &report)?,
            summary,
            primary: false,
        },
        strict,
    ))
}

fn load_map(src: &MapSource) -> Result<ChoiMatrix> {
    match (&src.catalog, &src.choi) {
        (Some(name), None) => Ok(catalog(&CatalogMap::from_name(name, src.d, src.lambda)?)?),
        (None, Some(path)) => read_choi(path),
        _ => Err(CliError::Input("give exactly one of --catalog or --choi".into())),
    }
}

#[derive(Serialize)]
struct CheckReport {
    d_in: usize,
    d_out: usize,
    cp: bool,
    cp_min_eigenvalue: f64,
    co_cp: bool,
    co_cp_min_eigenvalue: f64,
    block_positive: bool,
    block_min_value: f64,
    decomposable: DecompositionVerdict,
    dykstra_residual: f64,
    dykstra_iterations: usize,
}

fn map_check(cli: &Cli, src: &MapSource, restarts: usize, max_iter: usize) -> Result<Output> {
    json_only(cli, "map check")?;
    let c = load_map(src)?;
    let cp = is_cp(&c, cli.tol)?;
    let co = is_co_cp(&c, cli.tol)?;
    let bp = is_block_positive(
        &c,
        &SeeSawOptions {
            restarts,
            tol: cli.tol,
            seed: cli.seed,
            ..Default::default()
        },
    )?;
    let dec = is_decomposable(
        &c,
        &DykstraOptions {
            max_iter,
            ..Default::default()
        },
    )?;
    let r = CheckReport {
        d_in: c.d_in(),
        d_out: c.d_out(),
        cp: cp.holds,
        cp_min_eigenvalue: cp.min_eigenvalue,
        co_cp: co.holds,
        co_cp_min_eigenvalue: co.min_eigenvalue,
        block_positive: bp.positive,
        block_min_value: bp.min_value,
        decomposable: dec.verdict,
        dykstra_residual: dec.residual,
        dykstra_iterations: dec.iterations,
    };
    let decomposable = match dec.verdict {
        DecompositionVerdict::Decomposable => "true",
        DecompositionVerdict::NonDecomposable => "false",
        DecompositionVerdict::Indeterminate => "indeterminate",
    };
    Ok(Output {
        summary: format!(
            "block_positive={} cp={} co_cp={} decomposable={decomposable} residual={:e} iterations={}",
            r.block_positive, r.cp, r.co_cp, r.dykstra_residual, r.dykstra_iterations
        ),
        document: to_json(&r),
        primary: false,
    })
}

fn map_apply(cli: &Cli, src: &MapSource, state: &Path) -> Result<Output> {
    json_only(cli, "map apply")?;
    let c = load_map(src)?;
    let s = read_state(state)?;
    let (d1, d2) = s.split();
    if c.d_in() != d1 {
        return Err(CliError::Input(format!(
            "map acts on dimension {} but the first leg has dimension {d1}",
            c.d_in()
        )));
    }
    let out = apply_on_first_leg(&c, s.matrix(), (d1, d2))?;
    let min = hermitian_eig(&out)?.min();
    let (re, im) = out.to_parts();
    let json = StateJson {
        d1: c.d_out(),
        d2,
        re,
        im,
    };
    Ok(Output {
        summary: format!("min_eig={} trace={}", num(min), num(out.trace().re)),
        document: to_json(&json),
        primary: true,
    })
}

fn evolve(cli: &Cli, a: &EvolveArgs) -> Result<Output> {
    let s = read_state(&a.state)?;
    let d = s.split().0;
    let family = match a.family.as_str() {
        "identity" => ChannelFamily::identity(d)?,
        "depolarizing_flow" => ChannelFamily::depolarizing_flow(d, a.rate)?,
        "transpose_mix" => ChannelFamily::transpose_mix(d, a.speed)?,
        "glauber_flip" => ChannelFamily::glauber_flip(&hamiltonian(&a.model)?, a.model.beta, a.rate)?,
        other => {
            return Err(CliError::Input(format!(
                "unknown family {other:?} ({})",
                ChannelFamily::NAMES.join(", ")
            )))
        }
    };
    let grid = uniform_grid(a.t_max, a.steps)?;
    let opts = TrackOptions {
        eof: a.eof,
        dcoef_sup: a.dcoef_sup,
        measure: measure_options(cli, &a.budget),
    };
    let rec = evolve_track(&s, &family, &grid, &opts)?;
    let summary = match rec.first_negative_time() {
        Some(t) => format!("first_negative_time={}", num(t)),
        None => "first_negative_time=none".to_string(),
    };
    Ok(Output {
        document: match cli.format {
            Format::Json => rec.to_json_string(),
            Format::Csv => rec.to_csv_string(),
        },
        summary,
        primary: true,
    })
}
