//! Execution of the computational subcommands.

use lossyphase::analytic::{
    advantage_ratio, classical_fpl, classical_fpl_opt, fig2a_scan, quantum_bound_fpl,
    quantum_bound_limit, quantum_bound_opt_discrete, Mode, QuantumNorm, ScanStrategy,
};
use lossyphase::gaussian::{
    moment_fisher, required_squeezing_db, scheme_fisher, scheme_fpl_limit, GaussianSchemeParams,
};
use lossyphase::imperfect::{advantage, linspace, surface_grid, ImperfectionBudget};
use lossyphase::network::{
    network_fpl, optimize_network, optimize_network_continuous, sample_mode_qfi_fraction,
    single_pass_qsm, ContinuousSearch, NetworkConfig, NetworkOptimum, NetworkSearch, XiSearch,
};
use lossyphase::specfun::constants;
use lossyphase::{LossyPhase, PassCount, Transmissivity};

use crate::config::*;
use crate::error::CliError;
use crate::output::{Cell, Table};

/// Transmissivities of the small-angle network table.
pub const TABLE_ETAS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

const POINT_COLUMNS: [&str; 5] = [
    "eta",
    "strategy",
    "k",
    "fisher_per_lost",
    "normalized_precision",
];

pub fn transmissivity(eta: f64) -> Result<Transmissivity, CliError> {
    Ok(Transmissivity::new(eta)?)
}

fn eta_list(eta: Option<f64>, grid: Option<Grid>) -> Result<Vec<Transmissivity>, CliError> {
    let values = match (eta, grid) {
        (Some(e), _) => vec![e],
        (None, Some(g)) => g.points(),
        (None, None) => {
            return Err(CliError::validation(
                "eta",
                "either --eta or --grid is required",
            ))
        }
    };
    values.into_iter().map(transmissivity).collect()
}

fn pass_count(k: f64, discrete: bool) -> Result<PassCount, CliError> {
    if discrete {
        if k.fract() != 0.0 || !(1.0..=f64::from(u32::MAX)).contains(&k) {
            return Err(CliError::validation(
                "k",
                format!("{k} is not a whole number of passes"),
            ));
        }
        Ok(PassCount::discrete(k as u32)?)
    } else {
        Ok(PassCount::continuous(k)?)
    }
}

pub fn constants_table() -> Table {
    let c = constants();
    Table::single(
        &["w", "k_coeff", "gamma_opt", "cl_const", "advantage_ratio"],
        vec![
            c.w.into(),
            c.k_coeff.into(),
            c.gamma_opt.into(),
            c.cl_const.into(),
            c.advantage_ratio.into(),
        ],
    )
}

fn point_table(rows: Vec<Vec<Cell>>, single: bool) -> Table {
    let mut t = Table::new(&POINT_COLUMNS);
    for r in rows {
        t.push(r);
    }
    t.single = single;
    t
}

pub fn classical_mp(a: &PointArgs) -> Result<Table, CliError> {
    let mode: Mode = a.mode.into();
    let norm: QuantumNorm = a.norm.into();
    let mut rows = Vec::new();
    for eta in eta_list(a.eta, a.grid)? {
        let (k, fpl) = match a.k {
            Some(k) => (k, classical_fpl(eta, pass_count(k, a.discrete)?, mode)),
            None => {
                let best = classical_fpl_opt(eta, mode, a.discrete);
                (
                    best.k.expect("classical optimum has a pass count"),
                    best.fisher_per_lost,
                )
            }
        };
        let q = norm.value(eta, mode);
        rows.push(vec![
            eta.get().into(),
            "classical_mp".into(),
            k.into(),
            fpl.into(),
            (fpl / q).sqrt().into(),
        ]);
    }
    Ok(point_table(rows, a.eta.is_some()))
}

pub fn quantum_bound(a: &PointArgs) -> Result<Table, CliError> {
    let mode: Mode = a.mode.into();
    let norm: QuantumNorm = a.norm.into();
    let mut rows = Vec::new();
    for eta in eta_list(a.eta, a.grid)? {
        let (name, k, fpl) = match a.k {
            Some(k) => (
                "quantum_bound_mp",
                Some(k),
                quantum_bound_fpl(eta, pass_count(k, a.discrete)?, mode),
            ),
            None if a.discrete => {
                let best = quantum_bound_opt_discrete(eta, mode);
                ("quantum_bound_mp", best.k, best.fisher_per_lost)
            }
            None => ("quantum_bound_limit", None, quantum_bound_limit(eta, mode)),
        };
        let q = norm.value(eta, mode);
        rows.push(vec![
            eta.get().into(),
            name.into(),
            k.into(),
            fpl.into(),
            (fpl / q).sqrt().into(),
        ]);
    }
    Ok(point_table(rows, a.eta.is_some()))
}

pub fn advantage_cmd(a: &AdvantageArgs) -> Result<Table, CliError> {
    let mut t = Table::new(&[
        "eta",
        "discrete",
        "norm",
        "advantage_ratio",
        "rmse_reduction",
    ]);
    let norm_name = match a.norm {
        NormArg::Continuous => "continuous",
        NormArg::Discrete => "discrete",
    };
    for eta in eta_list(a.eta, a.grid)? {
        let ratio = advantage_ratio(eta, a.discrete, a.norm.into());
        t.push(vec![
            eta.get().into(),
            a.discrete.into(),
            norm_name.into(),
            ratio.into(),
            (1.0 - ratio).into(),
        ]);
    }
    t.single = a.eta.is_some();
    Ok(t)
}

pub fn fig2a(a: &Fig2aArgs) -> Result<Table, CliError> {
    let grid = eta_list(None, Some(a.grid))?;
    let strategies: Vec<ScanStrategy> = if a.strategies.is_empty() {
        ScanStrategy::ALL.to_vec()
    } else {
        a.strategies.iter().map(|&s| s.into()).collect()
    };
    let mut t = Table::new(&POINT_COLUMNS);
    for row in fig2a_scan(&grid, &strategies, a.mode.into(), a.norm.into()) {
        t.push(vec![
            row.eta.into(),
            row.strategy.name().into(),
            row.k.into(),
            row.fisher_per_lost.into(),
            row.normalized_precision.into(),
        ]);
    }
    Ok(t)
}

pub fn gaussian_fisher(a: &GaussianArgs) -> Result<Table, CliError> {
    let eta = transmissivity(a.eta)?;
    let r = match (a.r, a.nsq) {
        (Some(r), _) => r,
        (None, Some(n)) if n >= 0.0 && n.is_finite() => n.sqrt().asinh(),
        (None, Some(n)) => {
            return Err(CliError::validation(
                "nsq",
                format!("{n} must be finite and >= 0"),
            ))
        }
        (None, None) => return Err(CliError::validation("r", "either --r or --nsq is required")),
    };
    let locked = GaussianSchemeParams::locked(a.alpha, r, a.theta)?;
    let params = match a.varphi {
        Some(v) => GaussianSchemeParams::new(a.alpha, r, v)?,
        None => locked,
    };
    let fisher = moment_fisher(&params, &LossyPhase::new(eta, a.theta))?;
    let closed = (params == locked).then(|| scheme_fisher(&params, eta));
    let lost = params.n_total() * (1.0 - a.eta);
    Ok(Table::single(
        &[
            "eta",
            "alpha",
            "r",
            "n_sq",
            "varphi",
            "fisher",
            "fisher_closed_form",
            "fisher_per_lost",
            "bright_limit_fisher_per_lost",
        ],
        vec![
            a.eta.into(),
            a.alpha.into(),
            r.into(),
            params.n_sq().into(),
            params.varphi().into(),
            fisher.into(),
            closed.into(),
            (lost > 0.0).then(|| fisher / lost).into(),
            scheme_fpl_limit(params.n_sq(), eta).into(),
        ],
    ))
}

pub fn fig2b(a: &Fig2bArgs) -> Result<Table, CliError> {
    let mut t = Table::new(&["eta", "n_sq", "r", "squeezing_db"]);
    for eta in eta_list(None, Some(a.grid))? {
        match required_squeezing_db(eta) {
            Some(s) => t.push(vec![
                s.eta.into(),
                s.n_sq.into(),
                s.r.into(),
                s.squeezing_db.into(),
            ]),
            None => t.push(vec![eta.get().into(), Cell::Na, Cell::Na, Cell::Na]),
        }
    }
    Ok(t)
}

pub fn network_eval(a: &NetworkEvalArgs) -> Result<Table, CliError> {
    let eta = transmissivity(a.eta)?;
    let xi = match (a.xi, a.h_xi) {
        (Some(x), _) => x,
        (None, Some(hx)) => hx / f64::from(a.h.max(1)),
        (None, None) => {
            return Err(CliError::validation(
                "xi",
                "either --xi or --h-xi is required",
            ))
        }
    };
    let cfg = NetworkConfig::new(eta, a.h, a.k, xi, a.phi)?;
    let fpl = network_fpl(&cfg)?;
    Ok(Table::single(
        &[
            "eta",
            "h",
            "k",
            "xi",
            "h_xi",
            "phi",
            "fisher_per_lost",
            "ratio",
            "sample_mode_qfi_fraction",
        ],
        vec![
            a.eta.into(),
            a.h.into(),
            a.k.into(),
            xi.into(),
            (f64::from(a.h) * xi).into(),
            a.phi.into(),
            fpl.into(),
            (fpl / single_pass_qsm(eta)).into(),
            sample_mode_qfi_fraction(&cfg).into(),
        ],
    ))
}

pub fn network_search(a: &NetworkOptArgs) -> NetworkSearch {
    NetworkSearch {
        h_max: a.h_max.unwrap_or(64),
        h_xi_min: a.xi_min,
        h_xi_max: a.xi_max,
        xi_search: if a.global_xi {
            XiSearch::Global
        } else {
            XiSearch::LowerEdge
        },
        free_phi: a.free_phi,
        ..NetworkSearch::default()
    }
}

pub const NETWORK_COLUMNS: [&str; 7] = [
    "eta",
    "h",
    "h_xi",
    "ratio",
    "xi",
    "varphi",
    "fisher_per_lost",
];

pub fn network_row(o: &NetworkOptimum) -> Vec<Cell> {
    // ξ has no effect with a single module
    let h_xi = (o.h > 1).then_some(o.h_xi);
    let xi = (o.h > 1).then_some(o.xi);
    vec![
        o.eta.into(),
        o.h.into(),
        h_xi.into(),
        o.ratio.into(),
        xi.into(),
        o.varphi.into(),
        o.fpl.into(),
    ]
}

pub fn network_opt(a: &NetworkOptArgs) -> Result<Table, CliError> {
    if a.continuous {
        let search = ContinuousSearch {
            h_max: a.h_max.unwrap_or(ContinuousSearch::default().h_max),
            h_xi_range: (a.xi_min, a.xi_max),
            ..ContinuousSearch::default()
        };
        let o = optimize_network_continuous(&search)?;
        return Ok(Table::single(
            &["gamma", "h", "h_xi", "ratio", "value"],
            vec![
                o.gamma.into(),
                o.h.into(),
                o.h_xi.into(),
                o.ratio.into(),
                o.value.into(),
            ],
        ));
    }
    let search = network_search(a);
    let etas = if a.eta.is_empty() {
        TABLE_ETAS.to_vec()
    } else {
        a.eta.clone()
    };
    let mut t = Table::new(&NETWORK_COLUMNS);
    for e in &etas {
        t.push(network_row(&optimize_network(
            transmissivity(*e)?,
            &search,
        )?));
    }
    t.single = etas.len() == 1;
    Ok(t)
}

pub fn imperfect_advantage(a: &ImperfectArgs) -> Result<Table, CliError> {
    let eta = transmissivity(a.eta)?;
    let budget = ImperfectionBudget::new(a.eta_p, a.eta_r, a.eta_m)?;
    let r = advantage(eta, &budget)?;
    Ok(Table::single(
        &[
            "eta",
            "eta_p",
            "eta_r",
            "eta_m",
            "k_cl",
            "k_q",
            "fpl_cl",
            "fpl_q",
            "rmse_reduction",
        ],
        vec![
            a.eta.into(),
            a.eta_p.into(),
            a.eta_r.into(),
            a.eta_m.into(),
            r.k_cl.into(),
            r.k_q.into(),
            r.fpl_cl.into(),
            r.fpl_q.into(),
            r.rmse_reduction.into(),
        ],
    ))
}

pub fn fig4_surface(a: &Fig4Args) -> Result<Table, CliError> {
    let n = a.points_per_axis();
    if n == 0 {
        return Err(CliError::validation("grid_n", "must be at least 1"));
    }
    if !(a.axis_min > 0.0 && a.axis_min <= a.axis_max && a.axis_max < 1.0) {
        return Err(CliError::validation(
            "axis_min",
            "axis must satisfy 0 < min <= max < 1",
        ));
    }
    let axis = linspace(a.axis_min, a.axis_max, n);
    let etas = axis
        .iter()
        .map(|&e| transmissivity(e))
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(&["eta", "eta_pm", "threshold_eta_r"]);
    for c in surface_grid(&etas, &axis, a.precision)? {
        t.push(vec![
            c.eta.into(),
            c.eta_pm.into(),
            c.threshold_eta_r.into(),
        ]);
    }
    Ok(t)
}
