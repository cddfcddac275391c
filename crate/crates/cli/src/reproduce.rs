//! `reproduce`: rerun a campaign and compare it with the golden values.

use lossyphase::analytic::{advantage_ratio, fig2a_scan, Mode, QuantumNorm, ScanStrategy};
use lossyphase::gaussian::{db_to_r, required_squeezing_db, scheme_fpl_limit};
use lossyphase::imperfect::linspace;
use lossyphase::network::{
    optimize_network, optimize_network_continuous, ContinuousSearch, NetworkSearch,
};
use lossyphase::specfun::constants;

use crate::commands::{fig2a, fig2b, fig4_surface, network_row, transmissivity, NETWORK_COLUMNS};
use crate::config::{Fig2aArgs, Fig2bArgs, Fig4Args, ModeArg, NormArg, ReproduceArgs, Target};
use crate::error::CliError;
use crate::golden::{golden, Tolerated};
use crate::output::{format_num, Cell, Table};

pub const REPORT_COLUMNS: [&str; 7] = [
    "target",
    "check",
    "value",
    "expected",
    "tolerance",
    "pass",
    "note",
];

pub struct Reproduction {
    pub report: Table,
    pub data: Table,
}

impl Reproduction {
    /// Failed checks; informational rows carry no verdict.
    pub fn failures(&self) -> Vec<String> {
        let pass = REPORT_COLUMNS.iter().position(|c| *c == "pass").unwrap();
        self.report
            .rows
            .iter()
            .filter(|r| r[pass] == Cell::Bool(false))
            .map(|r| match &r[1] {
                Cell::Text(t) => t.clone(),
                _ => String::new(),
            })
            .collect()
    }
}

struct Report {
    target: &'static str,
    table: Table,
}

impl Report {
    fn new(target: &'static str) -> Self {
        Report {
            target,
            table: Table::new(&REPORT_COLUMNS),
        }
    }

    fn row(
        &mut self,
        check: impl Into<String>,
        value: Cell,
        expected: Cell,
        tolerance: Cell,
        pass: Cell,
        note: impl Into<String>,
    ) {
        let note: String = note.into();
        self.table.push(vec![
            self.target.into(),
            check.into().into(),
            value,
            expected,
            tolerance,
            pass,
            if note.is_empty() {
                Cell::Na
            } else {
                note.into()
            },
        ]);
    }

    fn within(&mut self, check: &str, value: f64, t: Tolerated) {
        let ok = (value - t.value).abs() <= t.tolerance;
        self.row(
            check,
            value.into(),
            t.value.into(),
            t.tolerance.into(),
            ok.into(),
            "",
        );
    }

    fn failed(&mut self, check: &str, err: &CliError) {
        self.row(
            check,
            Cell::Na,
            Cell::Na,
            Cell::Na,
            false.into(),
            err.to_string(),
        );
    }

    fn info(&mut self, check: &str, value: Cell, expected: Cell) {
        self.row(check, value, expected, Cell::Na, Cell::Na, "");
    }
}

pub fn reproduce(a: &ReproduceArgs) -> Result<Reproduction, CliError> {
    match a.target {
        Target::Constants => Ok(reproduce_constants()),
        Target::Table1 => reproduce_table1(a.h_max),
        Target::Table2 => reproduce_table2(a.h_max),
        Target::Fig2a => reproduce_fig2a(),
        Target::Fig2b => reproduce_fig2b(),
        Target::Fig4 => reproduce_fig4(a.grid_n),
    }
}

fn reproduce_constants() -> Reproduction {
    let g = &golden().constants;
    let c = constants();
    let mut r = Report::new("constants");
    r.within("w", c.w, g.w);
    r.within("k_coeff", c.k_coeff, g.k_coeff);
    r.within("gamma_opt", c.gamma_opt, g.gamma_opt);
    r.within("cl_const", c.cl_const, g.cl_const);
    r.within("advantage_ratio", c.advantage_ratio, g.advantage_ratio);
    Reproduction {
        report: r.table,
        data: crate::commands::constants_table(),
    }
}

fn reproduce_table1(h_max: Option<u32>) -> Result<Reproduction, CliError> {
    let g = &golden().table1;
    let search = NetworkSearch {
        h_max: h_max.unwrap_or(NetworkSearch::default().h_max),
        ..NetworkSearch::default()
    };
    let mut r = Report::new("table1");
    let mut data = Table::new(&NETWORK_COLUMNS);
    let mut h_matches = 0;
    let mut reductions = Vec::new();
    for row in &g.rows {
        let check = format!("ratio@eta={}", row.eta);
        let result = transmissivity(row.eta).and_then(|eta| Ok(optimize_network(eta, &search)?));
        match result {
            Ok(o) => {
                let ok = o.ratio >= row.ratio - g.below && o.ratio <= row.ratio + g.above;
                let note = format!("h={} (reference {})", o.h, row.h);
                r.row(
                    check,
                    o.ratio.into(),
                    row.ratio.into(),
                    format!("-{}/+{}", g.below, g.above).into(),
                    ok.into(),
                    note,
                );
                h_matches += usize::from(o.h == row.h);
                reductions.push(1.0 - o.ratio.sqrt());
                data.push(network_row(&o));
            }
            Err(e) => r.failed(&check, &e),
        }
    }
    r.row(
        "h_matches",
        (h_matches as u32).into(),
        (g.rows.len() as u32).into(),
        format!(">={}", g.min_h_matches).into(),
        (h_matches >= g.min_h_matches).into(),
        "",
    );
    if reductions.len() == g.rows.len() {
        let mean = reductions.iter().sum::<f64>() / reductions.len() as f64;
        let [lo, hi] = g.mean_reduction;
        r.row(
            "mean_rmse_reduction",
            mean.into(),
            Cell::Na,
            format!("[{lo},{hi}]").into(),
            (lo..=hi).contains(&mean).into(),
            "",
        );
    } else {
        r.row(
            "mean_rmse_reduction",
            Cell::Na,
            Cell::Na,
            Cell::Na,
            false.into(),
            "rows missing",
        );
    }
    Ok(Reproduction {
        report: r.table,
        data,
    })
}

fn reproduce_table2(h_max: Option<u32>) -> Result<Reproduction, CliError> {
    let g = &golden().table2;
    let search = ContinuousSearch {
        h_max: h_max.unwrap_or(ContinuousSearch::default().h_max),
        ..ContinuousSearch::default()
    };
    let mut r = Report::new("table2");
    let mut data = Table::new(&["gamma", "h", "h_xi", "ratio", "value"]);
    match optimize_network_continuous(&search) {
        Ok(o) => {
            r.row(
                "ratio",
                o.ratio.into(),
                g.ratio.into(),
                format!(">={}", g.min_ratio).into(),
                (o.ratio >= g.min_ratio).into(),
                "",
            );
            let red = 1.0 - o.ratio.sqrt();
            let [lo, hi] = g.reduction;
            r.row(
                "rmse_reduction",
                red.into(),
                Cell::Na,
                format!("[{lo},{hi}]").into(),
                (lo..=hi).contains(&red).into(),
                "",
            );
            r.info("gamma", o.gamma.into(), g.gamma.into());
            r.info("h", o.h.into(), g.h.into());
            r.info("h_xi", o.h_xi.into(), g.h_xi.into());
            data.push(vec![
                o.gamma.into(),
                o.h.into(),
                o.h_xi.into(),
                o.ratio.into(),
                o.value.into(),
            ]);
        }
        Err(e) => r.failed("ratio", &CliError::from(e)),
    }
    Ok(Reproduction {
        report: r.table,
        data,
    })
}

fn reproduce_fig2a() -> Result<Reproduction, CliError> {
    let g = &golden().fig2a;
    let tol = |value| Tolerated {
        value,
        tolerance: g.tolerance,
    };
    let mut r = Report::new("fig2a");
    let gamma_opt = transmissivity(constants().gamma_opt)?;
    r.within(
        "classical_discrete@gamma_opt",
        advantage_ratio(gamma_opt, true, QuantumNorm::ContinuousLimit),
        tol(g.classical_discrete_at_gamma_opt),
    );
    let half = [transmissivity(0.5)?];
    let scan = fig2a_scan(
        &half,
        &[
            ScanStrategy::ClassicalMpContinuous,
            ScanStrategy::QuantumBoundDiscrete,
        ],
        Mode::Sm,
        QuantumNorm::ContinuousLimit,
    );
    r.within(
        "classical_continuous@eta=0.5",
        scan[0].normalized_precision,
        tol(g.classical_continuous),
    );
    r.within(
        "quantum_single_pass@eta=0.5",
        scan[1].normalized_precision,
        tol(g.quantum_single_pass_at_half),
    );

    let mut worst = (0.0, 0.0);
    for e in linspace(0.01, 0.99, 99) {
        let red = 1.0 - advantage_ratio(transmissivity(e)?, true, QuantumNorm::DiscreteOptimum);
        if red > worst.1 {
            worst = (e, red);
        }
    }
    r.row(
        "max_discrete_rmse_reduction",
        worst.1.into(),
        Cell::Na,
        format!("<{}", g.max_discrete_reduction).into(),
        (worst.1 < g.max_discrete_reduction).into(),
        format!(
            "worst eta={}, single-pass quantum reference",
            format_num(worst.0)
        ),
    );
    let data = fig2a(&Fig2aArgs {
        grid: "0.01:0.99:99".parse().expect("static grid"),
        mode: ModeArg::Sm,
        norm: NormArg::Continuous,
        strategies: Vec::new(),
    })?;
    Ok(Reproduction {
        report: r.table,
        data,
    })
}

fn reproduce_fig2b() -> Result<Reproduction, CliError> {
    let g = &golden().fig2b;
    let mut r = Report::new("fig2b");
    let mut worst_zero: f64 = 0.0;
    let mut worst_large: f64 = 0.0;
    let mut worst_inv: f64 = 0.0;
    let mut worst_db: f64 = 0.0;
    let mut solved = 0u32;
    for e in linspace(0.01, 0.99, 99) {
        let eta = transmissivity(e)?;
        let zero = 4.0 * e / (1.0 - e);
        let large = 4.0 * e / ((1.0 - e) * (1.0 - e));
        worst_zero = worst_zero.max((scheme_fpl_limit(0.0, eta) / zero - 1.0).abs());
        worst_large = worst_large.max((scheme_fpl_limit(g.large_nsq, eta) / large - 1.0).abs());
        if let Some(s) = required_squeezing_db(eta) {
            solved += 1;
            let target = 4.0 * constants().cl_const / eta.ln().powi(2);
            worst_inv = worst_inv.max((scheme_fpl_limit(s.n_sq, eta) - target).abs() / target);
            worst_db = worst_db.max((db_to_r(s.squeezing_db) - s.r).abs());
        }
    }
    let lim = |v: f64| (v <= g.limit_tolerance).into();
    r.row(
        "limit_nsq=0",
        worst_zero.into(),
        0.0.into(),
        g.limit_tolerance.into(),
        lim(worst_zero),
        "max relative deviation",
    );
    r.row(
        "limit_nsq=large",
        worst_large.into(),
        0.0.into(),
        g.limit_tolerance.into(),
        lim(worst_large),
        "max relative deviation",
    );
    let inv_ok = worst_inv <= g.inversion_residual && worst_db <= g.inversion_residual;
    r.row(
        "inversion_residual",
        worst_inv.max(worst_db).into(),
        0.0.into(),
        g.inversion_residual.into(),
        inv_ok.into(),
        format!("{solved} of 99 points solvable"),
    );
    let data = fig2b(&Fig2bArgs {
        grid: "0.01:0.99:99".parse().expect("static grid"),
    })?;
    Ok(Reproduction {
        report: r.table,
        data,
    })
}

fn reproduce_fig4(grid_n: usize) -> Result<Reproduction, CliError> {
    let g = &golden().fig4;
    let data = fig4_surface(&Fig4Args {
        grid_n,
        full: false,
        precision: g.precision,
        axis_min: 0.01,
        axis_max: 0.99,
    })?;
    let mut r = Report::new("fig4");
    let (mut present, mut absent, mut violations) = (0u32, 0u32, 0u32);
    let mut margin = f64::INFINITY;
    for row in &data.rows {
        match (&row[1], &row[2]) {
            (Cell::Num(pm), Cell::Num(t)) => {
                present += 1;
                violations += u32::from(t >= pm);
                margin = margin.min(pm - t);
            }
            _ => absent += 1,
        }
    }
    let verdict = if violations == 0 {
        "all present thresholds below eta_p*eta_m"
    } else {
        "some thresholds reach eta_p*eta_m"
    };
    r.row(
        "threshold_below_eta_pm",
        violations.into(),
        0u32.into(),
        Cell::Na,
        (violations == 0).into(),
        verdict,
    );
    r.row(
        "present_cells",
        present.into(),
        Cell::Na,
        ">=1".into(),
        (present >= 1).into(),
        "",
    );
    r.row(
        "absent_cells",
        absent.into(),
        Cell::Na,
        ">=1".into(),
        (absent >= 1).into(),
        "",
    );
    r.info(
        "smallest_margin",
        (present > 0).then_some(margin).into(),
        Cell::Na,
    );
    Ok(Reproduction {
        report: r.table,
        data,
    })
}
