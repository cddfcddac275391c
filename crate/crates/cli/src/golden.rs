//! Embedded reference values.

use serde::Deserialize;
use std::sync::OnceLock;

const GOLDEN_TOML: &str = include_str!("../data/golden.toml");

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct Tolerated {
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Debug, Deserialize)]
pub struct Constants {
    pub w: Tolerated,
    pub k_coeff: Tolerated,
    pub gamma_opt: Tolerated,
    pub cl_const: Tolerated,
    pub advantage_ratio: Tolerated,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct Table1Row {
    pub eta: f64,
    pub h: u32,
    pub h_xi: Option<f64>,
    pub ratio: f64,
}

#[derive(Debug, Deserialize)]
pub struct Table1 {
    pub below: f64,
    pub above: f64,
    pub min_h_matches: usize,
    pub mean_reduction: [f64; 2],
    pub rows: Vec<Table1Row>,
}

#[derive(Debug, Deserialize)]
pub struct Table2 {
    pub gamma: f64,
    pub h: u32,
    pub h_xi: f64,
    pub ratio: f64,
    pub min_ratio: f64,
    pub reduction: [f64; 2],
}

#[derive(Debug, Deserialize)]
pub struct Fig2a {
    pub tolerance: f64,
    pub classical_discrete_at_gamma_opt: f64,
    pub classical_continuous: f64,
    pub quantum_single_pass_at_half: f64,
    pub max_discrete_reduction: f64,
}

#[derive(Debug, Deserialize)]
pub struct Fig2b {
    pub limit_tolerance: f64,
    pub large_nsq: f64,
    pub inversion_residual: f64,
}

#[derive(Debug, Deserialize)]
pub struct Fig4 {
    pub precision: f64,
}

#[derive(Debug, Deserialize)]
pub struct Golden {
    pub version: u32,
    pub constants: Constants,
    pub table1: Table1,
    pub table2: Table2,
    pub fig2a: Fig2a,
    pub fig2b: Fig2b,
    pub fig4: Fig4,
}

pub fn golden() -> &'static Golden {
    static GOLDEN: OnceLock<Golden> = OnceLock::new();
    GOLDEN.get_or_init(|| toml::from_str(GOLDEN_TOML).expect("embedded golden.toml parses"))
}

#[cfg(test)]
mod tests {
    #[test]
    fn parses() {
        let g = super::golden();
        assert_eq!(g.version, 1);
        assert_eq!(g.table1.rows.len(), 9);
        assert!(g.table1.rows[0].h_xi.is_none());
    }
}
