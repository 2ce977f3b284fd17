//! The self-check suite behind `qharmonic verify`.

use serde::Serialize;

use super::{
    compositions_bruteforce, default_laplace_window, one_sided_derivative_of, FourierInversion,
    LaplaceQuadrature, Side,
};
use crate::density::{build_mu, jump, ConvPowerTable, PiecewiseExpPolyDensity};
use crate::error::Result;
use crate::iteration::{fixed_point_m, fixed_point_residual};
use crate::qkernel::{c_q, psi_q, q_harmonic, CqMethod, QParam, TruncationBudget};
use crate::transforms::f_q_real;

/// One line of the report. Passes iff `|measured - target| <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub check_name: String,
    pub target: f64,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(check_name: impl Into<String>, target: f64, measured: f64, tolerance: f64) -> Self {
        Self {
            check_name: check_name.into(),
            target,
            measured,
            tolerance,
            pass: (measured - target).abs() <= tolerance,
        }
    }
}

/// How much of the suite to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Level {
    /// Laplace moments, continuity, jumps, `c_q`, `psi_q` linkage, tables.
    Fast,
    /// Everything in `Fast` plus Fourier inversion.
    Full,
}

/// Run the suite for every `q` in `qs`.
pub fn run_suite(qs: &[f64], level: Level, b: &TruncationBudget) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let m = fixed_point_m(10_000);
    out.push(Check::new("fixed_point_residual[n<=10000]", 0.0, fixed_point_residual(&m), 1e-12));
    for &q in qs {
        let qp = QParam::with_budget(q, *b)?;
        checks_for(&qp, level, b, &mut out)?;
    }
    Ok(out)
}

fn checks_for(qp: &QParam, level: Level, b: &TruncationBudget, out: &mut Vec<Check>) -> Result<()> {
    let q = qp.q();
    let l = qp.step();
    let window = default_laplace_window(qp);
    let density = PiecewiseExpPolyDensity::for_window(qp, window, b)?;
    let scale = 1.0 - q;

    let laplace = LaplaceQuadrature::new(&density, window)?;
    out.push(Check::new(
        format!("normalization[q={q}]"),
        1.0,
        laplace.transform(0.0).value,
        1e-9,
    ));
    for n in 0..=10u64 {
        out.push(Check::new(
            format!("laplace_moment[q={q},n={n}]"),
            1.0 / q_harmonic(n + 1, qp),
            laplace.transform(n as f64).value,
            1e-8,
        ));
    }

    for n in 1..=10 {
        out.push(Check::new(
            format!("continuity[q={q},n={n}]"),
            density.left_limit(n) / scale,
            density.right_limit(n) / scale,
            1e-12,
        ));
    }

    for n in 1..=6 {
        let x0 = n as f64 * l;
        let diff = one_sided_derivative_of(&density, x0, Side::Right)?
            - one_sided_derivative_of(&density, x0, Side::Left)?;
        let target = jump(n, qp);
        out.push(Check::new(format!("jump[q={q},n={n}]"), target, diff, 1e-6 * target.abs()));
    }

    let lambert = c_q(qp, b, CqMethod::Lambert)?.value;
    for (name, method) in [("divisor", CqMethod::Divisor), ("pochhammer", CqMethod::Pochhammer)] {
        out.push(Check::new(
            format!("c_q_lambert_vs_{name}[q={q}]"),
            lambert,
            c_q(qp, b, method)?.value,
            1e-11,
        ));
    }
    out.push(Check::new(
        format!("mu_total_mass[q={q}]"),
        qp.c_q() - q / (1.0 - q),
        density.measure().total_mass().value,
        1e-11,
    ));

    for z in [0.25, 1.0, 2.0, 5.0] {
        let linked = (1.0 - q) * (z + (qp.gamma_q() + psi_q(z + 1.0, qp, b)?.value) / l);
        out.push(Check::new(
            format!("psi_q_linkage[q={q},z={z}]"),
            f_q_real(z, qp, b)?.value,
            linked,
            1e-11,
        ));
    }

    let table = ConvPowerTable::new(&build_mu(qp, b)?, 8);
    let mut worst: f64 = 0.0;
    for j in 1..=8 {
        for k in 1..=j {
            let brute = compositions_bruteforce(k, j, qp)?;
            worst = worst.max(((table.get(k, j) - brute) / brute).abs());
        }
    }
    out.push(Check::new(format!("conv_table_vs_enumeration[q={q}]"), 0.0, worst, 1e-14));

    if level == Level::Full {
        let fourier = FourierInversion::new(qp, 1e5, 3.0 * l, b)?;
        for i in 0..20 {
            // offsets avoid the lattice; 3L is excluded
            let x = (i as f64 + 0.37) * 3.0 * l / 20.0;
            out.push(Check::new(
                format!("fourier_inversion[q={q},x={x}]"),
                density.tau(x)?,
                fourier.at(x)?.value,
                1e-3,
            ));
        }
    }
    Ok(())
}
