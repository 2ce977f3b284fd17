//! Independent oracles for the closed forms: per-piece Gauss-Legendre
//! quadrature of the Laplace transform of `tau_q`, Fourier inversion of
//! the symbol `f_q(1+iy)`, one-sided Richardson derivatives and brute-force
//! composition sums.

mod gauss;
mod suite;

pub use gauss::GaussLegendre;
pub use suite::{run_suite, Check, Level};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::density::PiecewiseExpPolyDensity;
use crate::error::{domain, Error, Result};
use crate::qkernel::{QParam, TruncationBudget};
use crate::transforms::{re_symbol_upper_bound, SymbolSeries};

/// Outcome of a numerical integration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    /// Disagreement between the primary and a lower-order rule.
    pub error_estimate: f64,
    pub pieces_used: usize,
    /// Estimated contribution of the integration range left out.
    pub tail_bound: f64,
    pub warnings: Vec<String>,
}

impl QuadratureResult {
    /// `error_estimate + tail_bound`.
    pub fn total_error(&self) -> f64 {
        self.error_estimate + self.tail_bound
    }
}

/// Nodes per piece of the primary and the comparison rule.
const LAPLACE_ORDER: usize = 32;
const LAPLACE_CHECK_ORDER: usize = 24;

/// Smallest multiple of `L` that covers at least 25 pieces and reaches
/// `x = 32`, beyond which `tau_q` (decaying like `e^{-x}`) is below 1e-13.
pub fn default_laplace_window(qp: &QParam) -> f64 {
    let pieces = (32.0 / qp.step()).ceil().max(25.0);
    pieces * qp.step()
}

/// Laplace transform of the constructed density by Gauss-Legendre
/// quadrature on each piece `[nL, (n+1)L]`, where the integrand is smooth.
///
/// The density values at the nodes are computed once, so any number of
/// transform arguments can be evaluated cheaply.
#[derive(Debug, Clone)]
pub struct LaplaceQuadrature {
    primary: Vec<(f64, f64)>,
    check: Vec<(f64, f64)>,
    pieces: usize,
    x_max: f64,
    tau_end: f64,
    decay: f64,
}

impl LaplaceQuadrature {
    /// `x_max` is rounded to the nearest multiple of `L`.
    pub fn new(density: &PiecewiseExpPolyDensity, x_max: f64) -> Result<Self> {
        let l = density.qparam().step();
        let pieces = (x_max / l).round();
        if pieces.is_nan() || pieces < 1.0 {
            return Err(domain(format!("x_max = {x_max} covers no full piece")));
        }
        let pieces = pieces as usize;
        let x_max = pieces as f64 * l;
        if x_max >= density.window_end() {
            return Err(Error::OutOfTable {
                x: x_max,
                needed: pieces,
                depth: density.table().depth(),
            });
        }
        let one_minus_q = 1.0 - density.qparam().q();
        let sample = |rule: &GaussLegendre| -> Vec<(f64, f64)> {
            (0..pieces)
                .flat_map(|n| {
                    rule.on(n as f64 * l, (n + 1) as f64 * l)
                        .map(move |(x, w)| (n, x, w))
                        .collect::<Vec<_>>()
                })
                .map(|(n, x, w)| (x, w * density.eval_piece(n, x) / one_minus_q))
                .collect()
        };
        let primary = sample(&GaussLegendre::new(LAPLACE_ORDER));
        let check = sample(&GaussLegendre::new(LAPLACE_CHECK_ORDER));
        let tau_end = density.tau(x_max)?;
        let tau_before = density.tau(x_max - l)?;
        // one full period of the oscillation, so the ratio sees the mean decay
        let decay = if tau_end > 0.0 && tau_before > tau_end {
            (tau_before / tau_end).ln() / l
        } else {
            1.0
        };
        Ok(Self {
            primary,
            check,
            pieces,
            x_max,
            tau_end,
            decay,
        })
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// `int_0^{x_max} e^{-zx} tau_q(x) dx` plus the tail estimate
    /// `tau_q(x_max) e^{-z x_max} / (z + s)` with `s` the observed decay rate.
    pub fn transform(&self, z: f64) -> QuadratureResult {
        let sum = |nodes: &[(f64, f64)]| -> f64 { nodes.iter().map(|(x, wf)| wf * (-z * x).exp()).sum() };
        let value = sum(&self.primary);
        let coarse = sum(&self.check);
        let tail = 2.0 * self.tau_end * (-z * self.x_max).exp() / (z + self.decay);
        QuadratureResult {
            value,
            error_estimate: (value - coarse).abs(),
            pieces_used: self.pieces,
            tail_bound: tail,
            warnings: Vec::new(),
        }
    }
}

/// Laplace transform of `tau_q` at real `z >= 0` by per-piece quadrature
/// over `[0, x_max]`.
pub fn laplace_by_quadrature(
    z: f64,
    qp: &QParam,
    table: &crate::density::ConvPowerTable,
    x_max: f64,
) -> Result<QuadratureResult> {
    if !z.is_finite() || z < 0.0 {
        return Err(domain(format!("Laplace argument must be >= 0, got {z}")));
    }
    let mu = crate::density::build_mu(qp, &TruncationBudget::default())?;
    let density = PiecewiseExpPolyDensity::new(qp, mu, table.clone());
    Ok(LaplaceQuadrature::new(&density, x_max)?.transform(z))
}

/// Nodes per panel of the Fourier rules.
const FOURIER_ORDER: usize = 16;
const FOURIER_CHECK_ORDER: usize = 10;

/// Reconstruction of `tau_q` by Fourier inversion of the symmetrized density:
/// `tau_q(x) = (1/pi) int_0^inf cos(xy) 2 Re f_q(1+iy) / |f_q(1+iy)|^2 dy`,
/// cut off at `y_max`.
///
/// The symbol is sampled once on fixed Gauss-Legendre panels; panel width
/// resolves both `cos(xy)` for `x <= x_bound` and the periodic part of the
/// symbol.
#[derive(Debug, Clone)]
pub struct FourierInversion {
    primary: Vec<(f64, f64)>,
    check: Vec<(f64, f64)>,
    panels: usize,
    x_bound: f64,
    step: f64,
    tail_bound: f64,
}

impl FourierInversion {
    pub fn new(qp: &QParam, y_max: f64, x_bound: f64, b: &TruncationBudget) -> Result<Self> {
        if !(y_max.is_finite() && y_max > 0.0) {
            return Err(domain(format!("y_max must be positive, got {y_max}")));
        }
        if !(x_bound.is_finite() && x_bound >= 0.0) {
            return Err(domain(format!("x_bound must be >= 0, got {x_bound}")));
        }
        let symbol = SymbolSeries::new(qp, 1.0, b)?;
        // highest frequency that matters: cos(xy) and the k-th harmonic
        // e^{-ikLy} of the symbol, whose weight q^{2k}/(1-q^k) falls below
        // 1e-12 once kL > ~14
        let freq = x_bound + 14.0_f64.min(symbol.terms() as f64 * qp.step());
        let width = (2.0 * PI / freq.max(1.0)).min(1.0);
        let panels = (y_max / width).ceil() as usize;
        let width = y_max / panels as f64;
        let g = |y: f64| {
            let f = symbol.eval(Complex64::new(1.0, y));
            f.re / f.norm_sqr()
        };
        let sample = |rule: &GaussLegendre| -> Vec<(f64, f64)> {
            (0..panels)
                .flat_map(|i| {
                    rule.on(i as f64 * width, (i + 1) as f64 * width)
                        .collect::<Vec<_>>()
                })
                .map(|(y, w)| (y, w * g(y)))
                .collect()
        };
        let primary = sample(&GaussLegendre::new(FOURIER_ORDER));
        let check = sample(&GaussLegendre::new(FOURIER_CHECK_ORDER));
        let one_minus_q = 1.0 - qp.q();
        // Re f / |f|^2 <= Re_max / ((1-q)^2 y^2) for large y
        let tail_bound = 2.0 / PI * re_symbol_upper_bound(qp) / (one_minus_q * one_minus_q * y_max);
        Ok(Self {
            primary,
            check,
            panels,
            x_bound,
            step: qp.step(),
            tail_bound,
        })
    }

    /// Reconstructed `tau_q(x)` for `0 <= x <= x_bound`.
    pub fn at(&self, x: f64) -> Result<QuadratureResult> {
        if !(x.is_finite() && (0.0..=self.x_bound).contains(&x)) {
            return Err(domain(format!("x = {x} outside [0, {}]", self.x_bound)));
        }
        let sum = |nodes: &[(f64, f64)]| -> f64 {
            2.0 / PI * nodes.iter().map(|(y, wg)| wg * (x * y).cos()).sum::<f64>()
        };
        let value = sum(&self.primary);
        let coarse = sum(&self.check);
        let mut warnings = Vec::new();
        let nearest = (x / self.step).round() * self.step;
        if (x - nearest).abs() < 1e-6 {
            warnings.push(format!(
                "x = {x} is within 1e-6 of the lattice point {nearest}; the truncated inversion converges slowly there"
            ));
        }
        Ok(QuadratureResult {
            value,
            error_estimate: (value - coarse).abs(),
            pieces_used: self.panels,
            tail_bound: self.tail_bound,
            warnings,
        })
    }
}

/// One-off Fourier reconstruction of `tau_q(x)`.
pub fn fourier_inversion_oracle(
    x: f64,
    qp: &QParam,
    y_max: f64,
    b: &TruncationBudget,
) -> Result<QuadratureResult> {
    FourierInversion::new(qp, y_max, x, b)?.at(x)
}

/// Side of a one-sided derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Base step `L/64`, halved once per Richardson level.
pub const DERIVATIVE_LEVELS: usize = 6;

/// One-sided derivative of `tau_q` at `x0` by Richardson extrapolation of
/// forward (or backward) difference quotients with steps `h, h/2, h/4, ...`,
/// `h = L/64`, never crossing `x0`.
pub fn one_sided_derivative_of(density: &PiecewiseExpPolyDensity, x0: f64, side: Side) -> Result<f64> {
    let l = density.qparam().step();
    let h0 = l / 64.0;
    let sign = match side {
        Side::Left => -1.0,
        Side::Right => 1.0,
    };
    if side == Side::Left && x0 - h0 < 0.0 {
        return Err(domain(format!("left derivative at {x0} would step below 0")));
    }
    let f0 = density.tau(x0)?;
    let mut quotients = Vec::with_capacity(DERIVATIVE_LEVELS);
    let mut h = h0;
    for _ in 0..DERIVATIVE_LEVELS {
        let fh = density.tau(x0 + sign * h)?;
        quotients.push(sign * (fh - f0) / h);
        h /= 2.0;
    }
    Ok(richardson(quotients))
}

/// Richardson tableau for a quotient sequence with error expansion in
/// powers of `h`, steps halving.
fn richardson(mut row: Vec<f64>) -> f64 {
    let mut factor = 1.0;
    while row.len() > 1 {
        factor *= 2.0;
        row = row
            .windows(2)
            .map(|w| (factor * w[1] - w[0]) / (factor - 1.0))
            .collect();
    }
    row[0]
}

/// One-sided derivative of `tau_q` at `x0` from a prebuilt table.
pub fn one_sided_derivative(
    x0: f64,
    side: Side,
    qp: &QParam,
    table: &crate::density::ConvPowerTable,
) -> Result<f64> {
    if !(x0.is_finite() && x0 > 0.0) {
        return Err(domain(format!("derivative point must be > 0, got {x0}")));
    }
    let mu = crate::density::build_mu(qp, &TruncationBudget::default())?;
    let density = PiecewiseExpPolyDensity::new(qp, mu, table.clone());
    one_sided_derivative_of(&density, x0, side)
}

/// Largest lattice index accepted by [`compositions_bruteforce`].
pub const MAX_ENUMERATION: usize = 14;

/// `mu^{*k}({jL})` by enumerating all compositions of `j` into `k`
/// positive parts, `sum prod_i q^{2 p_i} / (1 - q^{p_i})`.
pub fn compositions_bruteforce(k: usize, j: usize, qp: &QParam) -> Result<f64> {
    if j > MAX_ENUMERATION {
        return Err(Error::SizeLimit(format!(
            "composition enumeration limited to j <= {MAX_ENUMERATION}, got {j}"
        )));
    }
    let q = qp.q();
    let weight = |p: usize| q.powi(2 * p as i32) / (1.0 - q.powi(p as i32));
    fn walk(parts_left: usize, remaining: usize, acc: f64, weight: &dyn Fn(usize) -> f64) -> f64 {
        if parts_left == 0 {
            return if remaining == 0 { acc } else { 0.0 };
        }
        (1..=remaining + 1 - parts_left.min(remaining + 1))
            .map(|p| walk(parts_left - 1, remaining - p, acc * weight(p), weight))
            .sum()
    }
    if k == 0 {
        return Ok(if j == 0 { 1.0 } else { 0.0 });
    }
    if k > j {
        return Ok(0.0);
    }
    Ok(walk(k, j, 1.0, &weight))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{build_mu, jump, ConvPowerTable};
    use crate::qkernel::q_harmonic;
    use crate::transforms::f_q_real;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    const B: TruncationBudget = TruncationBudget {
        tol: 1e-13,
        max_terms: 1_000_000,
    };

    fn qp(q: f64) -> QParam {
        QParam::new(q).unwrap()
    }

    fn density(p: &QParam, x_max: f64) -> PiecewiseExpPolyDensity {
        PiecewiseExpPolyDensity::for_window(p, x_max, &B).unwrap()
    }

    #[test]
    fn compositions() {
        let p = qp(0.5);
        let w = |n: i32| 0.5f64.powi(2 * n) / (1.0 - 0.5f64.powi(n));
        assert_abs_diff_eq!(compositions_bruteforce(1, 3, &p).unwrap(), w(3), epsilon = 1e-16);
        assert_abs_diff_eq!(compositions_bruteforce(3, 3, &p).unwrap(), w(1).powi(3), epsilon = 1e-16);
        assert_abs_diff_eq!(
            compositions_bruteforce(2, 4, &p).unwrap(),
            2.0 * w(1) * w(3) + w(2) * w(2),
            epsilon = 1e-16
        );
        assert_eq!(compositions_bruteforce(4, 3, &p).unwrap(), 0.0);
        assert_eq!(compositions_bruteforce(0, 0, &p).unwrap(), 1.0);
        assert!(matches!(compositions_bruteforce(2, 15, &p), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn table_matches_enumeration_up_to_limit() {
        let p = qp(0.6);
        let t = ConvPowerTable::new(&build_mu(&p, &B).unwrap(), MAX_ENUMERATION);
        for j in 1..=MAX_ENUMERATION {
            for k in 1..=j {
                assert_relative_eq!(t.get(k, j), compositions_bruteforce(k, j, &p).unwrap(), max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn laplace_examples() {
        let p = qp(0.5);
        let d = density(&p, default_laplace_window(&p));
        let lq = LaplaceQuadrature::new(&d, default_laplace_window(&p)).unwrap();
        assert!(lq.pieces >= 25);
        let r0 = lq.transform(0.0);
        assert_abs_diff_eq!(r0.value, 1.0, epsilon = 1e-9);
        assert!(r0.total_error() < 1e-9);
        assert_abs_diff_eq!(lq.transform(1.0).value, 0.6, epsilon = 1e-9);
        let p9 = qp(0.9);
        let d9 = density(&p9, default_laplace_window(&p9));
        let r = LaplaceQuadrature::new(&d9, default_laplace_window(&p9)).unwrap().transform(5.0);
        // mpmath: f_q(6) at q = 0.9
        assert_abs_diff_eq!(r.value, 1.0 / 2.643_716_259_599_163, epsilon = 1e-9);
    }

    #[test]
    fn laplace_free_function_and_errors() {
        let p = qp(0.5);
        let x_max = 26.0 * p.step();
        let table = ConvPowerTable::new(&build_mu(&p, &B).unwrap(), 27);
        let r = laplace_by_quadrature(2.0, &p, &table, x_max).unwrap();
        assert_abs_diff_eq!(r.value, 1.0 / q_harmonic(3, &p), epsilon = 1e-8);
        assert!(laplace_by_quadrature(-1.0, &p, &table, x_max).is_err());
        assert!(matches!(
            laplace_by_quadrature(0.0, &p, &table, 40.0 * p.step()),
            Err(Error::OutOfTable { .. })
        ));
    }

    #[test]
    fn laplace_oracle_closure() {
        for q in [0.3, 0.5, 0.9] {
            let p = qp(q);
            let w = default_laplace_window(&p);
            let lq = LaplaceQuadrature::new(&density(&p, w), w).unwrap();
            for z in 0..=10 {
                let want = 1.0 / f_q_real(z as f64 + 1.0, &p, &B).unwrap().value;
                assert_abs_diff_eq!(lq.transform(z as f64).value, want, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn richardson_on_polynomial() {
        // forward differences of x^3 at 1
        let f = |x: f64| x * x * x;
        let qs: Vec<f64> = (0..4).map(|i| (f(1.0 + 0.1 / 2f64.powi(i)) - f(1.0)) / (0.1 / 2f64.powi(i))).collect();
        assert_abs_diff_eq!(richardson(qs), 3.0, epsilon = 1e-12);
    }

    #[test]
    fn derivative_examples() {
        for q in [0.3, 0.5, 0.9] {
            let p = qp(q);
            let l = p.step();
            let d = density(&p, 8.0 * l);
            let x = 0.5 * l;
            let left = one_sided_derivative_of(&d, x, Side::Left).unwrap();
            let right = one_sided_derivative_of(&d, x, Side::Right).unwrap();
            let exact = -p.rate() * (-p.rate() * x).exp() / (1.0 - q);
            assert_abs_diff_eq!(left, right, epsilon = 1e-8);
            assert_abs_diff_eq!(right, exact, epsilon = 1e-8);
            for n in 1..=6 {
                let x0 = n as f64 * l;
                let diff = one_sided_derivative_of(&d, x0, Side::Right).unwrap()
                    - one_sided_derivative_of(&d, x0, Side::Left).unwrap();
                assert_relative_eq!(diff, jump(n, &p), max_relative = 1e-6);
            }
        }
        let p = qp(0.5);
        let table = ConvPowerTable::new(&build_mu(&p, &B).unwrap(), 4);
        let diff = one_sided_derivative(2.0 * p.step(), Side::Right, &p, &table).unwrap()
            - one_sided_derivative(2.0 * p.step(), Side::Left, &p, &table).unwrap();
        assert_relative_eq!(diff, 1.0 / 6.0, max_relative = 1e-6);
        assert!(one_sided_derivative(0.0, Side::Right, &p, &table).is_err());
    }

    #[test]
    fn fourier_examples() {
        let p = qp(0.5);
        let l = p.step();
        let d = density(&p, 4.0 * l);
        let fi = FourierInversion::new(&p, 1e5, 3.0 * l, &B).unwrap();
        let x = 0.5 * l;
        let r = fi.at(x).unwrap();
        assert!(r.warnings.is_empty());
        assert_abs_diff_eq!(r.value, 2.0 * (-p.rate() * x).exp(), epsilon = 1e-4);
        let x = 1.5 * l;
        assert_abs_diff_eq!(fi.at(x).unwrap().value, d.tau(x).unwrap(), epsilon = 1e-4);
        // at the kink x = 0 the inversion converges to the mean of the one-sided limits,
        // i.e. to the symmetric extension tau_q(|x|); slowly
        let r0 = fi.at(0.0).unwrap();
        assert!(!r0.warnings.is_empty());
        assert_abs_diff_eq!(r0.value, 2.0, epsilon = 1e-3);
        assert!(fi.at(4.0 * l).is_err());
    }
}
