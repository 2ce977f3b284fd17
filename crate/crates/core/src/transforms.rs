//! Bernstein transform `f_q` of the Jackson measure and the transforms
//! built from it.
//!
//! `f_q(z) = (1-q) (z + c_q - sum_{k>=1} q^k q^{kz} / (1-q^k))` for `Re z > 0`.
//! Complex powers are taken as `q^{kz} = exp(-k L z)`.

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::qkernel::{psi_q, Certified, QParam, TruncationBudget};

pub type ComplexValue = Complex64;

/// A point of the open right half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint(Complex64);

impl HalfPlanePoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        Self::try_from(Complex64::new(re, im))
    }

    pub fn real(re: f64) -> Result<Self> {
        Self::new(re, 0.0)
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }

    pub fn re(&self) -> f64 {
        self.0.re
    }
}

impl TryFrom<Complex64> for HalfPlanePoint {
    type Error = crate::Error;

    fn try_from(z: Complex64) -> Result<Self> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(domain(format!("non-finite argument {z}")));
        }
        if z.re <= 0.0 {
            return Err(domain(format!("Re z must be positive, got {z}")));
        }
        Ok(Self(z))
    }
}

/// Bernstein transform of the Jackson measure `d_q t`.
pub fn f_q(z: HalfPlanePoint, qp: &QParam, b: &TruncationBudget) -> Result<Certified<Complex64>> {
    let q = qp.q();
    let x = z.re();
    let om = 1.0 - q;
    // sum_{k>=K} |q^k q^{kz}| / (1-q^k) <= q^{K(1+x)} / ((1-q)(1-q^{1+x})), times (1-q)
    let tail = |k: u64| qp.pow(k as f64 * (1.0 + x)) / qp.one_minus_pow(1.0 + x);
    let cut = b.cutoff("f_q", 1, tail)?;
    let ratio = (-qp.step() * (z.value() + 1.0)).exp();
    let mut power = ratio;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..cut {
        sum += power / qp.one_minus_pow(k as f64);
        power *= ratio;
    }
    let value = om * (z.value() + qp.c_q() - sum);
    Ok(Certified::new(value, tail(cut) + om * qp.c_q_bound()))
}

/// Real-argument convenience wrapper around [`f_q`].
pub fn f_q_real(z: f64, qp: &QParam, b: &TruncationBudget) -> Result<Certified<f64>> {
    Ok(f_q(HalfPlanePoint::real(z)?, qp, b)?.map(|v| v.re))
}

/// `f_q` through the q-digamma function:
/// `(1-q) (z + (gamma_q + psi_q(z+1)) / log(1/q))`.
pub fn f_q_via_psi(z: f64, qp: &QParam, b: &TruncationBudget) -> Result<Certified<f64>> {
    if !z.is_finite() || z <= 0.0 {
        return Err(domain(format!("f_q needs z > 0, got {z}")));
    }
    let om = 1.0 - qp.q();
    let l = qp.step();
    let psi = psi_q(z + 1.0, qp, b)?;
    let value = om * (z + (qp.gamma_q() + psi.value) / l);
    Ok(Certified::new(value, om * (psi.bound / l + qp.c_q_bound())))
}

/// Mellin transform of `nu_q`, `1 / f_q(z+1)`, for `Re z >= 0`.
pub fn mellin_nu_q(z: Complex64, qp: &QParam, b: &TruncationBudget) -> Result<Certified<Complex64>> {
    if !(z.re.is_finite() && z.im.is_finite()) || z.re < 0.0 {
        return Err(domain(format!("Mellin transform of nu_q needs Re z >= 0, got {z}")));
    }
    let f = f_q(HalfPlanePoint::try_from(z + 1.0)?, qp, b)?;
    let norm = f.value.norm();
    if norm < 1e-14 {
        return Err(domain(format!("f_q(z+1) vanishes at z = {z}")));
    }
    let bound = f.bound / (norm * (norm - f.bound).max(norm / 2.0));
    Ok(Certified::new(f.value.inv(), bound))
}

/// `h_q(t) = (1-q) sum_{k > t/L} q^k/(1-q^k)`, a non-increasing step function.
///
/// On `[nL, (n+1)L)` the sum starts at `k = n+1`.
pub fn h_q(t: f64, qp: &QParam, b: &TruncationBudget) -> Result<Certified<f64>> {
    if !t.is_finite() || t < 0.0 {
        return Err(domain(format!("h_q needs t >= 0, got {t}")));
    }
    let ratio = t / qp.step();
    if ratio > 1e15 {
        return Ok(Certified::new(0.0, 0.0));
    }
    h_q_piece(ratio.floor() as u64, qp, b)
}

/// Value of `h_q` on `[nL, (n+1)L)`.
pub fn h_q_piece(n: u64, qp: &QParam, b: &TruncationBudget) -> Result<Certified<f64>> {
    let q = qp.q();
    let om = 1.0 - q;
    let start = n + 1;
    let tail = |k: u64| qp.pow(k as f64) / qp.one_minus_pow(k.max(1) as f64);
    let cut = b.cutoff("h_q", start, |k| tail(k).min(f64::MAX))?;
    let sum: f64 = (start..cut)
        .map(|k| qp.pow(k as f64) / qp.one_minus_pow(k as f64))
        .sum();
    Ok(Certified::new(om * sum, tail(cut)))
}

/// `int_0^inf e^{-tz} h_q(t) dt`, integrating each constant step in closed form.
pub fn h_q_laplace(z: f64, qp: &QParam, b: &TruncationBudget) -> Result<Certified<f64>> {
    if !z.is_finite() || z <= 0.0 {
        return Err(domain(format!("h_q Laplace transform needs z > 0, got {z}")));
    }
    let l = qp.step();
    let piece_factor = -(-l * z).exp_m1() / z;
    let h0 = (1.0 - qp.q()) * (qp.c_q() + qp.c_q_bound());
    // sum_{n>=N} h_n e^{-nLz} (1-e^{-Lz})/z <= h_0 e^{-NLz}/z
    let tail = |n: u64| h0 * (-(n as f64) * l * z).exp() / z;
    let cut = b.cutoff("h_q Laplace", 0, tail)?;
    let mut value = 0.0;
    let mut bound = tail(cut);
    for n in 0..cut {
        let h = h_q_piece(n, qp, b)?;
        let w = (-(n as f64) * l * z).exp() * piece_factor;
        value += h.value * w;
        bound += h.bound * w;
    }
    Ok(Certified::new(value, bound))
}

/// `f_q` with the series coefficients precomputed for repeated evaluation
/// on a half-plane `Re z >= re_min`.
#[derive(Debug, Clone)]
pub struct SymbolSeries {
    om: f64,
    c_q: f64,
    step: f64,
    coeffs: Vec<f64>,
    bound: f64,
}

impl SymbolSeries {
    pub fn new(qp: &QParam, re_min: f64, b: &TruncationBudget) -> Result<Self> {
        if !re_min.is_finite() || re_min <= 0.0 {
            return Err(domain(format!("re_min must be positive, got {re_min}")));
        }
        let tail = |k: u64| qp.pow(k as f64 * (1.0 + re_min)) / qp.one_minus_pow(1.0 + re_min);
        let cut = b.cutoff("f_q", 1, tail)?;
        Ok(Self {
            om: 1.0 - qp.q(),
            c_q: qp.c_q(),
            step: qp.step(),
            coeffs: (1..cut).map(|k| 1.0 / qp.one_minus_pow(k as f64)).collect(),
            bound: tail(cut) + (1.0 - qp.q()) * qp.c_q_bound(),
        })
    }

    /// Number of retained series terms.
    pub fn terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Truncation bound valid on the whole half-plane.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// `f_q(z)`; the bound holds for `Re z >= re_min`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let ratio = (-self.step * (z + 1.0)).exp();
        let mut power = ratio;
        let mut sum = Complex64::new(0.0, 0.0);
        for a in &self.coeffs {
            sum += power * *a;
            power *= ratio;
        }
        self.om * (z + self.c_q - sum)
    }
}

/// The symbol `f_q(1+iy)` on the Fourier line.
pub fn fourier_symbol(y: f64, qp: &QParam, b: &TruncationBudget) -> Result<Certified<Complex64>> {
    f_q(HalfPlanePoint::new(1.0, y)?, qp, b)
}

/// Upper bound `1 - q + sum_{k>=1} q^k (1+q^k)` for `Re f_q(1+iy)`; the lower bound is 1.
pub fn re_symbol_upper_bound(qp: &QParam) -> f64 {
    let q = qp.q();
    1.0 - q + q / (1.0 - q) + q * q / (1.0 - q * q)
}

/// Period `2 pi / L` of `f_q(1+iy) - (1-q)(1+iy)` in `y`.
pub fn symbol_period(qp: &QParam) -> f64 {
    2.0 * std::f64::consts::PI / qp.step()
}
