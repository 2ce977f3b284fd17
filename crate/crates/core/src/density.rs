//! Exact piecewise evaluation of the density `tau_q` of the probability
//! measure on `[0, inf)` with Laplace transform `1 / f_q(z+1)`.
//!
//! With `L = log(1/q)`, `c = 1 + c_q` and the atomic measure
//! `mu = sum_{k>=1} q^{2k}/(1-q^k) delta_{kL}`, the scaled density is
//!
//! ```text
//! (1-q) tau_q(x) = sum_{n>=0} rho^{*(n+1)} * mu^{*n}(x),   rho(x) = e^{-cx} Y(x)
//!                = sum_{j=0}^{floor(x/L)} e^{-c(x-jL)} sum_{k=0}^{j} (x-jL)^k/k! mu^{*k}({jL})
//! ```
//!
//! Only finitely many terms are nonzero for any `x`, so no series
//! truncation is involved once the convolution-power table is deep enough.
//! Each summand is formed as `e^{-c(x-jL)}` times a polynomial, which keeps
//! the exponential factor at most 1 (the grouping `e^{-cx} q^{-jc}` overflows).

use crate::error::{domain, Error, Result};
use crate::qkernel::{Certified, QParam, TruncationBudget};

/// Weight `q^{2k}/(1-q^k)` of the atom of `mu` at `kL`.
pub fn atom_weight(qp: &QParam, k: usize) -> f64 {
    qp.pow(2.0 * k as f64) / qp.one_minus_pow(k as f64)
}

/// The discrete measure `mu` on the lattice `L, 2L, ...`.
#[derive(Debug, Clone)]
pub struct AtomicMeasure {
    qp: QParam,
    weights: Vec<f64>,
    tail_bound: f64,
}

impl AtomicMeasure {
    pub fn lattice_step(&self) -> f64 {
        self.qp.step()
    }

    /// Retained weights `w_1..w_K`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weight of the atom at `kL` for any `k >= 1`, retained or not.
    pub fn weight(&self, k: usize) -> f64 {
        match k {
            0 => 0.0,
            k if k <= self.weights.len() => self.weights[k - 1],
            k => atom_weight(&self.qp, k),
        }
    }

    /// `(location, weight)` of the retained atoms.
    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let l = self.lattice_step();
        self.weights
            .iter()
            .enumerate()
            .map(move |(i, w)| ((i + 1) as f64 * l, *w))
    }

    /// Mass of the retained atoms and a bound on the dropped mass.
    pub fn total_mass(&self) -> Certified<f64> {
        Certified::new(self.weights.iter().sum(), self.tail_bound)
    }

    pub fn qparam(&self) -> &QParam {
        &self.qp
    }
}

/// Builds `mu`, keeping atoms until the dropped mass is below `b.tol`.
pub fn build_mu(qp: &QParam, b: &TruncationBudget) -> Result<AtomicMeasure> {
    let q = qp.q();
    // sum_{k>K} q^{2k}/(1-q^k) <= q^{2(K+1)} / ((1-q)(1-q^2))
    let tail = |k: u64| qp.pow(2.0 * (k + 1) as f64) / ((1.0 - q) * qp.one_minus_pow(2.0));
    let count = b.cutoff("atoms of mu", 1, tail)? as usize;
    Ok(AtomicMeasure {
        qp: *qp,
        weights: (1..=count).map(|k| atom_weight(qp, k)).collect(),
        tail_bound: tail(count as u64),
    })
}

/// Masses `M[k][j] = mu^{*k}({jL})` for `0 <= k <= j <= depth`.
///
/// Stored as `M[k][j] / k!`, which stays representable where `M[k][j]`
/// itself overflows (`M[k][k] = (q^2/(1-q))^k`).
#[derive(Debug, Clone)]
pub struct ConvPowerTable {
    weights: Vec<f64>,
    // columns[j][k] = M[k][j] / k!
    columns: Vec<Vec<f64>>,
}

impl ConvPowerTable {
    pub fn new(mu: &AtomicMeasure, depth: usize) -> Self {
        let mut table = Self {
            weights: (1..=depth.max(1)).map(|p| mu.weight(p)).collect(),
            columns: vec![vec![1.0]],
        };
        table.grow(depth);
        table
    }

    /// Extends the table to `depth`, reusing the columns already built.
    pub fn extend_to(&mut self, mu: &AtomicMeasure, depth: usize) {
        while self.weights.len() < depth {
            self.weights.push(mu.weight(self.weights.len() + 1));
        }
        self.grow(depth);
    }

    fn grow(&mut self, depth: usize) {
        // M[k][j] = sum_{p=1}^{j-k+1} w_p M[k-1][j-p]
        for j in self.columns.len()..=depth {
            let mut col = vec![0.0; j + 1];
            for (k, slot) in col.iter_mut().enumerate().skip(1) {
                let mut s = 0.0;
                for p in 1..=j + 1 - k {
                    s += self.weights[p - 1] * self.columns[j - p][k - 1];
                }
                *slot = s / k as f64;
            }
            self.columns.push(col);
        }
    }

    /// Largest lattice index `j` covered.
    pub fn depth(&self) -> usize {
        self.columns.len() - 1
    }

    /// `mu^{*k}({jL})`; zero for `k > j`.
    ///
    /// # Panics
    /// If `j` exceeds the table depth.
    pub fn get(&self, k: usize, j: usize) -> f64 {
        let s = self.scaled(k, j);
        if s == 0.0 {
            return 0.0;
        }
        (1..=k).fold(s, |acc, i| acc * i as f64)
    }

    /// `mu^{*k}({jL}) / k!`.
    pub fn scaled(&self, k: usize, j: usize) -> f64 {
        self.columns[j].get(k).copied().unwrap_or(0.0)
    }

    /// `M[k][j]/k!` for `k = 0..=j`, the coefficients of the polynomial
    /// attached to lattice point `j`.
    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }
}

/// `(1-q) tau_q` as a sum of exponential-polynomial pieces on `[nL, (n+1)L)`.
#[derive(Debug, Clone)]
pub struct PiecewiseExpPolyDensity {
    qp: QParam,
    mu: AtomicMeasure,
    table: ConvPowerTable,
}

impl PiecewiseExpPolyDensity {
    pub fn new(qp: &QParam, mu: AtomicMeasure, table: ConvPowerTable) -> Self {
        Self { qp: *qp, mu, table }
    }

    /// Density with a table deep enough for `x <= x_max`
    /// (depth `ceil(x_max / L) + 1`).
    pub fn for_window(qp: &QParam, x_max: f64, b: &TruncationBudget) -> Result<Self> {
        let mu = build_mu(qp, b)?;
        let table = ConvPowerTable::new(&mu, depth_for(qp, x_max)?);
        Ok(Self::new(qp, mu, table))
    }

    /// Grows the table so that `x <= x_max` can be evaluated.
    pub fn ensure_window(&mut self, x_max: f64) -> Result<()> {
        let depth = depth_for(&self.qp, x_max)?;
        self.table.extend_to(&self.mu, depth);
        Ok(())
    }

    pub fn qparam(&self) -> &QParam {
        &self.qp
    }

    pub fn table(&self) -> &ConvPowerTable {
        &self.table
    }

    pub fn measure(&self) -> &AtomicMeasure {
        &self.mu
    }

    /// Exponential rate `1 + c_q`.
    pub fn rate(&self) -> f64 {
        self.qp.rate()
    }

    /// Exclusive upper end of the evaluation window, `(depth+1) L`.
    pub fn window_end(&self) -> f64 {
        (self.table.depth() + 1) as f64 * self.qp.step()
    }

    /// Index `n` of the piece `[nL, (n+1)L)` owning `x`, consistent with
    /// breakpoints computed as `n * L`.
    pub fn piece_index(&self, x: f64) -> usize {
        let l = self.qp.step();
        let mut n = (x / l).floor().max(0.0) as usize;
        if n > 0 && n as f64 * l > x {
            n -= 1;
        } else if (n + 1) as f64 * l <= x {
            n += 1;
        }
        n
    }

    fn check(&self, x: f64) -> Result<usize> {
        if !x.is_finite() || x < 0.0 {
            return Err(domain(format!("density argument must be finite and >= 0, got {x}")));
        }
        let n = self.piece_index(x);
        if n > self.table.depth() {
            return Err(Error::OutOfTable {
                x,
                needed: n,
                depth: self.table.depth(),
            });
        }
        Ok(n)
    }

    /// Closed form of piece `n` evaluated at `x` (also outside the piece,
    /// which gives one-sided limits at breakpoints).
    ///
    /// # Panics
    /// If `n` exceeds the table depth.
    pub fn eval_piece(&self, n: usize, x: f64) -> f64 {
        let l = self.qp.step();
        let c = self.rate();
        (0..=n)
            .map(|j| {
                let u = (x - j as f64 * l).max(0.0);
                let coeffs = self.table.column(j);
                let poly = coeffs.iter().rev().fold(0.0, |acc, a| acc * u + a);
                (-c * u).exp() * poly
            })
            .sum()
    }

    /// `(1-q) tau_q(x)`.
    pub fn scaled(&self, x: f64) -> Result<f64> {
        let n = self.check(x)?;
        Ok(self.eval_piece(n, x))
    }

    /// `tau_q(x)`.
    pub fn tau(&self, x: f64) -> Result<f64> {
        Ok(self.scaled(x)? / (1.0 - self.qp.q()))
    }

    /// Left limit `(1-q) tau_q(nL^-)` for `n >= 1`.
    pub fn left_limit(&self, n: usize) -> f64 {
        self.eval_piece(n - 1, n as f64 * self.qp.step())
    }

    /// Value `(1-q) tau_q(nL)` from the piece owning the breakpoint.
    pub fn right_limit(&self, n: usize) -> f64 {
        self.eval_piece(n, n as f64 * self.qp.step())
    }

    /// The order-`k` term `rho^{*(k+1)} * mu^{*k}(x)` of the convolution series.
    pub fn series_term(&self, k: usize, x: f64) -> Result<f64> {
        let n = self.check(x)?;
        let l = self.qp.step();
        let c = self.rate();
        Ok((k..=n)
            .map(|j| {
                let u = (x - j as f64 * l).max(0.0);
                (-c * u).exp() * u.powi(k as i32) * self.table.scaled(k, j)
            })
            .sum())
    }

    /// `(1-q) tau_q(x)` with the convolution series cut after order `max_order`.
    pub fn scaled_truncated(&self, x: f64, max_order: usize) -> Result<f64> {
        (0..=max_order.min(self.check(x)?))
            .map(|k| self.series_term(k, x))
            .sum()
    }

    /// Density of `nu_q` with respect to `dt/t`, `tau_q(log(1/t))`.
    pub fn nu_haar(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(domain(format!("nu_q density needs t in (0,1], got {t}")));
        }
        self.tau(-t.ln())
    }
}

fn depth_for(qp: &QParam, x_max: f64) -> Result<usize> {
    if !x_max.is_finite() || x_max < 0.0 {
        return Err(domain(format!("window end must be finite and >= 0, got {x_max}")));
    }
    Ok((x_max / qp.step()).ceil() as usize + 1)
}

/// `tau_q(x)` from a prebuilt table.
pub fn tau_density(x: f64, qp: &QParam, table: &ConvPowerTable) -> Result<f64> {
    let mu = build_mu(qp, &TruncationBudget::default())?;
    PiecewiseExpPolyDensity::new(qp, mu, table.clone()).tau(x)
}

/// Density of `nu_q` with respect to `dt/t` from a prebuilt table.
pub fn nu_density_haar(t: f64, qp: &QParam, table: &ConvPowerTable) -> Result<f64> {
    let mu = build_mu(qp, &TruncationBudget::default())?;
    PiecewiseExpPolyDensity::new(qp, mu, table.clone()).nu_haar(t)
}

/// Jump `tau_q'(nL^+) - tau_q'(nL^-) = q^{2n} / ((1-q^n)(1-q))`.
pub fn jump(n: usize, qp: &QParam) -> f64 {
    qp.pow(2.0 * n as f64) / (qp.one_minus_pow(n as f64) * (1.0 - qp.q()))
}

/// Jump of the derivative of the `dt/t`-density of `nu_q` at `t = q^n`,
/// `q^n / ((1-q^n)(1-q))`.
///
/// Through `t = e^{-x}` a right derivative in `x` is a left derivative in
/// `t`, and `d/dt = -(1/t) d/dx`, so this is `jump(n) / q^n`.
pub fn jump_haar(n: usize, qp: &QParam) -> f64 {
    qp.pow(n as f64) / (qp.one_minus_pow(n as f64) * (1.0 - qp.q()))
}
