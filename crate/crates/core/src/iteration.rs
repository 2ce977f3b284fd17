//! The operator `T(x)_n = 1 / (1 + x_1 + ... + x_n)` on sequences in
//! `[0,1]^N`, its fixed point and the orbit of `delta_q`.
//!
//! Entry `n` of `T(x)` depends only on `x_1..x_n`, so finite prefixes are
//! acted on exactly.

use crate::error::{domain, Error, Result};
use crate::qkernel::QParam;

/// Finite prefix `(x_1, ..., x_N)` of a sequence with entries in `[0,1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceK(Vec<f64>);

impl SequenceK {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(domain("sequence must be nonempty"));
        }
        if let Some(bad) = entries.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(domain(format!("entry {bad} outside [0,1]")));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// Prefix `(a_0 = 1, a_1, ..., a_N)` of a normalized moment sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence(Vec<f64>);

impl MomentSequence {
    /// Checks `a_0 = 1`, entries in `[0,1]` and non-increasing.
    pub fn new(a: Vec<f64>) -> Result<Self> {
        if a.first() != Some(&1.0) {
            return Err(domain("moment sequence must start with a_0 = 1"));
        }
        if a.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(domain("moments must lie in [0,1]"));
        }
        if a.windows(2).any(|w| w[1] > w[0]) {
            return Err(domain("moments of a measure on [0,1] are non-increasing"));
        }
        Ok(Self(a))
    }

    /// Prepends `a_0 = 1` to a sequence viewed in `K`.
    pub fn from_tail(tail: SequenceK) -> Self {
        let mut a = Vec::with_capacity(tail.len() + 1);
        a.push(1.0);
        a.extend(tail.into_inner());
        Self(a)
    }

    /// `(a_1, ..., a_N)` as an element of `K`.
    pub fn tail(&self) -> SequenceK {
        SequenceK(self.0[1..].to_vec())
    }

    pub fn moments(&self) -> &[f64] {
        &self.0
    }

    /// Number of moments after `a_0`.
    pub fn order(&self) -> usize {
        self.0.len() - 1
    }
}

impl std::ops::Index<usize> for MomentSequence {
    type Output = f64;
    fn index(&self, n: usize) -> &f64 {
        &self.0[n]
    }
}

/// `T(x)_n = 1 / (1 + x_1 + ... + x_n)`.
pub fn apply_t(x: &SequenceK) -> SequenceK {
    let mut partial = 1.0;
    let out = x
        .entries()
        .iter()
        .map(|v| {
            partial += v;
            1.0 / partial
        })
        .collect();
    SequenceK(out)
}

/// The fixed point `(m_0 = 1, m_1, ..., m_N)` of `T`.
///
/// `m_{n+1}` is the positive root of `m^2 + S_n m - 1 = 0` with
/// `S_n = 1 + m_1 + ... + m_n = 1/m_n`, taken in the cancellation-free form
/// `2 / (S_n + sqrt(S_n^2 + 4))`.
pub fn fixed_point_m(n: usize) -> MomentSequence {
    let mut m = Vec::with_capacity(n + 1);
    m.push(1.0);
    let mut partial = 1.0f64;
    for _ in 0..n {
        let next = 2.0 / (partial + (partial * partial + 4.0).sqrt());
        partial += next;
        m.push(next);
    }
    MomentSequence(m)
}

/// `max_n |(1 + m_1 + ... + m_n) m_n - 1|` over `n >= 1`.
pub fn fixed_point_residual(m: &MomentSequence) -> f64 {
    let mut partial = 1.0;
    let mut worst: f64 = 0.0;
    for &v in &m.moments()[1..] {
        partial += v;
        worst = worst.max((partial * v - 1.0).abs());
    }
    worst
}

/// Moments `q^n` of `delta_q`.
pub fn delta_q_moments(qp: &QParam, n: usize) -> MomentSequence {
    let mut a = Vec::with_capacity(n + 1);
    let mut p = 1.0;
    for _ in 0..=n {
        a.push(p);
        p *= qp.q();
    }
    MomentSequence(a)
}

/// Moments of the `steps`-th iterate of `T` starting from `delta_q`.
///
/// One step gives the Jackson moments `(1-q)/(1-q^{n+1})`, two steps give
/// the reciprocal q-harmonic numbers.
pub fn orbit_from_delta_q(qp: &QParam, steps: usize, n: usize) -> MomentSequence {
    let mut a = delta_q_moments(qp, n);
    for _ in 0..steps {
        if n == 0 {
            break;
        }
        a = MomentSequence::from_tail(apply_t(&a.tail()));
    }
    a
}

/// Truncated distance `sum_{n<=N} 2^{-n} |x_n - y_n|` with its tail bound `2^{-N}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KDistance {
    pub value: f64,
    pub tail_bound: f64,
}

pub fn k_distance(x: &SequenceK, y: &SequenceK) -> Result<KDistance> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let mut weight = 1.0;
    let mut value = 0.0;
    for (a, b) in x.entries().iter().zip(y.entries()) {
        weight *= 0.5;
        value += weight * (a - b).abs();
    }
    Ok(KDistance {
        value,
        tail_bound: weight,
    })
}

/// Empirical Lipschitz ratio `d(Tx, Ty) / d(x, y)`; `None` when `x = y`.
pub fn lipschitz_ratio(x: &SequenceK, y: &SequenceK) -> Result<Option<f64>> {
    let d = k_distance(x, y)?.value;
    if d == 0.0 {
        return Ok(None);
    }
    Ok(Some(k_distance(&apply_t(x), &apply_t(y))?.value / d))
}

/// First number of steps after which the `delta_q` orbit lies within `tol`
/// of the fixed point, over prefixes of length `n`.
pub fn steps_to_fixed_point(qp: &QParam, n: usize, tol: f64, max_steps: usize) -> Option<usize> {
    let target = fixed_point_m(n).tail();
    let mut a = delta_q_moments(qp, n);
    for s in 0..=max_steps {
        if k_distance(&a.tail(), &target).ok()?.value < tol {
            return Some(s);
        }
        a = MomentSequence::from_tail(apply_t(&a.tail()));
    }
    None
}

/// Hankel determinants `det [a_{i+j}]_{i,j<=k}` for `k = 0..=max_order`,
/// as far as the sequence is long enough. Diagnostic only: deep minors are
/// badly conditioned.
pub fn hankel_determinants(a: &MomentSequence, max_order: usize) -> Vec<f64> {
    let m = a.moments();
    (0..=max_order)
        .take_while(|k| 2 * k < m.len())
        .map(|k| {
            let n = k + 1;
            let mut mat: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m[i + j]).collect()).collect();
            determinant(&mut mat)
        })
        .collect()
}

fn determinant(mat: &mut [Vec<f64>]) -> f64 {
    let n = mat.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| mat[i][col].abs().total_cmp(&mat[j][col].abs()))
            .unwrap();
        if mat[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            mat.swap(pivot, col);
            det = -det;
        }
        det *= mat[col][col];
        for row in col + 1..n {
            let f = mat[row][col] / mat[col][col];
            for k in col..n {
                mat[row][k] -= f * mat[col][k];
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qkernel::q_harmonic;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn seq(v: Vec<f64>) -> SequenceK {
        SequenceK::new(v).unwrap()
    }

    #[test]
    fn t_on_ones_and_zeros() {
        let out = apply_t(&seq(vec![1.0; 6]));
        for (n, v) in out.entries().iter().enumerate() {
            assert_abs_diff_eq!(*v, 1.0 / (n as f64 + 2.0), epsilon = 1e-16);
        }
        assert_eq!(apply_t(&seq(vec![0.0; 4])).entries(), &[1.0; 4]);
    }

    #[test]
    fn t_on_geometric_gives_jackson_moments() {
        let q: f64 = 0.5;
        let x = seq((1..=8).map(|n| q.powi(n)).collect());
        for (i, v) in apply_t(&x).entries().iter().enumerate() {
            let n = i as i32 + 1;
            assert_abs_diff_eq!(*v, (1.0 - q) / (1.0 - q.powi(n + 1)), epsilon = 1e-15);
        }
    }

    #[test]
    fn sequence_validation() {
        assert!(SequenceK::new(vec![]).is_err());
        assert!(SequenceK::new(vec![0.5, 1.5]).is_err());
        assert!(SequenceK::new(vec![f64::NAN]).is_err());
        assert!(MomentSequence::new(vec![0.9, 0.5]).is_err());
        assert!(MomentSequence::new(vec![1.0, 0.5, 0.6]).is_err());
        assert!(MomentSequence::new(vec![1.0, 0.5, 0.25]).is_ok());
    }

    #[test]
    fn fixed_point_closed_forms() {
        let m = fixed_point_m(5);
        let s5 = 5f64.sqrt();
        assert_abs_diff_eq!(m[1], (s5 - 1.0) / 2.0, epsilon = 2e-16);
        assert_abs_diff_eq!(m[2], ((22.0 + 2.0 * s5).sqrt() - s5 - 1.0) / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m[2], 0.477_259_996_474_019_6, epsilon = 1e-15);
        // m_{n+1}^2 + m_{n+1}/m_n - 1 = 0
        for n in 1..5 {
            assert_abs_diff_eq!(m[n + 1] * m[n + 1] + m[n + 1] / m[n] - 1.0, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn fixed_point_is_fixed() {
        let m = fixed_point_m(200);
        let tm = apply_t(&m.tail());
        for (a, b) in tm.entries().iter().zip(m.tail().entries()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-13);
        }
        assert!(fixed_point_residual(&fixed_point_m(10_000)) <= 1e-12);
    }

    #[test]
    fn fixed_point_decreasing() {
        let m = fixed_point_m(1000);
        assert!(m.moments()[1..].iter().all(|v| *v > 0.0 && *v < 1.0));
        assert!(m.moments().windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn fixed_point_hankel_positive() {
        let dets = hankel_determinants(&fixed_point_m(12), 6);
        assert_eq!(dets.len(), 7);
        assert!(dets.iter().all(|d| *d > 0.0), "{dets:?}");
    }

    #[test]
    fn orbit_steps() {
        let p = QParam::new(0.5).unwrap();
        let a0 = orbit_from_delta_q(&p, 0, 4);
        assert_eq!(a0.moments(), &[1.0, 0.5, 0.25, 0.125, 0.0625]);
        let a1 = orbit_from_delta_q(&p, 1, 3);
        for (got, want) in a1.moments().iter().zip([1.0, 2.0 / 3.0, 4.0 / 7.0, 8.0 / 15.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
        let a2 = orbit_from_delta_q(&p, 2, 20);
        assert_abs_diff_eq!(a2[1], 0.6, epsilon = 1e-15);
        for n in 0..=20 {
            assert_abs_diff_eq!(a2[n], 1.0 / q_harmonic(n as u64 + 1, &p), epsilon = 1e-14);
        }
    }

    #[test]
    fn orbit_converges_to_fixed_point() {
        let m = fixed_point_m(10);
        for q in [0.3, 0.5, 0.9] {
            let p = QParam::new(q).unwrap();
            let a = orbit_from_delta_q(&p, 60, 10);
            for n in 1..=10 {
                assert_abs_diff_eq!(a[n], m[n], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn orbit_distance_monotone() {
        let n = 40;
        let m = fixed_point_m(n).tail();
        for q in [0.3, 0.5, 0.9] {
            let p = QParam::new(q).unwrap();
            let mut prev = f64::INFINITY;
            for s in 1..40 {
                let d = k_distance(&orbit_from_delta_q(&p, s, n).tail(), &m).unwrap().value;
                // below ~1e-15 the distance is rounding noise
                assert!(d <= prev || d < 1e-15, "q={q} s={s}");
                prev = d;
            }
        }
    }

    #[test]
    fn distance_basics() {
        let x = seq(vec![0.3; 30]);
        assert_eq!(k_distance(&x, &x).unwrap().value, 0.0);
        let d = k_distance(&seq(vec![1.0; 60]), &seq(vec![0.0; 60])).unwrap();
        assert_abs_diff_eq!(d.value + d.tail_bound, 1.0, epsilon = 1e-16);
        assert!(matches!(
            k_distance(&seq(vec![0.1]), &seq(vec![0.1, 0.2])),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(lipschitz_ratio(&x, &x).unwrap().is_none());
    }

    fn k_point(len: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0..=1.0f64, len)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn image_lies_in_c(x in k_point(50)) {
            let tx = apply_t(&seq(x));
            prop_assert!(tx.entries()[0] >= 0.5);
            prop_assert!(tx.entries().iter().all(|v| *v > 0.0 && *v <= 1.0));
            prop_assert!(tx.entries().iter().all(|v| *v >= 1.0 / 51.0));
        }

        #[test]
        fn non_expansive_on_c(mut x in k_point(50), mut y in k_point(50), x1 in 0.5..=1.0f64, y1 in 0.5..=1.0f64) {
            x[0] = x1;
            y[0] = y1;
            let (x, y) = (seq(x), seq(y));
            if let Some(r) = lipschitz_ratio(&x, &y).unwrap() {
                prop_assert!(r <= 1.0);
            }
        }
    }
}
