//! The Bernstein function f_q on the real axis and on the line Re z = 1.

use num_complex::Complex64;
use qharmonic::qkernel::q_harmonic;
use qharmonic::transforms::{f_q, f_q_real, f_q_via_psi, h_q_laplace, mellin_nu_q, HalfPlanePoint};
use qharmonic::{QParam, TruncationBudget};

fn main() -> qharmonic::Result<()> {
    let b = TruncationBudget::default();
    let p = QParam::new(0.5)?;

    // at positive integers f_q(n) = H_n^(q)
    for n in 1..=5u64 {
        let f = f_q_real(n as f64, &p, &b)?;
        let via_psi = f_q_via_psi(n as f64, &p, &b)?;
        println!(
            "f_q({n}) = {:.16}  via psi_q {:.16}  H_{n}^(q) = {:.16}",
            f.value,
            via_psi.value,
            q_harmonic(n, &p)
        );
    }

    println!();
    for y in [0.0, 1.0, 10.0, 1e4] {
        let f = f_q(HalfPlanePoint::new(1.0, y)?, &p, &b)?.value;
        let m = mellin_nu_q(Complex64::new(0.0, y), &p, &b)?.value;
        println!("y = {y:<7} f_q(1+iy) = {f:.10}  Mellin nu_q(iy) = {m:.10}");
    }

    println!();
    for z in [1.0, 2.0, 3.0] {
        let lhs = f_q_real(z, &p, &b)?.value / z - (1.0 - p.q());
        let rhs = h_q_laplace(z, &p, &b)?;
        println!("z = {z}: f_q(z)/z - (1-q) = {lhs:.16}, Laplace of h_q = {:.16}", rhs.value);
    }
    Ok(())
}
