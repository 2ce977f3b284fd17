//! q-analogues of the classical special functions at a few values of q.

use qharmonic::qkernel::{c_q, gamma_q, psi_q, q_harmonic, CqMethod, EULER_GAMMA};
use qharmonic::{QParam, TruncationBudget};

fn main() -> qharmonic::Result<()> {
    let b = TruncationBudget::default();
    println!("{:>6} {:>22} {:>22} {:>22}", "q", "c_q (Lambert)", "c_q (divisors)", "c_q (Pochhammer)");
    for q in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let p = QParam::new(q)?;
        let [a, d, poch] = [CqMethod::Lambert, CqMethod::Divisor, CqMethod::Pochhammer]
            .map(|m| c_q(&p, &b, m).map(|c| c.value));
        println!("{q:>6} {:>22.16} {:>22.16} {:>22.16}", a?, d?, poch?);
    }

    let p = QParam::new(0.5)?;
    println!("\nq = 0.5, L = log 2");
    println!("gamma_q = {:.16}  (Euler's constant is {EULER_GAMMA:.16})", p.gamma_q());
    for z in [0.5, 1.0, 2.0, 3.5] {
        let g = gamma_q(z, &p, &b)?;
        let psi = psi_q(z, &p, &b)?;
        println!(
            "z = {z:<4} Gamma_q = {:.16} (+- {:.1e})  psi_q = {:+.16} (+- {:.1e})",
            g.value, g.bound, psi.value, psi.bound
        );
    }
    for n in [1, 2, 5, 10] {
        println!("H_{n}^(q) = {:.16}", q_harmonic(n, &p));
    }
    Ok(())
}
