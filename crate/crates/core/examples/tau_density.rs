//! Exact evaluation of the density tau_q, its breakpoints and derivative jumps.

use qharmonic::density::{jump, jump_haar, PiecewiseExpPolyDensity};
use qharmonic::{QParam, TruncationBudget};

fn main() -> qharmonic::Result<()> {
    for q in [0.5, 0.9] {
        let p = QParam::new(q)?;
        let l = p.step();
        let d = PiecewiseExpPolyDensity::for_window(&p, 8.0 * l, &TruncationBudget::default())?;
        println!("q = {q}, L = {l:.6}, decay rate 1 + c_q = {:.6}", d.rate());
        for i in 0..=12 {
            let x = i as f64 * l / 4.0;
            println!("  x = {x:.6}  piece {}  tau_q = {:.15}", d.piece_index(x), d.tau(x)?);
        }
        for n in 1..=4 {
            println!(
                "  at {n}L: left {:.15} right {:.15}  jump of tau_q' {:.6}  (in t = e^-x: {:.6})",
                d.left_limit(n) / (1.0 - q),
                d.right_limit(n) / (1.0 - q),
                jump(n, &p),
                jump_haar(n, &p)
            );
        }
        println!("  nu_q density at t = 0.3: {:.15}", d.nu_haar(0.3)?);
    }
    Ok(())
}
