//! Reconstruct tau_q from the symbol f_q(1+iy) and compare with the exact pieces.

use qharmonic::density::PiecewiseExpPolyDensity;
use qharmonic::verify::FourierInversion;
use qharmonic::{QParam, TruncationBudget};

fn main() -> qharmonic::Result<()> {
    let b = TruncationBudget::default();
    let p = QParam::new(0.5)?;
    let l = p.step();
    let d = PiecewiseExpPolyDensity::for_window(&p, 3.0 * l, &b)?;
    for y_max in [1e2, 1e3, 1e4] {
        let fi = FourierInversion::new(&p, y_max, 3.0 * l, &b)?;
        let mut worst: f64 = 0.0;
        for i in 0..20 {
            let x = (i as f64 + 0.37) * 3.0 * l / 20.0;
            worst = worst.max((fi.at(x)?.value - d.tau(x)?).abs());
        }
        let tail = fi.at(l / 2.0)?.tail_bound;
        println!("y_max = {y_max:>7}: max error {worst:.2e} over 20 points (tail estimate {tail:.1e})");
    }
    // at a breakpoint the truncated integral converges slowly, and says so
    let r = FourierInversion::new(&p, 1e3, 3.0 * l, &b)?.at(l)?;
    println!("x = L: {:.6} vs {:.6}, warnings {:?}", r.value, d.tau(l)?, r.warnings);
    Ok(())
}
