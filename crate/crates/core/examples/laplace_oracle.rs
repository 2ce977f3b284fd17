//! Laplace moments of tau_q by quadrature against 1 / H_{n+1}^(q).

use qharmonic::density::PiecewiseExpPolyDensity;
use qharmonic::qkernel::q_harmonic;
use qharmonic::verify::{default_laplace_window, LaplaceQuadrature};
use qharmonic::{QParam, TruncationBudget};

fn main() -> qharmonic::Result<()> {
    for q in [0.3, 0.5, 0.9] {
        let p = QParam::new(q)?;
        let window = default_laplace_window(&p);
        let d = PiecewiseExpPolyDensity::for_window(&p, window, &TruncationBudget::default())?;
        let lq = LaplaceQuadrature::new(&d, window)?;
        println!("q = {q}: window [0, {:.3}] in {} pieces", lq.x_max(), lq.transform(0.0).pieces_used);
        for n in [0u64, 1, 2, 5, 10] {
            let r = lq.transform(n as f64);
            let want = 1.0 / q_harmonic(n + 1, &p);
            println!(
                "  n = {n:>2}: {:.15}  1/H = {want:.15}  diff {:.1e}  est. err {:.1e}",
                r.value,
                (r.value - want).abs(),
                r.total_error()
            );
        }
    }
    Ok(())
}
