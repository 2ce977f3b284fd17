//! Orbits of T starting from the moments of delta_q.

use qharmonic::iteration::{fixed_point_m, hankel_determinants, k_distance, orbit_from_delta_q};
use qharmonic::QParam;

fn main() -> qharmonic::Result<()> {
    let n = 40;
    let m = fixed_point_m(n);
    println!("m_1..m_5 = {:?}", &m.moments()[1..=5]);
    println!("Hankel determinants of (m_n): {:?}", hankel_determinants(&m, 4));

    for q in [0.3, 0.5, 0.9] {
        let p = QParam::new(q)?;
        print!("q = {q}:");
        for steps in [0, 1, 2, 5, 10, 20, 30] {
            let a = orbit_from_delta_q(&p, steps, n);
            let d = k_distance(&a.tail(), &m.tail())?;
            print!("  d(T^{steps}) = {:.2e}", d.value);
        }
        println!();
    }
    Ok(())
}
