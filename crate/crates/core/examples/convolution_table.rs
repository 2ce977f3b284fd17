//! Convolution powers of mu on the lattice, against brute-force enumeration.

use qharmonic::density::{build_mu, ConvPowerTable};
use qharmonic::verify::compositions_bruteforce;
use qharmonic::{QParam, TruncationBudget};

fn main() -> qharmonic::Result<()> {
    let p = QParam::new(0.5)?;
    let mu = build_mu(&p, &TruncationBudget::default())?;
    let mass = mu.total_mass();
    println!("mu keeps {} atoms, mass {:.16} (+- {:.1e})", mu.weights().len(), mass.value, mass.bound);
    println!("c_q - q/(1-q) = {:.16}", p.c_q() - p.q() / (1.0 - p.q()));

    let table = ConvPowerTable::new(&mu, 10);
    for j in 1..=6 {
        let row: Vec<String> = (1..=j).map(|k| format!("{:.6e}", table.get(k, j))).collect();
        println!("j = {j}: {}", row.join(" "));
    }
    let mut worst: f64 = 0.0;
    for j in 1..=10 {
        for k in 1..=j {
            let brute = compositions_bruteforce(k, j, &p)?;
            worst = worst.max(((table.get(k, j) - brute) / brute).abs());
        }
    }
    println!("largest relative difference to enumeration for j <= 10: {worst:.2e}");
    Ok(())
}
