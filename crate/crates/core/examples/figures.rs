//! Write the density CSV and SVG figures of (1-q) tau_q on [0, 3L] for
//! q = 0.5 and q = 0.9 into the directory given as the first argument
//! (default: the system temp directory).

use std::path::PathBuf;

use qharmonic::cli::{cmd_density, cmd_figure, Format, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    for q in [0.5, 0.9] {
        let cfg = RunConfig { q, ..RunConfig::default() };
        let svg = dir.join(format!("tau_q{q}.svg"));
        let csv = dir.join(format!("tau_q{q}.csv"));
        std::fs::write(&svg, cmd_figure(&RunConfig { format: Format::Svg, ..cfg.clone() })?)?;
        std::fs::write(&csv, cmd_density(&RunConfig { format: Format::Csv, ..cfg })?)?;
        println!("{}\n{}", svg.display(), csv.display());
    }
    Ok(())
}
