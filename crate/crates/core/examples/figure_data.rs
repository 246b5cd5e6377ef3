//! Writes the datasets of all eight figures as CSV into a directory
//! (default `figures/`).

use ergm_phase::figures::{figure, CouplingChoice};
use ergm_phase::{ModelSpec, ToleranceConfig};

fn main() -> ergm_phase::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "figures".into());
    std::fs::create_dir_all(&dir)?;
    let spec = ModelSpec::new(3, 5)?;
    let tol = ToleranceConfig::default();
    for id in 1..=8 {
        let data = figure(id, &spec, 201, CouplingChoice::Computed, &tol)?;
        let path = format!("{dir}/figure-{id}.csv");
        std::fs::write(&path, data.table.to_csv())?;
        match data.beta {
            Some(b) => println!("{path}: {} rows at beta = ({b})", data.table.rows.len()),
            None => println!("{path}: {} rows", data.table.rows.len()),
        }
    }
    Ok(())
}
