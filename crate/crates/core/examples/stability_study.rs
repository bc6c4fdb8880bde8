//! The full estimator stability study on a smaller grid, printed as a table
//! instead of written to CSV. `rb-experiment` runs the same study with all
//! options exposed.

use rb_stable::experiment::{format_efficiency_table, run_experiment, ExperimentConfig};

fn main() {
    let config = ExperimentConfig {
        grid_n: 50,
        ..Default::default()
    };
    let report = match run_experiment(&config) {
        Ok(r) => r,
        Err(failure) => {
            eprintln!("study failed after {} rows: {}", failure.rows.len(), failure.error);
            std::process::exit(1);
        }
    };
    println!("{:>3} {:>11} {:>11} {:>11}", "N", "est_stable", "est_trad", "err");
    for row in &report.rows {
        println!(
            "{:>3} {:>11.3e} {:>11.3e} {:>11.3e}",
            row.n, row.est_stable, row.est_trad, row.err
        );
    }
    println!();
    println!("{}", format_efficiency_table(&report.efficiencies));
}
