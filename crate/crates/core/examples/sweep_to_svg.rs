//! Sweep a model grid, write it as CSV, read it back and plot it.
//!
//! cargo run --release --example sweep_to_svg -- [out_dir]

use std::path::PathBuf;

use qpt_geom::svg::render_svg;
use qpt_geom::sweep::{parse_range, parse_sizes, run_sweep, SweepModel, SweepSpec, Table};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));

    let mut spec = SweepSpec::new(SweepModel::Xy);
    spec.lambda = parse_range("0.5:1.5:201")?;
    spec.sizes = parse_sizes("21,101,501,inf")?;
    let table = run_sweep(&spec)?;

    let csv = dir.join("xy_sweep.csv");
    std::fs::write(&csv, table.to_csv_string())?;
    let back = Table::read_csv(std::fs::File::open(&csv)?)?;
    assert_eq!(back.to_csv_string(), table.to_csv_string());

    let svg = dir.join("xy_sweep.svg");
    std::fs::write(&svg, render_svg(&back, Some("dbeta_dlambda"))?)?;
    println!("{} rows -> {} and {}", table.rows.len(), csv.display(), svg.display());
    Ok(())
}
