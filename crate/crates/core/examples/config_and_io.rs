//! Config round trip, a simulation written as CSV and JSON, and the files read back.

use discrete_ep::cli_io::{load_config, read_trajectory, save_config, write_trajectory, Method, OutputFormat, SimulationConfig};
use discrete_ep::integrators::run_trajectory;

fn main() -> discrete_ep::Result<()> {
    let dir = std::env::temp_dir().join(format!("discrete-ep-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;

    let mut cfg = SimulationConfig::new(vec![1.0, 2.0, 3.0], 0.05, 200, Method::DepMv);
    cfg.seed = 42;
    let cfg_path = dir.join("config.json");
    save_config(&cfg, &cfg_path)?;
    let loaded = load_config(&cfg_path)?;
    println!("config round trip exact: {}", loaded == cfg);

    let traj = run_trajectory(&loaded)?;
    for (name, format) in [("traj.csv", OutputFormat::Csv), ("traj.json", OutputFormat::Json)] {
        let path = dir.join(name);
        write_trajectory(&traj, &path, format)?;
        let back = read_trajectory(&path)?;
        println!(
            "{name}: {} bytes, identical after reading back: {}",
            std::fs::metadata(&path)?.len(),
            back == traj
        );
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
