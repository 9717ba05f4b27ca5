//! A user-defined problem loaded from JSON, driven through the same config
//! layer as the command-line tool.

use rsfade::harness::{profile, ConfigLayer, RunConfig};

fn main() -> rsfade::Result<()> {
    let dir = std::env::temp_dir().join("rsfade-custom");
    std::fs::create_dir_all(&dir)?;
    // ψ(x) = x (2 - x)² = 4x - 4x² + x³ on [0, 2]
    let problem_path = dir.join("bump.json");
    std::fs::write(&problem_path, r#"{"length": 2.0, "k_alpha": 0.5, "k_beta": 1.0, "psi": [0, 4, -4, 1]}"#)?;

    let config = RunConfig::resolve(ConfigLayer::from_json(&format!(
        r#"{{"problem": "file:{}", "alpha": 0.6, "beta": 1.4, "m": "1/40", "T": 2.0, "times": [0.5, 1.0, 2.0]}}"#,
        problem_path.display()
    ))?)?;
    let (alpha, beta) = config.parameter_points()[0];
    let problem = config.problem.build(alpha, beta)?;
    let grid = config.grid(config.m)?;
    let prof = profile(&problem, &grid, &config.times, &config.solver)?;
    println!("m = {}, N = {}", grid.m(), grid.n_steps());
    for (t, peak) in prof.times.iter().zip(prof.peaks()) {
        println!("t = {t:<4} max u = {peak:.6}");
    }
    Ok(())
}
