//! Writes checkpoints during a coupled run, resumes from the first one and
//! compares the two functional series.

use bmhd::harness::{parse_config, resume_run, run_single};

fn main() -> bmhd::Result<()> {
    let root = std::env::temp_dir().join(format!("bmhd-resume-{}", std::process::id()));
    let text = format!(
        r#"{{"grid": {{"n": 32}}, "params": {{"mu": 0.2, "lambda": 4.6, "nu": 0.2}},
            "stepper": {{"dt": 0.01, "t_end": 0.3}},
            "initial_data": {{"family": "random-bandlimited", "seed": 3}},
            "outputs": {{"directory": {:?}, "checkpoint_stride": 10}}}}"#,
        root.join("full")
    );
    let config = parse_config(&text)?;
    let full = run_single(&config)?;
    println!("wrote {} checkpoints", full.checkpoints.len());

    let mut again = config.clone();
    again.outputs.directory = Some(root.join("resumed"));
    let resumed = resume_run(&again, &full.checkpoints[0])?;

    let worst = full
        .series
        .samples
        .iter()
        .zip(&resumed.series.samples)
        .flat_map(|(a, b)| a.values().into_iter().zip(b.values()))
        .map(|(x, y)| (x - y).abs() / x.abs().max(1e-12))
        .fold(0.0, f64::max);
    println!("samples {} vs {}, worst relative difference {worst:.1e}", full.series.len(), resumed.series.len());
    std::fs::remove_dir_all(&root)?;
    Ok(())
}
