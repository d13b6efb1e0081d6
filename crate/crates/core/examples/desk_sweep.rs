//! Runs the desk-scale sweep (64×64 modified phantom, 5×5 circular blur,
//! σ = 0.01, 30 iterations per cell) and prints the best cell per strategy.
//!
//! `cargo run --release -p sik-core --example desk_sweep`

use sik_core::harness::{iterations_to_within, mae, run_sweep, RestorationSetup, SweepGrid};
use sik_core::simulation::{DegradationSpec, PhantomVariant};
use sik_core::solvers::Strategy;

fn main() -> sik_core::Result<()> {
    let spec = DegradationSpec {
        seed: 2021,
        ..DegradationSpec::default()
    };
    let (truth, setup) = RestorationSetup::phantom(64, PhantomVariant::Modified, &spec, 2)?;
    println!("degraded mae {:.5}", mae(&setup.degraded, &truth)?);

    let result = run_sweep(&setup.problem, &SweepGrid::desk(), &truth)?;
    println!("{} cells, L = {:.4}", result.cells.len(), result.metadata.lipschitz);
    for s in Strategy::ALL {
        let Some(best) = result.best(s) else {
            println!("{s}: every cell diverged");
            continue;
        };
        let axis = |name: &str, v: Option<f64>| v.map(|v| format!(" {name}={v:e}")).unwrap_or_default();
        println!(
            "{s}: mae {:.5} at beta={:e}{}{}, within 5% of final cost after {} iterations",
            best.final_mae,
            best.key.beta,
            axis("gamma", best.key.gamma),
            axis("delta", best.key.delta),
            iterations_to_within(&best.trace, 0.05).unwrap_or(0),
        );
    }
    Ok(())
}
