//! The lowest bound level of a cusp well followed as the well deepens, up to
//! the depth where it meets the antiparticle branch.

use dkp_cusp::bound_states::{find_bound_states, trace_spectrum};
use dkp_cusp::model::CuspPotential;

fn main() -> dkp_cusp::Result<()> {
    for v0 in [0.5, 1.0, 2.0, 3.0, 3.6] {
        let states = find_bound_states(&CuspPotential::well(0.5, v0)?, 2000)?;
        let energies: Vec<String> = states.iter().map(|s| format!("{:.6}", s.e)).collect();
        println!("V0 = {v0:4.1}: E = [{}]", energies.join(", "));
    }

    let trace = trace_spectrum(0.5, 0.1, 3.7, 200)?;
    println!("\n{} points on the curve", trace.points.len());
    for p in trace.points.iter().step_by(25) {
        println!("  V0 = {:8.5}  E = {:9.6}", p.v0, p.e);
    }
    match trace.turning_point {
        Some(tp) => println!(
            "turning point: V0 = {:.6}, E = {:.6} ({} roots merge, confident: {})",
            tp.v0, tp.e, tp.root_count_change, tp.confident
        ),
        None => println!("no turning point in range"),
    }
    Ok(())
}
