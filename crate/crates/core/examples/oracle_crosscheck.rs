//! Closed-form results checked against direct integration of the
//! second-order equation.

use dkp_cusp::bound_states::find_bound_states;
use dkp_cusp::model::CuspPotential;
use dkp_cusp::oracle::{oracle_bound_energies, oracle_rt, OdeProblem, DEFAULT_TOL};
use dkp_cusp::scattering::reflection_transmission;

fn main() -> dkp_cusp::Result<()> {
    let barrier = CuspPotential::barrier(0.6, 4.0)?;
    println!("{:>6} {:>12} {:>12} {:>10}", "E", "T closed", "T ODE", "|diff|");
    for e in [1.2, 1.5, 2.0, 3.0, 5.0, 8.0] {
        let closed = reflection_transmission(e, &barrier)?;
        let ode = oracle_rt(&OdeProblem::new(barrier, e)?)?;
        println!("{e:6.2} {:12.9} {:12.9} {:10.1e}", closed.t, ode.t, (closed.t - ode.t).abs());
    }

    println!();
    for v0 in [1.0, 2.5, 3.6] {
        let well = CuspPotential::well(0.5, v0)?;
        let closed = find_bound_states(&well, 2000)?;
        let ode = oracle_bound_energies(&well, DEFAULT_TOL)?;
        println!("V0 = {v0}");
        for s in &closed {
            println!("  closed form  E = {:.10}", s.e);
        }
        for s in &ode {
            println!("  shooting     E = {:.10} ({:?})", s.e, s.parity);
        }
    }
    Ok(())
}
