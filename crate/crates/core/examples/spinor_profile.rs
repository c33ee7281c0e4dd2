//! The three spinor components across the barrier at one energy, built from
//! the matched incident, reflected and transmitted solutions.

use dkp_cusp::model::{spinor_incident, spinor_reflected, spinor_transmitted, CuspPotential};
use dkp_cusp::scattering::solve_matching;
use dkp_cusp::special::ComplexScalar;

fn main() -> dkp_cusp::Result<()> {
    let barrier = CuspPotential::barrier(0.6, 4.0)?;
    let e = 2.0;
    let m = solve_matching(e, &barrier)?;
    let one = ComplexScalar::new(1.0, 0.0);

    println!("{:>6} {:>10} {:>10} {:>10}", "x", "|psi|", "|phi|", "|theta|");
    for i in -12..=12 {
        let x = 0.25 * i as f64;
        let g = if x < 0.0 {
            let inc = spinor_incident(x, e, &barrier, one)?;
            let refl = spinor_reflected(x, e, &barrier, m.c2_over_c1)?;
            [inc.psi + refl.psi, inc.phi + refl.phi, inc.theta + refl.theta]
        } else {
            spinor_transmitted(x, e, &barrier, m.c3_over_c1)?.components()
        };
        println!("{x:6.2} {:10.5} {:10.5} {:10.5}", g[0].norm(), g[1].norm(), g[2].norm());
    }
    Ok(())
}
