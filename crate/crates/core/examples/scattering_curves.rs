//! Reflection and transmission through a cusp barrier over an energy range,
//! for both signs of the energy.

use dkp_cusp::model::CuspPotential;
use dkp_cusp::scattering::sweep_energy;

fn main() -> dkp_cusp::Result<()> {
    let barrier = CuspPotential::barrier(0.6, 4.0)?;
    for (lo, hi) in [(1.05, 10.0), (-10.0, -1.05)] {
        println!("{:>8} {:>10} {:>10} {:>10}", "E", "R", "T", "|R+T-1|");
        for p in sweep_energy(&barrier, lo, hi, 20)? {
            match p.outcome {
                Ok(r) => println!("{:8.4} {:10.6} {:10.6} {:10.1e}", p.e, r.r, r.t, r.unitarity_defect()),
                Err(e) => println!("{:8.4} failed: {e}", p.e),
            }
        }
        println!();
    }
    Ok(())
}
