//! Transmission resonances as the barrier grows, for two barrier widths.

use dkp_cusp::scattering::scan_resonances_vs_strength;

fn main() -> dkp_cusp::Result<()> {
    for (a, v_max) in [(2.0 / 3.0, 20.0), (1.0 / 3.0, 30.0)] {
        let scan = scan_resonances_vs_strength(a, 2.0, 1.0, v_max, 2000)?;
        println!("a = {a:.4}, E = 2");
        for p in scan.ensure_peaks()? {
            println!("  peak at V0 = {:8.4}  T = {:.6}", p.param, p.t);
        }
        let spacings: Vec<String> = scan.spacings.iter().map(|d| format!("{d:.3}")).collect();
        println!("  spacings: {}", spacings.join(", "));
        if let Some(d) = scan.asymptotic_spacing() {
            println!("  last spacing: {d:.3}");
        }
    }
    Ok(())
}
