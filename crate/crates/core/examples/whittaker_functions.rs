//! Kummer and Whittaker functions along the imaginary axis, the argument
//! range that barrier scattering needs.

use dkp_cusp::special::{kummer_m, whittaker_m, whittaker_w, ComplexScalar, WhittakerParams};

fn main() -> dkp_cusp::Result<()> {
    // a = 0.6, E = 2
    let kappa = ComplexScalar::new(0.0, 1.2);
    let mu = ComplexScalar::new(0.0, 0.6 * 3f64.sqrt());

    println!("{:>6} {:>26} {:>26} {:>9}", "Im z", "M(kappa, mu, z)", "W(kappa, mu, z)", "est err");
    for i in 1..=8 {
        let z = ComplexScalar::new(0.0, 0.6 * i as f64);
        let p = WhittakerParams::new(kappa, mu, z)?;
        let m = whittaker_m(&p)?;
        let w = whittaker_w(&p)?;
        println!(
            "{:6.2} {:>26} {:>26} {:9.1e}",
            z.im,
            format!("{:.6}", m.value),
            format!("{:.6}", w.value),
            m.est_error.max(w.est_error)
        );
    }

    let a = ComplexScalar::new(0.5, -0.16);
    let b = ComplexScalar::new(1.0, 2.08);
    let z = ComplexScalar::new(0.0, 9.6);
    let direct = kummer_m(a, b, z)?;
    let flipped = z.exp() * kummer_m(b - a, b, -z)?.value;
    println!("\nM(a, b, z)             = {:.15}", direct.value);
    println!("e^z M(b - a, b, -z)    = {flipped:.15}");
    println!("terms used             = {}", direct.terms_used);
    Ok(())
}
