// Cone constants, the gamma function of the cone and the Wallach set.

use num_complex::Complex64;
use sonine::cone::{beta_cone, gamma_cone, wallach_contains_exact, ConeStructure};
use sonine::rational::parse_q;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for cone in [ConeStructure::real(2), ConeStructure::complex(2), ConeStructure::real(3)] {
        let g = gamma_cone(Complex64::new(3.0, 0.0), &cone)?;
        let b = beta_cone(Complex64::new(3.0, 0.0), Complex64::new(2.5, 0.0), &cone)?;
        println!("{cone}: mu0 = {}, alpha = {}, Gamma(3) = {:.10}, B(3, 5/2) = {:.3e}", cone.mu0_exact(), cone.alpha_exact(), g.re, b.re);
        let lattice: Vec<String> = cone.wallach_lattice().iter().map(|v| v.to_string()).collect();
        println!("  discrete Wallach points: {}", lattice.join(", "));
        for nu in ["1/4", "1/2", "3/4"] {
            let v = parse_q(nu)?;
            println!("  nu = {nu}: in Wallach set = {}", wallach_contains_exact(&v, &cone));
        }
    }
    Ok(())
}
