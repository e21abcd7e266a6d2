// Symmetric cone elements: spectra, square roots and the quadratic representation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sonine::cone::{ConeStructure, Field};
use sonine::jordan::{random_with_spectrum, ConeElement};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cone = ConeStructure::complex(3);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let x = random_with_spectrum(&cone, &[0.5, 1.5, 4.0], &mut rng);
    let y = random_with_spectrum(&cone, &[1.0, 2.0, 3.0], &mut rng);
    println!("spectrum of x: {:?}", x.eigenvalues());
    println!("tr x = {:.6}, det x = {:.6}", x.trace(), x.det());

    let root = x.sqrt_psd()?;
    let back = root.quad_rep(&ConeElement::identity(Field::Complex, 3));
    println!("P(sqrt x) e recovers x: max spectral gap = {:.2e}",
        back.eigenvalues().iter().zip(x.eigenvalues()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));

    // det P(x) y = det(x)^2 det(y)
    let p = x.quad_rep(&y);
    println!("det P(x)y = {:.6}, det(x)^2 det(y) = {:.6}", p.det(), x.det().powi(2) * y.det());
    println!("P(x)y in the closed cone: {}, inside 0 < x < e: {}", p.in_closed_cone(), p.in_omega_e());
    Ok(())
}
