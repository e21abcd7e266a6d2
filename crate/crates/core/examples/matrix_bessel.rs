// Bessel functions of matrix argument: series, Laplace-ball estimate and the uniform bound.

use num_complex::Complex64;
use sonine::bessel::{bessel_bound, bound_check, laplace_ball_mc, BesselSeries, TruncationControl};
use sonine::cone::{ConeStructure, Field};
use sonine::jordan::ConeElement;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cone = ConeStructure::real(2);
    let ctl = TruncationControl::default();
    let mu = 2.5;
    let series = BesselSeries::real(mu, &cone, ctl)?;
    let x = ConeElement::diag(Field::Real, &[0.4, 1.1]);
    let v = series.eval(&x)?;
    println!("J_{mu}(diag(0.4, 1.1)) = {:.12} (through degree {})", v.re, v.degree);

    // The ball integral gives J_mu(y^2), so pass the square root of x.
    let ball = laplace_ball_mc(Complex64::new(mu, 0.0), &x.sqrt_psd()?, &cone, 20_000, 3)?;
    println!("ball estimate: {:.4} +/- {:.4} (acceptance {:.2})", ball.re, ball.std_error, ball.acceptance_rate());

    let rep = bound_check(cone.mu0() + 0.5, &cone, 500, (0.0, 30.0), 1e-9, ctl, 11)?;
    println!("max |J| over 500 points = {:.4}, bound = {:.4}", rep.max_abs, bessel_bound(cone.q));
    rep.check(1e-9)?;
    Ok(())
}
