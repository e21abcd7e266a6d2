// The Sonine integral: rank one by quadrature, on a cone by Monte Carlo, and
// exactly on polynomial truncations.

use sonine::bessel::TruncationControl;
use sonine::cone::{ConeStructure, Field};
use sonine::jordan::ConeElement;
use sonine::rational::parse_q;
use sonine::sonine::{sonine_cone_mc, sonine_extended_polynomial, sonine_rank1_quadrature};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rep = sonine_rank1_quadrature(0.5, 1.5, &[0.5, 2.0, 7.0])?;
    for p in &rep.points {
        println!("z = {:>4}: series {:.12}, integral {:.12}", p.z, p.series, p.integral);
    }
    println!("rank one max residual: {:.2e}", rep.max_residual);

    let cone = ConeStructure::real(2);
    let r = ConeElement::diag(Field::Real, &[0.8, 2.0]);
    let mc = sonine_cone_mc(2.0, 1.5, &r, &cone, 20_000, 7, TruncationControl::default())?;
    println!("cone: series {:.6}, MC {:.6} +/- {:.6}", mc.series, mc.mc_mean, mc.std_error);

    let ext = sonine_extended_polynomial(&parse_q("9")?, &parse_q("-1/3")?, &cone, &[vec![0.5, 1.0]], 4)?;
    println!("negative nu, degree {}: exact discrepancy {}", ext.degree, ext.exact_discrepancy);
    Ok(())
}
