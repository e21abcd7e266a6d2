// Exact localized moment matrices separate Wallach points from the rest.

use sonine::beta::{classify_point, Verdict};
use sonine::cone::ConeStructure;
use sonine::rational::parse_q;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cone = ConeStructure::real(3);
    let mu = parse_q("12")?;
    for nu in ["0", "1/4", "1/2", "3/4", "1", "3/2"] {
        let p = classify_point(&mu, &parse_q(nu)?, &cone, 3)?;
        let verdict = match &p.verdict {
            Verdict::NegativeWitness { degree, localizer, value, .. } => {
                format!("witness at degree {degree} ({localizer}), L(l p^2) = {value}")
            }
            Verdict::NoObstructionUpTo { dmax, .. } => format!("no obstruction up to degree {dmax}"),
        };
        println!("nu = {nu:>4}  wallach = {:<5}  {verdict}", p.wallach);
    }
    Ok(())
}
