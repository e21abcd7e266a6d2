// Beta samples on the cone against the exact moment functional.

use sonine::beta::{moment_value, sample_beta, sample_beta_singular};
use sonine::cone::ConeStructure;
use sonine::jack::jack_c_eval;
use sonine::mc::Stats;
use sonine::partition::Partition;
use sonine::rational::{parse_q, to_f64};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cone = ConeStructure::real(2);
    let (mu, nu) = (parse_q("3")?, parse_q("5/2")?);
    let samples = sample_beta(to_f64(&mu), to_f64(&nu), &cone, 20_000, 42)?;
    for lam in [Partition::row(1), Partition::row(2), Partition::new(&[1, 1])?] {
        let mut st = Stats::default();
        for s in &samples {
            st.push(jack_c_eval(&lam, cone.alpha(), s.eigenvalues()));
        }
        let exact = moment_value(&lam, &mu, &nu, &cone)?;
        println!("C{lam}: empirical {:.5} +/- {:.5}, exact {exact} = {:.5}", st.mean, st.std_error(), to_f64(&exact));
    }

    // pt = 1 < q: the law is singular and every sample has the eigenvalue 1.
    let singular = sample_beta_singular(2, 1, &cone, 5, 42)?;
    for s in &singular {
        println!("singular sample spectrum: {:?}", s.eigenvalues());
    }
    Ok(())
}
