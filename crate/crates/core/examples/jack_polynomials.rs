// Jack C-polynomials: exact expansions, float evaluation and the power-sum rule.

use sonine::jack::{jack_c_eval, jack_c_exact};
use sonine::partition::enumerate_partitions;
use sonine::rational::parse_q;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alpha = parse_q("2")?;
    let q = 3;
    for lam in enumerate_partitions(3, q) {
        let c = jack_c_exact(&lam, &alpha, q);
        let terms: Vec<String> = c.iter().map(|(k, v)| format!("{v}*m{k}")).collect();
        println!("C{lam} = {}", terms.join(" + "));
    }

    // Σ_{|λ|=k} C_λ(x) = (tr x)^k
    let xi = [0.7, 1.3, 0.2];
    let k = 4;
    let sum: f64 = enumerate_partitions(k, q).iter().map(|l| jack_c_eval(l, 2.0, &xi)).sum();
    let tr: f64 = xi.iter().sum();
    println!("sum of C_lambda over |lambda| = {k}: {sum:.12}, (tr x)^{k} = {:.12}", tr.powi(k as i32));
    assert!((sum - tr.powi(k as i32)).abs() < 1e-10);
    Ok(())
}
