//! Grünwald coefficients, WSGD weights and the sign/monotonicity laws they obey.
//!
//! ```text
//! cargo run --example coefficients -- 0.3 1.8
//! ```

use rsfade::coeffs::{verify_coefficient_lemmas, CheckStatus};
use rsfade::harness::format_sci;
use rsfade::{FractionalOrder, GrunwaldSeq};

fn main() -> rsfade::Result<()> {
    let gammas: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("orders are numbers"))
        .collect();
    let gammas = if gammas.is_empty() { vec![0.3, 1.8, 2.0] } else { gammas };

    for gamma in gammas {
        let order = FractionalOrder::new(gamma)?;
        let seq = GrunwaldSeq::new(gamma, 64)?;
        println!("gamma = {gamma} ({:?}), c_gamma = {:.6}", order.regime(), order.riesz_constant());
        println!("  {:>3}  {:>14}  {:>14}", "k", "g_k", "w_k");
        for k in 0..6 {
            println!("  {k:>3}  {:>14}  {:>14}", format_sci(seq.g()[k]), format_sci(seq.w()[k]));
        }
        let report = verify_coefficient_lemmas(&seq);
        for check in &report.checks {
            let mark = match check.status {
                CheckStatus::Holds => "holds",
                CheckStatus::HoldsWithEquality => "holds (equality)",
                CheckStatus::Violated => "VIOLATED",
            };
            println!("  {:<48} {mark}", check.name);
        }
        println!();
    }
    Ok(())
}
