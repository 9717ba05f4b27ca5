//! Unconditional stability: without a source the discrete 2-norm never
//! grows, however large the time step.

use rsfade::harness::format_sci;
use rsfade::verify::homogeneous_norms;
use rsfade::Grid;

fn main() -> rsfade::Result<()> {
    let m = 64;
    let start = Grid::new(1.0, m, 1.0, 1)?.sample(|x| (x * (1.0 - x)).sqrt() * (9.0 * x).sin());
    println!("{:>6} {:>6} {:>8}  {:>12} {:>12} {:>12}", "alpha", "beta", "tau/h", "|U^0|", "|U^50|", "|U^200|");
    for (alpha, beta) in [(0.1, 1.2), (0.5, 1.5), (0.9, 2.0)] {
        for ratio in [0.1, 1.0, 10.0, 1000.0] {
            let norms = homogeneous_norms(alpha, beta, m, ratio, 200, &start)?;
            let monotone = norms.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-13));
            println!(
                "{alpha:>6} {beta:>6} {ratio:>8}  {:>12} {:>12} {:>12}  {}",
                format_sci(norms[0]),
                format_sci(norms[50]),
                format_sci(norms[200]),
                if monotone { "non-increasing" } else { "GROWS" }
            );
        }
    }
    Ok(())
}
