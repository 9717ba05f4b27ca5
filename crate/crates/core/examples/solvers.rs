//! Dense Cholesky against conjugate gradients (with and without Jacobi
//! scaling) on growing systems, and the FFT Toeplitz product against the
//! direct one.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsfade::linsolve::SpdSolver;
use rsfade::{assemble_system, FractionalOrder, Grid, SolverChoice};

fn main() -> rsfade::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let choices = [
        ("dense", SolverChoice::dense()),
        ("cg", SolverChoice::cg()),
        ("cg+jacobi", SolverChoice::cg().with_jacobi(true)),
    ];
    println!("{:>6} {:>10} {:>12} {:>12} {:>12}", "m", "solver", "setup [ms]", "solve [ms]", "rel. gap");
    for m in [64, 256, 1024, 2048] {
        let grid = Grid::new(1.0, m, 1.0, m)?;
        let sys = assemble_system(&grid, FractionalOrder::advection(0.5)?, FractionalOrder::dispersion(1.5)?, 2.0, 2.0)?;
        let b: Vec<f64> = (0..m - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut reference: Option<Vec<f64>> = None;
        for (name, choice) in &choices {
            let t0 = Instant::now();
            let solver = SpdSolver::new(&sys, choice)?;
            let t1 = Instant::now();
            let x = solver.solve(&b)?;
            let t2 = Instant::now();
            let gap = reference.as_ref().map_or(0.0, |r| {
                let num: f64 = r.iter().zip(&x).map(|(a, b)| (a - b).powi(2)).sum();
                let den: f64 = r.iter().map(|a| a * a).sum();
                (num / den).sqrt()
            });
            reference.get_or_insert(x);
            println!(
                "{m:>6} {name:>10} {:>12.2} {:>12.2} {gap:>12.2e}",
                (t1 - t0).as_secs_f64() * 1e3,
                (t2 - t1).as_secs_f64() * 1e3
            );
        }
        let t = sys.toeplitz();
        let v: Vec<f64> = (0..m - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let direct = t.matvec_direct(&v)?;
        let fft = t.matvec_fft(&v)?;
        let gap = direct.iter().zip(&fft).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        println!("{m:>6} {:>10} max |direct - fft| = {gap:.2e}", "matvec");
    }
    Ok(())
}
