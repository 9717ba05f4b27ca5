//! Second-order accuracy of the one-sided WSGD operators on `x³(1-x)³`,
//! measured against the exact fractional derivative.

use rsfade::verify::{operator_orders, Side};

fn main() -> rsfade::Result<()> {
    let sizes = [32, 64, 128, 256];
    println!("max error on [1/4, 3/4] (order), and order over all nodes");
    for gamma in [0.3, 0.5, 0.8, 1.2, 1.5, 1.8, 2.0] {
        for side in [Side::Left, Side::Right] {
            let r = operator_orders(gamma, side, &sizes)?;
            print!("gamma={gamma:<4} {side:<5?}");
            for (k, e) in r.errors.iter().enumerate() {
                match k.checked_sub(1).map(|j| r.orders[j]) {
                    Some(p) => print!("  {e:.3e} ({p:.2})"),
                    None => print!("  {e:.3e}       "),
                }
            }
            let full: Vec<String> = r.full_orders.iter().map(|p| format!("{p:.2}")).collect();
            println!("   all nodes: {}", full.join(" "));
        }
    }
    Ok(())
}
