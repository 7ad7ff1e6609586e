use std::time::Instant;

use torus_forms::coinvariants::{coinvariants_h, coinvariants_s, Sign};

fn main() -> torus_forms::Result<()> {
    let (g, window) = (3, 4);
    for n in 3..=6 {
        let start = Instant::now();
        let h = coinvariants_h(n, g, window)?;
        println!("n={n} H: {} ({:.2?})", h.computed, start.elapsed());
        for sign in [Sign::Plus, Sign::Minus] {
            let start = Instant::now();
            let r = coinvariants_s(sign, n, g, window)?;
            println!(
                "n={n} S{sign}: computed {} predicted {} match={} ({} relations, {:.2?})",
                r.computed,
                r.predicted,
                r.matches,
                r.relations_used,
                start.elapsed()
            );
        }
    }
    Ok(())
}
