use torus_forms::frobenius::{frobenius_on_coinvariants, no_tame_submodule, FrobeniusModule, TheoremBModule};

fn main() -> torus_forms::Result<()> {
    for d in 2..=4 {
        let r = frobenius_on_coinvariants(d, 3, 2, 6)?;
        println!("F_{d}: formula and covering-map oracle agree: {}", r.agree);
    }
    println!("Z with F_d = d is tame: {}", FrobeniusModule::multiplication(&[2, 3, 4, 5]).is_tame()?.tame);
    for p in [2, 3, 5] {
        let module = TheoremBModule::new(p, 6)?;
        let w = no_tame_submodule(&module)?;
        println!("p={p}: group {}, no tame submodule {} (F_{} = 0)", module.to_module(&[2, 3])?.group(), w.holds, w.q.unwrap_or(0));
    }
    Ok(())
}
