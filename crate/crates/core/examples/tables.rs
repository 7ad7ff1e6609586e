use torus_forms::tables::{l_symmetric_table, mttheta_rational_homotopy, stable_stem, theorem_a_report, theorem_b_report};

fn main() -> torus_forms::Result<()> {
    for k in 0..=7 {
        println!("pi_{k}^s = {}", stable_stem(k)?.value);
    }
    let row: Vec<String> = (-4..=4).map(|d| format!("{d}:{}", l_symmetric_table(d).value)).collect();
    println!("L^d(Z): {}", row.join("  "));
    for n in 3..=5 {
        println!("MT(theta) n={n}: rational classes in degrees {:?}", mttheta_rational_homotopy(n, 4 * n + 2)?.support());
    }
    for k in 1..4 {
        let r = theorem_a_report(6, k)?;
        println!("n=6 k={k}: {} vs {}", r.bott_side, r.les_side);
    }
    let b = theorem_b_report(7, 3, 3, 4)?;
    println!("p=3, n=7: module {} in degree {}, certified {}", b.module, b.degree, b.certified);
    Ok(())
}
