use torus_forms::snf::{cokernel, map_on_cokernels, smith_normal_form};
use torus_forms::IntMatrix;

fn main() -> torus_forms::Result<()> {
    let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let s = smith_normal_form(&m);
    println!("invariant factors: {:?}", s.diagonal());
    println!("U M V = D: {}", s.u.try_mul(&m)?.try_mul(&s.v)? == s.d);
    println!("cokernel: {}", cokernel(&m));

    let z = IntMatrix::zeros(1, 0);
    let two = map_on_cokernels(&IntMatrix::from_rows(&[vec![2]]), &z, &z)?;
    println!("x2 on Z: epi {}, iso after inverting 2 {}", two.is_epi(), two.is_iso_after_inverting(2));
    Ok(())
}
