use torus_forms::quadratic::{certify_hyperbolic, hyperbolize, named_form, shaneson_image};
use torus_forms::FormSpec;

fn main() -> torus_forms::Result<()> {
    let k = named_form(&FormSpec::KervaireK, 3)?;
    println!("K gram:\n{:?}", k.gram());
    let (kk, u) = shaneson_image(&k)?;
    println!("K + -K over Z[t, t^-1]: Id + t is an isometry: {}", kk.is_isometry(&u)?);

    let e8 = named_form(&FormSpec::E8, 4)?;
    println!("E8 determinant {}", e8.gram().det()?);
    let ee = named_form(&FormSpec::OrthoSum(Box::new(FormSpec::E8), Box::new(FormSpec::Negate(Box::new(FormSpec::E8)))), 4)?;
    let basis = hyperbolize(&ee, 3)?;
    certify_hyperbolic(&ee, &basis)?;
    println!("E8 + -E8 hyperbolic basis found and certified (rank {})", basis.matrix.len());
    Ok(())
}
