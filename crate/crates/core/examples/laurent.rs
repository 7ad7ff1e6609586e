use torus_forms::{FormParameter, LaurentPoly};

fn main() -> torus_forms::Result<()> {
    let p: LaurentPoly = "t^2 + 3*t^-1".parse()?;
    let q: LaurentPoly = "1 - t".parse()?;
    println!("p = {p}, bar(p) = {}", p.bar());
    println!("p * q = {}", &p * &q);
    println!("json: {}", p.to_json());
    println!("-t^3 as a unit: {:?}", "-t^3".parse::<LaurentPoly>()?.unit_decompose()?);
    for n in [3, 4] {
        let param = FormParameter::min(n);
        let x = param.symmetrize(&"t^2".parse()?);
        println!("n={n}: {x} in min parameter: {}; 1 in it: {}", param.contains(&x), param.contains(&LaurentPoly::one()));
    }
    Ok(())
}
