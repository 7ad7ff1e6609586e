use torus_forms::unitary::{
    check_conditions, det_splitting, elementary_generators, membership_by_form, random_word, sigma, sigma_factorization_check,
};
use torus_forms::{FormParameter, QuadraticModule};

fn main() -> torus_forms::Result<()> {
    let (g, n) = (2, 3);
    let param = FormParameter::min(n);
    let q = QuadraticModule::hyperbolic(g, n, param);
    let gens = elementary_generators(g, n, 1)?;
    let all_pass = gens.iter().all(|m| check_conditions(m, n, param).map(|r| r.all()).unwrap_or(false));
    println!("{} elementary generators (g={g}, n={n}), all pass the block conditions: {all_pass}", gens.len());
    println!("sigma factorization holds for n=3: {}, n=4: {}", sigma_factorization_check(3), sigma_factorization_check(4));
    println!("sigma is unitary by the form: {}", membership_by_form(&sigma(n), &q)?);

    let w = random_word(g, n, 5, 42)?;
    println!("random word (seed 42):\n{:?}", w.matrix());
    println!("det = {}, splitting = {}", w.det()?, det_splitting(&w)?);
    Ok(())
}
