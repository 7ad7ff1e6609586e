use torus_forms::unitary::{random_word, sigma};
use torus_forms::whitehead::{lemma_equivalence_check, phi_omega_defect, rho_kernel_cokernel, sample_lemma_inputs};
use torus_forms::{BlockMatrix, LaurentPoly, PolyMatrix};

fn main() -> torus_forms::Result<()> {
    let n = 4;
    let mut shear = PolyMatrix::identity(4);
    shear.set(0, 2, LaurentPoly::one());
    let shear = BlockMatrix::new(shear)?;
    println!("defect of a1 -> a1, b1 -> a1 + b1: {}", phi_omega_defect(&shear, n)?);
    println!("defect of sigma: {}", phi_omega_defect(&sigma(n), n)?);
    println!("defect of a random word: {}", phi_omega_defect(&random_word(2, n, 6, 1)?, n)?);

    let inputs = sample_lemma_inputs(2, n, 500, 7)?;
    let agree = inputs.iter().filter(|m| lemma_equivalence_check(m, n).unwrap_or(false)).count();
    println!("lemma agrees on {agree} of {} sampled matrices", inputs.len());

    let r = rho_kernel_cokernel(7, 2, 3, None)?;
    println!("n=7, k=2: kernel {} (x) {}, quotient {} (x) {}", r.kernel_sub.coefficients, r.kernel_sub.module, r.kernel_quotient.coefficients, r.kernel_quotient.module);
    Ok(())
}
