use dirac_families::matrix::{smith_normal_form, PolyMatrix};
use dirac_families::poly::Poly;
use dirac_families::scalar::Scalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_poly(rng: &mut ChaCha8Rng, max_degree: u32) -> Poly {
    let mut p = Poly::zero();
    for k in 0..=max_degree {
        if rng.gen_bool(0.6) {
            p = p.add(&Poly::monomial(Scalar::from_int(rng.gen_range(-5..=5)), k));
        }
    }
    p
}

fn main() {
    for size in 2..=5usize {
        let mut rng = ChaCha8Rng::seed_from_u64(42 + size as u64);
        for sample in 0..3 {
            let m = PolyMatrix::from_fn(size, size, |_, _| random_poly(&mut rng, 4));
            eprintln!("size {size} sample {sample} starting");
            let t = std::time::Instant::now();
            let snf = smith_normal_form(&m);
            let ok = snf.u.mul(&m).mul(&snf.v) == snf.s;
            eprintln!("size {size} sample {sample}: {:?} ok={ok}", t.elapsed());
        }
    }
}
