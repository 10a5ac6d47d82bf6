//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them).
//!
//! Criteria and tolerances are pinned here; changing them is a release
//! decision, not a test fix.

use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use schur_compress::oracle::{
    expected_compressed, inner_product, random_qudit, spin_cg_closed_form, tensor_power_state,
};
use schur_compress::{
    build_cg_symmetric, complete_to_unitary, compress, compress_dense, decompress, dim_irrep,
    dim_symmetric, DenseState, Partition,
};

fn report(criterion: &str, outcome: Result<String, String>) {
    match outcome {
        Ok(details) => println!("criterion {criterion}: PASS ({details})"),
        Err(details) => {
            println!("criterion {criterion}: FAIL ({details})");
            panic!("criterion {criterion} failed: {details}");
        }
    }
}

fn max_componentwise_err(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn criterion_1_dimension_formula() {
    let start = Instant::now();
    let mut checks = 0;
    for d in 1..=5usize {
        for n in 0..=10usize {
            checks += 1;
            let lambda = Partition::symmetric(n, d).unwrap();
            let enumerated = dim_irrep(&lambda, d).unwrap();
            let formula = dim_symmetric(n, d).unwrap();
            if enumerated != formula {
                report(
                    "1 (dimension formula)",
                    Err(format!("d={d}, n={n}: {enumerated} != {formula}")),
                );
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 1.0 {
        report("1 (dimension formula)", Err(format!("took {elapsed:.2?}, bound is 1 s")));
    }
    report("1 (dimension formula)", Ok(format!("{checks} pairs exact in {elapsed:.2?}")));
}

#[test]
fn criterion_2_compressed_register_size() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checks = 0;
    for d in 1..=4usize {
        let phi = random_qudit(d, &mut rng);
        for n in 1..=10usize {
            checks += 1;
            let got = compress(&phi, n).unwrap().amplitudes().len() as u64;
            let want = dim_symmetric(n, d).unwrap();
            if got != want {
                report("2 (compressed size)", Err(format!("d={d}, n={n}: {got} != {want}")));
            }
        }
    }
    report("2 (compressed size)", Ok(format!("{checks} (d, n) pairs exact")));
}

#[test]
fn criterion_3_oracle_fidelity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut checks = 0;
    for d in 2..=4usize {
        for n in 2..=6usize {
            for _ in 0..50 {
                checks += 1;
                let phi = random_qudit(d, &mut rng);
                let got = compress(&phi, n).unwrap();
                let want = expected_compressed(&phi, n).unwrap();
                let err = max_componentwise_err(got.amplitudes(), want.amplitudes());
                worst = worst.max(err);
                if err > 1e-9 {
                    report("3 (oracle fidelity)", Err(format!("d={d}, n={n}: err {err:.3e}")));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 30.0 {
        report("3 (oracle fidelity)", Err(format!("took {elapsed:.2?}, bound is 30 s")));
    }
    report(
        "3 (oracle fidelity)",
        Ok(format!("{checks} states, worst componentwise err {worst:.3e} in {elapsed:.2?}")),
    );
}

#[test]
fn criterion_4_isometry_and_unitarity() {
    let mut worst_iso = 0.0f64;
    let mut worst_uni = 0.0f64;
    for d in 1..=4usize {
        for k in 0..=8usize {
            let w = build_cg_symmetric(d, k).unwrap();
            let dense = w.dense();
            let mut gram = dense.dot(&dense.mapv(|z| z.conj()).reversed_axes());
            for i in 0..gram.nrows() {
                gram[[i, i]] -= 1.0;
            }
            let iso_err = gram.iter().map(|z| z.norm()).fold(0.0, f64::max);
            worst_iso = worst_iso.max(iso_err);
            if iso_err > 1e-10 {
                report("4 (isometry/unitarity)", Err(format!("W d={d}, k={k}: {iso_err:.3e}")));
            }

            let u = complete_to_unitary(&w);
            let m = u.matrix();
            let mut gram = m.mapv(|z| z.conj()).reversed_axes().dot(m);
            for i in 0..gram.nrows() {
                gram[[i, i]] -= 1.0;
            }
            let uni_err = gram.iter().map(|z| z.norm()).fold(0.0, f64::max);
            worst_uni = worst_uni.max(uni_err);
            if uni_err > 1e-10 {
                report("4 (isometry/unitarity)", Err(format!("U d={d}, k={k}: {uni_err:.3e}")));
            }
        }
    }
    report(
        "4 (isometry/unitarity)",
        Ok(format!("d<=4, k<=8: worst |WW+-I| {worst_iso:.3e}, worst |U+U-I| {worst_uni:.3e}")),
    );
}

#[test]
fn criterion_5_dense_path_and_leakage() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_err = 0.0f64;
    let mut worst_leak = 0.0f64;
    let mut checks = 0;
    for d in 2..=3usize {
        for n in 2..=6usize {
            for _ in 0..10 {
                checks += 1;
                let phi = random_qudit(d, &mut rng);
                let psi = tensor_power_state(&phi, n).unwrap();
                let (cs, leakage) = compress_dense(&psi).unwrap();
                let fast = compress(&phi, n).unwrap();
                let err = max_componentwise_err(cs.amplitudes(), fast.amplitudes());
                worst_err = worst_err.max(err);
                worst_leak = worst_leak.max(leakage);
                if err > 1e-9 || leakage > 1e-10 {
                    report(
                        "5 (dense path)",
                        Err(format!("d={d}, n={n}: err {err:.3e}, leakage {leakage:.3e}")),
                    );
                }
            }
        }
    }
    // the antisymmetric singlet leaves the tower entirely
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let singlet = DenseState::new(
        2,
        2,
        vec![C64::new(0.0, 0.0), C64::new(s, 0.0), C64::new(-s, 0.0), C64::new(0.0, 0.0)],
    )
    .unwrap();
    let (_, leakage) = compress_dense(&singlet).unwrap();
    if (leakage - 1.0).abs() > 1e-12 {
        report("5 (dense path)", Err(format!("singlet leakage {leakage:.15}")));
    }
    report(
        "5 (dense path)",
        Ok(format!(
            "{checks} product states: worst err {worst_err:.3e}, worst leakage {worst_leak:.3e}; singlet leakage 1"
        )),
    );
}

#[test]
fn criterion_6_d2_closed_form_cross_check() {
    let mut worst = 0.0f64;
    let mut checks = 0;
    for k in 0..=8usize {
        let w = build_cg_symmetric(2, k).unwrap();
        for (r, c_out) in w.row_occupations().iter().enumerate() {
            for letter in 0..2usize {
                if c_out.count(letter) == 0 {
                    continue;
                }
                checks += 1;
                let c_in = c_out.decremented(letter).unwrap();
                let want = spin_cg_closed_form(k, c_in.count(0), letter + 1).unwrap();
                let err = (w.coefficient(r, letter).abs() - want).abs();
                worst = worst.max(err);
                if err > 1e-10 {
                    report(
                        "6 (d=2 closed form)",
                        Err(format!("k={k}, row {c_out}, letter {letter}: err {err:.3e}")),
                    );
                }
            }
        }
    }
    report("6 (d=2 closed form)", Ok(format!("{checks} entries, worst err {worst:.3e}")));
}

#[test]
fn criterion_7_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 1.0f64;
    let mut checks = 0;
    for d in 2..=3usize {
        for n in 2..=6usize {
            for _ in 0..20 {
                checks += 1;
                let phi = random_qudit(d, &mut rng);
                let back = decompress(&compress(&phi, n).unwrap()).unwrap();
                let reference = tensor_power_state(&phi, n).unwrap();
                let fidelity = inner_product(back.amplitudes(), reference.amplitudes()).norm();
                worst = worst.min(fidelity);
                if fidelity < 1.0 - 1e-9 {
                    report("7 (roundtrip)", Err(format!("d={d}, n={n}: fidelity {fidelity}")));
                }
            }
        }
    }
    report("7 (roundtrip)", Ok(format!("{checks} states, worst fidelity {worst:.12}")));
}

#[test]
fn criterion_8_inner_product_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    let mut checks = 0;
    for d in 2..=4usize {
        for n in 2..=8usize {
            for _ in 0..50 {
                checks += 1;
                let phi = random_qudit(d, &mut rng);
                let psi = random_qudit(d, &mut rng);
                let lhs = inner_product(
                    compress(&phi, n).unwrap().amplitudes(),
                    compress(&psi, n).unwrap().amplitudes(),
                );
                let rhs = inner_product(phi.amplitudes(), psi.amplitudes()).powu(n as u32);
                let err = (lhs - rhs).norm();
                worst = worst.max(err);
                if err > 1e-9 {
                    report("8 (inner product law)", Err(format!("d={d}, n={n}: err {err:.3e}")));
                }
            }
        }
    }
    report("8 (inner product law)", Ok(format!("{checks} pairs, worst err {worst:.3e}")));
}

#[test]
fn criterion_9_polynomial_scaling() {
    // d = 3, n = 50: the compressed register has 1326 amplitudes while the
    // dense register would need ~7e23; the cascade must finish in well
    // under a second including isometry construction.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let phi = random_qudit(3, &mut rng);
    let start = Instant::now();
    let cs = compress(&phi, 50).unwrap();
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 1.0 {
        report("9 (polynomial scaling)", Err(format!("took {elapsed:.2?}, bound is 1 s")));
    }
    let want = expected_compressed(&phi, 50).unwrap();
    let err = max_componentwise_err(cs.amplitudes(), want.amplitudes());
    if err > 1e-9 {
        report("9 (polynomial scaling)", Err(format!("output drifted from oracle: {err:.3e}")));
    }
    assert_eq!(cs.amplitudes().len(), 1326);
    report(
        "9 (polynomial scaling)",
        Ok(format!("d=3, n=50 compressed to 1326 amplitudes in {elapsed:.2?}, err {err:.3e}")),
    );
}
