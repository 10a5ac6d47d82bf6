//! Runnable property suites over the other modules.
//!
//! Each check re-states one contract (orthonormality, selection rule,
//! oracle agreement, ...) as a pass/fail result with a deterministic case
//! count, so the same properties can be exercised from the command line at
//! a chosen scale and seed. Output is byte-deterministic for a fixed
//! [`VerifyParams`].

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cg::{build_cg_full, build_cg_symmetric, complete_to_unitary};
use crate::combinatorics::{
    dim_irrep, dim_symmetric, enumerate_occupations, enumerate_patterns, occupation_index,
    occupation_of_pattern, pattern_of_occupation, GelfandPattern, Partition,
};
use crate::compressor::{compress, compress_dense, decompress, DenseState};
use crate::error::Result;
use crate::oracle::{
    expected_compressed, inner_product, random_qudit, random_unitary, tensor_power_state,
};
use crate::wigner::{reduced_wigner, WignerContext};

/// Which suite to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Combinatorics,
    Wigner,
    Cg,
    Compressor,
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "all" => Ok(Suite::All),
            "combinatorics" => Ok(Suite::Combinatorics),
            "wigner" => Ok(Suite::Wigner),
            "cg" => Ok(Suite::Cg),
            "compressor" => Ok(Suite::Compressor),
            other => Err(format!(
                "unknown suite '{other}' (expected all|combinatorics|wigner|cg|compressor)"
            )),
        }
    }
}

/// Scale, tolerance, and seed for a verification run.
#[derive(Debug, Clone, Copy)]
pub struct VerifyParams {
    pub n_max: usize,
    pub d_max: usize,
    /// When set, overrides every check's default tolerance.
    pub tol: Option<f64>,
    pub seed: u64,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams { n_max: 6, d_max: 3, tol: None, seed: 42 }
    }
}

impl VerifyParams {
    fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

/// Outcome of one property check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    /// First counterexample, when failed.
    pub failure: Option<String>,
}

impl CheckResult {
    fn pass(suite: &'static str, name: &'static str, cases: usize) -> Self {
        CheckResult { suite, name, passed: true, cases, failure: None }
    }

    fn fail(suite: &'static str, name: &'static str, cases: usize, failure: String) -> Self {
        CheckResult { suite, name, passed: false, cases, failure: Some(failure) }
    }
}

impl std::fmt::Display for CheckResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.passed {
            write!(f, "[{}] {}: PASS ({} cases)", self.suite, self.name, self.cases)
        } else {
            write!(
                f,
                "[{}] {}: FAIL ({} cases; first counterexample: {})",
                self.suite,
                self.name,
                self.cases,
                self.failure.as_deref().unwrap_or("unknown")
            )
        }
    }
}

/// Runs the chosen suite; `All` concatenates every suite in a fixed order.
pub fn run_suite(suite: Suite, params: &VerifyParams) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    if matches!(suite, Suite::All | Suite::Combinatorics) {
        out.extend(combinatorics_suite(params)?);
    }
    if matches!(suite, Suite::All | Suite::Wigner) {
        out.extend(wigner_suite(params)?);
    }
    if matches!(suite, Suite::All | Suite::Cg) {
        out.extend(cg_suite(params)?);
    }
    if matches!(suite, Suite::All | Suite::Compressor) {
        out.extend(compressor_suite(params)?);
    }
    Ok(out)
}

fn partitions_up_to(weight: usize, d: usize) -> Vec<Partition> {
    fn collect(rem: usize, slots: usize, bound: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if slots == 0 {
            if rem == 0 {
                out.push(Partition::new(prefix.clone()).expect("non-increasing by construction"));
            }
            return;
        }
        for v in (0..=rem.min(bound)).rev() {
            prefix.push(v);
            collect(rem - v, slots - 1, v, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for w in 0..=weight {
        collect(w, d, usize::MAX, &mut vec![], &mut out);
    }
    out
}

fn validate_pattern(p: &GelfandPattern) -> bool {
    GelfandPattern::new(p.rows().to_vec()).is_ok()
}

fn combinatorics_suite(params: &VerifyParams) -> Result<Vec<CheckResult>> {
    const SUITE: &str = "combinatorics";
    let mut out = Vec::new();

    // every enumerated pattern satisfies betweenness, in strict canonical order
    {
        let mut cases = 0;
        let mut failure = None;
        'outer: for d in 1..=params.d_max.min(4) {
            for lambda in partitions_up_to(params.n_max.min(6), d) {
                let pats = enumerate_patterns(&lambda, d)?;
                cases += pats.len();
                for p in &pats {
                    if !validate_pattern(p) {
                        failure = Some(format!("invalid pattern under top row {lambda}"));
                        break 'outer;
                    }
                }
                if pats.windows(2).any(|w| w[0] <= w[1]) {
                    failure = Some(format!("ordering violation under top row {lambda}"));
                    break 'outer;
                }
            }
        }
        out.push(match failure {
            None => CheckResult::pass(SUITE, "pattern_betweenness_and_order", cases),
            Some(msg) => CheckResult::fail(SUITE, "pattern_betweenness_and_order", cases, msg),
        });
    }

    // dim by enumeration vs binomial formula
    {
        let mut cases = 0;
        let mut failure = None;
        'outer: for d in 1..=params.d_max.min(5) {
            for n in 0..=params.n_max.min(10) {
                cases += 1;
                let lambda = Partition::symmetric(n, d)?;
                if dim_irrep(&lambda, d)? != dim_symmetric(n, d)? {
                    failure = Some(format!("d={d}, n={n}"));
                    break 'outer;
                }
            }
        }
        out.push(match failure {
            None => CheckResult::pass(SUITE, "symmetric_dimension_formula", cases),
            Some(msg) => CheckResult::fail(SUITE, "symmetric_dimension_formula", cases, msg),
        });
    }

    // rank is the enumeration position; pattern bijection round-trips
    {
        let mut cases = 0;
        let mut failure = None;
        'outer: for d in 1..=params.d_max {
            for n in 0..=params.n_max {
                for (i, c) in enumerate_occupations(n, d)?.iter().enumerate() {
                    cases += 1;
                    if occupation_index(c)? != i {
                        failure = Some(format!("rank of {c} is not {i}"));
                        break 'outer;
                    }
                    let p = pattern_of_occupation(c)?;
                    if occupation_of_pattern(&p)? != *c {
                        failure = Some(format!("bijection fails at {c}"));
                        break 'outer;
                    }
                }
            }
        }
        out.push(match failure {
            None => CheckResult::pass(SUITE, "occupation_rank_bijection", cases),
            Some(msg) => CheckResult::fail(SUITE, "occupation_rank_bijection", cases, msg),
        });
    }

    // box addition preserves total dimension: sum over mu+box of dim = d * dim(mu)
    {
        let mut cases = 0;
        let mut failure = None;
        'outer: for d in 1..=params.d_max.min(4) {
            for mu in partitions_up_to(params.n_max.min(6), d) {
                cases += 1;
                let total: u64 =
                    mu.add_boxes().iter().map(|l| dim_irrep(l, d).unwrap_or(0)).sum();
                if total != d as u64 * dim_irrep(&mu, d)? {
                    failure = Some(format!("mu={mu}, d={d}"));
                    break 'outer;
                }
            }
        }
        out.push(match failure {
            None => CheckResult::pass(SUITE, "box_addition_dimension_sum", cases),
            Some(msg) => CheckResult::fail(SUITE, "box_addition_dimension_sum", cases, msg),
        });
    }

    Ok(out)
}

fn interlacing_rows(top: &Partition) -> Result<Vec<Partition>> {
    let d = top.num_parts();
    let mut rows = std::collections::BTreeSet::new();
    for p in enumerate_patterns(top, d)? {
        rows.insert(Partition::new(p.row(d - 1).to_vec())?);
    }
    Ok(rows.into_iter().collect())
}

fn wigner_suite(params: &VerifyParams) -> Result<Vec<CheckResult>> {
    const SUITE: &str = "wigner";
    let mut out = Vec::new();
    let tol = params.tol_or(1e-10);

    // fixed input channel (top, next, j') has unit norm over outputs j
    {
        let mut cases = 0;
        let mut failure = None;
        'outer: for d in 2..=params.d_max.clamp(2, 4) {
            for top in partitions_up_to(params.n_max.min(6), d) {
                for next in interlacing_rows(&top)? {
                    for jp in 0..d {
                        if jp >= 1 && next.add_box(jp).is_none() {
                            continue;
                        }
                        cases += 1;
                        let mut total = 0.0;
                        for j in 1..=d {
                            if top.add_box(j).is_none() {
                                continue;
                            }
                            let ctx = WignerContext::new(top.clone(), next.clone(), j, jp)?;
                            total += reduced_wigner(&ctx)?.powi(2);
                        }
                        if (total - 1.0).abs() > tol {
                            failure = Some(format!(
                                "top={top}, next={next}, j'={jp}: norm^2 = {total:.12}"
                            ));
                            break 'outer;
                        }
                    }
                }
            }
        }
        out.push(match failure {
            None => CheckResult::pass(SUITE, "input_channel_normalization", cases),
            Some(msg) => CheckResult::fail(SUITE, "input_channel_normalization", cases, msg),
        });
    }

    // d = 2 coefficients match the closed-form spin coupling table
    {
        let mut cases = 0;
        let mut failure = None;
        'outer: for k in 0..=params.n_max {
            for m in 0..=k {
                cases += 2;
                let top = Partition::new(vec![k, 0])?;
                let next = Partition::new(vec![m])?;
                let up = reduced_wigner(&WignerContext::new(top.clone(), next.clone(), 1, 1)?)?;
                let down = reduced_wigner(&WignerContext::new(top, next, 1, 0)?)?;
                let want_up = crate::oracle::spin_cg_closed_form(k, m, 1)?;
                let want_down = crate::oracle::spin_cg_closed_form(k, m, 2)?;
                if (up - want_up).abs() > tol || (down - want_down).abs() > tol {
                    failure = Some(format!("k={k}, m={m}"));
                    break 'outer;
                }
            }
        }
        out.push(match failure {
            None => CheckResult::pass(SUITE, "d2_spin_closed_form", cases),
            Some(msg) => CheckResult::fail(SUITE, "d2_spin_closed_form", cases, msg),
        });
    }

    // pure function: recomputation is bit-identical
    {
        let mut cases = 0;
        let mut failure = None;
        'outer: for d in 2..=params.d_max.clamp(2, 4) {
            for top in partitions_up_to(params.n_max.min(5), d) {
                for next in interlacing_rows(&top)? {
                    for j in 1..=d {
                        if top.add_box(j).is_none() {
                            continue;
                        }
                        for jp in 0..d {
                            if jp >= 1 && next.add_box(jp).is_none() {
                                continue;
                            }
                            cases += 1;
                            let ctx = WignerContext::new(top.clone(), next.clone(), j, jp)?;
                            let a = reduced_wigner(&ctx)?;
                            let b = reduced_wigner(&ctx)?;
                            if a.to_bits() != b.to_bits() {
                                failure = Some(format!("top={top}, next={next}, j={j}, j'={jp}"));
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        out.push(match failure {
            None => CheckResult::pass(SUITE, "determinism", cases),
            Some(msg) => CheckResult::fail(SUITE, "determinism", cases, msg),
        });
    }

    Ok(out)
}

fn max_abs(m: &ndarray::Array2<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn unitarity_error(m: &ndarray::Array2<C64>) -> f64 {
    let adj = m.mapv(|z| z.conj()).reversed_axes();
    let mut a = adj.dot(m);
    for i in 0..a.nrows() {
        a[[i, i]] -= 1.0;
    }
    let mut b = m.dot(&m.mapv(|z| z.conj()).reversed_axes());
    for i in 0..b.nrows() {
        b[[i, i]] -= 1.0;
    }
    max_abs(&a).max(max_abs(&b))
}

fn cg_suite(params: &VerifyParams) -> Result<Vec<CheckResult>> {
    const SUITE: &str = "cg";
    let mut out = Vec::new();
    let iso_tol = params.tol_or(1e-10);
    let zero_tol = params.tol_or(1e-12);
    let k_max = params.n_max.min(8);
    let d_max = params.d_max.min(4);

    // rows orthonormal
    {
        let mut cases = 0;
        let mut failure = None;
        'outer: for d in 1..=d_max {
            for k in 0..=k_max {
                cases += 1;
                let w = build_cg_symmetric(d, k)?;
                let dense = w.dense();
                let mut gram = dense.dot(&dense.mapv(|z| z.conj()).reversed_axes());
                for i in 0..gram.nrows() {
                    gram[[i, i]] -= 1.0;
                }
                let err = max_abs(&gram);
                if err > iso_tol {
                    failure = Some(format!("d={d}, k={k}: max |W W+ - I| = {err:.3e}"));
                    break 'outer;
                }
            }
        }
        out.push(match failure {
            None => CheckResult::pass(SUITE, "rows_orthonormal", cases),
            Some(msg) => CheckResult::fail(SUITE, "rows_orthonormal", cases, msg),
        });
    }

    // selection rule: nonzero exactly on columns (c' - e_i, i)
    {
        let mut cases = 0;
        let mut failure = None;
        'outer: for d in 1..=d_max {
            for k in 0..=k_max.min(5) {
                let w = build_cg_symmetric(d, k)?;
                let dense = w.dense();
                let inputs = enumerate_occupations(k, d)?;
                for (r, c_out) in w.row_occupations().iter().enumerate() {
                    for (rank, c_in) in inputs.iter().enumerate() {
                        for letter in 0..d {
                            cases += 1;
                            let allowed = c_in.incremented(letter) == *c_out;
                            let v = dense[[r, rank * d + letter]].norm();
                            if allowed && v == 0.0 {
                                failure =
                                    Some(format!("missing entry d={d}, k={k}, row {c_out}"));
                                break 'outer;
                            }
                            if !allowed && v > zero_tol {
                                failure = Some(format!("stray entry d={d}, k={k}, row {c_out}"));
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        out.push(match failure {
            None => CheckResult::pass(SUITE, "selection_rule", cases),
            Some(msg) => CheckResult::fail(SUITE, "selection_rule", cases, msg),
        });
    }

    // entry magnitudes follow sqrt((c_i + 1)/(k + 1)), and are positive
    {
        let mut cases = 0;
        let mut failure = None;
        'outer: for d in 1..=d_max {
            for k in 0..=k_max {
                let w = build_cg_symmetric(d, k)?;
                for (r, c_out) in w.row_occupations().iter().enumerate() {
                    for letter in 0..d {
                        cases += 1;
                        let got = w.coefficient(r, letter);
                        let want = if c_out.count(letter) == 0 {
                            0.0
                        } else {
                            (c_out.count(letter) as f64 / (k + 1) as f64).sqrt()
                        };
                        if (got - want).abs() > iso_tol || got < 0.0 {
                            failure = Some(format!(
                                "d={d}, k={k}, row {c_out}, letter {letter}: {got} vs {want}"
                            ));
                            break 'outer;
                        }
                    }
                }
            }
        }
        out.push(match failure {
            None => CheckResult::pass(SUITE, "entry_magnitude_law", cases),
            Some(msg) => CheckResult::fail(SUITE, "entry_magnitude_law", cases, msg),
        });
    }

    // unitary completion: exact leading block, unitary overall
    {
        let mut cases = 0;
        let mut failure = None;
        'outer: for d in 1..=d_max.min(3) {
            for k in 0..=k_max.min(5) {
                cases += 1;
                let w = build_cg_symmetric(d, k)?;
                let u = complete_to_unitary(&w);
                let err = unitarity_error(u.matrix());
                if err > iso_tol {
                    failure = Some(format!("d={d}, k={k}: unitarity error {err:.3e}"));
                    break 'outer;
                }
                let dense = w.dense();
                for r in 0..w.rows() {
                    for c in 0..w.cols() {
                        if u.matrix()[[r, c]] != dense[[r, c]] {
                            failure = Some(format!("d={d}, k={k}: block not bit-exact"));
                            break 'outer;
                        }
                    }
                }
            }
        }
        out.push(match failure {
            None => CheckResult::pass(SUITE, "unitary_completion", cases),
            Some(msg) => CheckResult::fail(SUITE, "unitary_completion", cases, msg),
        });
    }

    // full transform at validation scale: unitary, with consistent blocks
    {
        let mut cases = 0;
        let mut failure = None;
        'outer: for d in 1..=params.d_max.min(3) {
            for mu in partitions_up_to(params.n_max.min(4), d) {
                cases += 1;
                let u = build_cg_full(d, &mu)?;
                let err = unitarity_error(u.matrix());
                if err > iso_tol {
                    failure = Some(format!("d={d}, mu={mu}: unitarity error {err:.3e}"));
                    break 'outer;
                }
                let total: usize = u.blocks().iter().map(|b| b.rows.len()).sum();
                if total != u.side() {
                    failure = Some(format!("d={d}, mu={mu}: block rows do not tile"));
                    break 'outer;
                }
            }
        }
        out.push(match failure {
            None => CheckResult::pass(SUITE, "full_transform_unitarity", cases),
            Some(msg) => CheckResult::fail(SUITE, "full_transform_unitarity", cases, msg),
        });
    }

    Ok(out)
}

fn max_componentwise_err(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn compressor_suite(params: &VerifyParams) -> Result<Vec<CheckResult>> {
    const SUITE: &str = "compressor";
    let mut out = Vec::new();
    let tol = params.tol_or(1e-9);

    // cascade output equals the multinomial expansion, componentwise
    {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 1);
        let mut cases = 0;
        let mut failure = None;
        'outer: for d in 2..=params.d_max.clamp(2, 4) {
            for n in 2..=params.n_max.min(6) {
                for trial in 0..50 {
                    cases += 1;
                    let phi = random_qudit(d, &mut rng);
                    let got = compress(&phi, n)?;
                    let want = expected_compressed(&phi, n)?;
                    let err = max_componentwise_err(got.amplitudes(), want.amplitudes());
                    if err > tol {
                        failure =
                            Some(format!("d={d}, n={n}, trial {trial}: max err {err:.3e}"));
                        break 'outer;
                    }
                }
            }
        }
        out.push(match failure {
            None => CheckResult::pass(SUITE, "oracle_equivalence", cases),
            Some(msg) => CheckResult::fail(SUITE, "oracle_equivalence", cases, msg),
        });
    }

    // <compress(phi), compress(psi)> = <phi, psi>^n
    {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 2);
        let mut cases = 0;
        let mut failure = None;
        'outer: for d in 2..=params.d_max.clamp(2, 4) {
            for n in 2..=params.n_max.min(8) {
                for trial in 0..10 {
                    cases += 1;
                    let phi = random_qudit(d, &mut rng);
                    let psi = random_qudit(d, &mut rng);
                    let lhs = inner_product(
                        compress(&phi, n)?.amplitudes(),
                        compress(&psi, n)?.amplitudes(),
                    );
                    let rhs = inner_product(phi.amplitudes(), psi.amplitudes()).powu(n as u32);
                    if (lhs - rhs).norm() > tol {
                        failure = Some(format!(
                            "d={d}, n={n}, trial {trial}: |{lhs} - {rhs}| > {tol:.1e}"
                        ));
                        break 'outer;
                    }
                }
            }
        }
        out.push(match failure {
            None => CheckResult::pass(SUITE, "inner_product_law", cases),
            Some(msg) => CheckResult::fail(SUITE, "inner_product_law", cases, msg),
        });
    }

    // unitary covariance at the compressed level
    {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 3);
        let mut cases = 0;
        let mut failure = None;
        'outer: for d in 2..=params.d_max.clamp(2, 4) {
            for n in 2..=params.n_max.min(6) {
                for trial in 0..5 {
                    cases += 1;
                    let u = random_unitary(d, &mut rng);
                    let phi = random_qudit(d, &mut rng);
                    let psi = random_qudit(d, &mut rng);
                    let rotated_phi =
                        crate::compressor::PureQudit::new(u.apply_vec(phi.amplitudes()))?;
                    let rotated_psi =
                        crate::compressor::PureQudit::new(u.apply_vec(psi.amplitudes()))?;
                    let before = inner_product(
                        compress(&phi, n)?.amplitudes(),
                        compress(&psi, n)?.amplitudes(),
                    );
                    let after = inner_product(
                        compress(&rotated_phi, n)?.amplitudes(),
                        compress(&rotated_psi, n)?.amplitudes(),
                    );
                    if (before - after).norm() > tol {
                        failure = Some(format!("d={d}, n={n}, trial {trial}"));
                        break 'outer;
                    }
                }
            }
        }
        out.push(match failure {
            None => CheckResult::pass(SUITE, "unitary_covariance", cases),
            Some(msg) => CheckResult::fail(SUITE, "unitary_covariance", cases, msg),
        });
    }

    // dense path agrees with the fast path on product inputs
    {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 4);
        let mut cases = 0;
        let mut failure = None;
        let leak_tol = params.tol_or(1e-10);
        'outer: for d in 2..=params.d_max.min(3) {
            for n in 2..=params.n_max.min(6) {
                for trial in 0..5 {
                    cases += 1;
                    let phi = random_qudit(d, &mut rng);
                    let psi = tensor_power_state(&phi, n)?;
                    let (cs, leakage) = compress_dense(&psi)?;
                    let fast = compress(&phi, n)?;
                    let err = max_componentwise_err(cs.amplitudes(), fast.amplitudes());
                    if err > tol || leakage > leak_tol {
                        failure = Some(format!(
                            "d={d}, n={n}, trial {trial}: err {err:.3e}, leakage {leakage:.3e}"
                        ));
                        break 'outer;
                    }
                }
            }
        }
        out.push(match failure {
            None => CheckResult::pass(SUITE, "dense_path_equivalence", cases),
            Some(msg) => CheckResult::fail(SUITE, "dense_path_equivalence", cases, msg),
        });
    }

    // the antisymmetric singlet leaks entirely
    {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let amps = vec![
            C64::new(0.0, 0.0),
            C64::new(s, 0.0),
            C64::new(-s, 0.0),
            C64::new(0.0, 0.0),
        ];
        let psi = DenseState::new(2, 2, amps)?;
        let (_, leakage) = compress_dense(&psi)?;
        let tol = params.tol_or(1e-12);
        out.push(if (leakage - 1.0).abs() <= tol {
            CheckResult::pass(SUITE, "singlet_leakage", 1)
        } else {
            CheckResult::fail(SUITE, "singlet_leakage", 1, format!("leakage = {leakage:.12}"))
        });
    }

    // compress then decompress returns the product state
    {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 5);
        let mut cases = 0;
        let mut failure = None;
        'outer: for d in 2..=params.d_max.min(3) {
            for n in 2..=params.n_max.min(6) {
                for trial in 0..5 {
                    cases += 1;
                    let phi = random_qudit(d, &mut rng);
                    let back = decompress(&compress(&phi, n)?)?;
                    let reference = tensor_power_state(&phi, n)?;
                    let fidelity =
                        inner_product(back.amplitudes(), reference.amplitudes()).norm();
                    if fidelity < 1.0 - tol {
                        failure =
                            Some(format!("d={d}, n={n}, trial {trial}: fidelity {fidelity}"));
                        break 'outer;
                    }
                }
            }
        }
        out.push(match failure {
            None => CheckResult::pass(SUITE, "roundtrip_fidelity", cases),
            Some(msg) => CheckResult::fail(SUITE, "roundtrip_fidelity", cases, msg),
        });
    }

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_scale_passes_everything() {
        let results = run_suite(Suite::All, &VerifyParams::default()).unwrap();
        assert!(!results.is_empty());
        for r in &results {
            assert!(r.passed, "{r}");
        }
    }

    #[test]
    fn zero_tolerance_fails_somewhere() {
        let params = VerifyParams { tol: Some(0.0), ..VerifyParams::default() };
        let results = run_suite(Suite::All, &params).unwrap();
        assert!(results.iter().any(|r| !r.passed));
    }

    #[test]
    fn suites_are_deterministic_under_fixed_seed() {
        let params = VerifyParams { n_max: 4, d_max: 3, tol: None, seed: 7 };
        let a: Vec<String> =
            run_suite(Suite::All, &params).unwrap().iter().map(|r| r.to_string()).collect();
        let b: Vec<String> =
            run_suite(Suite::All, &params).unwrap().iter().map(|r| r.to_string()).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn single_suite_selection() {
        let params = VerifyParams { n_max: 3, d_max: 2, tol: None, seed: 1 };
        let results = run_suite(Suite::Wigner, &params).unwrap();
        assert!(results.iter().all(|r| r.suite == "wigner"));
        assert!("bogus".parse::<Suite>().is_err());
        assert_eq!("cg".parse::<Suite>().unwrap(), Suite::Cg);
    }
}
