//! Brute-force reference implementations used only for verification.
//!
//! Everything here is deliberately naive: full `d^n` vectors, explicit
//! type-class sums, closed-form spin coefficients. None of it shares code
//! with the cascade it is used to check.

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::combinatorics::{dim_symmetric, enumerate_occupations, OccupationVector};
use crate::compressor::{CompressedState, DenseState, PureQudit};
use crate::error::{Error, Result};

/// Largest dense register the oracle will materialize.
const MAX_DENSE: usize = 1 << 22;

/// Bijection of `{0, ..., n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Permutation {
    /// `mapping[i]` is the image of position i (0-based).
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &m in &mapping {
            if m >= n || seen[m] {
                return Err(Error::InvalidArgument(format!("not a bijection: {mapping:?}")));
            }
            seen[m] = true;
        }
        Ok(Permutation { mapping })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { mapping: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.mapping[i]
    }

    /// All n! permutations (test scale only).
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut items: Vec<usize> = (0..n).collect();
        heap_permutations(&mut items, n, &mut out);
        out
    }
}

fn heap_permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Permutation>) {
    if k <= 1 {
        out.push(Permutation { mapping: items.clone() });
        return;
    }
    for i in 0..k {
        heap_permutations(items, k - 1, out);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// d x d unitary, checked to within 1e-12 on construction.
#[derive(Debug, Clone)]
pub struct LocalUnitary {
    entries: Vec<C64>, // row-major
    d: usize,
}

impl LocalUnitary {
    pub fn new(entries: Vec<C64>, d: usize) -> Result<Self> {
        if entries.len() != d * d {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries for a {d}x{d} matrix, got {}",
                d * d,
                entries.len()
            )));
        }
        let u = LocalUnitary { entries, d };
        for i in 0..d {
            for j in 0..d {
                let mut acc = C64::new(0.0, 0.0);
                for r in 0..d {
                    acc += u.entry(r, i).conj() * u.entry(r, j);
                }
                let target = if i == j { 1.0 } else { 0.0 };
                if (acc - target).norm() > 1e-12 {
                    return Err(Error::InvalidArgument(
                        "matrix is not unitary within 1e-12".into(),
                    ));
                }
            }
        }
        Ok(u)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn entry(&self, r: usize, c: usize) -> C64 {
        self.entries[r * self.d + c]
    }

    pub fn apply_vec(&self, v: &[C64]) -> Vec<C64> {
        (0..self.d)
            .map(|r| (0..self.d).map(|c| self.entry(r, c) * v[c]).sum())
            .collect()
    }
}

fn check_dense_scale(d: usize, n: usize) -> Result<usize> {
    let mut size: usize = 1;
    for _ in 0..n {
        size = size
            .checked_mul(d)
            .filter(|&s| s <= MAX_DENSE)
            .ok_or_else(|| Error::ScaleExceeded(format!("d^n too large for d={d}, n={n}")))?;
    }
    Ok(size)
}

/// Amplitudes of `|phi>^(x n)`: the entry at string (i_1, ..., i_n) is the
/// product of the per-factor amplitudes.
pub fn tensor_power_state(phi: &PureQudit, n: usize) -> Result<DenseState> {
    let d = phi.d();
    let size = check_dense_scale(d, n)?;
    let alpha = phi.amplitudes();
    let mut amps = vec![C64::new(1.0, 0.0)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(amps.len() * d);
        for a in &amps {
            for x in alpha {
                next.push(a * x);
            }
        }
        amps = next;
    }
    debug_assert_eq!(amps.len(), size);
    DenseState::from_amplitudes_unchecked(d, n, amps)
}

fn string_of_index(mut idx: usize, d: usize, n: usize) -> Vec<usize> {
    let mut s = vec![0usize; n];
    for pos in (0..n).rev() {
        s[pos] = idx % d;
        idx /= d;
    }
    s
}

fn index_of_string(s: &[usize], d: usize) -> usize {
    s.iter().fold(0, |acc, &x| acc * d + x)
}

/// Enumerates the distinct computational strings of type `c`.
fn strings_of_type(c: &OccupationVector) -> Vec<Vec<usize>> {
    let n = c.weight();
    let mut out = Vec::new();
    let mut counts = c.counts().to_vec();
    let mut cur = vec![0usize; n];
    fill_strings(0, n, &mut counts, &mut cur, &mut out);
    out
}

fn fill_strings(
    pos: usize,
    n: usize,
    counts: &mut Vec<usize>,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if pos == n {
        out.push(cur.clone());
        return;
    }
    for letter in 0..counts.len() {
        if counts[letter] == 0 {
            continue;
        }
        counts[letter] -= 1;
        cur[pos] = letter;
        fill_strings(pos + 1, n, counts, cur, out);
        counts[letter] += 1;
    }
}

/// Equal-amplitude superposition of every computational string of type `c`.
/// The unnormalized variant puts amplitude 1 on each distinct string; the
/// number of such strings is the multinomial `n!/(c_1! ... c_d!)`.
pub fn symmetric_basis_vector(c: &OccupationVector) -> Result<DenseState> {
    let d = c.d();
    let n = c.weight();
    let size = check_dense_scale(d, n)?;
    let mut amps = vec![C64::new(0.0, 0.0); size];
    for s in strings_of_type(c) {
        amps[index_of_string(&s, d)] = C64::new(1.0, 0.0);
    }
    DenseState::from_amplitudes_unchecked(d, n, amps)
}

/// Normalized variant of [`symmetric_basis_vector`].
pub fn symmetric_basis_vector_normalized(c: &OccupationVector) -> Result<DenseState> {
    let raw = symmetric_basis_vector(c)?;
    let norm = raw.norm();
    let amps = raw.amplitudes().iter().map(|a| a / norm).collect();
    DenseState::from_amplitudes_unchecked(c.d(), c.weight(), amps)
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Expected compressed register of `|phi>^(x n)`: the amplitude at
/// occupation c is `sqrt(n!/(c_1! ... c_d!)) * prod_i alpha_i^(c_i)`.
/// Multinomials go through log-factorials so no integer width is exceeded.
pub fn expected_compressed(phi: &PureQudit, n: usize) -> Result<CompressedState> {
    let d = phi.d();
    let alpha = phi.amplitudes();
    let occs = enumerate_occupations(n, d)?;
    let mut amps = Vec::with_capacity(occs.len());
    for c in &occs {
        let ln_multi = ln_factorial(n) - c.counts().iter().map(|&ci| ln_factorial(ci)).sum::<f64>();
        let mut amp = C64::new((0.5 * ln_multi).exp(), 0.0);
        for (i, &ci) in c.counts().iter().enumerate() {
            for _ in 0..ci {
                amp *= alpha[i];
            }
        }
        amps.push(amp);
    }
    debug_assert_eq!(amps.len() as u64, dim_symmetric(n, d)?);
    CompressedState::from_amplitudes_unchecked(d, n, amps)
}

/// Basis relabeling `|i_1 ... i_n> -> |i_{s^-1(1)} ... i_{s^-1(n)}>`.
pub fn permutation_action(s: &Permutation, psi: &DenseState) -> Result<DenseState> {
    let (d, n) = (psi.d(), psi.n());
    if s.len() != n {
        return Err(Error::InvalidArgument(format!(
            "permutation length {} does not match n = {n}",
            s.len()
        )));
    }
    let size = psi.amplitudes().len();
    let mut out = vec![C64::new(0.0, 0.0); size];
    for (idx, &a) in psi.amplitudes().iter().enumerate() {
        let string = string_of_index(idx, d, n);
        let mut moved = vec![0usize; n];
        for (pos, &letter) in string.iter().enumerate() {
            moved[s.apply(pos)] = letter;
        }
        out[index_of_string(&moved, d)] = a;
    }
    DenseState::from_amplitudes_unchecked(d, n, out)
}

/// Applies `u` to every factor of the register.
pub fn tensor_unitary_action(u: &LocalUnitary, psi: &DenseState) -> Result<DenseState> {
    let (d, n) = (psi.d(), psi.n());
    if u.d() != d {
        return Err(Error::InvalidArgument(format!(
            "unitary dimension {} does not match d = {d}",
            u.d()
        )));
    }
    let mut amps = psi.amplitudes().to_vec();
    let size = amps.len();
    for pos in 0..n {
        let stride = d.pow((n - 1 - pos) as u32);
        let mut next = vec![C64::new(0.0, 0.0); size];
        for idx in 0..size {
            let letter = (idx / stride) % d;
            let base = idx - letter * stride;
            for target in 0..d {
                next[base + target * stride] += u.entry(target, letter) * amps[idx];
            }
        }
        amps = next;
    }
    DenseState::from_amplitudes_unchecked(d, n, amps)
}

/// Closed-form symmetric-branch coefficient for coupling the weight state
/// `m` of the spin-k/2 tower with one more spin-1/2 letter. In occupation
/// terms (c_1, c_2) = (m, k-m), letter 1 absorbs into slot 1 and letter 2
/// into slot 2, giving `sqrt((c_letter + 1)/(k + 1))`.
pub fn spin_cg_closed_form(k: usize, m: usize, letter: usize) -> Result<f64> {
    if m > k {
        return Err(Error::InvalidArgument(format!("m = {m} out of range for k = {k}")));
    }
    let c = match letter {
        1 => m,
        2 => k - m,
        _ => return Err(Error::InvalidArgument(format!("letter must be 1 or 2, got {letter}"))),
    };
    Ok((((c + 1) as f64) / ((k + 1) as f64)).sqrt())
}

/// Standard complex Gaussian via Box-Muller.
pub fn random_c64(rng: &mut impl Rng) -> C64 {
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    C64::new(r * theta.cos(), r * theta.sin()) / std::f64::consts::SQRT_2
}

/// Normalized qudit with complex-Gaussian amplitudes.
pub fn random_qudit(d: usize, rng: &mut impl Rng) -> PureQudit {
    loop {
        let amps: Vec<C64> = (0..d).map(|_| random_c64(rng)).collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            let amps = amps.iter().map(|a| a / norm).collect();
            return PureQudit::new(amps).expect("normalized by construction");
        }
    }
}

/// Haar-ish random unitary: Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary(d: usize, rng: &mut impl Rng) -> LocalUnitary {
    loop {
        let mut rows: Vec<Vec<C64>> = Vec::with_capacity(d);
        for _ in 0..d {
            rows.push((0..d).map(|_| random_c64(rng)).collect());
        }
        let mut ortho: Vec<Vec<C64>> = Vec::with_capacity(d);
        let mut ok = true;
        for mut row in rows {
            for prev in &ortho {
                let proj: C64 = prev.iter().zip(&row).map(|(p, r)| p.conj() * r).sum();
                for (x, p) in row.iter_mut().zip(prev) {
                    *x -= proj * p;
                }
            }
            let norm = row.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            ortho.push(row.iter().map(|a| a / norm).collect());
        }
        if !ok {
            continue;
        }
        let entries: Vec<C64> = ortho.into_iter().flatten().collect();
        if let Ok(u) = LocalUnitary::new(entries, d) {
            return u;
        }
    }
}

pub fn inner_product(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}
