//! The compression cascade and its dense validation counterpart.
//!
//! [`compress`] carries only the symmetric-block amplitude vector through
//! the steps `v_{k+1} = W_k (v_k (x) phi)`, so its working set is
//! `C(n+d-1, d-1)` amplitudes rather than `d^n`. [`compress_dense`] runs
//! the completed unitaries on the full register at validation scale and
//! reports how much norm leaks out of the symmetric tower;
//! [`decompress`] inverts the cascade by applying the adjoints in reverse.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use ndarray::{s, Array2};
use num_complex::Complex64 as C64;

use crate::cg::{build_cg_symmetric, complete_to_unitary, CgIsometry};
use crate::combinatorics::dim_symmetric;
use crate::error::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Output size below which a cascade step is applied sequentially even in
/// parallel builds; per-row work is a handful of flops, so small steps
/// cannot amortize the pool dispatch.
#[cfg(feature = "parallel")]
const PAR_THRESHOLD: usize = 1 << 16;

/// Scale bounds for the paths that materialize `d^n` amplitudes.
const DENSE_D_MAX: usize = 3;
const DENSE_N_MAX: usize = 6;

/// A normalized pure state of one d-dimensional system.
#[derive(Debug, Clone, PartialEq)]
pub struct PureQudit {
    amplitudes: Vec<C64>,
}

impl PureQudit {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument("qudit needs at least one amplitude".into()));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > 1e-12 {
            return Err(Error::Unnormalized { norm: norm_sqr.sqrt() });
        }
        Ok(PureQudit { amplitudes })
    }

    /// The computational basis state |i>.
    pub fn basis_state(d: usize, i: usize) -> Result<Self> {
        if i >= d {
            return Err(Error::InvalidArgument(format!("basis index {i} out of range for d={d}")));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); d];
        amplitudes[i] = C64::new(1.0, 0.0);
        Ok(PureQudit { amplitudes })
    }

    pub fn d(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }
}

/// Amplitudes over canonical weight-n occupation vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressedState {
    d: usize,
    n: usize,
    amplitudes: Vec<C64>,
}

impl CompressedState {
    /// Checked constructor: length `dim_symmetric(n, d)` and unit norm
    /// within 1e-9.
    pub fn new(d: usize, n: usize, amplitudes: Vec<C64>) -> Result<Self> {
        let cs = Self::from_amplitudes_unchecked(d, n, amplitudes)?;
        let norm = cs.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Unnormalized { norm });
        }
        Ok(cs)
    }

    /// Length-checked constructor without the norm requirement (dense-path
    /// outputs carry norm 1 - leakage).
    pub fn from_amplitudes_unchecked(d: usize, n: usize, amplitudes: Vec<C64>) -> Result<Self> {
        let expected = dim_symmetric(n, d)? as usize;
        if amplitudes.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "expected {expected} amplitudes for d={d}, n={n}, got {}",
                amplitudes.len()
            )));
        }
        Ok(CompressedState { d, n, amplitudes })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Amplitudes over the full computational basis of n qudits, first factor
/// most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    d: usize,
    n: usize,
    amplitudes: Vec<C64>,
}

impl DenseState {
    pub fn new(d: usize, n: usize, amplitudes: Vec<C64>) -> Result<Self> {
        let psi = Self::from_amplitudes_unchecked(d, n, amplitudes)?;
        let norm = psi.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Unnormalized { norm });
        }
        Ok(psi)
    }

    pub fn from_amplitudes_unchecked(d: usize, n: usize, amplitudes: Vec<C64>) -> Result<Self> {
        let expected = (d as u128)
            .checked_pow(n as u32)
            .filter(|&s| s <= usize::MAX as u128)
            .ok_or_else(|| Error::Overflow(format!("d^n for d={d}, n={n}")))?
            as usize;
        if amplitudes.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "expected {expected} amplitudes for d={d}, n={n}, got {}",
                amplitudes.len()
            )));
        }
        Ok(DenseState { d, n, amplitudes })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// In-run cache of constructed isometries, shared across calls. Oversized
/// entries are built per call instead of cached.
struct IsometryCache {
    map: HashMap<(usize, usize), Arc<CgIsometry>>,
    bytes: usize,
}

const CACHE_BUDGET_BYTES: usize = 512 << 20;

fn cache() -> &'static Mutex<IsometryCache> {
    static CACHE: OnceLock<Mutex<IsometryCache>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(IsometryCache { map: HashMap::new(), bytes: 0 }))
}

/// Returns the step-k isometry, building it on a miss.
pub fn cached_isometry(d: usize, k: usize) -> Result<Arc<CgIsometry>> {
    if let Some(w) = cache().lock().expect("cache poisoned").map.get(&(d, k)) {
        return Ok(Arc::clone(w));
    }
    let w = Arc::new(build_cg_symmetric(d, k)?);
    let mut guard = cache().lock().expect("cache poisoned");
    let entry_bytes = w.approx_bytes();
    if let Some(existing) = guard.map.get(&(d, k)) {
        return Ok(Arc::clone(existing));
    }
    if guard.bytes + entry_bytes <= CACHE_BUDGET_BYTES {
        guard.map.insert((d, k), Arc::clone(&w));
        guard.bytes += entry_bytes;
    }
    Ok(w)
}

/// Seeds the in-run cache with an externally constructed isometry (for
/// example one reloaded from disk). Ignored if over budget.
pub fn preload_isometry(w: CgIsometry) {
    let mut guard = cache().lock().expect("cache poisoned");
    let entry_bytes = w.approx_bytes();
    let key = (w.d(), w.k());
    if !guard.map.contains_key(&key) && guard.bytes + entry_bytes <= CACHE_BUDGET_BYTES {
        guard.map.insert(key, Arc::new(w));
        guard.bytes += entry_bytes;
    }
}

/// One cascade step: `out = W (v (x) phi)`, summing at most d products per
/// output entry via the selection rule.
fn apply_isometry(w: &CgIsometry, v: &[C64], phi: &[C64], parallel: bool) -> Vec<C64> {
    let d = w.d();
    let rows = w.rows();
    let eval = |r: usize| -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for letter in 0..d {
            let coeff = w.coefficient(r, letter);
            if coeff != 0.0 {
                acc += coeff * v[w.input_index(r, letter)] * phi[letter];
            }
        }
        acc
    };
    #[cfg(feature = "parallel")]
    {
        if parallel && rows >= PAR_THRESHOLD {
            return (0..rows).into_par_iter().with_min_len(16384).map(eval).collect();
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = parallel;
    (0..rows).map(eval).collect()
}

fn cascade(phi: &PureQudit, n: usize, parallel: bool) -> Result<CompressedState> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let d = phi.d();
    dim_symmetric(n, d)?; // fail on overflow before doing any work
    let mut v = phi.amplitudes().to_vec();
    for k in 1..n {
        let w = cached_isometry(d, k)?;
        v = apply_isometry(&w, &v, phi.amplitudes(), parallel);
    }
    CompressedState::new(d, n, v)
}

/// Compresses `|phi>^(x n)` into the weight-n symmetric register.
///
/// Runs the cascade steps in parallel across output entries when the crate
/// is built with the `parallel` feature (the default); results are
/// bit-identical to [`compress_sequential`] either way, since each output
/// entry is an independent fixed-order sum.
pub fn compress(phi: &PureQudit, n: usize) -> Result<CompressedState> {
    cascade(phi, n, true)
}

/// Single-threaded cascade, independent of the thread pool.
pub fn compress_sequential(phi: &PureQudit, n: usize) -> Result<CompressedState> {
    cascade(phi, n, false)
}

fn check_dense_scale(d: usize, n: usize) -> Result<()> {
    if d > DENSE_D_MAX || n > DENSE_N_MAX {
        return Err(Error::ScaleExceeded(format!(
            "dense path is capped at d <= {DENSE_D_MAX}, n <= {DENSE_N_MAX} (got d={d}, n={n})"
        )));
    }
    Ok(())
}

/// Runs the cascade on a full `d^n` register using completed unitaries,
/// keeping the symmetric-tower component and measuring what leaves it.
///
/// Returns the weight-n block amplitudes (norm^2 = 1 - leakage) and the
/// leaked norm^2. Product-state inputs stay in the tower up to rounding;
/// the d = 2 singlet leaks entirely.
pub fn compress_dense(psi: &DenseState) -> Result<(CompressedState, f64)> {
    let (d, n) = (psi.d(), psi.n());
    check_dense_scale(d, n)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let mut data = psi.amplitudes().to_vec();
    let mut leakage = 0.0f64;
    for k in 1..n {
        let w = cached_isometry(d, k)?;
        let u = complete_to_unitary(&w);
        let lead = u.side(); // dim(k) * d
        let trail = data.len() / lead;
        let arr = Array2::from_shape_vec((lead, trail), data)
            .expect("cascade layout is (lead, trail) row-major");
        let out = u.matrix().dot(&arr);
        let kept = w.rows();
        leakage += out.slice(s![kept.., ..]).iter().map(|z| z.norm_sqr()).sum::<f64>();
        data = out.slice(s![..kept, ..]).iter().cloned().collect();
    }
    let cs = CompressedState::from_amplitudes_unchecked(d, n, data)?;
    Ok((cs, leakage))
}

/// Adjoint cascade: embeds a compressed register back into the full
/// `d^n`-dimensional space.
pub fn decompress(cs: &CompressedState) -> Result<DenseState> {
    let (d, n) = (cs.d(), cs.n());
    check_dense_scale(d, n)?;
    let mut data = cs.amplitudes().to_vec();
    for k in (1..n).rev() {
        let w = cached_isometry(d, k)?;
        let lead = w.rows(); // dim(k+1)
        let trail = data.len() / lead;
        let arr = Array2::from_shape_vec((lead, trail), data)
            .expect("cascade layout is (lead, trail) row-major");
        let adjoint = w.dense().mapv(|z| z.conj()).reversed_axes();
        let out = adjoint.dot(&arr); // (dim(k) * d, trail)
        data = out.iter().cloned().collect();
    }
    DenseState::new(d, n, data)
}

/// Matrix-dimension proxy for the total cascade cost:
/// `(n-1) * (d-1) * dim_symmetric(n, d)`.
pub fn estimate_cost(n: usize, d: usize) -> Result<u64> {
    if n == 0 || d <= 1 {
        return Ok(0);
    }
    let dim = dim_symmetric(n, d)?;
    (n as u64 - 1)
        .checked_mul(d as u64 - 1)
        .and_then(|x| x.checked_mul(dim))
        .ok_or_else(|| Error::Overflow(format!("cost estimate for n={n}, d={d}")))
}
