//! Assembled Clebsch-Gordan transforms.
//!
//! [`build_cg_symmetric`] produces the block that the compression cascade
//! actually uses: the isometry from `Q_[k] (x) Q_[1]` onto `Q_[k+1]`,
//! assembled recursively from reduced Wigner coefficients over the subgroup
//! chain. [`complete_to_unitary`] extends it to the full unitary the
//! transform would be on hardware, and [`build_cg_full`] constructs the
//! whole transform (every output block, arbitrary input irrep) at
//! validation scale to check the recursion against.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::combinatorics::{
    dim_symmetric, enumerate_occupations, enumerate_patterns, occupation_index, GelfandPattern,
    OccupationVector, Partition,
};
use crate::error::{Error, Result};
use crate::wigner::{reduced_wigner, WignerContext};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Row count below which building in parallel is not worth the overhead.
#[cfg(feature = "parallel")]
const PAR_THRESHOLD: usize = 1 << 15;

/// The `Q_[k+1]` block of the step-k Clebsch-Gordan transform.
///
/// Rows are indexed by weight-(k+1) occupation vectors in canonical order;
/// columns by pairs (weight-k occupation, letter) with column index
/// `occupation_index(c) * d + letter`. The selection rule makes the matrix
/// extremely sparse (row c' is supported on the columns (c' - e_i, i)), so
/// the entries are stored per (row, letter); [`CgIsometry::dense`]
/// materializes the full matrix on demand.
#[derive(Debug, Clone)]
pub struct CgIsometry {
    d: usize,
    k: usize,
    /// (rows, d); zero where the selection rule forbids an entry.
    coeffs: Array2<f64>,
    /// (rows, d); canonical rank of the input occupation c' - e_i.
    input_rank: Array2<usize>,
    row_occs: Vec<OccupationVector>,
}

impl CgIsometry {
    pub fn d(&self) -> usize {
        self.d
    }

    /// Input weight; the isometry maps weight k to weight k+1.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> usize {
        self.row_occs.len()
    }

    pub fn cols(&self) -> usize {
        self.coeffs.ncols() * (self.rows_input())
    }

    fn rows_input(&self) -> usize {
        // dim of the weight-k input block
        dim_symmetric(self.k, self.d).expect("validated at construction") as usize
    }

    /// Output occupation vectors in row order.
    pub fn row_occupations(&self) -> &[OccupationVector] {
        &self.row_occs
    }

    /// Coefficient on the column (row_occupation - e_letter, letter);
    /// zero when that slot of the output occupation is empty.
    pub fn coefficient(&self, row: usize, letter: usize) -> f64 {
        self.coeffs[[row, letter]]
    }

    /// Canonical rank of the input occupation feeding (row, letter).
    /// Only meaningful where [`Self::coefficient`] is nonzero.
    pub fn input_index(&self, row: usize, letter: usize) -> usize {
        self.input_rank[[row, letter]]
    }

    /// Entry at (row, col) with `col = occupation_index(c) * d + letter`.
    pub fn entry(&self, row: usize, col: usize) -> C64 {
        let letter = col % self.d;
        let rank = col / self.d;
        if self.coeffs[[row, letter]] != 0.0 && self.input_rank[[row, letter]] == rank {
            C64::new(self.coeffs[[row, letter]], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    }

    /// Full dense matrix, shape (rows, cols).
    pub fn dense(&self) -> Array2<C64> {
        let mut m = Array2::from_elem((self.rows(), self.cols()), C64::new(0.0, 0.0));
        for row in 0..self.rows() {
            for letter in 0..self.d {
                let v = self.coeffs[[row, letter]];
                if v != 0.0 {
                    m[[row, self.input_rank[[row, letter]] * self.d + letter]] = C64::new(v, 0.0);
                }
            }
        }
        m
    }

    /// Rebuilds the structured form from a dense matrix, re-verifying the
    /// selection rule and row orthonormality (within `tol`).
    pub fn from_dense(d: usize, k: usize, matrix: &Array2<C64>, tol: f64) -> Result<Self> {
        let rows = dim_symmetric(k + 1, d)? as usize;
        let cols = dim_symmetric(k, d)? as usize * d;
        if matrix.nrows() != rows || matrix.ncols() != cols {
            return Err(Error::InvalidArgument(format!(
                "expected a {rows}x{cols} matrix for d={d}, k={k}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let row_occs = enumerate_occupations(k + 1, d)?;
        let mut coeffs = Array2::zeros((rows, d));
        let mut input_rank = Array2::zeros((rows, d));
        for (r, occ) in row_occs.iter().enumerate() {
            let mut allowed = vec![usize::MAX; d];
            for letter in 0..d {
                if let Some(c) = occ.decremented(letter) {
                    let rank = occupation_index(&c)?;
                    allowed[letter] = rank * d + letter;
                    let v = matrix[[r, rank * d + letter]];
                    if v.im.abs() > tol {
                        return Err(Error::InvalidArgument(format!(
                            "entry ({r}, {}) has non-real value {v}",
                            rank * d + letter
                        )));
                    }
                    coeffs[[r, letter]] = v.re;
                    input_rank[[r, letter]] = rank;
                }
            }
            for col in 0..cols {
                if !allowed.contains(&col) && matrix[[r, col]].norm() > tol {
                    return Err(Error::InvalidArgument(format!(
                        "selection rule violated at ({r}, {col})"
                    )));
                }
            }
        }
        let w = CgIsometry { d, k, coeffs, input_rank, row_occs };
        let err = max_row_gram_error(&w);
        if err > tol {
            return Err(Error::InvalidArgument(format!(
                "rows are not orthonormal: max |W W+ - I| = {err:.3e}"
            )));
        }
        Ok(w)
    }

    /// Approximate heap footprint, used by the in-run cache budget.
    pub(crate) fn approx_bytes(&self) -> usize {
        self.rows() * self.d * (std::mem::size_of::<f64>() + std::mem::size_of::<usize>())
    }
}

fn max_row_gram_error(w: &CgIsometry) -> f64 {
    // distinct rows have disjoint column support (c' determines its input
    // columns uniquely), so the Gram matrix is diagonal and only row norms
    // need checking
    let mut err = 0.0f64;
    for r in 0..w.rows() {
        let norm: f64 = (0..w.d).map(|l| w.coefficient(r, l).powi(2)).sum();
        err = err.max((norm - 1.0).abs());
    }
    err
}

/// The trivial d = 1 step: a 1x1 map from weight k to weight k+1.
pub fn build_cg_d1(k: usize) -> CgIsometry {
    build_cg_symmetric(1, k).expect("d = 1 construction cannot fail")
}

/// Reduced Wigner values for one-row contexts, tabulated once per build.
/// The per-entry chains then reduce to table lookups instead of repeated
/// context construction.
struct PhiTable {
    span: usize, // k + 1 weights per level
    /// (j, j') = (1, 1) at [level][m_top][m_next]: letter continues below.
    absorb: Vec<f64>,
    /// (j, j') = (1, 0) at [level][m_top][m_next]: letter lands here.
    pass: Vec<f64>,
}

impl PhiTable {
    fn build(d: usize, k: usize) -> Result<PhiTable> {
        let span = k + 1;
        let levels = d.saturating_sub(1); // levels 2..=d
        let mut absorb = vec![0.0f64; levels * span * span];
        let mut pass = vec![0.0f64; levels * span * span];
        for level in 2..=d {
            for m_top in 0..=k {
                for m_next in 0..=m_top {
                    let idx = ((level - 2) * span + m_top) * span + m_next;
                    let top = Partition::symmetric(m_top, level)?;
                    let next = Partition::symmetric(m_next, level - 1)?;
                    absorb[idx] =
                        reduced_wigner(&WignerContext::new(top.clone(), next.clone(), 1, 1)?)?;
                    pass[idx] = reduced_wigner(&WignerContext::new(top, next, 1, 0)?)?;
                }
            }
        }
        Ok(PhiTable { span, absorb, pass })
    }

    #[inline]
    fn absorb(&self, level: usize, m_top: usize, m_next: usize) -> f64 {
        self.absorb[((level - 2) * self.span + m_top) * self.span + m_next]
    }

    #[inline]
    fn pass(&self, level: usize, m_top: usize, m_next: usize) -> f64 {
        self.pass[((level - 2) * self.span + m_top) * self.span + m_next]
    }
}

/// Builds the symmetric-tower block of the step-k CG transform.
///
/// Each entry is a product of reduced Wigner coefficients down the subgroup
/// chain: letters below the current level recurse with (j, j') = (1, 1),
/// the level where the letter is absorbed contributes (j, j') = (1, 0), and
/// the d = 1 base is the trivial shift. Rows are then phase-fixed so the
/// entry with the lexicographically smallest column index is real positive.
pub fn build_cg_symmetric(d: usize, k: usize) -> Result<CgIsometry> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be >= 1".into()));
    }
    let rows = usize::try_from(dim_symmetric(k + 1, d)?)
        .map_err(|_| Error::Overflow(format!("dim({}, {d}) as usize", k + 1)))?;
    dim_symmetric(k, d)?
        .checked_mul(d as u64)
        .ok_or_else(|| Error::Overflow(format!("column count for d={d}, k={k}")))?;
    let row_occs = enumerate_occupations(k + 1, d)?;
    let phi = PhiTable::build(d, k)?;

    let build_row = |occ: &OccupationVector| -> Result<(Vec<f64>, Vec<usize>)> {
        let mut coeffs = vec![0.0f64; d];
        let mut ranks = vec![0usize; d];
        for letter in 0..d {
            if let Some(c) = occ.decremented(letter) {
                ranks[letter] = occupation_index(&c)?;
                coeffs[letter] = symmetric_coefficient(&c, letter, &phi);
            }
        }
        Ok((coeffs, ranks))
    };

    let per_row: Vec<(Vec<f64>, Vec<usize>)> = {
        #[cfg(feature = "parallel")]
        {
            if rows >= PAR_THRESHOLD {
                row_occs
                    .par_iter()
                    .with_min_len(1024)
                    .map(build_row)
                    .collect::<Result<Vec<_>>>()?
            } else {
                row_occs.iter().map(build_row).collect::<Result<Vec<_>>>()?
            }
        }
        #[cfg(not(feature = "parallel"))]
        {
            row_occs.iter().map(build_row).collect::<Result<Vec<_>>>()?
        }
    };

    let mut coeffs = Array2::zeros((rows, d));
    let mut input_rank = Array2::zeros((rows, d));
    for (r, (cs, rk)) in per_row.into_iter().enumerate() {
        for letter in 0..d {
            coeffs[[r, letter]] = cs[letter];
            input_rank[[r, letter]] = rk[letter];
        }
    }
    let mut w = CgIsometry { d, k, coeffs, input_rank, row_occs };
    fix_row_signs(&mut w);
    Ok(w)
}

/// Cascade coefficient for absorbing `letter` (0-based) into the weight-k
/// occupation `c`, i.e. the entry (c + e_letter; (c, letter)).
fn symmetric_coefficient(c: &OccupationVector, letter: usize, phi: &PhiTable) -> f64 {
    let d = c.d();
    let level_of_letter = letter + 1;
    // prefix weights m[s] = c_1 + ... + c_s
    let mut m = vec![0usize; d + 1];
    for s in 1..=d {
        m[s] = m[s - 1] + c.count(s - 1);
    }
    let mut coeff = 1.0f64;
    for level in level_of_letter + 1..=d {
        coeff *= phi.absorb(level, m[level], m[level - 1]);
    }
    if level_of_letter >= 2 {
        coeff *= phi.pass(level_of_letter, m[level_of_letter], m[level_of_letter - 1]);
    }
    coeff
}

/// Multiplies each row by the phase that makes its lexicographically first
/// nonzero entry real positive.
fn fix_row_signs(w: &mut CgIsometry) {
    for r in 0..w.rows() {
        let mut first: Option<(usize, f64)> = None;
        for letter in 0..w.d {
            let v = w.coeffs[[r, letter]];
            if v != 0.0 {
                let col = w.input_rank[[r, letter]] * w.d + letter;
                if first.map_or(true, |(c, _)| col < c) {
                    first = Some((col, v));
                }
            }
        }
        if let Some((_, v)) = first {
            if v < 0.0 {
                for letter in 0..w.d {
                    w.coeffs[[r, letter]] = -w.coeffs[[r, letter]];
                }
            }
        }
    }
}

/// One output block of a CG unitary: a row range, labeled by its irrep when
/// the block is one (completions leave the supplemented rows unlabeled).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CgBlock {
    pub label: Option<Partition>,
    pub rows: std::ops::Range<usize>,
}

/// A square CG transform on `Q_[mu] (x) Q_[1]`.
#[derive(Debug, Clone)]
pub struct CgUnitary {
    d: usize,
    mu: Partition,
    matrix: Array2<C64>,
    blocks: Vec<CgBlock>,
}

impl CgUnitary {
    pub fn d(&self) -> usize {
        self.d
    }

    /// Weight of the input irrep.
    pub fn k(&self) -> usize {
        self.mu.weight()
    }

    pub fn mu(&self) -> &Partition {
        &self.mu
    }

    pub fn side(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn blocks(&self) -> &[CgBlock] {
        &self.blocks
    }

    /// The rows belonging to the given output irrep, if present.
    pub fn block_rows(&self, lambda: &Partition) -> Option<std::ops::Range<usize>> {
        self.blocks
            .iter()
            .find(|b| b.label.as_ref() == Some(lambda))
            .map(|b| b.rows.clone())
    }
}

/// Deterministically extends an isometry's rows to an orthonormal basis.
///
/// Canonical basis vectors are orthogonalized against the accepted rows in
/// index order; candidates whose residual norm falls below 1e-8 are
/// skipped. The original rows are kept bit-exactly as the leading block.
pub fn complete_to_unitary(w: &CgIsometry) -> CgUnitary {
    let side = w.cols();
    let dense = w.dense();
    let mut rows: Vec<Vec<C64>> = (0..w.rows()).map(|r| dense.row(r).to_vec()).collect();
    for idx in 0..side {
        if rows.len() == side {
            break;
        }
        let mut cand = vec![C64::new(0.0, 0.0); side];
        cand[idx] = C64::new(1.0, 0.0);
        // two passes keep the completion orthogonal to working precision
        for _ in 0..2 {
            for row in &rows {
                let proj: C64 = row.iter().zip(&cand).map(|(r, c)| r.conj() * c).sum();
                for (c, r) in cand.iter_mut().zip(row) {
                    *c -= proj * r;
                }
            }
        }
        let norm = cand.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        for c in cand.iter_mut() {
            *c /= norm;
        }
        rows.push(cand);
    }
    debug_assert_eq!(rows.len(), side);
    let mut matrix = Array2::from_elem((side, side), C64::new(0.0, 0.0));
    for (r, row) in rows.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            matrix[[r, c]] = *v;
        }
    }
    let sym = Partition::symmetric(w.k() + 1, w.d()).expect("d >= 1");
    let blocks = vec![
        CgBlock { label: Some(sym), rows: 0..w.rows() },
        CgBlock { label: None, rows: w.rows()..side },
    ];
    CgUnitary { d: w.d(), mu: Partition::symmetric(w.k(), w.d()).expect("d >= 1"), matrix, blocks }
}

/// Scale bounds for [`build_cg_full`]; it exists to validate the recursion
/// against the dense picture, not for production use.
const FULL_D_MAX: usize = 3;
const FULL_WEIGHT_MAX: usize = 4;

/// Builds the complete CG transform on `Q_[mu] (x) Q_[1]`, every output
/// block included.
///
/// Columns are (pattern of mu, letter) pairs with column index
/// `pattern_rank * d + letter`; rows enumerate the patterns of each
/// `lambda` in `mu` + box, blocks in canonical order of lambda and
/// patterns in canonical order within each block.
pub fn build_cg_full(d: usize, mu: &Partition) -> Result<CgUnitary> {
    if mu.num_parts() != d {
        return Err(Error::InvalidArgument(format!(
            "mu = {mu} has {} parts, expected {d}",
            mu.num_parts()
        )));
    }
    if d > FULL_D_MAX || mu.weight() > FULL_WEIGHT_MAX {
        return Err(Error::ScaleExceeded(format!(
            "full CG construction is capped at d <= {FULL_D_MAX}, weight <= {FULL_WEIGHT_MAX}"
        )));
    }

    let in_patterns = enumerate_patterns(mu, d)?;
    let side = in_patterns.len() * d;

    let mut blocks = Vec::new();
    let mut row_of = std::collections::HashMap::new();
    let mut offset = 0usize;
    for lambda in mu.add_boxes() {
        let pats = enumerate_patterns(&lambda, d)?;
        for (i, p) in pats.iter().enumerate() {
            row_of.insert(p.clone(), offset + i);
        }
        blocks.push(CgBlock { label: Some(lambda), rows: offset..offset + pats.len() });
        offset += pats.len();
    }
    debug_assert_eq!(offset, side);

    let mut matrix = Array2::from_elem((side, side), C64::new(0.0, 0.0));
    for (p_rank, p) in in_patterns.iter().enumerate() {
        for letter in 1..=d {
            let col = p_rank * d + (letter - 1);
            for (out_pattern, coeff) in full_cg_column(p, letter)? {
                let row = *row_of.get(&out_pattern).ok_or_else(|| {
                    Error::InvalidArgument(format!("unindexed output pattern {out_pattern:?}"))
                })?;
                matrix[[row, col]] += C64::new(coeff, 0.0);
            }
        }
    }
    Ok(CgUnitary { d, mu: mu.clone(), matrix, blocks })
}

/// Output amplitudes of the CG transform on one basis vector
/// |pattern> |letter> (letter 1-based).
fn full_cg_column(p: &GelfandPattern, letter: usize) -> Result<Vec<(GelfandPattern, f64)>> {
    let d = p.levels();
    if letter == 0 || letter > d {
        return Err(Error::InvalidArgument(format!("letter {letter} out of range 1..={d}")));
    }
    if d == 1 {
        let out = GelfandPattern::new(vec![vec![p.row(1)[0] + 1]])?;
        return Ok(vec![(out, 1.0)]);
    }
    let top = p.top_row();
    let next_row = Partition::new(p.row(d - 1).to_vec())?;
    let mut out = Vec::new();
    if letter == d {
        let sub = p.sub_pattern()?;
        for j in 1..=d {
            let Some(new_top) = top.add_box(j) else { continue };
            if !next_row.interlaces(&new_top)? {
                continue; // zero numerator in the coefficient formula
            }
            let ctx = WignerContext::new(top.clone(), next_row.clone(), j, 0)?;
            let coeff = reduced_wigner(&ctx)?;
            if coeff != 0.0 {
                out.push((GelfandPattern::with_top(&new_top, &sub)?, coeff));
            }
        }
    } else {
        let sub = p.sub_pattern()?;
        for (sub_out, sub_coeff) in full_cg_column(&sub, letter)? {
            let new_next = sub_out.top_row();
            let j_prime = (0..d - 1)
                .find(|&i| new_next.part(i) == next_row.part(i) + 1)
                .expect("sub-transform adds exactly one box")
                + 1;
            for j in 1..=d {
                let Some(new_top) = top.add_box(j) else { continue };
                if !new_next.interlaces(&new_top)? {
                    continue;
                }
                let ctx = WignerContext::new(top.clone(), next_row.clone(), j, j_prime)?;
                let v = sub_coeff * reduced_wigner(&ctx)?;
                if v != 0.0 {
                    out.push((GelfandPattern::with_top(&new_top, &sub_out)?, v));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::spin_cg_closed_form;

    fn part(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn occ(counts: &[usize]) -> OccupationVector {
        OccupationVector::new(counts.to_vec()).unwrap()
    }

    fn max_abs(m: &Array2<C64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn unitarity_error(m: &Array2<C64>) -> f64 {
        let adj = m.mapv(|z| z.conj()).reversed_axes();
        let mut gram = adj.dot(m);
        for i in 0..gram.nrows() {
            gram[[i, i]] -= 1.0;
        }
        let mut gram2 = m.dot(&m.mapv(|z| z.conj()).reversed_axes());
        for i in 0..gram2.nrows() {
            gram2[[i, i]] -= 1.0;
        }
        max_abs(&gram).max(max_abs(&gram2))
    }

    #[test]
    fn d1_step_is_trivial() {
        for k in [0usize, 5] {
            let w = build_cg_d1(k);
            assert_eq!((w.rows(), w.cols()), (1, 1));
            assert_eq!(w.entry(0, 0), C64::new(1.0, 0.0));
        }
        // composing the 1x1 steps over many k stays exactly 1
        let product: f64 = (0..10).map(|k| build_cg_d1(k).coefficient(0, 0)).product();
        assert_eq!(product, 1.0);
    }

    #[test]
    fn d2_k1_entries() {
        let w = build_cg_symmetric(2, 1).unwrap();
        // rows: (2,0), (1,1), (0,2); inputs: (1,0) rank 0, (0,1) rank 1
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let r = |c: &[usize]| occupation_index(&occ(c)).unwrap();
        assert!((w.coefficient(r(&[1, 1]), 1) - s).abs() < 1e-15); // |(1,0),i=2>
        assert!((w.coefficient(r(&[1, 1]), 0) - s).abs() < 1e-15); // |(0,1),i=1>
        assert!((w.coefficient(r(&[2, 0]), 0) - 1.0).abs() < 1e-15);
        assert!((w.coefficient(r(&[0, 2]), 1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn leading_occupation_has_unit_coefficient() {
        for d in 1..=4 {
            for k in 0..=5 {
                let w = build_cg_symmetric(d, k).unwrap();
                assert!((w.coefficient(0, 0) - 1.0).abs() < 1e-14, "d={d} k={k}");
                assert_eq!(w.input_index(0, 0), 0);
            }
        }
    }

    #[test]
    fn entries_match_occupation_ratio_law() {
        for d in 1..=4usize {
            for k in 0..=8usize {
                let w = build_cg_symmetric(d, k).unwrap();
                for (r, c_out) in w.row_occupations().iter().enumerate() {
                    for letter in 0..d {
                        let expected = if c_out.count(letter) == 0 {
                            0.0
                        } else {
                            (c_out.count(letter) as f64 / (k + 1) as f64).sqrt()
                        };
                        assert!(
                            (w.coefficient(r, letter) - expected).abs() < 1e-13,
                            "d={d} k={k} row={c_out} letter={letter}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn d2_entries_match_spin_closed_form() {
        for k in 0..=8usize {
            let w = build_cg_symmetric(2, k).unwrap();
            for (r, c_out) in w.row_occupations().iter().enumerate() {
                for letter in 0..2 {
                    if c_out.count(letter) == 0 {
                        continue;
                    }
                    let c_in = c_out.decremented(letter).unwrap();
                    let expected = spin_cg_closed_form(k, c_in.count(0), letter + 1).unwrap();
                    assert!(
                        (w.coefficient(r, letter).abs() - expected).abs() < 1e-13,
                        "k={k} row={c_out} letter={letter}"
                    );
                }
            }
        }
    }

    #[test]
    fn rows_are_orthonormal_with_disjoint_support() {
        for d in 1..=4 {
            for k in 0..=8 {
                let w = build_cg_symmetric(d, k).unwrap();
                let dense = w.dense();
                let gram = dense.dot(&dense.mapv(|z| z.conj()).reversed_axes());
                for i in 0..gram.nrows() {
                    for j in 0..gram.ncols() {
                        let target = if i == j { 1.0 } else { 0.0 };
                        assert!(
                            (gram[[i, j]] - target).norm() <= 1e-10,
                            "d={d} k={k} gram[{i},{j}]"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn selection_rule_zeros_are_exact() {
        for (d, k) in [(2, 3), (3, 2), (4, 1)] {
            let w = build_cg_symmetric(d, k).unwrap();
            let dense = w.dense();
            let inputs = enumerate_occupations(k, d).unwrap();
            for (r, c_out) in w.row_occupations().iter().enumerate() {
                for (rank, c_in) in inputs.iter().enumerate() {
                    for letter in 0..d {
                        let allowed = c_in.incremented(letter) == *c_out;
                        let v = dense[[r, rank * d + letter]].norm();
                        if allowed {
                            assert!(v > 0.0, "missing entry d={d} k={k} {c_in}+e{letter}");
                        } else {
                            assert!(v < 1e-12, "stray entry d={d} k={k} row {c_out}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn all_entries_positive_after_sign_fix() {
        for d in 1..=4 {
            for k in 0..=6 {
                let w = build_cg_symmetric(d, k).unwrap();
                for r in 0..w.rows() {
                    for letter in 0..d {
                        assert!(w.coefficient(r, letter) >= 0.0, "d={d} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn completion_extends_bit_exactly() {
        for (d, k) in [(2usize, 1usize), (2, 4), (3, 2), (4, 1)] {
            let w = build_cg_symmetric(d, k).unwrap();
            let u = complete_to_unitary(&w);
            assert_eq!(u.side(), w.cols());
            assert!(unitarity_error(u.matrix()) <= 1e-10, "d={d} k={k}");
            let dense = w.dense();
            for r in 0..w.rows() {
                for c in 0..w.cols() {
                    assert_eq!(u.matrix()[[r, c]], dense[[r, c]]);
                }
            }
            // supplemented rows are orthogonal to the originals
            for extra in w.rows()..u.side() {
                for r in 0..w.rows() {
                    let ip: C64 = (0..u.side())
                        .map(|c| u.matrix()[[r, c]].conj() * u.matrix()[[extra, c]])
                        .sum();
                    assert!(ip.norm() <= 1e-10);
                }
            }
            let sym = Partition::symmetric(k + 1, d).unwrap();
            assert_eq!(u.block_rows(&sym), Some(0..w.rows()));
        }
    }

    #[test]
    fn completion_of_square_input_is_identity_on_it() {
        // d = 1 gives a square (1x1) isometry
        let w = build_cg_d1(3);
        let u = complete_to_unitary(&w);
        assert_eq!(u.side(), 1);
        assert_eq!(u.matrix()[[0, 0]], C64::new(1.0, 0.0));
    }

    #[test]
    fn completion_shape_d2_k1() {
        let w = build_cg_symmetric(2, 1).unwrap();
        assert_eq!((w.rows(), w.cols()), (3, 4));
        let u = complete_to_unitary(&w);
        assert_eq!(u.side(), 4);
    }

    #[test]
    fn completion_is_deterministic() {
        let w = build_cg_symmetric(3, 3).unwrap();
        let a = complete_to_unitary(&w);
        let b = complete_to_unitary(&w);
        for (x, y) in a.matrix().iter().zip(b.matrix().iter()) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }

    #[test]
    fn full_cg_d1_is_scalar_one() {
        let u = build_cg_full(1, &part(&[2])).unwrap();
        assert_eq!(u.side(), 1);
        assert_eq!(u.matrix()[[0, 0]], C64::new(1.0, 0.0));
    }

    #[test]
    fn full_cg_d2_defining_blocks() {
        let u = build_cg_full(2, &part(&[1, 0])).unwrap();
        assert_eq!(u.side(), 4);
        assert_eq!(u.block_rows(&part(&[2, 0])), Some(0..3));
        assert_eq!(u.block_rows(&part(&[1, 1])), Some(3..4));
        assert!(unitarity_error(u.matrix()) <= 1e-10);

        // the [1,1] row is the singlet (|01> - |10>)/sqrt(2) up to sign,
        // in columns (pattern, letter) = |0>|2>, |1>|1>
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let row = 3;
        let v01 = u.matrix()[[row, 1]]; // pattern |0> (rank 0), letter 2
        let v10 = u.matrix()[[row, 2]]; // pattern |1> (rank 1), letter 1
        assert!((v01.norm() - s).abs() <= 1e-12);
        assert!((v10.norm() - s).abs() <= 1e-12);
        assert!((v01 + v10).norm() <= 1e-12, "opposite signs expected");
        assert!(u.matrix()[[row, 0]].norm() <= 1e-12);
        assert!(u.matrix()[[row, 3]].norm() <= 1e-12);
    }

    #[test]
    fn full_cg_is_unitary_at_validation_scale() {
        for d in 1..=3usize {
            for w in 0..=4usize {
                for mu in partitions_of(w, d) {
                    let u = build_cg_full(d, &mu).unwrap();
                    let err = unitarity_error(u.matrix());
                    assert!(err <= 1e-10, "d={d} mu={mu}: {err:.3e}");
                    // dimension bookkeeping across blocks
                    let total: usize = u.blocks().iter().map(|b| b.rows.len()).sum();
                    assert_eq!(total, u.side());
                    assert_eq!(u.side(), enumerate_patterns(&mu, d).unwrap().len() * d);
                }
            }
        }
    }

    #[test]
    fn full_cg_symmetric_block_matches_isometry() {
        // same operator, two constructions: the full transform restricted
        // to one-row irreps agrees with the cascade isometry entry by
        // entry, up to the row/column relabeling pattern <-> occupation
        // and the per-row sign fix.
        for (d, k) in [(2usize, 2usize), (3, 2), (3, 3)] {
            let mu = Partition::symmetric(k, d).unwrap();
            let full = build_cg_full(d, &mu).unwrap();
            let w = build_cg_symmetric(d, k).unwrap();
            let lambda = Partition::symmetric(k + 1, d).unwrap();
            let rows = full.block_rows(&lambda).unwrap();
            let out_patterns = enumerate_patterns(&lambda, d).unwrap();
            let in_patterns = enumerate_patterns(&mu, d).unwrap();
            let dense = w.dense();
            for (pr, pat) in out_patterns.iter().enumerate() {
                let c_out = crate::combinatorics::occupation_of_pattern(pat).unwrap();
                let w_row = occupation_index(&c_out).unwrap();
                // relative sign between the two conventions is constant per row
                let mut sign: Option<f64> = None;
                for (pc, pin) in in_patterns.iter().enumerate() {
                    let c_in = crate::combinatorics::occupation_of_pattern(pin).unwrap();
                    let w_rank = occupation_index(&c_in).unwrap();
                    for letter in 0..d {
                        let a = full.matrix()[[rows.start + pr, pc * d + letter]].re;
                        let b = dense[[w_row, w_rank * d + letter]].re;
                        if b.abs() < 1e-13 {
                            assert!(a.abs() < 1e-10, "stray entry d={d} k={k}");
                            continue;
                        }
                        let s = a / b;
                        match sign {
                            None => sign = Some(s.signum()),
                            Some(prev) => assert!(
                                (s.signum() - prev).abs() < 1e-12,
                                "inconsistent row sign d={d} k={k}"
                            ),
                        }
                        assert!((a.abs() - b.abs()).abs() < 1e-10, "d={d} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn full_cg_scale_bounds() {
        assert!(matches!(
            build_cg_full(4, &part(&[1, 0, 0, 0])),
            Err(Error::ScaleExceeded(_))
        ));
        assert!(matches!(
            build_cg_full(2, &part(&[5, 0])),
            Err(Error::ScaleExceeded(_))
        ));
    }

    #[test]
    fn from_dense_roundtrip_and_verification() {
        let w = build_cg_symmetric(3, 2).unwrap();
        let again = CgIsometry::from_dense(3, 2, &w.dense(), 1e-8).unwrap();
        for r in 0..w.rows() {
            for l in 0..3 {
                assert_eq!(w.coefficient(r, l).to_bits(), again.coefficient(r, l).to_bits());
            }
        }
        // corrupting an entry fails the on-load verification
        let mut bad = w.dense();
        bad[[0, 0]] = C64::new(0.5, 0.0);
        assert!(CgIsometry::from_dense(3, 2, &bad, 1e-8).is_err());
        // a stray off-pattern entry violates the selection rule
        let mut stray = w.dense();
        let cols = stray.ncols();
        stray[[0, cols - 1]] = C64::new(0.3, 0.0);
        assert!(CgIsometry::from_dense(3, 2, &stray, 1e-8).is_err());
    }

    fn partitions_of(weight: usize, d: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        collect(weight, d, usize::MAX, &mut vec![], &mut out);
        out
    }

    fn collect(rem: usize, slots: usize, bound: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if slots == 0 {
            if rem == 0 {
                out.push(Partition::new(prefix.clone()).unwrap());
            }
            return;
        }
        for v in (0..=rem.min(bound)).rev() {
            prefix.push(v);
            collect(rem - v, slots - 1, v, prefix, out);
            prefix.pop();
        }
    }
}
