//! Reduced Wigner coefficients for coupling a U(d) irrep with one defining
//! letter.
//!
//! The box-addition operator maps the row pair `([mu]_d, [mu]_{d-1})` of a
//! Gelfand pattern to `([mu]_d + e_j, [mu]_{d-1} + e_j')`, where `j' = 0`
//! means no addition at level d-1 (the absorbed letter was the top letter
//! d). Its matrix elements are ratios of products of shifted weights
//! `mu~_{k,s} = mu_{k,s} + s - k`; see [`reduced_wigner`].

use crate::combinatorics::Partition;
use crate::error::{Error, Result};

/// Shifted weight `mu_{k,s} + s - k` for the level-s row `mu` (1-based k).
pub fn shifted_weight(mu: &Partition, k: usize, s: usize) -> Result<i64> {
    if mu.num_parts() != s {
        return Err(Error::InvalidArgument(format!(
            "row {mu} has {} parts, expected level s = {s}",
            mu.num_parts()
        )));
    }
    if k == 0 || k > s {
        return Err(Error::InvalidArgument(format!("k = {k} out of range 1..={s}")));
    }
    Ok(mu.part(k - 1) as i64 + s as i64 - k as i64)
}

/// Strict step sign: +1 for x > 0, -1 otherwise (including 0).
pub fn sign_s(x: i64) -> i64 {
    if x > 0 {
        1
    } else {
        -1
    }
}

/// Branch sign actually used inside [`reduced_wigner`]: +1 for x >= 0.
///
/// Treating 0 as negative flips the j = j' diagonal, which makes the
/// assembled box-addition operator non-unitary for d >= 3 and cancels the
/// symmetric component of product states; the weak inequality is the
/// convention consistent with the d = 2 spin coupling tables.
fn branch_sign(x: i64) -> f64 {
    if x >= 0 {
        1.0
    } else {
        -1.0
    }
}

/// Row pair and box positions for one reduced Wigner coefficient.
///
/// `top` is the level-d row, `next` the level-(d-1) row before any box is
/// added; `j` in `1..=d` and `j_prime` in `0..=d-1` are the addition
/// positions (`j_prime = 0` meaning no addition at level d-1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WignerContext {
    top: Partition,
    next: Partition,
    j: usize,
    j_prime: usize,
}

impl WignerContext {
    pub fn new(top: Partition, next: Partition, j: usize, j_prime: usize) -> Result<Self> {
        let d = top.num_parts();
        if d < 2 {
            return Err(Error::InvalidArgument(
                "reduced Wigner coefficients need d >= 2; d = 1 is the trivial shift".into(),
            ));
        }
        if next.num_parts() != d - 1 {
            return Err(Error::InvalidArgument(format!(
                "next row {next} has {} parts, expected {}",
                next.num_parts(),
                d - 1
            )));
        }
        if !next.interlaces(&top)? {
            return Err(Error::InvalidArgument(format!("{next} does not interlace {top}")));
        }
        if j == 0 || j > d {
            return Err(Error::InvalidArgument(format!("j = {j} out of range 1..={d}")));
        }
        if j_prime > d - 1 {
            return Err(Error::InvalidArgument(format!(
                "j' = {j_prime} out of range 0..={}",
                d - 1
            )));
        }
        // invalid box additions are exactly the zero-denominator inputs
        if top.add_box(j).is_none() {
            return Err(Error::InvalidCombination(format!("{top} + e_{j} is not a partition")));
        }
        if j_prime >= 1 && next.add_box(j_prime).is_none() {
            return Err(Error::InvalidCombination(format!(
                "{next} + e_{j_prime} is not a partition"
            )));
        }
        Ok(WignerContext { top, next, j, j_prime })
    }

    pub fn top(&self) -> &Partition {
        &self.top
    }

    pub fn next(&self) -> &Partition {
        &self.next
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn j_prime(&self) -> usize {
        self.j_prime
    }
}

/// Matrix element of the box-addition operator for the given context.
///
/// For `j' >= 1`:
///
/// ```text
/// S(j'-j) * sqrt( prod_{s in [d-1]\j'} (t~_j - n~_s) * prod_{t in [d]\j} (n~_j' - t~_t + 1)
///               / prod_{s in [d-1]\j'} (n~_j' - n~_s + 1) / prod_{t in [d]\j} (t~_j - t~_t) )
/// ```
///
/// and for `j' = 0`:
///
/// ```text
/// S(d-j) * sqrt( prod_{s in [d-1]} (t~_j - n~_s) / prod_{t in [d]\j} (t~_j - t~_t) )
/// ```
///
/// with `t~`/`n~` the shifted weights of the top and next rows. The result
/// lies in [-1, 1]; a zero denominator cannot occur for a validated
/// [`WignerContext`] and is reported as an invalid combination, never NaN.
pub fn reduced_wigner(ctx: &WignerContext) -> Result<f64> {
    let d = ctx.top.num_parts();
    let top = |t: usize| -> i128 { (ctx.top.part(t - 1) as i64 + d as i64 - t as i64) as i128 };
    let next =
        |s: usize| -> i128 { (ctx.next.part(s - 1) as i64 + (d - 1) as i64 - s as i64) as i128 };
    let j = ctx.j;
    let jp = ctx.j_prime;

    let mut num: i128 = 1;
    let mut den: i128 = 1;
    let sign;
    if jp >= 1 {
        for s in 1..d {
            if s != jp {
                num *= top(j) - next(s);
                den *= next(jp) - next(s) + 1;
            }
        }
        for t in 1..=d {
            if t != j {
                num *= next(jp) - top(t) + 1;
                den *= top(j) - top(t);
            }
        }
        sign = branch_sign(jp as i64 - j as i64);
    } else {
        for s in 1..d {
            num *= top(j) - next(s);
        }
        for t in 1..=d {
            if t != j {
                den *= top(j) - top(t);
            }
        }
        sign = branch_sign(d as i64 - j as i64);
    }

    if den == 0 {
        return Err(Error::InvalidCombination(format!(
            "zero denominator for top={}, next={}, j={j}, j'={jp}",
            ctx.top, ctx.next
        )));
    }
    let ratio = num as f64 / den as f64;
    if ratio < 0.0 {
        return Err(Error::InvalidCombination(format!(
            "negative radicand for top={}, next={}, j={j}, j'={jp}",
            ctx.top, ctx.next
        )));
    }
    Ok(sign * ratio.sqrt())
}
