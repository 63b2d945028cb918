use super::{ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Largest order accepted by [`permanent`]; beyond this `2ⁿ` is impractical.
pub const MAX_PERMANENT_ORDER: usize = 30;

/// Permanent by Ryser's inclusion–exclusion formula, visiting column subsets
/// in Gray-code order so each step updates the row sums with one column.
///
/// `perm(A) = (−1)ⁿ Σ_{S ⊆ [n]} (−1)^{|S|} Πᵢ Σ_{j∈S} a_ij`, in `O(2ⁿ·n)`.
pub fn permanent(a: &ComplexMatrix) -> Result<C64> {
    if !a.is_square() {
        return Err(Error::InvalidDimension(format!(
            "permanent needs a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let n = a.nrows();
    if n > MAX_PERMANENT_ORDER {
        return Err(Error::InvalidDimension(format!("permanent order {n} exceeds {MAX_PERMANENT_ORDER}")));
    }
    Ok(ryser(a))
}

pub(crate) fn ryser(a: &ComplexMatrix) -> C64 {
    let n = a.nrows();
    match n {
        0 => return C64::new(1.0, 0.0),
        1 => return a[(0, 0)],
        2 => return a[(0, 0)] * a[(1, 1)] + a[(0, 1)] * a[(1, 0)],
        _ => {}
    }
    let mut row_sums = vec![C64::new(0.0, 0.0); n];
    // Neumaier-compensated accumulation of the signed products.
    let mut total = C64::new(0.0, 0.0);
    let mut carry = C64::new(0.0, 0.0);
    let mut gray_prev: u64 = 0;
    for k in 1u64..(1u64 << n) {
        let gray = k ^ (k >> 1);
        let col = (gray ^ gray_prev).trailing_zeros() as usize;
        let added = gray & (1 << col) != 0;
        gray_prev = gray;
        let column = a.column(col);
        if added {
            for (s, x) in row_sums.iter_mut().zip(column.iter()) {
                *s += x;
            }
        } else {
            for (s, x) in row_sums.iter_mut().zip(column.iter()) {
                *s -= x;
            }
        }
        let mut prod = row_sums[0];
        for s in &row_sums[1..] {
            prod *= s;
        }
        if gray.count_ones() % 2 == 1 {
            prod = -prod;
        }
        neumaier_add(&mut total, &mut carry, prod);
    }
    let total = total + carry;
    if n % 2 == 1 {
        -total
    } else {
        total
    }
}

/// Permanent of the `N × N` matrix whose column `j` of `a` appears
/// `mult[j]` times (`N = Σ mult`), without expanding it.
///
/// Ryser's sum over column subsets collapses to a sum over how many copies
/// `k_j ≤ mult[j]` of each column are chosen, each term weighted by
/// `Π C(mult_j, k_j)`; the cost is `Π (mult_j + 1) · N · cols`.
pub fn permanent_repeated_columns(a: &ComplexMatrix, mult: &[usize]) -> Result<C64> {
    let n: usize = mult.iter().sum();
    if a.ncols() != mult.len() || a.nrows() != n {
        return Err(Error::InvalidDimension(format!(
            "{}x{} matrix with column multiplicities summing to {n} over {} columns",
            a.nrows(),
            a.ncols(),
            mult.len()
        )));
    }
    if n == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    let cols = mult.len();
    let mut k = vec![0usize; cols];
    let mut total = C64::new(0.0, 0.0);
    let mut carry = C64::new(0.0, 0.0);
    loop {
        // advance the mixed-radix counter k; the all-zero term is zero for n ≥ 1
        let mut j = 0;
        while j < cols && k[j] == mult[j] {
            k[j] = 0;
            j += 1;
        }
        if j == cols {
            break;
        }
        k[j] += 1;

        let mut weight = 1.0;
        let mut chosen = 0;
        for (&kj, &mj) in k.iter().zip(mult) {
            weight *= binomial(mj, kj);
            chosen += kj;
        }
        let mut prod = C64::new(weight, 0.0);
        for i in 0..n {
            let mut row = C64::new(0.0, 0.0);
            for (c, &kc) in k.iter().enumerate() {
                if kc > 0 {
                    row += a[(i, c)] * kc as f64;
                }
            }
            prod *= row;
        }
        if (n - chosen) % 2 == 1 {
            prod = -prod;
        }
        neumaier_add(&mut total, &mut carry, prod);
    }
    Ok(total + carry)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[inline]
fn neumaier_add(sum: &mut C64, carry: &mut C64, x: C64) {
    fn step(sum: &mut f64, carry: &mut f64, x: f64) {
        let t = *sum + x;
        if sum.abs() >= x.abs() {
            *carry += (*sum - t) + x;
        } else {
            *carry += (x - t) + *sum;
        }
        *sum = t;
    }
    step(&mut sum.re, &mut carry.re, x.re);
    step(&mut sum.im, &mut carry.im, x.im);
}
