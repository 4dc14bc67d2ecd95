//! Sylvester resultants and first subresultants over any integral domain,
//! via fraction-free (Bareiss) elimination.

use super::poly::{Poly, Ring};
use crate::error::Result;

/// Determinant by Bareiss elimination. Needs exact division only, so it
/// works over nested polynomial rings.
pub fn determinant<R: Ring>(mut m: Vec<Vec<R>>, zero: &R) -> Result<R> {
    let n = m.len();
    if n == 0 {
        return Ok(zero.one_like());
    }
    let mut negate = false;
    let mut prev = zero.one_like();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Ok(zero.clone());
            };
            m.swap(k, swap);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].mul_ref(&m[k][k]);
                let b = m[i][k].mul_ref(&m[k][j]);
                m[i][j] = a.sub_ref(&b).div_exact(&prev)?;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if negate { d.neg_ref() } else { d })
}

/// Rows `var^{count-1} p, …, var p, p` as coefficient vectors over the powers
/// `width-1` down to `0`.
fn shifted_rows<R: Ring>(p: &Poly<R>, count: usize, width: usize, zero: &R) -> Vec<Vec<R>> {
    let deg = p.degree().unwrap_or(0);
    (0..count)
        .map(|i| {
            let shift = count - 1 - i;
            (0..width)
                .map(|col| {
                    let power = width - 1 - col;
                    if power >= shift && power - shift <= deg {
                        p.coeff(power - shift).clone()
                    } else {
                        zero.clone()
                    }
                })
                .collect()
        })
        .collect()
}

/// The Sylvester matrix of `f` (degree `m`) and `g` (degree `n`): `n` shifted
/// rows of `f` followed by `m` shifted rows of `g`, highest power first.
pub fn sylvester_matrix<R: Ring>(f: &Poly<R>, g: &Poly<R>) -> Vec<Vec<R>> {
    let zero = f.coeff_zero().clone();
    let m = f.degree().unwrap_or(0);
    let n = g.degree().unwrap_or(0);
    let mut rows = shifted_rows(f, n, m + n, &zero);
    rows.extend(shifted_rows(g, m, m + n, &zero));
    rows
}

/// `Res(f, g) = det Sylvester(f, g)` with `f`'s rows first, so that
/// `Res(var - a, var - b) = a - b`.
pub fn resultant<R: Ring>(f: &Poly<R>, g: &Poly<R>) -> Result<R> {
    let zero = f.coeff_zero().clone();
    if f.is_zero() || g.is_zero() {
        return Ok(zero);
    }
    determinant(sylvester_matrix(f, g), &zero)
}

/// Coefficients `(s1, s0)` of the first subresultant `S_1 = s1 var + s0` of
/// `f` and `g`, both of degree at least 2. When `Res(f, g)` vanishes at a
/// point where `s1` does not, `-s0/s1` is the unique common root there.
pub fn first_subresultant<R: Ring>(f: &Poly<R>, g: &Poly<R>) -> Result<(R, R)> {
    let zero = f.coeff_zero().clone();
    let m = f.degree().unwrap_or(0);
    let n = g.degree().unwrap_or(0);
    assert!(m >= 2 && n >= 2, "first subresultant needs degrees >= 2");
    let width = m + n - 1;
    let mut rows = shifted_rows(f, n - 1, width, &zero);
    rows.extend(shifted_rows(g, m - 1, width, &zero));
    // keep the leading width-2 columns (powers width-1 .. 2) and one of the
    // last two
    let pick = |last: usize| -> Vec<Vec<R>> {
        rows.iter()
            .map(|r| {
                let mut v: Vec<R> = r[..width - 2].to_vec();
                v.push(r[last].clone());
                v
            })
            .collect()
    };
    let s1 = determinant(pick(width - 2), &zero)?;
    let s0 = determinant(pick(width - 1), &zero)?;
    Ok((s1, s0))
}
