//! Exact rational simplex method.
//!
//! Only the shape needed here is supported: maximize `c·x` subject to
//! `A·x <= b`, `x >= 0`, with `b >= 0` so the slack basis is feasible from the
//! start. Bland's rule guarantees termination on degenerate problems, which
//! are the norm for homogeneous cone systems.

use num_traits::{Signed, Zero};

use crate::linalg;
use crate::rational::{primitive_integer, to_rationals, Rational};

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Unbounded,
}

pub fn maximize(objective: &[Rational], rows: &[Vec<Rational>], rhs: &[Rational]) -> LpOutcome {
    let n = objective.len();
    let m = rows.len();
    assert_eq!(rhs.len(), m);
    assert!(rhs.iter().all(|b| !b.is_negative()), "origin must be feasible");
    let width = n + m + 1;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m + 1);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), n);
        let mut r = Vec::with_capacity(width);
        r.extend(row.iter().cloned());
        r.extend((0..m).map(|k| if k == i { Rational::from_integer(1.into()) } else { Rational::zero() }));
        r.push(rhs[i].clone());
        t.push(r);
    }
    let mut obj: Vec<Rational> = objective.iter().map(|c| -c.clone()).collect();
    obj.resize(width, Rational::zero());
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        let Some(enter) = (0..n + m).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][width - 1] / &t[i][enter];
            leave = match leave {
                None => Some((i, ratio)),
                Some((li, lr)) => {
                    if ratio < lr || (ratio == lr && basis[i] < basis[li]) {
                        Some((i, ratio))
                    } else {
                        Some((li, lr))
                    }
                }
            };
        }
        let Some((pr, _)) = leave else {
            return LpOutcome::Unbounded;
        };
        let inv = Rational::from_integer(1.into()) / &t[pr][enter];
        for x in t[pr].iter_mut() {
            *x *= &inv;
        }
        let pivot = t[pr].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == pr || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (x, y) in row.iter_mut().zip(&pivot) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (x, y) in obj.iter_mut().zip(&pivot) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        basis[pr] = enter;
    }

    let mut x = vec![Rational::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] = t[i][width - 1].clone();
        }
    }
    LpOutcome::Optimal { x, value: obj[width - 1].clone() }
}

/// Searches for `w` with `eq·w = 0` for every row of `equalities` and
/// `f·w > 0` for every row of `strict`.
///
/// Works on the kernel of the equalities, boxes the kernel coordinates to
/// `[-1, 1]`, and maximizes a common slack `s <= 1` below every strict form.
/// The open cone is nonempty iff the optimal slack is positive. The returned
/// point is scaled to a primitive integer vector.
pub fn strictly_feasible_point(
    nvars: usize,
    equalities: &[Vec<Rational>],
    strict: &[Vec<Rational>],
) -> Option<Vec<Rational>> {
    let basis = linalg::kernel(equalities, nvars);
    let k = basis.len();
    // g[r][j] = strict_r · basis_j
    let g: Vec<Vec<Rational>> = strict
        .iter()
        .map(|f| basis.iter().map(|b| crate::rational::dot(f, b)).collect())
        .collect();
    if strict.is_empty() {
        return Some(vec![Rational::zero(); nvars]);
    }
    if k == 0 {
        return None;
    }
    // variables: z+ (k), z- (k), s
    let nv = 2 * k + 1;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for gr in &g {
        let mut row = Vec::with_capacity(nv);
        row.extend(gr.iter().map(|x| -x.clone()));
        row.extend(gr.iter().cloned());
        row.push(Rational::from_integer(1.into()));
        rows.push(row);
        rhs.push(Rational::zero());
    }
    for j in 0..nv {
        let mut row = vec![Rational::zero(); nv];
        row[j] = Rational::from_integer(1.into());
        rows.push(row);
        rhs.push(Rational::from_integer(1.into()));
    }
    let mut objective = vec![Rational::zero(); nv];
    objective[nv - 1] = Rational::from_integer(1.into());
    match maximize(&objective, &rows, &rhs) {
        LpOutcome::Optimal { x, value } if value.is_positive() => {
            let z: Vec<Rational> = (0..k).map(|j| &x[j] - &x[k + j]).collect();
            let mut w = vec![Rational::zero(); nvars];
            for (zj, b) in z.iter().zip(&basis) {
                if zj.is_zero() {
                    continue;
                }
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi += zj * bi;
                }
            }
            Some(to_rationals(&primitive_integer(&w)))
        }
        _ => None,
    }
}
