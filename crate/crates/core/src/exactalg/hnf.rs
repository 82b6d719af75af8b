use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{RElem, RingSpec};

/// Row Hermite normal form over `R`.
///
/// Pivots are canonical associates and entries above a pivot are canonical
/// residues modulo it, so two generating sets of the same row module yield
/// identical output. Zero rows are dropped.
pub fn hnf(ring: &RingSpec, rows: &[Vec<RElem>]) -> Vec<Vec<RElem>> {
    let mut m: Vec<Vec<RElem>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let mut have_pivot = false;
        loop {
            let pivot = (r..m.len())
                .filter(|&i| !m[i][c].is_zero())
                .min_by(|&i, &j| ring.abs_norm(&m[i][c]).cmp(&ring.abs_norm(&m[j][c])).then(i.cmp(&j)));
            let Some(pivot) = pivot else { break };
            have_pivot = true;
            m.swap(r, pivot);
            let mut clean = true;
            for i in r + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let (q, rem) = ring.euclid_divmod(&m[i][c], &m[r][c]).expect("pivot is nonzero");
                let pivot_row = m[r].clone();
                sub_multiple(ring, &mut m[i], &q, &pivot_row);
                if !rem.is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if !have_pivot {
            continue;
        }
        let u = ring.canonical_unit(&m[r][c]);
        for x in m[r].iter_mut() {
            *x = ring.mul(&u, x);
        }
        let pivot_row = m[r].clone();
        for i in 0..r {
            let (q, _) = ring.euclid_divmod(&m[i][c], &pivot_row[c]).expect("pivot is nonzero");
            sub_multiple(ring, &mut m[i], &q, &pivot_row);
        }
        r += 1;
    }
    m.truncate(r);
    m
}

fn sub_multiple(ring: &RingSpec, row: &mut [RElem], q: &RElem, pivot: &[RElem]) {
    if q.is_zero() {
        return;
    }
    for (x, p) in row.iter_mut().zip(pivot) {
        *x = ring.sub(x, &ring.mul(q, p));
    }
}

/// Row Hermite normal form over `Z`: positive pivots, entries above each
/// pivot reduced into `[0, pivot)`, zero rows dropped.
pub fn zhnf(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        // gcd-combine every row below r into row r at column c
        let Some(first) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, first);
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let a = m[r][c].clone();
            let b = m[i][c].clone();
            let e = a.extended_gcd(&b);
            let (g, x, y) = (e.gcd, e.x, e.y);
            let (ag, bg) = (&a / &g, &b / &g);
            let (top, bottom): (Vec<BigInt>, Vec<BigInt>) = m[r]
                .iter()
                .zip(&m[i])
                .map(|(u, v)| (&x * u + &y * v, &ag * v - &bg * u))
                .unzip();
            m[r] = top;
            m[i] = bottom;
        }
        if m[r][c].is_negative() {
            for x in m[r].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot_row = m[r].clone();
        let p = pivot_row[c].clone();
        for i in 0..r {
            let q = m[i][c].div_floor(&p);
            if !q.is_zero() {
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}
