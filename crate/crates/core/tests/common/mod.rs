#![allow(dead_code)]

use spinsum::linalg::{self, c, eig_hermitian, max_diff, CMatrix};
use spinsum::sampling::Sampler;

/// `X = pinv(A†A) A† B` with the pseudoinverse taken from an eigendecomposition.
pub fn pinv_oracle(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let g = a.adjoint() * a;
    let (values, vectors) = eig_hermitian(&g).unwrap();
    let top = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut inv = linalg::zeros(g.nrows(), g.ncols());
    for (k, &lambda) in values.iter().enumerate() {
        if lambda.abs() > 1e-10 * top {
            let v = vectors.columns(k, 1);
            inv += &v * v.adjoint() * c(1.0 / lambda, 0.0);
        }
    }
    inv * a.adjoint() * b
}

pub fn random_matrix(s: &mut Sampler, rows: usize, cols: usize) -> CMatrix {
    let data: Vec<_> = (0..rows * cols).map(|_| c(s.uniform(-1.0, 1.0), s.uniform(-1.0, 1.0))).collect();
    linalg::from_rows(rows, cols, &data)
}

pub fn random_rank(seed: u64, rows: usize, cols: usize, rank: usize) -> CMatrix {
    let mut s = Sampler::new(seed);
    random_matrix(&mut s, rows, rank) * random_matrix(&mut s, rank, cols)
}

/// `min_φ ‖a - φ b‖` over unit phases, in max norm.
pub fn phase_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    let overlap = (b.adjoint() * a).trace();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { linalg::ONE };
    max_diff(a, &(b * phase))
}

fn fact(n: i64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Racah's closed form for `⟨a ma; b mb | j m⟩`, arguments doubled.
pub fn racah_cg(a2: i64, ma2: i64, b2: i64, mb2: i64, j2: i64, m2: i64) -> f64 {
    if ma2 + mb2 != m2 {
        return 0.0;
    }
    let h = |x: i64| x / 2;
    let pre = ((j2 + 1) as f64 * fact(h(j2 + a2 - b2)) * fact(h(j2 - a2 + b2)) * fact(h(a2 + b2 - j2))
        / fact(h(a2 + b2 + j2) + 1))
        .sqrt();
    let norm = (fact(h(j2 + m2)) * fact(h(j2 - m2)) * fact(h(a2 - ma2)) * fact(h(a2 + ma2)) * fact(h(b2 - mb2))
        * fact(h(b2 + mb2)))
    .sqrt();
    let mut sum = 0.0;
    for k in 0..=h(a2 + b2 + j2) {
        let d = [
            k,
            h(a2 + b2 - j2) - k,
            h(a2 - ma2) - k,
            h(b2 + mb2) - k,
            h(j2 - b2 + ma2) + k,
            h(j2 - a2 - mb2) + k,
        ];
        if d.iter().any(|&x| x < 0) {
            continue;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign / d.iter().map(|&x| fact(x)).product::<f64>();
    }
    pre * norm * sum
}

/// The coupling matrix with rows `|ma, mb⟩` and columns `|j, σ⟩`, all
/// projections descending.
pub fn racah_matrix(a2: i64, b2: i64, j2: i64) -> CMatrix {
    let (na, nb, nj) = ((a2 + 1) as usize, (b2 + 1) as usize, (j2 + 1) as usize);
    let mut out = linalg::zeros(na * nb, nj);
    for ia in 0..na {
        for ib in 0..nb {
            for is in 0..nj {
                let (ma2, mb2, m2) = (a2 - 2 * ia as i64, b2 - 2 * ib as i64, j2 - 2 * is as i64);
                out[(ia * nb + ib, is)] = c(racah_cg(a2, ma2, b2, mb2, j2, m2), 0.0);
            }
        }
    }
    out
}
