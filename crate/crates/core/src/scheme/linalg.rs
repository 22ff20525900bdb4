//! Seeded complex-Gaussian sampling, numerical rank, and null-space bases.

use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

pub type CMat = DMatrix<Complex<f64>>;
pub type CVec = DVector<Complex<f64>>;

pub(crate) const DOMAIN_CHANNEL: u64 = 1;
pub(crate) const DOMAIN_NULL: u64 = 2;
pub(crate) const DOMAIN_PRECODER: u64 = 3;
pub(crate) const DOMAIN_EXTENSION: u64 = 4;

/// One deterministic stream per (seed, domain) pair, so channels, null-space
/// mixing, and precoder draws never share state.
pub(crate) fn derive_rng(seed: u64, domain: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed ^ domain.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Circularly symmetric complex Gaussian with unit variance.
pub(crate) fn complex_gaussian(rng: &mut impl Rng) -> Complex<f64> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub(crate) fn random_cmatrix(rows: usize, cols: usize, rng: &mut impl Rng) -> CMat {
    let data: Vec<Complex<f64>> = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    CMat::from_vec(rows, cols, data)
}

pub(crate) fn normalize_columns(m: &mut CMat) {
    for mut col in m.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col.unscale_mut(norm);
        }
    }
}

/// Isotropically random matrix with unit-norm columns.
pub(crate) fn random_unit_columns(rows: usize, cols: usize, rng: &mut impl Rng) -> CMat {
    let mut m = random_cmatrix(rows, cols, rng);
    normalize_columns(&mut m);
    m
}

/// Numerical rank: singular values below
/// `tol_factor * sigma_max * max(nrows, ncols)` count as zero.
pub fn numerical_rank(m: &CMat, tol_factor: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().singular_values();
    let smax = sv[0];
    if smax <= 0.0 {
        return 0;
    }
    let threshold = tol_factor * smax * (m.nrows().max(m.ncols())) as f64;
    sv.iter().filter(|&&s| s > threshold).count()
}

/// Orthonormal basis of the right null space of `m`, one column per null
/// direction under the numerical-rank threshold.
pub fn null_space_basis(m: &CMat, tol_factor: f64) -> CMat {
    let n = m.ncols();
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return CMat::identity(n, n);
    }
    // Pad wide matrices with zero rows so the decomposition exposes the full
    // right singular space.
    let work = if m.nrows() >= n {
        m.clone()
    } else {
        let mut padded = CMat::zeros(n, n);
        padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        padded
    };
    let max_dim = work.nrows().max(work.ncols()) as f64;
    let svd = work.svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv[0];
    let rank = if smax <= 0.0 {
        0
    } else {
        sv.iter().filter(|&&s| s > tol_factor * smax * max_dim).count()
    };
    let v = svd.v_t.expect("requested right singular vectors").adjoint();
    v.columns(rank, n - rank).into_owned()
}

pub(crate) fn vstack(blocks: &[&CMat]) -> CMat {
    assert!(!blocks.is_empty());
    let cols = blocks[0].ncols();
    assert!(blocks.iter().all(|b| b.ncols() == cols));
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut row = 0;
    for b in blocks {
        out.view_mut((row, 0), (b.nrows(), cols)).copy_from(*b);
        row += b.nrows();
    }
    out
}

pub(crate) fn hstack(blocks: &[&CMat]) -> CMat {
    let nonempty: Vec<&&CMat> = blocks.iter().filter(|b| b.ncols() > 0).collect();
    if nonempty.is_empty() {
        let rows = blocks.first().map_or(0, |b| b.nrows());
        return CMat::zeros(rows, 0);
    }
    let rows = nonempty[0].nrows();
    assert!(nonempty.iter().all(|b| b.nrows() == rows));
    let cols: usize = nonempty.iter().map(|b| b.ncols()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut col = 0;
    for b in nonempty {
        out.view_mut((0, col), (rows, b.ncols())).copy_from(*b);
        col += b.ncols();
    }
    out
}

/// Two copies of `m` on the diagonal, zeros elsewhere.
pub(crate) fn block_diag_pair(m: &CMat) -> CMat {
    let (r, c) = m.shape();
    let mut out = CMat::zeros(2 * r, 2 * c);
    out.view_mut((0, 0), (r, c)).copy_from(m);
    out.view_mut((r, c), (r, c)).copy_from(m);
    out
}

pub(crate) fn drop_column(m: &CMat, col: usize) -> CMat {
    let mut out = CMat::zeros(m.nrows(), m.ncols() - 1);
    let mut k = 0;
    for j in 0..m.ncols() {
        if j == col {
            continue;
        }
        out.set_column(k, &m.column(j));
        k += 1;
    }
    out
}

/// Bilinear (transpose, non-conjugating) product of two vectors.
pub(crate) fn tdot(a: &CVec, b: &CVec) -> Complex<f64> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_random_matrix_is_full() {
        let mut rng = derive_rng(11, DOMAIN_CHANNEL);
        let m = random_cmatrix(4, 6, &mut rng);
        assert_eq!(numerical_rank(&m, 1e-10), 4);
    }

    #[test]
    fn null_space_is_orthogonal_to_rows() {
        let mut rng = derive_rng(3, DOMAIN_CHANNEL);
        let m = random_cmatrix(2, 5, &mut rng);
        let basis = null_space_basis(&m, 1e-10);
        assert_eq!(basis.shape(), (5, 3));
        assert!((&m * &basis).norm() <= 1e-10 * m.norm());
        assert_eq!(numerical_rank(&basis, 1e-10), 3);
    }

    #[test]
    fn null_space_of_tall_full_rank_matrix_is_empty() {
        let mut rng = derive_rng(5, DOMAIN_CHANNEL);
        let m = random_cmatrix(6, 3, &mut rng);
        assert_eq!(null_space_basis(&m, 1e-10).ncols(), 0);
    }

    #[test]
    fn tdot_does_not_conjugate() {
        let i = Complex::new(0.0, 1.0);
        let v = CVec::from_vec(vec![i]);
        assert!((tdot(&v, &v) - Complex::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn stacking_shapes() {
        let a = CMat::zeros(2, 3);
        let b = CMat::zeros(4, 3);
        assert_eq!(vstack(&[&a, &b]).shape(), (6, 3));
        let c = CMat::zeros(2, 5);
        let empty = CMat::zeros(2, 0);
        assert_eq!(hstack(&[&a, &empty, &c]).shape(), (2, 8));
        assert_eq!(block_diag_pair(&a).shape(), (4, 6));
    }
}
