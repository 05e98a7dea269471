//! Complex matrix helpers shared by the precoding and capacity code.

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::CMatrix;

/// Relative singular-value threshold for rank decisions.
const RANK_TOL: f64 = 1e-12;

/// Singular values in descending order.
pub fn singular_values<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    let sv = m.clone().svd(false, false).singular_values;
    let mut out: Vec<T> = sv.iter().copied().collect();
    out.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
    out
}

/// Squared singular values (eigenvalues of `M M^H`) in descending order.
pub fn stream_gains<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    singular_values(m).into_iter().map(|s| s * s).collect()
}

/// First `k` right singular vectors as the columns of an `ncols x k`
/// matrix, ordered by descending singular value.
pub fn right_singular_vectors<T: Real>(m: &CMatrix<T>, k: usize) -> Result<CMatrix<T>> {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested V^H");
    if k > v_t.nrows() {
        return Err(Error::Numerical(format!(
            "asked for {k} right singular vectors of a rank-{} decomposition",
            v_t.nrows()
        )));
    }
    // rows of V^H are ordered like the singular values (descending)
    debug_assert!(
        svd.singular_values
            .as_slice()
            .windows(2)
            .all(|w| w[0] >= w[1]),
        "nalgebra returned unsorted singular values"
    );
    Ok(v_t.rows(0, k).adjoint())
}

/// Orthonormal basis of the right null space of `a` (columns of the
/// returned `ncols x (ncols - rank)` matrix).
///
/// The row space is taken from the SVD with a `1e-12 * sigma_max` rank
/// threshold; its orthogonal complement is built by pivoted Gram-Schmidt
/// over projected identity columns, re-orthogonalized once.
pub fn right_null_basis<T: Real>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    let m = a.ncols();
    let svd = a.clone().svd(false, true);
    let sv = &svd.singular_values;
    let sigma_max = sv.iter().copied().fold(T::zero(), |acc, s| acc.max(s));
    let rank = if sigma_max == T::zero() {
        0
    } else {
        sv.iter()
            .filter(|&&s| s > T::lit(RANK_TOL) * sigma_max)
            .count()
    };
    let dim = m - rank;
    if dim == 0 {
        return Ok(CMatrix::<T>::zeros(m, 0));
    }
    let row_space = if rank == 0 {
        CMatrix::<T>::zeros(m, 0)
    } else {
        svd.v_t
            .as_ref()
            .expect("requested V^H")
            .rows(0, rank)
            .adjoint()
    };

    let mut basis = CMatrix::<T>::zeros(m, dim);
    let mut found = 0usize;
    let mut used = vec![false; m];
    while found < dim {
        // project every unused identity column and take the largest residual
        let mut best: Option<(usize, CMatrix<T>, T)> = None;
        for j in 0..m {
            if used[j] {
                continue;
            }
            let mut w = CMatrix::<T>::zeros(m, 1);
            w[(j, 0)] = Complex::new(T::one(), T::zero());
            for _ in 0..2 {
                if rank > 0 {
                    let coeff = row_space.adjoint() * &w;
                    w -= &row_space * coeff;
                }
                if found > 0 {
                    let q = basis.columns(0, found);
                    let coeff = q.adjoint() * &w;
                    w -= q * coeff;
                }
            }
            let norm = w.norm();
            if best.as_ref().is_none_or(|(_, _, n)| norm > *n) {
                best = Some((j, w, norm));
            }
        }
        let (j, w, norm) = best.expect("candidate columns remain");
        if norm < T::lit(1e-8) {
            return Err(Error::Numerical(
                "null-space basis construction lost orthogonality".into(),
            ));
        }
        used[j] = true;
        let w = w / Complex::new(norm, T::zero());
        basis.set_column(found, &w.column(0));
        found += 1;
    }
    Ok(basis)
}

/// `log2 det` of a Hermitian positive-definite matrix via Cholesky.
pub fn log2_det_hermitian_pd<T: Real>(m: &CMatrix<T>) -> Result<T> {
    let n = m.nrows();
    let chol = m
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Numerical("matrix not positive definite".into()))?;
    let l = chol.l();
    let mut acc = T::zero();
    for i in 0..n {
        acc += l[(i, i)].re.ln();
    }
    Ok(acc * T::lit(2.0) * crate::real::log2_e::<T>())
}

/// Eigenvalues of a Hermitian matrix, descending, clamped at zero
/// (intended for Gram matrices whose tiny negative values are noise).
pub fn hermitian_eigenvalues_desc<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    let eig = nalgebra::SymmetricEigen::new(m.clone());
    let mut vals: Vec<T> = eig.eigenvalues.iter().map(|&v| v.max(T::zero())).collect();
    vals.sort_by(|a, b| b.partial_cmp(a).expect("eigenvalues are finite"));
    vals
}

/// `a * a^H`.
pub fn gram<T: Real>(a: &CMatrix<T>) -> CMatrix<T> {
    a * a.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    pub fn random_cmatrix(rng: &mut ChaCha8Rng, n: usize, m: usize) -> CMatrix<f64> {
        CMatrix::<f64>::from_fn(n, m, |_, _| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        })
    }

    #[test]
    fn null_basis_annihilates_rows() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = random_cmatrix(&mut rng, 4, 6);
            let basis = right_null_basis(&a).unwrap();
            assert_eq!(basis.ncols(), 2);
            let residual = (&a * &basis).norm() / a.norm();
            assert!(residual < 1e-12, "residual {residual}");
            let gram_err = (basis.adjoint() * &basis - CMatrix::<f64>::identity(2, 2)).norm();
            assert!(gram_err < 1e-12);
        }
    }

    #[test]
    fn null_basis_of_zero_matrix_is_identity_sized() {
        let a = CMatrix::<f64>::zeros(2, 4);
        let basis = right_null_basis(&a).unwrap();
        assert_eq!(basis.ncols(), 4);
        let gram_err = (basis.adjoint() * &basis - CMatrix::<f64>::identity(4, 4)).norm();
        assert!(gram_err < 1e-12);
    }

    #[test]
    fn null_basis_of_full_rank_square_is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_cmatrix(&mut rng, 4, 4);
        let basis = right_null_basis(&a).unwrap();
        assert_eq!(basis.ncols(), 0);
    }

    #[test]
    fn rank_deficient_stack_grows_null_space() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let row = random_cmatrix(&mut rng, 1, 4);
        let mut a = CMatrix::<f64>::zeros(3, 4);
        a.set_row(0, &row.row(0));
        a.set_row(1, &(row.row(0) * Complex::new(2.0, 1.0)));
        a.set_row(2, &(row.row(0) * Complex::new(-0.5, 0.25)));
        let basis = right_null_basis(&a).unwrap();
        assert_eq!(basis.ncols(), 3);
        assert!((&a * &basis).norm() < 1e-12 * a.norm());
    }

    #[test]
    fn log2_det_matches_eigen_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = random_cmatrix(&mut rng, 3, 5);
        let pd = gram(&a) + CMatrix::<f64>::identity(3, 3) * Complex::new(0.5, 0.0);
        let chol = log2_det_hermitian_pd(&pd).unwrap();
        let eig: f64 = hermitian_eigenvalues_desc(&pd)
            .iter()
            .map(|v| v.log2())
            .sum();
        assert!((chol - eig).abs() < 1e-10 * chol.abs());
    }

    #[test]
    fn stream_gains_square_singular_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_cmatrix(&mut rng, 2, 4);
        let sv = singular_values(&a);
        let g = stream_gains(&a);
        for (s, g) in sv.iter().zip(&g) {
            assert!((s * s - g).abs() < 1e-12 * g.max(1e-12));
        }
        assert!(sv[0] >= sv[1]);
    }
}
