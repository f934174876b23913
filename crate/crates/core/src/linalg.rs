//! Dense linear algebra on top of the system LAPACK (values are copied into
//! column-major scratch buffers around each call).

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::{Error, Result};

mod ffi {
    use num_complex::Complex64;

    extern "C" {
        pub fn dsyevd_(
            jobz: *const u8,
            uplo: *const u8,
            n: *const i32,
            a: *mut f64,
            lda: *const i32,
            w: *mut f64,
            work: *mut f64,
            lwork: *const i32,
            iwork: *mut i32,
            liwork: *const i32,
            info: *mut i32,
        );
        pub fn zheevd_(
            jobz: *const u8,
            uplo: *const u8,
            n: *const i32,
            a: *mut Complex64,
            lda: *const i32,
            w: *mut f64,
            work: *mut Complex64,
            lwork: *const i32,
            rwork: *mut f64,
            lrwork: *const i32,
            iwork: *mut i32,
            liwork: *const i32,
            info: *mut i32,
        );
        pub fn zgeev_(
            jobvl: *const u8,
            jobvr: *const u8,
            n: *const i32,
            a: *mut Complex64,
            lda: *const i32,
            w: *mut Complex64,
            vl: *mut Complex64,
            ldvl: *const i32,
            vr: *mut Complex64,
            ldvr: *const i32,
            work: *mut Complex64,
            lwork: *const i32,
            rwork: *mut f64,
            info: *mut i32,
        );
        pub fn zgesvd_(
            jobu: *const u8,
            jobvt: *const u8,
            m: *const i32,
            n: *const i32,
            a: *mut Complex64,
            lda: *const i32,
            s: *mut f64,
            u: *mut Complex64,
            ldu: *const i32,
            vt: *mut Complex64,
            ldvt: *const i32,
            work: *mut Complex64,
            lwork: *const i32,
            rwork: *mut f64,
            info: *mut i32,
        );
        pub fn dgemm_(
            transa: *const u8,
            transb: *const u8,
            m: *const i32,
            n: *const i32,
            k: *const i32,
            alpha: *const f64,
            a: *const f64,
            lda: *const i32,
            b: *const f64,
            ldb: *const i32,
            beta: *const f64,
            c: *mut f64,
            ldc: *const i32,
        );
    }
}

fn check_info(routine: &str, info: i32) -> Result<()> {
    if info == 0 {
        Ok(())
    } else {
        Err(Error::Linalg(format!(
            "{routine} failed with info = {info}"
        )))
    }
}

/// Row-major ndarray -> column-major scratch buffer.
fn to_col_major<T: Copy + Default>(m: &Array2<T>) -> Vec<T> {
    let (rows, cols) = m.dim();
    let mut buf = vec![T::default(); rows * cols];
    for j in 0..cols {
        for i in 0..rows {
            buf[j * rows + i] = m[[i, j]];
        }
    }
    buf
}

fn from_col_major<T: Copy + Default>(buf: &[T], rows: usize, cols: usize) -> Array2<T> {
    let mut m = Array2::default((rows, cols));
    for j in 0..cols {
        for i in 0..rows {
            m[[i, j]] = buf[j * rows + i];
        }
    }
    m
}

/// Eigendecomposition of a real symmetric matrix: `m = q diag(vals) q^T`,
/// eigenvalues ascending, eigenvectors in the columns of `q`.
pub fn eigh_real(m: &Array2<f64>) -> Result<(Array1<f64>, Array2<f64>)> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "eigh_real requires a square matrix");
    if n == 0 {
        return Ok((Array1::zeros(0), Array2::zeros((0, 0))));
    }
    let ni = n as i32;
    let mut a = to_col_major(m);
    let mut w = vec![0.0f64; n];
    let mut info = 0i32;
    // Workspace query.
    let mut work_query = [0.0f64];
    let mut iwork_query = [0i32];
    let neg1 = -1i32;
    unsafe {
        ffi::dsyevd_(
            &b'V',
            &b'L',
            &ni,
            a.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work_query.as_mut_ptr(),
            &neg1,
            iwork_query.as_mut_ptr(),
            &neg1,
            &mut info,
        );
    }
    check_info("dsyevd (query)", info)?;
    let lwork = work_query[0] as i32;
    let liwork = iwork_query[0];
    let mut work = vec![0.0f64; lwork as usize];
    let mut iwork = vec![0i32; liwork as usize];
    unsafe {
        ffi::dsyevd_(
            &b'V',
            &b'L',
            &ni,
            a.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    check_info("dsyevd", info)?;
    Ok((Array1::from(w), from_col_major(&a, n, n)))
}

fn zheevd(m: &Array2<Complex64>, jobz: u8) -> Result<(Array1<f64>, Option<Array2<Complex64>>)> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "zheevd requires a square matrix");
    let ni = n as i32;
    let mut a = to_col_major(m);
    let mut w = vec![0.0f64; n];
    let mut info = 0i32;
    let neg1 = -1i32;
    let mut work_q = [Complex64::default()];
    let mut rwork_q = [0.0f64];
    let mut iwork_q = [0i32];
    unsafe {
        ffi::zheevd_(
            &jobz,
            &b'L',
            &ni,
            a.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work_q.as_mut_ptr(),
            &neg1,
            rwork_q.as_mut_ptr(),
            &neg1,
            iwork_q.as_mut_ptr(),
            &neg1,
            &mut info,
        );
    }
    check_info("zheevd (query)", info)?;
    let lwork = work_q[0].re as i32;
    let lrwork = rwork_q[0] as i32;
    let liwork = iwork_q[0];
    let mut work = vec![Complex64::default(); lwork as usize];
    let mut rwork = vec![0.0f64; lrwork as usize];
    let mut iwork = vec![0i32; liwork as usize];
    unsafe {
        ffi::zheevd_(
            &jobz,
            &b'L',
            &ni,
            a.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            rwork.as_mut_ptr(),
            &lrwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    check_info("zheevd", info)?;
    let vecs = if jobz == b'V' {
        Some(from_col_major(&a, n, n))
    } else {
        None
    };
    Ok((Array1::from(w), vecs))
}

/// Eigendecomposition of a complex Hermitian matrix (ascending eigenvalues,
/// eigenvectors in columns).
pub fn eigh_complex(m: &Array2<Complex64>) -> Result<(Array1<f64>, Array2<Complex64>)> {
    let (vals, vecs) = zheevd(m, b'V')?;
    Ok((vals, vecs.expect("eigenvectors requested")))
}

/// Eigenvalues only of a complex Hermitian matrix, ascending.
pub fn eigvalsh_complex(m: &Array2<Complex64>) -> Result<Array1<f64>> {
    let (vals, _) = zheevd(m, b'N')?;
    Ok(vals)
}

/// Eigenvalues of a general complex matrix (unordered).
pub fn eigvals_complex(m: &Array2<Complex64>) -> Result<Array1<Complex64>> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "eigvals_complex requires a square matrix");
    let ni = n as i32;
    let mut a = to_col_major(m);
    let mut w = vec![Complex64::default(); n];
    let mut rwork = vec![0.0f64; 2 * n];
    let mut info = 0i32;
    let neg1 = -1i32;
    let one = 1i32;
    let mut work_q = [Complex64::default()];
    unsafe {
        ffi::zgeev_(
            &b'N',
            &b'N',
            &ni,
            a.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            std::ptr::null_mut(),
            &one,
            std::ptr::null_mut(),
            &one,
            work_q.as_mut_ptr(),
            &neg1,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    check_info("zgeev (query)", info)?;
    let lwork = work_q[0].re as i32;
    let mut work = vec![Complex64::default(); lwork as usize];
    unsafe {
        ffi::zgeev_(
            &b'N',
            &b'N',
            &ni,
            a.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            std::ptr::null_mut(),
            &one,
            std::ptr::null_mut(),
            &one,
            work.as_mut_ptr(),
            &lwork,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    check_info("zgeev", info)?;
    Ok(Array1::from(w))
}

/// Singular values (descending) and right singular vectors of a complex
/// matrix: returns `(s, v)` where the columns of `v` are the right singular
/// vectors, `m = u diag(s) v^H`.
pub fn svd_right_complex(m: &Array2<Complex64>) -> Result<(Array1<f64>, Array2<Complex64>)> {
    let (rows, cols) = m.dim();
    let (mi, ni) = (rows as i32, cols as i32);
    let mut a = to_col_major(m);
    let k = rows.min(cols);
    let mut s = vec![0.0f64; k];
    let mut vt = vec![Complex64::default(); cols * cols];
    let mut rwork = vec![0.0f64; 5 * k.max(1)];
    let mut info = 0i32;
    let neg1 = -1i32;
    let one = 1i32;
    let mut work_q = [Complex64::default()];
    unsafe {
        ffi::zgesvd_(
            &b'N',
            &b'A',
            &mi,
            &ni,
            a.as_mut_ptr(),
            &mi,
            s.as_mut_ptr(),
            std::ptr::null_mut(),
            &one,
            vt.as_mut_ptr(),
            &ni,
            work_q.as_mut_ptr(),
            &neg1,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    check_info("zgesvd (query)", info)?;
    let lwork = work_q[0].re as i32;
    let mut work = vec![Complex64::default(); lwork as usize];
    unsafe {
        ffi::zgesvd_(
            &b'N',
            &b'A',
            &mi,
            &ni,
            a.as_mut_ptr(),
            &mi,
            s.as_mut_ptr(),
            std::ptr::null_mut(),
            &one,
            vt.as_mut_ptr(),
            &ni,
            work.as_mut_ptr(),
            &lwork,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    check_info("zgesvd", info)?;
    // vt is V^H in column-major; V's j-th column is the conjugate of V^H's j-th row.
    let vt_rm = from_col_major(&vt, cols, cols);
    let v = vt_rm.t().mapv(|z| z.conj());
    Ok((Array1::from(s), v))
}

/// `a * b` through BLAS dgemm (row-major arrays).
pub fn matmul(a: &Array2<f64>, b: &Array2<f64>) -> Array2<f64> {
    let (m, ka) = a.dim();
    let (kb, n) = b.dim();
    assert_eq!(ka, kb, "matmul dimension mismatch");
    if m == 0 || n == 0 || ka == 0 {
        return Array2::zeros((m, n));
    }
    let a_s = a.as_standard_layout();
    let b_s = b.as_standard_layout();
    let mut c = Array2::<f64>::zeros((m, n));
    // Row-major C = A B is column-major C^T = B^T A^T, and the row-major
    // buffers reinterpreted as column-major are exactly those transposes.
    let (mi, ni, ki) = (n as i32, m as i32, ka as i32);
    let (alpha, beta) = (1.0f64, 0.0f64);
    unsafe {
        ffi::dgemm_(
            &b'N',
            &b'N',
            &mi,
            &ni,
            &ki,
            &alpha,
            b_s.as_ptr(),
            &mi,
            a_s.as_ptr(),
            &ki,
            &beta,
            c.as_mut_ptr(),
            &mi,
        );
    }
    c
}

/// Solve `a x = b` for complex square `a` by Gaussian elimination with
/// partial pivoting. Sized for the small systems used here (n <= ~64).
pub fn solve_complex(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    assert_eq!(n, b.nrows());
    let m = b.ncols();
    let mut aug = Array2::<Complex64>::zeros((n, n + m));
    aug.slice_mut(ndarray::s![.., ..n]).assign(a);
    aug.slice_mut(ndarray::s![.., n..]).assign(b);

    for col in 0..n {
        let mut piv = col;
        let mut piv_norm = aug[[col, col]].norm();
        for row in col + 1..n {
            let v = aug[[row, col]].norm();
            if v > piv_norm {
                piv_norm = v;
                piv = row;
            }
        }
        if piv_norm == 0.0 {
            return Err(Error::Linalg("singular matrix in solve_complex".into()));
        }
        if piv != col {
            for j in 0..n + m {
                aug.swap([col, j], [piv, j]);
            }
        }
        let pivot = aug[[col, col]];
        for row in col + 1..n {
            let factor = aug[[row, col]] / pivot;
            if factor.norm() == 0.0 {
                continue;
            }
            for j in col..n + m {
                let v = aug[[col, j]];
                aug[[row, j]] -= factor * v;
            }
        }
    }
    let mut x = Array2::<Complex64>::zeros((n, m));
    for col in (0..n).rev() {
        let pivot = aug[[col, col]];
        for j in 0..m {
            let mut sum = aug[[col, n + j]];
            for k in col + 1..n {
                sum -= aug[[col, k]] * x[[k, j]];
            }
            x[[col, j]] = sum / pivot;
        }
    }
    Ok(x)
}

/// Determinant of a complex square matrix by LU with partial pivoting.
pub fn det_complex(m: &Array2<Complex64>) -> Complex64 {
    let n = m.nrows();
    assert_eq!(n, m.ncols());
    let mut a = m.to_owned();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let mut piv = col;
        let mut piv_norm = a[[col, col]].norm();
        for row in col + 1..n {
            let v = a[[row, col]].norm();
            if v > piv_norm {
                piv_norm = v;
                piv = row;
            }
        }
        if piv_norm == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != col {
            for j in 0..n {
                a.swap([col, j], [piv, j]);
            }
            det = -det;
        }
        let pivot = a[[col, col]];
        det *= pivot;
        for row in col + 1..n {
            let factor = a[[row, col]] / pivot;
            if factor.norm() == 0.0 {
                continue;
            }
            for j in col..n {
                let v = a[[col, j]];
                a[[row, j]] -= factor * v;
            }
        }
    }
    det
}

/// Determinant of a real square matrix by LU with partial pivoting.
pub fn det_real(m: &Array2<f64>) -> f64 {
    let n = m.nrows();
    assert_eq!(n, m.ncols());
    let mut a = m.to_owned();
    let mut det = 1.0f64;
    for col in 0..n {
        let mut piv = col;
        let mut piv_abs = a[[col, col]].abs();
        for row in col + 1..n {
            let v = a[[row, col]].abs();
            if v > piv_abs {
                piv_abs = v;
                piv = row;
            }
        }
        if piv_abs == 0.0 {
            return 0.0;
        }
        if piv != col {
            for j in 0..n {
                a.swap([col, j], [piv, j]);
            }
            det = -det;
        }
        let pivot = a[[col, col]];
        det *= pivot;
        for row in col + 1..n {
            let factor = a[[row, col]] / pivot;
            if factor == 0.0 {
                continue;
            }
            for j in col..n {
                let v = a[[col, j]];
                a[[row, j]] -= factor * v;
            }
        }
    }
    det
}

/// Padé(13) coefficients for the scaling-and-squaring matrix exponential.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn one_norm(a: &Array2<Complex64>) -> f64 {
    let mut max = 0.0f64;
    for j in 0..a.ncols() {
        let mut s = 0.0;
        for i in 0..a.nrows() {
            s += a[[i, j]].norm();
        }
        max = max.max(s);
    }
    max
}

/// Matrix exponential of a complex square matrix via Padé(13) with scaling
/// and squaring.
pub fn expm_complex(a: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    let theta13 = 5.371920351148152;
    let norm = one_norm(a);
    let s = if norm > theta13 {
        (norm / theta13).log2().ceil() as u32
    } else {
        0
    };
    let scale = Complex64::new(1.0 / 2.0f64.powi(s as i32), 0.0);
    let a1 = a.mapv(|z| z * scale);

    let eye = Array2::<Complex64>::eye(n);
    let a2 = a1.dot(&a1);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);
    let c = |k: usize| Complex64::new(PADE13[k], 0.0);

    let w1 = &a6 * c(13) + &a4 * c(11) + &a2 * c(9);
    let w2 = a6.dot(&w1) + &a6 * c(7) + &a4 * c(5) + &a2 * c(3) + &eye * c(1);
    let u = a1.dot(&w2);
    let z1 = &a6 * c(12) + &a4 * c(10) + &a2 * c(8);
    let v = a6.dot(&z1) + &a6 * c(6) + &a4 * c(4) + &a2 * c(2) + &eye * c(0);

    let num = &v + &u;
    let den = &v - &u;
    let mut e = solve_complex(&den, &num)?;
    for _ in 0..s {
        e = e.dot(&e);
    }
    Ok(e)
}
