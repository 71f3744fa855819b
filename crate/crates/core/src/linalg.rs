//! Tiny fixed-size vector/matrix helpers for per-point state algebra.

pub type Vector<const N: usize> = [f64; N];
pub type Matrix<const N: usize> = [[f64; N]; N];
/// `t[a][b][c] = d A[a][b] / d W[c]`.
pub type Tensor<const N: usize> = [[[f64; N]; N]; N];

#[inline]
pub fn zeros<const N: usize>() -> Vector<N> {
    [0.0; N]
}

#[inline]
pub fn identity<const N: usize>() -> Matrix<N> {
    let mut m = [[0.0; N]; N];
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = 1.0;
    }
    m
}

#[inline]
pub fn add<const N: usize>(a: &Vector<N>, b: &Vector<N>) -> Vector<N> {
    std::array::from_fn(|k| a[k] + b[k])
}

#[inline]
pub fn sub<const N: usize>(a: &Vector<N>, b: &Vector<N>) -> Vector<N> {
    std::array::from_fn(|k| a[k] - b[k])
}

#[inline]
pub fn scale<const N: usize>(s: f64, a: &Vector<N>) -> Vector<N> {
    std::array::from_fn(|k| s * a[k])
}

/// `a + s * b`
#[inline]
pub fn axpy<const N: usize>(a: &Vector<N>, s: f64, b: &Vector<N>) -> Vector<N> {
    std::array::from_fn(|k| a[k] + s * b[k])
}

#[inline]
pub fn mid<const N: usize>(a: &Vector<N>, b: &Vector<N>) -> Vector<N> {
    std::array::from_fn(|k| 0.5 * (a[k] + b[k]))
}

#[inline]
pub fn dot<const N: usize>(a: &Vector<N>, b: &Vector<N>) -> f64 {
    let mut s = 0.0;
    for k in 0..N {
        s += a[k] * b[k];
    }
    s
}

#[inline]
pub fn matvec<const N: usize>(m: &Matrix<N>, v: &Vector<N>) -> Vector<N> {
    std::array::from_fn(|a| dot(&m[a], v))
}

pub fn matmul<const N: usize>(a: &Matrix<N>, b: &Matrix<N>) -> Matrix<N> {
    let mut c = [[0.0; N]; N];
    for i in 0..N {
        for j in 0..N {
            let mut s = 0.0;
            for k in 0..N {
                s += a[i][k] * b[k][j];
            }
            c[i][j] = s;
        }
    }
    c
}

/// Contract the last index of a derivative tensor: `(T : d)[a][b] = sum_c T[a][b][c] d[c]`.
#[inline]
pub fn contract<const N: usize>(t: &Tensor<N>, d: &Vector<N>) -> Matrix<N> {
    std::array::from_fn(|a| std::array::from_fn(|b| dot(&t[a][b], d)))
}

pub fn max_abs<const N: usize>(a: &Vector<N>) -> f64 {
    a.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

pub fn is_finite<const N: usize>(a: &Vector<N>) -> bool {
    a.iter().all(|x| x.is_finite())
}
