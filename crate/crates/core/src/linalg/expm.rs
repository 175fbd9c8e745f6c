//! Scaling-and-squaring matrix exponential with diagonal Padé approximants.

use nalgebra::{ComplexField, DMatrix};

use super::{to_complex, real_part, CMatrix, RMatrix};
use crate::error::{Error, Result};

const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068),
];
const THETA_13: f64 = 5.371920351148152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
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

fn norm1<T: ComplexField<RealField = f64> + Copy>(a: &DMatrix<T>) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|x| x.modulus()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn scal<T: ComplexField<RealField = f64> + Copy>(x: f64) -> T {
    T::from_real(x)
}

fn pade_low<T: ComplexField<RealField = f64> + Copy>(a: &DMatrix<T>, b: &[f64]) -> (DMatrix<T>, DMatrix<T>) {
    let n = a.nrows();
    let id = DMatrix::<T>::identity(n, n);
    let a2 = a * a;
    let mut u = &id * scal::<T>(b[1]);
    let mut v = &id * scal::<T>(b[0]);
    let mut pow = id.clone();
    let m = b.len() - 1;
    let mut j = 2;
    while j <= m {
        pow = &pow * &a2;
        v += &pow * scal::<T>(b[j]);
        if j + 1 <= m {
            u += &pow * scal::<T>(b[j + 1]);
        }
        j += 2;
    }
    (a * u, v)
}

fn pade13<T: ComplexField<RealField = f64> + Copy>(a: &DMatrix<T>) -> (DMatrix<T>, DMatrix<T>) {
    let b = &B13;
    let n = a.nrows();
    let id = DMatrix::<T>::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let s = |x: f64| scal::<T>(x);
    let u_inner = &a6 * s(b[13]) + &a4 * s(b[11]) + &a2 * s(b[9]);
    let u = a * (&a6 * u_inner + &a6 * s(b[7]) + &a4 * s(b[5]) + &a2 * s(b[3]) + &id * s(b[1]));
    let v_inner = &a6 * s(b[12]) + &a4 * s(b[10]) + &a2 * s(b[8]);
    let v = &a6 * v_inner + &a6 * s(b[6]) + &a4 * s(b[4]) + &a2 * s(b[2]) + &id * s(b[0]);
    (u, v)
}

/// `exp(A)` for real or complex square matrices.
pub fn expm<T: ComplexField<RealField = f64> + Copy>(a: &DMatrix<T>) -> Result<DMatrix<T>> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("expm: {}x{} is not square", a.nrows(), a.ncols())));
    }
    if a.iter().any(|x| !x.modulus().is_finite()) {
        return Err(Error::NonFinite("expm input".into()));
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(a.clone());
    }
    let nrm = norm1(a);
    if nrm == 0.0 {
        return Ok(DMatrix::identity(n, n));
    }
    let solve = |u: DMatrix<T>, v: DMatrix<T>| -> Result<DMatrix<T>> {
        let num = &v + &u;
        let den = v - u;
        den.lu().solve(&num).ok_or_else(|| Error::Singular { what: "Padé denominator".into(), rcond: 0.0 })
    };
    for (m, theta) in THETA {
        if nrm <= theta {
            let b: &[f64] = match m {
                3 => &B3,
                5 => &B5,
                7 => &B7,
                _ => &B9,
            };
            let (u, v) = pade_low(a, b);
            return solve(u, v);
        }
    }
    let s = (nrm / THETA_13).log2().ceil().max(0.0) as i32;
    let scaled = a * scal::<T>(2f64.powi(-s));
    let (u, v) = pade13(&scaled);
    let mut r = solve(u, v)?;
    for _ in 0..s {
        r = &r * &r;
    }
    if r.iter().any(|x| !x.modulus().is_finite()) {
        return Err(Error::NonFinite("expm result (overflow)".into()));
    }
    Ok(r)
}

/// `exp(tA)` for a complex matrix.
pub fn mat_exp(a: &CMatrix, t: f64) -> Result<CMatrix> {
    if !t.is_finite() {
        return Err(Error::NonFinite("mat_exp time".into()));
    }
    expm(&(a * super::c(t, 0.0)))
}

/// `exp(tA)` for a real matrix.
pub fn mat_exp_real(a: &RMatrix, t: f64) -> Result<RMatrix> {
    if !t.is_finite() {
        return Err(Error::NonFinite("mat_exp time".into()));
    }
    Ok(real_part(&expm(&to_complex(&(a * t)))?))
}
