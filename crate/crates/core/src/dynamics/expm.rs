//! Dense matrix exponential: degree-13 Padé approximant with scaling and
//! squaring, after shifting out the mean of the diagonal.

use ndarray::Array2;
use ndarray_linalg::Inverse;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const THETA_13: f64 = 5.371_920_351_148_152;

/// Most negative real shift; `e^{-MAX_DECAY_SHIFT}` stays a normal float.
const MAX_DECAY_SHIFT: f64 = 600.0;

const PADE_13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

fn norm1(a: &Array2<C64>) -> f64 {
    a.columns()
        .into_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn combine(terms: &[(&Array2<C64>, f64)], identity_coeff: f64, n: usize) -> Array2<C64> {
    let mut out = Array2::<C64>::eye(n) * C64::new(identity_coeff, 0.0);
    for (m, c) in terms {
        out.scaled_add(C64::new(*c, 0.0), m);
    }
    out
}

/// `exp(A)` for a square complex matrix.
pub fn expm(a: &Array2<C64>) -> Result<Array2<C64>> {
    let n = a.nrows();
    if n == 0 {
        return Ok(a.clone());
    }
    let trace: C64 = (0..n).map(|i| a[[i, i]]).sum();
    let mean = trace / n as f64;
    let mu = C64::new(mean.re.max(-MAX_DECAY_SHIFT), mean.im);
    let mut b = a.clone();
    for i in 0..n {
        b[[i, i]] -= mu;
    }

    let norm = norm1(&b);
    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    if squarings > 0 {
        b.mapv_inplace(|z| z / 2f64.powi(squarings));
    }

    let c = &PADE_13;
    let b2 = b.dot(&b);
    let b4 = b2.dot(&b2);
    let b6 = b4.dot(&b2);

    let inner_u = combine(&[(&b6, c[13]), (&b4, c[11]), (&b2, c[9])], 0.0, n);
    let u_poly = b6.dot(&inner_u) + combine(&[(&b6, c[7]), (&b4, c[5]), (&b2, c[3])], c[1], n);
    let u = b.dot(&u_poly);

    let inner_v = combine(&[(&b6, c[12]), (&b4, c[10]), (&b2, c[8])], 0.0, n);
    let v = b6.dot(&inner_v) + combine(&[(&b6, c[6]), (&b4, c[4]), (&b2, c[2])], c[0], n);

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.inv()?.dot(&p);
    for _ in 0..squarings {
        r = r.dot(&r);
    }
    r.mapv_inplace(|z| z * mu.exp());

    if r.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite { duration: f64::NAN });
    }
    Ok(r)
}
