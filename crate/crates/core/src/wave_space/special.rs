//! Scaled spherical Bessel functions `j_n(z)/z^n`, used for the closed-form
//! Fourier transforms of polynomial bumps.

/// `j_n(z) / z^n` for real `z` (an even function of `z`, finite at 0 where it
/// equals `1/(2n+1)!!`).
///
/// The power series is used for `|z| < 1`, upward recurrence from `j₀, j₁`
/// for `|z| > n`, and Miller's backward recurrence in between.
pub fn spherical_bessel_scaled(n: u32, z: f64) -> f64 {
    let z = z.abs();
    if z < 1.0 {
        return series(n, z);
    }
    let nf = n as f64;
    let jn = if z > nf { upward(n, z) } else { backward(n, z) };
    jn / z.powi(n as i32)
}

fn series(n: u32, z: f64) -> f64 {
    let mut term = 1.0;
    for m in 0..n {
        term /= (2 * m + 3) as f64;
    }
    let mut sum = term;
    let x = -0.5 * z * z;
    for m in 0..80u32 {
        term *= x / (((m + 1) * (2 * n + 2 * m + 3)) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn j0_j1(z: f64) -> (f64, f64) {
    let (s, c) = z.sin_cos();
    (s / z, s / (z * z) - c / z)
}

fn upward(n: u32, z: f64) -> f64 {
    let (mut prev, mut cur) = j0_j1(z);
    if n == 0 {
        return prev;
    }
    for m in 1..n {
        let next = (2 * m + 1) as f64 / z * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn backward(n: u32, z: f64) -> f64 {
    let start = n + 20 + (40.0 * (n as f64 + z)).sqrt() as u32;
    let mut next = 0.0_f64;
    let mut cur = 1e-280_f64;
    let mut at_n = 0.0;
    let mut j1 = 0.0;
    for m in (1..=start).rev() {
        // cur holds j_m, next holds j_{m+1}
        let prev = (2 * m + 1) as f64 / z * cur - next;
        next = cur;
        cur = prev;
        if m - 1 == n {
            at_n = cur;
        }
        if m - 1 == 1 {
            j1 = cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            at_n *= 1e-250;
            j1 *= 1e-250;
        }
    }
    let j0 = cur;
    let (t0, t1) = j0_j1(z);
    if t0.abs() >= t1.abs() {
        at_n * (t0 / j0)
    } else {
        at_n * (t1 / j1)
    }
}
