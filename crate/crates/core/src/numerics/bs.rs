//! Gragg–Bulirsch–Stoer extrapolation for smooth real systems.

const SEQ: [usize; 8] = [2, 4, 6, 8, 10, 12, 14, 16];

fn midpoint<const N: usize, F>(f: &mut F, x: f64, y: &[f64; N], big_h: f64, n: usize) -> [f64; N]
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let h = big_h / n as f64;
    let d0 = f(x, y);
    let mut zm = *y;
    let mut z = [0.0; N];
    for i in 0..N {
        z[i] = y[i] + h * d0[i];
    }
    for m in 1..n {
        let d = f(x + m as f64 * h, &z);
        for i in 0..N {
            let next = zm[i] + 2.0 * h * d[i];
            zm[i] = z[i];
            z[i] = next;
        }
    }
    let d = f(x + big_h, &z);
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = 0.5 * (z[i] + zm[i] + h * d[i]);
    }
    out
}

/// Integrates `y' = f(x, y)` from `x0` to `x1`. `observe` is called after
/// every accepted step. Fails when the step size underflows.
pub fn integrate<const N: usize, F, O>(
    mut f: F,
    x0: f64,
    y0: [f64; N],
    x1: f64,
    rtol: f64,
    atol: f64,
    initial_step: f64,
    mut observe: O,
) -> Result<[f64; N], String>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    O: FnMut(f64, &[f64; N]),
{
    let dir = if x1 >= x0 { 1.0 } else { -1.0 };
    let span = (x1 - x0).abs();
    if span == 0.0 {
        return Ok(y0);
    }
    let mut x = x0;
    let mut y = y0;
    let mut h = initial_step.abs().min(span).max(span * 1e-12);
    let h_min = span * 1e-14;
    while dir * (x1 - x) > 0.0 {
        if h > (x1 - x).abs() {
            h = (x1 - x).abs();
        }
        let big_h = dir * h;
        let mut prev_row: Vec<[f64; N]> = Vec::with_capacity(SEQ.len());
        let mut accepted = None;
        for (k, &nk) in SEQ.iter().enumerate() {
            let mut row: Vec<[f64; N]> = Vec::with_capacity(k + 1);
            row.push(midpoint(&mut f, x, &y, big_h, nk));
            for j in 1..=k {
                let ratio = (nk as f64 / SEQ[k - j] as f64).powi(2) - 1.0;
                let a = row[j - 1];
                let b = prev_row[j - 1];
                let mut t = [0.0; N];
                for i in 0..N {
                    t[i] = a[i] + (a[i] - b[i]) / ratio;
                }
                row.push(t);
            }
            if k >= 2 {
                let a = row[k];
                let b = row[k - 1];
                let mut err: f64 = 0.0;
                for i in 0..N {
                    let scale = atol + rtol * a[i].abs().max(y[i].abs());
                    err = err.max((a[i] - b[i]).abs() / scale);
                }
                if err <= 1.0 {
                    accepted = Some((a, k));
                    break;
                }
            }
            prev_row = row;
        }
        match accepted {
            Some((ynew, k)) => {
                x += big_h;
                if dir * (x - x1) > 0.0 || (x1 - x).abs() < h_min {
                    x = x1;
                }
                y = ynew;
                observe(x, &y);
                h *= match k {
                    0..=3 => 1.6,
                    4..=5 => 1.0,
                    _ => 0.7,
                };
            }
            None => {
                h *= 0.4;
                if h < h_min {
                    return Err(format!("step size underflow at x = {x}"));
                }
            }
        }
    }
    Ok(y)
}
