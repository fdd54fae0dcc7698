use super::bessel_j;

/// Ascending positive zeros j_{m,1} < j_{m,2} < ... of J_m.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselZeroTable {
    pub order: u32,
    pub zeros: Vec<f64>,
}

/// First `count` positive zeros of J_m.
///
/// J_m has no zeros in (0, m] and consecutive zeros are more than π apart,
/// so a unit-step sign scan from x = m brackets each root exactly once.
pub fn bessel_zeros(m: u32, count: usize) -> BesselZeroTable {
    let start = (m as f64).max(0.5);
    let zeros = find_zeros(|x| bessel_j(m, x), start, 1.0, count);
    BesselZeroTable { order: m, zeros }
}

/// All positive zeros of J_m not exceeding `x_max`.
pub fn bessel_zeros_below(m: u32, x_max: f64) -> Vec<f64> {
    let mut zeros = Vec::new();
    let mut a = (m as f64).max(0.5);
    let mut fa = bessel_j(m, a).0;
    while a < x_max {
        let b = a + 1.0;
        let fb = bessel_j(m, b).0;
        if fa * fb < 0.0 || fa == 0.0 {
            let z = if fa == 0.0 { a } else { polish(&|x| bessel_j(m, x), a, b, fa) };
            if z <= x_max {
                zeros.push(z);
            }
        }
        a = b;
        fa = fb;
    }
    zeros
}

/// Zeros of a smooth function with known derivative, bracketed by scanning
/// upward from `start` in increments of `step` and polished by Newton steps
/// kept inside the bracket (bisection when a step escapes).
pub fn find_zeros<F>(f: F, start: f64, step: f64, count: usize) -> Vec<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    let mut out = Vec::with_capacity(count);
    let mut a = start;
    let mut fa = f(a).0;
    while out.len() < count {
        let b = a + step;
        let fb = f(b).0;
        if fa == 0.0 {
            out.push(a);
        } else if fa * fb < 0.0 {
            out.push(polish(&f, a, b, fa));
        }
        a = b;
        fa = fb;
    }
    out
}

fn polish<F>(f: &F, mut a: f64, mut b: f64, fa: f64) -> f64
where
    F: Fn(f64) -> (f64, f64),
{
    let rising = fa < 0.0;
    let mut x = 0.5 * (a + b);
    for _ in 0..200 {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return x;
        }
        if (fx < 0.0) == rising {
            a = x;
        } else {
            b = x;
        }
        let newton = x - fx / dfx;
        let next = if dfx != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if (next - x).abs() <= 2.0 * f64::EPSILON * x.abs() || b - a <= 2.0 * f64::EPSILON * x.abs() {
            return next;
        }
        x = next;
    }
    x
}
