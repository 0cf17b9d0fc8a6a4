//! Adaptive midpoint quadrature with Richardson acceptance.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad {
    pub value: f64,
    pub abs_error: f64,
    pub evals: u64,
}

const MAX_DEPTH: u32 = 30;

/// ∫_a^b f over the partition given by `breaks` (sorted points inside (a, b)).
///
/// Each panel compares the one-point midpoint rule with the three-point rule
/// on its thirds; the centre node is shared, so tripling costs two new
/// evaluations. The extrapolated value I₃ + (I₃ − I₁)/8 is accepted when
/// |I₃ − I₁|/8 is within the panel's share of `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, breaks: &[f64], tol: f64) -> Quad {
    if !(b > a) {
        return Quad {
            value: 0.0,
            abs_error: 0.0,
            evals: 0,
        };
    }
    let mut pts = vec![a];
    pts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let width = b - a;
    let mut out = Quad {
        value: 0.0,
        abs_error: 0.0,
        evals: 0,
    };
    for w in pts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        out.evals += 1;
        panel(f, lo, hi, fm, tol * (hi - lo) / width, 0, &mut out);
    }
    out
}

fn panel<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, fm: f64, tol: f64, depth: u32, out: &mut Quad) {
    let h = hi - lo;
    let third = h / 3.0;
    let f_left = f(lo + third / 2.0);
    let f_right = f(hi - third / 2.0);
    out.evals += 2;
    let i1 = h * fm;
    let i3 = third * (f_left + fm + f_right);
    let err = (i3 - i1).abs() / 8.0;
    if err <= tol || depth >= MAX_DEPTH {
        out.value += i3 + (i3 - i1) / 8.0;
        out.abs_error += err;
        return;
    }
    let sub = tol / 3.0;
    panel(f, lo, lo + third, f_left, sub, depth + 1, out);
    panel(f, lo + third, hi - third, fm, sub, depth + 1, out);
    panel(f, hi - third, hi, f_right, sub, depth + 1, out);
}
