//! Composite 16-point Gauss-Legendre quadrature.

/// Nodes and weights of the 16-point Gauss-Legendre rule on `[-1, 1]`.
const GL16: [(f64, f64); 16] = [
    (-0.9894009349916499, 0.027152459411754037),
    (-0.9445750230732326, 0.062253523938647706),
    (-0.8656312023878318, 0.09515851168249259),
    (-0.755404408355003, 0.12462897125553403),
    (-0.6178762444026438, 0.14959598881657676),
    (-0.45801677765722737, 0.16915651939500262),
    (-0.2816035507792589, 0.1826034150449236),
    (-0.09501250983763745, 0.18945061045506859),
    (0.09501250983763745, 0.18945061045506859),
    (0.2816035507792589, 0.1826034150449236),
    (0.45801677765722737, 0.16915651939500262),
    (0.6178762444026438, 0.14959598881657676),
    (0.755404408355003, 0.12462897125553403),
    (0.8656312023878318, 0.09515851168249259),
    (0.9445750230732326, 0.062253523938647706),
    (0.9894009349916499, 0.027152459411754037),
];

/// 16-point Gauss-Legendre on a single interval `[a, b]`.
pub fn gauss16<F: FnMut(f64) -> f64>(a: f64, b: f64, mut f: F) -> f64 {
    let mid = 0.5 * (a + b);
    let rad = 0.5 * (b - a);
    let mut acc = 0.0;
    for &(x, w) in GL16.iter() {
        acc += w * f(mid + rad * x);
    }
    rad * acc
}

/// Composite rule: `panels` equal subintervals of `[a, b]`, 16 points each.
pub fn composite16<F: FnMut(f64) -> f64>(a: f64, b: f64, panels: usize, mut f: F) -> f64 {
    debug_assert!(panels > 0);
    let width = (b - a) / panels as f64;
    let mut acc = 0.0;
    for i in 0..panels {
        let lo = a + i as f64 * width;
        acc += gauss16(lo, lo + width, &mut f);
    }
    acc
}
