//! Scalar float functions routed through `std` or `libm`, plus the few
//! vector kernels the rest of the crate is built on. Distances and norms
//! accumulate in `f64` regardless of element type.

macro_rules! shim {
    ($(fn $name:ident($($arg:ident: $ty:ty),*) -> $ret:ty => $libm:ident;)*) => {
        $(
            #[inline]
            pub fn $name($($arg: $ty),*) -> $ret {
                #[cfg(feature = "std")]
                {
                    <$ret>::$name($($arg),*)
                }
                #[cfg(not(feature = "std"))]
                {
                    libm::$libm($($arg),*)
                }
            }
        )*
    };
}

shim! {
    fn sqrt(x: f64) -> f64 => sqrt;
    fn ln(x: f64) -> f64 => log;
    fn exp(x: f64) -> f64 => exp;
    fn cos(x: f64) -> f64 => cos;
    fn sin(x: f64) -> f64 => sin;
    fn atan(x: f64) -> f64 => atan;
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.powf(y)
    }
    #[cfg(not(feature = "std"))]
    {
        libm::pow(x, y)
    }
}

#[inline]
pub fn powi(x: f64, n: i32) -> f64 {
    #[cfg(feature = "std")]
    {
        x.powi(n)
    }
    #[cfg(not(feature = "std"))]
    {
        libm::pow(x, n as f64)
    }
}

/// Dot product with `f64` accumulation.
#[inline]
pub fn dot(a: &[f32], b: &[f32]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x as f64 * y as f64).sum()
}

/// Squared Euclidean distance with `f64` accumulation.
#[inline]
pub fn sq_dist(a: &[f32], b: &[f32]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = x as f64 - y as f64;
            d * d
        })
        .sum()
}

/// Euclidean norm with `f64` accumulation.
#[inline]
pub fn norm(a: &[f32]) -> f64 {
    sqrt(a.iter().map(|&x| x as f64 * x as f64).sum())
}

/// Relative difference `|a - b| / max(|a|, |b|, floor)`.
#[inline]
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let denom = a.abs().max(b.abs()).max(1e-12);
    (a - b).abs() / denom
}
