//! Overflow-safe Riemann-sphere arithmetic and the seeded sampling contract.
//!
//! Points are kept in projective form `(num : den)` with the larger modulus
//! normalized to 1, so orbits through large moduli (the bundled map has a
//! zero near 191.8 and a pole parameter 2712.82) never overflow.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::config::INFINITY_THRESHOLD;

#[derive(Debug, Error, PartialEq)]
pub enum SphereError {
    #[error("projective point with both components zero or non-finite")]
    ZeroPoint,
    #[error("numerical breakdown: spherical derivative non-finite in every chart")]
    NumericalBreakdown,
}

/// A point of the Riemann sphere as a normalized projective pair.
///
/// The point is `num / den`; infinity is exactly `(1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    num: Complex64,
    den: Complex64,
}

impl SpherePoint {
    /// Normalizes a raw pair so that the larger modulus is 1.
    pub fn normalize(num: Complex64, den: Complex64) -> Result<Self, SphereError> {
        let (n2, d2) = (num.norm_sqr(), den.norm_sqr());
        if !(n2.is_finite() && d2.is_finite()) {
            // One non-finite component still determines the point if the
            // other is finite: (inf, c) is infinity, (c, inf) is zero.
            return if n2.is_finite() {
                Ok(Self::zero())
            } else if d2.is_finite() {
                Ok(Self::infinity())
            } else {
                Err(SphereError::ZeroPoint)
            };
        }
        if n2 == 0.0 && d2 == 0.0 {
            return Err(SphereError::ZeroPoint);
        }
        let scale = n2.max(d2).sqrt();
        let mut p = SpherePoint {
            num: num / scale,
            den: den / scale,
        };
        // Clean tiny components so poles and zeros are exactly representable.
        if p.den.norm() < INFINITY_THRESHOLD {
            p = Self::infinity();
        } else if p.num.norm() < INFINITY_THRESHOLD {
            p = Self::zero();
        }
        Ok(p)
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::normalize(z, Complex64::new(1.0, 0.0)).expect("finite complex number")
    }

    pub fn from_re_im(re: f64, im: f64) -> Self {
        Self::from_complex(Complex64::new(re, im))
    }

    pub const fn infinity() -> Self {
        SpherePoint {
            num: Complex64::new(1.0, 0.0),
            den: Complex64::new(0.0, 0.0),
        }
    }

    pub const fn zero() -> Self {
        SpherePoint {
            num: Complex64::new(0.0, 0.0),
            den: Complex64::new(1.0, 0.0),
        }
    }

    pub fn is_infinity(&self) -> bool {
        self.den.norm() < INFINITY_THRESHOLD
    }

    pub fn numerator(&self) -> Complex64 {
        self.num
    }

    pub fn denominator(&self) -> Complex64 {
        self.den
    }

    /// Affine value `num/den`; `None` at infinity.
    pub fn to_complex(&self) -> Option<Complex64> {
        if self.is_infinity() {
            None
        } else {
            Some(self.num / self.den)
        }
    }

    /// True when the representative has `|z| <= 1`, i.e. lives in the finite
    /// unit-disk chart.
    pub fn in_unit_chart(&self) -> bool {
        self.num.norm_sqr() <= self.den.norm_sqr()
    }

    /// The antipode-reciprocal chart value `den/num` (i.e. `1/z`).
    pub fn reciprocal(&self) -> SpherePoint {
        SpherePoint {
            num: self.den,
            den: self.num,
        }
    }
}

/// Chordal distance on the unit sphere; values in `[0, 2]`, exactly 2 at
/// antipodal pairs.
pub fn chordal_distance(p: &SpherePoint, q: &SpherePoint) -> f64 {
    let cross = p.num * q.den - q.num * p.den;
    let np = (p.num.norm_sqr() + p.den.norm_sqr()).sqrt();
    let nq = (q.num.norm_sqr() + q.den.norm_sqr()).sqrt();
    2.0 * cross.norm() / (np * nq)
}

/// Deterministic seeded random stream.
///
/// Backed by ChaCha8 with the 64-bit seed as key and the stream index as the
/// ChaCha stream id, so `(seed, stream_index)` fully determines the sample
/// sequence on every host.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_index);
        RngStream {
            seed,
            stream_index,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// A fresh stream with the same seed and a different index.
    pub fn substream(&self, stream_index: u64) -> Self {
        Self::new(self.seed, stream_index)
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    /// `x + iy` with `x, y` independent uniform on `[0, 1]`.
    pub fn sample_unit_square(&mut self) -> SpherePoint {
        let x = self.uniform();
        let y = self.uniform();
        SpherePoint::from_re_im(x, y)
    }

    /// A point distributed by normalized Lebesgue measure on the sphere,
    /// returned through stereographic projection.
    pub fn sample_sphere_uniform(&mut self) -> SpherePoint {
        // Uniform on S^2: z-coordinate uniform on [-1,1], longitude uniform.
        let w = 2.0 * self.uniform() - 1.0;
        let phi = 2.0 * std::f64::consts::PI * self.uniform();
        let r = (1.0 - w * w).max(0.0).sqrt();
        let (x, y) = (r * phi.cos(), r * phi.sin());
        SpherePoint::normalize(Complex64::new(x, y), Complex64::new(1.0 - w, 0.0))
            .expect("sphere sample is a valid point")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn normalize_scales_to_max_modulus_one() {
        let p = SpherePoint::normalize(c(2.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(p.numerator().re, 1.0);
        assert_abs_diff_eq!(p.denominator().re, 0.5);
    }

    #[test]
    fn normalize_infinity_and_zero() {
        let inf = SpherePoint::normalize(c(5.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!(inf.is_infinity());
        assert_eq!(inf, SpherePoint::infinity());
        let zero = SpherePoint::normalize(c(0.0, 0.0), c(3.0, 0.0)).unwrap();
        assert_eq!(zero, SpherePoint::zero());
    }

    #[test]
    fn normalize_rejects_zero_pair() {
        assert_eq!(
            SpherePoint::normalize(c(0.0, 0.0), c(0.0, 0.0)),
            Err(SphereError::ZeroPoint)
        );
    }

    #[test]
    fn chordal_antipodes_and_unit() {
        let zero = SpherePoint::zero();
        let inf = SpherePoint::infinity();
        let one = SpherePoint::from_re_im(1.0, 0.0);
        let minus_one = SpherePoint::from_re_im(-1.0, 0.0);
        assert_abs_diff_eq!(chordal_distance(&zero, &inf), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(chordal_distance(&one, &minus_one), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            chordal_distance(&zero, &one),
            std::f64::consts::SQRT_2,
            epsilon = 1e-15
        );
    }

    #[test]
    fn rng_streams_are_deterministic() {
        let a = RngStream::new(42, 0).sample_unit_square();
        let b = RngStream::new(42, 0).sample_unit_square();
        assert_eq!(a, b);
        let c = RngStream::new(42, 1).sample_unit_square();
        assert_ne!(a, c);
    }

    #[test]
    fn unit_square_samples_in_bounds_with_correct_mean() {
        let mut rng = RngStream::new(7, 0);
        let n = 100_000;
        let (mut sx, mut sy) = (0.0, 0.0);
        for _ in 0..n {
            let p = rng.sample_unit_square();
            let z = p.to_complex().unwrap();
            assert!((0.0..=1.0).contains(&z.re) && (0.0..=1.0).contains(&z.im));
            sx += z.re;
            sy += z.im;
        }
        // Law of large numbers: mean (0.5, 0.5) +- 0.01.
        assert_abs_diff_eq!(sx / n as f64, 0.5, epsilon = 0.01);
        assert_abs_diff_eq!(sy / n as f64, 0.5, epsilon = 0.01);
    }

    proptest! {
        #[test]
        fn normalize_is_projective_scale_invariant(
            re in -5.0f64..5.0, im in -5.0f64..5.0,
            dre in -5.0f64..5.0, dim in -5.0f64..5.0,
            lre in -3.0f64..3.0, lim in -3.0f64..3.0,
        ) {
            let (a, b, lam) = (c(re, im), c(dre, dim), c(lre, lim));
            prop_assume!(a.norm() + b.norm() > 1e-6 && lam.norm() > 1e-6);
            let p = SpherePoint::normalize(a, b).unwrap();
            let q = SpherePoint::normalize(lam * a, lam * b).unwrap();
            prop_assert!(chordal_distance(&p, &q) < 1e-12);
            // Idempotence.
            let r = SpherePoint::normalize(p.numerator(), p.denominator()).unwrap();
            prop_assert!(chordal_distance(&p, &r) < 1e-15);
        }

        #[test]
        fn chordal_metric_axioms(
            coords in proptest::collection::vec(-10.0f64..10.0, 6)
        ) {
            let p = SpherePoint::from_re_im(coords[0], coords[1]);
            let q = SpherePoint::from_re_im(coords[2], coords[3]);
            let r = SpherePoint::from_re_im(coords[4], coords[5]);
            prop_assert_eq!(
                chordal_distance(&p, &q).to_bits(),
                chordal_distance(&q, &p).to_bits()
            );
            prop_assert!(
                chordal_distance(&p, &r)
                    <= chordal_distance(&p, &q) + chordal_distance(&q, &r) + 1e-12
            );
        }
    }
}
