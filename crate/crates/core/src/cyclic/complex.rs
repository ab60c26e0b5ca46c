use super::CyclicOperator;
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::scalar::Scalar;

/// An element `x + iy` of the complexification `H + iH`, stored as its real
/// and imaginary slices.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector<T> {
    pub re: Vector<T>,
    pub im: Vector<T>,
}

impl<T: Scalar> ComplexVector<T> {
    pub fn new(re: Vector<T>, im: Vector<T>) -> Result<Self> {
        if re.dim() != im.dim() {
            return Err(Error::DimensionMismatch {
                expected: re.dim(),
                got: im.dim(),
            });
        }
        Ok(Self { re, im })
    }

    /// Embeds a real vector as `x + i0`.
    pub fn from_real(re: Vector<T>) -> Self {
        let im = Vector::zeros(re.dim());
        Self { re, im }
    }

    pub fn dim(&self) -> usize {
        self.re.dim()
    }

    /// `||x + iy||^2 = ||x||^2 + ||y||^2`.
    pub fn norm_squared(&self) -> T {
        self.re.norm_squared() + self.im.norm_squared()
    }

    pub fn norm(&self) -> T {
        self.norm_squared().sqrt()
    }
}

/// Componentwise action of the cyclic product on the complexification:
/// `T(x + iy) = T(x) + i T(y)`. Subspace mode only, where each projector
/// extends complex-linearly.
pub fn complex_apply_t<T: Scalar>(
    op: &CyclicOperator<T>,
    z: &ComplexVector<T>,
) -> Result<ComplexVector<T>> {
    if !op.subspace_mode() {
        return Err(Error::InvalidParameter(
            "complexified action requires subspace mode".into(),
        ));
    }
    Ok(ComplexVector {
        re: op.apply(&z.re)?,
        im: op.apply(&z.im)?,
    })
}

/// Complex inner product of the complexification:
/// `<x+iy, x'+iy'> = <x,x'> + <y,y'> + i(<x',y> - <x,y'>)`,
/// returned as `(real, imaginary)`.
pub fn complex_inner<T: Scalar>(
    z: &ComplexVector<T>,
    w: &ComplexVector<T>,
) -> Result<(T, T)> {
    let re = crate::linalg::inner(&z.re, &w.re)? + crate::linalg::inner(&z.im, &w.im)?;
    let im = crate::linalg::inner(&w.re, &z.im)? - crate::linalg::inner(&z.re, &w.im)?;
    Ok((re, im))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::sets::Subspace;

    fn v(coords: &[f64]) -> Vector<f64> {
        Vector::new(coords.to_vec()).unwrap()
    }

    fn sixty_degree_operator() -> CyclicOperator<f64> {
        let theta = std::f64::consts::FRAC_PI_3;
        let m1 = Subspace::span(&[v(&[1.0, 0.0])]);
        let m2 = Subspace::span(&[v(&[theta.cos(), theta.sin()])]);
        CyclicOperator::new(vec![Arc::new(m1), Arc::new(m2)]).unwrap()
    }

    #[test]
    fn real_and_imaginary_slices() {
        let op = sixty_degree_operator();
        let y0 = v(&[1.0, 0.0]);
        let t_y0 = op.apply(&y0).unwrap();
        let real_slice = complex_apply_t(&op, &ComplexVector::from_real(y0.clone())).unwrap();
        assert_eq!(real_slice.re, t_y0);
        assert_eq!(real_slice.im, Vector::zeros(2));
        let imag_slice =
            complex_apply_t(&op, &ComplexVector::new(Vector::zeros(2), y0).unwrap()).unwrap();
        assert_eq!(imag_slice.re, Vector::zeros(2));
        assert_eq!(imag_slice.im, t_y0);
    }

    #[test]
    fn norm_identity_under_t() {
        let op = sixty_degree_operator();
        let mut rng = crate::random::rng_from_seed(13);
        for _ in 0..20 {
            let z = ComplexVector::new(
                crate::random::gaussian_vector(2, &mut rng),
                crate::random::gaussian_vector(2, &mut rng),
            )
            .unwrap();
            let tz = complex_apply_t(&op, &z).unwrap();
            let direct = op.apply(&z.re).unwrap().norm_squared()
                + op.apply(&z.im).unwrap().norm_squared();
            assert!((tz.norm_squared() - direct).abs() <= 1e-14);
        }
    }

    #[test]
    fn inner_of_real_vector_with_itself() {
        let x = v(&[1.0, 2.0]);
        let z = ComplexVector::from_real(x.clone());
        let (re, im) = complex_inner(&z, &z).unwrap();
        assert_eq!(re, x.norm_squared());
        assert_eq!(im, 0.0);
    }

    #[test]
    fn inner_of_unit_against_rotated_unit() {
        let e1 = Vector::<f64>::unit(2, 0);
        let z = ComplexVector::from_real(e1.clone());
        let w = ComplexVector::new(Vector::zeros(2), e1).unwrap();
        assert_eq!(complex_inner(&z, &w).unwrap(), (0.0, -1.0));
    }

    #[test]
    fn inner_with_self_is_norm_squared() {
        let mut rng = crate::random::rng_from_seed(29);
        let z = ComplexVector::new(
            crate::random::gaussian_vector::<f64, _>(4, &mut rng),
            crate::random::gaussian_vector(4, &mut rng),
        )
        .unwrap();
        let (re, im) = complex_inner(&z, &z).unwrap();
        assert!((re - z.norm_squared()).abs() <= 1e-14);
        assert_eq!(im, 0.0);
    }

    #[test]
    fn conjugate_symmetry() {
        let mut rng = crate::random::rng_from_seed(41);
        let z = ComplexVector::new(
            crate::random::gaussian_vector::<f64, _>(3, &mut rng),
            crate::random::gaussian_vector(3, &mut rng),
        )
        .unwrap();
        let w = ComplexVector::new(
            crate::random::gaussian_vector::<f64, _>(3, &mut rng),
            crate::random::gaussian_vector(3, &mut rng),
        )
        .unwrap();
        let (re_zw, im_zw) = complex_inner(&z, &w).unwrap();
        let (re_wz, im_wz) = complex_inner(&w, &z).unwrap();
        assert!((re_zw - re_wz).abs() <= 1e-14);
        assert!((im_zw + im_wz).abs() <= 1e-14);
    }

    #[test]
    fn iteration_commutes_exactly() {
        let op = sixty_degree_operator();
        let mut rng = crate::random::rng_from_seed(43);
        let z = ComplexVector::new(
            crate::random::gaussian_vector::<f64, _>(2, &mut rng),
            crate::random::gaussian_vector(2, &mut rng),
        )
        .unwrap();
        let mut zk = z.clone();
        let mut re_k = z.re.clone();
        let mut im_k = z.im.clone();
        for _ in 0..5 {
            zk = complex_apply_t(&op, &zk).unwrap();
            re_k = op.apply(&re_k).unwrap();
            im_k = op.apply(&im_k).unwrap();
        }
        assert_eq!(zk.re, re_k);
        assert_eq!(zk.im, im_k);
    }
}
