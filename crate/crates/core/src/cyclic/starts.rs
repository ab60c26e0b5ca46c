use std::borrow::Borrow;

use super::CyclicOperator;
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::random::{rng_from_seed, standard_normal};
use crate::scalar::Scalar;
use crate::sets::{Projectable, Subspace};

/// Decomposition witnesses for a generated starting point, so that
/// membership in the claimed subspace can be verified independently of the
/// construction.
#[derive(Debug, Clone)]
pub enum StartCertificate<T> {
    /// No structural claim.
    Generic,
    /// `y_0 = x_0 + (1/m) sum_i x_i` with `x_0` in `M` and `x_i` in `M_i^perp`.
    InY {
        m_component: Vector<T>,
        complement_components: Vec<Vector<T>>,
    },
    /// `y_0 = x + (I - T)^p y` with `x` in `M`.
    InXp {
        m_component: Vector<T>,
        preimage: Vector<T>,
        p: usize,
    },
}

/// Residuals from re-deriving a starting point out of its certificate.
#[derive(Debug, Clone)]
pub struct CertificateCheck<T> {
    /// `||reassembled - y_0||`; `None` for a generic certificate.
    pub reassembly_residual: Option<T>,
    /// Membership residuals `||P w - w||` for each witness, beginning with
    /// the `M`-component.
    pub membership_residuals: Vec<T>,
}

impl<T: Scalar> StartCertificate<T> {
    /// Rebuilds the starting point from the witnesses. Generic certificates
    /// carry nothing to rebuild.
    pub fn reassemble(&self, op: &CyclicOperator<T>) -> Result<Option<Vector<T>>> {
        match self {
            Self::Generic => Ok(None),
            Self::InY {
                m_component,
                complement_components,
            } => {
                let m = complement_components.len();
                let weight = T::one() / T::from_usize(m).unwrap();
                let mut y0 = m_component.clone();
                for x in complement_components {
                    y0 = y0.axpy(weight, x);
                }
                Ok(Some(y0))
            }
            Self::InXp {
                m_component,
                preimage,
                p,
            } => {
                let mut w = preimage.clone();
                for _ in 0..*p {
                    w = &w - &op.apply(&w)?;
                }
                Ok(Some(m_component + &w))
            }
        }
    }

    /// Verifies the certificate against `y_0`: reassembly plus projector
    /// residuals of every witness membership claim.
    pub fn verify(
        &self,
        y0: &Vector<T>,
        op: &CyclicOperator<T>,
        m_set: &dyn Projectable<T>,
        complements: &[std::sync::Arc<dyn Projectable<T>>],
    ) -> Result<CertificateCheck<T>> {
        let reassembly_residual = self
            .reassemble(op)?
            .map(|rebuilt| rebuilt.distance_to(y0));
        let mut membership_residuals = Vec::new();
        match self {
            Self::Generic => {}
            Self::InY {
                m_component,
                complement_components,
            } => {
                membership_residuals
                    .push((&m_set.project(m_component) - m_component).norm());
                if complement_components.len() != complements.len() {
                    return Err(Error::InvalidParameter(format!(
                        "certificate has {} complement witnesses, problem has {}",
                        complement_components.len(),
                        complements.len()
                    )));
                }
                for (x, c) in complement_components.iter().zip(complements) {
                    membership_residuals.push((&c.project(x) - x).norm());
                }
            }
            Self::InXp { m_component, .. } => {
                membership_residuals
                    .push((&m_set.project(m_component) - m_component).norm());
                // The (I - T)^p part carries no M-component: P_M(y0) = x.
                membership_residuals.push((&m_set.project(y0) - m_component).norm());
            }
        }
        Ok(CertificateCheck {
            reassembly_residual,
            membership_residuals,
        })
    }
}

fn draw_in_subspace<T: Scalar>(
    s: &Subspace<T>,
    scale: T,
    rng: &mut impl rand::Rng,
) -> Vector<T> {
    let coeffs: Vec<T> = (0..s.dim())
        .map(|_| standard_normal::<T, _>(rng) * scale)
        .collect();
    s.basis().synthesize(&coeffs)
}

/// Draws a starting point from `Y = M + (1/m) sum_i M_i^perp` by sampling
/// Gaussian coefficients against the given bases, scaled by `scale`.
pub fn gen_start_in_y<T: Scalar, S: Borrow<Subspace<T>>>(
    m_subspace: &Subspace<T>,
    complements: &[S],
    seed: u64,
    scale: T,
) -> (Vector<T>, StartCertificate<T>) {
    let mut rng = rng_from_seed(seed);
    let x0 = draw_in_subspace(m_subspace, scale, &mut rng);
    let components: Vec<Vector<T>> = complements
        .iter()
        .map(|c| draw_in_subspace(c.borrow(), scale, &mut rng))
        .collect();
    let weight = T::one() / T::from_usize(components.len().max(1)).unwrap();
    let mut y0 = x0.clone();
    for x in &components {
        y0 = y0.axpy(weight, x);
    }
    (
        y0,
        StartCertificate::InY {
            m_component: x0,
            complement_components: components,
        },
    )
}

/// Draws a starting point from `X_p = M + (I - T)^p(H)`: a Gaussian
/// preimage `y`, a Gaussian `x` in `M`, and `y_0 = x + (I - T)^p y` where
/// the difference is applied `p` times (no operator matrices are formed).
pub fn gen_start_in_xp<T: Scalar>(
    op: &CyclicOperator<T>,
    m_subspace: &Subspace<T>,
    p: usize,
    seed: u64,
    scale: T,
) -> Result<(Vector<T>, StartCertificate<T>)> {
    if !op.subspace_mode() {
        return Err(Error::InvalidParameter(
            "X_p starts require subspace mode".into(),
        ));
    }
    if p == 0 {
        return Err(Error::InvalidParameter("p must be at least 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    let x = draw_in_subspace(m_subspace, scale, &mut rng);
    let preimage =
        crate::random::gaussian_vector::<T, _>(op.ambient_dim(), &mut rng).scale(scale);
    let mut w = preimage.clone();
    for _ in 0..p {
        w = &w - &op.sweep(&w);
    }
    let y0 = &x + &w;
    Ok((
        y0,
        StartCertificate::InXp {
            m_component: x,
            preimage,
            p,
        },
    ))
}
