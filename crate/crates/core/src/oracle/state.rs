//! Dense state vectors, density matrices, partial traces and entropies.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::config::LogBase;
use crate::error::{Error, Result};
use crate::measures::Side;

pub const STATE_TOL: f64 = 1e-10;

/// Unit vector in a product basis.
#[derive(Clone, Debug, PartialEq)]
pub struct PureStateVector {
    pub amplitudes: DVector<Complex64>,
}

impl PureStateVector {
    /// Wraps amplitudes; fails unless the norm is 1 within `1e-10`.
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidArgument(format!(
                "state norm {norm} is not 1"
            )));
        }
        Ok(PureStateVector { amplitudes })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(DVector::from_iterator(
            amplitudes.len(),
            amplitudes.iter().map(|&x| Complex64::new(x, 0.0)),
        ))
    }

    /// Normalizes `amplitudes`; `None` for the zero vector.
    pub fn normalized(amplitudes: DVector<Complex64>) -> Option<(f64, Self)> {
        let norm = amplitudes.norm();
        (norm > 0.0).then(|| {
            (
                norm,
                PureStateVector {
                    amplitudes: amplitudes / Complex64::from(norm),
                },
            )
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn inner(&self, other: &PureStateVector) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// The amplitudes as a `d_A x d_B` matrix `Psi`, so that `rho_A = Psi Psi^dag`.
    pub fn as_matrix(&self, dims: (usize, usize)) -> Result<DMatrix<Complex64>> {
        check_dims(self.dim(), dims)?;
        Ok(DMatrix::from_row_slice(
            dims.0,
            dims.1,
            self.amplitudes.as_slice(),
        ))
    }
}

fn check_dims(len: usize, (da, db): (usize, usize)) -> Result<()> {
    if da * db != len {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {len} cannot split as {da} x {db}"
        )));
    }
    Ok(())
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    pub entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Checks Hermiticity, trace and positivity within `1e-10`.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let rho = DensityMatrix { entries };
        rho.validate()?;
        Ok(rho)
    }

    pub fn pure(state: &PureStateVector) -> Self {
        let v = &state.amplitudes;
        DensityMatrix {
            entries: v * v.adjoint(),
        }
    }

    /// `sum_i w_i |psi_i><psi_i|`.
    pub fn mixture<'a>(
        terms: impl IntoIterator<Item = (f64, &'a PureStateVector)>,
    ) -> Result<Self> {
        let mut entries: Option<DMatrix<Complex64>> = None;
        for (w, s) in terms {
            let v = &s.amplitudes;
            let term = (v * v.adjoint()) * Complex64::from(w);
            entries = Some(match entries {
                None => term,
                Some(acc) => {
                    if acc.nrows() != term.nrows() {
                        return Err(Error::DimensionMismatch(
                            "mixture of unequal dimensions".into(),
                        ));
                    }
                    acc + term
                }
            });
        }
        Self::new(entries.ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.entries - self.entries.adjoint()).camax()
    }

    pub fn validate(&self) -> Result<()> {
        if !self.entries.is_square() {
            return Err(Error::InvalidDensityMatrix("not square".into()));
        }
        let herm = self.hermiticity_error();
        if herm > STATE_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "hermiticity error {herm:e}"
            )));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
        }
        let min = self.spectrum().into_iter().fold(f64::INFINITY, f64::min);
        if min < -STATE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// Eigenvalues in ascending order.
    pub fn spectrum(&self) -> Vec<f64> {
        hermitian_spectrum(&self.entries)
    }

    /// `tr(rho sigma)`.
    pub fn overlap(&self, other: &DensityMatrix) -> f64 {
        self.entries.dotc(&other.entries).re
    }

    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            entries: self.entries.kronecker(&other.entries),
        }
    }
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// The matrix is split into the connected components of its nonzero pattern
/// and each block is diagonalized separately.
pub fn hermitian_spectrum(m: &DMatrix<Complex64>) -> Vec<f64> {
    let n = m.nrows();
    let scale = m.camax().max(f64::MIN_POSITIVE);
    let cutoff = 1e-15 * scale;
    // union-find over indices joined by nonzero entries
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for c in 0..n {
        for r in (c + 1)..n {
            if m[(r, c)].norm() > cutoff {
                let (a, b) = (root(&mut parent, r), root(&mut parent, c));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut blocks: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = root(&mut parent, i);
        blocks.entry(r).or_default().push(i);
    }
    let mut out = Vec::with_capacity(n);
    for idx in blocks.values() {
        if idx.len() == 1 {
            out.push(m[(idx[0], idx[0])].re);
            continue;
        }
        let sub = DMatrix::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])]);
        out.extend(sub.symmetric_eigenvalues().iter().copied());
    }
    out.sort_by(|a, b| a.total_cmp(b));
    out
}

/// `-sum lambda log lambda` over a spectrum; nonpositive eigenvalues contribute 0.
pub fn entropy_of_spectrum(spectrum: &[f64], base: LogBase) -> f64 {
    let nats: f64 =
        crate::scalar::stable_sum(spectrum.iter().filter(|&&l| l > 0.0).map(|&l| -l * l.ln()));
    base.from_nats(nats)
}

/// Von Neumann entropy; rejects matrices that are not valid states.
pub fn von_neumann_entropy(rho: &DensityMatrix, base: LogBase) -> Result<f64> {
    rho.validate()?;
    Ok(entropy_of_spectrum(&rho.spectrum(), base))
}

/// Reduction of a pure state onto one side.
pub fn partial_trace_pure(
    state: &PureStateVector,
    dims: (usize, usize),
    keep: Side,
) -> Result<DensityMatrix> {
    let psi = state.as_matrix(dims)?;
    let entries = match keep {
        Side::A => &psi * psi.adjoint(),
        Side::B => (psi.adjoint() * &psi).transpose(),
    };
    Ok(DensityMatrix { entries })
}

/// Reduction of a bipartite density matrix onto one side.
pub fn partial_trace(
    rho: &DensityMatrix,
    dims: (usize, usize),
    keep: Side,
) -> Result<DensityMatrix> {
    let (da, db) = dims;
    if rho.dim() != da * db {
        return Err(Error::DimensionMismatch(format!(
            "density matrix of dimension {} cannot split as {da} x {db}",
            rho.dim()
        )));
    }
    let e = &rho.entries;
    let entries = match keep {
        Side::A => DMatrix::from_fn(da, da, |i, k| {
            (0..db).map(|j| e[(i * db + j, k * db + j)]).sum()
        }),
        Side::B => DMatrix::from_fn(db, db, |j, l| {
            (0..da).map(|i| e[(i * db + j, i * db + l)]).sum()
        }),
    };
    Ok(DensityMatrix { entries })
}

/// Entanglement entropy of a pure state across the split, from the smaller side.
pub fn entanglement_entropy(
    state: &PureStateVector,
    dims: (usize, usize),
    base: LogBase,
) -> Result<f64> {
    let keep = if dims.0 <= dims.1 { Side::A } else { Side::B };
    let rho = partial_trace_pure(state, dims, keep)?;
    Ok(entropy_of_spectrum(&rho.spectrum(), base))
}

/// Spectrum of one side of `sum_i w_i |psi_i><psi_i|`, padded with zeros to
/// that side's dimension.
///
/// When the kept side is larger than the stacked ensemble, the nonzero
/// eigenvalues are taken from the Gram matrix `X^dag X` instead of `X X^dag`.
pub fn reduced_mixture_spectrum(
    ensemble: &[(f64, &PureStateVector)],
    dims: (usize, usize),
    keep: Side,
) -> Result<Vec<f64>> {
    let (kept, traced) = match keep {
        Side::A => dims,
        Side::B => (dims.1, dims.0),
    };
    let mut blocks = Vec::with_capacity(ensemble.len());
    for (w, s) in ensemble {
        let psi = s.as_matrix(dims)?;
        let psi = match keep {
            Side::A => psi,
            Side::B => psi.transpose(),
        };
        blocks.push(psi * Complex64::from(w.sqrt()));
    }
    let stacked_cols = traced * ensemble.len();
    let x = DMatrix::from_fn(kept, stacked_cols, |r, c| {
        blocks[c / traced][(r, c % traced)]
    });
    let mut spectrum = if kept <= stacked_cols {
        hermitian_spectrum(&(&x * x.adjoint()))
    } else {
        hermitian_spectrum(&(x.adjoint() * &x))
    };
    spectrum.resize(kept.max(spectrum.len()), 0.0);
    spectrum.sort_by(|a, b| a.total_cmp(b));
    spectrum.truncate(kept);
    Ok(spectrum)
}
