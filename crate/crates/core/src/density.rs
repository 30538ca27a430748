//! Mixed states of one or two modes.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{increment, FockKet, Ket, MultiModeKet};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Hermitian, positive semidefinite operator over the joint number basis of
/// one or two modes. The trace is the state's weight and may be below one
/// for heralded branches.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    dims: Vec<usize>,
    /// Row-major `dim × dim`.
    matrix: Vec<Complex64>,
}

impl DensityOperator {
    /// Builds an operator from a matrix, checking the Hermitian, positivity
    /// and weight invariants.
    pub fn new(dims: Vec<usize>, matrix: Vec<Complex64>) -> Result<Self> {
        let rho = Self::from_parts(dims, matrix)?;
        rho.validate()?;
        Ok(rho)
    }

    fn from_parts(dims: Vec<usize>, matrix: Vec<Complex64>) -> Result<Self> {
        if dims.is_empty() || dims.len() > 2 || dims.contains(&0) {
            return Err(Error::ShapeMismatch(format!(
                "density operators cover one or two modes, got dims {dims:?}"
            )));
        }
        let d: usize = dims.iter().product();
        if matrix.len() != d * d {
            return Err(Error::ShapeMismatch(format!(
                "dims {dims:?} need a {d}x{d} matrix"
            )));
        }
        Ok(DensityOperator { dims, matrix })
    }

    pub fn zeros(dims: Vec<usize>) -> Result<Self> {
        let d: usize = dims.iter().product();
        Self::from_parts(dims, vec![ZERO; d * d])
    }

    /// |ψ⟩⟨ψ| for a one- or two-mode ket, normalized or not.
    pub fn from_ket<K: Ket + ?Sized>(ket: &K) -> Result<Self> {
        let mut rho = Self::zeros(ket.shape())?;
        rho.add_projector(1.0, ket.amplitudes());
        Ok(rho)
    }

    /// Σ w_k |ψ_k⟩⟨ψ_k| over kets sharing one shape.
    pub fn mixture<'a, K, I>(terms: I) -> Result<Self>
    where
        K: Ket + 'a,
        I: IntoIterator<Item = (f64, &'a K)>,
    {
        let mut rho: Option<DensityOperator> = None;
        for (w, ket) in terms {
            if w < 0.0 {
                return Err(Error::InvalidState("negative mixture weight".into()));
            }
            let acc = match rho.as_mut() {
                Some(acc) => acc,
                None => rho.insert(Self::zeros(ket.shape())?),
            };
            if acc.dims != ket.shape() {
                return Err(Error::ShapeMismatch("mixture of differently shaped kets".into()));
            }
            acc.add_projector(w, ket.amplitudes());
        }
        rho.ok_or(Error::Empty("mixture"))
    }

    pub(crate) fn add_projector(&mut self, w: f64, v: &[Complex64]) {
        if w == 0.0 {
            return;
        }
        let d = v.len();
        for (i, vi) in v.iter().enumerate() {
            if *vi == ZERO {
                continue;
            }
            let row = &mut self.matrix[i * d..(i + 1) * d];
            let wi = vi * w;
            for (slot, vj) in row.iter_mut().zip(v) {
                *slot += wi * vj.conj();
            }
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn modes(&self) -> usize {
        self.dims.len()
    }

    /// Dimension of the joint basis.
    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    /// ⟨row|ρ|col⟩ by flat joint index.
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[row * self.dim() + col]
    }

    fn flat(&self, occupation: &[usize]) -> Option<usize> {
        if occupation.len() != self.dims.len() {
            return None;
        }
        let mut idx = 0;
        for (&n, &c) in occupation.iter().zip(&self.dims) {
            if n >= c {
                return None;
            }
            idx = idx * c + n;
        }
        Some(idx)
    }

    /// ⟨bra|ρ|ket⟩ by occupation pattern; zero outside the truncation.
    pub fn element(&self, bra: &[usize], ket: &[usize]) -> Complex64 {
        match (self.flat(bra), self.flat(ket)) {
            (Some(r), Some(c)) => self.get(r, c),
            _ => ZERO,
        }
    }

    /// Probability of an occupation pattern, relative to the weight.
    pub fn population(&self, occupation: &[usize]) -> f64 {
        self.element(occupation, occupation).re / self.weight()
    }

    /// Trace.
    pub fn weight(&self) -> f64 {
        let d = self.dim();
        (0..d).map(|i| self.matrix[i * d + i].re).sum()
    }

    /// Copy scaled to unit trace.
    pub fn normalized(&self) -> Result<Self> {
        let w = self.weight();
        if w <= 0.0 {
            return Err(Error::InvalidState("zero-weight density operator".into()));
        }
        Ok(self.scaled(1.0 / w))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        DensityOperator {
            dims: self.dims.clone(),
            matrix: self.matrix.iter().map(|c| c * factor).collect(),
        }
    }

    /// Tr ρ² / (Tr ρ)²; equal to one exactly for rank-one operators.
    pub fn purity(&self) -> f64 {
        let d = self.dim();
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                acc += (self.matrix[i * d + j] * self.matrix[j * d + i]).re;
            }
        }
        acc / self.weight().powi(2)
    }

    pub fn max_hermitian_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.matrix[i * d + j] - self.matrix[j * d + i].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues in ascending order.
    ///
    /// With c a Gershgorin bound, H + c·I is positive semidefinite, so its
    /// singular values are exactly λ + c. nalgebra's symmetric eigensolver
    /// returns NaN on sparse operators with zero Householder columns; the SVD
    /// does not.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let d = self.dim();
        let scale = self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return vec![0.0; d];
        }
        let h = DMatrix::from_fn(d, d, |i, j| {
            0.5 * (self.matrix[i * d + j] + self.matrix[j * d + i].conj()) / scale
        });
        let shift = (0..d)
            .map(|i| h.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max);
        let shifted = h + DMatrix::<Complex64>::identity(d, d) * Complex64::new(shift, 0.0);
        let mut ev: Vec<f64> = shifted
            .svd(false, false)
            .singular_values
            .iter()
            .map(|s| (s - shift) * scale)
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Checks Hermiticity (1e-12), positivity (eigenvalues ≥ −1e-10) and
    /// 0 < weight ≤ 1 + 1e-12.
    pub fn validate(&self) -> Result<()> {
        let defect = self.max_hermitian_defect();
        if defect > 1e-12 {
            return Err(Error::InvalidState(format!("not Hermitian (defect {defect:.2e})")));
        }
        let w = self.weight();
        if !(w > 0.0 && w <= 1.0 + 1e-12) {
            return Err(Error::InvalidState(format!("weight {w} outside (0, 1]")));
        }
        if let Some(&min) = self.eigenvalues().first() {
            if min < -1e-10 {
                return Err(Error::InvalidState(format!("negative eigenvalue {min:.2e}")));
            }
        }
        Ok(())
    }

    /// ½ Tr|ρ − σ| for operators of equal shape.
    pub fn trace_distance(&self, other: &DensityOperator) -> Result<f64> {
        if self.dims != other.dims {
            return Err(Error::ShapeMismatch(format!(
                "trace distance between dims {:?} and {:?}",
                self.dims, other.dims
            )));
        }
        let diff = DensityOperator {
            dims: self.dims.clone(),
            matrix: self
                .matrix
                .iter()
                .zip(&other.matrix)
                .map(|(a, b)| a - b)
                .collect(),
        };
        Ok(0.5 * diff.eigenvalues().iter().map(|e| e.abs()).sum::<f64>())
    }

    /// Photon-number distribution of a single-mode operator (relative to its
    /// weight); for two modes, the distribution of the total photon number.
    pub fn photon_number_distribution(&self) -> Vec<f64> {
        let d = self.dim();
        let max_total: usize = self.dims.iter().map(|c| c - 1).sum();
        let mut dist = vec![0.0; max_total + 1];
        let mut occ = vec![0usize; self.modes()];
        let w = self.weight();
        for i in 0..d {
            dist[occ.iter().sum::<usize>()] += self.matrix[i * d + i].re / w;
            increment(&mut occ, &self.dims);
        }
        dist
    }

    /// Mean (total) photon number of the normalized state.
    pub fn mean_photon_number(&self) -> f64 {
        self.photon_number_distribution()
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum()
    }

    /// Pads with zeros or truncates to new per-mode cutoffs.
    pub fn with_dims(&self, dims: &[usize]) -> Result<Self> {
        if dims.len() != self.modes() {
            return Err(Error::ShapeMismatch("mode count changes".into()));
        }
        let mut out = Self::zeros(dims.to_vec())?;
        let d_in = self.dim();
        let d_out = out.dim();
        let mut map = Vec::with_capacity(d_in);
        let mut occ = vec![0usize; self.modes()];
        for _ in 0..d_in {
            map.push(out.flat(&occ));
            increment(&mut occ, &self.dims);
        }
        for (i, oi) in map.iter().enumerate() {
            let Some(oi) = oi else { continue };
            for (j, oj) in map.iter().enumerate() {
                if let Some(oj) = oj {
                    out.matrix[oi * d_out + oj] = self.matrix[i * d_in + j];
                }
            }
        }
        Ok(out)
    }

    /// Largest total photon number of a basis state with a nonzero row.
    pub fn max_total_photons(&self) -> usize {
        let d = self.dim();
        let mut occ = vec![0usize; self.modes()];
        let mut best = 0;
        for i in 0..d {
            if self.matrix[i * d..(i + 1) * d].iter().any(|z| *z != ZERO) {
                best = best.max(occ.iter().sum());
            }
            increment(&mut occ, &self.dims);
        }
        best
    }

    /// Single-mode operator as its matrix elements ⟨m|ρ|n⟩.
    pub(crate) fn single_mode_element(&self, m: usize, n: usize) -> Complex64 {
        debug_assert_eq!(self.modes(), 1);
        self.matrix[m * self.dims[0] + n]
    }

    /// Applies a linear map to every column and then every row:
    /// ρ → U ρ U†, where `apply` realizes U on a vector over `dims` and
    /// returns an image over `out_dims`.
    pub(crate) fn conjugate_by<F>(&self, out_dims: Vec<usize>, apply: F) -> Result<Self>
    where
        F: Fn(&MultiModeKet) -> Result<MultiModeKet>,
    {
        if self.modes() != 2 {
            return Err(Error::ShapeMismatch("two-mode operator required".into()));
        }
        let d = self.dim();
        let d_out: usize = out_dims.iter().product();
        let check = |image: &MultiModeKet| -> Result<()> {
            if image.cutoffs() != out_dims.as_slice() {
                return Err(Error::ShapeMismatch("map changed the output shape".into()));
            }
            Ok(())
        };

        // U ρ, column by column: stored transposed (row c holds column c).
        let mut left = vec![ZERO; d * d_out];
        for c in 0..d {
            let col: Vec<Complex64> = (0..d).map(|r| self.matrix[r * d + c]).collect();
            if col.iter().all(|z| *z == ZERO) {
                continue;
            }
            let image = apply(&MultiModeKet::from_parts(self.dims.clone(), col, false))?;
            check(&image)?;
            left[c * d_out..(c + 1) * d_out].copy_from_slice(image.coeffs());
        }
        // (U ρ) U† = (U (U ρ)†)†; row r of U ρ is column r of (U ρ)†.
        let mut out = vec![ZERO; d_out * d_out];
        for r in 0..d_out {
            let col: Vec<Complex64> = (0..d).map(|c| left[c * d_out + r].conj()).collect();
            if col.iter().all(|z| *z == ZERO) {
                continue;
            }
            let image = apply(&MultiModeKet::from_parts(self.dims.clone(), col, false))?;
            check(&image)?;
            for (c, v) in image.coeffs().iter().enumerate() {
                out[r * d_out + c] = v.conj();
            }
        }
        Self::from_parts(out_dims, out)
    }
}

impl From<&FockKet> for DensityOperator {
    fn from(ket: &FockKet) -> Self {
        DensityOperator::from_ket(ket).expect("single-mode ket has a valid shape")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn pure_state_invariants() {
        let k = FockKet::coherent(1.0, 12).unwrap();
        let rho = DensityOperator::from(&k);
        rho.validate().unwrap();
        assert_abs_diff_eq!(rho.weight(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.mean_photon_number(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn mixture_and_trace_distance() {
        let zero = FockKet::number(0, 2).unwrap();
        let one = FockKet::number(1, 2).unwrap();
        let mixed = DensityOperator::mixture([(0.5, &zero), (0.5, &one)]).unwrap();
        assert_abs_diff_eq!(mixed.purity(), 0.5, epsilon = 1e-15);
        let pure = DensityOperator::from(&zero);
        assert_abs_diff_eq!(mixed.trace_distance(&pure).unwrap(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(pure.trace_distance(&pure).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn rejects_invalid_operators() {
        let bad = DensityOperator::new(
            vec![2],
            vec![
                Complex64::new(0.5, 0.0),
                Complex64::new(0.0, 0.1),
                Complex64::new(0.0, 0.1),
                Complex64::new(0.5, 0.0),
            ],
        );
        assert!(bad.is_err());
        let negative = DensityOperator::new(
            vec![2],
            vec![
                Complex64::new(1.5, 0.0),
                ZERO,
                ZERO,
                Complex64::new(-0.5, 0.0),
            ],
        );
        assert!(negative.is_err());
        assert!(DensityOperator::zeros(vec![2, 2, 2]).is_err());
    }

    #[test]
    fn resize_keeps_elements() {
        let k = MultiModeKet::tmsv(0.2, 6).unwrap();
        let rho = DensityOperator::from_ket(&k).unwrap();
        let big = rho.with_dims(&[8, 7]).unwrap();
        assert_eq!(big.element(&[1, 1], &[2, 2]), rho.element(&[1, 1], &[2, 2]));
        assert_abs_diff_eq!(big.weight(), rho.weight(), epsilon = 1e-15);
    }
}
