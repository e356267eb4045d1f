use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Cx, DensityOperator, HermitianOperator, Subsystem};
use crate::scalar::{tol, Real};

/// A channel `L(C^{d_in}) → L(C^{d_out})` held as Kraus operators and/or a Choi matrix.
///
/// The Choi matrix is `C = Σ_{ij} |i⟩⟨j| ⊗ N(|i⟩⟨j|)` (input factor first) and
/// is computed eagerly when only Kraus operators are supplied.
#[derive(Clone, Debug)]
pub struct ChannelRep<T: Real = f64> {
    d_in: usize,
    d_out: usize,
    kraus: Option<Vec<ComplexMatrix<T>>>,
    choi: HermitianOperator<T>,
}

/// Frobenius size of `Σ K†K − I`.
fn tp_defect<T: Real>(d_in: usize, kraus: &[ComplexMatrix<T>]) -> T {
    let mut acc = ComplexMatrix::zeros(d_in, d_in);
    for k in kraus {
        acc = &acc + &(&k.adjoint() * k);
    }
    (acc - ComplexMatrix::identity(d_in)).frobenius_norm()
}

/// `Σ_k |K_k⟩⟩⟨⟨K_k|` with `|K⟩⟩ = Σ_i |i⟩ ⊗ K|i⟩`.
fn choi_from_kraus<T: Real>(d_in: usize, d_out: usize, kraus: &[ComplexMatrix<T>]) -> HermitianOperator<T> {
    let dim = d_in * d_out;
    let mut c = ComplexMatrix::zeros(dim, dim);
    for k in kraus {
        let v: Vec<Cx<T>> = (0..dim).map(|p| k.get(p % d_out, p / d_out)).collect();
        for a in 0..dim {
            if v[a] == Cx::new(T::zero(), T::zero()) {
                continue;
            }
            for b in 0..dim {
                let z = c.get(a, b) + v[a] * v[b].conj();
                c.set(a, b, z);
            }
        }
    }
    HermitianOperator::hermitize(c)
}

impl<T: Real> ChannelRep<T> {
    /// Requires `‖Σ K†K − I‖_F ≤ 1e-9`.
    pub fn from_kraus(d_in: usize, d_out: usize, kraus: Vec<ComplexMatrix<T>>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::InvalidChannel("empty Kraus list".into()));
        }
        if let Some(k) = kraus.iter().find(|k| k.rows() != d_out || k.cols() != d_in) {
            return Err(Error::Dimension(format!("Kraus operator {}x{} for a {d_in}->{d_out} channel", k.rows(), k.cols())));
        }
        let defect = tp_defect(d_in, &kraus);
        if defect > tol::<T>(1e-9) {
            return Err(Error::InvalidChannel(format!("Kraus operators not trace preserving (defect {defect:e})")));
        }
        let choi = choi_from_kraus(d_in, d_out, &kraus);
        Ok(Self { d_in, d_out, kraus: Some(kraus), choi })
    }

    /// Requires `C ⪰ 0` and `Tr_B C = I_A`, both within 1e-9.
    pub fn from_choi(d_in: usize, d_out: usize, choi: HermitianOperator<T>) -> Result<Self> {
        if choi.dim() != d_in * d_out {
            return Err(Error::Dimension(format!("Choi matrix of size {} for a {d_in}->{d_out} channel", choi.dim())));
        }
        let min = choi.min_eigenvalue();
        if min < -tol::<T>(1e-9) {
            return Err(Error::InvalidChannel(format!("Choi matrix has eigenvalue {min}")));
        }
        let marginal = choi.partial_trace((d_in, d_out), Subsystem::A)?;
        let defect = marginal.sub(&HermitianOperator::identity(d_in)).frobenius_norm();
        if defect > tol::<T>(1e-9) {
            return Err(Error::InvalidChannel(format!("Tr_B C deviates from identity by {defect:e}")));
        }
        Ok(Self { d_in, d_out, kraus: None, choi })
    }

    /// Both representations; they must agree within 1e-9.
    pub fn from_parts(d_in: usize, d_out: usize, kraus: Vec<ComplexMatrix<T>>, choi: HermitianOperator<T>) -> Result<Self> {
        let ch = Self::from_kraus(d_in, d_out, kraus)?;
        let gap = ch.choi.sub(&choi).frobenius_norm();
        if gap > tol::<T>(1e-9) {
            return Err(Error::InvalidChannel(format!("Kraus and Choi forms disagree by {gap:e}")));
        }
        Ok(ch)
    }

    pub fn from_unitary(u: ComplexMatrix<T>) -> Result<Self> {
        let d = u.rows();
        if !u.is_unitary(tol(1e-9)) {
            return Err(Error::InvalidChannel("matrix is not unitary".into()));
        }
        Self::from_kraus(d, d, vec![u])
    }

    pub fn identity(d: usize) -> Self {
        Self::from_kraus(d, d, vec![ComplexMatrix::identity(d)]).expect("identity channel")
    }

    /// `ρ ↦ Tr[ρ] I/d`.
    pub fn completely_depolarizing(d: usize) -> Self {
        let choi = HermitianOperator::identity(d * d).scale(T::one() / T::lit(d as f64));
        Self { d_in: d, d_out: d, kraus: None, choi }
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn n_in(&self) -> usize {
        self.d_in.trailing_zeros() as usize
    }

    pub fn n_out(&self) -> usize {
        self.d_out.trailing_zeros() as usize
    }

    pub fn is_square(&self) -> bool {
        self.d_in == self.d_out
    }

    pub fn kraus(&self) -> Option<&[ComplexMatrix<T>]> {
        self.kraus.as_deref()
    }

    pub fn choi(&self) -> &HermitianOperator<T> {
        &self.choi
    }

    /// Kraus operators, rebuilt from the Choi spectrum when none are stored.
    pub fn kraus_or_derived(&self) -> Vec<ComplexMatrix<T>> {
        match &self.kraus {
            Some(k) => k.clone(),
            None => kraus_from_choi(self.d_in, self.d_out, &self.choi),
        }
    }

    /// Output through whichever stored form needs fewer multiplications.
    pub fn apply(&self, rho: &DensityOperator<T>) -> Result<DensityOperator<T>> {
        let (da, db) = (self.d_in, self.d_out);
        let out = match &self.kraus {
            Some(ks) if ks.len() * da * db * (da + db) < da * da * db * db => self.apply_kraus(rho.op())?,
            _ => self.apply_choi(rho.op())?,
        };
        Ok(DensityOperator::normalized(out))
    }

    pub fn apply_kraus(&self, x: &HermitianOperator<T>) -> Result<HermitianOperator<T>> {
        self.check_input(x)?;
        let ks = self.kraus_or_derived();
        let mut acc = ComplexMatrix::zeros(self.d_out, self.d_out);
        for k in &ks {
            acc = &acc + &(&(k * x.matrix()) * &k.adjoint());
        }
        Ok(HermitianOperator::hermitize(acc))
    }

    /// `N(X) = Tr_A[(X^T ⊗ 1) C]`.
    pub fn apply_choi(&self, x: &HermitianOperator<T>) -> Result<HermitianOperator<T>> {
        self.check_input(x)?;
        let (da, db) = (self.d_in, self.d_out);
        let c = self.choi.matrix();
        let xm = x.matrix();
        Ok(HermitianOperator::hermitize(ComplexMatrix::from_fn(db, db, |o, p| {
            let mut acc = Cx::new(T::zero(), T::zero());
            for i in 0..da {
                for j in 0..da {
                    // (X^T)_{ji} = X_{ij} meets entry ((i,o),(j,p)) of C
                    acc += xm.get(i, j) * c.get(i * db + o, j * db + p);
                }
            }
            acc
        })))
    }

    fn check_input(&self, x: &HermitianOperator<T>) -> Result<()> {
        if x.dim() != self.d_in {
            return Err(Error::Dimension(format!("input of size {} for a channel on {}", x.dim(), self.d_in)));
        }
        Ok(())
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Self) -> Result<Self> {
        if self.d_out != other.d_in {
            return Err(Error::Dimension(format!("cannot feed {} outputs into {} inputs", self.d_out, other.d_in)));
        }
        let mut ks = Vec::new();
        for b in other.kraus_or_derived() {
            for a in self.kraus_or_derived() {
                ks.push(&b * &a);
            }
        }
        Self::from_kraus(self.d_in, other.d_out, ks)
    }

    /// `N ⊗ M`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut ks = Vec::new();
        for a in self.kraus_or_derived() {
            for b in other.kraus_or_derived() {
                ks.push(a.kron(&b));
            }
        }
        Self::from_kraus(self.d_in * other.d_in, self.d_out * other.d_out, ks)
    }

    /// Convex combination through Choi matrices.
    pub fn mixture(parts: &[(T, &Self)]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::Parameter("empty mixture".into()))?.1;
        let mut c = HermitianOperator::zeros(first.choi.dim());
        for (w, ch) in parts {
            if ch.d_in != first.d_in || ch.d_out != first.d_out {
                return Err(Error::Dimension("mixture components differ in shape".into()));
            }
            c = c.add(&ch.choi.scale(*w));
        }
        Self::from_choi(first.d_in, first.d_out, c)
    }

    pub fn cast<U: Real>(&self) -> ChannelRep<U> {
        ChannelRep {
            d_in: self.d_in,
            d_out: self.d_out,
            kraus: self.kraus.as_ref().map(|ks| ks.iter().map(|k| k.cast()).collect()),
            choi: self.choi.cast(),
        }
    }
}

/// Kraus operators from the spectral decomposition of a Choi matrix.
pub fn kraus_from_choi<T: Real>(d_in: usize, d_out: usize, choi: &HermitianOperator<T>) -> Vec<ComplexMatrix<T>> {
    let eig = choi.eigen();
    let cutoff = tol::<T>(1e-13) * T::lit(choi.dim() as f64);
    let mut out = Vec::new();
    for (k, &lam) in eig.values.iter().enumerate() {
        if lam <= cutoff {
            continue;
        }
        let s = lam.sqrt();
        out.push(ComplexMatrix::from_fn(d_out, d_in, |o, i| eig.vectors.get(i * d_out + o, k) * s));
    }
    out
}

/// Choi matrix of a channel given by Kraus operators.
pub fn choi_of<T: Real>(ch: &ChannelRep<T>) -> HermitianOperator<T> {
    ch.choi().clone()
}
