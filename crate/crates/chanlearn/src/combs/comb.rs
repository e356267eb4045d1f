use super::legs::{LabeledOperator, Leg};
use crate::channels::ChannelRep;
use crate::error::{Error, Result};
use crate::linalg::HermitianOperator;
use crate::scalar::{tol, Real};

/// Violation of one rung `Tr_{B_k} N_k = N_{k−1} ⊗ I_{A_k}` of the ladder.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelViolation {
    pub level: usize,
    pub frobenius: f64,
    pub trace_norm: f64,
}

#[derive(Clone, Debug)]
pub struct CombReport {
    pub min_eigenvalue: f64,
    /// Level 1 first.
    pub levels: Vec<LevelViolation>,
}

impl CombReport {
    pub fn max_violation(&self) -> f64 {
        self.levels.iter().fold(0.0, |m, l| m.max(l.frobenius))
    }

    pub fn is_valid(&self, tolerance: f64) -> bool {
        self.min_eigenvalue >= -tolerance && self.max_violation() <= tolerance
    }
}

/// Choi operator of an r-step process on legs `A_1 B_1 … A_r B_r`.
#[derive(Clone, Debug)]
pub struct CombOperator<T: Real = f64> {
    in_dims: Vec<usize>,
    out_dims: Vec<usize>,
    op: HermitianOperator<T>,
    /// `N_1, …, N_{r−1}`.
    marginals: Vec<HermitianOperator<T>>,
}

fn leg_dims(in_dims: &[usize], out_dims: &[usize]) -> Vec<usize> {
    in_dims.iter().zip(out_dims).flat_map(|(&a, &b)| [a, b]).collect()
}

/// Marginal ladder `N_r, N_{r−1}, …, N_0` together with the per-level report.
fn ladder<T: Real>(
    op: &HermitianOperator<T>,
    in_dims: &[usize],
    out_dims: &[usize],
) -> Result<(Vec<HermitianOperator<T>>, CombReport)> {
    let r = in_dims.len();
    if r == 0 || out_dims.len() != r {
        return Err(Error::Dimension("comb needs matching nonempty input and output dimension lists".into()));
    }
    let dims = leg_dims(in_dims, out_dims);
    if op.dim() != dims.iter().product::<usize>() {
        return Err(Error::Dimension(format!("operator of size {} for legs {dims:?}", op.dim())));
    }
    let mut current = op.clone();
    let mut chain = vec![op.clone()];
    let mut levels = Vec::with_capacity(r);
    for k in (1..=r).rev() {
        let a = in_dims[k - 1];
        let d = &dims[..2 * k];
        let m = current.trace_out(d, &[2 * k - 1])?;
        let below = if k == 1 {
            HermitianOperator::identity(1)
        } else {
            m.trace_out(&d[..2 * k - 1], &[2 * k - 2])?.scale(T::one() / T::lit(a as f64))
        };
        let gap = m.sub(&below.kron(&HermitianOperator::identity(a)));
        levels.push(LevelViolation { level: k, frobenius: gap.frobenius_norm().as_f64(), trace_norm: gap.trace_norm().as_f64() });
        chain.push(below.clone());
        current = below;
    }
    levels.reverse();
    Ok((chain, CombReport { min_eigenvalue: op.min_eigenvalue().as_f64(), levels }))
}

/// Positivity and ladder report for an operator on `A_1 B_1 … A_r B_r`.
pub fn check_comb<T: Real>(op: &HermitianOperator<T>, in_dims: &[usize], out_dims: &[usize]) -> Result<CombReport> {
    Ok(ladder(op, in_dims, out_dims)?.1)
}

impl<T: Real> CombOperator<T> {
    /// Validates positivity and the full ladder within 1e-9.
    pub fn new(op: HermitianOperator<T>, in_dims: Vec<usize>, out_dims: Vec<usize>) -> Result<Self> {
        let (chain, report) = ladder(&op, &in_dims, &out_dims)?;
        let t = tol::<T>(1e-9).as_f64();
        if report.min_eigenvalue < -t {
            return Err(Error::InvalidChannel(format!("comb operator has eigenvalue {}", report.min_eigenvalue)));
        }
        if let Some(bad) = report.levels.iter().find(|l| l.frobenius > t) {
            return Err(Error::InvalidChannel(format!("ladder level {} violated by {:e}", bad.level, bad.frobenius)));
        }
        let r = in_dims.len();
        // chain = [N_r, N_{r−1}, …, N_0]
        let marginals = (1..r).map(|k| chain[r - k].clone()).collect();
        Ok(Self { in_dims, out_dims, op, marginals })
    }

    pub fn from_channel(ch: &ChannelRep<T>) -> Self {
        Self { in_dims: vec![ch.d_in()], out_dims: vec![ch.d_out()], op: ch.choi().clone(), marginals: Vec::new() }
    }

    pub fn r(&self) -> usize {
        self.in_dims.len()
    }

    pub fn in_dims(&self) -> &[usize] {
        &self.in_dims
    }

    pub fn out_dims(&self) -> &[usize] {
        &self.out_dims
    }

    pub fn leg_dims(&self) -> Vec<usize> {
        leg_dims(&self.in_dims, &self.out_dims)
    }

    pub fn op(&self) -> &HermitianOperator<T> {
        &self.op
    }

    /// `N_k` for `1 ≤ k ≤ r`.
    pub fn marginal(&self, k: usize) -> &HermitianOperator<T> {
        assert!(k >= 1 && k <= self.r(), "marginal index out of range");
        if k == self.r() {
            &self.op
        } else {
            &self.marginals[k - 1]
        }
    }

    pub fn report(&self) -> CombReport {
        check_comb(&self.op, &self.in_dims, &self.out_dims).expect("dimensions fixed at construction")
    }

    /// `n` when every leg is an n-qubit register.
    pub fn uniform_qubits(&self) -> Option<usize> {
        let d = self.in_dims[0];
        if d.is_power_of_two() && self.in_dims.iter().chain(&self.out_dims).all(|&x| x == d) {
            Some(d.trailing_zeros() as usize)
        } else {
            None
        }
    }

    /// Product comb `C(N_1) ⊗ … ⊗ C(N_r)` of memoryless steps.
    pub fn product(channels: &[ChannelRep<T>]) -> Result<Self> {
        let steps: Vec<CombStep<T>> = channels.iter().map(|c| CombStep::memoryless(c.clone())).collect();
        comb_from_channels(&steps)
    }

    fn labeled(&self, prefix: &str) -> LabeledOperator<T> {
        let legs = self
            .in_dims
            .iter()
            .zip(&self.out_dims)
            .enumerate()
            .flat_map(|(k, (&a, &b))| [Leg::new(format!("{prefix}A{}", k + 1), a), Leg::new(format!("{prefix}B{}", k + 1), b)])
            .collect();
        LabeledOperator::new(legs, self.op.matrix().clone()).expect("leg dimensions match")
    }

    pub fn cast<U: Real>(&self) -> CombOperator<U> {
        CombOperator {
            in_dims: self.in_dims.clone(),
            out_dims: self.out_dims.clone(),
            op: self.op.cast(),
            marginals: self.marginals.iter().map(|m| m.cast()).collect(),
        }
    }
}

/// One step `M_{k−1} ⊗ A_k → B_k ⊗ M_k` of a process with quantum memory.
#[derive(Clone, Debug)]
pub struct CombStep<T: Real = f64> {
    pub channel: ChannelRep<T>,
    pub mem_in: usize,
    pub input: usize,
    pub output: usize,
    pub mem_out: usize,
}

impl<T: Real> CombStep<T> {
    pub fn new(channel: ChannelRep<T>, mem_in: usize, input: usize, output: usize, mem_out: usize) -> Result<Self> {
        if channel.d_in() != mem_in * input || channel.d_out() != output * mem_out {
            return Err(Error::Dimension(format!(
                "channel {}->{} does not match memory wiring {mem_in}x{input} -> {output}x{mem_out}",
                channel.d_in(),
                channel.d_out()
            )));
        }
        Ok(Self { channel, mem_in, input, output, mem_out })
    }

    pub fn memoryless(channel: ChannelRep<T>) -> Self {
        let (input, output) = (channel.d_in(), channel.d_out());
        Self { channel, mem_in: 1, input, output, mem_out: 1 }
    }
}

/// Links the steps along their memory wires and discards the final memory.
pub fn comb_from_channels<T: Real>(steps: &[CombStep<T>]) -> Result<CombOperator<T>> {
    if steps.is_empty() {
        return Err(Error::Dimension("a comb needs at least one step".into()));
    }
    if steps[0].mem_in != 1 {
        return Err(Error::Dimension("the first step cannot receive memory".into()));
    }
    for (k, w) in steps.windows(2).enumerate() {
        if w[0].mem_out != w[1].mem_in {
            return Err(Error::Dimension(format!("memory after step {} has dimension {} but step {} expects {}", k + 1, w[0].mem_out, k + 2, w[1].mem_in)));
        }
    }
    let mut acc: Option<LabeledOperator<T>> = None;
    for (k, s) in steps.iter().enumerate() {
        let legs = vec![
            Leg::new(format!("M{k}"), s.mem_in),
            Leg::new(format!("A{}", k + 1), s.input),
            Leg::new(format!("B{}", k + 1), s.output),
            Leg::new(format!("M{}", k + 1), s.mem_out),
        ];
        let piece = LabeledOperator::new(legs, s.channel.choi().matrix().clone())?;
        acc = Some(match acc {
            None => piece.trace_legs(&["M0"])?,
            Some(prev) => prev.link(&piece)?,
        });
    }
    let r = steps.len();
    let linked = acc.expect("nonempty").trace_legs(&[format!("M{r}").as_str()])?;
    let order: Vec<String> = (1..=r).flat_map(|k| [format!("A{k}"), format!("B{k}")]).collect();
    let order: Vec<&str> = order.iter().map(|s| s.as_str()).collect();
    let op = HermitianOperator::hermitize(linked.permute_to(&order)?.into_op());
    CombOperator::new(op, steps.iter().map(|s| s.input).collect(), steps.iter().map(|s| s.output).collect())
}

/// Wires output `B_k` of `first` into input `A_j` of `second` for each pair
/// `(k, j)` (1-based) and links. The free legs, `first`'s then `second`'s,
/// must alternate input/output so that the result is again a comb.
pub fn link_product<T: Real>(first: &CombOperator<T>, second: &CombOperator<T>, wiring: &[(usize, usize)]) -> Result<CombOperator<T>> {
    let mut b = second.labeled("y.");
    for &(k, j) in wiring {
        if k == 0 || k > first.r() || j == 0 || j > second.r() {
            return Err(Error::Dimension(format!("wire ({k}, {j}) refers to a missing step")));
        }
        b = b.rename(&format!("y.A{j}"), &format!("x.B{k}"))?;
    }
    let linked = first.labeled("x.").link(&b)?;
    let (mut ins, mut outs) = (Vec::new(), Vec::new());
    for (i, leg) in linked.legs().iter().enumerate() {
        let is_input = leg.label.as_bytes()[2] == b'A';
        if is_input != (i % 2 == 0) {
            return Err(Error::Dimension(format!("free legs do not alternate input and output at {}", leg.label)));
        }
        if is_input {
            ins.push(leg.dim);
        } else {
            outs.push(leg.dim);
        }
    }
    if ins.len() != outs.len() {
        return Err(Error::Dimension("wiring leaves an unmatched input".into()));
    }
    CombOperator::new(HermitianOperator::hermitize(linked.into_op()), ins, outs)
}

/// Scales a comb operator without checks, for validity tests.
pub fn scaled_operator<T: Real>(comb: &CombOperator<T>, s: T) -> HermitianOperator<T> {
    comb.op.scale(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_channel, random_density};
    use crate::rng::stream;

    #[test]
    fn single_step_is_choi() {
        let mut rng = stream(1, "comb", 0);
        let ch = random_channel::<f64, _>(2, 2, 2, &mut rng);
        let c = comb_from_channels(&[CombStep::memoryless(ch.clone())]).unwrap();
        assert!(c.op().sub(ch.choi()).frobenius_norm() < 1e-12);
        assert!(c.report().is_valid(1e-9));
    }

    #[test]
    fn memoryless_pair_is_tensor_product() {
        let mut rng = stream(2, "comb", 0);
        let a = random_channel::<f64, _>(2, 2, 2, &mut rng);
        let b = random_channel::<f64, _>(2, 2, 3, &mut rng);
        let c = CombOperator::product(&[a.clone(), b.clone()]).unwrap();
        assert!(c.op().sub(&a.choi().kron(b.choi())).frobenius_norm() < 1e-12);
        assert!(c.marginal(1).sub(a.choi()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn memory_combs_satisfy_ladder() {
        let mut rng = stream(3, "comb", 0);
        for r in 1..=3 {
            let steps: Vec<CombStep<f64>> = (0..r)
                .map(|k| {
                    let mi = if k == 0 { 1 } else { 2 };
                    CombStep::new(random_channel(mi * 2, 2 * 2, 2, &mut rng), mi, 2, 2, 2).unwrap()
                })
                .collect();
            let c = comb_from_channels(&steps).unwrap();
            let rep = c.report();
            assert!(rep.is_valid(1e-9), "{rep:?}");
            assert!((c.op().trace() - 2f64.powi(r)).abs() < 1e-9);
        }
    }

    #[test]
    fn scaled_comb_fails_first_level() {
        let mut rng = stream(4, "comb", 0);
        let c = CombOperator::product(&[random_channel::<f64, _>(2, 2, 2, &mut rng), random_channel(2, 2, 2, &mut rng)]).unwrap();
        let rep = check_comb(&scaled_operator(&c, 1.1), c.in_dims(), c.out_dims()).unwrap();
        assert!((rep.levels[0].frobenius - 0.1 * 2f64.sqrt()).abs() < 1e-9);
        assert!((rep.levels[0].trace_norm - 0.2).abs() < 1e-9);
        assert!(rep.levels[1].frobenius < 1e-9);
    }

    #[test]
    fn random_state_is_not_a_comb() {
        let mut rng = stream(5, "comb", 0);
        let rho = random_density::<f64, _>(4, &mut rng).into_op().scale(2.0);
        let rep = check_comb(&rho, &[2], &[2]).unwrap();
        assert!(rep.levels[0].frobenius > 1e-3);
    }

    #[test]
    fn sequential_link_composes() {
        let mut rng = stream(6, "comb", 0);
        let m = random_channel::<f64, _>(2, 2, 2, &mut rng);
        let n = random_channel::<f64, _>(2, 2, 2, &mut rng);
        let l = link_product(&CombOperator::from_channel(&m), &CombOperator::from_channel(&n), &[(1, 1)]).unwrap();
        assert!(l.op().sub(m.then(&n).unwrap().choi()).frobenius_norm() < 1e-10);
        let id = CombOperator::from_channel(&ChannelRep::identity(2));
        let same = link_product(&CombOperator::from_channel(&m), &id, &[(1, 1)]).unwrap();
        assert!(same.op().sub(m.choi()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn bad_wiring_is_rejected() {
        let id = CombOperator::<f64>::from_channel(&ChannelRep::identity(2));
        assert!(link_product(&id, &id, &[(2, 1)]).is_err());
        // no wires: legs x.A1 x.B1 y.A1 y.B1 alternate, giving a two-step product comb
        assert_eq!(link_product(&id, &id, &[]).unwrap().r(), 2);
        assert!(comb_from_channels::<f64>(&[]).is_err());
    }
}
