//! Index bookkeeping for operators on a tensor product of subsystems.

/// Flattened-index offsets of every configuration of the factors in `which`.
///
/// `dims` lists all factor dimensions in order; the returned vector is
/// indexed by the mixed-radix number formed by the selected factors (first
/// selected factor most significant).
pub fn offsets(dims: &[usize], which: &[usize]) -> Vec<usize> {
    let strides = strides(dims);
    let mut out = vec![0usize];
    for &f in which {
        let mut next = Vec::with_capacity(out.len() * dims[f]);
        for &base in &out {
            for digit in 0..dims[f] {
                next.push(base + digit * strides[f]);
            }
        }
        out = next;
    }
    out
}

pub fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Factors of `0..dims.len()` not listed in `which`, in order.
pub fn complement(n: usize, which: &[usize]) -> Vec<usize> {
    (0..n).filter(|k| !which.contains(k)).collect()
}

/// For a reordering `perm` (new factor k is old factor `perm[k]`), maps each
/// new flattened index to the old one.
pub fn permutation_map(dims: &[usize], perm: &[usize]) -> Vec<usize> {
    offsets(dims, perm)
}
