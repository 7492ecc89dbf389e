//! Weight functions on truncated p-ary trees.
//!
//! Vertex `i` on level `l` has the little-endian p-ary digits `d_1 .. d_l`
//! of `i`; its children on level `l + 1` are `i + d * p^l` for `0 <= d < p`.
//! When the tree stands for the residues `m ≡ k (mod p)`, vertex `(l, i)` is
//! the residue `m = k + p * i` modulo `p^{l + 1}`.
//!
//! A weight function on a truncated tree represents its extension by zeros,
//! so the path condition is checked on root-to-leaf paths.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::invariants::guaranteed_valuation;
use crate::padic::{root_valuation_profile, Prime};
use crate::poly::Polynomial;
use crate::resolution::{Kind, Resolution};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncatedTree {
    pub p: Prime,
    /// Index of the deepest level; the root is level 0.
    pub depth: u32,
}

impl TruncatedTree {
    pub fn new(p: Prime, depth: u32) -> Self {
        TruncatedTree { p, depth }
    }

    pub fn level_size(&self, level: u32) -> usize {
        (self.p.get() as usize).pow(level)
    }

    pub fn vertex_count(&self) -> usize {
        (0..=self.depth).map(|l| self.level_size(l)).sum()
    }

    pub fn children(&self, level: u32, index: usize) -> impl Iterator<Item = usize> {
        let stride = self.level_size(level);
        (0..self.p.get() as usize).map(move |d| index + d * stride)
    }

    pub fn parent(&self, level: u32, index: usize) -> Option<usize> {
        (level > 0).then(|| index % self.level_size(level - 1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFunction {
    pub tree: TruncatedTree,
    /// `levels[l][i]` is the value at vertex `i` of level `l`.
    pub levels: Vec<Vec<BigRational>>,
    pub omega: BigRational,
    pub kind: Kind,
}

impl WeightFunction {
    pub fn zero(tree: TruncatedTree, kind: Kind) -> Self {
        let levels = (0..=tree.depth)
            .map(|l| vec![BigRational::zero(); tree.level_size(l)])
            .collect();
        WeightFunction {
            tree,
            levels,
            omega: BigRational::zero(),
            kind,
        }
    }

    pub fn value(&self, level: u32, index: usize) -> &BigRational {
        &self.levels[level as usize][index]
    }

    /// Smallest root-to-leaf path sum.
    pub fn min_path_sum(&self) -> BigRational {
        let mut sums = vec![self.levels[0][0].clone()];
        for l in 1..=self.tree.depth {
            let sums_next = self.levels[l as usize]
                .iter()
                .enumerate()
                .map(|(i, v)| &sums[self.tree.parent(l, i).unwrap()] + v)
                .collect();
            sums = sums_next;
        }
        sums.into_iter().min().unwrap()
    }
}

/// Checks the path condition, parent dominance and the value range of the
/// weight function's kind.
pub fn validate_weight(w: &WeightFunction) -> bool {
    let tree = w.tree;
    let shape_ok = w.levels.len() == tree.depth as usize + 1
        && w.levels
            .iter()
            .enumerate()
            .all(|(l, vals)| vals.len() == tree.level_size(l as u32));
    if !shape_ok {
        return false;
    }
    let range_ok = w.levels.iter().flatten().all(|v| match w.kind {
        Kind::Real => v.is_zero() || *v >= BigRational::one(),
        Kind::Integral => v.is_integer() && *v >= BigRational::zero(),
    });
    let dominance_ok = (0..tree.depth).all(|l| {
        (0..tree.level_size(l)).all(|i| {
            let children: BigRational = tree.children(l, i).map(|c| w.value(l + 1, c)).sum();
            *w.value(l, i) >= children
        })
    });
    range_ok && dominance_ok && w.min_path_sum() >= w.omega
}

pub fn scalar_product(a: &WeightFunction, b: &WeightFunction) -> Result<BigRational> {
    if a.tree != b.tree {
        return Err(Error::ShapeMismatch);
    }
    Ok(a.levels
        .iter()
        .flatten()
        .zip(b.levels.iter().flatten())
        .map(|(x, y)| x * y)
        .sum())
}

/// The weight function `v -> gamma_{depth(v)}`.
pub fn extremal_weight(gamma: &Resolution, tree: TruncatedTree) -> Result<WeightFunction> {
    if gamma.len() > tree.depth as usize + 1 {
        return Err(Error::TreeTooShallow {
            depth: tree.depth,
            terms: gamma.len(),
        });
    }
    let levels = (0..=tree.depth)
        .map(|l| vec![gamma.term(l as usize); tree.level_size(l)])
        .collect();
    Ok(WeightFunction {
        tree,
        levels,
        omega: gamma.omega.clone(),
        kind: gamma.kind,
    })
}

/// Largest instances accepted by [`min_scalar_exhaustive`].
pub const EXHAUSTIVE_MAX_OMEGA: u64 = 4;
pub const EXHAUSTIVE_MAX_VERTICES: usize = 15;

/// Every integral weight function of weight `omega` on `tree` in which each
/// value is at most the weight still missing on its path. Any valid weight
/// function can be lowered to one of these without raising a scalar product
/// with a non-negative function.
fn enumerate_integral(tree: TruncatedTree, omega: u64) -> Vec<Vec<u64>> {
    let offsets: Vec<usize> = (0..=tree.depth)
        .scan(0, |acc, l| {
            let o = *acc;
            *acc += tree.level_size(l);
            Some(o)
        })
        .collect();
    let order: Vec<(u32, usize)> = (0..=tree.depth)
        .flat_map(|l| (0..tree.level_size(l)).map(move |i| (l, i)))
        .collect();

    struct State {
        values: Vec<u64>,
        path: Vec<u64>,
        child_sum: Vec<u64>,
    }

    fn walk(
        pos: usize,
        tree: TruncatedTree,
        omega: u64,
        order: &[(u32, usize)],
        offsets: &[usize],
        st: &mut State,
        out: &mut Vec<Vec<u64>>,
    ) {
        let Some(&(level, index)) = order.get(pos) else {
            out.push(st.values.clone());
            return;
        };
        let v = offsets[level as usize] + index;
        let (above, cap) = match tree.parent(level, index) {
            None => (0, omega),
            Some(pi) => {
                let pv = offsets[level as usize - 1] + pi;
                (st.path[pv], st.values[pv] - st.child_sum[pv])
            }
        };
        let missing = omega.saturating_sub(above);
        let hi = missing.min(cap);
        let lo = if level == tree.depth { missing } else { 0 };
        for x in lo..=hi {
            st.values[v] = x;
            st.path[v] = above + x;
            if let Some(pi) = tree.parent(level, index) {
                st.child_sum[offsets[level as usize - 1] + pi] += x;
            }
            walk(pos + 1, tree, omega, order, offsets, st, out);
            if let Some(pi) = tree.parent(level, index) {
                st.child_sum[offsets[level as usize - 1] + pi] -= x;
            }
        }
        st.values[v] = 0;
    }

    let n = tree.vertex_count();
    let mut st = State {
        values: vec![0; n],
        path: vec![0; n],
        child_sum: vec![0; n],
    };
    let mut out = Vec::new();
    walk(0, tree, omega, &order, &offsets, &mut st, &mut out);
    out
}

/// Exact minimum of `<a, b>` over all integral weight functions `a`, `b` of
/// weights `omega_a`, `omega_b` on the truncated tree.
pub fn min_scalar_exhaustive(
    p: Prime,
    omega_a: u64,
    omega_b: u64,
    depth: u32,
) -> Result<BigRational> {
    let tree = TruncatedTree::new(p, depth);
    if omega_a.max(omega_b) > EXHAUSTIVE_MAX_OMEGA || tree.vertex_count() > EXHAUSTIVE_MAX_VERTICES
    {
        return Err(Error::TooLarge(format!(
            "exhaustive search needs weights <= {EXHAUSTIVE_MAX_OMEGA} and at most \
             {EXHAUSTIVE_MAX_VERTICES} vertices (p = {p}, depth = {depth})"
        )));
    }
    let a_all = enumerate_integral(tree, omega_a);
    let b_all = enumerate_integral(tree, omega_b);
    let best = a_all
        .iter()
        .flat_map(|a| {
            b_all
                .iter()
                .map(move |b| a.iter().zip(b).map(|(x, y)| x * y).sum::<u64>())
        })
        .min()
        .expect("a weight function always exists");
    Ok(BigRational::from_integer(BigInt::from(best)))
}

/// Number of candidate weight functions the exhaustive search visits.
pub fn exhaustive_candidates(p: Prime, omega: u64, depth: u32) -> usize {
    enumerate_integral(TruncatedTree::new(p, depth), omega).len()
}

/// The weight function on the tree of residues `m ≡ residue (mod p)` whose
/// vertex `m mod p^{l+1}` on level `l` carries `chi_hat_{l+1}^f(m)`.
///
/// Its weight is the guaranteed valuation of `f`, capped at `depth + 1`, the
/// most a truncated path can certify.
pub fn chi_weight_from_poly(
    f: &Polynomial,
    p: Prime,
    residue: u64,
    depth: u32,
) -> Result<WeightFunction> {
    if residue >= p.get() {
        return Err(Error::Invalid(format!(
            "residue {residue} is not below p = {p}"
        )));
    }
    let tree = TruncatedTree::new(p, depth);
    let pb = p.to_bigint();
    let mut levels = Vec::with_capacity(depth as usize + 1);
    for l in 0..=depth {
        let vals = (0..tree.level_size(l))
            .map(|i| {
                let m = BigInt::from(residue) + &pb * BigInt::from(i);
                Ok(root_valuation_profile(f, &m, p)?.chi_hat(l as u64 + 1))
            })
            .collect::<Result<Vec<_>>>()?;
        levels.push(vals);
    }
    let s = guaranteed_valuation(f, p)?.min(depth as u64 + 1);
    Ok(WeightFunction {
        tree,
        levels,
        omega: BigRational::from_integer(BigInt::from(s)),
        kind: Kind::Integral,
    })
}
