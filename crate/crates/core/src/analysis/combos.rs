//! Enumeration of learnable Pauli error-rate combinations: the single rates
//! with a != 0, b != 0, the stabilizer-coset sums for syndrome circuits, and
//! a basis completion over all rate chains whose combination lands in the
//! cycle space.

use serde::Serialize;

use crate::bits::Bits;
use crate::error::Result;
use crate::graph::{
    error_rate_chain, proposition_chains, OneChain, PatternTransferGraph, PropositionKind,
    SpaceDecomposition,
};
use crate::pauli::{symplectic_inner, PauliOp};

#[derive(Clone, Debug, Serialize)]
pub struct RateCombination {
    pub description: String,
    /// Coefficients of the rate-space combination: (weight, a, b, P).
    pub terms: Vec<(f64, Bits, Bits, PauliOp)>,
    pub kind: String,
    #[serde(skip)]
    pub chain: OneChain,
}

fn term_label(weight: f64, a: &Bits, b: &Bits, p: &PauliOp) -> String {
    let w = if weight == 1.0 {
        "+".to_string()
    } else if weight == -1.0 {
        "-".to_string()
    } else {
        format!("{weight:+}*")
    };
    format!("{w}p_{{{a},{b}}}^{p}")
}

fn describe(terms: &[(f64, Bits, Bits, PauliOp)]) -> String {
    let body: String = terms
        .iter()
        .map(|(w, a, b, p)| term_label(*w, a, b, p))
        .collect::<Vec<_>>()
        .join(" ");
    body.strip_prefix('+').unwrap_or(&body).to_string()
}

/// Emits learnable rate combinations for one graph. When the gadget is a
/// syndrome circuit, pass its stabilizers to include the coset sums; the
/// classification is not claimed complete beyond the emitted chains.
pub fn learnable_rate_combinations(
    g: &PatternTransferGraph,
    stabilizers: Option<&[PauliOp]>,
) -> Result<Vec<RateCombination>> {
    let n = g.n();
    let m = g.m();
    let decomposition = SpaceDecomposition::new(g);
    let mut combos: Vec<RateCombination> = Vec::new();
    // Rate-space rank tracker so the final list is linearly independent.
    let dim = 1usize << (2 * (n + m));
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut try_push = |terms: Vec<(f64, Bits, Bits, PauliOp)>,
                        chain: OneChain,
                        kind: &str,
                        combos: &mut Vec<RateCombination>|
     -> bool {
        let mut dense = vec![0.0; dim];
        for (w, a, b, p) in &terms {
            dense[(((a.value() << n) | b.value()) << (2 * m)) | p.index()] += w;
        }
        for row in &rows {
            let pivot = row.iter().position(|v| v.abs() > 1e-9).unwrap();
            let f = dense[pivot] / row[pivot];
            if f != 0.0 {
                for (d, r) in dense.iter_mut().zip(row.iter()) {
                    *d -= f * r;
                }
            }
        }
        if dense.iter().all(|v| v.abs() < 1e-9) {
            return false;
        }
        rows.push(dense);
        combos.push(RateCombination {
            description: describe(&terms),
            terms,
            kind: kind.into(),
            chain,
        });
        true
    };

    // Single rates p_{a,b}^P, a != 0, b != 0.
    for a in Bits::all(n) {
        for b in Bits::all(n) {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            for p in PauliOp::all(m) {
                let chain = error_rate_chain(&a, &b, &p, g);
                debug_assert!(decomposition.is_learnable(&chain));
                try_push(vec![(1.0, a, b, p)], chain, "single", &mut combos);
            }
        }
    }

    // Stabilizer-coset sums for syndrome gadgets.
    if let Some(stabs) = stabilizers {
        let coset_reps = centralizer_coset_reps(m, stabs)?;
        for p in &coset_reps {
            let chain =
                proposition_chains(&PropositionKind::StabilizerSum { p: *p }, stabs, g)?.to_float();
            let terms = coset_terms(n, m, stabs, p, CosetShape::Diagonal)?;
            try_push(terms, chain, "stabilizer-sum", &mut combos);
        }
        for a in Bits::all(n) {
            if a.is_zero() {
                continue;
            }
            for p in &coset_reps {
                let chain = proposition_chains(
                    &PropositionKind::ReadoutPostSum { a, p: *p },
                    stabs,
                    g,
                )?
                .to_float();
                let terms = coset_terms(n, m, stabs, p, CosetShape::ReadoutPost(a))?;
                try_push(terms, chain, "readout-post-sum", &mut combos);
            }
        }
    }

    // Completion: any remaining combinations of rate chains lying in the
    // cycle space, found from the nullspace of the cut-coordinate matrix.
    let all_indices: Vec<(Bits, Bits, PauliOp)> = {
        let mut v = Vec::with_capacity(dim);
        for a in Bits::all(n) {
            for b in Bits::all(n) {
                for p in PauliOp::all(m) {
                    v.push((a, b, p));
                }
            }
        }
        v
    };
    let cut_rows: Vec<Vec<f64>> = all_indices
        .iter()
        .map(|(a, b, p)| decomposition.cut_coordinates(&error_rate_chain(a, b, p, g)))
        .collect();
    for vec in nullspace(&cut_rows, decomposition.cut_dim()) {
        let scaled = integerize(&vec);
        let terms: Vec<(f64, Bits, Bits, PauliOp)> = scaled
            .iter()
            .enumerate()
            .filter(|(_, w)| **w != 0.0)
            .map(|(i, w)| {
                let (a, b, p) = all_indices[i];
                (*w, a, b, p)
            })
            .collect();
        let mut chain = OneChain::new();
        for (w, a, b, p) in &terms {
            chain.add_scaled(&error_rate_chain(a, b, p, g), *w);
        }
        debug_assert!(decomposition.is_learnable(&chain));
        try_push(terms, chain, "completion", &mut combos);
    }
    Ok(combos)
}

enum CosetShape {
    Diagonal,
    ReadoutPost(Bits),
}

fn coset_terms(
    n: usize,
    m: usize,
    stabs: &[PauliOp],
    p: &PauliOp,
    shape: CosetShape,
) -> Result<Vec<(f64, Bits, Bits, PauliOp)>> {
    let mut terms = Vec::new();
    let mut members = std::collections::BTreeSet::new();
    for k in 0..1usize << stabs.len() {
        let mut acc = *p;
        for (i, s) in stabs.iter().enumerate() {
            if (k >> i) & 1 == 1 {
                acc = acc.multiply(s)?;
            }
        }
        members.insert(acc);
    }
    let _ = m;
    for q in members {
        match &shape {
            CosetShape::Diagonal => terms.push((1.0, Bits::zero(n), Bits::zero(n), q)),
            CosetShape::ReadoutPost(a) => {
                terms.push((1.0, Bits::zero(n), *a, q));
                terms.push((1.0, *a, Bits::zero(n), q));
            }
        }
    }
    Ok(terms)
}

fn centralizer_coset_reps(m: usize, stabs: &[PauliOp]) -> Result<Vec<PauliOp>> {
    let mut reps = Vec::new();
    'outer: for p in PauliOp::all(m) {
        for s in stabs {
            if symplectic_inner(&p, s)? == 1 {
                continue 'outer;
            }
        }
        // Canonical representative: the smallest index in the orbit {S^k P}.
        let mut smallest = p;
        for k in 0..1usize << stabs.len() {
            let mut acc = p;
            for (i, s) in stabs.iter().enumerate() {
                if (k >> i) & 1 == 1 {
                    acc = acc.multiply(s)?;
                }
            }
            if acc.index() < smallest.index() {
                smallest = acc;
            }
        }
        if smallest == p {
            reps.push(p);
        }
    }
    Ok(reps)
}

/// Nullspace basis of the row-per-vector matrix (vectors are rows indexed by
/// rate-chain index, entries are cut coordinates).
fn nullspace(rows: &[Vec<f64>], width: usize) -> Vec<Vec<f64>> {
    let n = rows.len();
    // Gaussian elimination on the transpose: width x n system A x = 0.
    let mut a: Vec<Vec<f64>> = (0..width)
        .map(|c| rows.iter().map(|r| r[c]).collect())
        .collect();
    let mut pivot_cols = Vec::new();
    let mut rank = 0usize;
    for col in 0..n {
        let pivot = (rank..width).find(|&r| a[r][col].abs() > 1e-9);
        let Some(p) = pivot else { continue };
        a.swap(rank, p);
        let scale = a[rank][col];
        for v in a[rank].iter_mut() {
            *v /= scale;
        }
        for r in 0..width {
            if r != rank && a[r][col].abs() > 1e-12 {
                let f = a[r][col];
                let pivot_row = a[rank].clone();
                for (v, pv) in a[r].iter_mut().zip(pivot_row.iter()) {
                    *v -= f * pv;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == width {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![0.0; n];
        v[free] = 1.0;
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -a[r][free];
        }
        basis.push(v);
    }
    basis
}

/// Scales a rational-looking vector to small integers when possible.
fn integerize(v: &[f64]) -> Vec<f64> {
    for denom in 1..=64u32 {
        let scaled: Vec<f64> = v.iter().map(|x| x * denom as f64).collect();
        if scaled
            .iter()
            .all(|x| (x - x.round()).abs() < 1e-7 * denom as f64)
        {
            return scaled.iter().map(|x| x.round()).collect();
        }
    }
    v.to_vec()
}
