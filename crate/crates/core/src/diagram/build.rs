//! Structural combinators: identities, symmetries, permutations, and the
//! wire bundles used by the matrix and Fritz decompositions.

use super::{DiagramError, Term, TermKind};

/// `id_n` as a left-nested `*` of `id`, or `empty` when `n = 0`.
pub fn id_n(n: usize) -> Term {
    if n == 0 {
        return Term::empty();
    }
    let mut acc = Term::id();
    for _ in 1..n {
        acc = acc.par(&Term::id());
    }
    acc
}

/// True for `empty`, `id`, and `*`-composites of those.
pub fn is_structural_identity(t: &Term) -> bool {
    match t.kind() {
        TermKind::Id | TermKind::Empty => true,
        TermKind::Par(a, b) => is_structural_identity(a) && is_structural_identity(b),
        _ => false,
    }
}

/// `a * b`, dropping a side that is `empty`.
pub fn par_smart(a: &Term, b: &Term) -> Term {
    if matches!(a.kind(), TermKind::Empty) {
        b.clone()
    } else if matches!(b.kind(), TermKind::Empty) {
        a.clone()
    } else {
        a.par(b)
    }
}

/// `a ; b`, dropping a side that is a structural identity.
pub fn seq_smart(a: &Term, b: &Term) -> Result<Term, DiagramError> {
    if a.coarity() != b.arity() {
        return Err(DiagramError::Mismatch { left: a.coarity(), right: b.arity() });
    }
    if is_structural_identity(b) {
        Ok(a.clone())
    } else if is_structural_identity(a) {
        Ok(b.clone())
    } else {
        a.seq(b)
    }
}

/// Left-nested `*` of the given terms with `empty` parts dropped.
pub fn par_all<'a>(terms: impl IntoIterator<Item = &'a Term>) -> Term {
    terms.into_iter().fold(Term::empty(), |acc, t| par_smart(&acc, t))
}

/// Left-nested `;` with structural identities dropped.
pub fn seq_all<'a>(width: usize, terms: impl IntoIterator<Item = &'a Term>) -> Result<Term, DiagramError> {
    terms.into_iter().try_fold(id_n(width), |acc, t| seq_smart(&acc, t))
}

/// A wiring diagram sending input wire `i` to output position `perm[i]`,
/// built from adjacent swaps by bubble sort.
pub fn permutation(perm: &[usize]) -> Term {
    let n = perm.len();
    let mut seen = vec![false; n];
    for &p in perm {
        assert!(p < n && !seen[p], "not a permutation: {perm:?}");
        seen[p] = true;
    }
    let mut current = perm.to_vec();
    let mut acc = id_n(n);
    loop {
        let mut swapped = false;
        for pos in 0..n.saturating_sub(1) {
            if current[pos] > current[pos + 1] {
                current.swap(pos, pos + 1);
                let layer = par_smart(&par_smart(&id_n(pos), &Term::sym()), &id_n(n - pos - 2));
                acc = seq_smart(&acc, &layer).expect("permutation layers have equal width");
                swapped = true;
            }
        }
        if !swapped {
            return acc;
        }
    }
}

/// The symmetry `m + n → n + m` exchanging a block of `m` wires with a block
/// of `n` wires.
pub fn sym_mn(m: usize, n: usize) -> Term {
    let perm: Vec<usize> = (0..m + n).map(|i| if i < m { i + n } else { i - m }).collect();
    permutation(&perm)
}

/// Regroups `outer` blocks of `inner` wires into `inner` blocks of `outer`
/// wires: wire `j * inner + i` moves to `i * outer + j`.
pub fn transpose_wires(outer: usize, inner: usize) -> Term {
    let mut perm = vec![0; outer * inner];
    for j in 0..outer {
        for i in 0..inner {
            perm[j * inner + i] = i * outer + j;
        }
    }
    permutation(&perm)
}

/// A `1 → k` tree of binary `split` generators, `discard` when `k = 0`.
pub fn split_tree(k: usize, split: &Term, discard: &Term) -> Term {
    match k {
        0 => discard.clone(),
        1 => Term::id(),
        _ => {
            let prev = split_tree(k - 1, split, discard);
            let layer = par_smart(&id_n(k - 2), split);
            seq_smart(&prev, &layer).expect("split tree layers agree")
        }
    }
}

/// A `k → 1` tree of binary `merge` generators, `unit` when `k = 0`.
pub fn merge_tree(k: usize, merge: &Term, unit: &Term) -> Term {
    match k {
        0 => unit.clone(),
        1 => Term::id(),
        _ => {
            let layer = par_smart(merge, &id_n(k - 2));
            seq_smart(&layer, &merge_tree(k - 1, merge, unit)).expect("merge tree layers agree")
        }
    }
}

/// Generators of the theory of commutative bialgebras with scalars.
pub mod ha {
    use super::super::{Generator, Term};
    use crate::rational::Rational;

    pub fn copy() -> Term {
        Term::gen(Generator::new("copy", 1, 2))
    }
    pub fn del() -> Term {
        Term::gen(Generator::new("del", 1, 0))
    }
    pub fn add() -> Term {
        Term::gen(Generator::new("add", 2, 1))
    }
    pub fn zero() -> Term {
        Term::gen(Generator::new("zero", 0, 1))
    }
    pub fn scalar(k: Rational) -> Term {
        Term::gen(Generator::with_scalar("scalar", 1, 1, k))
    }
}

/// Generators of the theory of convex algebras.
pub mod ca {
    use super::super::{Generator, Term};
    use crate::rational::Rational;

    /// The empty distribution, `0 → 1`.
    pub fn del() -> Term {
        Term::gen(Generator::new("del", 0, 1))
    }
    pub fn cop() -> Term {
        Term::gen(Generator::new("cop", 2, 1))
    }
    pub fn cc(lambda: Rational) -> Term {
        Term::gen(Generator::with_scalar("cc", 1, 2, lambda))
    }
}

/// `1 → k` copying tree over `copy`/`del`.
pub fn copy_tree(k: usize) -> Term {
    split_tree(k, &ha::copy(), &ha::del())
}

/// `k → 1` adding tree over `add`/`zero`.
pub fn add_tree(k: usize) -> Term {
    merge_tree(k, &ha::add(), &ha::zero())
}

/// The wire bundles `b : n → nm` and `w : nm → m` of the matrix canonical
/// form. `b` copies input `j` onto wires `j*m .. j*m + m`; `w` sums wire
/// `j*m + i` into output `i`.
pub fn canonical_wires(n: usize, m: usize) -> (Term, Term) {
    let b = par_all(&vec![copy_tree(m); n]);
    let adders = par_all(&vec![add_tree(n); m]);
    let w = seq_smart(&transpose_wires(n, m), &adders).expect("wire bundle widths agree");
    (b, w)
}

/// The merge `p : nm → m` of the Fritz decomposition: wire `j*m + i` is
/// routed to output `i` through a tree of `cop`.
pub fn fritz_merge(n: usize, m: usize) -> Result<Term, DiagramError> {
    if m == 0 {
        return Err(DiagramError::EmptyMerge);
    }
    let tree = merge_tree(n, &ca::cop(), &ca::del());
    let mergers = par_all(&vec![tree; m]);
    seq_smart(&transpose_wires(n, m), &mergers)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities() {
        assert_eq!(id_n(0), Term::empty());
        assert_eq!(id_n(1), Term::id());
        assert_eq!(id_n(3).ty(), (3, 3));
        assert_eq!(sym_mn(1, 1), Term::sym());
        assert_eq!(sym_mn(2, 0), id_n(2));
        assert_eq!(sym_mn(2, 1).ty(), (3, 3));
    }

    #[test]
    fn wire_types() {
        for n in 0..4 {
            for m in 0..4 {
                let (b, w) = canonical_wires(n, m);
                assert_eq!(b.ty(), (n, n * m));
                assert_eq!(w.ty(), (n * m, m));
                if m > 0 {
                    assert_eq!(fritz_merge(n, m).unwrap().ty(), (n * m, m));
                }
            }
        }
        assert!(fritz_merge(2, 0).is_err());
        assert_eq!(canonical_wires(1, 1), (Term::id(), Term::id()));
    }
}
