//! Model-size bounds from the bounded-model theorems.

use crate::algebra::{Op, OpSet};
use crate::error::{Error, Result};
use crate::normalform::{NfKind, NormalForm};

const ORDERED_EQ: OpSet = OpSet::of(&[Op::Subst, Op::Eq, Op::Neg, Op::Cap, Op::Exists]);
const ONEDIM_EQ: OpSet = OpSet::of(&[Op::Eq, Op::Neg, Op::Cap, Op::Exists1, Op::Exists0]);
const SWAP_C: OpSet = OpSet::of(&[Op::Swap, Op::Neg, Op::OneDimCap, Op::Cap, Op::Exists]);
const EQ_C: OpSet = OpSet::of(&[Op::Eq, Op::Neg, Op::OneDimCap, Op::Cap, Op::Exists]);
const ONEDIM_SWAP: OpSet =
    OpSet::of(&[Op::Swap, Op::Eq, Op::Neg, Op::DotCap, Op::Exists1, Op::Exists0]);

/// `max(2, 2·max(1,|I′|)·max(1,|I|))`.
pub fn polynomial_bound(kappa: usize, existential: usize) -> usize {
    2usize.saturating_mul(kappa.max(1)).saturating_mul(existential.max(1)).max(2)
}

fn pow2(e: usize) -> usize {
    if e >= usize::BITS as usize - 1 {
        usize::MAX
    } else {
        1 << e
    }
}

/// A domain size that suffices for every satisfiable normal form of the
/// given operator fragment.
pub fn size_bound(nf: &NormalForm, fragment: OpSet) -> Result<usize> {
    let kappa = nf.kappa.len();
    let reqs = nf.existential.len();
    let symbols = nf.vocab.len();
    let unary = nf.vocab.iter().filter(|&(_, a)| a == 1).count();
    let max_arity = nf.vocab.max_arity();
    let kind_ok = |k: NfKind| {
        if nf.kind == k {
            Ok(())
        } else {
            Err(Error::NormalForm(format!("fragment {fragment} needs a {k:?} normal form")))
        }
    };
    if fragment.is_subset(ORDERED_EQ) {
        kind_ok(NfKind::Ordered)?;
        Ok(polynomial_bound(kappa, reqs))
    } else if fragment.is_subset(ONEDIM_EQ) {
        kind_ok(NfKind::OneDim)?;
        Ok(polynomial_bound(kappa, reqs))
    } else if fragment.is_subset(SWAP_C) {
        kind_ok(NfKind::Ordered)?;
        Ok(3usize.saturating_mul(reqs.max(1)).saturating_mul(pow2(unary)))
    } else if fragment.is_subset(EQ_C) {
        kind_ok(NfKind::Ordered)?;
        let types = pow2(symbols);
        Ok(types.saturating_add(2usize.saturating_mul(reqs.max(1)).saturating_mul(types)))
    } else if fragment.is_subset(ONEDIM_SWAP) {
        kind_ok(NfKind::OneDim)?;
        let types = pow2(unary);
        let blocks = 4usize.saturating_mul(reqs.max(1)).saturating_mul(max_arity.saturating_sub(1).max(1));
        Ok(types.saturating_mul(blocks.saturating_add(1)))
    } else {
        Err(Error::NoBound(fragment.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_term, Vocabulary};
    use crate::normalform::{recognize, NfKind};

    #[test]
    fn polynomial_bound_values() {
        assert_eq!(polynomial_bound(2, 3), 12);
        assert_eq!(polynomial_bound(0, 0), 2);
        assert_eq!(polynomial_bound(1, 2), 4);
    }

    #[test]
    fn bound_by_fragment() {
        let v = Vocabulary::parse("P/1, R/2").unwrap();
        let t = parse_term("ex P cap all (not P cup ex R)", &v).unwrap();
        let nf = recognize(&t, NfKind::Ordered).unwrap();
        let f = OpSet::of(&[Op::Neg, Op::Cap, Op::Exists]);
        assert_eq!(size_bound(&nf, f).unwrap(), 2);
        let f = f.with(Op::Swap).with(Op::OneDimCap);
        assert_eq!(size_bound(&nf, f).unwrap(), 6);
        assert!(matches!(
            size_bound(&nf, OpSet::of(&[Op::Swap, Op::Neg, Op::DotCap, Op::Exists])),
            Err(Error::NoBound(_))
        ));
        let f = OpSet::of(&[Op::Eq, Op::Neg, Op::Cap, Op::Exists1, Op::Exists0]);
        assert!(size_bound(&nf, f).is_err());
    }
}
