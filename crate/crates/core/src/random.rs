//! Seeded random words and trees for experiments and tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::tree::{CaretKind, Tree};
use crate::word::{GenKind, GeneratorSymbol, Word};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random symbol of one of `kinds` with exponent ±1 and index at most `max_index`.
pub fn random_symbol<R: Rng>(rng: &mut R, kinds: &[GenKind], max_index: u32) -> GeneratorSymbol {
    let kind = *kinds.choose(rng).expect("at least one generator kind");
    let lo = if kind == GenKind::C { 1 } else { 0 };
    let index = rng.gen_range(lo..=max_index.max(lo));
    let exp = if rng.gen_bool(0.5) { 1 } else { -1 };
    GeneratorSymbol::new(kind, index, exp)
}

/// Word with exactly `len` symbols.
pub fn random_word<R: Rng>(rng: &mut R, len: usize, kinds: &[GenKind], max_index: u32) -> Word {
    Word((0..len).map(|_| random_symbol(rng, kinds, max_index)).collect())
}

/// Word with `len` symbols and even `y`-exponent sum; the last symbol is
/// switched to a `y` when needed.
pub fn random_even_word<R: Rng>(rng: &mut R, len: usize, kinds: &[GenKind], max_index: u32) -> Word {
    let mut w = random_word(rng, len.max(1), kinds, max_index);
    if w.y_parity() == 1 {
        let last = w.0.last_mut().unwrap();
        if last.kind == GenKind::Y {
            *last = GeneratorSymbol::new(GenKind::X, last.index, last.exp);
        } else {
            *last = GeneratorSymbol::new(GenKind::Y, rng.gen_range(0..=max_index), last.exp.signum());
        }
    }
    w
}

/// Tree with `carets` carets grown by expanding uniformly chosen leaves.
pub fn random_tree<C: CaretKind, R: Rng>(rng: &mut R, carets: usize) -> Tree<C> {
    let mut t = Tree::Leaf;
    for _ in 0..carets {
        let leaf = rng.gen_range(0..t.leaf_count());
        let c = *C::all().choose(rng).unwrap();
        t.expand_leaf_in_place(leaf, c).expect("leaf index in range");
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::Caret;

    const ALL: [GenKind; 4] = [GenKind::X, GenKind::Y, GenKind::C, GenKind::P];

    #[test]
    fn deterministic() {
        let a = random_word(&mut seeded(7), 20, &ALL, 4);
        let b = random_word(&mut seeded(7), 20, &ALL, 4);
        assert_eq!(a, b);
        assert!(a.symbols().iter().all(|s| s.validate().is_ok() && s.index <= 4));
    }

    #[test]
    fn even_words() {
        let mut rng = seeded(1);
        for len in 1..40 {
            assert_eq!(random_even_word(&mut rng, len, &ALL, 4).y_parity(), 0);
        }
    }

    #[test]
    fn tree_sizes() {
        let t: Tree<Caret> = random_tree(&mut seeded(3), 9);
        assert_eq!(t.caret_count(), 9);
    }
}
