#pragma once

#include "stardmp/additive.hpp"
#include "stardmp/matcore.hpp"

namespace stardmp {

/// Four n x n blocks of a 2n x 2n matrix [[A, B], [C, D]].
struct BlockMatrix {
  CMatrix A, B, C, D;
};

/// Dense 2n x 2n matrix from the four blocks.  Throws ShapeError unless all
/// blocks are square with equal dimension.
CMatrix assemble(const BlockMatrix& blocks);

/// Blocks of a 2n x 2n matrix; throws ShapeError on odd dimension.
BlockMatrix extract_blocks(const CMatrix& m);

/// (A, B, C, D) -> (D, C, B, A): conjugation by the involution that swaps
/// the two halves of the space.  Involutive.
BlockMatrix swap_conjugate(const BlockMatrix& blocks);

std::vector<HypothesisCheck> lemma41_hypotheses(const CMatrix& B, const CMatrix& C,
                                                const Tolerance& tol);
std::vector<HypothesisCheck> thm42_hypotheses(const BlockMatrix& blocks,
                                              const Tolerance& tol);
std::vector<HypothesisCheck> thm44_hypotheses(const BlockMatrix& blocks,
                                              const Tolerance& tol);

/// [[0, B], [C, 0]] is *-DMP whenever BC and CB are (one direction).
TheoremVerdict lemma41_check(const CMatrix& B, const CMatrix& C, const Tolerance& tol);

/// Intertwining criteria for [[A, B], [C, D]] being *-DMP (one direction).
TheoremVerdict thm42_check(const BlockMatrix& blocks, const Tolerance& tol);
TheoremVerdict thm44_check(const BlockMatrix& blocks, const Tolerance& tol);
TheoremVerdict thm46_check(const BlockMatrix& blocks, const Tolerance& tol);

/// Mirrored statements obtained by applying the theorem above to the
/// swap-conjugated blocks.
TheoremVerdict cor43_check(const BlockMatrix& blocks, const Tolerance& tol);
TheoremVerdict cor45_check(const BlockMatrix& blocks, const Tolerance& tol);
TheoremVerdict cor47_check(const BlockMatrix& blocks, const Tolerance& tol);

}  // namespace stardmp
