#ifndef GAMX_PIECEWISE_H_
#define GAMX_PIECEWISE_H_

#include <cstddef>
#include <vector>

#include "gamx/polynomial.h"
#include "gamx/rational.h"

namespace gamx {

// One polynomial per interval [b_j, b_{j+1}); the last interval is closed.
// Breakpoints increase strictly, except that the final two may coincide: that
// encodes a single-point piece at the right end (a jump exactly at the upper
// bound, or a one-point domain).
struct PiecewiseFunction {
  std::vector<Rational> breakpoints;
  std::vector<Polynomial> pieces;

  std::size_t num_pieces() const { return pieces.size(); }
  const Rational& lo() const { return breakpoints.front(); }
  const Rational& hi() const { return breakpoints.back(); }
  bool is_last(std::size_t piece) const { return piece + 1 == pieces.size(); }

  // Index of the piece that owns v. v must lie in [lo, hi].
  std::size_t PieceIndex(const Rational& v) const;
  Rational operator()(const Rational& v) const;
};

}  // namespace gamx

#endif  // GAMX_PIECEWISE_H_
