#include <stdexcept>
#include <string>

#include "qenv/linalg.hpp"

namespace qenv {

// With U*M*V = D, substituting x = V*y turns the condition M x in Z^rows into
// d_i y_i in Z for i <= rank, leaving the last (c - rank) coordinates free in
// Q/Z. Since D * (V^-1 B) = U * M * B = 0, the image of B lives entirely in
// those free coordinates, so the quotient is finite exactly when B has rank
// c - rank over Q, and it is then the torsion of M's Smith form.
std::vector<Integer> qz_solution_group(const SparseIntMatrix& m, const SparseIntMatrix& b,
                                       const SnfLimits& limits) {
  if (m.cols() != b.rows())
    throw std::invalid_argument("qz_solution_group: M has " + std::to_string(m.cols()) + " columns but B has " +
                                std::to_string(b.rows()) + " rows");
  if (!(m * b).is_zero()) throw std::invalid_argument("qz_solution_group: M*B is not zero");

  const SmithResult sm = smith_normal_form(m, Transforms::none, limits);
  const SmithResult sb = smith_normal_form(b, Transforms::none, limits);
  if (sb.rank != sm.nullity)
    throw std::domain_error("qz_solution_group: quotient is not finite (B has rank " + std::to_string(sb.rank) +
                            ", kernel of M has rank " + std::to_string(sm.nullity) + ")");
  return sm.torsion();
}

}  // namespace qenv
