#pragma once

#include <optional>
#include <vector>

#include "modelset/quadratic.hpp"

namespace modelset {

using QMatrix = std::vector<std::vector<QuadraticNumber>>;
using RMatrix = std::vector<std::vector<Rational>>;

QuadraticNumber q_det(QMatrix m);
/// Inverse of a square matrix over Q(sqrt D); nullopt when singular.
std::optional<QMatrix> q_inverse(QMatrix m);
std::vector<QuadraticNumber> q_mat_vec(const QMatrix& m, const std::vector<QuadraticNumber>& v);

int rational_rank(RMatrix m);

struct RationalSolveResult {
    bool consistent = false;
    bool unique = false;
    std::vector<Rational> solution;  // a particular solution when consistent and unique
};

/// Exact solve of the (possibly rectangular) system A x = b over Q.
RationalSolveResult rational_solve(RMatrix a, std::vector<Rational> b);

}  // namespace modelset
