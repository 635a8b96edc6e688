#pragma once

#include "qtrace/symexpr/expression.hpp"

#include <vector>

namespace qtrace::sym {

struct HomogeneousPart {
    Rational degree;
    Expression term;
};

/// Expansion of e into quasi-homogeneous parts (weights ξ:1, |ξ|:1, λ:m, x:0),
/// sorted by descending degree, keeping degrees ≥ leading − depth. Powers of
/// sums are expanded binomially around their leading part.
std::vector<HomogeneousPart> homogeneous_expansion(const Expression& e, int m, const Rational& depth);

}  // namespace qtrace::sym
