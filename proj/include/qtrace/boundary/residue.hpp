#pragma once

#include "qtrace/logresidue/residue.hpp"

#include <optional>

namespace qtrace::bdry {

using logres::Domain;
using logres::ResidueValue;
using param::PolyhomSymbol;

struct FglsResidue {
    ResidueValue interior;
    ResidueValue boundary;
    bool interior_present = false;
    bool boundary_present = false;
    sym::complex value{};
};

/// res = ∫_X ∫_{|ξ|=1} a_{−n} đS dx + ∫_{X′} ∫_{|ξ′|=1} s_{1−n} đS′ dx′ with đS carrying
/// (2π)^{−n} on X and (2π)^{−(n−1)} on X′. Either part may be absent.
FglsResidue fgls_residue(const std::optional<PolyhomSymbol>& interior, const Domain& x,
                         const std::optional<PolyhomSymbol>& boundary, const Domain& x_prime, int n,
                         int sphere_degree = 32);

}  // namespace qtrace::bdry
