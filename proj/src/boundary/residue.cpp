#include "qtrace/boundary/residue.hpp"

#include "qtrace/errors.hpp"

namespace qtrace::bdry {

FglsResidue fgls_residue(const std::optional<PolyhomSymbol>& interior, const Domain& x,
                         const std::optional<PolyhomSymbol>& boundary, const Domain& x_prime, int n,
                         int sphere_degree) {
    if (n < 2) throw UsageError("a boundary residue needs n >= 2; the boundary of an interval is 0-dimensional");
    FglsResidue out;
    if (interior) {
        if (interior->dim() != n || x.dim != n) throw UsageError("interior symbol and domain must have dimension n");
        out.interior = logres::noncommutative_residue(*interior, x, sphere_degree);
        out.interior_present = true;
    }
    if (boundary) {
        if (boundary->dim() != n - 1 || x_prime.dim != n - 1)
            throw UsageError("boundary symbol and domain must have dimension n - 1");
        out.boundary = logres::noncommutative_residue(*boundary, x_prime, sphere_degree);
        out.boundary_present = true;
    }
    out.value = out.interior.value + out.boundary.value;
    return out;
}

}  // namespace qtrace::bdry
