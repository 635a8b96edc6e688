#pragma once

#include "qtrace/errors.hpp"

#include <cmath>

namespace qtrace::bdry {

/// S¹ × [0, L] with P = −∂_t² + P′, P′ = −∂_θ² + m² on the circle, Dirichlet at both ends.
struct CylinderSpec {
    double circumference = 2 * M_PI;
    double length = M_PI;
    double mass2 = 1.0;

    double area() const { return circumference * length; }

    void validate() const {
        if (!(circumference > 0.0) || !(length > 0.0))
            throw UsageError("cylinder needs positive circumference and length");
        if (!(mass2 >= 0.0)) throw UsageError("cylinder needs a nonnegative mass term");
    }
};

}  // namespace qtrace::bdry
