#include "qtrace/logresidue/log_symbol.hpp"

#include "qtrace/errors.hpp"

namespace qtrace::logres {

Expression LogSymbol::expression(int terms) const {
    Expression e = Expression(m) * sym::log(sym::abs_xi());
    for (int j = 0; j < terms; ++j) e = e + b.term(j);
    return e;
}

LogSymbol log_symbol(const DifferentialOperator& p, int depth) {
    const auto branch = param::check_ellipticity(p, 1e-9);
    if (!branch.pass) throw ConstructionError("principal symbol meets the branch cut of log: " + branch.witness);
    const ParamSymbol q = param::resolvent_expansion(p, depth);
    LogSymbol out;
    out.m = p.order();
    out.dim = p.dim();
    out.b = PolyhomSymbol(Rational(0), p.dim());
    out.b.push_back(sym::log(p.principal()) - Expression(p.order()) * sym::log(sym::abs_xi()));
    for (int j = 1; j <= depth; ++j) out.b.push_back(log_transform(q.term(j)));
    out.b.set_complete(false);
    return out;
}

PolyhomSymbol log_difference_symbol(const DifferentialOperator& p1, const DifferentialOperator& p2, int depth) {
    return log_transform_terms(param::resolvent_difference(p1, p2, depth));
}

PolyhomSymbol log_commutator_symbol(const PolyhomSymbol& a, const PolyhomSymbol& a_prime, const DifferentialOperator& p,
                                    int depth) {
    return log_transform_terms(param::commutator_resolvent_terms(a, a_prime, p, depth));
}

}  // namespace qtrace::logres
