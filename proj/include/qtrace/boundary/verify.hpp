#pragma once

#include "qtrace/boundary/cylinder.hpp"
#include "qtrace/boundary/residue.hpp"
#include "qtrace/boundary/sgo.hpp"
#include "qtrace/oracle/fit.hpp"
#include "qtrace/report.hpp"

#include <string>

namespace qtrace::bdry {

/// Constant-coefficient cylinder model for the log-difference trace: circle of
/// circumference 2π, normal length L, masses m₁², m₂². The s.g.o. case uses the
/// half-infinite cylinder with G given by g̃ = |ξ′|² e^{−|ξ′|(x+y)}.
struct T310Options {
    double length = 1.0;
    double mass1 = 2.0;
    double mass2 = 1.0;
    std::string a = "identity";  // or "sgo"
    int power = 1;               // N in Tr(A(Q₁^N − Q₂^N)_+)
    int lattice_cutoff = 64;
    double mu_min = 10.0;
    double mu_max = 1e4;
    int samples = 40;
    double ray_angle = M_PI;
    int fit_terms = 10;
    double tol_fit = 1e-4;
    double tol_residue = 1e-10;
    double tol_sgo = 1e-3;      // relative, s.g.o. case
    double tol_power = 1e-3;    // N against N = 1
    double rho_min = 8.0;       // s.g.o. boundary-symbol fit range in |ξ′|
    double rho_max = 64.0;
    int gauss_nodes = 24;
};

/// Fitted (−λ)^{−N} coefficient of the lattice trace against −(1/2)·res of the
/// log-difference. Headline check plus sub-checks listed in the report.
IdentityReport verify_t310_model(const T310Options& opt);

/// The lattice summand f(k, λ) whose sum is Tr(A(Q₁^N − Q₂^N)_+).
Expression t310_summand(const T310Options& opt);

/// Fit of Σ_k f(k, λ) on the ray.
oracle::ExpansionFit t310_lattice_fit(const T310Options& opt, std::vector<std::complex<double>>* z = nullptr,
                                      std::vector<std::complex<double>>* values = nullptr);

struct Ex53Options {
    CylinderSpec cylinder;
    int dim = 2;  // 1 selects the interval, which is refused
    int expansion_depth = 6;
    double tol = 1e-3;
};

/// C₀ = ζ(0) + ν₀ of the Dirichlet cylinder from the heat oracle against
/// −½ res_X(log P) plus the boundary term from the reduced normal-trace symbol.
IdentityReport verify_ex53(const Ex53Options& opt);

}  // namespace qtrace::bdry
