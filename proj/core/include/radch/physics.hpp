// physics.hpp
// Model parameters, the double-well potential family, and the transition
// profile theta with its surface-tension constants.

#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "radch/grid.hpp"

namespace radch {

// Physical and scaling constants of one experiment.
struct ModelParams {
    int n_dim = 2;           // spatial dimension n
    double a = 1.0;          // inflow speed, u(1,t) = a
    double r0 = 2.0;         // initial interface radius
    double M = 5.0;          // outer radius
    double nu = 1.0;         // viscosity
    double rho = 1.0;        // density
    double m_tilde = 1.0;    // mobility prefactor
    double alpha = 0.0;      // mobility exponent; infinity() disables diffusion
    double eps = 0.1;        // interface parameter

    static constexpr double alpha_infinity() {
        return std::numeric_limits<double>::infinity();
    }

    // m_tilde * eps^alpha, identically zero for alpha = infinity.
    double mobility() const;

    // Throws std::invalid_argument naming the violated rule.
    void validate() const;
};

struct PotentialTriple {
    double f, fp, fpp;
};

// Double-well free energy density. Only the quartic family
// f(c) = (amplitude/8)(1-c^2)^2 ships; amplitude rescaling is enough for the
// homogeneity checks.
class Potential {
  public:
    explicit Potential(double amplitude = 1.0);

    double f(double c) const;
    double fp(double c) const;
    double fpp(double c) const;
    double amplitude() const { return amplitude_; }
    const char* family() const { return "quartic"; }
    int growth_exponent() const { return 4; }

    // min(f(s), 1 + s^2), the truncation used by the BV seminorm.
    double f_truncated(double s) const;

  private:
    double amplitude_;
};

PotentialTriple potential_eval(const Potential& pot, double c);

// sigma = \int_{-1}^{1} sqrt(f(s)/2) ds by composite quadrature.
double canonical_sigma(const Potential& pot);

// W(c) = \int_{-1}^{c} sqrt(2 min(f(s), 1+s^2)) ds.
double w_of_c(const Potential& pot, double c);

// Smooth transition profile: theta(s) = 1 for s <= -delta, -1 for s >= delta,
// the normalized bump-function integral in between. Odd about s = 0, so the
// zero crossing sits exactly at the interface radius.
class Profile {
  public:
    // tabulation_panels is rounded up to an even count; doubling it must not
    // move sigma_profile or sigma_tilde by more than ~1e-12 relative.
    Profile(double delta, const Potential& pot, std::size_t tabulation_panels = 4096);

    double delta() const { return delta_; }
    double sigma_profile() const { return sigma_profile_; }  // \int |theta'|^2 ds
    double sigma_tilde() const { return sigma_tilde_; }      // \int f(theta) ds

    double eval(double s) const;
    double deriv(double s) const;

  private:
    double bump(double s) const;            // exp(-delta^2/(delta^2 - s^2)) on (-delta, delta)
    double phi_partial(double a, double b) const;  // \int_a^b bump

    double delta_;
    double phi_total_;
    std::size_t panels_;
    double panel_width_;
    std::vector<double> phi_table_;  // cumulative \int_{-delta}^{s_k} bump
    double sigma_profile_;
    double sigma_tilde_;
};

double profile_eval(const Profile& prof, double s);
double profile_deriv(const Profile& prof, double s);

// c_0(r) = theta((r - r0)/eps). Throws if the transition layer is not
// strictly interior to (1, M).
Field initial_condition(const RadialGrid& grid, const ModelParams& params, const Profile& prof);

}  // namespace radch
