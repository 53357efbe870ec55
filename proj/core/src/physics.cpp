#include "radch/physics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace radch {

namespace {

// 5-point Gauss-Legendre rule on [-1, 1].
constexpr double kGlX[5] = {0.0, -0.5384693101056831, 0.5384693101056831,
                            -0.9061798459386640, 0.9061798459386640};
constexpr double kGlW[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                            0.2369268850561891, 0.2369268850561891};

template <typename F>
double gl5(F&& f, double a, double b) {
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    double s = 0.0;
    for (int k = 0; k < 5; ++k) s += kGlW[k] * f(c + hw * kGlX[k]);
    return s * hw;
}

template <typename F>
double composite_gl5(F&& f, double a, double b, std::size_t panels) {
    const double w = (b - a) / static_cast<double>(panels);
    double s = 0.0;
    for (std::size_t k = 0; k < panels; ++k)
        s += gl5(f, a + w * static_cast<double>(k), a + w * static_cast<double>(k + 1));
    return s;
}

}  // namespace

double ModelParams::mobility() const {
    if (std::isinf(alpha)) return 0.0;
    return m_tilde * std::pow(eps, alpha);
}

void ModelParams::validate() const {
    if (n_dim != 2 && n_dim != 3) throw std::invalid_argument("params: n_dim must be 2 or 3");
    if (!(r0 > 1.0 && r0 < M)) throw std::invalid_argument("params: require 1 < r0 < M");
    if (!(a >= 0.0)) throw std::invalid_argument("params: require a >= 0");
    if (!(nu > 0.0)) throw std::invalid_argument("params: require nu > 0");
    if (!(rho > 0.0)) throw std::invalid_argument("params: require rho > 0");
    if (!(m_tilde >= 0.0)) throw std::invalid_argument("params: require m_tilde >= 0");
    if (!(alpha >= 0.0)) throw std::invalid_argument("params: require alpha >= 0");
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("params: require eps in (0,1]");
    const double m = mobility();
    if (!(m >= 0.0) || !std::isfinite(m))
        throw std::invalid_argument("params: mobility m_tilde*eps^alpha must be finite and >= 0");
}

Potential::Potential(double amplitude) : amplitude_(amplitude) {
    if (!(amplitude > 0.0)) throw std::invalid_argument("Potential: amplitude must be positive");
}

double Potential::f(double c) const {
    const double q = 1.0 - c * c;
    return amplitude_ / 8.0 * q * q;
}

double Potential::fp(double c) const {
    return amplitude_ / 2.0 * (c * c - 1.0) * c;
}

double Potential::fpp(double c) const {
    return amplitude_ / 2.0 * (3.0 * c * c - 1.0);
}

double Potential::f_truncated(double s) const {
    return std::min(f(s), 1.0 + s * s);
}

PotentialTriple potential_eval(const Potential& pot, double c) {
    return {pot.f(c), pot.fp(c), pot.fpp(c)};
}

double canonical_sigma(const Potential& pot) {
    return composite_gl5([&](double s) { return std::sqrt(pot.f(s) / 2.0); }, -1.0, 1.0, 256);
}

double w_of_c(const Potential& pot, double c) {
    if (c == -1.0) return 0.0;
    const double lo = std::min(c, -1.0), hi = std::max(c, -1.0);
    const std::size_t panels =
        std::max<std::size_t>(64, static_cast<std::size_t>(64.0 * (hi - lo)));
    const double val = composite_gl5(
        [&](double s) { return std::sqrt(2.0 * pot.f_truncated(s)); }, lo, hi, panels);
    return c >= -1.0 ? val : -val;
}

Profile::Profile(double delta, const Potential& pot, std::size_t tabulation_panels)
    : delta_(delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("Profile: delta must be positive");
    panels_ = std::max<std::size_t>(tabulation_panels, 64);
    if (panels_ % 2 != 0) ++panels_;
    panel_width_ = 2.0 * delta_ / static_cast<double>(panels_);

    // Cumulative integral of the bump on [-delta, 0], mirrored onto [0, delta]
    // so that phi(0) is exactly half the total and theta(0) == 0 in floating
    // point.
    const std::size_t half = panels_ / 2;
    std::vector<double> left(half);
    for (std::size_t k = 0; k < half; ++k) {
        const double a = -delta_ + panel_width_ * static_cast<double>(k);
        left[k] = gl5([&](double s) { return bump(s); }, a, a + panel_width_);
    }
    double phi_half = 0.0;
    for (double p : left) phi_half += p;
    phi_total_ = 2.0 * phi_half;

    phi_table_.assign(panels_ + 1, 0.0);
    for (std::size_t k = 0; k < half; ++k) phi_table_[k + 1] = phi_table_[k] + left[k];
    phi_table_[half] = phi_half;
    for (std::size_t k = 0; k < half; ++k)
        phi_table_[half + 1 + k] = phi_total_ - phi_table_[half - 1 - k];
    phi_table_[panels_] = phi_total_;

    const double scale = 2.0 / phi_total_;
    sigma_profile_ = composite_gl5(
        [&](double s) {
            const double d = scale * bump(s);
            return d * d;
        },
        -delta_, delta_, panels_);
    sigma_tilde_ = composite_gl5([&](double s) { return pot.f(eval(s)); }, -delta_, delta_,
                                 panels_);
}

double Profile::bump(double s) const {
    const double q = delta_ * delta_ - s * s;
    if (q <= 0.0) return 0.0;
    return std::exp(-delta_ * delta_ / q);
}

double Profile::phi_partial(double a, double b) const {
    return gl5([&](double s) { return bump(s); }, a, b);
}

double Profile::eval(double s) const {
    if (s <= -delta_) return 1.0;
    if (s >= delta_) return -1.0;
    const double x = (s + delta_) / panel_width_;
    std::size_t k = static_cast<std::size_t>(x);
    if (k >= panels_) k = panels_ - 1;
    const double sk = -delta_ + panel_width_ * static_cast<double>(k);
    const double phi = phi_table_[k] + phi_partial(sk, s);
    return 1.0 - 2.0 * phi / phi_total_;
}

double Profile::deriv(double s) const {
    if (s <= -delta_ || s >= delta_) return 0.0;
    return -2.0 * bump(s) / phi_total_;
}

double profile_eval(const Profile& prof, double s) { return prof.eval(s); }
double profile_deriv(const Profile& prof, double s) { return prof.deriv(s); }

Field initial_condition(const RadialGrid& grid, const ModelParams& params, const Profile& prof) {
    const double margin = std::min(params.r0 - grid.r_min(), grid.r_max() - params.r0);
    if (!(prof.delta() * params.eps < margin))
        throw std::invalid_argument(
            "initial_condition: transition layer touches the boundary (delta*eps = " +
            std::to_string(prof.delta() * params.eps) + ", margin = " + std::to_string(margin) +
            ")");
    Field c(grid);
    for (std::size_t i = 0; i < grid.nodes(); ++i)
        c[i] = prof.eval((grid.r(i) - params.r0) / params.eps);
    return c;
}

}  // namespace radch
