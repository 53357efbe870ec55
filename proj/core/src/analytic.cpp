#include "radch/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace radch {

double velocity(double r, const ModelParams& params) {
    if (!(r >= 1.0)) throw std::invalid_argument("velocity: require r >= 1");
    return params.a * std::pow(r, 1 - params.n_dim);
}

InterfaceState interface_state(double t, const ModelParams& params) {
    if (!(t >= 0.0)) throw std::invalid_argument("interface_state: require t >= 0");
    const int n = params.n_dim;
    const double R = std::pow(std::pow(params.r0, n) + n * params.a * t, 1.0 / n);
    InterfaceState s;
    s.t = t;
    s.R = R;
    s.H = (n - 1) / R;
    s.kappa = std::pow(R / params.r0, 2 * n - 2);
    return s;
}

double transport_solution(double r, double t, const ModelParams& params, const Profile& prof) {
    const int n = params.n_dim;
    const double rn = std::pow(r, n);
    const double ant = params.a * n * t;
    if (rn < ant) return 1.0;
    const double y = std::pow(rn - ant, 1.0 / n);
    return prof.eval((y - params.r0) / params.eps);
}

double transport_solution_deriv(double r, double t, const ModelParams& params,
                                const Profile& prof) {
    const int n = params.n_dim;
    const double rn = std::pow(r, n);
    const double ant = params.a * n * t;
    if (rn <= ant) return 0.0;
    const double y = std::pow(rn - ant, 1.0 / n);
    const double tp = prof.deriv((y - params.r0) / params.eps);
    if (tp == 0.0) return 0.0;
    // chain rule: dy/dr = (r/y)^{n-1}; theta' <= 0 makes this non-positive
    return tp / params.eps * std::pow(r / y, n - 1);
}

Field transport_solution_field(const RadialGrid& grid, double t, const ModelParams& params,
                               const Profile& prof) {
    Field c(grid);
    for (std::size_t i = 0; i < grid.nodes(); ++i)
        c[i] = transport_solution(grid.r(i), t, params, prof);
    return c;
}

double limit_jump(double t, const ModelParams& params, const Profile& prof) {
    const InterfaceState s = interface_state(t, params);
    return prof.sigma_profile() * s.kappa * s.H;
}

double young_laplace_jump(double t, const ModelParams& params, double sigma) {
    const InterfaceState s = interface_state(t, params);
    return sigma * s.H;
}

double xi_limit_amplitude(double t, const ModelParams& params, const Profile& prof) {
    const InterfaceState s = interface_state(t, params);
    return prof.sigma_profile() * s.kappa - prof.sigma_tilde();
}

double sphere_area_factor(int n_dim) {
    constexpr double pi = 3.14159265358979323846;
    if (n_dim == 2) return 2.0 * pi;
    if (n_dim == 3) return 4.0 * pi;
    throw std::invalid_argument("sphere_area_factor: n_dim must be 2 or 3");
}

}  // namespace radch
