#include "radch/pressure.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace radch {

namespace {

double p3_closed_form(double r, const ModelParams& p) {
    const int n = p.n_dim;
    return -0.5 * p.rho * p.a * p.a * std::pow(r, 2 - 2 * n) -
           p.nu * p.a * (n - 1) / static_cast<double>(n) * std::pow(r, -n);
}

double p3_gradient(double r, const ModelParams& p) {
    const int n = p.n_dim;
    // -rho u u' + nu Lap u for u = a r^{1-n}
    return p.rho * p.a * p.a * (n - 1) * std::pow(r, 1 - 2 * n) +
           p.nu * p.a * (n - 1) * std::pow(r, -n - 1);
}

}  // namespace

Field pressure_gradient(const Field& c, const ModelParams& params) {
    const RadialGrid& g = c.grid();
    const Field dc = deriv_r(c);
    Field dc2(g);
    for (std::size_t i = 0; i < g.nodes(); ++i) dc2[i] = dc[i] * dc[i];
    const Field ddc2 = deriv_r(dc2);
    Field out(g);
    const int n = params.n_dim;
    for (std::size_t i = 0; i < g.nodes(); ++i) {
        const double r = g.r(i);
        out[i] = -params.eps * (n - 1) / r * dc2[i] - params.eps * ddc2[i] +
                 p3_gradient(r, params);
    }
    return out;
}

PressureDecomposition decompose(const Field& c, const ModelParams& params) {
    const RadialGrid& g = c.grid();
    const std::size_t nn = g.nodes();
    const Field dc = deriv_r(c);
    const int n = params.n_dim;

    Field p2(g);
    for (std::size_t i = 0; i < nn; ++i) p2[i] = -params.eps * dc[i] * dc[i];

    // p1 by cumulative trapezoid from r = M inward, so the gauge constant
    // never crosses the interface.
    Field p1(g);
    std::vector<double> q(nn);
    for (std::size_t i = 0; i < nn; ++i)
        q[i] = params.eps * (n - 1) / g.r(i) * dc[i] * dc[i];  // = -d_r p1
    p1[nn - 1] = 0.0;
    for (std::size_t i = nn - 1; i-- > 0;)
        p1[i] = p1[i + 1] + 0.5 * g.h() * (q[i] + q[i + 1]);

    Field p3(g);
    const double gauge = p3_closed_form(g.r_max(), params);
    for (std::size_t i = 0; i < nn; ++i) p3[i] = p3_closed_form(g.r(i), params) - gauge;

    Field total(g);
    for (std::size_t i = 0; i < nn; ++i) total[i] = p1[i] + p2[i] + p3[i];
    return PressureDecomposition{std::move(p1), std::move(p2), std::move(p3), std::move(total)};
}

JumpMeasurement jump(const PressureDecomposition& dec, double R, double delta_probe, double t) {
    const RadialGrid& g = dec.total.grid();
    const double lo = R - delta_probe, hi = R + delta_probe;
    if (!(lo > g.r_min() && hi < g.r_max()))
        throw std::invalid_argument("jump: probe points [" + std::to_string(lo) + ", " +
                                    std::to_string(hi) + "] leave the open domain");
    JumpMeasurement m;
    m.t = t;
    m.R_probe = R;
    m.delta_probe = delta_probe;
    m.p1 = interpolate(dec.p1, hi) - interpolate(dec.p1, lo);
    m.p2 = interpolate(dec.p2, hi) - interpolate(dec.p2, lo);
    m.p3 = interpolate(dec.p3, hi) - interpolate(dec.p3, lo);
    m.value = interpolate(dec.total, hi) - interpolate(dec.total, lo);
    return m;
}

JumpMeasurement jump_extrapolate(const std::vector<JumpMeasurement>& series,
                                 const std::vector<double>& eps_values) {
    if (series.size() < 3 || series.size() != eps_values.size())
        throw std::invalid_argument(
            "jump_extrapolate: need >= 3 measurements with matching eps list");
    for (std::size_t i = 1; i < eps_values.size(); ++i)
        if (!(eps_values[i] < eps_values[i - 1]))
            throw std::invalid_argument("jump_extrapolate: eps must be strictly decreasing");
    const double ratio = eps_values[0] / eps_values[1];
    for (std::size_t i = 1; i + 1 < eps_values.size(); ++i) {
        const double r = eps_values[i] / eps_values[i + 1];
        if (std::fabs(r - ratio) > 1e-9 * ratio)
            throw std::invalid_argument("jump_extrapolate: eps must decrease geometrically");
    }

    auto tableau = [&](auto&& get) {
        std::vector<double> v(series.size());
        for (std::size_t i = 0; i < series.size(); ++i) v[i] = get(series[i]);
        // Neville-style elimination assuming errors eps^1, eps^2, ...
        double order = 1.0;
        while (v.size() > 1) {
            const double f = std::pow(ratio, order);
            for (std::size_t i = 0; i + 1 < v.size(); ++i)
                v[i] = (f * v[i + 1] - v[i]) / (f - 1.0);
            v.pop_back();
            order += 1.0;
        }
        return v[0];
    };

    // Monotone raw differences mark a clean extrapolation.
    bool clean = true;
    for (std::size_t i = 2; i < series.size(); ++i) {
        const double d1 = series[i - 1].value - series[i - 2].value;
        const double d2 = series[i].value - series[i - 1].value;
        if (d1 * d2 < 0.0) clean = false;
    }

    JumpMeasurement out = series.back();
    out.value = tableau([](const JumpMeasurement& m) { return m.value; });
    out.p1 = tableau([](const JumpMeasurement& m) { return m.p1; });
    out.p2 = tableau([](const JumpMeasurement& m) { return m.p2; });
    out.p3 = tableau([](const JumpMeasurement& m) { return m.p3; });
    out.clean = clean;
    return out;
}

}  // namespace radch
