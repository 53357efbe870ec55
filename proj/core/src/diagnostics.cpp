#include "radch/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace radch {

double energy(const Field& c, const ModelParams& params, const Potential& pot) {
    const Field dc = deriv_r(c);
    Field e(c.grid());
    for (std::size_t i = 0; i < c.size(); ++i)
        e[i] = 0.5 * params.eps * dc[i] * dc[i] + pot.f(c[i]) / params.eps;
    return integrate(e);
}

Field discrepancy(const Field& c, const ModelParams& params, const Potential& pot) {
    const Field dc = deriv_r(c);
    Field xi(c.grid());
    for (std::size_t i = 0; i < c.size(); ++i)
        xi[i] = 0.5 * params.eps * dc[i] * dc[i] - pot.f(c[i]) / params.eps;
    return xi;
}

double discrepancy_positive_part(const Field& c, const ModelParams& params,
                                 const Potential& pot) {
    Field xi = discrepancy(c, params, pot);
    for (std::size_t i = 0; i < xi.size(); ++i) xi[i] = std::max(xi[i], 0.0);
    return integrate(xi);
}

double discrepancy_pairing(const Field& c, const Field& phi, const ModelParams& params,
                           const Potential& pot) {
    if (!c.grid().same_layout(phi.grid()))
        throw std::invalid_argument("discrepancy_pairing: grid mismatch");
    Field xi = discrepancy(c, params, pot);
    for (std::size_t i = 0; i < xi.size(); ++i) xi[i] *= phi[i];
    return integrate(xi);
}

double bv_seminorm(const Field& c, const Potential& pot, const ModelParams& params) {
    (void)params;
    const Field dc = deriv_r(c);
    Field w(c.grid());
    for (std::size_t i = 0; i < c.size(); ++i)
        w[i] = std::sqrt(2.0 * pot.f_truncated(c[i])) * std::fabs(dc[i]);
    return integrate(w);
}

double locate_interface(const Field& c) {
    const RadialGrid& g = c.grid();
    std::size_t crossings = 0;
    double radius = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i + 1 < g.nodes(); ++i) {
        const double a = c[i], b = c[i + 1];
        if (a == 0.0 && b == 0.0) continue;
        if (a == 0.0) {
            // counted on the interval whose left node vanishes
            ++crossings;
            radius = g.r(i);
        } else if (a * b < 0.0) {
            ++crossings;
            radius = g.r(i) + g.h() * a / (a - b);
        }
    }
    if (c[g.nodes() - 1] == 0.0) {
        ++crossings;
        radius = g.r_max();
    }
    if (crossings != 1)
        throw std::invalid_argument("locate_interface: expected exactly one sign change, found " +
                                    std::to_string(crossings));
    return radius;
}

DeviationNorms deviation(const Field& c_solver, const Field& c_oracle,
                         const ModelParams& params) {
    if (!c_solver.grid().same_layout(c_oracle.grid()))
        throw std::invalid_argument("deviation: grid mismatch");
    Field d(c_solver.grid());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = c_solver[i] - c_oracle[i];
    Field d2(c_solver.grid());
    for (std::size_t i = 0; i < d.size(); ++i) d2[i] = d[i] * d[i];
    const Field dd = deriv_r(d);
    Field dd2(c_solver.grid());
    for (std::size_t i = 0; i < d.size(); ++i) dd2[i] = dd[i] * dd[i];
    DeviationNorms out;
    out.l2 = std::sqrt(integrate(d2));
    out.h1_weighted = params.eps * integrate(dd2);
    return out;
}

ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 3) throw std::invalid_argument("scaling_fit: need at least 3 pairs");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(pairs.size());
    for (const auto& [eps, val] : pairs) {
        if (!(eps > 0.0 && val > 0.0))
            throw std::invalid_argument("scaling_fit: samples must be positive");
        const double x = std::log(eps), y = std::log(val);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    ScalingFit fit;
    const double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double rss = 0.0;
    for (const auto& [eps, val] : pairs) {
        const double r = std::log(val) - (fit.intercept + fit.slope * std::log(eps));
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / n);
    return fit;
}

double holder_seminorm(const std::vector<std::pair<double, Field>>& trajectory,
                       double exponent) {
    if (trajectory.size() < 3)
        throw std::invalid_argument("holder_seminorm: need at least 3 snapshots");
    double best = 0.0;
    for (std::size_t i = 0; i < trajectory.size(); ++i)
        for (std::size_t j = i + 1; j < trajectory.size(); ++j) {
            const double dt = std::fabs(trajectory[j].first - trajectory[i].first);
            if (dt == 0.0) continue;
            Field d2(trajectory[i].second.grid());
            const Field& a = trajectory[i].second;
            const Field& b = trajectory[j].second;
            for (std::size_t k = 0; k < d2.size(); ++k) {
                const double d = a[k] - b[k];
                d2[k] = d * d;
            }
            best = std::max(best, std::sqrt(integrate(d2)) / std::pow(dt, exponent));
        }
    return best;
}

DiagnosticsRecord diagnostics_record(double t, const Field& c, const ModelParams& params,
                                     const Potential& pot) {
    DiagnosticsRecord rec;
    rec.t = t;
    rec.energy = energy(c, params, pot);
    rec.discrepancy_pos = discrepancy_positive_part(c, params, pot);
    rec.bv_seminorm = bv_seminorm(c, pot, params);
    try {
        rec.interface_radius = locate_interface(c);
    } catch (const std::invalid_argument&) {
        rec.interface_radius = std::numeric_limits<double>::quiet_NaN();
    }
    rec.mass = integrate(c);
    rec.linf_c = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) rec.linf_c = std::max(rec.linf_c, std::fabs(c[i]));
    return rec;
}

}  // namespace radch
