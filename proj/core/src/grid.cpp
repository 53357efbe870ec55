#include "radch/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace radch {

namespace {

double pow_int(double x, int p) {
    double y = 1.0;
    for (int k = 0; k < p; ++k) y *= x;
    return y;
}

}  // namespace

RadialGrid::RadialGrid(double r_min, double r_max, std::size_t cells, int n_dim)
    : r_min_(r_min), r_max_(r_max), cells_(cells), n_dim_(n_dim) {
    if (!(r_min >= 1.0)) throw std::invalid_argument("RadialGrid: require r_min >= 1");
    if (!(r_max > r_min)) throw std::invalid_argument("RadialGrid: require r_max > r_min");
    if (cells < 8) throw std::invalid_argument("RadialGrid: require cells >= 8");
    if (n_dim != 2 && n_dim != 3) throw std::invalid_argument("RadialGrid: require n_dim in {2,3}");

    h_ = (r_max - r_min) / static_cast<double>(cells);
    const std::size_t nn = cells + 1;
    r_.resize(nn);
    for (std::size_t i = 0; i < nn; ++i)
        r_[i] = r_min + h_ * static_cast<double>(i);
    r_.back() = r_max;

    // Quadrature weights: exact volume of the control cell
    // [max(r_i - h/2, r_min), min(r_i + h/2, r_max)] under r^{n-1} dr.
    // Telescoping makes the weight sum equal (r_max^n - r_min^n)/n exactly.
    const int n = n_dim_;
    auto vol = [&](double a, double b) { return (pow_int(b, n) - pow_int(a, n)) / n; };
    w_.resize(nn);
    w_[0] = vol(r_min, r_min + 0.5 * h_);
    for (std::size_t i = 1; i + 1 < nn; ++i)
        w_[i] = vol(r_[i] - 0.5 * h_, r_[i] + 0.5 * h_);
    w_[nn - 1] = vol(r_max - 0.5 * h_, r_max);

    // Face coefficients of the conservative flux. r_{i+1/2}^{n-1} for n=2;
    // the product r_i r_{i+1} for n=3 (exact on 1, r, r^2, 1/r).
    g_.resize(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        if (n == 2)
            g_[i] = r_[i] + 0.5 * h_;
        else
            g_[i] = r_[i] * r_[i + 1];
    }

    v_.resize(nn);
    for (std::size_t i = 0; i < nn; ++i)
        v_[i] = h_ * pow_int(r_[i], n - 1);
    v_[0] *= 0.5;
    v_[nn - 1] *= 0.5;
}

bool RadialGrid::same_layout(const RadialGrid& other) const {
    return r_min_ == other.r_min_ && r_max_ == other.r_max_ && cells_ == other.cells_ &&
           n_dim_ == other.n_dim_;
}

Field::Field(const RadialGrid& grid, double fill)
    : grid_(&grid), values_(grid.nodes(), fill) {}

Field::Field(const RadialGrid& grid, std::vector<double> values)
    : grid_(&grid), values_(std::move(values)) {
    if (values_.size() != grid.nodes())
        throw std::invalid_argument("Field: value count does not match grid nodes");
}

bool Field::all_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

RadialGrid make_grid(double r_min, double r_max, std::size_t cells, int n_dim) {
    return RadialGrid(r_min, r_max, cells, n_dim);
}

double integrate(const Field& f) {
    const RadialGrid& g = f.grid();
    double s = 0.0;
    for (std::size_t i = 0; i < g.nodes(); ++i) s += g.weight(i) * f[i];
    return s;
}

Field deriv_r(const Field& f) {
    const RadialGrid& g = f.grid();
    const std::size_t n = g.nodes();
    if (n < 3) throw std::invalid_argument("deriv_r: need at least 3 nodes");
    Field d(g);
    const double h = g.h();
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i)
        d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    return d;
}

Field radial_laplacian(const Field& f, BoundaryClosure closure) {
    const RadialGrid& g = f.grid();
    const std::size_t n = g.nodes();
    if (n < 4) throw std::invalid_argument("radial_laplacian: need at least 4 nodes");
    Field out(g);
    const double h = g.h();
    const int nd = g.n_dim();

    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double flux_hi = g.face_coeff(i) * (f[i + 1] - f[i]) / h;
        const double flux_lo = g.face_coeff(i - 1) * (f[i] - f[i - 1]) / h;
        out[i] = (flux_hi - flux_lo) / (h * std::pow(g.r(i), nd - 1));
    }

    switch (closure) {
        case BoundaryClosure::one_sided: {
            // Lap f = f'' + (n-1)/r f' with one-sided second-order stencils.
            auto one_sided_at = [&](std::size_t i, int dir) {
                const double s = static_cast<double>(dir);
                const double f0 = f[i];
                const double f1 = f[i + dir];
                const double f2 = f[i + 2 * dir];
                const double f3 = f[i + 3 * dir];
                const double d1 = s * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
                const double d2 = (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3) / (h * h);
                return d2 + (nd - 1) / g.r(i) * d1;
            };
            out[0] = one_sided_at(0, +1);
            out[n - 1] = one_sided_at(n - 1, -1);
            break;
        }
        case BoundaryClosure::zero_flux: {
            // Zero flux on the outermost face of the half cell at each end.
            const double flux_lo_end = g.face_coeff(0) * (f[1] - f[0]) / h;
            out[0] = flux_lo_end / (0.5 * h * std::pow(g.r(0), nd - 1));
            const double flux_hi_end = g.face_coeff(n - 2) * (f[n - 1] - f[n - 2]) / h;
            out[n - 1] = -flux_hi_end / (0.5 * h * std::pow(g.r(n - 1), nd - 1));
            break;
        }
    }
    return out;
}

double interpolate(const Field& f, double r) {
    const RadialGrid& g = f.grid();
    if (r < g.r_min() || r > g.r_max())
        throw std::invalid_argument("interpolate: radius " + std::to_string(r) +
                                    " outside [" + std::to_string(g.r_min()) + ", " +
                                    std::to_string(g.r_max()) + "]");
    const double x = (r - g.r_min()) / g.h();
    std::size_t i = static_cast<std::size_t>(x);
    if (i >= g.cells()) i = g.cells() - 1;
    const double t = x - static_cast<double>(i);
    return (1.0 - t) * f[i] + t * f[i + 1];
}

}  // namespace radch
