// grid.hpp
// Uniform radial mesh on [r_min, r_max] with the measure r^{n-1} dr baked
// into the quadrature weights, plus the discrete radial operators.

#pragma once

#include <cstddef>
#include <vector>

namespace radch {

enum class BoundaryClosure {
    one_sided,  // second-order one-sided stencils at r_min and r_max
    zero_flux,  // r^{n-1} du/dr = 0 at the faces adjacent to the boundary
};

// Immutable after construction; safe to share between threads.
class RadialGrid {
  public:
    RadialGrid(double r_min, double r_max, std::size_t cells, int n_dim);

    double r_min() const { return r_min_; }
    double r_max() const { return r_max_; }
    std::size_t cells() const { return cells_; }
    std::size_t nodes() const { return cells_ + 1; }
    int n_dim() const { return n_dim_; }
    double h() const { return h_; }

    double r(std::size_t i) const { return r_[i]; }
    const std::vector<double>& nodes_r() const { return r_; }

    // Weights of the node-based quadrature for integrals against r^{n-1} dr.
    // Sum equals (r_max^n - r_min^n)/n exactly (telescoping cell volumes).
    double weight(std::size_t i) const { return w_[i]; }
    const std::vector<double>& weights() const { return w_; }

    // Coefficient of the conservative flux r^{n-1} du/dr at face i+1/2.
    // Chosen so the radial Laplacian is exact on {1, r, r^2} and, for n=3,
    // on the harmonic function 1/r.
    double face_coeff(std::size_t i) const { return g_[i]; }

    // Control volume of node i used by the conservative operators (h r_i^{n-1},
    // halved at the endpoints).
    double node_volume(std::size_t i) const { return v_[i]; }

    bool same_layout(const RadialGrid& other) const;

  private:
    double r_min_, r_max_, h_;
    std::size_t cells_;
    int n_dim_;
    std::vector<double> r_, w_, g_, v_;
};

// Nodal samples on a RadialGrid. The grid must outlive the field.
class Field {
  public:
    explicit Field(const RadialGrid& grid, double fill = 0.0);
    Field(const RadialGrid& grid, std::vector<double> values);

    const RadialGrid& grid() const { return *grid_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    const std::vector<double>& values() const { return values_; }

    bool all_finite() const;

  private:
    const RadialGrid* grid_;
    std::vector<double> values_;
};

RadialGrid make_grid(double r_min, double r_max, std::size_t cells, int n_dim);

// Second-order quadrature of \int f r^{n-1} dr over the whole grid.
double integrate(const Field& f);

// Second-order first derivative: central in the interior, one-sided at the ends.
Field deriv_r(const Field& f);

// Conservative discretization of r^{1-n} d/dr (r^{n-1} df/dr).
Field radial_laplacian(const Field& f, BoundaryClosure closure = BoundaryClosure::one_sided);

// Linear interpolation of nodal values at an arbitrary radius in [r_min, r_max].
double interpolate(const Field& f, double r);

}  // namespace radch
