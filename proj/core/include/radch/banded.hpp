// banded.hpp
// Direct banded LU with partial pivoting (LAPACK-style band storage).
// The semi-implicit step produces a fixed-bandwidth system, so factor once
// and reuse across steps.

#pragma once

#include <cstddef>
#include <vector>

namespace radch {

class BandedMatrix {
  public:
    BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku);

    std::size_t size() const { return n_; }
    std::size_t lower() const { return kl_; }
    std::size_t upper() const { return ku_; }

    // Valid for |i - j| within the band; anything else is silently zero on
    // read and must not be written.
    double at(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, double v);
    void add(std::size_t i, std::size_t j, double v);

    // Factor in place; throws std::runtime_error on a singular pivot.
    void factor();
    // Solve A x = b using the stored factorization.
    std::vector<double> solve(const std::vector<double>& b) const;

    bool factored() const { return factored_; }

  private:
    double& ref(std::size_t i, std::size_t j);
    double get(std::size_t i, std::size_t j) const;

    std::size_t n_, kl_, ku_, rows_;
    std::vector<double> ab_;        // (2 kl + ku + 1) x n, column-major bands
    std::vector<std::size_t> ipiv_;
    bool factored_ = false;
};

}  // namespace radch
