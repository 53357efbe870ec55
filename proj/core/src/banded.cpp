#include "radch/banded.hpp"

#include <cmath>
#include <stdexcept>

namespace radch {

// Storage row for entry (i, j): kl + ku + i - j, shifted so that row
// fill-in from pivoting fits in the top kl rows.
BandedMatrix::BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), rows_(2 * kl + ku + 1), ab_(rows_ * n, 0.0), ipiv_(n, 0) {
    if (n == 0) throw std::invalid_argument("BandedMatrix: empty system");
}

double& BandedMatrix::ref(std::size_t i, std::size_t j) {
    return ab_[(kl_ + ku_ + i - j) * n_ + j];
}

double BandedMatrix::get(std::size_t i, std::size_t j) const {
    return ab_[(kl_ + ku_ + i - j) * n_ + j];
}

double BandedMatrix::at(std::size_t i, std::size_t j) const {
    const std::ptrdiff_t d = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(j);
    if (d > static_cast<std::ptrdiff_t>(kl_) ||
        -d > static_cast<std::ptrdiff_t>(ku_ + (factored_ ? kl_ : 0)))
        return 0.0;
    return get(i, j);
}

void BandedMatrix::set(std::size_t i, std::size_t j, double v) {
    const std::ptrdiff_t d = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(j);
    if (d > static_cast<std::ptrdiff_t>(kl_) || -d > static_cast<std::ptrdiff_t>(ku_))
        throw std::invalid_argument("BandedMatrix::set: entry outside band");
    ref(i, j) = v;
}

void BandedMatrix::add(std::size_t i, std::size_t j, double v) {
    const std::ptrdiff_t d = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(j);
    if (d > static_cast<std::ptrdiff_t>(kl_) || -d > static_cast<std::ptrdiff_t>(ku_))
        throw std::invalid_argument("BandedMatrix::add: entry outside band");
    ref(i, j) += v;
}

void BandedMatrix::factor() {
    if (factored_) throw std::logic_error("BandedMatrix::factor: already factored");
    for (std::size_t j = 0; j < n_; ++j) {
        // pivot search in column j, rows j..j+kl
        const std::size_t ilast = std::min(j + kl_, n_ - 1);
        std::size_t p = j;
        double pmax = std::fabs(get(j, j));
        for (std::size_t i = j + 1; i <= ilast; ++i) {
            const double v = std::fabs(get(i, j));
            if (v > pmax) {
                pmax = v;
                p = i;
            }
        }
        if (pmax == 0.0) throw std::runtime_error("BandedMatrix::factor: singular pivot");
        ipiv_[j] = p;
        const std::size_t jlast = std::min(j + ku_ + kl_, n_ - 1);
        if (p != j)
            for (std::size_t col = j; col <= jlast; ++col) std::swap(ref(j, col), ref(p, col));
        const double d = get(j, j);
        for (std::size_t i = j + 1; i <= ilast; ++i) {
            const double l = get(i, j) / d;
            ref(i, j) = l;
            if (l != 0.0)
                for (std::size_t col = j + 1; col <= jlast; ++col)
                    ref(i, col) -= l * get(j, col);
        }
    }
    factored_ = true;
}

std::vector<double> BandedMatrix::solve(const std::vector<double>& b) const {
    if (!factored_) throw std::logic_error("BandedMatrix::solve: factor() first");
    if (b.size() != n_) throw std::invalid_argument("BandedMatrix::solve: size mismatch");
    std::vector<double> x = b;
    for (std::size_t j = 0; j < n_; ++j) {
        if (ipiv_[j] != j) std::swap(x[j], x[ipiv_[j]]);
        const std::size_t ilast = std::min(j + kl_, n_ - 1);
        for (std::size_t i = j + 1; i <= ilast; ++i) x[i] -= get(i, j) * x[j];
    }
    for (std::size_t jj = n_; jj-- > 0;) {
        double s = x[jj];
        for (std::size_t col = jj + 1; col <= std::min(jj + ku_ + kl_, n_ - 1); ++col)
            s -= get(jj, col) * x[col];
        x[jj] = s / get(jj, jj);
    }
    return x;
}

}  // namespace radch
