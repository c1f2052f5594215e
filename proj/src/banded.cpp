#include "hydromig/banded.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include <lapacke.h>

namespace hydromig {

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1), ab_(static_cast<std::size_t>(ldab_) * n, 0.0)
{
    if (n < 1 || kl < 0 || ku < 0) throw std::invalid_argument("BandedMatrix: bad dimensions");
}

void BandedMatrix::set_zero()
{
    std::fill(ab_.begin(), ab_.end(), 0.0);
}

double& BandedMatrix::at(int i, int j)
{
    assert(i >= 0 && i < n_ && j >= 0 && j < n_ && in_band(i, j));
    return ab_[static_cast<std::size_t>(kl_ + ku_ + i - j) + static_cast<std::size_t>(j) * ldab_];
}

double BandedMatrix::at(int i, int j) const
{
    assert(i >= 0 && i < n_ && j >= 0 && j < n_ && in_band(i, j));
    return ab_[static_cast<std::size_t>(kl_ + ku_ + i - j) + static_cast<std::size_t>(j) * ldab_];
}

bool BandedMatrix::solve(std::span<double> rhs)
{
    assert(static_cast<int>(rhs.size()) == n_);
    std::vector<lapack_int> ipiv(n_);
    const lapack_int info =
        LAPACKE_dgbsv(LAPACK_COL_MAJOR, n_, kl_, ku_, 1, ab_.data(), ldab_, ipiv.data(),
                      rhs.data(), n_);
    if (info < 0) throw std::runtime_error("dgbsv: invalid argument");
    return info == 0;
}

void BandedMatrix::shift_diagonal(double mu)
{
    for (int i = 0; i < n_; ++i)
        ab_[static_cast<std::size_t>(kl_ + ku_) + static_cast<std::size_t>(i) * ldab_] += mu;
}

} // namespace hydromig
