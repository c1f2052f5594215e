#ifndef HYDROMIG_BANDED_HPP
#define HYDROMIG_BANDED_HPP

#include <span>
#include <vector>

namespace hydromig {

/// General banded matrix in LAPACK gb storage with room for the dgbsv fill-in
/// rows.  The (p_l, rho_l_h) block-tridiagonal systems use kl = ku = 3.
class BandedMatrix {
public:
    BandedMatrix(int n, int kl, int ku);

    int size() const { return n_; }
    int lower_bandwidth() const { return kl_; }
    int upper_bandwidth() const { return ku_; }

    void set_zero();

    /// Accesses A(i, j); the pair must lie inside the band.
    double& at(int i, int j);
    double at(int i, int j) const;
    bool in_band(int i, int j) const { return j - i <= ku_ && i - j <= kl_; }

    /// Solves A x = b in place via LAPACK dgbsv (partial-pivoting banded LU).
    /// The factorization overwrites the matrix.  Returns false when the
    /// factorization detects exact singularity.
    bool solve(std::span<double> rhs);

    /// Adds mu to every diagonal entry.
    void shift_diagonal(double mu);

private:
    int n_, kl_, ku_, ldab_;
    std::vector<double> ab_;
};

} // namespace hydromig

#endif
