#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "divtest/errors.hpp"

namespace divtest {

// Strictly positive probability vector on a finite alphabet of size k >= 2.
// Entries must sum to 1 within 1e-12 after construction; inputs whose sum
// deviates by at most 1e-9 are renormalized, anything further off is rejected.
class Distribution {
public:
    static constexpr double kSumSlack = 1e-9;        // renormalize below this
    static constexpr double kSumTolerance = 1e-12;   // invariant after construction

    explicit Distribution(std::vector<double> probs);

    int size() const { return static_cast<int>(p_.size()); }
    double operator[](int i) const { return p_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& probs() const { return p_; }

    // First k-1 components; the k-th entry is always 1 - sum of these.
    Eigen::VectorXd coords() const;

    double min_entry() const;

    bool operator==(const Distribution& other) const { return p_ == other.p_; }

private:
    std::vector<double> p_;
};

Distribution make_distribution(const std::vector<double>& values);

// Empirical counts of a length-n sample. Zero counts are allowed, so a
// TypeDistribution may sit on the boundary of the simplex.
class TypeDistribution {
public:
    TypeDistribution(std::vector<std::int64_t> counts);

    int size() const { return static_cast<int>(counts_.size()); }
    std::int64_t n() const { return n_; }
    std::int64_t count(int i) const { return counts_[static_cast<std::size_t>(i)]; }
    const std::vector<std::int64_t>& counts() const { return counts_; }

    double freq(int i) const {
        return static_cast<double>(counts_[static_cast<std::size_t>(i)]) /
               static_cast<double>(n_);
    }
    std::vector<double> frequencies() const;

    bool operator==(const TypeDistribution& other) const { return counts_ == other.counts_; }

private:
    std::vector<std::int64_t> counts_;
    std::int64_t n_;
};

enum class MatrixRole { Fisher, FisherInverse, Hessian, Weight };

// Dense (k-1)x(k-1) matrix with a role tag. Symmetry is enforced at 1e-10
// relative; Hessian and Weight roles additionally require positive
// definiteness (checked by Cholesky).
struct RoleMatrix {
    Eigen::MatrixXd value;
    MatrixRole role;
};

RoleMatrix make_matrix(Eigen::MatrixXd value, MatrixRole role);

// Validation helpers shared by several modules.
void require_symmetric(const Eigen::MatrixXd& m, double tol, const char* what);
void require_positive_definite(const Eigen::MatrixXd& m, const char* what);

}  // namespace divtest
