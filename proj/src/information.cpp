#include "divtest/information.hpp"

#include <cmath>

namespace divtest {

namespace {

void require_same_alphabet(int a, int b, const char* what) {
    if (a != b) {
        throw DimensionMismatch(std::string(what) + ": alphabet sizes " +
                                std::to_string(a) + " and " + std::to_string(b) + " differ");
    }
}

}  // namespace

RoleMatrix fisher_matrix(const Distribution& p) {
    int d = p.size() - 1;
    double inv_last = 1.0 / p[d];
    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(d, d, inv_last);
    for (int i = 0; i < d; ++i) m(i, i) += 1.0 / p[i];
    return RoleMatrix{std::move(m), MatrixRole::Fisher};
}

RoleMatrix fisher_inverse(const Distribution& p) {
    int d = p.size() - 1;
    Eigen::MatrixXd m(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            m(i, j) = (i == j) ? p[i] * (1.0 - p[i]) : -p[i] * p[j];
        }
    }
    return RoleMatrix{std::move(m), MatrixRole::FisherInverse};
}

double kl_divergence(const Distribution& t, const Distribution& q) {
    require_same_alphabet(t.size(), q.size(), "kl_divergence");
    double sum = 0.0;
    for (int i = 0; i < t.size(); ++i) {
        sum += t[i] * std::log(t[i] / q[i]);
    }
    return std::max(sum, 0.0);
}

double kl_divergence(const TypeDistribution& t, const Distribution& q) {
    require_same_alphabet(t.size(), q.size(), "kl_divergence");
    double sum = 0.0;
    double n = static_cast<double>(t.n());
    for (int i = 0; i < t.size(); ++i) {
        if (t.count(i) == 0) continue;  // 0*ln 0 = 0
        double f = static_cast<double>(t.count(i)) / n;
        sum += f * std::log(f / q[i]);
    }
    return std::max(sum, 0.0);
}

double kl_variance(const Distribution& p, const Distribution& q) {
    require_same_alphabet(p.size(), q.size(), "kl_variance");
    double mean = kl_divergence(p, q);
    double var = 0.0;
    for (int i = 0; i < p.size(); ++i) {
        double r = std::log(p[i] / q[i]) - mean;
        var += p[i] * r * r;
    }
    return var;
}

Eigen::VectorXd tilt_vector(const Distribution& p, const Distribution& q) {
    require_same_alphabet(p.size(), q.size(), "tilt_vector");
    int d = p.size() - 1;
    double last = std::log(p[d] / q[d]);
    Eigen::VectorXd c(d);
    for (int i = 0; i < d; ++i) c[i] = std::log(p[i] / q[i]) - last;
    return c;
}

double chi_square_distance(const Distribution& t, const Distribution& p) {
    require_same_alphabet(t.size(), p.size(), "chi_square_distance");
    double sum = 0.0;
    for (int i = 0; i < t.size(); ++i) {
        double d = t[i] - p[i];
        sum += d * d / p[i];
    }
    return sum;
}

}  // namespace divtest
