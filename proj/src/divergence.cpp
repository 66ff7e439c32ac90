#include "divtest/divergence.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "divtest/information.hpp"

namespace divtest {

namespace {

void require_same_size(int a, int b, const char* what) {
    if (a != b) {
        throw DimensionMismatch(std::string(what) + ": alphabet sizes " + std::to_string(a) +
                                " and " + std::to_string(b) + " differ");
    }
}

double clamp_nonneg(double v) { return v > 0.0 ? v : 0.0; }

std::string short_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

Divergence Divergence::kl() {
    Divergence d;
    d.kind_ = Kind::KL;
    d.curvature_ = 1.0;
    d.label_ = "kl";
    return d;
}

Divergence Divergence::chi_squared() {
    Divergence d;
    d.kind_ = Kind::Chi2;
    d.curvature_ = 2.0;
    d.label_ = "chi2";
    return d;
}

Divergence Divergence::renyi(double order) {
    if (!(order > 0.0) || order == 1.0) {
        throw DomainError("renyi: order must be positive and != 1, got " +
                          std::to_string(order));
    }
    Divergence d;
    d.kind_ = Kind::Renyi;
    d.order_ = order;
    d.label_ = "renyi_" + short_number(order);
    return d;
}

Divergence Divergence::alpha_family(double order) {
    if (order == 1.0 || order == -1.0) {
        throw DomainError("alpha_family: order must differ from +1 and -1");
    }
    Divergence d;
    d.kind_ = Kind::Alpha;
    d.order_ = order;
    d.curvature_ = 1.0;
    d.label_ = "alpha_" + short_number(order);
    return d;
}

Divergence Divergence::f_divergence(std::function<double(double)> f, double curvature,
                                    std::string label, std::optional<double> boundary_f0) {
    if (!f) throw DomainError("f_divergence: generator must be callable");
    Divergence d;
    d.kind_ = Kind::FGeneric;
    d.f_ = std::move(f);
    d.curvature_ = curvature;
    d.f0_ = boundary_f0;
    d.label_ = std::move(label);
    return d;
}

Divergence Divergence::mahalanobis_default() {
    Divergence d;
    d.kind_ = Kind::MahalanobisDefault;
    d.label_ = "mahalanobis_default";
    return d;
}

Divergence Divergence::mahalanobis(Eigen::MatrixXd weight) {
    require_symmetric(weight, 1e-10, "mahalanobis");
    require_positive_definite(weight, "mahalanobis");
    Divergence d;
    d.kind_ = Kind::MahalanobisFixed;
    d.weight_ = std::move(weight);
    d.label_ = "mahalanobis_custom";
    return d;
}

Divergence Divergence::bregman_quadratic(Eigen::MatrixXd weight) {
    Divergence d = mahalanobis(std::move(weight));
    d.label_ = "bregman_quadratic";
    return d;
}

bool Divergence::supports_boundary() const {
    switch (kind_) {
        case Kind::KL:
        case Kind::Chi2:
        case Kind::Renyi:
        case Kind::MahalanobisDefault:
        case Kind::MahalanobisFixed:
            return true;
        case Kind::Alpha:
            // Exponent (1-order)/2 must be positive for f(0) to stay finite.
            return order_ < 1.0;
        case Kind::FGeneric:
            return f0_.has_value();
    }
    return false;
}

bool Divergence::has_analytic_hessian() const {
    if (kind_ == Kind::FGeneric) return std::isfinite(curvature_);
    return true;
}

namespace {

// Quadratic form in the coordinate chart; t and r are full k-vectors.
double quad_form_value(const Eigen::MatrixXd& w, const double* t, const Distribution& r) {
    int d = r.size() - 1;
    if (w.rows() != d) {
        throw DimensionMismatch("mahalanobis weight is " + std::to_string(w.rows()) +
                                "x" + std::to_string(w.cols()) + " but alphabet needs " +
                                std::to_string(d));
    }
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i) x[i] = t[i] - r[i];
    return x.dot(w * x);
}

}  // namespace

double Divergence::eval_frequencies(const double* t, const Distribution& r,
                                    bool boundary) const {
    int k = r.size();
    switch (kind_) {
        case Kind::KL: {
            double s = 0.0;
            for (int i = 0; i < k; ++i) {
                if (t[i] == 0.0) continue;  // 0*ln 0 = 0
                s += t[i] * std::log(t[i] / r[i]);
            }
            return clamp_nonneg(s);
        }
        case Kind::Chi2: {
            double s = 0.0;
            for (int i = 0; i < k; ++i) {
                double d = t[i] - r[i];
                s += d * d / r[i];
            }
            return s;
        }
        case Kind::Renyi: {
            double s = 0.0;
            for (int i = 0; i < k; ++i) {
                if (t[i] == 0.0) continue;
                s += std::exp(order_ * std::log(t[i]) + (1.0 - order_) * std::log(r[i]));
            }
            return clamp_nonneg(std::log(s) / (order_ - 1.0));
        }
        case Kind::Alpha: {
            double e = 0.5 * (1.0 - order_);
            double scale = 4.0 / (1.0 - order_ * order_);
            double s = 0.0;
            for (int i = 0; i < k; ++i) {
                double u = t[i] / r[i];
                double fu;
                if (u == 0.0) {
                    if (!(e > 0.0)) {
                        throw BoundaryEvaluation(label_ +
                                                 " cannot evaluate a zero entry (order > 1)");
                    }
                    fu = 0.0;
                } else {
                    fu = scale * (u - std::pow(u, e));
                }
                s += r[i] * fu;
            }
            return clamp_nonneg(s);
        }
        case Kind::FGeneric: {
            double s = 0.0;
            for (int i = 0; i < k; ++i) {
                double u = t[i] / r[i];
                double fu;
                if (u == 0.0 && boundary) {
                    if (!f0_) {
                        throw BoundaryEvaluation(label_ + " has no boundary value for f(0)");
                    }
                    fu = *f0_;
                } else {
                    fu = f_(u);
                }
                s += r[i] * fu;
            }
            return s;
        }
        case Kind::MahalanobisDefault: {
            return quad_form_value(mahalanobis_weight_default(r).value, t, r);
        }
        case Kind::MahalanobisFixed: {
            return quad_form_value(*weight_, t, r);
        }
    }
    throw DomainError("unreachable divergence kind");
}

double Divergence::operator()(const Distribution& t, const Distribution& r) const {
    require_same_size(t.size(), r.size(), "evaluate");
    return eval_frequencies(t.probs().data(), r, false);
}

double Divergence::operator()(const TypeDistribution& t, const Distribution& r) const {
    require_same_size(t.size(), r.size(), "evaluate");
    if (!supports_boundary()) {
        for (int i = 0; i < t.size(); ++i) {
            if (t.count(i) == 0) {
                throw BoundaryEvaluation(label_ + " cannot evaluate boundary types");
            }
        }
    }
    std::vector<double> f = t.frequencies();
    return eval_frequencies(f.data(), r, true);
}

double evaluate(const Divergence& d, const Distribution& t, const Distribution& r) {
    return d(t, r);
}

double evaluate(const Divergence& d, const TypeDistribution& t, const Distribution& r) {
    return d(t, r);
}

RoleMatrix mahalanobis_weight_default(const Distribution& p) {
    int d = p.size() - 1;
    double last = p[d];
    double off = 1.0 / (2.0 * last * last);
    Eigen::MatrixXd w = Eigen::MatrixXd::Constant(d, d, off);
    for (int i = 0; i < d; ++i) w(i, i) += 1.0 / (2.0 * p[i] * p[i]);
    return RoleMatrix{std::move(w), MatrixRole::Weight};
}

RoleMatrix hessian_matrix(const Divergence& d, const Distribution& p) {
    Eigen::MatrixXd a;
    switch (d.kind()) {
        case Divergence::Kind::KL:
            a = 0.5 * fisher_matrix(p).value;
            break;
        case Divergence::Kind::Chi2:
            a = fisher_matrix(p).value;
            break;
        case Divergence::Kind::Renyi:
            a = (0.5 * d.order()) * fisher_matrix(p).value;
            break;
        case Divergence::Kind::Alpha:
            a = 0.5 * fisher_matrix(p).value;
            break;
        case Divergence::Kind::FGeneric:
            if (!d.has_analytic_hessian()) {
                return numeric_hessian(d, p, 1e-4);
            }
            // f-divergence curvature: A = (f''(1)/2) * Sigma.
            a = (0.5 * d.f_curvature()) * fisher_matrix(p).value;
            break;
        case Divergence::Kind::MahalanobisDefault:
            a = mahalanobis_weight_default(p).value;
            break;
        case Divergence::Kind::MahalanobisFixed:
            a = *d.fixed_weight();
            break;
    }
    require_symmetric(a, 1e-10, "hessian_matrix");
    require_positive_definite(a, "hessian_matrix");
    return RoleMatrix{std::move(a), MatrixRole::Hessian};
}

RoleMatrix numeric_hessian(const Divergence& d, const Distribution& p, double step) {
    if (!(step > 0.0)) throw DomainError("numeric_hessian: step must be positive");
    if (step >= p.min_entry() / 4.0) {
        std::ostringstream os;
        os << "numeric_hessian: step " << step << " leaves the interior (min entry "
           << p.min_entry() << ")";
        throw StepTooLarge(os.str());
    }
    int dim = p.size() - 1;
    auto probe = [&](int i, double di, int j, double dj) {
        std::vector<double> v = p.probs();
        v[static_cast<std::size_t>(i)] += di;
        if (j >= 0) v[static_cast<std::size_t>(j)] += dj;
        double s = 0.0;
        for (int t = 0; t < dim; ++t) s += v[static_cast<std::size_t>(t)];
        v[static_cast<std::size_t>(dim)] = 1.0 - s;
        return d(Distribution(v), p);
    };
    double h2 = step * step;
    Eigen::MatrixXd hess(dim, dim);
    for (int i = 0; i < dim; ++i) {
        // D(P||P) = 0, so the diagonal stencil loses its center term.
        hess(i, i) = (probe(i, step, -1, 0.0) + probe(i, -step, -1, 0.0)) / h2;
        for (int j = i + 1; j < dim; ++j) {
            double v = (probe(i, step, j, step) - probe(i, step, j, -step) -
                        probe(i, -step, j, step) + probe(i, -step, j, -step)) /
                       (4.0 * h2);
            hess(i, j) = v;
            hess(j, i) = v;
        }
    }
    Eigen::MatrixXd a = 0.25 * (hess + hess.transpose());  // x0.5 for A, x0.5 symmetrize
    return RoleMatrix{std::move(a), MatrixRole::Hessian};
}

InvarianceReport classify_invariance(const Divergence& d, const Distribution& p, double tol) {
    if (!(tol > 0.0)) throw DomainError("classify_invariance: tol must be positive");
    Eigen::MatrixXd a = hessian_matrix(d, p).value;
    Eigen::MatrixXd sigma = fisher_matrix(p).value;
    double eta = (a.cwiseProduct(sigma)).sum() / (sigma.cwiseProduct(sigma)).sum();
    double dev = (a - eta * sigma).cwiseAbs().maxCoeff() / a.cwiseAbs().maxCoeff();
    bool invariant = (eta > 0.0) && (dev <= tol);
    return InvarianceReport{invariant, eta, dev};
}

TaylorExpansion taylor_kl_expansion(const Distribution& t, const Distribution& p,
                                    const Distribution& q) {
    require_same_size(t.size(), p.size(), "taylor_kl_expansion");
    require_same_size(p.size(), q.size(), "taylor_kl_expansion");
    double approx = kl_divergence(p, q);
    for (int i = 0; i < p.size(); ++i) {
        approx += (t[i] - p[i]) * std::log(p[i] / q[i]);
    }
    approx += 0.5 * chi_square_distance(t, p);
    double residual = kl_divergence(t, q) - approx;
    return TaylorExpansion{approx, residual};
}

}  // namespace divtest
