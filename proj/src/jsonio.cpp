#include "divtest/jsonio.hpp"

#include <cstdlib>

#include "divtest/errors.hpp"

namespace divtest {

Json distribution_to_json(const Distribution& p) {
    Json arr = Json::array();
    for (int i = 0; i < p.size(); ++i) arr.push_back(p[i]);
    return arr;
}

Distribution distribution_from_json(const Json& j) {
    if (!j.is_array()) throw ConfigError("distribution_from_json: expected an array");
    std::vector<double> v;
    for (const auto& e : j) {
        if (!e.is_number()) throw ConfigError("distribution_from_json: non-numeric entry");
        v.push_back(e.get<double>());
    }
    return make_distribution(v);
}

Json vector_to_json(const Eigen::VectorXd& v) {
    Json arr = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

Divergence divergence_from_string(const std::string& token) {
    std::string head = token;
    std::string param;
    auto sep = token.find_first_of(":=_");
    // "mahalanobis_default" carries a '_' that is not a parameter separator.
    if (sep != std::string::npos && token != "mahalanobis_default") {
        head = token.substr(0, sep);
        param = token.substr(sep + 1);
    }
    auto need_param = [&](const char* fam) {
        if (param.empty()) {
            throw ConfigError(std::string(fam) + " divergence needs an order, e.g. " + fam +
                              ":2");
        }
        char* end = nullptr;
        double v = std::strtod(param.c_str(), &end);
        if (end == param.c_str() || *end != '\0') {
            throw ConfigError("cannot parse divergence order '" + param + "'");
        }
        return v;
    };
    if (head == "kl") return Divergence::kl();
    if (head == "chi2") return Divergence::chi_squared();
    if (head == "renyi") return Divergence::renyi(need_param("renyi"));
    if (head == "alpha") return Divergence::alpha_family(need_param("alpha"));
    if (token == "sm" || token == "mahalanobis" || token == "mahalanobis_default") {
        return Divergence::mahalanobis_default();
    }
    throw ConfigError("unknown divergence '" + token +
                      "' (expected kl | chi2 | renyi:<order> | alpha:<order> | sm)");
}

Json report_to_json(const SecondOrderReport& r) {
    Json j;
    j["test"] = test_kind_name(r.kind);
    j["divergence"] = r.divergence;
    j["eps"] = r.eps;
    j["beta_first"] = r.beta_first;
    j["beta_second"] = r.beta_second;
    j["kl_variance"] = r.kl_variance;
    j["quad_form"] = r.quad_form;
    j["lambda"] = r.lambda;
    j["tilt"] = vector_to_json(r.tilt);
    if (r.hessian.rows() > 0) j["hessian"] = matrix_to_json(r.hessian);
    return j;
}

Json kkt_to_json(const KKTSolution& s) {
    Json j;
    j["gamma_star"] = distribution_to_json(s.gamma_star);
    j["x_star"] = vector_to_json(s.x_star);
    j["ell_value"] = s.ell_value;
    j["radius"] = s.radius;
    j["multiplier"] = s.multiplier;
    j["quad_form"] = s.quad_form;
    j["psi"] = s.psi;
    j["tau"] = s.tau;
    j["max_radius"] = s.max_radius;
    return j;
}

}  // namespace divtest
