#pragma once

#include <json.hpp>
#include <string>

#include "divtest/asymptotics.hpp"
#include "divtest/kkt.hpp"
#include "divtest/distribution.hpp"
#include "divtest/divergence.hpp"

namespace divtest {

// Insertion-ordered so emitted documents are byte-stable across runs.
using Json = nlohmann::ordered_json;

Json distribution_to_json(const Distribution& p);
Distribution distribution_from_json(const Json& j);

Json vector_to_json(const Eigen::VectorXd& v);
Json matrix_to_json(const Eigen::MatrixXd& m);

// Token grammar: kl | chi2 | renyi:<order> | alpha:<order> | sm.
// '_' and '=' work as separators too; "mahalanobis_default" is an alias for sm.
Divergence divergence_from_string(const std::string& token);

Json report_to_json(const SecondOrderReport& r);

// Certificate for an exact finite-n acceptance region: the constrained
// minimizer, its objective value, and the feasibility bounds that were checked.
Json kkt_to_json(const KKTSolution& s);

}  // namespace divtest
