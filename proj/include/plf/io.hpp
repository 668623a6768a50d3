#pragma once

#include <string>

#include <json.hpp>

#include "plf/pipeline.hpp"

namespace plf {

using Json = nlohmann::ordered_json;

// {p, valuation "num/den", digits [..], precision}; zero and
// below-precision values carry a "state" marker instead of digits.
Json padic_to_json(const PadicNumber& x);
PadicNumber padic_from_json(const Json& j);

// {p, coeffs: [padic records], tail: {alpha, beta}?}
Json series_to_json(const PadicSeries& f);
PadicSeries series_from_json(const Json& j);

// {min_poly: [integer coefficients]} ; "Q" shorthand accepted on input
Json field_to_json(const FieldPtr& K);
FieldPtr field_from_json(const Json& j);

// elements as arrays of rational-coordinate strings
Json element_to_json(const AlgebraicNumber& x);
AlgebraicNumber element_from_json(const Json& j, const FieldPtr& K);

// heights as {lower, upper} decimal strings
Json interval_to_json(const Interval& v);

Json valexp_to_json(const ValExp& v);

// model manifest {name, n, N, deriv_polys, addition, delta_L, c_deg}
Json model_to_json(const GroupModel& m);

// instance file: {model: "gm^n", field, beta, gamma, p, precision}
Json instance_to_json(const ProofInstance& inst, long precision);
ProofInstance instance_from_json(const Json& j);
ProofInstance instance_from_file(const std::string& path);

Json verdict_to_json(const GmVerdict& v);

std::string poly_to_string(const KPoly& P, const std::vector<std::string>& var_names);

}  // namespace plf
