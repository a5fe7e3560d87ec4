#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "qos/arch.hpp"
#include "qos/cone.hpp"
#include "qos/extension.hpp"
#include "qos/norms.hpp"
#include "qos/states.hpp"

namespace qos::io {

using Json = nlohmann::json;

// Complex numbers are [re, im] pairs; vectors are arrays of pairs and
// matrices arrays of rows. Parse errors are SchemaError with a JSON pointer.
Json to_json(Complex z);
Json to_json(const CVec& v);
Json to_json(const CMat& m);
Json to_json(const RVec& v);

Complex parse_complex(const Json& j, const std::string& ptr);
CVec parse_cvec(const Json& j, const std::string& ptr, Eigen::Index size = -1);
CMat parse_cmat(const Json& j, const std::string& ptr, Eigen::Index rows = -1, Eigen::Index cols = -1);
RVec parse_rvec(const Json& j, const std::string& ptr);

/// {"dim", "basis_names", "structure", "involution", "unit"}; {"fixture": name} also accepted.
Json algebra_to_json(const AlgebraPtr& a);
AlgebraPtr parse_algebra(const Json& j, const std::string& ptr = "");

/// {"algebra": <inline object or file path>, "basis": [coordinate vectors]}.
Json system_to_json(const SystemPtr& x);
SystemPtr parse_system(const Json& j, const std::string& ptr = "");

/// Either an array of coordinates or {"coords": [...]}.
CVec parse_element(const Json& j, const std::string& ptr = "");

/// {"system": ..., "values": [f(v_i)]} with v_i the listed basis vectors.
Json functional_to_json(const LinearFunctional& f);
LinearFunctional parse_functional(const Json& j, const std::string& ptr = "");

/// {"domain_system": ..., "target_dim": d, "images": [phi(v_i)]}.
Json map_to_json(const CPMapCandidate& phi);
CPMapCandidate parse_map(const Json& j, const std::string& ptr = "");

Json to_json(const ConeDecision& d);
Json to_json(const SeminormResult& s);
Json to_json(const NullSpaceData& n);
Json to_json(const ArchimedeanizationData& a);
Json to_json(const PositivityResult& p);
Json to_json(const CPResult& c);
Json to_json(const StateExtension& e);
Json to_json(const ExtensionResult& r);
ExtensionResult parse_extension_result(const Json& j, const std::string& ptr = "");

/// Bare names such as ALG_M2 refer to built-in fixtures rather than files.
bool is_fixture_name(const std::string& s);
/// Reads a file; a relative "algebra" path inside it resolves against its directory.
Json load_file(const std::string& path);
void save_file(const std::string& path, const Json& j);

}  // namespace qos::io
