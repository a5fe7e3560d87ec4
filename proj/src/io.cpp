#include "qos/io.hpp"

#include <filesystem>
#include <fstream>

#include "qos/linalg.hpp"

namespace qos::io {

namespace {

[[noreturn]] void fail(const std::string& ptr, const std::string& what) {
  throw QosError(ErrorKind::SchemaError, (ptr.empty() ? std::string("/") : ptr) + ": " + what);
}

const Json& field(const Json& j, const std::string& key, const std::string& ptr) {
  if (!j.is_object()) fail(ptr, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(ptr + "/" + key, "missing field");
  return *it;
}

const Json& array(const Json& j, const std::string& ptr, Eigen::Index size = -1) {
  if (!j.is_array()) fail(ptr, "expected an array");
  if (size >= 0 && static_cast<Eigen::Index>(j.size()) != size)
    fail(ptr, "expected " + std::to_string(size) + " entries, found " + std::to_string(j.size()));
  return j;
}

std::string at(const std::string& ptr, size_t i) { return ptr + "/" + std::to_string(i); }

sdp::Status parse_status(const Json& j, const std::string& ptr) {
  if (!j.is_string()) fail(ptr, "expected a status string");
  for (auto s : {sdp::Status::Feasible, sdp::Status::Infeasible, sdp::Status::Indeterminate, sdp::Status::Unbounded})
    if (j.get<std::string>() == sdp::to_string(s)) return s;
  fail(ptr, "unknown status " + j.get<std::string>());
}

double parse_real(const Json& j, const std::string& ptr) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  fail(ptr, "expected a number");
}

// coefficients on the orthonormal basis of x from values on the listed vectors
CMat transfer(const SystemPtr& x, const CMat& listed, const CMat& values, const std::string& ptr) {
  CMat c = x->basis.adjoint() * listed;  // listed = basis * c
  if ((x->basis * c - listed).norm() > 1e-9 * std::max(1.0, listed.norm())) fail(ptr, "basis vector outside the system");
  if (orthonormal_basis(c).cols() != x->dim()) fail(ptr, "listed basis does not span the system (include the unit)");
  // values = c^T coeffs
  CMat ct = c.transpose();
  CMat coeffs = ct.completeOrthogonalDecomposition().solve(values);
  if ((ct * coeffs - values).norm() > 1e-9 * std::max(1.0, values.norm()))
    fail(ptr, "values are inconsistent with linear dependencies among the basis vectors");
  return coeffs;
}

CMat listed_basis(const Json& j, const AlgebraPtr& a, const std::string& ptr) {
  const Json& b = array(field(j, "basis", ptr), ptr + "/basis");
  CMat v(a->dim(), static_cast<Eigen::Index>(b.size()));
  for (size_t i = 0; i < b.size(); ++i) v.col(static_cast<Eigen::Index>(i)) = parse_cvec(b[i], at(ptr + "/basis", i), a->dim());
  return v;
}

Json certificate_json(const ConeCertificate& c) {
  return {{"gram", to_json(c.gram)}, {"residual", c.residual}, {"min_eig", c.min_eig}};
}

Json dual_json(const DualCertificate& d) {
  return {{"gamma", to_json(d.gamma)}, {"value", d.value}, {"moment_min_eig", d.moment_min_eig}, {"strict", d.strict}};
}

}  // namespace

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const CVec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

Json to_json(const CMat& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(CVec(m.row(i).transpose())));
  return out;
}

Json to_json(const RVec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Complex parse_complex(const Json& j, const std::string& ptr) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) fail(ptr, "expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

CVec parse_cvec(const Json& j, const std::string& ptr, Eigen::Index size) {
  array(j, ptr, size);
  CVec v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_complex(j[i], at(ptr, i));
  return v;
}

CMat parse_cmat(const Json& j, const std::string& ptr, Eigen::Index rows, Eigen::Index cols) {
  array(j, ptr, rows);
  if (j.empty()) return CMat(0, std::max<Eigen::Index>(cols, 0));
  const auto c = cols >= 0 ? cols : static_cast<Eigen::Index>(array(j[0], at(ptr, 0)).size());
  CMat m(static_cast<Eigen::Index>(j.size()), c);
  for (size_t i = 0; i < j.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = parse_cvec(j[i], at(ptr, i), c).transpose();
  return m;
}

RVec parse_rvec(const Json& j, const std::string& ptr) {
  array(j, ptr);
  RVec v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_real(j[i], at(ptr, i));
  return v;
}

Json algebra_to_json(const AlgebraPtr& a) {
  const Eigen::Index m = a->dim();
  Json s = Json::array();
  for (Eigen::Index i = 0; i < m; ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m; ++j) row.push_back(to_json(CVec(a->left(i).col(j))));
    s.push_back(row);
  }
  return {{"dim", m},
          {"basis_names", a->names()},
          {"structure", s},
          {"involution", to_json(a->involution())},
          {"unit", to_json(a->unit())}};
}

AlgebraPtr parse_algebra(const Json& j, const std::string& ptr) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (is_fixture_name(name)) return fixtures::by_name(name);
    return parse_algebra(load_file(name), "");
  }
  if (j.is_object() && j.contains("fixture")) {
    if (!j["fixture"].is_string()) fail(ptr + "/fixture", "expected a fixture name");
    return fixtures::by_name(j["fixture"].get<std::string>());
  }
  const Json& dj = field(j, "dim", ptr);
  if (!dj.is_number_integer() || dj.get<long>() < 1) fail(ptr + "/dim", "expected a positive integer");
  const auto m = static_cast<Eigen::Index>(dj.get<long>());
  std::vector<std::string> names;
  if (j.contains("basis_names")) {
    const Json& nj = array(j["basis_names"], ptr + "/basis_names", m);
    for (size_t i = 0; i < nj.size(); ++i) {
      if (!nj[i].is_string()) fail(at(ptr + "/basis_names", i), "expected a string");
      names.push_back(nj[i].get<std::string>());
    }
  } else {
    for (Eigen::Index i = 0; i < m; ++i) names.push_back("b" + std::to_string(i));
  }
  const std::string sp = ptr + "/structure";
  const Json& sj = array(field(j, "structure", ptr), sp, m);
  std::vector<std::vector<CVec>> structure(static_cast<size_t>(m));
  for (size_t i = 0; i < sj.size(); ++i) {
    array(sj[i], at(sp, i), m);
    for (size_t k = 0; k < sj[i].size(); ++k) structure[i].push_back(parse_cvec(sj[i][k], at(at(sp, i), k), m));
  }
  CMat inv = parse_cmat(field(j, "involution", ptr), ptr + "/involution", m, m);
  CVec unit = parse_cvec(field(j, "unit", ptr), ptr + "/unit", m);
  return StarAlgebra::from_structure(structure, inv, unit, names);
}

Json system_to_json(const SystemPtr& x) {
  Json basis = Json::array();
  for (Eigen::Index k = 0; k < x->dim(); ++k) basis.push_back(to_json(CVec(x->basis.col(k))));
  return {{"algebra", algebra_to_json(x->ambient)}, {"basis", basis}};
}

SystemPtr parse_system(const Json& j, const std::string& ptr) {
  if (j.is_string()) return parse_system(load_file(j.get<std::string>()), "");
  AlgebraPtr a = parse_algebra(field(j, "algebra", ptr), ptr + "/algebra");
  if (!j.contains("basis")) return whole_algebra(a);
  return build_system(a, listed_basis(j, a, ptr));
}

CVec parse_element(const Json& j, const std::string& ptr) {
  if (j.is_object()) return parse_cvec(field(j, "coords", ptr), ptr + "/coords");
  return parse_cvec(j, ptr);
}

Json functional_to_json(const LinearFunctional& f) {
  return {{"system", system_to_json(f.domain)}, {"values", to_json(f.coeffs)}};
}

LinearFunctional parse_functional(const Json& j, const std::string& ptr) {
  const Json& sj = field(j, "system", ptr);
  const Json& sys_json = sj.is_string() ? load_file(sj.get<std::string>()) : sj;
  LinearFunctional f;
  f.domain = parse_system(sys_json, ptr + "/system");
  CMat listed = sys_json.contains("basis") ? listed_basis(sys_json, f.domain->ambient, ptr + "/system")
                                           : CMat(CMat::Identity(f.domain->ambient->dim(), f.domain->ambient->dim()));
  CVec values = parse_cvec(field(j, "values", ptr), ptr + "/values", listed.cols());
  f.coeffs = transfer(f.domain, listed, values, ptr + "/values");
  return f;
}

Json map_to_json(const CPMapCandidate& phi) {
  Json images = Json::array();
  for (const auto& im : phi.images) images.push_back(to_json(im));
  return {{"domain_system", system_to_json(phi.domain)}, {"target_dim", phi.target_dim}, {"images", images}};
}

CPMapCandidate parse_map(const Json& j, const std::string& ptr) {
  const Json& sj = field(j, "domain_system", ptr);
  const Json& sys_json = sj.is_string() ? load_file(sj.get<std::string>()) : sj;
  CPMapCandidate phi;
  phi.domain = parse_system(sys_json, ptr + "/domain_system");
  const Json& dj = field(j, "target_dim", ptr);
  if (!dj.is_number_integer() || dj.get<long>() < 1) fail(ptr + "/target_dim", "expected a positive integer");
  const auto d = static_cast<Eigen::Index>(dj.get<long>());
  phi.target_dim = d;
  CMat listed = sys_json.contains("basis") ? listed_basis(sys_json, phi.domain->ambient, ptr + "/domain_system")
                                           : CMat(CMat::Identity(phi.domain->ambient->dim(), phi.domain->ambient->dim()));
  const Json& ij = array(field(j, "images", ptr), ptr + "/images", listed.cols());
  CMat values(listed.cols(), d * d);
  for (size_t i = 0; i < ij.size(); ++i) {
    CMat im = parse_cmat(ij[i], at(ptr + "/images", i), d, d);
    values.row(static_cast<Eigen::Index>(i)) = Eigen::Map<const CVec>(im.data(), d * d).transpose();
  }
  CMat coeffs = transfer(phi.domain, listed, values, ptr + "/images");
  for (Eigen::Index k = 0; k < phi.domain->dim(); ++k) {
    CVec row = coeffs.row(k).transpose();
    phi.images.push_back(Eigen::Map<const CMat>(row.data(), d, d));
  }
  return phi;
}

Json to_json(const ConeDecision& d) {
  Json out = {{"status", sdp::to_string(d.status)}, {"margin", d.margin}, {"in_closure", d.in_closure}};
  if (d.status == sdp::Status::Feasible) out["certificate"] = certificate_json(d.certificate);
  if (d.status == sdp::Status::Infeasible) out["dual"] = dual_json(d.dual);
  return out;
}

Json to_json(const SeminormResult& s) {
  return {{"value", s.value},
          {"witness", certificate_json(s.witness)},
          {"witness_ok", s.witness_ok},
          {"lower_witness", dual_json(s.lower)},
          {"lower_ok", s.lower_ok}};
}

Json to_json(const NullSpaceData& n) {
  Json basis = Json::array();
  for (Eigen::Index k = 0; k < n.basis_N.cols(); ++k) basis.push_back(to_json(CVec(n.basis_N.col(k))));
  return {{"null_basis", basis}, {"dim", n.basis_N.cols()}, {"relative_interior", to_json(n.relative_interior)}};
}

Json to_json(const ArchimedeanizationData& a) {
  Json basis = Json::array();
  for (Eigen::Index k = 0; k < a.null_basis.cols(); ++k) basis.push_back(to_json(CVec(a.null_basis.col(k))));
  return {{"null_basis", basis},
          {"quotient_dim", a.quotient_dim()},
          {"P", to_json(a.P)},
          {"full", a.full},
          {"proper", a.proper},
          {"archimedean", a.archimedean}};
}

Json to_json(const PositivityResult& p) {
  Json out = {{"positive", p.positive}, {"self_adjoint", p.self_adjoint}, {"value", p.value},
              {"status", sdp::to_string(p.status)}};
  if (p.extension.size()) out["extension"] = to_json(p.extension);
  if (p.gram.size()) out["gram"] = to_json(p.gram);
  return out;
}

Json to_json(const CPResult& c) {
  Json out = {{"completely_positive", c.completely_positive}, {"detail", to_json(c.detail)}};
  if (c.violating.size()) out["violating"] = to_json(c.violating);
  return out;
}

Json to_json(const StateExtension& e) {
  return {{"extension", functional_to_json(e.extension)},
          {"margin", e.margin},
          {"restriction_residual", e.restriction_residual},
          {"status", sdp::to_string(e.status)}};
}

Json to_json(const ExtensionResult& r) {
  Json out = {{"method", to_string(r.method)},
              {"status", sdp::to_string(r.status)},
              {"restriction_residual", r.restriction_residual},
              {"moment_min_eig", r.moment_min_eig},
              {"margin", r.margin}};
  if (!r.psi.images.empty()) out["psi"] = map_to_json(r.psi);
  if (r.status == sdp::Status::Infeasible)
    out["dual"] = {{"gram", to_json(r.dual_gram)}, {"value", r.dual_value}, {"residual", r.dual_residual}};
  if (r.method == ExtensionMethod::Pipeline) {
    const PipelineTrace& t = r.trace;
    out["trace"] = {{"null_dim", t.null_dim},
                    {"arch_dim", t.arch_dim},
                    {"ideal_dim", t.ideal_dim},
                    {"quotient_dim", t.quotient_dim},
                    {"rep_dim", t.rep_dim},
                    {"step2_angle", t.step2_angle},
                    {"theta_residual", t.theta_residual},
                    {"transfer_residual", t.transfer_residual},
                    {"step5_probes", t.step5_probes},
                    {"step5_forward_failures", t.step5_forward_failures},
                    {"step5_backward_failures", t.step5_backward_failures},
                    {"arveson_margin", t.arveson_margin},
                    {"arveson_residual", t.arveson_residual}};
  }
  return out;
}

ExtensionResult parse_extension_result(const Json& j, const std::string& ptr) {
  ExtensionResult r;
  const Json& mj = field(j, "method", ptr);
  if (mj == "direct") r.method = ExtensionMethod::Direct;
  else if (mj == "pipeline") r.method = ExtensionMethod::Pipeline;
  else fail(ptr + "/method", "expected direct or pipeline");
  r.status = parse_status(field(j, "status", ptr), ptr + "/status");
  r.restriction_residual = parse_real(field(j, "restriction_residual", ptr), ptr + "/restriction_residual");
  r.moment_min_eig = parse_real(field(j, "moment_min_eig", ptr), ptr + "/moment_min_eig");
  r.margin = parse_real(field(j, "margin", ptr), ptr + "/margin");
  if (j.contains("psi")) r.psi = parse_map(j["psi"], ptr + "/psi");
  if (j.contains("dual")) {
    const Json& dj = j["dual"];
    r.dual_gram = parse_cmat(field(dj, "gram", ptr + "/dual"), ptr + "/dual/gram");
    r.dual_value = parse_real(field(dj, "value", ptr + "/dual"), ptr + "/dual/value");
    r.dual_residual = parse_real(field(dj, "residual", ptr + "/dual"), ptr + "/dual/residual");
  }
  if (j.contains("trace")) {
    const Json& t = j["trace"];
    const std::string tp = ptr + "/trace";
    auto num = [&](const char* key) { return parse_real(field(t, key, tp), tp + "/" + key); };
    auto count = [&](const char* key) { return static_cast<int>(num(key)); };
    r.trace.null_dim = count("null_dim");
    r.trace.arch_dim = count("arch_dim");
    r.trace.ideal_dim = count("ideal_dim");
    r.trace.quotient_dim = count("quotient_dim");
    r.trace.rep_dim = count("rep_dim");
    r.trace.step2_angle = num("step2_angle");
    r.trace.theta_residual = num("theta_residual");
    r.trace.transfer_residual = num("transfer_residual");
    r.trace.step5_probes = count("step5_probes");
    r.trace.step5_forward_failures = count("step5_forward_failures");
    r.trace.step5_backward_failures = count("step5_backward_failures");
    r.trace.arveson_margin = num("arveson_margin");
    r.trace.arveson_residual = num("arveson_residual");
  }
  return r;
}

namespace {

void resolve_paths(Json& j, const std::filesystem::path& dir) {
  if (j.is_object()) {
    for (auto& [key, value] : j.items()) {
      if ((key == "algebra" || key == "system" || key == "domain_system") && value.is_string()) {
        const auto s = value.get<std::string>();
        if (!is_fixture_name(s) && std::filesystem::path(s).is_relative()) value = (dir / s).string();
      } else {
        resolve_paths(value, dir);
      }
    }
  } else if (j.is_array()) {
    for (auto& v : j) resolve_paths(v, dir);
  }
}

}  // namespace

bool is_fixture_name(const std::string& s) {
  return s.rfind("ALG_", 0) == 0 && s.find_first_of("./\\") == std::string::npos;
}

Json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw QosError(ErrorKind::FixtureNotFound, "cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw QosError(ErrorKind::SchemaError, path + ": " + e.what());
  }
  resolve_paths(j, std::filesystem::path(path).parent_path());
  return j;
}

void save_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw QosError(ErrorKind::FixtureNotFound, "cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace qos::io
