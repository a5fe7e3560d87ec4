#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "qos/arch.hpp"
#include "qos/extension.hpp"
#include "qos/io.hpp"
#include "qos/norms.hpp"
#include "qos/verify.hpp"

namespace {

using qos::io::Json;

// a file path, or a bare fixture name such as ALG_M2
Json load_doc(const std::string& arg) {
  if (qos::io::is_fixture_name(arg)) return Json(arg);
  return qos::io::load_file(arg);
}

qos::SystemPtr load_system(const std::string& arg) {
  Json j = load_doc(arg);
  if (j.is_object() && j.contains("algebra")) return qos::io::parse_system(j);
  return qos::whole_algebra(qos::io::parse_algebra(j));
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasi operator systems: positivity, norms, Archimedeanization and CP extension"};
  app.require_subcommand(1);
  app.fallthrough();
  double eps = 0.0;
  std::uint64_t seed = 1;
  int max_iters = 0;
  app.add_option("--eps", eps, "SDP tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "random seed");
  app.add_option("--max-iters", max_iters, "SDP iteration cap")->check(CLI::PositiveNumber);

  std::string a1, a2, a3, out_path, method = "direct";
  int level = 1;
  qos::VerifyConfig vcfg;
  bool no_timing = false;

  auto* cp = app.add_subcommand("check-positive", "cone membership with certificate");
  cp->add_option("system", a1)->required();
  cp->add_option("element", a2)->required();
  cp->add_option("--level", level)->check(CLI::Range(1, 3));
  auto* sn = app.add_subcommand("seminorm", "C*-seminorm with witnesses");
  sn->add_option("algebra", a1)->required();
  sn->add_option("element", a2)->required();
  auto* bc = app.add_subcommand("ball-check", "unit ball membership");
  bc->add_option("algebra", a1)->required();
  bc->add_option("element", a2)->required();
  auto* ns = app.add_subcommand("null-space", "order null space");
  ns->add_option("source", a1, "algebra or system")->required();
  ns->add_option("--level", level)->check(CLI::Range(1, 3));
  auto* ar = app.add_subcommand("archimedeanize", "quotient by the order null space");
  ar->add_option("source", a1, "algebra or system")->required();
  auto* es = app.add_subcommand("extend-state", "extend a positive functional to the algebra");
  es->add_option("system", a1)->required();
  es->add_option("functional", a2)->required();
  es->add_option("algebra", a3);
  auto* cc = app.add_subcommand("check-cp", "complete positivity of a map");
  cc->add_option("map", a1)->required();
  auto* ec = app.add_subcommand("extend-cp", "extend a CP map to the algebra");
  ec->add_option("map", a1)->required();
  ec->add_option("--method", method)->check(CLI::IsMember({"direct", "pipeline", "both"}));
  ec->add_option("--out", out_path);
  auto* vf = app.add_subcommand("verify", "run the property suites");
  vf->add_option("--levels", vcfg.levels)->check(CLI::Range(1, 3));
  vf->add_option("--samples", vcfg.samples)->check(CLI::PositiveNumber);
  vf->add_option("--suite", vcfg.suites)->check(CLI::IsMember(qos::suite_names()));
  vf->add_option("--fixture", vcfg.fixtures);
  vf->add_flag("--no-timing", no_timing);
  vf->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  if (max_iters > 0) setenv("QOS_SDP_MAX_ITERS", std::to_string(max_iters).c_str(), 1);
  qos::Tolerances tol = qos::Tolerances::from_env();
  if (eps > 0) tol.eps_psd = tol.eps_affine = eps;
  qos::Rng rng(seed);

  try {
    if (*cp) {
      auto ctx = qos::make_context(load_system(a1), level, qos::GramSpan::Generated, tol);
      emit(qos::io::to_json(qos::cone_membership(*ctx, qos::io::parse_element(load_doc(a2)), tol)));
    } else if (*sn || *bc) {
      auto ctx = qos::make_context(load_system(a1), 1, qos::GramSpan::Generated, tol);
      const qos::CVec x = qos::io::parse_element(load_doc(a2));
      Json j = qos::io::to_json(qos::seminorm(*ctx, x, tol));
      if (*bc) j["in_unit_ball"] = qos::in_unit_ball(*ctx, x, tol);
      emit(j);
    } else if (*ns) {
      emit(qos::io::to_json(qos::order_null_space(qos::make_context(load_system(a1), level, qos::GramSpan::Generated, tol))));
    } else if (*ar) {
      emit(qos::io::to_json(qos::archimedeanize(load_system(a1), 1, tol)));
    } else if (*es) {
      Json f = load_doc(a2);
      Json sys = load_doc(a1);
      if (!a3.empty() && sys.is_object() && !sys.contains("algebra")) sys["algebra"] = load_doc(a3);
      if (!f.contains("system")) f["system"] = sys;
      emit(qos::io::to_json(qos::extend_state(qos::io::parse_functional(f), tol)));
    } else if (*cc) {
      emit(qos::io::to_json(qos::is_completely_positive(qos::io::parse_map(load_doc(a1)), tol)));
    } else if (*ec) {
      const qos::CPMapCandidate phi = qos::io::parse_map(load_doc(a1));
      Json j = Json::object();
      auto run = [&](qos::ExtensionMethod m) {
        qos::ExtensionResult r =
            m == qos::ExtensionMethod::Direct ? qos::extend_cp_direct(phi, tol) : qos::extend_cp_pipeline(phi, rng, tol);
        Json rj = qos::io::to_json(r);
        if (r.status == qos::sdp::Status::Feasible) {
          auto rep = qos::verify_extension(r.psi, phi, rng, 200, tol);
          rj["verification"] = {{"restriction_residual", rep.restriction_residual},
                                {"moment_min_eig", rep.moment_min_eig},
                                {"brute_force_run", rep.brute_force_run},
                                {"brute_force_min", rep.brute_force_min},
                                {"ok", rep.ok}};
        }
        j[qos::to_string(m)] = rj;
      };
      if (method != "pipeline") run(qos::ExtensionMethod::Direct);
      if (method != "direct") run(qos::ExtensionMethod::Pipeline);
      if (method != "both") j = j.front();
      if (!out_path.empty()) qos::io::save_file(out_path, j);
      emit(j);
    } else if (*vf) {
      vcfg.seed = seed;
      if (eps > 0) vcfg.eps = eps;
      const qos::VerifyReport rep = qos::run_verify(vcfg);
      const Json j = rep.to_json(!no_timing);
      if (!out_path.empty()) qos::io::save_file(out_path, j);
      emit(j);
      return rep.passed() ? 0 : 1;
    }
  } catch (const qos::QosError& e) {
    emit({{"error", qos::to_string(e.kind())}, {"message", e.what()}});
    return 2;
  }
  return 0;
}
