#include "minimax/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace minimax {

namespace {

void write_value(std::ostringstream& os, const Json& j, int depth, const std::string& path) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map keeps keys sorted
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(it.key()).dump() << ": ";
        write_value(os, it.value(), depth + 1, path + "." + it.key());
      }
      os << "\n" << close_pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) os << ", ";
        write_value(os, j[i], depth + 1, path + "[" + std::to_string(i) + "]");
      }
      os << "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isnan(v)) throw NumericalError("report: NaN at " + path);
      if (std::isinf(v)) {
        os << "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << buf;
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

std::string serialize_report(const Json& report) {
  std::ostringstream os;
  write_value(os, report, 0, "$");
  os << "\n";
  return os.str();
}

void emit_report(const Json& report, const std::string& path) {
  const std::string text = serialize_report(report);
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open report file '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing report file '" + path + "'");
}

std::string problem_hash(const LQDocument& doc) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : write_lq_document(doc)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json to_json(const Matrix& m) {
  Json a = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    a.push_back(row);
  }
  return a;
}

Json to_json(const std::vector<Index>& idx) {
  Json a = Json::array();
  for (Index i : idx) a.push_back(i + 1);
  return a;
}

Json to_json(const PrimalDualPoint& z) {
  return Json{{"x", to_json(z.x)}, {"u", to_json(z.u)},   {"v", to_json(z.v)},
              {"y", to_json(z.y)}, {"mu", to_json(z.mu)}, {"lambda", to_json(z.lambda)}};
}

Json to_json(const KojimaPoint& k) {
  return Json{{"x", to_json(k.x)}, {"u", to_json(k.u)},   {"w", to_json(k.w)},
              {"y", to_json(k.y)}, {"mu", to_json(k.mu)}, {"xi", to_json(k.xi)}};
}

Json to_json(const ActiveSets& s) {
  return Json{{"alpha", to_json(s.alpha)},          {"alpha_c", to_json(s.alpha_c)},
              {"beta", to_json(s.beta)},            {"beta_plus", to_json(s.beta_plus)},
              {"beta_zero", to_json(s.beta_zero)},  {"beta_c", to_json(s.beta_c)},
              {"min_margin", s.min_margin},         {"tol_act", s.tol_act}};
}

Json to_json(const LowerJUReport& r) {
  return Json{{"kkt_residual", r.kkt_residual},
              {"kkt_ok", r.kkt_ok},
              {"licq_sigma_min", r.licq_sigma_min},
              {"licq_sigma_max", r.licq_sigma_max},
              {"licq_ok", r.licq_ok},
              {"sc_margin", r.sc_margin},
              {"sc_ok", r.sc_ok},
              {"sosc_max_eigenvalue", r.sosc_max_eigenvalue},
              {"cone_dimension", r.cone_dimension},
              {"sosc_ok", r.sosc_ok},
              {"pass", r.pass()}};
}

Json to_json(const UpperConditionReport& r) {
  Json j{{"sets", to_json(r.sets)},
         {"kkt_residual", r.kkt_residual},
         {"kkt_ok", r.kkt_ok},
         {"licq_sigma_min", r.licq_sigma_min},
         {"licq_sigma_max", r.licq_sigma_max},
         {"licq_ok", r.licq_ok},
         {"sc_margin", r.sc_margin},
         {"sc_ok", r.sc_ok},
         {"lower", to_json(r.lower)},
         {"lower_ok", r.lower_ok},
         {"second_order_evaluated", r.second_order_evaluated},
         {"jacobian_uniqueness", r.ju_verdict()},
         {"jacobian_uniqueness_failure", r.ju_failure()},
         {"property_a", r.property_a_verdict()},
         {"property_a_failure", r.property_a_failure()}};
  if (r.second_order_evaluated) {
    j["sosc_min_eigenvalue"] = r.sosc_min_eigenvalue;
    j["sosc_dimension"] = r.sosc_dimension;
    j["sosc_on_affine_hull"] = r.sosc_on_affine_hull;
    j["strong_sosc_min_eigenvalue"] = r.strong_sosc_min_eigenvalue;
    j["affine_dimension"] = r.affine_dimension;
    j["necessary_min_eigenvalue"] = r.necessary_min_eigenvalue;
    j["necessary_ok"] = r.necessary_ok;
    j["psi"] = to_json(r.psi);
  }
  j["sosc_ok"] = r.sosc_ok;
  j["strong_sosc_ok"] = r.strong_sosc_ok;
  return j;
}

Json to_json(const SensitivityBundle& s) {
  return Json{{"grad", to_json(s.grad)},           {"hessian", to_json(s.hessian)},
              {"K_alpha", to_json(s.K_alpha)},     {"N_alpha", to_json(s.N_alpha)},
              {"K_alpha_condition", s.K_alpha_condition}, {"asymmetry", s.asymmetry}};
}

Json to_json(const IdentityReport& r) {
  return Json{{"relative_error", r.relative_error},
              {"full_term_norm", r.full_term_norm},
              {"reduced_term_norm", r.reduced_term_norm},
              {"tolerance", r.tolerance},
              {"pass", r.pass}};
}

Json to_json(const NewtonResult& r) {
  return Json{{"status", to_string(r.status)},
              {"iterations", r.iterations},
              {"trace", r.trace},
              {"residual", r.residual()},
              {"quadratic_rate", quadratic_rate(r.trace)},
              {"message", r.message},
              {"k", to_json(r.k)}};
}

namespace {

Json element_json(const ElementSample& s) {
  return Json{{"omega", to_json(s.omega)},         {"sigma_min", s.sigma_min},
              {"sigma_max", s.sigma_max},          {"determinant", s.determinant},
              {"nonsingular", s.nonsingular},      {"schur_sigma_min", s.schur_sigma_min},
              {"schur_nonsingular", s.schur_nonsingular}};
}

}  // namespace

Json to_json(const StabilityCertificate& c) {
  Json vertices = Json::array();
  for (const auto& s : c.vertices) vertices.push_back(element_json(s));
  Json interior = Json::array();
  for (const auto& s : c.interior) interior.push_back(element_json(s));
  return Json{{"upper", to_json(c.upper)},
              {"property_a", c.property_a_verdict},
              {"lower_split_ok", c.lower_split_ok},
              {"beta_zero_size", c.beta_zero_size},
              {"enumeration_capped", c.enumeration_capped},
              {"vertices", vertices},
              {"interior", interior},
              {"schur_agreement", c.schur_agreement},
              {"vertex_sign_agreement", c.vertex_sign_agreement},
              {"min_vertex_sigma", c.min_vertex_sigma},
              {"min_interior_sigma", c.min_interior_sigma},
              {"seed", c.seed},
              {"overall", c.overall}};
}

Json to_json(const LipschitzEstimate& e) {
  Json distances = Json::array();
  for (const auto& s : e.details) distances.push_back(s.solved ? Json(s.distance) : Json(nullptr));
  return Json{{"max_ratio", e.max_ratio},
              {"samples", e.samples},
              {"failures", e.failures},
              {"uniqueness_violations", e.uniqueness_violations},
              {"radius", e.radius},
              {"seed", e.seed},
              {"distances", distances},
              {"pass", e.pass()}};
}

Json to_json(const HalvingReport& h) {
  return Json{{"full", to_json(h.full)}, {"half", to_json(h.half)}, {"ratio", h.ratio}, {"pass", h.pass}};
}

Json to_json(const InjectivityReport& r) {
  return Json{{"min_ratio", r.min_ratio}, {"pairs", r.pairs}, {"skipped", r.skipped},
              {"radius", r.radius},       {"seed", r.seed},   {"pass", r.pass}};
}

Json to_json(const PathResult& p) {
  Json nodes = Json::array();
  for (const auto& n : p.nodes) {
    Json node{{"theta", to_json(n.theta)},
              {"k", to_json(n.k)},
              {"certified", n.certified},
              {"jacobian_uniqueness", n.report.ju_verdict()},
              {"property_a", n.report.property_a_verdict()},
              {"alpha", to_json(n.report.sets.alpha)},
              {"beta_plus", to_json(n.report.sets.beta_plus)},
              {"beta_zero", to_json(n.report.sets.beta_zero)},
              {"corrector_trace", n.corrector_trace},
              {"basis_drift", n.basis_drift}};
    if (n.dk_dtheta) node["dk_dtheta"] = to_json(*n.dk_dtheta);
    nodes.push_back(node);
  }
  return Json{{"mode", to_string(p.mode)},
              {"failure", to_string(p.failure)},
              {"failed_node", p.failed_node},
              {"message", p.message},
              {"nodes", nodes},
              {"success", p.success()}};
}

Json to_json(const MinimaxVerdict& v) {
  Json levels = Json::array();
  for (const auto& l : v.levels)
    levels.push_back(Json{{"delta", l.delta},
                          {"eta", l.eta},
                          {"left_min_slack", l.left_min_slack},
                          {"right_min_slack", l.right_min_slack},
                          {"left_points", l.left_points},
                          {"right_points", l.right_points},
                          {"empty_inner", l.empty_inner},
                          {"pass", l.pass}});
  return Json{{"levels", levels}, {"pass", v.pass}, {"anomaly", v.anomaly}, {"failure", v.failure}};
}

namespace {

Json fit_json(const GrowthFit& f) {
  return Json{{"gamma", f.gamma},       {"gamma_lb", f.gamma_lb}, {"residual", f.residual},
              {"min_slack", f.min_slack}, {"points", f.points}};
}

}  // namespace

Json to_json(const GrowthReport& g) {
  return Json{{"gamma1", fit_json(g.lower)},
              {"gamma2", fit_json(g.upper)},
              {"residual_threshold", g.residual_threshold},
              {"slack", g.slack},
              {"pass", g.pass}};
}

Json to_json(const UpperTolerances& t) {
  return Json{{"kkt", t.kkt}, {"rank", t.rank}, {"sc", t.sc}, {"sosc", t.sosc}, {"tol_act", t.tol_act}};
}

}  // namespace minimax
