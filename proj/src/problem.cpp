#include "minimax/problem.hpp"

#include <json.hpp>

#include <cmath>
#include <cstring>
#include <set>
#include <sstream>

namespace minimax {

using nlohmann::json;

ScalarFunction QuadraticForm::as_function() const {
  const QuadraticForm self = *this;
  return ScalarFunction{
      [self](const Vector& z) { return self.value(z); },
      [self](const Vector& z) { return self.gradient(z); },
      [self](const Vector&) { return self.Q; }};
}

QuadraticForm QuadraticForm::zero(Index dim) {
  return QuadraticForm{Matrix::Zero(dim, dim), Vector::Zero(dim), 0.0};
}

QuadraticForm QuadraticForm::linear(const Vector& q, double r) {
  return QuadraticForm{Matrix::Zero(q.size(), q.size()), q, r};
}

QuadraticForm ParametricQuadraticForm::at(const Vector& theta) const {
  QuadraticForm out = base;
  for (std::size_t k = 0; k < dQ.size(); ++k) out.Q += theta(static_cast<Index>(k)) * dQ[k];
  for (std::size_t k = 0; k < dq.size(); ++k) out.q += theta(static_cast<Index>(k)) * dq[k];
  for (std::size_t k = 0; k < dr.size(); ++k) out.r += theta(static_cast<Index>(k)) * dr[k];
  return out;
}

bool ParametricQuadraticForm::depends_on_theta() const {
  for (const auto& m : dQ)
    if (m.size() > 0 && max_abs(m) != 0.0) return true;
  for (const auto& v : dq)
    if (v.size() > 0 && max_abs(v) != 0.0) return true;
  for (double r : dr)
    if (r != 0.0) return true;
  return false;
}

ParametricFunction ParametricQuadraticForm::as_function() const {
  const ParametricQuadraticForm self = *this;
  ParametricFunction fn;
  fn.value = [self](const Vector& z, const Vector& t) { return self.at(t).value(z); };
  fn.gradient = [self](const Vector& z, const Vector& t) { return self.at(t).gradient(z); };
  fn.hessian = [self](const Vector&, const Vector& t) { return self.at(t).Q; };
  fn.theta_gradient = [self](const Vector& z, const Vector& t) {
    Vector out = Vector::Zero(t.size());
    for (Index k = 0; k < t.size(); ++k) {
      const auto ku = static_cast<std::size_t>(k);
      if (ku < self.dQ.size()) out(k) += 0.5 * z.dot(self.dQ[ku] * z);
      if (ku < self.dq.size()) out(k) += self.dq[ku].dot(z);
      if (ku < self.dr.size()) out(k) += self.dr[ku];
    }
    return out;
  };
  fn.theta_mixed = [self](const Vector& z, const Vector& t) {
    Matrix out = Matrix::Zero(z.size(), t.size());
    for (Index k = 0; k < t.size(); ++k) {
      const auto ku = static_cast<std::size_t>(k);
      if (ku < self.dQ.size()) out.col(k) += self.dQ[ku] * z;
      if (ku < self.dq.size()) out.col(k) += self.dq[ku];
    }
    return out;
  };
  return fn;
}

// ---------------------------------------------------------------------------
// Document parsing

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw SchemaError(where + ": expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw SchemaError(where + ": unknown field '" + key + "'");
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw SchemaError(where + ": missing field '" + key + "'");
  return obj.at(key);
}

double read_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw SchemaError(where + ": expected a number");
  return j.get<double>();
}

Index read_count(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    throw SchemaError(where + ": expected a nonnegative integer");
  return static_cast<Index>(j.get<long long>());
}

Vector read_vector(const json& j, Index len, const std::string& where) {
  if (!j.is_array() || static_cast<Index>(j.size()) != len)
    throw SchemaError(where + ": expected an array of length " + std::to_string(len));
  Vector v(len);
  for (Index i = 0; i < len; ++i) v(i) = read_number(j[static_cast<std::size_t>(i)], where);
  return v;
}

Matrix read_matrix(const json& j, Index dim, const std::string& where) {
  if (!j.is_array() || static_cast<Index>(j.size()) != dim)
    throw SchemaError(where + ": expected " + std::to_string(dim) + " rows");
  Matrix m(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    m.row(i) = read_vector(row, dim, where + " row " + std::to_string(i)).transpose();
  }
  return m;
}

void require_symmetric(const Matrix& Q, const std::string& where) {
  if (max_abs(Q - Q.transpose()) != 0.0) throw SchemaError(where + ": asymmetric quadratic block");
}

ParametricQuadraticForm read_form(const json& j, Index dim, Index l, const std::string& where) {
  if (l > 0)
    reject_unknown(j, {"Q", "q", "r", "dQ", "dq", "dr"}, where);
  else
    reject_unknown(j, {"Q", "q", "r"}, where);
  ParametricQuadraticForm out;
  out.base.Q = read_matrix(require(j, "Q", where), dim, where + ".Q");
  require_symmetric(out.base.Q, where + ".Q");
  out.base.q = read_vector(require(j, "q", where), dim, where + ".q");
  out.base.r = read_number(require(j, "r", where), where + ".r");
  if (j.contains("dQ")) {
    const auto& arr = j.at("dQ");
    if (!arr.is_array() || static_cast<Index>(arr.size()) != l)
      throw SchemaError(where + ".dQ: expected " + std::to_string(l) + " matrices");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      out.dQ.push_back(read_matrix(arr[k], dim, where + ".dQ"));
      require_symmetric(out.dQ.back(), where + ".dQ");
    }
  }
  if (j.contains("dq")) {
    const auto& arr = j.at("dq");
    if (!arr.is_array() || static_cast<Index>(arr.size()) != l)
      throw SchemaError(where + ".dq: expected " + std::to_string(l) + " vectors");
    for (std::size_t k = 0; k < arr.size(); ++k) out.dq.push_back(read_vector(arr[k], dim, where + ".dq"));
  }
  if (j.contains("dr")) {
    const Vector dr = read_vector(j.at("dr"), l, where + ".dr");
    out.dr.assign(dr.data(), dr.data() + dr.size());
  }
  return out;
}

std::vector<ParametricQuadraticForm> read_forms(const json& j, Index count, Index dim, Index l,
                                                const std::string& where) {
  if (!j.is_array() || static_cast<Index>(j.size()) != count)
    throw SchemaError(where + ": expected " + std::to_string(count) + " quadratic forms");
  std::vector<ParametricQuadraticForm> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(read_form(j[i], dim, l, where + "[" + std::to_string(i) + "]"));
  return out;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json form_json(const ParametricQuadraticForm& f) {
  json out{{"Q", matrix_json(f.base.Q)}, {"q", vector_json(f.base.q)}, {"r", f.base.r}};
  if (!f.dQ.empty()) {
    json arr = json::array();
    for (const auto& m : f.dQ) arr.push_back(matrix_json(m));
    out["dQ"] = arr;
  }
  if (!f.dq.empty()) {
    json arr = json::array();
    for (const auto& v : f.dq) arr.push_back(vector_json(v));
    out["dq"] = arr;
  }
  if (!f.dr.empty()) out["dr"] = f.dr;
  return out;
}

json forms_json(const std::vector<ParametricQuadraticForm>& fs) {
  json arr = json::array();
  for (const auto& f : fs) arr.push_back(form_json(f));
  return arr;
}

}  // namespace

LQDocument parse_lq_document(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("document is not valid JSON: ") + e.what());
  }
  reject_unknown(doc, {"name", "dims", "f", "h", "g", "H", "G", "parameters"}, "document");
  LQDocument out;
  const auto& name = require(doc, "name", "document");
  if (!name.is_string()) throw SchemaError("document.name: expected a string");
  out.name = name.get<std::string>();

  const auto& dims = require(doc, "dims", "document");
  reject_unknown(dims, {"n", "m", "n1", "n2", "m1", "m2"}, "dims");
  out.dims.n = read_count(require(dims, "n", "dims"), "dims.n");
  out.dims.m = read_count(require(dims, "m", "dims"), "dims.m");
  out.dims.n1 = read_count(require(dims, "n1", "dims"), "dims.n1");
  out.dims.n2 = read_count(require(dims, "n2", "dims"), "dims.n2");
  out.dims.m1 = read_count(require(dims, "m1", "dims"), "dims.m1");
  out.dims.m2 = read_count(require(dims, "m2", "dims"), "dims.m2");
  if (out.dims.n < 1 || out.dims.m < 1) throw SchemaError("dims: n and m must be at least 1");

  if (doc.contains("parameters")) {
    const auto& p = doc.at("parameters");
    reject_unknown(p, {"l", "theta0"}, "parameters");
    out.l = read_count(require(p, "l", "parameters"), "parameters.l");
    if (out.l < 1) throw SchemaError("parameters.l must be at least 1");
    out.theta0 = read_vector(require(p, "theta0", "parameters"), out.l, "parameters.theta0");
  } else {
    out.theta0 = Vector(0);
  }

  const Index nm = out.dims.n + out.dims.m;
  out.f = read_form(require(doc, "f", "document"), nm, out.l, "f");
  out.h = read_forms(require(doc, "h", "document"), out.dims.m1, nm, out.l, "h");
  out.g = read_forms(require(doc, "g", "document"), out.dims.m2, nm, out.l, "g");
  out.H = read_forms(require(doc, "H", "document"), out.dims.n1, out.dims.n, out.l, "H");
  out.G = read_forms(require(doc, "G", "document"), out.dims.n2, out.dims.n, out.l, "G");
  return out;
}

std::string write_lq_document(const LQDocument& d) {
  json doc{{"name", d.name},
           {"dims",
            {{"n", d.dims.n}, {"m", d.dims.m}, {"n1", d.dims.n1}, {"n2", d.dims.n2}, {"m1", d.dims.m1},
             {"m2", d.dims.m2}}},
           {"f", form_json(d.f)},
           {"h", forms_json(d.h)},
           {"g", forms_json(d.g)},
           {"H", forms_json(d.H)},
           {"G", forms_json(d.G)}};
  if (d.parametric()) doc["parameters"] = {{"l", d.l}, {"theta0", vector_json(d.theta0)}};
  return doc.dump(2) + "\n";
}

ParametricProblemSpec to_parametric_problem(const LQDocument& doc) {
  ParametricProblemSpec out;
  out.dims = doc.dims;
  out.l = doc.parametric() ? doc.l : 1;
  out.theta0 = doc.parametric() ? doc.theta0 : Vector::Zero(1);
  out.name = doc.name;
  out.bundle.f = doc.f.as_function();
  for (const auto& f : doc.h) out.bundle.h.push_back(f.as_function());
  for (const auto& f : doc.g) out.bundle.g.push_back(f.as_function());
  for (const auto& f : doc.H) out.bundle.H.push_back(f.as_function());
  for (const auto& f : doc.G) out.bundle.G.push_back(f.as_function());
  return out;
}

ProblemSpec to_problem(const LQDocument& doc) {
  const Vector theta = doc.parametric() ? doc.theta0 : Vector(0);
  ProblemSpec out;
  out.dims = doc.dims;
  out.name = doc.name;
  out.bundle.f = doc.f.at(theta).as_function();
  for (const auto& f : doc.h) out.bundle.h.push_back(f.at(theta).as_function());
  for (const auto& f : doc.g) out.bundle.g.push_back(f.at(theta).as_function());
  for (const auto& f : doc.H) out.bundle.H.push_back(f.at(theta).as_function());
  for (const auto& f : doc.G) out.bundle.G.push_back(f.at(theta).as_function());
  return out;
}

ProblemSpec parse_problem(const std::string& text) { return to_problem(parse_lq_document(text)); }

ParametricProblemSpec parse_parametric_problem(const std::string& text) {
  return to_parametric_problem(parse_lq_document(text));
}

namespace {

ParametricFunction lift(const ScalarFunction& fn) {
  ParametricFunction out;
  out.value = [fn](const Vector& z, const Vector&) { return fn.value(z); };
  out.gradient = [fn](const Vector& z, const Vector&) { return fn.gradient(z); };
  out.hessian = [fn](const Vector& z, const Vector&) { return fn.hessian(z); };
  out.theta_gradient = [](const Vector&, const Vector& t) { return Vector::Zero(t.size()).eval(); };
  out.theta_mixed = [](const Vector& z, const Vector& t) { return Matrix::Zero(z.size(), t.size()).eval(); };
  return out;
}

ScalarFunction bind(const ParametricFunction& fn, const Vector& theta) {
  return ScalarFunction{[fn, theta](const Vector& z) { return fn.value(z, theta); },
                        [fn, theta](const Vector& z) { return fn.gradient(z, theta); },
                        [fn, theta](const Vector& z) { return fn.hessian(z, theta); }};
}

}  // namespace

ParametricProblemSpec constant_family(const ProblemSpec& spec, Index l) {
  ParametricProblemSpec out;
  out.dims = spec.dims;
  out.l = l;
  out.theta0 = Vector::Zero(l);
  out.name = spec.name + "-constant-family";
  out.bundle.f = lift(spec.bundle.f);
  for (const auto& f : spec.bundle.h) out.bundle.h.push_back(lift(f));
  for (const auto& f : spec.bundle.g) out.bundle.g.push_back(lift(f));
  for (const auto& f : spec.bundle.H) out.bundle.H.push_back(lift(f));
  for (const auto& f : spec.bundle.G) out.bundle.G.push_back(lift(f));
  return out;
}

ProblemSpec freeze_parameter(const ParametricProblemSpec& pspec, const Vector& theta) {
  if (theta.size() != pspec.l)
    throw std::invalid_argument("freeze_parameter: parameter has length " + std::to_string(theta.size()) +
                                ", expected " + std::to_string(pspec.l));
  ProblemSpec out;
  out.dims = pspec.dims;
  out.name = pspec.name;
  out.bundle.f = bind(pspec.bundle.f, theta);
  for (const auto& f : pspec.bundle.h) out.bundle.h.push_back(bind(f, theta));
  for (const auto& f : pspec.bundle.g) out.bundle.g.push_back(bind(f, theta));
  for (const auto& f : pspec.bundle.H) out.bundle.H.push_back(bind(f, theta));
  for (const auto& f : pspec.bundle.G) out.bundle.G.push_back(bind(f, theta));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void check_function(const ScalarFunction& fn, const Vector& z, const std::string& label,
                    ValidationReport& report) {
  if (!fn.value || !fn.gradient || !fn.hessian) {
    report.dimensions_ok = false;
    report.failures.push_back(label + ": missing evaluator");
    return;
  }
  const double v1 = fn.value(z);
  const Vector g1 = fn.gradient(z);
  const Matrix h1 = fn.hessian(z);
  if (g1.size() != z.size()) {
    report.dimensions_ok = false;
    report.failures.push_back(label + ": gradient has length " + std::to_string(g1.size()) + ", expected " +
                              std::to_string(z.size()));
  }
  if (h1.rows() != z.size() || h1.cols() != z.size()) {
    report.dimensions_ok = false;
    report.failures.push_back(label + ": Hessian has wrong shape");
  } else {
    const double asym = max_abs(h1 - h1.transpose());
    report.max_asymmetry = std::max(report.max_asymmetry, asym);
    if (asym > 1e-12) {
      report.symmetry_ok = false;
      report.failures.push_back(label + ": Hessian asymmetric by " + std::to_string(asym));
    }
  }
  const double v2 = fn.value(z);
  const Vector g2 = fn.gradient(z);
  const Matrix h2 = fn.hessian(z);
  const bool same = std::memcmp(&v1, &v2, sizeof(double)) == 0 && g1.size() == g2.size() &&
                    (g1.array() == g2.array()).all() && h1.rows() == h2.rows() && h1.cols() == h2.cols() &&
                    (h1.array() == h2.array()).all();
  if (!same) {
    report.determinism_ok = false;
    report.failures.push_back(label + ": evaluator is not deterministic");
  }
}

void check_family(const std::vector<ScalarFunction>& fs, Index expected, const Vector& z,
                  const std::string& label, ValidationReport& report) {
  if (static_cast<Index>(fs.size()) != expected) {
    report.dimensions_ok = false;
    report.failures.push_back(label + ": " + std::to_string(fs.size()) + " functions, expected " +
                              std::to_string(expected));
  }
  for (std::size_t i = 0; i < fs.size(); ++i)
    check_function(fs[i], z, label + "[" + std::to_string(i) + "]", report);
}

}  // namespace

ValidationReport validate_spec(const ProblemSpec& spec, const Vector& probe) {
  ValidationReport report;
  const auto& d = spec.dims;
  if (d.n < 1 || d.m < 1 || d.n1 < 0 || d.n2 < 0 || d.m1 < 0 || d.m2 < 0) {
    report.dimensions_ok = false;
    report.failures.push_back("dims: n, m must be positive and constraint counts nonnegative");
    return report;
  }
  Vector z = probe;
  if (z.size() == 0) {
    z.resize(d.n + d.m);
    for (Index i = 0; i < z.size(); ++i) z(i) = 0.1 * static_cast<double>(i + 1) - 0.05 * static_cast<double>(i % 3);
  }
  if (z.size() != d.n + d.m) {
    report.dimensions_ok = false;
    report.failures.push_back("probe has wrong length");
    return report;
  }
  const Vector x = z.head(d.n);
  check_function(spec.bundle.f, z, "f", report);
  check_family(spec.bundle.h, d.m1, z, "h", report);
  check_family(spec.bundle.g, d.m2, z, "g", report);
  check_family(spec.bundle.H, d.n1, x, "H", report);
  check_family(spec.bundle.G, d.n2, x, "G", report);
  return report;
}

Vector stack(const Vector& a, const Vector& b) {
  Vector out(a.size() + b.size());
  out << a, b;
  return out;
}

Vector values(const std::vector<ScalarFunction>& fs, const Vector& z) {
  Vector out(static_cast<Index>(fs.size()));
  for (std::size_t i = 0; i < fs.size(); ++i) out(static_cast<Index>(i)) = fs[i].value(z);
  return out;
}

Matrix jacobian(const std::vector<ScalarFunction>& fs, const Vector& z, Index dim) {
  Matrix out(static_cast<Index>(fs.size()), dim);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const Vector g = fs[i].gradient(z);
    if (g.size() != dim) throw SchemaError("gradient evaluator returned wrong length");
    out.row(static_cast<Index>(i)) = g.transpose();
  }
  return out;
}

Matrix weighted_hessian(const std::vector<ScalarFunction>& fs, const Vector& weights, const Vector& z,
                        Index dim) {
  Matrix out = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const double w = weights(static_cast<Index>(i));
    if (w != 0.0) out += w * fs[i].hessian(z);
  }
  return out;
}

}  // namespace minimax
