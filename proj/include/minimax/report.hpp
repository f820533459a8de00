#pragma once

#include "minimax/builtins.hpp"
#include "minimax/diff.hpp"
#include "minimax/oracle.hpp"
#include "minimax/regularity.hpp"
#include "minimax/sensitivity.hpp"

#include <json.hpp>

#include <string>

namespace minimax {

using Json = nlohmann::json;

/// Deterministic text: sorted keys, two-space indent, doubles as %.17g,
/// infinities as null. Throws NumericalError naming the path of a NaN.
std::string serialize_report(const Json& report);
/// Serializes, then writes to `path` ("-" or empty means stdout).
/// Throws std::runtime_error on IO failure.
void emit_report(const Json& report, const std::string& path);

/// FNV-1a 64 of the canonical document text, as 16 hex digits.
std::string problem_hash(const LQDocument& doc);

Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Json to_json(const std::vector<Index>& idx);  // 1-based
Json to_json(const PrimalDualPoint& z);
Json to_json(const KojimaPoint& k);
Json to_json(const ActiveSets& s);
Json to_json(const LowerJUReport& r);
Json to_json(const UpperConditionReport& r);
Json to_json(const SensitivityBundle& s);
Json to_json(const IdentityReport& r);
Json to_json(const NewtonResult& r);
Json to_json(const StabilityCertificate& c);
Json to_json(const LipschitzEstimate& e);
Json to_json(const HalvingReport& h);
Json to_json(const InjectivityReport& r);
Json to_json(const PathResult& p);
Json to_json(const MinimaxVerdict& v);
Json to_json(const GrowthReport& g);
Json to_json(const UpperTolerances& t);

}  // namespace minimax
