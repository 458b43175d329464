// SPDX-License-Identifier: Apache-2.0

#include "ria/report.hpp"

#include <cmath>
#include <limits>

namespace ria {

namespace {

ojson finite_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

double number_or_inf(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

}  // namespace

ojson rational_to_json(const Rational& r) { return {{"num", r.num()}, {"den", r.den()}}; }

Rational rational_from_json(const nlohmann::json& j) {
  return Rational(j.at("num").get<std::int64_t>(), j.at("den").get<std::int64_t>());
}

ojson to_json(const DofPlan& p) {
  ojson j;
  j["M"] = p.m;
  j["N"] = p.n;
  j["b"] = p.b;
  j["S"] = p.s;
  j["tau"] = p.tau;
  j["dof"] = rational_to_json(p.dof);
  return j;
}

DofPlan dof_plan_from_json(const nlohmann::json& j) {
  DofPlan p;
  p.m = j.at("M").get<int>();
  p.n = j.at("N").get<int>();
  p.b = j.at("b").get<std::int64_t>();
  p.s = j.at("S").get<std::array<std::int64_t, 4>>();
  p.tau = j.at("tau").get<std::int64_t>();
  p.dof = rational_from_json(j.at("dof"));
  return p;
}

ojson to_json(const CampaignStats& s) {
  ojson j;
  j["trials"] = s.trials;
  j["successes"] = s.successes;
  j["max_residual"] = finite_or_null(s.max_residual);
  j["dof"] = s.dof ? rational_to_json(*s.dof) : ojson(nullptr);
  j["failures"] = s.failures;
  return j;
}

CampaignStats campaign_stats_from_json(const nlohmann::json& j) {
  CampaignStats s;
  s.trials = j.at("trials").get<std::uint64_t>();
  s.successes = j.at("successes").get<std::uint64_t>();
  s.max_residual = number_or_inf(j.at("max_residual"));
  if (!j.at("dof").is_null()) s.dof = rational_from_json(j.at("dof"));
  s.failures = j.at("failures").get<std::vector<std::uint64_t>>();
  return s;
}

DecodeResult decode_result_from_json(const nlohmann::json& j) {
  DecodeResult r;
  r.ue = j.at("ue").get<int>();
  r.clean_lcs_per_stage = j.at("clean_lcs_per_stage").get<std::array<int, kNumPhases>>();
  r.rank12 = j.at("rank12").get<bool>();
  r.residual = number_or_inf(j.at("residual"));
  r.nullspace_dim = j.at("nullspace_dim").get<int>();
  return r;
}

ojson to_json(const AuditReport& a) {
  ojson j;
  j["seed"] = a.seed;
  j["queries"] = a.accesses.size();
  j["violations"] = a.violations;
  j["pass"] = a.pass();
  j["error"] = a.error;
  ojson log = ojson::array();
  for (const auto& e : a.accesses) {
    log.push_back({{"op", e.op},
                   {"view_phase", e.view_phase},
                   {"rx", e.rx},
                   {"bs", e.bs},
                   {"phase", e.phase},
                   {"round", e.round},
                   {"violation", e.violation}});
  }
  j["accesses"] = std::move(log);
  return j;
}

AuditReport audit_report_from_json(const nlohmann::json& j) {
  AuditReport a;
  a.seed = j.at("seed").get<std::uint64_t>();
  a.violations = j.at("violations").get<std::size_t>();
  a.error = j.at("error").get<std::string>();
  for (const auto& e : j.at("accesses")) {
    a.accesses.push_back({e.at("op").get<std::string>(), e.at("view_phase").get<int>(),
                          e.at("rx").get<int>(), e.at("bs").get<int>(), e.at("phase").get<int>(),
                          e.at("round").get<int>(), e.at("violation").get<bool>()});
  }
  return a;
}

}  // namespace ria
