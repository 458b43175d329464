// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "ria/report.hpp"

using namespace ria;

TEST_CASE("rationals are {num, den}") {
  CHECK(rational_to_json(Rational(6, 14)).dump() == R"({"num":3,"den":7})");
  CHECK(rational_from_json(nlohmann::json::parse(R"({"num":-2,"den":4})")) == Rational(-1, 2));
}

TEST_CASE("CampaignStats JSON layout and round trip") {
  CampaignStats s;
  s.trials = 5;
  s.successes = 4;
  s.max_residual = 1.2345678901234567e-11;
  s.dof = Rational(3, 7);
  s.failures = {9};
  const auto j = to_json(s);
  CHECK(j.dump() ==
        R"({"trials":5,"successes":4,"max_residual":1.2345678901234567e-11,"dof":{"num":3,"den":7},"failures":[9]})");
  CHECK(campaign_stats_from_json(nlohmann::json::parse(j.dump())) == s);

  CampaignStats none;
  none.trials = 1;
  none.failures = {0};
  none.max_residual = std::numeric_limits<double>::infinity();
  CHECK(campaign_stats_from_json(nlohmann::json::parse(to_json(none).dump())) == none);
}

TEST_CASE("DofPlan round trip") {
  const DofPlan p{4, 1, 12, {3, 1, 1, 6}, 28, Rational(3, 7)};
  const auto j = to_json(p);
  CHECK(j.dump() == R"({"M":4,"N":1,"b":12,"S":[3,1,1,6],"tau":28,"dof":{"num":3,"den":7}})");
  CHECK(dof_plan_from_json(nlohmann::json::parse(j.dump())) == p);
}

TEST_CASE("audit report round trip") {
  const AuditReport a = csit_audit(2, FaultInjection::kPhase2SameStageCsi);
  const auto j = to_json(a);
  CHECK(j.at("violations") == 1);
  const AuditReport b = audit_report_from_json(nlohmann::json::parse(j.dump()));
  CHECK(to_json(b) == j);
}
