// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <json.hpp>

#include "ria/dofplan.hpp"
#include "ria/rational.hpp"
#include "ria/receiver.hpp"
#include "ria/simulator.hpp"

namespace ria {

using ojson = nlohmann::ordered_json;

// Rationals travel as {"num","den"}, never as floats.
ojson rational_to_json(const Rational& r);
Rational rational_from_json(const nlohmann::json& j);

// {"M","N","b","S","tau","dof"}
ojson to_json(const DofPlan& plan);
DofPlan dof_plan_from_json(const nlohmann::json& j);

// {"trials","successes","max_residual","dof","failures"}; dof is null when no
// trial succeeded, a non-finite max_residual is written as null.
ojson to_json(const CampaignStats& stats);
CampaignStats campaign_stats_from_json(const nlohmann::json& j);

// Inverse of to_json(const DecodeResult&) for the fields it carries.
DecodeResult decode_result_from_json(const nlohmann::json& j);

ojson to_json(const AuditReport& audit);
AuditReport audit_report_from_json(const nlohmann::json& j);

}  // namespace ria
