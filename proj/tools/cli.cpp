// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ria/acceptance.hpp"
#include "ria/dofplan.hpp"
#include "ria/report.hpp"
#include "ria/simulator.hpp"

namespace ria::cli {

namespace {

struct Config {
  std::uint64_t trials = 100;
  std::uint64_t seed = 0;
  int m = 0;
  int n = 0;
  int s_max = kDefaultSmax;
  double rho_start = 0.25;
  double rho_end = 4.5;
  double step = 0.05;
  double tol = 1e-8;
  std::string out;
  std::string format = "csv";
  std::string fault = "none";
};

struct IoFailure {
  std::string what;
};

// Writes to `path`, or to `out` when no path was given.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text) || !f.flush()) throw IoFailure{"cannot write " + path};
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

const std::vector<std::string> kFaults = {"none", "phase2-csi", "phase3-sign"};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Retrospective interference alignment on the two-cell MIMO IBC"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo campaign for (M,N) = (4,1)");
  sim->add_option("--trials", cfg.trials, "number of trials")->check(CLI::PositiveNumber);
  sim->add_option("--seed", cfg.seed, "base seed; trial k uses seed + k");
  sim->add_option("--tol", cfg.tol, "residual tolerance")->check(CLI::PositiveNumber);
  sim->add_option("--out", cfg.out, "CampaignStats JSON file (default stdout)");
  sim->add_option("--fault", cfg.fault, "fault injection")->check(CLI::IsMember(kFaults));

  auto* audit = app.add_subcommand("audit", "CSIT access audit of the precoder construction");
  audit->add_option("--seed", cfg.seed, "channel seed");
  audit->add_option("--out", cfg.out, "audit JSON file (default stdout)");
  audit->add_option("--fault", cfg.fault, "fault injection")->check(CLI::IsMember(kFaults));

  auto* plan = app.add_subcommand("plan", "optimal (b, S, tau) for general (M,N)");
  plan->add_option("--M", cfg.m, "BS antennas")->required()->check(CLI::PositiveNumber);
  plan->add_option("--N", cfg.n, "UE antennas")->required()->check(CLI::PositiveNumber);
  plan->add_option("--smax", cfg.s_max, "search bound on S1, S2, S3")->check(CLI::PositiveNumber);
  plan->add_option("--out", cfg.out, "plan JSON file (default stdout)");

  auto* sw = app.add_subcommand("sweep", "DoF curves on a rho grid");
  sw->add_option("--rho-start", cfg.rho_start, "first grid point")->check(CLI::PositiveNumber);
  sw->add_option("--rho-end", cfg.rho_end, "last grid point");
  sw->add_option("--step", cfg.step, "grid step")->check(CLI::PositiveNumber);
  sw->add_option("--out", cfg.out, "output file (default stdout)");
  sw->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* ver = app.add_subcommand("verify", "run the acceptance suite");
  ver->add_option("--trials", cfg.trials, "trials per campaign")->check(CLI::PositiveNumber);
  ver->add_option("--seed", cfg.seed, "base seed");
  ver->add_option("--fault", cfg.fault, "fault injection")->check(CLI::IsMember(kFaults));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    const FaultInjection fault = parse_fault(cfg.fault);
    if (*sim) {
      const CampaignStats stats = monte_carlo(cfg.trials, cfg.seed, cfg.tol, 0, fault);
      emit(cfg.out, dump(to_json(stats)), out);
      if (stats.successes == stats.trials) return kOk;
      err << "decode failures at seeds:";
      for (auto s : stats.failures) err << ' ' << s;
      err << "\n";
      return kVerificationFailure;
    }
    if (*audit) {
      const AuditReport rep = csit_audit(cfg.seed, fault);
      emit(cfg.out, dump(to_json(rep)), out);
      if (rep.pass()) return kOk;
      for (const auto& a : rep.accesses) {
        if (a.violation) {
          err << "CSIT violation: op '" << a.op << "' at phase " << a.view_phase
              << " requested phase " << a.phase << " round " << a.round << "\n";
        }
      }
      return kVerificationFailure;
    }
    if (*plan) {
      const DofPlan p = optimize(cfg.m, cfg.n, cfg.s_max);
      emit(cfg.out, dump(to_json(p)), out);
      return kOk;
    }
    if (*sw) {
      if (!(cfg.rho_end > cfg.rho_start)) {
        err << "error: --rho-end must exceed --rho-start\n";
        return kUsage;
      }
      const auto rows = sweep(cfg.rho_start, cfg.rho_end, cfg.step);
      std::ostringstream text;
      if (cfg.format == "csv") {
        write_sweep_csv(text, rows);
      } else {
        ojson arr = ojson::array();
        for (const auto& r : rows) {
          arr.push_back({{"rho", r.rho},
                         {"proposed", r.proposed ? ojson(*r.proposed) : ojson(nullptr)},
                         {"previous", r.previous},
                         {"outer", r.outer},
                         {"no_csit", r.no_csit}});
        }
        text << dump(arr);
      }
      emit(cfg.out, text.str(), out);
      return kOk;
    }
    if (*ver) {
      AcceptanceOptions opt;
      opt.trials = cfg.trials;
      opt.base_seed = cfg.seed;
      opt.fault = fault;
      const auto results = run_acceptance(opt);
      print_acceptance(out, results);
      return all_pass(results) ? kOk : kVerificationFailure;
    }
  } catch (const SearchExhausted& e) {
    err << "error: " << e.what() << "\n";
    return kSearchExhausted;
  } catch (const IoFailure& e) {
    err << "error: " << e.what << "\n";
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kVerificationFailure;
  }
  return kUsage;
}

}  // namespace ria::cli
