// Copyright 2026 the himec-sim authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Exit codes, kept stable for scripts:
//   0  success
//   2  scenario unreadable, unparsable, or structurally invalid
//   3  exact solver budget exhausted while --strict was set
//   4  output could not be written
// Flag misuse exits with CLI11's own nonzero codes.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "himec/records.hpp"

namespace {

constexpr int kExitBadScenario = 2;
constexpr int kExitBudget = 3;
constexpr int kExitIo = 4;

struct CommonOpts {
  std::string scenario_path;
  std::string out_dir;
  std::int64_t seed = -1;             // -1 keeps the scenario's seed
  int bids = -1;                      // -1 keeps the scenario's schedule
  int frames = -1;
  std::string mix;                    // "a:b:c" ratio override
  std::int64_t node_budget = -1;
  std::int64_t time_budget_ms = -1;
  double kkt_tol = -1;
  std::int64_t max_iterations = -1;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_generator) {
  cmd->add_option("scenario", o.scenario_path, "Scenario JSON file")->required();
  const char* env_default = std::getenv("HIMEC_OUT_DIR");
  o.out_dir = env_default ? env_default : ".";
  cmd->add_option("-o,--out", o.out_dir, "Output directory (env HIMEC_OUT_DIR)");
  if (with_generator) {
    cmd->add_option("--seed", o.seed, "Seed override");
    cmd->add_option("--bids", o.bids, "Bid count override");
    cmd->add_option("--mix", o.mix, "VM mix ratio override, e.g. 2.5:1.5:1");
  }
  cmd->add_option("--node-budget", o.node_budget, "Exact solver node budget");
  cmd->add_option("--time-budget-ms", o.time_budget_ms, "Exact solver time budget");
  cmd->add_option("--kkt-tol", o.kkt_tol, "Bandwidth KKT tolerance (all three families)");
  cmd->add_option("--max-iterations", o.max_iterations, "Bandwidth iteration budget");
}

himec::Scenario load_or_exit(const CommonOpts& o) {
  himec::Scenario sc;
  try {
    sc = himec::load_scenario(o.scenario_path);
  } catch (const himec::ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    std::exit(kExitBadScenario);
  }
  if (o.seed >= 0) sc.generator.seed = static_cast<std::uint64_t>(o.seed);
  if (o.bids >= 0) sc.generator.bid_schedule = {o.bids};
  if (o.frames >= 1) sc.generator.frames = o.frames;
  if (!o.mix.empty()) {
    std::vector<double> mix;
    std::stringstream ss(o.mix);
    std::string part;
    while (std::getline(ss, part, ':')) {
      try {
        mix.push_back(std::stod(part));
      } catch (const std::exception&) {
        mix.clear();
        break;
      }
    }
    if (mix.size() != sc.catalog.vm_types.size() ||
        std::any_of(mix.begin(), mix.end(), [](double m) { return !(m > 0); })) {
      std::cerr << "scenario error: --mix needs one positive ratio per VM type\n";
      std::exit(kExitBadScenario);
    }
    sc.generator.mix = mix;
  }
  if (o.node_budget > 0) sc.limits.node_budget = o.node_budget;
  if (o.time_budget_ms > 0) sc.limits.time_budget_ms = o.time_budget_ms;
  if (o.kkt_tol > 0) {
    sc.bandwidth.tolerances.feasibility = o.kkt_tol;
    sc.bandwidth.tolerances.stationarity = o.kkt_tol;
    sc.bandwidth.tolerances.comp_slack = o.kkt_tol;
  }
  if (o.max_iterations > 0) sc.bandwidth.tolerances.max_iterations = o.max_iterations;

  const std::vector<std::string> violations = himec::validate(sc.topology, sc.catalog);
  if (!violations.empty()) {
    for (const std::string& v : violations) std::cerr << "invalid scenario: " << v << "\n";
    std::exit(kExitBadScenario);
  }
  return sc;
}

void write_or_exit(const std::string& dir, const std::string& file,
                   const std::string& content) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::cerr << "io error: cannot create " << dir << ": " << ec.message() << "\n";
    std::exit(kExitIo);
  }
  try {
    himec::write_text_atomic(dir + "/" + file, content);
  } catch (const std::exception& e) {
    std::cerr << "io error: " << e.what() << "\n";
    std::exit(kExitIo);
  }
}

himec::SolverChoice parse_solver(const std::string& s) {
  if (s == "heuristic") return himec::SolverChoice::heuristic;
  if (s == "exact") return himec::SolverChoice::exact;
  return himec::SolverChoice::both;
}

const char* solver_name(himec::SolverChoice c) {
  switch (c) {
    case himec::SolverChoice::heuristic: return "heuristic";
    case himec::SolverChoice::exact: return "exact";
    default: return "both";
  }
}

int cmd_validate(const CommonOpts& o) {
  himec::Scenario sc;
  try {
    sc = himec::load_scenario(o.scenario_path);
  } catch (const himec::ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return kExitBadScenario;
  }
  const std::vector<std::string> violations = himec::validate(sc.topology, sc.catalog);
  for (const std::string& v : violations) std::cout << v << "\n";
  if (!violations.empty()) return kExitBadScenario;
  std::cout << "ok: " << sc.name << " (" << sc.topology.num_aps() << " APs, "
            << sc.topology.num_cloudlets() << " cloudlets, "
            << sc.catalog.vm_types.size() << " VM types)\n";
  return 0;
}

int cmd_auction(const CommonOpts& o, const std::string& solver, bool strict) {
  himec::Scenario sc = load_or_exit(o);
  const himec::SolverChoice choice = parse_solver(solver);
  himec::Simulation sim(sc);
  himec::FrameOutput frame = sim.run_frame(choice);

  std::vector<himec::FrameRecord> frames{frame.record};
  write_or_exit(o.out_dir, "frames.csv", himec::frames_csv(frames));
  write_or_exit(o.out_dir, "prices.csv",
                himec::prices_csv(frames, sc.topology, sc.catalog));
  write_or_exit(o.out_dir, "timings.csv", himec::timings_csv(frames));
  write_or_exit(o.out_dir, "solution.csv",
                himec::solution_csv(frame.solution, frame.book, sc.topology, sc.catalog));
  // The bid list makes the run replayable through the bandwidth-only mode.
  try {
    himec::write_bids_csv(o.out_dir + "/bids.csv", frame.book.bids, sc.topology,
                          sc.catalog);
  } catch (const std::exception& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  }
  write_or_exit(o.out_dir, "summary.json",
                himec::summary_json(sc.name, sc.generator.seed, solver_name(choice), frames,
                                    {}));

  if (frame.record.ran_heuristic)
    std::cout << "heuristic profit " << himec::money_to_string(frame.record.heuristic_profit.profit())
              << " served " << frame.record.heuristic_served << "/" << frame.record.submitted
              << "\n";
  if (frame.record.ran_exact)
    std::cout << "exact profit " << himec::money_to_string(frame.record.exact_profit.profit())
              << " served " << frame.record.exact_served << "/" << frame.record.submitted
              << (frame.record.exact_optimal ? " (optimal)" : " (budget hit)") << "\n";
  if (strict && frame.record.ran_exact && !frame.record.exact_optimal) return kExitBudget;
  return 0;
}

int cmd_simulate(const CommonOpts& o, const std::string& solver, bool strict,
                 bool with_slots) {
  himec::Scenario sc = load_or_exit(o);
  const himec::SolverChoice choice = parse_solver(solver);
  himec::Simulation sim(sc);

  std::vector<himec::FrameRecord> frames;
  std::vector<himec::SlotRecord> slots;
  bool budget_hit = false;
  for (int f = 0; f < sc.generator.frames; ++f) {
    himec::FrameOutput out = sim.run_frame(choice);
    budget_hit = budget_hit || (out.record.ran_exact && !out.record.exact_optimal);
    frames.push_back(out.record);
    if (with_slots) {
      std::vector<himec::SlotRecord> s = sim.run_slots(out);
      slots.insert(slots.end(), s.begin(), s.end());
    }
  }

  write_or_exit(o.out_dir, "frames.csv", himec::frames_csv(frames));
  write_or_exit(o.out_dir, "prices.csv",
                himec::prices_csv(frames, sc.topology, sc.catalog));
  write_or_exit(o.out_dir, "timings.csv", himec::timings_csv(frames));
  if (with_slots)
    write_or_exit(o.out_dir, "slots.csv", himec::slots_csv(slots, sc.topology));
  write_or_exit(o.out_dir, "summary.json",
                himec::summary_json(sc.name, sc.generator.seed, solver_name(choice), frames,
                                    slots));

  std::cout << "wrote " << frames.size() << " frame record(s)";
  if (with_slots) std::cout << " and " << slots.size() << " slot record(s)";
  std::cout << " to " << o.out_dir << "\n";
  return strict && budget_hit ? kExitBudget : 0;
}

int cmd_compare(const CommonOpts& o, const std::string& ladder_arg,
                const std::string& seeds_arg, int workers) {
  himec::Scenario base = load_or_exit(o);

  auto parse_ints = [](const std::string& s) {
    std::vector<std::int64_t> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (part.empty()) continue;
      out.push_back(std::stoll(part));
    }
    return out;
  };
  std::vector<std::int64_t> ladder, seeds;
  try {
    ladder = parse_ints(ladder_arg);
    seeds = parse_ints(seeds_arg);
  } catch (const std::exception&) {
    std::cerr << "scenario error: --bids and --seeds must be comma-separated integers\n";
    return kExitBadScenario;
  }
  if (seeds.empty()) seeds.push_back(static_cast<std::int64_t>(base.generator.seed));

  struct Job {
    std::int64_t bids;
    std::int64_t seed;
    himec::FrameRecord record;
  };
  std::vector<Job> jobs;
  for (std::int64_t b : ladder)
    for (std::int64_t s : seeds) jobs.push_back({b, s, {}});

  // Jobs are independent; each owns a scenario copy, so results are the same
  // regardless of worker count or completion order.
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      himec::Scenario sc = base;
      sc.generator.bid_schedule = {static_cast<int>(jobs[i].bids)};
      sc.generator.seed = static_cast<std::uint64_t>(jobs[i].seed);
      himec::Simulation sim(sc);
      jobs[i].record = sim.run_frame(himec::SolverChoice::both).record;
    }
  };
  if (workers <= 0)
    workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();

  std::ostringstream table;
  table << "bids,seed,heuristic_profit,exact_profit,exact_optimal,heuristic_ratio,"
           "exact_ratio,heuristic_served,exact_served,heuristic_ms,exact_ms\n";
  std::ostringstream prices;
  prices << "bids,seed,ap,vm_type,pair_bids,heuristic_k,heuristic_omega,heuristic_price,"
            "exact_k,exact_price\n";
  for (const Job& j : jobs) {
    const himec::FrameRecord& r = j.record;
    char hms[40], xms[40];
    std::snprintf(hms, sizeof(hms), "%.10g",
                  r.heuristic_pricing_ms + r.heuristic_distribution_ms);
    std::snprintf(xms, sizeof(xms), "%.10g", r.exact_ms);
    char hratio[40], xratio[40];
    std::snprintf(hratio, sizeof(hratio), "%.10g", r.heuristic_ratio);
    std::snprintf(xratio, sizeof(xratio), "%.10g", r.exact_ratio);
    table << j.bids << ',' << j.seed << ','
          << himec::money_to_string(r.heuristic_profit.profit()) << ','
          << himec::money_to_string(r.exact_profit.profit()) << ','
          << (r.exact_optimal ? "true" : "false") << ',' << hratio << ',' << xratio << ','
          << r.heuristic_served << ',' << r.exact_served << ',' << hms << ',' << xms
          << '\n';
    for (const himec::PairPriceRecord& p : r.prices)
      prices << j.bids << ',' << j.seed << ',' << base.topology.ap_names[p.ap] << ','
             << base.catalog.vm_types[p.vm_type].name << ',' << p.bids << ','
             << p.heuristic_k << ',' << himec::money_to_string(p.heuristic_omega) << ','
             << himec::money_to_string(p.heuristic_price) << ',' << p.exact_k << ','
             << himec::money_to_string(p.exact_price) << '\n';
  }
  write_or_exit(o.out_dir, "compare.csv", table.str());
  write_or_exit(o.out_dir, "compare_prices.csv", prices.str());
  std::cout << "wrote " << jobs.size() << " comparison row(s) to " << o.out_dir << "\n";
  return 0;
}

int cmd_bandwidth(const CommonOpts& o, const std::string& bids_path,
                  const std::string& solution_path, int slots_override) {
  himec::Scenario sc = load_or_exit(o);
  himec::BidBook book;
  himec::Solution sol;
  try {
    const std::vector<himec::Bid> bids =
        himec::read_bids_csv(bids_path, sc.topology, sc.catalog);
    book = himec::build_bid_book(bids, sc.topology, sc.catalog);
    sol = himec::read_solution_csv(solution_path, book, sc.topology, sc.catalog);
  } catch (const std::exception& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return kExitBadScenario;
  }
  const std::vector<himec::Violation> violations =
      himec::check_feasibility(sol, book, sc.topology, sc.catalog);
  if (!violations.empty()) {
    for (const himec::Violation& v : violations)
      std::cerr << "invalid solution: " << v.constraint << " " << v.detail << "\n";
    return kExitBadScenario;
  }

  if (slots_override > 0) {
    // One frame, fewer slots: shrink the frame instead of touching slot_ms.
    sc.topology.frame_ms = sc.topology.slot_ms * slots_override;
  }
  himec::Simulation sim(sc);
  himec::FrameOutput frame;
  frame.book = std::move(book);
  frame.solution = std::move(sol);
  frame.record.frame = 0;
  const std::vector<himec::SlotRecord> slots = sim.run_slots(frame);

  write_or_exit(o.out_dir, "slots.csv", himec::slots_csv(slots, sc.topology));
  write_or_exit(o.out_dir, "summary.json",
                himec::summary_json(sc.name, sc.generator.seed, "bandwidth", {}, slots));
  std::size_t converged = 0;
  for (const himec::SlotRecord& s : slots) converged += s.converged ? 1 : 0;
  std::cout << "wrote " << slots.size() << " slot record(s), " << converged
            << " converged\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical edge-computing auction and bandwidth simulator"};
  app.require_subcommand(1);

  CommonOpts vo;
  CLI::App* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("scenario", vo.scenario_path, "Scenario JSON file")->required();

  CommonOpts ao;
  std::string a_solver = "heuristic";
  bool a_strict = false;
  CLI::App* auction = app.add_subcommand("auction", "Run a single auction frame");
  add_common(auction, ao, true);
  auction->add_option("--solver", a_solver, "heuristic|exact|both")
      ->check(CLI::IsMember({"heuristic", "exact", "both"}));
  auction->add_flag("--strict", a_strict, "Exit 3 when the exact budget is exhausted");

  CommonOpts so;
  std::string s_solver = "heuristic";
  bool s_strict = false;
  bool s_no_slots = false;
  CLI::App* simulate = app.add_subcommand("simulate", "Run frames and bandwidth slots");
  add_common(simulate, so, true);
  simulate->add_option("--frames", so.frames, "Frame count override");
  simulate->add_option("--solver", s_solver, "heuristic|exact|both")
      ->check(CLI::IsMember({"heuristic", "exact", "both"}));
  simulate->add_flag("--strict", s_strict, "Exit 3 when the exact budget is exhausted");
  simulate->add_flag("--no-slots", s_no_slots, "Skip the bandwidth slots");

  CommonOpts co;
  std::string c_ladder;
  std::string c_seeds;
  int c_workers = 0;
  CLI::App* compare = app.add_subcommand("compare", "Heuristic vs exact over a bid ladder");
  add_common(compare, co, false);
  compare->add_option("--bids", c_ladder, "Comma-separated bid counts")->required();
  compare->add_option("--seeds", c_seeds, "Comma-separated seeds");
  compare->add_option("--workers", c_workers, "Worker threads (default: hardware)");

  CommonOpts bo;
  std::string b_bids, b_solution;
  int b_slots = 0;
  CLI::App* bandwidth =
      app.add_subcommand("bandwidth", "Bandwidth slots for a saved auction solution");
  add_common(bandwidth, bo, false);
  bandwidth->add_option("--bids-file", b_bids, "bids.csv from an auction run")->required();
  bandwidth->add_option("--solution", b_solution, "solution.csv from an auction run")
      ->required();
  bandwidth->add_option("--slots", b_slots, "Slot count override");

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed()) return cmd_validate(vo);
  if (auction->parsed()) return cmd_auction(ao, a_solver, a_strict);
  if (simulate->parsed()) return cmd_simulate(so, s_solver, s_strict, !s_no_slots);
  if (compare->parsed()) return cmd_compare(co, c_ladder, c_seeds, c_workers);
  if (bandwidth->parsed()) return cmd_bandwidth(bo, b_bids, b_solution, b_slots);
  return 0;
}
