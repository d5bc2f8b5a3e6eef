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

#include "himec/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace himec {

std::vector<double> FlowSet::link_usage(const std::vector<double>& rates) const {
  std::vector<double> usage(capacity.size(), 0.0);
  for (std::size_t b = 0; b < flows.size(); ++b)
    for (int m : flows[b].links) usage[m] += rates[b];
  return usage;
}

double FlowSet::objective(const std::vector<double>& rates) const {
  double total = 0.0;
  for (std::size_t b = 0; b < flows.size(); ++b) {
    double term = flows[b].weight * flows[b].load;
    if (term != 0.0) total += term / rates[b];
  }
  return total;
}

std::vector<std::string> FlowSet::validate() const {
  std::vector<std::string> out;
  std::vector<double> floor_usage(capacity.size(), 0.0);
  for (std::size_t m = 0; m < capacity.size(); ++m)
    if (capacity[m] <= 0) out.push_back("link " + std::to_string(m) + " has non-positive capacity");
  for (std::size_t b = 0; b < flows.size(); ++b) {
    const Flow& f = flows[b];
    std::string tag = "flow " + std::to_string(b);
    if (f.lower <= 0) out.push_back(tag + " has non-positive rate floor");
    if (f.upper < f.lower) out.push_back(tag + " has ceiling below floor");
    if (f.load < 0) out.push_back(tag + " has negative load");
    if (f.weight < 0) out.push_back(tag + " has negative weight");
    for (int m : f.links) {
      if (m < 0 || m >= num_links()) {
        out.push_back(tag + " traverses unknown link " + std::to_string(m));
      } else {
        floor_usage[m] += f.lower;
      }
    }
  }
  for (std::size_t m = 0; m < capacity.size(); ++m)
    if (floor_usage[m] > capacity[m])
      out.push_back("rate floors alone exceed capacity of link " + std::to_string(m));
  return out;
}

std::vector<double> primal_from_duals(const FlowSet& fs, const std::vector<double>& duals) {
  for (double g : duals)
    if (g < 0) throw std::invalid_argument("primal_from_duals: negative link dual");
  std::vector<double> rates(fs.flows.size());
  for (std::size_t b = 0; b < fs.flows.size(); ++b) {
    const Flow& f = fs.flows[b];
    double wl = f.weight * f.load;
    if (wl == 0.0) {
      rates[b] = f.lower;  // no traffic keeps the floor
      continue;
    }
    double sigma = 0.0;
    for (int m : f.links) sigma += duals[m];
    if (sigma <= 0.0) {
      rates[b] = f.upper;  // unpriced path, objective decreasing in the rate
      continue;
    }
    rates[b] = std::clamp(std::sqrt(wl / sigma), f.lower, f.upper);
  }
  return rates;
}

KktReport kkt_report(const FlowSet& fs, const std::vector<double>& rates,
                     const std::vector<double>& duals) {
  KktReport rep;
  rep.objective = fs.objective(rates);

  for (std::size_t b = 0; b < fs.flows.size(); ++b) {
    const Flow& f = fs.flows[b];
    double sigma = 0.0;
    for (int m : f.links) sigma += duals[m];
    double r = rates[b];
    double grad = f.weight * f.load / (r * r);  // the -d/dr of the objective term
    double scale = std::max({1.0, grad, sigma});
    const double edge = 1e-9;
    bool at_lower = r <= f.lower * (1 + edge);
    bool at_upper = r >= f.upper * (1 - edge);
    double resid;
    if (at_lower && at_upper) {
      resid = 0.0;  // degenerate box, any multiplier split works
    } else if (at_lower) {
      resid = std::max(0.0, grad - sigma);  // floor multiplier must be >= 0
    } else if (at_upper) {
      resid = std::max(0.0, sigma - grad);  // ceiling multiplier must be >= 0
    } else {
      resid = std::abs(sigma - grad);
    }
    rep.max_stationarity = std::max(rep.max_stationarity, resid / scale);

    double box = std::max(f.lower - r, r - f.upper);
    rep.max_box_violation =
        std::max(rep.max_box_violation, std::max(0.0, box) / std::max(1.0, f.upper));
  }

  std::vector<double> usage = fs.link_usage(rates);
  rep.link_slack.resize(fs.capacity.size());
  rep.link_comp_slack.resize(fs.capacity.size());
  for (std::size_t m = 0; m < fs.capacity.size(); ++m) {
    double slack = fs.capacity[m] - usage[m];
    rep.link_slack[m] = slack;
    rep.max_feasibility =
        std::max(rep.max_feasibility, std::max(0.0, -slack) / fs.capacity[m]);
    double cs = duals[m] * std::abs(slack) / std::max(1.0, duals[m] * fs.capacity[m]);
    rep.link_comp_slack[m] = cs;
    rep.max_comp_slack = std::max(rep.max_comp_slack, cs);
  }
  return rep;
}

namespace {

bool meets(const KktReport& rep, const BandwidthTolerances& tol) {
  return rep.max_stationarity <= tol.stationarity && rep.max_feasibility <= tol.feasibility &&
         rep.max_comp_slack <= tol.comp_slack && rep.max_box_violation <= tol.feasibility;
}

double residual_score(const KktReport& rep, const BandwidthTolerances& tol) {
  return std::max({rep.max_stationarity / tol.stationarity,
                   rep.max_feasibility / tol.feasibility,
                   rep.max_comp_slack / tol.comp_slack,
                   rep.max_box_violation / tol.feasibility});
}

// Per-link flow incidence with multiplicity, so paths that list a link twice
// still price it consistently with primal_from_duals.
struct LinkAdjacency {
  std::vector<std::vector<std::pair<int, int>>> flows;  // per link: (flow, count)
};

LinkAdjacency build_adjacency(const FlowSet& fs) {
  LinkAdjacency adj;
  adj.flows.resize(fs.capacity.size());
  for (std::size_t b = 0; b < fs.flows.size(); ++b) {
    for (int m : fs.flows[b].links) {
      auto& lane = adj.flows[m];
      if (!lane.empty() && lane.back().first == static_cast<int>(b))
        ++lane.back().second;
      else
        lane.emplace_back(static_cast<int>(b), 1);
    }
  }
  return adj;
}

// The rate one flow takes when the duals along its path sum to sigma.
double rate_at(const Flow& f, double sigma) {
  double wl = f.weight * f.load;
  if (wl == 0.0) return f.lower;
  if (sigma <= 0.0) return f.upper;
  return std::clamp(std::sqrt(wl / sigma), f.lower, f.upper);
}

}  // namespace

// Cyclic coordinate ascent on the concave dual. Each pass maximizes the dual
// along one link multiplier at a time: the coordinate optimum is gamma = 0
// when the link stays within capacity at zero price, and otherwise the root
// of usage(gamma) = capacity, found by bisection. Usage is continuous and
// non-increasing in the link's own multiplier, so the root always exists
// below the value that pins every flow to its floor; bisection is therefore
// exact regardless of how the capacity and dual scales relate. Interior
// stationarity and the box conditions hold by construction of the closed-form
// primal, leaving feasibility and complementary slackness as the only
// residuals the sweeps have to drive down.
Allocation solve_allocation(const FlowSet& fs, const BandwidthTolerances& tol,
                            std::vector<double> initial_duals) {
  Allocation out;
  out.duals = std::move(initial_duals);
  out.duals.resize(fs.capacity.size(), 0.0);
  for (double& g : out.duals) g = std::max(0.0, g);

  if (fs.flows.empty()) {
    out.rates.clear();
    out.kkt = kkt_report(fs, out.rates, out.duals);
    out.converged = true;
    return out;
  }

  const LinkAdjacency adj = build_adjacency(fs);

  // sigma at or above wl / lower^2 pins a flow to its floor, so this bounds
  // every coordinate root from above.
  std::vector<double> gamma_hi(fs.capacity.size(), 0.0);
  for (std::size_t m = 0; m < fs.capacity.size(); ++m)
    for (const auto& [b, count] : adj.flows[m]) {
      const Flow& f = fs.flows[b];
      double wl = f.weight * f.load;
      if (wl > 0.0 && f.lower > 0.0)
        gamma_hi[m] = std::max(gamma_hi[m], wl / (f.lower * f.lower));
    }

  std::vector<double> gamma = out.duals;
  // Path-dual sums kept incrementally while one coordinate moves.
  std::vector<double> sigma(fs.flows.size(), 0.0);
  for (std::size_t b = 0; b < fs.flows.size(); ++b)
    for (int m : fs.flows[b].links) sigma[b] += gamma[m];

  std::vector<double> best_gamma = gamma;
  double best_score = std::numeric_limits<double>::infinity();

  for (std::int64_t sweep = 1; sweep <= tol.max_iterations; ++sweep) {
    double max_move = 0.0;
    for (std::size_t m = 0; m < fs.capacity.size(); ++m) {
      const double old = gamma[m];
      auto usage_at = [&](double x) {
        double usage = 0.0;
        for (const auto& [b, count] : adj.flows[m]) {
          const Flow& f = fs.flows[b];
          double s = sigma[b] - count * old + count * x;
          usage += count * rate_at(f, s);
        }
        return usage;
      };

      double next;
      if (usage_at(0.0) <= fs.capacity[m]) {
        next = 0.0;  // free link, complementary slackness wants a zero price
      } else {
        double lo = 0.0, hi = std::max(gamma_hi[m], 1e-300);
        for (int it = 0; it < 200 && usage_at(hi) > fs.capacity[m]; ++it) hi *= 2.0;
        for (int it = 0; it < 120; ++it) {
          double mid = 0.5 * (lo + hi);
          if (usage_at(mid) > fs.capacity[m])
            lo = mid;
          else
            hi = mid;
        }
        next = hi;  // keep the feasible side of the root
      }
      if (next != old) {
        for (const auto& [b, count] : adj.flows[m]) sigma[b] += count * (next - old);
        gamma[m] = next;
        double scale = std::max({1.0, old, next});
        max_move = std::max(max_move, std::abs(next - old) / scale);
      }
    }
    out.iterations = sweep;

    std::vector<double> rates = primal_from_duals(fs, gamma);
    KktReport rep = kkt_report(fs, rates, gamma);
    double score = residual_score(rep, tol);
    if (score < best_score) {
      best_score = score;
      best_gamma = gamma;
    }
    if (meets(rep, tol)) {
      out.rates = std::move(rates);
      out.duals = gamma;
      out.kkt = rep;
      out.converged = true;
      return out;
    }
    // A fixed point that still misses the tolerances will not improve with
    // more sweeps; stop instead of burning the whole budget.
    if (max_move <= 1e-15) break;
  }

  out.duals = best_gamma;
  out.rates = primal_from_duals(fs, out.duals);
  out.kkt = kkt_report(fs, out.rates, out.duals);
  out.converged = false;
  return out;
}

}  // namespace himec
