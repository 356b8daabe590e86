#include "metricfair/worst_case.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <mutex>
#include <thread>

namespace metricfair {

using lp::Relation;
using lp::Term;

void ConsistencySystem::install(lp::LinearProgram& lp) const {
  for (const auto* block : {&ranking, &quadrilateral}) {
    for (const lp::Constraint& row : *block) {
      lp.add_sparse_constraint(row.terms, row.relation, row.rhs);
    }
  }
}

ConsistencySystem build_consistency_system(const Profile& profile) {
  ConsistencySystem sys;
  const std::size_t n = profile.num_agents();
  const std::size_t m = profile.num_alternatives();
  sys.agents = n;
  sys.alternatives = m;
  for (Agent v = 0; v < n; ++v) {
    for (Alternative c = 0; c < m; ++c) {
      sys.nonnegativity.push_back({{{sys.var(v, c), Rational(1)}}, Relation::GreaterEqual, 0, {}});
    }
  }
  for (Agent v = 0; v < n; ++v) {
    auto order = profile.ranking(v).order();
    for (std::size_t i = 0; i + 1 < m; ++i) {
      sys.ranking.push_back({{{sys.var(v, order[i]), Rational(1)},
                              {sys.var(v, order[i + 1]), Rational(-1)}},
                             Relation::LessEqual, 0, {}});
    }
  }
  // d(v,c) <= d(v,c') + d(v',c') + d(v',c)
  for (Agent v = 0; v < n; ++v) {
    for (Agent v2 = 0; v2 < n; ++v2) {
      if (v2 == v) continue;
      for (Alternative c = 0; c < m; ++c) {
        for (Alternative c2 = 0; c2 < m; ++c2) {
          if (c2 == c) continue;
          sys.quadrilateral.push_back({{{sys.var(v, c), Rational(1)},
                                        {sys.var(v, c2), Rational(-1)},
                                        {sys.var(v2, c2), Rational(-1)},
                                        {sys.var(v2, c), Rational(-1)}},
                                       Relation::LessEqual, 0, {}});
        }
      }
    }
  }
  return sys;
}

ReachabilityGraph::ReachabilityGraph(const Profile& profile)
    : m_(profile.num_alternatives()), edges_(m_ * m_, false) {
  for (const Ranking& r : profile.rankings()) {
    auto order = r.order();
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = i + 1; j < m_; ++j) edges_[order[i] * m_ + order[j]] = true;
    }
  }
}

std::vector<bool> ReachabilityGraph::reachable_from(Alternative from) const {
  std::vector<bool> seen(m_, false);
  std::deque<Alternative> queue{from};
  seen.at(from) = true;
  while (!queue.empty()) {
    const Alternative i = queue.front();
    queue.pop_front();
    for (Alternative j = 0; j < m_; ++j) {
      if (!seen[j] && edges_[i * m_ + j]) {
        seen[j] = true;
        queue.push_back(j);
      }
    }
  }
  return seen;
}

Boundedness boundedness(const Profile& profile, const AlternativeSet& S, const AlternativeSet& T) {
  if (S.size() != T.size()) throw std::invalid_argument("boundedness needs |S| = |T|");
  S.check_within(profile.num_alternatives());
  T.check_within(profile.num_alternatives());
  const ReachabilityGraph graph(profile);
  for (Alternative c : S) {
    const std::vector<bool> seen = graph.reachable_from(c);
    if (std::none_of(T.begin(), T.end(), [&](Alternative t) { return seen[t]; })) {
      return Boundedness::Unbounded;
    }
  }
  return Boundedness::Bounded;
}

Rational big_m(std::size_t m, std::size_t ell) {
  if (m == 0) throw std::invalid_argument("big_m needs m >= 1");
  return Rational(static_cast<unsigned long>(ell)) * integer_power(3, m);
}

lp::LinearProgram build_distortion_lp(const ConsistencySystem& system, const AlternativeSet& S,
                                      const AlternativeSet& T) {
  lp::LinearProgram lp(system.num_vars());
  std::vector<Term> normalization;
  for (Agent v = 0; v < system.agents; ++v) {
    for (Alternative c : S) lp.set_objective_coef(system.var(v, c), 1);
    for (Alternative c : T) normalization.push_back({system.var(v, c), Rational(1)});
  }
  lp.add_sparse_constraint(std::move(normalization), Relation::LessEqual, 1, "normalize");
  system.install(lp);
  return lp;
}

FairnessLayout fairness_layout(const ConsistencySystem& system) {
  return FairnessLayout{system.agents, system.num_vars()};
}

lp::MilpProblem build_fairness_milp(const ConsistencySystem& system, const AlternativeSet& S,
                                    const AlternativeSet& T, std::size_t k, const Rational& M) {
  const std::size_t n = system.agents;
  const FairnessLayout at = fairness_layout(system);
  lp::MilpProblem problem{lp::LinearProgram(at.threshold() + 1), {}};
  lp::LinearProgram& lp = problem.base;

  std::vector<Term> selected, normalization{{at.threshold(), Rational(static_cast<unsigned long>(k))}};
  for (Agent i = 0; i < n; ++i) {
    lp.set_objective_coef(at.top(i), 1);
    std::vector<Term> cap{{at.top(i), Rational(1)}};
    for (Alternative c : S) cap.push_back({system.var(i, c), Rational(-1)});
    lp.add_sparse_constraint(std::move(cap), Relation::LessEqual, 0);
    lp.add_sparse_constraint({{at.top(i), Rational(1)}, {at.selector(i), -M}}, Relation::LessEqual, 0);
    std::vector<Term> excess{{at.excess(i), Rational(1)}, {at.threshold(), Rational(1)}};
    for (Alternative c : T) excess.push_back({system.var(i, c), Rational(-1)});
    lp.add_sparse_constraint(std::move(excess), Relation::GreaterEqual, 0);
    selected.push_back({at.selector(i), Rational(1)});
    normalization.push_back({at.excess(i), Rational(1)});
    lp.set_upper_bound(at.selector(i), Rational(1));
    problem.binary_vars.push_back(at.selector(i));
  }
  lp.add_sparse_constraint(std::move(selected), Relation::LessEqual,
                           Rational(static_cast<unsigned long>(k)), "choose_k");
  lp.add_sparse_constraint(std::move(normalization), Relation::LessEqual, 1, "normalize");
  system.install(lp);
  return problem;
}

namespace {

void check_guardrails(const Profile& profile, const AlternativeSet& S, const EngineOptions& options) {
  S.check_within(profile.num_alternatives());
  if (options.force) return;
  if (profile.num_agents() > 16) {
    throw GuardrailError("N = " + std::to_string(profile.num_agents()) +
                         " exceeds 16; pass --force to run anyway");
  }
  if (binomial(profile.num_alternatives(), S.size()) > 10000) {
    throw GuardrailError("more than 10^4 adversary sets; pass --force to run anyway");
  }
}

// Scales so the smallest nonzero distance is 1.
CostMatrix rescale(CostMatrix d) {
  std::optional<Rational> smallest;
  for (Agent v = 0; v < d.num_agents(); ++v) {
    for (Alternative c = 0; c < d.num_alternatives(); ++c) {
      const Rational& x = d.at(v, c);
      if (sgn(x) > 0 && (!smallest || x < *smallest)) smallest = x;
    }
  }
  if (!smallest) return d;
  return d.scaled(1 / *smallest);
}

CostMatrix extract(const ConsistencySystem& system, const std::vector<Rational>& values) {
  CostMatrix d(system.agents, system.alternatives);
  for (Agent v = 0; v < system.agents; ++v) {
    for (Alternative c = 0; c < system.alternatives; ++c) d.at(v, c) = values[system.var(v, c)];
  }
  return rescale(std::move(d));
}

// The first adversary (in sweep order) that makes the ratio unbounded.
std::optional<AlternativeSet> first_unbounded(const Profile& profile, const AlternativeSet& S,
                                              const std::vector<AlternativeSet>& adversaries) {
  for (const AlternativeSet& T : adversaries) {
    if (boundedness(profile, S, T) == Boundedness::Unbounded) return T;
  }
  return std::nullopt;
}

WorstCaseResult unbounded_result(WorstCaseObjective objective, const AlternativeSet& S,
                                 AlternativeSet T) {
  WorstCaseResult r;
  r.objective = objective;
  r.value = Ratio::infinity();
  r.status = Boundedness::Unbounded;
  r.adversary = std::move(T);
  r.set_policy = S.size() > 1;
  return r;
}

struct Subproblem {
  std::size_t k;
  const AlternativeSet* T;
};

struct Outcome {
  lp::Solution solution;
  bool solved = false;
};

// Runs `solve` over every subproblem and folds with a deterministic max:
// larger value wins, earlier index wins ties. Sequential sweeps feed the best
// value so far in as a cutoff; parallel sweeps solve everything in full.
template <class Solve>
std::optional<std::size_t> sweep(const std::vector<Subproblem>& subs, const EngineOptions& options,
                                 Solve solve, std::vector<Outcome>& outcomes) {
  outcomes.assign(subs.size(), {});
  if (options.jobs <= 1) {
    std::optional<Rational> best = Rational(1);  // the trivial floor
    std::optional<std::size_t> winner;
    for (std::size_t i = 0; i < subs.size(); ++i) {
      outcomes[i].solution = solve(subs[i], options.use_cutoff ? best : std::nullopt);
      outcomes[i].solved = true;
      const lp::Solution& sol = outcomes[i].solution;
      if (sol.status == lp::Status::Optimal && sol.objective > *best) {
        best = sol.objective;
        winner = i;
      }
    }
    return winner;
  }
  std::atomic<std::size_t> next{0};
  std::mutex failure_lock;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < subs.size();) {
      try {
        outcomes[i].solution = solve(subs[i], std::nullopt);
        outcomes[i].solved = true;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_lock);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(options.jobs, subs.size()); ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  Rational best = 1;
  std::optional<std::size_t> winner;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const lp::Solution& sol = outcomes[i].solution;
    if (sol.status == lp::Status::Optimal && sol.objective > best) {
      best = sol.objective;
      winner = i;
    }
  }
  return winner;
}

void check_status(const lp::Solution& sol) {
  if (sol.status == lp::Status::Unbounded || sol.status == lp::Status::Infeasible) {
    throw std::logic_error(std::string("bounded subproblem came back ") + lp::to_string(sol.status));
  }
}

}  // namespace

WorstCaseResult worst_distortion(const Profile& profile, const AlternativeSet& S,
                                 const EngineOptions& options) {
  check_guardrails(profile, S, options);
  const std::size_t m = profile.num_alternatives();
  std::vector<AlternativeSet> adversaries;
  for (AlternativeSet& T : all_subsets(m, S.size())) {
    if (T != S) adversaries.push_back(std::move(T));
  }
  if (auto T = first_unbounded(profile, S, adversaries)) {
    return unbounded_result(WorstCaseObjective::Distortion, S, std::move(*T));
  }

  const ConsistencySystem system = build_consistency_system(profile);
  std::vector<Subproblem> subs;
  for (const AlternativeSet& T : adversaries) subs.push_back({1, &T});
  // An LP has no cutoff; its value is compared after the fact.
  auto solve = [&](const Subproblem& sub, const std::optional<Rational>&) {
    lp::Solution sol = lp::solve_lp(build_distortion_lp(system, S, *sub.T), {options.mode, {}});
    check_status(sol);
    return sol;
  };
  std::vector<Outcome> outcomes;
  const std::optional<std::size_t> winner = sweep(subs, options, solve, outcomes);

  WorstCaseResult r;
  r.objective = WorstCaseObjective::Distortion;
  for (const Outcome& o : outcomes) {
    r.subproblems += o.solved;
    r.nodes += o.solution.node_count;
  }
  if (!winner) {
    r.value = Rational(1);
    r.adversary = S;
    r.witness = CostMatrix(profile.num_agents(), m, Rational(1));
  } else {
    r.value = outcomes[*winner].solution.objective;
    r.adversary = *subs[*winner].T;
    r.witness = extract(system, outcomes[*winner].solution.values);
  }
  return r;
}

WorstCaseResult worst_fairness(const Profile& profile, const AlternativeSet& S,
                               const EngineOptions& options) {
  check_guardrails(profile, S, options);
  const std::size_t n = profile.num_agents();
  const std::size_t m = profile.num_alternatives();
  std::vector<AlternativeSet> adversaries = all_subsets(m, S.size());
  if (auto T = first_unbounded(profile, S, adversaries)) {
    return unbounded_result(WorstCaseObjective::Fairness, S, std::move(*T));
  }

  const ConsistencySystem system = build_consistency_system(profile);
  const Rational M = big_m(m, S.size());
  std::vector<Subproblem> subs;
  for (std::size_t k = 1; k <= n; ++k) {
    for (const AlternativeSet& T : adversaries) {
      if (T != S) subs.push_back({k, &T});
    }
  }
  auto solve = [&](const Subproblem& sub, const std::optional<Rational>& cutoff) {
    lp::Solution sol =
        lp::solve_milp(build_fairness_milp(system, S, *sub.T, sub.k, M), {options.mode, cutoff});
    check_status(sol);
    return sol;
  };
  std::vector<Outcome> outcomes;
  const std::optional<std::size_t> winner = sweep(subs, options, solve, outcomes);

  WorstCaseResult r;
  r.objective = WorstCaseObjective::Fairness;
  for (const Outcome& o : outcomes) {
    r.subproblems += o.solved;
    r.nodes += o.solution.node_count;
  }
  if (!winner) {
    r.value = Rational(1);
    r.adversary = S;
    r.k_star = 1;
    r.witness = CostMatrix(n, m, Rational(1));
  } else {
    r.value = outcomes[*winner].solution.objective;
    r.adversary = *subs[*winner].T;
    r.k_star = subs[*winner].k;
    r.witness = extract(system, outcomes[*winner].solution.values);
  }
  return r;
}

nlohmann::json to_json(const WorstCaseResult& result, int decimal_digits) {
  auto render = [decimal_digits](const Rational& v) {
    return decimal_digits >= 0 ? to_decimal(v, decimal_digits) : to_string(v);
  };
  nlohmann::json out;
  out["objective"] = result.objective == WorstCaseObjective::Distortion ? "distortion" : "fairness";
  out["value"] = decimal_digits >= 0 ? result.value.decimal(decimal_digits) : result.value.str();
  out["status"] = result.status == Boundedness::Bounded ? "Bounded" : "Unbounded";
  if (result.objective == WorstCaseObjective::Fairness) {
    out["k_star"] = result.k_star;
  } else {
    out["k_star"] = nullptr;
  }
  out["adversary"] = std::vector<std::size_t>(result.adversary.begin(), result.adversary.end());
  if (result.witness) {
    nlohmann::json rows = nlohmann::json::array();
    for (Agent v = 0; v < result.witness->num_agents(); ++v) {
      nlohmann::json row = nlohmann::json::array();
      for (Alternative c = 0; c < result.witness->num_alternatives(); ++c) {
        row.push_back(render(result.witness->at(v, c)));
      }
      rows.push_back(std::move(row));
    }
    out["witness"] = std::move(rows);
  } else {
    out["witness"] = nullptr;
  }
  out["subproblems"] = result.subproblems;
  out["nodes"] = result.nodes;
  out["set_policy"] = result.set_policy;
  return out;
}

}  // namespace metricfair
