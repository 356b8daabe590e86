#include "metricfair/bench.hpp"

#include <atomic>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "metricfair/rules.hpp"
#include "metricfair/worst_case.hpp"

namespace metricfair {

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Report: return "REPORT";
  }
  return "?";
}

const std::vector<std::string>& suite_ids() {
  static const std::vector<std::string> ids{"dist-le-fair", "gap-below-two",   "gap-tightness",
                                            "floor3",       "copeland5",       "recursive-copeland",
                                            "scoring-trends"};
  return ids;
}

Profile corpus_profile(std::uint64_t seed, std::size_t index, std::size_t min_agents,
                       std::size_t max_agents, std::size_t min_alternatives,
                       std::size_t max_alternatives) {
  Rng rng(derive_seed(seed, index));
  const std::size_t n = min_agents + rng.below(max_agents - min_agents + 1);
  const std::size_t m = min_alternatives + rng.below(max_alternatives - min_alternatives + 1);
  return random_profile(n, m, rng);
}

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& body) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex lock;
  std::optional<std::size_t> failed_at;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> guard(lock);
        if (!failed_at || i < *failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(jobs, count); ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

std::string render(const std::optional<Ratio>& r, int digits) {
  if (!r) return "-";
  return digits >= 0 ? r->decimal(digits) : r->str();
}

TheoremReport base_row(const std::string& suite, std::string instance, const Profile& p,
                       std::size_t ell) {
  TheoremReport row;
  row.suite = suite;
  row.instance = std::move(instance);
  row.agents = p.num_agents();
  row.alternatives = p.num_alternatives();
  row.ell = ell;
  row.profile = p;
  return row;
}

struct Measured {
  WorstCaseResult distortion;
  WorstCaseResult fairness;
};

Measured measure(const Profile& p, const AlternativeSet& S, const EngineOptions& options) {
  return {worst_distortion(p, S, options), worst_fairness(p, S, options)};
}

void record(TheoremReport& row, const Measured& m) {
  row.distortion = m.distortion.value;
  row.fairness = m.fairness.value;
  row.witness = m.fairness.witness ? m.fairness.witness : m.distortion.witness;
}

void fail_unless(TheoremReport& row, bool ok, const std::string& why) {
  if (!ok) {
    row.verdict = Verdict::Fail;
    row.note += (row.note.empty() ? "" : "; ") + why;
  }
}

// f - 2 < d, with infinities: holds when d is infinite, fails when only f is.
bool gap_below_two(const Ratio& d, const Ratio& f) {
  if (d.is_infinite()) return true;
  if (f.is_infinite()) return false;
  return f.value() - 2 < d.value();
}

bool at_most(const Ratio& x, const Rational& bound) { return !x.is_infinite() && x.value() <= bound; }

constexpr std::size_t kCorpusMinAgents = 1, kCorpusMaxAgents = 5;
constexpr std::size_t kCorpusMinAlternatives = 2, kCorpusMaxAlternatives = 4;

using Rows = std::vector<TheoremReport>;

Rows corpus_instance(const SuiteConfig& cfg, std::size_t i, const EngineOptions& opts) {
  const Profile p = corpus_profile(cfg.seed, i, kCorpusMinAgents, kCorpusMaxAgents,
                                   kCorpusMinAlternatives, kCorpusMaxAlternatives);
  const std::string id = "p" + std::to_string(i);
  Rows rows;
  if (cfg.suite == "copeland5") {
    const Alternative w = copeland(p).winner();
    TheoremReport row = base_row(cfg.suite, id + "-c" + std::to_string(w), p, 1);
    const Measured m = measure(p, AlternativeSet::singleton(w), opts);
    record(row, m);
    row.bound = "distortion<=5 fairness<=5";
    fail_unless(row, at_most(m.distortion.value, 5), "distortion above 5");
    fail_unless(row, at_most(m.fairness.value, 5), "fairness above 5");
    rows.push_back(std::move(row));
    return rows;
  }
  for (Alternative c = 0; c < p.num_alternatives(); ++c) {
    const AlternativeSet S = AlternativeSet::singleton(c);
    TheoremReport row = base_row(cfg.suite, id + "-c" + std::to_string(c), p, 1);
    if (cfg.suite == "floor3") {
      // Some agent must rank c below its favourite.
      std::optional<Agent> dissenter;
      for (Agent v = 0; v < p.num_agents() && !dissenter; ++v) {
        if (p.ranking(v).top() != c) dissenter = v;
      }
      if (!dissenter) continue;
      const WorstCaseResult f = worst_fairness(p, S, opts);
      row.fairness = f.value;
      row.witness = f.witness;
      const CostMatrix d = floor_metric(p, c, *dissenter, p.ranking(*dissenter).top());
      Rational best_other = phi_k(AlternativeSet::singleton(0), 1, d);
      for (Alternative x = 1; x < p.num_alternatives(); ++x) {
        best_other = std::min(best_other, phi_k(AlternativeSet::singleton(x), 1, d));
      }
      const Ratio certified = Ratio::divide(phi_k(S, 1, d), best_other);
      row.bound = "fairness>=3 floor-metric-k1=3";
      row.note = "floor metric k=1 ratio " + certified.str();
      fail_unless(row, f.value >= Ratio(Rational(3)), "fairness below 3");
      fail_unless(row, certified == Ratio(Rational(3)), "floor metric ratio is not 3");
    } else {
      const Measured m = measure(p, S, opts);
      record(row, m);
      if (cfg.suite == "dist-le-fair") {
        row.bound = "distortion<=fairness";
        fail_unless(row, m.distortion.value <= m.fairness.value, "distortion exceeds fairness");
      } else {
        row.bound = "fairness-distortion<2 and <=2(N-1)/N";
        fail_unless(row, gap_below_two(m.distortion.value, m.fairness.value), "gap not below 2");
        if (!m.distortion.value.is_infinite() && !m.fairness.value.is_infinite()) {
          const Rational n(static_cast<unsigned long>(p.num_agents()));
          fail_unless(row, m.fairness.value.value() <= m.distortion.value.value() + 2 * (n - 1) / n,
                      "gap exceeds 2(N-1)/N");
        }
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::size_t> tightness_sizes(std::size_t count) {
  std::vector<std::size_t> sizes;
  for (std::size_t n : {2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 30, 40, 50, 75, 100}) {
    if (n <= count) sizes.push_back(n);
  }
  return sizes;
}

Rows tightness_instance(const SuiteConfig& cfg, std::size_t n, const EngineOptions& opts) {
  const Instance inst = line_family(n);
  const AlternativeSet S = AlternativeSet::singleton(0);
  TheoremReport row = base_row(cfg.suite, "line-N" + std::to_string(n), inst.profile, 1);
  EngineOptions forced = opts;
  forced.force = true;  // large N is the point of this suite; only the LP is solved
  const WorstCaseResult d = worst_distortion(inst.profile, S, forced);
  const FairnessRatio fixed = ratio_fairness(S, inst.costs);
  row.distortion = d.value;
  row.fairness = fixed.value;
  row.witness = inst.costs;
  const Rational N(static_cast<unsigned long>(n));
  const Rational expected = (N + 1) / (N - 1);
  const Rational target = 2 - 2 / (N - 1);
  row.bound = "gap>=2-2/(N-1)";
  row.note = "fairness is the fixed-witness lower bound";
  fail_unless(row, d.value == Ratio(expected), "distortion is not (N+1)/(N-1)");
  fail_unless(row, !fixed.value.is_infinite() && !d.value.is_infinite() &&
                       fixed.value.value() - d.value.value() >= target,
              "gap below 2-2/(N-1)");
  return {std::move(row)};
}

Rows multiwinner_instance(const SuiteConfig& cfg, std::size_t ell, std::size_t i,
                          const EngineOptions& opts) {
  const Profile p = corpus_profile(derive_seed(cfg.seed, 1000 + ell), i, 2, 5, ell + 1, 5);
  const RuleOutcome outcome = recursive([](const Profile& q) { return copeland(q); }, p, ell);
  TheoremReport row = base_row(cfg.suite, "l" + std::to_string(ell) + "-p" + std::to_string(i) +
                                              "-" + outcome.winner_set.str(),
                               p, ell);
  const Measured m = measure(p, outcome.winner_set, opts);
  record(row, m);
  row.bound = "distortion<=5 fairness<=7 fairness-distortion<2";
  fail_unless(row, at_most(m.distortion.value, 5), "distortion above 5");
  fail_unless(row, at_most(m.fairness.value, 7), "fairness above 7");
  fail_unless(row, gap_below_two(m.distortion.value, m.fairness.value), "gap not below 2");
  if (m.fairness.set_policy || m.distortion.set_policy) row.note = "set-level unbounded verdict";
  return {std::move(row)};
}

struct TrendCell {
  std::optional<Ratio> distortion, fairness;
};

// Random tail: the alternatives not in `head`, shuffled.
std::vector<Alternative> with_tail(std::vector<Alternative> head, std::size_t m, Rng& rng,
                                   std::optional<Alternative> last = std::nullopt) {
  std::vector<Alternative> rest;
  for (Alternative c = 0; c < m; ++c) {
    if (std::find(head.begin(), head.end(), c) == head.end() && c != last) rest.push_back(c);
  }
  for (std::size_t i = rest.size(); i > 1; --i) std::swap(rest[i - 1], rest[rng.below(i)]);
  head.insert(head.end(), rest.begin(), rest.end());
  if (last) head.push_back(*last);
  return head;
}

// The family for one m: `count` random profiles on 4 agents, then two
// seeded profiles from the regimes where positional rules degrade.
std::vector<Profile> trend_family(std::uint64_t seed, std::size_t m, std::size_t count) {
  std::vector<Profile> family;
  for (std::size_t i = 0; i < count; ++i) {
    family.push_back(corpus_profile(derive_seed(seed, 2000 + m), i, 4, 4, m, m));
  }
  Rng rng(derive_seed(seed, 3000 + m));
  // c0 holds two first places; every other agent has its own favourite,
  // shares c_{m-1} as second choice and ranks c0 last.
  std::vector<Ranking> scattered{Ranking(with_tail({0}, m, rng)), Ranking(with_tail({0}, m, rng))};
  for (Alternative c = 1; c + 1 < m; ++c) scattered.emplace_back(with_tail({c, m - 1}, m, rng, Alternative{0}));
  family.emplace_back(m, std::move(scattered));
  // One agent ranks c0 first and c1 last; m-1 agents rank c1, c0 on top.
  std::vector<Ranking> lopsided{Ranking(with_tail({0}, m, rng, Alternative{1}))};
  for (std::size_t v = 1; v < m; ++v) lopsided.emplace_back(with_tail({1, 0}, m, rng));
  family.emplace_back(m, std::move(lopsided));
  return family;
}

Rows scoring_trends(const SuiteConfig& cfg, std::size_t count, const EngineOptions& opts) {
  const std::vector<std::string> rules{"plurality", "borda", "stv"};
  const std::vector<std::size_t> sizes{3, 4, 5, 6};
  std::vector<std::vector<Profile>> families;
  for (std::size_t m : sizes) families.push_back(trend_family(cfg.seed, m, count));
  const std::size_t per_size = families.front().size();

  // measured[s][i][r]
  std::vector<std::vector<std::vector<TrendCell>>> measured(
      sizes.size(), std::vector<std::vector<TrendCell>>(per_size, std::vector<TrendCell>(rules.size())));
  parallel_for(sizes.size() * per_size, cfg.jobs, [&](std::size_t job) {
    const std::size_t s = job / per_size, i = job % per_size;
    const Profile& p = families[s][i];
    for (std::size_t r = 0; r < rules.size(); ++r) {
      const AlternativeSet S = parse_rule(rules[r]).apply(p).winner_set;
      measured[s][i][r] = {worst_distortion(p, S, opts).value, worst_fairness(p, S, opts).value};
    }
  });

  Rows rows;
  for (std::size_t r = 0; r < rules.size(); ++r) {
    bool monotone = true;
    std::optional<Ratio> previous;
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      TrendCell cell;
      std::size_t argmax = 0, max_agents = 0;
      for (std::size_t i = 0; i < per_size; ++i) {
        const TrendCell& one = measured[s][i][r];
        max_agents = std::max(max_agents, families[s][i].num_agents());
        if (!cell.distortion || *one.distortion > *cell.distortion) cell.distortion = one.distortion;
        if (!cell.fairness || *one.fairness > *cell.fairness) {
          cell.fairness = one.fairness;
          argmax = i;
        }
      }
      if (previous && *cell.fairness < *previous) monotone = false;
      previous = cell.fairness;
      TheoremReport row;
      row.suite = cfg.suite;
      row.instance = rules[r] + "-m" + std::to_string(sizes[s]);
      row.agents = max_agents;
      row.alternatives = sizes[s];
      row.distortion = cell.distortion;
      row.fairness = cell.fairness;
      row.bound = "max over " + std::to_string(per_size) + " profiles";
      row.note = "fairness max at profile " + std::to_string(argmax);
      row.verdict = Verdict::Report;
      rows.push_back(std::move(row));
    }
    TheoremReport summary;
    summary.suite = cfg.suite;
    summary.instance = rules[r] + "-trend";
    summary.bound = monotone ? "non-decreasing in m" : "not monotone in m";
    summary.verdict = Verdict::Report;
    rows.push_back(std::move(summary));
  }
  return rows;
}

std::string sanitize(std::string s) {
  for (char& ch : s) {
    if (ch == '{' || ch == '}' || ch == ',' || ch == '/') ch = '_';
  }
  return s;
}

void dump_witness(TheoremReport& row, const std::filesystem::path& dir) {
  if (!row.profile) return;
  std::filesystem::create_directories(dir);
  const std::string stem = sanitize(row.suite + "-" + row.instance);
  const auto profile_path = dir / (stem + ".profile");
  std::ofstream(profile_path) << serialize_profile(*row.profile);
  row.witness_paths.push_back(profile_path.string());
  if (row.witness) {
    const auto metric_path = dir / (stem + ".metric");
    std::ofstream(metric_path) << serialize_cost_matrix(*row.witness);
    row.witness_paths.push_back(metric_path.string());
  }
}

}  // namespace

SuiteResult run_suite(const SuiteConfig& config) {
  const auto& ids = suite_ids();
  if (std::find(ids.begin(), ids.end(), config.suite) == ids.end()) {
    throw std::invalid_argument("unknown suite '" + config.suite + "'");
  }
  EngineOptions opts;
  opts.mode = config.mode;

  std::vector<Rows> parts;
  const std::string& s = config.suite;
  if (s == "gap-tightness") {
    const std::vector<std::size_t> sizes = tightness_sizes(config.count ? config.count : 50);
    parts.resize(sizes.size());
    parallel_for(sizes.size(), config.jobs,
                 [&](std::size_t i) { parts[i] = tightness_instance(config, sizes[i], opts); });
  } else if (s == "recursive-copeland") {
    const std::size_t count = config.count ? config.count : 100;
    parts.resize(2 * count);
    parallel_for(2 * count, config.jobs, [&](std::size_t j) {
      parts[j] = multiwinner_instance(config, 2 + j / count, j % count, opts);
    });
  } else if (s == "scoring-trends") {
    parts.push_back(scoring_trends(config, config.count ? config.count : 5, opts));
  } else {
    const std::size_t count = config.count ? config.count : 100;
    parts.resize(count);
    parallel_for(count, config.jobs, [&](std::size_t i) { parts[i] = corpus_instance(config, i, opts); });
  }

  SuiteResult result;
  for (Rows& part : parts) {
    for (TheoremReport& row : part) {
      if (row.verdict == Verdict::Fail) {
        ++result.failures;
        dump_witness(row, config.witness_dir);
      }
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

std::string csv_header() { return "suite,instance,N,m,l,distortion,fairness,gap,bound,verdict"; }

std::string render_gap(const std::optional<Ratio>& distortion, const std::optional<Ratio>& fairness,
                       int decimal_digits) {
  if (!distortion || !fairness || fairness->is_infinite() == distortion->is_infinite()) {
    if (distortion && fairness && !fairness->is_infinite()) {
      const Rational gap = fairness->value() - distortion->value();
      return decimal_digits >= 0 ? to_decimal(gap, decimal_digits) : to_string(gap);
    }
    return "-";
  }
  return fairness->is_infinite() ? "inf" : "-inf";
}

std::string csv_row(const TheoremReport& r, int decimal_digits) {
  std::ostringstream out;
  out << r.suite << ',' << r.instance << ',' << r.agents << ',' << r.alternatives << ',' << r.ell
      << ',' << render(r.distortion, decimal_digits) << ',' << render(r.fairness, decimal_digits)
      << ',' << render_gap(r.distortion, r.fairness, decimal_digits) << ',' << r.bound << ','
      << to_string(r.verdict);
  return out.str();
}

}  // namespace metricfair
