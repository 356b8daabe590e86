#include "metricfair/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "metricfair/bench.hpp"
#include "metricfair/generators.hpp"
#include "metricfair/oracle.hpp"
#include "metricfair/rules.hpp"
#include "metricfair/worst_case.hpp"

namespace metricfair::cli {
namespace {

struct Globals {
  std::string mode = "rational";
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  bool force = false;
  bool json = false;
  int decimal = -1;

  lp::Mode lp_mode() const { return mode == "float" ? lp::Mode::Float : lp::Mode::Rational; }
  std::string render(const Ratio& r) const { return decimal >= 0 ? r.decimal(decimal) : r.str(); }
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

// "{c1,c2}", "c1,c2" or "0,2": names or indices.
AlternativeSet parse_set(const Profile& p, std::string text) {
  text.erase(std::remove_if(text.begin(), text.end(),
                            [](char ch) { return ch == '{' || ch == '}' || ch == ' '; }),
             text.end());
  std::vector<Alternative> members;
  std::stringstream tokens(text);
  for (std::string token; std::getline(tokens, token, ',');) {
    const auto c = p.find_alternative(token);
    if (!c) throw std::invalid_argument("unknown alternative '" + token + "' in set");
    members.push_back(*c);
  }
  if (members.empty()) throw std::invalid_argument("empty alternative set");
  return AlternativeSet(std::move(members));
}

std::string labels(const Profile& p, std::span<const Alternative> xs) {
  std::string s;
  for (Alternative c : xs) s += (s.empty() ? "" : ",") + p.label(c);
  return "{" + s + "}";
}

int cmd_winners(const Globals& g, const std::string& path, const std::string& rule_id,
                std::ostream& out) {
  const Profile p = read_profile_file(path);
  const Rule rule = parse_rule(rule_id);
  const RuleOutcome outcome = rule.apply(p);
  const std::vector<Alternative> winners(outcome.winner_set.begin(), outcome.winner_set.end());
  if (g.json) {
    nlohmann::json j;
    j["rule"] = rule.id;
    j["winners"] = nlohmann::json::array();
    for (Alternative c : winners) j["winners"].push_back(p.label(c));
    j["selection_order"] = nlohmann::json::array();
    for (Alternative c : outcome.selection_order) j["selection_order"].push_back(p.label(c));
    j["tiebreaks"] = nlohmann::json::array();
    for (const TieBreakEvent& e : outcome.tiebreak_events) {
      j["tiebreaks"].push_back({{"stage", e.stage},
                                {"tied", labels(p, e.tied)},
                                {"resolved_to", p.label(e.resolved_to)},
                                {"action", e.action}});
    }
    j["audit"] = outcome.audit;
    out << j.dump(2) << '\n';
    return kOk;
  }
  out << "winners: " << labels(p, winners) << '\n';
  out << "selection order: " << labels(p, outcome.selection_order) << '\n';
  for (const TieBreakEvent& e : outcome.tiebreak_events) {
    out << "tie-break: " << e.stage << ' ' << labels(p, e.tied) << " -> " << p.label(e.resolved_to)
        << ' ' << e.action << '\n';
  }
  for (const std::string& line : outcome.audit) out << line << '\n';
  return kOk;
}

struct WorstcaseArgs {
  std::string profile, set, objective;
  bool oracle = false;
  std::string witness_out;
  std::string metric;
};

int cmd_worstcase(const Globals& g, const WorstcaseArgs& a, std::ostream& out) {
  const Profile p = read_profile_file(a.profile);
  const AlternativeSet S = parse_set(p, a.set);
  EngineOptions options;
  options.mode = g.lp_mode();
  options.jobs = g.jobs;
  options.force = g.force;
  const bool fairness = a.objective == "fairness";
  const WorstCaseResult result =
      fairness ? worst_fairness(p, S, options) : worst_distortion(p, S, options);
  nlohmann::json j = to_json(result, g.decimal);
  j["set"] = labels(p, S.members());
  j["adversary"] = labels(p, result.adversary.members());

  if (!a.witness_out.empty() && result.witness) {
    write_text(a.witness_out, serialize_cost_matrix(*result.witness));
  }
  if (!a.metric.empty()) {
    const CostMatrix d = parse_cost_matrix(read_text(a.metric));
    if (d.num_agents() != p.num_agents() || d.num_alternatives() != p.num_alternatives()) {
      throw std::invalid_argument("metric dimensions do not match the profile");
    }
    const CheckReport q = is_qmetric(d), c = is_consistent(d, p);
    j["metric_consistent"] = q.ok && c.ok;
    if (!q.ok) j["metric_violation"] = q.violation->describe();
    else if (!c.ok) j["metric_violation"] = c.violation->describe();
    j["metric_ratio"] = g.render(fairness ? ratio_fairness(S, d).value : ratio_distortion(S, d).value);
  }
  if (a.oracle) {
    GridSearchConfig grid = GridSearchConfig::with_zero();
    grid.jobs = g.jobs;
    const OracleResult o = oracle_worst_ratio(p, S, fairness ? OracleMode::Fairness : OracleMode::Distortion, grid);
    j["oracle_value"] = g.render(o.value);
    j["oracle_metrics"] = o.metrics_examined;
    if (!result.value.is_infinite() && !o.value.is_infinite()) {
      const Rational delta = result.value.value() - o.value.value();
      j["oracle_delta"] = g.decimal >= 0 ? to_decimal(delta, g.decimal) : to_string(delta);
    } else {
      j["oracle_delta"] = result.value == o.value ? "0" : "inf";
    }
  }

  if (g.json) {
    out << j.dump(2) << '\n';
    return kOk;
  }
  for (const char* key : {"objective", "set", "value", "status", "k_star", "adversary", "subproblems",
                          "nodes", "set_policy", "metric_consistent", "metric_violation",
                          "metric_ratio", "oracle_value", "oracle_metrics", "oracle_delta"}) {
    if (!j.contains(key)) continue;
    const auto& v = j[key];
    out << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  }
  if (result.witness) out << "witness:\n" << serialize_cost_matrix(*result.witness);
  return kOk;
}

int cmd_check(const Globals& g, const std::string& suite, std::size_t count,
              const std::string& witness_dir, std::ostream& out, std::ostream& err) {
  SuiteConfig config;
  config.suite = suite;
  config.seed = g.seed;
  config.count = count;
  config.jobs = g.jobs;
  config.mode = g.lp_mode();
  config.witness_dir = witness_dir;
  const SuiteResult result = run_suite(config);
  if (g.json) {
    nlohmann::json rows = nlohmann::json::array();
    for (const TheoremReport& r : result.rows) {
      nlohmann::json row{{"suite", r.suite},
                         {"instance", r.instance},
                         {"N", r.agents},
                         {"m", r.alternatives},
                         {"l", r.ell},
                         {"bound", r.bound},
                         {"verdict", to_string(r.verdict)},
                         {"gap", render_gap(r.distortion, r.fairness, g.decimal)}};
      row["distortion"] = r.distortion ? nlohmann::json(g.render(*r.distortion)) : nlohmann::json();
      row["fairness"] = r.fairness ? nlohmann::json(g.render(*r.fairness)) : nlohmann::json();
      if (!r.note.empty()) row["note"] = r.note;
      if (!r.witness_paths.empty()) row["witness_paths"] = r.witness_paths;
      rows.push_back(std::move(row));
    }
    out << nlohmann::json{{"suite", suite}, {"failures", result.failures}, {"rows", rows}}.dump(2)
        << '\n';
  } else {
    out << csv_header() << '\n';
    for (const TheoremReport& r : result.rows) out << csv_row(r, g.decimal) << '\n';
  }
  if (result.failures > 0) {
    err << suite << ": " << result.failures << " failing instance(s); witnesses in " << witness_dir
        << '\n';
    return kSuiteFailure;
  }
  return kOk;
}

void emit_instance(const Profile& p, const std::optional<CostMatrix>& d, const std::string& stem,
                   std::ostream& out) {
  if (!stem.empty()) {
    write_text(stem + ".profile", serialize_profile(p));
    if (d) write_text(stem + ".metric", serialize_cost_matrix(*d));
    out << stem << ".profile\n";
    if (d) out << stem << ".metric\n";
    return;
  }
  out << serialize_profile(p);
  if (d) out << "# metric\n" << serialize_cost_matrix(*d);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Worst-case distortion and fairness ratios of voting rules", "metricfair"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--mode", g.mode, "LP arithmetic")->check(CLI::IsMember({"rational", "float"}));
  app.add_option("--seed", g.seed, "base seed for generated instances");
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--force", g.force, "lift the size guardrails");
  app.add_flag("--json", g.json, "JSON output");
  app.add_option("--decimal", g.decimal, "render ratios as decimals with this many digits")
      ->check(CLI::NonNegativeNumber);

  std::string profile_path, rule_id;
  auto* winners = app.add_subcommand("winners", "run a voting rule on a profile");
  winners->add_option("profile", profile_path)->required();
  winners->add_option("rule", rule_id)->required();

  WorstcaseArgs wc;
  auto* worstcase = app.add_subcommand("worstcase", "worst-case ratio of a set over consistent metrics");
  worstcase->add_option("profile", wc.profile)->required();
  worstcase->add_option("set", wc.set, "e.g. {c1} or 0,2")->required();
  worstcase->add_option("objective", wc.objective)
      ->required()
      ->check(CLI::IsMember({"distortion", "fairness"}));
  worstcase->add_flag("--oracle", wc.oracle, "cross-check with the grid oracle");
  worstcase->add_option("--witness", wc.witness_out, "write the witness metric here");
  worstcase->add_option("--metric", wc.metric, "also evaluate this cost matrix");

  std::string suite, witness_dir = "witnesses";
  std::size_t count = 0;
  auto* check = app.add_subcommand("check", "run a property-check suite, CSV on stdout");
  check->add_option("suite", suite)->required()->check(CLI::IsMember(suite_ids()));
  check->add_option("--count", count, "instances (0: suite default)");
  check->add_option("--witness-dir", witness_dir);

  std::string kind, out_stem, metric_in;
  std::size_t agents = 3, alternatives = 3, dimension = 2;
  std::string delta = "0", alt_c, agent_v, alt_adv;
  auto* generate = app.add_subcommand("generate", "write a generated profile (and metric)");
  generate->add_option("kind", kind)->required()->check(
      CLI::IsMember({"line", "euclidean", "random", "floor"}));
  generate->add_option("-o,--out", out_stem, "write <stem>.profile and <stem>.metric");
  generate->add_option("--agents", agents)->check(CLI::PositiveNumber);
  generate->add_option("--alternatives", alternatives)->check(CLI::PositiveNumber);
  generate->add_option("--dimension", dimension)->check(CLI::PositiveNumber);
  generate->add_option("--delta", delta, "line family offset in [0,1)");
  generate->add_option("--profile", metric_in, "floor: the profile to build on");
  generate->add_option("--alternative", alt_c, "floor: the audited alternative c");
  generate->add_option("--agent", agent_v, "floor: the agent ranking c_adv above c");
  generate->add_option("--adversary", alt_adv, "floor: c_adv");

  std::string preflib_path, convert_out;
  auto* convert = app.add_subcommand("convert", "PrefLib .soc to the native profile format");
  convert->add_option("input", preflib_path)->required();
  convert->add_option("-o,--out", convert_out);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (winners->parsed()) return cmd_winners(g, profile_path, rule_id, out);
    if (worstcase->parsed()) return cmd_worstcase(g, wc, out);
    if (check->parsed()) return cmd_check(g, suite, count, witness_dir, out, err);
    if (convert->parsed()) {
      const Profile p = parse_preflib_soc(read_text(preflib_path));
      if (convert_out.empty()) out << serialize_profile(p);
      else write_text(convert_out, serialize_profile(p));
      return kOk;
    }
    if (generate->parsed()) {
      if (kind == "line") {
        const Instance inst = line_family(agents, parse_rational(delta));
        emit_instance(inst.profile, inst.costs, out_stem, out);
      } else if (kind == "euclidean") {
        EuclideanConfig cfg;
        cfg.dimension = dimension;
        cfg.seed = g.seed;
        cfg.agents = agents;
        cfg.alternatives = alternatives;
        const Instance inst = euclidean_instance(cfg);
        emit_instance(inst.profile, inst.costs, out_stem, out);
      } else if (kind == "random") {
        Rng rng(g.seed);
        emit_instance(random_profile(agents, alternatives, rng), std::nullopt, out_stem, out);
      } else {
        if (metric_in.empty() || alt_c.empty() || agent_v.empty() || alt_adv.empty()) {
          throw UsageError("floor needs --profile, --alternative, --agent and --adversary");
        }
        const Profile p = read_profile_file(metric_in);
        const auto c = p.find_alternative(alt_c), adv = p.find_alternative(alt_adv);
        if (!c || !adv) throw std::invalid_argument("unknown alternative");
        const Agent v = std::stoul(agent_v);
        emit_instance(p, floor_metric(p, *c, v, *adv), out_stem, out);
      }
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const UnknownRuleError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kUsageError;
}

}  // namespace metricfair::cli
