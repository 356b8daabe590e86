#include "metricfair/profile.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace metricfair {

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

Ranking::Ranking(std::vector<Alternative> order) : order_(std::move(order)) {
  if (order_.empty()) throw std::invalid_argument("ranking must be nonempty");
  position_.assign(order_.size(), order_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) {
    const Alternative c = order_[i];
    if (c >= order_.size()) {
      throw std::invalid_argument("alternative " + std::to_string(c) + " out of range");
    }
    if (position_[c] != order_.size()) {
      throw std::invalid_argument("duplicate alternative " + std::to_string(c));
    }
    position_[c] = i;
  }
}

Profile::Profile(std::size_t num_alternatives, std::vector<Ranking> rankings,
                 std::vector<std::string> names)
    : num_alternatives_(num_alternatives), rankings_(std::move(rankings)), names_(std::move(names)) {
  if (num_alternatives_ == 0) throw std::invalid_argument("profile needs at least one alternative");
  if (rankings_.empty()) throw std::invalid_argument("profile needs at least one agent");
  for (const Ranking& r : rankings_) {
    if (r.size() != num_alternatives_) {
      throw std::invalid_argument("ranking length differs from the number of alternatives");
    }
  }
  if (names_.empty()) names_.assign(num_alternatives_, std::string());
  if (names_.size() != num_alternatives_) {
    throw std::invalid_argument("name table size differs from the number of alternatives");
  }
}

bool Profile::prefers(Agent v, Alternative c, Alternative c2) const {
  if (v >= num_agents()) throw std::out_of_range("agent index out of range");
  if (c >= num_alternatives_ || c2 >= num_alternatives_) {
    throw std::out_of_range("alternative index out of range");
  }
  return rankings_[v].prefers(c, c2);
}

std::string Profile::label(Alternative c) const {
  if (c < names_.size() && !names_[c].empty()) return names_[c];
  return std::to_string(c);
}

std::optional<Alternative> Profile::find_alternative(std::string_view token) const {
  for (Alternative c = 0; c < names_.size(); ++c) {
    if (!names_[c].empty() && names_[c] == token) return c;
  }
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec == std::errc() && ptr == token.data() + token.size() && value < num_alternatives_) {
    return value;
  }
  return std::nullopt;
}

RestrictedProfile restrict_profile(const Profile& profile, std::span<const Alternative> keep) {
  const std::size_t m = profile.num_alternatives();
  std::vector<Alternative> original(keep.begin(), keep.end());
  std::sort(original.begin(), original.end());
  if (original.empty()) throw std::invalid_argument("cannot restrict to an empty set");
  if (std::adjacent_find(original.begin(), original.end()) != original.end()) {
    throw std::invalid_argument("duplicate alternative in restriction");
  }
  if (original.back() >= m) throw std::out_of_range("alternative index out of range");

  std::vector<std::size_t> new_index(m, m);
  for (std::size_t i = 0; i < original.size(); ++i) new_index[original[i]] = i;

  std::vector<Ranking> rankings;
  rankings.reserve(profile.num_agents());
  for (const Ranking& r : profile.rankings()) {
    std::vector<Alternative> order;
    order.reserve(original.size());
    for (Alternative c : r.order()) {
      if (new_index[c] != m) order.push_back(new_index[c]);
    }
    rankings.emplace_back(std::move(order));
  }
  std::vector<std::string> names;
  names.reserve(original.size());
  for (Alternative c : original) names.push_back(profile.names()[c]);
  return {Profile(original.size(), std::move(rankings), std::move(names)), std::move(original)};
}

PairwiseMatrix::PairwiseMatrix(const Profile& profile)
    : m_(profile.num_alternatives()), n_(profile.num_agents()), wins_(m_ * m_, 0) {
  for (const Ranking& r : profile.rankings()) {
    auto order = r.order();
    for (std::size_t a = 0; a < order.size(); ++a) {
      for (std::size_t b = a + 1; b < order.size(); ++b) ++wins_[order[a] * m_ + order[b]];
    }
  }
}

bool PairwiseMatrix::beats(Alternative i, Alternative j) const {
  if (i == j) return false;
  const std::size_t w = wins(i, j);
  if (2 * w > n_) return true;
  return 2 * w == n_ && kPairwiseTieFavorsLowerIndex && i < j;
}

namespace {

struct Line {
  std::size_t number;
  std::string text;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Non-blank lines with '#' comments stripped.
std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view line = text.substr(start, end - start);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) lines.push_back({number, std::string(line)});
    start = end + 1;
  }
  return lines;
}

std::optional<std::size_t> parse_index(std::string_view token) {
  token = trim(token);
  if (token.empty()) return std::nullopt;
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

Ranking parse_ranking_tokens(const std::vector<std::string_view>& tokens, std::size_t m,
                             std::size_t line) {
  std::vector<Alternative> order;
  std::vector<bool> seen(m, false);
  for (std::string_view token : tokens) {
    auto index = parse_index(token);
    if (!index) throw ParseError(line, "non-numeric token '" + std::string(token) + "'");
    if (*index >= m) {
      throw ParseError(line, "alternative " + std::to_string(*index) + " out of range (m = " +
                                 std::to_string(m) + ")");
    }
    if (seen[*index]) {
      throw ParseError(line, "duplicate alternative " + std::to_string(*index) + " in ranking");
    }
    seen[*index] = true;
    order.push_back(*index);
  }
  if (order.size() != m) {
    throw ParseError(line, "incomplete ranking: " + std::to_string(order.size()) + " of " +
                               std::to_string(m) + " alternatives");
  }
  return Ranking(std::move(order));
}

}  // namespace

Profile parse_profile(std::string_view text) {
  const std::vector<Line> lines = content_lines(text);
  if (lines.empty()) throw ParseError(1, "malformed header: empty input");

  const Line& header = lines.front();
  std::istringstream hs(header.text);
  std::string m_token, n_token, extra;
  hs >> m_token >> n_token;
  if (hs >> extra) throw ParseError(header.number, "malformed header: expected 'm N'");
  auto m = parse_index(m_token);
  auto n = parse_index(n_token);
  if (!m || !n) throw ParseError(header.number, "malformed header: expected 'm N'");
  if (*m == 0 || *n == 0) {
    throw ParseError(header.number, "malformed header: m and N must be positive");
  }

  std::size_t cursor = 1;
  std::vector<std::string> names(*m);
  std::vector<bool> named(*m, false);
  for (std::size_t i = 0; i < *m; ++i, ++cursor) {
    if (cursor >= lines.size()) {
      throw ParseError(lines.back().number, "missing alternative line " + std::to_string(i));
    }
    const Line& line = lines[cursor];
    std::string_view body = line.text;
    std::size_t split_at = body.find_first_of(" \t");
    std::string_view index_token = body.substr(0, split_at);
    auto index = parse_index(index_token);
    if (!index) {
      throw ParseError(line.number, "expected alternative line 'index [name]', got '" +
                                        std::string(body) + "'");
    }
    if (*index >= *m) throw ParseError(line.number, "alternative index out of range");
    if (named[*index]) throw ParseError(line.number, "alternative listed twice");
    named[*index] = true;
    if (split_at != std::string_view::npos) names[*index] = std::string(trim(body.substr(split_at)));
  }

  std::vector<Ranking> rankings;
  rankings.reserve(*n);
  for (; cursor < lines.size(); ++cursor) {
    const Line& line = lines[cursor];
    if (rankings.size() == *n) {
      throw ParseError(line.number, "more rankings than the header's N = " + std::to_string(*n));
    }
    rankings.push_back(parse_ranking_tokens(split(line.text, ','), *m, line.number));
  }
  if (rankings.size() != *n) {
    throw ParseError(lines.back().number, "expected " + std::to_string(*n) + " rankings, found " +
                                              std::to_string(rankings.size()));
  }
  return Profile(*m, std::move(rankings), std::move(names));
}

std::string serialize_profile(const Profile& profile) {
  std::ostringstream out;
  out << profile.num_alternatives() << ' ' << profile.num_agents() << '\n';
  for (Alternative c = 0; c < profile.num_alternatives(); ++c) {
    out << c;
    if (!profile.names()[c].empty()) out << ' ' << profile.names()[c];
    out << '\n';
  }
  for (const Ranking& r : profile.rankings()) {
    auto order = r.order();
    for (std::size_t i = 0; i < order.size(); ++i) out << (i ? "," : "") << order[i];
    out << '\n';
  }
  return out.str();
}

Profile read_profile_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_profile(buffer.str());
}

Profile parse_preflib_soc(std::string_view text) {
  std::optional<std::size_t> declared_m;
  std::optional<std::size_t> declared_voters;
  std::map<std::size_t, std::string> declared_names;
  struct Ballot {
    std::size_t line;
    std::size_t count;
    std::vector<std::size_t> ids;
  };
  std::vector<Ballot> ballots;

  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    if (line.empty()) continue;

    if (line.front() == '#') {
      std::string_view meta = trim(line.substr(1));
      auto colon = meta.find(':');
      if (colon == std::string_view::npos) continue;
      std::string_view key = trim(meta.substr(0, colon));
      std::string_view value = trim(meta.substr(colon + 1));
      if (key == "NUMBER ALTERNATIVES") {
        declared_m = parse_index(value);
        if (!declared_m || *declared_m == 0) {
          throw ParseError(number, "malformed NUMBER ALTERNATIVES header");
        }
      } else if (key == "NUMBER VOTERS") {
        declared_voters = parse_index(value);
        if (!declared_voters) throw ParseError(number, "malformed NUMBER VOTERS header");
      } else if (key.starts_with("ALTERNATIVE NAME")) {
        auto id = parse_index(key.substr(std::string_view("ALTERNATIVE NAME").size()));
        if (!id) throw ParseError(number, "malformed ALTERNATIVE NAME header");
        declared_names[*id] = std::string(value);
      } else if (key == "DATA TYPE" && value != "soc") {
        throw ParseError(number, "unsupported data type '" + std::string(value) +
                                     "' (only strict complete orders)");
      }
      continue;
    }

    auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError(number, "expected 'count: ranking'");
    auto count = parse_index(line.substr(0, colon));
    if (!count || *count == 0) throw ParseError(number, "ballot count must be a positive integer");
    std::string_view ranking = trim(line.substr(colon + 1));
    if (ranking.empty()) throw ParseError(number, "empty ballot");
    if (ranking.find_first_of("{}") != std::string_view::npos) {
      throw ParseError(number, "weak orders are not supported (ties in ballot)");
    }
    Ballot ballot{number, *count, {}};
    for (std::string_view token : split(ranking, ',')) {
      auto id = parse_index(token);
      if (!id) throw ParseError(number, "non-numeric token '" + std::string(token) + "'");
      ballot.ids.push_back(*id);
    }
    ballots.push_back(std::move(ballot));
  }

  if (!declared_m) throw ParseError(1, "missing '# NUMBER ALTERNATIVES' header");
  if (ballots.empty()) throw ParseError(number, "no ballots");
  const std::size_t m = *declared_m;

  std::vector<std::size_t> ids;
  if (!declared_names.empty()) {
    for (const auto& [id, name] : declared_names) ids.push_back(id);
  } else {
    ids = ballots.front().ids;
    std::sort(ids.begin(), ids.end());
  }
  if (ids.size() != m) {
    throw ParseError(ballots.front().line, "header declares " + std::to_string(m) +
                                               " alternatives, found " + std::to_string(ids.size()));
  }

  std::map<std::size_t, Alternative> dense;
  for (std::size_t i = 0; i < ids.size(); ++i) dense[ids[i]] = i;

  std::vector<Ranking> rankings;
  std::size_t voters = 0;
  for (const Ballot& ballot : ballots) {
    if (ballot.ids.size() != m) {
      throw ParseError(ballot.line, "ballot ranks " + std::to_string(ballot.ids.size()) +
                                        " alternatives, header declares " + std::to_string(m));
    }
    std::vector<Alternative> order;
    std::vector<bool> seen(m, false);
    for (std::size_t id : ballot.ids) {
      auto it = dense.find(id);
      if (it == dense.end()) {
        throw ParseError(ballot.line, "unknown alternative id " + std::to_string(id));
      }
      if (seen[it->second]) {
        throw ParseError(ballot.line, "duplicate alternative id " + std::to_string(id));
      }
      seen[it->second] = true;
      order.push_back(it->second);
    }
    Ranking r(std::move(order));
    for (std::size_t k = 0; k < ballot.count; ++k) rankings.push_back(r);
    voters += ballot.count;
  }
  if (declared_voters && *declared_voters != voters) {
    throw ParseError(ballots.back().line, "header declares " + std::to_string(*declared_voters) +
                                              " voters, ballots sum to " + std::to_string(voters));
  }

  std::vector<std::string> names(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto it = declared_names.find(ids[i]);
    if (it != declared_names.end()) names[i] = it->second;
  }
  return Profile(m, std::move(rankings), std::move(names));
}

}  // namespace metricfair
