#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace metricfair {

using Agent = std::size_t;
using Alternative = std::size_t;

/// Input error carrying the 1-based line where it was detected.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// One agent's strict, complete ranking, most-preferred first.
class Ranking {
 public:
  /// Throws std::invalid_argument unless `order` is a permutation of {0,...,m-1}.
  explicit Ranking(std::vector<Alternative> order);

  std::size_t size() const noexcept { return order_.size(); }
  std::span<const Alternative> order() const noexcept { return order_; }
  Alternative at(std::size_t position) const { return order_.at(position); }
  Alternative top() const { return order_.front(); }
  std::size_t position_of(Alternative c) const { return position_.at(c); }
  /// True iff c is ranked strictly above c2.
  bool prefers(Alternative c, Alternative c2) const {
    return position_.at(c) < position_.at(c2);
  }

  friend bool operator==(const Ranking& a, const Ranking& b) { return a.order_ == b.order_; }

 private:
  std::vector<Alternative> order_;
  std::vector<std::size_t> position_;
};

/// N strict rankings over m alternatives. Immutable after construction.
///
/// Alternatives are dense indices. Display names are carried along for
/// rendering only; no algorithm looks at them.
class Profile {
 public:
  Profile(std::size_t num_alternatives, std::vector<Ranking> rankings,
          std::vector<std::string> names = {});

  std::size_t num_agents() const noexcept { return rankings_.size(); }
  std::size_t num_alternatives() const noexcept { return num_alternatives_; }
  const std::vector<Ranking>& rankings() const noexcept { return rankings_; }
  const Ranking& ranking(Agent v) const { return rankings_.at(v); }

  /// True iff agent v ranks c above c2. Throws std::out_of_range on bad indices.
  bool prefers(Agent v, Alternative c, Alternative c2) const;

  /// Names as given in the file (possibly empty strings).
  const std::vector<std::string>& names() const noexcept { return names_; }
  /// The display name, falling back to the index.
  std::string label(Alternative c) const;
  /// Looks up an alternative by display name or decimal index.
  std::optional<Alternative> find_alternative(std::string_view token) const;

  friend bool operator==(const Profile& a, const Profile& b) {
    return a.num_alternatives_ == b.num_alternatives_ && a.rankings_ == b.rankings_;
  }

 private:
  std::size_t num_alternatives_;
  std::vector<Ranking> rankings_;
  std::vector<std::string> names_;
};

/// A profile with some alternatives deleted from every ranking. Survivors are
/// re-indexed densely in increasing original order, so "lowest index" tie-breaks
/// mean the same thing before and after the restriction.
struct RestrictedProfile {
  Profile profile;
  std::vector<Alternative> original;  ///< new index -> original index
};

/// Keeps exactly the alternatives in `keep` (any order, no duplicates, nonempty).
RestrictedProfile restrict_profile(const Profile& profile, std::span<const Alternative> keep);

/// A pairwise comparison exactly at N/2 is won by the lower index. Fixed, not configurable.
inline constexpr bool kPairwiseTieFavorsLowerIndex = true;

/// Head-to-head counts: wins(i, j) = number of agents ranking i above j.
class PairwiseMatrix {
 public:
  explicit PairwiseMatrix(const Profile& profile);

  std::size_t size() const noexcept { return m_; }
  std::size_t num_agents() const noexcept { return n_; }
  std::size_t wins(Alternative i, Alternative j) const { return wins_.at(i * m_ + j); }
  /// True when wins(i, j) is exactly N/2 (only possible for even N).
  bool is_tie(Alternative i, Alternative j) const { return i != j && 2 * wins(i, j) == n_; }
  /// i pairwise beats j: a strict majority, or exactly half with i < j.
  bool beats(Alternative i, Alternative j) const;

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<std::size_t> wins_;
};

inline PairwiseMatrix pairwise_matrix(const Profile& profile) { return PairwiseMatrix(profile); }

/// Parses the native profile format:
///
///     # comment
///     m N
///     0 name0          (m lines: index, optional name)
///     ...
///     2,0,1            (N lines: a permutation, most-preferred first)
///
/// Blank lines and '#' comments are ignored. Throws ParseError.
Profile parse_profile(std::string_view text);

/// Inverse of parse_profile.
std::string serialize_profile(const Profile& profile);

/// Reads and parses a file; I/O failures surface as ParseError at line 0.
Profile read_profile_file(const std::filesystem::path& path);

/// Converts PrefLib strict-order (.soc) text. Each `count: a,b,c` line becomes
/// `count` identical agents; alternative ids are re-indexed densely in
/// increasing order. Weak orders are rejected. Throws ParseError.
Profile parse_preflib_soc(std::string_view text);

}  // namespace metricfair
