#include <sstream>

#include "metricfair/lp.hpp"

namespace metricfair::lp {

namespace {

// LP files take decimals only; exact when the value is an integer.
std::string number(const Rational& v) {
  if (v.get_den() == 1) return v.get_num().get_str();
  std::string s = to_decimal(v, 15);
  s.erase(s.find_last_not_of('0') + 1);
  if (s.back() == '.') s.pop_back();
  return s;
}

void write_terms(std::ostream& out, const LinearProgram& lp, const std::vector<Term>& terms) {
  if (terms.empty()) {
    out << " 0 " << lp.var_name(0);
    return;
  }
  bool first = true;
  for (const Term& t : terms) {
    const bool negative = sgn(t.coef) < 0;
    if (!first || negative) out << (negative ? " - " : " + ");
    else out << ' ';
    const Rational magnitude = abs(t.coef);
    if (magnitude != 1) out << number(magnitude) << ' ';
    out << lp.var_name(t.var);
    first = false;
  }
}

}  // namespace

std::string write_lp_format(const LinearProgram& lp, const std::vector<std::size_t>& binary_vars) {
  std::ostringstream out;
  out << (lp.sense() == Sense::Maximize ? "Maximize\n" : "Minimize\n") << " obj:";
  std::vector<Term> objective;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    if (sgn(lp.objective()[j]) != 0) objective.push_back({j, lp.objective()[j]});
  }
  if (lp.num_vars() > 0) write_terms(out, lp, objective);
  out << "\nSubject To\n";
  for (std::size_t i = 0; i < lp.constraints().size(); ++i) {
    const Constraint& row = lp.constraints()[i];
    out << ' ' << (row.name.empty() ? "r" + std::to_string(i) : row.name) << ':';
    write_terms(out, lp, row.terms);
    switch (row.relation) {
      case Relation::LessEqual: out << " <= "; break;
      case Relation::GreaterEqual: out << " >= "; break;
      case Relation::Equal: out << " = "; break;
    }
    out << number(row.rhs) << '\n';
  }
  out << "Bounds\n";
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    out << ' ' << number(lp.lower_bound(j)) << " <= " << lp.var_name(j);
    if (lp.upper_bound(j)) out << " <= " << number(*lp.upper_bound(j));
    out << '\n';
  }
  if (!binary_vars.empty()) {
    out << "Binaries\n";
    for (std::size_t b : binary_vars) out << ' ' << lp.var_name(b) << '\n';
  }
  out << "End\n";
  return out.str();
}

}  // namespace metricfair::lp
