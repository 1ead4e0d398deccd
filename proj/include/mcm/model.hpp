#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <mcm/rational.hpp>

namespace mcm {

// Error codes double as CLI exit codes.
enum class ErrorCode {
  validation = 2,
  inconsistent = 3,
  impossible_evidence = 4,
  budget_exceeded = 5,
};

class McmError : public std::runtime_error {
 public:
  McmError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct Violation {
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  void add(std::string code, std::string message) {
    violations.push_back({std::move(code), std::move(message)});
  }
  std::string summary() const {
    std::ostringstream out;
    for (size_t i = 0; i < violations.size(); ++i) {
      if (i) out << "; ";
      out << violations[i].code << ": " << violations[i].message;
    }
    return out.str();
  }
};

// A named discrete variable with at least two distinct values.
struct Variable {
  std::string name;
  std::vector<std::string> values;

  bool operator==(const Variable& other) const {
    return name == other.name && values == other.values;
  }
};

class DomainSpec {
 public:
  explicit DomainSpec(std::vector<Variable> variables)
      : variables_(std::move(variables)) {
    if (variables_.empty())
      throw McmError(ErrorCode::validation, "domain has no variables");
    for (size_t i = 0; i < variables_.size(); ++i) {
      const Variable& v = variables_[i];
      if (v.name.empty())
        throw McmError(ErrorCode::validation, "variable with empty name");
      if (v.values.size() < 2)
        throw McmError(ErrorCode::validation,
                       "variable '" + v.name + "' needs at least 2 values");
      std::set<std::string> seen(v.values.begin(), v.values.end());
      if (seen.size() != v.values.size())
        throw McmError(ErrorCode::validation,
                       "variable '" + v.name + "' has duplicate values");
      if (!index_.emplace(v.name, i).second)
        throw McmError(ErrorCode::validation,
                       "duplicate variable name '" + v.name + "'");
    }
  }

  const std::vector<Variable>& variables() const { return variables_; }
  bool has(const std::string& name) const { return index_.count(name) > 0; }

  size_t index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
      throw McmError(ErrorCode::validation, "unknown variable '" + name + "'");
    return it->second;
  }

  const Variable& var(const std::string& name) const {
    return variables_[index_of(name)];
  }

  // Scope variables in declaration order; this order fixes atom indexing.
  std::vector<Variable> canonical_scope(const std::set<std::string>& names) const {
    std::vector<size_t> idx;
    idx.reserve(names.size());
    for (const auto& n : names) idx.push_back(index_of(n));
    std::sort(idx.begin(), idx.end());
    std::vector<Variable> scope;
    scope.reserve(idx.size());
    for (size_t i : idx) scope.push_back(variables_[i]);
    return scope;
  }

  bool operator==(const DomainSpec& other) const {
    return variables_ == other.variables_;
  }

 private:
  std::vector<Variable> variables_;
  std::map<std::string, size_t> index_;
};

// Bindings from variable name to value name. std::map keeps iteration
// deterministic.
using Assignment = std::map<std::string, std::string>;

// A conjunction of bindings, or its complement when negated: "the bound
// variables do not jointly take these values".
struct Event {
  Assignment base;
  bool negated = false;

  bool operator==(const Event& other) const {
    return negated == other.negated && base == other.base;
  }
};

inline Event positive_event(Assignment base) { return Event{std::move(base), false}; }
inline Event negated_event(Assignment base) { return Event{std::move(base), true}; }

// ---------------------------------------------------------------------------
// Atom indexing over an ordered scope. Atom i enumerates joint assignments in
// mixed-radix order: the first scope variable is the most significant digit,
// values in declared order.

inline size_t scope_atom_count(const std::vector<Variable>& scope) {
  size_t n = 1;
  for (const Variable& v : scope) n *= v.values.size();
  return n;
}

inline size_t value_index_of(const Variable& var, const std::string& value) {
  for (size_t i = 0; i < var.values.size(); ++i)
    if (var.values[i] == value) return i;
  throw McmError(ErrorCode::validation, "variable '" + var.name +
                                            "' has no value '" + value + "'");
}

inline std::vector<size_t> scope_atom_digits(const std::vector<Variable>& scope,
                                             size_t atom) {
  std::vector<size_t> digits(scope.size());
  for (size_t i = scope.size(); i-- > 0;) {
    size_t arity = scope[i].values.size();
    digits[i] = atom % arity;
    atom /= arity;
  }
  return digits;
}

inline size_t scope_atom_index(const std::vector<Variable>& scope,
                               const std::vector<size_t>& digits) {
  size_t atom = 0;
  for (size_t i = 0; i < scope.size(); ++i)
    atom = atom * scope[i].values.size() + digits[i];
  return atom;
}

inline Assignment scope_atom_assignment(const std::vector<Variable>& scope,
                                        size_t atom) {
  std::vector<size_t> digits = scope_atom_digits(scope, atom);
  Assignment a;
  for (size_t i = 0; i < scope.size(); ++i)
    a[scope[i].name] = scope[i].values[digits[i]];
  return a;
}

inline std::string render_assignment(const Assignment& a) {
  std::ostringstream out;
  out << "(";
  bool first = true;
  for (const auto& [var, value] : a) {
    if (!first) out << ", ";
    out << var << "=" << value;
    first = false;
  }
  out << ")";
  return out.str();
}

// Per-scope-position required value index; nullopt means unconstrained.
inline std::vector<std::optional<size_t>> assignment_pattern(
    const std::vector<Variable>& scope, const Assignment& bound) {
  std::vector<std::optional<size_t>> pattern(scope.size());
  size_t matched = 0;
  for (size_t i = 0; i < scope.size(); ++i) {
    auto it = bound.find(scope[i].name);
    if (it == bound.end()) continue;
    pattern[i] = value_index_of(scope[i], it->second);
    ++matched;
  }
  if (matched != bound.size())
    throw McmError(ErrorCode::validation, "event variable outside scope");
  return pattern;
}

inline bool atom_matches_pattern(const std::vector<Variable>& scope,
                                 const std::vector<std::optional<size_t>>& pattern,
                                 size_t atom) {
  for (size_t i = scope.size(); i-- > 0;) {
    size_t arity = scope[i].values.size();
    size_t digit = atom % arity;
    atom /= arity;
    if (pattern[i] && *pattern[i] != digit) return false;
  }
  return true;
}

// Ascending atom indices of the scope assignments consistent with the event.
inline std::vector<size_t> event_atom_indices(const std::vector<Variable>& scope,
                                              const Event& event) {
  if (event.base.empty())
    throw McmError(ErrorCode::validation, "event has no bound variables");
  auto pattern = assignment_pattern(scope, event.base);
  std::vector<size_t> atoms;
  size_t total = scope_atom_count(scope);
  for (size_t atom = 0; atom < total; ++atom) {
    bool matches = atom_matches_pattern(scope, pattern, atom);
    if (matches != event.negated) atoms.push_back(atom);
  }
  return atoms;
}

inline std::vector<Assignment> event_atoms(const DomainSpec& domain,
                                           const std::set<std::string>& scope_names,
                                           const Event& event) {
  std::vector<Variable> scope = domain.canonical_scope(scope_names);
  std::vector<Assignment> result;
  for (size_t atom : event_atom_indices(scope, event))
    result.push_back(scope_atom_assignment(scope, atom));
  return result;
}

// ---------------------------------------------------------------------------

// Dense joint probability table over an ordered scope. Entries are exact
// rationals, nonnegative, summing to exactly 1.
class ProbTable {
 public:
  ProbTable(std::vector<Variable> scope, std::vector<Rat> entries)
      : scope_(std::move(scope)), entries_(std::move(entries)) {
    if (scope_.empty())
      throw McmError(ErrorCode::validation, "table scope is empty");
    if (entries_.size() != scope_atom_count(scope_))
      throw McmError(ErrorCode::validation, "table is not dense");
    Rat total(0);
    for (const Rat& p : entries_) {
      if (p < 0)
        throw McmError(ErrorCode::validation, "negative table entry");
      total += p;
    }
    if (total != 1)
      throw McmError(ErrorCode::validation,
                     "entries sum to " + mcm::to_string(total) + " != 1");
  }

  const std::vector<Variable>& scope() const { return scope_; }
  const std::vector<Rat>& entries() const { return entries_; }
  size_t atom_count() const { return entries_.size(); }
  const Rat& entry(size_t atom) const { return entries_.at(atom); }

  std::vector<std::string> scope_names() const {
    std::vector<std::string> names;
    names.reserve(scope_.size());
    for (const Variable& v : scope_) names.push_back(v.name);
    return names;
  }

  std::set<std::string> scope_name_set() const {
    std::set<std::string> names;
    for (const Variable& v : scope_) names.insert(v.name);
    return names;
  }

  bool scope_contains(const std::string& name) const {
    return std::any_of(scope_.begin(), scope_.end(),
                       [&](const Variable& v) { return v.name == name; });
  }

  const Rat& at(const Assignment& full) const {
    if (full.size() != scope_.size())
      throw McmError(ErrorCode::validation,
                     "assignment does not cover the table scope");
    std::vector<size_t> digits(scope_.size());
    for (size_t i = 0; i < scope_.size(); ++i) {
      auto it = full.find(scope_[i].name);
      if (it == full.end())
        throw McmError(ErrorCode::validation,
                       "assignment misses variable '" + scope_[i].name + "'");
      digits[i] = value_index_of(scope_[i], it->second);
    }
    return entries_[scope_atom_index(scope_, digits)];
  }

  Assignment atom_assignment(size_t atom) const {
    return scope_atom_assignment(scope_, atom);
  }

  bool operator==(const ProbTable& other) const {
    return scope_ == other.scope_ && entries_ == other.entries_;
  }

 private:
  std::vector<Variable> scope_;
  std::vector<Rat> entries_;
};

// A context: an identifier plus a precisely known joint distribution over its
// scope.
struct Context {
  std::string id;
  ProbTable table;
};

// Unvalidated context data, as read from a document or assembled by hand.
// validate_context reports violations as data; build paths reject them.
struct ContextDraft {
  std::string id;
  std::vector<std::string> scope;
  std::vector<std::pair<Assignment, Rat>> rows;
};

inline ValidationReport validate_context(const DomainSpec& domain,
                                         const ContextDraft& draft) {
  ValidationReport report;
  if (draft.scope.empty()) {
    report.add("empty-scope", "context '" + draft.id + "' has an empty scope");
    return report;
  }
  std::set<std::string> names;
  for (const auto& name : draft.scope) {
    if (!domain.has(name)) {
      report.add("unknown-variable", "context '" + draft.id +
                                         "' references unknown variable '" +
                                         name + "'");
    } else if (!names.insert(name).second) {
      report.add("duplicate-variable",
                 "context '" + draft.id + "' repeats variable '" + name + "'");
    }
  }
  if (!report.ok()) return report;

  std::vector<Variable> scope = domain.canonical_scope(names);
  size_t total = scope_atom_count(scope);
  std::vector<char> seen(total, 0);
  Rat sum(0);
  for (const auto& [assign, p] : draft.rows) {
    if (assign.size() != scope.size()) {
      report.add("bad-atom", "context '" + draft.id + "': row " +
                                 render_assignment(assign) +
                                 " does not cover the scope");
      continue;
    }
    std::vector<size_t> digits(scope.size());
    bool bad = false;
    for (size_t i = 0; i < scope.size(); ++i) {
      auto it = assign.find(scope[i].name);
      if (it == assign.end()) {
        report.add("bad-atom", "context '" + draft.id + "': row " +
                                   render_assignment(assign) +
                                   " misses variable '" + scope[i].name + "'");
        bad = true;
        break;
      }
      bool known = false;
      for (size_t v = 0; v < scope[i].values.size(); ++v)
        if (scope[i].values[v] == it->second) {
          digits[i] = v;
          known = true;
          break;
        }
      if (!known) {
        report.add("unknown-value", "context '" + draft.id + "': variable '" +
                                        scope[i].name + "' has no value '" +
                                        it->second + "'");
        bad = true;
        break;
      }
    }
    if (bad) continue;
    size_t atom = scope_atom_index(scope, digits);
    if (seen[atom]) {
      report.add("duplicate-atom", "context '" + draft.id + "': atom " +
                                       render_assignment(assign) +
                                       " appears more than once");
      continue;
    }
    seen[atom] = 1;
    if (p < 0)
      report.add("negative-entry", "context '" + draft.id + "': atom " +
                                       render_assignment(assign) +
                                       " has negative probability " +
                                       mcm::to_string(p));
    sum += p;
  }
  for (size_t atom = 0; atom < total; ++atom)
    if (!seen[atom]) {
      report.add("not-dense",
                 "context '" + draft.id + "': table not dense, missing atom " +
                     render_assignment(scope_atom_assignment(scope, atom)));
      break;
    }
  bool dense = std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  if (dense && sum != 1)
    report.add("sum-not-one", "context '" + draft.id + "': entries sum to " +
                                  mcm::to_string(sum) + " != 1");
  return report;
}

inline Context build_context(const DomainSpec& domain, const ContextDraft& draft) {
  ValidationReport report = validate_context(domain, draft);
  if (!report.ok())
    throw McmError(ErrorCode::validation, report.summary());
  std::set<std::string> names(draft.scope.begin(), draft.scope.end());
  std::vector<Variable> scope = domain.canonical_scope(names);
  std::vector<Rat> entries(scope_atom_count(scope), Rat(0));
  for (const auto& [assign, p] : draft.rows) {
    std::vector<size_t> digits(scope.size());
    for (size_t i = 0; i < scope.size(); ++i)
      digits[i] = value_index_of(scope[i], assign.at(scope[i].name));
    entries[scope_atom_index(scope, digits)] = p;
  }
  return Context{draft.id, ProbTable(std::move(scope), std::move(entries))};
}

// Checks an already-built context against a domain: scope variables must
// exist with identical value lists.
inline ValidationReport validate_context(const DomainSpec& domain,
                                         const Context& context) {
  ValidationReport report;
  for (const Variable& v : context.table.scope()) {
    if (!domain.has(v.name)) {
      report.add("unknown-variable", "context '" + context.id +
                                         "' references unknown variable '" +
                                         v.name + "'");
    } else if (!(domain.var(v.name) == v)) {
      report.add("value-mismatch", "context '" + context.id + "': variable '" +
                                       v.name +
                                       "' disagrees with the domain's values");
    }
  }
  return report;
}

// A multi-context model: a domain plus contexts in construction order.
class Mcm {
 public:
  explicit Mcm(DomainSpec domain, std::vector<Context> contexts = {})
      : domain_(std::move(domain)), contexts_(std::move(contexts)) {
    std::set<std::string> ids;
    for (const Context& c : contexts_) {
      if (!ids.insert(c.id).second)
        throw McmError(ErrorCode::validation,
                       "duplicate context id '" + c.id + "'");
      ValidationReport report = validate_context(domain_, c);
      if (!report.ok())
        throw McmError(ErrorCode::validation, report.summary());
    }
  }

  const DomainSpec& domain() const { return domain_; }
  const std::vector<Context>& contexts() const { return contexts_; }

  bool has_context(const std::string& id) const {
    return std::any_of(contexts_.begin(), contexts_.end(),
                       [&](const Context& c) { return c.id == id; });
  }

  const Context& context(const std::string& id) const {
    for (const Context& c : contexts_)
      if (c.id == id) return c;
    throw McmError(ErrorCode::validation, "unknown context '" + id + "'");
  }

  std::set<std::string> covered_vars() const {
    std::set<std::string> names;
    for (const Context& c : contexts_)
      for (const Variable& v : c.table.scope()) names.insert(v.name);
    return names;
  }

  Mcm with_context(Context added) const {
    std::vector<Context> next = contexts_;
    next.push_back(std::move(added));
    return Mcm(domain_, std::move(next));
  }

 private:
  DomainSpec domain_;
  std::vector<Context> contexts_;
};

enum class QueryMode { min, max, interval };

// Target event plus evidence bindings. Target and evidence variables must be
// disjoint.
struct Query {
  Event target;
  Assignment evidence;
  QueryMode mode = QueryMode::interval;
};

inline ValidationReport validate_query(const DomainSpec& domain,
                                       const Query& query) {
  ValidationReport report;
  if (query.target.base.empty())
    report.add("empty-target", "query target binds no variables");
  auto check_binding = [&](const std::string& var, const std::string& value) {
    if (!domain.has(var)) {
      report.add("unknown-variable", "unknown variable '" + var + "'");
      return;
    }
    const Variable& v = domain.var(var);
    if (std::find(v.values.begin(), v.values.end(), value) == v.values.end())
      report.add("unknown-value",
                 "variable '" + var + "' has no value '" + value + "'");
  };
  for (const auto& [var, value] : query.target.base) check_binding(var, value);
  for (const auto& [var, value] : query.evidence) {
    check_binding(var, value);
    if (query.target.base.count(var))
      report.add("target-evidence-overlap",
                 "variable '" + var + "' is bound in both target and evidence");
  }
  return report;
}

// Exact lower/upper bounds on a queried probability, with status notes.
struct Interval {
  Rat lower{0};
  Rat upper{1};
  std::vector<std::string> notes;

  bool operator==(const Interval& other) const {
    return lower == other.lower && upper == other.upper && notes == other.notes;
  }
};

}  // namespace mcm
