#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wazkit/errors.hpp"
#include "wazkit/jet.hpp"

namespace wazkit {

namespace detail {
struct Node;
}

/// Ordered declaration of the symbols an expression may reference. Models use
/// the layout x1..xn, t, parameters (see SymbolTable::state_time_params);
/// evaluation takes values in declaration order.
class SymbolTable {
 public:
  SymbolTable() = default;
  explicit SymbolTable(std::vector<std::string> names);

  /// The layout shared by fields, faces and controllers: x1..xn, then t,
  /// then the parameter names in map order.
  static SymbolTable state_time_params(std::size_t dim, const std::map<std::string, double>& params);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t slot) const { return names_[slot]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> find(std::string_view name) const;

  friend bool operator==(const SymbolTable& a, const SymbolTable& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
};

/// A parsed arithmetic expression over a fixed symbol table.
///
/// Grammar: numbers, symbols, the constant pi, parentheses, function calls
/// sin cos tan exp log sqrt abs (unary), min max (binary), clamp (ternary),
/// and the operators + - * / ^ with precedence ^ > unary minus > * / > + -.
/// ^ is right-associative. Whitespace is ignored. Undeclared identifiers are
/// rejected at parse time.
class Expr {
 public:
  Expr() = default;

  static Expr parse(std::string_view source, const SymbolTable& symbols);

  bool empty() const { return root_ == nullptr; }
  const SymbolTable& symbols() const { return *symbols_; }

  /// Evaluate with values in symbol-table order.
  double eval(std::span<const double> values) const;

  /// Evaluate from a name -> value environment. Every symbol of the table
  /// must be bound.
  double evaluate(const std::map<std::string, double>& env) const;

  /// Propagate truncated Taylor jets through the tree.
  Jet eval_jet(std::span<const Jet> values) const;

  /// Canonical printed form; parsing the result and printing again is stable.
  std::string print() const;

  /// Slots of symbols that actually occur in the tree, ascending.
  std::vector<std::size_t> free_slots() const;

 private:
  std::shared_ptr<const detail::Node> root_;
  std::shared_ptr<const SymbolTable> symbols_;
};

}  // namespace wazkit
