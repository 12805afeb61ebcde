#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include <efpast/errors.hpp>
#include <efpast/terms.hpp>

namespace efpast {

/// Node formula of the two-way unary temporal logic. `ef` holds in a node
/// when the argument holds in some proper descendant, `fp` when it holds in
/// some proper ancestor.
class formula {
public:
  enum class kind { truth, falsity, atom, negation, conjunction, disjunction, ef, fp };

  static formula constant(bool b) {
    return formula(node{b ? kind::truth : kind::falsity, {}, nullptr, nullptr});
  }
  static formula atom(std::string label) {
    return formula(node{kind::atom, std::move(label), nullptr, nullptr});
  }
  static formula negation(formula a) { return unary(kind::negation, std::move(a)); }
  static formula conjunction(formula a, formula b) {
    return binary(kind::conjunction, std::move(a), std::move(b));
  }
  static formula disjunction(formula a, formula b) {
    return binary(kind::disjunction, std::move(a), std::move(b));
  }
  static formula ef(formula a) { return unary(kind::ef, std::move(a)); }
  static formula fp(formula a) { return unary(kind::fp, std::move(a)); }

  kind k() const { return root_->k; }
  const std::string& label() const { return root_->label; }
  formula lhs() const { return formula(root_->a); }
  formula rhs() const { return formula(root_->b); }

  bool operator==(const formula& o) const { return equal(root_.get(), o.root_.get()); }
  bool operator!=(const formula& o) const { return !(*this == o); }

private:
  struct node {
    kind k;
    std::string label;
    std::shared_ptr<const node> a, b;
  };

  explicit formula(node n) : root_(std::make_shared<const node>(std::move(n))) {}
  explicit formula(std::shared_ptr<const node> n) : root_(std::move(n)) {}

  static formula unary(kind k, formula a) {
    return formula(node{k, {}, std::move(a.root_), nullptr});
  }
  static formula binary(kind k, formula a, formula b) {
    return formula(node{k, {}, std::move(a.root_), std::move(b.root_)});
  }

  static bool equal(const node* x, const node* y) {
    if (x == y) return true;
    if (!x || !y) return false;
    return x->k == y->k && x->label == y->label && equal(x->a.get(), y->a.get()) &&
           equal(x->b.get(), y->b.get());
  }

  std::shared_ptr<const node> root_;
};

inline formula operator!(const formula& a) { return formula::negation(a); }
inline formula operator&&(const formula& a, const formula& b) {
  return formula::conjunction(a, b);
}
inline formula operator||(const formula& a, const formula& b) {
  return formula::disjunction(a, b);
}

/// Boolean combination over atoms "some tree in the forest satisfies phi".
class forest_formula {
public:
  enum class kind { truth, falsity, exists, negation, conjunction, disjunction };

  static forest_formula constant(bool b) {
    return forest_formula(node{b ? kind::truth : kind::falsity, nullptr, nullptr, nullptr});
  }
  static forest_formula exists(formula body) {
    return forest_formula(
        node{kind::exists, std::make_shared<const formula>(std::move(body)), nullptr, nullptr});
  }
  static forest_formula negation(forest_formula a) {
    return unary(kind::negation, std::move(a));
  }
  static forest_formula conjunction(forest_formula a, forest_formula b) {
    return binary(kind::conjunction, std::move(a), std::move(b));
  }
  static forest_formula disjunction(forest_formula a, forest_formula b) {
    return binary(kind::disjunction, std::move(a), std::move(b));
  }

  kind k() const { return root_->k; }
  const formula& body() const { return *root_->body; }
  forest_formula lhs() const { return forest_formula(root_->a); }
  forest_formula rhs() const { return forest_formula(root_->b); }

private:
  struct node {
    kind k;
    std::shared_ptr<const formula> body;
    std::shared_ptr<const node> a, b;
  };

  explicit forest_formula(node n) : root_(std::make_shared<const node>(std::move(n))) {}
  explicit forest_formula(std::shared_ptr<const node> n) : root_(std::move(n)) {}

  static forest_formula unary(kind k, forest_formula a) {
    return forest_formula(node{k, nullptr, std::move(a.root_), nullptr});
  }
  static forest_formula binary(kind k, forest_formula a, forest_formula b) {
    return forest_formula(node{k, nullptr, std::move(a.root_), std::move(b.root_)});
  }

  std::shared_ptr<const node> root_;
};

inline forest_formula operator!(const forest_formula& a) {
  return forest_formula::negation(a);
}
inline forest_formula operator&&(const forest_formula& a, const forest_formula& b) {
  return forest_formula::conjunction(a, b);
}
inline forest_formula operator||(const forest_formula& a, const forest_formula& b) {
  return forest_formula::disjunction(a, b);
}

// ---------------------------------------------------------------------------
// Rendering: fully parenthesized canonical form. Binary operators are always
// wrapped, unary operator chains are not.
// ---------------------------------------------------------------------------

inline std::string render(const formula& f) {
  switch (f.k()) {
    case formula::kind::truth: return "true";
    case formula::kind::falsity: return "false";
    case formula::kind::atom: return f.label();
    case formula::kind::negation: return "!" + render(f.lhs());
    case formula::kind::conjunction:
      return "(" + render(f.lhs()) + " & " + render(f.rhs()) + ")";
    case formula::kind::disjunction:
      return "(" + render(f.lhs()) + " | " + render(f.rhs()) + ")";
    case formula::kind::ef: return "EF " + render(f.lhs());
    case formula::kind::fp: return "FP " + render(f.lhs());
  }
  throw internal_error("bad formula kind");
}

inline std::string render(const forest_formula& f) {
  switch (f.k()) {
    case forest_formula::kind::truth: return "true";
    case forest_formula::kind::falsity: return "false";
    case forest_formula::kind::exists: return "E(" + render(f.body()) + ")";
    case forest_formula::kind::negation: return "!" + render(f.lhs());
    case forest_formula::kind::conjunction:
      return "(" + render(f.lhs()) + " & " + render(f.rhs()) + ")";
    case forest_formula::kind::disjunction:
      return "(" + render(f.lhs()) + " | " + render(f.rhs()) + ")";
  }
  throw internal_error("bad forest formula kind");
}

/// Maximum nesting of EF/FP; booleans and atoms contribute nothing.
inline unsigned nesting_depth(const formula& f) {
  switch (f.k()) {
    case formula::kind::truth:
    case formula::kind::falsity:
    case formula::kind::atom: return 0;
    case formula::kind::negation: return nesting_depth(f.lhs());
    case formula::kind::conjunction:
    case formula::kind::disjunction:
      return std::max(nesting_depth(f.lhs()), nesting_depth(f.rhs()));
    case formula::kind::ef:
    case formula::kind::fp: return 1 + nesting_depth(f.lhs());
  }
  throw internal_error("bad formula kind");
}

inline unsigned nesting_depth(const forest_formula& f) {
  switch (f.k()) {
    case forest_formula::kind::truth:
    case forest_formula::kind::falsity: return 0;
    case forest_formula::kind::exists: return nesting_depth(f.body());
    case forest_formula::kind::negation: return nesting_depth(f.lhs());
    case forest_formula::kind::conjunction:
    case forest_formula::kind::disjunction:
      return std::max(nesting_depth(f.lhs()), nesting_depth(f.rhs()));
  }
  throw internal_error("bad forest formula kind");
}

// ---------------------------------------------------------------------------
// Parsing
//
// PHI := LABEL | 'true' | 'false' | '!'PHI | PHI'&'PHI | PHI'|'PHI
//      | 'EF' PHI | 'FP' PHI | '('PHI')'
// FF  := 'E('PHI')' | 'true' | 'false' | '!'FF | FF'&'FF | FF'|'FF | '('FF')'
//
// Precedence: !,EF,FP bind tighter than &, which binds tighter than |;
// & and | are left-associative. EF, FP, E, true, false are reserved words.
// ---------------------------------------------------------------------------

namespace detail {

class formula_parser {
public:
  explicit formula_parser(std::string_view text) : text_(text) {}

  formula parse_node_formula() {
    formula f = disjunction();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

  forest_formula parse_forest_formula() {
    forest_formula f = f_disjunction();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

private:
  formula disjunction() {
    formula f = conjunction();
    while (eat('|')) f = formula::disjunction(f, conjunction());
    return f;
  }

  formula conjunction() {
    formula f = unary();
    while (eat('&')) f = formula::conjunction(f, unary());
    return f;
  }

  formula unary() {
    skip_ws();
    if (eat('!')) return formula::negation(unary());
    if (eat_word("EF")) return formula::ef(unary());
    if (eat_word("FP")) return formula::fp(unary());
    return primary();
  }

  formula primary() {
    skip_ws();
    if (eat('(')) {
      formula f = disjunction();
      expect(')');
      return f;
    }
    if (eat_word("true")) return formula::constant(true);
    if (eat_word("false")) return formula::constant(false);
    std::string label = parse_label();
    return formula::atom(std::move(label));
  }

  forest_formula f_disjunction() {
    forest_formula f = f_conjunction();
    while (eat('|')) f = forest_formula::disjunction(f, f_conjunction());
    return f;
  }

  forest_formula f_conjunction() {
    forest_formula f = f_unary();
    while (eat('&')) f = forest_formula::conjunction(f, f_unary());
    return f;
  }

  forest_formula f_unary() {
    skip_ws();
    if (eat('!')) return forest_formula::negation(f_unary());
    return f_primary();
  }

  forest_formula f_primary() {
    skip_ws();
    if (eat_word("E")) {
      expect('(');
      formula body = disjunction();
      expect(')');
      return forest_formula::exists(std::move(body));
    }
    if (eat_word("true")) return forest_formula::constant(true);
    if (eat_word("false")) return forest_formula::constant(false);
    if (eat('(')) {
      forest_formula f = f_disjunction();
      expect(')');
      return f;
    }
    fail("expected 'E(', 'true', 'false', '!' or '('");
  }

  std::string parse_label() {
    skip_ws();
    std::size_t start = pos_;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
    auto alnum = [&](char c) { return alpha(c) || (c >= '0' && c <= '9') || c == '_'; };
    if (pos_ >= text_.size() || !alpha(text_[pos_])) fail("expected a label");
    ++pos_;
    while (pos_ < text_.size() && alnum(text_[pos_])) ++pos_;
    std::string w(text_.substr(start, pos_ - start));
    if (w == "EF" || w == "FP" || w == "E" || w == "true" || w == "false") {
      pos_ = start;
      fail("reserved word '" + w + "' cannot be a label");
    }
    return w;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  // Consumes `w` only when it is a whole word.
  bool eat_word(std::string_view w) {
    skip_ws();
    if (text_.substr(pos_, w.size()) != w) return false;
    std::size_t end = pos_ + w.size();
    auto alnum = [](char c) {
      return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
             (c >= '0' && c <= '9') || c == '_';
    };
    if (end < text_.size() && alnum(text_[end])) return false;
    pos_ = end;
    return true;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r'))
      ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) { throw parse_error(msg, pos_); }

  std::string_view text_;
  std::size_t pos_ = 0;
};

} // namespace detail

inline formula parse_node_formula(std::string_view text) {
  return detail::formula_parser(text).parse_node_formula();
}

inline forest_formula parse_forest_formula(std::string_view text) {
  return detail::formula_parser(text).parse_forest_formula();
}

} // namespace efpast
