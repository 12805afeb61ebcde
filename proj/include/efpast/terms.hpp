#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <efpast/errors.hpp>

namespace efpast {

/// Two-sorted alphabet: leaf labels A and inner-node labels B. The two sets
/// may overlap; a node's role is positional.
class alphabet {
public:
  alphabet() = default;

  alphabet(std::vector<std::string> leaves, std::vector<std::string> inners)
      : leaves_(std::move(leaves)), inners_(std::move(inners)) {
    normalize(leaves_);
    normalize(inners_);
    for (const auto& l : leaves_) check_label(l);
    for (const auto& l : inners_) check_label(l);
  }

  static bool valid_label(std::string_view s) {
    if (s.empty()) return false;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
    auto alnum = [&](char c) { return alpha(c) || (c >= '0' && c <= '9') || c == '_'; };
    if (!alpha(s[0])) return false;
    for (std::size_t i = 1; i < s.size(); ++i)
      if (!alnum(s[i])) return false;
    return true;
  }

  bool is_leaf_label(const std::string& l) const {
    return std::binary_search(leaves_.begin(), leaves_.end(), l);
  }
  bool is_inner_label(const std::string& l) const {
    return std::binary_search(inners_.begin(), inners_.end(), l);
  }

  const std::vector<std::string>& leaf_labels() const { return leaves_; }
  const std::vector<std::string>& inner_labels() const { return inners_; }

  /// A ∪ B, sorted and deduplicated.
  std::vector<std::string> all_labels() const {
    std::vector<std::string> out = leaves_;
    out.insert(out.end(), inners_.begin(), inners_.end());
    normalize(out);
    return out;
  }

private:
  static void normalize(std::vector<std::string>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  static void check_label(const std::string& l) {
    if (!valid_label(l)) throw validation_error("invalid label: '" + l + "'");
  }

  std::vector<std::string> leaves_;
  std::vector<std::string> inners_;
};

class tree;
using tree_seq = std::vector<tree>;

/// One node of an unranked tree. A leaf carries a label and no children; an
/// inner node carries a label and a nonempty child sequence; the hole is a
/// special leaf used only inside contexts.
class tree {
public:
  static tree leaf(std::string label) {
    tree t;
    t.label_ = std::move(label);
    return t;
  }

  static tree inner(std::string label, tree_seq children) {
    if (children.empty())
      throw validation_error("inner node '" + label + "' must have at least one child");
    tree t;
    t.label_ = std::move(label);
    t.children_ = std::move(children);
    return t;
  }

  static tree hole() {
    tree t;
    t.hole_ = true;
    return t;
  }

  bool is_hole() const { return hole_; }
  bool is_leaf() const { return !hole_ && children_.empty(); }
  bool is_inner() const { return !children_.empty(); }

  const std::string& label() const { return label_; }
  const tree_seq& children() const { return children_; }

  std::size_t node_count() const {
    std::size_t n = 1;
    for (const auto& c : children_) n += c.node_count();
    return n;
  }

  bool operator==(const tree& o) const {
    return hole_ == o.hole_ && label_ == o.label_ && children_ == o.children_;
  }
  bool operator!=(const tree& o) const { return !(*this == o); }

private:
  tree() = default;
  std::string label_;
  tree_seq children_;
  bool hole_ = false;
};

namespace detail {

inline std::size_t count_holes(const tree& t) {
  if (t.is_hole()) return 1;
  std::size_t n = 0;
  for (const auto& c : t.children()) n += count_holes(c);
  return n;
}

inline std::size_t count_holes(const tree_seq& ts) {
  std::size_t n = 0;
  for (const auto& t : ts) n += count_holes(t);
  return n;
}

inline std::size_t node_count(const tree_seq& ts) {
  std::size_t n = 0;
  for (const auto& t : ts) n += t.node_count();
  return n;
}

inline void render_tree(const tree& t, std::string& out) {
  if (t.is_hole()) {
    out += "[]";
    return;
  }
  out += t.label();
  if (t.is_inner()) {
    out += '(';
    bool first = true;
    for (const auto& c : t.children()) {
      if (!first) out += '+';
      first = false;
      render_tree(c, out);
    }
    out += ')';
  }
}

inline std::string render_seq(const tree_seq& ts) {
  std::string out;
  bool first = true;
  for (const auto& t : ts) {
    if (!first) out += '+';
    first = false;
    render_tree(t, out);
  }
  return out;
}

// Canonical sort key: the rendered term with the hole token replaced by a
// single character that orders after every label character.
inline void sort_key_tree(const tree& t, std::string& out) {
  if (t.is_hole()) {
    out += '\x7f';
    return;
  }
  out += t.label();
  if (t.is_inner()) {
    out += '(';
    bool first = true;
    for (const auto& c : t.children()) {
      if (!first) out += '+';
      first = false;
      sort_key_tree(c, out);
    }
    out += ')';
  }
}

inline std::string sort_key(const tree_seq& ts) {
  std::string out;
  bool first = true;
  for (const auto& t : ts) {
    if (!first) out += '+';
    first = false;
    sort_key_tree(t, out);
  }
  return out;
}

// Replaces the unique hole in `ts` by the sequence `filler`, splicing it in
// at the hole's sibling position. An inner node whose children all vanish
// becomes a leaf; this can only happen with an empty one-sorted filler.
inline tree_seq splice_hole(const tree_seq& ts, const tree_seq& filler) {
  tree_seq out;
  out.reserve(ts.size());
  for (const auto& t : ts) {
    if (t.is_hole()) {
      out.insert(out.end(), filler.begin(), filler.end());
    } else if (t.is_leaf()) {
      out.push_back(t);
    } else if (count_holes(t) == 0) {
      out.push_back(t);
    } else {
      tree_seq kids = splice_hole(t.children(), filler);
      if (kids.empty())
        out.push_back(tree::leaf(t.label()));
      else
        out.push_back(tree::inner(t.label(), std::move(kids)));
    }
  }
  return out;
}

inline void validate_sorts(const tree_seq& ts, const alphabet& sigma) {
  for (const auto& t : ts) {
    if (t.is_hole()) continue;
    if (t.is_leaf()) {
      if (!sigma.is_leaf_label(t.label()))
        throw validation_error("sort violation: '" + t.label() + "' is not a leaf label");
    } else {
      if (!sigma.is_inner_label(t.label()))
        throw validation_error("sort violation: '" + t.label() + "' is not an inner label");
      validate_sorts(t.children(), sigma);
    }
  }
}

} // namespace detail

/// A nonempty sequence of trees without holes.
class forest {
public:
  explicit forest(tree_seq trees) : trees_(std::move(trees)) {
    if (trees_.empty()) throw validation_error("forest must be nonempty");
    if (detail::count_holes(trees_) != 0)
      throw validation_error("forest must not contain a hole");
  }

  static forest single(tree t) {
    tree_seq s;
    s.push_back(std::move(t));
    return forest(std::move(s));
  }

  const tree_seq& trees() const { return trees_; }
  std::size_t node_count() const { return detail::node_count(trees_); }

  bool operator==(const forest& o) const { return trees_ == o.trees_; }
  bool operator!=(const forest& o) const { return !(*this == o); }

private:
  tree_seq trees_;
};

/// A forest-shaped term with exactly one hole leaf; the bare hole is the
/// empty context.
class context {
public:
  explicit context(tree_seq trees) : trees_(std::move(trees)) {
    std::size_t holes = detail::count_holes(trees_);
    if (trees_.empty() || holes == 0) throw validation_error("context must contain a hole");
    if (holes > 1) throw validation_error("context must contain exactly one hole");
  }

  static context empty() {
    tree_seq s;
    s.push_back(tree::hole());
    return context(std::move(s));
  }

  bool is_bare_hole() const { return trees_.size() == 1 && trees_[0].is_hole(); }

  const tree_seq& trees() const { return trees_; }
  std::size_t node_count() const { return detail::node_count(trees_); }

  bool operator==(const context& o) const { return trees_ == o.trees_; }
  bool operator!=(const context& o) const { return !(*this == o); }

private:
  tree_seq trees_;
};

/// One-sorted forest: possibly empty, any label may appear in a leaf or an
/// inner position. Used by the label-morphism machinery and the game.
struct maybe_empty_forest {
  tree_seq trees;

  maybe_empty_forest() = default;
  explicit maybe_empty_forest(tree_seq ts) : trees(std::move(ts)) {
    if (detail::count_holes(trees) != 0)
      throw validation_error("forest must not contain a hole");
  }

  bool empty() const { return trees.empty(); }
  std::size_t node_count() const { return detail::node_count(trees); }
  bool operator==(const maybe_empty_forest& o) const { return trees == o.trees; }
};

inline std::string render(const tree& t) {
  std::string out;
  detail::render_tree(t, out);
  return out;
}
inline std::string render(const forest& f) { return detail::render_seq(f.trees()); }
inline std::string render(const context& c) { return detail::render_seq(c.trees()); }
inline std::string render(const maybe_empty_forest& f) { return detail::render_seq(f.trees); }

// ---------------------------------------------------------------------------
// Parsing
//
// FOREST  := TREE ('+' TREE)*
// TREE    := LABEL | LABEL '(' FOREST ')' | '[]'
//
// Whitespace is insignificant; '[]' is only legal in context mode.
// ---------------------------------------------------------------------------

namespace detail {

class term_parser {
public:
  term_parser(std::string_view text, bool allow_hole)
      : text_(text), allow_hole_(allow_hole) {}

  tree_seq parse() {
    tree_seq ts = parse_seq();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return ts;
  }

private:
  tree_seq parse_seq() {
    tree_seq ts;
    ts.push_back(parse_tree());
    while (true) {
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '+') {
        ++pos_;
        ts.push_back(parse_tree());
      } else {
        break;
      }
    }
    return ts;
  }

  tree parse_tree() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected a tree");
    if (text_[pos_] == '[') {
      if (pos_ + 1 >= text_.size() || text_[pos_ + 1] != ']') fail("expected ']'");
      if (!allow_hole_) fail("hole in forest mode");
      pos_ += 2;
      return tree::hole();
    }
    std::string label = parse_label();
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      tree_seq kids = parse_seq();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return tree::inner(std::move(label), std::move(kids));
    }
    return tree::leaf(std::move(label));
  }

  std::string parse_label() {
    std::size_t start = pos_;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
    auto alnum = [&](char c) {
      return alpha(c) || (c >= '0' && c <= '9') || c == '_';
    };
    if (pos_ >= text_.size() || !alpha(text_[pos_])) fail("expected a label");
    ++pos_;
    while (pos_ < text_.size() && alnum(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r'))
      ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) { throw parse_error(msg, pos_); }

  std::string_view text_;
  bool allow_hole_;
  std::size_t pos_ = 0;
};

} // namespace detail

/// Parses a forest; labels are not checked against any alphabet.
inline forest parse_forest(std::string_view text) {
  return forest(detail::term_parser(text, false).parse());
}

/// Parses a forest and validates leaf/inner sorting against `sigma`.
inline forest parse_forest(std::string_view text, const alphabet& sigma) {
  forest f(detail::term_parser(text, false).parse());
  detail::validate_sorts(f.trees(), sigma);
  return f;
}

inline context parse_context(std::string_view text) {
  tree_seq ts = detail::term_parser(text, true).parse();
  std::size_t holes = detail::count_holes(ts);
  if (holes == 0) throw parse_error("context must contain a hole", text.size());
  if (holes > 1) throw parse_error("context must contain exactly one hole", text.size());
  return context(std::move(ts));
}

inline context parse_context(std::string_view text, const alphabet& sigma) {
  context c = parse_context(text);
  detail::validate_sorts(c.trees(), sigma);
  return c;
}

// ---------------------------------------------------------------------------
// Structural operations
// ---------------------------------------------------------------------------

inline forest concat(const forest& a, const forest& b) {
  tree_seq ts = a.trees();
  ts.insert(ts.end(), b.trees().begin(), b.trees().end());
  return forest(std::move(ts));
}

/// Substitutes a forest into the hole; the empty context acts as identity.
inline forest plug(const context& p, const forest& t) {
  return forest(detail::splice_hole(p.trees(), t.trees()));
}

/// Context composition: plug(plug(p, q), t) == plug(p, plug(q, t)).
inline context plug(const context& p, const context& q) {
  return context(detail::splice_hole(p.trees(), q.trees()));
}

/// One-sorted substitution; an inner node left childless collapses into a
/// leaf with the same label.
inline maybe_empty_forest plug(const context& p, const maybe_empty_forest& t) {
  return maybe_empty_forest(detail::splice_hole(p.trees(), t.trees));
}

/// n-fold self-composition; power 0 is the empty context.
inline context context_power(const context& p, unsigned n) {
  context r = context::empty();
  for (unsigned i = 0; i < n; ++i) r = plug(r, p);
  return r;
}

// ---------------------------------------------------------------------------
// Node addressing and queries
// ---------------------------------------------------------------------------

/// Address of a node: the root's index in the forest followed by zero-based
/// child indices.
struct node_id {
  std::vector<std::size_t> path;

  bool operator==(const node_id& o) const { return path == o.path; }
  bool operator!=(const node_id& o) const { return !(*this == o); }
  bool operator<(const node_id& o) const { return path < o.path; }
};

inline std::string to_string(const node_id& id) {
  std::string out;
  for (std::size_t i = 0; i < id.path.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(id.path[i]);
  }
  return out;
}

namespace detail {

inline const tree* find_node(const tree_seq& ts, const node_id& id) {
  if (id.path.empty() || id.path[0] >= ts.size()) return nullptr;
  const tree* cur = &ts[id.path[0]];
  for (std::size_t i = 1; i < id.path.size(); ++i) {
    if (id.path[i] >= cur->children().size()) return nullptr;
    cur = &cur->children()[id.path[i]];
  }
  return cur;
}

inline void collect_nodes(const tree& t, node_id& cur, std::vector<node_id>& out) {
  out.push_back(cur);
  for (std::size_t i = 0; i < t.children().size(); ++i) {
    cur.path.push_back(i);
    collect_nodes(t.children()[i], cur, out);
    cur.path.pop_back();
  }
}

} // namespace detail

inline std::vector<node_id> all_nodes(const forest& f) {
  std::vector<node_id> out;
  node_id cur;
  for (std::size_t i = 0; i < f.trees().size(); ++i) {
    cur.path.push_back(i);
    detail::collect_nodes(f.trees()[i], cur, out);
    cur.path.pop_back();
  }
  return out;
}

inline const tree& subtree(const forest& f, const node_id& id) {
  const tree* t = detail::find_node(f.trees(), id);
  if (!t) throw validation_error("invalid node id: " + to_string(id));
  return *t;
}

inline std::string label_at(const forest& f, const node_id& id) {
  return subtree(f, id).label();
}

/// Proper ancestors, closest first.
inline std::vector<node_id> ancestors(const forest& f, const node_id& id) {
  subtree(f, id); // validates
  std::vector<node_id> out;
  node_id cur = id;
  while (cur.path.size() > 1) {
    cur.path.pop_back();
    out.push_back(cur);
  }
  return out;
}

/// Proper descendants in preorder.
inline std::vector<node_id> proper_descendants(const forest& f, const node_id& id) {
  const tree& t = subtree(f, id);
  std::vector<node_id> out;
  node_id cur = id;
  for (std::size_t i = 0; i < t.children().size(); ++i) {
    cur.path.push_back(i);
    detail::collect_nodes(t.children()[i], cur, out);
    cur.path.pop_back();
  }
  return out;
}

// ---------------------------------------------------------------------------
// One-sorted label morphisms
// ---------------------------------------------------------------------------

/// Maps each source label to a one-sorted target context; the bare hole
/// deletes the node and promotes its children.
class label_morphism {
public:
  explicit label_morphism(std::map<std::string, context> images)
      : images_(std::move(images)) {}

  static label_morphism identity(const std::vector<std::string>& labels) {
    std::map<std::string, context> m;
    for (const auto& l : labels) {
      tree_seq ts;
      ts.push_back(tree::inner(l, {tree::hole()}));
      m.emplace(l, context(std::move(ts)));
    }
    return label_morphism(std::move(m));
  }

  const context& image(const std::string& label) const {
    auto it = images_.find(label);
    if (it == images_.end())
      throw validation_error("label morphism is not defined on '" + label + "'");
    return it->second;
  }

  const std::map<std::string, context>& images() const { return images_; }

  maybe_empty_forest apply(const maybe_empty_forest& f) const {
    return maybe_empty_forest(apply_seq(f.trees));
  }

  /// Extension to contexts: the hole is preserved.
  context apply(const context& c) const { return context(apply_seq(c.trees())); }

private:
  tree_seq apply_seq(const tree_seq& ts) const {
    tree_seq out;
    for (const auto& t : ts) {
      if (t.is_hole()) {
        out.push_back(t);
        continue;
      }
      tree_seq kids = apply_seq(t.children());
      tree_seq img = detail::splice_hole(image(t.label()).trees(), kids);
      out.insert(out.end(), img.begin(), img.end());
    }
    return out;
  }

  std::map<std::string, context> images_;
};

inline maybe_empty_forest apply_label_morphism(const label_morphism& m,
                                               const maybe_empty_forest& f) {
  return m.apply(f);
}

} // namespace efpast
