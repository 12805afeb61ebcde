#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <efpast/errors.hpp>
#include <efpast/terms.hpp>

namespace efpast {

/// Bottom-up recognizer: a finite additive semigroup H with a leaf map
/// A -> H, an inner map B -> (H -> H), and a set of accepting elements.
struct semigroup_automaton {
  enum class language_kind { forest, tree };

  std::string name;
  alphabet sigma;
  std::vector<std::string> elements;
  std::vector<std::vector<int>> add;            // add[i][j]
  std::map<std::string, int> leaf_map;          // beta_A
  std::map<std::string, std::vector<int>> inner_map; // beta_B, one array per label
  std::vector<int> accept;                      // sorted
  language_kind kind = language_kind::forest;

  std::size_t size() const { return elements.size(); }

  int element_index(const std::string& name_) const {
    for (std::size_t i = 0; i < elements.size(); ++i)
      if (elements[i] == name_) return static_cast<int>(i);
    return -1;
  }

  bool is_accepting(int h) const {
    return std::binary_search(accept.begin(), accept.end(), h);
  }

  /// Structural validation: table shapes, index ranges, totality of the two
  /// maps, and associativity of + checked over the full table.
  void validate() const {
    const int n = static_cast<int>(elements.size());
    if (n == 0) throw validation_error("automaton has no elements");
    {
      std::vector<std::string> sorted = elements;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw validation_error("duplicate element names");
    }
    if (add.size() != elements.size())
      throw validation_error("add table must have one row per element");
    for (const auto& row : add) {
      if (row.size() != elements.size())
        throw validation_error("add table rows must have one entry per element");
      for (int v : row)
        if (v < 0 || v >= n) throw validation_error("add table entry out of range");
    }
    for (const auto& a : sigma.leaf_labels())
      if (!leaf_map.count(a))
        throw validation_error("leaf map is missing label '" + a + "'");
    for (const auto& [a, h] : leaf_map) {
      if (!sigma.is_leaf_label(a))
        throw validation_error("leaf map mentions unknown label '" + a + "'");
      if (h < 0 || h >= n) throw validation_error("leaf map entry out of range");
    }
    for (const auto& b : sigma.inner_labels())
      if (!inner_map.count(b))
        throw validation_error("inner map is missing label '" + b + "'");
    for (const auto& [b, row] : inner_map) {
      if (!sigma.is_inner_label(b))
        throw validation_error("inner map mentions unknown label '" + b + "'");
      if (row.size() != elements.size())
        throw validation_error("inner map for '" + b + "' must have one entry per element");
      for (int v : row)
        if (v < 0 || v >= n) throw validation_error("inner map entry out of range");
    }
    for (int h : accept)
      if (h < 0 || h >= n) throw validation_error("accept entry out of range");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          if (add[static_cast<std::size_t>(add[i][j])][k] !=
              add[i][static_cast<std::size_t>(add[j][k])])
            throw validation_error("add is not associative at (" + elements[i] + "," +
                                   elements[j] + "," + elements[k] + ")");
  }
};

// ---------------------------------------------------------------------------
// JSON document format
// ---------------------------------------------------------------------------

namespace detail {

inline int resolve_element(const semigroup_automaton& a, const nlohmann::json& j,
                           const char* where) {
  if (!j.is_string())
    throw validation_error(std::string(where) + ": element reference must be a string");
  int idx = a.element_index(j.get<std::string>());
  if (idx < 0)
    throw validation_error(std::string(where) + ": unknown element '" +
                           j.get<std::string>() + "'");
  return idx;
}

} // namespace detail

inline semigroup_automaton automaton_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw validation_error("automaton document must be an object");
  semigroup_automaton a;
  a.name = doc.value("name", std::string());
  try {
    a.sigma = alphabet(doc.at("leaf_labels").get<std::vector<std::string>>(),
                       doc.at("inner_labels").get<std::vector<std::string>>());
    a.elements = doc.at("elements").get<std::vector<std::string>>();
    a.add = doc.at("add").get<std::vector<std::vector<int>>>();
    for (const auto& [k, v] : doc.at("leaf").items())
      a.leaf_map[k] = detail::resolve_element(a, v, "leaf");
    for (const auto& [k, v] : doc.at("inner").items()) {
      if (!v.is_array()) throw validation_error("inner map entries must be arrays");
      std::vector<int> row;
      for (const auto& e : v) row.push_back(detail::resolve_element(a, e, "inner"));
      a.inner_map[k] = std::move(row);
    }
    for (const auto& e : doc.at("accept"))
      a.accept.push_back(detail::resolve_element(a, e, "accept"));
    std::sort(a.accept.begin(), a.accept.end());
    a.accept.erase(std::unique(a.accept.begin(), a.accept.end()), a.accept.end());
    std::string kind = doc.at("kind").get<std::string>();
    if (kind == "forest")
      a.kind = semigroup_automaton::language_kind::forest;
    else if (kind == "tree")
      a.kind = semigroup_automaton::language_kind::tree;
    else
      throw validation_error("unknown kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("malformed automaton document: ") + e.what());
  }
  a.validate();
  return a;
}

/// Parses and validates an automaton document.
inline semigroup_automaton load_automaton(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("invalid JSON: ") + e.what());
  }
  return automaton_from_json(doc);
}

inline nlohmann::json automaton_to_json(const semigroup_automaton& a) {
  nlohmann::json doc;
  doc["name"] = a.name;
  doc["leaf_labels"] = a.sigma.leaf_labels();
  doc["inner_labels"] = a.sigma.inner_labels();
  doc["elements"] = a.elements;
  doc["add"] = a.add;
  nlohmann::json leaf = nlohmann::json::object();
  for (const auto& [k, v] : a.leaf_map) leaf[k] = a.elements[static_cast<std::size_t>(v)];
  doc["leaf"] = leaf;
  nlohmann::json inner = nlohmann::json::object();
  for (const auto& [k, row] : a.inner_map) {
    nlohmann::json arr = nlohmann::json::array();
    for (int v : row) arr.push_back(a.elements[static_cast<std::size_t>(v)]);
    inner[k] = arr;
  }
  doc["inner"] = inner;
  nlohmann::json acc = nlohmann::json::array();
  for (int h : a.accept) acc.push_back(a.elements[static_cast<std::size_t>(h)]);
  doc["accept"] = acc;
  doc["kind"] = a.kind == semigroup_automaton::language_kind::forest ? "forest" : "tree";
  return doc;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace detail {

inline int beta_tree(const semigroup_automaton& a, const tree& t);

inline int beta_seq(const semigroup_automaton& a, const tree_seq& ts) {
  std::optional<int> acc;
  for (const auto& t : ts) {
    int v = beta_tree(a, t);
    acc = acc ? a.add[static_cast<std::size_t>(*acc)][static_cast<std::size_t>(v)] : v;
  }
  return *acc;
}

inline int beta_tree(const semigroup_automaton& a, const tree& t) {
  if (t.is_leaf()) {
    auto it = a.leaf_map.find(t.label());
    if (it == a.leaf_map.end())
      throw validation_error("label '" + t.label() + "' outside the automaton alphabet");
    return it->second;
  }
  auto it = a.inner_map.find(t.label());
  if (it == a.inner_map.end())
    throw validation_error("label '" + t.label() + "' outside the automaton alphabet");
  return it->second[static_cast<std::size_t>(beta_seq(a, t.children()))];
}

// The function h -> beta(p t) for any t with beta(t) = h, as a vector.
inline std::vector<int> beta_ctx_seq(const semigroup_automaton& a, const tree_seq& ts);

inline std::vector<int> beta_ctx_tree(const semigroup_automaton& a, const tree& t) {
  if (t.is_hole()) {
    std::vector<int> id(a.size());
    std::iota(id.begin(), id.end(), 0);
    return id;
  }
  auto it = a.inner_map.find(t.label());
  if (it == a.inner_map.end())
    throw validation_error("label '" + t.label() + "' outside the automaton alphabet");
  std::vector<int> sub = beta_ctx_seq(a, t.children());
  std::vector<int> out(a.size());
  for (std::size_t h = 0; h < a.size(); ++h)
    out[h] = it->second[static_cast<std::size_t>(sub[h])];
  return out;
}

inline std::vector<int> beta_ctx_seq(const semigroup_automaton& a, const tree_seq& ts) {
  std::size_t holed = ts.size();
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (count_holes(ts[i]) > 0) {
      holed = i;
      break;
    }
  std::optional<int> left, right;
  for (std::size_t i = 0; i < holed; ++i) {
    int v = beta_tree(a, ts[i]);
    left = left ? a.add[static_cast<std::size_t>(*left)][static_cast<std::size_t>(v)] : v;
  }
  for (std::size_t i = holed + 1; i < ts.size(); ++i) {
    int v = beta_tree(a, ts[i]);
    right = right ? a.add[static_cast<std::size_t>(*right)][static_cast<std::size_t>(v)] : v;
  }
  std::vector<int> mid = beta_ctx_tree(a, ts[holed]);
  std::vector<int> out(a.size());
  for (std::size_t h = 0; h < a.size(); ++h) {
    int v = mid[h];
    if (left) v = a.add[static_cast<std::size_t>(*left)][static_cast<std::size_t>(v)];
    if (right) v = a.add[static_cast<std::size_t>(v)][static_cast<std::size_t>(*right)];
    out[h] = v;
  }
  return out;
}

} // namespace detail

inline int beta_forest(const semigroup_automaton& a, const forest& f) {
  return detail::beta_seq(a, f.trees());
}

inline std::vector<int> beta_context(const semigroup_automaton& a, const context& p) {
  return detail::beta_ctx_seq(a, p.trees());
}

inline bool accepts(const semigroup_automaton& a, const forest& f) {
  if (a.kind == semigroup_automaton::language_kind::tree && f.trees().size() != 1)
    throw validation_error("tree-kind automaton applied to a multi-tree forest");
  return a.is_accepting(beta_forest(a, f));
}

} // namespace efpast
