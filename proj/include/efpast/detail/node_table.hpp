#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <efpast/terms.hpp>

namespace efpast::detail {

// Preorder flattening of a tree sequence. Parent links and subtree ranges
// make the modal operators linear-time sweeps.
struct node_table {
  struct entry {
    std::string label;
    int parent = -1;            // index of parent node, -1 for roots
    std::size_t subtree_end = 0; // one past the last preorder index of the subtree
    node_id id;
  };

  std::vector<entry> nodes;
  std::vector<std::size_t> roots;

  static node_table build(const tree_seq& ts) {
    node_table t;
    node_id cur;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      cur.path.push_back(i);
      t.roots.push_back(t.nodes.size());
      t.add(ts[i], -1, cur);
      cur.path.pop_back();
    }
    return t;
  }

  std::size_t size() const { return nodes.size(); }

  bool is_proper_ancestor(std::size_t anc, std::size_t x) const {
    return anc < x && x < nodes[anc].subtree_end;
  }

  std::vector<std::size_t> proper_ancestors(std::size_t x) const {
    std::vector<std::size_t> out;
    int p = nodes[x].parent;
    while (p >= 0) {
      out.push_back(static_cast<std::size_t>(p));
      p = nodes[static_cast<std::size_t>(p)].parent;
    }
    return out;
  }

  std::vector<std::size_t> proper_descendants(std::size_t x) const {
    std::vector<std::size_t> out;
    for (std::size_t i = x + 1; i < nodes[x].subtree_end; ++i) out.push_back(i);
    return out;
  }

  // Index of the node with the given id, or -1.
  int index_of(const node_id& id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].id == id) return static_cast<int>(i);
    return -1;
  }

private:
  void add(const tree& t, int parent, node_id& cur) {
    std::size_t me = nodes.size();
    entry e;
    e.label = t.is_hole() ? "[]" : t.label();
    e.parent = parent;
    e.id = cur;
    nodes.push_back(std::move(e));
    for (std::size_t i = 0; i < t.children().size(); ++i) {
      cur.path.push_back(i);
      add(t.children()[i], static_cast<int>(me), cur);
      cur.path.pop_back();
    }
    nodes[me].subtree_end = nodes.size();
  }
};

} // namespace efpast::detail
