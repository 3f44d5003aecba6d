#pragma once
// Bulk-loaded, read-only, in-memory B+-tree over a sorted (key, vertex-id)
// array. Leaves are consecutive chunks of the array joined in a chain, so a
// range scan is one root-to-leaf descent (skipping subtrees whose key range
// lies below the scan start) followed by a forward walk along the chain.

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace live {

class BPlusTree {
 public:
  static constexpr uint32_t kDefaultFanout = 64;

  BPlusTree() = default;

  // keys must be sorted ascending (ties broken by vertex id by the caller)
  static BPlusTree bulk_load(std::vector<double> keys, std::vector<uint32_t> vids,
                             uint32_t fanout = kDefaultFanout) {
    if (keys.size() != vids.size()) throw std::invalid_argument("bulk_load: size mismatch");
    if (fanout < 2) throw std::invalid_argument("bulk_load: fanout must be >= 2");
    for (size_t i = 1; i < keys.size(); ++i)
      if (keys[i - 1] > keys[i]) throw std::invalid_argument("bulk_load: keys not sorted");

    BPlusTree t;
    t.fanout_ = fanout;
    t.keys_ = std::move(keys);
    t.vids_ = std::move(vids);
    const size_t n = t.keys_.size();
    if (n == 0) return t;

    // leaf level
    std::vector<uint32_t> level;
    for (size_t first = 0; first < n; first += fanout) {
      const auto count = static_cast<uint32_t>(std::min<size_t>(fanout, n - first));
      Node node;
      node.leaf = true;
      node.first = static_cast<uint32_t>(first);
      node.count = count;
      node.min_key = t.keys_[first];
      node.max_key = t.keys_[first + count - 1];
      if (!t.nodes_.empty() && t.nodes_.back().leaf)
        t.nodes_.back().next_leaf = static_cast<int32_t>(t.nodes_.size());
      level.push_back(static_cast<uint32_t>(t.nodes_.size()));
      t.nodes_.push_back(node);
    }
    t.leaf_count_ = static_cast<uint32_t>(level.size());

    // internal levels until a single root remains
    while (level.size() > 1) {
      std::vector<uint32_t> parents;
      for (size_t first = 0; first < level.size(); first += fanout) {
        const auto count = static_cast<uint32_t>(std::min<size_t>(fanout, level.size() - first));
        Node node;
        node.leaf = false;
        node.first = level[first];  // children are consecutive node ids
        node.count = count;
        node.min_key = t.nodes_[level[first]].min_key;
        node.max_key = t.nodes_[level[first + count - 1]].max_key;
        parents.push_back(static_cast<uint32_t>(t.nodes_.size()));
        t.nodes_.push_back(node);
      }
      level.swap(parents);
      ++t.height_;
    }
    t.root_ = static_cast<int32_t>(level.front());
    return t;
  }

  size_t size() const { return keys_.size(); }
  uint32_t fanout() const { return fanout_; }
  uint32_t height() const { return height_; }
  uint32_t leaf_count() const { return leaf_count_; }
  size_t node_count() const { return nodes_.size(); }
  std::span<const double> keys() const { return keys_; }
  std::span<const uint32_t> vids() const { return vids_; }

  // Visits every entry with lo <= key < hi in (key, insertion) order.
  template <typename Fn>
  void range_scan(double lo, double hi, Fn&& fn) const {
    if (root_ < 0 || !(lo < hi)) return;
    // descend to the first leaf whose max key reaches lo
    uint32_t node = static_cast<uint32_t>(root_);
    if (nodes_[node].max_key < lo) return;
    while (!nodes_[node].leaf) {
      const Node& nd = nodes_[node];
      uint32_t child = nd.first;
      const uint32_t end = nd.first + nd.count;
      while (child < end && nodes_[child].max_key < lo) ++child;  // subtree skip
      if (child == end) return;
      node = child;
    }
    // position inside the leaf, then walk the chain
    const Node& leaf = nodes_[node];
    uint32_t pos = leaf.first;
    const uint32_t leaf_end = leaf.first + leaf.count;
    while (pos < leaf_end && keys_[pos] < lo) ++pos;
    int32_t cur = static_cast<int32_t>(node);
    while (cur >= 0) {
      const Node& nd = nodes_[static_cast<uint32_t>(cur)];
      const uint32_t end = nd.first + nd.count;
      for (; pos < end; ++pos) {
        if (keys_[pos] >= hi) return;
        fn(keys_[pos], vids_[pos]);
      }
      cur = nd.next_leaf;
      if (cur >= 0) pos = nodes_[static_cast<uint32_t>(cur)].first;
    }
  }

  std::vector<std::pair<double, uint32_t>> range_scan(double lo, double hi) const {
    std::vector<std::pair<double, uint32_t>> out;
    range_scan(lo, hi, [&](double k, uint32_t v) { out.emplace_back(k, v); });
    return out;
  }

 private:
  struct Node {
    double min_key = 0.0, max_key = 0.0;
    uint32_t first = 0;  // leaf: index into keys_/vids_; internal: first child node id
    uint32_t count = 0;
    int32_t next_leaf = -1;
    bool leaf = true;
  };

  uint32_t fanout_ = kDefaultFanout;
  uint32_t height_ = 0;  // internal levels above the leaves
  uint32_t leaf_count_ = 0;
  int32_t root_ = -1;
  std::vector<Node> nodes_;
  std::vector<double> keys_;
  std::vector<uint32_t> vids_;
};

}  // namespace live
