#include <algorithm>
#include <queue>
#include <tuple>

#include "kcomp/embeddings.hpp"
#include "kcomp/error.hpp"

namespace kcomp {

HuffmanTree build_huffman(std::span<const std::uint64_t> counts) {
  const std::size_t n = counts.size();
  if (n < 2) throw usage_error("a Huffman tree needs at least 2 words");

  // Heap entries are (weight, order, node). Leaves take order 0..n-1 and
  // internal nodes n, n+1, ... so equal weights resolve deterministically.
  // Node ids: leaves 0..n-1, internal nodes n..2n-2.
  using Entry = std::tuple<std::uint64_t, std::size_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (std::size_t i = 0; i < n; ++i) heap.emplace(counts[i], i, i);

  std::vector<std::size_t> parent(2 * n - 1, 0);
  std::vector<std::uint8_t> bit(2 * n - 1, 0);
  std::size_t next = n;
  while (heap.size() > 1) {
    auto [w0, o0, first] = heap.top();
    heap.pop();
    auto [w1, o1, second] = heap.top();
    heap.pop();
    parent[first] = next;
    parent[second] = next;
    bit[first] = 0;
    bit[second] = 1;
    heap.emplace(w0 + w1, next, next);
    ++next;
  }
  const std::size_t root = 2 * n - 2;

  HuffmanTree tree;
  tree.codes.resize(n);
  tree.paths.resize(n);
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    auto& code = tree.codes[leaf];
    auto& path = tree.paths[leaf];
    for (std::size_t node = leaf; node != root; node = parent[node]) {
      code.push_back(bit[node]);
      path.push_back(static_cast<std::uint32_t>(parent[node] - n));
    }
    std::reverse(code.begin(), code.end());
    std::reverse(path.begin(), path.end());
  }
  return tree;
}

HuffmanTree build_huffman(const Vocabulary& vocab) {
  std::vector<std::uint64_t> counts(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) counts[i] = vocab.tf(i);
  return build_huffman(counts);
}

}  // namespace kcomp
