#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kcomp/corpus.hpp"
#include "kcomp/strings.hpp"

namespace kcomp {

/// Word -> dense vector, all of one dimension. Immutable once shared.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }

  /// Returns false (and stores nothing) if the word is already present.
  /// Throws on a length mismatch or a non-finite entry.
  bool add(std::string word, std::span<const double> values);

  std::optional<std::size_t> index(std::string_view word) const;
  bool contains(std::string_view word) const { return index(word).has_value(); }
  const std::string& word(std::size_t i) const { return words_.at(i); }
  const std::vector<std::string>& words() const noexcept { return words_; }
  std::span<const double> vector(std::size_t i) const;
  /// Throws if the word is absent.
  std::span<const double> vector(std::string_view word) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::vector<double> data_;
  StringMap<std::size_t> index_;
};

enum class EmbeddingFormat { Word2VecText, Word2VecBinary };

EmbeddingFormat parse_embedding_format(std::string_view name);

struct EmbeddingLoad {
  EmbeddingTable table;
  std::size_t duplicates = 0;    // rows whose word was already seen
  std::size_t zero_vectors = 0;  // all-zero rows, dropped
};

EmbeddingLoad parse_embeddings(std::istream& in, EmbeddingFormat format);
EmbeddingLoad load_embeddings(const std::filesystem::path& path,
                              EmbeddingFormat format);
void write_embeddings(std::ostream& out, const EmbeddingTable& table,
                      EmbeddingFormat format);
void save_embeddings(const std::filesystem::path& path,
                     const EmbeddingTable& table, EmbeddingFormat format);

/// Cosine similarity. Throws on length mismatch or a zero-norm input.
double cosine(std::span<const double> u, std::span<const double> v);

/// Hierarchical-softmax output tree. Leaf i is vocabulary word i. Internal
/// nodes are numbered 0..n-2 in creation order, so the root is n-2.
struct HuffmanTree {
  std::vector<std::vector<std::uint8_t>> codes;   // bits from root to leaf
  std::vector<std::vector<std::uint32_t>> paths;  // internal nodes, root first

  std::size_t leaves() const noexcept { return codes.size(); }
  std::size_t internal_nodes() const noexcept {
    return codes.empty() ? 0 : codes.size() - 1;
  }
};

/// Frequency-based Huffman tree. Equal weights are resolved by position
/// (earlier first), and the first node popped in a merge takes bit 0.
HuffmanTree build_huffman(std::span<const std::uint64_t> counts);
HuffmanTree build_huffman(const Vocabulary& vocab);

struct SkipGramConfig {
  std::size_t window = 15;
  std::size_t epochs = 400;
  std::size_t dim = 200;
  double initial_lr = 0.025;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Skip-gram with a hierarchical-softmax output layer.
///
/// P(o | c) = prod_j sigma(s_j * <node_j, in_c>) over the internal nodes on
/// o's Huffman path, with s_j = +1 for code bit 0 and -1 for code bit 1.
class SkipGramModel {
 public:
  /// Input vectors uniform in [-0.5/dim, 0.5/dim]; node vectors zero.
  SkipGramModel(HuffmanTree tree, std::size_t dim, std::uint64_t seed);

  std::size_t vocab_size() const noexcept { return tree_.leaves(); }
  std::size_t dim() const noexcept { return dim_; }
  const HuffmanTree& tree() const noexcept { return tree_; }

  std::span<double> input(std::size_t word);
  std::span<const double> input(std::size_t word) const;
  std::span<double> node(std::size_t id);
  std::span<const double> node(std::size_t id) const;

  double probability(std::size_t center, std::size_t word) const;
  /// -log P(context | center).
  double pair_loss(std::size_t center, std::size_t context) const;

  struct Gradient {
    std::vector<double> input;               // d loss / d in_center
    std::vector<std::vector<double>> nodes;  // aligned with the context path
  };
  Gradient pair_gradient(std::size_t center, std::size_t context) const;

  /// One SGD step on pair_loss. Node updates use the pre-step input vector.
  void sgd_step(std::size_t center, std::size_t context, double lr);

  EmbeddingTable to_table(const Vocabulary& vocab) const;

 private:
  HuffmanTree tree_;
  std::size_t dim_;
  std::vector<double> input_;
  std::vector<double> nodes_;
  std::vector<double> scratch_;
};

/// Trains over every (center, context) pair within `window` positions of
/// each other inside one segment. The learning rate decays linearly from
/// initial_lr to initial_lr / 10 across all updates. Single-threaded and
/// bitwise reproducible for a fixed seed. Every token must be in vocab.
SkipGramModel train_skipgram(const Corpus& corpus, const Vocabulary& vocab,
                             const SkipGramConfig& config);

EmbeddingTable train_skipgram_hs(const Corpus& corpus, const Vocabulary& vocab,
                                 const SkipGramConfig& config);

}  // namespace kcomp
