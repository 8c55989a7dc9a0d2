#include <algorithm>
#include <cmath>

#include "kcomp/embeddings.hpp"
#include "kcomp/error.hpp"
#include "random.hpp"

namespace kcomp {

namespace {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(sigma(x)) without overflow.
double log_sigmoid(double x) {
  if (x >= 0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// +1 for code bit 0, -1 for code bit 1.
double sign_of(std::uint8_t bit) { return bit == 0 ? 1.0 : -1.0; }

}  // namespace

void SkipGramConfig::validate() const {
  if (window < 1) throw usage_error("skip-gram window must be >= 1");
  if (epochs < 1) throw usage_error("skip-gram epochs must be >= 1");
  if (dim < 2) throw usage_error("skip-gram dimension must be >= 2");
  if (!(initial_lr > 0.0)) throw usage_error("skip-gram learning rate must be positive");
}

SkipGramModel::SkipGramModel(HuffmanTree tree, std::size_t dim, std::uint64_t seed)
    : tree_(std::move(tree)), dim_(dim) {
  if (dim_ == 0) throw usage_error("skip-gram dimension must be positive");
  if (tree_.leaves() < 2) throw usage_error("skip-gram needs at least 2 words");
  input_.resize(tree_.leaves() * dim_);
  nodes_.assign(tree_.internal_nodes() * dim_, 0.0);
  scratch_.resize(dim_);
  detail::Rng rng(seed);
  const double half = 0.5 / static_cast<double>(dim_);
  for (double& x : input_) x = rng.uniform(-half, half);
}

std::span<double> SkipGramModel::input(std::size_t word) {
  return {input_.data() + word * dim_, dim_};
}
std::span<const double> SkipGramModel::input(std::size_t word) const {
  return {input_.data() + word * dim_, dim_};
}
std::span<double> SkipGramModel::node(std::size_t id) {
  return {nodes_.data() + id * dim_, dim_};
}
std::span<const double> SkipGramModel::node(std::size_t id) const {
  return {nodes_.data() + id * dim_, dim_};
}

double SkipGramModel::pair_loss(std::size_t center, std::size_t context) const {
  const auto v = input(center);
  const auto& code = tree_.codes.at(context);
  const auto& path = tree_.paths.at(context);
  double loss = 0.0;
  for (std::size_t j = 0; j < path.size(); ++j) {
    loss -= log_sigmoid(sign_of(code[j]) * dot(node(path[j]), v));
  }
  return loss;
}

double SkipGramModel::probability(std::size_t center, std::size_t word) const {
  return std::exp(-pair_loss(center, word));
}

SkipGramModel::Gradient SkipGramModel::pair_gradient(std::size_t center,
                                                     std::size_t context) const {
  const auto v = input(center);
  const auto& code = tree_.codes.at(context);
  const auto& path = tree_.paths.at(context);
  Gradient g;
  g.input.assign(dim_, 0.0);
  g.nodes.resize(path.size());
  for (std::size_t j = 0; j < path.size(); ++j) {
    const auto u = node(path[j]);
    const double s = sign_of(code[j]);
    // d/dx of -log sigma(s x) is -s (1 - sigma(s x)).
    const double coeff = -s * (1.0 - sigmoid(s * dot(u, v)));
    g.nodes[j].resize(dim_);
    for (std::size_t d = 0; d < dim_; ++d) {
      g.nodes[j][d] = coeff * v[d];
      g.input[d] += coeff * u[d];
    }
  }
  return g;
}

void SkipGramModel::sgd_step(std::size_t center, std::size_t context, double lr) {
  auto v = input(center);
  const auto& code = tree_.codes[context];
  const auto& path = tree_.paths[context];
  std::fill(scratch_.begin(), scratch_.end(), 0.0);
  for (std::size_t j = 0; j < path.size(); ++j) {
    auto u = node(path[j]);
    const double s = sign_of(code[j]);
    const double step = lr * s * (1.0 - sigmoid(s * dot(u, v)));
    for (std::size_t d = 0; d < dim_; ++d) {
      scratch_[d] += step * u[d];
      u[d] += step * v[d];
    }
  }
  for (std::size_t d = 0; d < dim_; ++d) v[d] += scratch_[d];
}

EmbeddingTable SkipGramModel::to_table(const Vocabulary& vocab) const {
  if (vocab.size() != vocab_size()) {
    throw usage_error("vocabulary does not match the trained model");
  }
  EmbeddingTable table(dim_);
  for (std::size_t i = 0; i < vocab.size(); ++i) table.add(vocab.word(i), input(i));
  return table;
}

SkipGramModel train_skipgram(const Corpus& corpus, const Vocabulary& vocab,
                             const SkipGramConfig& config) {
  config.validate();
  std::vector<std::vector<std::size_t>> stream;
  stream.reserve(corpus.size());
  for (const auto& seg : corpus.segments) {
    std::vector<std::size_t> ids;
    ids.reserve(seg.tokens.size());
    for (const auto& tok : seg.tokens) {
      auto id = vocab.index(tok);
      if (!id) {
        throw usage_error("token '" + tok + "' is not in the vocabulary; "
                          "restrict the corpus before training");
      }
      ids.push_back(*id);
    }
    stream.push_back(std::move(ids));
  }

  std::uint64_t pairs_per_epoch = 0;
  for (const auto& ids : stream) {
    const std::size_t n = ids.size();
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t lo = i >= config.window ? i - config.window : 0;
      const std::size_t hi = std::min(n - 1, i + config.window);
      pairs_per_epoch += hi - lo;
    }
  }
  if (pairs_per_epoch == 0) throw data_error("skip-gram training stream is empty");

  SkipGramModel model(build_huffman(vocab), config.dim, config.seed);
  const double total = static_cast<double>(pairs_per_epoch) * static_cast<double>(config.epochs);
  const double final_lr = config.initial_lr / 10.0;
  std::uint64_t done = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (const auto& ids : stream) {
      const std::size_t n = ids.size();
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= config.window ? i - config.window : 0;
        const std::size_t hi = std::min(n - 1, i + config.window);
        for (std::size_t j = lo; j <= hi; ++j) {
          if (j == i) continue;
          const double progress = static_cast<double>(done) / total;
          const double lr = config.initial_lr + (final_lr - config.initial_lr) * progress;
          model.sgd_step(ids[i], ids[j], lr);
          ++done;
        }
      }
    }
  }
  return model;
}

EmbeddingTable train_skipgram_hs(const Corpus& corpus, const Vocabulary& vocab,
                                 const SkipGramConfig& config) {
  return train_skipgram(corpus, vocab, config).to_table(vocab);
}

}  // namespace kcomp
