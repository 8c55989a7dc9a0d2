#include "kcomp/embeddings.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "kcomp/error.hpp"

namespace kcomp {

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw usage_error("embedding dimension must be positive");
}

bool EmbeddingTable::add(std::string word, std::span<const double> values) {
  if (values.size() != dim_) {
    throw data_error("vector for '" + word + "' has " + std::to_string(values.size()) +
                     " values, expected " + std::to_string(dim_));
  }
  for (double x : values) {
    if (!std::isfinite(x)) throw data_error("non-finite value in vector for '" + word + "'");
  }
  if (index_.contains(word)) return false;
  index_.emplace(word, words_.size());
  words_.push_back(std::move(word));
  data_.insert(data_.end(), values.begin(), values.end());
  return true;
}

std::optional<std::size_t> EmbeddingTable::index(std::string_view word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const double> EmbeddingTable::vector(std::size_t i) const {
  if (i >= words_.size()) throw usage_error("embedding index out of range");
  return {data_.data() + i * dim_, dim_};
}

std::span<const double> EmbeddingTable::vector(std::string_view word) const {
  auto i = index(word);
  if (!i) throw data_error("no embedding for '" + std::string(word) + "'");
  return vector(*i);
}

EmbeddingFormat parse_embedding_format(std::string_view name) {
  if (name == "word2vec-text") return EmbeddingFormat::Word2VecText;
  if (name == "word2vec-binary") return EmbeddingFormat::Word2VecBinary;
  throw usage_error("unknown embedding format '" + std::string(name) +
                    "' (expected word2vec-text or word2vec-binary)");
}

namespace {

struct Header {
  std::size_t count = 0;
  std::size_t dim = 0;
};

Header read_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw data_error("embedding file is empty");
  std::istringstream fields(line);
  long long count = -1, dim = -1;
  if (!(fields >> count >> dim) || count < 0 || dim <= 0) {
    throw data_error("embedding header must be \"count dim\"");
  }
  return {static_cast<std::size_t>(count), static_cast<std::size_t>(dim)};
}

bool all_zero(std::span<const double> v) {
  for (double x : v) {
    if (x != 0.0) return false;
  }
  return true;
}

void accept_row(EmbeddingLoad& load, std::string word, std::span<const double> v) {
  if (all_zero(v)) {
    ++load.zero_vectors;
    return;
  }
  if (!load.table.add(std::move(word), v)) ++load.duplicates;
}

void parse_text_rows(std::istream& in, const Header& header, EmbeddingLoad& load) {
  std::string line;
  std::vector<double> values;
  std::size_t row = 0;
  std::size_t line_no = 1;
  while (row < header.count && std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(' ') == std::string::npos) continue;
    ++row;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end && *p == ' ') ++p;
    const char* word_end = p;
    while (word_end < end && *word_end != ' ') ++word_end;
    std::string word(p, word_end);
    values.clear();
    p = word_end;
    while (true) {
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      if (p >= end) break;
      double x = 0.0;
      auto [next, ec] = std::from_chars(p, end, x);
      if (ec != std::errc()) {
        throw data_error("embedding line " + std::to_string(line_no) +
                         ": unparsable value for '" + word + "'");
      }
      values.push_back(x);
      p = next;
    }
    if (values.size() != header.dim) {
      throw data_error("embedding line " + std::to_string(line_no) + " ('" + word +
                       "') has " + std::to_string(values.size()) +
                       " values, expected " + std::to_string(header.dim));
    }
    accept_row(load, std::move(word), values);
  }
}

void parse_binary_rows(std::istream& in, const Header& header, EmbeddingLoad& load) {
  std::vector<double> values(header.dim);
  std::vector<unsigned char> raw(header.dim * 4);
  for (std::size_t row = 0; row < header.count; ++row) {
    int c;
    while ((c = in.peek()) != EOF && (c == '\n' || c == ' ')) in.get();
    if (c == EOF) break;
    std::string word;
    while ((c = in.get()) != EOF && c != ' ') word.push_back(static_cast<char>(c));
    if (c == EOF) {
      throw data_error("binary embedding row " + std::to_string(row + 1) +
                       " is truncated");
    }
    if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()))) {
      throw data_error("binary embedding row " + std::to_string(row + 1) + " ('" +
                       word + "') is truncated");
    }
    for (std::size_t d = 0; d < header.dim; ++d) {
      std::uint32_t bits = static_cast<std::uint32_t>(raw[4 * d]) |
                           static_cast<std::uint32_t>(raw[4 * d + 1]) << 8 |
                           static_cast<std::uint32_t>(raw[4 * d + 2]) << 16 |
                           static_cast<std::uint32_t>(raw[4 * d + 3]) << 24;
      values[d] = static_cast<double>(std::bit_cast<float>(bits));
    }
    accept_row(load, std::move(word), values);
  }
}

}  // namespace

EmbeddingLoad parse_embeddings(std::istream& in, EmbeddingFormat format) {
  const Header header = read_header(in);
  EmbeddingLoad load{EmbeddingTable(header.dim), 0, 0};
  if (format == EmbeddingFormat::Word2VecText) {
    parse_text_rows(in, header, load);
  } else {
    parse_binary_rows(in, header, load);
  }
  return load;
}

EmbeddingLoad load_embeddings(const std::filesystem::path& path, EmbeddingFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot read " + path.string());
  try {
    return parse_embeddings(in, format);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void write_embeddings(std::ostream& out, const EmbeddingTable& table,
                      EmbeddingFormat format) {
  out << table.size() << ' ' << table.dim() << '\n';
  char buf[64];
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << table.word(i);
    const auto v = table.vector(i);
    if (format == EmbeddingFormat::Word2VecText) {
      for (double x : v) {
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, static_cast<float>(x));
        out << ' ' << std::string_view(buf, static_cast<std::size_t>(end - buf));
      }
    } else {
      out << ' ';
      for (double x : v) {
        const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(x));
        const unsigned char le[4] = {
            static_cast<unsigned char>(bits), static_cast<unsigned char>(bits >> 8),
            static_cast<unsigned char>(bits >> 16), static_cast<unsigned char>(bits >> 24)};
        out.write(reinterpret_cast<const char*>(le), 4);
      }
    }
    out << '\n';
  }
}

void save_embeddings(const std::filesystem::path& path, const EmbeddingTable& table,
                     EmbeddingFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw data_error("cannot write " + path.string());
  write_embeddings(out, table, format);
  if (!out) throw data_error("write failed for " + path.string());
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw usage_error("cosine of vectors with different lengths");
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) throw usage_error("cosine of a zero-norm vector");
  const double c = dot / (std::sqrt(uu) * std::sqrt(vv));
  return std::clamp(c, -1.0, 1.0);
}

}  // namespace kcomp
