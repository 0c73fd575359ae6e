#include "chowliu/samples.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace chowliu {

SampleSet::SampleSet(std::size_t n, Alphabet alphabet, std::vector<Symbol> rows)
    : n_(n), alphabet_(alphabet), rows_(std::move(rows)) {
  if (n_ == 0 && !rows_.empty()) throw std::invalid_argument("SampleSet: rows with zero columns");
  if (n_ != 0 && rows_.size() % n_ != 0) {
    throw std::invalid_argument("SampleSet: data length is not a multiple of n");
  }
  const auto k = alphabet_.size();
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i] >= k) {
      throw std::invalid_argument("SampleSet: symbol " + std::to_string(rows_[i]) + " at row " +
                                  std::to_string(i / n_) + " is not below k=" + std::to_string(k));
    }
  }
}

SampleSet SampleSet::select_columns(std::span<const std::size_t> columns) const {
  for (auto c : columns) {
    if (c >= n_) throw std::invalid_argument("select_columns: column out of range");
  }
  std::vector<Symbol> out;
  out.reserve(size() * columns.size());
  for (std::size_t i = 0; i < size(); ++i) {
    for (auto c : columns) out.push_back(at(i, c));
  }
  return SampleSet(columns.size(), alphabet_, std::move(out));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

SampleSet read_samples_csv(std::istream& in, std::optional<std::size_t> k) {
  std::vector<Symbol> data;
  std::size_t n = 0;
  std::size_t max_symbol = 0;
  std::size_t line_no = 0;
  std::size_t pending_blank = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty()) {
      ++pending_blank;
      continue;
    }
    if (pending_blank > 0) throw ParseError(line_no - 1, "blank line inside data");
    std::size_t cols = 0;
    std::size_t pos = 0;
    while (true) {
      const auto comma = body.find(',', pos);
      const auto field = trim(body.substr(pos, comma == std::string_view::npos ? body.npos : comma - pos));
      unsigned value = 0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError(line_no, "field " + std::to_string(cols + 1) + " is not a non-negative integer: '" +
                                      std::string(field) + "'");
      }
      if (value > 255) throw ParseError(line_no, "symbol " + std::to_string(value) + " exceeds 255");
      if (k && value >= *k) {
        throw ParseError(line_no, "symbol " + std::to_string(value) + " is not below k=" + std::to_string(*k));
      }
      data.push_back(static_cast<Symbol>(value));
      max_symbol = std::max<std::size_t>(max_symbol, value);
      ++cols;
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (n == 0) {
      n = cols;
    } else if (cols != n) {
      throw ParseError(line_no, "expected " + std::to_string(n) + " fields, found " + std::to_string(cols));
    }
  }
  const std::size_t alphabet = k.value_or(std::max<std::size_t>(2, max_symbol + 1));
  return SampleSet(n, Alphabet(alphabet), std::move(data));
}

void write_samples_csv(std::ostream& out, const SampleSet& s) {
  std::string line;
  for (std::size_t i = 0; i < s.size(); ++i) {
    line.clear();
    for (std::size_t j = 0; j < s.n(); ++j) {
      if (j) line.push_back(',');
      line += std::to_string(s.at(i, j));
    }
    line.push_back('\n');
    out << line;
  }
}

namespace {

constexpr std::array<char, 4> kMagic{'C', 'L', 'S', '1'};

template <typename T>
void put_le(std::ostream& out, T v) {
  std::array<char, sizeof(T)> b{};
  for (std::size_t i = 0; i < sizeof(T); ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

template <typename T>
T get_le(std::istream& in, std::size_t record) {
  std::array<unsigned char, sizeof(T)> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), b.size())) throw ParseError(record, "truncated header");
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(b[i]) << (8 * i);
  return v;
}

}  // namespace

SampleSet read_samples_binary(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw ParseError(1, "missing CLS1 magic");
  const auto n = get_le<std::uint32_t>(in, 1);
  const auto k = get_le<std::uint32_t>(in, 1);
  const auto count = get_le<std::uint64_t>(in, 1);
  if (k < 2 || k > 256) throw ParseError(1, "alphabet size out of range");
  std::vector<Symbol> data(static_cast<std::size_t>(count) * n);
  if (!data.empty() && !in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()))) {
    throw ParseError(2, "truncated payload: expected " + std::to_string(data.size()) + " bytes");
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i] >= k) throw ParseError(2 + i / std::max<std::size_t>(n, 1), "symbol not below k");
  }
  return SampleSet(n, Alphabet(k), std::move(data));
}

void write_samples_binary(std::ostream& out, const SampleSet& s) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.n()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.k()));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(s.size()));
  const auto d = s.data();
  out.write(reinterpret_cast<const char*>(d.data()), static_cast<std::streamsize>(d.size()));
}

SampleSet load_samples(const std::string& path, std::optional<std::size_t> k) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::array<char, 4> head{};
  in.read(head.data(), head.size());
  const bool binary = in.gcount() == 4 && head == kMagic;
  in.clear();
  in.seekg(0);
  if (binary) {
    auto s = read_samples_binary(in);
    if (k && *k != s.k()) throw std::invalid_argument("binary file k does not match requested k");
    return s;
  }
  return read_samples_csv(in, k);
}

void save_samples(const std::string& path, const SampleSet& s, bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (binary) {
    write_samples_binary(out, s);
  } else {
    write_samples_csv(out, s);
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace chowliu
