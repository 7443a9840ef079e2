#include "dmx/point_set.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "dmx/error.hpp"

namespace dmx {

namespace {

constexpr std::string_view kMagic = "DMAT1";

std::optional<std::int64_t> detect_alphabet(std::span<const double> data) {
  double hi = 0.0;
  for (double v : data) {
    if (v < 0.0 || v != std::floor(v) || v > double(PointSet::kMaxAlphabet)) return std::nullopt;
    hi = std::max(hi, v);
  }
  return static_cast<std::int64_t>(hi);
}

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return r;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

// Splits a line into tokens; returns false on a token from_chars rejects.
template <class F>
void for_each_token(std::string_view line, F&& f) {
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    f(line.substr(i, j - i));
    i = j;
  }
}

PointSet parse_text(std::string_view buf) {
  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) {
    while (pos < buf.size()) {
      std::size_t e = buf.find('\n', pos);
      if (e == std::string_view::npos) e = buf.size();
      line = buf.substr(pos, e - pos);
      pos = e + 1;
      bool blank = std::all_of(line.begin(), line.end(), is_space);
      if (!blank) return true;
    }
    return false;
  };

  std::string_view line;
  if (!next_line(line)) throw ParseError("malformed header: empty input");
  std::vector<std::string_view> head;
  for_each_token(line, [&](std::string_view t) { head.push_back(t); });
  std::size_t n = 0, d = 0;
  auto parse_size = [](std::string_view t, std::size_t& out) {
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    return ec == std::errc() && p == t.data() + t.size();
  };
  if (head.size() != 2 || !parse_size(head[0], n) || !parse_size(head[1], d) || n == 0 || d == 0)
    throw ParseError("malformed header: expected \"n d\" with n, d >= 1");

  std::vector<double> data;
  data.reserve(n * d);
  std::size_t row = 0;
  while (next_line(line)) {
    if (row >= n) throw ParseError("more rows than declared in header", row);
    std::size_t count = 0;
    for_each_token(line, [&](std::string_view t) {
      double v = 0.0;
      auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (ec != std::errc() || p != t.data() + t.size())
        throw ParseError("unparsable value '" + std::string(t) + "'", row);
      if (!std::isfinite(v)) throw ParseError("non-finite value", row);
      data.push_back(v);
      ++count;
    });
    if (count != d)
      throw ParseError("inconsistent row length: expected " + std::to_string(d) + ", got " +
                           std::to_string(count),
                       row);
    ++row;
  }
  if (row != n)
    throw ParseError("header declares " + std::to_string(n) + " rows, found " + std::to_string(row),
                     row);
  return PointSet(n, d, std::move(data));
}

PointSet parse_binary(std::string_view buf) {
  if (buf.size() < kMagic.size() + 16 || buf.substr(0, kMagic.size()) != kMagic)
    throw ParseError("malformed header: missing DMAT1 magic or sizes");
  const char* p = buf.data() + kMagic.size();
  std::uint64_t n = detail::get_u64(p);
  std::uint64_t d = detail::get_u64(p + 8);
  if (n == 0 || d == 0) throw ParseError("malformed header: n and d must be >= 1");
  std::size_t body = buf.size() - kMagic.size() - 16;
  if (d > body / 8 || n > body / 8 / d || n * d * 8 != body)
    throw ParseError("malformed header: payload size does not match n*d");
  std::vector<double> data(n * d);
  const char* q = p + 16;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double v = detail::get_f64(q + 8 * (i * d + j));
      if (!std::isfinite(v)) throw ParseError("non-finite value", i);
      data[i * d + j] = v;
    }
  }
  return PointSet(n, d, std::move(data));
}

}  // namespace

PointSet::PointSet(std::size_t n, std::size_t d, std::vector<double> data)
    : n_(n), d_(d), data_(std::move(data)) {
  if (n_ == 0 || d_ == 0) throw DimensionError("PointSet needs n >= 1 and d >= 1");
  if (data_.size() != n_ * d_) throw DimensionError("PointSet data size is not n*d");
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < d_; ++j)
      if (!std::isfinite(data_[i * d_ + j])) throw ParseError("non-finite value", i);
  alphabet_ = detect_alphabet(data_);
}

PointSet PointSet::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  if (rows.size() == 0) throw DimensionError("PointSet needs at least one row");
  std::size_t d = rows.begin()->size();
  std::vector<double> data;
  std::size_t i = 0;
  for (const auto& r : rows) {
    if (r.size() != d) throw ParseError("inconsistent row length", i);
    data.insert(data.end(), r.begin(), r.end());
    ++i;
  }
  return PointSet(rows.size(), d, std::move(data));
}

PointSet parse_points(std::string_view buffer, PointFormat format) {
  return format == PointFormat::text ? parse_text(buffer) : parse_binary(buffer);
}

PointSet load_points(const std::filesystem::path& path, PointFormat format) {
  return parse_points(detail::read_file(path), format);
}

PointSet load_points(const std::filesystem::path& path) {
  std::string buf = detail::read_file(path);
  bool binary = buf.size() >= kMagic.size() && std::string_view(buf).substr(0, kMagic.size()) == kMagic;
  return parse_points(buf, binary ? PointFormat::binary : PointFormat::text);
}

std::string serialize_points(const PointSet& points, PointFormat format) {
  std::string out;
  if (format == PointFormat::binary) {
    out.reserve(kMagic.size() + 16 + points.data().size() * 8);
    out.append(kMagic);
    detail::put_u64(out, points.n());
    detail::put_u64(out, points.d());
    for (double v : points.data()) detail::put_f64(out, v);
    return out;
  }
  out = std::to_string(points.n()) + " " + std::to_string(points.d()) + "\n";
  char buf[32];
  for (std::size_t i = 0; i < points.n(); ++i) {
    for (std::size_t j = 0; j < points.d(); ++j) {
      // shortest round-trip representation
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, points(i, j));
      if (j) out.push_back(' ');
      out.append(buf, p);
    }
    out.push_back('\n');
  }
  return out;
}

void store_points(const PointSet& points, const std::filesystem::path& path, PointFormat format) {
  detail::write_file(path, serialize_points(points, format));
}

namespace detail {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

void put_u64(std::string& out, std::uint64_t v) {
  v = to_le(v);
  char b[8];
  std::memcpy(b, &v, 8);
  out.append(b, 8);
}

void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(const char* p) {
  std::uint64_t v;
  std::memcpy(&v, p, 8);
  return to_le(v);
}

double get_f64(const char* p) { return std::bit_cast<double>(get_u64(p)); }

}  // namespace detail

}  // namespace dmx
