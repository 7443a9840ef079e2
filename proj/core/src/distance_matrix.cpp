#include "dmx/distance_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "dmx/error.hpp"
#include "dmx/point_set.hpp"

namespace dmx {

namespace {
constexpr std::string_view kMagic = "DMTX1";
}

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> data) : n_(n), data_(std::move(data)) {
  if (data_.size() != n_ * n_) throw DimensionError("DistanceMatrix data size is not n*n");
}

namespace {

// Visits each pair (i, j), i < j, in 64 x 64 tiles to keep both sides cached.
template <class F>
void upper_pairs(std::size_t n, F&& f) {
  constexpr std::size_t kTile = 64;
  for (std::size_t i0 = 0; i0 < n; i0 += kTile)
    for (std::size_t j0 = i0; j0 < n; j0 += kTile) {
      const std::size_t i1 = std::min(n, i0 + kTile), j1 = std::min(n, j0 + kTile);
      for (std::size_t i = i0; i < i1; ++i)
        for (std::size_t j = std::max(j0, i + 1); j < j1; ++j) f(i, j);
    }
}

}  // namespace

void DistanceMatrix::symmetrize() {
  upper_pairs(n_, [this](std::size_t i, std::size_t j) {
    const double v = 0.5 * ((*this)(i, j) + (*this)(j, i));
    (*this)(i, j) = v;
    (*this)(j, i) = v;
  });
}

void DistanceMatrix::mirror_upper() {
  upper_pairs(n_, [this](std::size_t i, std::size_t j) { (*this)(j, i) = (*this)(i, j); });
}

bool DistanceMatrix::is_symmetric(double tol) const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

std::vector<double> DistanceMatrix::multiply(std::span<const double> z) const {
  if (z.size() != n_) throw DimensionError("vector length does not match matrix size");
  std::vector<double> out(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const double* r = data_.data() + i * n_;
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += r[j] * z[j];
    out[i] = s;
  }
  return out;
}

std::string serialize_matrix(const DistanceMatrix& m) {
  std::string out;
  out.reserve(kMagic.size() + 8 + m.data().size() * 8);
  out.append(kMagic);
  detail::put_u64(out, m.n());
  for (double v : m.data()) detail::put_f64(out, v);
  return out;
}

DistanceMatrix parse_matrix(std::string_view bytes) {
  if (bytes.size() < kMagic.size() + 8 || bytes.substr(0, kMagic.size()) != kMagic)
    throw ParseError("malformed header: missing DMTX1 magic");
  std::uint64_t n = detail::get_u64(bytes.data() + kMagic.size());
  std::size_t body = bytes.size() - kMagic.size() - 8;
  if (n == 0 || n > body / 8 / n || n * n * 8 != body)
    throw ParseError("malformed header: payload size does not match n*n");
  std::vector<double> data(n * n);
  const char* p = bytes.data() + kMagic.size() + 8;
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = detail::get_f64(p + 8 * i);
  return DistanceMatrix(n, std::move(data));
}

void store_matrix(const DistanceMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  std::string chunk;
  chunk.append(kMagic);
  detail::put_u64(chunk, m.n());
  auto data = m.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    detail::put_f64(chunk, data[i]);
    if (chunk.size() >= (1u << 20)) {
      out.write(chunk.data(), static_cast<std::streamsize>(chunk.size()));
      chunk.clear();
    }
  }
  out.write(chunk.data(), static_cast<std::streamsize>(chunk.size()));
  if (!out) throw Error("write failed: " + path.string());
}

DistanceMatrix load_matrix(const std::filesystem::path& path) { return parse_matrix(detail::read_file(path)); }

}  // namespace dmx
