#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dmx {

// n points in d dimensions, row-major, immutable after construction.
class PointSet {
 public:
  PointSet(std::size_t n, std::size_t d, std::vector<double> data);
  static PointSet from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t n() const noexcept { return n_; }
  std::size_t d() const noexcept { return d_; }

  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * d_, d_}; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * d_ + j]; }
  std::span<const double> data() const noexcept { return data_; }

  // Set when every coordinate is an integer in [0, M] with M <= kMaxAlphabet.
  std::optional<std::int64_t> alphabet_bound() const noexcept { return alphabet_; }
  bool is_binary() const noexcept { return alphabet_ && *alphabet_ <= 1; }

  static constexpr std::int64_t kMaxAlphabet = 255;

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<double> data_;
  std::optional<std::int64_t> alphabet_;
};

enum class PointFormat { text, binary };

PointSet parse_points(std::string_view buffer, PointFormat format);
PointSet load_points(const std::filesystem::path& path, PointFormat format);
// Picks the format from the leading magic bytes.
PointSet load_points(const std::filesystem::path& path);

std::string serialize_points(const PointSet& points, PointFormat format);
void store_points(const PointSet& points, const std::filesystem::path& path, PointFormat format);

namespace detail {
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);
void put_u64(std::string& out, std::uint64_t v);
void put_f64(std::string& out, double v);
std::uint64_t get_u64(const char* p);
double get_f64(const char* p);
}  // namespace detail

}  // namespace dmx
