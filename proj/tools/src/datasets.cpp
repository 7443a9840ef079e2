#include "dmx/cli/datasets.hpp"

#include <cmath>
#include <random>

#include "dmx/error.hpp"

namespace dmx::cli {

PointSet gaussian_mixture(std::size_t n, std::size_t d, std::uint64_t seed, std::size_t components, double spread) {
  if (n == 0 || d == 0) throw DomainError("gaussian-mixture needs n, d >= 1");
  if (components == 0) throw DomainError("gaussian-mixture needs at least one component");
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> N;
  std::vector<double> centers(components * d);
  for (auto& c : centers) c = spread * N(gen);
  std::uniform_int_distribution<std::size_t> pick(0, components - 1);
  std::vector<double> data(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = pick(gen);
    for (std::size_t c = 0; c < d; ++c) data[i * d + c] = centers[k * d + c] + N(gen);
  }
  return PointSet(n, d, std::move(data));
}

PointSet uniform_integer(std::size_t n, std::size_t d, std::int64_t M, std::uint64_t seed) {
  if (n == 0 || d == 0) throw DomainError("uniform-integer needs n, d >= 1");
  if (M < 0 || M > PointSet::kMaxAlphabet) throw DomainError("uniform-integer needs 0 <= M <= 255");
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<std::int64_t> U(0, M);
  std::vector<double> data(n * d);
  for (auto& v : data) v = double(U(gen));
  return PointSet(n, d, std::move(data));
}

PointSet simplex_points(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n == 0 || d == 0) throw DomainError("simplex needs n, d >= 1");
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> data(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    double* row = data.data() + i * d;
    double s = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      double u = U(gen);
      while (u == 0.0) u = U(gen);
      row[c] = -std::log(u);
      s += row[c];
    }
    for (std::size_t c = 0; c < d; ++c) row[c] /= s;
  }
  return PointSet(n, d, std::move(data));
}

const std::vector<std::string>& dataset_kinds() {
  static const std::vector<std::string> kinds{"gaussian-mixture", "uniform-integer", "simplex"};
  return kinds;
}

PointSet generate(const DatasetSpec& spec) {
  if (spec.kind == "gaussian-mixture") return gaussian_mixture(spec.n, spec.d, spec.seed, spec.components);
  if (spec.kind == "uniform-integer") return uniform_integer(spec.n, spec.d, spec.M, spec.seed);
  if (spec.kind == "simplex") return simplex_points(spec.n, spec.d, spec.seed);
  throw DomainError("unknown dataset kind '" + spec.kind + "'");
}

std::vector<double> gaussian_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> N;
  std::vector<double> z(n);
  for (auto& v : z) v = N(gen);
  return z;
}

}  // namespace dmx::cli
