#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "covpolar/polar/polar.hpp"

namespace covpolar {

// Column store of per-lattice statistics, compact enough for the ~14M
// points of a desk-scale reference population (about 48 bytes each).
// Orientation coordinates are kept as floats in one array per axis.
struct Corpus {
  int d = 0;
  std::string label;
  std::vector<std::vector<float>> u;  // u[k][i]
  std::vector<double> lambda1;
  std::vector<double> ratio;
  std::vector<std::uint32_t> ball_count;
  std::vector<std::int64_t> n2;

  Corpus() = default;
  Corpus(int d, std::string label);

  std::size_t size() const { return lambda1.size(); }
  void reserve(std::size_t n);
  void add(std::int64_t norm2, std::vector<double> const& orientation, ShapeStatistics const& s);
  void add(PolarSummary const& s) { add(s.n2, s.u, s.stats); }
  void append(Corpus&& other);
  Corpus subset(std::vector<std::size_t> const& indices, std::string label) const;
  std::vector<float const*> columns() const;
};

}  // namespace covpolar
