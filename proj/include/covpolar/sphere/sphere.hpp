#pragma once

#include <cstddef>
#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace covpolar {

using IntVector = std::vector<std::int64_t>;

// Largest squared norm the machine-word enumerators accept (exclusive).
inline constexpr std::int64_t kMaxNorm2 = std::int64_t{1} << 62;

// Primitive integer vector with its squared norm.
class PrimVector {
 public:
  // Throws PreconditionError unless dim >= 3, gcd = 1; CapacityError when the
  // squared norm does not fit kMaxNorm2.
  explicit PrimVector(IntVector coords);

  std::size_t dim() const { return coords_.size(); }
  IntVector const& coords() const { return coords_; }
  std::int64_t operator[](std::size_t i) const { return coords_[i]; }
  std::int64_t norm2() const { return norm2_; }

  PrimVector negated() const;

  friend bool operator==(PrimVector const&, PrimVector const&) = default;
  friend auto operator<=>(PrimVector const& a, PrimVector const& b) {
    return a.coords_ <=> b.coords_;
  }

 private:
  IntVector coords_;
  std::int64_t norm2_ = 0;
};

std::int64_t norm2_of(IntVector const& v);
std::int64_t gcd_of(IntVector const& v);
bool is_primitive(IntVector const& v);

// Flips v so that its first nonzero coordinate is positive.
IntVector sign_canonical(IntVector v);
bool is_sign_canonical(IntVector const& v);

std::string to_string(IntVector const& v);

struct AdmissibleSpec {
  int d;
  std::int64_t p;
  // Throws PreconditionError unless d >= 4 and p is an odd prime.
  AdmissibleSpec(int d, std::int64_t p);
};

bool is_prime(std::int64_t n);
bool is_admissible(AdmissibleSpec const& spec, std::int64_t n2);

// Lexicographic depth-first stream of integer vectors with sum of squares
// equal to N.  Optional restrictions: gcd 1, one vector per +-pair (the
// first nonzero coordinate positive), and a range for the first coordinate,
// which is how work is split into independent chunks.
class SphereEnumerator {
 public:
  struct Options {
    bool primitive_only = true;
    bool half = false;
    std::int64_t first_lo = std::numeric_limits<std::int64_t>::min();
    std::int64_t first_hi = std::numeric_limits<std::int64_t>::max();
  };

  SphereEnumerator(int d, std::int64_t n2, Options opts);
  SphereEnumerator(int d, std::int64_t n2, bool primitive_only)
      : SphereEnumerator(d, n2, Options{primitive_only}) {}

  // Writes the next vector into out; false when exhausted.
  bool next(IntVector& out);

  int dim() const { return d_; }
  std::int64_t norm2() const { return n2_; }

 private:
  bool advance();
  void set_level(int i);

  int d_;
  std::int64_t n2_;
  Options opts_;
  IntVector x_;
  std::vector<std::int64_t> rem_;  // rem_[i]: norm left for coordinates i..d-1
  std::vector<std::int64_t> hi_;
  std::vector<std::int64_t> step_;
  int depth_ = -1;
  bool started_ = false;
  bool done_ = false;
};

std::vector<IntVector> enumerate_sphere(int d, std::int64_t n2, bool primitive_only);
std::uint64_t count_sphere(int d, std::int64_t n2, bool primitive_only);

// Integer square root, floor.
std::int64_t isqrt(std::int64_t n);

// Splits the first-coordinate range [-r, r] into at most `chunks` contiguous
// pieces with the same number of values.
std::vector<std::pair<std::int64_t, std::int64_t>> first_coordinate_chunks(
    std::int64_t n2, std::size_t chunks);

}  // namespace covpolar
