#include "covpolar/stats/corpus.hpp"

#include "covpolar/error.hpp"

namespace covpolar {

Corpus::Corpus(int d_, std::string label_) : d(d_), label(std::move(label_)), u(d_) {
  if (d_ < 1) throw PreconditionError("corpus dimension must be positive");
}

void Corpus::reserve(std::size_t n) {
  for (auto& c : u) c.reserve(n);
  lambda1.reserve(n);
  ratio.reserve(n);
  ball_count.reserve(n);
  n2.reserve(n);
}

void Corpus::add(std::int64_t norm2, std::vector<double> const& orientation,
                 ShapeStatistics const& s) {
  if (orientation.size() != static_cast<std::size_t>(d)) {
    throw PreconditionError("orientation dimension does not match the corpus");
  }
  for (int k = 0; k < d; ++k) u[k].push_back(static_cast<float>(orientation[k]));
  lambda1.push_back(s.lambda1);
  ratio.push_back(s.ratio);
  ball_count.push_back(static_cast<std::uint32_t>(s.ball_count));
  n2.push_back(norm2);
}

namespace {
template <class T>
void move_append(std::vector<T>& to, std::vector<T>& from) {
  to.insert(to.end(), from.begin(), from.end());
  std::vector<T>().swap(from);
}
}  // namespace

void Corpus::append(Corpus&& other) {
  if (other.size() == 0) return;
  if (other.d != d) throw PreconditionError("cannot append corpora of different dimension");
  for (int k = 0; k < d; ++k) move_append(u[k], other.u[k]);
  move_append(lambda1, other.lambda1);
  move_append(ratio, other.ratio);
  move_append(ball_count, other.ball_count);
  move_append(n2, other.n2);
}

Corpus Corpus::subset(std::vector<std::size_t> const& indices, std::string name) const {
  Corpus out(d, std::move(name));
  out.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= size()) throw PreconditionError("corpus index out of range");
    for (int k = 0; k < d; ++k) out.u[k].push_back(u[k][i]);
    out.lambda1.push_back(lambda1[i]);
    out.ratio.push_back(ratio[i]);
    out.ball_count.push_back(ball_count[i]);
    out.n2.push_back(n2[i]);
  }
  return out;
}

std::vector<float const*> Corpus::columns() const {
  std::vector<float const*> c;
  for (auto const& col : u) c.push_back(col.data());
  return c;
}

}  // namespace covpolar
