#include "shiftdim/correlation.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "shiftdim/errors.hpp"
#include "shiftdim/parallel.hpp"

namespace shiftdim {
namespace {

using Word = std::uint64_t;

class BitMatrix {
public:
  explicit BitMatrix(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}
  void set(std::size_t i, std::size_t j) { row(i)[j / 64] |= Word{1} << (j % 64); }
  bool get(std::size_t i, std::size_t j) const { return (row(i)[j / 64] >> (j % 64)) & 1u; }
  Word* row(std::size_t i) { return bits_.data() + i * words_; }
  const Word* row(std::size_t i) const { return bits_.data() + i * words_; }
  std::size_t size() const { return n_; }
  std::size_t words() const { return words_; }

private:
  std::size_t n_, words_;
  std::vector<Word> bits_;
};

// Ordered tuples with repetition whose members are pairwise adjacent
// (adjacency includes self-loops): fix members one at a time, intersecting
// their neighbourhoods; the last member is counted by popcount.
std::uint64_t count_cliques(const BitMatrix& adj, int q) {
  const std::size_t w = adj.words();
  if (q == 1) return adj.size();
  std::vector<std::vector<Word>> level(static_cast<std::size_t>(q), std::vector<Word>(w));
  std::uint64_t total = 0;
  auto recurse = [&](auto&& self, int depth, const Word* cand) -> void {
    if (depth == q - 1) {
      for (std::size_t t = 0; t < w; ++t) total += static_cast<std::uint64_t>(std::popcount(cand[t]));
      return;
    }
    Word* next = level[static_cast<std::size_t>(depth)].data();
    for (std::size_t t = 0; t < w; ++t) {
      for (Word bits = cand[t]; bits != 0; bits &= bits - 1) {
        const std::size_t v = t * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        const Word* r = adj.row(v);
        for (std::size_t u = 0; u < w; ++u) next[u] = cand[u] & r[u];
        self(self, depth + 1, next);
      }
    }
  };
  for (std::size_t v = 0; v < adj.size(); ++v) recurse(recurse, 1, adj.row(v));
  return total;
}

}  // namespace

EstimateReport correlation_sum(const SeqWindow& x, int q, long n, double eps, const CorrelationOptions& opt) {
  if (q < 2) throw std::invalid_argument("correlation sums need q >= 2");
  if (n < 1) throw std::invalid_argument("orbit length n must be at least 1");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (q > 4 && n > 2000) throw BudgetExceeded(fmt::format("q = {} with n = {} exceeds the clique-count budget", q, n));
  if (static_cast<double>(q) * std::log2(static_cast<double>(n + 1)) >= 63.0)
    throw BudgetExceeded("tuple count does not fit in 64 bits");

  const auto points = static_cast<std::size_t>(n + 1);
  BitMatrix sure(points), maybe(points);
  for (std::size_t i = 0; i < points; ++i) sure.set(i, i);

  // Each worker owns a copy of the coordinate cache and decides rows i with
  // i % threads == worker, writing only bits (i, j > i) of its own rows.
  Trajectory base(x);
  base.reserve(-n - 64, 64);
  const unsigned threads = std::max(1u, opt.threads);
  std::vector<Trajectory> caches(threads, base);
  bool any_maybe = false;
  std::vector<char> row_maybe(points, 0);
  parallel_for(points, threads, [&](std::size_t i, unsigned w) {
    Trajectory& t = caches[w];
    const PointRef u{&t, static_cast<long>(i)};
    for (std::size_t j = i + 1; j < points; ++j) {
      const PointRef v{&t, static_cast<long>(j)};
      const auto b = bound_distance(x.alphabet(), u, v, WalkTarget{.tol = opt.tol, .threshold = eps, .ball = Ball::closed});
      switch (membership(b, eps, Ball::closed)) {
        case Membership::inside: sure.set(i, j); break;
        case Membership::indeterminate:
          maybe.set(i, j);
          row_maybe[i] = 1;
          break;
        case Membership::outside: break;
      }
    }
  });
  for (std::size_t i = 0; i < points; ++i) {
    any_maybe = any_maybe || row_maybe[i];
    for (std::size_t j = i + 1; j < points; ++j) {
      if (sure.get(i, j)) sure.set(j, i);
      if (maybe.get(i, j)) maybe.set(j, i);
    }
  }

  const double norm = std::pow(static_cast<double>(n), q);
  EstimateReport r;
  r.eps = eps;
  r.method = Method::clique_count;
  r.n_samples = static_cast<long>(points);
  r.lower = static_cast<double>(count_cliques(sure, q)) / norm;
  r.upper = r.lower;
  if (any_maybe) {
    for (std::size_t i = 0; i < points; ++i)
      for (std::size_t t = 0; t < maybe.words(); ++t) maybe.row(i)[t] |= sure.row(i)[t];
    r.upper = static_cast<double>(count_cliques(maybe, q)) / norm;
    r.flag = "indeterminate_pairs";
  }
  r.value = r.lower;
  return r;
}

SlopeSeries correlation_dimension_proxy(const SeqWindow& x, int q, long n, const ScaleGrid& grid,
                                        const CorrelationOptions& opt) {
  SlopeSeries series;
  for (double eps : grid.radii()) {
    const auto r = correlation_sum(x, q, n, eps, opt);
    SlopePoint pt;
    pt.eps = eps;
    pt.value = r.value;
    pt.method = r.method;
    pt.n = n;
    pt.flag = r.flag;
    if (r.value > 0.0) {
      pt.slope = std::log(r.value) / ((q - 1) * std::log(eps));
    } else {
      pt.slope = std::numeric_limits<double>::quiet_NaN();
      pt.flag = "zero_correlation_sum";
    }
    series.points.push_back(std::move(pt));
  }
  return series;
}

}  // namespace shiftdim
