#include "shiftdim/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "shiftdim/errors.hpp"
#include "shiftdim/metric.hpp"

namespace shiftdim {
namespace {

long floor_mod(long a, long m) {
  const long r = a % m;
  return r < 0 ? r + m : r;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

// ---------------------------------------------------------------------------
// MarkovKernel

MarkovKernel::MarkovKernel(std::vector<Symbol> states, std::vector<double> forward)
    : states_(std::move(states)), forward_(std::move(forward)) {
  const std::size_t s = states_.size();
  if (s == 0 || forward_.size() != s * s) throw std::invalid_argument("markov kernel: matrix/state size mismatch");
  backward_.resize(s * s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) backward_[i * s + j] = forward_[j * s + i];
  const Symbol top = *std::max_element(states_.begin(), states_.end());
  lookup_.assign(static_cast<std::size_t>(top) + 1, -1);
  for (std::size_t i = 0; i < s; ++i) {
    if (lookup_[states_[i]] != -1) throw std::invalid_argument("markov kernel: duplicate state");
    lookup_[states_[i]] = static_cast<int>(i);
  }
}

std::optional<std::size_t> MarkovKernel::index_of(Symbol s) const {
  if (s >= lookup_.size() || lookup_[s] < 0) return std::nullopt;
  return static_cast<std::size_t>(lookup_[s]);
}

// ---------------------------------------------------------------------------
// SeqWindow

SeqWindow::SeqWindow(std::shared_ptr<const Alphabet> alphabet, std::vector<Symbol> window, Extension extension)
    : alphabet_(std::move(alphabet)), window_(std::move(window)), extension_(std::move(extension)) {
  if (!alphabet_) throw std::invalid_argument("sequence window needs an alphabet");
  if (window_.size() % 2 != 1) throw std::invalid_argument("window length must be odd (2N+1)");
  for (Symbol s : window_)
    if (s >= alphabet_->size()) throw std::invalid_argument(fmt::format("symbol {} outside alphabet", s));

  const long n = half_width();
  std::visit(overloaded{
                 [&](const PeriodicExtension& p) {
                   const auto k = static_cast<long>(p.period);
                   if (k < 1 || k > 2 * n + 1) throw std::invalid_argument("period must fit inside the window");
                   for (long i = -n; i + k <= n; ++i)
                     if (window_[i + n] != window_[i + k + n])
                       throw std::invalid_argument(fmt::format("window is not {}-periodic at coordinate {}", k, i));
                 },
                 [&](const ConstantExtension& c) {
                   if (c.symbol >= alphabet_->size()) throw std::invalid_argument("constant symbol outside alphabet");
                 },
                 [&](const MarkovExtension& m) {
                   if (!m.kernel || !m.forward_engine || !m.backward_engine)
                     throw std::invalid_argument("markov extension needs a kernel and edge engines");
                   for (Symbol s : m.kernel->states())
                     if (s >= alphabet_->size()) throw std::invalid_argument("markov state outside alphabet");
                   for (Symbol s : window_)
                     if (!m.kernel->index_of(s)) throw std::invalid_argument("markov window holds a non-state symbol");
                 },
             },
             extension_);
}

SeqWindow SeqWindow::periodic(std::shared_ptr<const Alphabet> alphabet, const std::vector<Symbol>& word,
                              long half_width) {
  if (word.empty()) throw std::invalid_argument("periodic word must be nonempty");
  const auto k = static_cast<long>(word.size());
  const long n = half_width < 0 ? k : half_width;
  std::vector<Symbol> window(2 * n + 1);
  for (long i = -n; i <= n; ++i) window[i + n] = word[floor_mod(i, k)];
  return SeqWindow(std::move(alphabet), std::move(window), PeriodicExtension{word.size()});
}

SeqWindow SeqWindow::constant(std::shared_ptr<const Alphabet> alphabet, Symbol symbol) {
  return SeqWindow(std::move(alphabet), {symbol}, ConstantExtension{symbol});
}

bool SeqWindow::same_alphabet(const SeqWindow& other) const {
  return alphabet_ == other.alphabet_ || *alphabet_ == *other.alphabet_;
}

Symbol SeqWindow::at(long i) const {
  const long n = half_width();
  if (i >= -n && i <= n) return window_[i + n];
  return std::visit(overloaded{
                        [&](const PeriodicExtension& p) {
                          const auto k = static_cast<long>(p.period);
                          return window_[floor_mod(i + n, k)];
                        },
                        [&](const ConstantExtension& c) { return c.symbol; },
                        [&](const MarkovExtension&) {
                          Trajectory t(*this);
                          return t.at(i);
                        },
                    },
                    extension_);
}

std::vector<Symbol> SeqWindow::materialize(long lo, long hi) const {
  if (hi < lo) return {};
  Trajectory t(*this);
  std::vector<Symbol> out;
  out.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (long i = lo; i <= hi; ++i) out.push_back(t.at(i));
  return out;
}

std::size_t SeqWindow::tail_period() const {
  if (auto p = std::get_if<PeriodicExtension>(&extension_)) return p->period;
  if (std::holds_alternative<ConstantExtension>(extension_)) return 1;
  return 0;
}

long SeqWindow::regular_from() const {
  if (std::holds_alternative<PeriodicExtension>(extension_)) return -1;
  return half_width();
}

bool SeqWindow::same_point(const SeqWindow& other) const {
  if (!same_alphabet(other) || window_ != other.window_ || extension_.index() != other.extension_.index())
    return false;
  return std::visit(overloaded{
                        [&](const PeriodicExtension& p) {
                          return p.period == std::get<PeriodicExtension>(other.extension_).period;
                        },
                        [&](const ConstantExtension& c) {
                          return c.symbol == std::get<ConstantExtension>(other.extension_).symbol;
                        },
                        [&](const MarkovExtension& m) {
                          const auto& o = std::get<MarkovExtension>(other.extension_);
                          const bool same_kernel = m.kernel == o.kernel ||
                                                   (m.kernel->states() == o.kernel->states() &&
                                                    std::ranges::equal(m.kernel->forward_row(0), o.kernel->forward_row(0)));
                          return same_kernel && *m.forward_engine == *o.forward_engine &&
                                 *m.backward_engine == *o.backward_engine;
                        },
                    },
                    extension_);
}

// ---------------------------------------------------------------------------
// Trajectory

Trajectory::Trajectory(const SeqWindow& x) : x_(&x) {
  if (const auto* m = std::get_if<MarkovExtension>(&x.extension())) {
    markov_ = true;
    const long n = x.half_width();
    const auto w = x.window();
    pos_.assign(w.begin() + n, w.end());
    for (long i = -1; i >= -n; --i) neg_.push_back(w[i + n]);
    forward_ = *m->forward_engine;
    backward_ = *m->backward_engine;
  }
}

void Trajectory::grow_forward(long i) {
  const auto& kernel = *std::get<MarkovExtension>(x_->extension()).kernel;
  while (static_cast<long>(pos_.size()) <= i) {
    const std::size_t from = *kernel.index_of(pos_.back());
    pos_.push_back(kernel.states()[draw_index(*forward_, kernel.forward_row(from))]);
  }
}

void Trajectory::grow_backward(std::size_t k) {
  const auto& kernel = *std::get<MarkovExtension>(x_->extension()).kernel;
  while (neg_.size() <= k) {
    const Symbol last = neg_.empty() ? pos_.front() : neg_.back();
    const std::size_t from = *kernel.index_of(last);
    neg_.push_back(kernel.states()[draw_index(*backward_, kernel.backward_row(from))]);
  }
}

void Trajectory::reserve(long lo, long hi) {
  if (!markov_) return;
  if (hi >= 0) at(hi);
  if (lo < 0) at(lo);
}

SeqWindow Trajectory::snapshot(long half) const {
  const long n = x_->half_width();
  if (half < n) throw std::invalid_argument("snapshot must cover the stored window");
  Trajectory fresh(*x_);
  std::vector<Symbol> window;
  window.reserve(static_cast<std::size_t>(2 * half + 1));
  for (long i = -half; i <= half; ++i) window.push_back(fresh.at(i));
  Extension ext = x_->extension();
  if (fresh.markov_) {
    auto m = std::get<MarkovExtension>(ext);
    m.forward_engine = std::make_shared<const Engine>(*fresh.forward_);
    m.backward_engine = std::make_shared<const Engine>(*fresh.backward_);
    ext = m;
  }
  return SeqWindow(x_->alphabet_ptr(), std::move(window), std::move(ext));
}

std::optional<std::pair<long, std::size_t>> PointRef::periodic_tail() const {
  const SeqWindow& s = traj->source();
  const std::size_t p = s.tail_period();
  if (p == 0) return std::nullopt;
  const long r = s.regular_from();
  if (r < 0) return std::pair<long, std::size_t>{0, p};
  return std::pair<long, std::size_t>{r + std::abs(shift), p};
}

// ---------------------------------------------------------------------------
// Distance walk

namespace {

struct Stopper {
  const WalkTarget& t;
  bool operator()(double lo, double hi) const {
    if (hi - lo <= t.tol) return true;
    if (lo >= t.cap) return true;
    if (!std::isfinite(t.threshold)) return false;
    if (t.ball == Ball::open) return lo >= t.threshold || hi < t.threshold;
    return lo > t.threshold || hi <= t.threshold;
  }
};

long first_index_with_weight_at_most(double d) {
  if (d >= 1.0) return 0;
  long n = static_cast<long>(std::ceil(std::sqrt(1.0 / d - 1.0)));
  while (n > 0 && weight(n - 1) <= d) --n;
  while (weight(n) > d) ++n;
  return n;
}

}  // namespace

DistanceBounds bound_distance(const Alphabet& alphabet, PointRef u, PointRef v, const WalkTarget& target) {
  const Stopper done{target};
  auto contrib = [&](long m) {
    const double d = alphabet.d(u.at(m), v.at(m));
    return d == 0.0 ? 0.0 : std::min(weight(m), d);
  };

  double acc = contrib(0);
  long n = 0;
  const auto pu = u.periodic_tail();
  const auto pv = v.periodic_tail();

  if (!pu || !pv) {
    const long limit = 2.0 * tail_upper(max_walk_length()) > target.tol ? max_walk_length()
                                                                         : cutoff_for_tolerance(target.tol);
    for (;;) {
      const double hi = acc + 2.0 * tail_upper(n);
      if (done(acc, hi) || n >= limit) return {acc, hi};
      ++n;
      acc += contrib(n) + contrib(-n);
    }
  }

  // Both tails periodic: beyond R the mismatch pattern repeats with period L.
  const long reg = std::max(pu->first, pv->first);
  const auto period = static_cast<long>(std::lcm(pu->second, pv->second));
  double dmin = std::numeric_limits<double>::infinity();
  for (long m = reg + 1; m <= reg + period; ++m) {
    for (long side : {m, -m}) {
      const double d = alphabet.d(u.at(side), v.at(side));
      if (d > 0.0) dmin = std::min(dmin, d);
    }
  }
  const long settle = std::isfinite(dmin) ? first_index_with_weight_at_most(dmin) : 0;
  long block_end = std::max(reg + period, settle);

  for (;;) {
    while (n < block_end) {
      const double hi = acc + 2.0 * tail_upper(n);
      if (done(acc, hi)) return {acc, hi};
      ++n;
      acc += contrib(n) + contrib(-n);
    }
    // Past `settle` every mismatch contributes its full weight; bound each
    // residue class sum_{j>=1} w(m + jL) between tail(m+L)/L and tail(m)/L.
    double lo_tail = 0.0, hi_tail = 0.0;
    for (long m = n - period + 1; m <= n; ++m) {
      for (long side : {m, -m}) {
        if (alphabet.d(u.at(side), v.at(side)) > 0.0) {
          lo_tail += tail_lower(m + period) / static_cast<double>(period);
          hi_tail += tail_upper(m) / static_cast<double>(period);
        }
      }
    }
    const DistanceBounds b{acc + lo_tail, acc + hi_tail};
    if (done(b.lower, b.upper) || block_end >= max_walk_length()) return b;
    block_end = std::min(2 * block_end, max_walk_length());
  }
}

Membership membership(DistanceBounds b, double eps, Ball ball) {
  if (ball == Ball::open) {
    if (b.lower >= eps) return Membership::outside;
    if (b.upper < eps) return Membership::inside;
  } else {
    if (b.lower > eps) return Membership::outside;
    if (b.upper <= eps) return Membership::inside;
  }
  return Membership::indeterminate;
}

namespace {

void require_same_alphabet(const SeqWindow& x, const SeqWindow& y) {
  if (!x.same_alphabet(y)) throw std::invalid_argument("sequences are over different alphabets");
}

}  // namespace

DistanceBounds distance_bounds(const SeqWindow& x, const SeqWindow& y, double tol) {
  require_same_alphabet(x, y);
  if (!(tol > 0.0)) throw std::invalid_argument("distance tolerance must be positive");
  if (x.same_point(y)) return {0.0, 0.0};
  Trajectory tx(x), ty(y);
  const auto b = bound_distance(x.alphabet(), PointRef{&tx, 0}, PointRef{&ty, 0}, WalkTarget{.tol = tol});
  // the width is formed from rounded partial sums; allow a few ulps of the total
  if (b.upper - b.lower > tol + 8.0 * std::numeric_limits<double>::epsilon() * b.upper)
    throw BudgetExceeded(fmt::format("distance tolerance {} not reachable within {} coordinates", tol, max_walk_length()));
  return b;
}

double distance(const SeqWindow& x, const SeqWindow& y, double tol) { return distance_bounds(x, y, tol).lower; }

Membership classify(const SeqWindow& x, const SeqWindow& y, double eps, Ball ball, double tol) {
  require_same_alphabet(x, y);
  if (!(tol > 0.0)) throw std::invalid_argument("distance tolerance must be positive");
  if (x.same_point(y)) return membership({0.0, 0.0}, eps, ball);
  Trajectory tx(x), ty(y);
  const auto b = bound_distance(x.alphabet(), PointRef{&tx, 0}, PointRef{&ty, 0},
                                WalkTarget{.tol = tol, .threshold = eps, .ball = ball});
  return membership(b, eps, ball);
}

bool in_cylinder_ball(const SeqWindow& x, const SeqWindow& y, double eps, long n) {
  require_same_alphabet(x, y);
  if (n < 0) throw std::invalid_argument("cylinder half-width must be nonnegative");
  if (!(eps > 0.0)) throw std::invalid_argument("cylinder radius must be positive");
  Trajectory tx(x), ty(y);
  for (long i = -n; i <= n; ++i)
    if (!(x.alphabet().d(tx.at(i), ty.at(i)) < eps)) return false;
  return true;
}

SeqWindow shift(const SeqWindow& x, long k) {
  const long n = x.half_width();
  if (std::holds_alternative<PeriodicExtension>(x.extension())) {
    std::vector<Symbol> window(2 * n + 1);
    for (long i = -n; i <= n; ++i) window[i + n] = x.at(i - k);
    return SeqWindow(x.alphabet_ptr(), std::move(window), x.extension());
  }
  const long half = n + std::abs(k);
  Trajectory t(x);
  std::vector<Symbol> window;
  window.reserve(static_cast<std::size_t>(2 * half + 1));
  for (long i = -half; i <= half; ++i) window.push_back(t.at(i - k));
  if (!std::holds_alternative<MarkovExtension>(x.extension()))
    return SeqWindow(x.alphabet_ptr(), std::move(window), x.extension());

  // Replay the edge engines so they sit exactly at the new window's edges.
  auto m = std::get<MarkovExtension>(x.extension());
  Engine fwd = *m.forward_engine, bwd = *m.backward_engine;
  const auto& kernel = *m.kernel;
  // Forward: the new window ends at x_{half-k}; replay draws for x_{n+1..half-k}.
  {
    Symbol cur = x.at(n);
    for (long i = n + 1; i <= half - k; ++i)
      cur = kernel.states()[draw_index(fwd, kernel.forward_row(*kernel.index_of(cur)))];
  }
  // Backward: the new window starts at x_{-half-k}; replay draws for x_{-n-1..-half-k}.
  {
    Symbol cur = x.at(-n);
    for (long i = -n - 1; i >= -half - k; --i)
      cur = kernel.states()[draw_index(bwd, kernel.backward_row(*kernel.index_of(cur)))];
  }
  m.forward_engine = std::make_shared<const Engine>(fwd);
  m.backward_engine = std::make_shared<const Engine>(bwd);
  return SeqWindow(x.alphabet_ptr(), std::move(window), m);
}

}  // namespace shiftdim
