#include "shiftdim/measures.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "shiftdim/errors.hpp"
#include "shiftdim/random.hpp"

namespace shiftdim {
namespace {

long floor_mod(long a, long m) {
  const long r = a % m;
  return r < 0 ? r + m : r;
}

void require_distinct(const std::vector<Symbol>& syms, const char* what) {
  std::set<Symbol> seen(syms.begin(), syms.end());
  if (seen.size() != syms.size()) throw std::invalid_argument(fmt::format("{} must be pairwise distinct", what));
}

std::vector<double> construction_matrix(std::size_t s, double kappa) {
  std::vector<double> p(s * s, kappa / static_cast<double>(s - 1));
  for (std::size_t i = 0; i < s; ++i) p[i * s + (i + 1) % s] = 1.0 - kappa;
  return p;
}

// Stream tags for derive_seed/make_engine.
constexpr std::uint64_t kStreamOrigin = 0;
constexpr std::uint64_t kStreamForward = 1;
constexpr std::uint64_t kStreamBackward = 2;

}  // namespace

CylinderWord::CylinderWord(std::vector<Symbol> syms) : symbols(std::move(syms)) {
  if (symbols.size() % 2 != 1) throw std::invalid_argument("cylinder word length must be odd");
  half_width = static_cast<long>(symbols.size() / 2);
}

PeriodicOrbitMeasure::PeriodicOrbitMeasure(std::shared_ptr<const Alphabet> alphabet, std::vector<Symbol> word)
    : alphabet_(std::move(alphabet)), word_(std::move(word)) {
  if (!alphabet_) throw std::invalid_argument("periodic measure needs an alphabet");
  if (word_.empty()) throw std::invalid_argument("orbit word must be nonempty");
  for (Symbol s : word_)
    if (s >= alphabet_->size()) throw std::invalid_argument("orbit symbol outside alphabet");
  require_distinct(word_, "orbit symbols");
}

SeqWindow PeriodicOrbitMeasure::atom(std::size_t j) const {
  const auto k = static_cast<long>(word_.size());
  // (T^j x)_i = x_{i-j}
  std::vector<Symbol> rotated(word_.size());
  for (long i = 0; i < k; ++i) rotated[i] = word_[floor_mod(i - static_cast<long>(j), k)];
  return SeqWindow::periodic(alphabet_, rotated);
}

std::vector<SeqWindow> PeriodicOrbitMeasure::atoms() const {
  std::vector<SeqWindow> out;
  out.reserve(word_.size());
  for (std::size_t j = 0; j < word_.size(); ++j) out.push_back(atom(j));
  return out;
}

MarkovMeasure::MarkovMeasure(std::shared_ptr<const Alphabet> alphabet, std::vector<Symbol> states, double kappa)
    : alphabet_(std::move(alphabet)), states_(std::move(states)), kappa_(kappa) {
  if (!alphabet_) throw std::invalid_argument("markov measure needs an alphabet");
  if (states_.size() < 2) throw std::invalid_argument("markov measure needs at least 2 states");
  if (!(kappa_ > 0.0 && kappa_ < 1.0)) throw std::invalid_argument(fmt::format("kappa must lie in (0,1), got {}", kappa_));
  for (Symbol s : states_)
    if (s >= alphabet_->size()) throw std::invalid_argument("markov state outside alphabet");
  require_distinct(states_, "markov states");
  kernel_ = std::make_shared<const MarkovKernel>(states_, construction_matrix(states_.size(), kappa_));
}

double stochasticity_defect(const MarkovMeasure& m) {
  const std::size_t s = m.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < s; ++i) {
    double row = 0.0, col = 0.0;
    for (std::size_t j = 0; j < s; ++j) {
      row += m.trans(i, j);
      col += m.trans(j, i);
    }
    worst = std::max({worst, std::abs(row - 1.0), std::abs(col - 1.0)});
  }
  return worst;
}

MarkovMeasure build_markov(std::shared_ptr<const Alphabet> alphabet, std::size_t s, double kappa,
                           std::vector<Symbol> states) {
  if (s < 2) throw std::invalid_argument("markov measure needs s >= 2");
  if (states.size() != s) throw std::invalid_argument(fmt::format("expected {} states, got {}", s, states.size()));
  MarkovMeasure m(std::move(alphabet), std::move(states), kappa);
  if (stochasticity_defect(m) > 1e-12) throw std::logic_error("constructed transition matrix is not doubly stochastic");
  return m;
}

MarkovMeasure build_markov(std::shared_ptr<const Alphabet> alphabet, std::size_t s, double kappa) {
  if (!alphabet) throw std::invalid_argument("markov measure needs an alphabet");
  if (s > alphabet->size()) throw std::invalid_argument("more states than alphabet symbols");
  std::vector<Symbol> states(s);
  for (std::size_t i = 0; i < s; ++i) states[i] = static_cast<Symbol>(i);
  return build_markov(std::move(alphabet), s, kappa, std::move(states));
}

double cylinder_mass(const ShiftMeasure& m, const CylinderWord& c) {
  if (c.symbols.size() != static_cast<std::size_t>(2 * c.half_width + 1))
    throw std::invalid_argument("cylinder word length does not match its half-width");
  if (const auto* p = std::get_if<PeriodicOrbitMeasure>(&m)) {
    const auto k = static_cast<long>(p->period());
    const auto& w = p->word();
    long matches = 0;
    for (long j = 0; j < k; ++j) {
      bool ok = true;
      for (long i = -c.half_width; i <= c.half_width && ok; ++i) ok = w[floor_mod(i - j, k)] == c.at(i);
      matches += ok;
    }
    return static_cast<double>(matches) / static_cast<double>(k);
  }
  const auto& mk = std::get<MarkovMeasure>(m);
  const auto& kernel = mk.kernel();
  std::vector<std::size_t> idx;
  idx.reserve(c.symbols.size());
  for (Symbol a : c.symbols) {
    const auto i = kernel.index_of(a);
    if (!i) return 0.0;
    idx.push_back(*i);
  }
  double mass = 1.0 / static_cast<double>(mk.size());
  for (std::size_t t = 0; t + 1 < idx.size(); ++t) mass *= kernel.forward(idx[t], idx[t + 1]);
  return mass;
}

SeqWindow sample_orbit(const MarkovMeasure& m, long half_len, std::uint64_t seed) {
  if (half_len < 0) throw std::invalid_argument("half_len must be nonnegative");
  const auto& kernel = m.kernel();
  Engine origin = make_engine(seed, kStreamOrigin);
  Engine fwd = make_engine(seed, kStreamForward);
  Engine bwd = make_engine(seed, kStreamBackward);

  const std::size_t s = m.size();
  const std::vector<double> uniform(s, 1.0 / static_cast<double>(s));
  std::vector<Symbol> window(static_cast<std::size_t>(2 * half_len + 1));
  std::size_t cur = draw_index(origin, uniform);
  window[half_len] = kernel.states()[cur];
  for (long i = 1; i <= half_len; ++i) {
    cur = draw_index(fwd, kernel.forward_row(cur));
    window[half_len + i] = kernel.states()[cur];
  }
  cur = *kernel.index_of(window[half_len]);
  for (long i = 1; i <= half_len; ++i) {
    cur = draw_index(bwd, kernel.backward_row(cur));
    window[half_len - i] = kernel.states()[cur];
  }
  MarkovExtension ext{m.kernel_ptr(), seed, std::make_shared<const Engine>(fwd), std::make_shared<const Engine>(bwd)};
  return SeqWindow(m.alphabet_ptr(), std::move(window), std::move(ext));
}

const Alphabet& alphabet_of(const ShiftMeasure& m) {
  return std::visit([](const auto& x) -> const Alphabet& { return x.alphabet(); }, m);
}

const std::shared_ptr<const Alphabet>& alphabet_ptr_of(const ShiftMeasure& m) {
  return std::visit([](const auto& x) -> const std::shared_ptr<const Alphabet>& { return x.alphabet_ptr(); }, m);
}

std::vector<Symbol> support_symbols(const ShiftMeasure& m) {
  if (const auto* p = std::get_if<PeriodicOrbitMeasure>(&m)) return p->word();
  return std::get<MarkovMeasure>(m).states();
}

double min_separation(const ShiftMeasure& m) {
  const auto syms = support_symbols(m);
  if (syms.size() < 2) throw std::invalid_argument("min_separation needs at least two distinct support symbols");
  return alphabet_of(m).separation_of(syms);
}

double support_cylinder_count(const ShiftMeasure& m, long n) {
  if (n < 0) throw std::invalid_argument("cylinder half-width must be nonnegative");
  if (const auto* p = std::get_if<PeriodicOrbitMeasure>(&m)) return static_cast<double>(p->period());
  return std::pow(static_cast<double>(std::get<MarkovMeasure>(m).size()), static_cast<double>(2 * n + 1));
}

void for_each_cylinder(const ShiftMeasure& m, long n, std::size_t budget,
                       const std::function<void(std::span<const Symbol>, double)>& fn) {
  const double count = support_cylinder_count(m, n);
  if (count > static_cast<double>(budget))
    throw BudgetExceeded(fmt::format("{} cylinders of half-width {} exceed the enumeration budget {}", count, n, budget));
  const auto len = static_cast<std::size_t>(2 * n + 1);

  if (const auto* p = std::get_if<PeriodicOrbitMeasure>(&m)) {
    // Distinct orbit symbols: each shift gives its own cylinder, ordered by
    // the symbol at -n so the order is lexicographic.
    const auto k = static_cast<long>(p->period());
    std::vector<std::vector<Symbol>> words;
    for (long j = 0; j < k; ++j) {
      std::vector<Symbol> w(len);
      for (long i = -n; i <= n; ++i) w[i + n] = p->word()[floor_mod(i - j, k)];
      words.push_back(std::move(w));
    }
    std::sort(words.begin(), words.end());
    for (const auto& w : words) fn(w, p->atom_mass());
    return;
  }

  const auto& mk = std::get<MarkovMeasure>(m);
  const auto& kernel = mk.kernel();
  const std::size_t s = mk.size();
  // States sorted by symbol so that enumeration is lexicographic in symbols.
  std::vector<std::size_t> order(s);
  for (std::size_t i = 0; i < s; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return kernel.states()[a] < kernel.states()[b]; });

  std::vector<Symbol> word(len);
  std::vector<std::size_t> idx(len);
  std::vector<double> mass(len);
  std::vector<std::size_t> pos(len, 0);
  // Iterative odometer: pos[t] indexes into `order` at slot t.
  std::size_t t = 0;
  while (true) {
    if (pos[t] == s) {
      if (t == 0) break;
      pos[t] = 0;
      --t;
      ++pos[t];
      continue;
    }
    idx[t] = order[pos[t]];
    word[t] = kernel.states()[idx[t]];
    mass[t] = t == 0 ? 1.0 / static_cast<double>(s) : mass[t - 1] * kernel.forward(idx[t - 1], idx[t]);
    if (t + 1 == len) {
      fn(word, mass[t]);
      ++pos[t];
    } else {
      ++t;
    }
  }
}

}  // namespace shiftdim
