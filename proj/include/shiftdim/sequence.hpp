#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "shiftdim/alphabet.hpp"
#include "shiftdim/random.hpp"

namespace shiftdim {

/// Transition structure used to continue a sampled sequence beyond its window.
class MarkovKernel {
public:
  MarkovKernel(std::vector<Symbol> states, std::vector<double> forward);

  std::size_t size() const { return states_.size(); }
  const std::vector<Symbol>& states() const { return states_; }
  std::optional<std::size_t> index_of(Symbol s) const;

  double forward(std::size_t i, std::size_t j) const { return forward_[i * size() + j]; }
  /// Time-reversed chain under the uniform stationary law: the transpose.
  double backward(std::size_t i, std::size_t j) const { return forward_[j * size() + i]; }
  std::span<const double> forward_row(std::size_t i) const { return {forward_.data() + i * size(), size()}; }
  std::span<const double> backward_row(std::size_t i) const { return {backward_.data() + i * size(), size()}; }

private:
  std::vector<Symbol> states_;
  std::vector<double> forward_;
  std::vector<double> backward_;
  std::vector<int> lookup_;
};

struct PeriodicExtension {
  std::size_t period;
};

struct ConstantExtension {
  Symbol symbol;
};

/// Coordinates beyond the window continue the chain from the window edges with
/// the engine streams the window itself was drawn from.
struct MarkovExtension {
  std::shared_ptr<const MarkovKernel> kernel;
  std::uint64_t seed = 0;
  std::shared_ptr<const Engine> forward_engine;
  std::shared_ptr<const Engine> backward_engine;
};

using Extension = std::variant<PeriodicExtension, MarkovExtension, ConstantExtension>;

/// A point of the bilateral sequence space: stored coordinates -N..N plus an
/// extension policy for everything outside.
class SeqWindow {
public:
  SeqWindow(std::shared_ptr<const Alphabet> alphabet, std::vector<Symbol> window, Extension extension);

  /// x_i = word[i mod k]; the window holds at least one full period.
  static SeqWindow periodic(std::shared_ptr<const Alphabet> alphabet, const std::vector<Symbol>& word,
                            long half_width = -1);
  static SeqWindow constant(std::shared_ptr<const Alphabet> alphabet, Symbol symbol);

  long half_width() const { return static_cast<long>(window_.size() / 2); }
  std::span<const Symbol> window() const { return window_; }
  const Extension& extension() const { return extension_; }
  const Alphabet& alphabet() const { return *alphabet_; }
  const std::shared_ptr<const Alphabet>& alphabet_ptr() const { return alphabet_; }
  bool same_alphabet(const SeqWindow& other) const;

  /// Coordinate i. O(1) except for Markov tails, which are regenerated from the edge.
  Symbol at(long i) const;
  std::vector<Symbol> materialize(long lo, long hi) const;

  /// Period of the coordinates with |i| > regular_from(); 0 if the tail is random.
  std::size_t tail_period() const;
  /// -1 when the whole sequence is periodic.
  long regular_from() const;

  /// Same stored representation (window, extension, alphabet).
  bool same_point(const SeqWindow& other) const;

private:
  std::shared_ptr<const Alphabet> alphabet_;
  std::vector<Symbol> window_;
  Extension extension_;
};

/// Growable cache of the coordinates of one SeqWindow. Not thread-safe; give
/// each worker its own copy.
class Trajectory {
public:
  explicit Trajectory(const SeqWindow& x);

  Symbol at(long i) {
    if (!markov_) return x_->at(i);
    if (i >= 0) {
      if (i >= static_cast<long>(pos_.size())) grow_forward(i);
      return pos_[i];
    }
    const auto k = static_cast<std::size_t>(-i - 1);
    if (k >= neg_.size()) grow_backward(k);
    return neg_[k];
  }
  void reserve(long lo, long hi);
  const SeqWindow& source() const { return *x_; }

  /// Window [-half, half] of this sequence as a standalone SeqWindow whose
  /// extension continues the same sequence. Needs half >= source().half_width().
  SeqWindow snapshot(long half) const;

private:
  void grow_forward(long i);
  void grow_backward(std::size_t k);

  const SeqWindow* x_;
  bool markov_ = false;
  std::vector<Symbol> pos_;
  std::vector<Symbol> neg_;
  std::optional<Engine> forward_;
  std::optional<Engine> backward_;
};

/// T^shift applied to a cached sequence: coordinate m is x_{m - shift}.
struct PointRef {
  Trajectory* traj;
  long shift = 0;

  Symbol at(long m) const { return traj->at(m - shift); }
  /// (R, L): for |m| > R the coordinates repeat with period L.
  std::optional<std::pair<long, std::size_t>> periodic_tail() const;
};

enum class Ball { open, closed };
enum class Membership { inside, outside, indeterminate };

struct DistanceBounds {
  double lower = 0.0;
  double upper = 0.0;
  double midpoint() const { return 0.5 * (lower + upper); }
};

/// Stopping rule of a distance walk. The walk stops once the bounds are within
/// `tol`, once they decide membership relative to `threshold`, or once the
/// lower bound reaches `cap`.
struct WalkTarget {
  double tol = 1e-9;
  double threshold = std::numeric_limits<double>::infinity();
  Ball ball = Ball::open;
  double cap = std::numeric_limits<double>::infinity();
};

DistanceBounds bound_distance(const Alphabet& alphabet, PointRef u, PointRef v, const WalkTarget& target);
Membership membership(DistanceBounds bounds, double eps, Ball ball);

/// Sequence-space distance within `tol`; returns a lower bound r_hat with r - r_hat <= tol.
double distance(const SeqWindow& x, const SeqWindow& y, double tol);
DistanceBounds distance_bounds(const SeqWindow& x, const SeqWindow& y, double tol);
/// Whether r(x, y) < eps (open) or <= eps (closed); indeterminate when r is within tol of eps.
Membership classify(const SeqWindow& x, const SeqWindow& y, double eps, Ball ball, double tol);

/// d(x_i, y_i) < eps for every |i| <= n.
bool in_cylinder_ball(const SeqWindow& x, const SeqWindow& y, double eps, long n);

/// T^k x, represented on a window wide enough to keep the extension policy valid.
SeqWindow shift(const SeqWindow& x, long k);

}  // namespace shiftdim
