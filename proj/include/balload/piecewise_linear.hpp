#ifndef BALLOAD_PIECEWISE_LINEAR_HPP
#define BALLOAD_PIECEWISE_LINEAR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace balload {

using Rational = boost::multiprecision::cpp_rational;

namespace detail {

template <class T>
bool same_slope(const T& a, const T& b) {
  if constexpr (std::is_floating_point_v<T>) {
    return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a) + std::abs(b));
  } else {
    return a == b;
  }
}

}  // namespace detail

// Continuous piecewise-linear function on the real line: linear interpolation
// between breakpoints, affine tails with the given slopes beyond them.
// T is double or Rational; in Rational mode every operation is exact.
template <class T>
class PiecewiseLinear {
 public:
  struct Point {
    T x;
    T y;
  };

  static constexpr std::size_t kMaxBreakpoints = 100000;

  PiecewiseLinear() : PiecewiseLinear(identity()) {}
  PiecewiseLinear(std::vector<Point> points, T left_slope, T right_slope)
      : points_(std::move(points)), left_(std::move(left_slope)), right_(std::move(right_slope)) {
    if (points_.empty()) throw std::invalid_argument("piecewise-linear function needs a point");
    for (std::size_t k = 1; k < points_.size(); ++k) {
      if (!(points_[k - 1].x < points_[k].x)) {
        throw std::invalid_argument("breakpoints must be strictly increasing");
      }
    }
    simplify();
  }

  static PiecewiseLinear identity() { return PiecewiseLinear({{T(0), T(0)}}, T(1), T(1)); }
  static PiecewiseLinear constant(const T& c) { return PiecewiseLinear({{T(0), c}}, T(0), T(0)); }

  const std::vector<Point>& points() const noexcept { return points_; }
  const T& left_slope() const noexcept { return left_; }
  const T& right_slope() const noexcept { return right_; }
  // Set once coarsening dropped breakpoints; values are then approximate.
  bool coarsened() const noexcept { return coarsened_; }

  T operator()(const T& x) const {
    if (x <= points_.front().x) return points_.front().y + left_ * (x - points_.front().x);
    if (x >= points_.back().x) return points_.back().y + right_ * (x - points_.back().x);
    const auto it = std::upper_bound(points_.begin(), points_.end(), x,
                                     [](const T& v, const Point& p) { return v < p.x; });
    const Point& b = *it;
    const Point& a = *(it - 1);
    return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
  }

  bool strictly_increasing() const {
    if (!(left_ > 0) || !(right_ > 0)) return false;
    for (std::size_t k = 1; k < points_.size(); ++k) {
      if (!(points_[k - 1].y < points_[k].y)) return false;
    }
    return true;
  }

  bool non_decreasing() const {
    if (left_ < 0 || right_ < 0) return false;
    for (std::size_t k = 1; k < points_.size(); ++k) {
      if (points_[k].y < points_[k - 1].y) return false;
    }
    return true;
  }

  // Inverse of a strictly increasing function.
  PiecewiseLinear inverse() const {
    if (!strictly_increasing()) throw std::domain_error("inverse needs a strictly increasing function");
    std::vector<Point> swapped;
    swapped.reserve(points_.size());
    for (const auto& p : points_) swapped.push_back({p.y, p.x});
    PiecewiseLinear out(std::move(swapped), T(1) / left_, T(1) / right_);
    out.coarsened_ = coarsened_;
    return out;
  }

  // sup{x : f(x) <= y} for a non-decreasing f that is unbounded at both ends.
  T sup_preimage(const T& y) const {
    if (!(left_ > 0) || !(right_ > 0)) throw std::domain_error("sup_preimage needs unbounded tails");
    if (y < points_.front().y) return points_.front().x + (y - points_.front().y) / left_;
    if (y >= points_.back().y) return points_.back().x + (y - points_.back().y) / right_;
    // first point with value > y; the answer lies on the segment before it
    const auto it = std::upper_bound(points_.begin(), points_.end(), y,
                                     [](const T& v, const Point& p) { return v < p.y; });
    const Point& b = *it;
    const Point& a = *(it - 1);
    return a.x + (b.x - a.x) * (y - a.y) / (b.y - a.y);
  }

  // Unique zero of a strictly decreasing function (or strictly increasing).
  T root() const {
    const bool up = left_ > 0 && right_ > 0;
    const bool down = left_ < 0 && right_ < 0;
    if (!up && !down) throw std::domain_error("root needs tails of one strict sign");
    const PiecewiseLinear g = up ? *this : -*this;
    return g.sup_preimage(T(0));
  }

  // [f]^1_0 with breakpoints inserted where f crosses 0 or 1.
  PiecewiseLinear clamp01() const {
    std::vector<Point> pts;
    pts.reserve(points_.size() + 4);
    auto crossings = [](const Point& a, const Point& b, std::vector<Point>& out) {
      Point c[2];
      int k = 0;
      for (int level = 0; level <= 1; ++level) {
        const T lv(level);
        if ((a.y < lv && lv < b.y) || (b.y < lv && lv < a.y)) {
          c[k++] = {a.x + (lv - a.y) * (b.x - a.x) / (b.y - a.y), lv};
        }
      }
      if (k == 2 && c[1].x < c[0].x) std::swap(c[0], c[1]);
      for (int i = 0; i < k; ++i) out.push_back(c[i]);
    };
    // Left tail: crossings beyond the first point, in increasing x.
    {
      const Point& p = points_.front();
      std::vector<Point> tail;
      if (left_ != 0) {
        for (int level = 0; level <= 1; ++level) {
          const T lv(level);
          const T x = p.x + (lv - p.y) / left_;
          if (x < p.x) tail.push_back({x, lv});
        }
        std::sort(tail.begin(), tail.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
      }
      pts.insert(pts.end(), tail.begin(), tail.end());
    }
    for (std::size_t k = 0; k < points_.size(); ++k) {
      if (k > 0) crossings(points_[k - 1], points_[k], pts);
      pts.push_back(points_[k]);
    }
    {
      const Point& p = points_.back();
      std::vector<Point> tail;
      if (right_ != 0) {
        for (int level = 0; level <= 1; ++level) {
          const T lv(level);
          const T x = p.x + (lv - p.y) / right_;
          if (x > p.x) tail.push_back({x, lv});
        }
        std::sort(tail.begin(), tail.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
      }
      pts.insert(pts.end(), tail.begin(), tail.end());
    }
    for (auto& p : pts) p.y = std::clamp(p.y, T(0), T(1));
    // An unbounded tail cannot stay inside (0, 1); past its crossings it is flat.
    PiecewiseLinear out(std::move(pts), T(0), T(0));
    out.coarsened_ = coarsened_;
    return out;
  }

  // Given f^-1 (non-decreasing, unbounded), returns (f + eps (2 Id - 1))^-1.
  // With y = f(x): the shifted map sends x to y + 2 eps f^-1(y) - eps, so each
  // point (b, f^-1(b)) becomes (b + 2 eps f^-1(b) - eps, f^-1(b)).
  PiecewiseLinear shifted_response_inverse(const T& eps) const {
    std::vector<Point> pts;
    pts.reserve(points_.size());
    for (const auto& p : points_) pts.push_back({p.x + T(2) * eps * p.y - eps, p.y});
    PiecewiseLinear out(std::move(pts), left_ / (T(1) + T(2) * eps * left_),
                        right_ / (T(1) + T(2) * eps * right_));
    out.coarsened_ = coarsened_;
    return out;
  }

  PiecewiseLinear operator-() const {
    std::vector<Point> pts = points_;
    for (auto& p : pts) p.y = -p.y;
    PiecewiseLinear out(std::move(pts), -left_, -right_);
    out.coarsened_ = coarsened_;
    return out;
  }

  friend PiecewiseLinear operator+(const PiecewiseLinear& f, const PiecewiseLinear& g) {
    std::vector<Point> pts;
    pts.reserve(f.points_.size() + g.points_.size());
    std::size_t i = 0, j = 0;
    while (i < f.points_.size() || j < g.points_.size()) {
      T x;
      if (j == g.points_.size() || (i < f.points_.size() && f.points_[i].x < g.points_[j].x)) {
        x = f.points_[i++].x;
      } else if (i == f.points_.size() || g.points_[j].x < f.points_[i].x) {
        x = g.points_[j++].x;
      } else {
        x = f.points_[i++].x;
        ++j;
      }
      pts.push_back({x, f(x) + g(x)});
    }
    PiecewiseLinear out(std::move(pts), f.left_ + g.left_, f.right_ + g.right_);
    out.coarsened_ = f.coarsened_ || g.coarsened_;
    return out;
  }

  friend PiecewiseLinear operator-(const PiecewiseLinear& f, const PiecewiseLinear& g) {
    return f + (-g);
  }

  friend PiecewiseLinear operator+(const PiecewiseLinear& f, const T& c) {
    std::vector<Point> pts = f.points_;
    for (auto& p : pts) p.y += c;
    PiecewiseLinear out(std::move(pts), f.left_, f.right_);
    out.coarsened_ = f.coarsened_;
    return out;
  }

  friend PiecewiseLinear operator-(const T& c, const PiecewiseLinear& f) { return (-f) + c; }

 private:
  // Drops breakpoints where neighbouring slopes agree, then enforces the cap.
  void simplify() {
    if (points_.size() > 1) {
      std::vector<Point> kept;
      kept.reserve(points_.size());
      T incoming = left_;
      for (std::size_t k = 0; k < points_.size(); ++k) {
        const T outgoing = k + 1 < points_.size()
                               ? (points_[k + 1].y - points_[k].y) / (points_[k + 1].x - points_[k].x)
                               : right_;
        if (!detail::same_slope(incoming, outgoing)) {
          kept.push_back(points_[k]);
          incoming = outgoing;
        } else if (k + 1 == points_.size() && kept.empty()) {
          kept.push_back(points_[k]);
        }
      }
      if (kept.empty()) kept.push_back(points_.front());
      points_ = std::move(kept);
    }
    if (points_.size() > kMaxBreakpoints) {
      std::vector<Point> thinned;
      thinned.reserve(points_.size() / 2 + 2);
      for (std::size_t k = 0; k < points_.size(); k += 2) thinned.push_back(points_[k]);
      if (!(thinned.back().x == points_.back().x)) thinned.push_back(points_.back());
      points_ = std::move(thinned);
      coarsened_ = true;
    }
  }

  std::vector<Point> points_;
  T left_;
  T right_;
  bool coarsened_ = false;
};

}  // namespace balload

#endif  // BALLOAD_PIECEWISE_LINEAR_HPP
