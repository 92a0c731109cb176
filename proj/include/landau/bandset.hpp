#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "landau/errors.hpp"

namespace landau {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double x, double pad = 0.0) const { return x >= lo - pad && x <= hi + pad; }
};

// Sorted list of disjoint closed intervals; intervals closer than merge_tol
// are coalesced.
class BandSet {
 public:
  BandSet() = default;
  explicit BandSet(double merge_tol) : merge_tol_(merge_tol) {}
  BandSet(std::vector<Interval> iv, double merge_tol) : merge_tol_(merge_tol) {
    for (const Interval& i : iv) insert(i);
  }

  void insert(Interval i) {
    if (!(i.hi >= i.lo)) throw DomainError("BandSet: interval with hi < lo");
    iv_.push_back(i);
    normalize();
  }

  const std::vector<Interval>& intervals() const { return iv_; }
  double merge_tol() const { return merge_tol_; }
  bool empty() const { return iv_.empty(); }

  double measure() const {
    double s = 0.0;
    for (const Interval& i : iv_) s += i.length();
    return s;
  }

  double min() const { return iv_.front().lo; }
  double max() const { return iv_.back().hi; }

  double largest_gap() const {
    double g = 0.0;
    for (std::size_t k = 1; k < iv_.size(); ++k) g = std::max(g, iv_[k].lo - iv_[k - 1].hi);
    return g;
  }

  bool contains(double x, double pad = 0.0) const {
    for (const Interval& i : iv_)
      if (i.contains(x, pad)) return true;
    return false;
  }

  // Negative inside (depth to the nearest edge), positive outside (distance to the set).
  double signed_distance(double x) const {
    double best = 1e308;
    for (const Interval& i : iv_) {
      if (i.contains(x)) return -std::min(x - i.lo, i.hi - x);
      best = std::min(best, x < i.lo ? i.lo - x : x - i.hi);
    }
    return best;
  }

  // Lebesgue measure of the symmetric difference with another set.
  double symmetric_difference(const BandSet& other) const {
    std::vector<double> cuts;
    auto collect = [&cuts](const BandSet& b) {
      for (const Interval& i : b.iv_) {
        cuts.push_back(i.lo);
        cuts.push_back(i.hi);
      }
    };
    collect(*this);
    collect(other);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double s = 0.0;
    for (std::size_t k = 1; k < cuts.size(); ++k) {
      const double mid = 0.5 * (cuts[k - 1] + cuts[k]);
      if (contains(mid) != other.contains(mid)) s += cuts[k] - cuts[k - 1];
    }
    return s;
  }

 private:
  void normalize() {
    std::sort(iv_.begin(), iv_.end(), [](const Interval& a, const Interval& b) {
      return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    std::vector<Interval> out;
    for (const Interval& i : iv_) {
      if (!out.empty() && i.lo <= out.back().hi + merge_tol_)
        out.back().hi = std::max(out.back().hi, i.hi);
      else
        out.push_back(i);
    }
    iv_ = std::move(out);
  }

  std::vector<Interval> iv_;
  double merge_tol_ = 0.0;
};

}  // namespace landau
