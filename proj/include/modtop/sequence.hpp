#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace modtop {

/// Constant run of a sequence over the inclusive 1-based index range [first, last].
struct Run {
  std::size_t first = 1;
  std::size_t last = 1;
  double value = 0.0;

  std::size_t length() const { return last - first + 1; }
  bool operator==(const Run&) const = default;
};

/// Element of R^N stored as finitely many constant runs followed by a
/// constant tail (zero or c).
///
/// Runs are kept contiguous from index 1 and normalized: adjacent equal
/// runs are merged and trailing runs equal to the tail are absorbed into it,
/// so two equal sequences always have identical representations.
class SequenceVec {
 public:
  SequenceVec() = default;

  /// Runs must be sorted and disjoint; gaps between them are zero.
  static SequenceVec from_runs(std::vector<Run> runs, double tail = 0.0);
  static SequenceVec constant(double c) { return from_runs({}, c); }
  /// (values[0], values[1], ..., 0, 0, ...)
  static SequenceVec dense(std::span<const double> values);
  /// Finitely many (index, value) entries, zero elsewhere.
  static SequenceVec sparse(std::span<const std::pair<std::size_t, double>> entries);

  const std::vector<Run>& runs() const { return runs_; }
  double tail() const { return tail_; }
  bool has_nonzero_tail() const { return tail_ != 0.0; }
  /// First index governed by the tail.
  std::size_t tail_start() const { return runs_.empty() ? 1 : runs_.back().last + 1; }

  double at(std::size_t n) const;
  bool is_zero() const { return runs_.empty() && tail_ == 0.0; }
  /// Largest index with a nonzero entry, or empty if the tail is nonzero.
  std::optional<std::size_t> support_max() const;
  /// sup_n |x_n|
  double sup_abs() const;

  SequenceVec scaled(double c) const;
  /// Entries at indices > n replaced by zero.
  SequenceVec prefix(std::size_t n) const;
  /// Pointwise combination f(x_n, y_n) on refined runs; the tail becomes f(tail_x, tail_y).
  static SequenceVec combine(const SequenceVec& x, const SequenceVec& y,
                             const std::function<double(double, double)>& f);

  friend SequenceVec operator+(const SequenceVec& x, const SequenceVec& y);
  friend SequenceVec operator-(const SequenceVec& x, const SequenceVec& y);
  friend SequenceVec operator-(const SequenceVec& x) { return x.scaled(-1.0); }
  bool operator==(const SequenceVec&) const = default;

  /// `runs=[(1..2,0.5)];tail=zero` style text.
  std::string describe() const;

 private:
  void normalize();

  std::vector<Run> runs_;
  double tail_ = 0.0;
};

}  // namespace modtop
