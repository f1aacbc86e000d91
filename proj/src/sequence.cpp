#include "modtop/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "modtop/error.hpp"

namespace modtop {

SequenceVec SequenceVec::from_runs(std::vector<Run> runs, double tail) {
  if (!std::isfinite(tail)) throw Error(ErrorCode::InvalidArgument, "tail must be finite");
  SequenceVec x;
  x.tail_ = tail;
  std::size_t next = 1;
  for (const Run& r : runs) {
    if (r.first == 0 || r.last < r.first) {
      throw Error(ErrorCode::InvalidArgument, "run indices must satisfy 1 <= first <= last");
    }
    if (r.first < next) throw Error(ErrorCode::InvalidArgument, "runs must be sorted and disjoint");
    if (!std::isfinite(r.value)) throw Error(ErrorCode::InvalidArgument, "run value not finite");
    if (r.first > next) x.runs_.push_back({next, r.first - 1, 0.0});
    x.runs_.push_back(r);
    next = r.last + 1;
  }
  x.normalize();
  return x;
}

SequenceVec SequenceVec::dense(std::span<const double> values) {
  std::vector<Run> runs;
  runs.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) runs.push_back({i + 1, i + 1, values[i]});
  return from_runs(std::move(runs));
}

SequenceVec SequenceVec::sparse(std::span<const std::pair<std::size_t, double>> entries) {
  std::vector<Run> runs;
  runs.reserve(entries.size());
  for (const auto& [index, value] : entries) runs.push_back({index, index, value});
  return from_runs(std::move(runs));
}

void SequenceVec::normalize() {
  std::vector<Run> merged;
  merged.reserve(runs_.size());
  for (const Run& r : runs_) {
    if (!merged.empty() && merged.back().value == r.value) {
      merged.back().last = r.last;
    } else {
      merged.push_back(r);
    }
  }
  while (!merged.empty() && merged.back().value == tail_) merged.pop_back();
  runs_ = std::move(merged);
}

double SequenceVec::at(std::size_t n) const {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sequence indices start at 1");
  if (n >= tail_start()) return tail_;
  auto it = std::lower_bound(runs_.begin(), runs_.end(), n,
                             [](const Run& r, std::size_t i) { return r.last < i; });
  return it->value;
}

std::optional<std::size_t> SequenceVec::support_max() const {
  if (tail_ != 0.0) return std::nullopt;
  return runs_.empty() ? 0 : runs_.back().last;
}

double SequenceVec::sup_abs() const {
  double m = std::abs(tail_);
  for (const Run& r : runs_) m = std::max(m, std::abs(r.value));
  return m;
}

SequenceVec SequenceVec::scaled(double c) const {
  SequenceVec y = *this;
  for (Run& r : y.runs_) r.value *= c;
  y.tail_ *= c;
  // c == 0 or signed zeros can create equal neighbours
  for (Run& r : y.runs_) r.value += 0.0;
  y.tail_ += 0.0;
  y.normalize();
  return y;
}

SequenceVec SequenceVec::prefix(std::size_t n) const {
  std::vector<Run> runs;
  for (const Run& r : runs_) {
    if (r.first > n) break;
    runs.push_back({r.first, std::min(r.last, n), r.value});
  }
  const std::size_t start = tail_start();
  if (tail_ != 0.0 && n >= start) runs.push_back({start, n, tail_});
  return from_runs(std::move(runs));
}

SequenceVec SequenceVec::combine(const SequenceVec& x, const SequenceVec& y,
                                 const std::function<double(double, double)>& f) {
  const std::size_t end = std::max(x.tail_start(), y.tail_start());
  std::vector<Run> runs;
  std::size_t i = 0, j = 0, next = 1;
  while (next < end) {
    const bool in_x = i < x.runs_.size();
    const bool in_y = j < y.runs_.size();
    const double vx = in_x ? x.runs_[i].value : x.tail_;
    const double vy = in_y ? y.runs_[j].value : y.tail_;
    std::size_t stop = end - 1;
    if (in_x) stop = std::min(stop, x.runs_[i].last);
    if (in_y) stop = std::min(stop, y.runs_[j].last);
    runs.push_back({next, stop, f(vx, vy) + 0.0});
    if (in_x && x.runs_[i].last == stop) ++i;
    if (in_y && y.runs_[j].last == stop) ++j;
    next = stop + 1;
  }
  return from_runs(std::move(runs), f(x.tail_, y.tail_) + 0.0);
}

SequenceVec operator+(const SequenceVec& x, const SequenceVec& y) {
  return SequenceVec::combine(x, y, [](double a, double b) { return a + b; });
}

SequenceVec operator-(const SequenceVec& x, const SequenceVec& y) {
  return SequenceVec::combine(x, y, [](double a, double b) { return a - b; });
}

std::string SequenceVec::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "runs=[";
  for (std::size_t i = 0; i < runs_.size(); ++i) {
    const Run& r = runs_[i];
    if (r.value == 0.0) continue;
    if (os.tellp() > 6) os << ',';
    os << '(' << r.first << ".." << r.last << ',' << r.value << ')';
  }
  os << "];tail=";
  if (tail_ == 0.0) {
    os << "zero";
  } else {
    os << "const:" << tail_;
  }
  return os.str();
}

}  // namespace modtop
