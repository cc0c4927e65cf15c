#include "lambdap/coeff.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lambdap {

CoeffVector::CoeffVector(std::vector<double> entries) : entries_(std::move(entries)) {
  rebuild_support();
}

CoeffVector::CoeffVector(std::size_t n, const IndexSet& support, std::span<const double> values)
    : entries_(n, 0.0) {
  if (support.size() != values.size())
    throw std::invalid_argument("CoeffVector: support and values differ in length");
  std::vector<bool> seen(n, false);
  for (std::size_t k = 0; k < support.size(); ++k) {
    const std::size_t i = support[k];
    if (i >= n) throw std::invalid_argument("CoeffVector: index out of range");
    if (seen[i]) throw std::invalid_argument("CoeffVector: repeated index");
    seen[i] = true;
    entries_[i] = values[k];
  }
  rebuild_support();
}

void CoeffVector::set(std::size_t i, double v) {
  if (i >= entries_.size()) throw std::invalid_argument("CoeffVector::set: index out of range");
  entries_[i] = v;
  rebuild_support();
}

double CoeffVector::norm() const {
  double s = 0.0;
  for (double x : entries_) s += x * x;
  return std::sqrt(s);
}

bool CoeffVector::in_pi(std::size_t m, double tol) const {
  return support_.size() <= m && norm() <= 1.0 + tol;
}

CoeffVector CoeffVector::normalized() const {
  const double r = norm();
  if (r == 0.0) throw std::invalid_argument("CoeffVector::normalized: zero vector");
  std::vector<double> e = entries_;
  for (double& x : e) x /= r;
  return CoeffVector(std::move(e));
}

void CoeffVector::rebuild_support() {
  support_.clear();
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i] != 0.0) support_.push_back(i);
}

void check_index_set(const IndexSet& s, std::size_t n, const char* what) {
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] >= n) throw std::invalid_argument(std::string(what) + ": index out of range");
    if (k > 0 && s[k] <= s[k - 1])
      throw std::invalid_argument(std::string(what) + ": index set must be sorted and unique");
  }
}

}  // namespace lambdap
