#pragma once

#include <atomic>
#include <cstddef>
#include <iosfwd>

#include <Eigen/Core>

#include "splinet/spline.hpp"

namespace splinet {

/// Tally of inner-product evaluations. Updates are atomic so one counter may
/// be shared by concurrent callers; the final tally is exact either way.
class OpCounter {
public:
  OpCounter() = default;
  OpCounter(const OpCounter&) = delete;
  OpCounter& operator=(const OpCounter&) = delete;

  void record_inner_product(bool self_product) {
    evaluations_.fetch_add(1, std::memory_order_relaxed);
    if (self_product) {
      self_products_.fetch_add(1, std::memory_order_relaxed);
    }
  }
  void record_segments(std::size_t n) { segments_.fetch_add(n, std::memory_order_relaxed); }

  /// Every call, norms included.
  std::size_t inner_product_evaluations() const { return evaluations_.load(); }
  /// Calls of the form ⟨f, f⟩.
  std::size_t norm_evaluations() const { return self_products_.load(); }
  /// Calls between two distinct functions.
  std::size_t cross_evaluations() const { return evaluations_.load() - self_products_.load(); }
  /// Segments on which quadrature nodes were actually evaluated.
  std::size_t quadrature_segments() const { return segments_.load(); }

  void reset() {
    evaluations_ = 0;
    self_products_ = 0;
    segments_ = 0;
  }

private:
  std::atomic<std::size_t> evaluations_{0};
  std::atomic<std::size_t> self_products_{0};
  std::atomic<std::size_t> segments_{0};
};

/// Exact L² inner product on the shared mesh. Each segment uses
/// max(order)+1 Gauss–Legendre nodes; segments where either piece is
/// identically zero are skipped. Orders may differ.
double inner_product(const Spline& a, const Spline& b, OpCounter* counter = nullptr);

/// ⟨s, s⟩, recorded as a norm evaluation.
double squared_norm(const Spline& s, OpCounter* counter = nullptr);

double norm(const Spline& s, OpCounter* counter = nullptr);

/// Symmetric Gram matrix; pairs i ≤ j are evaluated once each.
class GramMatrix {
public:
  explicit GramMatrix(Eigen::MatrixXd entries);

  const Eigen::MatrixXd& entries() const { return entries_; }
  std::size_t family_size() const { return static_cast<std::size_t>(entries_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  /// max |G − I|.
  double identity_defect() const;

  /// Sparse "i,j,value" CSV, upper triangle including the diagonal, row-major,
  /// entries with |value| ≤ zero_tol omitted.
  void write_csv(std::ostream& out, double zero_tol = 0.0) const;

private:
  Eigen::MatrixXd entries_;
};

GramMatrix gram_matrix(const SplineFamily& family, OpCounter* counter = nullptr);

} // namespace splinet
