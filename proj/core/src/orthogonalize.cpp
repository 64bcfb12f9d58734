#include "splinet/orthogonalize.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "splinet/error.hpp"

namespace splinet {

namespace {

// Smallest admissible squared residual norm relative to the squared norm of
// the raw input; rounding leaves about 1e-16 on exactly dependent input.
constexpr double kDependenceTol = 1e-13;

Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& gram, double scale, const char* who) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.info() != Eigen::Success) {
    throw DependenceError(std::string(who) + ": eigen-decomposition failed");
  }
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  if (!(lambda.minCoeff() > kDependenceTol * scale)) {
    throw DependenceError(std::string(who) + ": numerically dependent input (smallest Gram eigenvalue " +
                          std::to_string(lambda.minCoeff()) + ")");
  }
  const Eigen::VectorXd inv_sqrt = lambda.cwiseSqrt().cwiseInverse();
  return eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose();
}

} // namespace

Splinet::Splinet(SplineFamily basis, int levels, std::vector<NetPosition> layout, bool periodic)
  : basis_(std::move(basis))
  , levels_(levels)
  , layout_(std::move(layout))
  , periodic_(periodic) {
  if (!layout_.empty() && layout_.size() != basis_.size()) {
    throw Error("splinet layout size does not match basis size");
  }
}

std::vector<std::size_t> Splinet::members_at_level(int level) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < layout_.size(); ++i) {
    if (layout_[i].level == level) {
      out.push_back(i);
    }
  }
  return out;
}

std::size_t Splinet::tuplets_at_level(int level) const {
  std::vector<std::size_t> seen;
  for (const auto& p : layout_) {
    if (p.level == level && std::find(seen.begin(), seen.end(), p.tuplet) == seen.end()) {
      seen.push_back(p.tuplet);
    }
  }
  return seen.size();
}

int Splinet::top_level() const {
  int top = 0;
  for (const auto& p : layout_) {
    top = std::max(top, p.level);
  }
  return top;
}

SplineFamily gram_schmidt_one_sided(const SplineFamily& family, OpCounter& counter) {
  SplineFamily out(family.mesh_ptr(), family.order());
  std::vector<Support> supports;
  for (std::size_t j = 0; j < family.size(); ++j) {
    const Spline& f = family[j];
    const Support fs = support_of(f);
    Spline r = f;
    double removed = 0.0; // ‖f‖² = ‖r‖² + Σ c² without an extra quadrature
    for (std::size_t i = 0; i < j; ++i) {
      if (!supports_overlap(fs, supports[i])) {
        continue;
      }
      const double c = inner_product(r, out[i], &counter);
      removed += c * c;
      r.axpy(-c, out[i]);
    }
    const double nrm = norm(r, &counter);
    if (!(nrm * nrm > kDependenceTol * (nrm * nrm + removed))) {
      throw DependenceError("gram_schmidt_one_sided: member " + std::to_string(j) +
                            " is numerically dependent on its predecessors");
    }
    r *= 1.0 / nrm;
    r = with_canonical_sign(std::move(r));
    supports.push_back(support_of(r));
    out.push_back(std::move(r));
  }
  return out;
}

void symmetric_orthonormalize(std::vector<Spline>& members, OpCounter& counter) {
  const auto m = static_cast<Eigen::Index>(members.size());
  if (m == 0) {
    return;
  }
  Eigen::MatrixXd g(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    g(i, i) = squared_norm(members[static_cast<std::size_t>(i)], &counter);
    for (Eigen::Index j = i + 1; j < m; ++j) {
      g(i, j) = inner_product(members[static_cast<std::size_t>(i)],
                              members[static_cast<std::size_t>(j)], &counter);
      g(j, i) = g(i, j);
    }
  }
  const Eigen::MatrixXd w = inverse_sqrt(g, g.diagonal().maxCoeff(), "symmetric_orthonormalize");
  std::vector<Spline> out;
  out.reserve(members.size());
  for (Eigen::Index a = 0; a < m; ++a) {
    Spline s = Spline::zero(members.front().mesh_ptr(), members.front().order());
    for (Eigen::Index b = 0; b < m; ++b) {
      s.axpy(w(a, b), members[static_cast<std::size_t>(b)]);
    }
    out.push_back(with_canonical_sign(std::move(s)));
  }
  members = std::move(out);
}

SplineFamily gram_schmidt_symmetric(const SplineFamily& family, OpCounter& counter) {
  const std::size_t m = family.size();
  if (m == 0) {
    return SplineFamily(family.mesh_ptr(), family.order());
  }
  const std::size_t half = m / 2;
  const bool has_middle = (m % 2) == 1;
  const std::size_t middle = half;

  // one-sided passes from each end; right side built from the last member inwards
  std::vector<Spline> left_raw(family.begin(), family.begin() + static_cast<std::ptrdiff_t>(half));
  std::vector<Spline> right_raw;
  for (std::size_t i = 0; i < half; ++i) {
    right_raw.push_back(family[m - 1 - i]);
  }
  const SplineFamily left = gram_schmidt_one_sided(
      SplineFamily(family.mesh_ptr(), family.order(), std::move(left_raw)), counter);
  const SplineFamily right = gram_schmidt_one_sided(
      SplineFamily(family.mesh_ptr(), family.order(), std::move(right_raw)), counter);

  std::vector<std::optional<Spline>> result(m);
  std::vector<Support> left_sup;
  std::vector<Support> right_sup;
  for (const auto& s : left) {
    left_sup.push_back(support_of(s));
  }
  for (const auto& s : right) {
    right_sup.push_back(support_of(s));
  }

  auto overlaps_any = [](const Support& s, const std::vector<Support>& others) {
    return std::any_of(others.begin(), others.end(),
                       [&](const Support& o) { return supports_overlap(s, o); });
  };

  // Central set: members of each side that meet the other side. Everything
  // else is already orthogonal to the opposite side by disjoint support.
  std::vector<bool> left_central(half);
  std::vector<bool> right_central(half);
  for (std::size_t i = 0; i < half; ++i) {
    left_central[i] = overlaps_any(left_sup[i], right_sup);
    right_central[i] = overlaps_any(right_sup[i], left_sup);
  }

  std::vector<std::size_t> central_index;
  std::vector<Spline> central;
  for (std::size_t i = 0; i < half; ++i) {
    if (left_central[i]) {
      central_index.push_back(i);
      central.push_back(left[i]);
    } else {
      result[i] = left[i];
    }
  }
  if (has_middle) {
    const Spline& f = family[middle];
    const Support fs = support_of(f);
    Spline r = f;
    auto residualize = [&](const SplineFamily& side, const std::vector<Support>& sup,
                           const std::vector<bool>& is_central) {
      for (std::size_t i = 0; i < half; ++i) {
        if (!is_central[i] && supports_overlap(fs, sup[i])) {
          r.axpy(-inner_product(r, side[i], &counter), side[i]);
        }
      }
    };
    residualize(left, left_sup, left_central);
    residualize(right, right_sup, right_central);
    central_index.push_back(middle);
    central.push_back(std::move(r));
  }
  for (std::size_t ii = half; ii-- > 0;) {
    const std::size_t idx = m - 1 - ii;
    if (right_central[ii]) {
      central_index.push_back(idx);
      central.push_back(right[ii]);
    } else {
      result[idx] = right[ii];
    }
  }

  if (!central.empty()) {
    symmetric_orthonormalize(central, counter);
    for (std::size_t c = 0; c < central.size(); ++c) {
      result[central_index[c]] = std::move(central[c]);
    }
  }

  SplineFamily out(family.mesh_ptr(), family.order());
  for (auto& s : result) {
    out.push_back(std::move(*s));
  }
  return out;
}

int dyadic_level(std::size_t tuplet) {
  if (tuplet == 0) {
    throw std::invalid_argument("dyadic_level: tuplet index is 1-based");
  }
  return 1 + std::countr_zero(tuplet);
}

NetBuilder::NetBuilder(const SplineFamily& family, OpCounter& counter)
  : family_(family)
  , counter_(counter) {
  const std::size_t m = family.size();
  raw_support_.reserve(m);
  for (const auto& f : family) {
    raw_support_.push_back(support_of(f));
  }
  band_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  band_known_.assign(m, std::vector<bool>(m, false));
  built_.assign(m, false);
  coeffs_.assign(m, Eigen::VectorXd());
  members_.assign(m, std::nullopt);
  member_support_.assign(m, Support{});
  layout_.assign(m, NetPosition{});
}

double NetBuilder::band(std::size_t i, std::size_t j) {
  if (!supports_overlap(raw_support_[i], raw_support_[j])) {
    return 0.0;
  }
  if (!band_known_[i][j]) {
    const double v = i == j ? squared_norm(family_[i], &counter_)
                            : inner_product(family_[i], family_[j], &counter_);
    band_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    band_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    band_known_[i][j] = true;
    band_known_[j][i] = true;
  }
  return band_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

double NetBuilder::raw_dot(std::size_t i, const Eigen::VectorXd& c) {
  double acc = 0.0;
  for (Eigen::Index m = 0; m < c.size(); ++m) {
    if (c(m) != 0.0) {
      acc += c(m) * band(i, static_cast<std::size_t>(m));
    }
  }
  return acc;
}

double NetBuilder::dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) != 0.0) {
      acc += a(i) * raw_dot(static_cast<std::size_t>(i), b);
    }
  }
  return acc;
}

void NetBuilder::add_tuplet(std::span<const std::size_t> indices, int level, std::size_t tuplet) {
  const std::size_t m = family_.size();
  const auto size = static_cast<Eigen::Index>(indices.size());
  last_overlap_.clear();

  std::vector<Eigen::VectorXd> residual;
  residual.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= m || built_[i]) {
      throw std::invalid_argument("NetBuilder::add_tuplet: bad or repeated member index");
    }
    std::vector<std::size_t> overlap;
    for (std::size_t e : build_order_) {
      if (supports_overlap(raw_support_[i], member_support_[e])) {
        overlap.push_back(e);
        if (std::find(last_overlap_.begin(), last_overlap_.end(), e) == last_overlap_.end()) {
          last_overlap_.push_back(e);
        }
      }
    }
    Eigen::VectorXd r = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    r(static_cast<Eigen::Index>(i)) = 1.0;
    for (std::size_t e : overlap) {
      r -= raw_dot(i, coeffs_[e]) * coeffs_[e];
    }
    // second pass against the same members removes rounding drift
    for (std::size_t e : overlap) {
      r -= dot(r, coeffs_[e]) * coeffs_[e];
    }
    residual.push_back(std::move(r));
  }
  std::sort(last_overlap_.begin(), last_overlap_.end());

  Eigen::MatrixXd g(size, size);
  double scale = 0.0;
  for (Eigen::Index a = 0; a < size; ++a) {
    scale = std::max(scale, band(indices[static_cast<std::size_t>(a)], indices[static_cast<std::size_t>(a)]));
    for (Eigen::Index b = a; b < size; ++b) {
      g(a, b) = dot(residual[static_cast<std::size_t>(a)], residual[static_cast<std::size_t>(b)]);
      g(b, a) = g(a, b);
    }
  }
  const Eigen::MatrixXd w = inverse_sqrt(g, scale, "dyadic tuplet");

  for (Eigen::Index a = 0; a < size; ++a) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    for (Eigen::Index b = 0; b < size; ++b) {
      c += w(a, b) * residual[static_cast<std::size_t>(b)];
    }
    Spline s = linear_combination(family_, c);
    const Spline signed_s = with_canonical_sign(s);
    if (signed_s.taylor() != s.taylor()) {
      c = -c;
    }
    const std::size_t idx = indices[static_cast<std::size_t>(a)];
    member_support_[idx] = support_of(signed_s);
    members_[idx] = signed_s;
    coeffs_[idx] = std::move(c);
    layout_[idx] = NetPosition{level, tuplet, static_cast<std::size_t>(a)};
  }
  for (std::size_t i : indices) {
    built_[i] = true;
    build_order_.push_back(i);
  }
}

SplineFamily NetBuilder::finish_family() const {
  SplineFamily out(family_.mesh_ptr(), family_.order());
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (!members_[i]) {
      throw std::logic_error("NetBuilder: member " + std::to_string(i) + " was never built");
    }
    out.push_back(*members_[i]);
  }
  return out;
}

std::vector<NetPosition> NetBuilder::finish_layout() const {
  return layout_;
}

namespace {

std::size_t ceil_log2_ratio(std::size_t count, std::size_t k) {
  std::size_t n = 0;
  while ((k << n) < count) {
    ++n;
  }
  return n;
}

} // namespace

Splinet dyadic_splinet(const SplineFamily& family, OpCounter& counter) {
  if (family.empty()) {
    throw Error("dyadic_splinet of an empty family");
  }
  const std::size_t k = static_cast<std::size_t>(std::max(family.order(), 1));
  const std::size_t m = family.size();
  const std::size_t tuplets = (m + k - 1) / k;

  int top = 0;
  for (std::size_t j = 1; j <= tuplets; ++j) {
    top = std::max(top, dyadic_level(j));
  }

  NetBuilder builder(family, counter);
  for (int level = 1; level <= top; ++level) {
    for (std::size_t j = 1; j <= tuplets; ++j) {
      if (dyadic_level(j) != level) {
        continue;
      }
      std::vector<std::size_t> idx;
      for (std::size_t i = (j - 1) * k; i < std::min(j * k, m); ++i) {
        idx.push_back(i);
      }
      builder.add_tuplet(idx, level, j);
    }
  }
  return Splinet(builder.finish_family(), static_cast<int>(ceil_log2_ratio(m, k)),
                 builder.finish_layout(), family.mesh().periodic());
}

double total_support(const SplineFamily& family, double zero_tol) {
  const KnotMesh& mesh = family.mesh();
  double total = 0.0;
  for (const auto& s : family) {
    total += support_length(mesh, support_of(s, zero_tol));
  }
  return total / mesh.length();
}

double total_support(const Splinet& net, double zero_tol) {
  return total_support(net.basis(), zero_tol);
}

std::optional<int> dyadic_exponent(int k, std::size_t n) {
  if (k < 1 || n < static_cast<std::size_t>(k) || n % static_cast<std::size_t>(k) != 0) {
    return std::nullopt;
  }
  const std::size_t q = n / static_cast<std::size_t>(k);
  if (!std::has_single_bit(q)) {
    return std::nullopt;
  }
  return std::countr_zero(q);
}

CostReport predicted_costs(int k, std::size_t n) {
  const auto exponent = dyadic_exponent(k, n);
  if (!exponent || *exponent < 1) {
    throw Error("predicted_costs: (k = " + std::to_string(k) + ", n = " + std::to_string(n) +
                ") is not a dyadic configuration n = k·2^N with N ≥ 1");
  }
  const double kd = k;
  const double nd = static_cast<double>(n);
  CostReport r;
  r.k = k;
  r.n = n;
  r.j1 = 2.0 * nd * kd - 3.0 * kd * kd - kd;
  r.j2 = (5.0 * kd - 1.0) / 4.0 * nd - 5.0 * kd * kd / 2.0 - (3.0 * kd - 1.0) / 4.0;
  r.predicted_total_support = kd * std::log2(2.0 * nd / kd);
  return r;
}

} // namespace splinet
