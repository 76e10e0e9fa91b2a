#pragma once

#include "akqr/common.hpp"
#include "json.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace akqr {

/// Widths d_1..d_s of contiguous coordinate blocks.
class BlockLayout {
 public:
  BlockLayout() = default;
  explicit BlockLayout(std::vector<int> dims);

  static BlockLayout uniform(int blocks, int width = 1);

  int blocks() const { return static_cast<int>(dims_.size()); }
  int total_dim() const { return total_; }
  int width(int j) const { return dims_.at(j); }
  int offset(int j) const { return offsets_.at(j); }
  const std::vector<int>& dims() const { return dims_; }

  bool operator==(const BlockLayout& other) const { return dims_ == other.dims_; }

 private:
  std::vector<int> dims_;
  std::vector<int> offsets_;
  int total_ = 0;
};

class KernelSpec;

struct GaussianKernel {
  double sigma = 1.0;
};

/// k(u, v) = 1 + min(u, v) on [0, 1].
struct SobolevMinKernel {};

struct CompositeKernel {
  BlockLayout layout;
  std::vector<KernelSpec> components;
};

struct AdditiveKernel : CompositeKernel {};
struct ProductKernel : CompositeKernel {};

/// Declarative Mercer kernel description. Construct through the factories,
/// which enforce the invariants.
class KernelSpec {
 public:
  using Variant = std::variant<GaussianKernel, SobolevMinKernel, AdditiveKernel, ProductKernel>;

  static KernelSpec gaussian(double sigma);
  static KernelSpec sobolev_min();
  static KernelSpec additive(BlockLayout layout, std::vector<KernelSpec> components);
  static KernelSpec product(BlockLayout layout, std::vector<KernelSpec> components);

  const Variant& variant() const { return v_; }
  bool is_composite() const {
    return std::holds_alternative<AdditiveKernel>(v_) || std::holds_alternative<ProductKernel>(v_);
  }
  const CompositeKernel& composite() const;

  /// Input dimension the kernel requires, or nullopt for dimension-agnostic
  /// kernels (a Gaussian accepts any block width).
  std::optional<int> input_dim() const;

  /// Sum over blocks of sup_x sqrt(k_j(x, x)); products multiply.
  double kappa() const;

  std::string type_name() const;

 private:
  explicit KernelSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

namespace detail {

template <typename Scalar>
Scalar eval_contiguous(const KernelSpec& spec, const Scalar* x, const Scalar* xp, Eigen::Index dim) {
  return std::visit(
      [&](const auto& k) -> Scalar {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, GaussianKernel>) {
          Scalar sq(0);
          for (Eigen::Index c = 0; c < dim; ++c) sq += (x[c] - xp[c]) * (x[c] - xp[c]);
          return std::exp(-sq / Scalar(k.sigma * k.sigma));
        } else if constexpr (std::is_same_v<K, SobolevMinKernel>) {
          return Scalar(1) + std::min(x[0], xp[0]);
        } else {
          constexpr bool additive = std::is_same_v<K, AdditiveKernel>;
          Scalar acc = additive ? Scalar(0) : Scalar(1);
          for (int j = 0; j < k.layout.blocks(); ++j) {
            const auto off = k.layout.offset(j);
            const Scalar kj = eval_contiguous(k.components[j], x + off, xp + off, k.layout.width(j));
            if constexpr (additive) {
              acc += kj;
            } else {
              acc *= kj;
            }
          }
          return acc;
        }
      },
      spec.variant());
}

void check_point_dim(const KernelSpec& spec, Eigen::Index dim);

}  // namespace detail

/// k(x, x'). Additive kernels sum block values, product kernels multiply them.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar eval(const KernelSpec& spec, const Eigen::MatrixBase<DerivedA>& x,
                               const Eigen::MatrixBase<DerivedB>& xp) {
  using Scalar = typename DerivedA::Scalar;
  if (x.size() != xp.size()) throw InputError("kernel eval: point dimensions differ");
  detail::check_point_dim(spec, x.size());
  const VectorX<Scalar> a = x.transpose().reshaped();
  const VectorX<Scalar> b = xp.transpose().reshaped();
  return detail::eval_contiguous(spec, a.data(), b.data(), a.size());
}

/// Scalar convenience for one-dimensional kernels.
double eval(const KernelSpec& spec, double u, double v);

/// Symmetric matrix of kernel values over a point set.
struct GramMatrix {
  Matrix entries;
  KernelSpec spec;
  PointMatrix points;

  Eigen::Index size() const { return entries.rows(); }
};

GramMatrix gram(const KernelSpec& spec, const PointMatrix& points);

/// Rectangular matrix k(a_i, b_l).
Matrix cross_gram(const KernelSpec& spec, const PointMatrix& a, const PointMatrix& b);

/// Columns [offset, offset + width) of every point.
PointMatrix block_columns(const PointMatrix& points, const BlockLayout& layout, int block);

/// c^T K c for f = sum_i c_i k(x_i, .). Values in [-1e-8, 0) are clamped to 0.
double rkhs_norm_sq(const Eigen::Ref<const Vector>& coeffs, const GramMatrix& gram);
double rkhs_norm_sq(const Eigen::Ref<const Vector>& coeffs, const Eigen::Ref<const Matrix>& gram);

/// Smallest eigenvalue must be >= -1e-8 * trace / n.
bool is_numerically_psd(const Eigen::Ref<const Matrix>& gram);

void to_json(nlohmann::json& j, const KernelSpec& spec);
KernelSpec kernel_from_json(const nlohmann::json& j);

}  // namespace akqr
