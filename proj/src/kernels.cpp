#include "akqr/kernels.hpp"

#include <numeric>

namespace akqr {

BlockLayout::BlockLayout(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw InputError("block layout needs at least one block");
  offsets_.reserve(dims_.size());
  for (int w : dims_) {
    if (w < 1) throw InputError("block widths must be positive");
    offsets_.push_back(total_);
    total_ += w;
  }
}

BlockLayout BlockLayout::uniform(int blocks, int width) {
  return BlockLayout(std::vector<int>(static_cast<std::size_t>(std::max(blocks, 0)), width));
}

KernelSpec KernelSpec::gaussian(double sigma) {
  if (!(sigma > 0) || !std::isfinite(sigma)) throw InputError("gaussian kernel: sigma must be positive");
  return KernelSpec(GaussianKernel{sigma});
}

KernelSpec KernelSpec::sobolev_min() { return KernelSpec(SobolevMinKernel{}); }

namespace {

void check_composite(const BlockLayout& layout, const std::vector<KernelSpec>& components) {
  if (layout.blocks() == 0) throw InputError("composite kernel: empty layout");
  if (static_cast<int>(components.size()) != layout.blocks())
    throw InputError("composite kernel: component count differs from block count");
  for (int j = 0; j < layout.blocks(); ++j) {
    const auto need = components[j].input_dim();
    if (need && *need != layout.width(j))
      throw InputError("composite kernel: block " + std::to_string(j) + " has width " +
                       std::to_string(layout.width(j)) + " but its kernel needs " +
                       std::to_string(*need));
  }
}

}  // namespace

KernelSpec KernelSpec::additive(BlockLayout layout, std::vector<KernelSpec> components) {
  check_composite(layout, components);
  return KernelSpec(AdditiveKernel{{std::move(layout), std::move(components)}});
}

KernelSpec KernelSpec::product(BlockLayout layout, std::vector<KernelSpec> components) {
  check_composite(layout, components);
  return KernelSpec(ProductKernel{{std::move(layout), std::move(components)}});
}

const CompositeKernel& KernelSpec::composite() const {
  if (const auto* a = std::get_if<AdditiveKernel>(&v_)) return *a;
  if (const auto* p = std::get_if<ProductKernel>(&v_)) return *p;
  throw InputError("kernel is not composite");
}

std::optional<int> KernelSpec::input_dim() const {
  if (std::holds_alternative<GaussianKernel>(v_)) return std::nullopt;
  if (std::holds_alternative<SobolevMinKernel>(v_)) return 1;
  return composite().layout.total_dim();
}

double KernelSpec::kappa() const {
  return std::visit(
      [](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, GaussianKernel>) {
          return 1.0;
        } else if constexpr (std::is_same_v<K, SobolevMinKernel>) {
          return std::sqrt(2.0);
        } else if constexpr (std::is_same_v<K, AdditiveKernel>) {
          double s = 0;
          for (const auto& c : k.components) s += c.kappa();
          return s;
        } else {
          double p = 1;
          for (const auto& c : k.components) p *= c.kappa();
          return p;
        }
      },
      v_);
}

std::string KernelSpec::type_name() const {
  switch (v_.index()) {
    case 0: return "gaussian";
    case 1: return "sobolev_min";
    case 2: return "additive";
    default: return "product";
  }
}

namespace detail {

void check_point_dim(const KernelSpec& spec, Eigen::Index dim) {
  if (dim < 1) throw InputError("kernel eval: empty point");
  const auto need = spec.input_dim();
  if (need && *need != dim)
    throw InputError("kernel eval: expected dimension " + std::to_string(*need) + ", got " +
                     std::to_string(dim));
}

}  // namespace detail

double eval(const KernelSpec& spec, double u, double v) {
  detail::check_point_dim(spec, 1);
  return detail::eval_contiguous(spec, &u, &v, 1);
}

GramMatrix gram(const KernelSpec& spec, const PointMatrix& points) {
  const Eigen::Index n = points.rows();
  if (n < 1) throw InputError("gram: no points");
  detail::check_point_dim(spec, points.cols());
  Matrix k(n, n);
  const auto d = points.cols();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* xi = points.row(i).data();
    for (Eigen::Index l = 0; l <= i; ++l) {
      const double v = detail::eval_contiguous(spec, xi, points.row(l).data(), d);
      if (!std::isfinite(v)) throw NumericError("gram: non-finite kernel value");
      k(i, l) = v;
      k(l, i) = v;
    }
  }
  return GramMatrix{std::move(k), spec, points};
}

Matrix cross_gram(const KernelSpec& spec, const PointMatrix& a, const PointMatrix& b) {
  if (a.cols() != b.cols()) throw InputError("cross_gram: point dimensions differ");
  detail::check_point_dim(spec, a.cols());
  Matrix k(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index l = 0; l < b.rows(); ++l)
      k(i, l) = detail::eval_contiguous(spec, a.row(i).data(), b.row(l).data(), a.cols());
  if (!k.allFinite()) throw NumericError("cross_gram: non-finite kernel value");
  return k;
}

PointMatrix block_columns(const PointMatrix& points, const BlockLayout& layout, int block) {
  if (points.cols() != layout.total_dim()) throw InputError("block_columns: layout does not match points");
  return points.middleCols(layout.offset(block), layout.width(block));
}

double rkhs_norm_sq(const Eigen::Ref<const Vector>& coeffs, const Eigen::Ref<const Matrix>& gram) {
  if (coeffs.size() != gram.rows() || gram.rows() != gram.cols())
    throw InputError("rkhs_norm_sq: coefficient length differs from gram size");
  const double v = coeffs.dot(gram * coeffs);
  if (!std::isfinite(v)) throw NumericError("rkhs_norm_sq: non-finite value");
  if (v < -1e-8) throw NumericError("rkhs_norm_sq: negative quadratic form, gram is not PSD");
  return std::max(v, 0.0);
}

double rkhs_norm_sq(const Eigen::Ref<const Vector>& coeffs, const GramMatrix& gram) {
  return rkhs_norm_sq(coeffs, gram.entries);
}

bool is_numerically_psd(const Eigen::Ref<const Matrix>& gram) {
  const auto n = gram.rows();
  if (n == 0) return true;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("eigensolver failed");
  return es.eigenvalues().minCoeff() >= -1e-8 * gram.trace() / static_cast<double>(n);
}

void to_json(nlohmann::json& j, const KernelSpec& spec) {
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, GaussianKernel>) {
          j = {{"type", "gaussian"}, {"sigma", k.sigma}};
        } else if constexpr (std::is_same_v<K, SobolevMinKernel>) {
          j = {{"type", "sobolev_min"}};
        } else {
          nlohmann::json comps = nlohmann::json::array();
          for (const auto& c : k.components) {
            nlohmann::json cj;
            to_json(cj, c);
            comps.push_back(std::move(cj));
          }
          j = {{"type", spec.type_name()}, {"dims", k.layout.dims()}, {"components", std::move(comps)}};
        }
      },
      spec.variant());
}

KernelSpec kernel_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type")) throw InputError("kernel json: missing \"type\"");
  const auto type = j.at("type").get<std::string>();
  try {
    if (type == "gaussian") return KernelSpec::gaussian(j.at("sigma").get<double>());
    if (type == "sobolev_min") return KernelSpec::sobolev_min();
    if (type == "additive" || type == "product") {
      BlockLayout layout(j.at("dims").get<std::vector<int>>());
      std::vector<KernelSpec> comps;
      for (const auto& c : j.at("components")) comps.push_back(kernel_from_json(c));
      return type == "additive" ? KernelSpec::additive(std::move(layout), std::move(comps))
                                : KernelSpec::product(std::move(layout), std::move(comps));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("kernel json: ") + e.what());
  }
  throw InputError("kernel json: unknown type \"" + type + "\"");
}

}  // namespace akqr
