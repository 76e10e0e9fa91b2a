#pragma once

#include "akqr/common.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace akqr {

/// Inputs, responses and optional probability weights (uniform 1/n when absent).
struct DataSet {
  PointMatrix inputs;
  Vector responses;
  std::optional<Vector> weights;

  Eigen::Index size() const { return inputs.rows(); }
  Eigen::Index dim() const { return inputs.cols(); }

  /// The weights actually used: explicit ones, or 1/n each.
  Vector effective_weights() const;

  /// max_i |y_i|; the bound |L|_0 used for clipping and the norm bound.
  double response_bound() const;

  /// Throws InputError unless n >= 1, entries are finite and weights are
  /// nonnegative with unit sum (1e-12).
  void validate() const;
};

/// CSV with header x1,...,xd,y[,w]. A weight column is normalised to unit sum.
DataSet read_csv(std::istream& in);
DataSet read_csv_file(const std::string& path);
void write_csv(std::ostream& out, const DataSet& data);

}  // namespace akqr
