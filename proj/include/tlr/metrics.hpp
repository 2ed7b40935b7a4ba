#pragma once

// Quality measures and the metrics CSV.

#include "tlr/tensor3.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tlr {

/// 10 log10(peak^2 / MSE); +infinity when the tensors are equal.
double psnr(const Tensor3d &xhat, const Tensor3d &xref, double peak = 1.0);

/// ||xhat - xref||_F / ||xref||_F. Throws std::invalid_argument if xref = 0.
double rse(const Tensor3d &xhat, const Tensor3d &xref);

/// 2PR / (P + R) of an estimated support against the truth; 0 when there
/// are no true positives.
double f_measure(const Mask3 &estimate, const Mask3 &truth);

/// Fraction of items labelled correctly under the best one-to-one matching
/// of predicted to true labels. Labels are 0-based; at most 8 distinct
/// labels per side.
double cluster_accuracy(const std::vector<int> &predicted,
                        const std::vector<int> &truth);

struct MetricsRow {
  std::string experiment;
  std::string solver;
  std::optional<double> psnr;
  std::optional<double> rse;
  std::optional<double> f_measure;
  std::optional<double> cluster_accuracy;
  std::optional<int> iterations;
  std::optional<double> wall_time_s;
  std::optional<bool> converged;
};

/// experiment,solver,psnr,rse,f_measure,cluster_accuracy,iterations,wall_time_s,converged
std::string csv_header();
std::string to_csv(const MetricsRow &row);

/// Appends the row, writing the header first if the file is new or empty.
void append_csv(const MetricsRow &row, const std::filesystem::path &path);

} // namespace tlr
