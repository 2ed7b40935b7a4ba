#include "tlr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace tlr {

double psnr(const Tensor3d &xhat, const Tensor3d &xref, double peak) {
  detail::require_same(xhat.dims(), xref.dims(), "psnr");
  if (!(peak > 0.0))
    throw std::invalid_argument("psnr: peak must be positive");
  const double mse = (xhat.array() - xref.array()).square().mean();
  if (mse == 0.0)
    return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

double rse(const Tensor3d &xhat, const Tensor3d &xref) {
  detail::require_same(xhat.dims(), xref.dims(), "rse");
  const double ref = frobenius_norm(xref);
  if (ref == 0.0)
    throw std::invalid_argument("rse: reference tensor is zero");
  return frobenius_norm(xhat - xref) / ref;
}

double f_measure(const Mask3 &estimate, const Mask3 &truth) {
  detail::require_same(estimate.dims(), truth.dims(), "f_measure");
  const auto &e = estimate.array();
  const auto &t = truth.array();
  const double tp = double((e && t).count());
  if (tp == 0.0)
    return 0.0;
  const double precision = tp / double(e.count());
  const double recall = tp / double(t.count());
  return 2.0 * precision * recall / (precision + recall);
}

double cluster_accuracy(const std::vector<int> &predicted,
                        const std::vector<int> &truth) {
  if (predicted.size() != truth.size() || truth.empty())
    throw std::invalid_argument("cluster_accuracy: label vectors must have "
                                "the same nonzero length");
  for (const auto *v : {&predicted, &truth})
    if (*std::min_element(v->begin(), v->end()) < 0)
      throw std::invalid_argument("cluster_accuracy: labels must be >= 0");
  const int kp = *std::max_element(predicted.begin(), predicted.end()) + 1;
  const int kt = *std::max_element(truth.begin(), truth.end()) + 1;
  const int k = std::max(kp, kt);
  if (k > 8)
    throw std::invalid_argument("cluster_accuracy: more than 8 labels");

  std::vector<std::vector<int>> hits(k, std::vector<int>(k, 0));
  for (std::size_t n = 0; n < truth.size(); ++n)
    ++hits[predicted[n]][truth[n]];
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  int best = 0;
  do {
    int s = 0;
    for (int c = 0; c < k; ++c)
      s += hits[c][perm[c]];
    best = std::max(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return double(best) / double(truth.size());
}

std::string csv_header() {
  return "experiment,solver,psnr,rse,f_measure,cluster_accuracy,iterations,"
         "wall_time_s,converged";
}

namespace {

std::string field(const std::optional<double> &v) {
  if (!v)
    return "";
  if (std::isinf(*v))
    return *v > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s.precision(10);
  s << *v;
  return s.str();
}

std::string quoted(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (const char c : s)
    out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

} // namespace

std::string to_csv(const MetricsRow &row) {
  std::ostringstream s;
  s << quoted(row.experiment) << ',' << quoted(row.solver) << ','
    << field(row.psnr) << ',' << field(row.rse) << ',' << field(row.f_measure)
    << ',' << field(row.cluster_accuracy) << ','
    << (row.iterations ? std::to_string(*row.iterations) : "") << ','
    << field(row.wall_time_s) << ','
    << (row.converged ? (*row.converged ? "true" : "false") : "");
  return s.str();
}

void append_csv(const MetricsRow &row, const std::filesystem::path &path) {
  std::error_code ec;
  const bool fresh =
      !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
  std::ofstream f(path, std::ios::app);
  if (!f)
    throw std::runtime_error("cannot open " + path.string() + " for appending");
  if (fresh)
    f << csv_header() << '\n';
  f << to_csv(row) << '\n';
}

} // namespace tlr
