#include "forge/agreement/statistics.hpp"

#include <algorithm>
#include <cmath>

#include "forge/util/error.hpp"

namespace forge::agreement {

PairedSeries PairedSeries::of(std::vector<double> a, std::vector<double> b) {
  PairedSeries s;
  for (std::size_t i = 0; i < a.size(); ++i) s.labels.push_back(std::to_string(i));
  s.a = std::move(a);
  s.b = std::move(b);
  return s;
}

void check_series(const PairedSeries& s) {
  if (s.a.size() != s.b.size() || (!s.labels.empty() && s.labels.size() != s.a.size())) {
    throw Error(Errc::InvalidArgument, "paired series lengths differ");
  }
  if (s.a.empty()) throw Error(Errc::EmptySeries, "paired series is empty");
}

double mae(const PairedSeries& s) {
  check_series(s);
  double sum = 0.0;
  for (std::size_t i = 0; i < s.a.size(); ++i) sum += std::fabs(s.a[i] - s.b[i]);
  return sum / static_cast<double>(s.a.size());
}

double rmse(const PairedSeries& s) {
  check_series(s);
  double sum = 0.0;
  for (std::size_t i = 0; i < s.a.size(); ++i) {
    const double d = s.a[i] - s.b[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(s.a.size()));
}

namespace {

bool constant(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo == *hi;
}

double mean(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

}  // namespace

double pearson(const PairedSeries& s) {
  check_series(s);
  if (constant(s.a) || constant(s.b)) throw Error(Errc::ZeroVariance, "pearson undefined for a constant series");
  const double ma = mean(s.a), mb = mean(s.b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < s.a.size(); ++i) {
    const double da = s.a[i] - ma, db = s.b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) throw Error(Errc::ZeroVariance, "pearson undefined for a constant series");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double sample_variance(const std::vector<double>& v) {
  if (v.size() < 2) throw Error(Errc::InvalidArgument, "sample variance needs at least two values");
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

double cronbach_alpha(const std::vector<std::vector<double>>& item_scores) {
  if (item_scores.size() < 2) throw Error(Errc::InvalidArgument, "cronbach alpha needs at least two observations");
  const std::size_t k = item_scores.front().size();
  if (k < 2) throw Error(Errc::InvalidArgument, "cronbach alpha needs at least two items");
  for (const auto& row : item_scores) {
    if (row.size() != k) throw Error(Errc::InvalidArgument, "ragged item matrix");
  }
  std::vector<double> totals;
  totals.reserve(item_scores.size());
  for (const auto& row : item_scores) {
    double t = 0.0;
    for (double x : row) t += x;
    totals.push_back(t);
  }
  if (constant(totals)) throw Error(Errc::DegenerateVariance, "total score variance is zero");
  const double var_total = sample_variance(totals);
  if (var_total == 0.0) throw Error(Errc::DegenerateVariance, "total score variance is zero");
  double var_items = 0.0;
  std::vector<double> column(item_scores.size());
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < item_scores.size(); ++i) column[i] = item_scores[i][j];
    var_items += sample_variance(column);
  }
  const double kk = static_cast<double>(k);
  return kk / (kk - 1.0) * (1.0 - var_items / var_total);
}

}  // namespace forge::agreement
