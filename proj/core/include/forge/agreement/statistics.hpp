#pragma once

#include <string>
#include <vector>

namespace forge::agreement {

struct PairedSeries {
  std::vector<std::string> labels;
  std::vector<double> a;
  std::vector<double> b;

  /// Unlabelled convenience constructor; labels become "0", "1", ...
  static PairedSeries of(std::vector<double> a, std::vector<double> b);
};

/// EmptySeries for n = 0; InvalidArgument when lengths differ.
void check_series(const PairedSeries& s);

double mae(const PairedSeries& s);
double rmse(const PairedSeries& s);
/// Sample correlation; ZeroVariance when either side is constant.
double pearson(const PairedSeries& s);

/// Rows are observations (queries), columns are items (metrics). Needs at
/// least two of each; DegenerateVariance when the row totals are constant.
double cronbach_alpha(const std::vector<std::vector<double>>& item_scores);

/// Unbiased sample variance (n - 1 denominator); needs n >= 2.
double sample_variance(const std::vector<double>& v);

}  // namespace forge::agreement
