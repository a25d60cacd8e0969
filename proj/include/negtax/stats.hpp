#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace negtax::stats {

enum class Weighting { None, Linear, Quadratic };

Weighting weighting_from_string(std::string_view s);
std::string_view to_string(Weighting w);

/// Cohen's kappa over nominal labels (Weighting::None only).
/// Throws Errc::ShapeError on length mismatch or empty input,
/// Errc::UndefinedKappa when expected disagreement is zero.
double cohen_kappa(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// Cohen's kappa over numeric ratings; Linear and Quadratic weights use
/// |x - y| and (x - y)^2 between the rating values.
double cohen_kappa(const std::vector<int>& a, const std::vector<int>& b, Weighting weighting);

/// Throws Errc::UndefinedMetric when precision or recall is undefined.
double f1_binary(const std::vector<bool>& pred, const std::vector<bool>& gold);

/// Mean per-class recall over the classes present in gold.
double balanced_accuracy(const std::vector<std::string>& pred, const std::vector<std::string>& gold);

/// Share of rater A's positive marks also marked by B, averaged with the
/// reverse direction. A direction with no positive marks is left out;
/// throws Errc::UndefinedMetric when neither rater marked anything.
double agreement_recall(const std::vector<bool>& a, const std::vector<bool>& b);

using GroupedSamples = std::map<std::string, std::vector<double>>;

struct AnovaResult {
  double f = 0.0;
  double p = 1.0;
  double df_between = 0.0;
  double df_within = 0.0;
  double ss_between = 0.0;
  double ss_within = 0.0;
  /// Zero within-group variance while the means differ.
  bool degenerate_variance = false;
};

/// Throws Errc::ShapeError for fewer than 2 groups or a group with fewer
/// than 2 observations.
AnovaResult one_way_anova(const GroupedSamples& samples);

/// Upper tail of the F distribution.
double f_sf(double f, double df1, double df2);

/// Upper tail of the studentized range distribution for k means and
/// df degrees of freedom, by adaptive Gauss-Kronrod integration.
double studentized_range_sf(double q, double k, double df);

struct TukeyPair {
  std::string a;
  std::string b;
  double mean_diff = 0.0;  // mean(a) - mean(b)
  double q = 0.0;
  double p_adj = 1.0;
  bool significant = false;
};

/// Tukey-Kramer pairwise comparisons. Throws Errc::ShapeError for fewer
/// than 2 groups, Errc::Precondition for alpha outside (0, 1).
std::vector<TukeyPair> tukey_hsd(const GroupedSamples& samples, double alpha = 0.05);

// ------------------------------------------------------------ annotations

struct Annotation {
  std::string item;
  std::string rater;
  std::string question;
  std::string answer;
  std::string type;  // empty when the CSV has no type column
};

/// CSV with header item,rater,question,answer and an optional type column.
/// Throws Errc::ShapeError on a wrong header or ragged rows.
std::vector<Annotation> read_annotations(std::istream& in);

/// Per question and type: the agreement statistic between the first two
/// raters (sorted by name). Ordinal 1-5 answers use linearly weighted
/// kappa, multi-select answers (';'-separated, or question "q3") use
/// agreement recall, everything else unweighted kappa. Ordinal questions
/// also get mean and standard error of the answers.
nlohmann::ordered_json annotation_report(const std::vector<Annotation>& rows,
                                         Weighting ordinal_weighting = Weighting::Linear);

}  // namespace negtax::stats
