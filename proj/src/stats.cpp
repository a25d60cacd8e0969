#include "negtax/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "negtax/error.hpp"
#include "negtax/text.hpp"

namespace negtax::stats {

using ojson = nlohmann::ordered_json;

Weighting weighting_from_string(std::string_view s) {
  if (s == "none") return Weighting::None;
  if (s == "linear") return Weighting::Linear;
  if (s == "quadratic") return Weighting::Quadratic;
  throw Error(Errc::Usage, "unknown weighting '" + std::string(s) + "'");
}

std::string_view to_string(Weighting w) {
  switch (w) {
    case Weighting::None: return "none";
    case Weighting::Linear: return "linear";
    case Weighting::Quadratic: return "quadratic";
  }
  return "?";
}

namespace {

void check_pair(std::size_t a, std::size_t b) {
  if (a != b) throw Error(Errc::ShapeError, "rating lists differ in length (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
  if (a == 0) throw Error(Errc::ShapeError, "no ratings");
}

/// kappa from category indices and a weight function over category values
template <class W>
double kappa_core(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b, std::size_t k, W weight) {
  const double n = static_cast<double>(a.size());
  std::vector<double> obs(k * k, 0.0), ra(k, 0.0), rb(k, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    obs[a[i] * k + b[i]] += 1.0 / n;
    ra[a[i]] += 1.0 / n;
    rb[b[i]] += 1.0 / n;
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      double w = weight(i, j);
      num += w * obs[i * k + j];
      den += w * ra[i] * rb[j];
    }
  if (den <= 0.0) throw Error(Errc::UndefinedKappa, "expected disagreement is zero; kappa is undefined");
  return 1.0 - num / den;
}

}  // namespace

double cohen_kappa(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  check_pair(a.size(), b.size());
  std::set<std::string> cats(a.begin(), a.end());
  cats.insert(b.begin(), b.end());
  std::vector<std::string> order(cats.begin(), cats.end());
  auto index = [&](const std::string& s) {
    return static_cast<std::size_t>(std::lower_bound(order.begin(), order.end(), s) - order.begin());
  };
  std::vector<std::size_t> ia, ib;
  for (const auto& s : a) ia.push_back(index(s));
  for (const auto& s : b) ib.push_back(index(s));
  return kappa_core(ia, ib, order.size(), [](std::size_t i, std::size_t j) { return i == j ? 0.0 : 1.0; });
}

double cohen_kappa(const std::vector<int>& a, const std::vector<int>& b, Weighting weighting) {
  check_pair(a.size(), b.size());
  std::set<int> cats(a.begin(), a.end());
  cats.insert(b.begin(), b.end());
  std::vector<int> vals(cats.begin(), cats.end());
  auto index = [&](int v) { return static_cast<std::size_t>(std::lower_bound(vals.begin(), vals.end(), v) - vals.begin()); };
  std::vector<std::size_t> ia, ib;
  for (int v : a) ia.push_back(index(v));
  for (int v : b) ib.push_back(index(v));
  return kappa_core(ia, ib, vals.size(), [&](std::size_t i, std::size_t j) {
    double d = static_cast<double>(vals[i]) - static_cast<double>(vals[j]);
    switch (weighting) {
      case Weighting::None: return i == j ? 0.0 : 1.0;
      case Weighting::Linear: return std::abs(d);
      case Weighting::Quadratic: return d * d;
    }
    return 0.0;
  });
}

double f1_binary(const std::vector<bool>& pred, const std::vector<bool>& gold) {
  check_pair(pred.size(), gold.size());
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    tp += pred[i] && gold[i];
    fp += pred[i] && !gold[i];
    fn += !pred[i] && gold[i];
  }
  if (tp + fp == 0) throw Error(Errc::UndefinedMetric, "F1 undefined: no positive predictions");
  if (tp + fn == 0) throw Error(Errc::UndefinedMetric, "F1 undefined: no positive gold instances");
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

double balanced_accuracy(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
  check_pair(pred.size(), gold.size());
  std::map<std::string, std::pair<std::size_t, std::size_t>> per;  // hits, total
  for (std::size_t i = 0; i < gold.size(); ++i) {
    auto& [hit, total] = per[gold[i]];
    ++total;
    hit += pred[i] == gold[i];
  }
  double sum = 0.0;
  for (const auto& [_, ht] : per) sum += static_cast<double>(ht.first) / static_cast<double>(ht.second);
  return sum / static_cast<double>(per.size());
}

double agreement_recall(const std::vector<bool>& a, const std::vector<bool>& b) {
  check_pair(a.size(), b.size());
  std::size_t both = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    both += a[i] && b[i];
    na += a[i];
    nb += b[i];
  }
  double sum = 0.0;
  int dirs = 0;
  if (na) {
    sum += static_cast<double>(both) / static_cast<double>(na);
    ++dirs;
  }
  if (nb) {
    sum += static_cast<double>(both) / static_cast<double>(nb);
    ++dirs;
  }
  if (!dirs) throw Error(Errc::UndefinedMetric, "agreement recall undefined: no positive marks");
  return sum / dirs;
}

// ------------------------------------------------------------------ ANOVA

namespace {

void check_groups(const GroupedSamples& s) {
  if (s.size() < 2) throw Error(Errc::ShapeError, "need at least 2 groups, got " + std::to_string(s.size()));
  for (const auto& [name, xs] : s) {
    if (xs.size() < 2) throw Error(Errc::ShapeError, "group '" + name + "' has fewer than 2 observations");
    for (double x : xs)
      if (!std::isfinite(x)) throw Error(Errc::ShapeError, "group '" + name + "' holds a non-finite value");
  }
}

double mean(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

struct WithinStats {
  double ss_within = 0.0;
  double ss_total = 0.0;
  double sum_sq = 0.0;
  double df_within = 0.0;
  std::map<std::string, double> means;
};

WithinStats within(const GroupedSamples& s) {
  WithinStats w;
  std::size_t n = 0;
  double grand = 0.0;
  for (const auto& [name, xs] : s) {
    double m = mean(xs);
    w.means[name] = m;
    for (double x : xs) {
      w.ss_within += (x - m) * (x - m);
      w.sum_sq += x * x;
      grand += x;
    }
    n += xs.size();
  }
  grand /= static_cast<double>(n);
  for (const auto& [_, xs] : s)
    for (double x : xs) w.ss_total += (x - grand) * (x - grand);
  w.df_within = static_cast<double>(n - s.size());
  return w;
}

}  // namespace

double f_sf(double f, double df1, double df2) {
  if (!(df1 > 0) || !(df2 > 0)) throw Error(Errc::Precondition, "F distribution needs positive degrees of freedom");
  if (std::isnan(f)) throw Error(Errc::Precondition, "F statistic is NaN");
  if (f <= 0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return boost::math::cdf(boost::math::complement(boost::math::fisher_f_distribution<double>(df1, df2), f));
}

AnovaResult one_way_anova(const GroupedSamples& samples) {
  check_groups(samples);
  auto w = within(samples);
  AnovaResult r;
  r.df_between = static_cast<double>(samples.size() - 1);
  r.df_within = w.df_within;
  r.ss_within = w.ss_within;
  r.ss_between = std::max(0.0, w.ss_total - w.ss_within);
  // the partition is exact in exact arithmetic; recompute directly for accuracy
  {
    double grand = 0.0;
    std::size_t n = 0;
    for (const auto& [_, xs] : samples) {
      grand += std::accumulate(xs.begin(), xs.end(), 0.0);
      n += xs.size();
    }
    grand /= static_cast<double>(n);
    double ssb = 0.0;
    for (const auto& [name, xs] : samples) {
      double d = w.means[name] - grand;
      ssb += static_cast<double>(xs.size()) * d * d;
    }
    r.ss_between = ssb;
  }
  const double tiny = 1e-24 * std::max(w.sum_sq, std::numeric_limits<double>::min());
  if (w.ss_total <= tiny) {
    r.f = 0.0;
    r.p = 1.0;
    r.ss_between = 0.0;
    r.ss_within = 0.0;
    return r;
  }
  if (w.ss_within <= 1e-14 * w.ss_total) {
    r.f = std::numeric_limits<double>::infinity();
    r.p = 0.0;
    r.degenerate_variance = true;
    return r;
  }
  r.f = (r.ss_between / r.df_between) / (r.ss_within / r.df_within);
  r.p = f_sf(r.f, r.df_between, r.df_within);
  return r;
}

// --------------------------------------------------------- studentized range

namespace {

double phi(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }
double Phi(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// P(range of k standard normals > w), written so the integrand is
/// nonnegative: k * int phi(z) (Phi(z)^(k-1) - (Phi(z) - Phi(z-w))^(k-1)) dz.
double range_sf(double w, double k) {
  if (w <= 0) return 1.0;
  auto f = [&](double z) {
    double pz = Phi(z);
    double inner = std::max(0.0, pz - Phi(z - w));
    return phi(z) * (std::pow(pz, k - 1.0) - std::pow(inner, k - 1.0));
  };
  using GL = boost::math::quadrature::gauss<double, 30>;
  static const auto& x = GL::abscissa();
  static const auto& wt = GL::weights();
  // integrand lives between about -9 and w + 9; smooth, so fixed panels do
  const double lo = -9.0, hi = w + 9.0;
  const int panels = 12 + static_cast<int>(w);
  const double h = (hi - lo) / panels;
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double mid = lo + (i + 0.5) * h, half = 0.5 * h;
    double panel = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j] == 0.0) panel += wt[j] * f(mid);
      else panel += wt[j] * (f(mid - half * x[j]) + f(mid + half * x[j]));
    }
    total += half * panel;
  }
  return std::clamp(k * total, 0.0, 1.0);
}

}  // namespace

double studentized_range_sf(double q, double k, double df) {
  if (!(k >= 2)) throw Error(Errc::Precondition, "studentized range needs k >= 2");
  if (!(df > 0)) throw Error(Errc::Precondition, "studentized range needs df > 0");
  if (std::isnan(q)) throw Error(Errc::Precondition, "q is NaN");
  if (q <= 0) return 1.0;
  if (std::isinf(q)) return 0.0;
  if (df > 1e5) return range_sf(q, k);

  // density of s = sqrt(chi2_df / df)
  const double log_c = 0.5 * df * std::log(df) - std::lgamma(0.5 * df) - (0.5 * df - 1.0) * std::log(2.0);
  auto integrand = [&](double s) {
    if (s <= 0) return 0.0;
    double log_dens = log_c + (df - 1.0) * std::log(s) - 0.5 * df * s * s;
    return std::exp(log_dens) * range_sf(q * s, k);
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  // density mass sits near s = 1 with spread about 1/sqrt(2 df)
  const double spread = 1.0 / std::sqrt(2.0 * df);
  const double hi = 1.0 + std::max(40.0 * spread, std::sqrt(160.0 / df));
  const double lo = std::max(0.0, 1.0 - 40.0 * spread);
  std::vector<double> cuts{0.0};
  if (lo > 0) cuts.push_back(lo);
  for (double c : {1.0 - 4 * spread, 1.0, 1.0 + 4 * spread})
    if (c > cuts.back() && c < hi) cuts.push_back(c);
  cuts.push_back(hi);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += GK::integrate(integrand, cuts[i], cuts[i + 1], 8, 1e-11);
  return std::clamp(total, 0.0, 1.0);
}

std::vector<TukeyPair> tukey_hsd(const GroupedSamples& samples, double alpha) {
  if (samples.size() < 2) throw Error(Errc::ShapeError, "Tukey HSD needs at least 2 groups");
  if (!(alpha > 0 && alpha < 1)) throw Error(Errc::Precondition, "alpha must lie in (0, 1)");
  check_groups(samples);
  auto w = within(samples);
  const double msw = w.ss_within / w.df_within;
  const double k = static_cast<double>(samples.size());
  std::vector<TukeyPair> out;
  for (auto i = samples.begin(); i != samples.end(); ++i) {
    for (auto j = std::next(i); j != samples.end(); ++j) {
      TukeyPair p;
      p.a = i->first;
      p.b = j->first;
      p.mean_diff = w.means[p.a] - w.means[p.b];
      double ni = static_cast<double>(i->second.size()), nj = static_cast<double>(j->second.size());
      double se = std::sqrt(msw / 2.0 * (1.0 / ni + 1.0 / nj));
      double diff = std::abs(p.mean_diff);
      if (se <= 0 || w.ss_within <= 1e-14 * std::max(w.ss_total, std::numeric_limits<double>::min())) {
        bool same = diff <= 1e-12 * std::max(1.0, std::abs(w.means[p.a]));
        p.q = same ? 0.0 : std::numeric_limits<double>::infinity();
        p.p_adj = same ? 1.0 : 0.0;
      } else {
        p.q = diff / se;
        p.p_adj = studentized_range_sf(p.q, k, w.df_within);
      }
      p.significant = p.p_adj < alpha;
      out.push_back(std::move(p));
    }
  }
  return out;
}

// ------------------------------------------------------------ annotations

std::vector<Annotation> read_annotations(std::istream& in) {
  auto rows = read_csv(in);
  if (rows.empty()) throw Error(Errc::ShapeError, "annotation CSV is empty");
  std::vector<std::string> header;
  for (const auto& h : rows[0]) header.push_back(to_lower(trim(h)));
  const std::vector<std::string> expected{"item", "rater", "question", "answer"};
  bool with_type = header.size() == 5 && header[4] == "type";
  if (!(header == expected || (with_type && std::equal(expected.begin(), expected.end(), header.begin()))))
    throw Error(Errc::ShapeError, "annotation CSV header must be item,rater,question,answer[,type]");
  std::vector<Annotation> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size())
      throw Error(Errc::ShapeError, "annotation CSV row " + std::to_string(r + 1) + " has " +
                                        std::to_string(row.size()) + " fields");
    out.push_back({trim(row[0]), trim(row[1]), trim(row[2]), trim(row[3]), with_type ? trim(row[4]) : ""});
  }
  if (out.empty()) throw Error(Errc::ShapeError, "annotation CSV has no rows");
  return out;
}

namespace {

std::optional<int> ordinal(const std::string& s) {
  if (s.size() != 1 || s[0] < '1' || s[0] > '5') return std::nullopt;
  return s[0] - '0';
}

std::set<std::string> split_choices(const std::string& s) {
  std::set<std::string> out;
  std::string cur;
  for (char c : s + ";") {
    if (c == ';' || c == '|' || c == ',') {
      auto t = to_lower(trim(cur));
      if (!t.empty()) out.insert(t);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  return out;
}

}  // namespace

ojson annotation_report(const std::vector<Annotation>& rows, Weighting ordinal_weighting) {
  std::set<std::string> raters;
  for (const auto& r : rows) raters.insert(r.rater);
  if (raters.size() < 2) throw Error(Errc::ShapeError, "annotation table needs two raters");
  auto it = raters.begin();
  const std::string ra = *it++;
  const std::string rb = *it;

  // question -> type -> item -> rater -> answer
  std::map<std::string, std::map<std::string, std::map<std::string, std::map<std::string, std::string>>>> grid;
  for (const auto& r : rows) {
    auto& slot = grid[r.question][r.type.empty() ? "all" : r.type][r.item][r.rater];
    if (!slot.empty() && slot != r.answer)
      throw Error(Errc::ShapeError, "rater " + r.rater + " answered item " + r.item + " question " + r.question + " twice");
    slot = r.answer;
    if (!r.type.empty()) grid[r.question]["all"][r.item][r.rater] = r.answer;
  }

  ojson out;
  out["raters"] = {ra, rb};
  if (raters.size() > 2) out["warning"] = "more than two raters; agreement uses the first two by name";
  ojson questions = ojson::object();
  for (const auto& [question, by_type] : grid) {
    bool all_ordinal = true, multi = to_lower(question) == "q3";
    for (const auto& [_, items] : by_type)
      for (const auto& [__, answers] : items)
        for (const auto& [___, a] : answers) {
          if (!ordinal(a)) all_ordinal = false;
          if (a.find(';') != std::string::npos || a.find('|') != std::string::npos) multi = true;
        }
    std::string kind = multi ? "multi_select" : all_ordinal ? "ordinal" : "nominal";
    ojson q;
    q["kind"] = kind;
    q["metric"] = multi ? "agreement_recall"
                        : all_ordinal ? "kappa_" + std::string(to_string(ordinal_weighting)) : "kappa";
    ojson types = ojson::object();
    // "all" first, then the named types in order
    std::vector<std::string> order;
    if (by_type.count("all")) order.push_back("all");
    for (const auto& [t, _] : by_type)
      if (t != "all") order.push_back(t);
    for (const auto& type : order) {
      const auto& items = by_type.at(type);
      ojson cell;
      std::vector<std::string> a, b;
      for (const auto& [item, answers] : items) {
        auto ia = answers.find(ra), ib = answers.find(rb);
        if (ia == answers.end() || ib == answers.end()) continue;
        a.push_back(ia->second);
        b.push_back(ib->second);
      }
      cell["paired_items"] = a.size();
      try {
        if (a.empty()) throw Error(Errc::UndefinedMetric, "no items rated by both raters");
        if (multi) {
          std::vector<bool> va, vb;
          for (std::size_t i = 0; i < a.size(); ++i) {
            auto sa = split_choices(a[i]), sb = split_choices(b[i]);
            std::set<std::string> opts = sa;
            opts.insert(sb.begin(), sb.end());
            for (const auto& o : opts) {
              va.push_back(sa.count(o) > 0);
              vb.push_back(sb.count(o) > 0);
            }
          }
          cell["value"] = agreement_recall(va, vb);
        } else if (all_ordinal) {
          std::vector<int> va, vb;
          for (std::size_t i = 0; i < a.size(); ++i) {
            va.push_back(*ordinal(a[i]));
            vb.push_back(*ordinal(b[i]));
          }
          cell["value"] = cohen_kappa(va, vb, ordinal_weighting);
        } else {
          cell["value"] = cohen_kappa(a, b);
        }
      } catch (const Error& e) {
        cell["value"] = nullptr;
        cell["undefined"] = e.what();
      }
      if (all_ordinal) {
        std::vector<double> xs;
        for (const auto& [_, answers] : items)
          for (const auto& [__, ans] : answers) xs.push_back(*ordinal(ans));
        double m = mean(xs);
        double var = 0.0;
        for (double x : xs) var += (x - m) * (x - m);
        double se = xs.size() > 1 ? std::sqrt(var / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size())) : 0.0;
        cell["mean"] = m;
        cell["std_error"] = se;
      }
      types[type] = std::move(cell);
    }
    q["by_type"] = std::move(types);
    questions[question] = std::move(q);
  }
  out["questions"] = std::move(questions);
  return out;
}

}  // namespace negtax::stats
