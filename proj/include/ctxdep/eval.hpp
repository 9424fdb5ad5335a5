#pragma once

#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ctxdep/assessment.hpp"
#include "ctxdep/errors.hpp"
#include "ctxdep/rational.hpp"
#include "ctxdep/theme.hpp"

namespace ctxdep {

using ThemeSet = std::set<Theme>;

struct GoldRecord {
  std::string sentence_id;
  ThemeSet gold_themes;

  bool operator==(const GoldRecord&) const = default;
};

/// `sentence_id<TAB>theme[,theme...]`, or `sentence_id<TAB>-` for an empty set.
/// Blank lines and lines starting with '#' are ignored.
inline std::vector<GoldRecord> parse_gold(std::istream& in, const std::string& filename = "<gold>") {
  std::vector<GoldRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || line.find('\t', tab + 1) != std::string::npos)
      throw FormatError(filename, lineno, "expected sentence_id<TAB>themes");
    GoldRecord r{line.substr(0, tab), {}};
    const std::string themes = line.substr(tab + 1);
    if (themes != "-") {
      std::size_t start = 0;
      while (true) {
        const auto comma = themes.find(',', start);
        const std::string name = themes.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        const auto th = parse_theme(name);
        if (!th) throw FormatError(filename, lineno, "unknown theme '" + name + "'");
        r.gold_themes.insert(*th);
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<GoldRecord> load_gold(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read gold file " + path);
  return parse_gold(in, path);
}

struct ThemeMetrics {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::optional<Rational> precision;
  std::optional<Rational> recall;
  std::optional<Rational> f1;
};

struct AveragedMetrics {
  std::optional<Rational> precision;
  std::optional<Rational> recall;
  std::optional<Rational> f1;
  /// How many themes contributed to each macro mean (unused for micro).
  std::size_t precision_themes = 0;
  std::size_t recall_themes = 0;
  std::size_t f1_themes = 0;
};

struct EvalReport {
  std::map<Theme, ThemeMetrics> per_theme;
  AveragedMetrics macro;  // headline: unweighted mean over themes with defined values
  AveragedMetrics micro;  // pooled counts
  std::size_t sentences = 0;
  std::optional<Rational> multi_theme_rate;  // fraction with >= 2 predicted themes
};

namespace eval_detail {

inline void fill_ratios(std::size_t tp, std::size_t fp, std::size_t fn, std::optional<Rational>& p,
                        std::optional<Rational>& r, std::optional<Rational>& f1) {
  const auto i = [](std::size_t v) { return static_cast<std::int64_t>(v); };
  p = tp + fp > 0 ? std::optional(Rational(i(tp), i(tp + fp))) : std::nullopt;
  r = tp + fn > 0 ? std::optional(Rational(i(tp), i(tp + fn))) : std::nullopt;
  if (p && r) f1 = (*p + *r == Rational{0}) ? Rational{0} : Rational{2} * *p * *r / (*p + *r);
  else f1 = std::nullopt;
}

}  // namespace eval_detail

/// Per-theme sentence-level confusion counts. The evaluated sentences are the
/// union of gold and prediction ids; a side that lacks an id contributes an
/// empty theme set.
inline EvalReport evaluate(const std::map<std::string, ThemeSet>& predictions, const std::vector<GoldRecord>& gold) {
  std::map<std::string, ThemeSet> gold_by_id;
  for (const GoldRecord& g : gold)
    if (!gold_by_id.emplace(g.sentence_id, g.gold_themes).second)
      throw InputError("duplicate gold sentence id '" + g.sentence_id + "'");

  std::set<std::string> ids;
  for (const auto& [id, _] : gold_by_id) ids.insert(id);
  for (const auto& [id, _] : predictions) ids.insert(id);

  EvalReport report;
  for (Theme t : kImplementedThemes) report.per_theme[t];
  const ThemeSet empty;
  std::size_t multi = 0;
  for (const std::string& id : ids) {
    const auto pit = predictions.find(id);
    const auto git = gold_by_id.find(id);
    const ThemeSet& p = pit == predictions.end() ? empty : pit->second;
    const ThemeSet& g = git == gold_by_id.end() ? empty : git->second;
    if (p.size() >= 2) ++multi;
    for (Theme t : p) (g.count(t) ? report.per_theme[t].tp : report.per_theme[t].fp)++;
    for (Theme t : g)
      if (!p.count(t)) report.per_theme[t].fn++;
  }
  report.sentences = ids.size();
  if (!ids.empty())
    report.multi_theme_rate = Rational(static_cast<std::int64_t>(multi), static_cast<std::int64_t>(ids.size()));

  Rational psum{0}, rsum{0}, fsum{0};
  std::size_t tp = 0, fp = 0, fn = 0;
  for (auto& [_, m] : report.per_theme) {
    eval_detail::fill_ratios(m.tp, m.fp, m.fn, m.precision, m.recall, m.f1);
    if (m.precision) psum += *m.precision, ++report.macro.precision_themes;
    if (m.recall) rsum += *m.recall, ++report.macro.recall_themes;
    if (m.f1) fsum += *m.f1, ++report.macro.f1_themes;
    tp += m.tp;
    fp += m.fp;
    fn += m.fn;
  }
  auto mean = [](Rational sum, std::size_t n) {
    return n ? std::optional(sum / Rational(static_cast<std::int64_t>(n))) : std::nullopt;
  };
  report.macro.precision = mean(psum, report.macro.precision_themes);
  report.macro.recall = mean(rsum, report.macro.recall_themes);
  report.macro.f1 = mean(fsum, report.macro.f1_themes);
  eval_detail::fill_ratios(tp, fp, fn, report.micro.precision, report.micro.recall, report.micro.f1);
  return report;
}

/// Predicted theme sets keyed by sentence id.
inline std::map<std::string, ThemeSet> predictions_of(const std::vector<Assessment>& assessments) {
  std::map<std::string, ThemeSet> out;
  for (const Assessment& a : assessments) {
    auto& set = out[a.sentence_id];
    for (Theme t : a.themes()) set.insert(t);
  }
  return out;
}

struct ThemeRates {
  std::size_t sentences = 0;
  /// Percentages in [0, 100]; absent for empty input.
  std::map<Theme, std::optional<Rational>> per_theme;
  std::optional<Rational> total;
  std::optional<Rational> multi_theme;
};

/// Share of sentences carrying each theme, counted once per sentence.
inline ThemeRates theme_rates(const std::vector<Assessment>& assessments) {
  ThemeRates out;
  out.sentences = assessments.size();
  std::map<Theme, std::int64_t> with;
  std::int64_t any = 0, multi = 0;
  for (const Assessment& a : assessments) {
    const auto themes = a.themes();
    for (Theme t : themes) ++with[t];
    if (!themes.empty()) ++any;
    if (themes.size() >= 2) ++multi;
  }
  const auto n = static_cast<std::int64_t>(assessments.size());
  auto pct = [&](std::int64_t k) { return n ? std::optional(Rational(100 * k, n)) : std::nullopt; };
  for (Theme t : kImplementedThemes) out.per_theme[t] = pct(with[t]);
  out.total = pct(any);
  out.multi_theme = pct(multi);
  return out;
}

}  // namespace ctxdep
