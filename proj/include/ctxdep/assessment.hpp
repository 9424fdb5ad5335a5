#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "ctxdep/rational.hpp"
#include "ctxdep/theme.hpp"

namespace ctxdep {

/// Exact sum of detection weights.
inline Rational score(const std::vector<ThemeDetection>& detections) {
  Rational total{0};
  for (const auto& d : detections) total += d.weight;
  return total;
}

struct Assessment {
  std::string sentence_id;
  std::vector<ThemeDetection> detections;
  Rational score{0};

  bool context_independent() const noexcept { return detections.empty(); }

  /// Distinct themes among the detections, in theme order.
  std::vector<Theme> themes() const {
    std::vector<Theme> out;
    for (const auto& d : detections)
      if (std::find(out.begin(), out.end(), d.theme) == out.end()) out.push_back(d.theme);
    std::sort(out.begin(), out.end());
    return out;
  }

  bool operator==(const Assessment&) const = default;
};

inline Assessment make_assessment(std::string sentence_id, std::vector<ThemeDetection> detections) {
  Assessment a{std::move(sentence_id), std::move(detections), Rational{0}};
  a.score = score(a.detections);
  return a;
}

/// Keeps the context-independent assessments, in input order.
inline std::vector<Assessment> filter(const std::vector<Assessment>& assessments) {
  std::vector<Assessment> out;
  std::copy_if(assessments.begin(), assessments.end(), std::back_inserter(out),
               [](const Assessment& a) { return a.context_independent(); });
  return out;
}

/// Orders by (score, detection count, input position), ascending.
inline std::vector<Assessment> rank(const std::vector<Assessment>& assessments) {
  std::vector<std::size_t> order(assessments.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Assessment& x = assessments[a];
    const Assessment& y = assessments[b];
    if (x.score != y.score) return x.score < y.score;
    return x.detections.size() < y.detections.size();
  });
  std::vector<Assessment> out;
  out.reserve(order.size());
  for (std::size_t i : order) out.push_back(assessments[i]);
  return out;
}

}  // namespace ctxdep
