#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctxdep/rational.hpp"

namespace ctxdep {

/// Context-dependence themes, in the fixed order detections are reported.
/// CDPC is reserved: it can appear in gold data but has no detector.
enum class Theme {
  IncompSent,
  ImpAnaphora,
  PNAnaphora,
  AdvAnaphora1,
  AdvAnaphora2,
  StructConn,
  CEQAnswer,
  CDPC,
};

inline constexpr std::size_t kThemeCount = 8;

inline constexpr std::array<Theme, 7> kImplementedThemes = {
    Theme::IncompSent,   Theme::ImpAnaphora, Theme::PNAnaphora, Theme::AdvAnaphora1,
    Theme::AdvAnaphora2, Theme::StructConn,  Theme::CEQAnswer,
};

inline constexpr std::array<std::string_view, kThemeCount> kThemeNames = {
    "IncompSent", "ImpAnaphora", "PNAnaphora", "AdvAnaphora1", "AdvAnaphora2", "StructConn", "CEQAnswer", "CDPC",
};

inline std::string_view to_string(Theme t) { return kThemeNames[static_cast<std::size_t>(t)]; }

inline std::optional<Theme> parse_theme(std::string_view s) {
  for (std::size_t i = 0; i < kThemeNames.size(); ++i)
    if (kThemeNames[i] == s) return static_cast<Theme>(i);
  return std::nullopt;
}

inline bool is_implemented(Theme t) { return t != Theme::CDPC; }

/// One detected context-dependence phenomenon.
struct ThemeDetection {
  Theme theme;
  std::vector<int> token_indices;  // ascending; empty for whole-sentence issues
  Rational weight{1};
  std::string rationale;
  /// Set for PNAnaphora only.
  std::optional<int> antecedent_count;

  bool operator==(const ThemeDetection&) const = default;
};

}  // namespace ctxdep
