#pragma once

// Rule-based detectors for the seven implemented context-dependence themes.
// Each detector is a pure function of (sentence, lexicons); none of them
// consults another's output.

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include "ctxdep/annotation.hpp"
#include "ctxdep/assessment.hpp"
#include "ctxdep/lexicons.hpp"
#include "ctxdep/theme.hpp"

namespace ctxdep {

// ---------------------------------------------------------------------------
// Shared sentence queries
// ---------------------------------------------------------------------------

/// First token that is not a delimiter, or 0.
inline int first_content_token(const AnnotatedSentence& s) {
  for (int i = 1; i <= s.size(); ++i)
    if (!is_delimiter(s.category(i))) return i;
  return 0;
}

/// Root token (first head-0 token), or 0.
inline int root_token(const AnnotatedSentence& s) {
  for (int i = 1; i <= s.size(); ++i)
    if (s.head(i) == 0) return i;
  return 0;
}

/// A modal forms a verb group when it governs or is governed by a verb.
inline bool in_verb_group(const AnnotatedSentence& s, int i) {
  const int h = s.head(i);
  if (h != 0 && s.category(h) == Category::verb) return true;
  for (int c : s.children(i))
    if (s.category(c) == Category::verb) return true;
  return false;
}

/// Finite verb form; modals count only inside a verb group.
inline bool is_effective_finite(const AnnotatedSentence& s, int i) {
  const TokenView& v = s.view(i);
  if (v.category != Category::verb || !is_finite(v.feats.verb_form)) return false;
  return !v.modal || in_verb_group(s, i);
}

inline int finite_verb_count(const AnnotatedSentence& s) {
  int n = 0;
  for (int i = 1; i <= s.size(); ++i)
    if (is_effective_finite(s, i)) ++n;
  return n;
}

/// Coordinate clause/conjunct count: max(finite verbs, conjunct tokens + 1).
inline int coordinate_unit_count(const AnnotatedSentence& s) {
  int conjuncts = 0;
  for (int i = 1; i <= s.size(); ++i)
    if (s.relation(i) == Relation::conjunct) ++conjuncts;
  return std::max(finite_verb_count(s), conjuncts + 1);
}

// ---------------------------------------------------------------------------
// IncompSent
// ---------------------------------------------------------------------------

inline std::vector<ThemeDetection> detect_incomplete(const AnnotatedSentence& s) {
  std::vector<std::string> cues;
  std::vector<int> indices;
  if (s.empty()) return {{Theme::IncompSent, {}, Rational{1}, "empty sentence", std::nullopt}};

  for (const auto& issue : validate_structure(s))
    if (issue.kind == StructuralIssue::Kind::missing_root) cues.emplace_back("no dependency root");

  // At most one leading parenthesis, quotation mark or dash may precede the
  // capital letter or digit.
  int start = 1;
  if (!utf8::has_alnum(s.token(1).form)) start = 2;
  if (start > s.size()) {
    cues.emplace_back("no sentence-initial letter or digit");
  } else {
    const char32_t c = utf8::first_alnum(s.token(start).form);
    if (c == 0) {
      cues.emplace_back("more than one leading delimiter");
    } else if (!utf8::is_upper(c) && !utf8::is_digit(c)) {
      cues.emplace_back("lowercase sentence start");
      indices.push_back(start);
    }
  }

  if (s.category(s.size()) != Category::major_delimiter) cues.emplace_back("no final major delimiter");

  if (cues.empty()) return {};
  std::string rationale;
  for (const auto& c : cues) rationale += (rationale.empty() ? "" : "; ") + c;
  return {{Theme::IncompSent, indices, Rational{1}, rationale, std::nullopt}};
}

// ---------------------------------------------------------------------------
// ImpAnaphora
// ---------------------------------------------------------------------------

inline std::vector<ThemeDetection> detect_implicit_anaphora(const AnnotatedSentence& s) {
  bool finite = false;
  bool subject = false;
  std::vector<int> lone_modals;
  for (int i = 1; i <= s.size(); ++i) {
    if (is_effective_finite(s, i)) finite = true;
    else if (s.view(i).modal && is_finite(s.view(i).feats.verb_form)) lone_modals.push_back(i);
    const Relation r = s.relation(i);
    if (r == Relation::subject || r == Relation::logical_subject || r == Relation::expletive) subject = true;
  }
  if (!finite) return {{Theme::ImpAnaphora, lone_modals, Rational{1}, "no finite verb", std::nullopt}};
  if (subject) return {};

  int main_verb = root_token(s);
  if (main_verb == 0 || s.category(main_verb) != Category::verb) {
    main_verb = 0;
    for (int i = 1; i <= s.size() && main_verb == 0; ++i)
      if (is_effective_finite(s, i)) main_verb = i;
  }
  if (main_verb != 0 && s.view(main_verb).feats.verb_form == VerbForm::imperative) return {};
  std::vector<int> at;
  if (main_verb != 0) at.push_back(main_verb);
  return {{Theme::ImpAnaphora, at, Rational{1}, "no subject for non-imperative main verb", std::nullopt}};
}

// ---------------------------------------------------------------------------
// PNAnaphora
// ---------------------------------------------------------------------------

/// Nouns and proper names left of the pronoun agreeing in gender and number
/// (unspecified agrees with anything), plus one for `det` when a verb-headed
/// infinitive marker precedes it.
inline int count_antecedent_candidates(const AnnotatedSentence& s, int pronoun_index, const LexiconSet& lex) {
  if (pronoun_index < 1 || pronoun_index > s.size())
    throw UsageError("pronoun index " + std::to_string(pronoun_index) + " out of range");
  if (!lex.is_anaphoric_pronoun(s.key(pronoun_index)))
    throw UsageError("token " + std::to_string(pronoun_index) + " ('" + s.token(pronoun_index).form +
                     "') is not an anaphoric pronoun");
  const MorphFeatures& pf = s.view(pronoun_index).feats;
  auto agrees = [](auto a, auto b) { return a == decltype(a){} || b == decltype(b){} || a == b; };
  int count = 0;
  for (int j = 1; j < pronoun_index; ++j) {
    const Category c = s.category(j);
    if (c != Category::noun && c != Category::proper_noun) continue;
    const MorphFeatures& nf = s.view(j).feats;
    if (agrees(pf.gender, nf.gender) && agrees(pf.number, nf.number)) ++count;
  }
  if (s.key(pronoun_index) == "det") {
    for (int j = 1; j < pronoun_index; ++j) {
      if (s.category(j) != Category::infinitive_marker) continue;
      const int h = s.head(j);
      if (h != 0 && s.category(h) == Category::verb) {
        ++count;
        break;
      }
    }
  }
  return count;
}

namespace detector_detail {

/// Nearest verb dominating `i`, or 0.
inline int governing_verb(const AnnotatedSentence& s, int i) {
  int cur = s.head(i);
  for (int steps = 0; cur != 0 && steps <= s.size(); ++steps, cur = s.head(cur))
    if (s.category(cur) == Category::verb) return cur;
  return 0;
}

/// True if `verb` or a verb in its verb chain (verb dependents, transitively) is a weather verb.
inline bool weather_clause(const AnnotatedSentence& s, int verb, const LexiconSet& lex) {
  std::vector<int> stack{verb};
  std::vector<char> seen(static_cast<std::size_t>(s.size()) + 1, 0);
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (seen[static_cast<std::size_t>(v)]) continue;
    seen[static_cast<std::size_t>(v)] = 1;
    if (lex.weather_verbs.count(s.key(v))) return true;
    for (int c : s.children(v))
      if (s.category(c) == Category::verb) stack.push_back(c);
  }
  return false;
}

inline bool followed_by_relative_clause(const AnnotatedSentence& s, int i) {
  if (i < s.size() && s.key(i + 1) == "som") return true;
  for (int j : s.descendants(i)) {
    if (j <= i || s.key(j) != "som") continue;
    const Relation r = s.relation(j);
    if (r == Relation::relative_clause_marker || r == Relation::subordinator) return true;
    const int h = s.head(j);
    if (h != 0 && s.relation(h) == Relation::relative_clause_marker) return true;
  }
  return false;
}

}  // namespace detector_detail

inline std::vector<ThemeDetection> detect_pronominal_anaphora(const AnnotatedSentence& s, const LexiconSet& lex) {
  using namespace detector_detail;
  std::vector<ThemeDetection> out;
  for (int i = 1; i <= s.size(); ++i) {
    if (s.category(i) != Category::pronoun || s.relation(i) == Relation::determiner_dep) continue;
    const std::string& lemma = s.key(i);
    if (!lex.is_anaphoric_pronoun(lemma)) continue;
    if (s.relation(i) == Relation::expletive) continue;
    if (lemma == "det") {
      const int v = governing_verb(s, i);
      if (v != 0 && weather_clause(s, v, lex)) continue;
    }
    if (followed_by_relative_clause(s, i)) continue;
    const int candidates = count_antecedent_candidates(s, i, lex);
    ThemeDetection d{Theme::PNAnaphora, {i}, candidates > 0 ? Rational{1, 2} : Rational{1},
                     "pronoun '" + s.token(i).form + "' with " + std::to_string(candidates) + " antecedent candidate(s)",
                     candidates};
    out.push_back(std::move(d));
  }
  return out;
}

// ---------------------------------------------------------------------------
// AdvAnaphora1
// ---------------------------------------------------------------------------

inline std::vector<ThemeDetection> detect_adverbial_anaphora(const AnnotatedSentence& s, const LexiconSet& lex) {
  std::vector<ThemeDetection> out;
  for (int i = 1; i <= s.size(); ++i) {
    if (s.category(i) != Category::adverb) continue;
    const auto it = lex.anaphoric_adverbs.find(s.key(i));
    if (it == lex.anaphoric_adverbs.end()) continue;
    const Relation same_type =
        it->second == AdverbType::locative ? Relation::locative_adverbial : Relation::temporal_adverbial;

    // (i) heads an adverbial of the same type that specifies it ("där på landet")
    bool specified = false;
    for (int c : s.children(i)) {
      const Relation r = s.relation(c);
      if (r == same_type || r == Relation::adverbial) specified = true;
    }
    if (specified) continue;

    // (ii) part of a demonstrative with a determiner ("det där huset")
    const bool with_determiner =
        s.relation(i) == Relation::determiner_dep ||
        (i > 1 && (s.category(i - 1) == Category::determiner || s.relation(i - 1) == Relation::determiner_dep));
    if (with_determiner) continue;

    out.push_back({Theme::AdvAnaphora1, {i}, Rational{1},
                   std::string(to_string(it->second)) + " adverb '" + s.token(i).form + "'", std::nullopt});
  }
  return out;
}

// ---------------------------------------------------------------------------
// AdvAnaphora2
// ---------------------------------------------------------------------------

inline std::vector<ThemeDetection> detect_discourse_connective(const AnnotatedSentence& s) {
  std::vector<ThemeDetection> out;
  bool coordinated = false;
  bool counted = false;
  for (int i = 1; i <= s.size(); ++i) {
    if (s.relation(i) != Relation::conjunctional_adverbial) continue;
    if (!counted) {
      coordinated = coordinate_unit_count(s) >= 2;
      counted = true;
    }
    if (coordinated) continue;
    auto connective = [&](int j) {
      const Category c = s.category(j);
      return c == Category::conjunction || c == Category::subjunction;
    };
    const auto sib = s.siblings(i);
    const auto aunts = s.aunts(i);
    if (std::any_of(sib.begin(), sib.end(), connective) || std::any_of(aunts.begin(), aunts.end(), connective))
      continue;
    out.push_back({Theme::AdvAnaphora2, {i}, Rational{1},
                   "conjunctional adverbial '" + s.token(i).form + "' without coordination", std::nullopt});
  }
  return out;
}

// ---------------------------------------------------------------------------
// StructConn
// ---------------------------------------------------------------------------

namespace detector_detail {

inline bool completes_pair(const AnnotatedSentence& s, int i, const LexiconSet& lex) {
  const std::string& k = s.key(i);
  for (const auto& [first, second] : lex.paired_conjunctions) {
    if (k == first)
      for (int j = i + 1; j <= s.size(); ++j)
        if (s.key(j) == second) return true;
    if (k == second)
      for (int j = 1; j < i; ++j)
        if (s.key(j) == first) return true;
  }
  return false;
}

}  // namespace detector_detail

inline std::vector<ThemeDetection> detect_structural_connective(const AnnotatedSentence& s, const LexiconSet& lex) {
  std::vector<int> indices;
  std::string rationale;
  const int root = root_token(s);
  if (root != 0 && s.category(root) == Category::conjunction && !detector_detail::completes_pair(s, root, lex)) {
    indices.push_back(root);
    rationale = "conjunction '" + s.token(root).form + "' is the dependency root";
  }
  const int first = first_content_token(s);
  if (first != 0 && s.category(first) == Category::conjunction && coordinate_unit_count(s) < 2) {
    if (std::find(indices.begin(), indices.end(), first) == indices.end()) indices.push_back(first);
    rationale += (rationale.empty() ? "" : "; ");
    rationale += "sentence-initial conjunction '" + s.token(first).form + "' with a single clause";
  }
  if (indices.empty()) return {};
  std::sort(indices.begin(), indices.end());
  return {{Theme::StructConn, indices, Rational{1}, rationale, std::nullopt}};
}

// ---------------------------------------------------------------------------
// CEQAnswer
// ---------------------------------------------------------------------------

inline std::vector<ThemeDetection> detect_ceq_answer(const AnnotatedSentence& s, const LexiconSet& lex) {
  if (s.empty()) return {};
  const bool leading_delim = s.category(1) == Category::minor_delimiter;
  const int i = leading_delim ? 2 : 1;
  if (i > s.size()) return {};
  if (s.category(i) == Category::interjection && lex.yes_no_interjections.count(s.key(i)))
    return {{Theme::CEQAnswer, {i}, Rational{1}, "sentence-initial yes/no interjection '" + s.token(i).form + "'",
             std::nullopt}};
  if (leading_delim && s.category(i) == Category::adverb && i < s.size() &&
      s.category(i + 1) == Category::minor_delimiter)
    return {{Theme::CEQAnswer, {i}, Rational{1}, "adverb '" + s.token(i).form + "' between minor delimiters",
             std::nullopt}};
  return {};
}

// ---------------------------------------------------------------------------
// Configuration and aggregation
// ---------------------------------------------------------------------------

struct DetectorConfig {
  std::array<bool, kThemeCount> enabled{true, true, true, true, true, true, true, false};
  std::array<Rational, kThemeCount> weight{Rational{1}, Rational{1}, Rational{1}, Rational{1},
                                           Rational{1}, Rational{1}, Rational{1}, Rational{1}};
  /// Weight of a PNAnaphora detection whose pronoun has antecedent candidates.
  Rational pn_with_antecedent_weight{1, 2};
  std::string profile;      // empty = caller's default
  std::string lexicon_dir;  // empty = caller's default

  bool is_enabled(Theme t) const { return enabled[static_cast<std::size_t>(t)]; }

  void set_enabled(Theme t, bool on) {
    if (t == Theme::CDPC && on)
      throw ConfigError("theme CDPC is reserved and not implemented; it cannot be enabled");
    enabled[static_cast<std::size_t>(t)] = on;
  }

  static DetectorConfig all_disabled() {
    DetectorConfig c;
    c.enabled.fill(false);
    return c;
  }
};

/// Reads `key = value` lines; see docs/formats.md for the keys.
inline DetectorConfig parse_detector_config(std::istream& in, const std::string& filename = "<config>") {
  DetectorConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string{};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line.substr(0, line.find('#')));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(filename + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    auto fail = [&](const std::string& msg) {
      throw ConfigError(filename + ":" + std::to_string(lineno) + ": " + msg);
    };
    auto theme_of = [&](const std::string& name) {
      const auto th = parse_theme(name);
      if (!th) fail("unknown theme '" + name + "'");
      return *th;
    };
    auto rational_of = [&](const std::string& v) {
      const auto r = Rational::parse(v);
      if (!r || *r < Rational{0}) fail("weight must be a non-negative number or fraction, got '" + v + "'");
      return *r;
    };
    if (key == "profile") {
      cfg.profile = value;
    } else if (key == "lexicons") {
      cfg.lexicon_dir = value;
    } else if (key.rfind("enable.", 0) == 0) {
      const Theme th = theme_of(key.substr(7));
      if (value != "true" && value != "false") fail("enable flags take true or false");
      try {
        cfg.set_enabled(th, value == "true");
      } catch (const ConfigError& e) {
        fail(e.what());
      }
    } else if (key == "weight.PNAnaphora.antecedent") {
      cfg.pn_with_antecedent_weight = rational_of(value);
    } else if (key.rfind("weight.", 0) == 0) {
      cfg.weight[static_cast<std::size_t>(theme_of(key.substr(7)))] = rational_of(value);
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  return cfg;
}

inline DetectorConfig load_detector_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read detector config " + path);
  return parse_detector_config(in, path);
}

/// Output of one detector, with default weights.
inline std::vector<ThemeDetection> run_detector(Theme t, const AnnotatedSentence& s, const LexiconSet& lex) {
  switch (t) {
    case Theme::IncompSent: return detect_incomplete(s);
    case Theme::ImpAnaphora: return detect_implicit_anaphora(s);
    case Theme::PNAnaphora: return detect_pronominal_anaphora(s, lex);
    case Theme::AdvAnaphora1: return detect_adverbial_anaphora(s, lex);
    case Theme::AdvAnaphora2: return detect_discourse_connective(s);
    case Theme::StructConn: return detect_structural_connective(s, lex);
    case Theme::CEQAnswer: return detect_ceq_answer(s, lex);
    case Theme::CDPC: break;
  }
  throw UsageError("no detector for theme " + std::string(to_string(t)));
}

/// Runs every enabled detector in theme order and scores the union.
inline Assessment detect_all(const AnnotatedSentence& s, const LexiconSet& lex, const DetectorConfig& config = {}) {
  std::vector<ThemeDetection> all;
  for (Theme t : kImplementedThemes) {
    if (!config.is_enabled(t)) continue;
    for (ThemeDetection& d : run_detector(t, s, lex)) {
      const bool reduced = d.theme == Theme::PNAnaphora && d.antecedent_count.value_or(0) > 0;
      d.weight = reduced ? config.pn_with_antecedent_weight : config.weight[static_cast<std::size_t>(t)];
      all.push_back(std::move(d));
    }
  }
  return make_assessment(s.id(), std::move(all));
}

}  // namespace ctxdep
