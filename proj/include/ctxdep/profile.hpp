#pragma once

#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ctxdep/annotation.hpp"
#include "ctxdep/errors.hpp"

namespace ctxdep {

/// Which CoNLL-U column carries the tag a profile maps.
enum class PosColumn { upos, xpos };

/// One feature rule: a raw feature item ("UTR", "Gender=Com") sets one field.
struct FeatureRule {
  std::string raw;
  enum class Field { gender, number, verb_form, definiteness } field;
  int value;  // underlying value of the corresponding enum
};

/// Categories and relations the detectors query. A profile must reach each
/// one from some raw tag, or explicitly waive it with `unsupported`.
inline const std::vector<Category>& required_categories() {
  static const std::vector<Category> v = {
      Category::noun,         Category::proper_noun,       Category::pronoun,         Category::determiner,
      Category::verb,         Category::adverb,            Category::conjunction,     Category::subjunction,
      Category::interjection, Category::infinitive_marker, Category::major_delimiter, Category::minor_delimiter,
  };
  return v;
}

inline const std::vector<Relation>& required_relations() {
  static const std::vector<Relation> v = {
      Relation::subject,   Relation::logical_subject,        Relation::expletive, Relation::conjunct,
      Relation::subordinator, Relation::conjunctional_adverbial, Relation::adverbial,
  };
  return v;
}

/// Counts raw tags a profile could not map. Accumulates across sentences.
struct CoverageReport {
  std::size_t tokens = 0;
  std::map<std::string, std::size_t> unknown_pos;
  std::map<std::string, std::size_t> unknown_deprel;

  std::size_t unknown_pos_total() const {
    std::size_t n = 0;
    for (const auto& [_, c] : unknown_pos) n += c;
    return n;
  }
  std::size_t unknown_deprel_total() const {
    std::size_t n = 0;
    for (const auto& [_, c] : unknown_deprel) n += c;
    return n;
  }
};

class TagsetProfile {
 public:
  std::string name;
  PosColumn pos_column = PosColumn::xpos;
  std::unordered_map<std::string, Category> category_of_pos;
  /// Raw POS tags whose delimiter kind is decided by the token's surface form.
  std::unordered_set<std::string> surface_delimiters;
  std::unordered_map<std::string, Relation> relation_of_deprel;
  std::vector<FeatureRule> feature_rules;  // applied in file order, later rules win
  std::unordered_set<std::string> modal_lemmas;
  std::set<std::string> waived;  // abstract names declared unsupported

  const std::string& raw_pos(const Token& t) const { return pos_column == PosColumn::upos ? t.upos : t.xpos; }

  /// Names of required categories/relations that no raw tag reaches and that
  /// are not waived. Empty means the profile is complete.
  std::vector<std::string> missing() const {
    std::set<Category> cats;
    for (const auto& [_, c] : category_of_pos) cats.insert(c);
    if (!surface_delimiters.empty()) {
      cats.insert(Category::major_delimiter);
      cats.insert(Category::minor_delimiter);
    }
    std::set<Relation> rels;
    for (const auto& [_, r] : relation_of_deprel) rels.insert(r);
    std::vector<std::string> out;
    for (Category c : required_categories())
      if (!cats.count(c) && !waived.count(std::string(to_string(c)))) out.push_back("category " + std::string(to_string(c)));
    for (Relation r : required_relations())
      if (!rels.count(r) && !waived.count(std::string(to_string(r)))) out.push_back("relation " + std::string(to_string(r)));
    return out;
  }
};

namespace profile_detail {

inline std::vector<std::string> fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::optional<FeatureRule> parse_feature_assignment(const std::string& raw, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) return std::nullopt;
  const auto field = assignment.substr(0, eq);
  const auto value = assignment.substr(eq + 1);
  using F = FeatureRule::Field;
  auto pick = [&](F f, std::initializer_list<std::pair<std::string_view, int>> values) -> std::optional<FeatureRule> {
    for (const auto& [name, v] : values)
      if (name == value) return FeatureRule{raw, f, v};
    return std::nullopt;
  };
  if (field == "gender")
    return pick(F::gender, {{"common", static_cast<int>(Gender::common)}, {"neuter", static_cast<int>(Gender::neuter)}});
  if (field == "number")
    return pick(F::number, {{"singular", static_cast<int>(Number::singular)}, {"plural", static_cast<int>(Number::plural)}});
  if (field == "verb_form")
    return pick(F::verb_form, {{"finite_present", static_cast<int>(VerbForm::finite_present)},
                               {"finite_past", static_cast<int>(VerbForm::finite_past)},
                               {"imperative", static_cast<int>(VerbForm::imperative)},
                               {"infinitive", static_cast<int>(VerbForm::infinitive)},
                               {"supine", static_cast<int>(VerbForm::supine)},
                               {"participle", static_cast<int>(VerbForm::participle)}});
  if (field == "definiteness")
    return pick(F::definiteness, {{"definite", static_cast<int>(Definiteness::definite)},
                                  {"indefinite", static_cast<int>(Definiteness::indefinite)}});
  return std::nullopt;
}

}  // namespace profile_detail

/// Parses the profile format documented in docs/formats.md and rejects
/// incomplete profiles with a ConfigError listing what is unreachable.
inline TagsetProfile parse_profile(std::istream& in, const std::string& filename = "<profile>") {
  using profile_detail::fields;
  TagsetProfile p;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const auto hash = raw.find('#');
    const auto f = fields(std::string_view(raw).substr(0, hash));
    if (f.empty()) continue;
    const std::string& key = f[0];
    auto need = [&](std::size_t n) {
      if (f.size() != n)
        throw FormatError(filename, lineno, "'" + key + "' expects " + std::to_string(n - 1) + " value(s)");
    };
    if (key == "name") {
      need(2);
      p.name = f[1];
    } else if (key == "pos-column") {
      need(2);
      if (f[1] == "upos") p.pos_column = PosColumn::upos;
      else if (f[1] == "xpos") p.pos_column = PosColumn::xpos;
      else throw FormatError(filename, lineno, "pos-column must be upos or xpos");
    } else if (key == "pos") {
      need(3);
      if (f[2] == "delimiter") {
        p.surface_delimiters.insert(f[1]);
        p.category_of_pos.erase(f[1]);
        continue;
      }
      const auto c = parse_category(f[2]);
      if (!c) throw FormatError(filename, lineno, "unknown category '" + f[2] + "'");
      p.surface_delimiters.erase(f[1]);
      p.category_of_pos[f[1]] = *c;
    } else if (key == "deprel") {
      need(3);
      const auto r = parse_relation(f[2]);
      if (!r) throw FormatError(filename, lineno, "unknown relation '" + f[2] + "'");
      p.relation_of_deprel[f[1]] = *r;
    } else if (key == "feat") {
      need(3);
      auto rule = profile_detail::parse_feature_assignment(f[1], f[2]);
      if (!rule) throw FormatError(filename, lineno, "bad feature assignment '" + f[2] + "'");
      p.feature_rules.push_back(*rule);
    } else if (key == "modal") {
      need(2);
      p.modal_lemmas.insert(utf8::to_lower(f[1]));
    } else if (key == "unsupported") {
      need(2);
      if (!parse_category(f[1]) && !parse_relation(f[1]))
        throw FormatError(filename, lineno, "unknown category or relation '" + f[1] + "'");
      p.waived.insert(f[1]);
    } else {
      throw FormatError(filename, lineno, "unknown key '" + key + "'");
    }
  }
  if (p.name.empty()) throw FormatError(filename, lineno, "profile has no name");
  if (const auto miss = p.missing(); !miss.empty()) {
    std::string report = "profile '" + p.name + "' is incomplete; unreachable:";
    for (const auto& m : miss) report += " " + m + ";";
    report.pop_back();
    throw ConfigError(report);
  }
  return p;
}

inline TagsetProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read profile " + path);
  return parse_profile(in, path);
}

namespace profile_detail {

inline bool is_major_surface(std::string_view form) {
  if (form.empty()) return false;
  for (char c : form)
    if (c != '.' && c != '!' && c != '?') return false;
  return true;
}

inline MorphFeatures decode_features(const TagsetProfile& p, std::string_view raw) {
  std::unordered_set<std::string_view> items;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= raw.size(); ++i) {
    if (i == raw.size() || raw[i] == '|' || raw[i] == '.') {
      if (i > start) items.insert(raw.substr(start, i - start));
      start = i + 1;
    }
  }
  MorphFeatures m;
  for (const FeatureRule& r : p.feature_rules) {
    if (!items.count(r.raw)) continue;
    switch (r.field) {
      case FeatureRule::Field::gender: m.gender = static_cast<Gender>(r.value); break;
      case FeatureRule::Field::number: m.number = static_cast<Number>(r.value); break;
      case FeatureRule::Field::verb_form: m.verb_form = static_cast<VerbForm>(r.value); break;
      case FeatureRule::Field::definiteness: m.definiteness = static_cast<Definiteness>(r.value); break;
    }
  }
  return m;
}

}  // namespace profile_detail

/// Maps every token to one abstract category, relation and feature bundle.
/// Unknown tags degrade to `other` and are tallied in `coverage`.
inline AnnotatedSentence apply_profile(const Sentence& s, const TagsetProfile& p, CoverageReport& coverage) {
  std::vector<TokenView> views;
  views.reserve(s.tokens.size());
  for (const Token& t : s.tokens) {
    TokenView v;
    const std::string& pos = p.raw_pos(t);
    if (auto it = p.category_of_pos.find(pos); it != p.category_of_pos.end()) {
      v.category = it->second;
    } else if (p.surface_delimiters.count(pos)) {
      v.category = profile_detail::is_major_surface(t.form) ? Category::major_delimiter : Category::minor_delimiter;
    } else {
      ++coverage.unknown_pos[pos];
    }
    if (auto it = p.relation_of_deprel.find(t.deprel); it != p.relation_of_deprel.end()) {
      v.relation = it->second;
    } else {
      ++coverage.unknown_deprel[t.deprel];
    }
    v.feats = profile_detail::decode_features(p, t.feats);
    if (v.category != Category::verb) v.feats.verb_form = VerbForm::unspecified;
    v.key = lookup_key(t);
    v.modal = v.category == Category::verb && p.modal_lemmas.count(v.key) > 0;
    views.push_back(std::move(v));
    ++coverage.tokens;
  }
  return AnnotatedSentence(s, std::move(views));
}

inline AnnotatedSentence apply_profile(const Sentence& s, const TagsetProfile& p) {
  CoverageReport ignored;
  return apply_profile(s, p, ignored);
}

}  // namespace ctxdep
