#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ctxdep/errors.hpp"
#include "ctxdep/utf8.hpp"

namespace ctxdep {

enum class AdverbType { temporal, locative };

inline std::string_view to_string(AdverbType t) { return t == AdverbType::temporal ? "temporal" : "locative"; }

/// Closed word lists consulted by the detectors. All entries are lowercase lemmas.
struct LexiconSet {
  std::set<std::string> weather_verbs;
  std::map<std::string, AdverbType> anaphoric_adverbs;
  std::set<std::pair<std::string, std::string>> paired_conjunctions;
  std::set<std::string> yes_no_interjections;
  std::set<std::string> demonstrative_pronouns;
  std::set<std::string> nonanaphoric_person_pronouns;
  /// Includes the demonstratives; never includes a non-anaphoric person pronoun.
  std::set<std::string> anaphoric_pronouns;

  bool is_anaphoric_pronoun(const std::string& lemma) const { return anaphoric_pronouns.count(lemma) > 0; }

  bool operator==(const LexiconSet&) const = default;
};

struct LexiconWarning {
  std::string file;
  std::string message;
};

struct LoadedLexicons {
  LexiconSet lexicons;
  std::vector<LexiconWarning> warnings;
};

namespace lexicon_files {
inline constexpr const char* weather_verbs = "weather_verbs.txt";
inline constexpr const char* anaphoric_adverbs = "anaphoric_adverbs.txt";
inline constexpr const char* paired_conjunctions = "paired_conjunctions.txt";
inline constexpr const char* yes_no_interjections = "yes_no_interjections.txt";
inline constexpr const char* demonstrative_pronouns = "demonstrative_pronouns.txt";
inline constexpr const char* nonanaphoric_person_pronouns = "nonanaphoric_person_pronouns.txt";
inline constexpr const char* anaphoric_pronouns = "anaphoric_pronouns.txt";
}  // namespace lexicon_files

namespace lexicon_detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Rows of a lexicon file: each row is its tab-separated fields, lowercased.
/// Returns false when the file does not exist.
inline bool read_rows(const std::filesystem::path& path, std::size_t arity,
                      std::vector<std::pair<std::size_t, std::vector<std::string>>>& rows) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return false;
  std::ifstream in(path);
  if (!in) throw IoError("cannot read lexicon file " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      const auto tab = t.find('\t', start);
      cols.push_back(utf8::to_lower(trim(t.substr(start, tab == std::string::npos ? std::string::npos : tab - start))));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    for (const auto& c : cols)
      if (c.empty()) throw FormatError(path.string(), lineno, "empty field");
    if (cols.size() != arity)
      throw FormatError(path.string(), lineno,
                        "expected " + std::to_string(arity) + " tab-separated field(s), found " + std::to_string(cols.size()));
    rows.emplace_back(lineno, std::move(cols));
  }
  if (in.bad()) throw IoError("read failure on " + path.string());
  return true;
}

}  // namespace lexicon_detail

/// Loads every documented file from `directory`. Missing files yield empty
/// lists and one warning each; a missing directory behaves like an empty one.
inline LoadedLexicons load_lexicon_set(const std::filesystem::path& directory) {
  using lexicon_detail::read_rows;
  LoadedLexicons out;
  LexiconSet& lex = out.lexicons;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;

  auto load = [&](const char* name, std::size_t arity) {
    rows.clear();
    const auto path = directory / name;
    if (!read_rows(path, arity, rows)) out.warnings.push_back({name, "missing lexicon file " + path.string()});
    return path.string();
  };

  load(lexicon_files::weather_verbs, 1);
  for (auto& [_, r] : rows) lex.weather_verbs.insert(r[0]);

  auto path = load(lexicon_files::anaphoric_adverbs, 2);
  for (auto& [line, r] : rows) {
    if (r[1] == "temporal") lex.anaphoric_adverbs[r[0]] = AdverbType::temporal;
    else if (r[1] == "locative") lex.anaphoric_adverbs[r[0]] = AdverbType::locative;
    else throw FormatError(path, line, "adverb type must be temporal or locative");
  }

  path = load(lexicon_files::paired_conjunctions, 2);
  for (auto& [line, r] : rows) {
    if (r[0] == r[1]) throw FormatError(path, line, "paired conjunction members must differ");
    lex.paired_conjunctions.emplace(r[0], r[1]);
  }

  load(lexicon_files::yes_no_interjections, 1);
  for (auto& [_, r] : rows) lex.yes_no_interjections.insert(r[0]);

  load(lexicon_files::demonstrative_pronouns, 1);
  for (auto& [_, r] : rows) lex.demonstrative_pronouns.insert(r[0]);

  load(lexicon_files::nonanaphoric_person_pronouns, 1);
  for (auto& [_, r] : rows) lex.nonanaphoric_person_pronouns.insert(r[0]);

  load(lexicon_files::anaphoric_pronouns, 1);
  for (auto& [_, r] : rows) lex.anaphoric_pronouns.insert(r[0]);
  lex.anaphoric_pronouns.insert(lex.demonstrative_pronouns.begin(), lex.demonstrative_pronouns.end());
  for (const auto& p : lex.nonanaphoric_person_pronouns) lex.anaphoric_pronouns.erase(p);

  return out;
}

}  // namespace ctxdep
