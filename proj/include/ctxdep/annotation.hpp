#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctxdep/errors.hpp"
#include "ctxdep/utf8.hpp"

namespace ctxdep {

// ---------------------------------------------------------------------------
// Abstract categories and relations. Detectors only ever see these; the raw
// corpus tags are translated by a TagsetProfile.
// ---------------------------------------------------------------------------

enum class Category {
  noun,
  proper_noun,
  pronoun,
  determiner,
  verb,
  adverb,
  conjunction,
  subjunction,
  interjection,
  infinitive_marker,
  major_delimiter,
  minor_delimiter,
  other,
};

enum class Relation {
  root,
  subject,
  logical_subject,
  expletive,
  object,
  conjunct,
  coordinator,
  subordinator,
  conjunctional_adverbial,
  adverbial,
  locative_adverbial,
  temporal_adverbial,
  relative_clause_marker,
  infinitive_marker_dep,
  determiner_dep,
  other,
};

inline constexpr std::array<std::string_view, 13> kCategoryNames = {
    "noun",         "proper_noun",       "pronoun",         "determiner",      "verb",
    "adverb",       "conjunction",       "subjunction",     "interjection",    "infinitive_marker",
    "major_delimiter", "minor_delimiter", "other",
};

inline constexpr std::array<std::string_view, 16> kRelationNames = {
    "root",      "subject",     "logical_subject", "expletive",
    "object",    "conjunct",    "coordinator",     "subordinator",
    "conjunctional_adverbial",  "adverbial",       "locative_adverbial",
    "temporal_adverbial",       "relative_clause_marker", "infinitive_marker_dep",
    "determiner_dep",           "other",
};

inline std::string_view to_string(Category c) { return kCategoryNames[static_cast<std::size_t>(c)]; }
inline std::string_view to_string(Relation r) { return kRelationNames[static_cast<std::size_t>(r)]; }

inline std::optional<Category> parse_category(std::string_view s) {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i)
    if (kCategoryNames[i] == s) return static_cast<Category>(i);
  return std::nullopt;
}

inline std::optional<Relation> parse_relation(std::string_view s) {
  for (std::size_t i = 0; i < kRelationNames.size(); ++i)
    if (kRelationNames[i] == s) return static_cast<Relation>(i);
  return std::nullopt;
}

inline bool is_delimiter(Category c) { return c == Category::major_delimiter || c == Category::minor_delimiter; }

inline bool is_adverbial(Relation r) {
  return r == Relation::adverbial || r == Relation::locative_adverbial || r == Relation::temporal_adverbial;
}

// ---------------------------------------------------------------------------
// Morphology
// ---------------------------------------------------------------------------

enum class Gender { unspecified, common, neuter };
enum class Number { unspecified, singular, plural };
enum class VerbForm { unspecified, finite_present, finite_past, imperative, infinitive, supine, participle };
enum class Definiteness { unspecified, definite, indefinite };

struct MorphFeatures {
  Gender gender = Gender::unspecified;
  Number number = Number::unspecified;
  VerbForm verb_form = VerbForm::unspecified;
  Definiteness definiteness = Definiteness::unspecified;

  bool operator==(const MorphFeatures&) const = default;
};

inline bool is_finite(VerbForm f) {
  return f == VerbForm::finite_present || f == VerbForm::finite_past || f == VerbForm::imperative;
}

// ---------------------------------------------------------------------------
// Raw sentence model (what CoNLL-U and concordance hits carry)
// ---------------------------------------------------------------------------

/// One basic token. All tag columns are kept verbatim so a sentence can be
/// written back out unchanged.
struct Token {
  int index = 0;  // 1-based
  std::string form;
  std::string lemma = "_";
  std::string upos = "_";
  std::string xpos = "_";
  std::string feats = "_";
  int head = 0;  // 0 = root
  std::string deprel = "_";
  std::string deps = "_";
  std::string misc = "_";

  bool operator==(const Token&) const = default;
};

struct Source {
  std::string corpus;
  std::string document;

  bool operator==(const Source&) const = default;
};

struct Sentence {
  std::string id;
  std::vector<Token> tokens;
  std::optional<Source> source;

  std::size_t size() const noexcept { return tokens.size(); }
  bool operator==(const Sentence&) const = default;
};

/// Throws StructureError unless indices are 1..n, heads are in range, no
/// token heads itself, and the head graph is acyclic.
inline void check_structure(const Sentence& s) {
  const int n = static_cast<int>(s.tokens.size());
  if (n == 0) throw StructureError(s.id, "sentence has no tokens");
  for (int i = 0; i < n; ++i) {
    const Token& t = s.tokens[static_cast<std::size_t>(i)];
    if (t.index != i + 1)
      throw StructureError(s.id, "token indices are not contiguous at position " + std::to_string(i + 1));
    if (t.form.empty()) throw StructureError(s.id, "token " + std::to_string(t.index) + " has an empty form");
    if (t.head < 0 || t.head > n)
      throw StructureError(s.id, "token " + std::to_string(t.index) + " has out-of-range head " + std::to_string(t.head));
    if (t.head == t.index) throw StructureError(s.id, "token " + std::to_string(t.index) + " is its own head");
  }
  // 0 = unvisited, 1 = on current path, 2 = known to reach root
  std::vector<char> state(static_cast<std::size_t>(n) + 1, 0);
  state[0] = 2;
  for (int start = 1; start <= n; ++start) {
    std::vector<int> path;
    int cur = start;
    while (state[static_cast<std::size_t>(cur)] == 0) {
      state[static_cast<std::size_t>(cur)] = 1;
      path.push_back(cur);
      cur = s.tokens[static_cast<std::size_t>(cur - 1)].head;
    }
    if (state[static_cast<std::size_t>(cur)] == 1)
      throw StructureError(s.id, "cyclic head graph through token " + std::to_string(cur));
    for (int p : path) state[static_cast<std::size_t>(p)] = 2;
  }
}

// ---------------------------------------------------------------------------
// Annotated sentence: raw tokens plus the profile's abstract view.
// ---------------------------------------------------------------------------

struct TokenView {
  Category category = Category::other;
  Relation relation = Relation::other;
  MorphFeatures feats;
  bool modal = false;
  std::string key;  // lowercased lemma, or lowercased form when the lemma is absent

  bool operator==(const TokenView&) const = default;
};

class AnnotatedSentence {
 public:
  AnnotatedSentence() = default;
  AnnotatedSentence(Sentence sentence, std::vector<TokenView> views)
      : sentence_(std::move(sentence)), views_(std::move(views)) {
    if (views_.size() != sentence_.tokens.size())
      throw UsageError("annotated view count does not match token count");
    children_.resize(views_.size() + 1);
    for (const Token& t : sentence_.tokens) {
      if (t.head >= 0 && static_cast<std::size_t>(t.head) <= views_.size())
        children_[static_cast<std::size_t>(t.head)].push_back(t.index);
    }
  }

  const Sentence& sentence() const noexcept { return sentence_; }
  const std::string& id() const noexcept { return sentence_.id; }
  int size() const noexcept { return static_cast<int>(sentence_.tokens.size()); }
  bool empty() const noexcept { return sentence_.tokens.empty(); }

  /// 1-based accessors.
  const Token& token(int index) const { return sentence_.tokens.at(static_cast<std::size_t>(index - 1)); }
  const TokenView& view(int index) const { return views_.at(static_cast<std::size_t>(index - 1)); }

  Category category(int index) const { return view(index).category; }
  Relation relation(int index) const { return view(index).relation; }
  const std::string& key(int index) const { return view(index).key; }
  int head(int index) const { return token(index).head; }

  /// Dependents of `index` in surface order. `children(0)` lists root tokens.
  const std::vector<int>& children(int index) const { return children_.at(static_cast<std::size_t>(index)); }

  /// Tokens sharing this token's head, excluding itself.
  std::vector<int> siblings(int index) const {
    std::vector<int> out;
    for (int c : children(head(index)))
      if (c != index) out.push_back(c);
    return out;
  }

  /// Siblings of this token's head. Empty when the head is the root node.
  std::vector<int> aunts(int index) const {
    const int h = head(index);
    if (h == 0) return {};
    return siblings(h);
  }

  /// All tokens dominated by `index`, excluding `index`, in surface order.
  std::vector<int> descendants(int index) const {
    std::vector<int> out;
    std::vector<char> seen(static_cast<std::size_t>(size()) + 1, 0);
    seen[static_cast<std::size_t>(index)] = 1;
    std::vector<int> stack(children(index).rbegin(), children(index).rend());
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      if (seen[static_cast<std::size_t>(cur)]) continue;  // unchecked cyclic input
      seen[static_cast<std::size_t>(cur)] = 1;
      out.push_back(cur);
      for (auto it = children(cur).rbegin(); it != children(cur).rend(); ++it) stack.push_back(*it);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Number of edges from `index` to the artificial root node.
  int depth(int index) const {
    int d = 0;
    for (int cur = index; cur != 0 && d <= size(); cur = head(cur)) ++d;
    return d;
  }

  bool operator==(const AnnotatedSentence& o) const { return sentence_ == o.sentence_ && views_ == o.views_; }

 private:
  Sentence sentence_;
  std::vector<TokenView> views_;
  std::vector<std::vector<int>> children_;
};

/// Lowercased lemma, falling back to the form for "_" or empty lemmas.
inline std::string lookup_key(const Token& t) {
  if (t.lemma.empty() || t.lemma == "_") return utf8::to_lower(t.form);
  return utf8::to_lower(t.lemma);
}

// ---------------------------------------------------------------------------
// Structural validation
// ---------------------------------------------------------------------------

struct StructuralIssue {
  enum class Kind { missing_root, multiple_roots };
  Kind kind;
  int count = 0;  // number of roots for multiple_roots

  bool operator==(const StructuralIssue&) const = default;
};

/// Root tokens are those attached to the artificial root (head 0). Operates
/// on unchecked input too, so it never throws.
inline std::vector<StructuralIssue> validate_structure(const AnnotatedSentence& s) {
  int roots = 0;
  for (int i = 1; i <= s.size(); ++i)
    if (s.head(i) == 0) ++roots;
  if (roots == 0) return {{StructuralIssue::Kind::missing_root, 0}};
  if (roots > 1) return {{StructuralIssue::Kind::multiple_roots, roots}};
  return {};
}

}  // namespace ctxdep
