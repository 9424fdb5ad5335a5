#pragma once

#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "ctxdep/ctxdep.hpp"

namespace testsupport {

inline std::string fixture(const std::string& name) { return std::string(CTXDEP_FIXTURES) + "/" + name; }
inline std::string data_dir() { return std::string(CTXDEP_DEFAULT_DATA_DIR); }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::vector<ctxdep::Sentence> load_fixture(const std::string& name) {
  std::ifstream in(fixture(name));
  return ctxdep::parse_conllu(in);
}

inline const ctxdep::TagsetProfile& suc() {
  static const ctxdep::TagsetProfile p = ctxdep::load_profile(data_dir() + "/profiles/suc-mamba.profile");
  return p;
}

inline const ctxdep::TagsetProfile& ud() {
  static const ctxdep::TagsetProfile p = ctxdep::load_profile(data_dir() + "/profiles/ud.profile");
  return p;
}

inline const ctxdep::LexiconSet& lex() {
  static const ctxdep::LexiconSet l = ctxdep::load_lexicon_set(data_dir() + "/lexicons/sv").lexicons;
  return l;
}

inline ctxdep::AnnotatedSentence annotate(const ctxdep::Sentence& s) { return ctxdep::apply_profile(s, suc()); }

inline const ctxdep::Sentence& by_id(const std::vector<ctxdep::Sentence>& all, const std::string& id) {
  for (const auto& s : all)
    if (s.id == id) return s;
  throw std::out_of_range("no fixture sentence " + id);
}

/// Builds SUC/MAMBA-tagged sentences token by token.
class Builder {
 public:
  explicit Builder(std::string id = "b") { s_.id = std::move(id); }

  Builder& tok(std::string form, std::string lemma, std::string pos, std::string feats, int head, std::string rel) {
    ctxdep::Token t;
    t.index = static_cast<int>(s_.tokens.size()) + 1;
    t.form = std::move(form);
    t.lemma = std::move(lemma);
    t.xpos = std::move(pos);
    t.feats = feats.empty() ? "_" : std::move(feats);
    t.head = head;
    t.deprel = std::move(rel);
    s_.tokens.push_back(std::move(t));
    return *this;
  }

  ctxdep::Sentence sentence() const { return s_; }
  ctxdep::AnnotatedSentence annotated() const { return annotate(s_); }

 private:
  ctxdep::Sentence s_;
};

inline std::vector<ctxdep::Theme> themes_of(const std::vector<ctxdep::ThemeDetection>& ds) {
  std::vector<ctxdep::Theme> out;
  for (const auto& d : ds) out.push_back(d.theme);
  return out;
}

/// Serves canned bodies keyed by the request's `start` parameter.
class MockTransport : public ctxdep::Transport {
 public:
  std::map<std::string, ctxdep::HttpResponse> by_start;
  ctxdep::HttpResponse fallback{404, "{}"};

  ctxdep::HttpResponse get(const ctxdep::RequestDescriptor& r) override {
    std::string start;
    for (const auto& [k, v] : r.params)
      if (k == "start") start = v;
    std::lock_guard<std::mutex> lock(mu_);
    requests.push_back(r);
    auto it = by_start.find(start);
    return it == by_start.end() ? fallback : it->second;
  }

  std::vector<ctxdep::RequestDescriptor> requests;

 private:
  std::mutex mu_;
};

}  // namespace testsupport
