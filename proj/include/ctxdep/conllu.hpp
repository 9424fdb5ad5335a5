#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ctxdep/annotation.hpp"
#include "ctxdep/errors.hpp"

namespace ctxdep {

namespace conllu_detail {

inline bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cols;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

/// "# key = value" -> {key, value}; empty key when the comment is not of that shape.
inline std::pair<std::string_view, std::string_view> comment_pair(std::string_view line) {
  line.remove_prefix(1);
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) return {};
  return {trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
}

}  // namespace conllu_detail

/// Reads CoNLL-U text. Sentences without a `# sent_id` comment get the id
/// "s<N>" (1-based block number). `# corpus` / `# document` comments fill the
/// optional Source. Multiword ranges ("3-4") and empty nodes ("3.1") are skipped.
inline std::vector<Sentence> parse_conllu(std::istream& in) {
  using namespace conllu_detail;
  std::vector<Sentence> out;
  Sentence cur;
  bool in_block = false;
  std::size_t block_no = 0;
  std::size_t lineno = 0;

  auto finish = [&] {
    if (!in_block) return;
    in_block = false;
    if (cur.tokens.empty()) {  // comment-only block
      cur = Sentence{};
      return;
    }
    ++block_no;
    if (cur.id.empty()) cur.id = "s" + std::to_string(block_no);
    check_structure(cur);
    out.push_back(std::move(cur));
    cur = Sentence{};
  };

  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (lineno == 1 && line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (trim(line).empty()) {
      finish();
      continue;
    }
    in_block = true;
    if (line.front() == '#') {
      auto [key, value] = comment_pair(line);
      if (key == "sent_id") {
        cur.id = std::string(value);
      } else if (key == "corpus") {
        if (!cur.source) cur.source.emplace();
        cur.source->corpus = std::string(value);
      } else if (key == "document") {
        if (!cur.source) cur.source.emplace();
        cur.source->document = std::string(value);
      }
      continue;
    }

    const auto cols = split_tabs(line);
    if (cols.size() != 10)
      throw ParseError(lineno, "expected 10 tab-separated columns, found " + std::to_string(cols.size()));
    const std::string_view id = cols[0];
    if (id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos) continue;

    Token t;
    if (!parse_int(id, t.index) || t.index < 1) throw ParseError(lineno, "non-numeric token index '" + std::string(id) + "'");
    if (!parse_int(cols[6], t.head) || t.head < 0) throw ParseError(lineno, "non-numeric head '" + std::string(cols[6]) + "'");
    if (cols[1].empty()) throw ParseError(lineno, "empty form");
    t.form = std::string(cols[1]);
    t.lemma = std::string(cols[2]);
    t.upos = std::string(cols[3]);
    t.xpos = std::string(cols[4]);
    t.feats = std::string(cols[5]);
    t.deprel = std::string(cols[7]);
    t.deps = std::string(cols[8]);
    t.misc = std::string(cols[9]);
    cur.tokens.push_back(std::move(t));
  }
  if (in.bad()) throw IoError("read failure while parsing CoNLL-U");
  finish();
  return out;
}

inline std::vector<Sentence> parse_conllu(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_conllu(in);
}

/// Writes sentences so that parse_conllu reads back an equal model.
inline void write_conllu(std::ostream& os, const std::vector<Sentence>& sentences) {
  for (const Sentence& s : sentences) {
    os << "# sent_id = " << s.id << '\n';
    if (s.source) {
      os << "# corpus = " << s.source->corpus << '\n';
      os << "# document = " << s.source->document << '\n';
    }
    for (const Token& t : s.tokens) {
      os << t.index << '\t' << t.form << '\t' << t.lemma << '\t' << t.upos << '\t' << t.xpos << '\t' << t.feats
         << '\t' << t.head << '\t' << t.deprel << '\t' << t.deps << '\t' << t.misc << '\n';
    }
    os << '\n';
  }
}

}  // namespace ctxdep
