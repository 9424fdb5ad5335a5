#pragma once

// Batch front end: ingestion -> detection -> filter/rank/eval -> JSONL/TSV.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"  // nlohmann/json, vendored

#include "ctxdep/assessment.hpp"
#include "ctxdep/conllu.hpp"
#include "ctxdep/detectors.hpp"
#include "ctxdep/eval.hpp"
#include "ctxdep/korp.hpp"
#include "ctxdep/lexicons.hpp"
#include "ctxdep/profile.hpp"

#ifndef CTXDEP_DEFAULT_DATA_DIR
#define CTXDEP_DEFAULT_DATA_DIR "data"
#endif

namespace ctxdep {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kEndpointEnv = "CTXDEP_ENDPOINT";
inline constexpr const char* kDataDirEnv = "CTXDEP_DATA_DIR";

enum class Mode { assess, filter, rank, eval, fetch };
enum class OutputFormat { jsonl, tsv };

inline std::optional<Mode> parse_mode(std::string_view s) {
  if (s == "assess") return Mode::assess;
  if (s == "filter") return Mode::filter;
  if (s == "rank") return Mode::rank;
  if (s == "eval") return Mode::eval;
  if (s == "fetch") return Mode::fetch;
  return std::nullopt;
}

struct RunConfig {
  Mode mode = Mode::assess;
  std::string input;        // CoNLL-U path, "-" for stdin; endpoint URL in fetch mode
  std::string profile;      // name or path; empty = config file value or suc-mamba
  std::string lexicon_dir;  // empty = config file value or bundled sv lists
  std::string config_path;
  std::string gold_path;
  std::string output;  // empty or "-" = stdout
  OutputFormat format = OutputFormat::jsonl;
  bool explain = false;
  std::size_t jobs = 1;  // 0 = hardware concurrency

  // fetch mode
  std::string query;
  std::vector<std::string> corpora;
  std::size_t page_size = 100;
  std::size_t max_hits = 1000;
  std::string api_key;
  std::string save_conllu;

  std::string data_dir;  // empty = $CTXDEP_DATA_DIR or the build-time default

  /// Throws ConfigError when a mode-specific field is missing.
  void validate() const {
    if (mode == Mode::fetch) {
      if (input.empty() && !std::getenv(kEndpointEnv))
        throw ConfigError("fetch mode requires an endpoint (--input or $" + std::string(kEndpointEnv) + ")");
      if (corpora.empty()) throw ConfigError("fetch mode requires --corpora");
      if (query.empty()) throw ConfigError("fetch mode requires --query");
    } else if (input.empty()) {
      throw ConfigError("--input is required");
    }
    if (mode == Mode::eval && gold_path.empty()) throw ConfigError("eval mode requires --gold");
    if (jobs > 1024) throw ConfigError("--jobs must be at most 1024");
  }
};

/// Everything `run` needs that comes from configuration rather than input.
struct Resources {
  DetectorConfig detectors;
  TagsetProfile profile;
  LexiconSet lexicons;
  std::vector<LexiconWarning> warnings;
};

inline std::string data_directory(const RunConfig& rc) {
  if (!rc.data_dir.empty()) return rc.data_dir;
  if (const char* env = std::getenv(kDataDirEnv); env && *env) return env;
  return CTXDEP_DEFAULT_DATA_DIR;
}

/// Loads detector config, profile and lexicons. Flags override the config file.
inline Resources load_resources(const RunConfig& rc) {
  Resources r;
  if (!rc.config_path.empty()) r.detectors = load_detector_config(rc.config_path);
  const std::filesystem::path data = data_directory(rc);

  std::string profile = !rc.profile.empty() ? rc.profile : r.detectors.profile;
  if (profile.empty()) profile = "suc-mamba";
  std::error_code ec;
  if (std::filesystem::is_regular_file(profile, ec)) r.profile = load_profile(profile);
  else r.profile = load_profile((data / "profiles" / (profile + ".profile")).string());

  std::string lexdir = !rc.lexicon_dir.empty() ? rc.lexicon_dir : r.detectors.lexicon_dir;
  if (lexdir.empty()) lexdir = (data / "lexicons" / "sv").string();
  if (!std::filesystem::is_directory(lexdir, ec)) throw ConfigError("lexicon directory not found: " + lexdir);
  auto loaded = load_lexicon_set(lexdir);
  r.lexicons = std::move(loaded.lexicons);
  r.warnings = std::move(loaded.warnings);
  return r;
}

/// Profiles and assesses every sentence on `jobs` workers; results keep input order.
inline std::vector<Assessment> assess_all(const std::vector<Sentence>& sentences, const Resources& res,
                                          std::size_t jobs, CoverageReport* coverage = nullptr) {
  std::vector<Assessment> out(sentences.size());
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, std::max<std::size_t>(1, sentences.size()));
  std::vector<CoverageReport> partial(jobs);
  std::atomic<std::size_t> next{0};
  auto work = [&](std::size_t w) {
    for (std::size_t i = next++; i < sentences.size(); i = next++) {
      const AnnotatedSentence a = apply_profile(sentences[i], res.profile, partial[w]);
      out[i] = detect_all(a, res.lexicons, res.detectors);
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < jobs; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  if (coverage) {
    for (const auto& p : partial) {
      coverage->tokens += p.tokens;
      for (const auto& [k, v] : p.unknown_pos) coverage->unknown_pos[k] += v;
      for (const auto& [k, v] : p.unknown_deprel) coverage->unknown_deprel[k] += v;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization (field order is part of the output schema, see docs/formats.md)
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json assessment_record(const Assessment& a, bool explain) {
  nlohmann::ordered_json rec;
  rec["schema_version"] = kSchemaVersion;
  rec["id"] = a.sentence_id;
  rec["verdict"] = a.context_independent() ? "context_independent" : "context_dependent";
  rec["score"] = a.score.to_double();
  rec["score_exact"] = a.score.str();
  auto themes = nlohmann::ordered_json::array();
  for (Theme t : a.themes()) themes.push_back(std::string(to_string(t)));
  rec["themes"] = std::move(themes);
  auto dets = nlohmann::ordered_json::array();
  for (const ThemeDetection& d : a.detections) {
    nlohmann::ordered_json j;
    j["theme"] = std::string(to_string(d.theme));
    j["tokens"] = d.token_indices;
    j["weight"] = d.weight.to_double();
    if (explain) j["rationale"] = d.rationale;
    dets.push_back(std::move(j));
  }
  rec["detections"] = std::move(dets);
  return rec;
}

inline std::string assessment_tsv_header() { return "id\tverdict\tscore\tthemes\n"; }

inline std::string assessment_tsv_row(const Assessment& a, bool explain) {
  std::string themes;
  for (Theme t : a.themes()) themes += (themes.empty() ? "" : ",") + std::string(to_string(t));
  std::string row = a.sentence_id + "\t" + (a.context_independent() ? "context_independent" : "context_dependent") +
                    "\t" + a.score.str() + "\t" + (themes.empty() ? "-" : themes);
  if (explain) {
    std::string why;
    for (const auto& d : a.detections) why += (why.empty() ? "" : " | ") + d.rationale;
    row += "\t" + (why.empty() ? "-" : why);
  }
  return row + "\n";
}

inline void write_assessments(std::ostream& os, const std::vector<Assessment>& as, OutputFormat fmt, bool explain) {
  if (fmt == OutputFormat::tsv) {
    os << (explain ? "id\tverdict\tscore\tthemes\trationale\n" : assessment_tsv_header());
    for (const auto& a : as) os << assessment_tsv_row(a, explain);
    return;
  }
  for (const auto& a : as) os << assessment_record(a, explain).dump() << '\n';
}

namespace app_detail {

inline nlohmann::ordered_json opt(const std::optional<Rational>& r) {
  return r ? nlohmann::ordered_json(r->to_double()) : nlohmann::ordered_json(nullptr);
}

inline std::string fmt(const std::optional<Rational>& r, int digits = 4) {
  if (!r) return "-";
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << r->to_double();
  return os.str();
}

}  // namespace app_detail

inline nlohmann::ordered_json eval_record(const EvalReport& rep, const ThemeRates& rates) {
  using app_detail::opt;
  nlohmann::ordered_json rec;
  rec["schema_version"] = kSchemaVersion;
  rec["record"] = "eval";
  rec["sentences"] = rep.sentences;
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (const auto& [t, m] : rep.per_theme) {
    nlohmann::ordered_json j;
    j["tp"] = m.tp;
    j["fp"] = m.fp;
    j["fn"] = m.fn;
    j["precision"] = opt(m.precision);
    j["recall"] = opt(m.recall);
    j["f1"] = opt(m.f1);
    per[std::string(to_string(t))] = std::move(j);
  }
  rec["per_theme"] = std::move(per);
  auto avg = [&](const AveragedMetrics& a, bool with_counts) {
    nlohmann::ordered_json j;
    j["precision"] = opt(a.precision);
    j["recall"] = opt(a.recall);
    j["f1"] = opt(a.f1);
    if (with_counts) j["themes"] = {a.precision_themes, a.recall_themes, a.f1_themes};
    return j;
  };
  rec["macro"] = avg(rep.macro, true);
  rec["micro"] = avg(rep.micro, false);
  rec["multi_theme_rate"] = opt(rep.multi_theme_rate);
  nlohmann::ordered_json tr;
  for (const auto& [t, p] : rates.per_theme) tr[std::string(to_string(t))] = opt(p);
  tr["total"] = opt(rates.total);
  tr["multi_theme"] = opt(rates.multi_theme);
  rec["theme_rates_percent"] = std::move(tr);
  return rec;
}

/// Aligned human-readable table; with `tsv` the columns are tab separated.
inline std::string eval_table(const EvalReport& rep, const ThemeRates& rates, bool tsv) {
  using app_detail::fmt;
  std::ostringstream os;
  auto row = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (tsv) os << (i ? "\t" : "") << cells[i];
      else os << std::left << std::setw(i == 0 ? 14 : 10) << cells[i];
    }
    os << '\n';
  };
  row({"theme", "precision", "recall", "f1", "tp", "fp", "fn", "rate%"});
  for (const auto& [t, m] : rep.per_theme) {
    const auto r = rates.per_theme.find(t);
    row({std::string(to_string(t)), fmt(m.precision), fmt(m.recall), fmt(m.f1), std::to_string(m.tp),
         std::to_string(m.fp), std::to_string(m.fn), r == rates.per_theme.end() ? "-" : fmt(r->second, 2)});
  }
  row({"macro", fmt(rep.macro.precision), fmt(rep.macro.recall), fmt(rep.macro.f1), "", "", "", fmt(rates.total, 2)});
  row({"micro", fmt(rep.micro.precision), fmt(rep.micro.recall), fmt(rep.micro.f1), "", "", "", ""});
  return os.str();
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline std::vector<Sentence> read_input(const std::string& path) {
  if (path == "-") return parse_conllu(std::cin);
  std::ifstream in(path);
  if (!in) throw IoError("cannot read input " + path);
  return parse_conllu(in);
}

inline void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write output " + path);
  out << content;
  if (!out) throw IoError("write failure on " + path);
}

/// Exit status: 0 success, 1 input error, 2 configuration error.
/// `transport` is required only in fetch mode.
inline int run(const RunConfig& rc, Transport* transport = nullptr, std::ostream& log = std::cerr) {
  Resources res;
  try {
    rc.validate();
    res = load_resources(rc);
    if (rc.mode == Mode::fetch && !transport) throw ConfigError("fetch mode needs a transport");
  } catch (const Error& e) {
    log << "config error: " << e.what() << '\n';
    return 2;
  }
  for (const auto& w : res.warnings) log << "warning: " << w.message << '\n';

  try {
    std::vector<Sentence> sentences;
    if (rc.mode == Mode::fetch) {
      const char* env = std::getenv(kEndpointEnv);
      const std::string endpoint = env && *env ? std::string(env) : rc.input;
      ConcordanceQuery q{rc.query, rc.corpora, 0, rc.page_size};
      FetchOptions opts;
      opts.max_hits = rc.max_hits;
      opts.parallelism = std::max<std::size_t>(1, rc.jobs);
      opts.api_key = rc.api_key;
      FetchResult fetched;
      try {
        fetched = fetch_all(q, endpoint, *transport, opts);
      } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return 2;
      }
      if (fetched.skipped) log << "skipped " << fetched.skipped << " hit(s) without dependency annotation\n";
      for (const ConcordanceHit& h : fetched.hits) {
        try {
          sentences.push_back(hit_to_sentence(h));
        } catch (const StructureError& e) {
          log << "rejected hit: " << e.what() << '\n';
        }
      }
      if (!rc.save_conllu.empty()) {
        std::ostringstream os;
        write_conllu(os, sentences);
        write_output(rc.save_conllu, os.str());
      }
    } else {
      sentences = read_input(rc.input);
    }

    CoverageReport coverage;
    std::vector<Assessment> assessments = assess_all(sentences, res, rc.jobs, &coverage);
    if (coverage.unknown_pos_total() || coverage.unknown_deprel_total())
      log << "coverage: " << coverage.unknown_pos_total() << " token(s) with unmapped POS, "
          << coverage.unknown_deprel_total() << " with unmapped deprel (of " << coverage.tokens << ")\n";

    std::ostringstream out;
    switch (rc.mode) {
      case Mode::assess:
      case Mode::fetch: write_assessments(out, assessments, rc.format, rc.explain); break;
      case Mode::filter: write_assessments(out, filter(assessments), rc.format, rc.explain); break;
      case Mode::rank: write_assessments(out, rank(assessments), rc.format, rc.explain); break;
      case Mode::eval: {
        const EvalReport rep = evaluate(predictions_of(assessments), load_gold(rc.gold_path));
        const ThemeRates rates = theme_rates(assessments);
        if (rc.format == OutputFormat::tsv) {
          out << eval_table(rep, rates, true);
        } else {
          out << eval_record(rep, rates).dump() << '\n';
          log << eval_table(rep, rates, false);
        }
        break;
      }
    }
    write_output(rc.output, out.str());
  } catch (const Error& e) {
    log << "input error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace ctxdep
