#pragma once

// Client for Korp-style concordance services. All I/O goes through the
// Transport interface so the client can run against canned responses.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <exception>
#include <future>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"  // nlohmann/json, vendored

#include "ctxdep/annotation.hpp"
#include "ctxdep/errors.hpp"
#include "ctxdep/profile.hpp"

namespace ctxdep {

inline constexpr std::size_t kDefaultMaxPageSize = 1000;

struct ConcordanceQuery {
  std::string query_expression;  // passed through opaquely as the cqp parameter
  std::vector<std::string> corpora;
  std::size_t page_start = 0;
  std::size_t page_size = 100;
};

struct RequestDescriptor {
  std::string method = "GET";
  std::string url;  // full URL including the encoded query string
  std::vector<std::pair<std::string, std::string>> params;

  bool operator==(const RequestDescriptor&) const = default;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// Performs one GET. Implementations must be safe to call from several
/// threads at once and report connection failures as TransportError.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse get(const RequestDescriptor& request) = 0;
};

struct HitToken {
  std::string form;
  std::string pos;
  std::string msd;
  std::string lemma;
  std::string dephead;
  std::string deprel;
  std::string ref;

  bool operator==(const HitToken&) const = default;
};

struct ConcordanceHit {
  std::vector<HitToken> tokens;
  std::string corpus;
  std::string position;

  bool operator==(const ConcordanceHit&) const = default;
};

struct PageResult {
  std::vector<ConcordanceHit> hits;
  std::size_t skipped = 0;  // hits without dependency annotation
  std::optional<std::size_t> total_hits;
};

namespace korp_detail {

inline std::string percent_encode(std::string_view s) {
  static constexpr char hex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    const bool unreserved = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' ||
                            c == '.' || c == '_' || c == '~';
    if (unreserved) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 0x0F];
    }
  }
  return out;
}

/// Checks for scheme://host and returns the endpoint without a trailing slash.
inline std::string checked_endpoint(std::string_view endpoint) {
  std::string_view rest;
  if (endpoint.rfind("http://", 0) == 0) rest = endpoint.substr(7);
  else if (endpoint.rfind("https://", 0) == 0) rest = endpoint.substr(8);
  else throw ConfigError("endpoint must be an absolute http(s) URL: '" + std::string(endpoint) + "'");
  if (rest.empty() || rest.front() == '/' || rest.find_first_of("?# ") != std::string_view::npos)
    throw ConfigError("endpoint has no host or contains a query: '" + std::string(endpoint) + "'");
  std::string out(endpoint);
  while (out.back() == '/') out.pop_back();
  return out;
}

inline std::string string_field(const nlohmann::json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
  throw DecodeError(std::string("field '") + key + "' is not a string");
}

inline bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace korp_detail

/// Deterministic GET request for one page (start/end are inclusive hit offsets).
inline RequestDescriptor build_request(const ConcordanceQuery& query, std::string_view endpoint,
                                       std::size_t max_page_size = kDefaultMaxPageSize,
                                       const std::string& api_key = {}) {
  const std::string base = korp_detail::checked_endpoint(endpoint);
  if (query.page_size == 0) throw ConfigError("page size must be positive");
  if (query.page_size > max_page_size)
    throw ConfigError("page size " + std::to_string(query.page_size) + " exceeds maximum " +
                      std::to_string(max_page_size));
  if (query.corpora.empty()) throw ConfigError("at least one corpus is required");

  std::string corpora;
  for (const auto& c : query.corpora) corpora += (corpora.empty() ? "" : ",") + c;

  RequestDescriptor r;
  r.params = {
      {"corpus", corpora},
      {"cqp", query.query_expression},
      {"start", std::to_string(query.page_start)},
      {"end", std::to_string(query.page_start + query.page_size - 1)},
      {"default_context", "1 sentence"},
      {"show", "pos,msd,lemma,dephead,deprel,ref"},
  };
  if (!api_key.empty()) r.params.emplace_back("api_key", api_key);
  r.url = base + "/query";
  char sep = '?';
  for (const auto& [k, v] : r.params) {
    r.url += sep;
    r.url += korp_detail::percent_encode(k) + "=" + korp_detail::percent_encode(v);
    sep = '&';
  }
  return r;
}

/// Decodes a concordance response body (Korp `kwic` shape).
inline PageResult parse_page(std::string_view body) {
  using korp_detail::string_field;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw DecodeError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw DecodeError("response is not a JSON object");
  if (doc.contains("ERROR")) throw DecodeError("service reported an error: " + doc["ERROR"].dump());
  PageResult page;
  if (auto it = doc.find("hits"); it != doc.end() && it->is_number_unsigned())
    page.total_hits = it->get<std::size_t>();
  const auto kwic = doc.find("kwic");
  if (kwic == doc.end()) throw DecodeError("response has no 'kwic' array");
  if (!kwic->is_array()) throw DecodeError("'kwic' is not an array");

  for (const auto& h : *kwic) {
    if (!h.is_object()) throw DecodeError("hit is not an object");
    ConcordanceHit hit;
    hit.corpus = string_field(h, "corpus");
    if (auto m = h.find("match"); m != h.end() && m->is_object()) hit.position = string_field(*m, "position");
    const auto toks = h.find("tokens");
    if (toks == h.end() || !toks->is_array()) throw DecodeError("hit has no 'tokens' array");
    bool annotated = !toks->empty();
    for (const auto& t : *toks) {
      if (!t.is_object()) throw DecodeError("token is not an object");
      if (!t.contains("deprel") || !t.contains("dephead") || t["deprel"].is_null()) annotated = false;
      hit.tokens.push_back({string_field(t, "word"), string_field(t, "pos"), string_field(t, "msd"),
                            string_field(t, "lemma"), string_field(t, "dephead"), string_field(t, "deprel"),
                            string_field(t, "ref")});
    }
    if (!annotated) {
      ++page.skipped;
      continue;
    }
    page.hits.push_back(std::move(hit));
  }
  return page;
}

/// Fetches and decodes one page.
inline PageResult fetch_page(const RequestDescriptor& request, Transport& transport) {
  const HttpResponse resp = transport.get(request);
  if (resp.status < 200 || resp.status >= 300) throw ServiceError(resp.status);
  return parse_page(resp.body);
}

/// Converts a hit to the sentence model. Mapping:
///   index <- ref (or 1-based order), form <- word, xpos <- pos,
///   lemma <- first entry of Korp's "|a|b|" set, feats <- msd without its
///   leading POS segment, '.' joined as '|', head <- dephead ("" = 0).
inline Sentence hit_to_sentence(const ConcordanceHit& hit) {
  Sentence s;
  s.id = hit.corpus + ":" + hit.position;
  s.source = Source{hit.corpus, hit.position};
  auto or_blank = [](std::string v) { return v.empty() ? std::string("_") : v; };
  for (std::size_t i = 0; i < hit.tokens.size(); ++i) {
    const HitToken& ht = hit.tokens[i];
    Token t;
    if (ht.ref.empty()) t.index = static_cast<int>(i) + 1;
    else if (!korp_detail::parse_int(ht.ref, t.index)) throw StructureError(s.id, "non-numeric ref '" + ht.ref + "'");
    t.form = ht.form;

    std::string lemma = ht.lemma;
    if (!lemma.empty() && lemma.front() == '|') {
      const auto end = lemma.find('|', 1);
      lemma = end == std::string::npos ? lemma.substr(1) : lemma.substr(1, end - 1);
    }
    t.lemma = or_blank(lemma);
    t.xpos = or_blank(ht.pos);

    std::string_view msd = ht.msd;
    if (const auto dot = msd.find('.'); dot == std::string_view::npos) {
      msd = msd == ht.pos ? std::string_view{} : msd;
    } else if (msd.substr(0, dot) == ht.pos) {
      msd.remove_prefix(dot + 1);
    }
    std::string feats(msd);
    std::replace(feats.begin(), feats.end(), '.', '|');
    t.feats = or_blank(feats);

    if (ht.dephead.empty() || ht.dephead == "_") t.head = 0;
    else if (!korp_detail::parse_int(ht.dephead, t.head) || t.head < 0)
      throw StructureError(s.id, "non-numeric dephead '" + ht.dephead + "'");
    t.deprel = or_blank(ht.deprel);
    s.tokens.push_back(std::move(t));
  }
  check_structure(s);
  return s;
}

struct RejectedHit {
  std::string id;
  std::string reason;
};

struct ConvertedHits {
  std::vector<AnnotatedSentence> sentences;
  std::vector<RejectedHit> rejected;
};

/// Hits failing structural validation are reported, not fatal.
inline ConvertedHits to_sentences(const std::vector<ConcordanceHit>& hits, const TagsetProfile& profile,
                                  CoverageReport* coverage = nullptr) {
  ConvertedHits out;
  CoverageReport local;
  for (const ConcordanceHit& h : hits) {
    try {
      out.sentences.push_back(apply_profile(hit_to_sentence(h), profile, coverage ? *coverage : local));
    } catch (const StructureError& e) {
      out.rejected.push_back({h.corpus + ":" + h.position, e.what()});
    }
  }
  return out;
}

namespace korp_detail {

/// Numeric-aware position order: integers compare by value, before non-integers.
inline bool position_less(const std::string& a, const std::string& b) {
  long long x = 0, y = 0;
  const auto px = std::from_chars(a.data(), a.data() + a.size(), x);
  const auto py = std::from_chars(b.data(), b.data() + b.size(), y);
  const bool nx = px.ec == std::errc() && px.ptr == a.data() + a.size();
  const bool ny = py.ec == std::errc() && py.ptr == b.data() + b.size();
  if (nx && ny) return x < y;
  if (nx != ny) return nx;
  return a < b;
}

}  // namespace korp_detail

struct FetchOptions {
  std::size_t max_hits = 1000;
  std::size_t parallelism = 1;
  std::size_t max_page_size = kDefaultMaxPageSize;
  std::string api_key;
};

struct FetchResult {
  std::vector<ConcordanceHit> hits;  // ordered by (corpus, position)
  std::size_t skipped = 0;
  std::optional<std::size_t> total_hits;
  std::size_t pages = 0;
};

/// Pages through a query from `query.page_start`. The first page reports the
/// total hit count; the remaining pages are fetched up to `parallelism` at a time.
inline FetchResult fetch_all(const ConcordanceQuery& query, std::string_view endpoint, Transport& transport,
                             const FetchOptions& options = {}) {
  FetchResult out;
  auto absorb = [&](PageResult&& p) {
    out.skipped += p.skipped;
    ++out.pages;
    for (auto& h : p.hits) out.hits.push_back(std::move(h));
  };
  if (options.max_hits == 0) return out;

  ConcordanceQuery first = query;
  first.page_size = std::min(query.page_size, options.max_hits);
  PageResult p0 = fetch_page(build_request(first, endpoint, options.max_page_size, options.api_key), transport);
  out.total_hits = p0.total_hits;
  absorb(std::move(p0));

  const std::size_t total = out.total_hits.value_or(0);
  const std::size_t remaining = total > query.page_start ? total - query.page_start : 0;
  const std::size_t wanted_end = query.page_start + std::min(options.max_hits, remaining);
  std::vector<RequestDescriptor> pending;
  for (std::size_t start = query.page_start + first.page_size; start < wanted_end; start += query.page_size) {
    ConcordanceQuery q = query;
    q.page_start = start;
    q.page_size = std::min(query.page_size, wanted_end - start);
    pending.push_back(build_request(q, endpoint, options.max_page_size, options.api_key));
  }

  const std::size_t width = std::max<std::size_t>(1, options.parallelism);
  for (std::size_t batch = 0; batch < pending.size(); batch += width) {
    std::vector<std::future<PageResult>> futures;
    for (std::size_t i = batch; i < std::min(pending.size(), batch + width); ++i)
      futures.push_back(std::async(std::launch::async, [&, i] { return fetch_page(pending[i], transport); }));
    // get() in order; a failure propagates after the batch drains.
    std::exception_ptr failure;
    for (auto& f : futures) {
      try {
        absorb(f.get());
      } catch (...) {
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  std::stable_sort(out.hits.begin(), out.hits.end(), [](const ConcordanceHit& a, const ConcordanceHit& b) {
    if (a.corpus != b.corpus) return a.corpus < b.corpus;
    return korp_detail::position_less(a.position, b.position);
  });
  return out;
}

}  // namespace ctxdep
