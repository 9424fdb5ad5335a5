#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "ctxdep/app.hpp"
#include "ctxdep/http_transport.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Assess whether dependency-parsed sentences can be understood in isolation"};
  ctxdep::RunConfig rc;
  std::string mode = "assess";
  std::string format = "jsonl";

  app.add_option("--mode", mode, "assess | filter | rank | eval | fetch")
      ->check(CLI::IsMember({"assess", "filter", "rank", "eval", "fetch"}));
  app.add_option("--input", rc.input, "CoNLL-U file ('-' for stdin), or the endpoint URL in fetch mode");
  app.add_option("--profile", rc.profile, "tagset profile name (suc-mamba, ud) or path");
  app.add_option("--lexicons", rc.lexicon_dir, "lexicon directory");
  app.add_option("--config", rc.config_path, "detector config file");
  app.add_option("--gold", rc.gold_path, "gold theme file (eval mode)");
  app.add_option("--output", rc.output, "output path (default stdout)");
  app.add_option("--format", format, "jsonl | tsv")->check(CLI::IsMember({"jsonl", "tsv"}));
  app.add_flag("--explain", rc.explain, "include per-detection rationale");
  app.add_option("--jobs", rc.jobs, "worker threads (0 = all cores)");
  app.add_option("--data-dir", rc.data_dir, "directory holding bundled profiles and lexicons");

  auto* fetch = app.add_option_group("fetch", "concordance retrieval");
  fetch->add_option("--query", rc.query, "corpus query expression (CQP)");
  fetch->add_option("--corpora", rc.corpora, "corpus identifiers")->delimiter(',');
  fetch->add_option("--page-size", rc.page_size, "hits per request (max 1000)");
  fetch->add_option("--max-hits", rc.max_hits, "stop after this many hits");
  fetch->add_option("--api-key", rc.api_key, "optional service key");
  fetch->add_option("--save-conllu", rc.save_conllu, "also write the fetched sentences as CoNLL-U");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  rc.mode = *ctxdep::parse_mode(mode);
  rc.format = format == "tsv" ? ctxdep::OutputFormat::tsv : ctxdep::OutputFormat::jsonl;

  ctxdep::HttpTransport transport;
  return ctxdep::run(rc, &transport);
}
