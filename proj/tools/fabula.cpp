// Command line front end.
//
//   fabula learn --train F --test F --lexicon F [options]
//   fabula solve --program F --query ATOM
//   fabula space --decls F [--maxv N]
//   fabula gen   --task N --out F [--stories N --seed N] | --lexicon F
//
// Exit codes: 0 success, 2 learning failed on at least one question,
// 3 input or format error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fabula/fabula.hpp"

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include "json.hpp"
#endif

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

nlohmann::json report_json(const fabula::Report& r) {
  nlohmann::json j;
  j["train_questions"] = r.train_questions;
  j["train_correct"] = r.train_correct;
  j["test_questions"] = r.test_questions;
  j["test_correct"] = r.test_correct;
  j["accuracy"] = r.test_accuracy();
  j["learn_invocations"] = r.learn_invocations;
  j["learned_rules"] = r.learned_rules;
  j["hypothesis_score"] = r.hypothesis_score;
  j["failures"] = r.failures;
  j["warnings"] = r.warnings;
  j["timings"] = {{"train_seconds", r.train_seconds}, {"test_seconds", r.test_seconds}};
  j["space_cache"] = {{"lookups", r.space_stats.lookups},
                      {"memory_hits", r.space_stats.memory_hits},
                      {"disk_hits", r.space_stats.disk_hits},
                      {"builds", r.space_stats.builds},
                      {"hit_rate", r.space_stats.hit_rate()}};
  nlohmann::json outcomes = nlohmann::json::array();
  for (const auto& o : r.test_outcomes) {
    outcomes.push_back({{"question", o.question},
                        {"gold", o.gold},
                        {"predicted", o.predicted},
                        {"correct", o.correct}});
  }
  j["test_outcomes"] = outcomes;
  return j;
}

int cmd_learn(const std::string& train_path, const std::string& test_path,
              const std::string& lexicon_path, bool ec, const std::string& backend_name,
              const std::string& endpoint, int maxv, int max_penalty,
              const std::string& cache_dir, unsigned seed, const std::string& report_path) {
  fabula::Lexicon lex = fabula::Lexicon::load_file(lexicon_path);
  std::vector<fabula::Story> train = fabula::load_babi_file(train_path);
  std::vector<fabula::Story> test = fabula::load_babi_file(test_path);

  fabula::PipelineConfig cfg;
  cfg.ec = ec;
  if (maxv > 0) cfg.maxv = maxv;
  if (max_penalty > 0) cfg.max_penalty = max_penalty;
  cfg.seed = seed;

  std::unique_ptr<fabula::ParseCache> parse_cache;
  if (!cache_dir.empty()) {
    std::filesystem::create_directories(cache_dir);
    parse_cache = std::make_unique<fabula::ParseCache>(
        (std::filesystem::path(cache_dir) / "parses.tsv").string());
    cfg.space_cache_dir = (std::filesystem::path(cache_dir) / "spaces").string();
  }

  std::unique_ptr<fabula::ParserBackend> backend;
  if (backend_name == "deterministic") {
    backend = std::make_unique<fabula::DeterministicBackend>(lex);
  } else if (backend_name == "http") {
    if (endpoint.empty()) {
      std::cerr << "error: --backend http requires --endpoint\n";
      return 3;
    }
    fabula::HttpBackendConfig hc;
    hc.endpoint = endpoint;
    backend = std::make_unique<fabula::HttpBackend>(hc, lex);
  } else {
    std::cerr << "error: unknown backend '" << backend_name << "'\n";
    return 3;
  }

  fabula::Report report =
      fabula::run_task(train, test, lex, cfg, *backend, parse_cache.get());

  std::cout << "train: " << report.train_correct << "/" << report.train_questions
            << " correct before learning, " << report.learn_invocations
            << " learn invocation(s)\n";
  std::cout << "learned rules (score " << report.hypothesis_score << "):\n";
  for (const std::string& r : report.learned_rules) std::cout << "  " << r << "\n";
  std::cout << "test: " << report.test_correct << "/" << report.test_questions
            << " correct (accuracy " << report.test_accuracy() << ")\n";
  for (const std::string& w : report.warnings) std::cerr << "warning: " << w << "\n";
  for (const std::string& f : report.failures) std::cerr << "failure: " << f << "\n";

  if (!report_path.empty()) spill(report_path, report_json(report).dump(2) + "\n");

  for (const std::string& f : report.failures) {
    if (f.find("learning") != std::string::npos) return 2;
  }
  return 0;
}

int cmd_solve(const std::string& program_path, const std::string& query_text) {
  fabula::Program p = fabula::parse_program(slurp(program_path));
  fabula::Atom query = fabula::parse_atom(query_text);
  fabula::SolveResult res = fabula::answer_sets(p);
  std::cout << res.answer_sets.size() << " answer set(s)\n";
  for (const fabula::AtomSet& as : res.answer_sets) {
    std::cout << "{";
    bool first = true;
    for (const fabula::Atom& a : as) {
      std::cout << (first ? " " : ", ") << a.str();
      first = false;
    }
    std::cout << " }\n";
  }
  if (query.is_ground()) {
    size_t hits = 0;
    for (const fabula::AtomSet& as : res.answer_sets) {
      if (as.count(query)) ++hits;
    }
    const char* verdict = hits == 0                        ? "none"
                          : hits == res.answer_sets.size() ? "all"
                                                           : "some";
    std::cout << "query " << query.str() << ": " << verdict << "\n";
  } else {
    std::set<std::string> bindings;
    for (const fabula::AtomSet& as : res.answer_sets) {
      for (const fabula::Atom& a : as) {
        auto sub = fabula::unify(query, a);
        if (sub) {
          std::string row;
          for (const auto& [v, t] : *sub) {
            if (!row.empty()) row += ' ';
            row += v + "=" + t.str();
          }
          bindings.insert(row);
        }
      }
    }
    std::cout << "query " << query.str() << ": " << bindings.size() << " binding(s)\n";
    for (const std::string& b : bindings) std::cout << "  " << b << "\n";
  }
  return 0;
}

int cmd_space(const std::string& decls_path, int maxv) {
  fabula::ParsedBias bias = fabula::parse_bias(slurp(decls_path));
  if (maxv > 0) bias.config.maxv = maxv;
  fabula::HypothesisSpace space = fabula::enumerate_space(bias.decls, bias.config);
  std::cout << space.serialize();
  return 0;
}

int cmd_gen(int task, int stories, unsigned seed, const std::string& out_path,
            const std::string& lexicon_path) {
  if (!lexicon_path.empty()) {
    spill(lexicon_path, fabula::kDefaultLexicon);
    std::cout << "wrote " << lexicon_path << "\n";
  }
  if (!out_path.empty()) {
    spill(out_path, fabula::synthesize(task, stories, seed));
    std::cout << "wrote " << out_path << "\n";
  }
  if (lexicon_path.empty() && out_path.empty()) {
    std::cerr << "error: nothing to do, pass --out and/or --lexicon\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"story question answering via learned logic rules"};
  app.require_subcommand(1);

  std::string train_path, test_path, lexicon_path, endpoint, cache_dir, report_path;
  std::string backend_name = "deterministic";
  bool ec = false;
  int maxv = 0, max_penalty = 0;
  unsigned seed = 0;
  auto* learn = app.add_subcommand("learn", "train on one corpus and evaluate on another");
  learn->add_option("--train", train_path, "training story file")->required();
  learn->add_option("--test", test_path, "test story file")->required();
  learn->add_option("--lexicon", lexicon_path, "lexicon TSV")->required();
  learn->add_flag("--ec", ec, "use the event-calculus representation");
  learn->add_option("--backend", backend_name, "deterministic|http");
  learn->add_option("--endpoint", endpoint, "parser endpoint URL for --backend http");
  learn->add_option("--maxv", maxv, "max distinct variables per learned rule");
  learn->add_option("--max-penalty", max_penalty, "max hypothesis score searched");
  learn->add_option("--cache-dir", cache_dir, "directory for parse and space caches");
  learn->add_option("--seed", seed, "rng seed for distractor sampling");
  learn->add_option("--report", report_path, "write a JSON report here");

  std::string program_path, query_text;
  auto* solve = app.add_subcommand("solve", "compute answer sets and check a query");
  solve->add_option("--program", program_path, "logic program file")->required();
  solve->add_option("--query", query_text, "query atom, may contain variables")->required();

  std::string decls_path;
  int space_maxv = 0;
  auto* space = app.add_subcommand("space", "enumerate a hypothesis space from declarations");
  space->add_option("--decls", decls_path, "mode declaration file")->required();
  space->add_option("--maxv", space_maxv, "max distinct variables per rule");

  int gen_task = 1, gen_stories = 25;
  unsigned gen_seed = 7;
  std::string gen_out, gen_lexicon;
  auto* gen = app.add_subcommand("gen", "generate a synthetic story corpus");
  gen->add_option("--task", gen_task, "corpus shape: 1, 6, 9 or 10");
  gen->add_option("--stories", gen_stories, "number of stories");
  gen->add_option("--seed", gen_seed, "rng seed");
  gen->add_option("--out", gen_out, "story file to write");
  gen->add_option("--lexicon", gen_lexicon, "write the built-in lexicon here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (learn->parsed()) {
      return cmd_learn(train_path, test_path, lexicon_path, ec, backend_name, endpoint, maxv,
                       max_penalty, cache_dir, seed, report_path);
    }
    if (solve->parsed()) return cmd_solve(program_path, query_text);
    if (space->parsed()) return cmd_space(decls_path, space_maxv);
    if (gen->parsed()) return cmd_gen(gen_task, gen_stories, gen_seed, gen_out, gen_lexicon);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
